#include "csaug/metrics.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "csaug/kernels.hpp"

namespace csaug {

double dsc(const LabelMask& pred, const LabelMask& truth, Label cls) {
    if (pred.shape() != truth.shape()) {
        throw std::invalid_argument("mask shapes differ");
    }
    const kernels::OverlapCounts c = kernels::label_overlap(pred.data(), truth.data(), cls);
    if (c.pred + c.truth == 0) {
        return 1.0;
    }
    return 2.0 * static_cast<double>(c.both) / static_cast<double>(c.pred + c.truth);
}

DiceReport average_dsc(const LabelMask& pred, const LabelMask& truth,
                       std::span<const Label> classes) {
    if (classes.empty()) {
        throw std::invalid_argument("class list is empty");
    }
    DiceReport report;
    double sum = 0.0;
    for (const Label cls : classes) {
        if (cls == 0) {
            throw std::invalid_argument("class list must exclude the background class 0");
        }
        const double d = dsc(pred, truth, cls);
        report.per_class.emplace_back(cls, d);
        sum += d;
    }
    report.average = sum / static_cast<double>(classes.size());
    return report;
}

namespace detail {

// Continued fraction for the incomplete beta function (modified Lentz).
namespace {
constexpr int kIbetaMaxIter = 300;
constexpr double kIbetaEps = 3e-16;
constexpr double kIbetaFpMin = 1e-300;

double ibeta_cf(double a, double b, double x) {
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kIbetaFpMin) d = kIbetaFpMin;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kIbetaMaxIter; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kIbetaFpMin) d = kIbetaFpMin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kIbetaFpMin) c = kIbetaFpMin;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kIbetaFpMin) d = kIbetaFpMin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kIbetaFpMin) c = kIbetaFpMin;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kIbetaEps) {
            return h;
        }
    }
    return h;  // converged to roundoff for all realistic (a, b)
}
}  // namespace

double regularized_ibeta(double a, double b, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double ln_bt = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                         a * std::log(x) + b * std::log1p(-x);
    const double bt = std::exp(ln_bt);
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return bt * ibeta_cf(a, b, x) / a;
    }
    return 1.0 - bt * ibeta_cf(b, a, 1.0 - x) / b;
}

}  // namespace detail

WelchResult welch_t(std::span<const double> a, std::span<const double> b) {
    const std::size_t na = a.size();
    const std::size_t nb = b.size();
    if (na < 2 || nb < 2) {
        throw std::invalid_argument("welch_t needs at least two observations per sample");
    }
    double mean_a = 0.0, mean_b = 0.0;
    for (const double x : a) mean_a += x;
    for (const double x : b) mean_b += x;
    mean_a /= static_cast<double>(na);
    mean_b /= static_cast<double>(nb);

    double ss_a = 0.0, ss_b = 0.0;
    for (const double x : a) ss_a += (x - mean_a) * (x - mean_a);
    for (const double x : b) ss_b += (x - mean_b) * (x - mean_b);
    const double var_a = ss_a / static_cast<double>(na - 1);
    const double var_b = ss_b / static_cast<double>(nb - 1);
    if (var_a == 0.0 && var_b == 0.0) {
        throw std::invalid_argument("welch_t is undefined when both samples have zero variance");
    }

    const double sa = var_a / static_cast<double>(na);
    const double sb = var_b / static_cast<double>(nb);
    WelchResult r;
    r.t = (mean_a - mean_b) / std::sqrt(sa + sb);
    r.dof = (sa + sb) * (sa + sb) /
            (sa * sa / static_cast<double>(na - 1) + sb * sb / static_cast<double>(nb - 1));
    r.p = detail::regularized_ibeta(r.dof / 2.0, 0.5, r.dof / (r.dof + r.t * r.t));
    return r;
}

}  // namespace csaug
