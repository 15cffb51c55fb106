#pragma once

#include <span>
#include <utility>
#include <vector>

#include "csaug/volume.hpp"

namespace csaug {

/// Dice similarity 2|A and B| / (|A| + |B|) for one class; 1.0 when both sets
/// are empty (correctly predicted absence).
double dsc(const LabelMask& pred, const LabelMask& truth, Label cls);

struct DiceReport {
    std::vector<std::pair<Label, double>> per_class;
    double average = 0.0;  // unweighted mean over the listed classes
};

DiceReport average_dsc(const LabelMask& pred, const LabelMask& truth,
                       std::span<const Label> classes);

struct WelchResult {
    double t = 0.0;
    double dof = 0.0;  // Welch-Satterthwaite degrees of freedom
    double p = 0.0;    // two-sided
};

// Two-sample t-test with unequal variances. The p-value is the Student-t tail
// mass 2*P(|T_dof| >= |t|) = I_x(dof/2, 1/2) at x = dof/(dof + t^2), evaluated
// with the continued-fraction expansion of the regularized incomplete beta
// function (absolute accuracy better than 1e-8).
WelchResult welch_t(std::span<const double> a, std::span<const double> b);

namespace detail {
/// Regularized incomplete beta I_x(a, b); exposed for the metrics unit tests.
double regularized_ibeta(double a, double b, double x);
}  // namespace detail

}  // namespace csaug
