#include <atomic>
#include <limits>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "csaug/augplan.hpp"
#include "csaug/cutsplice.hpp"
#include "csaug/histmatch.hpp"
#include "csaug/metrics.hpp"
#include "csaug/storage.hpp"
#include "csaug/synth.hpp"
#include "csaug/volume.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

namespace fs = std::filesystem;
using namespace csaug;

constexpr int kExitOk = 0;
constexpr int kExitDataError = 1;
constexpr int kExitUsageError = 2;

std::vector<std::size_t> parse_count_list(const std::string& flag, const std::string& text,
                                          char sep, std::size_t max_entries) {
    std::vector<std::size_t> values;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, sep)) {
        std::size_t pos = 0;
        unsigned long v = 0;
        try {
            v = std::stoul(item, &pos);
        } catch (const std::exception&) {
            pos = item.size() + 1;
        }
        if (pos != item.size()) {
            throw CLI::ValidationError(flag, "not a list of counts: " + text);
        }
        values.push_back(v);
    }
    if (values.empty() || values.size() > max_entries) {
        throw CLI::ValidationError(flag, "expected 1.." + std::to_string(max_entries) +
                                             " counts, got '" + text + "'");
    }
    return values;
}

std::vector<std::size_t> parse_cuts(const std::string& text) {
    return parse_count_list("--cuts", text, ',', 3);
}

SpliceMode parse_mode(const std::string& text) {
    if (text == "nors") return SpliceMode::normal;
    if (text == "syms") return SpliceMode::symmetric;
    throw CLI::ValidationError("--mode", "must be 'nors' or 'syms'");
}

std::string pad_index(std::uint64_t index, std::size_t width) {
    std::string s = std::to_string(index);
    return s.size() >= width ? s : std::string(width - s.size(), '0') + s;
}

struct PlanArgs {
    std::size_t n = 0;
    std::string cuts;
    std::string mode = "nors";
};

int cmd_plan(const PlanArgs& args) {
    const auto cuts = parse_cuts(args.cuts);
    const SpliceMode mode = parse_mode(args.mode);
    std::size_t k = 1;
    for (const std::size_t c : cuts) {
        k *= c + 1;
    }
    const std::size_t radix = mode == SpliceMode::normal ? args.n : 2 * args.n;
    const BigCount total = augmented_size(args.n, k, mode);
    const BigCount fresh = total - args.n;
    std::cout << "command=plan n=" << args.n << " k=" << k << " mode=" << args.mode
              << " radix=" << radix << " total=" << total.str() << " new=" << fresh.str() << "\n";
    return kExitOk;
}

struct AugmentArgs {
    std::string manifest;
    std::string cuts;
    std::string mode = "nors";
    std::optional<std::size_t> sym_dim;
    std::string out;
    std::size_t count = 0;
    bool all = false;
    std::uint64_t seed = 0;
    bool exclude_identity = false;
    bool skip_pass1 = false;
    bool skip_pass2 = false;
    std::optional<int> jobs;
};

int cmd_augment(const AugmentArgs& args) {
#ifdef _OPENMP
    if (args.jobs.has_value()) {
        omp_set_num_threads(*args.jobs);
    }
#endif
    LoadedDataset ds = load_dataset(args.manifest);
    const std::size_t n = ds.images.size();
    if (n == 0) {
        std::cerr << "csaug: dataset is empty\n";
        return kExitDataError;
    }

    const SpliceMode mode = parse_mode(args.mode);
    std::optional<std::size_t> sym_dim = args.sym_dim;
    if (!sym_dim.has_value()) {
        sym_dim = ds.manifest.sym_dim;
    }
    if (mode == SpliceMode::symmetric && !sym_dim.has_value()) {
        throw CLI::ValidationError("--sym-dim",
                                   "symmetric splicing needs a symmetry dimension "
                                   "(flag or manifest sym_dim)");
    }

    CutPlan plan(ds.manifest.shape, parse_cuts(args.cuts));
    AugSpace space(n, plan, mode,
                   mode == SpliceMode::symmetric ? sym_dim : std::nullopt);

    if (!args.skip_pass1) {
        std::cerr << "csaug: normalizing " << n << " images to the dataset average\n";
        ds.images = normalize_dataset(ds.images);
    }

    std::vector<std::uint64_t> indices;
    if (args.all) {
        constexpr std::uint64_t kEnumerationCap = 50'000'000;
        const auto total = space.addressable_total();
        if (!total.has_value() || *total > kEnumerationCap) {
            std::cerr << "csaug: space of size " << space.total().str()
                      << " is too large to enumerate; use --count to sample\n";
            return kExitDataError;
        }
        indices.resize(static_cast<std::size_t>(*total));
        for (std::uint64_t i = 0; i < *total; ++i) {
            indices[static_cast<std::size_t>(i)] = i;
        }
    } else {
        indices = sample_indices(space, args.count, args.seed, !args.exclude_identity);
    }

    const fs::path out_dir(args.out);
    fs::create_directories(out_dir);
    const fs::path marker = out_dir / "_INCOMPLETE";
    { std::ofstream touch(marker); }

    const std::string tag = args.mode;
    std::size_t width = space.total().str().size();
    if (width < 4) {
        width = 4;
    }
    const GenerateOptions opts{!args.skip_pass2};
    const DatasetView view{ds.images, ds.masks};

    std::atomic<std::size_t> written{0};
    std::exception_ptr error;
#pragma omp parallel for schedule(dynamic)
    for (std::size_t i = 0; i < indices.size(); ++i) {
        if (error) {
            continue;
        }
        try {
            const auto [image, mask] = generate(view, space, indices[i], opts);
            const std::string name = tag + "_" + pad_index(indices[i], width);
            write_pair(image, mask, out_dir, name, ds.manifest.spacing);
            ++written;
        } catch (...) {
#pragma omp critical(csaug_augment_error)
            if (!error) {
                error = std::current_exception();
            }
        }
    }
    if (error) {
        std::rethrow_exception(error);
    }

    fs::remove(marker);
    std::cout << "command=augment mode=" << args.mode << " k=" << space.slot_count()
              << " total=" << space.total().str() << " written=" << written.load()
              << " seed=" << args.seed << " out=" << out_dir.string() << "\n";
    return kExitOk;
}

struct DscArgs {
    std::string pred;
    std::string truth;
    std::string classes;
};

int cmd_dsc(const DscArgs& args) {
    const LabelMask pred = read_mask_auto(args.pred);
    const LabelMask truth = read_mask_auto(args.truth);

    std::vector<Label> classes;
    if (!args.classes.empty()) {
        for (const std::size_t v : parse_count_list("--classes", args.classes, ',', 256)) {
            classes.push_back(static_cast<Label>(v));
        }
    } else {
        // Default: every non-background label present in either mask.
        std::vector<bool> present(65536, false);
        for (const Label v : pred.data()) present[v] = true;
        for (const Label v : truth.data()) present[v] = true;
        for (std::size_t v = 1; v < present.size(); ++v) {
            if (present[v]) {
                classes.push_back(static_cast<Label>(v));
            }
        }
        if (classes.empty()) {
            classes.push_back(1);
        }
    }

    const DiceReport report = average_dsc(pred, truth, classes);
    std::ostringstream out;
    out << "command=dsc";
    out.setf(std::ios::fixed);
    out.precision(4);
    for (const auto& [cls, d] : report.per_class) {
        out << " class" << cls << "=" << d;
    }
    out << " average=" << report.average;
    std::cout << out.str() << "\n";
    return kExitOk;
}

struct SynthArgs {
    std::string kind = "blob";
    std::size_t count = 1;
    std::string shape;
    std::uint32_t levels = 256;
    std::uint32_t classes = 2;
    std::size_t sym_dim = 0;
    std::uint64_t seed = 0;
    std::string out;
};

int cmd_synth(const SynthArgs& args) {
    SynthConfig config;
    if (args.kind == "blob") {
        config.kind = SynthKind::blob;
    } else if (args.kind == "sym") {
        config.kind = SynthKind::sym;
    } else {
        throw CLI::ValidationError("--kind", "must be 'blob' or 'sym'");
    }
    config.count = args.count;
    config.shape = parse_count_list("--shape", args.shape, 'x', 3);
    if (config.shape.size() < 2) {
        throw CLI::ValidationError("--shape", "expected HxW or HxWxD, e.g. 64x64");
    }
    config.levels = args.levels;
    config.classes = args.classes;
    config.sym_dim = args.sym_dim;
    config.seed = args.seed;

    const SynthDataset ds = synth_dataset(config);

    const fs::path out_dir(args.out);
    fs::create_directories(out_dir);
    DatasetManifest manifest;
    manifest.levels = config.levels;
    manifest.shape = config.shape;
    manifest.classes = config.classes;
    manifest.sym_dim = ds.sym_dim;
    const std::size_t width = std::to_string(config.count).size();
    for (std::size_t j = 0; j < config.count; ++j) {
        const std::string name = "im" + pad_index(j, width);
        const PairPaths paths = write_pair(ds.images[j], ds.masks[j], out_dir, name);
        ManifestEntry entry;
        entry.id = j;
        entry.image_path = paths.image.filename().string();
        entry.mask_path = paths.mask.filename().string();
        manifest.entries.push_back(std::move(entry));
    }
    const fs::path manifest_path = out_dir / "manifest.txt";
    write_manifest(manifest_path, manifest);
    std::cout << "command=synth kind=" << args.kind << " count=" << config.count
              << " seed=" << args.seed << " manifest=" << manifest_path.string() << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cutting-splicing augmentation for 2D/3D grayscale volumes with paired masks"};
    app.require_subcommand(1);

    PlanArgs plan_args;
    auto* plan = app.add_subcommand("plan", "Report the size of an augmentation space");
    plan->add_option("-N,--dataset-size", plan_args.n, "original dataset size")
        ->required()
        ->check(CLI::Range(std::size_t{1}, std::numeric_limits<std::size_t>::max()));
    plan->add_option("--cuts", plan_args.cuts, "cuts per dimension, e.g. 1,0")->required();
    plan->add_option("--mode", plan_args.mode, "nors|syms");

    AugmentArgs aug_args;
    auto* augment = app.add_subcommand("augment", "Generate augmented image/mask pairs");
    augment->add_option("--manifest", aug_args.manifest, "dataset manifest path")->required();
    augment->add_option("--cuts", aug_args.cuts, "cuts per dimension, e.g. 1,0")->required();
    augment->add_option("--mode", aug_args.mode, "nors|syms");
    augment->add_option("--sym-dim", aug_args.sym_dim, "symmetry dimension (overrides manifest)");
    augment->add_option("--out", aug_args.out, "output directory")->required();
    augment->add_option("--count", aug_args.count, "number of sampled indices");
    augment->add_flag("--all", aug_args.all, "enumerate the whole space instead of sampling");
    augment->add_option("--seed", aug_args.seed, "sampling seed");
    augment->add_flag("--exclude-identity", aug_args.exclude_identity,
                      "never sample indices that reproduce an original");
    augment->add_flag("--skip-pass1", aug_args.skip_pass1, "skip dataset-wide normalization");
    augment->add_flag("--skip-pass2", aug_args.skip_pass2, "skip per-pair group matching");
    augment->add_option("--jobs", aug_args.jobs, "worker thread count");

    DscArgs dsc_args;
    auto* dsc_cmd = app.add_subcommand("dsc", "Dice similarity between two masks");
    dsc_cmd->add_option("--pred", dsc_args.pred, "predicted mask path")->required();
    dsc_cmd->add_option("--truth", dsc_args.truth, "ground-truth mask path")->required();
    dsc_cmd->add_option("--classes", dsc_args.classes, "comma-separated class ids (default: all)");

    SynthArgs synth_args;
    auto* synth = app.add_subcommand("synth", "Write a synthetic dataset with a manifest");
    synth->add_option("--kind", synth_args.kind, "blob|sym");
    synth->add_option("-n,--count", synth_args.count, "number of pairs")->required();
    synth->add_option("--shape", synth_args.shape, "extents, e.g. 64x64 or 64x64x24")->required();
    synth->add_option("--levels", synth_args.levels, "intensity levels (power of two)");
    synth->add_option("--classes", synth_args.classes, "mask class count");
    synth->add_option("--sym-dim", synth_args.sym_dim, "mirror dimension for kind=sym");
    synth->add_option("--seed", synth_args.seed, "fixture seed");
    synth->add_option("--out", synth_args.out, "output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsageError;
    }

    try {
        if (plan->parsed()) return cmd_plan(plan_args);
        if (augment->parsed()) return cmd_augment(aug_args);
        if (dsc_cmd->parsed()) return cmd_dsc(dsc_args);
        if (synth->parsed()) return cmd_synth(synth_args);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "csaug: " << e.what() << "\n";
        return kExitUsageError;
    } catch (const std::exception& e) {
        std::cerr << "csaug: " << e.what() << "\n";
        return kExitDataError;
    }
    return kExitUsageError;
}
