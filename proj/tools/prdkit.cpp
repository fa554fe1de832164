// prdkit command-line tool: precision/recall curve estimation between two
// embedding sets, published extreme metrics, curve summaries, Monte-Carlo
// ground truth, experiment suites, SVG plots and surrogate data generation.

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>

#include "prdkit/curve_analysis.hpp"
#include "prdkit/embeddings_io.hpp"
#include "prdkit/experiments.hpp"
#include "prdkit/extreme_metrics.hpp"
#include "prdkit/ground_truth.hpp"
#include "prdkit/pipeline.hpp"
#include "prdkit/svg_plot.hpp"

namespace {

/// Bad flag combinations detected after CLI11 parsing; mapped to exit 2.
struct FlagError : std::runtime_error {
    explicit FlagError(const std::string& what) : std::runtime_error(what) {}
};

std::size_t parse_k_flag(const std::string& text) {
    if (text == "sqrt") return 0;
    try {
        const long v = std::stol(text);
        if (v >= 1) return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
    }
    throw FlagError("--k must be 'sqrt' or a positive integer, got '" + text + "'");
}

double parse_sigma_flag(const std::string& text) {
    if (text == "auto") return 0.0;
    try {
        const double v = std::stod(text);
        if (v > 0.0) return v;
    } catch (const std::exception&) {
    }
    throw FlagError("--sigma must be 'auto' or a positive real, got '" + text + "'");
}

prdkit::SplitSpec parse_split_flag(const std::string& text, std::uint64_t seed) {
    prdkit::SplitSpec spec;
    spec.seed = seed;
    if (text == "none") {
        spec.enabled = false;
        return spec;
    }
    try {
        const double v = std::stod(text);
        if (v > 0.0 && v < 1.0) {
            spec.enabled = true;
            spec.fraction = v;
            return spec;
        }
    } catch (const std::exception&) {
    }
    throw FlagError("--split must be 'none' or a fraction in (0,1), got '" + text + "'");
}

std::string file_stem(const std::string& path) {
    return std::filesystem::path(path).stem().string();
}

struct PrArgs {
    std::string real, fake, method = "knn", k = "sqrt", sigma = "auto", split = "0.5", out;
    std::size_t lambdas = 101;
    std::uint64_t seed = 0;
};

struct ExtremesArgs {
    std::string real, fake, method = "ipr", k = "sqrt", split = "none", out;
    std::size_t kprime = 3;
    std::string radius = "auto";
    std::uint64_t seed = 0;
};

struct SummarizeArgs {
    std::string curve, out;
    double eps = 0.05;
    double b = 8.0;
};

struct GtArgs {
    std::string p, q, out;
    std::size_t n_gt = 100000;
    std::size_t lambdas = 101;
    std::uint64_t seed = 0;
};

struct ExpArgs {
    std::string suite, config, out_dir = "run";
};

struct PlotArgs {
    std::vector<std::string> curves;
    std::string out;
};

struct SurrogateArgs {
    std::string out, spectrum = "decay:0.92";
    std::size_t n = 5000, d = 64;
    double psi = 1.0;
    std::uint64_t seed = 0;
};

int cmd_pr(const PrArgs& a) {
    using namespace prdkit;
    const FamilyConfig family{method_from_name(a.method), parse_k_flag(a.k), parse_sigma_flag(a.sigma)};
    PipelineConfig cfg;
    cfg.family = family;
    cfg.split = parse_split_flag(a.split, a.seed);
    if (a.lambdas == 0) throw FlagError("--lambdas must be >= 1");
    cfg.grid = make_lambda_grid(a.lambdas);
    const SampleSet x = read_embeddings(a.real);
    const SampleSet y = read_embeddings(a.fake);
    SampleSet xl = x, yl = y;
    xl.label = file_stem(a.real);
    yl.label = file_stem(a.fake);
    const PRCurve curve = estimate_pr_curve(xl, yl, cfg);
    write_curve_csv(curve, a.out);
    write_curve_meta(curve, a.out);
    return 0;
}

int cmd_extremes(const ExtremesArgs& a) {
    using namespace prdkit;
    const ExtremeMethod method = extreme_method_from_name(a.method);
    ExtremeParams params;
    params.k = parse_k_flag(a.k);
    params.kprime = a.kprime;
    if (a.kprime == 0) throw FlagError("--kprime must be >= 1");
    params.radius = a.radius == "auto" ? 0.0 : [&] {
        try {
            const double v = std::stod(a.radius);
            if (v > 0.0) return v;
        } catch (const std::exception&) {
        }
        throw FlagError("--radius must be 'auto' or a positive real, got '" + a.radius + "'");
    }();
    std::optional<SplitSpec> split;
    const SplitSpec spec = parse_split_flag(a.split, a.seed);
    if (spec.enabled) split = spec;
    const SampleSet x = read_embeddings(a.real);
    const SampleSet y = read_embeddings(a.fake);
    const ExtremeReport report = compute_extremes(x, y, method, params, split);
    nlohmann::json j;
    j["method"] = report.method;
    j["alpha_inf"] = report.alpha_inf;
    j["beta_0"] = report.beta_0;
    j["params"] = report.params;
    if (a.out.empty()) {
        std::cout << j.dump(2) << '\n';
    } else {
        std::ofstream out(a.out);
        out << j.dump(2) << '\n';
    }
    return 0;
}

int cmd_summarize(const SummarizeArgs& a) {
    using namespace prdkit;
    if (!(a.eps > 0.0 && a.eps < 1.0)) throw FlagError("--eps must lie in (0,1)");
    if (!(a.b > 0.0)) throw FlagError("--b must be > 0");
    const PRCurve curve = read_curve_csv(a.curve);
    const nlohmann::json j = summary_to_json(summarize(curve, a.eps, a.b));
    if (a.out.empty()) {
        std::cout << j.dump(2) << '\n';
    } else {
        std::ofstream out(a.out);
        out << j.dump(2) << '\n';
    }
    return 0;
}

int cmd_iou(const std::string& a, const std::string& b) {
    using namespace prdkit;
    const Envelope ea = build_envelope(read_curve_csv(a));
    const Envelope eb = build_envelope(read_curve_csv(b));
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6f", iou(ea, eb));
    std::cout << buf << '\n';
    return 0;
}

int cmd_gt(const GtArgs& a) {
    using namespace prdkit;
    if (a.n_gt < 2) throw FlagError("--n-gt must be >= 2");
    if (a.lambdas == 0) throw FlagError("--lambdas must be >= 1");
    GtConfig cfg;
    cfg.n_gt = a.n_gt;
    cfg.grid = make_lambda_grid(a.lambdas);
    cfg.seed = a.seed;
    const PRCurve curve = gt_curve(load_model(a.p), load_model(a.q), cfg);
    write_curve_csv(curve, a.out);
    write_curve_meta(curve, a.out);
    return 0;
}

int cmd_exp(const ExpArgs& a) {
    using namespace prdkit;
    ExperimentConfig cfg = load_experiment_config(a.config);
    if (!a.suite.empty()) cfg.suite = a.suite;
    run_suite(cfg, a.out_dir);
    std::cout << "suite '" << cfg.suite << "' written to " << a.out_dir << '\n';
    return 0;
}

int cmd_plot(const PlotArgs& a) {
    using namespace prdkit;
    std::vector<std::pair<std::string, PRCurve>> curves;
    for (const auto& path : a.curves) curves.emplace_back(file_stem(path), read_curve_csv(path));
    write_svg_plot(curves, a.out);
    return 0;
}

int cmd_gen_surrogate(const SurrogateArgs& a) {
    using namespace prdkit;
    SurrogateConfig cfg;
    cfg.n = a.n;
    cfg.d = a.d;
    cfg.spectrum = a.spectrum;
    cfg.psi = a.psi;
    cfg.seed = a.seed;
    write_embeddings(gen_surrogate(cfg), a.out);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"prdkit: precision/recall curves for sample-set comparison"};
    app.require_subcommand(1);

    PrArgs pr;
    auto* pr_cmd = app.add_subcommand(
        "pr", "Estimate a PR curve between two embedding files (defaults: k=sqrt, split=0.5, "
              "lambdas=101)");
    pr_cmd->add_option("--real", pr.real, "embeddings drawn from the reference distribution")
        ->required();
    pr_cmd->add_option("--fake", pr.fake, "embeddings drawn from the distribution under evaluation")
        ->required();
    pr_cmd->add_option("--method", pr.method, "classifier family: knn|kde|ipr|cov")
        ->capture_default_str();
    pr_cmd->add_option("--k", pr.k, "neighbor count, or 'sqrt' for ceil(sqrt(train size))")
        ->capture_default_str();
    pr_cmd->add_option("--sigma", pr.sigma, "kde bandwidth, or 'auto'")->capture_default_str();
    pr_cmd->add_option("--split", pr.split, "train fraction in (0,1), or 'none'")
        ->capture_default_str();
    pr_cmd->add_option("--lambdas", pr.lambdas, "interior trade-off grid size")
        ->capture_default_str();
    pr_cmd->add_option("--seed", pr.seed, "master seed")->capture_default_str();
    pr_cmd->add_option("--out", pr.out, "output curve CSV (metadata sidecar appended .meta.json)")
        ->required();

    ExtremesArgs ex;
    auto* ex_cmd = app.add_subcommand(
        "extremes", "Published extreme-value metrics (defaults: k=sqrt, kprime=3, radius=auto, "
                    "split=none)");
    ex_cmd->add_option("--real", ex.real)->required();
    ex_cmd->add_option("--fake", ex.fake)->required();
    ex_cmd->add_option("--method", ex.method, "ipr|cov|eas|prc|ppr")->capture_default_str();
    ex_cmd->add_option("--k", ex.k, "neighbor count or 'sqrt'")->capture_default_str();
    ex_cmd->add_option("--kprime", ex.kprime, "cover count for prc")->capture_default_str();
    ex_cmd->add_option("--radius", ex.radius, "tent kernel width for ppr, or 'auto'")
        ->capture_default_str();
    ex_cmd->add_option("--split", ex.split, "train fraction or 'none' (literature convention)")
        ->capture_default_str();
    ex_cmd->add_option("--seed", ex.seed)->capture_default_str();
    ex_cmd->add_option("--out", ex.out, "output JSON (stdout when omitted)");

    SummarizeArgs su;
    auto* su_cmd = app.add_subcommand(
        "summarize", "Scalar digests of a curve CSV (defaults: eps=0.05, b=8)");
    su_cmd->add_option("--curve", su.curve)->required();
    su_cmd->add_option("--eps", su.eps, "recall level for precision-at-eps")->capture_default_str();
    su_cmd->add_option("--b", su.b, "F-score weight")->capture_default_str();
    su_cmd->add_option("--out", su.out, "output JSON (stdout when omitted)");

    std::string iou_a, iou_b;
    auto* iou_cmd = app.add_subcommand("iou", "Intersection over union of two curve regions");
    iou_cmd->add_option("--a", iou_a)->required();
    iou_cmd->add_option("--b", iou_b)->required();

    GtArgs gt;
    auto* gt_cmd = app.add_subcommand(
        "gt", "Monte-Carlo ground-truth curve between two analytic models (default n-gt=100000)");
    gt_cmd->add_option("--p", gt.p, "reference model JSON")->required();
    gt_cmd->add_option("--q", gt.q, "comparison model JSON")->required();
    gt_cmd->add_option("--n-gt", gt.n_gt, "Monte-Carlo sample count per side")->capture_default_str();
    gt_cmd->add_option("--lambdas", gt.lambdas)->capture_default_str();
    gt_cmd->add_option("--seed", gt.seed)->capture_default_str();
    gt_cmd->add_option("--out", gt.out, "output curve CSV")->required();

    ExpArgs exp;
    auto* exp_cmd = app.add_subcommand("exp", "Run an experiment suite from a JSON config");
    exp_cmd->add_option("--suite", exp.suite, "shift|gmm|variability|hybrid (overrides config)");
    exp_cmd->add_option("--config", exp.config, "experiment config JSON")->required();
    exp_cmd->add_option("--out-dir", exp.out_dir, "run output directory")->capture_default_str();

    PlotArgs plot;
    auto* plot_cmd = app.add_subcommand("plot", "Render curve CSVs as a static SVG figure");
    plot_cmd->add_option("--curves", plot.curves, "curve CSV files")->required()->expected(-1);
    plot_cmd->add_option("--out", plot.out, "output SVG path")->required();

    SurrogateArgs sg;
    auto* sg_cmd = app.add_subcommand(
        "gen-surrogate", "Write a synthetic embedding file with a controlled spectrum");
    sg_cmd->add_option("--n", sg.n)->capture_default_str();
    sg_cmd->add_option("--d", sg.d)->capture_default_str();
    sg_cmd->add_option("--spectrum", sg.spectrum, "flat or decay:<ratio>")->capture_default_str();
    sg_cmd->add_option("--psi", sg.psi, "truncation-like shrink factor in [0,1]")
        ->capture_default_str();
    sg_cmd->add_option("--seed", sg.seed)->capture_default_str();
    sg_cmd->add_option("--out", sg.out, "output file (.csv, .npy, else raw+sidecar)")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (pr_cmd->parsed()) return cmd_pr(pr);
        if (ex_cmd->parsed()) return cmd_extremes(ex);
        if (su_cmd->parsed()) return cmd_summarize(su);
        if (iou_cmd->parsed()) return cmd_iou(iou_a, iou_b);
        if (gt_cmd->parsed()) return cmd_gt(gt);
        if (exp_cmd->parsed()) return cmd_exp(exp);
        if (plot_cmd->parsed()) return cmd_plot(plot);
        if (sg_cmd->parsed()) return cmd_gen_surrogate(sg);
    } catch (const FlagError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const prdkit::ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
