#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "prdkit/curve_analysis.hpp"
#include "prdkit/embeddings_io.hpp"
#include "prdkit/ground_truth.hpp"
#include "prdkit/pipeline.hpp"
#include "prdkit/synthetic.hpp"

namespace prdkit {

/// One configuration drives all four suites; suite-specific fields are
/// ignored elsewhere. JSON keys mirror the field names.
struct ExperimentConfig {
    std::string suite = "shift";  // shift | gmm | variability | hybrid
    std::vector<Method> methods{Method::knn, Method::kde, Method::ipr, Method::cov};
    bool split = true;
    double split_fraction = 0.5;
    std::size_t k = 0;        // 0 -> sqrt rule
    double sigma = 0.0;       // 0 -> auto bandwidth
    std::size_t repetitions = 10;
    std::uint64_t seed = 0;
    std::size_t n = 10000;
    std::size_t d = 64;
    std::size_t lambdas = 101;
    std::size_t n_gt = 100000;
    // shift suite
    std::vector<double> shifts{0.12, 0.21, 0.29, 0.38};
    // gmm suite
    std::string gmm_preset = "main";  // main | alternate
    // variability suite
    std::vector<std::size_t> sizes{10, 100, 1000, 10000};
    double variability_mu = 0.21;
    // hybrid suite
    std::string reference_file;
    std::vector<std::pair<std::string, std::string>> psi_files;  // label -> path
    std::vector<std::size_t> dims{2, 8, 16, 32, 64};
    std::string setting = "a";  // a | b | c
};

inline nlohmann::json experiment_config_to_json(const ExperimentConfig& c) {
    nlohmann::json j;
    j["suite"] = c.suite;
    std::vector<std::string> methods;
    for (Method m : c.methods) methods.push_back(method_name(m));
    j["methods"] = methods;
    j["split"] = c.split;
    j["split_fraction"] = c.split_fraction;
    j["k"] = c.k ? nlohmann::json(c.k) : nlohmann::json("sqrt");
    j["sigma"] = c.sigma > 0.0 ? nlohmann::json(c.sigma) : nlohmann::json("auto");
    j["repetitions"] = c.repetitions;
    j["seed"] = c.seed;
    j["n"] = c.n;
    j["d"] = c.d;
    j["lambdas"] = c.lambdas;
    j["n_gt"] = c.n_gt;
    j["shifts"] = c.shifts;
    j["gmm_preset"] = c.gmm_preset;
    j["sizes"] = c.sizes;
    j["variability_mu"] = c.variability_mu;
    if (!c.reference_file.empty()) j["reference_file"] = c.reference_file;
    if (!c.psi_files.empty()) {
        nlohmann::json files = nlohmann::json::object();
        for (const auto& [label, path] : c.psi_files) files[label] = path;
        j["psi_files"] = files;
    }
    j["dims"] = c.dims;
    j["setting"] = c.setting;
    return j;
}

inline ExperimentConfig experiment_config_from_json(const nlohmann::json& j,
                                                    const std::string& where = "config") {
    ExperimentConfig c;
    try {
        if (j.contains("suite")) c.suite = j["suite"].get<std::string>();
        if (j.contains("methods")) {
            c.methods.clear();
            for (const auto& name : j["methods"]) c.methods.push_back(method_from_name(name));
        }
        if (j.contains("split")) c.split = j["split"].get<bool>();
        if (j.contains("split_fraction")) c.split_fraction = j["split_fraction"].get<double>();
        if (j.contains("k") && !j["k"].is_string()) c.k = j["k"].get<std::size_t>();
        if (j.contains("sigma") && !j["sigma"].is_string()) c.sigma = j["sigma"].get<double>();
        if (j.contains("repetitions")) c.repetitions = j["repetitions"].get<std::size_t>();
        if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
        if (j.contains("n")) c.n = j["n"].get<std::size_t>();
        if (j.contains("d")) c.d = j["d"].get<std::size_t>();
        if (j.contains("lambdas")) c.lambdas = j["lambdas"].get<std::size_t>();
        if (j.contains("n_gt")) c.n_gt = j["n_gt"].get<std::size_t>();
        if (j.contains("shifts")) c.shifts = j["shifts"].get<std::vector<double>>();
        if (j.contains("gmm_preset")) c.gmm_preset = j["gmm_preset"].get<std::string>();
        if (j.contains("sizes")) c.sizes = j["sizes"].get<std::vector<std::size_t>>();
        if (j.contains("variability_mu")) c.variability_mu = j["variability_mu"].get<double>();
        if (j.contains("reference_file")) c.reference_file = j["reference_file"].get<std::string>();
        if (j.contains("psi_files"))
            for (const auto& [label, path] : j["psi_files"].items())
                c.psi_files.emplace_back(label, path.get<std::string>());
        if (j.contains("dims")) c.dims = j["dims"].get<std::vector<std::size_t>>();
        if (j.contains("setting")) c.setting = j["setting"].get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(where + ": " + e.what());
    }
    if (c.repetitions == 0) throw std::invalid_argument(where + ": repetitions must be >= 1");
    return c;
}

inline ExperimentConfig load_experiment_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open config file '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
    return experiment_config_from_json(j, path);
}

struct IoUCell {
    std::string key;   // shift value, "gmm", or dimension
    std::string psi;   // hybrid only
    std::string method;
    bool split = false;
    std::string k_rule;
    double mean_iou = 0.0;      // mean of per-repetition IoU values
    double std_iou = 0.0;       // population deviation of the same
    double iou_of_mean = 0.0;   // IoU of the repetition-averaged curve
    std::vector<double> values;
};

struct IoUTable {
    std::vector<IoUCell> cells;
};

inline void write_iou_table_csv(const IoUTable& table, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << "key,psi,method,split,k_rule,mean_iou,std_iou,iou_of_mean\n";
    char buf[96];
    for (const auto& c : table.cells) {
        std::snprintf(buf, sizeof(buf), "%.6f,%.6f,%.6f", c.mean_iou, c.std_iou, c.iou_of_mean);
        out << c.key << ',' << c.psi << ',' << c.method << ',' << (c.split ? "split" : "nosplit")
            << ',' << c.k_rule << ',' << buf << '\n';
    }
}

namespace detail {

inline std::uint64_t stream_tag(std::uint64_t a, std::uint64_t b = 0, std::uint64_t c = 0) {
    return mix64(a + 0x9E3779B97F4A7C15ULL * mix64(b + 0x2545F4914F6CDD1DULL * mix64(c)));
}

inline std::string trim_number(double v) {
    std::ostringstream ss;
    ss << v;
    return ss.str();
}

struct CellStats {
    double mean = 0.0, stdev = 0.0;
    std::vector<double> values;
};

inline CellStats cell_stats(const std::vector<double>& values) {
    CellStats s;
    s.values = values;
    for (double v : values) s.mean += v;
    s.mean /= static_cast<double>(values.size());
    for (double v : values) s.stdev += (v - s.mean) * (v - s.mean);
    s.stdev = std::sqrt(s.stdev / static_cast<double>(values.size()));
    return s;
}

/// Evaluates all configured methods on R sampled repetitions of one model
/// pair and reports per-method IoU statistics against the Monte-Carlo ground
/// truth of the pair.
struct PairEvaluation {
    std::vector<CellStats> per_method;       // parallel to cfg.methods
    std::vector<PRCurve> mean_curves;        // parallel to cfg.methods
    std::vector<double> iou_of_mean;         // IoU of each mean curve vs gt
    PRCurve gt;
};

inline PairEvaluation evaluate_pair(const DensityModel& p, const DensityModel& q,
                                    const ExperimentConfig& cfg, std::uint64_t cell_tag) {
    const LambdaGrid grid = make_lambda_grid(cfg.lambdas);
    GtConfig gt_cfg;
    gt_cfg.n_gt = cfg.n_gt;
    gt_cfg.grid = grid;
    gt_cfg.seed = stream_tag(cfg.seed, cell_tag, 0xA11CE);
    PairEvaluation out;
    out.gt = gt_curve(p, q, gt_cfg);
    const Envelope gt_env = build_envelope(out.gt);

    const std::size_t n_methods = cfg.methods.size();
    std::vector<std::vector<double>> ious(n_methods, std::vector<double>(cfg.repetitions));
    std::vector<CurveEnsemble> ensembles(n_methods);
    for (auto& e : ensembles) e.repetitions.resize(cfg.repetitions);

    parallel_for(cfg.repetitions, [&](std::size_t rep) {
        RngStream sx(cfg.seed, stream_tag(cell_tag, rep, 1));
        RngStream sy(cfg.seed, stream_tag(cell_tag, rep, 2));
        const SampleSet x = sample(p, cfg.n, sx, "p");
        const SampleSet y = sample(q, cfg.n, sy, "q");
        SplitSpec spec;
        spec.enabled = cfg.split;
        spec.fraction = cfg.split_fraction;
        spec.seed = stream_tag(cell_tag, rep, 3) ^ cfg.seed;
        const SplitData data = split_samples(x, y, spec);
        for (std::size_t m = 0; m < n_methods; ++m) {
            FamilyConfig fam{cfg.methods[m], cfg.k, cfg.sigma};
            ResolvedFamily resolved;
            const ScoredTestSet scores = score_family(data, fam, &resolved);
            PRCurve curve = estimate_curve(scores, grid);
            curve.meta.method = method_name(cfg.methods[m]);
            if (cfg.methods[m] == Method::kde)
                curve.meta.sigma = resolved.sigma;
            else
                curve.meta.k = static_cast<int>(resolved.k);
            curve.meta.split = spec;
            curve.meta.seed = cfg.seed;
            curve.meta.lambdas = cfg.lambdas;
            ious[m][rep] = iou(gt_env, build_envelope(curve));
            ensembles[m].repetitions[rep] = std::move(curve);
        }
    });
    for (std::size_t m = 0; m < n_methods; ++m) {
        out.per_method.push_back(cell_stats(ious[m]));
        out.mean_curves.push_back(aggregate(ensembles[m]).mean);
        out.iou_of_mean.push_back(iou(gt_env, build_envelope(out.mean_curves.back())));
    }
    return out;
}

inline void ensure_dir(const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create directory '" + dir + "': " + ec.message());
}

}  // namespace detail

struct SuiteResult {
    IoUTable table;
    nlohmann::json summary;
};

inline std::string k_rule_name(const ExperimentConfig& cfg) {
    return cfg.k ? std::to_string(cfg.k) : "sqrt";
}

/// Shifted-Gaussian suite: one cell per (shift, method); each cell reports
/// mean/std IoU against the Monte-Carlo ground truth over R repetitions.
inline SuiteResult run_shift(const ExperimentConfig& cfg, const std::string& out_dir) {
    detail::ensure_dir(out_dir + "/curves");
    SuiteResult res;
    res.summary["suite"] = "shift";
    nlohmann::json cells = nlohmann::json::array();
    for (std::size_t mi = 0; mi < cfg.shifts.size(); ++mi) {
        const double mu = cfg.shifts[mi];
        ShiftConfig sc;
        sc.d = cfg.d;
        sc.mu = mu;
        sc.n = cfg.n;
        const auto [p, q] = shift_pair(sc);
        const detail::PairEvaluation eval = detail::evaluate_pair(p, q, cfg, 100 + mi);
        const std::string mu_str = detail::trim_number(mu);
        write_curve_csv(eval.gt, out_dir + "/curves/gt_shift_mu" + mu_str + ".csv");
        for (std::size_t m = 0; m < cfg.methods.size(); ++m) {
            IoUCell cell;
            cell.key = mu_str;
            cell.method = method_name(cfg.methods[m]);
            cell.split = cfg.split;
            cell.k_rule = k_rule_name(cfg);
            cell.mean_iou = eval.per_method[m].mean;
            cell.std_iou = eval.per_method[m].stdev;
            cell.iou_of_mean = eval.iou_of_mean[m];
            cell.values = eval.per_method[m].values;
            res.table.cells.push_back(cell);
            const std::string curve_path = out_dir + "/curves/shift_mu" + mu_str + "_" +
                                           cell.method + (cfg.split ? "_split" : "_nosplit") +
                                           "_mean.csv";
            write_curve_csv(eval.mean_curves[m], curve_path);
            cells.push_back({{"mu", mu},
                             {"method", cell.method},
                             {"split", cfg.split},
                             {"k_rule", cell.k_rule},
                             {"mean_iou", cell.mean_iou},
                             {"std_iou", cell.std_iou},
                             {"iou_of_mean", cell.iou_of_mean},
                             {"ious", cell.values}});
        }
    }
    res.summary["cells"] = cells;
    return res;
}

/// Four-mode GMM suite: one ensemble per method on the configured preset.
inline SuiteResult run_gmm(const ExperimentConfig& cfg, const std::string& out_dir) {
    detail::ensure_dir(out_dir + "/curves");
    GmmConfig gc = cfg.gmm_preset == "alternate" ? gmm_preset_alternate() : gmm_preset_main();
    gc.d = cfg.d;
    const auto [p, q] = gmm_pair(gc);
    const detail::PairEvaluation eval = detail::evaluate_pair(p, q, cfg, 7000);
    write_curve_csv(eval.gt, out_dir + "/curves/gt_gmm.csv");
    SuiteResult res;
    res.summary["suite"] = "gmm";
    res.summary["preset"] = cfg.gmm_preset;
    nlohmann::json cells = nlohmann::json::array();
    for (std::size_t m = 0; m < cfg.methods.size(); ++m) {
        IoUCell cell;
        cell.key = "gmm";
        cell.method = method_name(cfg.methods[m]);
        cell.split = cfg.split;
        cell.k_rule = k_rule_name(cfg);
        cell.mean_iou = eval.per_method[m].mean;
        cell.std_iou = eval.per_method[m].stdev;
        cell.iou_of_mean = eval.iou_of_mean[m];
        cell.values = eval.per_method[m].values;
        res.table.cells.push_back(cell);
        write_curve_csv(eval.mean_curves[m],
                        out_dir + "/curves/gmm_" + cell.method + "_mean.csv");
        cells.push_back({{"method", cell.method},
                         {"mean_iou", cell.mean_iou},
                         {"std_iou", cell.std_iou},
                         {"iou_of_mean", cell.iou_of_mean},
                         {"ious", cell.values}});
    }
    res.summary["cells"] = cells;
    return res;
}

/// Sample-size study at fixed shift: per n, R repetitions per method; emits
/// every repetition curve plus mean and +/- sigma bands.
inline SuiteResult run_variability(const ExperimentConfig& cfg, const std::string& out_dir) {
    detail::ensure_dir(out_dir + "/curves");
    const LambdaGrid grid = make_lambda_grid(cfg.lambdas);
    SuiteResult res;
    res.summary["suite"] = "variability";
    res.summary["mu"] = cfg.variability_mu;
    nlohmann::json entries = nlohmann::json::array();
    for (std::size_t ni = 0; ni < cfg.sizes.size(); ++ni) {
        const std::size_t n = cfg.sizes[ni];
        ShiftConfig sc;
        sc.d = cfg.d;
        sc.mu = cfg.variability_mu;
        sc.n = n;
        const auto [p, q] = shift_pair(sc);
        for (std::size_t m = 0; m < cfg.methods.size(); ++m) {
            const Method method = cfg.methods[m];
            CurveEnsemble ensemble;
            ensemble.repetitions.resize(cfg.repetitions);
            parallel_for(cfg.repetitions, [&](std::size_t rep) {
                RngStream sx(cfg.seed, detail::stream_tag(9000 + ni, rep, 1));
                RngStream sy(cfg.seed, detail::stream_tag(9000 + ni, rep, 2));
                const SampleSet x = sample(p, n, sx, "p");
                const SampleSet y = sample(q, n, sy, "q");
                SplitSpec spec;
                spec.enabled = cfg.split;
                spec.fraction = cfg.split_fraction;
                spec.seed = detail::stream_tag(9000 + ni, rep, 3) ^ cfg.seed;
                const SplitData data = split_samples(x, y, spec);
                FamilyConfig fam{method, cfg.k, cfg.sigma};
                PRCurve curve = estimate_curve(score_family(data, fam), grid);
                curve.meta.method = method_name(method);
                curve.meta.split = spec;
                curve.meta.lambdas = cfg.lambdas;
                ensemble.repetitions[rep] = std::move(curve);
            });
            const AggregateCurves agg = aggregate(ensemble);
            const std::string stem =
                out_dir + "/curves/var_n" + std::to_string(n) + "_" + method_name(method);
            for (std::size_t rep = 0; rep < cfg.repetitions; ++rep)
                write_curve_csv(ensemble.repetitions[rep], stem + "_rep" + std::to_string(rep) + ".csv");
            write_curve_csv(agg.mean, stem + "_mean.csv");
            write_curve_csv(agg.plus_sigma, stem + "_plus_sigma.csv");
            write_curve_csv(agg.minus_sigma, stem + "_minus_sigma.csv");
            entries.push_back({{"n", n},
                               {"method", method_name(method)},
                               {"sigma_alpha", agg.sigma_alpha},
                               {"sigma_beta", agg.sigma_beta}});
        }
    }
    res.summary["entries"] = entries;
    return res;
}

/// Hybrid suite: PCA basis from the reference embeddings, per-dimension
/// Gaussian (or two-mode GMM) fits, sampling, estimation, IoU against the
/// fitted models' ground truth.
inline SuiteResult run_hybrid(const ExperimentConfig& cfg, const std::string& out_dir) {
    if (cfg.reference_file.empty())
        throw std::invalid_argument("hybrid suite: reference_file is required");
    if (cfg.psi_files.empty())
        throw std::invalid_argument("hybrid suite: psi_files is required");
    detail::ensure_dir(out_dir + "/curves");
    const SampleSet reference = read_embeddings(cfg.reference_file);
    std::vector<std::pair<std::string, SampleSet>> psi_sets;
    for (const auto& [label, path] : cfg.psi_files) psi_sets.emplace_back(label, read_embeddings(path));
    const PcaBasis basis = fit_pca(reference);

    SuiteResult res;
    res.summary["suite"] = "hybrid";
    res.summary["setting"] = cfg.setting;
    nlohmann::json series = nlohmann::json::array();

    auto fit_model = [](const SampleSet& s) {
        auto [mean, cov] = fit_gaussian(s);
        return general_gaussian(std::move(mean), cov);
    };

    for (std::size_t di = 0; di < cfg.dims.size(); ++di) {
        const std::size_t d = cfg.dims[di];
        if (d > basis.dim())
            throw std::invalid_argument("hybrid suite: dimension " + std::to_string(d) +
                                        " exceeds embedding dimension " + std::to_string(basis.dim()));
        const SampleSet ref_proj = pca_project(basis, reference, d);
        const DensityModel g_ref = fit_model(ref_proj);
        std::map<std::string, DensityModel> g_psi;
        for (const auto& [label, s] : psi_sets) g_psi.emplace(label, fit_model(pca_project(basis, s, d)));

        // accumulate per-method stats for this dimension
        std::vector<std::vector<double>> collected(cfg.methods.size());
        std::vector<std::vector<double>> collected_mean_iou(cfg.methods.size());
        auto run_cell = [&](const DensityModel& p, const DensityModel& q, std::uint64_t tag,
                            const std::string& psi_label) {
            const detail::PairEvaluation eval = detail::evaluate_pair(p, q, cfg, tag);
            for (std::size_t m = 0; m < cfg.methods.size(); ++m) {
                IoUCell cell;
                cell.key = std::to_string(d);
                cell.psi = psi_label;
                cell.method = method_name(cfg.methods[m]);
                cell.split = cfg.split;
                cell.k_rule = k_rule_name(cfg);
                cell.mean_iou = eval.per_method[m].mean;
                cell.std_iou = eval.per_method[m].stdev;
                cell.iou_of_mean = eval.iou_of_mean[m];
                cell.values = eval.per_method[m].values;
                res.table.cells.push_back(cell);
                for (double v : eval.per_method[m].values) collected[m].push_back(v);
                collected_mean_iou[m].push_back(eval.iou_of_mean[m]);
            }
        };

        if (cfg.setting == "a") {
            std::size_t pi = 0;
            for (const auto& [label, model] : g_psi)
                run_cell(g_ref, model, detail::stream_tag(0xAB, di, ++pi), label);
        } else if (cfg.setting == "b") {
            std::size_t pi = 0;
            for (const auto& [label, model] : g_psi)
                run_cell(model, model, detail::stream_tag(0xB0, di, ++pi), label);
        } else if (cfg.setting == "c") {
            auto need = [&](const std::string& label) -> const DensityModel& {
                const auto it = g_psi.find(label);
                if (it == g_psi.end())
                    throw std::invalid_argument("hybrid setting c needs psi_files entry '" + label + "'");
                return it->second;
            };
            std::vector<DensityModel> p_comps{need("0.3"), need("0.5")};
            std::vector<DensityModel> q_comps{need("0.3"), need("0.9")};
            const DensityModel p = mixture(std::move(p_comps), {0.5, 0.5});
            const DensityModel q = mixture(std::move(q_comps), {0.5, 0.5});
            run_cell(p, q, detail::stream_tag(0xC0, di, 0), "mix");
        } else {
            throw std::invalid_argument("hybrid suite: unknown setting '" + cfg.setting + "'");
        }

        nlohmann::json per_method = nlohmann::json::object();
        nlohmann::json per_method_mean_curve = nlohmann::json::object();
        for (std::size_t m = 0; m < cfg.methods.size(); ++m) {
            per_method[method_name(cfg.methods[m])] = detail::cell_stats(collected[m]).mean;
            per_method_mean_curve[method_name(cfg.methods[m])] =
                detail::cell_stats(collected_mean_iou[m]).mean;
        }
        series.push_back({{"d", d}, {"mean_iou", per_method}, {"iou_of_mean", per_method_mean_curve}});
    }
    res.summary["series"] = series;
    return res;
}

/// Dispatches a suite and persists iou_table.csv, summary.json and
/// config_echo.json under the run directory.
inline SuiteResult run_suite(const ExperimentConfig& cfg, const std::string& out_dir) {
    detail::ensure_dir(out_dir);
    SuiteResult res;
    if (cfg.suite == "shift")
        res = run_shift(cfg, out_dir);
    else if (cfg.suite == "gmm")
        res = run_gmm(cfg, out_dir);
    else if (cfg.suite == "variability")
        res = run_variability(cfg, out_dir);
    else if (cfg.suite == "hybrid")
        res = run_hybrid(cfg, out_dir);
    else
        throw std::invalid_argument("unknown suite '" + cfg.suite +
                                    "' (expected shift|gmm|variability|hybrid)");
    write_iou_table_csv(res.table, out_dir + "/iou_table.csv");
    std::ofstream summary(out_dir + "/summary.json");
    summary << res.summary.dump(2) << '\n';
    std::ofstream echo(out_dir + "/config_echo.json");
    echo << experiment_config_to_json(cfg).dump(2) << '\n';
    return res;
}

/// Synthetic embedding files with a controlled spectrum, standing in for
/// image-model features so the hybrid suite can run end to end. The rotation
/// depends only on (d, spectrum), so files generated with different psi share
/// their principal axes; psi shrinks the covariance toward the center and
/// drifts the mean, mimicking a truncation knob.
struct SurrogateConfig {
    std::size_t n = 5000;
    std::size_t d = 64;
    std::string spectrum = "decay:0.92";  // flat | decay:<ratio>
    double psi = 1.0;
    std::uint64_t seed = 0;
};

inline SampleSet gen_surrogate(const SurrogateConfig& cfg) {
    if (cfg.n < 2 || cfg.d == 0) throw std::invalid_argument("gen_surrogate: need n >= 2, d >= 1");
    if (!(cfg.psi >= 0.0 && cfg.psi <= 1.0))
        throw std::invalid_argument("gen_surrogate: psi must lie in [0,1]");
    std::vector<double> scale(cfg.d, 1.0);
    if (cfg.spectrum.rfind("decay:", 0) == 0) {
        const double ratio = std::stod(cfg.spectrum.substr(6));
        if (!(ratio > 0.0 && ratio <= 1.0))
            throw std::invalid_argument("gen_surrogate: decay ratio must lie in (0,1]");
        double v = 1.0;
        for (std::size_t i = 0; i < cfg.d; ++i, v *= ratio) scale[i] = v;
    } else if (cfg.spectrum != "flat") {
        throw std::invalid_argument("gen_surrogate: spectrum must be 'flat' or 'decay:<ratio>'");
    }
    // shared rotation per (d, spectrum): Gram-Schmidt on a seeded Gaussian matrix
    std::uint64_t rot_seed = 0xC0FFEE ^ (cfg.d * 0x9E3779B97F4A7C15ULL);
    for (char ch : cfg.spectrum) rot_seed = rot_seed * 131 + static_cast<unsigned char>(ch);
    RngStream rot_rng(rot_seed, 0);
    Matrix rot(cfg.d, cfg.d);
    for (auto& v : rot.data) v = rot_rng.normal();
    for (std::size_t j = 0; j < cfg.d; ++j) {
        for (std::size_t prev = 0; prev < j; ++prev) {
            double dot = 0.0;
            for (std::size_t i = 0; i < cfg.d; ++i) dot += rot.at(i, j) * rot.at(i, prev);
            for (std::size_t i = 0; i < cfg.d; ++i) rot.at(i, j) -= dot * rot.at(i, prev);
        }
        double norm = 0.0;
        for (std::size_t i = 0; i < cfg.d; ++i) norm += rot.at(i, j) * rot.at(i, j);
        norm = std::sqrt(norm);
        if (norm < 1e-12) throw std::runtime_error("gen_surrogate: rotation degenerated");
        for (std::size_t i = 0; i < cfg.d; ++i) rot.at(i, j) /= norm;
    }
    RngStream rng(cfg.seed, 0x5A);
    SampleSet out;
    out.label = "surrogate";
    out.points = Matrix(cfg.n, cfg.d);
    std::vector<double> w(cfg.d);
    const double drift = 0.5 * (1.0 - cfg.psi);
    for (std::size_t i = 0; i < cfg.n; ++i) {
        for (std::size_t jj = 0; jj < cfg.d; ++jj) w[jj] = cfg.psi * scale[jj] * rng.normal();
        w[0] += drift;
        for (std::size_t r = 0; r < cfg.d; ++r) {
            double v = 0.0;
            for (std::size_t jj = 0; jj < cfg.d; ++jj) v += rot.at(r, jj) * w[jj];
            out.points.at(i, r) = v;
        }
    }
    return out;
}

}  // namespace prdkit
