// End-to-end acceptance suite. Each test prints one summary line per checked
// claim and fails honestly when a claim does not hold at the stated
// tolerance. Everything is seeded and deterministic across runs and thread
// counts; the suite-wide seed is 7.

#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "../oracles.hpp"
#include "prdkit/curve_analysis.hpp"
#include "prdkit/experiments.hpp"
#include "prdkit/extreme_metrics.hpp"
#include "prdkit/ground_truth.hpp"
#include "prdkit/pipeline.hpp"

using namespace prdkit;

namespace {

constexpr std::uint64_t kSeed = 7;

std::string work_dir(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / "prdkit_acceptance" / name;
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir.string();
}

void report(const char* crit, const std::string& what, bool pass) {
    std::printf("[%s] %-64s %s\n", crit, what.c_str(), pass ? "PASS" : "FAIL");
    std::fflush(stdout);
}

const IoUCell* find_cell(const IoUTable& table, const std::string& key, const std::string& method) {
    for (const auto& c : table.cells)
        if (c.key == key && c.method == method) return &c;
    return nullptr;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

// ---------------------------------------------------------------------------
// 1. Shift-table reproduction: d=64, n=10K, k=sqrt rule, R=10. The published
//    mean IoU values are checked at +/-0.05 on the IoU of the
//    repetition-averaged curve; reported cell standard errors must be < 1e-2.
// ---------------------------------------------------------------------------
TEST(Acceptance, Criterion1_ShiftTableReproduction) {
    ExperimentConfig cfg;
    cfg.suite = "shift";
    cfg.shifts = {0.12, 0.38};
    cfg.methods = {Method::knn, Method::kde, Method::ipr, Method::cov};
    cfg.split = true;
    cfg.n = 10000;
    cfg.d = 64;
    cfg.repetitions = 10;
    cfg.lambdas = 101;
    cfg.n_gt = 100000;
    cfg.seed = kSeed;
    const SuiteResult split_res = run_suite(cfg, work_dir("criterion1_split"));
    cfg.split = false;
    cfg.shifts = {0.12};
    const SuiteResult nosplit_res = run_suite(cfg, work_dir("criterion1_nosplit"));

    struct Expectation {
        const SuiteResult* res;
        const char* regime;
        const char* mu;
        const char* method;
        double published;
    };
    const std::vector<Expectation> cells = {
        {&split_res, "split", "0.12", "knn", 0.87},   {&split_res, "split", "0.12", "kde", 0.84},
        {&split_res, "split", "0.12", "ipr", 0.81},   {&split_res, "split", "0.12", "cov", 0.92},
        {&split_res, "split", "0.38", "knn", 0.84},   {&split_res, "split", "0.38", "kde", 0.75},
        {&split_res, "split", "0.38", "ipr", 0.63},   {&split_res, "split", "0.38", "cov", 0.93},
        {&nosplit_res, "nosplit", "0.12", "knn", 0.93}, {&nosplit_res, "nosplit", "0.12", "kde", 0.94},
        {&nosplit_res, "nosplit", "0.12", "ipr", 0.91}, {&nosplit_res, "nosplit", "0.12", "cov", 0.96},
    };
    for (const auto& e : cells) {
        const IoUCell* cell = find_cell(e.res->table, e.mu, e.method);
        ASSERT_NE(cell, nullptr);
        char label[128];
        std::snprintf(label, sizeof(label), "mu=%s %s %s: got %.3f, published %.2f +/-0.05", e.mu,
                      e.regime, e.method, cell->iou_of_mean, e.published);
        const bool pass = std::abs(cell->iou_of_mean - e.published) <= 0.05;
        report("C1", label, pass);
        EXPECT_TRUE(pass) << label;
        const double standard_error =
            cell->std_iou / std::sqrt(static_cast<double>(cfg.repetitions));
        char se_label[128];
        std::snprintf(se_label, sizeof(se_label), "mu=%s %s %s: cell standard error %.4f < 1e-2",
                      e.mu, e.regime, e.method, standard_error);
        report("C1", se_label, standard_error < 1e-2);
        EXPECT_LT(standard_error, 1e-2) << se_label;
    }
}

// ---------------------------------------------------------------------------
// 2. Ground-truth oracle: 1-D unit Gaussians, mean gaps 0.5/1/2; the
//    Monte-Carlo curve (n_gt=100K) must match the quadrature oracle of the
//    total-variation identity within 0.01 pointwise on the 103-point grid.
// ---------------------------------------------------------------------------
TEST(Acceptance, Criterion2_GroundTruthOracle) {
    for (double mu : {0.5, 1.0, 2.0}) {
        GtConfig cfg;
        cfg.n_gt = 100000;
        cfg.grid = make_lambda_grid(101);
        cfg.seed = kSeed;
        const PRCurve curve = gt_curve(isotropic_gaussian({0.0}), isotropic_gaussian({mu}), cfg);
        ASSERT_EQ(curve.points.size(), 103u);
        double worst = 0.0, worst_lambda = 0.0;
        for (const auto& pt : curve.points) {
            if (pt.lambda == 0.0 || std::isinf(pt.lambda)) continue;
            const double direct = oracle::shifted_gaussian_alpha_quadrature(mu, pt.lambda, 200000);
            const double tv_route = oracle::shifted_gaussian_alpha_tv_route(mu, pt.lambda, 200000);
            ASSERT_NEAR(direct, tv_route, 1e-6);  // the oracle's two routes agree
            const double err = std::abs(pt.alpha - direct);
            if (err > worst) {
                worst = err;
                worst_lambda = pt.lambda;
            }
        }
        char label[128];
        std::snprintf(label, sizeof(label), "mu=%.1f: worst |alpha - oracle| %.4f at lambda=%.2f",
                      mu, worst, worst_lambda);
        report("C2", label, worst <= 0.01);
        EXPECT_LE(worst, 0.01) << label;
    }
}

// ---------------------------------------------------------------------------
// 3. Extreme-value equivalences, exact: (a) prc with kprime=1 equals
//    coverage bitwise; (b) the no-split kNN curve at lambda=inf equals
//    coverage with the same k; (c) the iPR/Cov extremes equal the empirical
//    fnr of their family classifier at gamma=inf. 100 random instances each.
// ---------------------------------------------------------------------------
TEST(Acceptance, Criterion3_ExtremeValueEquivalences) {
    RngStream rng(kSeed, 303);
    const LambdaGrid grid = make_lambda_grid(11);
    std::size_t ok_a = 0, ok_b = 0, ok_c = 0;
    const std::size_t instances = 100;
    for (std::size_t i = 0; i < instances; ++i) {
        const std::size_t n = 10 + rng.uniform_below(30);
        const std::size_t d = 1 + rng.uniform_below(3);
        SampleSet x, y;
        x.points = Matrix(n, d);
        y.points = Matrix(n, d);
        const double shift = rng.uniform01();
        for (auto& v : x.points.data) v = rng.normal();
        for (auto& v : y.points.data) v = rng.normal() + shift;
        const std::size_t k = 1 + rng.uniform_below(std::min<std::size_t>(n - 1, 8));

        ok_a += prc_extreme(x, y, k, 1) == coverage_extreme(x, y, k);

        SplitSpec off;
        off.enabled = false;
        const SplitData data = split_samples(x, y, off);
        const PRCurve knn_curve = estimate_curve(score_knn(data, k), grid);
        ok_b += knn_curve.points.back().alpha == coverage_extreme(x, y, k);

        auto endpoint_fnr = [](const ScoredTestSet& s) {
            std::size_t finite = 0;
            for (double v : s.y_scores) finite += !std::isinf(v);
            return static_cast<double>(finite) / static_cast<double>(s.y_scores.size());
        };
        const bool ipr_ok = endpoint_fnr(score_ipr(data, k)) == ipr_extreme(x, y, k);
        const bool cov_ok = endpoint_fnr(score_cov(data, k)) == coverage_extreme(x, y, k);
        ok_c += ipr_ok && cov_ok;
    }
    report("C3", "(a) prc(kprime=1) == coverage bitwise, instances passing: " + std::to_string(ok_a),
           ok_a == instances);
    report("C3", "(b) no-split kNN curve at lambda=inf == coverage: " + std::to_string(ok_b),
           ok_b == instances);
    report("C3", "(c) iPR/Cov extremes == family-classifier fnr at gamma=inf: " + std::to_string(ok_c),
           ok_c == instances);
    EXPECT_EQ(ok_a, instances);
    EXPECT_EQ(ok_b, instances);
    EXPECT_EQ(ok_c, instances);
}

// ---------------------------------------------------------------------------
// 4. Consistency spot-check on the 1-D shifted pair (mu=1), split, sqrt-k:
//    (a) at lambda=1 and N=1e4 the ERM minimum sits within 0.02 of the risk
//    at the matched threshold gamma=lambda; (b) the mean absolute bias of
//    alpha_1 over 50 repetitions decreases monotonically over N=1e2,1e3,1e4.
// ---------------------------------------------------------------------------
TEST(Acceptance, Criterion4_ConsistencySpotCheck) {
    const double alpha_true = 2.0 * 0.5 * std::erfc(0.5 / std::sqrt(2.0));  // 2*Phi(-1/2)
    ShiftConfig sc;
    sc.d = 1;
    sc.mu = 1.0;
    const auto [p, q] = shift_pair(sc);
    const LambdaGrid grid = make_lambda_grid(11);
    const std::size_t reps = 50;
    std::vector<double> bias_gap;
    double risk_gap_10k = 0.0;
    for (std::size_t n : {100ul, 1000ul, 10000ul}) {
        std::vector<double> alphas(reps);
        std::vector<double> risk_gaps(reps, 0.0);
        parallel_for(reps, [&](std::size_t rep) {
            RngStream sx(kSeed, detail::stream_tag(400 + n, rep, 1));
            RngStream sy(kSeed, detail::stream_tag(400 + n, rep, 2));
            const SampleSet x = sample(p, n, sx, "p");
            const SampleSet y = sample(q, n, sy, "q");
            SplitSpec spec{0.5, true, detail::stream_tag(400 + n, rep, 3)};
            const SplitData data = split_samples(x, y, spec);
            const ScoredTestSet scores = score_family(data, FamilyConfig{Method::knn, 0, 0.0});
            const PRCurve curve = estimate_curve(scores, grid);
            double alpha1 = 0.0;
            for (const auto& pt : curve.points)
                if (pt.lambda == 1.0) alpha1 = pt.alpha;
            alphas[rep] = alpha1;
            risk_gaps[rep] = std::abs(risk_at_gamma(scores, 1.0, 1.0) - alpha1);
        });
        double mean_alpha = 0.0;
        for (double a : alphas) mean_alpha += a;
        mean_alpha /= static_cast<double>(reps);
        bias_gap.push_back(std::abs(mean_alpha - alpha_true));
        if (n == 10000) {
            for (double g : risk_gaps) risk_gap_10k += g;
            risk_gap_10k /= static_cast<double>(reps);
        }
    }
    char label_a[128];
    std::snprintf(label_a, sizeof(label_a),
                  "(a) |ERM minimum - risk at gamma=lambda| = %.4f <= 0.02 at N=1e4", risk_gap_10k);
    report("C4", label_a, risk_gap_10k <= 0.02);
    EXPECT_LE(risk_gap_10k, 0.02);

    char label_b[160];
    std::snprintf(label_b, sizeof(label_b),
                  "(b) |E[alpha_1] - alpha_1| over N=1e2,1e3,1e4: %.4f, %.4f, %.4f monotone",
                  bias_gap[0], bias_gap[1], bias_gap[2]);
    const bool monotone = bias_gap[0] > bias_gap[1] && bias_gap[1] > bias_gap[2];
    report("C4", label_b, monotone);
    EXPECT_TRUE(monotone) << label_b;
}

// ---------------------------------------------------------------------------
// 5. GMM ordinal claims: on the four-mode configuration the joint-ball and
//    per-class kNN families beat the adaptive-bandwidth family by at least
//    0.05 mean IoU over 10 repetitions.
// ---------------------------------------------------------------------------
TEST(Acceptance, Criterion5_GmmOrdinalClaims) {
    ExperimentConfig cfg;
    cfg.suite = "gmm";
    cfg.methods = {Method::knn, Method::ipr, Method::cov};
    cfg.split = true;
    cfg.n = 10000;
    cfg.d = 64;
    cfg.repetitions = 10;
    cfg.lambdas = 101;
    cfg.n_gt = 100000;
    cfg.seed = kSeed;
    const SuiteResult res = run_suite(cfg, work_dir("criterion5_gmm"));
    const double knn = find_cell(res.table, "gmm", "knn")->mean_iou;
    const double ipr = find_cell(res.table, "gmm", "ipr")->mean_iou;
    const double cov = find_cell(res.table, "gmm", "cov")->mean_iou;
    char label[160];
    std::snprintf(label, sizeof(label), "IoU knn=%.3f cov=%.3f ipr=%.3f; margins %.3f / %.3f >= 0.05",
                  knn, cov, ipr, knn - ipr, cov - ipr);
    const bool pass = knn - ipr >= 0.05 && cov - ipr >= 0.05;
    report("C5", label, pass);
    EXPECT_GE(knn - ipr, 0.05);
    EXPECT_GE(cov - ipr, 0.05);
}

// ---------------------------------------------------------------------------
// 6. Variability: with mu=0.21, split, sqrt-k and R=100 repetitions, the
//    per-lambda deviation of alpha at n=1e4 lies below the n=1e2 deviation on
//    at least 90% of interior grid points.
// ---------------------------------------------------------------------------
TEST(Acceptance, Criterion6_VariabilityStudy) {
    ExperimentConfig cfg;
    cfg.suite = "variability";
    cfg.methods = {Method::knn};
    cfg.split = true;
    cfg.sizes = {100, 10000};
    cfg.variability_mu = 0.21;
    cfg.repetitions = 100;
    cfg.d = 64;
    cfg.lambdas = 101;
    cfg.seed = kSeed;
    const SuiteResult res = run_suite(cfg, work_dir("criterion6_variability"));
    std::vector<double> sigma_small, sigma_big;
    for (const auto& entry : res.summary["entries"]) {
        if (entry["n"] == 100) sigma_small = entry["sigma_alpha"].get<std::vector<double>>();
        if (entry["n"] == 10000) sigma_big = entry["sigma_alpha"].get<std::vector<double>>();
    }
    ASSERT_EQ(sigma_small.size(), sigma_big.size());
    std::size_t below = 0, interior = 0;
    for (std::size_t i = 1; i + 1 < sigma_small.size(); ++i) {
        ++interior;
        below += sigma_big[i] < sigma_small[i];
    }
    const double fraction = static_cast<double>(below) / static_cast<double>(interior);
    char label[128];
    std::snprintf(label, sizeof(label),
                  "sigma_alpha(n=1e4) < sigma_alpha(n=1e2) on %.1f%% of interior lambdas (>= 90%%)",
                  100.0 * fraction);
    report("C6", label, fraction >= 0.9);
    EXPECT_GE(fraction, 0.9);
}

// ---------------------------------------------------------------------------
// 7. Always-on property suites. The full property tests live in unit_tests
//    (run by ctest alongside this suite); the checks here re-assert the
//    headline invariants end to end.
// ---------------------------------------------------------------------------
TEST(Acceptance, Criterion7_PropertySuites) {
    RngStream rng(kSeed, 700);
    // alpha <= min(1, lambda), monotone alpha, exchange symmetry
    std::vector<double> xs, ys;
    for (int i = 0; i < 60; ++i) {
        xs.push_back(rng.uniform01() < 0.08 ? 0.0 : rng.uniform01() * 3.0);
        ys.push_back(rng.uniform01() < 0.08 ? std::numeric_limits<double>::infinity()
                                            : 0.2 + rng.uniform01() * 3.0);
    }
    ScoredTestSet scores;
    scores.x_scores = xs;
    scores.y_scores = ys;
    const LambdaGrid grid = make_lambda_grid(21);
    const PRCurve curve = estimate_curve(scores, grid);
    bool bounded = true, monotone = true;
    for (std::size_t i = 1; i + 1 < curve.points.size(); ++i) {
        bounded &= curve.points[i].alpha <= std::min(1.0, curve.points[i].lambda) + 1e-15;
        if (i >= 2) monotone &= curve.points[i].alpha >= curve.points[i - 1].alpha - 1e-12;
    }
    report("C7", "alpha bounded by trivial classifiers", bounded);
    report("C7", "alpha monotone in lambda", monotone);
    EXPECT_TRUE(bounded);
    EXPECT_TRUE(monotone);

    ScoredTestSet swapped;
    auto invert = [](double s) {
        if (s == 0.0) return std::numeric_limits<double>::infinity();
        if (std::isinf(s)) return 0.0;
        return 1.0 / s;
    };
    for (double v : ys) swapped.x_scores.push_back(invert(v));
    for (double v : xs) swapped.y_scores.push_back(invert(v));
    const PRCurve rev = estimate_curve(swapped, grid);
    bool exchange = true;
    const std::size_t np = curve.points.size();
    for (std::size_t i = 0; i < np; ++i) {
        exchange &= std::abs(curve.points[i].alpha - rev.points[np - 1 - i].beta) <= 1e-9;
        exchange &= std::abs(curve.points[i].beta - rev.points[np - 1 - i].alpha) <= 1e-9;
    }
    report("C7", "exchange symmetry (alpha,beta)<->(beta,alpha) under lambda->1/lambda", exchange);
    EXPECT_TRUE(exchange);

    const Envelope env = build_envelope(curve);
    const bool self_iou = iou(env, env) == 1.0;
    report("C7", "iou(a, a) == 1", self_iou);
    EXPECT_TRUE(self_iou);

    PRCurve unit;
    unit.points.push_back({0.0, 0.0, 1.0});
    unit.points.push_back({1.0, 1.0, 1.0});
    unit.points.push_back({std::numeric_limits<double>::infinity(), 1.0, 0.0});
    const SummaryReport sr = summarize(unit);
    const bool trivial = sr.auc == 1.0 && sr.f8 == 1.0 && sr.alpha_at_eps == 1.0 &&
                         std::abs(sr.median.lambda - 1.0) <= 1e-6;
    report("C7", "unit-square digests: auc=f8=alpha@eps=1, median ray at 1", trivial);
    EXPECT_TRUE(trivial);

    Matrix a(20, 20);
    for (std::size_t i = 0; i < 20; ++i)
        for (std::size_t j = i; j < 20; ++j) {
            const double v = rng.normal();
            a.at(i, j) = v;
            a.at(j, i) = v;
        }
    std::vector<double> evals;
    Matrix evecs;
    sym_eig(a, evals, evecs);
    double worst_residual = 0.0;
    for (std::size_t j = 0; j < 20; ++j)
        for (std::size_t i = 0; i < 20; ++i) {
            double av = 0.0;
            for (std::size_t k2 = 0; k2 < 20; ++k2) av += a.at(i, k2) * evecs.at(k2, j);
            worst_residual = std::max(worst_residual, std::abs(av - evals[j] * evecs.at(i, j)));
        }
    report("C7", "eigensolver residual <= 1e-8", worst_residual <= 1e-8);
    EXPECT_LE(worst_residual, 1e-8);

    ExperimentConfig cfg;
    cfg.suite = "shift";
    cfg.shifts = {0.38};
    cfg.methods = {Method::cov};
    cfg.n = 300;
    cfg.d = 8;
    cfg.repetitions = 2;
    cfg.lambdas = 21;
    cfg.n_gt = 4000;
    cfg.seed = kSeed;
    const std::string dir_a = work_dir("criterion7_repro_a");
    const std::string dir_b = work_dir("criterion7_repro_b");
    run_suite(cfg, dir_a);
    run_suite(cfg, dir_b);
    const bool reproducible = read_file(dir_a + "/iou_table.csv") == read_file(dir_b + "/iou_table.csv") &&
                              !read_file(dir_a + "/iou_table.csv").empty();
    report("C7", "suite outputs bitwise reproducible under a fixed seed", reproducible);
    EXPECT_TRUE(reproducible);
}

// ---------------------------------------------------------------------------
// 8. Scale statement: the image-model truncation study needs external
//    datasets and generator inference, which this artifact does not perform.
// ---------------------------------------------------------------------------
TEST(Acceptance, Criterion8_ScaleStatement) {
    std::puts(
        "[C8] The image-model truncation experiments require the FFHQ dataset and StyleGAN-v2\n"
        "[C8] inference to produce embeddings; neither ships with this artifact, so those\n"
        "[C8] figures are not reproduced at desk scale. The hybrid suite covers the same\n"
        "[C8] pipeline on synthetic surrogate embeddings with ordinal assertions (criterion 9).");
    report("C8", "statement emitted; surrogate-based coverage in criterion 9", true);
    SUCCEED();
}

// ---------------------------------------------------------------------------
// 9. Hybrid ordinal claims on surrogate embeddings: in the self-comparison
//    setting the adaptive-bandwidth family scores below the joint-ball family
//    from d=16 up; comparing reference to truncated at the largest d the
//    ordering flips.
// ---------------------------------------------------------------------------
TEST(Acceptance, Criterion9_HybridOrdinalClaims) {
    const std::string dir = work_dir("criterion9_hybrid");
    std::vector<std::pair<std::string, std::string>> files;
    for (const char* psi : {"0.3", "0.5", "0.9"}) {
        SurrogateConfig sg;
        sg.n = 4000;
        sg.d = 64;
        sg.spectrum = "decay:0.92";
        sg.psi = std::stod(psi);
        sg.seed = 21;
        const std::string path = dir + "/psi" + psi + ".npy";
        write_embeddings(gen_surrogate(sg), path);
        files.emplace_back(psi, path);
    }
    SurrogateConfig ref;
    ref.n = 4000;
    ref.d = 64;
    ref.spectrum = "decay:0.92";
    ref.psi = 1.0;
    ref.seed = 21;
    const std::string ref_path = dir + "/reference.npy";
    write_embeddings(gen_surrogate(ref), ref_path);

    ExperimentConfig cfg;
    cfg.suite = "hybrid";
    cfg.methods = {Method::knn, Method::ipr};
    cfg.split = false;
    cfg.n = 600;
    cfg.repetitions = 2;
    cfg.lambdas = 101;
    cfg.n_gt = 50000;
    cfg.seed = kSeed;
    cfg.reference_file = ref_path;
    cfg.psi_files = files;
    cfg.dims = {4, 16, 48, 64};

    cfg.setting = "b";
    const SuiteResult self_res = run_suite(cfg, dir + "/setting_b");
    bool b_pass = true;
    for (const auto& entry : self_res.summary["series"]) {
        const std::size_t d = entry["d"].get<std::size_t>();
        if (d < 16) continue;
        const double knn = entry["iou_of_mean"]["knn"].get<double>();
        const double ipr = entry["iou_of_mean"]["ipr"].get<double>();
        char label[128];
        std::snprintf(label, sizeof(label), "setting b, d=%zu: ipr %.3f < knn %.3f", d, ipr, knn);
        report("C9", label, ipr < knn);
        b_pass &= ipr < knn;
    }
    EXPECT_TRUE(b_pass);

    cfg.setting = "a";
    const SuiteResult trunc_res = run_suite(cfg, dir + "/setting_a");
    const auto& last = trunc_res.summary["series"].back();
    const double knn_a = last["iou_of_mean"]["knn"].get<double>();
    const double ipr_a = last["iou_of_mean"]["ipr"].get<double>();
    char label[128];
    std::snprintf(label, sizeof(label), "setting a, d=%zu: ipr %.3f >= knn %.3f",
                  last["d"].get<std::size_t>(), ipr_a, knn_a);
    report("C9", label, ipr_a >= knn_a);
    EXPECT_GE(ipr_a, knn_a);
}
