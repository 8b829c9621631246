// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.
//
//   acceptance --work-dir DIR [--jobs N] [--only 1,2,...]
//
// Criteria 5 and 6 drive the gazeclf binary; DIR holds their outputs and is
// wiped first so no cached unit is reused.

#include <sys/wait.h>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>

#include <nlohmann/json.hpp>

#include "gazeclf/classifier.hpp"
#include "gazeclf/dimred.hpp"
#include "gazeclf/encoding.hpp"
#include "gazeclf/evaluation.hpp"
#include "gazeclf/folds.hpp"
#include "gazeclf/metrics.hpp"
#include "gazeclf/synth.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using namespace gazeclf;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void check(bool ok, const std::string& what) {
        if (!ok) {
            if (pass) detail.clear();
            pass = false;
            detail += (detail.empty() ? "" : "; ") + what;
        }
    }
};

std::string fmt(double v, int prec = 3) {
    std::ostringstream os;
    os << std::setprecision(prec) << v;
    return os.str();
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int run_cli(const std::string& args, const fs::path& log) {
    const std::string cmd = std::string(GAZECLF_CLI_PATH) + " " + args + " >" + log.string() + ".out 2>" + log.string() + ".err";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

// ---------------------------------------------------------------------------

Outcome criterion1() {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(1001);
    std::uniform_int_distribution<int> div(1, 20), tg(1, 20), nfix(0, 80);
    int bad_oracle = 0, bad_mass = 0, bad_marg = 0;
    for (int c = 0; c < 1000; ++c) {
        const auto t = oracle::random_trial(rng, nfix(rng));
        const EncodingConfig cfg{div(rng), div(rng), tg(rng)};
        const auto v = encode_trial(t, cfg);
        if (v.values != oracle::encode(t, cfg.x_div, cfg.y_div, cfg.t_groups)) ++bad_oracle;
        if (v.values.size() != cfg.length() || v.total() != t.fixations.size()) ++bad_mass;
        const auto flat = encode_trial(t, {cfg.x_div, cfg.y_div, 1});
        const std::size_t cells = cfg.cells();
        for (std::size_t cell = 0; cell < cells; ++cell) {
            std::uint64_t s = 0;
            for (int g = 0; g < cfg.t_groups; ++g) s += v.values[static_cast<std::size_t>(g) * cells + cell];
            if (s != flat.values[cell]) {
                ++bad_marg;
                break;
            }
        }
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    o.check(bad_oracle == 0, std::to_string(bad_oracle) + " oracle mismatches");
    o.check(bad_mass == 0, std::to_string(bad_mass) + " mass violations");
    o.check(bad_marg == 0, std::to_string(bad_marg) + " marginalization violations");
    o.check(secs < 10.0, "took " + fmt(secs) + " s");
    if (o.pass) o.detail = "1000 cases match the oracle, invariants hold, " + fmt(secs, 2) + " s";
    return o;
}

Outcome criterion2() {
    Outcome o;
    std::mt19937_64 rng(2002);
    double worst = 0.0;
    for (int c = 0; c < 500; ++c) {
        const std::size_t n = 2 + rng() % 80;
        const int levels = 1 + static_cast<int>(rng() % 10);
        std::vector<double> s(n);
        std::vector<int> y(n);
        for (std::size_t i = 0; i < n; ++i) {
            s[i] = c % 2 ? static_cast<double>(rng() % levels) : std::uniform_real_distribution<>(0, 1)(rng);
            y[i] = static_cast<int>(rng() % 2);
        }
        y[0] = 0;
        y[1] = 1;
        worst = std::max(worst, std::abs(roc_auc(s, y) - oracle::auc_pairs(s, y)));
    }
    const double example = roc_auc({0.1, 0.4, 0.35, 0.8}, {0, 0, 1, 1});
    o.check(worst <= 1e-12, "max deviation " + fmt(worst));
    o.check(example == 0.75, "worked example gave " + fmt(example, 17));
    if (o.pass) o.detail = "500 cases, max deviation " + fmt(worst) + ", worked example 0.75";
    return o;
}

double numeric_grad(const Matrix& x, const std::vector<int>& y, double l2, Vector w, double b, Eigen::Index j) {
    const double h = 1e-6;
    if (j < w.size()) {
        Vector wp = w, wm = w;
        wp(j) += h;
        wm(j) -= h;
        return (logreg_objective(x, y, l2, wp, b) - logreg_objective(x, y, l2, wm, b)) / (2 * h);
    }
    return (logreg_objective(x, y, l2, w, b + h) - logreg_objective(x, y, l2, w, b - h)) / (2 * h);
}

Outcome criterion3() {
    Outcome o;
    std::mt19937_64 rng(3003);

    double grad_err = 0.0;
    for (int c = 0; c < 20; ++c) {
        const int n = 10 + c, d = 1 + c % 6;
        const Matrix x = oracle::random_matrix(rng, n, d);
        std::vector<int> y;
        for (int i = 0; i < n; ++i) y.push_back(static_cast<int>(rng() % 2));
        const Vector w = oracle::random_matrix(rng, d, 1);
        const double b = std::normal_distribution<>(0, 1)(rng);
        const double l2 = 0.05 * c;
        const Vector g = logreg_gradient(x, y, l2, w, b);
        for (Eigen::Index j = 0; j <= d; ++j) {
            const double fd = numeric_grad(x, y, l2, w, b, j);
            grad_err = std::max(grad_err, std::abs(g(j) - fd) / std::max(1.0, std::abs(fd)));
        }
    }

    double residual = 0.0;
    for (int c = 0; c < 20; ++c) {
        const int n = 12;
        Matrix x = oracle::random_matrix(rng, n, 3);
        std::vector<int> y;
        for (int i = 0; i < n; ++i) {
            y.push_back(i % 2);
            if (i % 2) x.row(i).array() += 0.4 * (c % 5);
        }
        const auto m = fit_gp_laplace(x, y, 0.5 + 0.2 * (c % 7), 0.5 + (c % 3));
        Matrix k = gp_kernel(x, x, 0.5 + 0.2 * (c % 7), 0.5 + (c % 3));
        k.diagonal().array() += m.jitter;
        Vector grad(n);
        for (int i = 0; i < n; ++i) grad(i) = y[static_cast<std::size_t>(i)] - sigmoid(m.latent_mode(i));
        residual = std::max(residual, (m.latent_mode - k * grad).cwiseAbs().maxCoeff());
    }

    const Matrix xr = oracle::random_matrix(rng, 30, 5);
    const auto pca = fit_pca(xr, ReductionSpec::fixed(ReductionMethod::pca, 5));
    const double recon = (reconstruct_pca(pca, transform_pca(pca, xr)) - xr).cwiseAbs().maxCoeff();

    const Matrix x6 = oracle::random_matrix(rng, 6, 3);
    const auto p6 = fit_pca(x6, ReductionSpec::fixed(ReductionMethod::pca, 3));
    const auto k6 = fit_kpca(x6, ReductionSpec::fixed(ReductionMethod::kpca, 3), 1.0, KernelKind::linear);
    const Matrix zp = transform_pca(p6, x6);
    const Matrix zk = transform_kpca(k6, x6);
    double kpca_err = zp.cols() == zk.cols() ? 0.0 : 1.0;
    for (Eigen::Index j = 0; j < std::min(zp.cols(), zk.cols()); ++j)
        kpca_err = std::max(kpca_err, std::min((zp.col(j) - zk.col(j)).cwiseAbs().maxCoeff(),
                                               (zp.col(j) + zk.col(j)).cwiseAbs().maxCoeff()));

    o.check(grad_err < 1e-4, "gradient rel. error " + fmt(grad_err));
    o.check(residual < 1e-6, "Laplace residual " + fmt(residual));
    o.check(recon < 1e-6, "PCA reconstruction " + fmt(recon));
    o.check(kpca_err < 1e-8, "linear KPCA vs PCA " + fmt(kpca_err));
    if (o.pass)
        o.detail = "gradient " + fmt(grad_err) + ", Laplace residual " + fmt(residual) + ", PCA reconstruction " +
                   fmt(recon) + ", linear KPCA " + fmt(kpca_err);
    return o;
}

Outcome criterion4() {
    Outcome o;
    std::vector<int> y(55, 0);
    y.insert(y.end(), 55, 1);
    int bad_folds = 0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const auto plan = stratified_folds(y, 10, seed);
        for (int f = 0; f < 10; ++f) {
            int pos = 0, neg = 0;
            for (auto i : plan.test_rows(f)) (y[i] ? pos : neg)++;
            if (pos != 5 || neg != 5) ++bad_folds;
        }
    }

    std::mt19937_64 rng(4004);
    Matrix x = oracle::random_matrix(rng, 40, 8);
    std::vector<int> yl;
    for (int i = 0; i < 40; ++i) yl.push_back(i % 2);
    const auto plan = stratified_folds(yl, 4, 7);
    int leaks = 0;
    for (const auto& spec : default_extractions()) {
        for (int f = 0; f < 4; ++f) {
            const auto clean = prepare_fold(x, yl, plan, f, spec);
            Matrix poisoned = x;
            for (auto i : plan.test_rows(f)) poisoned.row(static_cast<Eigen::Index>(i)).setConstant(1e6);
            const auto dirty = prepare_fold(poisoned, yl, plan, f, spec);
            const Matrix holdout = select_rows(x, plan.test_rows(f));
            if (clean.train_x != dirty.train_x || dirty.reduction.transform(holdout) != clean.test_x) ++leaks;
        }
    }

    double acc_err = 0.0;
    for (int c = 0; c < 500; ++c) {
        const std::size_t n = 4 + rng() % 40;
        std::vector<double> p(n);
        std::vector<int> t(n);
        for (std::size_t i = 0; i < n; ++i) {
            p[i] = std::uniform_real_distribution<>(0, 1)(rng);
            t[i] = static_cast<int>(rng() % 2);
        }
        t[0] = 0;
        t[1] = 1;
        const double npos = static_cast<double>(std::count(t.begin(), t.end(), 1));
        const double nneg = static_cast<double>(n) - npos;
        const auto m = score_predictions(p, t);
        acc_err = std::max(acc_err, std::abs(m.accuracy - (m.sensitivity * npos + m.specificity * nneg) / n));
    }

    o.check(bad_folds == 0, std::to_string(bad_folds) + " folds are not 5+5");
    o.check(leaks == 0, std::to_string(leaks) + " leaking fold reductions");
    o.check(acc_err <= 1e-12, "accuracy reconciliation " + fmt(acc_err));
    if (o.pass)
        o.detail = "5+5 in all 200 folds, no leaks across 9 extractions, accuracy reconciles to " + fmt(acc_err);
    return o;
}

Outcome criterion5(const fs::path& work, int jobs) {
    Outcome o;
    const fs::path dir = work / "full";
    fs::create_directories(dir);
    const fs::path cfg = work / "full.json";
    std::ofstream(cfg) << nlohmann::json{{"synth", nlohmann::json::object()}, {"output_dir", dir.string()}}.dump(2);

    const auto t0 = std::chrono::steady_clock::now();
    const int rc = run_cli("sweep --config " + cfg.string() + " --jobs " + std::to_string(jobs), work / "full");
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (rc != 0) {
        o.check(false, "sweep exited with " + std::to_string(rc) + ": " + slurp(work / "full.err"));
        return o;
    }

    std::map<std::pair<std::string, std::string>, double> best;
    for (const auto& b : nlohmann::json::parse(slurp(dir / "best_per_classifier.json")))
        best[{b.at("classifier").get<std::string>(), b.at("data_type").get<std::string>()}] = b.at("mean_auc").get<double>();
    auto auc = [&](const std::string& f, const std::string& d) {
        const auto it = best.find({f, d});
        return it == best.end() ? -1.0 : it->second;
    };

    std::ostringstream summary;
    int wins = 0;
    for (const char* f : {"gp", "knn", "logreg", "gboost"}) {
        const double e = auc(f, "encoded"), t = auc(f, "traditional");
        wins += e >= t;
        summary << f << " " << fmt(e) << "/" << fmt(t) << ", ";
    }
    const unsigned cores = std::thread::hardware_concurrency();
    summary << "sweep " << fmt(secs, 4) << " s at --jobs " << jobs << " on " << cores << " core(s)";

    o.check(auc("gp", "encoded") >= 0.95, "gp encoded best mean AUC " + fmt(auc("gp", "encoded")) + " < 0.95");
    o.check(auc("logreg", "encoded") >= 0.95, "logreg encoded best mean AUC " + fmt(auc("logreg", "encoded")) + " < 0.95");
    o.check(wins >= 3, "encoded >= traditional for only " + std::to_string(wins) + " of 4 families");
    o.check(secs < 15 * 60, "sweep took " + fmt(secs, 4) + " s, limit 900 s");
    o.detail = (o.pass ? "" : o.detail + " | ") + "encoded/traditional best mean AUC: " + summary.str();
    return o;
}

Outcome criterion6(const fs::path& work, int jobs) {
    Outcome o;
    // Two seeds and a cut-down grid over every family and both data types.
    auto config = [&](const fs::path& out) {
        return nlohmann::json{{"synth", {{"trials_per_class", 20}}},
                              {"output_dir", out.string()},
                              {"k_folds", 5},
                              {"seeds", {1, 2}},
                              {"sweep",
                               {{"grid_sizes", {5, 10}},
                                {"t_groups", {3}},
                                {"extractions", {"none", "pca-2", "kpca-90%"}}}},
                              {"grids",
                               {{"knn", {{"k", {1, 5}}}},
                                {"logreg", {{"l2", {0.1, 1.0}}}},
                                {"gp", {{"bandwidth_scale", {1.0}}}},
                                {"gboost", {{"n_trees", {20}}, {"depth", {2}}}}}}};
    };
    std::string raw[2];
    for (int r = 0; r < 2; ++r) {
        const fs::path dir = work / ("determinism_" + std::to_string(r));
        fs::create_directories(dir);
        const fs::path cfg = work / ("determinism_" + std::to_string(r) + ".json");
        std::ofstream(cfg) << config(dir).dump(2);
        const int rc = run_cli("sweep --config " + cfg.string() + " --jobs " + std::to_string(jobs), dir);
        if (rc != 0) {
            o.check(false, "sweep " + std::to_string(r) + " exited with " + std::to_string(rc));
            return o;
        }
        raw[r] = slurp(dir / "raw_records.csv");
    }
    o.check(!raw[0].empty(), "raw_records.csv is empty");
    o.check(raw[0] == raw[1], "raw_records.csv differs between runs");
    if (o.pass) o.detail = "two sweeps produced identical raw_records.csv (" + std::to_string(raw[0].size()) + " bytes)";
    return o;
}

}  // namespace

int main(int argc, char** argv) {
    fs::path work = fs::temp_directory_path() / "gazeclf_acceptance";
    int jobs = 4;
    std::set<int> only;
    for (int i = 1; i < argc; ++i) {
        const std::string a = argv[i];
        if (a == "--work-dir" && i + 1 < argc) {
            work = argv[++i];
        } else if (a == "--jobs" && i + 1 < argc) {
            jobs = std::stoi(argv[++i]);
        } else if (a == "--only" && i + 1 < argc) {
            std::stringstream ss(argv[++i]);
            for (std::string item; std::getline(ss, item, ',');) only.insert(std::stoi(item));
        } else {
            std::cerr << "usage: acceptance [--work-dir DIR] [--jobs N] [--only 1,2,...]\n";
            return 2;
        }
    }
    fs::remove_all(work);
    fs::create_directories(work);

    const std::vector<std::function<Outcome()>> criteria{
        criterion1, criterion2, criterion3, criterion4, [&] { return criterion5(work, jobs); },
        [&] { return criterion6(work, jobs); }};

    bool all = true;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const int id = static_cast<int>(i + 1);
        if (!only.empty() && !only.count(id)) continue;
        Outcome o;
        try {
            o = criteria[i]();
        } catch (const std::exception& e) {
            o.check(false, std::string("exception: ") + e.what());
        }
        all = all && o.pass;
        std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << id << ": " << o.detail << std::endl;
    }
    return all ? 0 : 1;
}
