#pragma once

// Common front-end for the four classifier families plus balanced-accuracy
// grid search over stratified inner folds.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "gazeclf/errors.hpp"
#include "gazeclf/folds.hpp"
#include "gazeclf/gboost.hpp"
#include "gazeclf/gp_laplace.hpp"
#include "gazeclf/knn.hpp"
#include "gazeclf/linalg.hpp"
#include "gazeclf/logreg.hpp"
#include "gazeclf/rng.hpp"

namespace gazeclf {

enum class Family { knn, logreg, gp, gboost };

inline std::string to_string(Family f) {
    switch (f) {
        case Family::knn: return "knn";
        case Family::logreg: return "logreg";
        case Family::gp: return "gp";
        case Family::gboost: return "gboost";
    }
    return "?";
}

inline Family parse_family(const std::string& s) {
    if (s == "knn") return Family::knn;
    if (s == "logreg") return Family::logreg;
    if (s == "gp") return Family::gp;
    if (s == "gboost") return Family::gboost;
    fail(ErrorKind::Config, "unknown classifier family '" + s + "'");
}

/// One grid point. Only the fields of the owning family are read.
struct Hyperparams {
    int k = 1;                          // knn
    double l2 = 1.0;                    // logreg
    double bandwidth_scale = 1.0;       // gp, multiple of the median pairwise training distance
    double signal_variance = 1.0;       // gp
    int n_trees = 50;                   // gboost
    int depth = 1;                      // gboost
    double learning_rate = 0.1;         // gboost

    bool operator==(const Hyperparams&) const = default;
};

inline std::string describe(Family family, const Hyperparams& h) {
    std::ostringstream os;
    os.precision(6);
    switch (family) {
        case Family::knn: os << "k=" << h.k; break;
        case Family::logreg: os << "l2=" << h.l2; break;
        case Family::gp: os << "bandwidth_scale=" << h.bandwidth_scale << ";signal_variance=" << h.signal_variance; break;
        case Family::gboost: os << "trees=" << h.n_trees << ";depth=" << h.depth << ";lr=" << h.learning_rate; break;
    }
    return os.str();
}

/// Per-family axis values; the grid is their Cartesian product, iterated
/// with the later-listed axis varying fastest:
///   knn [k], logreg [l2], gp [bandwidth_scale, signal_variance],
///   gboost [n_trees, depth, learning_rate].
struct HyperGrid {
    std::vector<int> k{1, 3, 5, 7};
    std::vector<double> l2{0.01, 0.1, 1.0, 10.0};
    std::vector<double> bandwidth_scale{0.5, 1.0, 2.0};
    std::vector<double> signal_variance{1.0};
    std::vector<int> n_trees{50, 200};
    std::vector<int> depth{1, 2, 3};
    std::vector<double> learning_rate{0.1};
};

struct ClassifierSpec {
    Family family = Family::logreg;
    HyperGrid grid;

    std::vector<Hyperparams> points() const {
        std::vector<Hyperparams> out;
        switch (family) {
            case Family::knn:
                for (int k : grid.k) out.push_back({.k = k});
                break;
            case Family::logreg:
                for (double l2 : grid.l2) out.push_back({.l2 = l2});
                break;
            case Family::gp:
                for (double b : grid.bandwidth_scale)
                    for (double s : grid.signal_variance) out.push_back({.bandwidth_scale = b, .signal_variance = s});
                break;
            case Family::gboost:
                for (int t : grid.n_trees)
                    for (int d : grid.depth)
                        for (double lr : grid.learning_rate) out.push_back({.n_trees = t, .depth = d, .learning_rate = lr});
                break;
        }
        require(!out.empty(), ErrorKind::Config, "hyperparameter grid for " + to_string(family) + " is empty");
        for (const auto& p : out) validate(p);
        return out;
    }

    void validate(const Hyperparams& h) const {
        switch (family) {
            case Family::knn: require(h.k >= 1, ErrorKind::Config, "knn k must be >= 1"); break;
            case Family::logreg: require(h.l2 >= 0.0, ErrorKind::Config, "logreg l2 must be >= 0"); break;
            case Family::gp:
                require(h.bandwidth_scale > 0.0 && h.signal_variance > 0.0, ErrorKind::Config,
                        "gp kernel parameters must be positive");
                break;
            case Family::gboost: GBoostParams{h.n_trees, h.depth, h.learning_rate}.validate(); break;
        }
    }
};

struct TrainedModel {
    Family family = Family::logreg;
    Hyperparams hyperparams;
    int feature_dimension = 0;
    std::variant<KnnModel, LogRegModel, GpModel, GBoostModel> fitted;
};

/// Median of the pairwise Euclidean distances between distinct rows; 1 when
/// every pair coincides.
inline double median_pairwise_distance(const Matrix& x) {
    const Matrix d2 = squared_distances(x, x);
    std::vector<double> d;
    d.reserve(static_cast<std::size_t>(x.rows() * (x.rows() - 1) / 2));
    for (Eigen::Index i = 0; i < x.rows(); ++i)
        for (Eigen::Index j = i + 1; j < x.rows(); ++j) d.push_back(std::sqrt(d2(i, j)));
    if (d.empty()) return 1.0;
    const auto mid = d.begin() + static_cast<std::ptrdiff_t>(d.size() / 2);
    std::nth_element(d.begin(), mid, d.end());
    double median = *mid;
    if (d.size() % 2 == 0) median = 0.5 * (median + *std::max_element(d.begin(), mid));
    return median > 0.0 ? median : 1.0;
}

/// Fits one family. For gp, `bandwidth_reference` multiplies bandwidth_scale
/// (grid search passes the median pairwise distance of its training split).
inline TrainedModel fit_classifier(Family family, const Hyperparams& h, const Matrix& x, const std::vector<int>& y,
                                   double bandwidth_reference = 1.0) {
    TrainedModel m{family, h, static_cast<int>(x.cols()), KnnModel{}};
    switch (family) {
        case Family::knn: m.fitted = fit_knn(x, y, h.k); break;
        case Family::logreg: m.fitted = fit_logreg(x, y, h.l2); break;
        case Family::gp:
            m.fitted = fit_gp_laplace(x, y, h.bandwidth_scale * bandwidth_reference, h.signal_variance);
            break;
        case Family::gboost: m.fitted = fit_gboost(x, y, {h.n_trees, h.depth, h.learning_rate}); break;
    }
    return m;
}

inline std::vector<double> predict_proba(const TrainedModel& model, const Matrix& rows) {
    require(rows.cols() == model.feature_dimension, ErrorKind::DimensionMismatch,
            "model expects " + std::to_string(model.feature_dimension) + " features, got " + std::to_string(rows.cols()));
    return std::visit(
        [&](const auto& fitted) -> std::vector<double> {
            using T = std::decay_t<decltype(fitted)>;
            if constexpr (std::is_same_v<T, KnnModel>) return predict_proba_knn(fitted, rows);
            else if constexpr (std::is_same_v<T, LogRegModel>) return predict_proba_logreg(fitted, rows);
            else if constexpr (std::is_same_v<T, GpModel>) return predict_proba_gp(fitted, rows);
            else return predict_proba_gboost(fitted, rows);
        },
        model.fitted);
}

/// The single thresholding rule shared by every family.
inline int predicted_label(double probability) { return probability >= 0.5 ? 1 : 0; }

inline std::vector<int> predicted_labels(const std::vector<double>& probabilities) {
    std::vector<int> out;
    out.reserve(probabilities.size());
    for (double p : probabilities) out.push_back(predicted_label(p));
    return out;
}

/// (sensitivity + specificity) / 2 with class 1 as positive.
inline double balanced_accuracy(const std::vector<int>& truth, const std::vector<int>& predicted) {
    require(truth.size() == predicted.size(), ErrorKind::DimensionMismatch, "label vectors differ in length");
    std::size_t tp = 0, fn = 0, tn = 0, fp = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        if (truth[i]) (predicted[i] ? tp : fn)++;
        else (predicted[i] ? fp : tn)++;
    }
    require(tp + fn > 0 && tn + fp > 0, ErrorKind::SingleClassTruth, "balanced accuracy needs both classes in truth");
    return 0.5 * (static_cast<double>(tp) / static_cast<double>(tp + fn) +
                  static_cast<double>(tn) / static_cast<double>(tn + fp));
}

struct SearchResult {
    Hyperparams best_hyperparams;
    double best_inner_score = 0.0;
    std::vector<double> scores;  // mean inner balanced accuracy per grid point, grid order
    TrainedModel model;
};

namespace detail {

/// Holdout balanced accuracy of every grid point on one inner split. Work
/// shared between grid points (neighbour rankings, distance and Gram
/// matrices, boosting prefixes) is done once; each score equals what a
/// separate fit_classifier + predict_proba would give.
inline std::vector<double> split_scores(Family family, const std::vector<Hyperparams>& grid, const Matrix& tr_x,
                                        const std::vector<int>& tr_y, const Matrix& te_x, const std::vector<int>& te_y,
                                        double reference) {
    std::vector<double> out(grid.size());
    auto score = [&](const std::vector<double>& p) { return balanced_accuracy(te_y, predicted_labels(p)); };
    switch (family) {
        case Family::knn: {
            std::vector<int> ks;
            for (const auto& h : grid) ks.push_back(h.k);
            const auto probs = predict_proba_knn_multi(tr_x, tr_y, te_x, ks);
            for (std::size_t g = 0; g < grid.size(); ++g) out[g] = score(probs[g]);
            break;
        }
        case Family::logreg: {
            const Matrix gram = tr_x * tr_x.transpose();
            for (std::size_t g = 0; g < grid.size(); ++g)
                out[g] = score(predict_proba_logreg(fit_logreg(tr_x, tr_y, grid[g].l2, {}, &gram), te_x));
            break;
        }
        case Family::gp: {
            const Matrix train_sq = squared_distances(tr_x, tr_x);
            const Matrix cross_sq = squared_distances(te_x, tr_x);
            for (std::size_t g = 0; g < grid.size(); ++g) {
                const auto model = fit_gp_laplace_sq(tr_x, train_sq, tr_y, grid[g].bandwidth_scale * reference,
                                                     grid[g].signal_variance);
                out[g] = score(predict_gp_sq(model, cross_sq).probability);
            }
            break;
        }
        case Family::gboost: {
            // One fit per (depth, learning rate) with the most trees; smaller
            // tree counts are prefixes of it.
            std::vector<char> done(grid.size(), 0);
            for (std::size_t g = 0; g < grid.size(); ++g) {
                if (done[g]) continue;
                int most = 0;
                for (std::size_t j = g; j < grid.size(); ++j)
                    if (grid[j].depth == grid[g].depth && grid[j].learning_rate == grid[g].learning_rate)
                        most = std::max(most, grid[j].n_trees);
                const auto full = fit_gboost(tr_x, tr_y, {most, grid[g].depth, grid[g].learning_rate});
                for (std::size_t j = g; j < grid.size(); ++j) {
                    if (grid[j].depth != grid[g].depth || grid[j].learning_rate != grid[g].learning_rate) continue;
                    out[j] = score(predict_proba_gboost(truncate_gboost(full, grid[j].n_trees), te_x));
                    done[j] = 1;
                }
            }
            break;
        }
    }
    return out;
}

}  // namespace detail

/// Averages inner-fold balanced accuracy for every grid point, keeps the
/// first best in grid order and refits it on the whole training split.
/// For gp the bandwidth reference is the median pairwise distance of the
/// whole split `x`, reused unchanged by the inner fits and the refit.
inline SearchResult grid_search(const ClassifierSpec& spec, const Matrix& x, const std::vector<int>& y, int inner_folds,
                                std::uint64_t seed) {
    require(inner_folds >= 2, ErrorKind::InvalidArgument, "inner_folds must be >= 2");
    const auto grid = spec.points();
    const FoldPlan plan = stratified_folds(y, inner_folds, seed);
    const double reference = spec.family == Family::gp ? median_pairwise_distance(x) : 1.0;

    std::vector<double> totals(grid.size(), 0.0);
    for (int f = 0; f < inner_folds; ++f) {
        const auto tr = plan.train_rows(f);
        const auto te = plan.test_rows(f);
        const auto scores =
            detail::split_scores(spec.family, grid, select_rows(x, tr), select(y, tr), select_rows(x, te), select(y, te), reference);
        for (std::size_t g = 0; g < grid.size(); ++g) totals[g] += scores[g];
    }

    SearchResult result;
    double best = -1.0;
    std::size_t best_index = 0;
    for (std::size_t g = 0; g < grid.size(); ++g) {
        const double score = totals[g] / inner_folds;
        result.scores.push_back(score);
        if (score > best) {
            best = score;
            best_index = g;
        }
    }
    result.best_hyperparams = grid[best_index];
    result.best_inner_score = best;
    result.model = fit_classifier(spec.family, grid[best_index], x, y, reference);
    return result;
}

// ---------------------------------------------------------------------------
// JSON layout: {"family": "...", "hyperparams": {...}, "feature_dimension": d, "params": {...}}
//   knn:    params = {"k", "train": [[..]], "labels": [..]}
//   logreg: params = {"weights": [..], "bias", "converged", "iterations"}
//   gp:     params = {"bandwidth", "signal_variance", "jitter", "train", "latent_mode",
//                     "score", "sqrt_w", "chol_lower"}
//   gboost: params = {"initial_margin", "learning_rate", "trees": [[{feature, threshold, left, right, value}]]}
// ---------------------------------------------------------------------------

inline nlohmann::json to_json(const Hyperparams& h) {
    return {{"k", h.k},
            {"l2", h.l2},
            {"bandwidth_scale", h.bandwidth_scale},
            {"signal_variance", h.signal_variance},
            {"n_trees", h.n_trees},
            {"depth", h.depth},
            {"learning_rate", h.learning_rate}};
}

inline Hyperparams hyperparams_from_json(const nlohmann::json& j) {
    Hyperparams h;
    h.k = j.value("k", h.k);
    h.l2 = j.value("l2", h.l2);
    h.bandwidth_scale = j.value("bandwidth_scale", h.bandwidth_scale);
    h.signal_variance = j.value("signal_variance", h.signal_variance);
    h.n_trees = j.value("n_trees", h.n_trees);
    h.depth = j.value("depth", h.depth);
    h.learning_rate = j.value("learning_rate", h.learning_rate);
    return h;
}

namespace detail {

inline nlohmann::json vec_json(const Vector& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

inline Matrix mat_from(const nlohmann::json& j) {
    const auto rows = static_cast<Eigen::Index>(j.size());
    const Eigen::Index cols = rows ? static_cast<Eigen::Index>(j.at(0).size()) : 0;
    Matrix m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r)
        for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = j.at(r).at(c).get<double>();
    return m;
}

inline nlohmann::json mat_json(const Matrix& m) {
    auto rows = nlohmann::json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) rows.push_back(vec_json(m.row(r).transpose()));
    return rows;
}

inline Vector vec_from(const nlohmann::json& j) {
    const auto v = j.get<std::vector<double>>();
    return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

}  // namespace detail

inline nlohmann::json to_json(const TrainedModel& m) {
    using namespace detail;
    nlohmann::json params = std::visit(
        [](const auto& f) -> nlohmann::json {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, KnnModel>) {
                return {{"k", f.k}, {"train", mat_json(f.train)}, {"labels", f.labels}};
            } else if constexpr (std::is_same_v<T, LogRegModel>) {
                return {{"weights", vec_json(f.weights)}, {"bias", f.bias}, {"converged", f.converged},
                        {"iterations", f.iterations}};
            } else if constexpr (std::is_same_v<T, GpModel>) {
                return {{"bandwidth", f.bandwidth},       {"signal_variance", f.signal_variance},
                        {"jitter", f.jitter},             {"train", mat_json(f.train)},
                        {"latent_mode", vec_json(f.latent_mode)}, {"score", vec_json(f.score)},
                        {"sqrt_w", vec_json(f.sqrt_w)},   {"chol_lower", mat_json(f.chol_lower)}};
            } else {
                auto trees = nlohmann::json::array();
                for (const auto& t : f.trees) {
                    auto nodes = nlohmann::json::array();
                    for (const auto& n : t.nodes)
                        nodes.push_back({{"feature", n.feature}, {"threshold", n.threshold}, {"left", n.left},
                                         {"right", n.right}, {"value", n.value}});
                    trees.push_back(std::move(nodes));
                }
                return {{"initial_margin", f.initial_margin}, {"learning_rate", f.learning_rate}, {"trees", trees}};
            }
        },
        m.fitted);
    return {{"family", to_string(m.family)},
            {"hyperparams", to_json(m.hyperparams)},
            {"feature_dimension", m.feature_dimension},
            {"params", params}};
}

inline TrainedModel trained_model_from_json(const nlohmann::json& j) {
    using namespace detail;
    TrainedModel m;
    m.family = parse_family(j.at("family").get<std::string>());
    m.hyperparams = hyperparams_from_json(j.at("hyperparams"));
    m.feature_dimension = j.at("feature_dimension").get<int>();
    const auto& p = j.at("params");
    switch (m.family) {
        case Family::knn: {
            KnnModel k{mat_from(p.at("train")), p.at("labels").get<std::vector<int>>(), p.at("k").get<int>()};
            if (k.train.rows() == 0) k.train.resize(0, m.feature_dimension);
            m.fitted = std::move(k);
            break;
        }
        case Family::logreg: {
            LogRegModel l;
            l.weights = vec_from(p.at("weights"));
            l.bias = p.at("bias").get<double>();
            l.converged = p.at("converged").get<bool>();
            l.iterations = p.at("iterations").get<int>();
            m.fitted = std::move(l);
            break;
        }
        case Family::gp: {
            GpModel g;
            g.bandwidth = p.at("bandwidth").get<double>();
            g.signal_variance = p.at("signal_variance").get<double>();
            g.jitter = p.at("jitter").get<double>();
            g.train = mat_from(p.at("train"));
            g.latent_mode = vec_from(p.at("latent_mode"));
            g.score = vec_from(p.at("score"));
            g.sqrt_w = vec_from(p.at("sqrt_w"));
            g.chol_lower = mat_from(p.at("chol_lower"));
            m.fitted = std::move(g);
            break;
        }
        case Family::gboost: {
            GBoostModel g;
            g.initial_margin = p.at("initial_margin").get<double>();
            g.learning_rate = p.at("learning_rate").get<double>();
            g.feature_dimension = m.feature_dimension;
            for (const auto& tj : p.at("trees")) {
                RegressionTree t;
                for (const auto& nj : tj)
                    t.nodes.push_back({nj.at("feature").get<int>(), nj.at("threshold").get<double>(),
                                       nj.at("left").get<int>(), nj.at("right").get<int>(), nj.at("value").get<double>()});
                g.trees.push_back(std::move(t));
            }
            m.fitted = std::move(g);
            break;
        }
    }
    return m;
}

}  // namespace gazeclf
