#pragma once

// Gradient boosting with logistic loss.
//
// Each stage fits a depth-limited regression tree to the negative gradient
// g = t - p of the current margin. Splits minimise the squared error of that
// fit (equivalently maximise G_L^2/n_L + G_R^2/n_R), searched exhaustively
// over midpoints between consecutive distinct feature values in the node.
// Ties go to the lowest feature index, then the lowest threshold. Leaf
// values are Newton steps  sum(g) / (sum(p(1-p)) + 1e-12),  scaled by the
// learning rate.
//
// Columns are held as value-sorted lists of their non-zero entries, with
// zeros handled implicitly, so sparse count encodings cost O(nnz) per level.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "gazeclf/errors.hpp"
#include "gazeclf/linalg.hpp"
#include "gazeclf/logreg.hpp"

namespace gazeclf {

struct TreeNode {
    int feature = -1;  // -1 marks a leaf
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    double value = 0.0;  // leaf output (already scaled by the learning rate)
};

struct RegressionTree {
    std::vector<TreeNode> nodes;  // nodes[0] is the root

    /// Leaf value for row r of x. Reads x in place; a row view of a
    /// column-major matrix would be copied.
    double evaluate(const Matrix& x, Eigen::Index r) const {
        int i = 0;
        while (nodes[static_cast<std::size_t>(i)].feature >= 0) {
            const auto& n = nodes[static_cast<std::size_t>(i)];
            i = x(r, n.feature) <= n.threshold ? n.left : n.right;
        }
        return nodes[static_cast<std::size_t>(i)].value;
    }
};

struct GBoostModel {
    double initial_margin = 0.0;
    double learning_rate = 0.1;
    int feature_dimension = 0;
    std::vector<RegressionTree> trees;
    std::vector<double> training_loss;  // mean logistic loss after each stage (index 0 = initial)
};

struct GBoostParams {
    int n_trees = 50;
    int depth = 2;
    double learning_rate = 0.1;

    void validate() const {
        require(n_trees >= 1, ErrorKind::InvalidArgument, "n_trees must be >= 1");
        require(depth >= 1, ErrorKind::InvalidArgument, "depth must be >= 1");
        require(learning_rate > 0.0 && learning_rate <= 1.0, ErrorKind::InvalidArgument,
                "learning_rate must lie in (0,1]");
    }
};

namespace detail {

struct SparseColumn {
    std::vector<double> values;  // sorted ascending, zeros excluded
    std::vector<std::uint32_t> rows;
};

inline std::vector<SparseColumn> sorted_columns(const Matrix& x) {
    std::vector<SparseColumn> cols(static_cast<std::size_t>(x.cols()));
    std::vector<std::pair<double, std::uint32_t>> buf;
    for (Eigen::Index c = 0; c < x.cols(); ++c) {
        buf.clear();
        for (Eigen::Index r = 0; r < x.rows(); ++r) {
            const double v = x(r, c);
            if (v != 0.0) buf.emplace_back(v, static_cast<std::uint32_t>(r));
        }
        std::sort(buf.begin(), buf.end());
        auto& col = cols[static_cast<std::size_t>(c)];
        col.values.reserve(buf.size());
        col.rows.reserve(buf.size());
        for (const auto& [v, r] : buf) {
            col.values.push_back(v);
            col.rows.push_back(r);
        }
    }
    return cols;
}

struct SplitChoice {
    double gain = 0.0;
    int feature = -1;
    double threshold = 0.0;
};

struct NodeStats {
    double grad = 0.0;
    double hess = 0.0;
    std::size_t count = 0;
};

/// Best split for every active node of one tree level.
inline std::vector<SplitChoice> best_splits(const std::vector<SparseColumn>& cols, const std::vector<int>& node_of,
                                            const std::vector<NodeStats>& stats, const Vector& grad) {
    const std::size_t level = stats.size();
    std::vector<SplitChoice> best(level);
    std::vector<double> nz_grad(level), acc_grad(level), prev(level);
    std::vector<std::size_t> nz_count(level), acc_count(level);
    std::vector<char> has_prev(level);
    std::vector<double> parent(level);
    // Nodes with entries in the current column. A node without any has only
    // zeros there and cannot split on it.
    std::vector<std::size_t> touched;
    std::vector<int> stamp(level, -1);
    std::size_t largest = 0;
    for (std::size_t k = 0; k < level; ++k) {
        largest = std::max(largest, stats[k].count);
        parent[k] = stats[k].count ? stats[k].grad * stats[k].grad / static_cast<double>(stats[k].count) : 0.0;
    }
    std::vector<double> inverse(largest + 1, 0.0);
    for (std::size_t c = 1; c <= largest; ++c) inverse[c] = 1.0 / static_cast<double>(c);

    auto consider = [&](std::size_t k, double value, int feature) {
        if (has_prev[k] && value > prev[k]) {
            const double gl = acc_grad[k];
            const double gr = stats[k].grad - gl;
            const double gain = gl * gl * inverse[acc_count[k]] + gr * gr * inverse[stats[k].count - acc_count[k]] - parent[k];
            if (gain > best[k].gain + 1e-12) best[k] = {gain, feature, 0.5 * (prev[k] + value)};
        }
    };
    auto add_zero_blocks = [&](int feature) {
        for (std::size_t k : touched) {
            const std::size_t zeros = stats[k].count - nz_count[k];
            if (zeros == 0) continue;
            consider(k, 0.0, feature);
            acc_grad[k] += stats[k].grad - nz_grad[k];
            acc_count[k] += zeros;
            prev[k] = 0.0;
            has_prev[k] = 1;
        }
    };

    for (std::size_t f = 0; f < cols.size(); ++f) {
        const auto& col = cols[f];
        if (col.values.empty()) continue;
        const int feature = static_cast<int>(f);
        touched.clear();
        for (std::size_t e = 0; e < col.rows.size(); ++e) {
            const int ki = node_of[col.rows[e]];
            if (ki < 0) continue;
            const auto k = static_cast<std::size_t>(ki);
            if (stamp[k] != feature) {
                stamp[k] = feature;
                touched.push_back(k);
                nz_grad[k] = acc_grad[k] = 0.0;
                nz_count[k] = acc_count[k] = 0;
                has_prev[k] = 0;
            }
            nz_grad[k] += grad(col.rows[e]);
            ++nz_count[k];
        }
        if (touched.empty()) continue;

        bool zeros_done = false;
        for (std::size_t e = 0; e < col.rows.size(); ++e) {
            const double v = col.values[e];
            if (!zeros_done && v > 0.0) {
                add_zero_blocks(feature);
                zeros_done = true;
            }
            const int ki = node_of[col.rows[e]];
            if (ki < 0) continue;
            const auto k = static_cast<std::size_t>(ki);
            consider(k, v, feature);
            acc_grad[k] += grad(col.rows[e]);
            ++acc_count[k];
            prev[k] = v;
            has_prev[k] = 1;
        }
        if (!zeros_done) add_zero_blocks(feature);
    }
    return best;
}

inline double mean_logistic_loss(const Vector& margin, const Vector& t) {
    double total = 0.0;
    for (Eigen::Index i = 0; i < margin.size(); ++i) total -= log_sigmoid((2.0 * t(i) - 1.0) * margin(i));
    return total / static_cast<double>(margin.size());
}

}  // namespace detail

inline GBoostModel fit_gboost(const Matrix& x, const std::vector<int>& y, const GBoostParams& params) {
    params.validate();
    const Eigen::Index n = x.rows();
    require(static_cast<std::size_t>(n) == y.size() && n > 0, ErrorKind::DimensionMismatch, "rows and labels differ");
    require(n < std::numeric_limits<std::uint32_t>::max(), ErrorKind::InvalidArgument, "too many rows");

    Vector t(n);
    for (Eigen::Index i = 0; i < n; ++i) t(i) = y[static_cast<std::size_t>(i)];
    const double prior = std::clamp(t.mean(), 1e-12, 1.0 - 1e-12);

    GBoostModel model;
    model.learning_rate = params.learning_rate;
    model.feature_dimension = static_cast<int>(x.cols());
    model.initial_margin = std::log(prior / (1.0 - prior));

    const auto cols = detail::sorted_columns(x);
    Vector margin = Vector::Constant(n, model.initial_margin);
    model.training_loss.push_back(detail::mean_logistic_loss(margin, t));
    Vector grad(n), hess(n);

    for (int stage = 0; stage < params.n_trees; ++stage) {
        for (Eigen::Index i = 0; i < n; ++i) {
            const double p = sigmoid(margin(i));
            grad(i) = t(i) - p;
            hess(i) = p * (1.0 - p);
        }

        RegressionTree tree;
        tree.nodes.push_back({});
        std::vector<int> level_nodes{0};          // tree node index per active slot
        std::vector<int> node_of(static_cast<std::size_t>(n), 0);  // active slot per row, -1 once in a leaf
        std::vector<int> leaf_of(static_cast<std::size_t>(n), 0);

        for (int depth = 0; depth <= params.depth && !level_nodes.empty(); ++depth) {
            std::vector<detail::NodeStats> stats(level_nodes.size());
            for (Eigen::Index i = 0; i < n; ++i) {
                const int k = node_of[static_cast<std::size_t>(i)];
                if (k < 0) continue;
                auto& s = stats[static_cast<std::size_t>(k)];
                s.grad += grad(i);
                s.hess += hess(i);
                ++s.count;
            }
            std::vector<detail::SplitChoice> splits(level_nodes.size());
            if (depth < params.depth) splits = detail::best_splits(cols, node_of, stats, grad);

            std::vector<int> next_nodes;
            std::vector<int> child_slot(level_nodes.size() * 2, -1);
            for (std::size_t k = 0; k < level_nodes.size(); ++k) {
                const int id = level_nodes[k];
                if (splits[k].feature < 0) {
                    tree.nodes[static_cast<std::size_t>(id)].value =
                        params.learning_rate * stats[k].grad / (stats[k].hess + 1e-12);
                    continue;
                }
                const int left = static_cast<int>(tree.nodes.size());
                tree.nodes.push_back({});
                tree.nodes.push_back({});
                auto& node = tree.nodes[static_cast<std::size_t>(id)];
                node.feature = splits[k].feature;
                node.threshold = splits[k].threshold;
                node.left = left;
                node.right = left + 1;
                child_slot[2 * k] = static_cast<int>(next_nodes.size());
                next_nodes.push_back(left);
                child_slot[2 * k + 1] = static_cast<int>(next_nodes.size());
                next_nodes.push_back(left + 1);
            }
            for (Eigen::Index i = 0; i < n; ++i) {
                const int k = node_of[static_cast<std::size_t>(i)];
                if (k < 0) continue;
                const auto& split = splits[static_cast<std::size_t>(k)];
                if (split.feature < 0) {
                    leaf_of[static_cast<std::size_t>(i)] = level_nodes[static_cast<std::size_t>(k)];
                    node_of[static_cast<std::size_t>(i)] = -1;
                } else {
                    const bool go_left = x(i, split.feature) <= split.threshold;
                    node_of[static_cast<std::size_t>(i)] = child_slot[2 * static_cast<std::size_t>(k) + (go_left ? 0 : 1)];
                }
            }
            level_nodes = std::move(next_nodes);
        }

        for (Eigen::Index i = 0; i < n; ++i) margin(i) += tree.nodes[static_cast<std::size_t>(leaf_of[static_cast<std::size_t>(i)])].value;
        model.trees.push_back(std::move(tree));
        model.training_loss.push_back(detail::mean_logistic_loss(margin, t));
    }
    return model;
}

/// The first n_trees stages of a model. Stages never look ahead, so this
/// equals fitting with n_trees directly.
inline GBoostModel truncate_gboost(const GBoostModel& model, int n_trees) {
    require(n_trees >= 1 && static_cast<std::size_t>(n_trees) <= model.trees.size(), ErrorKind::InvalidArgument,
            "cannot truncate to more stages than the model has");
    GBoostModel out = model;
    out.trees.resize(static_cast<std::size_t>(n_trees));
    out.training_loss.resize(static_cast<std::size_t>(n_trees) + 1);
    return out;
}

inline std::vector<double> predict_margin_gboost(const GBoostModel& model, const Matrix& rows) {
    require(rows.cols() == model.feature_dimension, ErrorKind::DimensionMismatch, "gboost feature dimension mismatch");
    std::vector<double> out(static_cast<std::size_t>(rows.rows()), model.initial_margin);
    for (const auto& tree : model.trees)
        for (Eigen::Index i = 0; i < rows.rows(); ++i) out[static_cast<std::size_t>(i)] += tree.evaluate(rows, i);
    return out;
}

inline std::vector<double> predict_proba_gboost(const GBoostModel& model, const Matrix& rows) {
    auto out = predict_margin_gboost(model, rows);
    for (auto& m : out) m = sigmoid(m);
    return out;
}

}  // namespace gazeclf
