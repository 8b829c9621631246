#pragma once

#include <algorithm>
#include <utility>
#include <vector>

#include "gazeclf/errors.hpp"
#include "gazeclf/linalg.hpp"

namespace gazeclf {

struct KnnModel {
    Matrix train;
    std::vector<int> labels;
    int k = 1;
};

inline KnnModel fit_knn(const Matrix& x, const std::vector<int>& y, int k) {
    require(k >= 1, ErrorKind::InvalidArgument, "k must be >= 1");
    require(static_cast<std::size_t>(x.rows()) == y.size(), ErrorKind::DimensionMismatch, "rows and labels differ");
    require(k <= x.rows(), ErrorKind::KTooLarge,
            "k=" + std::to_string(k) + " exceeds " + std::to_string(x.rows()) + " training rows");
    return {x, y, k};
}

namespace detail {

/// Training rows ordered by (squared distance, row index) for one query.
inline std::vector<std::pair<double, Eigen::Index>> neighbour_order(const Matrix& train,
                                                                    const Eigen::Ref<const RowVector>& query,
                                                                    int k) {
    std::vector<std::pair<double, Eigen::Index>> order(static_cast<std::size_t>(train.rows()));
    for (Eigen::Index i = 0; i < train.rows(); ++i) order[static_cast<std::size_t>(i)] = {(train.row(i) - query).squaredNorm(), i};
    std::partial_sort(order.begin(), order.begin() + k, order.end());
    order.resize(static_cast<std::size_t>(k));
    return order;
}

}  // namespace detail

/// Fraction of the k nearest training rows labelled positive.
inline std::vector<double> predict_proba_knn(const KnnModel& model, const Matrix& rows) {
    require(rows.cols() == model.train.cols(), ErrorKind::DimensionMismatch, "KNN feature dimension mismatch");
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(rows.rows()));
    for (Eigen::Index q = 0; q < rows.rows(); ++q) {
        const auto nearest = detail::neighbour_order(model.train, rows.row(q), model.k);
        int positives = 0;
        for (const auto& [dist, idx] : nearest) positives += model.labels[static_cast<std::size_t>(idx)];
        out.push_back(static_cast<double>(positives) / model.k);
    }
    return out;
}

/// Probabilities for several k at once; neighbours are ranked once with the
/// largest k, and every smaller k reads a prefix of that ranking.
inline std::vector<std::vector<double>> predict_proba_knn_multi(const Matrix& train, const std::vector<int>& labels,
                                                                const Matrix& rows, const std::vector<int>& ks) {
    require(rows.cols() == train.cols(), ErrorKind::DimensionMismatch, "KNN feature dimension mismatch");
    int k_max = 0;
    for (int k : ks) {
        require(k >= 1, ErrorKind::InvalidArgument, "k must be >= 1");
        require(k <= train.rows(), ErrorKind::KTooLarge,
                "k=" + std::to_string(k) + " exceeds " + std::to_string(train.rows()) + " training rows");
        k_max = std::max(k_max, k);
    }
    std::vector<std::vector<double>> out(ks.size());
    for (Eigen::Index q = 0; q < rows.rows(); ++q) {
        const auto nearest = detail::neighbour_order(train, rows.row(q), k_max);
        for (std::size_t j = 0; j < ks.size(); ++j) {
            int positives = 0;
            for (int i = 0; i < ks[j]; ++i) positives += labels[static_cast<std::size_t>(nearest[static_cast<std::size_t>(i)].second)];
            out[j].push_back(static_cast<double>(positives) / ks[j]);
        }
    }
    return out;
}

}  // namespace gazeclf
