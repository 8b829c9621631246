#pragma once

#include <algorithm>
#include <numeric>
#include <vector>

#include "gazeclf/errors.hpp"

namespace gazeclf {

/// Rank-statistic ROC AUC with midranks for tied scores: the probability
/// that a random positive outscores a random negative, ties counting 1/2.
inline double roc_auc(const std::vector<double>& scores, const std::vector<int>& labels) {
    require(scores.size() == labels.size(), ErrorKind::DimensionMismatch, "scores and labels differ in length");
    const std::size_t n = scores.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

    double positive_rank_sum = 0.0;
    std::size_t positives = 0;
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j < n && scores[order[j]] == scores[order[i]]) ++j;
        // Ranks i+1 .. j share their mean.
        const double midrank = 0.5 * static_cast<double>(i + 1 + j);
        for (std::size_t m = i; m < j; ++m) {
            if (labels[order[m]]) {
                positive_rank_sum += midrank;
                ++positives;
            }
        }
        i = j;
    }
    const std::size_t negatives = n - positives;
    require(positives > 0 && negatives > 0, ErrorKind::SingleClassTruth, "AUC needs both classes");
    const double p = static_cast<double>(positives);
    return (positive_rank_sum - p * (p + 1.0) / 2.0) / (p * static_cast<double>(negatives));
}

struct ConfusionCounts {
    std::size_t tp = 0, fn = 0, tn = 0, fp = 0;

    std::size_t positives() const { return tp + fn; }
    std::size_t negatives() const { return tn + fp; }
};

inline ConfusionCounts confusion_counts(const std::vector<int>& predicted, const std::vector<int>& truth) {
    require(predicted.size() == truth.size(), ErrorKind::DimensionMismatch, "label vectors differ in length");
    ConfusionCounts c;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        if (truth[i]) (predicted[i] ? c.tp : c.fn)++;
        else (predicted[i] ? c.fp : c.tn)++;
    }
    return c;
}

struct ConfusionMetrics {
    double f1 = 0.0;
    double accuracy = 0.0;
    double sensitivity = 0.0;
    double specificity = 0.0;
};

/// Positive class = trainee (label 1), negative = faculty (label 0).
inline ConfusionMetrics confusion_metrics(const std::vector<int>& predicted, const std::vector<int>& truth) {
    const auto c = confusion_counts(predicted, truth);
    require(c.positives() > 0 && c.negatives() > 0, ErrorKind::SingleClassTruth, "metrics need both classes in truth");
    ConfusionMetrics m;
    m.sensitivity = static_cast<double>(c.tp) / static_cast<double>(c.positives());
    m.specificity = static_cast<double>(c.tn) / static_cast<double>(c.negatives());
    m.f1 = 2.0 * c.tp / static_cast<double>(2 * c.tp + c.fp + c.fn);
    m.accuracy = static_cast<double>(c.tp + c.tn) / static_cast<double>(truth.size());
    return m;
}

}  // namespace gazeclf
