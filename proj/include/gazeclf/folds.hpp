#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "gazeclf/errors.hpp"
#include "gazeclf/rng.hpp"

namespace gazeclf {

struct FoldPlan {
    int k = 0;
    std::uint64_t seed = 0;
    std::vector<int> assignment;  // fold index per row, -1 if never held out

    std::vector<std::size_t> train_rows(int fold) const {
        std::vector<std::size_t> rows;
        for (std::size_t i = 0; i < assignment.size(); ++i)
            if (assignment[i] != fold) rows.push_back(i);
        return rows;
    }

    std::vector<std::size_t> test_rows(int fold) const {
        std::vector<std::size_t> rows;
        for (std::size_t i = 0; i < assignment.size(); ++i)
            if (assignment[i] == fold) rows.push_back(i);
        return rows;
    }
};

/// Within each class, rows are shuffled with xoshiro256**(seed) and dealt
/// round-robin to folds 0..k-1, floor(n_class / k) per fold, so every holdout
/// has the same class composition. The n_class % k rows left over at the end
/// of the shuffle are never held out and sit in every training split. Class 0
/// is shuffled before class 1 from the same stream.
inline FoldPlan stratified_folds(std::span<const int> labels, int k, std::uint64_t seed) {
    require(k >= 2, ErrorKind::InvalidArgument, "fold count must be >= 2");
    std::vector<std::size_t> by_class[2];
    for (std::size_t i = 0; i < labels.size(); ++i) {
        require(labels[i] == 0 || labels[i] == 1, ErrorKind::InvalidArgument, "labels must be binary");
        by_class[labels[i]].push_back(i);
    }
    for (const auto& members : by_class) {
        require(members.size() >= static_cast<std::size_t>(k), ErrorKind::TooFewPerClass,
                "each class needs at least " + std::to_string(k) + " rows, got " + std::to_string(members.size()));
    }
    FoldPlan plan{k, seed, std::vector<int>(labels.size(), -1)};
    Xoshiro256ss rng(seed);
    for (auto& members : by_class) {
        rng.shuffle(std::span<std::size_t>(members));
        const std::size_t dealt = members.size() / static_cast<std::size_t>(k) * static_cast<std::size_t>(k);
        for (std::size_t j = 0; j < dealt; ++j) plan.assignment[members[j]] = static_cast<int>(j % k);
    }
    return plan;
}

inline FoldPlan stratified_folds(const std::vector<int>& labels, int k, std::uint64_t seed) {
    return stratified_folds(std::span<const int>(labels), k, seed);
}

}  // namespace gazeclf
