#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "gazeclf/encoding.hpp"
#include "oracles.hpp"

using namespace gazeclf;

namespace {

Trial unit_trial(const std::vector<std::pair<double, double>>& points) {
    Trial t;
    t.trial_id = "u";
    t.display_rect = {0.0, 0.0, 1.0, 1.0};
    double onset = 0.0;
    for (const auto& [x, y] : points) t.fixations.push_back({x, y, onset += 10.0, 5.0});
    return t;
}

std::vector<std::size_t> sizes(const std::vector<std::span<const FixationRecord>>& groups) {
    std::vector<std::size_t> out;
    for (const auto& g : groups) out.push_back(g.size());
    return out;
}

}  // namespace

TEST(TemporalSplit, EvenRemainderAndDegenerateCases) {
    auto n = [](int count) { return unit_trial(std::vector<std::pair<double, double>>(count, {0.5, 0.5})).fixations; };
    const auto six = n(6), seven = n(7), two = n(2);
    EXPECT_EQ(sizes(temporal_split(six, 3)), (std::vector<std::size_t>{2, 2, 2}));
    EXPECT_EQ(sizes(temporal_split(seven, 3)), (std::vector<std::size_t>{3, 2, 2}));
    EXPECT_EQ(sizes(temporal_split(two, 5)), (std::vector<std::size_t>{1, 1, 0, 0, 0}));
}

TEST(TemporalSplit, ContiguousAndBalancedForAllSmallSizes) {
    std::vector<int> items(40);
    for (int i = 0; i < 40; ++i) items[static_cast<std::size_t>(i)] = i;
    for (int n = 0; n <= 40; ++n) {
        for (int t = 1; t <= 12; ++t) {
            const auto groups = temporal_split(std::span<const int>(items.data(), static_cast<std::size_t>(n)), t);
            ASSERT_EQ(groups.size(), static_cast<std::size_t>(t));
            std::vector<int> joined;
            std::size_t lo = groups[0].size(), hi = groups[0].size();
            for (const auto& g : groups) {
                joined.insert(joined.end(), g.begin(), g.end());
                lo = std::min(lo, g.size());
                hi = std::max(hi, g.size());
            }
            EXPECT_EQ(joined, std::vector<int>(items.begin(), items.begin() + n));
            EXPECT_LE(hi - lo, 1u);
            for (int g = 0; g + 1 < t; ++g) EXPECT_GE(groups[g].size(), groups[g + 1].size());
        }
    }
}

TEST(AssignCell, NearestCentroidAndTies) {
    const GridLayout grid({0.0, 0.0, 1.0, 1.0}, 2, 2);
    EXPECT_EQ(assign_cell({0.1, 0.1}, grid), (Cell{0, 0}));
    EXPECT_EQ(assign_cell({0.75, 0.25}, grid), (Cell{1, 0}));
    EXPECT_EQ(assign_cell({0.5, 0.5}, grid), (Cell{0, 0}));
    EXPECT_EQ(assign_cell({0.5, 0.9}, grid), (Cell{0, 1}));
}

TEST(AssignCell, OutsidePointsClampToBorderCells) {
    const GridLayout grid({10.0, 20.0, 30.0, 30.0}, 3, 3);
    EXPECT_EQ(assign_cell({-100.0, 1000.0}, grid), (Cell{0, 2}));
}

TEST(EncodeTrial, WorkedExample) {
    const auto t = unit_trial({{0.1, 0.1}, {0.9, 0.1}, {0.1, 0.9}, {0.9, 0.9}, {0.5, 0.5}, {0.2, 0.2}});
    const auto v = encode_trial(t, {2, 2, 2});
    EXPECT_EQ(v.values, (std::vector<std::uint32_t>{1, 1, 1, 0, 2, 0, 0, 1}));
    EXPECT_EQ(v.values, oracle::encode(t, 2, 2, 2));
}

TEST(EncodeTrial, EmptyAndSingleCell) {
    EXPECT_EQ(encode_trial(unit_trial({}), {3, 4, 5}).values, std::vector<std::uint32_t>(60, 0));
    EXPECT_EQ(encode_trial(unit_trial({{0.5, 0.5}}), {1, 1, 1}).values, std::vector<std::uint32_t>{1});
}

TEST(EncodeTrial, MatchesBruteForceOnRandomTrials) {
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<int> div(1, 16), tg(1, 20), nfix(0, 60);
    for (int c = 0; c < 500; ++c) {
        const auto t = oracle::random_trial(rng, nfix(rng));
        const EncodingConfig cfg{div(rng), div(rng), tg(rng)};
        const auto v = encode_trial(t, cfg);
        ASSERT_EQ(v.values, oracle::encode(t, cfg.x_div, cfg.y_div, cfg.t_groups)) << "case " << c;
        EXPECT_EQ(v.values.size(), cfg.length());
        EXPECT_EQ(v.total(), t.fixations.size());
    }
}

TEST(EncodeTrial, MatchesBruteForceOnCellBoundaries) {
    // Power-of-two rects make boundary coordinates exact, so the tie rule is
    // what decides.
    std::mt19937_64 rng(77);
    for (int c = 0; c < 300; ++c) {
        const int xd = 1 << (rng() % 4), yd = 1 << (rng() % 4);
        Trial t;
        t.trial_id = "b";
        t.display_rect = {static_cast<double>(rng() % 64), static_cast<double>(rng() % 64), 256.0, 128.0};
        for (int k = 0; k < 12; ++k) {
            const double x = t.display_rect.x0 + (rng() % (2 * xd + 1)) * 128.0 / xd;
            const double y = t.display_rect.y0 + (rng() % (2 * yd + 1)) * 64.0 / yd;
            t.fixations.push_back({x, y, 10.0 * k, 5.0});
        }
        ASSERT_EQ(encode_trial(t, {xd, yd, 3}).values, oracle::encode(t, xd, yd, 3)) << "case " << c;
    }
}

TEST(EncodeTrial, PermutationWithinGroupLeavesVectorUnchanged) {
    std::mt19937_64 rng(5);
    auto t = oracle::random_trial(rng, 20);
    const auto before = encode_trial(t, {4, 4, 4});
    // Group 1 holds positions 5..9; swap their coordinates but keep onsets.
    std::vector<std::pair<double, double>> pts;
    for (int i = 5; i < 10; ++i) pts.push_back({t.fixations[i].x_px, t.fixations[i].y_px});
    std::reverse(pts.begin(), pts.end());
    for (int i = 5; i < 10; ++i) std::tie(t.fixations[i].x_px, t.fixations[i].y_px) = pts[static_cast<std::size_t>(i - 5)];
    EXPECT_EQ(encode_trial(t, {4, 4, 4}).values, before.values);
}

TEST(EncodeTrial, LayersMarginalizeToSingleGroup) {
    std::mt19937_64 rng(6);
    for (int c = 0; c < 50; ++c) {
        const auto t = oracle::random_trial(rng, static_cast<int>(rng() % 50));
        const auto full = encode_trial(t, {5, 3, 7});
        const auto flat = encode_trial(t, {5, 3, 1});
        for (std::size_t cell = 0; cell < 15; ++cell) {
            std::uint32_t s = 0;
            for (std::size_t layer = 0; layer < 7; ++layer) s += full.values[layer * 15 + cell];
            EXPECT_EQ(s, flat.values[cell]);
        }
    }
}

TEST(EncodeTrial, TranslationLeavesVectorUnchanged) {
    // Integer coordinates keep the shifted arithmetic exact.
    std::mt19937_64 rng(8);
    Trial t;
    t.trial_id = "s";
    t.display_rect = {0.0, 0.0, 640.0, 480.0};
    for (int k = 0; k < 30; ++k)
        t.fixations.push_back({static_cast<double>(rng() % 641), static_cast<double>(rng() % 481), 10.0 * k, 5.0});
    Trial moved = t;
    moved.display_rect.x0 += 1024;
    moved.display_rect.y0 -= 512;
    for (auto& f : moved.fixations) {
        f.x_px += 1024;
        f.y_px -= 512;
    }
    for (const EncodingConfig cfg : {EncodingConfig{10, 10, 5}, EncodingConfig{7, 7, 3}, EncodingConfig{4, 8, 2}})
        EXPECT_EQ(encode_trial(moved, cfg).values, encode_trial(t, cfg).values);
}

TEST(EncodeDataset, RowsMatchTrialsAndShape) {
    std::mt19937_64 rng(10);
    std::vector<Trial> trials;
    for (int i = 0; i < 110; ++i) {
        auto t = oracle::random_trial(rng, 10 + i % 7, "t" + std::to_string(i));
        t.label = i < 55 ? Label::faculty : Label::trainee;
        trials.push_back(t);
    }
    const Dataset ds(trials);
    const auto table = encode_dataset(ds, {10, 10, 5});
    ASSERT_EQ(table.rows(), 110);
    ASSERT_EQ(table.cols(), 500);
    for (Eigen::Index r = 0; r < table.rows(); ++r) {
        EXPECT_EQ(table.features.row(r).sum(), static_cast<double>(ds[static_cast<std::size_t>(r)].fixations.size()));
        const auto v = encode_trial(ds[static_cast<std::size_t>(r)], {10, 10, 5});
        for (std::size_t c = 0; c < 500; ++c) ASSERT_EQ(table.features(r, static_cast<Eigen::Index>(c)), v.values[c]);
    }
    EXPECT_EQ(table.labels.front(), 0);
    EXPECT_EQ(table.labels.back(), 1);
}

TEST(EncodeDataset, CsvHeader) {
    Trial t = unit_trial({{0.2, 0.2}});
    t.label = Label::trainee;
    std::ostringstream os;
    write_encoded_csv(os, encode_dataset(Dataset({t}), {2, 1, 1}));
    EXPECT_EQ(os.str(), "v0,v1,label,trial_id\n1,0,trainee,u\n");
}
