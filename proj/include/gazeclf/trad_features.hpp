#pragma once

// The five per-trial baseline features: total time-to-scan, regressive
// fixation count, fixation count, total saccade length and salient-region
// coverage.

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>
#include <vector>

#include "gazeclf/encoding.hpp"
#include "gazeclf/errors.hpp"
#include "gazeclf/gaze_data.hpp"
#include "gazeclf/linalg.hpp"

namespace gazeclf {

enum class SaccadeMetric {
    spatial,   // Euclidean distance between consecutive fixations, pixels
    temporal,  // gap between consecutive onsets, milliseconds
};

inline std::string_view to_string(SaccadeMetric m) { return m == SaccadeMetric::spatial ? "spatial" : "temporal"; }

struct TradParams {
    int regress_x_div = 10;
    int regress_y_div = 10;
    double fovea_radius_px = 25.0;
    SaccadeMetric saccade_metric = SaccadeMetric::spatial;

    EncodingConfig regress_grid() const { return {regress_x_div, regress_y_div, 1}; }

    void validate() const {
        regress_grid().validate();
        require(fovea_radius_px > 0.0 && std::isfinite(fovea_radius_px), ErrorKind::InvalidArgument,
                "fovea_radius_px must be positive");
    }
};

struct TraditionalFeatures {
    double time_to_scan_ms = 0.0;
    std::size_t regressive_fixation_count = 0;
    std::size_t fixation_count = 0;
    double total_saccade_length = 0.0;
    double coverage_fraction = 0.0;
};

inline double time_to_scan(const Trial& trial) {
    require(!trial.fixations.empty(), ErrorKind::EmptyTrial, "trial '" + trial.trial_id + "' has no fixations");
    const auto& first = trial.fixations.front();
    const auto& last = trial.fixations.back();
    return (last.onset_ms + last.duration_ms) - first.onset_ms;
}

/// Grid cells holding two or more fixations.
inline std::size_t regressive_fixation_count(const Trial& trial, const EncodingConfig& regress_grid) {
    EncodingConfig grid = regress_grid;
    grid.t_groups = 1;
    const auto v = encode_trial(trial, grid);
    return static_cast<std::size_t>(std::count_if(v.values.begin(), v.values.end(), [](auto c) { return c >= 2; }));
}

inline std::size_t fixation_count(const Trial& trial) { return trial.fixations.size(); }

inline double total_saccade_length(const Trial& trial, SaccadeMetric metric = SaccadeMetric::spatial) {
    double total = 0.0;
    for (std::size_t i = 1; i < trial.fixations.size(); ++i) {
        const auto& a = trial.fixations[i - 1];
        const auto& b = trial.fixations[i];
        total += metric == SaccadeMetric::spatial ? std::hypot(b.x_px - a.x_px, b.y_px - a.y_px)
                                                  : b.onset_ms - a.onset_ms;
    }
    return total;
}

/// Fraction of salient pixels whose centre lies within the foveal radius of
/// at least one fixation. The mask spans the trial's display rect, and the
/// centre of mask pixel (px, py) sits at screen position
/// x0 + (px + 0.5) * width / mask_width (likewise for y).
inline double coverage(const Trial& trial, const SalientMask& mask, double fovea_radius_px) {
    require(mask.salient_count() >= 1, ErrorKind::EmptyMask, "salient mask has no salient pixels");
    require(fovea_radius_px > 0.0, ErrorKind::InvalidArgument, "fovea radius must be positive");
    if (trial.fixations.empty()) return 0.0;

    const auto& r = trial.display_rect;
    const double sx = r.width / mask.width();
    const double sy = r.height / mask.height();
    const double r2 = fovea_radius_px * fovea_radius_px;
    std::vector<std::uint8_t> covered(static_cast<std::size_t>(mask.width()) * mask.height(), 0);
    std::size_t hits = 0;

    for (const auto& f : trial.fixations) {
        // Pixel range whose centres can fall inside the disk.
        auto pixel_span = [](double lo, double hi, int size) {
            const double a = std::clamp(std::floor(lo), 0.0, static_cast<double>(size - 1));
            const double b = std::clamp(std::ceil(hi), -1.0, static_cast<double>(size - 1));
            return std::pair<int, int>{static_cast<int>(a), static_cast<int>(b)};
        };
        const auto [px_lo, px_hi] = pixel_span((f.x_px - fovea_radius_px - r.x0) / sx - 0.5,
                                               (f.x_px + fovea_radius_px - r.x0) / sx - 0.5, mask.width());
        const auto [py_lo, py_hi] = pixel_span((f.y_px - fovea_radius_px - r.y0) / sy - 0.5,
                                               (f.y_px + fovea_radius_px - r.y0) / sy - 0.5, mask.height());
        for (int py = py_lo; py <= py_hi; ++py) {
            const double dy = r.y0 + (py + 0.5) * sy - f.y_px;
            for (int px = px_lo; px <= px_hi; ++px) {
                const double dx = r.x0 + (px + 0.5) * sx - f.x_px;
                if (dx * dx + dy * dy > r2) continue;
                const std::size_t idx = static_cast<std::size_t>(py) * mask.width() + px;
                if (!covered[idx] && mask.salient(px, py)) {
                    covered[idx] = 1;
                    ++hits;
                }
            }
        }
    }
    return static_cast<double>(hits) / static_cast<double>(mask.salient_count());
}

/// Empty trials get time-to-scan 0 here so they can still form a row.
inline TraditionalFeatures compute_trial_features(const Trial& trial, const SalientMask& mask, const TradParams& params) {
    TraditionalFeatures f;
    f.time_to_scan_ms = trial.fixations.empty() ? 0.0 : time_to_scan(trial);
    f.regressive_fixation_count = regressive_fixation_count(trial, params.regress_grid());
    f.fixation_count = fixation_count(trial);
    f.total_saccade_length = total_saccade_length(trial, params.saccade_metric);
    f.coverage_fraction = coverage(trial, mask, params.fovea_radius_px);
    return f;
}

inline const std::vector<std::string>& traditional_column_names() {
    static const std::vector<std::string> names = {"time_to_scan_ms", "regressive_count", "fixation_count",
                                                   "saccade_length_px", "coverage"};
    return names;
}

inline FeatureTable compute_traditional(const Dataset& dataset, const SalientMask& mask, const TradParams& params) {
    params.validate();
    require(mask.salient_count() >= 1, ErrorKind::EmptyMask, "salient mask has no salient pixels");
    FeatureTable table;
    table.features.resize(static_cast<Eigen::Index>(dataset.size()), 5);
    table.labels = dataset.binary_labels();
    table.column_names = traditional_column_names();
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        const auto f = compute_trial_features(dataset[i], mask, params);
        const auto r = static_cast<Eigen::Index>(i);
        table.features(r, 0) = f.time_to_scan_ms;
        table.features(r, 1) = static_cast<double>(f.regressive_fixation_count);
        table.features(r, 2) = static_cast<double>(f.fixation_count);
        table.features(r, 3) = f.total_saccade_length;
        table.features(r, 4) = f.coverage_fraction;
        table.ids.push_back(dataset[i].trial_id);
    }
    return table;
}

inline void write_features_csv(std::ostream& out, const FeatureTable& table) {
    out << "time_to_scan_ms,regressive_count,fixation_count,saccade_length_px,coverage,label,trial_id\n";
    for (Eigen::Index r = 0; r < table.rows(); ++r) {
        for (Eigen::Index c = 0; c < table.cols(); ++c) out << detail::format_double(table.features(r, c)) << ',';
        out << (table.labels[static_cast<std::size_t>(r)] ? "trainee" : "faculty") << ','
            << table.ids[static_cast<std::size_t>(r)] << '\n';
    }
}

}  // namespace gazeclf
