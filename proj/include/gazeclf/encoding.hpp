#pragma once

// Discretized spatiotemporal encoding of a fixation sequence.
//
// Fixations are split into t contiguous, evenly sized temporal groups; each
// fixation in group i increments the count of its nearest grid centroid in
// layer i. Layers are flattened time-major, then row-major:
//
//     index = i * (x_div * y_div) + iy * x_div + ix

#include <cmath>
#include <cstdint>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gazeclf/errors.hpp"
#include "gazeclf/gaze_data.hpp"
#include "gazeclf/linalg.hpp"

namespace gazeclf {

struct EncodingConfig {
    int x_div = 1;
    int y_div = 1;
    int t_groups = 1;

    std::size_t length() const {
        return static_cast<std::size_t>(x_div) * static_cast<std::size_t>(y_div) * static_cast<std::size_t>(t_groups);
    }
    std::size_t cells() const { return static_cast<std::size_t>(x_div) * static_cast<std::size_t>(y_div); }

    void validate() const {
        require(x_div >= 1 && y_div >= 1 && t_groups >= 1, ErrorKind::InvalidArgument,
                "encoding subdivisions and temporal groups must be positive");
    }

    bool operator==(const EncodingConfig&) const = default;
};

struct Cell {
    int ix = 0;
    int iy = 0;

    bool operator==(const Cell&) const = default;
};

struct Point {
    double x = 0.0;
    double y = 0.0;
};

/// Centroids of an x_div by y_div subdivision of a display rect.
class GridLayout {
public:
    GridLayout(const Rect& rect, int x_div, int y_div) : rect_(rect), x_div_(x_div), y_div_(y_div) {
        require(x_div >= 1 && y_div >= 1, ErrorKind::InvalidArgument, "grid subdivisions must be positive");
        require(rect.width > 0.0 && rect.height > 0.0, ErrorKind::InvalidArgument, "grid rect must be non-empty");
    }

    int x_div() const { return x_div_; }
    int y_div() const { return y_div_; }
    const Rect& rect() const { return rect_; }

    Point centroid(int ix, int iy) const {
        return {rect_.x0 + (ix + 0.5) * rect_.width / x_div_, rect_.y0 + (iy + 0.5) * rect_.height / y_div_};
    }

    /// Centroids in linear order iy * x_div + ix.
    std::vector<Point> centroids() const {
        std::vector<Point> out;
        out.reserve(static_cast<std::size_t>(x_div_) * y_div_);
        for (int iy = 0; iy < y_div_; ++iy)
            for (int ix = 0; ix < x_div_; ++ix) out.push_back(centroid(ix, iy));
        return out;
    }

    std::size_t linear_index(Cell c) const { return static_cast<std::size_t>(c.iy) * x_div_ + c.ix; }

private:
    Rect rect_;
    int x_div_;
    int y_div_;
};

namespace detail {

// Nearest centroid along one axis. The centroid lattice is a product, so the
// 2-D argmin decomposes per axis; a point exactly on a cell boundary is
// equidistant to both neighbours and goes to the lower index.
inline int nearest_axis_cell(double offset, double extent, int divisions) {
    const double u = offset * divisions / extent;
    const double up = std::ceil(u) - 1.0;
    if (!(up > 0.0)) return 0;
    if (up >= divisions - 1) return divisions - 1;
    return static_cast<int>(up);
}

}  // namespace detail

/// Nearest-centroid cell; ties resolve to the smallest linear index.
inline Cell assign_cell(Point p, const GridLayout& layout) {
    const auto& r = layout.rect();
    return {detail::nearest_axis_cell(p.x - r.x0, r.width, layout.x_div()),
            detail::nearest_axis_cell(p.y - r.y0, r.height, layout.y_div())};
}

/// Contiguous split into t_groups pieces; the first n mod t pieces hold one
/// extra element, and trailing pieces are empty when n < t.
template <typename T>
std::vector<std::span<const T>> temporal_split(std::span<const T> items, int t_groups) {
    require(t_groups >= 1, ErrorKind::InvalidArgument, "t_groups must be positive");
    const std::size_t t = static_cast<std::size_t>(t_groups);
    const std::size_t base = items.size() / t;
    const std::size_t extra = items.size() % t;
    std::vector<std::span<const T>> groups;
    groups.reserve(t);
    std::size_t start = 0;
    for (std::size_t i = 0; i < t; ++i) {
        const std::size_t len = base + (i < extra ? 1 : 0);
        groups.push_back(items.subspan(start, len));
        start += len;
    }
    return groups;
}

inline std::vector<std::span<const FixationRecord>> temporal_split(const std::vector<FixationRecord>& fixations,
                                                                   int t_groups) {
    return temporal_split(std::span<const FixationRecord>(fixations), t_groups);
}

struct EncodedVector {
    std::vector<std::uint32_t> values;
    EncodingConfig config;
    std::string trial_id;

    std::uint64_t total() const {
        std::uint64_t s = 0;
        for (auto v : values) s += v;
        return s;
    }
};

inline EncodedVector encode_trial(const Trial& trial, const EncodingConfig& config) {
    config.validate();
    const GridLayout layout(trial.display_rect, config.x_div, config.y_div);
    EncodedVector out{std::vector<std::uint32_t>(config.length(), 0), config, trial.trial_id};
    const auto groups = temporal_split(trial.fixations, config.t_groups);
    const std::size_t layer = config.cells();
    for (std::size_t i = 0; i < groups.size(); ++i) {
        for (const auto& f : groups[i]) {
            const Cell c = assign_cell({f.x_px, f.y_px}, layout);
            ++out.values[i * layer + layout.linear_index(c)];
        }
    }
    return out;
}

inline std::vector<std::string> encoded_column_names(const EncodingConfig& config) {
    std::vector<std::string> names;
    names.reserve(config.length());
    for (std::size_t i = 0; i < config.length(); ++i) names.push_back("v" + std::to_string(i));
    return names;
}

/// One row per trial in dataset order.
inline FeatureTable encode_dataset(const Dataset& dataset, const EncodingConfig& config) {
    config.validate();
    FeatureTable table;
    table.features = Matrix::Zero(static_cast<Eigen::Index>(dataset.size()), static_cast<Eigen::Index>(config.length()));
    table.labels = dataset.binary_labels();
    table.column_names = encoded_column_names(config);
    for (std::size_t r = 0; r < dataset.size(); ++r) {
        const auto v = encode_trial(dataset[r], config);
        for (std::size_t c = 0; c < v.values.size(); ++c) {
            table.features(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = v.values[c];
        }
        table.ids.push_back(dataset[r].trial_id);
    }
    return table;
}

/// Header v0..v{txy-1},label,trial_id.
inline void write_encoded_csv(std::ostream& out, const FeatureTable& table) {
    for (const auto& name : table.column_names) out << name << ',';
    out << "label,trial_id\n";
    for (Eigen::Index r = 0; r < table.rows(); ++r) {
        for (Eigen::Index c = 0; c < table.cols(); ++c) out << static_cast<std::uint64_t>(table.features(r, c)) << ',';
        out << (table.labels[static_cast<std::size_t>(r)] ? "trainee" : "faculty") << ','
            << table.ids[static_cast<std::size_t>(r)] << '\n';
    }
}

}  // namespace gazeclf
