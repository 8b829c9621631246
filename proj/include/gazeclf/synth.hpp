#pragma once

// Seeded two-archetype scanpath generator.
//
// Faculty readers default to a uniform scan over the salient ellipse;
// trainee readers default to a focal search, a mixture of isotropic
// Gaussians around a few per-trial centres. Each trial draws from its own
// xoshiro256** stream seeded with mix_seed(config.seed, trial_index), so the
// output is a pure function of the config.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "gazeclf/errors.hpp"
#include "gazeclf/gaze_data.hpp"
#include "gazeclf/rng.hpp"

namespace gazeclf {

enum class ScanStyle { uniform, focal };

template <typename T>
struct InclusiveRange {
    T lo{};
    T hi{};

    bool operator==(const InclusiveRange&) const = default;
};

struct ArchetypeParams {
    ScanStyle style = ScanStyle::uniform;
    InclusiveRange<int> n_fixations{20, 30};
    int n_clusters = 1;
    double cluster_sigma_px = 30.0;
    InclusiveRange<double> inter_fixation_ms{200.0, 300.0};
    InclusiveRange<double> duration_ms{150.0, 250.0};

    void validate() const {
        require(n_fixations.lo >= 1 && n_fixations.lo <= n_fixations.hi, ErrorKind::InvalidArgument,
                "n_fixations_range must be positive with lo <= hi");
        require(inter_fixation_ms.lo > 0.0 && inter_fixation_ms.lo <= inter_fixation_ms.hi, ErrorKind::InvalidArgument,
                "inter_fixation_ms_range must be positive with lo <= hi");
        require(duration_ms.lo > 0.0 && duration_ms.lo <= duration_ms.hi, ErrorKind::InvalidArgument,
                "duration_ms_range must be positive with lo <= hi");
        if (style == ScanStyle::focal) {
            require(n_clusters >= 1, ErrorKind::InvalidArgument, "n_clusters must be >= 1");
            require(cluster_sigma_px > 0.0, ErrorKind::InvalidArgument, "cluster_sigma_px must be positive");
        }
    }
};

struct Ellipse {
    double cx = 0.0;
    double cy = 0.0;
    double ax = 1.0;  // semi-axis along x
    double ay = 1.0;  // semi-axis along y

    bool contains(double x, double y) const {
        const double u = (x - cx) / ax;
        const double v = (y - cy) / ay;
        return u * u + v * v <= 1.0;
    }
};

struct GeneratorConfig {
    std::uint64_t seed = 20240611;
    int trials_per_class = 55;
    int image_width = 1024;
    int image_height = 1024;
    Ellipse salient_ellipse{512.0, 512.0, 440.0, 480.0};
    // Fixation counts overlap heavily and both classes share the interval
    // range, so the scalar summaries separate the classes only partially;
    // the spatial spread is what tells them apart.
    ArchetypeParams faculty_params{ScanStyle::uniform, {20, 40}, 1, 80.0, {200.0, 340.0}, {120.0, 260.0}};
    ArchetypeParams trainee_params{ScanStyle::focal, {22, 44}, 2, 80.0, {200.0, 340.0}, {150.0, 300.0}};

    void validate() const {
        require(trials_per_class >= 1, ErrorKind::InvalidArgument, "trials_per_class must be >= 1");
        require(image_width >= 1 && image_height >= 1, ErrorKind::InvalidArgument, "image size must be positive");
        const auto& e = salient_ellipse;
        require(e.ax > 0.0 && e.ay > 0.0 && e.cx - e.ax >= 0.0 && e.cx + e.ax <= image_width && e.cy - e.ay >= 0.0 &&
                    e.cy + e.ay <= image_height,
                ErrorKind::InvalidArgument, "salient ellipse must fit inside the image");
        faculty_params.validate();
        trainee_params.validate();
    }
};

namespace detail {

inline std::pair<double, double> uniform_in_ellipse(Xoshiro256ss& rng, const Ellipse& e) {
    const double radius = std::sqrt(rng.uniform());
    const double angle = 2.0 * std::numbers::pi * rng.uniform();
    return {e.cx + e.ax * radius * std::cos(angle), e.cy + e.ay * radius * std::sin(angle)};
}

inline int draw_count(Xoshiro256ss& rng, InclusiveRange<int> r) {
    return static_cast<int>(rng.uniform_int(r.lo, r.hi));
}

inline double draw_real(Xoshiro256ss& rng, InclusiveRange<double> r) { return rng.uniform(r.lo, r.hi); }

inline std::string padded(int value, int width) {
    std::string s = std::to_string(value);
    return std::string(s.size() < static_cast<std::size_t>(width) ? width - s.size() : 0, '0') + s;
}

}  // namespace detail

/// Generates one trial of the given archetype from a dedicated stream.
inline Trial generate_trial(const GeneratorConfig& config, const ArchetypeParams& params, Label label, int index,
                            std::uint64_t stream_seed) {
    Xoshiro256ss rng(stream_seed);
    Trial t;
    t.trial_id = std::string(label == Label::faculty ? "F" : "T") + detail::padded(index, 3);
    t.subject_id = label == Label::faculty ? "faculty_01" : "trainee_01";
    t.label = label;
    t.image_id = "img_" + detail::padded(index, 3);
    t.display_rect = {0.0, 0.0, static_cast<double>(config.image_width), static_cast<double>(config.image_height)};

    const int n = detail::draw_count(rng, params.n_fixations);
    std::vector<std::pair<double, double>> centers;
    if (params.style == ScanStyle::focal) {
        for (int c = 0; c < params.n_clusters; ++c) centers.push_back(detail::uniform_in_ellipse(rng, config.salient_ellipse));
    }

    const double w = config.image_width;
    const double h = config.image_height;
    double onset = 0.0;
    t.fixations.reserve(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        onset += detail::draw_real(rng, params.inter_fixation_ms);
        const double duration = detail::draw_real(rng, params.duration_ms);
        double x = 0.0;
        double y = 0.0;
        if (params.style == ScanStyle::uniform) {
            std::tie(x, y) = detail::uniform_in_ellipse(rng, config.salient_ellipse);
        } else {
            const auto& c = centers[static_cast<std::size_t>(rng.uniform_int(0, params.n_clusters - 1))];
            int rejected = 0;
            while (true) {
                x = c.first + params.cluster_sigma_px * rng.normal();
                y = c.second + params.cluster_sigma_px * rng.normal();
                if (x >= 0.0 && x < w && y >= 0.0 && y < h) break;
                if (++rejected > 1000) {
                    fail(ErrorKind::RejectionOverflow,
                         "more than 1000 consecutive cluster samples fell outside the image; reduce cluster_sigma_px");
                }
            }
        }
        t.fixations.push_back({x, y, onset, duration});
    }
    return t;
}

/// Grayscale stimulus: 200 inside the salient ellipse (pixel centres), 0 outside.
inline GrayImage render_ellipse_image(const GeneratorConfig& config) {
    GrayImage img;
    img.width = config.image_width;
    img.height = config.image_height;
    img.pixels.assign(static_cast<std::size_t>(img.width) * img.height, 0);
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x)
            if (config.salient_ellipse.contains(x + 0.5, y + 0.5)) img.pixels[static_cast<std::size_t>(y) * img.width + x] = 200;
    return img;
}

struct SyntheticData {
    Dataset dataset;
    GrayImage image;
    SalientMask mask;
};

/// Faculty trials first (F000..), then trainee trials (T000..).
inline SyntheticData generate_dataset(const GeneratorConfig& config) {
    config.validate();
    std::vector<Trial> trials;
    trials.reserve(static_cast<std::size_t>(2 * config.trials_per_class));
    std::uint64_t stream = 0;
    for (const auto& [label, params] : {std::pair{Label::faculty, &config.faculty_params},
                                        std::pair{Label::trainee, &config.trainee_params}}) {
        for (int i = 0; i < config.trials_per_class; ++i) {
            trials.push_back(generate_trial(config, *params, label, i, mix_seed(config.seed, stream++)));
        }
    }
    SyntheticData out;
    out.dataset = Dataset(std::move(trials));
    out.image = render_ellipse_image(config);
    out.mask = threshold_mask(out.image, kDefaultMaskThreshold);
    return out;
}

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

NLOHMANN_JSON_SERIALIZE_ENUM(ScanStyle, {{ScanStyle::uniform, "uniform"}, {ScanStyle::focal, "focal"}})

template <typename T>
void to_json(nlohmann::json& j, const InclusiveRange<T>& r) {
    j = nlohmann::json::array({r.lo, r.hi});
}

template <typename T>
void from_json(const nlohmann::json& j, InclusiveRange<T>& r) {
    require(j.is_array() && j.size() == 2, ErrorKind::Config, "range must be a two-element array");
    r.lo = j.at(0).get<T>();
    r.hi = j.at(1).get<T>();
}

inline void to_json(nlohmann::json& j, const ArchetypeParams& p) {
    j = {{"style", p.style},
         {"n_fixations_range", p.n_fixations},
         {"n_clusters", p.n_clusters},
         {"cluster_sigma_px", p.cluster_sigma_px},
         {"inter_fixation_ms_range", p.inter_fixation_ms},
         {"duration_ms_range", p.duration_ms}};
}

inline void from_json(const nlohmann::json& j, ArchetypeParams& p) {
    p.style = j.value("style", p.style);
    if (j.contains("n_fixations_range")) p.n_fixations = j.at("n_fixations_range").get<InclusiveRange<int>>();
    p.n_clusters = j.value("n_clusters", p.n_clusters);
    p.cluster_sigma_px = j.value("cluster_sigma_px", p.cluster_sigma_px);
    if (j.contains("inter_fixation_ms_range"))
        p.inter_fixation_ms = j.at("inter_fixation_ms_range").get<InclusiveRange<double>>();
    if (j.contains("duration_ms_range")) p.duration_ms = j.at("duration_ms_range").get<InclusiveRange<double>>();
}

inline void to_json(nlohmann::json& j, const Ellipse& e) {
    j = {{"cx", e.cx}, {"cy", e.cy}, {"ax", e.ax}, {"ay", e.ay}};
}

inline void from_json(const nlohmann::json& j, Ellipse& e) {
    e.cx = j.value("cx", e.cx);
    e.cy = j.value("cy", e.cy);
    e.ax = j.value("ax", e.ax);
    e.ay = j.value("ay", e.ay);
}

inline void to_json(nlohmann::json& j, const GeneratorConfig& c) {
    j = {{"seed", c.seed},
         {"trials_per_class", c.trials_per_class},
         {"image_width", c.image_width},
         {"image_height", c.image_height},
         {"salient_ellipse", c.salient_ellipse},
         {"faculty_params", c.faculty_params},
         {"trainee_params", c.trainee_params}};
}

/// Missing keys keep their defaults.
inline void from_json(const nlohmann::json& j, GeneratorConfig& c) {
    c.seed = j.value("seed", c.seed);
    c.trials_per_class = j.value("trials_per_class", c.trials_per_class);
    c.image_width = j.value("image_width", c.image_width);
    c.image_height = j.value("image_height", c.image_height);
    if (j.contains("salient_ellipse")) {
        Ellipse e = c.salient_ellipse;
        from_json(j.at("salient_ellipse"), e);
        c.salient_ellipse = e;
    }
    if (j.contains("faculty_params")) {
        ArchetypeParams p = c.faculty_params;
        from_json(j.at("faculty_params"), p);
        c.faculty_params = p;
    }
    if (j.contains("trainee_params")) {
        ArchetypeParams p = c.trainee_params;
        from_json(j.at("trainee_params"), p);
        c.trainee_params = p;
    }
}

}  // namespace gazeclf
