#pragma once

// Fixation trials: data model, CSV ingestion, bounds filtering and salient
// masks read from 8-bit PGM stimulus images.

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "gazeclf/errors.hpp"

namespace gazeclf {

enum class Label : std::uint8_t { faculty = 0, trainee = 1 };

inline std::string_view to_string(Label label) {
    return label == Label::faculty ? "faculty" : "trainee";
}

inline Label parse_label(std::string_view text) {
    if (text == "faculty") return Label::faculty;
    if (text == "trainee") return Label::trainee;
    fail(ErrorKind::UnknownLabel, "unknown label '" + std::string(text) + "'");
}

/// Positive class for every metric is the trainee.
inline int to_binary(Label label) { return label == Label::trainee ? 1 : 0; }

struct FixationRecord {
    double x_px = 0.0;
    double y_px = 0.0;
    double onset_ms = 0.0;
    double duration_ms = 0.0;

    bool operator==(const FixationRecord&) const = default;
};

struct Rect {
    double x0 = 0.0;
    double y0 = 0.0;
    double width = 1.0;
    double height = 1.0;

    bool contains(double x, double y) const {
        return x >= x0 && x <= x0 + width && y >= y0 && y <= y0 + height;
    }

    bool operator==(const Rect&) const = default;
};

struct Trial {
    std::string trial_id;
    std::string subject_id;
    Label label = Label::faculty;
    std::string image_id;
    Rect display_rect;
    std::vector<FixationRecord> fixations;

    bool operator==(const Trial&) const = default;
};

/// Throws if the trial violates an invariant (positive rect, finite values,
/// positive durations, strictly increasing onsets).
inline void validate(const Trial& trial) {
    const auto& r = trial.display_rect;
    require(std::isfinite(r.x0) && std::isfinite(r.y0) && r.width > 0.0 && r.height > 0.0 &&
                std::isfinite(r.width) && std::isfinite(r.height),
            ErrorKind::MalformedRow, "trial '" + trial.trial_id + "' has a non-positive display rect");
    for (std::size_t i = 0; i < trial.fixations.size(); ++i) {
        const auto& f = trial.fixations[i];
        require(std::isfinite(f.x_px) && std::isfinite(f.y_px) && std::isfinite(f.onset_ms) &&
                    std::isfinite(f.duration_ms),
                ErrorKind::MalformedRow, "trial '" + trial.trial_id + "' has a non-finite fixation");
        require(f.duration_ms > 0.0 && f.onset_ms >= 0.0, ErrorKind::MalformedRow,
                "trial '" + trial.trial_id + "' has a non-positive duration or negative onset");
        if (i > 0 && !(trial.fixations[i - 1].onset_ms < f.onset_ms)) {
            fail(ErrorKind::DuplicateOnset, "trial '" + trial.trial_id + "' onsets are not strictly increasing");
        }
    }
}

class Dataset {
public:
    Dataset() = default;

    explicit Dataset(std::vector<Trial> trials) : trials_(std::move(trials)) {
        std::unordered_set<std::string> seen;
        for (const auto& t : trials_) {
            validate(t);
            require(seen.insert(t.trial_id).second, ErrorKind::MalformedRow,
                    "duplicate trial_id '" + t.trial_id + "'");
            ++class_counts_[static_cast<std::size_t>(t.label)];
        }
    }

    const std::vector<Trial>& trials() const { return trials_; }
    std::size_t size() const { return trials_.size(); }
    bool empty() const { return trials_.empty(); }
    const Trial& operator[](std::size_t i) const { return trials_[i]; }

    std::size_t count(Label label) const { return class_counts_[static_cast<std::size_t>(label)]; }

    std::vector<int> binary_labels() const {
        std::vector<int> out;
        out.reserve(trials_.size());
        for (const auto& t : trials_) out.push_back(to_binary(t.label));
        return out;
    }

    std::size_t total_fixations() const {
        std::size_t n = 0;
        for (const auto& t : trials_) n += t.fixations.size();
        return n;
    }

    bool operator==(const Dataset& other) const { return trials_ == other.trials_; }

private:
    std::vector<Trial> trials_;
    std::size_t class_counts_[2] = {0, 0};
};

namespace detail {

inline std::vector<std::string_view> split_csv_line(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return fields;
}

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

/// Strict finite-number parse; anything else (including "NaN") yields false.
inline bool parse_finite(std::string_view text, double& out) {
    text = trim(text);
    if (text.empty()) return false;
    if (text.front() == '+') text.remove_prefix(1);
    const auto* end = text.data() + text.size();
    const auto result = std::from_chars(text.data(), end, out);
    return result.ec == std::errc{} && result.ptr == end && std::isfinite(out);
}

/// Shortest representation that parses back to the identical double.
inline std::string format_double(double value) {
    char buf[64];
    const auto result = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, result.ptr);
}

}  // namespace detail

inline constexpr std::string_view kFixationCsvHeader =
    "trial_id,subject_id,label,image_id,rect_x0,rect_y0,rect_w,rect_h,onset_ms,duration_ms,x_px,y_px";

/// Parses the fixation CSV. Trials appear in order of first occurrence;
/// fixations are stably sorted by onset, and equal onsets within a trial
/// are rejected.
inline Dataset read_trials(std::istream& in, const std::string& source = "<stream>") {
    std::string line;
    std::size_t line_no = 0;
    auto malformed = [&](const std::string& why) {
        fail(ErrorKind::MalformedRow, source + ":" + std::to_string(line_no) + ": " + why);
    };

    if (!std::getline(in, line)) return Dataset{};
    ++line_no;
    if (detail::trim(line) != kFixationCsvHeader) malformed("unexpected header");

    std::vector<Trial> trials;
    std::unordered_map<std::string, std::size_t> index;
    while (std::getline(in, line)) {
        ++line_no;
        if (detail::trim(line).empty()) continue;
        const auto fields = detail::split_csv_line(line);
        if (fields.size() != 12) {
            malformed("expected 12 columns, got " + std::to_string(fields.size()));
        }
        double nums[8];
        static constexpr const char* names[8] = {"rect_x0", "rect_y0",     "rect_w", "rect_h",
                                                 "onset_ms", "duration_ms", "x_px",   "y_px"};
        for (int c = 0; c < 8; ++c) {
            if (!detail::parse_finite(fields[4 + c], nums[c])) {
                malformed(std::string("unparseable number in column ") + names[c]);
            }
        }
        Label label;
        try {
            label = parse_label(detail::trim(fields[2]));
        } catch (const Error& e) {
            fail(ErrorKind::UnknownLabel, source + ":" + std::to_string(line_no) + ": " + e.what());
        }
        const std::string trial_id(detail::trim(fields[0]));
        const Rect rect{nums[0], nums[1], nums[2], nums[3]};
        if (!(rect.width > 0.0 && rect.height > 0.0)) malformed("display rect must have positive size");
        if (!(nums[5] > 0.0)) malformed("duration_ms must be positive");
        if (nums[4] < 0.0) malformed("onset_ms must be non-negative");

        auto [it, inserted] = index.try_emplace(trial_id, trials.size());
        if (inserted) {
            Trial t;
            t.trial_id = trial_id;
            t.subject_id = std::string(detail::trim(fields[1]));
            t.label = label;
            t.image_id = std::string(detail::trim(fields[3]));
            t.display_rect = rect;
            trials.push_back(std::move(t));
        }
        Trial& t = trials[it->second];
        if (t.label != label || !(t.display_rect == rect) || t.subject_id != detail::trim(fields[1]) ||
            t.image_id != detail::trim(fields[3])) {
            malformed("trial '" + trial_id + "' metadata differs from its first row");
        }
        t.fixations.push_back({nums[6], nums[7], nums[4], nums[5]});
    }

    for (auto& t : trials) {
        std::stable_sort(t.fixations.begin(), t.fixations.end(),
                         [](const FixationRecord& a, const FixationRecord& b) { return a.onset_ms < b.onset_ms; });
        for (std::size_t i = 1; i < t.fixations.size(); ++i) {
            if (t.fixations[i].onset_ms == t.fixations[i - 1].onset_ms) {
                fail(ErrorKind::DuplicateOnset, source + ": trial '" + t.trial_id + "' has two fixations at onset " +
                                                    detail::format_double(t.fixations[i].onset_ms));
            }
        }
    }
    return Dataset(std::move(trials));
}

inline Dataset load_trials(const std::string& path) {
    std::ifstream in(path);
    require(static_cast<bool>(in), ErrorKind::MalformedRow, "cannot open '" + path + "'");
    return read_trials(in, path);
}

inline void write_trials(std::ostream& out, const Dataset& dataset) {
    using detail::format_double;
    out << kFixationCsvHeader << '\n';
    for (const auto& t : dataset.trials()) {
        const auto& r = t.display_rect;
        const std::string prefix = t.trial_id + ',' + t.subject_id + ',' + std::string(to_string(t.label)) + ',' +
                                   t.image_id + ',' + format_double(r.x0) + ',' + format_double(r.y0) + ',' +
                                   format_double(r.width) + ',' + format_double(r.height) + ',';
        for (const auto& f : t.fixations) {
            out << prefix << format_double(f.onset_ms) << ',' << format_double(f.duration_ms) << ','
                << format_double(f.x_px) << ',' << format_double(f.y_px) << '\n';
        }
    }
}

struct FilterEntry {
    std::string trial_id;
    std::size_t removed_count = 0;
    std::size_t kept_count = 0;
};

struct FilterReport {
    std::vector<FilterEntry> entries;

    std::size_t total_removed() const {
        std::size_t n = 0;
        for (const auto& e : entries) n += e.removed_count;
        return n;
    }
};

/// Drops fixations outside their trial's display rect (closed bounds).
/// Trials left empty are kept.
inline std::pair<Dataset, FilterReport> filter_out_of_bounds(const Dataset& dataset) {
    std::vector<Trial> kept;
    kept.reserve(dataset.size());
    FilterReport report;
    for (const auto& t : dataset.trials()) {
        Trial copy = t;
        copy.fixations.clear();
        for (const auto& f : t.fixations) {
            if (t.display_rect.contains(f.x_px, f.y_px)) copy.fixations.push_back(f);
        }
        report.entries.push_back({t.trial_id, t.fixations.size() - copy.fixations.size(), copy.fixations.size()});
        kept.push_back(std::move(copy));
    }
    return {Dataset(std::move(kept)), std::move(report)};
}

inline void write_filter_report(std::ostream& out, const FilterReport& report) {
    out << "trial_id,removed_count,kept_count\n";
    for (const auto& e : report.entries) {
        out << e.trial_id << ',' << e.removed_count << ',' << e.kept_count << '\n';
    }
}

// ---------------------------------------------------------------------------
// salient masks
// ---------------------------------------------------------------------------

struct GrayImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels;  // row-major

    std::uint8_t at(int x, int y) const { return pixels[static_cast<std::size_t>(y) * width + x]; }
};

class SalientMask {
public:
    SalientMask() = default;

    SalientMask(int width, int height, std::vector<std::uint8_t> mask)
        : width_(width), height_(height), mask_(std::move(mask)) {
        require(width > 0 && height > 0 && mask_.size() == static_cast<std::size_t>(width) * height,
                ErrorKind::InvalidArgument, "mask size does not match its dimensions");
        for (auto& m : mask_) {
            m = m ? 1 : 0;
            salient_count_ += m;
        }
    }

    int width() const { return width_; }
    int height() const { return height_; }
    std::size_t salient_count() const { return salient_count_; }
    bool salient(int x, int y) const { return mask_[static_cast<std::size_t>(y) * width_ + x] != 0; }
    const std::vector<std::uint8_t>& data() const { return mask_; }

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint8_t> mask_;
    std::size_t salient_count_ = 0;
};

/// Reads a binary (P5) PGM with maxval 255.
inline GrayImage read_pgm(std::istream& in) {
    auto next_token = [&]() {
        std::string token;
        int c;
        while ((c = in.get()) != EOF) {
            if (c == '#') {
                while ((c = in.get()) != EOF && c != '\n') {
                }
                continue;
            }
            if (std::isspace(c)) {
                if (!token.empty()) break;
                continue;
            }
            token.push_back(static_cast<char>(c));
        }
        return token;
    };
    auto to_int = [](const std::string& s, int& out) {
        const auto r = std::from_chars(s.data(), s.data() + s.size(), out);
        return r.ec == std::errc{} && r.ptr == s.data() + s.size();
    };

    if (next_token() != "P5") fail(ErrorKind::NotPgm, "missing P5 magic number");
    GrayImage img;
    int maxval = 0;
    if (!to_int(next_token(), img.width) || !to_int(next_token(), img.height) || img.width <= 0 ||
        img.height <= 0) {
        fail(ErrorKind::NotPgm, "bad PGM dimensions");
    }
    // The single whitespace byte after maxval is consumed by next_token.
    if (!to_int(next_token(), maxval)) fail(ErrorKind::NotPgm, "bad PGM maxval");
    if (maxval != 255) fail(ErrorKind::UnsupportedMaxval, "maxval " + std::to_string(maxval) + " (need 255)");
    img.pixels.resize(static_cast<std::size_t>(img.width) * img.height);
    in.read(reinterpret_cast<char*>(img.pixels.data()), static_cast<std::streamsize>(img.pixels.size()));
    if (in.gcount() != static_cast<std::streamsize>(img.pixels.size())) {
        fail(ErrorKind::NotPgm, "truncated PGM pixel data");
    }
    return img;
}

inline GrayImage load_pgm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    require(static_cast<bool>(in), ErrorKind::NotPgm, "cannot open '" + path + "'");
    return read_pgm(in);
}

inline void write_pgm(std::ostream& out, const GrayImage& img) {
    out << "P5\n" << img.width << ' ' << img.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(img.pixels.data()), static_cast<std::streamsize>(img.pixels.size()));
}

inline constexpr int kDefaultMaskThreshold = 10;

/// mask[p] = intensity[p] > threshold. Throws AllBackground when nothing
/// survives, since coverage is undefined without salient pixels.
inline SalientMask threshold_mask(const GrayImage& img, int threshold) {
    require(threshold >= 0 && threshold <= 255, ErrorKind::InvalidArgument, "threshold must lie in [0,255]");
    std::vector<std::uint8_t> mask(img.pixels.size());
    for (std::size_t i = 0; i < mask.size(); ++i) mask[i] = img.pixels[i] > threshold ? 1 : 0;
    SalientMask out(img.width, img.height, std::move(mask));
    require(out.salient_count() > 0, ErrorKind::AllBackground,
            "no pixel exceeds threshold " + std::to_string(threshold));
    return out;
}

inline SalientMask load_salient_mask(const std::string& path, int threshold = kDefaultMaskThreshold) {
    return threshold_mask(load_pgm(path), threshold);
}

}  // namespace gazeclf
