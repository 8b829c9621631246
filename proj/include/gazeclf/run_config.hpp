#pragma once

// JSON run configuration shared by every CLI subcommand.
//
// {
//   "input":  {"fixations": "trials.csv", "mask": "image.pgm", "mask_threshold": 10, "acquisition": "clinical"},
//   "synth":  { GeneratorConfig },          // exactly one of input / synth
//   "output_dir": "out",
//   "k_folds": 10,
//   "seeds": [1, 2, 3, 4, 5],
//   "encode": {"configs": [[10, 10, 5]]},
//   "sweep":  {"grid_sizes": [...], "t_groups": [...], "extractions": ["none", "pca-2", ...],
//              "classifiers": ["gp", "knn", "logreg", "gboost"], "data_types": ["encoded", "traditional"]},
//   "grids":  {"knn": {"k": [...]}, "logreg": {"l2": [...]},
//              "gp": {"bandwidth_scale": [...], "signal_variance": [...]},
//              "gboost": {"n_trees": [...], "depth": [...], "learning_rate": [...]}},
//   "features": {"regress_grid": [10, 10], "fovea_radius_px": 25, "saccade_metric": "spatial"},
//   "eval": {"inner_folds": 3, "kpca_gamma": null, "drop_empty_trials": false}
// }
//
// Every key is optional except output_dir and the data source.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gazeclf/errors.hpp"
#include "gazeclf/evaluation.hpp"
#include "gazeclf/synth.hpp"

namespace gazeclf {

struct InputPaths {
    std::string fixations;
    std::string mask;  // optional for encode
    int mask_threshold = kDefaultMaskThreshold;
    std::string acquisition = "clinical";
};

struct RunConfig {
    std::optional<InputPaths> input;
    std::optional<GeneratorConfig> synth;
    std::string output_dir;
    int k_folds = 10;
    std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
    std::vector<EncodingConfig> encode_configs{{10, 10, 5}};
    SweepSpace space;
    EvalOptions eval;

    std::string acquisition() const { return synth ? "synthetic" : input->acquisition; }

    void validate() const {
        require(input.has_value() != synth.has_value(), ErrorKind::Config,
                "exactly one of 'input' and 'synth' must be given");
        if (input) require(!input->fixations.empty(), ErrorKind::Config, "input.fixations is required");
        if (synth) synth->validate();
        require(!output_dir.empty(), ErrorKind::Config, "output_dir is required");
        require(k_folds >= 2, ErrorKind::Config, "k_folds must be >= 2");
        require(eval.inner_folds >= 2, ErrorKind::Config, "eval.inner_folds must be >= 2");
        require(!seeds.empty(), ErrorKind::Config, "seeds must not be empty");
        for (const auto& c : encode_configs) c.validate();
        for (int g : space.grid_sizes) require(g >= 1, ErrorKind::Config, "grid sizes must be >= 1");
        for (int t : space.t_groups) require(t >= 1, ErrorKind::Config, "t_groups must be >= 1");
        for (const auto& e : space.extractions) e.validate();
        for (const auto& spec : space.classifier_specs()) spec.points();
        eval.trad.validate();
    }
};

namespace detail {

template <typename T>
void read_if(const nlohmann::json& j, const char* key, T& out) {
    if (j.contains(key) && !j.at(key).is_null()) out = j.at(key).get<T>();
}

}  // namespace detail

/// Parses and validates a config. Unknown keys are rejected so typos in
/// decision overrides do not pass silently.
inline RunConfig parse_run_config(const nlohmann::json& j) {
    using detail::read_if;
    require(j.is_object(), ErrorKind::Config, "config must be a JSON object");
    static const std::set<std::string> known{"input", "synth", "output_dir", "k_folds", "seeds", "encode",
                                             "sweep", "grids", "features", "eval"};
    for (const auto& [key, value] : j.items()) require(known.count(key) > 0, ErrorKind::Config, "unknown config key '" + key + "'");

    RunConfig c;
    try {
        if (j.contains("input")) {
            const auto& in = j.at("input");
            InputPaths p;
            read_if(in, "fixations", p.fixations);
            read_if(in, "mask", p.mask);
            read_if(in, "mask_threshold", p.mask_threshold);
            read_if(in, "acquisition", p.acquisition);
            c.input = p;
        }
        if (j.contains("synth")) c.synth = j.at("synth").get<GeneratorConfig>();
        read_if(j, "output_dir", c.output_dir);
        read_if(j, "k_folds", c.k_folds);
        c.eval.k_folds = c.k_folds;
        read_if(j, "seeds", c.seeds);
        if (j.contains("encode")) {
            const auto& e = j.at("encode");
            if (e.contains("configs")) {
                c.encode_configs.clear();
                for (const auto& triple : e.at("configs")) {
                    require(triple.is_array() && triple.size() == 3, ErrorKind::Config,
                            "encode.configs entries are [x_div, y_div, t_groups]");
                    c.encode_configs.push_back({triple.at(0).get<int>(), triple.at(1).get<int>(), triple.at(2).get<int>()});
                }
            }
        }
        if (j.contains("sweep")) {
            const auto& s = j.at("sweep");
            read_if(s, "grid_sizes", c.space.grid_sizes);
            read_if(s, "t_groups", c.space.t_groups);
            if (s.contains("extractions")) {
                c.space.extractions.clear();
                for (const auto& e : s.at("extractions")) c.space.extractions.push_back(parse_reduction(e.get<std::string>()));
            }
            if (s.contains("classifiers")) {
                c.space.families.clear();
                for (const auto& f : s.at("classifiers")) c.space.families.push_back(parse_family(f.get<std::string>()));
            }
            if (s.contains("data_types")) {
                c.space.data_types.clear();
                for (const auto& d : s.at("data_types")) c.space.data_types.push_back(parse_data_type(d.get<std::string>()));
            }
        }
        if (j.contains("grids")) {
            const auto& g = j.at("grids");
            auto& h = c.space.grid;
            if (g.contains("knn")) read_if(g.at("knn"), "k", h.k);
            if (g.contains("logreg")) read_if(g.at("logreg"), "l2", h.l2);
            if (g.contains("gp")) {
                read_if(g.at("gp"), "bandwidth_scale", h.bandwidth_scale);
                read_if(g.at("gp"), "signal_variance", h.signal_variance);
            }
            if (g.contains("gboost")) {
                read_if(g.at("gboost"), "n_trees", h.n_trees);
                read_if(g.at("gboost"), "depth", h.depth);
                read_if(g.at("gboost"), "learning_rate", h.learning_rate);
            }
        }
        if (j.contains("features")) {
            const auto& f = j.at("features");
            if (f.contains("regress_grid")) {
                const auto g = f.at("regress_grid").get<std::vector<int>>();
                require(g.size() == 2, ErrorKind::Config, "features.regress_grid is [x_div, y_div]");
                c.eval.trad.regress_x_div = g[0];
                c.eval.trad.regress_y_div = g[1];
            }
            read_if(f, "fovea_radius_px", c.eval.trad.fovea_radius_px);
            if (f.contains("saccade_metric")) {
                const auto m = f.at("saccade_metric").get<std::string>();
                require(m == "spatial" || m == "temporal", ErrorKind::Config, "saccade_metric is spatial or temporal");
                c.eval.trad.saccade_metric = m == "spatial" ? SaccadeMetric::spatial : SaccadeMetric::temporal;
            }
        }
        if (j.contains("eval")) {
            const auto& e = j.at("eval");
            read_if(e, "inner_folds", c.eval.inner_folds);
            if (e.contains("kpca_gamma") && !e.at("kpca_gamma").is_null()) c.eval.kpca_gamma = e.at("kpca_gamma").get<double>();
            read_if(e, "drop_empty_trials", c.eval.drop_empty_trials);
        }
    } catch (const nlohmann::json::exception& ex) {
        fail(ErrorKind::Config, std::string("bad config value: ") + ex.what());
    }
    c.validate();
    return c;
}

inline RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    require(static_cast<bool>(in), ErrorKind::Config, "cannot open config '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& ex) {
        fail(ErrorKind::Config, "config '" + path + "' is not valid JSON: " + ex.what());
    }
    return parse_run_config(j);
}

/// Fully resolved config, defaults included; the provenance record embeds it.
inline nlohmann::json to_json(const RunConfig& c) {
    nlohmann::json j;
    if (c.input) {
        j["input"] = {{"fixations", c.input->fixations},
                      {"mask", c.input->mask},
                      {"mask_threshold", c.input->mask_threshold},
                      {"acquisition", c.input->acquisition}};
    }
    if (c.synth) j["synth"] = *c.synth;
    j["output_dir"] = c.output_dir;
    j["k_folds"] = c.k_folds;
    j["seeds"] = c.seeds;
    auto configs = nlohmann::json::array();
    for (const auto& e : c.encode_configs) configs.push_back({e.x_div, e.y_div, e.t_groups});
    j["encode"] = {{"configs", configs}};
    std::vector<std::string> extractions, classifiers, data_types;
    for (const auto& e : c.space.extractions) extractions.push_back(e.label());
    for (auto f : c.space.families) classifiers.push_back(to_string(f));
    for (auto d : c.space.data_types) data_types.push_back(to_string(d));
    j["sweep"] = {{"grid_sizes", c.space.grid_sizes},
                  {"t_groups", c.space.t_groups},
                  {"extractions", extractions},
                  {"classifiers", classifiers},
                  {"data_types", data_types}};
    const auto& h = c.space.grid;
    j["grids"] = {{"knn", {{"k", h.k}}},
                  {"logreg", {{"l2", h.l2}}},
                  {"gp", {{"bandwidth_scale", h.bandwidth_scale}, {"signal_variance", h.signal_variance}}},
                  {"gboost", {{"n_trees", h.n_trees}, {"depth", h.depth}, {"learning_rate", h.learning_rate}}}};
    j["features"] = {{"regress_grid", {c.eval.trad.regress_x_div, c.eval.trad.regress_y_div}},
                     {"fovea_radius_px", c.eval.trad.fovea_radius_px},
                     {"saccade_metric", std::string(to_string(c.eval.trad.saccade_metric))}};
    j["eval"] = {{"inner_folds", c.eval.inner_folds},
                 {"kpca_gamma", c.eval.kpca_gamma ? nlohmann::json(*c.eval.kpca_gamma) : nlohmann::json(nullptr)},
                 {"drop_empty_trials", c.eval.drop_empty_trials}};
    return j;
}

/// 64-bit FNV-1a.
inline std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t h = 0xcbf29ce484222325ULL) {
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

inline std::string file_digest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return "missing";
    std::ostringstream ss;
    ss << in.rdbuf();
    return hex64(fnv1a64(ss.str()));
}

/// Hash of everything that determines the results except the seed list and
/// the output location. Input files contribute their contents, not paths.
inline std::string config_hash(const RunConfig& c) {
    nlohmann::json j = to_json(c);
    j.erase("seeds");
    j.erase("output_dir");
    if (c.input) {
        j["input"]["fixations"] = file_digest(c.input->fixations);
        j["input"]["mask"] = c.input->mask.empty() ? std::string() : file_digest(c.input->mask);
    }
    return hex64(fnv1a64(j.dump()));
}

}  // namespace gazeclf
