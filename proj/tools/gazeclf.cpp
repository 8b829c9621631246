// gazeclf command-line tool.
//
//   gazeclf synth    --config run.json
//   gazeclf encode   --config run.json
//   gazeclf features --config run.json
//   gazeclf sweep    --config run.json [--jobs N] [--seed S] [--dry-run]
//   gazeclf report   --config run.json
//
// Exit codes: 0 success, 2 config error, 3 data error, 4 numerical failure.

#include <atomic>
#include <chrono>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "gazeclf/encoding.hpp"
#include "gazeclf/errors.hpp"
#include "gazeclf/evaluation.hpp"
#include "gazeclf/gaze_data.hpp"
#include "gazeclf/run_config.hpp"
#include "gazeclf/synth.hpp"
#include "gazeclf/trad_features.hpp"

namespace fs = std::filesystem;
using namespace gazeclf;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitNumerical = 4;

struct Globals {
    std::string config_path;
    int jobs = 1;
    std::optional<std::uint64_t> seed;
    bool dry_run = false;
};

struct LoadedData {
    Dataset dataset;
    std::optional<SalientMask> mask;
    FilterReport filter;
};

fs::path output_dir(const RunConfig& cfg) {
    const fs::path dir(cfg.output_dir);
    require(fs::is_directory(dir), ErrorKind::Config, "output directory '" + cfg.output_dir + "' does not exist");
    return dir;
}

void write_file(const fs::path& path, const std::string& contents) {
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        require(static_cast<bool>(out), ErrorKind::Config, "cannot write '" + tmp.string() + "'");
        out << contents;
    }
    fs::rename(tmp, path);
}

nlohmann::json decision_flags(const RunConfig& cfg) {
    return {{"rng", "xoshiro256** seeded by splitmix64; sub-streams via mix_seed(seed, index)"},
            {"mask_threshold", cfg.input ? cfg.input->mask_threshold : kDefaultMaskThreshold},
            {"fovea_radius_px", cfg.eval.trad.fovea_radius_px},
            {"regress_grid", {cfg.eval.trad.regress_x_div, cfg.eval.trad.regress_y_div}},
            {"saccade_metric", std::string(to_string(cfg.eval.trad.saccade_metric))},
            {"holdout_per_class", "floor(class size / k_folds) per fold; the remainder is always in training"},
            {"inner_folds", cfg.eval.inner_folds},
            {"kpca_kernel", "rbf"},
            {"kpca_gamma", cfg.eval.kpca_gamma ? nlohmann::json(*cfg.eval.kpca_gamma) : nlohmann::json("1/(d*mean feature variance)")},
            {"gp_bandwidth_reference", "median pairwise distance of the outer training split"},
            {"gp_prediction", "MacKay probit approximation"},
            {"drop_empty_trials", cfg.eval.drop_empty_trials},
            {"positive_class", "trainee"},
            {"threshold", 0.5}};
}

void write_provenance(const fs::path& dir, const std::string& command, const RunConfig& cfg,
                      const std::vector<std::string>& outputs) {
    const nlohmann::json j = {{"tool", "gazeclf"},
                              {"version", GAZECLF_VERSION},
                              {"command", command},
                              {"config_hash", config_hash(cfg)},
                              {"seeds", cfg.seeds},
                              {"decisions", decision_flags(cfg)},
                              {"config", to_json(cfg)},
                              {"outputs", outputs}};
    write_file(dir / (command + "_provenance.json"), j.dump(2) + "\n");
}

LoadedData load_data(const RunConfig& cfg, bool need_mask) {
    LoadedData out;
    Dataset raw;
    if (cfg.synth) {
        auto synthetic = generate_dataset(*cfg.synth);
        raw = std::move(synthetic.dataset);
        out.mask = std::move(synthetic.mask);
    } else {
        raw = load_trials(cfg.input->fixations);
        if (!cfg.input->mask.empty()) {
            out.mask = load_salient_mask(cfg.input->mask, cfg.input->mask_threshold);
        }
    }
    if (need_mask && !out.mask) fail(ErrorKind::EmptyMask, "traditional features need input.mask");
    out.filter = filter_out_of_bounds(raw).second;
    if (out.filter.total_removed() > 0) {
        std::cerr << "warning: removed " << out.filter.total_removed() << " out-of-bounds fixations\n";
    }
    out.dataset = std::move(raw);  // prepare_dataset applies the same filter before use
    return out;
}

std::string to_text(const auto& writer) {
    std::ostringstream os;
    writer(os);
    return os.str();
}

int cmd_synth(const RunConfig& cfg) {
    require(cfg.synth.has_value(), ErrorKind::Config, "synth needs a 'synth' section in the config");
    const auto dir = output_dir(cfg);
    const auto data = generate_dataset(*cfg.synth);
    write_file(dir / "fixations.csv", to_text([&](std::ostream& os) { write_trials(os, data.dataset); }));
    write_file(dir / "mask.pgm", to_text([&](std::ostream& os) { write_pgm(os, data.image); }));
    write_provenance(dir, "synth", cfg, {"fixations.csv", "mask.pgm"});
    std::cout << "wrote " << data.dataset.size() << " trials (" << data.dataset.total_fixations() << " fixations) to "
              << dir.string() << "\n";
    return 0;
}

int cmd_encode(const RunConfig& cfg) {
    const auto dir = output_dir(cfg);
    const auto data = load_data(cfg, false);
    const Dataset prepared = prepare_dataset(data.dataset, cfg.eval);
    if (prepared.size() == 0) std::cerr << "warning: dataset is empty; writing header-only files\n";
    std::vector<std::string> outputs;
    for (const auto& ec : cfg.encode_configs) {
        const auto table = encode_dataset(prepared, ec);
        const std::string name = "encoded_" + std::to_string(ec.x_div) + "x" + std::to_string(ec.y_div) + "_t" +
                                 std::to_string(ec.t_groups) + ".csv";
        write_file(dir / name, to_text([&](std::ostream& os) { write_encoded_csv(os, table); }));
        outputs.push_back(name);
        std::cout << name << ": " << table.features.rows() << " x " << table.features.cols() << "\n";
    }
    write_file(dir / "filter_report.csv", to_text([&](std::ostream& os) { write_filter_report(os, data.filter); }));
    outputs.push_back("filter_report.csv");
    write_provenance(dir, "encode", cfg, outputs);
    return 0;
}

int cmd_features(const RunConfig& cfg) {
    const auto dir = output_dir(cfg);
    const auto data = load_data(cfg, true);
    const Dataset prepared = prepare_dataset(data.dataset, cfg.eval);
    const auto table = compute_traditional(prepared, *data.mask, cfg.eval.trad);
    write_file(dir / "traditional_features.csv", to_text([&](std::ostream& os) { write_features_csv(os, table); }));
    write_file(dir / "filter_report.csv", to_text([&](std::ostream& os) { write_filter_report(os, data.filter); }));
    write_provenance(dir, "features", cfg, {"traditional_features.csv", "filter_report.csv"});
    std::cout << "traditional_features.csv: " << table.features.rows() << " rows\n";
    return 0;
}

void write_report_files(const fs::path& dir, const SweepReport& rep, const std::string& acquisition) {
    write_file(dir / "aggregate.csv",
               to_text([&](std::ostream& os) { write_aggregate_csv(os, rep.table, table_keys()); }));
    write_file(dir / "tables.txt", to_text([&](std::ostream& os) { write_tables_text(os, rep.table, acquisition); }));
    auto best = nlohmann::json::array();
    for (const auto& b : rep.best) best.push_back(to_json(b));
    write_file(dir / "best_per_classifier.json", best.dump(2) + "\n");
}

int cmd_sweep(const RunConfig& cfg, const Globals& g) {
    const auto units = plan_sweep(cfg.space, cfg.seeds);
    const std::size_t per_unit = records_per_unit(cfg.space);
    if (g.dry_run) {
        std::cout << "config hash " << config_hash(cfg) << "\n";
        std::cout << "unit,data_type,grid_size,t_groups,seed,records\n";
        for (const auto& u : units) {
            std::cout << u.id() << ',' << to_string(u.data_type) << ','
                      << (u.data_type == DataType::encoded ? std::to_string(u.encoding.x_div) : "-") << ','
                      << (u.data_type == DataType::encoded ? std::to_string(u.encoding.t_groups) : "-") << ',' << u.seed
                      << ',' << per_unit << "\n";
        }
        std::cout << units.size() << " units, " << units.size() * per_unit << " run records, "
                  << units.size() * per_unit * static_cast<std::size_t>(cfg.k_folds) << " fold rows\n";
        return 0;
    }

    const auto dir = output_dir(cfg);
    const bool need_mask = std::find(cfg.space.data_types.begin(), cfg.space.data_types.end(), DataType::traditional) !=
                           cfg.space.data_types.end();
    const auto data = load_data(cfg, need_mask);
    const Dataset prepared = prepare_dataset(data.dataset, cfg.eval);
    const SalientMask* mask = data.mask ? &*data.mask : nullptr;

    const std::string hash = config_hash(cfg);
    const fs::path cache = dir / "cache" / hash;
    fs::create_directories(cache);

    std::vector<std::vector<RunRecord>> results(units.size());
    std::atomic<std::size_t> next{0};
    std::atomic<bool> stop{false};
    std::exception_ptr failure;
    std::mutex io_mutex;
    std::size_t finished = 0;
    const auto started = std::chrono::steady_clock::now();

    auto worker = [&] {
        while (!stop) {
            const std::size_t i = next++;
            if (i >= units.size()) return;
            const auto& unit = units[i];
            const fs::path file = cache / (unit.id() + ".csv");
            try {
                bool cached = false;
                if (fs::exists(file)) {
                    std::ifstream in(file);
                    auto recs = read_raw_records(in, file.string());
                    if (recs.size() == per_unit) {
                        results[i] = std::move(recs);
                        cached = true;
                    }
                }
                const auto t0 = std::chrono::steady_clock::now();
                if (!cached) {
                    results[i] = evaluate_unit(prepared, mask, unit, cfg.space, cfg.eval, cfg.acquisition());
                    write_file(file, to_text([&](std::ostream& os) { write_raw_records(os, results[i]); }));
                }
                const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
                std::lock_guard lock(io_mutex);
                ++finished;
                std::cerr << "[" << finished << "/" << units.size() << "] " << unit.id()
                          << (cached ? " (cached)" : "") << " " << std::fixed << std::setprecision(1) << secs << "s\n";
            } catch (...) {
                std::lock_guard lock(io_mutex);
                if (!failure) failure = std::current_exception();
                stop = true;
            }
        }
    };

    const int jobs = std::max(1, g.jobs);
    std::vector<std::thread> pool;
    for (int j = 1; j < jobs; ++j) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);

    std::vector<RunRecord> records;
    for (auto& r : results)
        for (auto& rec : r) records.push_back(std::move(rec));
    const auto rep = assemble_report(std::move(records));
    write_file(dir / "raw_records.csv", to_text([&](std::ostream& os) { write_raw_records(os, rep.records); }));
    write_report_files(dir, rep, cfg.acquisition());
    write_file(dir / "filter_report.csv", to_text([&](std::ostream& os) { write_filter_report(os, data.filter); }));
    write_provenance(dir, "sweep", cfg,
                     {"raw_records.csv", "aggregate.csv", "tables.txt", "best_per_classifier.json", "filter_report.csv"});

    const double total = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    std::cerr << "sweep finished in " << std::fixed << std::setprecision(1) << total << "s with " << jobs << " job(s)\n";
    for (const auto& b : rep.best) {
        std::cout << to_string(b.family) << ' ' << to_string(b.data_type) << ' ' << b.extraction << " grid=" << b.grid_size
                  << " t=" << b.t_groups << " mean_auc=" << detail::format_double(b.mean_auc) << "\n";
    }
    return 0;
}

int cmd_report(const RunConfig& cfg) {
    const auto dir = output_dir(cfg);
    const fs::path raw = dir / "raw_records.csv";
    std::ifstream in(raw);
    require(static_cast<bool>(in), ErrorKind::MalformedRow, "cannot open '" + raw.string() + "'; run sweep first");
    auto records = read_raw_records(in, raw.string());
    require(!records.empty(), ErrorKind::EmptyGroup, "'" + raw.string() + "' has no records");
    const auto rep = assemble_report(std::move(records));
    write_report_files(dir, rep, rep.records.front().key.acquisition);
    write_provenance(dir, "report", cfg, {"aggregate.csv", "tables.txt", "best_per_classifier.json"});
    std::cout << to_text([&](std::ostream& os) { write_tables_text(os, rep.table, rep.records.front().key.acquisition); });
    return 0;
}

int exit_code(ErrorCategory c) {
    switch (c) {
        case ErrorCategory::Config: return kExitConfig;
        case ErrorCategory::Data: return kExitData;
        case ErrorCategory::Numerical: return kExitNumerical;
    }
    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spatiotemporal gaze encoding and expertise classification"};
    app.require_subcommand(1);
    Globals g;
    app.add_option("--config", g.config_path, "JSON run configuration")->required();
    app.add_option("--jobs", g.jobs, "worker threads for sweep")->check(CLI::PositiveNumber);
    app.add_option("--seed", g.seed, "synth: generator seed; sweep: single CV seed");
    app.add_flag("--dry-run", g.dry_run, "sweep: print the configuration matrix and exit");
    for (const char* name : {"synth", "encode", "features", "sweep", "report"}) {
        app.add_subcommand(name)->fallthrough();
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitConfig;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    try {
        RunConfig cfg = load_run_config(g.config_path);
        if (g.seed) {
            if (cfg.synth && command == "synth") cfg.synth->seed = *g.seed;
            else cfg.seeds = {*g.seed};
        }
        if (command == "synth") return cmd_synth(cfg);
        if (command == "encode") return cmd_encode(cfg);
        if (command == "features") return cmd_features(cfg);
        if (command == "sweep") return cmd_sweep(cfg, g);
        return cmd_report(cfg);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code(e.category());
    } catch (const fs::filesystem_error& e) {
        std::cerr << "error: ConfigError: " << e.what() << "\n";
        return kExitConfig;
    }
}
