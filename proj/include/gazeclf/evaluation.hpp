#pragma once

// Stratified cross-validation of feature pipelines, the full-factorial
// sweep, and aggregation of fold-level metrics into report tables.
//
// Every reduction is fitted on the training rows of its outer fold only.
// All randomness derives from the cross-validation seed: the outer plan uses
// the seed itself and the inner grid search of fold f uses
// mix_seed(seed, f).

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include <nlohmann/json.hpp>

#include "gazeclf/classifier.hpp"
#include "gazeclf/dimred.hpp"
#include "gazeclf/encoding.hpp"
#include "gazeclf/errors.hpp"
#include "gazeclf/folds.hpp"
#include "gazeclf/gaze_data.hpp"
#include "gazeclf/linalg.hpp"
#include "gazeclf/metrics.hpp"
#include "gazeclf/trad_features.hpp"

namespace gazeclf {

enum class DataType { encoded, traditional };

inline std::string to_string(DataType d) { return d == DataType::encoded ? "encoded" : "traditional"; }

inline DataType parse_data_type(const std::string& s) {
    if (s == "encoded") return DataType::encoded;
    if (s == "traditional") return DataType::traditional;
    fail(ErrorKind::Config, "unknown data type '" + s + "'");
}

enum class Metric { auc, f1, accuracy, sensitivity, specificity };

inline constexpr std::array<Metric, 5> kAllMetrics = {Metric::auc, Metric::f1, Metric::accuracy, Metric::sensitivity,
                                                      Metric::specificity};

inline std::string to_string(Metric m) {
    switch (m) {
        case Metric::auc: return "auc";
        case Metric::f1: return "f1";
        case Metric::accuracy: return "accuracy";
        case Metric::sensitivity: return "sensitivity";
        case Metric::specificity: return "specificity";
    }
    return "?";
}

struct MetricSet {
    double auc = 0.0;
    double f1 = 0.0;
    double accuracy = 0.0;
    double sensitivity = 0.0;
    double specificity = 0.0;

    double get(Metric m) const {
        switch (m) {
            case Metric::auc: return auc;
            case Metric::f1: return f1;
            case Metric::accuracy: return accuracy;
            case Metric::sensitivity: return sensitivity;
            case Metric::specificity: return specificity;
        }
        return 0.0;
    }

    double& get(Metric m) {
        switch (m) {
            case Metric::auc: return auc;
            case Metric::f1: return f1;
            case Metric::accuracy: return accuracy;
            case Metric::sensitivity: return sensitivity;
            case Metric::specificity: return specificity;
        }
        return auc;
    }

    bool operator==(const MetricSet&) const = default;
};

inline MetricSet score_predictions(const std::vector<double>& probabilities, const std::vector<int>& truth) {
    const auto cm = confusion_metrics(predicted_labels(probabilities), truth);
    return {roc_auc(probabilities, truth), cm.f1, cm.accuracy, cm.sensitivity, cm.specificity};
}

struct FoldResult {
    MetricSet metrics;
    int n_features = 0;
    std::string hyperparams;
    double inner_score = 0.0;

    bool operator==(const FoldResult&) const = default;
};

struct RunKey {
    std::string acquisition = "synthetic";
    Family family = Family::logreg;
    DataType data_type = DataType::encoded;
    std::string extraction = "none";
    int grid_x = 0;  // 0 for traditional features
    int grid_y = 0;
    int t_groups = 0;
    std::uint64_t seed = 0;

    std::string grid_label() const {
        if (grid_x == grid_y) return std::to_string(grid_x);
        return std::to_string(grid_x) + "x" + std::to_string(grid_y);
    }

    bool operator==(const RunKey&) const = default;
};

struct RunRecord {
    RunKey key;
    std::vector<FoldResult> folds;
    MetricSet mean;
    MetricSet variance;  // population variance over folds

    bool operator==(const RunRecord&) const = default;
};

/// Mean and population variance of every metric over a list of fold sets.
inline std::pair<MetricSet, MetricSet> summarize(const std::vector<MetricSet>& values) {
    require(!values.empty(), ErrorKind::EmptyGroup, "cannot summarize an empty group");
    MetricSet mean, var;
    const double n = static_cast<double>(values.size());
    for (auto m : kAllMetrics) {
        double s = 0.0;
        for (const auto& v : values) s += v.get(m);
        mean.get(m) = s / n;
        double ss = 0.0;
        for (const auto& v : values) {
            const double d = v.get(m) - mean.get(m);
            ss += d * d;
        }
        var.get(m) = ss / n;
    }
    return {mean, var};
}

inline void finalize(RunRecord& r) {
    std::vector<MetricSet> v;
    for (const auto& f : r.folds) v.push_back(f.metrics);
    std::tie(r.mean, r.variance) = summarize(v);
}

struct EvalOptions {
    int k_folds = 10;
    int inner_folds = 3;
    std::optional<double> kpca_gamma;  // default: 1 / (d * mean feature variance) of each training split
    TradParams trad;
    bool drop_empty_trials = false;
};

struct FoldData {
    FittedReduction reduction;
    Matrix train_x;
    Matrix test_x;
    std::vector<int> train_y;
    std::vector<int> test_y;
};

/// Splits one outer fold and fits the reduction on its training rows only.
inline FoldData prepare_fold(const Matrix& x, const std::vector<int>& y, const FoldPlan& plan, int fold,
                             const ReductionSpec& reduction, std::optional<double> kpca_gamma = std::nullopt) {
    const auto tr = plan.train_rows(fold);
    const auto te = plan.test_rows(fold);
    const Matrix raw_train = select_rows(x, tr);
    FoldData out;
    out.reduction = fit_reduction(raw_train, reduction, kpca_gamma);
    out.train_x = out.reduction.transform(raw_train);
    out.test_x = out.reduction.transform(select_rows(x, te));
    out.train_y = select(y, tr);
    out.test_y = select(y, te);
    return out;
}

/// Cross-validates each classifier on one feature table and reduction. The
/// fold reductions are fitted once and shared by all classifiers.
inline std::vector<RunRecord> evaluate_features(const FeatureTable& table, const RunKey& base_key,
                                                const ReductionSpec& reduction,
                                                const std::vector<ClassifierSpec>& classifiers,
                                                const EvalOptions& options) {
    const FoldPlan plan = stratified_folds(table.labels, options.k_folds, base_key.seed);
    std::vector<RunRecord> records;
    for (const auto& spec : classifiers) {
        RunRecord r;
        r.key = base_key;
        r.key.family = spec.family;
        r.key.extraction = reduction.label();
        records.push_back(std::move(r));
    }
    for (int fold = 0; fold < options.k_folds; ++fold) {
        const auto data = prepare_fold(table.features, table.labels, plan, fold, reduction, options.kpca_gamma);
        for (std::size_t c = 0; c < classifiers.size(); ++c) {
            const auto search = grid_search(classifiers[c], data.train_x, data.train_y, options.inner_folds,
                                            mix_seed(base_key.seed, static_cast<std::uint64_t>(fold)));
            FoldResult fr;
            fr.metrics = score_predictions(predict_proba(search.model, data.test_x), data.test_y);
            fr.n_features = static_cast<int>(data.train_x.cols());
            fr.hyperparams = describe(classifiers[c].family, search.best_hyperparams);
            fr.inner_score = search.best_inner_score;
            records[c].folds.push_back(std::move(fr));
        }
    }
    for (auto& r : records) finalize(r);
    return records;
}

inline Dataset prepare_dataset(const Dataset& dataset, const EvalOptions& options) {
    auto filtered = filter_out_of_bounds(dataset).first;
    if (!options.drop_empty_trials) return filtered;
    std::vector<Trial> kept;
    for (const auto& t : filtered.trials())
        if (!t.fixations.empty()) kept.push_back(t);
    return Dataset(std::move(kept));
}

inline FeatureTable build_features(const Dataset& dataset, const SalientMask* mask, DataType data_type,
                                   const EncodingConfig& encoding, const EvalOptions& options) {
    if (data_type == DataType::encoded) return encode_dataset(dataset, encoding);
    require(mask != nullptr, ErrorKind::EmptyMask, "traditional features need a salient mask");
    return compute_traditional(dataset, *mask, options.trad);
}

/// One configuration: features -> per-fold reduction -> grid search -> holdout metrics.
inline RunRecord evaluate_config(const Dataset& dataset, const SalientMask* mask, DataType data_type,
                                 const EncodingConfig& encoding, const ReductionSpec& reduction,
                                 const ClassifierSpec& classifier, const EvalOptions& options, std::uint64_t seed,
                                 const std::string& acquisition = "synthetic") {
    const Dataset prepared = prepare_dataset(dataset, options);
    const auto table = build_features(prepared, mask, data_type, encoding, options);
    RunKey key;
    key.acquisition = acquisition;
    key.data_type = data_type;
    key.seed = seed;
    if (data_type == DataType::encoded) {
        key.grid_x = encoding.x_div;
        key.grid_y = encoding.y_div;
        key.t_groups = encoding.t_groups;
    }
    return evaluate_features(table, key, reduction, {classifier}, options).front();
}

// ---------------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------------

struct SweepSpace {
    std::vector<int> grid_sizes{5, 7, 10, 15};
    std::vector<int> t_groups{3, 5, 10, 20};
    std::vector<ReductionSpec> extractions = default_extractions();
    std::vector<Family> families{Family::gp, Family::knn, Family::logreg, Family::gboost};
    std::vector<DataType> data_types{DataType::encoded, DataType::traditional};
    HyperGrid grid;

    std::vector<ClassifierSpec> classifier_specs() const {
        std::vector<ClassifierSpec> out;
        for (auto f : families) out.push_back({f, grid});
        return out;
    }
};

/// A schedulable piece of the sweep: one feature table under one seed. It
/// expands into |extractions| x |families| run records.
struct SweepUnit {
    DataType data_type = DataType::encoded;
    EncodingConfig encoding;
    std::uint64_t seed = 0;

    /// Stable identifier, e.g. "encoded_g10_t5_s3" or "traditional_s3".
    std::string id() const {
        if (data_type == DataType::traditional) return "traditional_s" + std::to_string(seed);
        return "encoded_g" + std::to_string(encoding.x_div) + "_t" + std::to_string(encoding.t_groups) + "_s" +
               std::to_string(seed);
    }
};

/// Units in report order: seed, then data type, then grid size, then t.
inline std::vector<SweepUnit> plan_sweep(const SweepSpace& space, const std::vector<std::uint64_t>& seeds) {
    require(!seeds.empty(), ErrorKind::Config, "at least one seed is required");
    require(!space.extractions.empty() && !space.families.empty() && !space.data_types.empty(), ErrorKind::Config,
            "sweep space is empty");
    std::vector<SweepUnit> units;
    for (auto seed : seeds) {
        for (auto dt : space.data_types) {
            if (dt == DataType::traditional) {
                units.push_back({dt, {}, seed});
                continue;
            }
            require(!space.grid_sizes.empty() && !space.t_groups.empty(), ErrorKind::Config,
                    "encoded sweep needs grid sizes and temporal groups");
            for (int g : space.grid_sizes)
                for (int t : space.t_groups) units.push_back({dt, {g, g, t}, seed});
        }
    }
    return units;
}

inline std::size_t records_per_unit(const SweepSpace& space) {
    return space.extractions.size() * space.families.size();
}

inline std::vector<RunRecord> evaluate_unit(const Dataset& prepared, const SalientMask* mask, const SweepUnit& unit,
                                            const SweepSpace& space, const EvalOptions& options,
                                            const std::string& acquisition = "synthetic") {
    const auto table = build_features(prepared, mask, unit.data_type, unit.encoding, options);
    RunKey key;
    key.acquisition = acquisition;
    key.data_type = unit.data_type;
    key.seed = unit.seed;
    if (unit.data_type == DataType::encoded) {
        key.grid_x = unit.encoding.x_div;
        key.grid_y = unit.encoding.y_div;
        key.t_groups = unit.encoding.t_groups;
    }
    const auto specs = space.classifier_specs();
    std::vector<RunRecord> out;
    for (const auto& reduction : space.extractions) {
        auto recs = evaluate_features(table, key, reduction, specs, options);
        for (auto& r : recs) out.push_back(std::move(r));
    }
    return out;
}

// ---------------------------------------------------------------------------
// aggregation
// ---------------------------------------------------------------------------

enum class GroupKey { acquisition, classifier, data_type, extraction, grid_size, t_groups, seed };

inline std::string key_value(const RunKey& k, GroupKey g) {
    switch (g) {
        case GroupKey::acquisition: return k.acquisition;
        case GroupKey::classifier: return to_string(k.family);
        case GroupKey::data_type: return to_string(k.data_type);
        case GroupKey::extraction: return k.extraction;
        case GroupKey::grid_size: return k.grid_label();
        case GroupKey::t_groups: return std::to_string(k.t_groups);
        case GroupKey::seed: return std::to_string(k.seed);
    }
    return {};
}

inline std::string to_string(GroupKey g) {
    switch (g) {
        case GroupKey::acquisition: return "acquisition";
        case GroupKey::classifier: return "classifier";
        case GroupKey::data_type: return "data_type";
        case GroupKey::extraction: return "extraction";
        case GroupKey::grid_size: return "grid_size";
        case GroupKey::t_groups: return "t_groups";
        case GroupKey::seed: return "seed";
    }
    return {};
}

inline const std::vector<GroupKey>& all_group_keys() {
    static const std::vector<GroupKey> keys{GroupKey::acquisition, GroupKey::classifier, GroupKey::data_type,
                                            GroupKey::extraction,  GroupKey::grid_size,  GroupKey::t_groups,
                                            GroupKey::seed};
    return keys;
}

struct AggregateRow {
    std::vector<std::string> key;
    std::size_t n_records = 0;
    std::size_t n_values = 0;
    MetricSet mean;
    MetricSet variance;
};

/// Groups records by the listed keys (first-appearance order) and reports the
/// mean and population variance over every fold-level value in each group.
inline std::vector<AggregateRow> aggregate(const std::vector<RunRecord>& records, const std::vector<GroupKey>& keys) {
    require(!records.empty(), ErrorKind::EmptyGroup, "no records to aggregate");
    std::map<std::vector<std::string>, std::size_t> index;
    std::vector<AggregateRow> rows;
    std::vector<std::vector<MetricSet>> values;
    for (const auto& r : records) {
        std::vector<std::string> k;
        for (auto g : keys) k.push_back(key_value(r.key, g));
        auto [it, inserted] = index.try_emplace(k, rows.size());
        if (inserted) {
            rows.push_back({k});
            values.emplace_back();
        }
        auto& row = rows[it->second];
        ++row.n_records;
        for (const auto& f : r.folds) values[it->second].push_back(f.metrics);
    }
    for (std::size_t i = 0; i < rows.size(); ++i) {
        rows[i].n_values = values[i].size();
        std::tie(rows[i].mean, rows[i].variance) = summarize(values[i]);
    }
    return rows;
}

struct BestSelection {
    Family family = Family::logreg;
    DataType data_type = DataType::encoded;
    std::string extraction;
    int grid_size = 0;
    int t_groups = 0;
    double mean_auc = 0.0;
    double variance_auc = 0.0;
    std::size_t n_records = 0;
};

/// Per (classifier, data type): the configuration (extraction, grid, t)
/// with the highest mean AUC over its seeds; ties go to the
/// lexicographically smallest (extraction, grid, t).
inline std::vector<BestSelection> select_best(const std::vector<RunRecord>& records) {
    const auto rows = aggregate(records, {GroupKey::classifier, GroupKey::data_type, GroupKey::extraction,
                                          GroupKey::grid_size, GroupKey::t_groups});
    std::map<std::pair<std::string, std::string>, BestSelection> best;
    std::vector<std::pair<std::string, std::string>> order;
    for (const auto& row : rows) {
        BestSelection cand;
        cand.family = parse_family(row.key[0]);
        cand.data_type = parse_data_type(row.key[1]);
        cand.extraction = row.key[2];
        cand.grid_size = std::stoi(row.key[3]);
        cand.t_groups = std::stoi(row.key[4]);
        cand.mean_auc = row.mean.auc;
        cand.variance_auc = row.variance.auc;
        cand.n_records = row.n_records;
        const auto k = std::make_pair(row.key[0], row.key[1]);
        auto it = best.find(k);
        if (it == best.end()) {
            best.emplace(k, cand);
            order.push_back(k);
            continue;
        }
        auto& cur = it->second;
        const auto cand_cfg = std::make_tuple(cand.extraction, cand.grid_size, cand.t_groups);
        const auto cur_cfg = std::make_tuple(cur.extraction, cur.grid_size, cur.t_groups);
        if (cand.mean_auc > cur.mean_auc || (cand.mean_auc == cur.mean_auc && cand_cfg < cur_cfg)) cur = cand;
    }
    std::vector<BestSelection> out;
    for (const auto& k : order) out.push_back(best.at(k));
    return out;
}

struct SweepReport {
    std::vector<RunRecord> records;
    std::vector<BestSelection> best;
    std::vector<AggregateRow> table;  // keyed by (classifier, data_type, extraction)
};

inline const std::vector<GroupKey>& table_keys() {
    static const std::vector<GroupKey> keys{GroupKey::classifier, GroupKey::data_type, GroupKey::extraction};
    return keys;
}

inline SweepReport assemble_report(std::vector<RunRecord> records) {
    SweepReport rep;
    rep.best = select_best(records);
    rep.table = aggregate(records, table_keys());
    rep.records = std::move(records);
    return rep;
}

/// Serial reference driver; the CLI schedules the same units on a pool.
inline SweepReport run_sweep(const Dataset& dataset, const SalientMask* mask, const SweepSpace& space,
                             const std::vector<std::uint64_t>& seeds, const EvalOptions& options,
                             const std::string& acquisition = "synthetic") {
    const Dataset prepared = prepare_dataset(dataset, options);
    std::vector<RunRecord> records;
    for (const auto& unit : plan_sweep(space, seeds)) {
        for (auto& r : evaluate_unit(prepared, mask, unit, space, options, acquisition)) records.push_back(std::move(r));
    }
    return assemble_report(std::move(records));
}

// ---------------------------------------------------------------------------
// CSV / text output
// ---------------------------------------------------------------------------

inline constexpr std::string_view kRawRecordHeader =
    "acquisition,classifier,data_type,extraction,grid_size,t_groups,seed,fold,n_features,hyperparams,inner_balanced_"
    "accuracy,auc,f1,accuracy,sensitivity,specificity";

inline void write_raw_records(std::ostream& out, const std::vector<RunRecord>& records, bool header = true) {
    using detail::format_double;
    if (header) out << kRawRecordHeader << '\n';
    for (const auto& r : records) {
        for (std::size_t f = 0; f < r.folds.size(); ++f) {
            const auto& fr = r.folds[f];
            out << r.key.acquisition << ',' << to_string(r.key.family) << ',' << to_string(r.key.data_type) << ','
                << r.key.extraction << ',' << r.key.grid_label() << ',' << r.key.t_groups << ',' << r.key.seed << ','
                << f << ',' << fr.n_features << ',' << fr.hyperparams << ',' << format_double(fr.inner_score) << ','
                << format_double(fr.metrics.auc) << ',' << format_double(fr.metrics.f1) << ','
                << format_double(fr.metrics.accuracy) << ',' << format_double(fr.metrics.sensitivity) << ','
                << format_double(fr.metrics.specificity) << '\n';
        }
    }
}

/// Inverse of write_raw_records; consecutive rows sharing a key form one record.
inline std::vector<RunRecord> read_raw_records(std::istream& in, const std::string& source = "<records>") {
    std::string line;
    std::size_t line_no = 0;
    std::vector<RunRecord> records;
    if (!std::getline(in, line)) return records;
    ++line_no;
    require(detail::trim(line) == kRawRecordHeader, ErrorKind::MalformedRow, source + ": unexpected header");
    while (std::getline(in, line)) {
        ++line_no;
        if (detail::trim(line).empty()) continue;
        const auto fields = detail::split_csv_line(detail::trim(line));
        const std::string where = source + ":" + std::to_string(line_no);
        require(fields.size() == 16, ErrorKind::MalformedRow, where + ": expected 16 columns");
        RunKey key;
        key.acquisition = std::string(fields[0]);
        key.family = parse_family(std::string(fields[1]));
        key.data_type = parse_data_type(std::string(fields[2]));
        key.extraction = std::string(fields[3]);
        const std::string grid(fields[4]);
        const auto x = grid.find('x');
        try {
            key.grid_x = std::stoi(grid.substr(0, x));
            key.grid_y = x == std::string::npos ? key.grid_x : std::stoi(grid.substr(x + 1));
            key.t_groups = std::stoi(std::string(fields[5]));
            key.seed = std::stoull(std::string(fields[6]));
        } catch (const std::logic_error&) {
            fail(ErrorKind::MalformedRow, where + ": bad integer field");
        }
        FoldResult fr;
        fr.n_features = std::atoi(std::string(fields[8]).c_str());
        fr.hyperparams = std::string(fields[9]);
        double nums[6];
        for (int i = 0; i < 6; ++i)
            require(detail::parse_finite(fields[10 + i], nums[i]), ErrorKind::MalformedRow, where + ": bad metric value");
        fr.inner_score = nums[0];
        fr.metrics = {nums[1], nums[2], nums[3], nums[4], nums[5]};
        if (records.empty() || !(records.back().key == key)) records.push_back({key});
        records.back().folds.push_back(fr);
    }
    for (auto& r : records) finalize(r);
    return records;
}

inline void write_aggregate_csv(std::ostream& out, const std::vector<AggregateRow>& rows,
                                const std::vector<GroupKey>& keys) {
    using detail::format_double;
    for (auto k : keys) out << to_string(k) << ',';
    out << "n_records,n_values";
    for (auto m : kAllMetrics) out << ',' << to_string(m) << "_mean," << to_string(m) << "_variance";
    out << '\n';
    for (const auto& r : rows) {
        for (const auto& v : r.key) out << v << ',';
        out << r.n_records << ',' << r.n_values;
        for (auto m : kAllMetrics) out << ',' << format_double(r.mean.get(m)) << ',' << format_double(r.variance.get(m));
        out << '\n';
    }
}

namespace detail {

inline std::string cell_text(double mean, double variance) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3f (± %.3f)", mean, variance);
    return buf;
}

}  // namespace detail

/// One table per metric: rows are (extraction, data type), columns are
/// classifiers, cells read "mean (± variance)".
inline void write_tables_text(std::ostream& out, const std::vector<AggregateRow>& table_rows,
                              const std::string& acquisition) {
    std::vector<std::string> classifiers;
    std::vector<std::string> extractions;
    std::vector<std::string> data_types;
    std::map<std::tuple<std::string, std::string, std::string>, const AggregateRow*> cells;
    auto note = [](std::vector<std::string>& v, const std::string& s) {
        if (std::find(v.begin(), v.end(), s) == v.end()) v.push_back(s);
    };
    for (const auto& r : table_rows) {
        note(classifiers, r.key[0]);
        note(data_types, r.key[1]);
        note(extractions, r.key[2]);
        cells[{r.key[0], r.key[1], r.key[2]}] = &r;
    }
    std::sort(classifiers.begin(), classifiers.end());
    for (auto m : kAllMetrics) {
        std::string title = to_string(m);
        for (auto& c : title) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
        out << acquisition << " dataset - " << title << " (mean (± population variance) over fold-level values)\n";
        char buf[256];
        std::snprintf(buf, sizeof(buf), "%-14s %-12s", "Extraction", "Data Type");
        out << buf;
        for (const auto& c : classifiers) {
            std::string up = c;
            for (auto& ch : up) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
            std::snprintf(buf, sizeof(buf), " %-18s", up.c_str());
            out << buf;
        }
        out << '\n';
        for (const auto& e : extractions) {
            for (const auto& d : data_types) {
                std::snprintf(buf, sizeof(buf), "%-14s %-12s", e.c_str(), d.c_str());
                out << buf;
                for (const auto& c : classifiers) {
                    const auto it = cells.find({c, d, e});
                    const std::string text =
                        it == cells.end() ? "-" : detail::cell_text(it->second->mean.get(m), it->second->variance.get(m));
                    std::snprintf(buf, sizeof(buf), " %-18s", text.c_str());
                    out << buf;
                }
                out << '\n';
            }
        }
        out << '\n';
    }
}

inline nlohmann::json to_json(const BestSelection& b) {
    return {{"classifier", to_string(b.family)}, {"data_type", to_string(b.data_type)},
            {"extraction", b.extraction},        {"grid_size", b.grid_size},
            {"t_groups", b.t_groups},            {"mean_auc", b.mean_auc},
            {"variance_auc", b.variance_auc},    {"n_records", b.n_records}};
}

}  // namespace gazeclf
