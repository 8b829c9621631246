// End-to-end checks of the gazeclf binary through std::system.

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "gazeclf/encoding.hpp"
#include "gazeclf/evaluation.hpp"
#include "gazeclf/synth.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
    int code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::size_t count_lines(const std::string& s) {
    std::size_t n = 0;
    for (char c : s) n += c == '\n';
    return n;
}

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
        root_ = fs::temp_directory_path() / ("gazeclf_cli_" + std::string(info->name()) + "_" + std::to_string(::getpid()));
        fs::remove_all(root_);
        fs::create_directories(root_);
    }
    void TearDown() override { fs::remove_all(root_); }

    fs::path write_config(const std::string& name, const nlohmann::json& j) {
        const fs::path p = root_ / name;
        std::ofstream(p) << j.dump(2);
        return p;
    }

    fs::path make_dir(const std::string& name) {
        const fs::path p = root_ / name;
        fs::create_directories(p);
        return p;
    }

    Result run(const std::string& args) {
        const fs::path out = root_ / "stdout.txt";
        const fs::path err = root_ / "stderr.txt";
        const std::string cmd = std::string(GAZECLF_CLI_PATH) + " " + args + " >" + out.string() + " 2>" + err.string();
        const int status = std::system(cmd.c_str());
        Result r;
        r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
        r.out = slurp(out);
        r.err = slurp(err);
        return r;
    }

    Result run(const std::string& sub, const fs::path& config, const std::string& extra = "") {
        return run(sub + " --config " + config.string() + (extra.empty() ? "" : " " + extra));
    }

    // Tiny sweep: 8 trials per class, one encoding, two extractions, two families.
    nlohmann::json small_sweep(const fs::path& out) {
        return {{"synth", {{"trials_per_class", 8}}},
                {"output_dir", out.string()},
                {"k_folds", 3},
                {"seeds", {1}},
                {"sweep",
                 {{"grid_sizes", {3}},
                  {"t_groups", {2}},
                  {"extractions", {"none", "pca-2"}},
                  {"classifiers", {"knn", "logreg"}},
                  {"data_types", {"encoded", "traditional"}}}},
                {"grids", {{"knn", {{"k", {1, 3}}}}, {"logreg", {{"l2", {1.0}}}}}},
                {"eval", {{"inner_folds", 2}}}};
    }

    fs::path root_;
};

TEST_F(Cli, SynthWritesDeterministicFiles) {
    const auto a = make_dir("a");
    const auto b = make_dir("b");
    const auto ca = write_config("a.json", {{"synth", nlohmann::json::object()}, {"output_dir", a.string()}});
    const auto cb = write_config("b.json", {{"synth", nlohmann::json::object()}, {"output_dir", b.string()}});
    ASSERT_EQ(run("synth", ca).code, 0);
    ASSERT_EQ(run("synth", cb).code, 0);
    for (const char* f : {"fixations.csv", "mask.pgm", "synth_provenance.json"}) EXPECT_TRUE(fs::exists(a / f)) << f;
    EXPECT_EQ(slurp(a / "fixations.csv"), slurp(b / "fixations.csv"));
    EXPECT_EQ(slurp(a / "mask.pgm"), slurp(b / "mask.pgm"));

    const auto expected = gazeclf::generate_dataset(gazeclf::GeneratorConfig{});
    EXPECT_EQ(count_lines(slurp(a / "fixations.csv")), expected.dataset.total_fixations() + 1);
}

TEST_F(Cli, SynthSeedFlagChangesOutput) {
    const auto a = make_dir("a");
    const auto b = make_dir("b");
    const auto ca = write_config("a.json", {{"synth", nlohmann::json::object()}, {"output_dir", a.string()}});
    const auto cb = write_config("b.json", {{"synth", nlohmann::json::object()}, {"output_dir", b.string()}});
    ASSERT_EQ(run("synth", ca).code, 0);
    ASSERT_EQ(run("synth", cb, "--seed 7").code, 0);
    EXPECT_NE(slurp(a / "fixations.csv"), slurp(b / "fixations.csv"));
    const auto prov = nlohmann::json::parse(slurp(b / "synth_provenance.json"));
    EXPECT_EQ(prov.at("config").at("synth").at("seed").get<std::uint64_t>(), 7u);
}

TEST_F(Cli, MissingOutputDirIsConfigError) {
    const auto c = write_config("c.json", {{"synth", nlohmann::json::object()}, {"output_dir", (root_ / "nope").string()}});
    const auto r = run("synth", c);
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("nope"), std::string::npos);
}

TEST_F(Cli, BadArgumentsAreConfigErrors) {
    const auto d = make_dir("d");
    const auto c = write_config("c.json", {{"synth", nlohmann::json::object()}, {"output_dir", d.string()}});
    EXPECT_EQ(run("frobnicate --config " + c.string()).code, 2);
    EXPECT_EQ(run("synth --config " + c.string() + " --bogus").code, 2);
    EXPECT_EQ(run("synth --config " + (root_ / "absent.json").string()).code, 2);
    const auto typo = write_config("t.json", {{"synth", nlohmann::json::object()}, {"output_dir", d.string()}, {"kfolds", 3}});
    EXPECT_EQ(run("synth", typo).code, 2);
}

TEST_F(Cli, EncodeDefaultShape) {
    const auto d = make_dir("d");
    const auto c = write_config("c.json", {{"synth", nlohmann::json::object()}, {"output_dir", d.string()}});
    const auto r = run("encode", c);
    ASSERT_EQ(r.code, 0) << r.err;
    const auto text = slurp(d / "encoded_10x10_t5.csv");
    EXPECT_EQ(count_lines(text), 111u);
    const auto header = text.substr(0, text.find('\n'));
    EXPECT_EQ(std::count(header.begin(), header.end(), ','), 501);
    EXPECT_TRUE(fs::exists(d / "filter_report.csv"));
}

TEST_F(Cli, EncodeEmptyDatasetWritesHeaderOnly) {
    const auto d = make_dir("d");
    const fs::path csv = root_ / "empty.csv";
    {
        std::ofstream out(csv);
        gazeclf::write_trials(out, gazeclf::Dataset{});
    }
    const auto c = write_config("c.json", {{"input", {{"fixations", csv.string()}}},
                                           {"output_dir", d.string()},
                                           {"encode", {{"configs", {{2, 2, 1}}}}}});
    const auto r = run("encode", c);
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.err.find("empty"), std::string::npos);
    EXPECT_EQ(slurp(d / "encoded_2x2_t1.csv"), "v0,v1,v2,v3,label,trial_id\n");
}

TEST_F(Cli, CorruptInputIsDataErrorWithLine) {
    const auto d = make_dir("d");
    const auto s = make_dir("s");
    const auto cs = write_config("s.json", {{"synth", {{"trials_per_class", 2}}}, {"output_dir", s.string()}});
    ASSERT_EQ(run("synth", cs).code, 0);
    std::string text = slurp(s / "fixations.csv");
    // Break the third line (second data row) by dropping its last field.
    std::size_t pos = 0;
    for (int i = 0; i < 2; ++i) pos = text.find('\n', pos) + 1;
    const std::size_t end = text.find('\n', pos);
    const std::size_t last_comma = text.rfind(',', end);
    text.erase(last_comma, end - last_comma);
    const fs::path bad = root_ / "bad.csv";
    std::ofstream(bad, std::ios::binary) << text;

    const auto c = write_config("c.json", {{"input", {{"fixations", bad.string()}}}, {"output_dir", d.string()}});
    const auto r = run("encode", c);
    EXPECT_EQ(r.code, 3);
    EXPECT_NE(r.err.find(":3"), std::string::npos) << r.err;
}

TEST_F(Cli, FeaturesRowsAndDeterminism) {
    const auto d = make_dir("d");
    const auto c = write_config("c.json", {{"synth", nlohmann::json::object()}, {"output_dir", d.string()}});
    ASSERT_EQ(run("features", c).code, 0);
    const auto first = slurp(d / "traditional_features.csv");
    EXPECT_EQ(count_lines(first), 111u);
    ASSERT_EQ(run("features", c).code, 0);
    EXPECT_EQ(first, slurp(d / "traditional_features.csv"));
}

TEST_F(Cli, FeaturesWithoutMaskIsDataError) {
    const auto s = make_dir("s");
    const auto d = make_dir("d");
    ASSERT_EQ(run("synth", write_config("s.json", {{"synth", {{"trials_per_class", 3}}}, {"output_dir", s.string()}})).code, 0);
    const auto c = write_config("c.json", {{"input", {{"fixations", (s / "fixations.csv").string()}}}, {"output_dir", d.string()}});
    EXPECT_EQ(run("features", c).code, 3);
    // With the mask the same input works.
    const auto ok = write_config("ok.json", {{"input", {{"fixations", (s / "fixations.csv").string()}, {"mask", (s / "mask.pgm").string()}}},
                                             {"output_dir", d.string()}});
    EXPECT_EQ(run("features", ok).code, 0);
}

TEST_F(Cli, DryRunListsDefaultMatrix) {
    const auto d = make_dir("d");
    const auto c = write_config("c.json", {{"synth", nlohmann::json::object()}, {"output_dir", d.string()}});
    const auto r = run("sweep", c, "--dry-run --seed 3");
    ASSERT_EQ(r.code, 0) << r.err;
    // 16 encodings x 9 extractions x 4 families plus 9 x 4 traditional records.
    EXPECT_NE(r.out.find("17 units, 612 run records, 6120 fold rows"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("encoded_g15_t20_s3,encoded,15,20,3,36"), std::string::npos);
    EXPECT_NE(r.out.find("traditional_s3,traditional,-,-,3,36"), std::string::npos);
    EXPECT_FALSE(fs::exists(d / "raw_records.csv"));

    const auto all = run("sweep", c, "--dry-run");
    EXPECT_NE(all.out.find("85 units, 3060 run records"), std::string::npos) << all.out;
}

TEST_F(Cli, SmallSweepResumeAndReport) {
    const auto d = make_dir("d");
    const auto c = write_config("c.json", small_sweep(d));
    const auto first = run("sweep", c);
    ASSERT_EQ(first.code, 0) << first.err;
    for (const char* f : {"raw_records.csv", "aggregate.csv", "tables.txt", "best_per_classifier.json", "filter_report.csv",
                          "sweep_provenance.json"})
        EXPECT_TRUE(fs::exists(d / f)) << f;
    EXPECT_EQ(std::count(first.err.begin(), first.err.end(), '['), 2);
    EXPECT_EQ(first.err.find("(cached)"), std::string::npos);

    const auto best = nlohmann::json::parse(slurp(d / "best_per_classifier.json"));
    EXPECT_EQ(best.size(), 4u);  // two families, two data types
    std::ifstream raw_in(d / "raw_records.csv");
    const auto records = gazeclf::read_raw_records(raw_in, "raw_records.csv");
    EXPECT_EQ(records.size(), 8u);
    for (const auto& rec : records) EXPECT_EQ(rec.folds.size(), 3u);

    const auto raw = slurp(d / "raw_records.csv");
    const auto aggregate = slurp(d / "aggregate.csv");
    const auto second = run("sweep", c);
    ASSERT_EQ(second.code, 0);
    std::size_t cached = 0;
    for (auto pos = second.err.find("(cached)"); pos != std::string::npos; pos = second.err.find("(cached)", pos + 1)) ++cached;
    EXPECT_EQ(cached, 2u) << second.err;
    EXPECT_EQ(raw, slurp(d / "raw_records.csv"));

    fs::remove(d / "aggregate.csv");
    fs::remove(d / "tables.txt");
    const auto rep = run("report", c);
    ASSERT_EQ(rep.code, 0) << rep.err;
    EXPECT_EQ(aggregate, slurp(d / "aggregate.csv"));
    EXPECT_TRUE(fs::exists(d / "tables.txt"));
    EXPECT_NE(rep.out.find("(±"), std::string::npos);

    const auto prov = nlohmann::json::parse(slurp(d / "sweep_provenance.json"));
    EXPECT_TRUE(prov.contains("config_hash"));
    EXPECT_EQ(prov.at("seeds"), nlohmann::json::array({1}));
    EXPECT_TRUE(prov.at("decisions").contains("rng"));
}

TEST_F(Cli, SweepIndependentOfJobs) {
    const auto a = make_dir("a");
    const auto b = make_dir("b");
    ASSERT_EQ(run("sweep", write_config("a.json", small_sweep(a)), "--jobs 1").code, 0);
    ASSERT_EQ(run("sweep", write_config("b.json", small_sweep(b)), "--jobs 3").code, 0);
    EXPECT_EQ(slurp(a / "raw_records.csv"), slurp(b / "raw_records.csv"));
}

TEST_F(Cli, ReportWithoutRecordsIsDataError) {
    const auto d = make_dir("d");
    EXPECT_EQ(run("report", write_config("c.json", small_sweep(d))).code, 3);
}

TEST_F(Cli, DegenerateFeaturesAreNumericalError) {
    // Every trial has the same single fixation, so PCA sees zero variance.
    gazeclf::Dataset ds;
    std::vector<gazeclf::Trial> trials;
    for (int i = 0; i < 8; ++i) {
        gazeclf::Trial t;
        t.trial_id = "t" + std::to_string(i);
        t.subject_id = "s";
        t.image_id = "i";
        t.label = i < 4 ? gazeclf::Label::faculty : gazeclf::Label::trainee;
        t.display_rect = {0.0, 0.0, 100.0, 100.0};
        t.fixations.push_back({50.0, 50.0, 0.0, 100.0});
        trials.push_back(t);
    }
    const fs::path csv = root_ / "flat.csv";
    {
        std::ofstream out(csv);
        gazeclf::write_trials(out, gazeclf::Dataset(std::move(trials)));
    }
    const auto d = make_dir("d");
    const nlohmann::json j = {{"input", {{"fixations", csv.string()}}},
                              {"output_dir", d.string()},
                              {"k_folds", 2},
                              {"seeds", {1}},
                              {"sweep",
                               {{"grid_sizes", {2}},
                                {"t_groups", {1}},
                                {"extractions", {"pca-1"}},
                                {"classifiers", {"knn"}},
                                {"data_types", {"encoded"}}}},
                              {"grids", {{"knn", {{"k", {1}}}}}},
                              {"eval", {{"inner_folds", 2}}}};
    const auto r = run("sweep", write_config("c.json", j));
    EXPECT_EQ(r.code, 4) << r.err;
}

}  // namespace
