#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "support.hpp"

#ifndef ASAGS_CLI_PATH
#error "ASAGS_CLI_PATH must name the built command-line tool"
#endif

namespace fs = std::filesystem;
using testing_support::data_path;

namespace {

struct Run {
    int code = -1;
    std::string out;
};

// Runs the tool through the shell; stderr is discarded unless `merge`.
Run run(const std::string& args, bool merge = false, const std::string& env = "") {
    const std::string cmd = env + " '" + std::string(ASAGS_CLI_PATH) + "' " + args + (merge ? " 2>&1" : " 2>/dev/null");
    Run r;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return r;
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
    const int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string q(const std::string& s) { return "'" + s + "'"; }

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("asags-cli-" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string write(const std::string& name, const std::string& content) {
        const auto p = dir_ / name;
        std::ofstream(p, std::ios::binary) << content;
        return p.string();
    }

    fs::path dir_;
    const std::string stack_ = q(data_path("fixture/stack.json"));
    const std::string osi_ = q(data_path("fixture/osi.json"));
};

}  // namespace

TEST_F(Cli, GradeReferenceTextGetsScaleMaximum) {
    const auto r = run("grade " + osi_ +
                       " --text 'The application layer, the seventh layer of the Open Systems Interconnection model, "
                       "provides network services directly to user applications.'");
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("grade: 5.00"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("missing:\n"), std::string::npos) << r.out;
}

TEST_F(Cli, GradePartialAnswerListsMissingWords) {
    const auto r = run("grade " + osi_ + " --text 'application layer 7' --scale 0:10");
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("(scale 0 to 10)"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("matched: application layer 7"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("Interconnection"), std::string::npos) << r.out;
}

TEST_F(Cli, GradeEmptyAnswerWarnsAndGivesMinimum) {
    const auto r = run("grade " + osi_ + " --text '' --scale 1:5", true);
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("warning"), std::string::npos);
    EXPECT_NE(r.out.find("grade: 1.00"), std::string::npos) << r.out;
}

TEST_F(Cli, GradeReadsAnswerFileAndJson) {
    const auto answer = write("answer.txt", "A stack is last in first out; push adds and pop removes.");
    const auto r = run("grade " + stack_ + " --answer-file " + q(answer) + " --format json");
    EXPECT_EQ(r.code, 0);
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["dataset_id"], "stack");
    EXPECT_GT(j["grade"].get<double>(), 0.0);
}

TEST_F(Cli, UsageErrors) {
    EXPECT_EQ(run("grade " + osi_ + " --bogus").code, 1);
    EXPECT_EQ(run("").code, 1);
    EXPECT_EQ(run("experiment plot " + stack_).code, 1);
    EXPECT_EQ(run("evaluate " + stack_ + " --method magic").code, 1);
    EXPECT_EQ(run("evaluate " + stack_ + " --stages exact,bogus").code, 1);
    EXPECT_EQ(run("evaluate " + stack_ + " --gamma 3").code, 1);
    EXPECT_EQ(run("evaluate " + stack_ + " --scale 5").code, 1);
    EXPECT_EQ(run("--help").code, 0);
}

TEST_F(Cli, ConfigErrors) {
    const auto bad_key = write("bad.conf", "colour = red\n");
    EXPECT_EQ(run("evaluate " + stack_ + " --config " + q(bad_key)).code, 1);
    const auto bad_line = write("bad2.conf", "max_n 3\n");
    EXPECT_EQ(run("evaluate " + stack_ + " --config " + q(bad_line)).code, 1);
    EXPECT_EQ(run("evaluate " + stack_ + " --config " + q((dir_ / "missing.conf").string())).code, 1);
    EXPECT_EQ(run("evaluate " + stack_, false, "ASAGS_RESOURCES=" + q(dir_.string())).code, 1);
}

TEST_F(Cli, ResourcesFromEnvironment) {
    for (const char* f : {"stopwords.txt", "synonyms.tsv", "derivations.tsv", "gazetteer.csv"})
        fs::copy_file(data_path(f), dir_ / f);
    const auto a = run("evaluate " + stack_);
    const auto b = run("evaluate " + stack_, false, "ASAGS_RESOURCES=" + q(dir_.string()));
    EXPECT_EQ(b.code, 0);
    EXPECT_EQ(a.out, b.out);
}

TEST_F(Cli, FlagsOverrideConfig) {
    const auto conf = write("c.conf", "max_n = 1\nstages = exact\n");
    const auto from_conf = run("evaluate " + stack_ + " --config " + q(conf));
    const auto flag_wins = run("evaluate " + stack_ + " --config " + q(conf) + " --max-n 3 --stages exact");
    const auto plain = run("evaluate " + stack_ + " --max-n 3 --stages exact");
    EXPECT_NE(from_conf.out, flag_wins.out);
    EXPECT_EQ(flag_wins.out, plain.out);
    const auto bundled = run("evaluate " + stack_ + " --config " + q(data_path("fixture/asags.conf")));
    EXPECT_EQ(bundled.out, run("evaluate " + stack_).out);
}

TEST_F(Cli, EvaluateWritesOneRowPerDataset) {
    const auto r = run("evaluate " + stack_ + " --method asags");
    EXPECT_EQ(r.code, 0);
    std::istringstream lines(r.out);
    std::string header, row, extra;
    std::getline(lines, header);
    std::getline(lines, row);
    EXPECT_EQ(header, "dataset_id,method,config_digest,r,n,flagged,note");
    EXPECT_EQ(row.rfind("stack,asags,", 0), 0u) << row;
    EXPECT_FALSE(std::getline(lines, extra));
}

TEST_F(Cli, EvaluateVsmOnThreeAnswers) {
    const auto small = write("small.json", R"({"dataset_id": "small",
      "references": [{"id": "r", "text": "stack push pop"}],
      "answers": [{"id": "a", "text": "stack", "human_score": 1},
                  {"id": "b", "text": "push pop", "human_score": 3},
                  {"id": "c", "text": "queue", "human_score": 0}]})");
    const auto r = run("evaluate " + q(small) + " --method vsm");
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("small,vsm,"), std::string::npos);
    EXPECT_NE(r.out.find(",-----,3,"), std::string::npos) << r.out;
}

TEST_F(Cli, EvaluateErrorsSectionAndExitCodes) {
    const auto broken = write("broken.json", "{\"references\": []}");
    const auto partial = run("evaluate " + stack_ + " " + q(broken), true);
    EXPECT_EQ(partial.code, 0);
    EXPECT_NE(partial.out.find("errors:"), std::string::npos);
    EXPECT_NE(partial.out.find("stack,asags,"), std::string::npos);
    EXPECT_EQ(run("evaluate " + q(broken)).code, 2);
    EXPECT_EQ(run("evaluate " + q((dir_ / "nope.json").string())).code, 2);
    EXPECT_EQ(run("grade " + q(broken) + " --text x").code, 2);
}

TEST_F(Cli, EvaluateOutputFilesAndJson) {
    const auto out = dir_ / "out";
    EXPECT_EQ(run("evaluate " + stack_ + " " + osi_ + " --out " + q(out.string()) + " --format json").code, 0);
    const auto doc = nlohmann::json::parse(slurp(out / "report.json"));
    ASSERT_EQ(doc["rows"].size(), 2u);
    EXPECT_EQ(doc["rows"][1]["dataset_id"], "osi");
    EXPECT_EQ(doc["rows"][0]["machine_scores"].size(), 12u);
}

TEST_F(Cli, ExperimentsWriteNamedFiles) {
    const auto out = dir_ / "exp";
    for (const char* e : {"sweep", "metrics", "ablation", "compare"})
        ASSERT_EQ(run(std::string("experiment ") + e + " " + stack_ + " " + osi_ + " --out " + q(out.string())).code, 0)
            << e;
    const auto fig2 = slurp(out / "fig2.csv");
    EXPECT_EQ(fig2.rfind("x,y\n1,", 0), 0u);
    EXPECT_EQ(std::count(fig2.begin(), fig2.end(), '\n'), 5);
    const auto fig3 = slurp(out / "fig3.csv");
    EXPECT_NE(fig3.find("\npenalized_fmean,"), std::string::npos);
    const auto t1 = slurp(out / "table1.csv");
    EXPECT_NE(t1.find("# published targets: 0.4600 0.4800 0.4900 0.5900"), std::string::npos);
    const auto t2 = slurp(out / "table2.csv");
    EXPECT_NE(t2.find("\nstack,"), std::string::npos);
    EXPECT_NE(t2.find("\nosi,"), std::string::npos);
    EXPECT_NE(t2.find("\naverage,"), std::string::npos);
}

TEST_F(Cli, CompareIsByteIdenticalAcrossRuns) {
    const auto a = dir_ / "a", b = dir_ / "b";
    ASSERT_EQ(run("experiment compare " + stack_ + " " + osi_ + " --seed 7 --out " + q(a.string())).code, 0);
    ASSERT_EQ(run("experiment compare " + stack_ + " " + osi_ + " --seed 7 --out " + q(b.string())).code, 0);
    EXPECT_EQ(slurp(a / "table2.csv"), slurp(b / "table2.csv"));
}
