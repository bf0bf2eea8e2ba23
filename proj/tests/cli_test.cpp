#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"

namespace oed::cli {
namespace {

namespace fs = std::filesystem;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result runCli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

class TempDir {
 public:
  TempDir() {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    path_ = fs::temp_directory_path() / ("oed_cli_" + std::string(info->test_suite_name()) + "_" + info->name());
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string file(const std::string& name, const std::string& contents) const {
    const auto p = path_ / name;
    std::ofstream(p) << contents;
    return p.string();
  }
  std::string path(const std::string& name) const { return (path_ / name).string(); }

 private:
  fs::path path_;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

TEST(Rank, FairVersusBiasCsv) {
  const auto r = runCli({"rank", "--suite", "coin", "--models", "fair,bias", "--n", "20"});
  ASSERT_EQ(r.code, kSuccess) << r.err;
  const auto l = lines(r.out);
  ASSERT_EQ(l.size(), 17u);
  EXPECT_EQ(l[0], "rank,experiment,eig_nats");
  EXPECT_EQ(l[1], "1,HHHH,0.595817");
  EXPECT_EQ(l[2], "2,TTTT,0.595817");
  EXPECT_EQ(l[16].substr(l[16].size() - 8), "0.000000");
}

TEST(Rank, CsvAndJsonAgreeToSixDecimals) {
  const auto csv = runCli({"rank", "--models", "bias,markov", "--n", "20"});
  const auto js = runCli({"rank", "--models", "bias,markov", "--n", "20", "--format", "json"});
  ASSERT_EQ(csv.code, kSuccess);
  ASSERT_EQ(js.code, kSuccess) << js.err;
  const auto j = nlohmann::json::parse(js.out);
  const auto& reports = j.at("reports");
  const auto l = lines(csv.out);
  ASSERT_EQ(reports.size() + 1, l.size());
  for (std::size_t i = 0; i < reports.size(); ++i) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%d,%s,%.6f", reports[i].at("rank").get<int>(),
                  reports[i].at("experiment").get<std::string>().c_str(), reports[i].at("eig_nats").get<double>());
    EXPECT_EQ(l[i + 1], buf);
  }
  EXPECT_EQ(reports[0].at("experiment"), "HTHT");
}

TEST(Rank, OutputIsByteIdenticalAcrossRunsAndThreadCounts) {
  const auto a = runCli({"rank", "--n", "20", "--threads", "1"});
  const auto b = runCli({"rank", "--n", "20", "--threads", "4"});
  const auto c = runCli({"rank", "--n", "20"});
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(a.out, c.out);
  EXPECT_EQ(lines(a.out)[3], "3,HHHT,0.637425");
}

TEST(Rank, WritesFileAndPrintsTopTable) {
  TempDir dir;
  const auto out = dir.path("rank.csv");
  const auto r = runCli({"rank", "--n", "20", "--out", out});
  ASSERT_EQ(r.code, kSuccess);
  EXPECT_EQ(lines(slurp(out)).size(), 17u);
  EXPECT_NE(r.out.find("HHHH"), std::string::npos);
  EXPECT_EQ(lines(r.out).size(), 6u);
}

TEST(Rank, SoftmaxSamplingIsSeeded) {
  const auto a = runCli({"rank", "--n", "5", "--softmax-temperature", "0.1", "--seed", "9"});
  const auto b = runCli({"rank", "--n", "5", "--softmax-temperature", "0.1", "--seed", "9"});
  ASSERT_EQ(a.code, kSuccess);
  EXPECT_NE(a.err.find("sampled experiment: "), std::string::npos);
  EXPECT_EQ(a.err, b.err);
}

TEST(Rank, CategoryStructuresCanBeListed) {
  const auto r = runCli({"rank", "--suite", "category", "--experiments", "ms54"});
  ASSERT_EQ(r.code, kSuccess) << r.err;
  const auto l = lines(r.out);
  ASSERT_EQ(l.size(), 2u);
  EXPECT_EQ(l[1].substr(l[1].size() - 8), "0.342241");
}

TEST(Curve, ThreeModelCurves) {
  const auto r = runCli({"curve", "--experiments", "HTHT,HHHT", "--n-range", "1,30"});
  ASSERT_EQ(r.code, kSuccess) << r.err;
  const auto l = lines(r.out);
  ASSERT_EQ(l.size(), 61u);
  EXPECT_EQ(l[0], "experiment,n,eig_nats");
  EXPECT_EQ(l[1].substr(0, 7), "HTHT,1,");
  EXPECT_EQ(l[31].substr(0, 7), "HHHT,1,");
}

TEST(Enumerate, PrintsEveryStructure) {
  TempDir dir;
  const auto out = dir.path("structures.jsonl");
  const auto r = runCli({"enumerate", "--suite", "category", "--out", out});
  ASSERT_EQ(r.code, kSuccess) << r.err;
  EXPECT_EQ(r.out, "933 structures\n");
  const auto l = lines(slurp(out));
  ASSERT_EQ(l.size(), 933u);
  const auto first = nlohmann::json::parse(l.front());
  EXPECT_EQ(first.at("trainA").size(), 5u);
  EXPECT_EQ(first.at("trainB").size(), 4u);
}

TEST(Config, PrintConfigRoundTrips) {
  TempDir dir;
  const auto cfg = dir.file("run.json", R"({
  "suite": "coin",
  "models": ["fair", "markov"],
  "prior": [0.25, 0.75],
  "n": 12,
  "outcome_prior": "predictive"
})");
  const auto first = runCli({"print-config", "--config", cfg});
  ASSERT_EQ(first.code, kSuccess) << first.err;
  const auto again = runCli({"print-config", "--config", dir.file("again.json", first.out)});
  ASSERT_EQ(again.code, kSuccess) << again.err;
  EXPECT_EQ(first.out, again.out);
  const auto j = nlohmann::json::parse(first.out);
  EXPECT_EQ(j.at("n"), 12);
  EXPECT_EQ(j.at("outcome_prior"), "predictive");

  const auto flagged = runCli({"print-config", "--config", cfg, "--n", "3"});
  EXPECT_EQ(nlohmann::json::parse(flagged.out).at("n"), 3);
}

TEST(Config, SuiteDefaults) {
  EXPECT_EQ(nlohmann::json::parse(runCli({"print-config"}).out).at("outcome_prior"), "uniform");
  const auto cat = nlohmann::json::parse(runCli({"print-config", "--suite", "category"}).out);
  EXPECT_EQ(cat.at("outcome_prior"), "predictive");
  EXPECT_EQ(cat.at("models"), nlohmann::json({"exemplar", "prototype"}));
}

TEST(Config, ErrorsCarryLineNumbers) {
  TempDir dir;
  const auto bad = dir.file("bad.json", "{\n  \"models\": [\"nope\"]\n}\n");
  const auto r = runCli({"rank", "--config", bad});
  EXPECT_EQ(r.code, kConfigError);
  EXPECT_NE(r.err.find("bad.json:2:"), std::string::npos) << r.err;

  const auto unknown = dir.file("unknown.json", "{\n  \"n\": 3,\n  \"colour\": 1\n}\n");
  const auto u = runCli({"rank", "--config", unknown});
  EXPECT_EQ(u.code, kConfigError);
  EXPECT_NE(u.err.find("unknown.json:3:"), std::string::npos) << u.err;

  const auto broken = dir.file("broken.json", "{\n  \"n\": 3,\n  \"models\" [\n}\n");
  EXPECT_EQ(runCli({"rank", "--config", broken}).code, kConfigError);
}

TEST(Config, RejectedValues) {
  EXPECT_EQ(runCli({"rank", "--models", "fair"}).code, kConfigError);
  EXPECT_EQ(runCli({"rank", "--n", "0"}).code, kConfigError);
  EXPECT_EQ(runCli({"rank", "--outcome-prior", "flat"}).code, kConfigError);
  EXPECT_EQ(runCli({"rank", "--experiments", "HHXH"}).code, kConfigError);
  EXPECT_EQ(runCli({"rank", "--format", "xml"}).code, kConfigError);
  EXPECT_EQ(runCli({"enumerate"}).code, kConfigError);
  EXPECT_EQ(runCli({"aig"}).code, kConfigError);
  EXPECT_EQ(runCli({"frobnicate"}).code, kConfigError);
}

TEST(Aig, SingleFlipExamples) {
  TempDir dir;
  const auto data = dir.file("data.csv", "experiment,n,response\nHHHH,1,1\nHHHH,1,0\nHHTT,1,1\n");
  const auto r = runCli({"aig", "--models", "fair,bias", "--data", data});
  ASSERT_EQ(r.code, kSuccess) << r.err;
  const auto l = lines(r.out);
  ASSERT_EQ(l.size(), 4u);
  EXPECT_EQ(l[0], "row,experiment,n,response,aig_nats,eig_nats,status,post_fair,post_bias");
  EXPECT_EQ(l[1], "1,HHHH,1,1,0.031584,0.081198,ok,0.375000,0.625000");
  EXPECT_EQ(l[2], "2,HHHH,1,0,0.130812,0.081198,ok,0.750000,0.250000");
  EXPECT_EQ(l[3], "3,HHTT,1,1,0.000000,0.000000,ok,0.500000,0.500000");
}

TEST(Aig, PrefixModeAccumulatesPerExperiment) {
  TempDir dir;
  const auto data = dir.file("data.csv", "experiment,n,response\nHHHH,1,1\nHTHT,2,1\nHHHH,1,1\nHHHH,2,2\n");
  const auto r = runCli({"aig", "--models", "fair,bias", "--data", data, "--prefix"});
  ASSERT_EQ(r.code, kSuccess) << r.err;
  const auto l = lines(r.out);
  ASSERT_EQ(l.size(), 5u);
  EXPECT_EQ(l[1].substr(0, 11), "1,HHHH,1,1,");
  EXPECT_EQ(l[3].substr(0, 11), "3,HHHH,2,2,");
  EXPECT_EQ(l[4].substr(0, 11), "4,HHHH,4,4,");
}

TEST(Aig, MalformedRowsAreDataErrors) {
  TempDir dir;
  const auto data = dir.file("data.csv", "experiment,n,response\nHHHH,1,1\nHHHH,2,3\n");
  const auto r = runCli({"aig", "--data", data});
  EXPECT_EQ(r.code, kDataError);
  EXPECT_NE(r.err.find("row 2"), std::string::npos) << r.err;

  const auto header = dir.file("header.csv", "exp,n,resp\nHHHH,1,1\n");
  EXPECT_EQ(runCli({"aig", "--data", header}).code, kDataError);
  const auto fields = dir.file("fields.csv", "experiment,n,response\nHHHH,1\n");
  EXPECT_EQ(runCli({"aig", "--data", fields}).code, kDataError);
  const auto seq = dir.file("seq.csv", "experiment,n,response\nHHH,1,1\n");
  EXPECT_EQ(runCli({"aig", "--data", seq}).code, kDataError);
}

TEST(Aig, MarginalizedGroupsPastTheSupportCap) {
  TempDir dir;
  const auto data = dir.file("data.csv", "experiment,n,response\nms54,5,0;0;1;3;1;2;1;4;2;3;4;5;2;4;3;4\n");
  const auto r = runCli({"aig", "--suite", "category", "--parameter-mode", "marginalized", "--data", data});
  ASSERT_EQ(r.code, kSuccess) << r.err;
  const auto l = lines(r.out);
  ASSERT_EQ(l.size(), 2u);
  EXPECT_NE(l[1].find(",,eig_unavailable,"), std::string::npos) << l[1];
}

TEST(Rank, UnsupportedSizeIsAnAnalysisError) {
  const auto r = runCli({"rank", "--suite", "category", "--parameter-mode", "marginalized", "--n", "5",
                         "--experiments", "ms54"});
  EXPECT_EQ(r.code, kAnalysisError);
  EXPECT_NE(r.err.find("analysis error"), std::string::npos);
}

TEST(Aig, CategoryRowsUseCountVectors) {
  TempDir dir;
  const auto data = dir.file("data.csv",
                             "experiment,n,response\nms54,1,0;0;0;1;0;1;0;1;0;1;1;1;0;1;1;1\n"
                             "ms54,1,0;0;0;1\n");
  const auto r = runCli({"aig", "--suite", "category", "--data", data});
  EXPECT_EQ(r.code, kDataError);
  EXPECT_NE(r.err.find("row 2"), std::string::npos);

  const auto good = dir.file("good.csv", "experiment,n,response\nms54,1,0;0;0;1;0;1;0;1;0;1;1;1;0;1;1;1\n");
  const auto ok = runCli({"aig", "--suite", "category", "--data", good});
  ASSERT_EQ(ok.code, kSuccess) << ok.err;
  const auto l = lines(ok.out);
  ASSERT_EQ(l.size(), 2u);
  EXPECT_NE(l[1].find(",0.342241,ok,"), std::string::npos) << l[1];
}

}  // namespace
}  // namespace oed::cli
