#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "nustable/cli.hpp"

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = nustable::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream is(text);
  for (std::string line; std::getline(is, line);) out.push_back(line);
  return out;
}

// Data lines: everything after the header row, excluding comments.
std::vector<std::vector<std::string>> rows(const std::string& text, std::string* header = nullptr) {
  std::vector<std::vector<std::string>> out;
  bool seen_header = false;
  for (const auto& line : lines(text)) {
    if (line.empty() || line[0] == '#') continue;
    if (!seen_header) {
      seen_header = true;
      if (header) *header = line;
      continue;
    }
    std::vector<std::string> cells;
    std::istringstream is(line);
    for (std::string cell; std::getline(is, cell, ',');) cells.push_back(cell);
    out.push_back(cells);
  }
  return out;
}

bool has_line(const std::string& text, const std::string& line) {
  for (const auto& l : lines(text))
    if (l == line) return true;
  return false;
}

TEST(Cli, CoeffsClosedForm) {
  const auto r = run({"coeffs", "--n", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(has_line(r.out, "# family=chebyshev"));
  EXPECT_TRUE(has_line(r.out, "# n=2"));
  std::string header;
  const auto data = rows(r.out, &header);
  EXPECT_EQ(header, "k,p_k,sum");
  // 1 / (2 - z^2) z^2: P{nu = 2j} = 2^-j.
  ASSERT_GE(data.size(), 3u);
  EXPECT_EQ(data[0][0], "2");
  EXPECT_DOUBLE_EQ(std::stod(data[0][1]), 0.5);
  EXPECT_EQ(data[1][0], "4");
  EXPECT_DOUBLE_EQ(std::stod(data[1][1]), 0.25);
  EXPECT_DOUBLE_EQ(std::stod(data[1][2]), 0.75);
  EXPECT_NEAR(std::stod(data.back()[2]), 1.0, 1e-10);
}

TEST(Cli, CoeffsFractionMatchesIndex) {
  const auto a = run({"coeffs", "--n", "3"});
  const auto b = run({"coeffs", "--p", "1/9"});
  ASSERT_EQ(a.code, 0);
  ASSERT_EQ(b.code, 0);
  EXPECT_EQ(rows(a.out), rows(b.out));
}

TEST(Cli, CoeffsJson) {
  const auto r = run({"coeffs", "--family", "geometric", "--p", "0.5", "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["config"]["family"], "geometric");
  EXPECT_EQ(j["columns"], (std::vector<std::string>{"k", "p_k", "sum"}));
  EXPECT_DOUBLE_EQ(j["rows"][0][1].get<double>(), 0.5);
  EXPECT_DOUBLE_EQ(j["rows"][2][1].get<double>(), 0.125);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"nonsense"}).code, 2);
  EXPECT_EQ(run({"coeffs", "--n", "3", "--K", "5"}).code, 2);
  EXPECT_EQ(run({"coeffs", "--family", "bogus", "--n", "3"}).code, 2);
  EXPECT_EQ(run({"coeffs", "--n", "3", "--p", "0.1"}).code, 2);
  EXPECT_EQ(run({"coeffs", "--p", "0.3"}).code, 2);  // not 1/n^2
  EXPECT_EQ(run({"coeffs", "--p", "1/0"}).code, 2);
  EXPECT_EQ(run({"coeffs"}).code, 2);
  EXPECT_EQ(run({"coeffs", "--n", "97"}).code, 2);
  EXPECT_EQ(run({"coeffs", "--n", "2", "--format", "xml"}).code, 2);
  EXPECT_EQ(run({"figure1", "--n-min", "5", "--n-max", "5"}).code, 2);
  EXPECT_EQ(run({"xi", "--x", "-1"}).code, 2);
  EXPECT_EQ(run({"xi", "--m", "9"}).code, 2);
  EXPECT_EQ(run({"sample", "--dist", "nope"}).code, 2);
  EXPECT_EQ(run({"verify", "bogus"}).code, 2);
  EXPECT_EQ(run({"verify"}).code, 2);
  const auto r = run({"verify", "bogus"});
  EXPECT_NE(r.err.find("unknown experiment"), std::string::npos);
}

TEST(Cli, Help) {
  const auto r = run({"--help"});
  EXPECT_EQ(r.code, 0);
  for (const char* sub : {"coeffs", "figure1", "xi", "sample", "verify"}) EXPECT_NE(r.out.find(sub), std::string::npos);
}

TEST(Cli, PartialSumTable) {
  const auto r = run({"figure1"});
  ASSERT_EQ(r.code, 0) << r.out << r.err;
  std::string header;
  const auto data = rows(r.out, &header);
  EXPECT_EQ(header, "n,S,A");
  ASSERT_EQ(data.size(), 49u);
  EXPECT_EQ(data[0][0], "2");
  EXPECT_DOUBLE_EQ(std::stod(data[0][1]), 0.75);
  EXPECT_NEAR(std::stod(data[0][2]), 0.6292225702, 1e-8);
  EXPECT_TRUE(has_line(r.out, "# verdict=pass"));
  // Too short a range does not settle.
  EXPECT_EQ(run({"figure1", "--n-max", "6"}).code, 1);
}

TEST(Cli, XiInversionAndMonteCarlo) {
  const auto r = run({"xi", "--x", "0.5,1,2", "--N", "50000", "--seed", "4"});
  ASSERT_EQ(r.code, 0) << r.out << r.err;
  const auto data = rows(r.out);
  ASSERT_EQ(data.size(), 6u);
  EXPECT_EQ(data[1][2], "inversion");
  EXPECT_NEAR(std::stod(data[1][1]), 0.6292225702, 1e-8);
  EXPECT_EQ(data[4][2], "monte-carlo");
  EXPECT_NEAR(std::stod(data[4][1]), 0.6292225702, 0.01);
}

TEST(Cli, SampleHeaderOnlyWhenEmpty) {
  const auto r = run({"sample", "--dist", "sech", "--N", "0"});
  ASSERT_EQ(r.code, 0);
  std::string header;
  EXPECT_TRUE(rows(r.out, &header).empty());
  EXPECT_EQ(header, "value");
}

TEST(Cli, SampleSelfCheckAndReproducibility) {
  const auto a = run({"sample", "--dist", "nu-normal", "--n", "3", "--N", "20000", "--seed", "7"});
  ASSERT_EQ(a.code, 0) << a.out.substr(a.out.size() - 200);
  EXPECT_TRUE(has_line(a.out, "# ks_pass=true"));
  EXPECT_EQ(rows(a.out).size(), 20000u);
  const auto b = run({"sample", "--dist", "nu-normal", "--n", "3", "--N", "20000", "--seed", "7", "--workers", "3"});
  EXPECT_EQ(a.out.substr(a.out.find("value")), b.out.substr(b.out.find("value")));
  const auto c = run({"sample", "--dist", "nu-normal", "--n", "3", "--N", "20000", "--seed", "8"});
  EXPECT_NE(rows(a.out), rows(c.out));
}

TEST(Cli, SampleNuSupport) {
  const auto r = run({"sample", "--dist", "nu", "--n", "2", "--N", "2000"});
  ASSERT_EQ(r.code, 0);
  for (const auto& row : rows(r.out)) {
    const int k = std::stoi(row[0]);
    ASSERT_EQ(k % 2, 0);
    ASSERT_GE(k, 2);
  }
}

TEST(Cli, OutFile) {
  const auto path = std::filesystem::temp_directory_path() / "nustable_cli_test.csv";
  const auto r = run({"coeffs", "--n", "2", "--out", path.string()});
  ASSERT_EQ(r.code, 0);
  EXPECT_TRUE(r.out.empty());
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  EXPECT_TRUE(has_line(ss.str(), "k,p_k,sum"));
  std::filesystem::remove(path);
}

TEST(Cli, VerifyReports) {
  const auto r = run({"verify", "functional-equation"});
  ASSERT_EQ(r.code, 0) << r.out;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["experiment"], "functional-equation");
  EXPECT_EQ(j["passed"], true);
  EXPECT_EQ(j["config"]["family"], "chebyshev");

  const auto t = run({"verify", "commutativity", "--family", "geometric", "--format", "text"});
  EXPECT_EQ(t.code, 0);
  EXPECT_NE(t.out.find("verdict     PASS"), std::string::npos);

  const auto s = run({"verify", "stability", "--n", "3", "--N", "20000"});
  EXPECT_EQ(s.code, 0) << s.out;
  EXPECT_EQ(run({"verify", "stability", "--N", "100"}).code, 2);
}

} // namespace
