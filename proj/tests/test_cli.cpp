#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <json.hpp>
#include <sys/wait.h>
#include <unistd.h>

namespace fs = std::filesystem;

namespace {

struct RunResult
{
  int code = -1;
  std::string out;
};

RunResult run(const std::string& args, const std::string& env = {}, const char* binary = CFDE_CLI)
{
  const std::string cmd = env + (env.empty() ? "" : " ") + "\"" + binary + "\" " + args + " 2>&1";
  RunResult r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe)
    return r;
  std::array<char, 4096> buf{};
  std::size_t got = 0;
  while ((got = std::fread(buf.data(), 1, buf.size(), pipe)) > 0)
    r.out.append(buf.data(), got);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string demo(const std::string& name)
{
  return std::string("\"") + CFDE_DEMO_DIR + "/" + name + "\"";
}

std::string slurp(const fs::path& p)
{
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Csv
{
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> fields;

  std::size_t col(const std::string& name) const
  {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i] == name)
        return i;
    ADD_FAILURE() << "no column " << name;
    return 0;
  }
  double at(std::size_t row, const std::string& name) const { return std::stod(fields[row][col(name)]); }
};

std::vector<std::string> split(const std::string& line)
{
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ','))
    out.push_back(cell);
  return out;
}

Csv parse_csv(const std::string& text)
{
  Csv csv;
  std::stringstream ss(text);
  std::string line;
  bool first = true;
  while (std::getline(ss, line)) {
    if (line.empty())
      continue;
    if (first) {
      csv.header = split(line);
      first = false;
    } else {
      csv.fields.push_back(split(line));
    }
  }
  return csv;
}

class CliTest : public ::testing::Test
{
protected:
  void SetUp() override
  {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / ("cfde_cli_" + std::to_string(::getpid()) + "_" + info->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path path(const std::string& name) const { return dir_ / name; }
  std::string quoted(const std::string& name) const { return "\"" + path(name).string() + "\""; }

  fs::path write_problem(const std::string& name, const nlohmann::json& doc) const
  {
    std::ofstream(path(name)) << doc.dump();
    return path(name);
  }

  static nlohmann::json oscillator()
  {
    return { { "alpha", 0.5 }, { "order", 2 },       { "p", { "1", "0" } }, { "q", "0" },
             { "domain", { 0.5, 10 } }, { "t0", 1 }, { "init", { 1, 0 } },  { "span", { 1, 9 } } };
  }

  fs::path dir_;
};

// --- deriv / integ -------------------------------------------------------

TEST_F(CliTest, DerivPowerRow)
{
  for (const char* method : { "limit", "reduction" }) {
    const auto r = run(std::string("deriv --expr \"t^2\" --alpha 0.5 --at 4 --method ") + method);
    ASSERT_EQ(r.code, 0) << r.out;
    const auto csv = parse_csv(r.out);
    ASSERT_EQ(csv.fields.size(), 1u);
    EXPECT_EQ(csv.header, (std::vector<std::string>{ "t", "T_alpha_f" }));
    EXPECT_EQ(csv.fields[0][0], "4");
    EXPECT_NEAR(csv.at(0, "T_alpha_f"), 16.0, 16e-6);
  }
}

TEST_F(CliTest, DerivConstantIsExactlyZero)
{
  const auto r = run("deriv --expr 5 --alpha 0.7 --at 2");
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("\n2,0\n"), std::string::npos) << r.out;
}

TEST_F(CliTest, DerivGrid)
{
  const auto r = run("deriv --expr \"exp(t)\" --alpha 1 --grid 1:3:5");
  ASSERT_EQ(r.code, 0) << r.out;
  const auto csv = parse_csv(r.out);
  ASSERT_EQ(csv.fields.size(), 5u);
  for (std::size_t i = 0; i < 5; ++i) {
    const double t = csv.at(i, "t");
    EXPECT_NEAR(csv.at(i, "T_alpha_f"), std::exp(t), 1e-6 * std::exp(t));
  }
}

TEST_F(CliTest, DerivInputErrors)
{
  EXPECT_EQ(run("deriv --expr \"ln(t)\" --alpha 0.5 --at 0").code, 2);
  EXPECT_EQ(run("deriv --expr \"2*\" --alpha 0.5 --at 1").code, 2);
  EXPECT_EQ(run("deriv --expr \"t\" --alpha 0 --at 1").code, 2);
  EXPECT_EQ(run("deriv --expr \"t\" --alpha 0.5").code, 2);
  EXPECT_EQ(run("deriv --expr \"t\" --alpha 0.5 --at 1 --method nested").code, 2);
  const auto r = run("deriv --expr \"ln(t)\" --alpha 0.5 --at 0");
  EXPECT_FALSE(r.out.empty());
}

TEST_F(CliTest, Integ)
{
  const auto r = run("integ --expr 1 --alpha 0.5 --from 0 --to 4");
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_NEAR(std::stod(r.out), 4.0, 1e-9);
  const auto z = run("integ --expr \"sin(t)\" --alpha 0.3 --from 2.5 --to 2.5");
  ASSERT_EQ(z.code, 0);
  EXPECT_EQ(z.out, "0\n");
  EXPECT_EQ(run("integ --expr 1 --alpha 1.5 --from 0 --to 4").code, 2);
  EXPECT_EQ(run("integ --expr 1 --alpha 0.5 --from 3 --to 1").code, 2);
}

// --- solve ---------------------------------------------------------------

TEST_F(CliTest, SolveDecayFinalRow)
{
  const auto r = run("solve " + demo("decay.json") + " --out " + quoted("d.csv"));
  ASSERT_EQ(r.code, 0) << r.out;
  const auto csv = parse_csv(slurp(path("d.csv")));
  EXPECT_EQ(csv.header, (std::vector<std::string>{ "t", "y" }));
  ASSERT_EQ(csv.fields.size(), 200u);
  EXPECT_EQ(csv.at(0, "t"), 1.0);
  EXPECT_EQ(csv.at(199, "t"), 4.0);
  EXPECT_NEAR(csv.at(199, "y"), 0.1353352832, 1e-9);
}

TEST_F(CliTest, SolveOscillatorAtFour)
{
  const auto r = run("solve " + demo("oscillator.json") + " --nodes 9 --out " + quoted("o.csv"));
  ASSERT_EQ(r.code, 0) << r.out;
  const auto csv = parse_csv(slurp(path("o.csv")));
  EXPECT_EQ(csv.header, (std::vector<std::string>{ "t", "y", "Ty" }));
  ASSERT_EQ(csv.fields.size(), 9u);
  EXPECT_EQ(csv.at(3, "t"), 4.0);
  EXPECT_NEAR(csv.at(3, "y"), -0.4161468365, 1e-9);
  EXPECT_NEAR(csv.at(3, "Ty"), -std::sin(2.0), 1e-8);
}

TEST_F(CliTest, SolveRawNodes)
{
  const auto r = run("solve " + demo("oscillator.json") + " --raw --out " + quoted("o.csv"));
  ASSERT_EQ(r.code, 0) << r.out;
  const auto csv = parse_csv(slurp(path("o.csv")));
  EXPECT_GT(csv.fields.size(), 2u);
  EXPECT_NE(csv.fields.size(), 200u);
  EXPECT_EQ(csv.at(0, "t"), 1.0);
  EXPECT_EQ(csv.at(csv.fields.size() - 1, "t"), 9.0);
}

TEST_F(CliTest, SolveOrderHeader)
{
  auto doc = oscillator();
  doc["order"] = 4;
  doc["p"] = { "1", "0", "0", "0" };
  doc["init"] = { 1, 0, 0, 0 };
  write_problem("p4.json", doc);
  ASSERT_EQ(run("solve " + quoted("p4.json") + " --out " + quoted("p4.csv")).code, 0);
  EXPECT_EQ(parse_csv(slurp(path("p4.csv"))).header, (std::vector<std::string>{ "t", "y", "Ty", "T^2y", "T^3y" }));
}

TEST_F(CliTest, InitLengthMismatchNamesField)
{
  auto doc = oscillator();
  doc["init"] = { 1 };
  write_problem("bad.json", doc);
  const auto r = run("solve " + quoted("bad.json") + " --out " + quoted("bad.csv"));
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.out.find("init"), std::string::npos) << r.out;
  EXPECT_FALSE(fs::exists(path("bad.csv")));
}

TEST_F(CliTest, ValidationFieldPaths)
{
  struct Case
  {
    const char* key;
    nlohmann::json value;
    const char* field;
  };
  const std::vector<Case> cases = {
    { "alpha", 1.5, "alpha" },         { "order", 0, "order" },
    { "p", { "1", "2*" }, "p[1]" },    { "q", "ln(t - 3)", "q" },
    { "domain", { 0, 10 }, "domain" }, { "t0", 10, "t0" },
    { "span", { 1, 12 }, "span" },     { "init", { 1, "x" }, "init[1]" },
    { "tolerances", { { "rel", -1 } }, "tolerances.rel" },
  };
  for (const auto& c : cases) {
    auto doc = oscillator();
    doc[c.key] = c.value;
    write_problem("v.json", doc);
    const auto r = run("solve " + quoted("v.json") + " --out " + quoted("v.csv"));
    EXPECT_EQ(r.code, 2) << c.key;
    EXPECT_NE(r.out.find(std::string(c.field) + ":"), std::string::npos) << c.key << ": " << r.out;
  }
  auto doc = oscillator();
  doc.erase("span");
  write_problem("v.json", doc);
  EXPECT_NE(run("solve " + quoted("v.json") + " --out " + quoted("v.csv")).out.find("span"), std::string::npos);
}

TEST_F(CliTest, UnreadableInputs)
{
  EXPECT_EQ(run("solve " + quoted("missing.json") + " --out " + quoted("x.csv")).code, 2);
  std::ofstream(path("broken.json")) << "{ \"alpha\": ";
  EXPECT_EQ(run("solve " + quoted("broken.json") + " --out " + quoted("x.csv")).code, 2);
  EXPECT_EQ(run("solve " + demo("decay.json") + " --out " + quoted("no/such/dir/x.csv")).code, 2);
}

TEST_F(CliTest, NumericalFailureLeavesNoFiles)
{
  auto doc = oscillator();
  doc["tolerances"] = { { "rel", 1e-300 }, { "abs", 1e-300 } };
  write_problem("tight.json", doc);
  const auto r = run("solve " + quoted("tight.json") + " --out " + quoted("tight.csv"));
  EXPECT_EQ(r.code, 3) << r.out;
  EXPECT_FALSE(fs::exists(path("tight.csv")));
  EXPECT_FALSE(fs::exists(path("tight.csv.partial")));
}

TEST_F(CliTest, PartsColumnsAndSidecar)
{
  const auto r = run("solve " + demo("forced.json") + " --parts --out " + quoted("f.csv"));
  ASSERT_EQ(r.code, 0) << r.out;
  const auto csv = parse_csv(slurp(path("f.csv")));
  EXPECT_EQ(csv.header, (std::vector<std::string>{ "t", "y", "Ty", "y_1", "y_2", "y_p" }));
  const auto side = nlohmann::json::parse(slurp(path("f.parts.json")));
  const auto c = side.at("c").get<std::vector<double>>();
  ASSERT_EQ(c.size(), 2u);
  for (std::size_t i = 0; i < csv.fields.size(); ++i) {
    const double assembled = c[0] * csv.at(i, "y_1") + c[1] * csv.at(i, "y_2") + csv.at(i, "y_p");
    EXPECT_NEAR(assembled, csv.at(i, "y"), 1e-6 * (1 + std::abs(csv.at(i, "y"))));
  }
}

TEST_F(CliTest, PartsOnHomogeneousFitsInitialData)
{
  ASSERT_EQ(run("solve " + demo("oscillator.json") + " --parts --out " + quoted("o.csv")).code, 0);
  const auto side = nlohmann::json::parse(slurp(path("o.parts.json")));
  EXPECT_TRUE(side.at("particular_column").is_null());
  const auto c = side.at("c").get<std::vector<double>>();
  EXPECT_NEAR(c[0], 1.0, 1e-12);
  EXPECT_NEAR(c[1], 0.0, 1e-12);
}

// --- fundset -------------------------------------------------------------

TEST_F(CliTest, FundsetOscillatorWronskian)
{
  const auto r = run("fundset " + demo("oscillator.json") + " --out " + quoted("fs"));
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_TRUE(fs::exists(path("fs/solution_1.csv")));
  EXPECT_TRUE(fs::exists(path("fs/solution_2.csv")));
  const auto w = parse_csv(slurp(path("fs/wronskian.csv")));
  EXPECT_EQ(w.header, (std::vector<std::string>{ "t", "W_alpha", "abel_prediction", "rel_error" }));
  ASSERT_EQ(w.fields.size(), 200u);
  for (std::size_t i = 0; i < w.fields.size(); ++i) {
    EXPECT_LE(w.at(i, "rel_error"), 1e-6);
    EXPECT_NEAR(w.at(i, "W_alpha"), 1.0, 1e-6);
  }
}

TEST_F(CliTest, FundsetFirstOrderWronskianIsTheSolution)
{
  ASSERT_EQ(run("fundset " + demo("decay.json") + " --out " + quoted("fs")).code, 0);
  EXPECT_FALSE(fs::exists(path("fs/solution_2.csv")));
  const auto y = parse_csv(slurp(path("fs/solution_1.csv")));
  const auto w = parse_csv(slurp(path("fs/wronskian.csv")));
  ASSERT_EQ(y.fields.size(), w.fields.size());
  for (std::size_t i = 0; i < y.fields.size(); ++i)
    EXPECT_EQ(y.at(i, "y"), w.at(i, "W_alpha"));
}

TEST_F(CliTest, FundsetRejectsForcedProblem)
{
  const auto r = run("fundset " + demo("forced.json") + " --out " + quoted("fs"));
  EXPECT_EQ(r.code, 2);
  EXPECT_FALSE(fs::exists(path("fs/wronskian.csv")));
}

// --- verify --------------------------------------------------------------

TEST_F(CliTest, VerifyHealthy)
{
  for (const char* suite : { "calculus", "structure", "solver" }) {
    const auto r = run(std::string("verify --suite ") + suite + " --seed 42");
    EXPECT_EQ(r.code, 0) << r.out;
    EXPECT_EQ(r.out.find("FAIL"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("PASS"), std::string::npos);
  }
  EXPECT_EQ(run("verify --suite everything").code, 2);
}

TEST_F(CliTest, VerifyCatchesCompanionSignFlip)
{
  const auto r = run("verify --suite all --seed 42", {}, CFDE_FAULTY_CLI);
  EXPECT_EQ(r.code, 1) << r.out;
  EXPECT_NE(r.out.find("FAIL  solver"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("FAIL  structure"), std::string::npos) << r.out;
  EXPECT_EQ(run("verify --suite calculus --seed 42", {}, CFDE_FAULTY_CLI).code, 0);
}

// --- output contract -----------------------------------------------------

TEST_F(CliTest, Deterministic)
{
  for (int k = 0; k < 2; ++k) {
    const std::string tag = std::to_string(k);
    ASSERT_EQ(run("solve " + demo("forced.json") + " --parts --out " + quoted("f" + tag + ".csv")).code, 0);
    ASSERT_EQ(run("fundset " + demo("oscillator.json") + " --out " + quoted("fs" + tag)).code, 0);
  }
  EXPECT_EQ(slurp(path("f0.csv")), slurp(path("f1.csv")));
  EXPECT_EQ(slurp(path("f0.parts.json")), slurp(path("f1.parts.json")));
  EXPECT_EQ(slurp(path("fs0/wronskian.csv")), slurp(path("fs1/wronskian.csv")));
  EXPECT_EQ(slurp(path("fs0/solution_2.csv")), slurp(path("fs1/solution_2.csv")));
  EXPECT_EQ(run("verify --suite all --seed 7").out, run("verify --suite all --seed 7").out);
}

TEST_F(CliTest, NumbersRoundTrip)
{
  ASSERT_EQ(run("solve " + demo("forced.json") + " --parts --out " + quoted("f.csv")).code, 0);
  const auto csv = parse_csv(slurp(path("f.csv")));
  ASSERT_FALSE(csv.fields.empty());
  for (const auto& row : csv.fields)
    for (const auto& cell : row) {
      const double v = std::strtod(cell.c_str(), nullptr);
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", v);
      EXPECT_EQ(cell, buf);
      EXPECT_EQ(std::strtod(buf, nullptr), v);
    }
}

TEST_F(CliTest, ToleranceEnvironmentVariable)
{
  const std::string args = "solve " + demo("oscillator.json") + " --out ";
  ASSERT_EQ(run(args + quoted("tight.csv")).code, 0);
  ASSERT_EQ(run(args + quoted("loose.csv"), "CFDE_RTOL=1e-3").code, 0);
  EXPECT_NE(slurp(path("tight.csv")), slurp(path("loose.csv")));
  EXPECT_EQ(run(args + quoted("x.csv"), "CFDE_RTOL=fast").code, 2);
  EXPECT_EQ(run(args + quoted("x.csv"), "CFDE_RTOL=-1").code, 2);

  // file tolerances take precedence over the environment
  ASSERT_EQ(run("solve " + demo("forced.json") + " --out " + quoted("a.csv")).code, 0);
  ASSERT_EQ(run("solve " + demo("forced.json") + " --out " + quoted("b.csv"), "CFDE_RTOL=1e-3").code, 0);
  EXPECT_EQ(slurp(path("a.csv")), slurp(path("b.csv")));
}

} // namespace
