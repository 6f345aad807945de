#include <doctest.h>

#include <filesystem>
#include <map>
#include <sstream>

#include <unistd.h>

#include "lipforge/commands.hpp"

using namespace lipforge;
namespace fs = std::filesystem;

namespace {

std::string spec_path(const std::string& name) {
  return std::string(LIPFORGE_SPEC_DIR) + "/" + name;
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) {
    path = fs::temp_directory_path() / ("lipforge_test_" + tag + "_" + std::to_string(::getpid()));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
};

std::map<std::string, std::string> snapshot(const std::string& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::directory_iterator(dir))
    out[e.path().filename().string()] = read_file(e.path().string());
  return out;
}

int build(const std::string& spec, int K, int L, const std::string& out) {
  std::ostringstream log;
  return cmd_build(spec, K, L, 0, out, log);
}

// CSV rows after the header, split at the commas.
std::vector<std::vector<std::string>> rows(const std::string& text) {
  std::vector<std::vector<std::string>> out;
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string c;
    while (std::getline(ls, c, ',')) cells.push_back(c);
    out.push_back(cells);
  }
  return out;
}

}  // namespace

TEST_CASE("build writes one CSV per summand") {
  TempDir t("build");
  REQUIRE(build(spec_path("rationals.json"), 10, 10, t / "r") == kExitOk);
  auto files = snapshot(t / "r");
  for (int k = 1; k <= 10; ++k) CHECK(files.count(g_csv_name(k, 10)) == 1);
  CHECK(g_csv_name(3, 10) == "g_03.csv");
  CHECK(files.count("g_sum.csv") == 1);
  CHECK(files.count("h.csv") == 1);
  CHECK(files.count("f.csv") == 0);
  // Every CSV round-trips through the parser.
  for (const auto& [name, text] : files)
    if (name.size() > 4 && name.substr(name.size() - 4) == ".csv")
      CHECK(PLFunction::from_csv(text).to_csv() == text);
}

TEST_CASE("empty A gives the zero function") {
  TempDir t("empty");
  REQUIRE(build(spec_path("empty.json"), 3, 4, t / "e") == kExitOk);
  CHECK(read_file(t / "e/g_sum.csv") == "x,value\n0,0\n");
}

TEST_CASE("builds are byte-identical") {
  TempDir t("det");
  REQUIRE(build(spec_path("zero_one.json"), 5, 7, t / "a") == kExitOk);
  REQUIRE(build(spec_path("zero_one.json"), 5, 7, t / "b") == kExitOk);
  CHECK(snapshot(t / "a") == snapshot(t / "b"));
}

TEST_CASE("build exit codes") {
  TempDir t("codes");
  write_file(t / "bad.json", R"({"window":["1","0"],"levels":[]})");
  CHECK(build(t / "bad.json", 2, 3, t / "x") == kExitSpecError);
  CHECK(build(t / "missing.json", 2, 3, t / "x") == kExitSpecError);
  CHECK(build(spec_path("zero.json"), 4, 2, t / "x") == kExitSpecError);
  // A fat level part covers the middle third of (1/3, 1/2).
  write_file(t / "alloc.json",
             R"({"window":["0","1"],"levels":[[[["0","0",true,true]],[["19/50","9/20",true,true]]]],)"
             R"("measure_bounds":["7/100"]})");
  CHECK(build(t / "alloc.json", 1, 3, t / "x") == kExitAllocFailure);
}

TEST_CASE("verify suites") {
  TempDir t("verify");
  REQUIRE(build(spec_path("rationals.json"), 4, 6, t / "r") == kExitOk);
  std::ostringstream out;
  CHECK(cmd_verify(t / "r", "lemma-g", out) == kExitOk);
  for (int k = 1; k <= 4; ++k)
    CHECK(out.str().find("k=" + std::to_string(k) + " TV < 2^-" + std::to_string(k) + ": pass") !=
          std::string::npos);
  std::ostringstream s;
  CHECK(cmd_verify(t / "r", "scheme", s) == kExitOk);
  CHECK(s.str().find("property (b) over all pairs k<l: pass") != std::string::npos);
  std::ostringstream all;
  CHECK(cmd_verify(t / "r", "all", all) == kExitOk);
  CHECK(all.str().find("FAIL") == std::string::npos);
  CHECK(fs::exists(t / "r/verify_all.json"));

  std::ostringstream bad;
  CHECK(cmd_verify(t / "r", "nonsense", bad) == kExitSpecError);
  write_file(t / "r/g_2.csv", "x,value\n1,oops\n");
  CHECK(cmd_verify(t / "r", "all", bad) == kExitSpecError);
  fs::remove(t / "r/g_sum.csv");
  CHECK(cmd_verify(t / "r", "all", bad) == kExitSpecError);
}

TEST_CASE("verify catches a tampered function") {
  TempDir t("tamper");
  REQUIRE(build(spec_path("zero.json"), 3, 5, t / "z") == kExitOk);
  write_file(t / "z/g_sum.csv", "x,value\n0,0\n1,1\n");
  std::ostringstream out;
  CHECK(cmd_verify(t / "z", "assembly", out) == kExitCheckFailed);
}

TEST_CASE("profile") {
  TempDir t("profile");
  REQUIRE(build(spec_path("zero.json"), 6, 8, t / "z") == kExitOk);
  std::ostringstream out;

  write_file(t / "none.csv", "");
  CHECK(cmd_profile(t / "z", t / "none.csv", "2^-1..2^-L", out) == kExitOk);
  CHECK(read_file(t / "z/profile.csv") == "x,r,sup_quotient\n");
  CHECK(read_file(t / "z/traces.csv") == "x,p,j_p,r_p,osc,bound_ok\n");

  write_file(t / "pts.csv", "x,label\n0,in_A\n1/3,off_A\n");
  REQUIRE(cmd_profile(t / "z", t / "pts.csv", "2^-1..2^-L", out) == kExitOk);
  Rational prev(-1);
  size_t at_zero = 0;
  for (const auto& r : rows(read_file(t / "z/profile.csv"))) {
    REQUIRE(r.size() == 3);
    if (r[0] != "0") continue;
    ++at_zero;
    Rational v = Rational::parse(r[2]);
    CHECK(v >= prev);
    prev = v;
  }
  CHECK(at_zero == 8);
  auto tr = rows(read_file(t / "z/traces.csv"));
  CHECK_FALSE(tr.empty());
  for (const auto& r : tr) {
    CHECK(r[0] == "1/3");
    CHECK(r[5] == "1");
  }

  write_file(t / "mislabel.csv", "0,off_A\n");
  CHECK(cmd_profile(t / "z", t / "mislabel.csv", "2^-1..2^-L", out) == kExitMislabeled);
  write_file(t / "garbage.csv", "1/3,maybe\n");
  CHECK(cmd_profile(t / "z", t / "garbage.csv", "2^-1..2^-L", out) == kExitSpecError);
  CHECK(cmd_profile(t / "z", t / "pts.csv", "1..2", out) == kExitSpecError);
}

TEST_CASE("off-A sample avoids witnesses") {
  BuildConfig cfg;
  cfg.K = 4;
  cfg.L = 6;
  BuildResult b = build_sum(load_spec(spec_path("rationals.json")), cfg);
  auto pts = off_a_sample(b, 50, 3);
  CHECK(pts.size() == 50);
  for (const Rational& x : pts) {
    CHECK_FALSE(b.is_witness(x));
    CHECK(b.spec.window.lo < x);
    CHECK(x < b.spec.window.hi);
  }
  CHECK(off_a_sample(b, 50, 3) == pts);
}
