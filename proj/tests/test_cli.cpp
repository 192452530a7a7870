#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>

#include <nlohmann/json.hpp>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace {

struct CliResult {
  int exit_code = -1;
  std::string out;
};

CliResult run_cli(const std::string& args) {
  std::string cmd = std::string(SPINEST_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  CliResult res;
  std::array<char, 4096> buf;
  while (fgets(buf.data(), buf.size(), pipe)) res.out += buf.data();
  int status = pclose(pipe);
  res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return res;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string tmp_path(const char* name) {
  return std::string("/tmp/spinest_test_") + name;
}

}  // namespace

TEST_CASE("sweep writes an analytic CSV") {
  std::string out = tmp_path("sweep.csv");
  CliResult r = run_cli(
      "sweep --strategies sep-unbiased,joint-unbiased --n 1..3 "
      "--eta 0:1.5708:0.7854 --trials 0 --seed 1 --out " + out);
  CHECK(r.exit_code == 0);
  std::string csv = slurp(out);
  CHECK(csv.rfind("strategy,N,eta,analytic_error,mc_error,mc_stderr,trials,seed\n", 0) == 0);
  // 2 strategies x 3 N x 3 eta rows
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 19);
  CHECK(csv.find("sep-unbiased,1,0,1.3333333333333333,,,0,1") != std::string::npos);
}

TEST_CASE("sweep output is byte-identical across runs") {
  std::string a = tmp_path("sweep_a.csv");
  std::string b = tmp_path("sweep_b.csv");
  std::string args =
      "sweep --strategies sep-biased,joint-biased,bayes-joint --n 1..2 "
      "--eta 0:1.5:0.5 --trials 2000 --seed 77 --out ";
  CHECK(run_cli(args + a).exit_code == 0);
  CHECK(run_cli(args + b).exit_code == 0);
  std::string ca = slurp(a);
  CHECK(!ca.empty());
  CHECK(ca == slurp(b));
  // seeded MC columns present
  CHECK(ca.find(",2000,77") != std::string::npos);
}

TEST_CASE("sweep over an a.b grid") {
  std::string out = tmp_path("sweep_adotb.csv");
  CliResult r = run_cli(
      "sweep --strategies cross-weighted --n 2..2 --adotb 0:1:0.5 "
      "--trials 0 --seed 0 --out " + out);
  CHECK(r.exit_code == 0);
  std::string csv = slurp(out);
  // a.b = 1 value 2/9
  CHECK(csv.find("0.22222222222222") != std::string::npos);
}

TEST_CASE("sweep config file with flag override") {
  std::string cfg = tmp_path("cfg.json");
  std::string out = tmp_path("sweep_cfg.csv");
  {
    std::ofstream f(cfg);
    f << R"({"strategies": "sep-unbiased", "n": "1..2", "eta": "0:0.5:0.5",
             "trials": 0, "seed": 5, "out": ")" << out << R"("})";
  }
  CHECK(run_cli("sweep --config " + cfg).exit_code == 0);
  std::string csv = slurp(out);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);
  // flag overrides the file's N range
  CHECK(run_cli("sweep --config " + cfg + " --n 1..1").exit_code == 0);
  csv = slurp(out);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
}

TEST_CASE("usage errors exit 2") {
  CHECK(run_cli("sweep --strategies nope --n 1..2 --eta 0:1:0.5 --out /tmp/x.csv").exit_code == 2);
  CHECK(run_cli("sweep --strategies sep-unbiased --n 1..2 --out /tmp/x.csv").exit_code == 2);
  CHECK(run_cli("bogus-subcommand").exit_code == 2);
  CHECK(run_cli("estimate --counts-a 1,0").exit_code == 2);  // missing method
}

TEST_CASE("unwritable output exits 4") {
  CHECK(run_cli("sweep --strategies sep-unbiased --n 1..1 --eta 0:0:1 "
                "--out /nonexistent-dir/x.csv").exit_code == 4);
}

TEST_CASE("validate-povm") {
  CliResult ok = run_cli("validate-povm --eta 0.7853981633974483");
  CHECK(ok.exit_code == 0);
  CHECK(ok.out.find("\"pass\": true") != std::string::npos);

  CliResult three = run_cli("validate-povm --three");
  CHECK(three.exit_code == 0);
  CHECK(three.out.find("\"length\": 1.0") != std::string::npos);

  CliResult bad = run_cli("validate-povm --eta 1.5707963267948966 --alpha 1 --beta 1");
  CHECK(bad.exit_code == 3);
  CHECK(bad.out.find("saturation_residual") != std::string::npos);
}

TEST_CASE("estimate from counts") {
  CliResult shrink = run_cli("estimate --counts-a 1,0 --method shrinkage");
  CHECK(shrink.exit_code == 0);
  CHECK(shrink.out.find("0.3333333333333333") != std::string::npos);

  CliResult decoupled = run_cli(
      "estimate --counts-a 5,5 --counts-b 9,1 --adotb 0 --method bayes-joint");
  CHECK(decoupled.exit_code == 0);
  double est_a = nlohmann::json::parse(decoupled.out)["est_a"].get<double>();
  CHECK(std::abs(est_a) < 1e-14);

  CliResult pooled = run_cli(
      "estimate --counts-a 2,0 --counts-b 2,0 --adotb 1 --method bayes-joint");
  CHECK(pooled.exit_code == 0);
  CHECK(pooled.out.find("0.666666666666") != std::string::npos);

  CHECK(run_cli("estimate --counts-a 1,x --method mean").exit_code == 2);
  CHECK(run_cli("estimate --counts-a 1,0 --counts-b 1,1 --method cross-weighted").exit_code == 2);
}

TEST_CASE("figure preset emits the expected grid") {
  std::string out = tmp_path("fig1.csv");
  CHECK(run_cli("figure --id 1 --out " + out).exit_code == 0);
  std::string csv = slurp(out);
  // 2 strategies x 30 N x 31 eta + header
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 2 * 30 * 31 + 1);
  CHECK(run_cli("figure --id 9 --out " + out).exit_code == 2);
}
