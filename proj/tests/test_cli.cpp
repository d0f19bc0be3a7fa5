#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

std::string env(const char* name) {
  const char* v = std::getenv(name);
  REQUIRE_MESSAGE(v != nullptr, name << " is not set");
  return v;
}

fs::path scratch() {
  const fs::path p = fs::temp_directory_path() / "spacespec_cli_test";
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(const std::string& args) {
  static int counter = 0;
  const fs::path dir = scratch();
  const fs::path out = dir / ("out" + std::to_string(counter) + ".txt");
  const fs::path err = dir / ("err" + std::to_string(counter++) + ".txt");
  const std::string cmd = env("SPACESPEC_CLI") + " " + args + " > " + out.string() + " 2> " + err.string();
  const int status = std::system(cmd.c_str());
  const int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return {code, slurp(out), slurp(err)};
}

std::string data(const std::string& name) { return env("SPACESPEC_DATA") + "/" + name; }

std::vector<double> column(const std::string& csv, std::size_t col) {
  std::vector<double> v;
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    std::istringstream row(line);
    std::string cell;
    for (std::size_t i = 0; i <= col; ++i) std::getline(row, cell, ',');
    v.push_back(std::stod(cell));
  }
  return v;
}

}  // namespace

TEST_CASE("Faber-Krahn on the square") {
  const Run r = run("verify --name faber_krahn --body " + data("square.json") + " --h 0.08,0.04,0.02");
  CHECK(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  REQUIRE(j.size() == 1);
  CHECK(j[0]["pass"] == true);
  CHECK(j[0]["slack"].get<double>() == doctest::Approx(1.57).epsilon(0.02));
}

TEST_CASE("hyperbolic ratio curve decreases") {
  const fs::path out = scratch() / "curve.csv";
  const Run r = run("ball --delta -1 --n 2 --r 0.5:6:0.25 --out " + out.string());
  CHECK(r.code == 0);
  const std::string csv = slurp(out);
  CHECK(csv.rfind("r,lambda1,lambda2,ratio\n", 0) == 0);
  const std::vector<double> ratio = column(csv, 3);
  CHECK(ratio.size() == 23);
  for (std::size_t i = 1; i < ratio.size(); ++i) CHECK(ratio[i] < ratio[i - 1]);
}

TEST_CASE("malformed body file exits 2 with a line-anchored message") {
  const fs::path bad = scratch() / "bad.json";
  std::ofstream(bad) << "{\n  \"delta\": 0,\n  \"vertices\": [[0,0], [1,0]\n";
  const Run r = run("solve --body " + bad.string());
  CHECK(r.code == 2);
  CHECK(r.err.find(bad.string() + ":") != std::string::npos);
}

TEST_CASE("usage errors exit 2") {
  CHECK(run("verify --nonsense").code == 2);
  CHECK(run("verify --name nosuch --body " + data("square.json")).code == 2);
  CHECK(run("verify --name ppw --body " + data("disk_hyperbolic.json")).code == 2);
  CHECK(run("solve --body " + data("square.json") + " --h 0.1,0.2,0.05").code == 2);
  CHECK(run("ball --delta 3").code == 2);
}

TEST_CASE("outputs are deterministic") {
  const std::string args = "verify --name gen_ppw --random 2 --delta -1 --seed 9 --format csv";
  const Run a = run(args), b = run(args);
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(!a.out.empty());
  const Run c = run("verify --name gen_ppw --random 2 --delta -1 --seed 10 --format csv");
  CHECK(c.out != a.out);
}

TEST_CASE("verify all on the shipped corpus") {
  const Run r = run("verify --name all --body " + env("SPACESPEC_DATA"));
  CHECK_MESSAGE(r.code == 0, r.err);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j.size() > 40);
  for (const auto& rep : j) CHECK_MESSAGE(rep["pass"] == true, rep["name"]);
}

TEST_CASE("config file supplies defaults and flags override") {
  const fs::path cfg = scratch() / "run.ini";
  std::ofstream(cfg) << "delta=1\nr=0.5:1.5:0.5\n";
  const Run a = run("ball --config " + cfg.string());
  CHECK(a.code == 0);
  CHECK(column(a.out, 0).size() == 3);
  const Run b = run("ball --config " + cfg.string() + " --r 0.5:1:0.5");
  CHECK(column(b.out, 0).size() == 2);
}

TEST_CASE("sweep csv") {
  const Run r = run("sweep --delta 0 --eps 0:0.2:0.1 --m 64");
  CHECK(r.code == 0);
  CHECK(r.out.rfind("eps,d_hausdorff,d_metric,lambda1_excess,lambda2_deficit,ppw_deficit\n", 0) == 0);
  CHECK(column(r.out, 0).size() == 3);
}

TEST_CASE("solve and rearrange emit json") {
  const Run s = run("solve --body " + data("triangle.json"));
  CHECK(s.code == 0);
  const auto j = nlohmann::json::parse(s.out);
  CHECK(j.is_object());
  const fs::path prof = scratch() / "profile.csv";
  const Run r = run("rearrange --body " + data("square.json") + " --profile " + prof.string());
  CHECK(r.code == 0);
  CHECK(nlohmann::json::parse(r.out).size() == 4);
  CHECK(slurp(prof).rfind("t,value\n", 0) == 0);
}

TEST_CASE("rectangle chain with trend") {
  const fs::path trend = scratch() / "trend.csv";
  const Run r = run("verify --name rectangle_chain --a 4,8,16,32 --trend " + trend.string());
  CHECK(r.code == 0);
  CHECK(nlohmann::json::parse(r.out).size() == 4);
  CHECK(column(slurp(trend), 0).size() == 4);
}
