#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "ulelab/cli.hpp"

using namespace ulelab::cli;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct TempDir {
  fs::path path;
  TempDir(const std::string& tag) {
    path = fs::temp_directory_path() / ("ule_lab_test_" + tag);
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("config round trip, overrides and hashing") {
  RunConfig c;
  RunConfig back = RunConfig::from_json(c.to_json());
  CHECK(back.to_json() == c.to_json());
  CHECK(c.hash().size() == 16);
  CHECK(back.hash() == c.hash());

  RunConfig other;
  other.tol = 1e-6;
  CHECK(other.hash() != c.hash());

  CHECK_NOTHROW(c.validate());
  RunConfig bad;
  bad.eps.clear();
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  RunConfig bad2;
  bad2.tol = 0;
  CHECK_THROWS_AS(bad2.validate(), std::invalid_argument);
}

TEST_CASE("hull subcommands and exit codes") {
  CHECK(run_cli({"hull", "condition-a", "--chain", "2,8,512"}) == 0);
  CHECK(run_cli({"hull", "maximalize", "--chain", "6,36"}) == 0);
  CHECK(run_cli({"hull", "isomorphic", "--a", "2,4,8", "--b", "4,16,64", "--pattern",
                 "powers"}) == 0);
  // inconclusive without a declared pattern
  CHECK(run_cli({"hull", "isomorphic", "--a", "2,4,8", "--b", "4,16,64"}) == 3);
  // invalid chain
  CHECK(run_cli({"hull", "condition-a", "--chain", "1,2"}) == 2);
  CHECK(run_cli({"hull", "condition-a", "--chain", "2,3"}) == 2);
}

TEST_CASE("potential command writes the declared schema") {
  TempDir dir("potential");
  CHECK(run_cli({"potential", "--N", "16", "--out", dir.path.string()}) == 0);
  std::string body = slurp(dir.path / "potential.csv");
  CHECK(body.find("# ule_lab v") == 0);
  CHECK(body.find("config=") != std::string::npos);
  CHECK(body.find("n,value_num,value_den,value_float\n") != std::string::npos);
  // frozen value: d^{(3)}_1 = 17409/32768
  CHECK(body.find("1,17409,32768,") != std::string::npos);

  // byte-identical on rerun
  std::string again;
  {
    TempDir dir2("potential2");
    CHECK(run_cli({"potential", "--N", "16", "--out", dir2.path.string()}) == 0);
    again = slurp(dir2.path / "potential.csv");
  }
  // the config (and so the hash) differs only in output_dir; compare bodies
  CHECK(body.substr(body.find('\n')) == again.substr(again.find('\n')));
}

TEST_CASE("spectrum and dress commands produce their artifacts") {
  TempDir dir("spectrum");
  CHECK(run_cli({"spectrum", "--N", "32", "--eps", "0.1", "--out", dir.path.string(),
                 "--profile", "profile.csv"}) == 0);
  std::string body = slurp(dir.path / "spectrum.csv");
  CHECK(body.find("index,eigenvalue,center,fitted_rate\n") != std::string::npos);
  CHECK(slurp(dir.path / "profile.csv").find("k,supnorm\n") != std::string::npos);

  CHECK(run_cli({"dress", "--N", "32", "--eps", "0.05", "--margin", "4", "--out",
                 dir.path.string()}) == 0);
  std::string trace = slurp(dir.path / "dress_trace.csv");
  CHECK(trace.find("iter,interior_mismatch,damping,collisions\n") != std::string::npos);
  std::string dress = slurp(dir.path / "dress.json");
  CHECK(dress.find("\"converged\": true") != std::string::npos);
}

TEST_CASE("spectrum at eps 0 reproduces the potential values") {
  TempDir dir("speczero");
  CHECK(run_cli({"spectrum", "--N", "8", "--eps", "0", "--out", dir.path.string()}) == 0);
  std::string body = slurp(dir.path / "spectrum.csv");
  // the sorted distal values over [0,8): smallest is d_0 = 0
  CHECK(body.find("0,0,0,50\n") != std::string::npos);
}

TEST_CASE("sweep emits one sorted row per grid point") {
  TempDir dir("sweep");
  CHECK(run_cli({"sweep", "--N", "32", "--eps", "0.08,0.05", "--shifts", "0,1", "--margin",
                 "4", "--out", dir.path.string()}) == 0);
  std::string body = slurp(dir.path / "sweep.csv");
  CHECK(body.find("eps,N,t,uniform_c,uniform_r,kernel_C,kernel_r,max_mismatch,iters\n") !=
        std::string::npos);
  // ascending eps, then t; count data rows
  std::stringstream ss(body);
  std::string line;
  std::vector<std::string> data;
  while (std::getline(ss, line))
    if (!line.empty() && line[0] != '#' && line.find("eps,") != 0) data.push_back(line);
  REQUIRE(data.size() == 4);
  auto leading = [](const std::string& row) {
    double eps;
    int n, t;
    REQUIRE(std::sscanf(row.c_str(), "%lf,%d,%d,", &eps, &n, &t) == 3);
    return std::tuple<double, int, int>(eps, n, t);
  };
  CHECK(leading(data[0]) == std::tuple<double, int, int>(0.05, 32, 0));
  CHECK(leading(data[1]) == std::tuple<double, int, int>(0.05, 32, 1));
  CHECK(leading(data[2]) == std::tuple<double, int, int>(0.08, 32, 0));
  CHECK(leading(data[3]) == std::tuple<double, int, int>(0.08, 32, 1));

  // the uniform rate rises as eps falls
  auto rate_of = [](const std::string& row) {
    double eps, c, r;
    int n, t;
    REQUIRE(std::sscanf(row.c_str(), "%lf,%d,%d,%lf,%lf", &eps, &n, &t, &c, &r) == 5);
    return r;
  };
  CHECK(rate_of(data[0]) > rate_of(data[2]));
  CHECK(rate_of(data[1]) > rate_of(data[3]));
}

TEST_CASE("parallel sweep output is byte-identical across reruns") {
  std::string first, second;
  {
    TempDir dir("det1");
    CHECK(run_cli({"sweep", "--N", "32", "--eps", "0.08,0.05", "--shifts", "0,1,2",
                   "--margin", "4", "--out", dir.path.string()}) == 0);
    first = slurp(dir.path / "sweep.csv");
  }
  {
    TempDir dir("det2");
    CHECK(run_cli({"sweep", "--N", "32", "--eps", "0.08,0.05", "--shifts", "0,1,2",
                   "--margin", "4", "--out", dir.path.string()}) == 0);
    second = slurp(dir.path / "sweep.csv");
  }
  // bodies match bit for bit (the meta line differs only via output_dir hash)
  CHECK(first.substr(first.find('\n')) == second.substr(second.find('\n')));
}

TEST_CASE("sweep reports non-converged grid points with exit code 3") {
  // eps past the dressable regime: the point is dropped and the run signals it
  TempDir dir("sweepbad");
  CHECK(run_cli({"sweep", "--N", "32", "--eps", "0.2", "--margin", "4", "--out",
                 dir.path.string()}) == 3);
}

TEST_CASE("approx command") {
  TempDir dir("approx");
  CHECK(run_cli({"approx", "--kind", "constant", "--C", "2", "--tmin", "0.5", "--tmax", "2",
                 "--tcount", "3", "--out", dir.path.string()}) == 0);
  std::string body = slurp(dir.path / "approx.csv");
  CHECK(body.find("t,q,h_upper\n") != std::string::npos);
}

TEST_CASE("unknown arguments fail with exit code 2") {
  CHECK(run_cli({"nonsense"}) == 2);
  CHECK(run_cli({"hull", "maximalize"}) == 2);  // missing required --chain
  CHECK(run_cli({"potential", "--N", "1"}) == 2);
}
