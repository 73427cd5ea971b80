#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <unistd.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "standby/cli.hpp"
#include "standby/errors.hpp"

using namespace standby;
namespace fs = std::filesystem;

namespace {

const char* kMinimalConfig = R"({
  "n": 2,
  "mu": 3.0,
  "distribution": {"family": "exponential", "params": {"rate": 1.0}}
})";

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct TempDir {
  fs::path path;
  TempDir() {
    ::unsetenv("STANDBY_OUT_DIR");  // tests drive out_dir explicitly
    path = fs::temp_directory_path() /
           ("standby_test_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter()++));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  static int& counter() {
    static int c = 0;
    return c;
  }
};

}  // namespace

TEST_CASE("minimal config parses with documented defaults") {
  const RunConfig c = parse_config(kMinimalConfig);
  CHECK(c.n == 2);
  CHECK(c.mu == 3.0);
  CHECK(c.dist.family == Family::Exponential);
  CHECK(c.j0 == 1);
  CHECK(c.seed == 1);
  CHECK(c.samples == 10000);
  CHECK(c.engine == Engine::EmbeddedChain);
  CHECK(c.inversion.method == InversionMethod::EulerAbateWhitt);
  CHECK(c.inversion.terms == 25);
  CHECK(c.lst_s_grid.size() == 3);
  CHECK(c.formats.count("csv") == 1);
  CHECK(c.formats.count("json") == 1);
}

TEST_CASE("full config round trip") {
  const char* text = R"({
    "n": 4, "mu": 8.5,
    "distribution": {"family": "uniform", "params": {"lo": 0.5, "hi": 1.5}},
    "j0": 2, "seed": 77, "samples": 500, "engine": "event",
    "inversion": {"method": "gaver-stehfest", "terms": 12, "target": "tail",
                  "t_grid": [0.5, 1.0, 2.0]},
    "lst": {"s_grid": [0.25, [1.0, -2.0]]},
    "sweep": {"mu_list": [4, 8, 16], "s_grid": [0.5, 2.0]},
    "output": {"directory": "/tmp/somewhere", "formats": ["json", "svg"]}
  })";
  const RunConfig c = parse_config(text);
  CHECK(c.n == 4);
  CHECK(c.dist.family == Family::Uniform);
  CHECK(c.j0 == 2);
  CHECK(c.engine == Engine::EventDriven);
  CHECK(c.inversion.method == InversionMethod::GaverStehfest);
  CHECK(c.inversion.terms == 12);
  CHECK(c.inversion.target == InversionTarget::Tail);
  CHECK(c.invert_t_grid == std::vector<double>{0.5, 1.0, 2.0});
  REQUIRE(c.lst_s_grid.size() == 2);
  CHECK(c.lst_s_grid[1] == std::complex<double>(1.0, -2.0));
  CHECK(c.sweep_mu_list == std::vector<double>{4, 8, 16});
  CHECK(c.out_dir == "/tmp/somewhere");
  CHECK(c.formats.count("csv") == 0);
  CHECK(c.formats.count("svg") == 1);
}

TEST_CASE("validation errors name the offending field") {
  auto with = [](const std::string& patch) {
    return std::string(R"({"mu": 3.0,
      "distribution": {"family": "exponential", "params": {"rate": 1.0}},)") +
           patch + "}";
  };
  try {
    parse_config(with(R"("n": 1)"));
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("n >= 2") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_config(with(R"("n": 2, "j0": 5)")), ValidationError);
  CHECK_THROWS_AS(parse_config(with(R"("n": 2, "samples": 0)")), ValidationError);
  CHECK_THROWS_AS(
      parse_config(R"({"n": 2, "mu": -1,
        "distribution": {"family": "exponential", "params": {"rate": 1.0}}})"),
      ValidationError);
}

TEST_CASE("unknown keys are hard parse errors") {
  CHECK_THROWS_AS(
      parse_config(R"({"nn": 2, "mu": 3.0,
        "distribution": {"family": "exponential", "params": {"rate": 1.0}}})"),
      ParseError);
  CHECK_THROWS_AS(
      parse_config(R"({"n": 2, "mu": 3.0,
        "distribution": {"family": "exponential",
                         "params": {"rate": 1.0, "extra": 2}}})"),
      ParseError);
  CHECK_THROWS_AS(parse_config("{invalid"), ParseError);
  CHECK_THROWS_AS(
      parse_config(R"({"n": 2, "mu": 3.0,
        "distribution": {"family": "gamma", "params": {}}})"),
      ParseError);
}

TEST_CASE("config hash tracks content, not formatting") {
  const RunConfig a = parse_config(kMinimalConfig);
  const RunConfig b = parse_config(
      R"({"mu": 3.0, "n": 2,
          "distribution": {"params": {"rate": 1.0}, "family": "exponential"}})");
  CHECK(config_hash(a) == config_hash(b));
  RunConfig c = a;
  c.seed = 2;
  CHECK(config_hash(a) != config_hash(c));
}

TEST_CASE("simulate writes the documented artifacts") {
  TempDir dir;
  RunConfig config = parse_config(kMinimalConfig);
  config.samples = 250;
  config.out_dir = dir.path.string();
  std::ostringstream out, err;
  CHECK(dispatch("simulate", config, out, err) == 0);
  CHECK(err.str().empty());

  const std::string csv = read_file(dir.path / "simulate.csv");
  CHECK(csv.rfind("# config_hash=", 0) == 0);
  CHECK(csv.find("replication,lifetime\n") != std::string::npos);
  // exactly `samples` data rows: preamble + header + 250
  const long rows = std::count(csv.begin(), csv.end(), '\n');
  CHECK(rows == 252);
  CHECK(csv.rfind("\n249,") != std::string::npos);

  const std::string summary = read_file(dir.path / "simulate_summary.json");
  CHECK(summary.find("\"count\": 250") != std::string::npos);
  CHECK(summary.find("\"quantiles\"") != std::string::npos);

  // Re-running the same config reproduces the artifacts byte for byte.
  TempDir dir2;
  config.out_dir = dir2.path.string();
  std::ostringstream out2, err2;
  CHECK(dispatch("simulate", config, out2, err2) == 0);
  CHECK(read_file(dir2.path / "simulate.csv") == csv);
  CHECK(read_file(dir2.path / "simulate_summary.json") == summary);
}

TEST_CASE("lst and invert artifacts") {
  TempDir dir;
  RunConfig config = parse_config(kMinimalConfig);
  config.out_dir = dir.path.string();
  std::ostringstream out, err;
  CHECK(dispatch("lst", config, out, err) == 0);
  const std::string lst_csv = read_file(dir.path / "lst.csv");
  CHECK(lst_csv.find("re_s,im_s,j,re_phi,im_phi,residual\n") != std::string::npos);
  // 3 default grid points x n=2 states
  CHECK(std::count(lst_csv.begin(), lst_csv.end(), '\n') == 2 + 6);

  // invert without a grid is a validation failure with a JSON error record
  std::ostringstream out2, err2;
  CHECK(dispatch("invert", config, out2, err2) == 1);
  CHECK(err2.str().find("validation_error") != std::string::npos);
  CHECK(err2.str().find("t_grid") != std::string::npos);

  config.invert_t_grid = {1.0, 2.0, 4.0, 8.0};
  std::ostringstream out3, err3;
  CHECK(dispatch("invert", config, out3, err3) == 0);
  const std::string inv_csv = read_file(dir.path / "invert.csv");
  CHECK(inv_csv.find("t,j,cdf,method,flags\n") != std::string::npos);
  CHECK(inv_csv.find(",euler,") != std::string::npos);
  CHECK(std::count(inv_csv.begin(), inv_csv.end(), '\n') == 2 + 4);
}

TEST_CASE("sweep artifacts include the svg overlay when requested") {
  TempDir dir;
  RunConfig config = parse_config(kMinimalConfig);
  config.out_dir = dir.path.string();
  config.samples = 2000;
  config.sweep_mu_list = {5.0, 10.0, 20.0};
  config.formats = {"csv", "json", "svg"};
  std::ostringstream out, err;
  CHECK(dispatch("sweep", config, out, err) == 0);
  const std::string csv = read_file(dir.path / "sweep.csv");
  CHECK(csv.find("mu,epsilon,ks_scaled,scaled_mean_ratio,lst_gap\n") !=
        std::string::npos);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 2 + 3);
  const std::string header = read_file(dir.path / "sweep_header.json");
  CHECK(header.find("config_hash") != std::string::npos);
  const std::string svg = read_file(dir.path / "sweep.svg");
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("polyline") != std::string::npos);

  // sweep needs at least two mu values
  config.sweep_mu_list = {5.0};
  std::ostringstream out2, err2;
  CHECK(dispatch("sweep", config, out2, err2) == 1);
}

TEST_CASE("validate subcommand passes its oracle suite on a healthy config") {
  TempDir dir;
  RunConfig config = parse_config(kMinimalConfig);
  config.out_dir = dir.path.string();
  config.samples = 20000;
  std::ostringstream out, err;
  CHECK(dispatch("validate", config, out, err) == 0);
  CHECK(out.str().find("PASS") != std::string::npos);
  CHECK(out.str().find("FAIL") == std::string::npos);
  const std::string doc = read_file(dir.path / "validate.json");
  CHECK(doc.find("\"pass\": true") != std::string::npos);
  CHECK(doc.find("\"pass\": false") == std::string::npos);
}

TEST_CASE("io failures map to exit code 3") {
  ::unsetenv("STANDBY_OUT_DIR");
  RunConfig config = parse_config(kMinimalConfig);
  config.samples = 10;
  config.out_dir = "/proc/definitely/not/writable";
  std::ostringstream out, err;
  CHECK(dispatch("simulate", config, out, err) == 3);
  CHECK(err.str().find("io_error") != std::string::npos);
}

TEST_CASE("unknown subcommand maps to exit code 1") {
  TempDir dir;
  RunConfig config = parse_config(kMinimalConfig);
  config.out_dir = dir.path.string();
  std::ostringstream out, err;
  CHECK(dispatch("frobnicate", config, out, err) == 1);
}
