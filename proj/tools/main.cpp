#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "standby/cli.hpp"
#include "standby/errors.hpp"

namespace {

struct Overrides {
  std::string config_path;
  std::int64_t seed = -1;
  std::int64_t samples = -1;
  std::string out_dir;
  std::string formats;
};

int run(const std::string& subcommand, const Overrides& ov) {
  std::ifstream in(ov.config_path);
  if (!in) {
    std::cerr << "{\"error\":\"io_error\",\"message\":\"cannot read "
              << ov.config_path << "\"}\n";
    return 3;
  }
  std::stringstream buffer;
  buffer << in.rdbuf();

  standby::RunConfig config;
  try {
    config = standby::parse_config(buffer.str());
  } catch (const std::exception& e) {
    std::cerr << "{\"error\":\"config_error\",\"message\":\"" << e.what()
              << "\"}\n";
    return 1;
  }
  if (ov.seed >= 0) config.seed = static_cast<std::uint64_t>(ov.seed);
  if (ov.samples >= 0) config.samples = ov.samples;
  if (!ov.out_dir.empty()) config.out_dir = ov.out_dir;
  if (!ov.formats.empty()) {
    config.formats.clear();
    std::stringstream list(ov.formats);
    std::string item;
    while (std::getline(list, item, ',')) config.formats.insert(item);
  }
  return standby::dispatch(subcommand, config, std::cout, std::cerr);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"n-element cold-standby lifetime analysis"};
  app.require_subcommand(1);

  Overrides ov;
  std::vector<std::string> names = {"simulate", "lst", "invert", "sweep",
                                    "validate"};
  std::string chosen;
  for (const auto& name : names) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", ov.config_path, "JSON config file")->required();
    sub->add_option("--seed", ov.seed, "override config seed");
    sub->add_option("--samples", ov.samples, "override sample count");
    sub->add_option("--out", ov.out_dir, "override output directory");
    sub->add_option("--format", ov.formats, "comma-separated: csv,json,svg");
    sub->callback([&chosen, name] { chosen = name; });
  }

  CLI11_PARSE(app, argc, argv);
  return run(chosen, ov);
}
