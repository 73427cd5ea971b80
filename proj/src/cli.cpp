#include "standby/cli.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "standby/asym.hpp"
#include "standby/errors.hpp"
#include "standby/lst.hpp"

namespace standby {

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed,
                         const std::string& context) {
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key)) {
      throw ParseError("unknown key \"" + context + key + "\"");
    }
  }
}

double get_number(const json& obj, const std::string& key) {
  if (!obj.at(key).is_number()) {
    throw ParseError("field \"" + key + "\" must be a number");
  }
  return obj.at(key).get<double>();
}

DistributionSpec parse_distribution(const json& obj) {
  reject_unknown_keys(obj, {"family", "params"}, "distribution.");
  const std::string family = obj.at("family").get<std::string>();
  const json& params = obj.at("params");
  auto need = [&](std::initializer_list<const char*> names) {
    reject_unknown_keys(params, std::set<std::string>(names.begin(), names.end()),
                        "distribution.params.");
  };
  if (family == "exponential") {
    need({"rate"});
    return DistributionSpec::exponential(get_number(params, "rate"));
  }
  if (family == "erlang") {
    need({"shape", "rate"});
    return DistributionSpec::erlang(params.at("shape").get<int>(),
                                    get_number(params, "rate"));
  }
  if (family == "deterministic") {
    need({"value"});
    return DistributionSpec::deterministic(get_number(params, "value"));
  }
  if (family == "uniform") {
    need({"lo", "hi"});
    return DistributionSpec::uniform(get_number(params, "lo"),
                                     get_number(params, "hi"));
  }
  if (family == "hyperexponential") {
    need({"weights", "rates"});
    return DistributionSpec::hyperexponential(
        params.at("weights").get<std::vector<double>>(),
        params.at("rates").get<std::vector<double>>());
  }
  if (family == "weibull") {
    need({"shape", "scale"});
    return DistributionSpec::weibull(get_number(params, "shape"),
                                     get_number(params, "scale"));
  }
  if (family == "lognormal") {
    need({"log_mean", "log_sd"});
    return DistributionSpec::lognormal(get_number(params, "log_mean"),
                                       get_number(params, "log_sd"));
  }
  throw ParseError("unknown distribution family \"" + family + "\"");
}

Engine parse_engine(const std::string& name) {
  if (name == "embedded") return Engine::EmbeddedChain;
  if (name == "event") return Engine::EventDriven;
  throw ParseError("engine must be \"embedded\" or \"event\"");
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
  if (!root.is_object()) throw ParseError("config must be a JSON object");
  reject_unknown_keys(root,
                      {"n", "mu", "distribution", "j0", "seed", "samples",
                       "engine", "inversion", "lst", "sweep", "output"},
                      "");

  RunConfig config;
  config.n = root.at("n").get<int>();
  config.mu = get_number(root, "mu");
  config.dist = parse_distribution(root.at("distribution"));
  if (root.contains("j0")) config.j0 = root.at("j0").get<int>();
  if (root.contains("seed")) config.seed = root.at("seed").get<std::uint64_t>();
  if (root.contains("samples")) config.samples = root.at("samples").get<std::int64_t>();
  if (root.contains("engine")) {
    config.engine = parse_engine(root.at("engine").get<std::string>());
  }
  if (root.contains("inversion")) {
    const json& inv = root.at("inversion");
    reject_unknown_keys(inv, {"method", "terms", "target", "t_grid"},
                        "inversion.");
    if (inv.contains("method")) {
      const std::string m = inv.at("method").get<std::string>();
      if (m == "euler") {
        config.inversion.method = InversionMethod::EulerAbateWhitt;
      } else if (m == "gaver-stehfest") {
        config.inversion.method = InversionMethod::GaverStehfest;
        config.inversion.terms = 14;
      } else {
        throw ParseError("inversion.method must be \"euler\" or \"gaver-stehfest\"");
      }
    }
    if (inv.contains("terms")) config.inversion.terms = inv.at("terms").get<int>();
    if (inv.contains("target")) {
      const std::string t = inv.at("target").get<std::string>();
      if (t == "cdf") {
        config.inversion.target = InversionTarget::CDF;
      } else if (t == "tail") {
        config.inversion.target = InversionTarget::Tail;
      } else {
        throw ParseError("inversion.target must be \"cdf\" or \"tail\"");
      }
    }
    if (inv.contains("t_grid")) {
      config.invert_t_grid = inv.at("t_grid").get<std::vector<double>>();
    }
  }
  if (root.contains("lst")) {
    const json& lst_obj = root.at("lst");
    reject_unknown_keys(lst_obj, {"s_grid"}, "lst.");
    config.lst_s_grid.clear();
    for (const json& entry : lst_obj.at("s_grid")) {
      if (entry.is_number()) {
        config.lst_s_grid.emplace_back(entry.get<double>(), 0.0);
      } else if (entry.is_array() && entry.size() == 2) {
        config.lst_s_grid.emplace_back(entry[0].get<double>(),
                                       entry[1].get<double>());
      } else {
        throw ParseError("lst.s_grid entries must be numbers or [re, im] pairs");
      }
    }
  }
  if (root.contains("sweep")) {
    const json& sweep = root.at("sweep");
    reject_unknown_keys(sweep, {"mu_list", "s_grid"}, "sweep.");
    if (sweep.contains("mu_list")) {
      config.sweep_mu_list = sweep.at("mu_list").get<std::vector<double>>();
    }
    if (sweep.contains("s_grid")) {
      config.sweep_s_grid = sweep.at("s_grid").get<std::vector<double>>();
    }
  }
  if (root.contains("output")) {
    const json& output = root.at("output");
    reject_unknown_keys(output, {"directory", "formats"}, "output.");
    if (output.contains("directory")) {
      config.out_dir = output.at("directory").get<std::string>();
    }
    if (output.contains("formats")) {
      config.formats.clear();
      for (const json& f : output.at("formats")) {
        const std::string name = f.get<std::string>();
        if (name != "csv" && name != "json" && name != "svg") {
          throw ParseError("output.formats entries must be csv, json, or svg");
        }
        config.formats.insert(name);
      }
    }
  }

  // cross-field validation with field-precise messages
  if (config.n < 2) throw ValidationError("field n: n >= 2 required");
  if (!(config.mu > 0)) throw ValidationError("field mu: mu > 0 required");
  config.dist.validate();
  if (config.j0 < 0 || config.j0 > config.n - 1) {
    throw ValidationError("field j0: must be in [0, n-1]");
  }
  if (config.samples < 1) throw ValidationError("field samples: must be >= 1");
  config.inversion.validate();
  return config;
}

namespace {

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

json distribution_json(const DistributionSpec& d) {
  json params;
  switch (d.family) {
    case Family::Exponential: params = {{"rate", d.rate}}; break;
    case Family::Erlang: params = {{"shape", d.shape_k}, {"rate", d.rate}}; break;
    case Family::Deterministic: params = {{"value", d.value}}; break;
    case Family::Uniform: params = {{"lo", d.lo}, {"hi", d.hi}}; break;
    case Family::Hyperexponential:
      params = {{"weights", d.weights}, {"rates", d.rates}};
      break;
    case Family::Weibull: params = {{"shape", d.shape}, {"scale", d.scale}}; break;
    case Family::Lognormal:
      params = {{"log_mean", d.log_mean}, {"log_sd", d.log_sd}};
      break;
  }
  return {{"family", family_name(d.family)}, {"params", params}};
}

json canonical_json(const RunConfig& c) {
  json inv = {{"method", c.inversion.method == InversionMethod::EulerAbateWhitt
                             ? "euler"
                             : "gaver-stehfest"},
              {"terms", c.inversion.terms},
              {"target", c.inversion.target == InversionTarget::CDF ? "cdf"
                                                                    : "tail"},
              {"t_grid", c.invert_t_grid}};
  json s_grid = json::array();
  for (const auto& s : c.lst_s_grid) s_grid.push_back({s.real(), s.imag()});
  return {{"n", c.n},
          {"mu", c.mu},
          {"distribution", distribution_json(c.dist)},
          {"j0", c.j0},
          {"seed", c.seed},
          {"samples", c.samples},
          {"engine", engine_name(c.engine)},
          {"inversion", inv},
          {"lst", {{"s_grid", s_grid}}},
          {"sweep", {{"mu_list", c.sweep_mu_list}, {"s_grid", c.sweep_s_grid}}}};
}

std::string hash_hex(std::uint64_t h) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%016" PRIx64, h);
  return buf;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << content;
  if (!out) throw IoError("short write to " + path.string());
}

std::string csv_preamble(const RunConfig& config) {
  return "# config_hash=" + hash_hex(config_hash(config)) +
         " seed=" + std::to_string(config.seed) + "\n";
}

struct CheckRow {
  std::string name;
  double value;
  double threshold;
  bool pass;
};

std::vector<CheckRow> oracle_suite(const RunConfig& config) {
  std::vector<CheckRow> rows;
  const WorkingTimeModel model(config.dist);
  const double b = model.mean();
  const double eps = model.epsilon(config.mu);

  // n=2 closed form vs the generic solver
  {
    SystemConfig two(2, config.mu, model);
    double worst = 0.0;
    for (double base : {0.1, 1.0, 10.0}) {
      for (std::complex<double> dir : {std::complex<double>(1, 0),
                                       std::complex<double>(0, 1),
                                       std::complex<double>(0, -1)}) {
        const std::complex<double> s = base * dir;
        worst = std::max(worst, std::abs(solve_phis(two, s).phis[1] -
                                         phi1_two_element(two, s)));
      }
    }
    rows.push_back({"n2_closed_form_gap", worst, 1e-10, worst < 1e-10});
  }

  // Wald identity E tau_1 = b / eps for n=2
  {
    SystemConfig two(2, config.mu, model);
    const double m1 = mean_lifetimes(two)[1];
    const double gap = std::abs(m1 - b / eps);
    rows.push_back({"wald_mean_gap", gap, 1e-10, gap < 1e-10});
  }

  // engine agreement (two-sample KS at the 1% critical value)
  {
    SystemConfig sys(config.n, config.mu, model);
    const std::int64_t count = std::min<std::int64_t>(config.samples, 20000);
    const auto a = run_batch(sys, config.j0, count, config.seed,
                             Engine::EmbeddedChain);
    const auto bb = run_batch(sys, config.j0, count, config.seed ^ 0x5bf03635ULL,
                              Engine::EventDriven);
    const double ks = two_sample_ks(a, bb);
    const double crit = 1.628 * std::sqrt(2.0 / static_cast<double>(count));
    rows.push_back({"engine_cross_ks", ks, crit, ks < crit});
  }

  // partial sums of g_j recover g at the documented truncation
  {
    const int big_j = model.truncation_index(config.mu);
    for (double s : {0.0, 1.0 / b}) {
      std::complex<double> sum = 0.0;
      for (int j = 0; j <= big_j; ++j) sum += model.weighted_lst(j, s, config.mu);
      const double gap = std::abs(sum - model.lst(s));
      rows.push_back({"gj_sum_gap_s" + fmt(s), gap, 1e-9, gap < 1e-9});
    }
  }

  // phi_j(0) = 1
  {
    SystemConfig sys(config.n, config.mu, model);
    const auto sol = solve_phis(sys, 0.0);
    double worst = 0.0;
    for (const auto& phi : sol.phis) worst = std::max(worst, std::abs(phi - 1.0));
    rows.push_back({"phi_at_zero_gap", worst, 1e-8, worst < 1e-8});
  }
  return rows;
}

std::string sweep_svg(const AsymptoticReport& report, double b) {
  const int width = 640, height = 420;
  const double margin = 50.0;
  const double t_max = 5.0 * b;
  auto px = [&](double t) {
    return margin + (width - 2 * margin) * std::min(t, t_max) / t_max;
  };
  auto py = [&](double p) { return height - margin - (height - 2 * margin) * p; };
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<rect x=\"" << margin << "\" y=\"" << margin << "\" width=\""
      << width - 2 * margin << "\" height=\"" << height - 2 * margin
      << "\" fill=\"none\" stroke=\"black\"/>\n";
  // limit CDF
  svg << "<polyline fill=\"none\" stroke=\"black\" stroke-width=\"2\" points=\"";
  for (int i = 0; i <= 200; ++i) {
    const double t = t_max * i / 200.0;
    svg << px(t) << "," << py(exponential_limit_cdf(t, b)) << " ";
  }
  svg << "\"/>\n";
  const char* colors[] = {"#1b9e77", "#d95f02", "#7570b3", "#e7298a",
                          "#66a61e", "#e6ab02"};
  for (std::size_t r = 0; r < report.scaled_ecdf_points.size(); ++r) {
    const auto& pts = report.scaled_ecdf_points[r];
    svg << "<polyline fill=\"none\" stroke=\"" << colors[r % 6]
        << "\" stroke-width=\"1\" points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const double p = static_cast<double>(i + 1) / static_cast<double>(pts.size());
      svg << px(pts[i]) << "," << py(p) << " ";
    }
    svg << "\"/>\n<text x=\"" << width - margin - 120 << "\" y=\""
        << margin + 16.0 * (static_cast<double>(r) + 1.0) << "\" fill=\""
        << colors[r % 6] << "\" font-size=\"12\">mu=" << report.rows[r].mu
        << "</text>\n";
  }
  svg << "<text x=\"" << margin << "\" y=\"" << margin - 10
      << "\" font-size=\"13\">scaled lifetime ECDFs vs 1-exp(-t/b)</text>\n"
      << "</svg>\n";
  return svg.str();
}

int run_dispatch(const std::string& subcommand, const RunConfig& config,
                 std::ostream& out) {
  std::string dir = config.out_dir;
  if (const char* env = std::getenv("STANDBY_OUT_DIR")) dir = env;
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir);
  const std::filesystem::path base(dir);
  const std::string hash = hash_hex(config_hash(config));

  const WorkingTimeModel model(config.dist);
  SystemConfig sys(config.n, config.mu, model);

  if (subcommand == "simulate") {
    const auto raw =
        raw_lifetimes(sys, config.j0, config.samples, config.seed, config.engine);
    const auto emp = EmpiricalDistribution::from_samples(raw, config.seed,
                                                         config.engine);
    if (config.formats.count("csv")) {
      std::ostringstream csv;
      csv << csv_preamble(config) << "replication,lifetime\n";
      for (std::size_t i = 0; i < raw.size(); ++i) {
        csv << i << "," << fmt(raw[i]) << "\n";
      }
      write_file(base / "simulate.csv", csv.str());
    }
    if (config.formats.count("json")) {
      json summary = {{"config_hash", hash},
                      {"count", emp.count},
                      {"mean", emp.mean},
                      {"stderr", emp.stderror},
                      {"single_sample", emp.single_sample},
                      {"quantiles",
                       {{"0.5", emp.quantile(0.5)},
                        {"0.9", emp.quantile(0.9)},
                        {"0.99", emp.quantile(0.99)}}},
                      {"seed", emp.seed},
                      {"engine", engine_name(emp.engine)}};
      write_file(base / "simulate_summary.json", summary.dump(2) + "\n");
    }
    out << "simulate: " << emp.count << " lifetimes, mean " << emp.mean
        << " (stderr " << emp.stderror << ")\n";
    return 0;
  }

  if (subcommand == "lst") {
    std::ostringstream csv;
    csv << csv_preamble(config) << "re_s,im_s,j,re_phi,im_phi,residual\n";
    for (const auto& s : config.lst_s_grid) {
      const auto sol = solve_phis(sys, s);
      for (int j = 0; j < config.n; ++j) {
        const auto& phi = sol.phis[static_cast<std::size_t>(j)];
        csv << fmt(s.real()) << "," << fmt(s.imag()) << "," << j << ","
            << fmt(phi.real()) << "," << fmt(phi.imag()) << ","
            << fmt(sol.residual) << "\n";
      }
    }
    if (config.formats.count("csv")) write_file(base / "lst.csv", csv.str());
    out << "lst: " << config.lst_s_grid.size() << " transform points written\n";
    return 0;
  }

  if (subcommand == "invert") {
    if (config.invert_t_grid.empty()) {
      throw ValidationError("field inversion.t_grid: required for invert");
    }
    const auto curve =
        invert_curve(sys, config.j0, config.invert_t_grid, config.inversion);
    const std::string method_name =
        config.inversion.method == InversionMethod::EulerAbateWhitt
            ? "euler"
            : "gaver-stehfest";
    std::ostringstream csv;
    csv << csv_preamble(config) << "t,j,cdf,method,flags\n";
    for (std::size_t i = 0; i < curve.t.size(); ++i) {
      csv << fmt(curve.t[i]) << "," << config.j0 << "," << fmt(curve.cdf[i])
          << "," << method_name << "," << curve.flags[i] << "\n";
    }
    if (config.formats.count("csv")) write_file(base / "invert.csv", csv.str());
    out << "invert: " << curve.t.size() << " CDF points written\n";
    return 0;
  }

  if (subcommand == "sweep") {
    if (config.sweep_mu_list.size() < 2) {
      throw ValidationError("field sweep.mu_list: need >= 2 ascending values");
    }
    const auto report =
        convergence_sweep(config.dist, config.n, config.j0,
                          config.sweep_mu_list, config.samples, config.seed,
                          config.sweep_s_grid);
    if (config.formats.count("csv")) {
      std::ostringstream csv;
      csv << csv_preamble(config)
          << "mu,epsilon,ks_scaled,scaled_mean_ratio,lst_gap\n";
      for (const auto& row : report.rows) {
        csv << fmt(row.mu) << "," << fmt(row.epsilon) << ","
            << fmt(row.ks_scaled) << "," << fmt(row.scaled_mean_ratio) << ","
            << fmt(row.lst_gap) << "\n";
      }
      write_file(base / "sweep.csv", csv.str());
    }
    if (config.formats.count("json")) {
      json header = {{"config_hash", hash},
                     {"config", canonical_json(config)},
                     {"j", report.j},
                     {"seed", report.seed},
                     {"sample_count", report.sample_count}};
      write_file(base / "sweep_header.json", header.dump(2) + "\n");
    }
    if (config.formats.count("svg")) {
      write_file(base / "sweep.svg", sweep_svg(report, model.mean()));
    }
    out << "sweep: " << report.rows.size() << " rows; final ks_scaled "
        << report.rows.back().ks_scaled << "\n";
    return 0;
  }

  if (subcommand == "validate") {
    const auto rows = oracle_suite(config);
    bool all_pass = true;
    out << "check                          value         threshold    result\n";
    for (const auto& row : rows) {
      all_pass = all_pass && row.pass;
      char line[128];
      std::snprintf(line, sizeof(line), "%-30s %-13.6g %-12.3g %s\n",
                    row.name.c_str(), row.value, row.threshold,
                    row.pass ? "PASS" : "FAIL");
      out << line;
    }
    if (config.formats.count("json")) {
      json record = json::array();
      for (const auto& row : rows) {
        record.push_back({{"name", row.name},
                          {"value", row.value},
                          {"threshold", row.threshold},
                          {"pass", row.pass}});
      }
      json doc = {{"config_hash", hash}, {"seed", config.seed},
                  {"checks", record}};
      write_file(base / "validate.json", doc.dump(2) + "\n");
    }
    return all_pass ? 0 : 1;
  }

  throw ValidationError("unknown subcommand \"" + subcommand + "\"");
}

}  // namespace

std::uint64_t config_hash(const RunConfig& config) {
  const std::string canon = canonical_json(config).dump();
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : canon) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

int dispatch(const std::string& subcommand, const RunConfig& config,
             std::ostream& out, std::ostream& err) {
  auto report = [&err](const char* kind, const std::exception& e) {
    err << json({{"error", kind}, {"message", e.what()}}).dump() << "\n";
  };
  try {
    return run_dispatch(subcommand, config, out);
  } catch (const SingularSystem& e) {
    report("singular_system", e);
    return 2;
  } catch (const QuadratureFailure& e) {
    report("quadrature_failure", e);
    return 2;
  } catch (const InversionUnstable& e) {
    report("inversion_unstable", e);
    return 2;
  } catch (const SimulationOverrun& e) {
    report("simulation_overrun", e);
    return 2;
  } catch (const IoError& e) {
    report("io_error", e);
    return 3;
  } catch (const std::filesystem::filesystem_error& e) {
    report("io_error", e);
    return 3;
  } catch (const ParseError& e) {
    report("parse_error", e);
    return 1;
  } catch (const std::invalid_argument& e) {  // ValidationError, DomainError
    report("validation_error", e);
    return 1;
  }
}

}  // namespace standby
