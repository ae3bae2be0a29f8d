// contagion: command-line front end for the mean-field solver, the cascade
// simulator and the balance-sheet calibration.
//
// Exit codes: 0 success, 1 numerical or I/O failure, 2 usage error.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "contagion/calibration.hpp"
#include "contagion/cascade.hpp"
#include "contagion/distributions.hpp"
#include "contagion/grid.hpp"
#include "contagion/meanfield.hpp"
#include "contagion/netgen.hpp"
#include "contagion/numfmt.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace contagion;

namespace {

constexpr int kExitNumerical = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

std::string render_csv(const Table& t) {
  std::ostringstream os;
  for (std::size_t c = 0; c < t.columns.size(); ++c) os << (c ? "," : "") << t.columns[c];
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) os << (c ? "," : "") << format_double(row[c]);
    os << '\n';
  }
  return os.str();
}

std::string render_json(const Table& t) {
  json rows = json::array();
  for (const auto& row : t.rows) {
    json obj = json::object();
    for (std::size_t c = 0; c < row.size(); ++c) obj[t.columns[c]] = row[c];
    rows.push_back(obj);
  }
  return rows.dump(2) + "\n";
}

/// Writes to a temporary sibling and renames, so readers never see a partial file.
void write_atomic(const std::string& path, const std::string& content) {
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    if (!out.flush()) throw std::runtime_error("write failed for " + tmp.string());
  }
  fs::rename(tmp, target);
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string sidecar_path(const std::string& out) {
  fs::path p(out);
  return p.replace_extension(".json").string();
}

struct Output {
  std::string path;  // empty: stdout
  std::string format = "csv";

  void emit(const Table& t, const json& config) const {
    const std::string body = format == "json" ? render_json(t) : render_csv(t);
    if (path.empty()) {
      std::cout << body;
      return;
    }
    write_atomic(path, body);
    if (format == "csv") {
      json meta = config;
      meta["created"] = utc_timestamp();
      write_atomic(sidecar_path(path), meta.dump(2) + "\n");
    }
  }
};

LocationScaleDistribution parse_dist(const std::string& s) {
  try {
    return LocationScaleDistribution::parse(s);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

std::vector<double> parse_grid_arg(const std::string& s, const char* name) {
  try {
    return parse_grid(s);
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string(name) + ": " + e.what());
  }
}

json solution_json(const meanfield::FixedPointSolution& sol) {
  json roots = json::array();
  for (const auto& r : sol.roots) {
    roots.push_back({{"p", r.p}, {"stability", meanfield::to_string(r.stability)}, {"slope", r.slope}});
  }
  json j = {{"roots", roots}, {"regime", meanfield::to_string(sol.regime)}, {"b_critical", sol.b_critical}};
  j["x_extrema"] = sol.x_extrema ? json::array({sol.x_extrema->first, sol.x_extrema->second}) : json(nullptr);
  j["bounds"] = sol.bounds ? json::array({sol.bounds->first, sol.bounds->second}) : json(nullptr);
  return j;
}

// Options given in a --config JSON file are appended unless already on the command line.
std::vector<std::string> merge_config(std::vector<std::string> args) {
  for (std::size_t k = 0; k < args.size(); ++k) {
    std::string path;
    if (args[k] == "--config" && k + 1 < args.size()) {
      path = args[k + 1];
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(k), args.begin() + static_cast<std::ptrdiff_t>(k) + 2);
    } else if (args[k].rfind("--config=", 0) == 0) {
      path = args[k].substr(9);
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(k));
    } else {
      continue;
    }
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open config " + path);
    json cfg;
    try {
      cfg = json::parse(in);
    } catch (const json::exception& e) {
      throw UsageError("bad config " + path + ": " + e.what());
    }
    if (!cfg.is_object()) throw UsageError("config must be a JSON object");
    for (auto it = cfg.begin(); it != cfg.end(); ++it) {
      const std::string flag = "--" + it.key();
      bool present = false;
      for (const auto& a : args) present = present || a == flag || a.rfind(flag + "=", 0) == 0;
      if (present) continue;
      const std::string value = it->is_string() ? it->get<std::string>() : it->dump();
      args.push_back(flag + "=" + value);
    }
    break;
  }
  return args;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Interbank contagion: mean-field analysis, cascade simulation and calibration"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for all subcommands");

  Output output;
  std::uint64_t seed = 1;
  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--out", output.path, "Output path (default stdout)");
    cmd->add_option("--format", output.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  };

  // meanfield
  double mf_a = 0.0;
  double mf_b = 0.0;
  double mf_p0 = 1.0;
  std::string dist_spec = "normal";
  auto* cmd_mf = app.add_subcommand("meanfield", "Classify the fixed points of p = F(p) for (a, b)");
  cmd_mf->add_option("--a", mf_a, "Scaled capital shortfall a")->required();
  cmd_mf->add_option("--b", mf_b, "Scaled coupling b >= 0")->required();
  cmd_mf->add_option("--p0", mf_p0, "Initial surviving fraction for the iteration")->capture_default_str();
  cmd_mf->add_option("--dist", dist_spec, "normal or t:NU")->capture_default_str();
  cmd_mf->add_option("--out", output.path, "Output path (default stdout)");

  // hysteresis
  double hy_b = 7.0;
  double hy_amin = 0.0;
  double hy_amax = 7.0;
  std::size_t hy_steps = 701;
  auto* cmd_hy = app.add_subcommand("hysteresis", "Forward and backward equilibrium curves along a");
  cmd_hy->add_option("--b", hy_b, "Scaled coupling b")->capture_default_str();
  cmd_hy->add_option("--a-min", hy_amin)->capture_default_str();
  cmd_hy->add_option("--a-max", hy_amax)->capture_default_str();
  cmd_hy->add_option("--steps", hy_steps, "Grid points (>= 2)")->capture_default_str();
  cmd_hy->add_option("--dist", dist_spec)->capture_default_str();
  add_common(cmd_hy);

  // phase
  std::string ph_a = "-2:8:101";
  std::string ph_b = "0:15:76";
  double ph_p0 = 1.0;
  auto* cmd_ph = app.add_subcommand("phase", "Equilibrium p over an (a, b) grid");
  cmd_ph->add_option("--a", ph_a, "a grid, min:max:steps or list")->capture_default_str();
  cmd_ph->add_option("--b", ph_b, "b grid, min:max:steps or list")->capture_default_str();
  cmd_ph->add_option("--p0", ph_p0, "Initial surviving fraction (0 or 1)")->capture_default_str();
  cmd_ph->add_option("--dist", dist_spec)->capture_default_str();
  add_common(cmd_ph);

  // leverage
  std::string lv_sigma = "0.01,0.02,0.03,0.05";
  std::string lv_theta = "0.01:1:100";
  auto* cmd_lv = app.add_subcommand("leverage", "Minimum leverage versus interbank fraction theta");
  cmd_lv->add_option("--sigma-frac", lv_sigma, "sigma / mu_A values")->capture_default_str();
  cmd_lv->add_option("--theta", lv_theta, "theta grid")->capture_default_str();
  cmd_lv->add_option("--dist", dist_spec)->capture_default_str();
  add_common(cmd_lv);

  // simulate / sweep share the system description
  std::string network_spec = "er:0.1";
  cascade::BankParams bank;
  cascade::CascadeConfig cc;
  std::string recovery = "monotone";
  std::size_t trials = 100;
  std::string sweep_mu_l = "700:1200:51";
  double sweep_p0 = 1.0;
  auto add_system = [&](CLI::App* cmd) {
    cmd->add_option("--network", network_spec, "er:ALPHA | ws:C:BETA | cp:table2 | cp:sec54 | cp:CORE:ALPHA:LINKS | complete")
        ->capture_default_str();
    cmd->add_option("--banks", bank.banks, "Number of banks M")->capture_default_str();
    cmd->add_option("--mu-a", bank.mu_A)->capture_default_str();
    cmd->add_option("--sigma-a", bank.sigma_A)->capture_default_str();
    cmd->add_option("--sigma-l", bank.sigma_L)->capture_default_str();
    cmd->add_option("--dist", dist_spec)->capture_default_str();
    cmd->add_option("--theta", cc.theta, "Interbank fraction of assets")->capture_default_str();
    cmd->add_option("--q", cc.q, "Collateral recovery fraction in [0, 1]")->capture_default_str();
    cmd->add_option("--recovery", recovery)->check(CLI::IsMember({"monotone", "reversible"}))->capture_default_str();
    cmd->add_option("--max-rounds", cc.max_rounds)->capture_default_str();
    cmd->add_option("--trials", trials)->capture_default_str();
    cmd->add_option("--seed", seed)->capture_default_str();
    add_common(cmd);
  };
  auto* cmd_sim = app.add_subcommand("simulate", "Monte Carlo ensemble at one parameter point");
  cmd_sim->alias("mc");
  add_system(cmd_sim);
  cmd_sim->add_option("--mu-l", bank.mu_L)->capture_default_str();
  std::string summary_path;
  cmd_sim->add_option("--summary", summary_path, "JSON summary path (default: --out with .json)");

  auto* cmd_sw = app.add_subcommand("sweep", "Ensemble mean p along a mu_L sweep, with the mean-field prediction");
  add_system(cmd_sw);
  cmd_sw->add_option("--mu-l", sweep_mu_l, "mu_L grid")->capture_default_str();
  cmd_sw->add_option("--p0", sweep_p0, "Mean-field starting fraction")->capture_default_str();

  // netgen
  double ng_theta = 0.3;
  auto* cmd_ng = app.add_subcommand("netgen", "Generate one weighted exposure network as an edge list");
  cmd_ng->add_option("--network", network_spec)->capture_default_str();
  cmd_ng->add_option("--banks", bank.banks)->capture_default_str();
  cmd_ng->add_option("--mu-a", bank.mu_A)->capture_default_str();
  cmd_ng->add_option("--sigma-a", bank.sigma_A)->capture_default_str();
  cmd_ng->add_option("--dist", dist_spec)->capture_default_str();
  cmd_ng->add_option("--theta", ng_theta)->capture_default_str();
  cmd_ng->add_option("--seed", seed)->capture_default_str();
  cmd_ng->add_option("--out", output.path, "Edge list CSV path; the sidecar goes next to it")->required();

  // calibrate
  std::string cal_data;
  std::string cal_country = "UK";
  int cal_year = 2007;
  std::string cal_theta = "0,0.03,0.07,0.1,0.11,0.13,0.3,0.4,0.5";
  std::string cal_f = "0.01:1:100";
  double cal_p0 = 1.0;
  bool cal_overlay = false;
  std::string cal_summary;
  auto* cmd_cal = app.add_subcommand("calibrate", "Stability scan over (theta, f) from balance-sheet data");
  cmd_cal->add_option("--data", cal_data, "CSV bank_id,country,year,total_assets,tier1_capital")->required();
  cmd_cal->add_option("--country", cal_country)->capture_default_str();
  cmd_cal->add_option("--year", cal_year)->capture_default_str();
  cmd_cal->add_option("--theta", cal_theta, "theta values")->capture_default_str();
  cmd_cal->add_option("--f", cal_f, "f grid, sigma = f mu_E")->capture_default_str();
  cmd_cal->add_option("--p0", cal_p0)->capture_default_str();
  cmd_cal->add_option("--dist", dist_spec)->capture_default_str();
  cmd_cal->add_flag("--overlay", cal_overlay, "Trajectory overlay (single theta)");
  cmd_cal->add_option("--summary", cal_summary, "Write the summary JSON here");
  add_common(cmd_cal);

  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    args = merge_config(std::move(args));
    // CLI11 consumes the vector from the back.
    std::reverse(args.begin(), args.end());
    app.parse(std::move(args));
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    const LocationScaleDistribution dist = parse_dist(dist_spec);

    if (*cmd_mf) {
      const meanfield::MeanFieldParams params{mf_a, mf_b, dist};
      try {
        params.validate();
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
      if (!(mf_p0 >= 0.0 && mf_p0 <= 1.0)) throw UsageError("--p0 must lie in [0, 1]");
      const auto sol = meanfield::classify_fixed_points(params);
      const auto fp = meanfield::solve_fixed_point(params, mf_p0);
      json j = {{"config", {{"a", mf_a}, {"b", mf_b}, {"p0", mf_p0}, {"dist", dist.name()}}},
                {"solution", solution_json(sol)},
                {"fixed_point", {{"p", fp.p}, {"iterations", fp.iterations}}}};
      const std::string body = j.dump(2) + "\n";
      if (output.path.empty()) {
        std::cout << body;
      } else {
        write_atomic(output.path, body);
      }
      return 0;
    }

    if (*cmd_hy) {
      if (hy_steps < 2) throw UsageError("--steps must be >= 2");
      if (hy_b < 0) throw UsageError("b must be >= 0");
      if (!(hy_amax > hy_amin)) throw UsageError("--a-max must exceed --a-min");
      const auto curves = meanfield::hysteresis_sweep(hy_b, linspace(hy_amin, hy_amax, hy_steps), dist);
      Table t{{"a", "p_forward", "p_backward"}, {}};
      for (std::size_t i = 0; i < curves.a.size(); ++i) t.rows.push_back({curves.a[i], curves.forward[i], curves.backward[i]});
      output.emit(t, {{"command", "hysteresis"}, {"b", hy_b}, {"a_min", hy_amin}, {"a_max", hy_amax},
                      {"steps", hy_steps}, {"dist", dist.name()}});
      return 0;
    }

    if (*cmd_ph) {
      const auto a = parse_grid_arg(ph_a, "--a");
      const auto b = parse_grid_arg(ph_b, "--b");
      for (double x : b) {
        if (x < 0) throw UsageError("b must be >= 0");
      }
      if (!(ph_p0 >= 0.0 && ph_p0 <= 1.0)) throw UsageError("--p0 must lie in [0, 1]");
      const auto pd = meanfield::phase_diagram(a, b, ph_p0, dist);
      Table t{{"a", "b", "p"}, {}};
      for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j) t.rows.push_back({a[i], b[j], pd.at(i, j)});
      }
      output.emit(t, {{"command", "phase"}, {"a", ph_a}, {"b", ph_b}, {"p0", ph_p0}, {"dist", dist.name()}});
      return 0;
    }

    if (*cmd_lv) {
      const auto sig = parse_grid_arg(lv_sigma, "--sigma-frac");
      const auto th = parse_grid_arg(lv_theta, "--theta");
      Table t{{"sigma_frac", "theta", "theta_c", "gamma_min"}, {}};
      for (double s : sig) {
        if (!(s > 0)) throw UsageError("--sigma-frac values must be > 0");
        for (double x : th) {
          if (!(x > 0 && x <= 1)) throw UsageError("--theta values must lie in (0, 1]");
          t.rows.push_back({s, x, meanfield::critical_theta(s, dist), meanfield::leverage_min(x, s, dist)});
        }
      }
      output.emit(t, {{"command", "leverage"}, {"sigma_frac", lv_sigma}, {"theta", lv_theta}, {"dist", dist.name()}});
      return 0;
    }

    if (*cmd_sim || *cmd_sw || *cmd_ng) {
      bank.dist = dist;
      netgen::NetworkSpec spec;
      try {
        spec = netgen::NetworkSpec::parse(network_spec, bank.banks);
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
      if (!(bank.sigma_A > 0) || !(bank.sigma_L > 0)) throw UsageError("sigmas must be > 0");

      if (*cmd_ng) {
        if (!(ng_theta >= 0 && ng_theta <= 1)) throw UsageError("--theta must lie in [0, 1]");
        RngStream net_rng(seed, cascade::network_stream(0));
        RngStream asset_rng(seed, cascade::asset_stream(0));
        auto net = netgen::generate(spec, net_rng);
        std::vector<double> assets(bank.banks);
        for (auto& x : assets) x = dist.sample(bank.mu_A, bank.sigma_A, asset_rng);
        net.assign_loans(ng_theta, assets);
        std::ostringstream csv;
        network_io::write_edges_csv(net, csv);
        write_atomic(output.path, csv.str());
        write_atomic(sidecar_path(output.path), network_io::sidecar_json(net, seed));
        return 0;
      }

      cc.recovery = cascade::parse_recovery(recovery);
      try {
        cc.validate();
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
      if (trials < 1) throw UsageError("--trials must be >= 1");
      json config = {{"network", spec.describe()}, {"banks", bank.banks},   {"mu_A", bank.mu_A},
                     {"sigma_A", bank.sigma_A},    {"sigma_L", bank.sigma_L}, {"dist", dist.name()},
                     {"theta", cc.theta},          {"q", cc.q},             {"recovery", recovery},
                     {"max_rounds", cc.max_rounds}, {"trials", trials}};

      if (*cmd_sim) {
        config["mu_L"] = bank.mu_L;
        const auto stats = cascade::monte_carlo(spec, bank, cc, trials, seed);
        Table t{{"trial", "p_final", "rounds"}, {}};
        for (std::size_t k = 0; k < stats.p.size(); ++k) {
          t.rows.push_back({static_cast<double>(k), stats.p[k], static_cast<double>(stats.rounds[k])});
        }
        const std::string body = output.format == "json" ? render_json(t) : render_csv(t);
        json summary = {{"mean_p", stats.mean_p},
                        {"std_p", stats.std_p},
                        {"histogram", stats.histogram},
                        {"histogram_edges", {0.0, 1.0}},
                        {"round_limit_hits", stats.round_limit_hits},
                        {"config", config},
                        {"seed", seed},
                        {"created", utc_timestamp()}};
        if (output.path.empty()) {
          std::cout << body;
        } else {
          write_atomic(output.path, body);
        }
        std::string spath = summary_path;
        if (spath.empty() && !output.path.empty()) spath = sidecar_path(output.path);
        if (!spath.empty()) write_atomic(spath, summary.dump(2) + "\n");
        return 0;
      }

      // sweep
      const auto mu_l = parse_grid_arg(sweep_mu_l, "--mu-l");
      config["mu_L"] = sweep_mu_l;
      config["p0"] = sweep_p0;
      config["seed"] = seed;
      const double sigma = std::hypot(bank.sigma_A, bank.sigma_L);
      Table t{{"mu_L", "x", "theta", "q", "mean_p", "std_p", "p_meanfield", "abs_error", "round_limit_hits"}, {}};
      for (double m : mu_l) {
        cascade::BankParams bp = bank;
        bp.mu_L = m;
        const auto stats = cascade::monte_carlo(spec, bp, cc, trials, seed);
        const double zJ = cc.theta * bp.mu_A;
        const auto params = meanfield::collateral_transform(bp.mu_L, bp.mu_A - zJ, zJ, sigma, cc.q, dist);
        const double pmf = meanfield::solve_fixed_point(params, sweep_p0).p;
        t.rows.push_back({m, (m - bp.mu_A) / sigma, cc.theta, cc.q, stats.mean_p, stats.std_p, pmf,
                          std::abs(stats.mean_p - pmf), static_cast<double>(stats.round_limit_hits)});
      }
      output.emit(t, config);
      return 0;
    }

    if (*cmd_cal) {
      const auto records = calibration::load_balance_sheets_file(cal_data);
      const auto summary = calibration::summarize(records, cal_country, cal_year);
      const auto thetas = parse_grid_arg(cal_theta, "--theta");
      const auto fs_grid = parse_grid_arg(cal_f, "--f");
      for (double f : fs_grid) {
        if (!(f > 0 && f <= 1)) throw UsageError("--f values must lie in (0, 1]");
      }
      for (double th : thetas) {
        if (!(th >= 0 && th <= 1)) throw UsageError("--theta values must lie in [0, 1]");
      }
      if (cal_overlay && thetas.size() != 1) throw UsageError("--overlay needs exactly one --theta");
      const auto points = cal_overlay ? calibration::trajectory_overlay(summary, thetas[0], fs_grid, dist, cal_p0)
                                      : calibration::stability_scan(summary, thetas, fs_grid, dist, cal_p0);
      Table t{{"theta", "f", "a", "b", "p"}, {}};
      for (const auto& pt : points) t.rows.push_back({pt.theta, pt.f, pt.a, pt.b, pt.p});
      const json sj = json::parse(calibration::to_json(summary));
      if (!cal_summary.empty()) write_atomic(cal_summary, sj.dump(2) + "\n");
      output.emit(t, {{"command", cal_overlay ? "calibrate-overlay" : "calibrate"},
                      {"data", cal_data}, {"country", cal_country}, {"year", cal_year},
                      {"theta", cal_theta}, {"f", cal_f}, {"p0", cal_p0}, {"dist", dist.name()},
                      {"summary", sj}});
      return 0;
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const meanfield::NonConvergence& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
  return 0;
}
