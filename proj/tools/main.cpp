// oatsq: spin-squeezing dynamics of the dephased one-axis-twisting model.
//
// Subcommands: evolve, minimize, sweep-theta, scaling, regime, oracle-check.
// Tabular output is CSV (LF, '.' decimal, 17 significant digits, lossless
// binary64 round-trip); records are JSON with stable key order.  Exit codes:
// 0 success, 1 check failure, 2 validation error, 3 I/O error.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "oatsq/crosscheck.hpp"
#include "oatsq/oatsq.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace oatsq;

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitValidation = 2;
constexpr int kExitIo = 3;

struct IoFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// 17 significant digits: enough to round-trip any binary64 exactly.
std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct RunConfig {
  double spin = 1000.0;
  double gamma = 0.0;
  double theta0 = 0.5 * std::numbers::pi;
  double phi0 = 0.0;

  double tau_min = 1e-4;
  double tau_max = 0.1;
  int tau_points = 200;
  bool log_grid = false;

  int theta_points = 31;
  std::vector<double> gammas{0.0};

  std::string mode = "spins";
  double spin_min = 1e3;
  double spin_max = 1e6;
  int spin_points = 8;
  double ratio_min = -1.0;
  double ratio_max = 1.0;
  int ratio_points = 11;

  int draws = 200;
  int ode_draws = 50;
  std::uint64_t seed = 42;
  double tol_dense = 1e-10;
  double tol_ode = 1e-6;
  double tol_scan = 1e-9;
  int dense_cap = kDefaultDenseCap;
  std::string dump_state;
  std::string dump_format = "text";

  std::string out;  // empty: stdout
  std::string format = "csv";

  ModelParams params() const { return {spin, gamma}; }
  InitialState init() const { return InitialState::make(theta0, phi0); }
};

class OutputFile {
 public:
  explicit OutputFile(const std::string& path) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary);
      if (!file_) throw IoFailure("cannot open output file: " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }
  void finish() {
    stream().flush();
    if (file_.is_open() && !file_) throw IoFailure("write failed");
  }

 private:
  std::ofstream file_;
};

void write_json_file(const std::string& path, const json& doc) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw IoFailure("cannot open output file: " + path);
  file << doc.dump(2) << "\n";
  if (!file) throw IoFailure("write failed: " + path);
}

std::vector<double> make_grid(double lo, double hi, int points,
                              bool log_grid) {
  if (points < 1 || !(hi >= lo) || (log_grid && !(lo > 0.0))) {
    throw Error(ErrorCode::EmptyGrid, "tau_grid", "bad grid specification");
  }
  std::vector<double> grid(static_cast<size_t>(points));
  if (points == 1) {
    grid[0] = lo;
    return grid;
  }
  for (int i = 0; i < points; ++i) {
    const double t = static_cast<double>(i) / (points - 1);
    grid[static_cast<size_t>(i)] =
        log_grid ? lo * std::pow(hi / lo, t) : lo + (hi - lo) * t;
  }
  return grid;
}

json inputs_json(const RunConfig& config) {
  return json{{"spin", config.spin},
              {"gamma", config.gamma},
              {"theta0", config.theta0},
              {"phi0", config.phi0}};
}

json regime_json(const Regime& regime, double spin) {
  return json{{"kind", to_string(regime.kind)},
              {"lower_exponent", regime.lower_exponent},
              {"upper_exponent", regime.upper_exponent},
              {"gamma_lower", std::pow(spin, regime.lower_exponent)},
              {"gamma_upper", std::pow(spin, regime.upper_exponent)}};
}

// ---------------------------------------------------------------------------
// evolve: metrics on a tau grid (the squeezing-vs-time curves).

int cmd_evolve(const RunConfig& config) {
  validate_params(config.params(), config.init());
  const auto grid = make_grid(config.tau_min, config.tau_max,
                              config.tau_points, config.log_grid);
  const InitialState init = config.init();
  const auto rows = sweep_tau(config.params(), init, grid);

  const auto short_time = [&](double tau) -> std::optional<double> {
    if (init.sin_theta0() == 0.0 || !(tau > 0.0)) return std::nullopt;
    return xi2_short_time(config.spin, init, config.gamma, tau);
  };

  OutputFile out(config.out);
  if (config.format == "json") {
    json rows_json = json::array();
    for (const auto& row : rows) {
      const auto obs = full_observables(config.params(), init, row.tau);
      const auto splus = obs.splus_c();
      const auto approx = short_time(row.tau);
      rows_json.push_back(
          {{"tau", row.tau},
           {"xi2", row.valid ? json(row.metrics.xi2) : json()},
           {"zeta2", row.valid ? json(row.metrics.zeta2) : json()},
           {"zetaS2", row.valid ? json(row.metrics.zeta_s2) : json()},
           {"V_minus", row.valid ? json(row.metrics.v_minus) : json()},
           {"V_plus", row.valid ? json(row.metrics.v_plus) : json()},
           {"Sz", obs.sz},
           {"Re_Splus", splus.real()},
           {"Im_Splus", splus.imag()},
           {"xi2_shorttime", approx ? json(*approx) : json()},
           {"flag", row.valid ? 0 : 1}});
    }
    out.stream() << json{{"command", "evolve"},
                         {"inputs", inputs_json(config)},
                         {"rows", rows_json}}
                        .dump(2)
                 << "\n";
  } else {
    out.stream() << "tau,xi2,zeta2,zetaS2,V_minus,V_plus,Sz,Re_Splus,"
                    "Im_Splus,xi2_shorttime,flag\n";
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (const auto& row : rows) {
      const auto obs = full_observables(config.params(), init, row.tau);
      const auto splus = obs.splus_c();
      const auto approx = short_time(row.tau);
      const double xi2 = row.valid ? row.metrics.xi2 : nan;
      const double zeta2 = row.valid ? row.metrics.zeta2 : nan;
      const double zeta_s2 = row.valid ? row.metrics.zeta_s2 : nan;
      const double v_minus = row.valid ? row.metrics.v_minus : nan;
      const double v_plus = row.valid ? row.metrics.v_plus : nan;
      out.stream() << fmt(row.tau) << ',' << fmt(xi2) << ',' << fmt(zeta2)
                   << ',' << fmt(zeta_s2) << ',' << fmt(v_minus) << ','
                   << fmt(v_plus) << ',' << fmt(obs.sz) << ','
                   << fmt(splus.real()) << ',' << fmt(splus.imag()) << ','
                   << fmt(approx ? *approx : nan) << ','
                   << (row.valid ? '0' : '1') << '\n';
    }
  }
  out.finish();
  return kExitOk;
}

// ---------------------------------------------------------------------------
// minimize: exact optimum with analytic predictions and deviations.

json prediction_pair_json(double tau_exact, double xi2_exact, double tau_a,
                          double xi2_a) {
  return json{{"tau_min", tau_a},
              {"xi2_min", xi2_a},
              {"tau_min_rel_dev", std::abs(tau_a - tau_exact) / tau_exact},
              {"xi2_min_rel_dev", std::abs(xi2_a - xi2_exact) / xi2_exact}};
}

int cmd_minimize(const RunConfig& config) {
  validate_params(config.params(), config.init());
  const InitialState init = config.init();
  const auto result = minimize_xi2(config.params(), init);

  json doc{{"command", "minimize"}, {"inputs", inputs_json(config)}};
  doc["exact"] = {{"tau_min", result.tau_min},
                  {"xi2_min", result.xi2_min},
                  {"evaluations", result.evaluations},
                  {"bracket_lo", result.bracket_lo},
                  {"bracket_hi", result.bracket_hi},
                  {"converged", result.converged}};

  json analytic;
  analytic["weak"] =
      prediction_pair_json(result.tau_min, result.xi2_min,
                           tau_min_weak(config.spin, init),
                           xi2_min_weak(config.spin, init));
  if (config.gamma > 0.0) {
    analytic["moderate"] = prediction_pair_json(
        result.tau_min, result.xi2_min,
        tau_min_moderate(config.spin, init, config.gamma),
        xi2_min_moderate(config.spin, init, config.gamma));
  } else {
    analytic["moderate"] = nullptr;
  }
  analytic["regime"] = regime_json(
      classify_regime(config.spin, init, config.gamma), config.spin);
  doc["analytic"] = analytic;

  OutputFile out(config.out);
  out.stream() << doc.dump(2) << "\n";
  out.finish();
  return kExitOk;
}

// ---------------------------------------------------------------------------
// sweep-theta: optimum against the initial polar angle, per gamma.

int cmd_sweep_theta(const RunConfig& config) {
  validate_params(ModelParams{config.spin, 0.0}, config.init());
  if (config.theta_points < 1) {
    throw Error(ErrorCode::EmptyGrid, "theta-points", "grid must be nonempty");
  }
  std::vector<double> thetas(static_cast<size_t>(config.theta_points));
  for (int k = 0; k < config.theta_points; ++k) {
    thetas[static_cast<size_t>(k)] =
        std::numbers::pi * (k + 1) / (config.theta_points + 1);
  }

  OutputFile out(config.out);
  out.stream() << "theta0,gamma,tau_min,xi2_min,xi2_min_analytic,regime\n";
  for (const double gamma : config.gammas) {
    if (gamma < 0.0) {
      throw Error(ErrorCode::NegativeGamma, "gammas", "gamma must be >= 0");
    }
    const auto results = sweep_theta0(config.spin, thetas, gamma, config.phi0);
    for (const auto& [theta0, result] : results) {
      const InitialState init = InitialState::make(theta0, config.phi0);
      const auto prediction =
          predict_optimum(ModelParams{config.spin, gamma}, init);
      out.stream() << fmt(theta0) << ',' << fmt(gamma) << ','
                   << fmt(result.tau_min) << ',' << fmt(result.xi2_min) << ','
                   << fmt(prediction.xi2_min) << ','
                   << to_string(prediction.regime.kind) << '\n';
    }
  }
  out.finish();
  return kExitOk;
}

// ---------------------------------------------------------------------------
// scaling: optimum vs S at fixed gamma (with a power-law fit), or vs the
// gamma-to-S log ratio at fixed S.

double round_half_integer(double spin) { return 0.5 * std::round(2.0 * spin); }

int cmd_scaling(const RunConfig& config) {
  const InitialState init = config.init();
  OutputFile out(config.out);
  if (config.mode == "spins") {
    if (config.spin_points < 3) {
      throw Error(ErrorCode::NonpositiveData, "spin-points",
                  "need at least 3 spin values");
    }
    std::vector<double> spins(static_cast<size_t>(config.spin_points));
    for (int i = 0; i < config.spin_points; ++i) {
      const double t = static_cast<double>(i) / (config.spin_points - 1);
      spins[static_cast<size_t>(i)] = round_half_integer(
          config.spin_min * std::pow(config.spin_max / config.spin_min, t));
    }
    out.stream() << "S,xi2_min,xi2_min_analytic\n";
    std::vector<std::pair<double, double>> points;
    for (const double spin : spins) {
      const ModelParams params{spin, config.gamma};
      const auto result = minimize_xi2(params, init);
      const auto prediction = predict_optimum(params, init);
      points.emplace_back(spin, result.xi2_min);
      out.stream() << fmt(spin) << ',' << fmt(result.xi2_min) << ','
                   << fmt(prediction.xi2_min) << '\n';
    }
    const PowerLawFit fit = fit_power_law(points);
    const json footer{{"exponent", fit.exponent},
                      {"log_prefactor", fit.log_prefactor},
                      {"r_squared", fit.r_squared},
                      {"n_points", fit.points.size()},
                      {"gamma", config.gamma}};
    if (!config.out.empty()) {
      write_json_file(config.out + ".fit.json", footer);
    } else {
      out.stream() << "# fit: " << footer.dump() << "\n";
    }
  } else if (config.mode == "gamma-ratio") {
    if (config.ratio_points < 1) {
      throw Error(ErrorCode::EmptyGrid, "ratio-points", "grid must be nonempty");
    }
    const double log_spin = std::log(config.spin);
    out.stream() << "log_gamma_over_log_S,xi2_min_exact,xi2_min_weak,"
                    "xi2_min_moderate\n";
    for (int i = 0; i < config.ratio_points; ++i) {
      const double t =
          config.ratio_points == 1
              ? 0.0
              : static_cast<double>(i) / (config.ratio_points - 1);
      const double ratio =
          config.ratio_min + (config.ratio_max - config.ratio_min) * t;
      const double gamma = std::exp(ratio * log_spin);
      const auto result = minimize_xi2(ModelParams{config.spin, gamma}, init);
      out.stream() << fmt(ratio) << ',' << fmt(result.xi2_min) << ','
                   << fmt(xi2_min_weak(config.spin, init)) << ','
                   << fmt(xi2_min_moderate(config.spin, init, gamma)) << '\n';
    }
  } else {
    throw Error(ErrorCode::EmptyGrid, "mode",
                "mode must be 'spins' or 'gamma-ratio'");
  }
  out.finish();
  return kExitOk;
}

// ---------------------------------------------------------------------------
// regime: classification record.

int cmd_regime(const RunConfig& config) {
  validate_params(config.params(), config.init());
  const InitialState init = config.init();
  json doc{{"command", "regime"}, {"inputs", inputs_json(config)}};
  doc["regime"] = regime_json(
      classify_regime(config.spin, init, config.gamma), config.spin);
  if (init.sin_theta0() > 0.0) {
    const auto prediction = predict_optimum(config.params(), init);
    doc["analytic"] = {{"tau_min", prediction.tau_min},
                       {"xi2_min", prediction.xi2_min},
                       {"formula", prediction.formula}};
  } else {
    doc["analytic"] = nullptr;
  }
  OutputFile out(config.out);
  out.stream() << doc.dump(2) << "\n";
  out.finish();
  return kExitOk;
}

// ---------------------------------------------------------------------------
// oracle-check: seeded equivalence run, exit 1 on threshold violation.

json draw_json(const DrawParams& draw) {
  return json{{"spin", draw.spin},
              {"theta0", draw.theta0},
              {"phi0", draw.phi0},
              {"gamma", draw.gamma},
              {"tau", draw.tau}};
}

int cmd_oracle_check(const RunConfig& config) {
  if (!is_half_integer_spin(config.spin)) {
    throw Error(ErrorCode::NonHalfIntegerSpin, "spin",
                "oracle-check needs a half-integer spin");
  }
  if (2.0 * config.spin + 1.0 > config.dense_cap) {
    throw Error(ErrorCode::SpinTooLargeForDense, "spin",
                "spin exceeds the dense cap");
  }

  CrossCheckConfig check;
  check.draws = config.draws;
  check.seed = config.seed;
  check.spin = config.spin;
  check.ode_draws = config.ode_draws;
  check.ode_spin_max = std::min(config.spin, 8.0);
  check.tol_dense = config.tol_dense;
  check.tol_ode = config.tol_ode;
  check.tol_scan = config.tol_scan;
  check.dense_cap = config.dense_cap;
  const CrossCheckReport report = run_cross_check(check);

  if (!config.dump_state.empty()) {
    // Debug dump of the worst dense draw's evolved state.
    const DrawParams& w = report.worst_dense;
    const DenseState state =
        evolve_closed(w.spin, InitialState::make(w.theta0, w.phi0), w.tau,
                      w.gamma, config.dense_cap);
    std::ofstream dump(config.dump_state, std::ios::binary);
    if (!dump) throw IoFailure("cannot open dump file: " + config.dump_state);
    if (config.dump_format == "binary") {
      write_state_binary(state, dump);
    } else {
      write_state_text(state, dump);
    }
  }

  const bool pass = report.passed(check);
  json doc{{"command", "oracle-check"},
           {"draws", report.draws},
           {"ode_draws", report.ode_draws},
           {"seed", config.seed},
           {"max_rel_dev",
            {{"Sz", report.max_dev_sz},
             {"Sz2", report.max_dev_sz2},
             {"Splus", report.max_dev_splus},
             {"Splus2", report.max_dev_splus2},
             {"SplusZ", report.max_dev_splus_z}}},
           {"max_abs_dev_xi2_scan", report.max_dev_xi2_scan},
           {"max_abs_dev_ode", report.max_dev_ode},
           {"thresholds",
            {{"dense", check.tol_dense},
             {"scan", check.tol_scan},
             {"ode", check.tol_ode}}},
           {"pass", pass}};
  if (!pass) {
    doc["worst_draws"] = {{"dense", draw_json(report.worst_dense)},
                          {"scan", draw_json(report.worst_scan)},
                          {"ode", draw_json(report.worst_ode)}};
  }

  OutputFile out(config.out);
  out.stream() << doc.dump(2) << "\n";
  out.finish();
  return pass ? kExitOk : kExitCheckFailed;
}

// ---------------------------------------------------------------------------
// Config file + flag plumbing.

void apply_config_file(const std::string& path, RunConfig& config) {
  std::ifstream file(path);
  if (!file) throw IoFailure("cannot open config file: " + path);
  json doc;
  try {
    doc = json::parse(file);
  } catch (const json::parse_error& err) {
    throw Error(ErrorCode::EmptyGrid, "config",
                std::string("config parse error: ") + err.what());
  }

  const auto get = [&doc](const char* key, auto& target) {
    if (doc.contains(key)) {
      target = doc.at(key).template get<std::decay_t<decltype(target)>>();
    }
  };
  get("spin", config.spin);
  get("gamma", config.gamma);
  get("theta0", config.theta0);
  get("phi0", config.phi0);
  get("tau-min", config.tau_min);
  get("tau-max", config.tau_max);
  get("tau-points", config.tau_points);
  get("log", config.log_grid);
  get("theta-points", config.theta_points);
  get("gammas", config.gammas);
  get("mode", config.mode);
  get("spin-min", config.spin_min);
  get("spin-max", config.spin_max);
  get("spin-points", config.spin_points);
  get("ratio-min", config.ratio_min);
  get("ratio-max", config.ratio_max);
  get("ratio-points", config.ratio_points);
  get("draws", config.draws);
  get("ode-draws", config.ode_draws);
  get("seed", config.seed);
  get("tol-dense", config.tol_dense);
  get("tol-ode", config.tol_ode);
  get("tol-scan", config.tol_scan);
  get("dense-cap", config.dense_cap);
  get("out", config.out);
  get("format", config.format);
}

void emit_error(const char* code, const std::string& field,
                const std::string& message) {
  std::cerr << json{{"error",
                     {{"code", code}, {"field", field}, {"message", message}}}}
                   .dump()
            << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig config;

  // The config file provides defaults; explicitly passed flags override it,
  // so it is applied before CLI11 parses the command line.
  for (int i = 1; i + 1 < argc; ++i) {
    if (std::string_view(argv[i]) == "--config") {
      try {
        apply_config_file(argv[i + 1], config);
      } catch (const IoFailure& err) {
        emit_error("IoError", "config", err.what());
        return kExitIo;
      } catch (const Error& err) {
        emit_error(to_string(err.code()), err.field(), err.what());
        return kExitValidation;
      } catch (const json::exception& err) {
        emit_error("ConfigError", "config", err.what());
        return kExitValidation;
      }
    }
  }

  CLI::App app{"Spin squeezing of the one-axis-twisting model with "
               "collective phase dephasing"};
  app.require_subcommand(1);
  std::string config_path;

  const auto add_common_flags = [&](CLI::App* cmd) {
    cmd->add_option("--spin,-S", config.spin, "total spin S = N/2");
    cmd->add_option("--gamma,-g", config.gamma, "dephasing rate gamma");
    cmd->add_option("--theta0", config.theta0, "initial polar angle");
    cmd->add_option("--phi0", config.phi0, "initial azimuth");
    cmd->add_option("--out,-o", config.out, "output path (default stdout)");
    cmd->add_option("--format", config.format, "csv | json")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--seed", config.seed, "seed for randomized draws");
    cmd->add_option("--config", config_path, "JSON config file");
  };

  CLI::App* evolve = app.add_subcommand("evolve", "metrics on a tau grid");
  add_common_flags(evolve);
  evolve->add_option("--tau-min", config.tau_min, "grid start");
  evolve->add_option("--tau-max", config.tau_max, "grid end");
  evolve->add_option("--tau-points", config.tau_points, "grid size");
  evolve->add_flag("--log", config.log_grid, "log-spaced grid");

  CLI::App* minimize = app.add_subcommand("minimize", "exact optimal time");
  add_common_flags(minimize);

  CLI::App* sweep_theta =
      app.add_subcommand("sweep-theta", "optimum vs initial polar angle");
  add_common_flags(sweep_theta);
  sweep_theta->add_option("--theta-points", config.theta_points,
                          "interior grid size on (0, pi)");
  sweep_theta
      ->add_option("--gammas", config.gammas, "comma-separated gamma list")
      ->delimiter(',');

  CLI::App* scaling = app.add_subcommand("scaling", "scaling sweeps");
  add_common_flags(scaling);
  scaling->add_option("--mode", config.mode, "spins | gamma-ratio")
      ->check(CLI::IsMember({"spins", "gamma-ratio"}));
  scaling->add_option("--spin-min", config.spin_min, "smallest spin");
  scaling->add_option("--spin-max", config.spin_max, "largest spin");
  scaling->add_option("--spin-points", config.spin_points, "spin grid size");
  scaling->add_option("--ratio-min", config.ratio_min, "smallest ln g/ln S");
  scaling->add_option("--ratio-max", config.ratio_max, "largest ln g/ln S");
  scaling->add_option("--ratio-points", config.ratio_points,
                      "ratio grid size");

  CLI::App* regime = app.add_subcommand("regime", "dephasing regime record");
  add_common_flags(regime);

  CLI::App* oracle_check = app.add_subcommand(
      "oracle-check", "randomized closed-form vs brute-force equivalence");
  add_common_flags(oracle_check);
  oracle_check->add_option("--draws", config.draws, "number of random draws");
  oracle_check->add_option("--ode-draws", config.ode_draws,
                           "draws cross-checked against RK4 (-1: all)");
  oracle_check->add_option("--tol-dense", config.tol_dense,
                           "relative threshold, closed vs dense");
  oracle_check->add_option("--tol-ode", config.tol_ode,
                           "elementwise threshold, closed vs RK4");
  oracle_check->add_option("--tol-scan", config.tol_scan,
                           "absolute threshold, xi^2 vs psi-scan");
  oracle_check->add_option("--dense-cap", config.dense_cap,
                           "largest allowed 2S+1");
  oracle_check->add_option("--dump-state", config.dump_state,
                           "debug: dump the worst draw's density matrix");
  oracle_check
      ->add_option("--dump-format", config.dump_format, "text | binary")
      ->check(CLI::IsMember({"text", "binary"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    if (err.get_exit_code() == 0) return app.exit(err);  // --help
    emit_error("UsageError", "argv", err.what());
    return kExitValidation;
  }

  try {
    if (evolve->parsed()) return cmd_evolve(config);
    if (minimize->parsed()) return cmd_minimize(config);
    if (sweep_theta->parsed()) return cmd_sweep_theta(config);
    if (scaling->parsed()) return cmd_scaling(config);
    if (regime->parsed()) return cmd_regime(config);
    if (oracle_check->parsed()) return cmd_oracle_check(config);
  } catch (const Error& err) {
    emit_error(to_string(err.code()), err.field(), err.what());
    return kExitValidation;
  } catch (const IoFailure& err) {
    emit_error("IoError", "out", err.what());
    return kExitIo;
  } catch (const std::exception& err) {
    emit_error("InternalError", "", err.what());
    return kExitValidation;
  }
  return kExitOk;
}
