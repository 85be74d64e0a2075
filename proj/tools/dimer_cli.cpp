// Command-line front end: steady states, stability, spectra, entanglement
// criteria, stochastic validation runs, figure presets and parameter sweeps.

#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dimer/dimer.hpp"

namespace {

using dimer::Band;
using dimer::ModelParams;
using dimer::Table;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitUnstable = 2;

struct CommonOpts {
  double kappa = 0.01;
  double gamma_a = 1.0;
  double gamma_b = 1.0;
  double ja = 0.0, jb = 0.0, da = 0.0, db = 0.0;
  double eps1 = 0.0, eps2 = 0.0;
  double eps_ratio = -1.0;  // overrides eps1/eps2 when >= 0
  bool uncoupled = false;
  double omega_min = -20.0, omega_max = 20.0;
  int n_omega = 801;
  double theta_deg = 0.0;
  bool optimize_theta = false;
  std::string out;
  std::string format = "csv";
  std::uint64_t seed = 42;

  ModelParams params() const {
    ModelParams p;
    p.kappa = kappa;
    p.gamma_a = gamma_a;
    p.gamma_b = gamma_b;
    p.j_a = uncoupled ? 0.0 : ja;
    p.j_b = uncoupled ? 0.0 : jb;
    p.delta_a = uncoupled ? 0.0 : da;
    p.delta_b = uncoupled ? 0.0 : db;
    if (eps_ratio >= 0.0) {
      const double eps = eps_ratio * dimer::critical_pump(p);
      p.eps1 = p.eps2 = eps;
    } else {
      p.eps1 = eps1;
      p.eps2 = eps2;
    }
    p.validate();
    return p;
  }

  dimer::SpectrumGrid grid() const {
    if (n_omega < 1) throw dimer::PreconditionViolation("n-omega must be >= 1");
    return dimer::SpectrumGrid::linspace(omega_min, omega_max, n_omega);
  }

  double theta() const { return theta_deg * std::numbers::pi / 180.0; }
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--kappa", o.kappa, "effective nonlinearity");
  cmd->add_option("--gamma-a", o.gamma_a, "fundamental damping rate");
  cmd->add_option("--gamma-b", o.gamma_b, "harmonic damping rate");
  cmd->add_option("--ja", o.ja, "evanescent coupling, fundamental");
  cmd->add_option("--jb", o.jb, "evanescent coupling, harmonic");
  cmd->add_option("--da", o.da, "detuning, fundamental");
  cmd->add_option("--db", o.db, "detuning, harmonic");
  cmd->add_option("--eps1", o.eps1, "pump amplitude, waveguide 1");
  cmd->add_option("--eps2", o.eps2, "pump amplitude, waveguide 2");
  cmd->add_option("--eps-ratio", o.eps_ratio,
                  "set both pumps to this fraction of the critical pump");
  cmd->add_flag("--uncoupled", o.uncoupled, "zero all couplings and detunings");
  cmd->add_option("--omega-min", o.omega_min, "frequency grid start");
  cmd->add_option("--omega-max", o.omega_max, "frequency grid end");
  cmd->add_option("--n-omega", o.n_omega, "frequency grid points");
  cmd->add_option("--theta", o.theta_deg, "quadrature angle in degrees");
  cmd->add_flag("--optimize-theta", o.optimize_theta,
                "optimize the quadrature angle instead of using --theta");
  cmd->add_option("--out", o.out, "output file (default: stdout)");
  cmd->add_option("--format", o.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--seed", o.seed, "stochastic ensemble seed");
}

void emit(const Table& t, const CommonOpts& o) {
  std::ostringstream body;
  if (o.format == "json") {
    nlohmann::json j;
    j["columns"] = t.columns;
    j["rows"] = t.rows;
    body << j.dump(2) << "\n";
  } else {
    char buf[64];
    for (size_t i = 0; i < t.columns.size(); ++i)
      body << (i ? "," : "") << t.columns[i];
    body << "\n";
    for (const auto& row : t.rows) {
      for (size_t i = 0; i < row.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g", row[i]);
        body << (i ? "," : "") << buf;
      }
      body << "\n";
    }
  }
  if (o.out.empty()) {
    std::cout << body.str();
  } else {
    std::ofstream f(o.out);
    if (!f) throw std::runtime_error("cannot open output file " + o.out);
    f << body.str();
  }
}

bool symmetric_detuned(const ModelParams& p) {
  return p.delta_a == p.j_a && p.delta_b == p.j_b && p.eps1 == p.eps2 &&
         p.eps1.imag() == 0.0 && p.eps1.real() >= 0.0;
}

int cmd_steady(const CommonOpts& o) {
  const ModelParams p = o.params();
  dimer::PhaseSpaceState ss;
  try {
    ss = dimer::steady_state_numeric(p);
  } catch (const dimer::Unstable& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUnstable;
  } catch (const dimer::NonConvergence& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUnstable;
  }
  Table t;
  t.columns = {"mode", "re", "im"};
  const dimer::Vec8c v = ss.vec();
  for (int i = 0; i < 8; ++i)
    t.rows.push_back({double(i), v(i).real(), v(i).imag()});
  emit(t, o);
  return kExitOk;
}

int cmd_stability(const CommonOpts& o) {
  const ModelParams p = o.params();
  dimer::LinearizedSystem sys;
  try {
    if (symmetric_detuned(p)) {
      sys = dimer::build_pm_system(p, dimer::steady_state_symmetric(p));
    } else {
      sys = dimer::build_drift_full(p, dimer::steady_state_numeric(p));
    }
  } catch (const std::exception& e) {
    std::cerr << "error: unstable/self-pulsing: steady state not reachable ("
              << e.what() << ")\n";
    return kExitUnstable;
  }
  const auto rep = dimer::classify_stability(sys);
  Table t;
  t.columns = {"index", "re", "im", "stable", "self_pulsing", "margin"};
  for (int i = 0; i < 8; ++i)
    t.rows.push_back({double(i), rep.eigenvalues[i].real(),
                      rep.eigenvalues[i].imag(), double(rep.stable),
                      double(rep.self_pulsing), rep.margin});
  emit(t, o);
  if (!rep.stable) {
    std::cerr << "error: unstable/self-pulsing operating point\n";
    return kExitUnstable;
  }
  return kExitOk;
}

int cmd_spectrum(const CommonOpts& o) {
  const ModelParams p = o.params();
  const auto ss = dimer::steady_state_numeric(p);
  const auto sys = dimer::build_drift_full(p, ss);
  if (!dimer::classify_stability(sys).stable) {
    std::cerr << "error: unstable/self-pulsing operating point\n";
    return kExitUnstable;
  }
  double th_f = o.theta(), th_h = o.theta();
  if (o.optimize_theta) {
    th_f = dimer::optimize_angle(sys, 0.0, dimer::AngleObjective::SingleModeV,
                                 Band::Fundamental, p)
               .first;
    th_h = dimer::optimize_angle(sys, 0.0, dimer::AngleObjective::SingleModeV,
                                 Band::Harmonic, p)
               .first;
  }
  Table t;
  t.columns = {"omega", "theta_fund", "v_fund", "theta_harm", "v_harm"};
  for (double w : o.grid().omegas) {
    const auto sm = dimer::intracavity_spectrum(sys, w);
    t.rows.push_back(
        {w, th_f,
         dimer::output_quadrature_variance(
             sm, {Band::Fundamental, dimer::ModeIndex::One, th_f}, p),
         th_h,
         dimer::output_quadrature_variance(
             sm, {Band::Harmonic, dimer::ModeIndex::One, th_h}, p)});
  }
  emit(t, o);
  return kExitOk;
}

int cmd_criteria(const CommonOpts& o) {
  const ModelParams p = o.params();
  const auto ss = dimer::steady_state_numeric(p);
  const auto sys = dimer::build_drift_full(p, ss);
  if (!dimer::classify_stability(sys).stable) {
    std::cerr << "error: unstable/self-pulsing operating point\n";
    return kExitUnstable;
  }
  Table t;
  t.columns = {"band",        "omega",          "theta",
               "duan_sum",    "epr_product",    "logneg_standard",
               "logneg_paper"};
  for (int bi = 0; bi < 2; ++bi) {
    const Band band = bi == 0 ? Band::Fundamental : Band::Harmonic;
    for (double w : o.grid().omegas) {
      double th = o.theta();
      if (o.optimize_theta)
        th = dimer::optimize_angle(sys, w, dimer::AngleObjective::DuanSum, band,
                                   p)
                 .first;
      const auto sm = dimer::intracavity_spectrum(sys, w);
      const auto res = dimer::evaluate_criteria(sm, band, th, p);
      t.rows.push_back({double(bi), w, th, res.duan_sum, res.epr_product,
                        res.logneg_standard, res.logneg_paper});
    }
  }
  emit(t, o);
  return kExitOk;
}

struct StochasticOpts {
  double dt = 1e-3;
  double t_transient = -1.0;
  double t_sample = 40.0;
  int n_traj = 1000;
  std::string scheme = "midpoint";
  bool spectrum = false;
  int n_probe = 11;
  std::string dump_path;
};

int cmd_stochastic(const CommonOpts& o, const StochasticOpts& s) {
  const ModelParams p = o.params();
  dimer::SdeConfig cfg;
  cfg.dt = s.dt;
  cfg.t_transient = s.t_transient;
  cfg.t_sample = s.t_sample;
  cfg.n_traj = s.n_traj;
  cfg.seed = o.seed;
  cfg.scheme = s.scheme == "euler" ? dimer::SdeScheme::ExplicitEulerMaruyama
                                   : dimer::SdeScheme::SemiImplicitMidpoint;
  cfg.dump_path = s.dump_path;
  cfg.observables = {
      {Band::Fundamental, dimer::QuadCombine::Sum, o.theta()},
      {Band::Fundamental, dimer::QuadCombine::Diff,
       o.theta() + std::numbers::pi / 2.0},
      {Band::Harmonic, dimer::QuadCombine::Sum, o.theta()},
      {Band::Harmonic, dimer::QuadCombine::Diff,
       o.theta() + std::numbers::pi / 2.0}};
  if (s.spectrum) {
    const auto g = dimer::SpectrumGrid::linspace(o.omega_min, o.omega_max,
                                                 s.n_probe);
    cfg.probe_omegas = g.omegas;
  }
  const auto stats = dimer::integrate_sde(p, cfg);

  Table t;
  if (s.spectrum) {
    t.columns = {"observable", "omega", "value", "std_error"};
    for (size_t oi = 0; oi < stats.spectra.size(); ++oi)
      for (size_t k = 0; k < stats.spectra[oi].omegas.size(); ++k)
        t.rows.push_back({double(oi), stats.spectra[oi].omegas[k],
                          stats.spectra[oi].points[k].value,
                          stats.spectra[oi].points[k].std_error});
  } else {
    t.columns = {"quantity", "value", "std_error"};
    const dimer::Vec8c m = stats.mean_state.vec();
    for (int i = 0; i < 8; ++i) {
      t.rows.push_back({double(i), m(i).real(), 0.0});
    }
    for (size_t oi = 0; oi < stats.quad_variances.size(); ++oi)
      t.rows.push_back({double(8 + oi), stats.quad_variances[oi].value,
                        stats.quad_variances[oi].std_error});
  }
  emit(t, o);
  return kExitOk;
}

int cmd_figure(const CommonOpts& o, int id) {
  const auto preset = dimer::figure_preset(id);
  emit(dimer::run_figure(preset), o);
  return kExitOk;
}

int cmd_sweep(const CommonOpts& o, const std::string& field,
              const std::vector<double>& values, const std::string& band_name) {
  const Band band = band_name == "harm" ? Band::Harmonic : Band::Fundamental;
  Table t;
  t.columns = {field, "duan_min", "epr_min", "logneg_max"};
  for (double v : values) {
    CommonOpts oo = o;
    if (field == "kappa") oo.kappa = v;
    else if (field == "gamma_a") oo.gamma_a = v;
    else if (field == "gamma_b") oo.gamma_b = v;
    else if (field == "j_a") oo.ja = v;
    else if (field == "j_b") oo.jb = v;
    else if (field == "delta_a") oo.da = v;
    else if (field == "delta_b") oo.db = v;
    else if (field == "eps") { oo.eps1 = oo.eps2 = v; oo.eps_ratio = -1.0; }
    else if (field == "eps_ratio") oo.eps_ratio = v;
    else
      throw dimer::PreconditionViolation("unknown sweep field '" + field + "'");
    const ModelParams p = oo.params();
    const auto sys = dimer::build_drift_full(p, dimer::steady_state_numeric(p));
    if (!dimer::classify_stability(sys).stable) {
      std::cerr << "error: unstable point in sweep at " << field << "=" << v
                << "\n";
      return kExitUnstable;
    }
    double duan_min = 1e300, epr_min = 1e300, logneg_max = 0.0;
    for (double w : o.grid().omegas) {
      const auto sm = dimer::intracavity_spectrum(sys, w);
      double th = o.theta();
      if (o.optimize_theta)
        th = dimer::optimize_angle(sys, w, dimer::AngleObjective::DuanSum, band,
                                   p)
                 .first;
      const auto res = dimer::evaluate_criteria(sm, band, th, p);
      duan_min = std::min(duan_min, res.duan_sum);
      epr_min = std::min(epr_min, res.epr_product);
      logneg_max = std::max(logneg_max, res.logneg_standard);
    }
    t.rows.push_back({v, duan_min, epr_min, logneg_max});
  }
  emit(t, o);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"coupled intracavity second-harmonic dimer toolkit"};
  app.require_subcommand(1);
  app.set_config("--config", "", "read options from a config file");
  app.allow_config_extras(CLI::config_extras_mode::ignore_all);
  std::string dump_config;
  app.add_option("--dump-config", dump_config,
                 "write the effective configuration to a file and continue");

  CommonOpts common;
  StochasticOpts stoch;
  int figure_id = 0;
  std::string sweep_field, sweep_band = "fund";
  std::vector<double> sweep_values;

  auto* c_steady = app.add_subcommand("steady", "classical steady state");
  c_steady->configurable();
  add_common(c_steady, common);
  auto* c_stab = app.add_subcommand("stability", "drift eigenvalues and flags");
  c_stab->configurable();
  add_common(c_stab, common);
  auto* c_spec = app.add_subcommand("spectrum", "single-mode output variances");
  c_spec->configurable();
  add_common(c_spec, common);
  auto* c_crit =
      app.add_subcommand("criteria", "entanglement criteria over frequency");
  c_crit->configurable();
  add_common(c_crit, common);
  auto* c_stoch =
      app.add_subcommand("stochastic", "positive-P ensemble validation run");
  c_stoch->configurable();
  add_common(c_stoch, common);
  c_stoch->add_option("--dt", stoch.dt, "integration step");
  c_stoch->add_option("--t-transient", stoch.t_transient, "discard window");
  c_stoch->add_option("--t-sample", stoch.t_sample, "sampling window");
  c_stoch->add_option("--n-traj", stoch.n_traj, "ensemble size");
  c_stoch->add_option("--scheme", stoch.scheme, "midpoint or euler")
      ->check(CLI::IsMember({"midpoint", "euler"}));
  c_stoch->add_flag("--spectrum", stoch.spectrum, "emit sampled spectra");
  c_stoch->add_option("--n-probe", stoch.n_probe, "spectral probe count");
  c_stoch->add_option("--dump-trajectories", stoch.dump_path,
                      "raw trajectory dump file (binary)");
  auto* c_fig = app.add_subcommand("figure", "reproduction presets");
  c_fig->configurable();
  add_common(c_fig, common);
  c_fig->add_option("--id", figure_id, "figure number (1-8)")->required();
  auto* c_sweep = app.add_subcommand("sweep", "one-parameter sweep");
  c_sweep->configurable();
  add_common(c_sweep, common);
  c_sweep->add_option("--param", sweep_field, "model field to sweep")
      ->required();
  c_sweep->add_option("--values", sweep_values, "sweep values")
      ->required()
      ->delimiter(',');
  c_sweep->add_option("--band", sweep_band, "fund or harm")
      ->check(CLI::IsMember({"fund", "harm"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitError;
  }

  try {
    if (!dump_config.empty()) {
      std::ofstream f(dump_config);
      if (!f) throw std::runtime_error("cannot write config " + dump_config);
      f << app.config_to_str(false, false);
    }
    if (c_steady->parsed()) return cmd_steady(common);
    if (c_stab->parsed()) return cmd_stability(common);
    if (c_spec->parsed()) return cmd_spectrum(common);
    if (c_crit->parsed()) return cmd_criteria(common);
    if (c_stoch->parsed()) return cmd_stochastic(common, stoch);
    if (c_fig->parsed()) return cmd_figure(common, figure_id);
    if (c_sweep->parsed())
      return cmd_sweep(common, sweep_field, sweep_values, sweep_band);
  } catch (const dimer::Unstable& e) {
    std::cerr << "error: unstable/self-pulsing: " << e.what() << "\n";
    return kExitUnstable;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
