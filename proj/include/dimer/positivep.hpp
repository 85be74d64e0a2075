#ifndef DIMER_POSITIVEP_HPP
#define DIMER_POSITIVEP_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "dimer/linearized.hpp"
#include "dimer/model.hpp"
#include "dimer/spectra.hpp"
#include "dimer/types.hpp"

namespace dimer {

enum class SdeScheme { SemiImplicitMidpoint, ExplicitEulerMaruyama };

// Periodogram taper. The rectangular kernel's slow side-lobe decay biases
// sharp spectral features; Hann confines the leakage to the main lobe.
enum class SpectralWindow { Rectangular, Hann };

enum class QuadCombine { Single1, Single2, Sum, Diff };

/// One quadrature observable tracked during a stochastic run.
/// Sum/Diff are the +-/-- combinations X1 +- X2 at angle theta (use
/// theta + pi/2 for the Y quadratures).
struct QuadObservable {
  Band band = Band::Fundamental;
  QuadCombine combine = QuadCombine::Sum;
  double theta = 0.0;
};

struct SdeConfig {
  double dt = 1e-3;
  double t_transient = -1.0;  // < 0: use 20 / min(gamma_a, gamma_b)
  double t_sample = 40.0;
  int n_traj = 10000;
  std::uint64_t seed = 42;
  SdeScheme scheme = SdeScheme::SemiImplicitMidpoint;
  int sample_stride = 5;  // record every k-th step
  int n_windows = 8;      // periodogram windows over the sample span
  SpectralWindow window = SpectralWindow::Rectangular;
  std::vector<QuadObservable> observables;
  std::vector<double> probe_omegas;  // empty: no spectra
  std::string dump_path;             // non-empty: raw trajectory dump

  void validate() const {
    if (!(dt > 0.0)) throw PreconditionViolation("dt must be > 0");
    if (!(t_sample > 0.0)) throw PreconditionViolation("t_sample must be > 0");
    if (n_traj < 2) throw PreconditionViolation("n_traj must be >= 2");
  }
};

struct MomentEstimate {
  double value = 0.0;
  double std_error = 0.0;
};

struct SpectrumEstimate {
  std::vector<double> omegas;
  std::vector<MomentEstimate> points;  // output-normalized (vacuum included)
};

struct EnsembleStats {
  PhaseSpaceState mean_state;  // ensemble + time average over the sample span
  MomentEstimate alpha_plus;   // Re(a1 + a1+ + a2 + a2+)/2 with std error
  MomentEstimate beta_plus;    // Re(b1 + b1+ + b2 + b2+)/2 with std error
  std::vector<MomentEstimate> quad_variances;  // equal-time, normally ordered
  std::vector<SpectrumEstimate> spectra;       // one per observable, if probed
  int n_divergent = 0;
  int n_traj_used = 0;
};

namespace detail {

inline Vec8c observable_vector(const QuadObservable& o) {
  switch (o.combine) {
    case QuadCombine::Single1:
      return quad_vector_full(o.band, ModeIndex::One, o.theta);
    case QuadCombine::Single2:
      return quad_vector_full(o.band, ModeIndex::Two, o.theta);
    case QuadCombine::Sum:
      return quad_vector_combined(Basis::Full, o.band, +1, o.theta);
    case QuadCombine::Diff:
    default:
      return quad_vector_combined(Basis::Full, o.band, -1, o.theta);
  }
}

inline double observable_vacuum(const QuadObservable& o) {
  return (o.combine == QuadCombine::Sum || o.combine == QuadCombine::Diff)
             ? 2.0
             : 1.0;
}

// trajectory sub-seed splitting rule: seed_i = splitmix64(master + i)
inline std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

struct TrajResult {
  bool diverged = false;
  Vec8c mean_x = Vec8c::Zero();
  std::vector<Complex> q_mean;          // per observable
  std::vector<Complex> q2_mean;         // per observable
  std::vector<double> periodogram;      // [obs * n_probe + k], window-avg
};

inline int dimer_thread_cap() {
  if (const char* env = std::getenv("DIMER_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace detail

/// Integrate the full positive-P equations over an ensemble of trajectories.
/// Noise enters only the four alpha equations, with amplitudes
/// sqrt(kappa beta) on the principal branch; beta equations are noiseless.
/// Reproducible: identical (seed, cfg, params) give bit-identical results
/// regardless of the thread schedule.
inline EnsembleStats integrate_sde(const ModelParams& p, const SdeConfig& cfg) {
  p.validate();
  cfg.validate();
  const double t_tr = cfg.t_transient >= 0.0
                          ? cfg.t_transient
                          : 20.0 / std::min(p.gamma_a, p.gamma_b);
  const long n_tr = std::lround(t_tr / cfg.dt);
  const long n_s = std::lround(cfg.t_sample / cfg.dt);
  const int stride = std::max(1, cfg.sample_stride);
  const long n_rec = n_s / stride;
  const int n_obs = static_cast<int>(cfg.observables.size());
  const int n_probe = static_cast<int>(cfg.probe_omegas.size());
  const int n_win = cfg.n_windows;
  const long rec_per_win = n_rec / std::max(1, n_win);
  if (n_probe > 0 && (n_win < 8 || rec_per_win < 2))
    throw InsufficientData("spectral estimation needs >= 8 usable windows");

  // reference steady state: relaxed deterministic solution when reachable
  Vec8c x0 = Vec8c::Zero();
  bool have_ss = false;
  try {
    x0 = steady_state_numeric(p, 1e-10, 2e3 / std::min(p.gamma_a, p.gamma_b))
             .vec();
    have_ss = true;
  } catch (const std::exception&) {
    x0.setZero();
  }
  if (have_ss) {
    try {
      const auto rep = classify_stability(
          build_drift_full(p, PhaseSpaceState::from_vec(x0)));
      if (!rep.stable) {
        std::fprintf(stderr,
                     "integrate_sde: warning: linearized system is not stable; "
                     "sampled statistics may not be stationary\n");
      } else if (rep.margin > 0.0 && cfg.t_sample < 50.0 / rep.margin &&
                 n_probe > 0) {
        std::fprintf(stderr,
                     "integrate_sde: warning: t_sample=%g shorter than 50 "
                     "correlation times (50/%g)\n",
                     cfg.t_sample, rep.margin);
      }
    } catch (const std::exception&) {
    }
  }

  std::vector<Complex> q_det(n_obs);
  std::vector<Vec8c> obs_vec(n_obs);
  for (int i = 0; i < n_obs; ++i) {
    obs_vec[i] = detail::observable_vector(cfg.observables[i]);
    q_det[i] = obs_vec[i].transpose() * x0;
  }

  const double sqdt = std::sqrt(cfg.dt);
  const double dt_rec = cfg.dt * stride;

  // per-window taper and its power normalization
  std::vector<double> taper(std::max<long>(rec_per_win, 1), 1.0);
  if (cfg.window == SpectralWindow::Hann)
    for (long r = 0; r < rec_per_win; ++r)
      taper[r] = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * (r + 0.5) /
                                       double(rec_per_win)));
  double taper_power = 0.0;
  for (long r = 0; r < rec_per_win; ++r) taper_power += taper[r] * taper[r];
  const double u_win = dt_rec * taper_power;  // integral of taper^2

  std::vector<detail::TrajResult> results(cfg.n_traj);
  std::ofstream dump;
  if (!cfg.dump_path.empty()) {
    dump.open(cfg.dump_path, std::ios::binary);
    if (!dump) throw std::runtime_error("cannot open dump file " + cfg.dump_path);
    dump.write("PPD1", 4);
    const std::uint64_t nt = cfg.n_traj, ns = n_rec;
    dump.write(reinterpret_cast<const char*>(&nt), 8);
    dump.write(reinterpret_cast<const char*>(&ns), 8);
    dump.write(reinterpret_cast<const char*>(&dt_rec), 8);
  }

  auto run_traj = [&](int traj, std::vector<double>* dump_buf) {
    detail::TrajResult& res = results[traj];
    res.q_mean.assign(n_obs, Complex(0.0));
    res.q2_mean.assign(n_obs, Complex(0.0));
    res.periodogram.assign(static_cast<size_t>(n_obs) * n_probe, 0.0);

    std::mt19937_64 rng(detail::splitmix64(cfg.seed + traj));
    std::normal_distribution<double> normal(0.0, 1.0);
    Vec8c x = x0;

    auto add_noise = [&](Vec8c& out, const Vec8c& at, double w1, double w2,
                         double w3, double w4, double scale) {
      out(0) += scale * std::sqrt(p.kappa * at(4)) * w1;
      out(1) += scale * std::sqrt(p.kappa * at(5)) * w2;
      out(2) += scale * std::sqrt(p.kappa * at(6)) * w3;
      out(3) += scale * std::sqrt(p.kappa * at(7)) * w4;
    };

    auto step = [&](Vec8c& state) {
      const double w1 = normal(rng) * sqdt, w2 = normal(rng) * sqdt;
      const double w3 = normal(rng) * sqdt, w4 = normal(rng) * sqdt;
      if (cfg.scheme == SdeScheme::ExplicitEulerMaruyama) {
        Vec8c nxt = state + cfg.dt * deterministic_derivative(p, state);
        add_noise(nxt, state, w1, w2, w3, w4, 1.0);
        state = nxt;
      } else {
        Vec8c mid = state;
        for (int it = 0; it < 3; ++it) {
          Vec8c rhs = state + 0.5 * cfg.dt * deterministic_derivative(p, mid);
          add_noise(rhs, mid, w1, w2, w3, w4, 0.5);
          mid = rhs;
        }
        state = 2.0 * mid - state;
      }
    };

    for (long i = 0; i < n_tr; ++i) {
      step(x);
      if ((i & 63) == 0 && x.cwiseAbs().maxCoeff() > 1e6) {
        res.diverged = true;
        return;
      }
    }

    // per-window spectral accumulators
    std::vector<Complex> g_acc(static_cast<size_t>(n_obs) * n_probe);
    std::vector<Complex> h_acc(static_cast<size_t>(n_obs) * n_probe);
    std::vector<Complex> rot(n_probe), drot(n_probe);
    for (int k = 0; k < n_probe; ++k)
      drot[k] = std::exp(-I * cfg.probe_omegas[k] * dt_rec);

    long rec = 0;
    int win_done = 0;
    std::fill(rot.begin(), rot.end(), Complex(1.0));
    for (long i = 0; i < n_s; ++i) {
      step(x);
      if ((i & 63) == 0 && x.cwiseAbs().maxCoeff() > 1e6) {
        res.diverged = true;
        return;
      }
      if ((i + 1) % stride != 0) continue;
      res.mean_x += x;
      const double tap =
          n_probe > 0 ? taper[static_cast<size_t>(rec % rec_per_win)] : 1.0;
      for (int o = 0; o < n_obs; ++o) {
        const Complex q = obs_vec[o].transpose() * x;
        res.q_mean[o] += q;
        res.q2_mean[o] += q * q;
        const Complex dq = (q - q_det[o]) * tap;
        for (int k = 0; k < n_probe; ++k) {
          g_acc[o * n_probe + k] += dq * rot[k];
          h_acc[o * n_probe + k] += dq * std::conj(rot[k]);
        }
      }
      if (dump_buf) {
        for (int j = 0; j < 8; ++j) {
          dump_buf->push_back(x(j).real());
          dump_buf->push_back(x(j).imag());
        }
      }
      for (int k = 0; k < n_probe; ++k) rot[k] *= drot[k];
      ++rec;
      if (n_probe > 0 && rec % rec_per_win == 0 && win_done < n_win) {
        for (size_t idx = 0; idx < g_acc.size(); ++idx) {
          const Complex per =
              g_acc[idx] * h_acc[idx] * (dt_rec * dt_rec / u_win);
          res.periodogram[idx] += per.real() / n_win;
          g_acc[idx] = h_acc[idx] = Complex(0.0);
        }
        std::fill(rot.begin(), rot.end(), Complex(1.0));
        ++win_done;
      }
    }
    const double inv = 1.0 / static_cast<double>(rec);
    res.mean_x *= inv;
    for (int o = 0; o < n_obs; ++o) {
      res.q_mean[o] *= inv;
      res.q2_mean[o] *= inv;
    }
  };

  const int n_threads = std::min(detail::dimer_thread_cap(), cfg.n_traj);
  if (n_threads <= 1 || dump.is_open()) {
    std::vector<double> buf;
    for (int t = 0; t < cfg.n_traj; ++t) {
      buf.clear();
      run_traj(t, dump.is_open() ? &buf : nullptr);
      if (dump.is_open())
        dump.write(reinterpret_cast<const char*>(buf.data()),
                   static_cast<std::streamsize>(buf.size() * sizeof(double)));
    }
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < n_threads; ++w)
      pool.emplace_back([&, w] {
        for (int t = w; t < cfg.n_traj; t += n_threads) run_traj(t, nullptr);
      });
    for (auto& th : pool) th.join();
  }

  // fixed-order reduction: identical output for any thread schedule
  EnsembleStats stats;
  int n_ok = 0;
  Vec8c mean_x = Vec8c::Zero();
  for (const auto& r : results) {
    if (r.diverged) {
      ++stats.n_divergent;
      continue;
    }
    ++n_ok;
    mean_x += r.mean_x;
  }
  if (stats.n_divergent > cfg.n_traj / 100)
    throw TrajectoryDivergence(
        std::to_string(stats.n_divergent) + " of " +
        std::to_string(cfg.n_traj) +
        " trajectories diverged (positive-P boundary-term warning)");
  if (n_ok < 2) throw TrajectoryDivergence("fewer than 2 usable trajectories");
  stats.n_traj_used = n_ok;
  stats.mean_state = PhaseSpaceState::from_vec(Vec8c(mean_x / double(n_ok)));

  // symmetric-mode amplitude estimators across trajectories
  const auto welford_sum = [&](int lo) {
    MomentEstimate est;
    double m2 = 0.0;
    int cnt = 0;
    for (const auto& r : results) {
      if (r.diverged) continue;
      const double y = 0.5 * (r.mean_x(lo) + r.mean_x(lo + 1) +
                              r.mean_x(lo + 2) + r.mean_x(lo + 3))
                                 .real();
      ++cnt;
      const double d = y - est.value;
      est.value += d / cnt;
      m2 += d * (y - est.value);
    }
    est.std_error = std::sqrt(m2 / (double(cnt) * (cnt - 1)));
    return est;
  };
  stats.alpha_plus = welford_sum(0);
  stats.beta_plus = welford_sum(4);

  for (int o = 0; o < n_obs; ++o) {
    Complex e1(0.0), e2(0.0);
    for (const auto& r : results) {
      if (r.diverged) continue;
      e1 += r.q_mean[o];
      e2 += r.q2_mean[o];
    }
    e1 /= double(n_ok);
    e2 /= double(n_ok);
    double mean_y = 0.0, m2 = 0.0;
    int cnt = 0;
    for (const auto& r : results) {
      if (r.diverged) continue;
      const double y = (r.q2_mean[o] - 2.0 * e1 * r.q_mean[o] + e1 * e1).real();
      ++cnt;
      const double d = y - mean_y;
      mean_y += d / cnt;
      m2 += d * (y - mean_y);
    }
    MomentEstimate est;
    est.value = mean_y;
    est.std_error = std::sqrt(m2 / (double(cnt) * (cnt - 1)));
    stats.quad_variances.push_back(est);
  }

  if (n_probe > 0) {
    for (int o = 0; o < n_obs; ++o) {
      SpectrumEstimate se;
      se.omegas = cfg.probe_omegas;
      const double g2 = 2.0 * band_gamma(p, cfg.observables[o].band);
      const double vac = detail::observable_vacuum(cfg.observables[o]);
      for (int k = 0; k < n_probe; ++k) {
        double mean_t = 0.0, m2 = 0.0;
        int cnt = 0;
        for (const auto& r : results) {
          if (r.diverged) continue;
          const double t = r.periodogram[o * n_probe + k];
          ++cnt;
          const double d = t - mean_t;
          mean_t += d / cnt;
          m2 += d * (t - mean_t);
        }
        MomentEstimate est;
        est.value = vac + g2 * mean_t;
        est.std_error = g2 * std::sqrt(m2 / (double(cnt) * (cnt - 1)));
        se.points.push_back(est);
      }
      stats.spectra.push_back(std::move(se));
    }
  }
  return stats;
}

/// Sampled output spectrum of one quadrature observable (vacuum level
/// normalized into the result). Thin wrapper over integrate_sde.
inline SpectrumEstimate stochastic_spectrum(const ModelParams& p,
                                            SdeConfig cfg,
                                            const QuadObservable& obs,
                                            const std::vector<double>& omegas) {
  cfg.observables = {obs};
  cfg.probe_omegas = omegas;
  return integrate_sde(p, cfg).spectra.at(0);
}

}  // namespace dimer

#endif
