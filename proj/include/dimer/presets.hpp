#ifndef DIMER_PRESETS_HPP
#define DIMER_PRESETS_HPP

#include <cmath>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "dimer/criteria.hpp"
#include "dimer/model.hpp"
#include "dimer/spectra.hpp"
#include "dimer/types.hpp"

namespace dimer {

/// Simple column-labelled table of doubles, the common currency of the CLI.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

enum class FigureKind {
  SingleModeVariance,  // 1
  DuanSpectrum,        // 2
  EprSpectrum,         // 3
  LogNegSpectrum,      // 4
  DuanVsPump,          // 5-7
  Intensity            // 8
};

struct FigureCase {
  std::string label;
  ModelParams params;
};

struct FigurePreset {
  int id = 0;
  FigureKind kind = FigureKind::SingleModeVariance;
  Band band = Band::Fundamental;       // DuanVsPump figures
  std::vector<FigureCase> cases;
  std::vector<double> eps_ratios;      // pump sweep figures
  SpectrumGrid grid = SpectrumGrid::standard();
};

/// Parameter sets of the reproduction figures. All rates in units of the
/// fundamental loss rate; pumps are given as fractions of the critical pump.
inline FigurePreset figure_preset(int id) {
  auto resonant = [](double ja, double jb) {
    ModelParams p;
    p.kappa = 0.01;
    p.gamma_a = p.gamma_b = 1.0;
    p.j_a = ja;
    p.j_b = jb;
    const double eps = 0.8 * critical_pump(p);
    p.eps1 = p.eps2 = eps;
    return p;
  };
  auto detuned = [](double gb) {
    ModelParams p;
    p.kappa = 0.01;
    p.gamma_a = 1.0;
    p.gamma_b = gb;
    p.j_a = p.delta_a = 10.0;
    p.j_b = p.delta_b = 2.0;
    return p;
  };

  FigurePreset f;
  f.id = id;
  switch (id) {
    case 1:
      f.kind = FigureKind::SingleModeVariance;
      f.cases = {{"uncoupled", resonant(0.0, 0.0)},
                 {"ja=jb=1", resonant(1.0, 1.0)},
                 {"ja=2,jb=1", resonant(2.0, 1.0)}};
      break;
    case 2:
      f.kind = FigureKind::DuanSpectrum;
      f.cases = {{"ja=jb=1", resonant(1.0, 1.0)},
                 {"ja=2,jb=1", resonant(2.0, 1.0)},
                 {"ja=2,jb=0.5", resonant(2.0, 0.5)}};
      break;
    case 3:
      f.kind = FigureKind::EprSpectrum;
      f.cases = {{"ja=jb=1", resonant(1.0, 1.0)},
                 {"ja=2,jb=1", resonant(2.0, 1.0)},
                 {"ja=2,jb=0.5", resonant(2.0, 0.5)}};
      break;
    case 4:
      f.kind = FigureKind::LogNegSpectrum;
      f.cases = {{"ja=jb=1", resonant(1.0, 1.0)},
                 {"ja=2,jb=1", resonant(2.0, 1.0)},
                 {"ja=2,jb=0.5", resonant(2.0, 0.5)}};
      break;
    case 5:
    case 6:
      f.kind = FigureKind::DuanVsPump;
      f.band = id == 5 ? Band::Fundamental : Band::Harmonic;
      f.cases = {{"gb=2", detuned(2.0)}};
      f.eps_ratios = {0.2, 0.4, 0.6, 0.8, 0.95};
      break;
    case 7:
      f.kind = FigureKind::DuanVsPump;
      f.band = Band::Fundamental;
      f.cases = {{"gb=0.5", detuned(0.5)}};
      f.eps_ratios = {0.2, 0.4, 0.6, 0.8, 0.95};
      break;
    case 8:
      f.kind = FigureKind::Intensity;
      f.cases = {{"gb=2", detuned(2.0)}, {"gb=0.5", detuned(0.5)}};
      for (int i = 1; i <= 19; ++i) f.eps_ratios.push_back(0.05 * i);
      break;
    default:
      throw UnknownFigure("figure id must be 1..8, got " + std::to_string(id));
  }
  return f;
}

namespace detail {

// V(X_p) + V(Y_m) at one angle; the combination that carries the violations
// in the symmetric detuned regime.
inline double duan_xp_ym(const SpectralMatrix& sm, Band band, double theta,
                         const ModelParams& p) {
  return combined_quadrature_variance(sm, band, +1, QuadAxis::X, theta, p) +
         combined_quadrature_variance(sm, band, -1, QuadAxis::Y, theta, p);
}

// A single fixed quadrature angle per curve, chosen as the angle whose
// best value over a coarse frequency scan is lowest.
template <typename Objective>
inline double best_fixed_angle(const std::vector<double>& omegas,
                               const LinearizedSystem& sys,
                               Objective&& value_at) {
  const double step = 0.25 * std::numbers::pi / 180.0;
  const int n = static_cast<int>(std::lround(std::numbers::pi / step));
  std::vector<SpectralMatrix> sms;
  for (size_t i = 0; i < omegas.size(); i += 10)
    sms.push_back(intracavity_spectrum(sys, omegas[i]));
  double best_theta = 0.0, best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    const double theta = i * step;
    double lo = std::numeric_limits<double>::infinity();
    for (const auto& sm : sms) lo = std::min(lo, value_at(sm, theta));
    if (lo < best) {
      best = lo;
      best_theta = theta;
    }
  }
  return best_theta;
}

}  // namespace detail

/// Execute a figure preset, producing one long-format table.
inline Table run_figure(const FigurePreset& f) {
  Table t;
  const auto& omegas = f.grid.omegas;
  switch (f.kind) {
    case FigureKind::SingleModeVariance:
    case FigureKind::DuanSpectrum:
    case FigureKind::EprSpectrum:
    case FigureKind::LogNegSpectrum: {
      const char* value_col =
          f.kind == FigureKind::SingleModeVariance ? "variance"
          : f.kind == FigureKind::DuanSpectrum     ? "duan_sum"
          : f.kind == FigureKind::EprSpectrum      ? "epr_product"
                                                   : "log_negativity";
      t.columns = {"case", "band", "theta", "omega", value_col};
      for (size_t ci = 0; ci < f.cases.size(); ++ci) {
        const ModelParams& p = f.cases[ci].params;
        const auto ss = steady_state_numeric(p);
        const auto sys = build_drift_full(p, ss);
        for (int bi = 0; bi < 2; ++bi) {
          const Band band = bi == 0 ? Band::Fundamental : Band::Harmonic;
          double theta = 0.0;
          if (f.kind != FigureKind::LogNegSpectrum) {
            const AngleObjective obj =
                f.kind == FigureKind::SingleModeVariance
                    ? AngleObjective::SingleModeV
                : f.kind == FigureKind::DuanSpectrum ? AngleObjective::DuanSum
                                                     : AngleObjective::EprProduct;
            theta = detail::best_fixed_angle(
                omegas, sys, [&](const SpectralMatrix& sm, double th) {
                  return evaluate_angle_objective(sm, obj, band, th, p);
                });
          }
          for (double w : omegas) {
            const auto sm = intracavity_spectrum(sys, w);
            double value = 0.0;
            switch (f.kind) {
              case FigureKind::SingleModeVariance:
                value = output_quadrature_variance(
                    sm, {band, ModeIndex::One, theta}, p);
                break;
              case FigureKind::DuanSpectrum:
                value = duan_sum(build_cm(sm, band, theta, p)).value;
                break;
              case FigureKind::EprSpectrum:
                value = epr_product(build_cm(sm, band, theta, p));
                break;
              default:
                value =
                    log_negativity(build_cm(sm, band, theta, p),
                                   LogNegVariant::Standard)
                        .value;
            }
            t.rows.push_back({double(ci), double(bi), theta, w, value});
          }
        }
      }
      break;
    }
    case FigureKind::DuanVsPump: {
      t.columns = {"omega", "eps_ratio", "theta",
                   f.band == Band::Fundamental ? "duan_sum_fund"
                                               : "duan_sum_harm"};
      ModelParams p = f.cases.at(0).params;
      const double eps_c = critical_pump(p);
      for (double ratio : f.eps_ratios) {
        p.eps1 = p.eps2 = ratio * eps_c;
        const auto sym = steady_state_symmetric(p);
        const auto sys = build_pm_system(p, sym);
        const double theta = detail::best_fixed_angle(
            omegas, sys, [&](const SpectralMatrix& sm, double th) {
              return detail::duan_xp_ym(sm, f.band, th, p);
            });
        for (double w : omegas) {
          const auto sm = intracavity_spectrum(sys, w);
          t.rows.push_back(
              {w, ratio, theta, detail::duan_xp_ym(sm, f.band, theta, p)});
        }
      }
      break;
    }
    case FigureKind::Intensity: {
      t.columns = {"case", "eps_ratio", "intensity_fund", "intensity_harm"};
      for (size_t ci = 0; ci < f.cases.size(); ++ci) {
        ModelParams p = f.cases[ci].params;
        const double eps_c = critical_pump(p);
        for (double ratio : f.eps_ratios) {
          p.eps1 = p.eps2 = ratio * eps_c;
          const auto sym = steady_state_symmetric(p);
          const double ia = std::pow(0.5 * sym.alpha_plus, 2);
          const double ib = std::pow(0.5 * sym.beta_plus, 2);
          t.rows.push_back({double(ci), ratio, ia, ib});
        }
      }
      break;
    }
  }
  return t;
}

}  // namespace dimer

#endif
