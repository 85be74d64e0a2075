#ifndef DIMER_CRITERIA_HPP
#define DIMER_CRITERIA_HPP

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>

#include <Eigen/Dense>

#include "dimer/spectra.hpp"
#include "dimer/types.hpp"

namespace dimer {

/// Output covariance matrix of the two modes of one band at angle theta,
/// basis (X1, Y1, X2, Y2). Diagonal carries the vacuum level 1.
struct CovarianceMatrix4 {
  double omega = 0.0;
  Eigen::Matrix4d c = Eigen::Matrix4d::Identity();
};

inline CovarianceMatrix4 build_cm(const SpectralMatrix& sm, Band band,
                                  double theta, const ModelParams& p) {
  if (sm.basis != Basis::Full)
    throw PreconditionViolation("covariance matrix requires full-basis spectrum");
  const double half_pi = std::numbers::pi / 2.0;
  const Vec8c v[4] = {
      detail::quad_vector_full(band, ModeIndex::One, theta),
      detail::quad_vector_full(band, ModeIndex::One, theta + half_pi),
      detail::quad_vector_full(band, ModeIndex::Two, theta),
      detail::quad_vector_full(band, ModeIndex::Two, theta + half_pi)};
  const double g2 = 2.0 * band_gamma(p, band);
  CovarianceMatrix4 cm;
  cm.omega = sm.omega;
  for (int i = 0; i < 4; ++i)
    for (int j = i; j < 4; ++j) {
      const double n =
          detail::real_checked(detail::spectral_moment(sm, v[i], v[j]));
      cm.c(i, j) = cm.c(j, i) = (i == j ? 1.0 : 0.0) + g2 * n;
    }
  return cm;
}

enum class DuanCombination { XmYp, XpYm };

struct DuanResult {
  double value = 0.0;            // the smaller of the two sums
  DuanCombination which = DuanCombination::XmYp;
  double xm_yp = 0.0;            // V(X1-X2) + V(Y1+Y2)
  double xp_ym = 0.0;            // V(X1+X2) + V(Y1-Y2)
};

/// Both Duan combinations (b = 1, separable bound 4); the smaller is
/// reported along with which combination achieved it.
inline DuanResult duan_sum(const CovarianceMatrix4& cm) {
  const auto& c = cm.c;
  DuanResult r;
  r.xm_yp = c(0, 0) + c(2, 2) - 2.0 * c(0, 2) + c(1, 1) + c(3, 3) + 2.0 * c(1, 3);
  r.xp_ym = c(0, 0) + c(2, 2) + 2.0 * c(0, 2) + c(1, 1) + c(3, 3) - 2.0 * c(1, 3);
  if (r.xp_ym < r.xm_yp) {
    r.value = r.xp_ym;
    r.which = DuanCombination::XpYm;
  } else {
    r.value = r.xm_yp;
    r.which = DuanCombination::XmYp;
  }
  return r;
}

/// Reid EPR product of optimally linearly inferred variances (bound 1).
/// Both inference directions are evaluated and the minimum returned.
inline double epr_product(const CovarianceMatrix4& cm) {
  const auto& c = cm.c;
  for (int i = 0; i < 4; ++i)
    if (c(i, i) < 1e-12)
      throw DegenerateConditioner("conditioning variance below 1e-12");
  const double inf12 = (c(0, 0) - c(0, 2) * c(0, 2) / c(2, 2)) *
                       (c(1, 1) - c(1, 3) * c(1, 3) / c(3, 3));
  const double inf21 = (c(2, 2) - c(0, 2) * c(0, 2) / c(0, 0)) *
                       (c(3, 3) - c(1, 3) * c(1, 3) / c(1, 1));
  return std::min(inf12, inf21);
}

enum class LogNegVariant { PaperLiteral, Standard };

struct LogNegResult {
  double value = 0.0;
  // the literal variant's inner radicand went negative; value clamped to 0
  bool complex_radicand = false;
};

/// Logarithmic negativity of the two-mode covariance matrix.
/// Standard uses the smallest partial-transpose symplectic eigenvalue,
///   2 xi~^2 = D~ - sqrt(D~^2 - 4 det C),  D~ = det C1 + det C2 - 2 det C12.
/// PaperLiteral evaluates the asymmetric radical form verbatim and is kept
/// for comparison; its inner radicand can go negative, which is reported.
inline LogNegResult log_negativity(const CovarianceMatrix4& cm,
                                   LogNegVariant variant) {
  const auto& c = cm.c;
  const double det1 = c(0, 0) * c(1, 1) - c(0, 1) * c(0, 1);
  const double det2 = c(2, 2) * c(3, 3) - c(2, 3) * c(2, 3);
  const double det12 = c(0, 2) * c(1, 3) - c(0, 3) * c(1, 2);
  const double det = c.determinant();

  LogNegResult r;
  if (variant == LogNegVariant::Standard) {
    const double dtilde = det1 + det2 - 2.0 * det12;
    const double rad = dtilde * dtilde - 4.0 * det;
    if (rad < 0.0) return r;  // both PT symplectic eigenvalues off the real axis
    const double xi2 = 0.5 * (dtilde - std::sqrt(rad));
    if (xi2 <= 0.0 || xi2 >= 1.0) return r;
    r.value = -std::log2(std::sqrt(xi2));
    return r;
  }

  const double inner = (det2 - det12) * (det2 - det12) - det;
  if (inner < 0.0) {
    r.complex_radicand = true;
    return r;
  }
  const double outer = (det1 - det12) - std::sqrt(inner);
  if (outer <= 0.0 || outer >= 1.0) return r;  // xi >= 1 or xi complex: 0
  r.value = -std::log2(std::sqrt(outer));
  return r;
}

struct CriteriaResult {
  double duan_sum = 4.0;        // bound 4
  double epr_product = 1.0;     // bound 1
  double logneg_paper = 0.0;
  double logneg_standard = 0.0;
  double theta = 0.0;
  double omega = 0.0;
};

inline CriteriaResult evaluate_criteria(const SpectralMatrix& sm, Band band,
                                        double theta, const ModelParams& p) {
  const CovarianceMatrix4 cm = build_cm(sm, band, theta, p);
  CriteriaResult res;
  res.duan_sum = duan_sum(cm).value;
  res.epr_product = epr_product(cm);
  res.logneg_paper = log_negativity(cm, LogNegVariant::PaperLiteral).value;
  res.logneg_standard = log_negativity(cm, LogNegVariant::Standard).value;
  res.theta = theta;
  res.omega = sm.omega;
  return res;
}

inline double evaluate_angle_objective(const SpectralMatrix& sm,
                                       AngleObjective obj, Band band,
                                       double theta, const ModelParams& p) {
  switch (obj) {
    case AngleObjective::SingleModeV:
      return output_quadrature_variance(sm, {band, ModeIndex::One, theta}, p);
    case AngleObjective::DuanSum:
      return duan_sum(build_cm(sm, band, theta, p)).value;
    case AngleObjective::EprProduct:
    default:
      return epr_product(build_cm(sm, band, theta, p));
  }
}

/// Grid scan over theta in [0, pi) at 0.25 degree resolution, then
/// golden-section refinement to 1e-4 rad. Ties break toward smaller theta.
inline std::pair<double, double> optimize_angle(const LinearizedSystem& sys,
                                                double omega,
                                                AngleObjective objective,
                                                Band band,
                                                const ModelParams& p) {
  const SpectralMatrix sm = intracavity_spectrum(sys, omega);
  const double pi = std::numbers::pi;
  const double step = 0.25 * pi / 180.0;
  const int n = static_cast<int>(std::lround(pi / step));
  int best = 0;
  double best_val = evaluate_angle_objective(sm, objective, band, 0.0, p);
  for (int i = 1; i < n; ++i) {
    const double val =
        evaluate_angle_objective(sm, objective, band, i * step, p);
    if (val < best_val) {
      best_val = val;
      best = i;
    }
  }
  double lo = (best - 1) * step, hi = (best + 1) * step;
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
  double f1 = evaluate_angle_objective(sm, objective, band, x1, p);
  double f2 = evaluate_angle_objective(sm, objective, band, x2, p);
  while (hi - lo > 1e-4) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - gr * (hi - lo);
      f1 = evaluate_angle_objective(sm, objective, band, x1, p);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + gr * (hi - lo);
      f2 = evaluate_angle_objective(sm, objective, band, x2, p);
    }
  }
  double theta_star = 0.5 * (lo + hi);
  double value = evaluate_angle_objective(sm, objective, band, theta_star, p);
  if (best_val <= value) {  // keep the deterministic grid point on ties
    theta_star = best * step;
    value = best_val;
  }
  if (theta_star < 0.0) theta_star += pi;
  return {theta_star, value};
}

}  // namespace dimer

#endif
