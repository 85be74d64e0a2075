#ifndef DIMER_SPECTRA_HPP
#define DIMER_SPECTRA_HPP

#include <cmath>
#include <numbers>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "dimer/linearized.hpp"
#include "dimer/types.hpp"

namespace dimer {

struct SpectrumGrid {
  std::vector<double> omegas;

  static SpectrumGrid linspace(double lo, double hi, int n) {
    SpectrumGrid g;
    g.omegas.reserve(n);
    for (int i = 0; i < n; ++i)
      g.omegas.push_back(n == 1 ? lo : lo + (hi - lo) * i / double(n - 1));
    return g;
  }

  // default range used for figure reproduction
  static SpectrumGrid standard() { return linspace(-20.0, 20.0, 801); }
};

/// Normally-ordered two-time spectral moments at one frequency,
/// S(w) = (A + iw)^-1 B B^T (A^T - iw)^-1, in the basis of its source system.
struct SpectralMatrix {
  double omega = 0.0;
  Mat8c s = Mat8c::Zero();
  Basis basis = Basis::Full;
};

enum class ModeIndex { One, Two };

struct QuadratureSelector {
  Band band = Band::Fundamental;
  ModeIndex mode = ModeIndex::One;
  double theta = 0.0;
};

/// Resolvent spectrum by two linear solves; no explicit inverse.
inline SpectralMatrix intracavity_spectrum(const LinearizedSystem& sys,
                                           double omega) {
  const Mat8c m_plus = sys.a_mat + I * omega * Mat8c::Identity();
  {
    Eigen::JacobiSVD<Mat8c> svd(m_plus);
    const double smin = svd.singularValues()(7);
    if (smin <= 0.0 || svd.singularValues()(0) / smin > 1e12)
      throw SingularSystem("resolvent matrix numerically singular at omega=" +
                           std::to_string(omega));
  }
  const Mat8c m_minus = sys.a_mat - I * omega * Mat8c::Identity();
  const Mat8c x = m_plus.partialPivLu().solve(sys.b_mat);
  const Mat8c y = m_minus.partialPivLu().solve(sys.b_mat);
  SpectralMatrix sm;
  sm.omega = omega;
  sm.s = x * y.transpose();
  sm.basis = sys.basis;
  return sm;
}

namespace detail {

// Coefficient vector of the quadrature fluctuation dX = v^T dx, with
// e^{-i theta} on the annihilation-like slot and e^{+i theta} on its partner.
inline Vec8c quad_vector_full(Band band, ModeIndex mode, double theta) {
  Vec8c v = Vec8c::Zero();
  const int base =
      (band == Band::Fundamental ? 0 : 4) + (mode == ModeIndex::One ? 0 : 2);
  v(base) = std::exp(-I * theta);
  v(base + 1) = std::exp(I * theta);
  return v;
}

// Sum (+1) or difference (-1) quadrature, expressed in either basis.
inline Vec8c quad_vector_combined(Basis basis, Band band, int sign,
                                  double theta) {
  if (basis == Basis::Full) {
    Vec8c v = quad_vector_full(band, ModeIndex::One, theta);
    const Vec8c v2 = quad_vector_full(band, ModeIndex::Two, theta);
    return sign >= 0 ? Vec8c(v + v2) : Vec8c(v - v2);
  }
  // PlusMinus basis: the sum quadrature lives on the (+) slots, the
  // difference on the (-) slots.
  Vec8c v = Vec8c::Zero();
  const int base = (band == Band::Fundamental ? 0 : 4) + (sign >= 0 ? 0 : 2);
  v(base) = std::exp(-I * theta);
  v(base + 1) = std::exp(I * theta);
  return v;
}

// Symmetrized bilinear spectral moment of two quadrature combinations.
// The plain-transpose form is real for the diagonal by the S(-w) = S(w)^T
// symmetry of the Ornstein-Uhlenbeck spectrum.
inline Complex spectral_moment(const SpectralMatrix& sm, const Vec8c& u,
                               const Vec8c& v) {
  const Complex uv = u.transpose() * sm.s * v;
  const Complex vu = v.transpose() * sm.s * u;
  return 0.5 * (uv + vu);
}

inline double real_checked(Complex z) {
  // variances carry only a round-off imaginary residual; truncate it
  return z.real();
}

}  // namespace detail

/// Output spectral variance of a single-mode rotated quadrature through the
/// input-output relations: V_out = 1 + 2 gamma N, vacuum level 1.
inline double output_quadrature_variance(const SpectralMatrix& sm,
                                         const QuadratureSelector& sel,
                                         const ModelParams& p) {
  if (sm.basis != Basis::Full)
    throw PreconditionViolation(
        "single-mode variances require a full-basis spectrum");
  const Vec8c v = detail::quad_vector_full(sel.band, sel.mode, sel.theta);
  const double n = detail::real_checked(detail::spectral_moment(sm, v, v));
  return 1.0 + 2.0 * band_gamma(p, sel.band) * n;
}

/// Output spectral variance of X1 +- X2 (axis X) or Y1 +- Y2 (axis Y) at
/// angle theta, with unit weights; the separable vacuum level is 2.
inline double combined_quadrature_variance(const SpectralMatrix& sm, Band band,
                                           int sign, QuadAxis axis,
                                           double theta,
                                           const ModelParams& p) {
  const double th =
      axis == QuadAxis::X ? theta : theta + std::numbers::pi / 2.0;
  const Vec8c v = detail::quad_vector_combined(sm.basis, band, sign, th);
  const double n = detail::real_checked(detail::spectral_moment(sm, v, v));
  return 2.0 + 2.0 * band_gamma(p, band) * n;
}

enum class AngleObjective { DuanSum, EprProduct, SingleModeV };

}  // namespace dimer

#endif
