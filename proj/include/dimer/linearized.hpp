#ifndef DIMER_LINEARIZED_HPP
#define DIMER_LINEARIZED_HPP

#include <array>
#include <cmath>
#include <complex>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "dimer/detail/poly.hpp"
#include "dimer/model.hpp"
#include "dimer/types.hpp"

namespace dimer {

enum class Basis { Full, PlusMinus };

/// Drift matrix A and diffusion factor B of the fluctuation equation
///   d dx = -A dx dt + B dW
/// about a steady state, in either the mode basis or the sum/difference basis.
struct LinearizedSystem {
  Mat8c a_mat = Mat8c::Zero();
  Mat8c b_mat = Mat8c::Zero();
  Basis basis = Basis::Full;
};

/// Linearization in the (da1, da1+, da2, da2+, db1, db1+, db2, db2+) basis.
/// Block layout [[A_aa, -A_ba*], [A_ba, A_bb]]; B carries the four noise
/// amplitudes sqrt(kappa b_j) on its leading diagonal (principal branch).
inline LinearizedSystem build_drift_full(const ModelParams& p,
                                         const PhaseSpaceState& ss) {
  p.validate();
  const double k = p.kappa;
  const Complex ga_p = Complex(p.gamma_a, p.delta_a);
  const Complex ga_m = Complex(p.gamma_a, -p.delta_a);
  const Complex gb_p = Complex(p.gamma_b, p.delta_b);
  const Complex gb_m = Complex(p.gamma_b, -p.delta_b);
  const Complex ija = I * p.j_a;
  const Complex ijb = I * p.j_b;

  LinearizedSystem sys;
  sys.basis = Basis::Full;
  Mat8c& A = sys.a_mat;

  // A_aa
  A(0, 0) = ga_p;  A(0, 1) = -k * ss.b1;  A(0, 2) = -ija;
  A(1, 0) = -k * ss.b1p;  A(1, 1) = ga_m;  A(1, 3) = ija;
  A(2, 0) = -ija;  A(2, 2) = ga_p;  A(2, 3) = -k * ss.b2;
  A(3, 1) = ija;  A(3, 2) = -k * ss.b2p;  A(3, 3) = ga_m;
  // A_ba and -A_ba^* (the steady state has a_jp = conj(a_j))
  A(4, 0) = k * ss.a1;  A(5, 1) = k * ss.a1p;
  A(6, 2) = k * ss.a2;  A(7, 3) = k * ss.a2p;
  A(0, 4) = -k * ss.a1p;  A(1, 5) = -k * ss.a1;
  A(2, 6) = -k * ss.a2p;  A(3, 7) = -k * ss.a2;
  // A_bb
  A(4, 4) = gb_p;  A(4, 6) = -ijb;
  A(5, 5) = gb_m;  A(5, 7) = ijb;
  A(6, 4) = -ijb;  A(6, 6) = gb_p;
  A(7, 5) = ijb;  A(7, 7) = gb_m;

  sys.b_mat(0, 0) = std::sqrt(k * ss.b1);
  sys.b_mat(1, 1) = std::sqrt(k * ss.b1p);
  sys.b_mat(2, 2) = std::sqrt(k * ss.b2);
  sys.b_mat(3, 3) = std::sqrt(k * ss.b2p);
  return sys;
}

/// Linearization in the sum/difference basis
/// (da+, da+^+, da-, da-^+, db+, db+^+, db-, db-^+) for the symmetric
/// detuned configuration. This is the exact similarity transform of the
/// full drift: the difference sector keeps its nonlinear couplings
/// (-kappa b+/2, -+kappa a+/2), which reduce to a pure
/// (gamma +- 2iJ) diagonal only at zero pump.
inline LinearizedSystem build_pm_system(const ModelParams& p,
                                        const SymmetricSteady& sym) {
  p.validate();
  detail::require_symmetric_detuned(p);
  const double ka = 0.5 * p.kappa * sym.alpha_plus;
  const double kb = 0.5 * p.kappa * sym.beta_plus;
  const Complex ija2 = 2.0 * I * p.j_a;
  const Complex ijb2 = 2.0 * I * p.j_b;

  LinearizedSystem sys;
  sys.basis = Basis::PlusMinus;
  Mat8c& A = sys.a_mat;

  // sum sector (a+, a+^+, b+, b+^+)
  A(0, 0) = p.gamma_a;  A(0, 1) = -kb;  A(0, 4) = -ka;
  A(1, 0) = -kb;  A(1, 1) = p.gamma_a;  A(1, 5) = -ka;
  A(4, 0) = ka;  A(4, 4) = p.gamma_b;
  A(5, 1) = ka;  A(5, 5) = p.gamma_b;
  // difference sector (a-, a-^+, b-, b-^+)
  A(2, 2) = p.gamma_a + ija2;  A(2, 3) = -kb;  A(2, 6) = -ka;
  A(3, 2) = -kb;  A(3, 3) = p.gamma_a - ija2;  A(3, 7) = -ka;
  A(6, 2) = ka;  A(6, 6) = p.gamma_b + ijb2;
  A(7, 3) = ka;  A(7, 7) = p.gamma_b - ijb2;

  const Complex nb = std::sqrt(Complex(0.5 * p.kappa * sym.beta_plus, 0.0));
  Mat8c& B = sys.b_mat;
  B(0, 0) = nb;  B(0, 2) = nb;
  B(1, 1) = nb;  B(1, 3) = nb;
  B(2, 0) = nb;  B(2, 2) = -nb;
  B(3, 1) = nb;  B(3, 3) = -nb;
  return sys;
}

/// Closed-form eigenvalues of the sum/difference drift matrix. The first
/// four come from the radical expressions for the sum sector; the last four
/// are the roots of the difference-sector quartic, which collapse to
/// gamma_a +- 2i J_a and gamma_b +- 2i J_b at zero pump.
inline std::array<Complex, 8> analytic_eigenvalues_pm(
    const ModelParams& p, const SymmetricSteady& sym) {
  p.validate();
  detail::require_symmetric_detuned(p);
  const double ga = p.gamma_a, gb = p.gamma_b;
  const double G = ga + gb;
  const double kb = p.kappa * sym.beta_plus;          // kappa b+
  const double ka2 = p.kappa * p.kappa * sym.alpha_plus * sym.alpha_plus;

  std::array<Complex, 8> lam;
  {
    const Complex rad1 = std::sqrt(
        Complex(std::pow(4.0 * G - 2.0 * kb, 2) -
                    16.0 * (4.0 * ga * gb - 2.0 * gb * kb + ka2),
                0.0));
    lam[0] = (Complex(4.0 * G - 2.0 * kb, 0.0) + rad1) / 8.0;
    lam[1] = (Complex(4.0 * G - 2.0 * kb, 0.0) - rad1) / 8.0;
    const Complex rad2 = std::sqrt(
        Complex(std::pow(2.0 * G + kb, 2) -
                    4.0 * (4.0 * ga * gb + 2.0 * gb * kb + ka2),
                0.0));
    lam[2] = (Complex(4.0 * G + 2.0 * kb, 0.0) + 2.0 * rad2) / 8.0;
    lam[3] = (Complex(4.0 * G + 2.0 * kb, 0.0) - 2.0 * rad2) / 8.0;
  }

  // Difference sector: det(A- - lam) expands to
  //   [(ga+u-l)(gb+v-l)+c^2][(ga-u-l)(gb-v-l)+c^2] - d^2 (gb+v-l)(gb-v-l)
  // with u = 2i J_a, v = 2i J_b, c = kappa a+/2, d = kappa b+/2.
  {
    const Complex u = 2.0 * I * p.j_a, v = 2.0 * I * p.j_b;
    const double c = 0.5 * p.kappa * sym.alpha_plus;
    const double d = 0.5 * kb;
    // (x - l)(y - l) + e = l^2 - (x+y) l + (xy + e)
    auto quad = [](Complex x, Complex y, Complex e) {
      return std::array<Complex, 3>{Complex(1.0), -(x + y), x * y + e};
    };
    const auto q1 = quad(Complex(ga) + u, Complex(gb) + v, Complex(c * c));
    const auto q2 = quad(Complex(ga) - u, Complex(gb) - v, Complex(c * c));
    const auto q3 = quad(Complex(gb) + v, Complex(gb) - v, Complex(0.0));
    std::array<Complex, 5> poly{};
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) poly[i + j] += q1[i] * q2[j];
    for (int i = 0; i < 3; ++i) poly[i + 2] -= d * d * q3[i];
    const auto roots =
        detail::quartic_roots(poly[1], poly[2], poly[3], poly[4]);
    for (int i = 0; i < 4; ++i) lam[4 + i] = roots[i];
  }
  return lam;
}

/// Stationary second moments of the fluctuations, C = <dx dx^T>, from the
/// Lyapunov equation A C + C A^T = B B^T (vectorized 64x64 solve).
inline Mat8c lyapunov_covariance(const LinearizedSystem& sys) {
  const Mat8c& A = sys.a_mat;
  const Mat8c Q = sys.b_mat * sys.b_mat.transpose();
  Eigen::Matrix<Complex, 64, 64> M = Eigen::Matrix<Complex, 64, 64>::Zero();
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j)
      for (int k = 0; k < 8; ++k) {
        M(j * 8 + i, j * 8 + k) += A(i, k);
        M(j * 8 + i, k * 8 + i) += A(j, k);
      }
  Eigen::Matrix<Complex, 64, 1> q;
  for (int j = 0; j < 8; ++j)
    for (int i = 0; i < 8; ++i) q(j * 8 + i) = Q(i, j);
  const auto lu = M.partialPivLu();
  const Eigen::Matrix<Complex, 64, 1> cv = lu.solve(q);
  Mat8c C;
  for (int j = 0; j < 8; ++j)
    for (int i = 0; i < 8; ++i) C(i, j) = cv(j * 8 + i);
  return C;
}

/// Leading noise-induced displacement of the stationary mean away from the
/// classical fixed point: averaging the quadratic drift terms over the
/// stationary fluctuations gives A <dx> = h with h built from kappa-weighted
/// second moments. The stochastic ensemble mean converges to
/// steady state + this shift, not to the bare classical solution.
inline Vec8c noise_mean_shift(const ModelParams& p,
                              const LinearizedSystem& sys) {
  if (sys.basis != Basis::Full)
    throw PreconditionViolation("mean shift requires the full-basis system");
  const Mat8c C = lyapunov_covariance(sys);
  Vec8c h;
  h(0) = p.kappa * C(1, 4);
  h(1) = p.kappa * C(0, 5);
  h(2) = p.kappa * C(3, 6);
  h(3) = p.kappa * C(2, 7);
  h(4) = -0.5 * p.kappa * C(0, 0);
  h(5) = -0.5 * p.kappa * C(1, 1);
  h(6) = -0.5 * p.kappa * C(2, 2);
  h(7) = -0.5 * p.kappa * C(3, 3);
  return sys.a_mat.partialPivLu().solve(h);
}

struct StabilityReport {
  std::array<Complex, 8> eigenvalues{};
  bool stable = false;
  bool self_pulsing = false;
  double margin = 0.0;  // minimum real part
};

inline std::array<Complex, 8> drift_eigenvalues(const LinearizedSystem& sys) {
  if (!sys.a_mat.allFinite())
    throw EigenSolveFailure("drift matrix has non-finite entries");
  Eigen::ComplexEigenSolver<Mat8c> solver(sys.a_mat, false);
  if (solver.info() != Eigen::Success)
    throw EigenSolveFailure("complex eigen-solver did not converge");
  std::array<Complex, 8> ev;
  for (int i = 0; i < 8; ++i) ev[i] = solver.eigenvalues()(i);
  return ev;
}

/// Stability per the -A sign convention: fluctuations decay iff all
/// eigenvalues of A keep a positive real part. Self-pulsing is flagged when
/// an oscillatory eigenvalue sits on the imaginary axis within tol_sp.
inline StabilityReport classify_stability(const LinearizedSystem& sys,
                                          double tol_sp = -1.0) {
  StabilityReport rep;
  rep.eigenvalues = drift_eigenvalues(sys);
  if (tol_sp < 0.0) {
    double scale = 0.0;
    for (const auto& l : rep.eigenvalues) scale = std::max(scale, std::abs(l));
    tol_sp = 1e-6 * std::max(scale, 1.0);
  }
  rep.margin = rep.eigenvalues[0].real();
  for (const auto& l : rep.eigenvalues) {
    rep.margin = std::min(rep.margin, l.real());
    if (std::abs(l.real()) < tol_sp && std::abs(l.imag()) > tol_sp)
      rep.self_pulsing = true;
  }
  rep.stable = rep.margin > 0.0 && !rep.self_pulsing;
  return rep;
}

}  // namespace dimer

#endif
