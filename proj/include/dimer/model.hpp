#ifndef DIMER_MODEL_HPP
#define DIMER_MODEL_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>

#include "dimer/types.hpp"

namespace dimer {

/// Self-pulsing threshold pump amplitude of a single uncoupled SHG cavity.
inline double critical_pump(const ModelParams& p) {
  p.validate();
  return (2.0 * p.gamma_a + p.gamma_b) / p.kappa *
         std::sqrt(2.0 * p.gamma_b * (p.gamma_a + p.gamma_b));
}

/// Deterministic part of the phase-space equations of motion (noise dropped).
inline Vec8c deterministic_derivative(const ModelParams& p, const Vec8c& x) {
  const Complex a1 = x(0), a1p = x(1), a2 = x(2), a2p = x(3);
  const Complex b1 = x(4), b1p = x(5), b2 = x(6), b2p = x(7);
  const Complex da = Complex(p.gamma_a, p.delta_a);
  const Complex dac = Complex(p.gamma_a, -p.delta_a);
  const Complex db = Complex(p.gamma_b, p.delta_b);
  const Complex dbc = Complex(p.gamma_b, -p.delta_b);

  Vec8c f;
  f(0) = p.eps1 - da * a1 + p.kappa * a1p * b1 + I * p.j_a * a2;
  f(1) = std::conj(p.eps1) - dac * a1p + p.kappa * a1 * b1p - I * p.j_a * a2p;
  f(2) = p.eps2 - da * a2 + p.kappa * a2p * b2 + I * p.j_a * a1;
  f(3) = std::conj(p.eps2) - dac * a2p + p.kappa * a2 * b2p - I * p.j_a * a1p;
  f(4) = -db * b1 - 0.5 * p.kappa * a1 * a1 + I * p.j_b * b2;
  f(5) = -dbc * b1p - 0.5 * p.kappa * a1p * a1p - I * p.j_b * b2p;
  f(6) = -db * b2 - 0.5 * p.kappa * a2 * a2 + I * p.j_b * b1;
  f(7) = -dbc * b2p - 0.5 * p.kappa * a2p * a2p - I * p.j_b * b1p;
  return f;
}

namespace detail {

inline double rate_scale(const ModelParams& p) {
  return std::max({p.gamma_a, p.gamma_b, p.j_a, p.j_b,
                   std::abs(p.delta_a), std::abs(p.delta_b)});
}

inline Vec8c rk4_step(const ModelParams& p, const Vec8c& x, double h) {
  const Vec8c k1 = deterministic_derivative(p, x);
  const Vec8c k2 = deterministic_derivative(p, Vec8c(x + 0.5 * h * k1));
  const Vec8c k3 = deterministic_derivative(p, Vec8c(x + 0.5 * h * k2));
  const Vec8c k4 = deterministic_derivative(p, Vec8c(x + h * k3));
  return x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace detail

/// Relax the noise-free equations from vacuum until the derivative max-norm
/// drops below tol. Throws NonConvergence at t_max and Unstable on blow-up.
inline PhaseSpaceState steady_state_numeric(const ModelParams& p,
                                            double tol = 1e-12,
                                            double t_max = 1e4) {
  p.validate();
  const double rates = detail::rate_scale(p);
  const double h = 0.01 / rates;
  // tolerance is relative to the working amplitude scale; an absolute
  // derivative norm below machine round-off is unreachable for bright fields
  const auto threshold = [&](const Vec8c& x) {
    return tol * std::max({1.0, rates * x.cwiseAbs().maxCoeff(),
                           std::abs(p.eps1), std::abs(p.eps2)});
  };
  Vec8c x = Vec8c::Zero();
  double t = 0.0;
  int since_check = 0;
  while (t < t_max) {
    x = detail::rk4_step(p, x, h);
    t += h;
    if (++since_check >= 10) {
      since_check = 0;
      if (x.cwiseAbs().maxCoeff() > 1e6)
        throw Unstable("steady_state_numeric: amplitudes diverging at t=" +
                       std::to_string(t));
      if (deterministic_derivative(p, x).cwiseAbs().maxCoeff() < threshold(x))
        return PhaseSpaceState::from_vec(x);
    }
  }
  if (deterministic_derivative(p, x).cwiseAbs().maxCoeff() < threshold(x))
    return PhaseSpaceState::from_vec(x);
  throw NonConvergence(
      "steady_state_numeric: derivative norm not below tolerance by t_max "
      "(unstable or self-pulsing regime?)");
}

namespace detail {

inline void require_symmetric_detuned(const ModelParams& p) {
  const double scale = std::max(1.0, rate_scale(p));
  if (std::abs(p.delta_a - p.j_a) > 1e-12 * scale ||
      std::abs(p.delta_b - p.j_b) > 1e-12 * scale)
    throw PreconditionViolation(
        "symmetric solver requires delta_a = j_a and delta_b = j_b");
  if (std::abs(p.eps1 - p.eps2) > 1e-12 * std::max(1.0, std::abs(p.eps1)))
    throw PreconditionViolation("symmetric solver requires eps1 = eps2");
  if (std::abs(p.eps1.imag()) > 1e-12 * std::max(1.0, std::abs(p.eps1)) ||
      p.eps1.real() < 0.0)
    throw PreconditionViolation(
        "symmetric solver requires a real non-negative pump");
}

}  // namespace detail

/// Closed-form symmetric steady state: the real root of
///   kappa^2/(8 gamma_b) a+^3 + gamma_a a+ - 2 eps = 0
/// via the auxiliary cube-root substitution, then b+ = -kappa a+^2/(4 gamma_b).
inline SymmetricSteady steady_state_symmetric(const ModelParams& p) {
  p.validate();
  detail::require_symmetric_detuned(p);
  const double eps = p.eps1.real();
  if (eps == 0.0) return {0.0, 0.0, 0.0};

  const double k = p.kappa, ga = p.gamma_a, gb = p.gamma_b;
  const double disc = 24.0 * std::pow(k, 6) * std::pow(ga, 3) * std::pow(gb, 3) +
                      81.0 * std::pow(k, 8) * gb * gb * eps * eps;
  const double chi =
      std::cbrt(9.0 * std::pow(k, 4) * gb * eps + std::sqrt(disc));
  const double alpha_plus = 2.0 * chi / (std::pow(3.0, 2.0 / 3.0) * k * k) -
                            4.0 * ga * gb / (std::pow(3.0, 1.0 / 3.0) * chi);
  const double beta_plus = -(k / (4.0 * gb)) * alpha_plus * alpha_plus;
  return {alpha_plus, beta_plus, chi};
}

/// Residual of the symmetric-state cubic; vanishes at the exact root.
inline double symmetric_cubic_residual(const ModelParams& p, double alpha_plus) {
  const double eps = p.eps1.real();
  return p.kappa * p.kappa / (8.0 * p.gamma_b) * std::pow(alpha_plus, 3) +
         p.gamma_a * alpha_plus - 2.0 * eps;
}

}  // namespace dimer

#endif
