#ifndef DIMER_TYPES_HPP
#define DIMER_TYPES_HPP

#include <cmath>
#include <complex>

#include <Eigen/Dense>

#include "dimer/errors.hpp"

namespace dimer {

using Complex = std::complex<double>;
using Vec8c = Eigen::Matrix<Complex, 8, 1>;
using Mat8c = Eigen::Matrix<Complex, 8, 8>;

inline constexpr Complex I{0.0, 1.0};

/// Physical rates, couplings, detunings and pumps of the coupled-SHG dimer.
/// All rates are in units of the fundamental cavity loss rate.
struct ModelParams {
  double kappa = 0.01;    // effective chi(2) nonlinearity
  double gamma_a = 1.0;   // fundamental cavity damping
  double gamma_b = 1.0;   // harmonic cavity damping
  double j_a = 0.0;       // evanescent coupling, fundamental
  double j_b = 0.0;       // evanescent coupling, harmonic
  double delta_a = 0.0;   // cavity detuning, fundamental
  double delta_b = 0.0;   // cavity detuning, harmonic
  Complex eps1{0.0, 0.0}; // pump amplitude, waveguide 1
  Complex eps2{0.0, 0.0}; // pump amplitude, waveguide 2

  void validate() const {
    if (!(kappa > 0.0)) throw PreconditionViolation("kappa must be > 0");
    if (!(gamma_a > 0.0)) throw PreconditionViolation("gamma_a must be > 0");
    if (!(gamma_b > 0.0)) throw PreconditionViolation("gamma_b must be > 0");
    if (j_a < 0.0) throw PreconditionViolation("j_a must be >= 0");
    if (j_b < 0.0) throw PreconditionViolation("j_b must be >= 0");
    if (!std::isfinite(delta_a) || !std::isfinite(delta_b))
      throw PreconditionViolation("detunings must be finite");
    if (!std::isfinite(eps1.real()) || !std::isfinite(eps1.imag()) ||
        !std::isfinite(eps2.real()) || !std::isfinite(eps2.imag()))
      throw PreconditionViolation("pump amplitudes must be finite");
  }
};

/// The 8 c-number amplitudes of the doubled phase space.
/// In a deterministic steady state a_jp == conj(a_j) and b_jp == conj(b_j);
/// the pairs are independent only along stochastic paths.
struct PhaseSpaceState {
  Complex a1{}, a1p{}, a2{}, a2p{};
  Complex b1{}, b1p{}, b2{}, b2p{};

  Vec8c vec() const {
    Vec8c v;
    v << a1, a1p, a2, a2p, b1, b1p, b2, b2p;
    return v;
  }

  static PhaseSpaceState from_vec(const Vec8c& v) {
    return {v(0), v(1), v(2), v(3), v(4), v(5), v(6), v(7)};
  }
};

/// Steady state of the symmetric detuned configuration (delta = J, equal
/// real pumps): the difference amplitudes vanish and the sums are real.
struct SymmetricSteady {
  double alpha_plus = 0.0;
  double beta_plus = 0.0;
  double chi_aux = 0.0;

  PhaseSpaceState to_state() const {
    PhaseSpaceState s;
    s.a1 = s.a1p = s.a2 = s.a2p = Complex(alpha_plus / 2.0, 0.0);
    s.b1 = s.b1p = s.b2 = s.b2p = Complex(beta_plus / 2.0, 0.0);
    return s;
  }
};

enum class Band { Fundamental, Harmonic };
enum class QuadAxis { X, Y };

inline double band_gamma(const ModelParams& p, Band band) {
  return band == Band::Fundamental ? p.gamma_a : p.gamma_b;
}

}  // namespace dimer

#endif
