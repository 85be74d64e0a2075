#ifndef DIMER_DETAIL_POLY_HPP
#define DIMER_DETAIL_POLY_HPP

#include <array>
#include <cmath>
#include <complex>

namespace dimer::detail {

using Cx = std::complex<double>;

// One root of z^3 + a z^2 + b z + c = 0 (Cardano, principal branches).
inline Cx cubic_root(Cx a, Cx b, Cx c) {
  const Cx p = b - a * a / 3.0;
  const Cx q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
  const Cx disc = std::sqrt(q * q / 4.0 + p * p * p / 27.0);
  Cx u = -q / 2.0 + disc;
  if (std::abs(u) < std::abs(-q / 2.0 - disc)) u = -q / 2.0 - disc;
  const Cx s = std::pow(u, 1.0 / 3.0);
  Cx y;
  if (std::abs(s) < 1e-300) {
    y = Cx(0.0);
  } else {
    y = s - p / (3.0 * s);
  }
  return y - a / 3.0;
}

// Roots of the monic quartic z^4 + a3 z^3 + a2 z^2 + a1 z + a0 = 0
// (Ferrari), each refined by two Newton steps on the original polynomial.
inline std::array<Cx, 4> quartic_roots(Cx a3, Cx a2, Cx a1, Cx a0) {
  // depressed quartic y^4 + p y^2 + q y + r, z = y - a3/4
  const Cx sh = a3 / 4.0;
  const Cx p = a2 - 3.0 * a3 * a3 / 8.0;
  const Cx q = a1 - a3 * a2 / 2.0 + a3 * a3 * a3 / 8.0;
  const Cx r = a0 - a3 * a1 / 4.0 + a3 * a3 * a2 / 16.0 -
               3.0 * a3 * a3 * a3 * a3 / 256.0;

  std::array<Cx, 4> roots;
  if (std::abs(q) < 1e-14 * (1.0 + std::abs(p) + std::abs(r))) {
    // biquadratic
    const Cx d = std::sqrt(p * p / 4.0 - r);
    const Cx y1 = std::sqrt(-p / 2.0 + d);
    const Cx y2 = std::sqrt(-p / 2.0 - d);
    roots = {y1, -y1, y2, -y2};
  } else {
    // resolvent cubic: m^3 - p m^2 - 4 r m + (4 p r - q^2) = 0
    const Cx m = cubic_root(-p, -4.0 * r, 4.0 * p * r - q * q);
    Cx w = std::sqrt(m - p);
    if (std::abs(w) < 1e-150) w = Cx(1e-150);
    const Cx t = q / (2.0 * w);
    // y^4 + p y^2 + q y + r = (y^2 + w y + m/2 - t)(y^2 - w y + m/2 + t)
    const Cx d1 = std::sqrt(w * w / 4.0 - (m / 2.0 - t));
    const Cx d2 = std::sqrt(w * w / 4.0 - (m / 2.0 + t));
    roots = {-w / 2.0 + d1, -w / 2.0 - d1, w / 2.0 + d2, w / 2.0 - d2};
  }
  for (auto& z : roots) {
    z -= sh;
    for (int it = 0; it < 2; ++it) {
      const Cx f = (((z + a3) * z + a2) * z + a1) * z + a0;
      const Cx fp = ((4.0 * z + 3.0 * a3) * z + 2.0 * a2) * z + a1;
      if (std::abs(fp) > 1e-300) z -= f / fp;
    }
  }
  return roots;
}

}  // namespace dimer::detail

#endif
