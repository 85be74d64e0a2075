#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "dimer/dimer.hpp"

using namespace dimer;

namespace {

// two-mode squeezed vacuum covariance matrix in (X1, Y1, X2, Y2);
// closed forms: Duan min = 4 e^{-2r}, EPR = 1/cosh^2(2r), E_N = 2r/ln 2
CovarianceMatrix4 tmsv(double r) {
  const double c = std::cosh(2.0 * r), s = std::sinh(2.0 * r);
  CovarianceMatrix4 cm;
  cm.c << c, 0, s, 0,
          0, c, 0, -s,
          s, 0, c, 0,
          0, -s, 0, c;
  return cm;
}

ModelParams resonant(double ja, double jb, double ratio) {
  ModelParams p;
  p.kappa = 0.01;
  p.gamma_a = p.gamma_b = 1.0;
  p.j_a = ja;
  p.j_b = jb;
  p.eps1 = p.eps2 = ratio * critical_pump(p);
  return p;
}

}  // namespace

TEST_CASE("identity covariance matrix sits exactly on every bound") {
  CovarianceMatrix4 cm;  // vacuum
  const auto d = duan_sum(cm);
  CHECK(d.value == 4.0);
  CHECK(d.xm_yp == 4.0);
  CHECK(d.xp_ym == 4.0);
  CHECK(epr_product(cm) == 1.0);
  CHECK(log_negativity(cm, LogNegVariant::Standard).value == 0.0);
  CHECK(log_negativity(cm, LogNegVariant::PaperLiteral).value == 0.0);
}

TEST_CASE("two-mode squeezed family against closed forms") {
  for (double r : {0.05, 0.2, 0.5, 1.0}) {
    const auto cm = tmsv(r);
    INFO("r=" << r);
    // V(X1 - X2) = V(Y1 + Y2) = 2 e^{-2r}
    const auto d = duan_sum(cm);
    CHECK(d.value == Catch::Approx(4.0 * std::exp(-2.0 * r)).epsilon(1e-12));
    CHECK(d.which == DuanCombination::XmYp);
    // conditional variance cosh2r - sinh^2 2r / cosh 2r = 1 / cosh 2r
    CHECK(epr_product(cm) ==
          Catch::Approx(1.0 / std::pow(std::cosh(2.0 * r), 2)).epsilon(1e-12));
    // smallest PT symplectic eigenvalue e^{-2r} -> E_N = 2r / ln 2
    CHECK(log_negativity(cm, LogNegVariant::Standard).value ==
          Catch::Approx(2.0 * r / std::log(2.0)).epsilon(1e-10));
  }
}

TEST_CASE("criteria hierarchy on the squeezed family") {
  for (double r : {0.1, 0.4, 0.8}) {
    const auto cm = tmsv(r);
    CHECK(epr_product(cm) < 1.0);
    CHECK(log_negativity(cm, LogNegVariant::Standard).value > 0.0);
    CHECK(duan_sum(cm).value < 4.0);
  }
}

TEST_CASE("degenerate conditioner is rejected") {
  CovarianceMatrix4 cm;
  cm.c(2, 2) = 0.0;
  CHECK_THROWS_AS(epr_product(cm), DegenerateConditioner);
}

TEST_CASE("literal log-negativity variant matches on symmetric states") {
  // det C1 = det C2 for the physical spectra here; both variants coincide
  const ModelParams p = resonant(1.0, 1.0, 0.8);
  const auto sys = build_drift_full(p, steady_state_numeric(p));
  for (double w : {0.0, 1.0, 3.0}) {
    const auto sm = intracavity_spectrum(sys, w);
    for (double th : {0.0, 0.6}) {
      const auto cm = build_cm(sm, Band::Fundamental, th, p);
      const auto s = log_negativity(cm, LogNegVariant::Standard);
      const auto l = log_negativity(cm, LogNegVariant::PaperLiteral);
      if (!l.complex_radicand)
        CHECK(s.value == Catch::Approx(l.value).margin(1e-9));
    }
  }
}

TEST_CASE("log negativity is invariant under the common quadrature angle") {
  const ModelParams p = resonant(2.0, 1.0, 0.8);
  const auto sys = build_drift_full(p, steady_state_numeric(p));
  const auto sm = intracavity_spectrum(sys, 1.5);
  const double ref =
      log_negativity(build_cm(sm, Band::Fundamental, 0.0, p),
                     LogNegVariant::Standard)
          .value;
  for (double th : {0.2, 0.9, 1.7, 2.8}) {
    const double v =
        log_negativity(build_cm(sm, Band::Fundamental, th, p),
                       LogNegVariant::Standard)
            .value;
    CHECK(v == Catch::Approx(ref).margin(1e-8));
  }
}

TEST_CASE("EPR violation implies nonzero log negativity") {
  const ModelParams p = resonant(2.0, 1.0, 0.8);
  const auto sys = build_drift_full(p, steady_state_numeric(p));
  int epr_hits = 0;
  for (double w = 0.0; w <= 10.0; w += 0.5) {
    const auto sm = intracavity_spectrum(sys, w);
    const auto [th, duan] =
        optimize_angle(sys, w, AngleObjective::DuanSum, Band::Fundamental, p);
    const auto cm = build_cm(sm, Band::Fundamental, th, p);
    if (epr_product(cm) < 1.0 - 1e-9) {
      ++epr_hits;
      CHECK(log_negativity(cm, LogNegVariant::Standard).value > 0.0);
    }
    if (duan < 4.0 - 1e-9)
      CHECK(log_negativity(cm, LogNegVariant::Standard).value > 0.0);
  }
  CHECK(epr_hits > 0);  // the scan must actually exercise the implication
}

TEST_CASE("angle optimizer beats the axes and is locally optimal") {
  ModelParams p;
  p.kappa = 0.01;
  p.gamma_a = 1.0;
  p.gamma_b = 2.0;
  p.j_a = p.delta_a = 10.0;
  p.j_b = p.delta_b = 2.0;
  p.eps1 = p.eps2 = 0.8 * critical_pump(p);
  const auto sys = build_drift_full(p, steady_state_symmetric(p).to_state());
  const double w = 1.0;
  const auto [th, val] =
      optimize_angle(sys, w, AngleObjective::DuanSum, Band::Fundamental, p);
  const auto sm = intracavity_spectrum(sys, w);
  auto at = [&](double theta) {
    return evaluate_angle_objective(sm, AngleObjective::DuanSum,
                                    Band::Fundamental, theta, p);
  };
  CHECK(val <= at(0.0) + 1e-12);
  CHECK(val <= at(std::numbers::pi / 2.0) + 1e-12);
  CHECK(val <= at(th + 1e-3) + 1e-10);
  CHECK(val <= at(th - 1e-3) + 1e-10);
  CHECK(th >= 0.0);
  CHECK(th < std::numbers::pi);
}

TEST_CASE("symmetric dimer criteria are band-consistent with the spectra") {
  const ModelParams p = resonant(1.0, 1.0, 0.8);
  const auto sys = build_drift_full(p, steady_state_numeric(p));
  const auto sm = intracavity_spectrum(sys, 1.0);
  for (int b = 0; b < 2; ++b) {
    const Band band = b == 0 ? Band::Fundamental : Band::Harmonic;
    const auto cm = build_cm(sm, band, 0.3, p);
    // CM diagonal equals the single-mode variances at the same angles
    CHECK(cm.c(0, 0) == Catch::Approx(output_quadrature_variance(
                            sm, {band, ModeIndex::One, 0.3}, p))
                            .epsilon(1e-12));
    CHECK(cm.c(3, 3) ==
          Catch::Approx(output_quadrature_variance(
                            sm,
                            {band, ModeIndex::Two,
                             0.3 + std::numbers::pi / 2.0},
                            p))
              .epsilon(1e-12));
    // Duan sums reconstruct from combined quadratures
    const double xp =
        combined_quadrature_variance(sm, band, +1, QuadAxis::X, 0.3, p);
    const double ym =
        combined_quadrature_variance(sm, band, -1, QuadAxis::Y, 0.3, p);
    CHECK(duan_sum(cm).xp_ym == Catch::Approx(xp + ym).epsilon(1e-10));
  }
}
