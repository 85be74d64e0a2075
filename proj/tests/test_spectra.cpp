#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "dimer/dimer.hpp"

using namespace dimer;

namespace {

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

TEST_CASE("zero diffusion gives exact vacuum variances") {
  ModelParams p;
  p.kappa = 0.01;
  p.gamma_a = p.gamma_b = 1.0;
  p.j_a = 1.0;
  p.j_b = 0.5;
  LinearizedSystem sys = build_drift_full(p, PhaseSpaceState{});
  REQUIRE(sys.b_mat.cwiseAbs().maxCoeff() == 0.0);
  for (double w : {0.0, 1.3, -7.0}) {
    const auto sm = intracavity_spectrum(sys, w);
    for (double th : {0.0, 0.4, 1.2}) {
      CHECK(output_quadrature_variance(
                sm, {Band::Fundamental, ModeIndex::One, th}, p) == 1.0);
      CHECK(output_quadrature_variance(
                sm, {Band::Harmonic, ModeIndex::Two, th}, p) == 1.0);
      CHECK(combined_quadrature_variance(sm, Band::Fundamental, +1, QuadAxis::X,
                                         th, p) == 2.0);
      CHECK(combined_quadrature_variance(sm, Band::Harmonic, -1, QuadAxis::Y,
                                         th, p) == 2.0);
    }
  }
}

TEST_CASE("spectra decay to vacuum at large frequency") {
  const ModelParams p = resonant(1.0, 1.0, 0.8);
  const auto sys = build_drift_full(p, steady_state_numeric(p));
  const auto near = intracavity_spectrum(sys, 0.0);
  const auto far = intracavity_spectrum(sys, 500.0);
  const QuadratureSelector sel{Band::Fundamental, ModeIndex::One, 0.0};
  const double v_far = output_quadrature_variance(far, sel, p);
  CHECK(std::abs(v_far - 1.0) < 1e-3);  // ~ 1/omega^2 tail
  CHECK(std::abs(output_quadrature_variance(near, sel, p) - 1.0) >
        100.0 * std::abs(v_far - 1.0));
}

TEST_CASE("uncoupled resonant operation squeezes the fundamental") {
  const ModelParams p = resonant(0.0, 0.0, 0.8);
  const auto sys = build_drift_full(p, steady_state_numeric(p));
  const auto sm = intracavity_spectrum(sys, 0.0);
  const double vx = output_quadrature_variance(
      sm, {Band::Fundamental, ModeIndex::One, 0.0}, p);
  const double vy = output_quadrature_variance(
      sm, {Band::Fundamental, ModeIndex::One, std::numbers::pi / 2.0}, p);
  CHECK(vx < 1.0);       // squeezed
  CHECK(vy > 1.0);       // anti-squeezed
  CHECK(vx * vy >= 1.0 - 1e-8);  // uncertainty product
}

TEST_CASE("variance is pi-periodic in the quadrature angle") {
  const ModelParams p = resonant(2.0, 1.0, 0.8);
  const auto sys = build_drift_full(p, steady_state_numeric(p));
  const auto sm = intracavity_spectrum(sys, 2.0);
  for (double th : {0.0, 0.3, 1.0, 2.5}) {
    const double a = output_quadrature_variance(
        sm, {Band::Fundamental, ModeIndex::One, th}, p);
    const double b = output_quadrature_variance(
        sm, {Band::Fundamental, ModeIndex::One, th + std::numbers::pi}, p);
    CHECK(a == Catch::Approx(b).epsilon(1e-10));
  }
}

TEST_CASE("spectrum is symmetric under swapping the two cavities") {
  const ModelParams p = resonant(2.0, 0.5, 0.7);
  const auto sys = build_drift_full(p, steady_state_numeric(p));
  for (double w : {0.0, 1.0, 5.0}) {
    const auto sm = intracavity_spectrum(sys, w);
    for (double th : {0.0, 0.7}) {
      const double v1 = output_quadrature_variance(
          sm, {Band::Fundamental, ModeIndex::One, th}, p);
      const double v2 = output_quadrature_variance(
          sm, {Band::Fundamental, ModeIndex::Two, th}, p);
      CHECK(v1 == Catch::Approx(v2).epsilon(1e-10));
      const double h1 = output_quadrature_variance(
          sm, {Band::Harmonic, ModeIndex::One, th}, p);
      const double h2 = output_quadrature_variance(
          sm, {Band::Harmonic, ModeIndex::Two, th}, p);
      CHECK(h1 == Catch::Approx(h2).epsilon(1e-10));
    }
  }
}

TEST_CASE("spectral symmetry S(-w) = S(w)^T") {
  const ModelParams p = resonant(1.0, 1.0, 0.8);
  const auto sys = build_drift_full(p, steady_state_numeric(p));
  const auto sp = intracavity_spectrum(sys, 3.7);
  const auto sn = intracavity_spectrum(sys, -3.7);
  CHECK((sp.s - sn.s.transpose()).cwiseAbs().maxCoeff() <
        1e-12 * sp.s.cwiseAbs().maxCoeff());
}

TEST_CASE("pm-basis combined quadratures match the full basis") {
  ModelParams p;
  p.kappa = 0.01;
  p.gamma_a = 1.0;
  p.gamma_b = 2.0;
  p.j_a = p.delta_a = 10.0;
  p.j_b = p.delta_b = 2.0;
  p.eps1 = p.eps2 = 0.8 * critical_pump(p);
  const auto sym = steady_state_symmetric(p);
  const auto full = build_drift_full(p, sym.to_state());
  const auto pm = build_pm_system(p, sym);
  for (double w : {0.0, 1.0, 4.0, 18.0}) {
    const auto smf = intracavity_spectrum(full, w);
    const auto smp = intracavity_spectrum(pm, w);
    for (int sign : {+1, -1})
      for (double th : {0.0, 0.9}) {
        const double a = combined_quadrature_variance(
            smf, Band::Fundamental, sign, QuadAxis::X, th, p);
        const double b = combined_quadrature_variance(
            smp, Band::Fundamental, sign, QuadAxis::X, th, p);
        INFO("w=" << w << " sign=" << sign << " th=" << th);
        CHECK(a == Catch::Approx(b).epsilon(1e-8));
      }
  }
}

TEST_CASE("singular resolvent is reported") {
  LinearizedSystem sys;  // A = 0 is singular at omega = 0
  sys.b_mat = Mat8c::Identity();
  CHECK_THROWS_AS(intracavity_spectrum(sys, 0.0), SingularSystem);
}

TEST_CASE("single-mode variance rejects the pm basis") {
  ModelParams p;
  p.kappa = 0.01;
  p.gamma_a = p.gamma_b = 1.0;
  p.j_a = p.delta_a = 1.0;
  p.j_b = p.delta_b = 1.0;
  p.eps1 = p.eps2 = 0.5 * critical_pump(p);
  const auto pm = build_pm_system(p, steady_state_symmetric(p));
  const auto sm = intracavity_spectrum(pm, 1.0);
  CHECK_THROWS_AS(output_quadrature_variance(
                      sm, {Band::Fundamental, ModeIndex::One, 0.0}, p),
                  PreconditionViolation);
}
