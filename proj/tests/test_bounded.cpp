#include <doctest.h>

#include <cmath>
#include <numbers>

#include "bloch/errors.hpp"
#include "bloch/program.hpp"
#include "bloch/switching.hpp"
#include "bloch/synthesis.hpp"
#include "bloch/unbounded.hpp"
#include "frozen.hpp"

using namespace bloch;
using doctest::Approx;
using std::numbers::pi;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::InvalidArgument;
}

// Independent Simpson quadrature of da/dtheta = -sin^2 / (m - sin cos).
double transport_reference(double r0, double t0, double t1, double m, int n = 4000) {
  const double h = (t1 - t0) / n;
  auto f = [m](double t) { return -std::sin(t) * std::sin(t) / (m - std::sin(t) * std::cos(t)); };
  double sum = f(t0) + f(t1);
  for (int i = 1; i < n; ++i) sum += (i % 2 ? 4.0 : 2.0) * f(t0 + i * h);
  return r0 * std::exp(sum * h / 3.0);
}

}  // namespace

TEST_CASE("acot range") {
  CHECK(acot(1.0) == Approx(pi / 4));
  CHECK(acot(-1.0) == Approx(3 * pi / 4));
  CHECK(acot(0.0) == Approx(pi / 2));
  CHECK(acot(1e300) >= 0.0);
  CHECK(acot(-1e300) <= pi);
}

TEST_CASE("switching_angles examples") {
  auto d = switching_angles(0.0, 1.0);
  CHECK(d.first == Approx(pi / 4));
  CHECK(d.second == Approx(pi / 4));
  auto e = switching_angles(frozen::kExample1.kappa, 2.0);
  CHECK(e.first == Approx(frozen::kExample1.theta1).epsilon(1e-12));
  CHECK(e.second == Approx(frozen::kExample1.theta2).epsilon(1e-12));
  CHECK(std::abs(e.first - 0.6912) < 1e-3);
  CHECK(std::abs(e.second - 1.7766) < 1e-3);
  CHECK(code_of([] { switching_angles(1.0, 2.0); }) == ErrorCode::NoRealSwitch);
  CHECK(code_of([] { switching_angles(1.0, 0.5); }) == ErrorCode::BoundTooSmall);
  // m < 1: real for every kappa >= 0
  auto g = switching_angles(0.0, 0.95);
  CHECK(g.first < g.second);
}

TEST_CASE("kappa_from_switch examples and slot ranges") {
  CHECK(std::abs(kappa_from_switch(0.6912, 2, SwitchSlot::First) - 2.2382) < 1e-3);
  CHECK(std::abs(kappa_from_switch(0.6124, 2, SwitchSlot::First) - 2.5322) < 1e-3);
  CHECK(std::abs(kappa_from_switch(0.5442, 0.95, SwitchSlot::First) - 0.4766) < 1e-3);
  CHECK(code_of([] { kappa_from_switch(1.5, 2, SwitchSlot::First); }) == ErrorCode::AngleOutOfRange);
  CHECK(code_of([] { kappa_from_switch(0.5, 2, SwitchSlot::Second); }) ==
        ErrorCode::AngleOutOfRange);
  // round trip through switching_angles
  for (double m : {0.95, 1.0, 2.0, 5.0}) {
    for (int i = 1; i < 50; ++i) {
      const double t1 = first_switch_limit(m) * i / 50;
      const double k = kappa_from_switch(t1, m, SwitchSlot::First);
      CHECK(switching_angles(k, m).first == Approx(t1).epsilon(1e-9));
      const double t2 = second_switch_limit(m) + (pi - second_switch_limit(m)) * i / 50;
      const double k2 = kappa_from_switch(t2, m, SwitchSlot::Second);
      CHECK(switching_angles(k2, m).second == Approx(t2).epsilon(1e-9));
    }
  }
}

TEST_CASE("partner_angle examples and involution") {
  CHECK(std::abs(partner_angle(0.6912, 2) - 1.7766) < 1e-3);
  CHECK(partner_angle(pi / 4, 1) == Approx(pi / 4));
  CHECK(std::abs(partner_angle(0.5442, 0.95) - 1.1456) < 1e-3);
  for (double m : {0.6, 0.95, 1.0, 2.0, 5.0}) {
    for (int i = 1; i < 100; ++i) {
      const double t = pi * i / 100;
      CHECK(std::abs(partner_angle(partner_angle(t, m), m) - t) < 1e-12);
    }
  }
}

TEST_CASE("first_switch_radius examples") {
  CHECK(first_switch_radius(1e-9, 2.0) == Approx(1.0).epsilon(1e-9));
  for (double m : {1.0, 2.0, 5.0}) {
    CHECK(first_switch_radius(acot(1 / m), m) ==
          Approx(std::sqrt(m * m + 1) / (m + 1)).epsilon(1e-12));
  }
  CHECK(first_switch_radius(frozen::kM095_thetaB1, 0.95) == Approx(frozen::kM095_rB1).epsilon(1e-12));
  CHECK(code_of([] { first_switch_radius(1.3, 2.0); }) == ErrorCode::AngleOutOfRange);
}

TEST_CASE("saturated_arc_radius against independent quadrature") {
  CHECK(saturated_arc_radius(0.7, 1.1, 1.1, 2.0) == 0.7);
  CHECK(saturated_arc_radius(1, 0, pi, 2) == Approx(frozen::kM2.r_c1).epsilon(1e-13));
  CHECK(saturated_arc_radius(1, 0, pi / 2, 2) == Approx(frozen::kM2.r_d1).epsilon(1e-13));
  CHECK(std::exp(-pi / std::sqrt(15.0)) == Approx(frozen::kM2.r_c1).epsilon(1e-13));
  for (double m : {0.55, 0.95, 1.0, 2.0, 5.0}) {
    CHECK(saturated_arc_radius(0.8, 0.3, 2.9, m) ==
          Approx(transport_reference(0.8, 0.3, 2.9, m)).epsilon(1e-11));
    // composition
    const double ab = saturated_arc_radius(0.8, 0.2, 1.4, m);
    const double abc = saturated_arc_radius(ab, 1.4, 3.0, m);
    CHECK(std::abs(abc - saturated_arc_radius(0.8, 0.2, 3.0, m)) < 1e-12);
    CHECK(saturated_arc_radius(0.8, 0.2, 1.4, m) < 0.8);
  }
}

TEST_CASE("reachable_boundary examples") {
  CHECK(reachable_boundary(0.0, 3.0) == 1.0);
  CHECK(reachable_boundary(pi, 2.0) == Approx(frozen::kM2.r_c1).epsilon(1e-13));
  const double s = std::sqrt(2.61);
  CHECK(reachable_boundary(pi / 2, 0.95) == Approx(std::exp(-(pi - acot(1 / s)) / s)).epsilon(1e-12));
  CHECK(reachable_boundary(pi / 2, 0.95) == Approx(frozen::kM095.r_d1).epsilon(1e-12));
}

TEST_CASE("landmarks against frozen values") {
  for (const auto& f : {frozen::kM2, frozen::kM095, frozen::kM1, frozen::kM5}) {
    auto L = landmarks(f.m);
    CHECK(L.r_c1 == Approx(f.r_c1).epsilon(1e-12));
    CHECK(L.r_d1 == Approx(f.r_d1).epsilon(1e-12));
    CHECK(L.r_d2 == Approx(f.r_d2).epsilon(1e-11));
  }
  auto L2 = landmarks(2.0);
  CHECK(*L2.r_c2 == Approx(frozen::kM2_rC2));
  CHECK(*L2.r_d3 == Approx(frozen::kM2_rD3));
  CHECK(*L2.theta_b == Approx(acot(0.5)));
  CHECK(*L2.r_b == Approx(std::sqrt(5.0) / 3));
  CHECK(!L2.theta_b1.has_value());
  auto L5 = landmarks(5.0);
  CHECK(*L5.r_c2 == Approx(frozen::kM5_rC2));
  CHECK(*L5.r_d3 == Approx(frozen::kM5_rD3));
  auto L1 = landmarks(1.0);
  CHECK(*L1.theta_b == Approx(pi / 4));
  CHECK(*L1.r_b == Approx(std::sqrt(2.0) / 2));
  auto L095 = landmarks(0.95);
  CHECK(*L095.theta_b1 == Approx(frozen::kM095_thetaB1).epsilon(1e-12));
  CHECK(*L095.theta_b2 == Approx(frozen::kM095_thetaB2).epsilon(1e-12));
  CHECK(*L095.r_b1 == Approx(frozen::kM095_rB1).epsilon(1e-12));
  CHECK(*L095.r_b2 == Approx(frozen::kM095_rB2).epsilon(1e-11));
  CHECK(!L095.r_c2.has_value());
  CHECK(!L095.r_d3.has_value());
  CHECK(code_of([] { landmarks(0.5); }) == ErrorCode::BoundTooSmall);
}

TEST_CASE("landmark ordering over m") {
  for (double m = 1.0; m <= 10.0; m += 0.25) {
    auto L = landmarks(m);
    CHECK(L.r_c1 > *L.r_c2);
    CHECK(L.r_d1 > L.r_d2);
    CHECK(L.r_d2 > *L.r_d3);
  }
  for (double m = 0.51; m < 1.0; m += 0.02) {
    auto L = landmarks(m);
    CHECK(L.r_d1 > L.r_d2);
    CHECK(*L.theta_b1 < *L.theta_b2);
  }
}

TEST_CASE("curve consistency: second curve is the transported first curve") {
  for (double m : {0.95, 1.0, 2.0, 5.0}) {
    auto g = switching_geometry(m, 400);
    REQUIRE(g.first_curve.size() == g.second_curve.size());
    for (std::size_t i = 0; i < g.first_curve.size(); ++i) {
      const auto& p = g.first_curve[i];
      const auto& q = g.second_curve[i];
      CHECK(q.theta == Approx(partner_angle(p.theta, m)).epsilon(1e-12));
      CHECK(std::abs(q.r - saturated_arc_radius(p.r, p.theta, q.theta, m)) < 1e-10);
      CHECK(p.theta <= first_switch_limit(m) + 1e-12);
      CHECK(q.theta >= second_switch_limit(m) - 1e-12);
    }
    CHECK(g.reachable_boundary.front().r == Approx(1.0));
    CHECK(g.reachable_boundary.back().r == Approx(g.marks.r_c1));
  }
  auto g2 = switching_geometry(2.0, 400);
  CHECK(g2.first_curve.back().theta == Approx(acot(0.5)));
  CHECK(g2.first_curve.back().r == Approx(std::sqrt(5.0) / 3));
  CHECK(g2.second_curve.back().theta == Approx(acot(0.5)));
  auto g095 = switching_geometry(0.95, 400);
  CHECK(g095.first_curve.back().theta == Approx(frozen::kM095_thetaB1));
  CHECK(g095.second_curve.back().theta == Approx(frozen::kM095_thetaB2));
}

TEST_CASE("noswitch_max trajectory ends on r_C2 and r_D3") {
  CHECK(noswitch_max_radius(pi, 2.0) == Approx(1.0 / 3).epsilon(1e-12));
  CHECK(noswitch_max_radius(pi / 2, 2.0) == Approx(frozen::kM2_rD3).epsilon(1e-12));
  CHECK(noswitch_max_radius(frozen::kM095_thetaB2, 0.95) == Approx(frozen::kM095_rB2).epsilon(1e-11));
}

TEST_CASE("classify examples and boundaries") {
  CHECK(classify(2, {0.39, TargetAxis::Pi}) == Regime::TwoSwitch);
  CHECK(classify(2, {0.61, TargetAxis::HalfPi}) == Regime::OneSwitch);
  CHECK(classify(2, {0.5, TargetAxis::Pi}) == Regime::Unreachable);
  CHECK(classify(0.95, {0.2, TargetAxis::HalfPi}) == Regime::TwoSwitch);
  CHECK(classify(2, {0.3, TargetAxis::Pi}) == Regime::NoSwitch);
  CHECK(classify(2, {1.0 / 3, TargetAxis::Pi}) == Regime::NoSwitch);
  CHECK(classify(2, {frozen::kM2_rD3, TargetAxis::HalfPi}) == Regime::NoSwitch);
  CHECK(classify(2, {0.59, TargetAxis::HalfPi}) == Regime::TwoSwitch);
  CHECK(classify(2, {landmarks(2).r_d2, TargetAxis::HalfPi}) == Regime::TwoSwitch);
  CHECK(classify(2, {landmarks(2).r_d1, TargetAxis::HalfPi}) == Regime::OneSwitch);
  CHECK(classify(0.95, {0.05, TargetAxis::Pi}) == Regime::TwoSwitch);
  CHECK(classify(0.95, {0.265, TargetAxis::HalfPi}) == Regime::OneSwitch);
  CHECK(code_of([] { classify(0.5, {0.3, TargetAxis::Pi}); }) == ErrorCode::BoundTooSmall);
  CHECK(code_of([] { classify(2, {1.2, TargetAxis::Pi}); }) == ErrorCode::TargetOutOfRange);
}

TEST_CASE("required_second_switch_radius") {
  // empty final arc
  CHECK(required_second_switch_radius(pi / 2, {0.2, TargetAxis::HalfPi}, 0.5) ==
        Approx(0.2).epsilon(1e-12));
  CHECK(required_second_switch_radius(pi - 1e-9, {0.39, TargetAxis::Pi}, 2.0) ==
        Approx(0.39).epsilon(1e-6));
  const auto& e1 = frozen::kExample1;
  CHECK(required_second_switch_radius(e1.theta2, {0.39, TargetAxis::Pi}, e1.kappa) ==
        Approx(second_switch_radius(e1.theta2, 2.0)).epsilon(1e-9));
  const auto& e3 = frozen::kExample3;
  CHECK(required_second_switch_radius(e3.theta2, {0.2, TargetAxis::HalfPi}, e3.kappa) ==
        Approx(second_switch_radius(e3.theta2, 0.95)).epsilon(1e-9));
  CHECK(code_of([] { required_second_switch_radius(2.0, {0.3, TargetAxis::Pi}, 0.0); }) ==
        ErrorCode::DegenerateKappa);
}

TEST_CASE("worked examples synthesize to the frozen oracle") {
  auto p1 = synthesize(2.0, {0.39, TargetAxis::Pi});
  CHECK(p1.regime == Regime::TwoSwitch);
  CHECK(*p1.theta1 == Approx(frozen::kExample1.theta1).epsilon(1e-10));
  CHECK(*p1.theta2 == Approx(frozen::kExample1.theta2).epsilon(1e-10));
  CHECK(p1.kappa == Approx(frozen::kExample1.kappa).epsilon(1e-10));
  CHECK(p1.energy == Approx(frozen::kExample1.energy).epsilon(1e-9));

  auto p2 = synthesize(2.0, {0.61, TargetAxis::HalfPi});
  CHECK(p2.regime == Regime::OneSwitch);
  CHECK(!p2.theta2.has_value());
  CHECK(*p2.theta1 == Approx(frozen::kExample2.theta1).epsilon(1e-10));
  CHECK(p2.kappa == Approx(frozen::kExample2.kappa).epsilon(1e-10));
  CHECK(p2.energy == Approx(frozen::kExample2.energy).epsilon(1e-9));

  auto p3 = synthesize(0.95, {0.2, TargetAxis::HalfPi});
  CHECK(p3.regime == Regime::TwoSwitch);
  CHECK(*p3.theta1 == Approx(frozen::kExample3.theta1).epsilon(1e-10));
  CHECK(*p3.theta2 == Approx(frozen::kExample3.theta2).epsilon(1e-10));
  CHECK(p3.kappa == Approx(frozen::kExample3.kappa).epsilon(1e-10));
  CHECK(p3.energy == Approx(frozen::kExample3.energy).epsilon(1e-9));

  auto p0 = synthesize(2.0, {0.3, TargetAxis::Pi});
  CHECK(p0.regime == Regime::NoSwitch);
  CHECK(p0.kappa == Approx(2 * std::sqrt(0.3) / 0.7));
  CHECK(p0.energy == Approx(1.3 / 0.7).epsilon(1e-9));

  auto pu = synthesize(kUnboundedControl, {0.6, TargetAxis::HalfPi});
  CHECK(pu.kappa == Approx(1.875));
  CHECK(pu.energy == Approx(1.5625).epsilon(1e-9));
}

TEST_CASE("synthesize errors") {
  try {
    synthesize(2.0, {0.5, TargetAxis::Pi});
    FAIL("expected UnreachableError");
  } catch (const UnreachableError& e) {
    CHECK(e.limit_radius() == Approx(frozen::kM2.r_c1).epsilon(1e-12));
  }
  CHECK(code_of([] { synthesize(0.4, {0.3, TargetAxis::Pi}); }) == ErrorCode::BoundTooSmall);
  CHECK(max_reachable_radius(kUnboundedControl, TargetAxis::Pi) == 1.0);
}

TEST_CASE("one-switch boundary cases") {
  const auto L = landmarks(2.0);
  // theta1 shrinks toward zero as r_tau approaches r_D1 from below
  double prev = 1.0;
  for (double gap : {1e-3, 1e-5, 1e-7, 1e-9}) {
    const double t1 = *solve_one_switch(2.0, L.r_d1 - gap).theta1;
    CHECK(t1 < prev);
    prev = t1;
  }
  CHECK(prev < 1e-2);
  auto near_d2 = solve_one_switch(2.0, L.r_d2 + 1e-9);
  // the saturated arc ends on the second switching curve at pi/2
  CHECK(*near_d2.theta1 == Approx(partner_angle(pi / 2, 2.0)).epsilon(1e-6));
}

TEST_CASE("two-switch near r_C2 degenerates to the joint point B") {
  auto p = synthesize(2.0, {1.0 / 3 + 1e-6, TargetAxis::Pi});
  CHECK(p.regime == Regime::TwoSwitch);
  CHECK(std::abs(*p.theta1 - acot(0.5)) < 2e-2);
  CHECK(std::abs(*p.theta2 - acot(0.5)) < 2e-2);
  CHECK(std::abs(p.kappa - std::sqrt(3.0)) < 1e-3);
}

TEST_CASE("program invariants over a sweep") {
  for (double m : {0.7, 0.95, 1.0, 1.5, 2.0, 5.0}) {
    for (auto axis : {TargetAxis::HalfPi, TargetAxis::Pi}) {
      const double rmax = max_reachable_radius(m, axis);
      for (int i = 1; i <= 9; ++i) {
        const double r = rmax * i / 10.0;
        auto p = synthesize(m, {r, axis});
        // segments tile [0, target angle]
        REQUIRE(!p.segments.empty());
        CHECK(p.segments.front().theta_lo == 0.0);
        CHECK(p.segments.back().theta_hi == Approx(p.target.angle()));
        for (std::size_t k = 1; k < p.segments.size(); ++k) {
          CHECK(p.segments[k].theta_lo == p.segments[k - 1].theta_hi);
        }
        if (p.theta1) {
          CHECK(std::abs(unbounded_control(*p.theta1, p.kappa) - m) < 1e-8);
        }
        if (p.theta2) {
          CHECK(std::abs(unbounded_control(*p.theta2, p.kappa) - m) < 1e-8);
          CHECK(std::abs(1 / std::tan(*p.theta1) + 1 / std::tan(*p.theta2) - 2 / m) < 1e-9);
          for (int j = 1; j < 20; ++j) {
            const double th = *p.theta1 + (*p.theta2 - *p.theta1) * j / 20;
            CHECK(unbounded_control(th, p.kappa) > m);
          }
        }
      }
    }
  }
}

TEST_CASE("energy is non-decreasing in r_tau") {
  for (double m : {0.95, 2.0}) {
    for (auto axis : {TargetAxis::HalfPi, TargetAxis::Pi}) {
      const double rmax = max_reachable_radius(m, axis);
      double prev = 0.0;
      for (int i = 1; i < 60; ++i) {
        const double e = synthesize(m, {rmax * i / 60.0, axis}).energy;
        CHECK(e >= prev);
        prev = e;
      }
    }
  }
}

TEST_CASE("regime boundaries are continuous") {
  const auto L = landmarks(2.0);
  struct Edge {
    double r;
    TargetAxis axis;
  };
  for (Edge e : {Edge{*L.r_c2, TargetAxis::Pi}, Edge{L.r_d2, TargetAxis::HalfPi},
                 Edge{*L.r_d3, TargetAxis::HalfPi}}) {
    auto lo = synthesize(2.0, {e.r - 1e-4, e.axis});
    auto hi = synthesize(2.0, {e.r + 1e-4, e.axis});
    CHECK(lo.regime != hi.regime);
    CHECK(std::abs(lo.energy - hi.energy) < 1e-2);
    CHECK(std::abs(lo.kappa - hi.kappa) < 1e-2);
  }
  auto L95 = landmarks(0.95);
  auto lo = synthesize(0.95, {L95.r_d2 - 1e-4, TargetAxis::HalfPi});
  auto hi = synthesize(0.95, {L95.r_d2 + 1e-4, TargetAxis::HalfPi});
  CHECK(std::abs(lo.energy - hi.energy) < 1e-2);
  CHECK(std::abs(*lo.theta1 - *hi.theta1) < 1e-2);
}

TEST_CASE("lambda_a equals dE/da_tau for bounded programs") {
  struct Case {
    double m, r;
    TargetAxis axis;
  };
  for (Case c : {Case{2.0, 0.39, TargetAxis::Pi}, Case{2.0, 0.61, TargetAxis::HalfPi},
                 Case{0.95, 0.2, TargetAxis::HalfPi}, Case{2.0, 0.59, TargetAxis::HalfPi}}) {
    const double a = std::log(c.r), h = 1e-4;
    const double ep = synthesize(c.m, {std::exp(a + h), c.axis}).energy;
    const double em = synthesize(c.m, {std::exp(a - h), c.axis}).energy;
    const auto p = synthesize(c.m, {c.r, c.axis});
    CHECK((ep - em) / (2 * h) == Approx(p.lambda_a()).epsilon(1e-3));
  }
}

TEST_CASE("quadrature and time-domain energies agree") {
  struct Case {
    double m, r;
    TargetAxis axis;
  };
  for (Case c : {Case{2.0, 0.39, TargetAxis::Pi}, Case{2.0, 0.61, TargetAxis::HalfPi},
                 Case{0.95, 0.2, TargetAxis::HalfPi}, Case{2.0, 0.3, TargetAxis::Pi},
                 Case{kUnboundedControl, 0.6, TargetAxis::HalfPi}}) {
    auto p = synthesize(c.m, {c.r, c.axis});
    auto tr = simulate_program(p);
    CHECK(tr.energy == Approx(p.energy).epsilon(1e-5));
    CHECK(std::abs(tr.back().state.radius() - c.r) < 1e-3);
  }
}

TEST_CASE("simulation converges under step halving") {
  auto p = synthesize(2.0, {0.39, TargetAxis::Pi});
  StepControl a, b;
  b.step = 0.5e-4;
  const double ra = simulate_program(p, a).back().state.radius();
  const double rb = simulate_program(p, b).back().state.radius();
  CHECK(std::abs(ra - rb) < 1e-6);
}

TEST_CASE("synthesis is deterministic") {
  auto a = synthesize(0.95, {0.2, TargetAxis::HalfPi});
  auto b = synthesize(0.95, {0.2, TargetAxis::HalfPi});
  CHECK(a.kappa == b.kappa);
  CHECK(*a.theta1 == *b.theta1);
  CHECK(*a.theta2 == *b.theta2);
  CHECK(a.energy == b.energy);
}
