#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "core/expr.hpp"
#include "core/rng.hpp"
#include "core/varlebesgue.hpp"
#include "core/weights.hpp"

using namespace hardy;

namespace {
GridSpec box() { return GridSpec(1, {-8, 0}, {8, 0}, 1.0 / 256); }
}  // namespace

TEST_CASE("piecewise Luxemburg norm oracle") {
  // f = 3 on [0,1/2), 1 on [1/2,1); p = 4 on [0,1/2), 2 elsewhere.
  // The norm is the root of (3/l)^4 / 2 + (1/l)^2 / 2 = 1, frozen independently.
  GridSpec s = box();
  GridFunction f = sample_expr(s, "pc:0;0,0.5:3;0.5,1:1");
  ExponentFunction p(sample_expr(s, "pc:2;0,0.5:4"));
  CHECK(luxemburg_norm(f, p) == doctest::Approx(2.5727163857348323).epsilon(1e-8));
}

TEST_CASE("modular basics") {
  GridSpec s = box();
  GridFunction chi = sample_expr(s, "indicator:0,1");
  ExponentFunction two = ExponentFunction::constant(s, 2.0);
  CHECK(modular(chi, 1.0, two) == doctest::Approx(1.0).epsilon(s.spacing()));
  CHECK(modular(chi, 2.0, two) == doctest::Approx(0.25).epsilon(s.spacing()));
}

TEST_CASE("constant-exponent collapse to the classical norm") {
  GridSpec s = box();
  Weight one(sample_expr(s, "const:1"));
  Rng rng(2024);
  for (int trial = 0; trial < 20; ++trial) {
    double p0 = trial == 0 ? 0.7 : 0.5 + 3.0 * rng.uniform();
    GridFunction f = GridFunction::sample(s, [&](double x, double) {
      return (x >= -2 && x < 2) ? std::cos(3 * x + trial) + 1.5 : 0.0;
    });
    ExponentFunction p = ExponentFunction::constant(s, p0);
    double lux = luxemburg_norm(f, p);
    double cls = weighted_Lp_norm(f, p0, one);
    CHECK(lux == doctest::Approx(cls).epsilon(1e-8));
  }

  GridFunction f2 = sample_expr(s, "indicator:0,1");
  f2 *= 2.0;
  ExponentFunction two = ExponentFunction::constant(s, 2.0);
  CHECK(luxemburg_norm(f2, two) == doctest::Approx(2.0).epsilon(s.spacing()));
}

TEST_CASE("modular at the norm equals one") {
  GridSpec s = box();
  GridFunction f = sample_expr(s, "pc:0;-1,0:2;0,3:0.5");
  ExponentFunction p(sample_expr(s, "pc:1.5;-8,0:0.7"));
  double lam = luxemburg_norm(f, p);
  REQUIRE(lam > 0);
  CHECK(modular(f, lam, p) == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("Luxemburg norm is homogeneous and vanishes only at zero") {
  GridSpec s = box();
  GridFunction f = sample_expr(s, "bump:0,2,1.5");
  ExponentFunction p(sample_expr(s, "pc:2;-8,0:1.3"));
  double n1 = luxemburg_norm(f, p);
  GridFunction g = f;
  g *= 2.0;
  CHECK(luxemburg_norm(g, p) == doctest::Approx(2.0 * n1).epsilon(1e-8));

  GridFunction zero(s);
  CHECK(luxemburg_norm(zero, p) == 0.0);
}

TEST_CASE("exponent bookkeeping") {
  GridSpec s = box();
  ExponentFunction two = ExponentFunction::constant(s, 2.0);
  CHECK(two.p_minus() == 2.0);
  CHECK(two.p_plus() == 2.0);
  CHECK(two.is_constant());
  CHECK(two.lh_constants().c0 == doctest::Approx(0.0));
  CHECK(two.lh_constants().cinf == doctest::Approx(0.0));
  CHECK(two.lh_constants().p_inf == doctest::Approx(2.0));

  // p' for constant exponents: 2 -> 2, 4 -> 4/3
  CHECK(two.conjugate().p_minus() == doctest::Approx(2.0));
  ExponentFunction four = ExponentFunction::constant(s, 4.0);
  CHECK(four.conjugate().p_plus() == doctest::Approx(4.0 / 3.0));

  // (p/p0)' with p = 3, p0 = 1.5: conjugate of 2 is 2
  ExponentFunction three = ExponentFunction::constant(s, 3.0);
  CHECK(three.ratio(1.5).conjugate().p_minus() == doctest::Approx(2.0));
  CHECK(three.scaled(2.0).p_plus() == doctest::Approx(6.0));

  ExponentFunction one = ExponentFunction::constant(s, 1.0);
  CHECK_THROWS_AS(one.conjugate(), GridError);

  ExponentFunction lh(sample_expr(s, "log:2,0.5"));
  CHECK(std::isfinite(lh.lh_constants().c0));
  CHECK(std::isfinite(lh.lh_constants().cinf));
  CHECK_FALSE(lh.is_constant());
}

TEST_CASE("Holder pairing") {
  GridSpec s = box();
  ExponentFunction two = ExponentFunction::constant(s, 2.0);
  GridFunction chi = sample_expr(s, "indicator:0,1");
  HolderPairing hp = holder_pairing(chi, chi, two);
  CHECK(hp.lhs == doctest::Approx(1.0).epsilon(s.spacing()));
  CHECK(hp.lhs <= hp.rhs + 1e-12);

  GridFunction far = sample_expr(s, "indicator:2,3");
  HolderPairing disjoint = holder_pairing(chi, far, two);
  CHECK(disjoint.lhs == doctest::Approx(0.0));

  ExponentFunction pvar(sample_expr(s, "pc:2.5;-8,0:1.4"));
  GridFunction f = sample_expr(s, "bump:1,2,2");
  GridFunction g = sample_expr(s, "pc:0;-3,4:1.2");
  HolderPairing hv = holder_pairing(f, g, pvar);
  CHECK(hv.lhs <= hv.rhs + 1e-12);
}
