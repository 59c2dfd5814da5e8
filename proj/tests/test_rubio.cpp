#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "core/expr.hpp"
#include "core/operators.hpp"
#include "core/rubio.hpp"

using namespace hardy;

namespace {
GridSpec box() { return GridSpec(1, {-8, 0}, {8, 0}, 1.0 / 256); }
}  // namespace

TEST_CASE("configuration preconditions") {
  CHECK_THROWS_AS(IterationConfig(0, 1.5), GridError);
  CHECK_THROWS_AS(IterationConfig(4, 1.0), GridError);
  IterationConfig ok(12, 1.5);
  CHECK(ok.kMax == 12);

  // M is unbounded on L^1: the norm estimate must refuse r_- <= 1
  ExponentFunction one = ExponentFunction::constant(box(), 1.0);
  CHECK_THROWS_AS(estimate_maximal_opnorm(one, 10), GridError);
}

TEST_CASE("operator norm estimate is deterministic and sensible") {
  ExponentFunction two = ExponentFunction::constant(box(), 2.0);
  MaximalNormEstimate e1 = estimate_maximal_opnorm(two, 40, 11);
  MaximalNormEstimate e2 = estimate_maximal_opnorm(two, 40, 11);
  CHECK(e1.B == e2.B);
  CHECK(e1.max_ratio == e2.max_ratio);
  CHECK(e1.B == doctest::Approx(1.5 * e1.max_ratio));
  // M dominates averages of nonnegative data: ratios reach at least 1
  CHECK(e1.max_ratio >= 1.0 - 1e-9);
  CHECK(std::isfinite(e1.B));
  CHECK_FALSE(e1.witnesses.empty());
}

TEST_CASE("iteration on the constant function matches the geometric series") {
  GridSpec s = box();
  ExponentFunction two = ExponentFunction::constant(s, 2.0);
  GridFunction one = sample_expr(s, "const:1");
  IterationConfig cfg(12, 1.7);

  IterateResult r = iterate(one, cfg, two);
  // M 1 = 1 exactly, so Rh = sum_{k<=kMax} (2B)^{-k} everywhere
  double expect = 0;
  for (int k = 0; k <= cfg.kMax; ++k) expect += std::pow(2.0 * cfg.B, -k);
  std::size_t mid = 0;
  s.locate({0.0, 0.0}, mid);
  CHECK(r.Rh[mid] == doctest::Approx(expect).epsilon(1e-10));
  CHECK(r.tail_bound > 0);
  CHECK(r.tail_bound < 1e-2);
}

TEST_CASE("two-term truncation is exact") {
  GridSpec s = box();
  ExponentFunction two = ExponentFunction::constant(s, 2.0);
  GridFunction h = sample_expr(s, "indicator:0,1");
  IterationConfig cfg(1, 1.5);
  IterateResult r = iterate(h, cfg, two);
  GridFunction Mh = hl_maximal(h);
  for (std::size_t i = 0; i < h.size(); ++i)
    CHECK(r.Rh[i] == doctest::Approx(h[i] + Mh[i] / (2.0 * cfg.B)).epsilon(1e-12));
}

TEST_CASE("iteration basics") {
  GridSpec s = box();
  ExponentFunction two = ExponentFunction::constant(s, 2.0);
  IterationConfig cfg(6, 1.5);

  GridFunction zero(s);
  IterateResult rz = iterate(zero, cfg, two);
  CHECK(rz.Rh.max_abs() == 0.0);
  CHECK(rz.tail_bound == 0.0);

  GridFunction h = sample_expr(s, "indicator:-1,2");
  IterateResult r = iterate(h, cfg, two);
  // pointwise majorant (the k = 0 term)
  for (std::size_t i = 0; i < h.size(); ++i) CHECK(r.Rh[i] >= h[i] - 1e-12);

  // homogeneity: R(3h) = 3 Rh
  GridFunction h3 = h;
  h3 *= 3.0;
  IterateResult r3 = iterate(h3, cfg, two);
  for (std::size_t i = 0; i < h.size(); ++i)
    CHECK(r3.Rh[i] == doctest::Approx(3.0 * r.Rh[i]).epsilon(1e-12));

  GridFunction neg = sample_expr(s, "const:-1");
  CHECK_THROWS_AS(iterate(neg, cfg, two), GridError);
}

TEST_CASE("property suite on constant and variable exponents") {
  GridSpec s = box();
  CubeFamily F = CubeFamily::dyadic(s, 6, 200);

  ExponentFunction two = ExponentFunction::constant(s, 2.0);
  GridFunction h = sample_expr(s, "indicator:0,1");
  MaximalNormEstimate est = estimate_maximal_opnorm(two, 40, 11);
  IterationConfig cfg(12, est.B);
  IterationReport rep = check_iteration_properties(h, cfg, two, F);
  REQUIRE(rep.properties.size() >= 4);
  for (const auto& p : rep.properties) {
    INFO(p.name, ": ", p.lhs, " vs ", p.rhs);
    CHECK(p.pass);
  }
  CHECK(rep.all_pass);

  // genuinely variable exponent with r_- > 1
  ExponentFunction rv(sample_expr(s, "pc:2.5;-8,0:1.6"));
  MaximalNormEstimate estv = estimate_maximal_opnorm(rv, 40, 11);
  IterationConfig cfgv(12, estv.B);
  GridFunction hv = sample_expr(s, "bump:1,2,1");
  IterationReport repv = check_iteration_properties(hv, cfgv, rv, F);
  for (const auto& p : repv.properties) {
    INFO(p.name, ": ", p.lhs, " vs ", p.rhs);
    CHECK(p.pass);
  }
  CHECK(repv.all_pass);

  // an adversarial spike still satisfies the four properties
  GridFunction spike = GridFunction::sample(s, [&](double x, double) {
    return std::abs(x - 0.3) < 2.0 * s.spacing() ? 50.0 : 0.0;
  });
  IterationReport reps = check_iteration_properties(spike, cfg, two, F);
  CHECK(reps.all_pass);
}

TEST_CASE("A1 constant of the constant iterate is one") {
  GridSpec s = box();
  CubeFamily F = CubeFamily::dyadic(s, 6, 200);
  ExponentFunction two = ExponentFunction::constant(s, 2.0);
  GridFunction one = sample_expr(s, "const:1");
  IterateResult r = iterate(one, IterationConfig(8, 1.5), two);
  Weight w(r.Rh);
  CHECK(a1_constant(w, F) == doctest::Approx(1.0).epsilon(1e-12));
}
