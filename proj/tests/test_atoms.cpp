#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "core/atoms.hpp"
#include "core/expr.hpp"
#include "core/operators.hpp"

using namespace hardy;

namespace {
GridSpec box() { return GridSpec(1, {-8, 0}, {8, 0}, 1.0 / 256); }
}  // namespace

TEST_CASE("moment order bookkeeping") {
  // ratio = r_w / p (weighted) or 1 / p_- (variable)
  MomentOrders a = moment_order_required(1, 1.0);
  CHECK(a.s == 0);
  CHECK(a.N == 1);
  CHECK(a.L == 0);

  MomentOrders b = moment_order_required(1, 1.6);
  CHECK(b.s == 0);
  CHECK(b.N == 1);
  CHECK(b.L == 0);

  MomentOrders c = moment_order_required(1, 2.5);
  CHECK(c.s == 1);
  CHECK(c.N == 2);
  CHECK(c.L == 1);

  MomentOrders d = moment_order_required(1, 0.5);
  CHECK(d.s == 0);
  CHECK(d.N == 1);
  CHECK(d.L == -1);

  MomentOrders e = moment_order_required(2, 1.6);
  CHECK(e.s == 1);  // floor(2 * 0.6)
  CHECK(e.N == 2);
  CHECK(e.L == 1);
}

TEST_CASE("make_atom on a mean-zero two-step profile returns it normalized") {
  GridSpec s = box();
  Cube Q{{0.0, 0}, 1.0, false};
  GridFunction raw = GridFunction::sample(s, [](double x, double) {
    if (x < 0 || x >= 1) return 0.0;
    return x < 0.5 ? 2.0 : -2.0;
  });
  Atom atom = make_atom(raw, Q, 0);
  CHECK_FALSE(atom.zero_flag);
  CHECK(verify_atom(atom));
  CHECK(atom.a.max_abs() == doctest::Approx(1.0).epsilon(1e-12));
  // shape preserved: still the two-step profile after normalization
  std::size_t left = 0, right = 0;
  s.locate({0.25, 0.0}, left);
  s.locate({0.75, 0.0}, right);
  CHECK(atom.a[left] == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(atom.a[right] == doctest::Approx(-1.0).epsilon(1e-10));
}

TEST_CASE("constants and polynomials are annihilated by the projection") {
  GridSpec s = box();
  Cube Q{{-1.0, 0}, 2.0, false};
  GridFunction one = GridFunction::sample(
      s, [](double x, double) { return (x >= -1 && x < 1) ? 1.0 : 0.0; });
  Atom z = make_atom(one, Q, 0);
  CHECK(z.zero_flag);

  GridFunction lin = GridFunction::sample(
      s, [](double x, double) { return (x >= -1 && x < 1) ? (3 * x - 0.5) : 0.0; });
  Atom z2 = make_atom(lin, Q, 1);
  CHECK(z2.zero_flag);

  // the same linear profile survives when only the mean is removed
  Atom keep = make_atom(lin, Q, 0);
  CHECK_FALSE(keep.zero_flag);
  CHECK(verify_atom(keep));
}

TEST_CASE("verify_atom rejects broken atoms") {
  GridSpec s = box();
  Cube Q{{0.0, 0}, 1.0, false};
  Atom bad{Q, 0,
           GridFunction::sample(s, [](double x, double) {
             return (x >= 0 && x < 1) ? 1.0 : 0.0;  // nonzero mean
           }),
           false};
  std::string why;
  CHECK_FALSE(verify_atom(bad, &why));
  CHECK_FALSE(why.empty());

  // no moment condition (N = -1), so only the support check can fail
  Atom spill{Q, -1,
             GridFunction::sample(s, [](double x, double) {
               return (x >= 0 && x < 2) ? 0.5 : 0.0;  // sticks out of Q
             }),
             false};
  CHECK_FALSE(verify_atom(spill, &why));
}

TEST_CASE("random atomic sums are deterministic and valid") {
  GridSpec s = box();
  AtomicSum s1 = random_atomic_sum(s, 2, 16, 1);
  AtomicSum s2 = random_atomic_sum(s, 2, 16, 1);
  REQUIRE(s1.size() == 16);
  REQUIRE(s2.size() == 16);
  for (std::size_t i = 0; i < s1.size(); ++i) {
    CHECK(s1.lambdas[i] == s2.lambdas[i]);
    CHECK(verify_atom(s1.atoms[i]));
    for (std::size_t j = 0; j < s1.atoms[i].a.size(); ++j)
      CHECK(s1.atoms[i].a[j] == s2.atoms[i].a[j]);  // bit-identical
    // cubes live in the inner half-box with room for Q**
    Cube qss = star(star(s1.atoms[i].Q, 1), 1);
    CHECK(qss.corner[0] >= s.lo(0) - 1e-12);
    CHECK(qss.corner[0] + qss.side <= s.hi(0) + 1e-12);
  }

  AtomicSum single = random_atomic_sum(s, 1, 1, 1);
  REQUIRE(single.size() == 1);
  CHECK(verify_atom(single.atoms[0]));
}

TEST_CASE("profiles re-render consistently across refinements") {
  GridSpec s = box();
  AtomicSumSpec spec = random_atomic_sum_spec(s, 77, 2, 1);
  AtomicSum coarse = render_atomic_sum(spec, s);
  AtomicSum fine = render_atomic_sum(spec, s.refined());
  REQUIRE(coarse.size() == fine.size());
  for (std::size_t i = 0; i < coarse.size(); ++i) {
    CHECK(coarse.lambdas[i] == fine.lambdas[i]);
    CHECK(coarse.atoms[i].Q.corner[0] == fine.atoms[i].Q.corner[0]);
    CHECK(coarse.atoms[i].Q.side == fine.atoms[i].Q.side);
    CHECK(verify_atom(fine.atoms[i]));
  }
}

TEST_CASE("coefficient norm of indicator sums") {
  GridSpec s = box();
  Space L2 = Space::weighted(2.0, Weight(sample_expr(s, "const:1")));
  Space L1 = Space::weighted(1.0, Weight(sample_expr(s, "const:1")));

  AtomicSum one;
  one.lambdas = {3.0};
  Atom a{Cube{{0.0, 0}, 0.25, false}, 0, GridFunction(s), false};
  one.atoms = {a};
  // || lambda chi_Q ||_{L^p} = lambda |Q|^{1/p}
  CHECK(coefficient_norm(one, L2) == doctest::Approx(3.0 * 0.5).epsilon(1e-10));

  AtomicSum two = one;
  Atom b = a;
  b.Q = Cube{{2.0, 0}, 0.5, false};
  two.lambdas.push_back(4.0);
  two.atoms.push_back(b);
  // disjoint cubes at p = 1: additivity
  CHECK(coefficient_norm(two, L1) ==
        doctest::Approx(3.0 * 0.25 + 4.0 * 0.5).epsilon(1e-10));

  GridFunction sum = two.indicator_sum();
  CHECK(integrate(sum) == doctest::Approx(3.0 * 0.25 + 4.0 * 0.5).epsilon(1e-10));
}

TEST_CASE("assembled sums and the Hardy quasinorm") {
  GridSpec s = box();
  AtomicSum sum = random_atomic_sum(s, 5, 2, 1);
  GridFunction g = sum.assemble();
  GridFunction manual = sum.lambdas[0] * sum.atoms[0].a + sum.lambdas[1] * sum.atoms[1].a;
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(g[i] == doctest::Approx(manual[i]));

  MollifierSpec phi(1);
  auto tGrid = MollifierSpec::default_t_grid(s.spacing());
  Space L2 = Space::weighted(2.0, Weight(sample_expr(s, "const:1")));
  GridFunction zero(s);
  CHECK(hardy_quasinorm(zero, phi, tGrid, L2) == 0.0);
  double q = hardy_quasinorm(g, phi, tGrid, L2);
  CHECK(q > 0);
  CHECK(std::isfinite(q));
}
