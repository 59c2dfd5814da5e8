#pragma once

#include <cstdint>
#include <vector>

#include "grid.hpp"
#include "spaces.hpp"

namespace hardy {

// A sup-normalized, moment-free function supported in a cube.  N = -1 means
// no moment condition.
struct Atom {
  Cube Q;
  int N = 0;
  GridFunction a;
  bool zero_flag = false;  // projection annihilated the raw profile
};

// checks sup <= 1 + 1e-12, support containment, and centered moments up to N
// within 1e-10 * |Q| * l(Q)^{|beta|}
bool verify_atom(const Atom& atom, std::string* why = nullptr);

// subtract the L^2(Q) projection onto polynomials of degree <= N, then divide
// by the sup norm
Atom make_atom(const GridFunction& raw, const Cube& Q, int N);

// smallest admissible moment order for the theorem checks:
//   weighted: s_w = floor(n (r_w/p - 1))_+ and N = s_w + 1
//   variable: s   = floor(n (1/p_- - 1))_+ and N = s + 1
// L = max(floor(n (ratio - 1)), -1) for the non-convolution theorems
struct MomentOrders {
  int s = 0;  // the floor value (clamped at 0)
  int N = 1;  // minimal admissible moment order
  int L = 0;  // non-convolution vanishing-moment order
};
MomentOrders moment_order_required(int dim, double ratio);  // ratio = r_w/p or 1/p_-

struct AtomicSum {
  std::vector<double> lambdas;
  std::vector<Atom> atoms;
  std::size_t size() const { return atoms.size(); }

  GridFunction assemble() const;             // sum lambda_i a_i
  GridFunction indicator_sum(double dilation = 1.0) const;  // sum lambda_i chi_{dilation Q_i}
};

// ||sum lambda_i chi_{Q_i}||_X
double coefficient_norm(const AtomicSum& s, const Space& X);

// ||M_phi g||_X
double hardy_quasinorm(const GridFunction& g, const MollifierSpec& phi,
                       const std::vector<double>& tGrid, const Space& X);

// Resolution-independent description of a random atomic sum, so the same
// instance can be rendered on refined grids.
struct AtomProfile {
  Cube Q;
  int N = 0;
  int kind = 0;  // 0: random steps, 1: random polynomial x bump
  std::vector<double> params;
  double lambda = 1.0;
};

struct AtomicSumSpec {
  std::vector<AtomProfile> profiles;
};

// deterministic by seed; cubes have dyadic sides, are grid-aligned, and keep
// Q** inside the box
AtomicSumSpec random_atomic_sum_spec(const GridSpec& spec, std::uint64_t seed, int count, int N);

AtomicSum render_atomic_sum(const AtomicSumSpec& s, const GridSpec& spec);

AtomicSum random_atomic_sum(const GridSpec& spec, std::uint64_t seed, int count, int N);

}  // namespace hardy
