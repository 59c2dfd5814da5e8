#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "grid.hpp"
#include "rng.hpp"

namespace hardy {

// Finite stand-in for the "for every cube Q" quantifier: dyadic cubes of the
// box down to some level, plus random grid-aligned cubes at each level's side.
class CubeFamily {
 public:
  CubeFamily() = default;
  CubeFamily(std::vector<Cube> cubes, std::string descriptor)
      : cubes_(std::move(cubes)), descriptor_(std::move(descriptor)) {}

  // dyadic cubes of levels 0..maxLevel plus randomsPerLevel random aligned
  // cubes of each level's side; deterministic by seed
  static CubeFamily dyadic(const GridSpec& spec, int maxLevel, int randomsPerLevel = 1000,
                           std::uint64_t seed = 7);

  // full depth: maxLevel = log2(min box side / h)
  static CubeFamily dyadic_full(const GridSpec& spec, int randomsPerLevel = 1000,
                                std::uint64_t seed = 7);

  static int full_depth(const GridSpec& spec);

  const std::vector<Cube>& cubes() const { return cubes_; }
  const std::string& descriptor() const { return descriptor_; }
  std::size_t size() const { return cubes_.size(); }

 private:
  std::vector<Cube> cubes_;
  std::string descriptor_;
};

class Weight {
 public:
  explicit Weight(GridFunction w);

  const GridFunction& fn() const { return w_; }
  const GridSpec& spec() const { return w_.spec(); }

  // pointwise power with the positivity clamp at 1e-300
  GridFunction pow(double e) const;

 private:
  GridFunction w_;
};

enum class WeightClass { Ap, A1, RHs, RHinf, Apq };

struct ClassParams {
  WeightClass cls = WeightClass::Ap;
  double p = 2.0;  // Ap, Apq
  double q = 2.0;  // Apq
  double s = 2.0;  // RHs
};

// sup over the family of the defining quantity; +inf on overflow.
//   Ap:    (avg_Q w)(avg_Q w^{1-p'})^{p-1}
//   A1:    (avg_Q w) / min_Q w
//   RHs:   (avg_Q w^s)^{1/s} / avg_Q w
//   RHinf: max_Q w / avg_Q w
//   Apq:   (avg_Q w^q)^{1/q} (avg_Q w^{-p'})^{1/p'}
double weight_constant(const Weight& w, const ClassParams& cp, const CubeFamily& F);

// convenience wrappers matching the definitions above
double ap_constant(const Weight& w, double p, const CubeFamily& F);
double a1_constant(const Weight& w, const CubeFamily& F);
double rh_constant(const Weight& w, double s, const CubeFamily& F);
double rh_inf_constant(const Weight& w, const CubeFamily& F);
double apq_constant(const Weight& w, double p, double q, const CubeFamily& F);

// (integral |f|^p w dx)^{1/p}
double weighted_Lp_norm(const GridFunction& f, double p, const Weight& w);

// value over the growing families of depth 0..maxLevel at fixed grid;
// monotone nondecreasing by construction
std::vector<double> family_trend(const Weight& w, const ClassParams& cp, int maxLevel,
                                 int randomsPerLevel = 1000, std::uint64_t seed = 7);

// a weight given in closed form, so it can be resampled at finer spacing
using WeightFn = std::function<double(double, double)>;

// constants at spacings h * refineFactor^{-l}, l = 0..steps, each with a
// full-depth family; the divergence protocol reads this trend
std::vector<double> refinement_trend(const WeightFn& w, const GridSpec& base,
                                     const ClassParams& cp, int steps = 2, int refineFactor = 4,
                                     int randomsPerLevel = 1000, std::uint64_t seed = 7);

// divergence protocol: grows by a factor >= 2 per added refinement level for
// 2 consecutive levels, or any non-finite value
bool diverges(const std::vector<double>& perLevel);

struct RwEstimate {
  double lo = 1.0, hi = 1.0;  // bracketing interval
  double value = 1.0;         // midpoint
  bool indeterminate = false;
};

// r_w = inf { r >= 1 : w in A_r }, located by bisection on r of the
// bounded-vs-growing behavior of the A_r constant under grid refinement
RwEstimate rw_estimate(const WeightFn& w, const GridSpec& base, double tol,
                       int randomsPerLevel = 1000, std::uint64_t seed = 7);

}  // namespace hardy
