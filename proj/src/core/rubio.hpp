#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "varlebesgue.hpp"
#include "weights.hpp"

namespace hardy {

// Empirical operator norm of M on L^{r(.)}: 1.5 x the largest observed ratio
// over a seeded witness family.
struct MaximalNormEstimate {
  ExponentFunction r;
  double B = 1.5;
  std::string witnesses;
  double max_ratio = 0;

  MaximalNormEstimate(ExponentFunction rr, double b, std::string w, double mr)
      : r(std::move(rr)), B(b), witnesses(std::move(w)), max_ratio(mr) {}
};

struct IterationConfig {
  int kMax = 12;
  double B = 1.5;

  IterationConfig(int k, double b) : kMax(k), B(b) {
    if (kMax < 1) throw GridError("IterationConfig: kMax must be >= 1");
    if (!(B >= 1.01)) throw GridError("IterationConfig: B must be >= 1.01");
  }
};

// errors if r_- <= 1 (M is unbounded at the endpoint); deterministic by seed
MaximalNormEstimate estimate_maximal_opnorm(const ExponentFunction& r, int familySize = 100,
                                            std::uint64_t seed = 11);

struct IterateResult {
  GridFunction Rh;
  double tail_bound = 0;  // ||M^kMax h|| * sum_{k>kMax} 2^{-k} in L^{r(.)}
};

// Rh = sum_{k=0}^{kMax} M^k h / (2B)^k; requires h >= 0
IterateResult iterate(const GridFunction& h, const IterationConfig& cfg,
                      const ExponentFunction& r);

struct IterationProperty {
  std::string name;
  double lhs = 0, rhs = 0;  // property holds iff lhs <= rhs
  bool pass = false;
};

struct IterationReport {
  std::vector<IterationProperty> properties;
  bool all_pass = true;
};

// the four proof-critical properties:
//   (1) h <= Rh pointwise
//   (2) ||Rh||_{r(.)} <= 2 ||h||_{r(.)} (1 + 2^-kMax)
//   (3) [Rh]_{A1} <= 2B (1 + slack), slack = 0.1
//   (4) R(h^{tau'})^{1/tau'} and (Rh)^{1/q} have finite A1 and RH constants on F
IterationReport check_iteration_properties(const GridFunction& h, const IterationConfig& cfg,
                                           const ExponentFunction& r, const CubeFamily& F,
                                           double tau_prime = 2.0, double q = 2.0);

}  // namespace hardy
