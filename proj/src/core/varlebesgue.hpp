#pragma once

#include <optional>

#include "grid.hpp"

namespace hardy {

struct LhConstants {
  double c0 = 0;     // local log-Holder constant
  double cinf = 0;   // decay constant at the best-fit limit value
  double p_inf = 0;  // best-fit limit value
};

// A sampled exponent p(.) with cached p-, p+ and lazily computed log-Holder
// constants.  Values must lie in (0, inf).
class ExponentFunction {
 public:
  explicit ExponentFunction(GridFunction p);

  static ExponentFunction constant(const GridSpec& spec, double p0);

  const GridFunction& fn() const { return p_; }
  const GridSpec& spec() const { return p_.spec(); }
  double p_minus() const { return pmin_; }
  double p_plus() const { return pmax_; }
  bool is_constant() const { return pmin_ == pmax_; }

  // C0 = sup |p(x)-p(y)| (-log|x-y|) over pairs with |x-y| < 1/2,
  // C_inf minimized over candidate limit values; both over a budgeted
  // subsample of grid points
  const LhConstants& lh_constants() const;

  // pointwise p' = p/(p-1); requires p- > 1
  ExponentFunction conjugate() const;
  // pointwise p(x)/c
  ExponentFunction ratio(double c) const;
  // pointwise c * p(x)
  ExponentFunction scaled(double c) const;

 private:
  GridFunction p_;
  double pmin_, pmax_;
  mutable std::optional<LhConstants> lh_;
};

// integral of (|f|/lambda)^{p(x)} dx
double modular(const GridFunction& f, double lambda, const ExponentFunction& p);

// inf { lambda > 0 : modular(f, lambda) <= 1 }, by bisection on the strictly
// decreasing modular; relative tolerance 1e-10.  Returns 0 for f == 0.
double luxemburg_norm(const GridFunction& f, const ExponentFunction& p);

// lhs = integral |f g| dx,  rhs = 2 ||f||_{p(.)} ||g||_{p'(.)}
struct HolderPairing {
  double lhs = 0, rhs = 0;
};
HolderPairing holder_pairing(const GridFunction& f, const GridFunction& g,
                             const ExponentFunction& p);

}  // namespace hardy
