#pragma once

#include <memory>

#include "varlebesgue.hpp"
#include "weights.hpp"

namespace hardy {

// Norm target: L^p(w) or L^{p(.)}.  Holds its ingredients by shared pointer
// so instances stay cheap to copy across harness workers.
class Space {
 public:
  static Space weighted(double p, Weight w) {
    Space s;
    s.p_ = p;
    s.w_ = std::make_shared<Weight>(std::move(w));
    return s;
  }
  static Space variable(ExponentFunction p) {
    Space s;
    s.pvar_ = std::make_shared<ExponentFunction>(std::move(p));
    return s;
  }

  bool is_variable() const { return pvar_ != nullptr; }
  double lebesgue_p() const { return p_; }
  const Weight& weight() const { return *w_; }
  const ExponentFunction& exponent() const { return *pvar_; }

  double norm(const GridFunction& f) const {
    return is_variable() ? luxemburg_norm(f, *pvar_) : weighted_Lp_norm(f, p_, *w_);
  }

 private:
  double p_ = 1.0;
  std::shared_ptr<Weight> w_;
  std::shared_ptr<ExponentFunction> pvar_;
};

}  // namespace hardy
