#include "varlebesgue.hpp"

#include <algorithm>
#include <cmath>

namespace hardy {

ExponentFunction::ExponentFunction(GridFunction p) : p_(std::move(p)) {
  pmin_ = p_.samples()[0];
  pmax_ = pmin_;
  for (double v : p_.samples()) {
    if (!(v > 0) || !std::isfinite(v))
      throw GridError("ExponentFunction: values must lie in (0, inf)");
    pmin_ = std::min(pmin_, v);
    pmax_ = std::max(pmax_, v);
  }
}

ExponentFunction ExponentFunction::constant(const GridSpec& spec, double p0) {
  return ExponentFunction(GridFunction::sample(spec, [p0](double, double) { return p0; }));
}

const LhConstants& ExponentFunction::lh_constants() const {
  if (lh_) return *lh_;
  const GridSpec& s = p_.spec();
  // budgeted subsample: at most ~512 points, uniform stride
  std::vector<std::size_t> pts;
  std::size_t total = s.size();
  std::size_t stride = std::max<std::size_t>(1, total / 512);
  for (std::size_t i = 0; i < total; i += stride) pts.push_back(i);

  auto coords = [&](std::size_t idx, double& x, double& y) {
    if (s.dim() == 1) {
      x = s.coord(0, idx);
      y = 0;
    } else {
      x = s.coord(0, idx / s.extent(1));
      y = s.coord(1, idx % s.extent(1));
    }
  };

  LhConstants c;
  for (std::size_t a = 0; a < pts.size(); ++a)
    for (std::size_t b = a + 1; b < pts.size(); ++b) {
      double xa, ya, xb, yb;
      coords(pts[a], xa, ya);
      coords(pts[b], xb, yb);
      double d = std::hypot(xa - xb, ya - yb);
      if (d >= 0.5 || d <= 0) continue;
      double gap = std::abs(p_.samples()[pts[a]] - p_.samples()[pts[b]]);
      c.c0 = std::max(c.c0, gap * (-std::log(d)));
    }

  // best-fit limit value over 512 candidates in [p-, p+]
  double bestC = std::numeric_limits<double>::infinity(), bestP = pmin_;
  for (int k = 0; k < 512; ++k) {
    double cand = pmin_ + (pmax_ - pmin_) * (511 == 0 ? 0.0 : double(k) / 511.0);
    double worst = 0;
    for (std::size_t idx : pts) {
      double x, y;
      coords(idx, x, y);
      double r = std::hypot(x, y);
      worst = std::max(worst,
                       std::abs(p_.samples()[idx] - cand) * std::log(std::exp(1.0) + r));
    }
    if (worst < bestC) {
      bestC = worst;
      bestP = cand;
    }
    if (pmax_ == pmin_) break;
  }
  c.cinf = pmax_ == pmin_ ? 0.0 : bestC;
  c.p_inf = pmax_ == pmin_ ? pmin_ : bestP;
  lh_ = c;
  return *lh_;
}

ExponentFunction ExponentFunction::conjugate() const {
  if (!(pmin_ > 1)) throw GridError("conjugate: requires p- > 1");
  GridFunction q(p_.spec());
  for (std::size_t i = 0; i < p_.size(); ++i) {
    double v = p_.samples()[i];
    q.at(i) = v / (v - 1.0);
  }
  return ExponentFunction(std::move(q));
}

ExponentFunction ExponentFunction::ratio(double c) const {
  if (!(c > 0)) throw GridError("ratio: divisor must be positive");
  GridFunction q(p_.spec());
  for (std::size_t i = 0; i < p_.size(); ++i) q.at(i) = p_.samples()[i] / c;
  return ExponentFunction(std::move(q));
}

ExponentFunction ExponentFunction::scaled(double c) const {
  if (!(c > 0)) throw GridError("scaled: factor must be positive");
  GridFunction q(p_.spec());
  for (std::size_t i = 0; i < p_.size(); ++i) q.at(i) = c * p_.samples()[i];
  return ExponentFunction(std::move(q));
}

double modular(const GridFunction& f, double lambda, const ExponentFunction& p) {
  if (!(lambda > 0)) throw GridError("modular: lambda must be positive");
  f.require_same_spec(p.fn());
  const auto& fv = f.samples();
  const auto& pv = p.fn().samples();
  double s = 0;
  for (std::size_t i = 0; i < fv.size(); ++i) {
    double a = std::abs(fv[i]);
    if (a == 0) continue;
    s += std::pow(a / lambda, pv[i]);
  }
  double hn = f.spec().spacing();
  if (f.spec().dim() == 2) hn *= f.spec().spacing();
  return hn * s;
}

double luxemburg_norm(const GridFunction& f, const ExponentFunction& p) {
  double m = f.max_abs();
  if (m == 0) return 0;
  // closed form when p is constant
  if (p.is_constant()) {
    double p0 = p.p_minus();
    double s = 0;
    const auto& fv = f.samples();
    for (double v : fv)
      if (v != 0) s += std::pow(std::abs(v), p0);
    double hn = f.spec().spacing();
    if (f.spec().dim() == 2) hn *= f.spec().spacing();
    return std::pow(hn * s, 1.0 / p0);
  }
  // bracket the unique root of modular(f, lambda) = 1
  double lo = m, hi = m;
  while (modular(f, lo, p) <= 1.0) {
    lo /= 2.0;
    if (lo < 1e-300) return 0;
  }
  while (modular(f, hi, p) > 1.0) {
    hi *= 2.0;
    if (hi > 1e300) throw GridError("luxemburg_norm: bracket failure (modular stays above 1)");
  }
  for (int it = 0; it < 200 && (hi - lo) > 1e-10 * hi; ++it) {
    double mid = 0.5 * (lo + hi);
    if (modular(f, mid, p) > 1.0)
      lo = mid;
    else
      hi = mid;
  }
  return hi;  // smallest bracketed lambda with modular <= 1
}

HolderPairing holder_pairing(const GridFunction& f, const GridFunction& g,
                             const ExponentFunction& p) {
  f.require_same_spec(g);
  HolderPairing out;
  const auto& fv = f.samples();
  const auto& gv = g.samples();
  double s = 0;
  for (std::size_t i = 0; i < fv.size(); ++i) s += std::abs(fv[i] * gv[i]);
  double hn = f.spec().spacing();
  if (f.spec().dim() == 2) hn *= f.spec().spacing();
  out.lhs = hn * s;
  out.rhs = 2.0 * luxemburg_norm(f, p) * luxemburg_norm(g, p.conjugate());
  return out;
}

}  // namespace hardy
