#include "rubio.hpp"

#include <cmath>
#include <limits>

#include "operators.hpp"
#include "rng.hpp"

namespace hardy {

MaximalNormEstimate estimate_maximal_opnorm(const ExponentFunction& r, int familySize,
                                            std::uint64_t seed) {
  if (!(r.p_minus() > 1.0))
    throw GridError("estimate_maximal_opnorm: r_- <= 1, M is unbounded on L^{r(.)}");
  const GridSpec& spec = r.spec();
  Rng rng(seed);
  double maxRatio = 0;
  for (int k = 0; k < familySize; ++k) {
    // witnesses: random indicators and random bumps inside the box
    bool bump = rng.below(2) == 1;
    std::array<double, 2> c{}, w{};
    for (int a = 0; a < spec.dim(); ++a) {
      double span = spec.hi(a) - spec.lo(a);
      w[std::size_t(a)] = rng.uniform(0.05, 0.5) * span;
      c[std::size_t(a)] = rng.uniform(spec.lo(a) + w[std::size_t(a)] / 2,
                                      spec.hi(a) - w[std::size_t(a)] / 2);
    }
    GridFunction f = GridFunction::sample(spec, [&](double x, double y) {
      double u = (x - c[0]) / (w[0] / 2);
      double v = spec.dim() == 2 ? (y - c[1]) / (w[1] / 2) : 0.0;
      if (bump) {
        double r2 = u * u + v * v;
        return r2 < 1.0 ? std::exp(-1.0 / (1.0 - r2)) : 0.0;
      }
      return (std::abs(u) < 1.0 && std::abs(v) <= 1.0) ? 1.0 : 0.0;
    });
    double nf = luxemburg_norm(f, r);
    if (nf == 0) continue;
    double nm = luxemburg_norm(hl_maximal(f), r);
    maxRatio = std::max(maxRatio, nm / nf);
  }
  if (maxRatio == 0) throw GridError("estimate_maximal_opnorm: degenerate witness family");
  return MaximalNormEstimate(r, 1.5 * maxRatio, "seeded indicators+bumps", maxRatio);
}

IterateResult iterate(const GridFunction& h, const IterationConfig& cfg,
                      const ExponentFunction& r) {
  for (std::size_t i = 0; i < h.size(); ++i)
    if (h[i] < 0) throw GridError("iterate: h must be nonnegative");
  GridFunction acc = h;
  GridFunction cur = h;
  double coef = 1.0;
  for (int k = 1; k <= cfg.kMax; ++k) {
    cur = hl_maximal(cur);
    coef /= 2.0 * cfg.B;
    GridFunction term = cur;
    term *= coef;
    acc += term;
  }
  double tail = luxemburg_norm(cur, r) * std::pow(2.0, -double(cfg.kMax));
  return IterateResult{std::move(acc), tail};
}

IterationReport check_iteration_properties(const GridFunction& h, const IterationConfig& cfg,
                                           const ExponentFunction& r, const CubeFamily& F,
                                           double tau_prime, double q) {
  IterationReport rep;
  IterateResult res = iterate(h, cfg, r);
  const GridFunction& Rh = res.Rh;

  // (1) h <= Rh pointwise (k=0 term is h itself, so this is exact)
  double worstGap = 0;
  for (std::size_t i = 0; i < h.size(); ++i) worstGap = std::max(worstGap, h[i] - Rh[i]);
  rep.properties.push_back({"pointwise_majorant", worstGap, 0.0, worstGap <= 0.0});

  // (2) norm doubling up to the truncation tail
  double nh = luxemburg_norm(h, r);
  double nRh = luxemburg_norm(Rh, r);
  double bound2 = 2.0 * nh * (1.0 + std::pow(2.0, -double(cfg.kMax)));
  rep.properties.push_back({"norm_doubling", nRh, bound2, nRh <= bound2});

  // (3) [Rh]_{A1} <= 2B with slack for family finiteness and the empirical B
  Weight wRh(Rh);
  double a1 = a1_constant(wRh, F);
  double bound3 = 2.0 * cfg.B * 1.1;
  rep.properties.push_back({"a1_majorant", a1, bound3, std::isfinite(a1) && a1 <= bound3});

  // (4) composite weights H1 = R(h^{tau'})^{1/tau'} and H2 = (Rh)^{1/q}
  GridFunction hp = GridFunction(h.spec());
  for (std::size_t i = 0; i < h.size(); ++i) hp.at(i) = std::pow(h[i], tau_prime);
  IterateResult resp = iterate(hp, cfg, r);
  GridFunction H1(h.spec());
  for (std::size_t i = 0; i < h.size(); ++i) H1.at(i) = std::pow(resp.Rh[i], 1.0 / tau_prime);
  Weight w1(H1);
  double a1c = a1_constant(w1, F);
  double rh1 = rh_constant(w1, tau_prime, F);
  bool ok1 = std::isfinite(a1c) && std::isfinite(rh1);
  rep.properties.push_back({"composite_tau", std::max(a1c, rh1),
                            std::numeric_limits<double>::infinity(), ok1});

  Weight w2(Weight(Rh).pow(1.0 / q));
  double a2c = a1_constant(w2, F);
  double rh2 = rh_constant(w2, q, F);
  bool ok2 = std::isfinite(a2c) && std::isfinite(rh2);
  rep.properties.push_back({"composite_q", std::max(a2c, rh2),
                            std::numeric_limits<double>::infinity(), ok2});

  for (const auto& p : rep.properties) rep.all_pass = rep.all_pass && p.pass;
  return rep;
}

}  // namespace hardy
