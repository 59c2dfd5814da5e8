#include "weights.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hardy {

namespace {

constexpr double kClamp = 1e-300;

// summed-area table over samples; box sums of aligned cell ranges in O(1)
class Prefix {
 public:
  Prefix(const GridSpec& spec, const std::vector<double>& v) : spec_(spec) {
    n0_ = spec.extent(0);
    n1_ = spec.dim() == 2 ? spec.extent(1) : 1;
    P_.assign((n0_ + 1) * (n1_ + 1), 0.0);
    for (std::size_t i = 0; i < n0_; ++i)
      for (std::size_t j = 0; j < n1_; ++j)
        at(i + 1, j + 1) = v[spec.index(i, j)] + at(i, j + 1) + at(i + 1, j) - at(i, j);
  }

  double sum(const CellRange& r) const {
    return at(r.e[0], r.e[1]) - at(r.b[0], r.e[1]) - at(r.e[0], r.b[1]) + at(r.b[0], r.b[1]);
  }

 private:
  double& at(std::size_t i, std::size_t j) { return P_[i * (n1_ + 1) + j]; }
  double at(std::size_t i, std::size_t j) const { return P_[i * (n1_ + 1) + j]; }
  GridSpec spec_;
  std::size_t n0_, n1_;
  std::vector<double> P_;
};

std::size_t cell_count(const CellRange& r) {
  return (r.e[0] - r.b[0]) * (r.e[1] - r.b[1]);
}

double range_min(const GridSpec& spec, const std::vector<double>& v, const CellRange& r) {
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t i = r.b[0]; i < r.e[0]; ++i)
    for (std::size_t j = r.b[1]; j < r.e[1]; ++j) m = std::min(m, v[spec.index(i, j)]);
  return m;
}

double range_max(const GridSpec& spec, const std::vector<double>& v, const CellRange& r) {
  double m = -std::numeric_limits<double>::infinity();
  for (std::size_t i = r.b[0]; i < r.e[0]; ++i)
    for (std::size_t j = r.b[1]; j < r.e[1]; ++j) m = std::max(m, v[spec.index(i, j)]);
  return m;
}

void append_level(std::vector<Cube>& cubes, const GridSpec& spec, int level, int randomsPerLevel,
                  Rng& rng) {
  double h = spec.spacing();
  std::size_t minExtent = spec.extent(0);
  if (spec.dim() == 2) minExtent = std::min(minExtent, spec.extent(1));
  std::size_t cells = std::max<std::size_t>(1, minExtent >> level);
  double side = double(cells) * h;
  // dyadic tiling (remainder cells at the high end are dropped)
  std::size_t n0 = spec.extent(0) / cells;
  std::size_t n1 = spec.dim() == 2 ? spec.extent(1) / cells : 1;
  for (std::size_t i = 0; i < n0; ++i)
    for (std::size_t j = 0; j < n1; ++j) {
      Cube Q;
      Q.side = side;
      Q.corner[0] = spec.lo(0) + double(i * cells) * h;
      Q.corner[1] = spec.dim() == 2 ? spec.lo(1) + double(j * cells) * h : 0.0;
      cubes.push_back(Q);
    }
  // random grid-aligned cubes of the same side
  for (int k = 0; k < randomsPerLevel; ++k) {
    Cube Q;
    Q.side = side;
    for (int a = 0; a < spec.dim(); ++a) {
      std::size_t maxOff = spec.extent(a) >= cells ? spec.extent(a) - cells : 0;
      Q.corner[a] = spec.lo(a) + double(rng.below(maxOff + 1)) * h;
    }
    cubes.push_back(Q);
  }
}

}  // namespace

int CubeFamily::full_depth(const GridSpec& spec) {
  std::size_t minExtent = spec.extent(0);
  if (spec.dim() == 2) minExtent = std::min(minExtent, spec.extent(1));
  int d = 0;
  while ((minExtent >> (d + 1)) >= 1) ++d;
  return d;
}

CubeFamily CubeFamily::dyadic(const GridSpec& spec, int maxLevel, int randomsPerLevel,
                              std::uint64_t seed) {
  std::vector<Cube> cubes;
  Rng rng(seed);
  for (int l = 0; l <= maxLevel; ++l) append_level(cubes, spec, l, randomsPerLevel, rng);
  return CubeFamily(std::move(cubes),
                    "dyadic levels 0.." + std::to_string(maxLevel) + " + " +
                        std::to_string(randomsPerLevel) + " randoms/level, seed " +
                        std::to_string(seed));
}

CubeFamily CubeFamily::dyadic_full(const GridSpec& spec, int randomsPerLevel, std::uint64_t seed) {
  return dyadic(spec, full_depth(spec), randomsPerLevel, seed);
}

Weight::Weight(GridFunction w) : w_(std::move(w)) {
  for (double v : w_.samples())
    if (!(v > 0)) throw GridError("Weight: samples must be strictly positive");
}

GridFunction Weight::pow(double e) const {
  GridFunction g(w_.spec());
  const auto& v = w_.samples();
  for (std::size_t i = 0; i < v.size(); ++i) g.at(i) = std::pow(std::max(v[i], kClamp), e);
  return g;
}

double weight_constant(const Weight& w, const ClassParams& cp, const CubeFamily& F) {
  const GridSpec& spec = w.spec();
  const auto& wv = w.fn().samples();
  double best = 0;

  switch (cp.cls) {
    case WeightClass::Ap: {
      if (!(cp.p > 1)) throw GridError("ap_constant: requires p > 1");
      double pp = cp.p / (cp.p - 1.0);
      GridFunction sigma = w.pow(1.0 - pp);
      Prefix Pw(spec, wv), Ps(spec, sigma.samples());
      for (const Cube& Q : F.cubes()) {
        CellRange r = cells_in_cube(spec, Q);
        if (r.empty) continue;
        double m = double(cell_count(r));
        best = std::max(best, (Pw.sum(r) / m) * std::pow(Ps.sum(r) / m, cp.p - 1.0));
      }
      break;
    }
    case WeightClass::A1: {
      Prefix Pw(spec, wv);
      for (const Cube& Q : F.cubes()) {
        CellRange r = cells_in_cube(spec, Q);
        if (r.empty) continue;
        double avg = Pw.sum(r) / double(cell_count(r));
        best = std::max(best, avg / range_min(spec, wv, r));
      }
      break;
    }
    case WeightClass::RHs: {
      if (!(cp.s > 1)) throw GridError("rh_constant: requires s > 1");
      GridFunction ws = w.pow(cp.s);
      Prefix Pw(spec, wv), Ps(spec, ws.samples());
      for (const Cube& Q : F.cubes()) {
        CellRange r = cells_in_cube(spec, Q);
        if (r.empty) continue;
        double m = double(cell_count(r));
        best = std::max(best, std::pow(Ps.sum(r) / m, 1.0 / cp.s) / (Pw.sum(r) / m));
      }
      break;
    }
    case WeightClass::RHinf: {
      Prefix Pw(spec, wv);
      for (const Cube& Q : F.cubes()) {
        CellRange r = cells_in_cube(spec, Q);
        if (r.empty) continue;
        double avg = Pw.sum(r) / double(cell_count(r));
        best = std::max(best, range_max(spec, wv, r) / avg);
      }
      break;
    }
    case WeightClass::Apq: {
      if (!(cp.p > 1) || !(cp.q > 1)) throw GridError("apq_constant: requires p, q > 1");
      double pp = cp.p / (cp.p - 1.0);
      GridFunction wq = w.pow(cp.q), wpp = w.pow(-pp);
      Prefix Pq(spec, wq.samples()), Pp(spec, wpp.samples());
      for (const Cube& Q : F.cubes()) {
        CellRange r = cells_in_cube(spec, Q);
        if (r.empty) continue;
        double m = double(cell_count(r));
        best = std::max(best, std::pow(Pq.sum(r) / m, 1.0 / cp.q) *
                                  std::pow(Pp.sum(r) / m, 1.0 / pp));
      }
      break;
    }
  }
  return best;  // +inf propagates naturally on overflow
}

double ap_constant(const Weight& w, double p, const CubeFamily& F) {
  return weight_constant(w, {WeightClass::Ap, p}, F);
}
double a1_constant(const Weight& w, const CubeFamily& F) {
  return weight_constant(w, {WeightClass::A1}, F);
}
double rh_constant(const Weight& w, double s, const CubeFamily& F) {
  ClassParams cp;
  cp.cls = WeightClass::RHs;
  cp.s = s;
  return weight_constant(w, cp, F);
}
double rh_inf_constant(const Weight& w, const CubeFamily& F) {
  return weight_constant(w, {WeightClass::RHinf}, F);
}
double apq_constant(const Weight& w, double p, double q, const CubeFamily& F) {
  ClassParams cp;
  cp.cls = WeightClass::Apq;
  cp.p = p;
  cp.q = q;
  return weight_constant(w, cp, F);
}

double weighted_Lp_norm(const GridFunction& f, double p, const Weight& w) {
  if (!(p > 0)) throw GridError("weighted_Lp_norm: requires p > 0");
  f.require_same_spec(w.fn());
  const auto& fv = f.samples();
  const auto& wv = w.fn().samples();
  double s = 0;
  for (std::size_t i = 0; i < fv.size(); ++i) s += std::pow(std::abs(fv[i]), p) * wv[i];
  double hn = f.spec().spacing();
  if (f.spec().dim() == 2) hn *= f.spec().spacing();
  return std::pow(hn * s, 1.0 / p);
}

std::vector<double> family_trend(const Weight& w, const ClassParams& cp, int maxLevel,
                                 int randomsPerLevel, std::uint64_t seed) {
  std::vector<double> out;
  for (int l = 0; l <= maxLevel; ++l)
    out.push_back(
        weight_constant(w, cp, CubeFamily::dyadic(w.spec(), l, randomsPerLevel, seed)));
  return out;
}

std::vector<double> refinement_trend(const WeightFn& w, const GridSpec& base,
                                     const ClassParams& cp, int steps, int refineFactor,
                                     int randomsPerLevel, std::uint64_t seed) {
  std::vector<double> out;
  double h = base.spacing();
  for (int l = 0; l <= steps; ++l) {
    GridSpec spec(base.dim(), {base.lo(0), base.lo(1)}, {base.hi(0), base.hi(1)}, h);
    Weight wl(GridFunction::sample(spec, w));
    out.push_back(weight_constant(wl, cp, CubeFamily::dyadic_full(spec, randomsPerLevel, seed)));
    h /= double(refineFactor);
  }
  return out;
}

bool diverges(const std::vector<double>& perLevel) {
  for (double v : perLevel)
    if (!std::isfinite(v)) return true;
  if (perLevel.size() < 3) return false;
  std::size_t n = perLevel.size();
  return perLevel[n - 2] >= 2.0 * perLevel[n - 3] && perLevel[n - 1] >= 2.0 * perLevel[n - 2];
}

RwEstimate rw_estimate(const WeightFn& w, const GridSpec& base, double tol, int randomsPerLevel,
                       std::uint64_t seed) {
  // growth of [w]_{A_r} under h -> h/2 is the membership signal; near the
  // boundary it fades like 2^{r_w - r}, so we test against a 5% cutoff
  auto growing = [&](double r) {
    ClassParams cp;
    cp.cls = WeightClass::Ap;
    cp.p = r;
    auto t = refinement_trend(w, base, cp, 3, 2, randomsPerLevel, seed);
    for (double v : t)
      if (!std::isfinite(v)) return true;
    return t[3] >= 1.05 * t[2];
  };

  RwEstimate est;
  double lo = 1.0;          // always diverging-or-boundary side
  double hi = 1.0 + tol;    // candidate bounded side
  if (!growing(hi)) {
    est.lo = 1.0;
    est.hi = hi;
    est.value = 1.0;
    return est;
  }
  while (growing(hi)) {
    lo = hi;
    hi = 2.0 * hi;
    if (hi > 64.0) {
      est.lo = lo;
      est.hi = std::numeric_limits<double>::infinity();
      est.value = lo;
      est.indeterminate = true;
      return est;
    }
  }
  while (hi - lo > tol) {
    double mid = 0.5 * (lo + hi);
    if (growing(mid))
      lo = mid;
    else
      hi = mid;
  }
  est.lo = lo;
  est.hi = hi;
  est.value = 0.5 * (lo + hi);
  return est;
}

}  // namespace hardy
