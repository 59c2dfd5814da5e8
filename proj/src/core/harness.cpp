#include "harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

#include "atoms.hpp"
#include "expr.hpp"
#include "operators.hpp"
#include "rng.hpp"
#include "spaces.hpp"

namespace hardy {

namespace {

const std::map<std::string, Target>& target_table() {
  static const std::map<std::string, Target> t = {
      {"L4.1", Target::L4_1},   {"L4.2", Target::L4_2}, {"L4.3", Target::L4_3},
      {"L4.4", Target::L4_4},   {"R4.5", Target::R4_5}, {"L4.6", Target::L4_6},
      {"L4.7", Target::L4_7},   {"L4.8", Target::L4_8}, {"L4.9", Target::L4_9},
      {"L4.10", Target::L4_10}, {"L5.1", Target::L5_1}, {"L5.2", Target::L5_2},
      {"L7.1", Target::L7_1},   {"T1.1", Target::T1_1}, {"T1.2", Target::T1_2},
      {"T1.3", Target::T1_3},   {"T1.4", Target::T1_4}, {"T1.5", Target::T1_5},
      {"T1.6", Target::T1_6},
  };
  return t;
}

constexpr int kNSentinel = -999;

bool is_variable_target(Target t) {
  switch (t) {
    case Target::L4_2:
    case Target::L4_4:
    case Target::L4_8:
    case Target::L4_10:
    case Target::T1_2:
    case Target::T1_4:
    case Target::T1_6:
      return true;
    default:
      return false;
  }
}

bool uses_fractional_pair(Target t) {
  return t == Target::L4_3 || t == Target::L4_4 || t == Target::L4_9 || t == Target::L4_10 ||
         t == Target::T1_3 || t == Target::T1_4;
}

bool is_atomic_target(Target t) {
  switch (t) {
    case Target::L5_2:
    case Target::L7_1:
    case Target::T1_1:
    case Target::T1_2:
    case Target::T1_3:
    case Target::T1_4:
    case Target::T1_5:
    case Target::T1_6:
      return true;
    default:
      return false;
  }
}

bool is_nonconv_target(Target t) {
  return t == Target::L7_1 || t == Target::T1_5 || t == Target::T1_6;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// ---------------------------------------------------------------------------
// per-level context

struct Level {
  GridSpec spec;
  std::optional<Space> X;          // single-space targets
  std::optional<Space> Xsrc, Xtgt; // off-diagonal targets
  std::optional<KernelSpec> kernel;
  std::optional<MollifierSpec> phi;
  std::vector<double> tGrid;

  explicit Level(GridSpec s) : spec(std::move(s)) {}
};

struct InstanceOut {
  double lhs = 0, rhs = 0;
  bool momentOk = true;
};

using Eval = std::function<InstanceOut(const Level&)>;

std::uint64_t instance_seed(std::uint64_t seed, int i) {
  return seed * 0x9e3779b97f4a7c15ULL + std::uint64_t(i + 1) * 0xbf58476d1ce4e5b9ULL;
}

// non-convolution plug-in kernel: the convolution singular kernel viewed
// through K(x, y); every convolution singular integral has all vanishing
// moments, so any L is admissible
KernelSpec make_nonconv_kernel(int dim, int L) {
  double C = 10.0 * std::tgamma(double(L) + 3.0);
  if (dim == 1) {
    auto K = [](const Point& x, const Point& y) {
      return 1.0 / (std::acos(-1.0) * (x[0] - y[0]));
    };
    return KernelSpec::nonconvolution(1, K, C, 1.0, L);
  }
  auto K = [](const Point& x, const Point& y) {
    double d0 = x[0] - y[0], d1 = x[1] - y[1];
    double r = std::hypot(d0, d1);
    return d0 / (2.0 * std::acos(-1.0) * r * r * r);
  };
  return KernelSpec::nonconvolution(2, K, C, 1.0, L);
}

KernelSpec select_kernel(const CheckSpec& cs, int L) {
  switch (cs.target) {
    case Target::T1_3:
    case Target::T1_4:
      return KernelSpec::power(cs.dim, cs.alpha);
    case Target::L5_1:
    case Target::L5_2:
      if (cs.alpha > 0) return KernelSpec::power(cs.dim, cs.alpha);
      return cs.dim == 1 ? KernelSpec::hilbert() : KernelSpec::riesz(0);
    case Target::L7_1:
    case Target::T1_5:
    case Target::T1_6:
      return make_nonconv_kernel(cs.dim, L);
    default:
      return cs.dim == 1 ? KernelSpec::hilbert() : KernelSpec::riesz(0);
  }
}

std::function<double(double, double)> weight_fn(const CheckSpec& cs) {
  if (cs.weight.empty()) return [](double, double) { return 1.0; };
  return parse_scalar_expr(cs.weight, cs.dim);
}

// closed-form r_w for the weight grammar: const -> 1, |x|^a -> 1 + a_+/n
bool closed_form_rw(const std::string& weight, int dim, double& rw) {
  if (weight.empty() || weight.rfind("const:", 0) == 0) {
    rw = 1.0;
    return true;
  }
  if (weight.rfind("power:", 0) == 0) {
    double a = std::stod(weight.substr(6));
    if (a <= -double(dim)) return false;  // not locally integrable
    rw = a > 0 ? 1.0 + a / double(dim) : 1.0;
    return true;
  }
  return false;
}

ExponentFunction make_qvar(const ExponentFunction& p, double alpha, int dim) {
  GridFunction q(p.spec());
  for (std::size_t i = 0; i < q.size(); ++i) {
    double inv = 1.0 / p.fn()[i] - alpha / double(dim);
    if (!(inv > 0)) throw GridError("exponent hypothesis fails: p_+ must stay below n/alpha");
    q.at(i) = 1.0 / inv;
  }
  return ExponentFunction(std::move(q));
}

// moment orders used by the theorem targets; throws when it cannot be derived
void derive_orders(const CheckSpec& cs, const GridSpec& base, int& atomN, int& momentL) {
  atomN = 1;
  momentL = 0;
  double ratio = 1.0;
  if (is_variable_target(cs.target)) {
    ExponentFunction p(sample_expr(base, cs.exponent));
    ratio = 1.0 / p.p_minus();
  } else {
    double rw;
    if (!closed_form_rw(cs.weight, cs.dim, rw)) {
      if (cs.N == kNSentinel)
        throw GridError("N required: weight has no closed-form A_p threshold");
      atomN = cs.N;
      momentL = std::max(cs.N - 1, -1);
      return;
    }
    ratio = rw / cs.p;
  }
  MomentOrders mo = moment_order_required(cs.dim, ratio);
  atomN = cs.N == kNSentinel ? mo.N : cs.N;
  momentL = cs.N == kNSentinel ? mo.L : std::max(cs.N - 1, -1);
}

Level build_level(const CheckSpec& cs, const GridSpec& spec, int atomN, int momentL) {
  Level L(spec);
  const Target t = cs.target;

  if (is_variable_target(t)) {
    ExponentFunction p(sample_expr(spec, cs.exponent));
    if (uses_fractional_pair(t)) {
      L.Xtgt = Space::variable(make_qvar(p, cs.alpha, cs.dim));
      L.Xsrc = Space::variable(std::move(p));
    } else {
      L.X = Space::variable(std::move(p));
    }
  } else if (t != Target::L5_1 && t != Target::L5_2 && t != Target::L7_1) {
    Weight W(GridFunction::sample(spec, weight_fn(cs)));
    if (uses_fractional_pair(t)) {
      L.Xsrc = Space::weighted(cs.p, Weight(W.pow(cs.p)));
      L.Xtgt = Space::weighted(cs.q, Weight(W.pow(cs.q)));
    } else {
      L.X = Space::weighted(cs.p, std::move(W));
    }
  }

  switch (t) {
    case Target::L5_1:
    case Target::L5_2:
    case Target::L7_1:
    case Target::T1_1:
    case Target::T1_2:
    case Target::T1_3:
    case Target::T1_4:
    case Target::T1_5:
    case Target::T1_6:
      L.kernel = select_kernel(cs, momentL);
      L.phi = MollifierSpec(cs.dim);
      L.tGrid = MollifierSpec::default_t_grid(spec.spacing());
      break;
    default:
      break;
  }
  (void)atomN;
  return L;
}

// ---------------------------------------------------------------------------
// random instance ingredients (closed-form, resolution independent)

Cube random_cube(Rng& rng, const GridSpec& base) {
  std::size_t ext = base.extent(0);
  if (base.dim() == 2) ext = std::min(ext, base.extent(1));
  int kmax = 0;
  while ((std::size_t(8) << (kmax + 1)) <= ext / 2) ++kmax;
  std::size_t cells = std::size_t(8) << rng.range(0, kmax);
  Cube Q;
  Q.side = double(cells) * base.spacing();
  for (int a = 0; a < base.dim(); ++a) {
    std::size_t off = rng.below(base.extent(a) - cells + 1);
    Q.corner[std::size_t(a)] = base.lo(a) + double(off) * base.spacing();
  }
  return Q;
}

// closed-form profile supported in Q: indicator, 4-piece steps, or a bump
std::function<double(double, double)> random_profile(Rng& rng, const Cube& Q, int dim,
                                                     bool nonneg) {
  int kind = rng.range(0, 2);
  double lo = nonneg ? 0.1 : -1.0;
  double c0 = Q.center(0), c1 = Q.center(1), l = Q.side;
  if (kind == 0) {
    double amp = rng.uniform(lo, 1.0);
    return [=](double x, double y) {
      return Q.contains({x, y}, dim) ? amp : 0.0;
    };
  }
  if (kind == 1) {
    std::array<double, 4> ax{}, ay{};
    for (auto& v : ax) v = rng.uniform(lo, 1.0);
    for (auto& v : ay) v = rng.uniform(lo, 1.0);
    return [=](double x, double y) {
      if (!Q.contains({x, y}, dim)) return 0.0;
      int i = std::min(3, int((x - Q.corner[0]) / l * 4.0));
      double v = ax[std::size_t(i)];
      if (dim == 2) {
        int j = std::min(3, int((y - Q.corner[1]) / l * 4.0));
        v *= (ay[std::size_t(j)] + 1.1) / 2.1;  // keep the product's sign pattern simple
      }
      return v;
    };
  }
  double amp = rng.uniform(lo == 0.1 ? 0.2 : -1.0, 1.0);
  return [=](double x, double y) {
    double u = (x - c0) / (l / 2);
    double v = dim == 2 ? (y - c1) / (l / 2) : 0.0;
    double r2 = u * u + v * v;
    return r2 < 1.0 ? amp * std::exp(-1.0 / (1.0 - r2)) : 0.0;
  };
}

GridFunction indicator_of(const GridSpec& spec, const Cube& Q) {
  GridFunction f(spec);
  CellRange r = cells_in_cube(spec, Q);
  if (!r.empty)
    for (std::size_t i = r.b[0]; i < r.e[0]; ++i)
      for (std::size_t j = r.b[1]; j < r.e[1]; ++j) f.at(spec.index(i, j)) = 1.0;
  return f;
}

double safe_ratio(double lhs, double rhs) {
  if (rhs == 0) return lhs == 0 ? 0.0 : std::numeric_limits<double>::infinity();
  return lhs / rhs;
}

// sup over cell centers outside excl of g / bound
double farfield_sup(const GridFunction& g, const GridFunction& bound, const Cube& excl) {
  const GridSpec& spec = g.spec();
  double best = 0;
  std::size_t N1 = spec.dim() == 2 ? spec.extent(1) : 1;
  for (std::size_t i = 0; i < spec.extent(0); ++i)
    for (std::size_t j = 0; j < N1; ++j) {
      std::array<double, 2> x{spec.coord(0, i), spec.dim() == 2 ? spec.coord(1, j) : 0.0};
      if (excl.contains(x, spec.dim())) continue;
      std::size_t idx = spec.index(i, j);
      best = std::max(best, safe_ratio(g[idx], bound[idx]));
    }
  return best;
}

// ---------------------------------------------------------------------------
// per-target instance evaluators

std::vector<Eval> build_evals(const CheckSpec& cs, const GridSpec& base, int atomN,
                              int momentL) {
  std::vector<Eval> evals;
  evals.reserve(std::size_t(cs.instances));
  const int dim = cs.dim;

  for (int i = 0; i < cs.instances; ++i) {
    std::uint64_t iseed = instance_seed(cs.seed, i);
    Rng rng(iseed);

    switch (cs.target) {
      case Target::L4_1:
      case Target::L4_2:
      case Target::L4_3:
      case Target::L4_4: {
        bool frac = uses_fractional_pair(cs.target);
        int k = rng.range(1, 8);
        std::vector<std::function<double(double, double)>> fns;
        for (int j = 0; j < k; ++j) fns.push_back(random_profile(rng, random_cube(rng, base), dim, false));
        double r = cs.r, alpha = cs.alpha;
        evals.push_back([fns, r, alpha, frac](const Level& L) {
          GridFunction num(L.spec), den(L.spec);
          for (const auto& fn : fns) {
            GridFunction g = GridFunction::sample(L.spec, fn);
            GridFunction m = frac ? frac_maximal(g, alpha) : hl_maximal(g);
            for (std::size_t s = 0; s < num.size(); ++s) {
              num.at(s) += std::pow(m[s], r);
              den.at(s) += std::pow(std::abs(g[s]), r);
            }
          }
          for (std::size_t s = 0; s < num.size(); ++s) {
            num.at(s) = std::pow(num[s], 1.0 / r);
            den.at(s) = std::pow(den[s], 1.0 / r);
          }
          const Space& tgt = frac ? *L.Xtgt : *L.X;
          const Space& src = frac ? *L.Xsrc : *L.X;
          return InstanceOut{tgt.norm(num), src.norm(den), true};
        });
        break;
      }

      case Target::R4_5: {
        int k = rng.range(1, 8);
        std::vector<Cube> cubes;
        std::vector<double> lambdas;
        for (int j = 0; j < k; ++j) {
          cubes.push_back(random_cube(rng, base));
          lambdas.push_back(std::pow(10.0, rng.uniform(-1.0, 1.0)));
        }
        double tau = cs.r;
        evals.push_back([cubes, lambdas, tau](const Level& L) {
          GridFunction lhs(L.spec), rhs(L.spec);
          for (std::size_t j = 0; j < cubes.size(); ++j) {
            GridFunction a = indicator_of(L.spec, dilate(cubes[j], tau));
            GridFunction b = indicator_of(L.spec, cubes[j]);
            a *= lambdas[j];
            b *= lambdas[j];
            lhs += a;
            rhs += b;
          }
          return InstanceOut{L.X->norm(lhs), L.X->norm(rhs), true};
        });
        break;
      }

      case Target::L4_6:
      case Target::L4_7:
      case Target::L4_8: {
        int k = rng.range(1, 8);
        std::vector<Cube> cubes;
        std::vector<std::function<double(double, double)>> fns;
        for (int j = 0; j < k; ++j) {
          cubes.push_back(random_cube(rng, base));
          fns.push_back(random_profile(rng, cubes.back(), dim, true));
        }
        // q <= 1 means plain L^1 averages
        double q = cs.target == Target::L4_6 ? 1.0 : cs.q;
        if (cs.target == Target::L4_8 && cs.q <= 1.0) q = 1.0;
        evals.push_back([cubes, fns, q](const Level& L) {
          GridFunction sum(L.spec), avg(L.spec);
          for (std::size_t j = 0; j < cubes.size(); ++j) {
            GridFunction g = GridFunction::sample(L.spec, fns[j]);
            sum += g;
            double a;
            if (q == 1.0) {
              a = cube_average(g, cubes[j]);
            } else {
              GridFunction gq(L.spec);
              for (std::size_t s = 0; s < g.size(); ++s) gq.at(s) = std::pow(g[s], q);
              a = std::pow(cube_average(gq, cubes[j]), 1.0 / q);
            }
            GridFunction chi = indicator_of(L.spec, cubes[j]);
            chi *= a;
            avg += chi;
          }
          return InstanceOut{L.X->norm(sum), L.X->norm(avg), true};
        });
        break;
      }

      case Target::L4_9:
      case Target::L4_10: {
        int k = rng.range(1, 8);
        std::vector<Cube> cubes;
        std::vector<double> lambdas;
        for (int j = 0; j < k; ++j) {
          cubes.push_back(random_cube(rng, base));
          lambdas.push_back(std::pow(10.0, rng.uniform(-1.0, 1.0)));
        }
        double alpha = cs.alpha;
        int d = dim;
        evals.push_back([cubes, lambdas, alpha, d](const Level& L) {
          GridFunction lhs(L.spec), rhs(L.spec);
          for (std::size_t j = 0; j < cubes.size(); ++j) {
            GridFunction chi = indicator_of(L.spec, cubes[j]);
            GridFunction a = chi;
            a *= lambdas[j] * std::pow(cubes[j].measure(d), alpha / double(d));
            chi *= lambdas[j];
            lhs += a;
            rhs += chi;
          }
          return InstanceOut{L.Xtgt->norm(lhs), L.Xsrc->norm(rhs), true};
        });
        break;
      }

      case Target::L5_1: {
        double rho = rng.uniform(0.5, 4.0);
        double angle = rng.uniform(0.3, 1.2);
        double alpha = cs.alpha;
        int d = dim;
        evals.push_back([rho, angle, alpha, d](const Level& L) {
          Point x{rho, 0};
          if (d == 2) x = {rho * std::cos(angle), rho * std::sin(angle)};
          double vmax = 0, vmin = std::numeric_limits<double>::infinity();
          for (int j = 2; j <= 4; ++j) {
            double t = rho / std::pow(2.0, j);
            double v = std::abs(smoothed_kernel_value(*L.kernel, *L.phi, t, x)) *
                       std::pow(rho, double(d) - alpha);
            vmax = std::max(vmax, v);
            vmin = std::min(vmin, v);
          }
          return InstanceOut{safe_ratio(vmax, vmin), 2.0, true};
        });
        break;
      }

      case Target::L5_2: {
        AtomicSumSpec sumspec = random_atomic_sum_spec(base, iseed, 1, atomN);
        double alpha = cs.alpha;
        int d = dim, N = atomN;
        evals.push_back([sumspec, alpha, d, N](const Level& L) {
          AtomicSum s = render_atomic_sum(sumspec, L.spec);
          const Atom& atom = s.atoms[0];
          if (atom.zero_flag) return InstanceOut{0, 1, true};
          GridFunction Ta = apply_to_atom(atom.a, *L.kernel);
          GridFunction g = radial_maximal(Ta, *L.phi, L.tGrid);
          double tau = (double(d) + N + 1.0) / double(d);
          GridFunction B = frac_maximal_indicator(L.spec, atom.Q, alpha / tau);
          for (std::size_t sIdx = 0; sIdx < B.size(); ++sIdx)
            B.at(sIdx) = std::pow(B[sIdx], tau);
          return InstanceOut{farfield_sup(g, B, star(atom.Q, d)), 1.0, true};
        });
        break;
      }

      case Target::L7_1: {
        AtomicSumSpec sumspec = random_atomic_sum_spec(base, iseed, 1, momentL + 1);
        int d = dim, Lm = momentL;
        evals.push_back([sumspec, d, Lm](const Level& L) {
          AtomicSum s = render_atomic_sum(sumspec, L.spec);
          const Atom& atom = s.atoms[0];
          if (atom.zero_flag) return InstanceOut{0, 1, true};
          GridFunction Ta = apply_to_atom(atom.a, *L.kernel);
          // operator moment condition, verified numerically before asserting
          bool momentOk = true;
          for (int b0 = 0; b0 <= std::max(Lm, 0) && Lm >= 0; ++b0)
            for (int b1 = 0; b1 + b0 <= Lm; ++b1) {
              GridFunction mom = GridFunction::sample(L.spec, [b0, b1](double x, double y) {
                return std::pow(x, b0) * std::pow(y, b1);
              });
              double m = 0, scale = 0;
              for (std::size_t sIdx = 0; sIdx < Ta.size(); ++sIdx) {
                m += mom[sIdx] * Ta[sIdx];
                scale += std::abs(mom[sIdx] * Ta[sIdx]);
              }
              if (std::abs(m) > 0.05 * scale + 1e-12) momentOk = false;
              if (d == 1) break;  // only b1 = 0 in 1D
            }
          GridFunction g = radial_maximal(Ta, *L.phi, L.tGrid);
          GridFunction B = frac_maximal_indicator(L.spec, atom.Q, 0.0);
          double e = (double(d) + Lm + 1.0) / double(d);
          for (std::size_t sIdx = 0; sIdx < B.size(); ++sIdx) B.at(sIdx) = std::pow(B[sIdx], e);
          Cube qss = star(star(atom.Q, d), d);
          return InstanceOut{farfield_sup(g, B, qss), 1.0, momentOk};
        });
        break;
      }

      case Target::T1_1:
      case Target::T1_2:
      case Target::T1_3:
      case Target::T1_4:
      case Target::T1_5:
      case Target::T1_6: {
        AtomicSumSpec sumspec = random_atomic_sum_spec(base, iseed, 3, atomN);
        bool frac = uses_fractional_pair(cs.target);
        evals.push_back([sumspec, frac](const Level& L) {
          AtomicSum s = render_atomic_sum(sumspec, L.spec);
          GridFunction f = s.assemble();
          GridFunction Tf = apply_to_atom(f, *L.kernel);
          GridFunction m = radial_maximal(Tf, *L.phi, L.tGrid);
          const Space& tgt = frac ? *L.Xtgt : *L.X;
          const Space& src = frac ? *L.Xsrc : *L.X;
          return InstanceOut{tgt.norm(m), coefficient_norm(s, src), true};
        });
        break;
      }
    }
  }
  return evals;
}

// ---------------------------------------------------------------------------
// hypothesis gating

double conjugate_of(double s) { return s / (s - 1.0); }

void record_weight_hypothesis(const CheckSpec& cs, const GridSpec& base, CheckReport& rep,
                              int atomN) {
  if (is_variable_target(cs.target)) {
    ExponentFunction p(sample_expr(base, cs.exponent));
    const LhConstants& lh = p.lh_constants();
    rep.provenance.push_back("# hypothesis: log-Holder C0=" + fmt(lh.c0) +
                             " Cinf=" + fmt(lh.cinf) + " p_inf=" + fmt(lh.p_inf) +
                             " p-=" + fmt(p.p_minus()) + " p+=" + fmt(p.p_plus()));
    return;
  }

  std::optional<ClassParams> cp;
  WeightFn w = weight_fn(cs);
  WeightFn wp = [w, p = cs.p](double x, double y) { return std::pow(w(x, y), p); };
  WeightFn use = w;
  std::string label;
  switch (cs.target) {
    case Target::L4_1:
      cp = ClassParams{WeightClass::Ap, cs.p, 0, 0};
      label = "A_p(p=" + fmt(cs.p) + ")";
      break;
    case Target::L4_3:
      cp = ClassParams{WeightClass::Apq, cs.p, cs.q, 0};
      label = "A_{p,q}";
      break;
    case Target::R4_5:
      cp = ClassParams{WeightClass::Ap, std::max(2.0, cs.p), 0, 0};
      label = "A_p at max(2,p) (A_inf surrogate)";
      break;
    case Target::L4_6:
      if (cs.p == 1.0) {
        cp = ClassParams{WeightClass::RHinf, 0, 0, 0};
        label = "RH_inf";
      } else {
        cp = ClassParams{WeightClass::RHs, 0, 0, conjugate_of(1.0 / cs.p)};
        label = "RH_{(1/p)'}";
      }
      break;
    case Target::L4_7:
      cp = ClassParams{WeightClass::RHs, 0, 0, conjugate_of(cs.q / cs.p)};
      label = "RH_{(q/p)'}";
      break;
    case Target::L4_9:
    case Target::T1_3:
      cp = ClassParams{WeightClass::RHs, 0, 0, cs.q / cs.p};
      label = "RH_{q/p} of w^p";
      use = wp;
      break;
    case Target::T1_1:
    case Target::T1_5: {
      double tau = (double(cs.dim) + atomN + 1.0) / double(cs.dim);
      cp = ClassParams{WeightClass::Ap, cs.p * tau, 0, 0};
      label = "A_{p*tau}(tau=" + fmt(tau) + ")";
      break;
    }
    default:
      break;
  }
  if (!cp) return;
  int factor = cs.dim == 1 ? 4 : 2;
  std::vector<double> tr = refinement_trend(use, base, *cp, 2, factor, 400);
  std::string line = "# hypothesis: " + label + " trend:";
  for (double v : tr) line += " " + fmt(v);
  bool div = diverges(tr);
  line += div ? " (diverges)" : " (bounded)";
  rep.provenance.push_back(line);
  if (div) rep.hypothesis_ok = false;
}

}  // namespace

// ---------------------------------------------------------------------------

Target target_from_string(const std::string& s) {
  auto it = target_table().find(s);
  if (it == target_table().end()) throw GridError("unknown target: " + s);
  return it->second;
}

std::string target_to_string(Target t) {
  for (const auto& [k, v] : target_table())
    if (v == t) return k;
  return "?";
}

GridSpec default_grid(int dim) {
  if (dim == 1) return GridSpec(1, {-8.0, 0.0}, {8.0, 0.0}, 1.0 / 256.0);
  if (dim == 2) return GridSpec(2, {-4.0, -4.0}, {4.0, 4.0}, 1.0 / 64.0);
  throw GridError("default_grid: dim must be 1 or 2");
}

void CheckSpec::validate() const {
  auto fail = [](const std::string& m) { throw GridError("CheckSpec: " + m); };
  if (dim != 1 && dim != 2) fail("dim must be 1 or 2");
  if (refinementLevels < 2) fail("refinementLevels must be >= 2");
  if (instances < 1) fail("instances must be >= 1");
  if (is_variable_target(target) && exponent.empty())
    fail("exponent expression required for " + target_to_string(target));

  auto need_frac_identity = [&](double pp) {
    if (!(alpha > 0) || !(alpha < dim)) fail("requires 0 < alpha < n");
    if (std::abs(1.0 / pp - 1.0 / q - alpha / double(dim)) > 1e-12)
      fail("violates 1/p - 1/q = alpha/n");
  };

  switch (target) {
    case Target::L4_1:
      if (!(p > 1) || !(r > 1)) fail("L4.1 requires 1 < p, r");
      break;
    case Target::L4_2:
      if (!(r > 1)) fail("L4.2 requires r > 1");
      break;
    case Target::L4_3:
      if (!(p > 1) || !(r > 1)) fail("L4.3 requires 1 < p, r");
      need_frac_identity(p);
      break;
    case Target::L4_4:
      if (!(r > 1)) fail("L4.4 requires r > 1");
      if (!(alpha > 0) || !(alpha < dim)) fail("requires 0 < alpha < n");
      break;
    case Target::R4_5:
      if (!(r > 1)) fail("R4.5 requires dilation r > 1");
      break;
    case Target::L4_6:
      if (!(p > 0) || !(p <= 1)) fail("L4.6 requires 0 < p <= 1");
      break;
    case Target::L4_7:
      if (!(q > 1) || !(p > 0) || !(p < q)) fail("L4.7 requires q > 1 and 0 < p < q");
      break;
    case Target::L4_9:
      if (!(p > 0)) fail("L4.9 requires p > 0");
      need_frac_identity(p);
      break;
    case Target::L4_10:
      if (!(alpha > 0) || !(alpha < dim)) fail("requires 0 < alpha < n");
      break;
    case Target::T1_3:
      if (!(p > 0)) fail("T1.3 requires p > 0");
      need_frac_identity(p);
      break;
    case Target::T1_4:
      if (!(alpha > 0) || !(alpha < dim)) fail("requires 0 < alpha < n");
      break;
    default:
      break;
  }
}

CheckReport run_check(const CheckSpec& cs) {
  cs.validate();
  CheckReport rep;
  rep.target = target_to_string(cs.target);
  GridSpec base = default_grid(cs.dim);

  int atomN = 1, momentL = 0;
  if (is_atomic_target(cs.target)) derive_orders(cs, base, atomN, momentL);
  if (cs.target == Target::L5_2 && cs.N != kNSentinel) atomN = cs.N;
  if (cs.target == Target::L7_1) {
    momentL = cs.N == kNSentinel ? 0 : cs.N;
    atomN = momentL + 1;
  }

  rep.provenance.push_back("# target: " + rep.target + " seed: " + std::to_string(cs.seed) +
                           " instances: " + std::to_string(cs.instances) +
                           " levels: " + std::to_string(cs.refinementLevels));
  rep.provenance.push_back("# grid: dim=" + std::to_string(cs.dim) + " box=[" +
                           fmt(base.lo(0)) + "," + fmt(base.hi(0)) + "] h=" +
                           fmt(base.spacing()));
  if (is_atomic_target(cs.target))
    rep.provenance.push_back("# atoms: N=" + std::to_string(atomN) +
                             " L=" + std::to_string(momentL) +
                             " (floor argument uses the spatial dimension n)");
  record_weight_hypothesis(cs, base, rep, atomN);

  std::vector<Eval> evals = build_evals(cs, base, atomN, momentL);

  int nLevels = cs.refinementLevels;
  rep.records.resize(std::size_t(cs.instances) * std::size_t(nLevels));
  int momentFailures = 0;

  for (int l = 0; l < nLevels; ++l) {
    GridSpec spec(cs.dim, {base.lo(0), cs.dim == 2 ? base.lo(1) : 0.0},
                  {base.hi(0), cs.dim == 2 ? base.hi(1) : 0.0},
                  base.spacing() / std::pow(2.0, l));
    Level L = build_level(cs, spec, atomN, momentL);

    unsigned nt = std::max(1u, std::min({std::thread::hardware_concurrency(), 8u,
                                         unsigned(cs.instances)}));
    std::vector<std::thread> pool;
    std::exception_ptr err;
    std::mutex errMu;
    std::atomic<int> next{0};
    auto worker = [&]() {
      for (;;) {
        int i = next.fetch_add(1);
        if (i >= cs.instances) return;
        try {
          InstanceOut out = evals[std::size_t(i)](L);
          InstanceRecord& rec = rep.records[std::size_t(i) * std::size_t(nLevels) + std::size_t(l)];
          rec.instance = i;
          rec.level = l;
          rec.lhs = out.lhs;
          rec.rhs = out.rhs;
          rec.ratio = safe_ratio(out.lhs, out.rhs);
          if (!out.momentOk) {
            std::lock_guard<std::mutex> g(errMu);
            ++momentFailures;
          }
        } catch (...) {
          std::lock_guard<std::mutex> g(errMu);
          if (!err) err = std::current_exception();
          return;
        }
      }
    };
    for (unsigned t = 0; t < nt; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (err) std::rethrow_exception(err);

    double mx = 0;
    for (int i = 0; i < cs.instances; ++i)
      mx = std::max(mx, rep.records[std::size_t(i) * std::size_t(nLevels) + std::size_t(l)].ratio);
    rep.maxRatio.push_back(mx);
  }

  for (std::size_t l = 1; l < rep.maxRatio.size(); ++l) {
    double prev = rep.maxRatio[l - 1], cur = rep.maxRatio[l];
    rep.trend.push_back(prev == 0 ? (cur == 0 ? 1.0 : std::numeric_limits<double>::infinity())
                                  : cur / prev);
  }

  if (momentFailures > 0) {
    rep.provenance.push_back("# operator moment condition failed on " +
                             std::to_string(momentFailures) + " instance evaluations");
    rep.hypothesis_ok = false;
  }

  bool finite = true;
  for (const auto& r : rep.records)
    if (!std::isfinite(r.ratio)) finite = false;
  for (double m : rep.maxRatio)
    if (!std::isfinite(m)) finite = false;

  if (!rep.hypothesis_ok) {
    rep.verdict = "indeterminate";
  } else if (!finite) {
    rep.verdict = "fail";
  } else {
    bool allOk = true;
    for (double t : rep.trend) allOk = allOk && t <= 1.10;
    if (allOk) {
      rep.verdict = "pass";
    } else {
      // one bad trend is noise; two consecutive bad trends at the finest
      // levels is a failure
      std::size_t n = rep.trend.size();
      bool persists = n >= 2 && rep.trend[n - 1] > 1.10 && rep.trend[n - 2] > 1.10;
      rep.verdict = persists ? "fail" : "indeterminate";
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// config parsing

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

void assign_field(CheckSpec& cs, const std::string& key, const std::string& value) {
  if (key == "target")
    cs.target = target_from_string(value);
  else if (key == "p")
    cs.p = std::stod(value);
  else if (key == "q")
    cs.q = std::stod(value);
  else if (key == "r")
    cs.r = std::stod(value);
  else if (key == "alpha")
    cs.alpha = std::stod(value);
  else if (key == "N")
    cs.N = std::stoi(value);
  else if (key == "weight")
    cs.weight = value;
  else if (key == "exponent")
    cs.exponent = value;
  else if (key == "instances")
    cs.instances = std::stoi(value);
  else if (key == "seed")
    cs.seed = std::stoull(value);
  else if (key == "refinementLevels")
    cs.refinementLevels = std::stoi(value);
  else if (key == "dim")
    cs.dim = std::stoi(value);
  else
    throw GridError("config: unknown field '" + key + "'");
}

}  // namespace

std::vector<CheckSpec> parse_config(const std::string& text) {
  std::vector<CheckSpec> specs;
  std::istringstream in(text);
  std::string line;
  bool open = false;
  while (std::getline(in, line)) {
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line == "[check]") {
      specs.emplace_back();
      open = true;
      continue;
    }
    if (line.front() == '[') throw GridError("config: unknown section " + line);
    if (!open) throw GridError("config: field outside a [check] section");
    std::size_t eq = line.find('=');
    if (eq == std::string::npos) throw GridError("config: expected 'key = value': " + line);
    assign_field(specs.back(), trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  for (const auto& cs : specs) cs.validate();
  return specs;
}

std::vector<CheckSpec> load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw GridError("cannot open config: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

// ---------------------------------------------------------------------------
// report writers

void write_csv(const CheckReport& rep, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw GridError("cannot open for writing: " + path);
  std::time_t now = std::time(nullptr);
  char stamp[64];
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  out << "# timestamp: " << stamp << "\r\n";
  for (const auto& line : rep.provenance) out << line << "\r\n";
  out << "# verdict: " << rep.verdict << "\r\n";
  out << "instance,level,lhs,rhs,ratio\r\n";
  for (const auto& r : rep.records)
    out << r.instance << "," << r.level << "," << fmt(r.lhs) << "," << fmt(r.rhs) << ","
        << fmt(r.ratio) << "\r\n";
}

void write_svg(const CheckReport& rep, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw GridError("cannot open for writing: " + path);
  const int W = 480, H = 320, ml = 60, mb = 40, mt = 20, mr = 20;
  double ymax = 1e-12;
  for (double m : rep.maxRatio)
    if (std::isfinite(m)) ymax = std::max(ymax, m);
  ymax *= 1.1;
  std::size_t n = std::max<std::size_t>(rep.maxRatio.size(), 2);
  auto px = [&](std::size_t l) {
    return ml + double(l) * double(W - ml - mr) / double(n - 1);
  };
  auto py = [&](double v) { return H - mb - v / ymax * double(H - mb - mt); };
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
      << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<line x1=\"" << ml << "\" y1=\"" << (H - mb) << "\" x2=\"" << (W - mr) << "\" y2=\""
      << (H - mb) << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << (H - mb)
      << "\" stroke=\"black\"/>\n";
  out << "<text x=\"" << (W / 2) << "\" y=\"" << (H - 8)
      << "\" text-anchor=\"middle\" font-size=\"12\">level</text>\n";
  out << "<text x=\"14\" y=\"" << (H / 2)
      << "\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 14 " << (H / 2)
      << ")\">max ratio</text>\n";
  out << "<text x=\"" << (W / 2) << "\" y=\"14\" text-anchor=\"middle\" font-size=\"12\">"
      << rep.target << " (" << rep.verdict << ")</text>\n";
  out << "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"2\" points=\"";
  for (std::size_t l = 0; l < rep.maxRatio.size(); ++l) {
    double v = std::isfinite(rep.maxRatio[l]) ? rep.maxRatio[l] : ymax;
    out << px(l) << "," << py(v) << " ";
  }
  out << "\"/>\n";
  for (std::size_t l = 0; l < rep.maxRatio.size(); ++l) {
    out << "<text x=\"" << px(l) << "\" y=\"" << (H - mb + 16)
        << "\" text-anchor=\"middle\" font-size=\"10\">" << l << "</text>\n";
  }
  out << "<text x=\"" << (ml - 6) << "\" y=\"" << (py(0) + 4)
      << "\" text-anchor=\"end\" font-size=\"10\">0</text>\n";
  out << "<text x=\"" << (ml - 6) << "\" y=\"" << (py(ymax / 1.1) + 4)
      << "\" text-anchor=\"end\" font-size=\"10\">" << fmt(ymax / 1.1) << "</text>\n";
  out << "</svg>\n";
}

RunResult run_config(const std::string& configPath, const std::string& reportDir) {
  RunResult res;
  std::vector<CheckSpec> specs = load_config(configPath);
  std::filesystem::create_directories(reportDir);
  std::map<std::string, int> seen;
  for (const auto& cs : specs) {
    CheckReport rep = run_check(cs);
    std::string name = rep.target;
    int k = ++seen[name];
    if (k > 1) name += "-" + std::to_string(k);
    write_csv(rep, reportDir + "/" + name + ".csv");
    write_svg(rep, reportDir + "/" + name + ".svg");
    res.all_pass = res.all_pass && rep.verdict == "pass";
    res.reports.push_back(std::move(rep));
  }
  return res;
}

}  // namespace hardy
