#include "operators.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numbers>

namespace hardy {

namespace {

double norm2(const Point& z, int dim) {
  return dim == 1 ? std::abs(z[0]) : std::hypot(z[0], z[1]);
}

// spot-check the declared decay bound |K(z)| <= A0 |z|^{-n+alpha} (alpha = 0
// for singular kinds) within factor 2 on a fixed sample of radii
void spot_check(const KernelSpec& K, double A0) {
  for (int k = -4; k <= 4; ++k) {
    double r = std::pow(2.0, k);
    Point z{r, 0};
    if (K.dim == 2) z = {r / std::numbers::sqrt2, r / std::numbers::sqrt2};
    double bound = A0 * std::pow(r, K.alpha - K.dim);
    if (std::abs(K.eval(z)) > 2.0 * bound)
      throw GridError("KernelSpec: declared decay bound fails spot check");
  }
}

}  // namespace

double KernelSpec::eval(const Point& z) const {
  switch (kind) {
    case KernelKind::Hilbert:
      return 1.0 / (std::numbers::pi * z[0]);
    case KernelKind::RieszJ: {
      double r = std::hypot(z[0], z[1]);
      return z[riesz_axis] / (2.0 * std::numbers::pi * r * r * r);
    }
    case KernelKind::Power:
      return std::pow(norm2(z, dim), alpha - dim);
    case KernelKind::NonConvolution:
      throw GridError("KernelSpec: non-convolution kernel has no offset form");
  }
  return 0;
}

KernelSpec KernelSpec::hilbert() {
  KernelSpec K;
  K.kind = KernelKind::Hilbert;
  K.dim = 1;
  K.odd = true;
  spot_check(K, 1.0 / std::numbers::pi);
  return K;
}

KernelSpec KernelSpec::riesz(int axis) {
  KernelSpec K;
  K.kind = KernelKind::RieszJ;
  K.dim = 2;
  K.riesz_axis = axis;
  K.odd = true;
  spot_check(K, 1.0 / (2.0 * std::numbers::pi));
  return K;
}

KernelSpec KernelSpec::power(int dim, double alpha) {
  if (!(alpha > 0) || !(alpha < dim)) throw GridError("KernelSpec: power needs 0 < alpha < n");
  KernelSpec K;
  K.kind = KernelKind::Power;
  K.dim = dim;
  K.alpha = alpha;
  K.odd = false;
  spot_check(K, 1.0);
  return K;
}

KernelSpec KernelSpec::nonconvolution(int dim,
                                      std::function<double(const Point&, const Point&)> Kfn,
                                      double C, double delta, int L) {
  if (!(delta > 0) || !(delta <= 1)) throw GridError("KernelSpec: delta must lie in (0,1]");
  KernelSpec K;
  K.kind = KernelKind::NonConvolution;
  K.dim = dim;
  K.nonconv = std::move(Kfn);
  K.nc_C = C;
  K.nc_delta = delta;
  K.nc_L = L;
  K.odd = false;
  // size estimate |K(x,y)| <= C |x-y|^{-n}, sampled along a diagonal offset
  for (int k = -3; k <= 3; ++k) {
    double r = std::pow(2.0, k);
    Point x{0.3, 0.1}, y{0.3 + r, dim == 2 ? 0.1 + 0.0 : 0.0};
    double d = norm2({x[0] - y[0], x[1] - y[1]}, dim);
    if (std::abs(K.nonconv(x, y)) > 2.0 * C * std::pow(d, -double(dim)))
      throw GridError("KernelSpec: declared size bound fails spot check");
  }
  return K;
}

namespace {

/// admissible cube sides in cells: exhaustive 1..64, then dyadic up to 2x extent
std::vector<std::size_t> maximal_sides(std::size_t maxExtent) {
  std::vector<std::size_t> sides;
  for (std::size_t m = 1; m <= std::min<std::size_t>(64, 2 * maxExtent); ++m) sides.push_back(m);
  for (std::size_t m = 128; m <= 2 * maxExtent; m *= 2) sides.push_back(m);
  return sides;
}

// sliding max of a[i], window i in [k-m+1, k]; a indexed by offset ofs
void sliding_max(const std::vector<double>& a, std::size_t m, std::vector<double>& out) {
  // out[k] = max over a[k .. k+m-1] with a of length out.size()+m-1
  std::deque<std::size_t> dq;
  for (std::size_t i = 0; i < a.size(); ++i) {
    while (!dq.empty() && a[dq.back()] <= a[i]) dq.pop_back();
    dq.push_back(i);
    if (i + 1 >= m) {
      std::size_t k = i + 1 - m;
      if (dq.front() < k) dq.pop_front();
      out[k] = a[dq.front()];
    }
  }
}

GridFunction maximal_impl(const GridFunction& f, double alpha) {
  const GridSpec& spec = f.spec();
  double h = spec.spacing();
  GridFunction absf = f.abs();
  GridFunction out(spec);

  if (spec.dim() == 1) {
    std::size_t N = spec.extent(0);
    std::vector<double> P(N + 1, 0.0);
    for (std::size_t i = 0; i < N; ++i) P[i + 1] = P[i] + absf[i];
    std::vector<double> A, M(N);
    for (std::size_t m : maximal_sides(N)) {
      double factor = alpha == 0 ? 1.0 : std::pow(double(m) * h, alpha);
      // windows starting at signed index s in [1-m, N-1]; function is 0 off-grid
      std::size_t W = N + m - 1;
      A.assign(W, 0.0);
      for (std::size_t u = 0; u < W; ++u) {
        std::ptrdiff_t s = std::ptrdiff_t(u) - std::ptrdiff_t(m) + 1;
        std::size_t lo = std::size_t(std::max<std::ptrdiff_t>(s, 0));
        std::size_t hi = std::size_t(std::min<std::ptrdiff_t>(s + std::ptrdiff_t(m),
                                                              std::ptrdiff_t(N)));
        A[u] = hi > lo ? factor * (P[hi] - P[lo]) / double(m) : 0.0;
      }
      // cell k is covered by windows u = k .. k+m-1
      sliding_max(A, m, M);
      for (std::size_t k = 0; k < N; ++k) out.at(k) = std::max(out.at(k), M[k]);
    }
    return out;
  }

  // 2D: summed-area window averages, then a separable sliding max
  std::size_t N0 = spec.extent(0), N1 = spec.extent(1);
  std::vector<double> P((N0 + 1) * (N1 + 1), 0.0);
  auto pat = [&](std::size_t i, std::size_t j) -> double& { return P[i * (N1 + 1) + j]; };
  for (std::size_t i = 0; i < N0; ++i)
    for (std::size_t j = 0; j < N1; ++j)
      pat(i + 1, j + 1) = absf.at(i, j) + pat(i, j + 1) + pat(i + 1, j) - pat(i, j);
  auto boxsum = [&](std::ptrdiff_t i0, std::ptrdiff_t j0, std::ptrdiff_t i1, std::ptrdiff_t j1) {
    i0 = std::clamp<std::ptrdiff_t>(i0, 0, std::ptrdiff_t(N0));
    i1 = std::clamp<std::ptrdiff_t>(i1, 0, std::ptrdiff_t(N0));
    j0 = std::clamp<std::ptrdiff_t>(j0, 0, std::ptrdiff_t(N1));
    j1 = std::clamp<std::ptrdiff_t>(j1, 0, std::ptrdiff_t(N1));
    if (i1 <= i0 || j1 <= j0) return 0.0;
    return pat(std::size_t(i1), std::size_t(j1)) - pat(std::size_t(i0), std::size_t(j1)) -
           pat(std::size_t(i1), std::size_t(j0)) + pat(std::size_t(i0), std::size_t(j0));
  };

  std::size_t maxExtent = std::max(N0, N1);
  for (std::size_t m : maximal_sides(maxExtent)) {
    double factor = alpha == 0 ? 1.0 : std::pow(double(m) * h, alpha);
    std::size_t W0 = N0 + m - 1, W1 = N1 + m - 1;
    std::vector<double> A(W0 * W1);
    for (std::size_t u = 0; u < W0; ++u) {
      std::ptrdiff_t s0 = std::ptrdiff_t(u) - std::ptrdiff_t(m) + 1;
      for (std::size_t v = 0; v < W1; ++v) {
        std::ptrdiff_t s1 = std::ptrdiff_t(v) - std::ptrdiff_t(m) + 1;
        A[u * W1 + v] =
            factor * boxsum(s0, s1, s0 + std::ptrdiff_t(m), s1 + std::ptrdiff_t(m)) /
            double(m * m);
      }
    }
    // max over the second axis, then the first
    std::vector<double> B(W0 * N1), row(W1), rowOut(N1), col(W0), colOut(N0);
    for (std::size_t u = 0; u < W0; ++u) {
      for (std::size_t v = 0; v < W1; ++v) row[v] = A[u * W1 + v];
      sliding_max(row, m, rowOut);
      for (std::size_t l = 0; l < N1; ++l) B[u * N1 + l] = rowOut[l];
    }
    for (std::size_t l = 0; l < N1; ++l) {
      for (std::size_t u = 0; u < W0; ++u) col[u] = B[u * N1 + l];
      sliding_max(col, m, colOut);
      for (std::size_t k = 0; k < N0; ++k) {
        double& o = out.at(spec.index(k, l));
        o = std::max(o, colOut[k]);
      }
    }
  }
  return out;
}

}  // namespace

GridFunction hl_maximal(const GridFunction& f) { return maximal_impl(f, 0.0); }

GridFunction frac_maximal(const GridFunction& f, double alpha) {
  if (alpha < 0 || alpha >= f.spec().dim())
    throw GridError("frac_maximal: requires 0 <= alpha < n");
  return maximal_impl(f, alpha);
}

namespace {

// axis distance from x to the interval [lo, lo + side]
double axis_dist(double x, double lo, double side) {
  return std::max({lo - x, x - (lo + side), 0.0});
}

}  // namespace

GridFunction frac_maximal_indicator(const GridSpec& spec, const Cube& Q, double alpha) {
  const int n = spec.dim();
  if (alpha < 0 || alpha >= n) throw GridError("frac_maximal_indicator: requires 0 <= alpha < n");
  if (!(Q.side > 0)) throw GridError("frac_maximal_indicator: degenerate cube");
  const double ell = Q.side;
  GridFunction out(spec);

  if (n == 1) {
    // the best interval covers all of Q and reaches x: M_alpha = ell (ell+d)^{alpha-1}
    for (std::size_t i = 0; i < spec.extent(0); ++i) {
      double d = axis_dist(spec.coord(0, i), Q.corner[0], ell);
      out.at(i) = ell * std::pow(ell + d, alpha - 1.0);
    }
    return out;
  }

  // 2D: a cube of side s containing x overlaps Q by clamp(s - d_a, 0, ell) per
  // axis; maximize g(s) = s^(alpha-2) * overlap0 * overlap1.  g is piecewise
  // smooth with breakpoints where an overlap saturates, so the max is attained
  // at a breakpoint or an interior critical point of a piece.
  for (std::size_t i0 = 0; i0 < spec.extent(0); ++i0)
    for (std::size_t i1 = 0; i1 < spec.extent(1); ++i1) {
      double d0 = axis_dist(spec.coord(0, i0), Q.corner[0], ell);
      double d1 = axis_dist(spec.coord(1, i1), Q.corner[1], ell);
      if (d0 > d1) std::swap(d0, d1);
      auto g = [&](double s) {
        double c0 = std::clamp(s - d0, 0.0, ell);
        double c1 = std::clamp(s - d1, 0.0, ell);
        return std::pow(s, alpha - 2.0) * c0 * c1;
      };
      std::vector<double> cand = {d0 + ell, d1 + ell};
      // both overlaps linear on (d1, d0 + ell): critical point of
      // s^(alpha-2)(s-d0)(s-d1) solves alpha s^2 - (alpha-1)(d0+d1)s + (alpha-2)d0d1 = 0
      {
        double a = alpha, b = -(alpha - 1.0) * (d0 + d1), c = (alpha - 2.0) * d0 * d1;
        if (a == 0) {
          if (b != 0) cand.push_back(-c / b);
        } else {
          double disc = b * b - 4 * a * c;
          if (disc >= 0) {
            double r = std::sqrt(disc);
            cand.push_back((-b + r) / (2 * a));
            cand.push_back((-b - r) / (2 * a));
          }
        }
      }
      // one overlap saturated at ell on (d0 + ell, d1 + ell): critical point of
      // s^(alpha-2)(s-d1) is (2-alpha)d1/(1-alpha)
      if (alpha < 1.0 && d1 > 0) cand.push_back((2.0 - alpha) * d1 / (1.0 - alpha));
      double best = 0;
      for (double s : cand)
        if (s > d1 && s > 0) best = std::max(best, g(s));
      out.at(spec.index(i0, i1)) = best;
    }
  return out;
}

GridFunction riesz_potential(const GridFunction& f, double alpha) {
  const GridSpec& spec = f.spec();
  int n = spec.dim();
  if (!(alpha > 0) || !(alpha < n)) throw GridError("riesz_potential: requires 0 < alpha < n");
  double h = spec.spacing();
  GridFunction out(spec);

  if (n == 1) {
    std::size_t N = spec.extent(0);
    double diag = 2.0 * std::pow(h / 2.0, alpha) / alpha;  // exact cell integral
    // gather support once; cost O(N * nnz)
    std::vector<std::size_t> supp;
    for (std::size_t j = 0; j < N; ++j)
      if (f[j] != 0) supp.push_back(j);
    for (std::size_t i = 0; i < N; ++i) {
      double acc = 0;
      for (std::size_t j : supp) {
        if (j == i) continue;
        double d = std::abs(double(i) - double(j)) * h;
        acc += std::pow(d, alpha - 1.0) * f[j];
      }
      out.at(i) = h * acc + diag * f[i];
    }
    return out;
  }

  // 2D: 9-point refined subquadrature on the singular cell; the central
  // subcell is replaced by the equal-area disk integral
  double sub = h / 3.0;
  double rEq = sub / std::sqrt(std::numbers::pi);
  double diag = 2.0 * std::numbers::pi * std::pow(rEq, alpha) / alpha;
  for (int a = -1; a <= 1; ++a)
    for (int b = -1; b <= 1; ++b) {
      if (a == 0 && b == 0) continue;
      diag += std::pow(std::hypot(a * sub, b * sub), alpha - 2.0) * sub * sub;
    }
  std::size_t N0 = spec.extent(0), N1 = spec.extent(1);
  std::vector<std::array<std::size_t, 2>> supp;
  for (std::size_t j0 = 0; j0 < N0; ++j0)
    for (std::size_t j1 = 0; j1 < N1; ++j1)
      if (f.at(j0, j1) != 0) supp.push_back({j0, j1});
  for (std::size_t i0 = 0; i0 < N0; ++i0)
    for (std::size_t i1 = 0; i1 < N1; ++i1) {
      double acc = 0;
      for (const auto& j : supp) {
        if (j[0] == i0 && j[1] == i1) continue;
        double d = std::hypot((double(i0) - double(j[0])) * h, (double(i1) - double(j[1])) * h);
        acc += std::pow(d, alpha - 2.0) * f.at(j[0], j[1]);
      }
      out.at(spec.index(i0, i1)) = h * h * acc + diag * f.at(i0, i1);
    }
  return out;
}

namespace {

// radius of the near window, in cells, on each side of the singularity
constexpr std::ptrdiff_t kNearCells = 2;

}  // namespace

// p.v. quadrature: cells more than kNearCells away use the plain midpoint
// rule.  Inside the symmetric near window the constant part of f cancels
// against the odd kernel exactly, so we sum K(z)(f(y) - f(x)) there, and the
// remaining center cell contributes -grad f(x) . int_{cell} z K(z) dz.
GridFunction singular_integral(const GridFunction& f, const KernelSpec& K) {
  const GridSpec& spec = f.spec();
  if (!K.is_singular()) throw GridError("singular_integral: kernel is not a singular kind");
  if (!K.odd) throw GridError("singular_integral: non-odd kernel without a pv policy");
  if (K.dim != spec.dim()) throw GridError("singular_integral: dimension mismatch");
  double h = spec.spacing();
  double hn = spec.dim() == 2 ? h * h : h;
  GridFunction out(spec);

  if (spec.dim() == 1) {
    std::size_t N = spec.extent(0);
    std::vector<std::size_t> supp;
    for (std::size_t j = 0; j < N; ++j)
      if (f[j] != 0) supp.push_back(j);
    // center-cell first moment int_{|z|<h/2} z K(z) dz by midpoint subquadrature
    double c0 = 0, sub = h / 8.0;
    for (int q = 0; q < 8; ++q) {
      double z = (double(q) + 0.5) * sub - h / 2.0;
      c0 += z * K.eval({z, 0}) * sub;
    }
    for (std::size_t i = 0; i < N; ++i) {
      double acc = 0;
      for (std::size_t j : supp) {
        std::ptrdiff_t d = std::ptrdiff_t(i) - std::ptrdiff_t(j);
        if (d >= -kNearCells && d <= kNearCells) continue;
        acc += K.eval({double(d) * h, 0}) * f[j];
      }
      double corr = 0;
      if (i >= std::size_t(kNearCells) && i + std::size_t(kNearCells) < N) {
        for (std::ptrdiff_t k = 1; k <= kNearCells; ++k) {
          double z = double(k) * h;
          acc += K.eval({z, 0}) * (f[i - std::size_t(k)] - f[i]);
          acc += K.eval({-z, 0}) * (f[i + std::size_t(k)] - f[i]);
        }
        corr = -c0 * (f[i + 1] - f[i - 1]) / (2.0 * h);
      }
      out.at(i) = hn * acc + corr;
    }
    return out;
  }

  std::size_t N0 = spec.extent(0), N1 = spec.extent(1);
  std::vector<std::array<std::size_t, 2>> supp;
  for (std::size_t j0 = 0; j0 < N0; ++j0)
    for (std::size_t j1 = 0; j1 < N1; ++j1)
      if (f.at(j0, j1) != 0) supp.push_back({j0, j1});
  double c0 = 0, c1 = 0, sub = h / 8.0;
  for (int q0 = 0; q0 < 8; ++q0)
    for (int q1 = 0; q1 < 8; ++q1) {
      Point z{(double(q0) + 0.5) * sub - h / 2.0, (double(q1) + 0.5) * sub - h / 2.0};
      double v = K.eval(z) * sub * sub;
      c0 += z[0] * v;
      c1 += z[1] * v;
    }
  for (std::size_t i0 = 0; i0 < N0; ++i0)
    for (std::size_t i1 = 0; i1 < N1; ++i1) {
      double acc = 0;
      for (const auto& j : supp) {
        std::ptrdiff_t d0 = std::ptrdiff_t(i0) - std::ptrdiff_t(j[0]);
        std::ptrdiff_t d1 = std::ptrdiff_t(i1) - std::ptrdiff_t(j[1]);
        if (std::max(std::abs(d0), std::abs(d1)) <= kNearCells) continue;
        acc += K.eval({double(d0) * h, double(d1) * h}) * f.at(j[0], j[1]);
      }
      double corr = 0;
      bool interior = i0 >= std::size_t(kNearCells) && i0 + std::size_t(kNearCells) < N0 &&
                      i1 >= std::size_t(kNearCells) && i1 + std::size_t(kNearCells) < N1;
      if (interior) {
        double fc = f.at(i0, i1);
        bool active = fc != 0;
        for (std::ptrdiff_t k0 = -kNearCells; k0 <= kNearCells && !active; ++k0)
          for (std::ptrdiff_t k1 = -kNearCells; k1 <= kNearCells && !active; ++k1)
            active = f.at(std::size_t(std::ptrdiff_t(i0) + k0),
                          std::size_t(std::ptrdiff_t(i1) + k1)) != 0;
        if (active) {
          for (std::ptrdiff_t k0 = -kNearCells; k0 <= kNearCells; ++k0)
            for (std::ptrdiff_t k1 = -kNearCells; k1 <= kNearCells; ++k1) {
              if (k0 == 0 && k1 == 0) continue;
              double fv = f.at(std::size_t(std::ptrdiff_t(i0) + k0),
                               std::size_t(std::ptrdiff_t(i1) + k1));
              acc += K.eval({-double(k0) * h, -double(k1) * h}) * (fv - fc);
            }
          double fx = (f.at(i0 + 1, i1) - f.at(i0 - 1, i1)) / (2.0 * h);
          double fy = (f.at(i0, i1 + 1) - f.at(i0, i1 - 1)) / (2.0 * h);
          corr = -(fx * c0 + fy * c1);
        }
      }
      out.at(spec.index(i0, i1)) = hn * acc + corr;
    }
  return out;
}

// same p.v. scheme as singular_integral; the plug-in kernel must be locally
// antisymmetric, K(x, x+u) = -K(x, x-u), for the near-window cancellation
GridFunction nonconv_apply(const GridFunction& f, const KernelSpec& K) {
  const GridSpec& spec = f.spec();
  if (K.kind != KernelKind::NonConvolution)
    throw GridError("nonconv_apply: kernel is not non-convolution");
  double h = spec.spacing();
  double hn = spec.dim() == 2 ? h * h : h;
  GridFunction out(spec);

  std::size_t N0 = spec.extent(0), N1 = spec.dim() == 2 ? spec.extent(1) : 1;
  std::vector<std::array<std::size_t, 2>> supp;
  for (std::size_t j0 = 0; j0 < N0; ++j0)
    for (std::size_t j1 = 0; j1 < N1; ++j1)
      if (f[spec.index(j0, j1)] != 0) supp.push_back({j0, j1});
  const double sub = h / 8.0;
  for (std::size_t i0 = 0; i0 < N0; ++i0)
    for (std::size_t i1 = 0; i1 < N1; ++i1) {
      Point x{spec.coord(0, i0), spec.dim() == 2 ? spec.coord(1, i1) : 0.0};
      double acc = 0;
      for (const auto& j : supp) {
        std::ptrdiff_t d0 = std::ptrdiff_t(i0) - std::ptrdiff_t(j[0]);
        std::ptrdiff_t d1 = std::ptrdiff_t(i1) - std::ptrdiff_t(j[1]);
        if (std::max(std::abs(d0), std::abs(d1)) <= kNearCells) continue;
        Point y{spec.coord(0, j[0]), spec.dim() == 2 ? spec.coord(1, j[1]) : 0.0};
        acc += K.nonconv(x, y) * f[spec.index(j[0], j[1])];
      }
      double corr = 0;
      bool interior = i0 >= std::size_t(kNearCells) && i0 + std::size_t(kNearCells) < N0;
      if (spec.dim() == 2)
        interior = interior && i1 >= std::size_t(kNearCells) &&
                   i1 + std::size_t(kNearCells) < N1;
      if (interior) {
        double fc = f[spec.index(i0, i1)];
        bool active = fc != 0;
        std::ptrdiff_t w1 = spec.dim() == 2 ? kNearCells : 0;
        for (std::ptrdiff_t k0 = -kNearCells; k0 <= kNearCells && !active; ++k0)
          for (std::ptrdiff_t k1 = -w1; k1 <= w1 && !active; ++k1)
            active = f[spec.index(std::size_t(std::ptrdiff_t(i0) + k0),
                                  std::size_t(std::ptrdiff_t(i1) + k1))] != 0;
        if (active) {
          for (std::ptrdiff_t k0 = -kNearCells; k0 <= kNearCells; ++k0)
            for (std::ptrdiff_t k1 = -w1; k1 <= w1; ++k1) {
              if (k0 == 0 && k1 == 0) continue;
              std::size_t j0 = std::size_t(std::ptrdiff_t(i0) + k0);
              std::size_t j1 = std::size_t(std::ptrdiff_t(i1) + k1);
              Point y{spec.coord(0, j0), spec.dim() == 2 ? spec.coord(1, j1) : 0.0};
              acc += K.nonconv(x, y) * (f[spec.index(j0, j1)] - fc);
            }
          if (spec.dim() == 1) {
            double c0 = 0;
            for (int q = 0; q < 8; ++q) {
              double z = (double(q) + 0.5) * sub - h / 2.0;
              c0 += z * K.nonconv(x, {x[0] - z, 0}) * sub;
            }
            corr = -c0 * (f[i0 + 1] - f[i0 - 1]) / (2.0 * h);
          } else {
            double c0 = 0, c1 = 0;
            for (int q0 = 0; q0 < 8; ++q0)
              for (int q1 = 0; q1 < 8; ++q1) {
                Point z{(double(q0) + 0.5) * sub - h / 2.0, (double(q1) + 0.5) * sub - h / 2.0};
                double v = K.nonconv(x, {x[0] - z[0], x[1] - z[1]}) * sub * sub;
                c0 += z[0] * v;
                c1 += z[1] * v;
              }
            double fx = (f.at(i0 + 1, i1) - f.at(i0 - 1, i1)) / (2.0 * h);
            double fy = (f.at(i0, i1 + 1) - f.at(i0, i1 - 1)) / (2.0 * h);
            corr = -(fx * c0 + fy * c1);
          }
        }
      }
      out.at(spec.index(i0, i1)) = hn * acc + corr;
    }
  return out;
}

double smoothed_kernel_value(const KernelSpec& K, const MollifierSpec& phi, double t,
                             const Point& x) {
  // integrate K(x-u) phi_t(u) over |u| < t on a refined subgrid; the cell
  // meeting the kernel singularity is dropped for odd kernels and replaced by
  // the exact cell integral for the power kernel
  int n = K.dim;
  const int res = 64;
  double d = 2.0 * t / res;
  double tn = n == 2 ? t * t : t;
  double cell = n == 2 ? d * d : d;
  double acc = 0;
  auto phiT = [&](const Point& u) {
    return phi.value({u[0] / t, u[1] / t}) / tn;
  };
  if (n == 1) {
    for (int i = 0; i < res; ++i) {
      double u = -t + (i + 0.5) * d;
      double z = x[0] - u;
      if (std::abs(z) < d / 2.0) {
        if (K.kind == KernelKind::Power)
          acc += phiT({u, 0}) * 2.0 * std::pow(d / 2.0, K.alpha) / K.alpha / cell * cell;
        continue;  // odd kernels: symmetric cancellation
      }
      acc += phiT({u, 0}) * K.eval({z, 0}) * cell;
    }
    return acc;
  }
  for (int i = 0; i < res; ++i)
    for (int j = 0; j < res; ++j) {
      Point u{-t + (i + 0.5) * d, -t + (j + 0.5) * d};
      Point z{x[0] - u[0], x[1] - u[1]};
      double r = std::hypot(z[0], z[1]);
      if (r < d / 2.0) {
        if (K.kind == KernelKind::Power) {
          double rEq = d / (2.0 * std::sqrt(std::numbers::pi)) * 2.0;
          acc += phiT(u) * 2.0 * std::numbers::pi * std::pow(rEq, K.alpha) / K.alpha;
        }
        continue;
      }
      acc += phiT(u) * K.eval(z) * cell;
    }
  return acc;
}

GridFunction radial_maximal(const GridFunction& g, const MollifierSpec& phi,
                            const std::vector<double>& tGrid) {
  if (tGrid.empty()) throw GridError("radial_maximal: empty t grid");
  // the sup runs over all t > 0; phi_t * g -> g a.e. as t -> 0, so |g| is the
  // t -> 0 endpoint of the family.  Including it keeps the discrete sup stable
  // under refinement instead of creeping up as smaller t become admissible.
  GridFunction out(g.spec());
  for (std::size_t i = 0; i < out.size(); ++i) out.at(i) = std::abs(g[i]);
  for (double t : tGrid) {
    GridFunction m = mollify(g, phi, t);
    for (std::size_t i = 0; i < out.size(); ++i) out.at(i) = std::max(out.at(i), std::abs(m[i]));
  }
  return out;
}

GridFunction apply_to_atom(const GridFunction& a, const KernelSpec& K) {
  switch (K.kind) {
    case KernelKind::Hilbert:
    case KernelKind::RieszJ:
      return singular_integral(a, K);
    case KernelKind::Power:
      return riesz_potential(a, K.alpha);
    case KernelKind::NonConvolution:
      return nonconv_apply(a, K);
  }
  throw GridError("apply_to_atom: unknown kernel kind");
}

}  // namespace hardy
