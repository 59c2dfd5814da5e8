#include "atoms.hpp"

#include <algorithm>
#include <cmath>

#include "operators.hpp"
#include "rng.hpp"

namespace hardy {

namespace {

// scaled centered monomials ((x-c)/l)^b0 ((y-c)/l)^b1, total degree <= N
struct MonomialBasis {
  std::vector<std::array<int, 2>> degrees;
  Point center;
  double scale;

  MonomialBasis(const Cube& Q, int N, int dim) {
    center = {Q.center(0), Q.center(1)};
    scale = Q.side;
    for (int total = 0; total <= N; ++total) {
      if (dim == 1) {
        degrees.push_back({total, 0});
      } else {
        for (int b0 = 0; b0 <= total; ++b0) degrees.push_back({b0, total - b0});
      }
    }
  }

  double eval(std::size_t k, double x, double y) const {
    double u = (x - center[0]) / scale;
    double v = (y - center[1]) / scale;
    double r = 1.0;
    for (int i = 0; i < degrees[k][0]; ++i) r *= u;
    for (int i = 0; i < degrees[k][1]; ++i) r *= v;
    return r;
  }
};

// dense symmetric solve, size <= 10
std::vector<double> solve(std::vector<std::vector<double>> A, std::vector<double> b) {
  std::size_t n = b.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(A[r][c]) > std::abs(A[piv][c])) piv = r;
    std::swap(A[c], A[piv]);
    std::swap(b[c], b[piv]);
    if (A[c][c] == 0) throw GridError("make_atom: singular Gram matrix");
    for (std::size_t r = c + 1; r < n; ++r) {
      double m = A[r][c] / A[c][c];
      for (std::size_t k = c; k < n; ++k) A[r][k] -= m * A[c][k];
      b[r] -= m * b[c];
    }
  }
  std::vector<double> x(n);
  for (std::size_t c = n; c-- > 0;) {
    double s = b[c];
    for (std::size_t k = c + 1; k < n; ++k) s -= A[c][k] * x[k];
    x[c] = s / A[c][c];
  }
  return x;
}

}  // namespace

Atom make_atom(const GridFunction& raw, const Cube& Q, int N) {
  const GridSpec& spec = raw.spec();
  Atom atom{Q, N, GridFunction(spec), false};
  CellRange r = cells_in_cube(spec, Q);
  if (r.empty) throw GridError("make_atom: cube contains no cell centers");

  double rawSup = 0;
  for (std::size_t i = r.b[0]; i < r.e[0]; ++i)
    for (std::size_t j = r.b[1]; j < r.e[1]; ++j) {
      std::size_t idx = spec.index(i, j);
      atom.a.at(idx) = raw[idx];
      rawSup = std::max(rawSup, std::abs(raw[idx]));
    }
  if (rawSup == 0) {
    atom.zero_flag = true;
    return atom;
  }

  if (N >= 0) {
    MonomialBasis basis(Q, N, spec.dim());
    std::size_t nb = basis.degrees.size();
    std::vector<std::vector<double>> G(nb, std::vector<double>(nb, 0.0));
    std::vector<double> rhs(nb, 0.0);
    for (std::size_t i = r.b[0]; i < r.e[0]; ++i)
      for (std::size_t j = r.b[1]; j < r.e[1]; ++j) {
        double x = spec.coord(0, i);
        double y = spec.dim() == 2 ? spec.coord(1, j) : 0.0;
        std::size_t idx = spec.index(i, j);
        std::vector<double> phi(nb);
        for (std::size_t k = 0; k < nb; ++k) phi[k] = basis.eval(k, x, y);
        for (std::size_t k = 0; k < nb; ++k) {
          rhs[k] += phi[k] * atom.a.at(idx);
          for (std::size_t l = k; l < nb; ++l) G[k][l] += phi[k] * phi[l];
        }
      }
    for (std::size_t k = 0; k < nb; ++k)
      for (std::size_t l = 0; l < k; ++l) G[k][l] = G[l][k];
    std::vector<double> c = solve(G, rhs);
    for (std::size_t i = r.b[0]; i < r.e[0]; ++i)
      for (std::size_t j = r.b[1]; j < r.e[1]; ++j) {
        double x = spec.coord(0, i);
        double y = spec.dim() == 2 ? spec.coord(1, j) : 0.0;
        std::size_t idx = spec.index(i, j);
        double proj = 0;
        for (std::size_t k = 0; k < nb; ++k) proj += c[k] * basis.eval(k, x, y);
        atom.a.at(idx) -= proj;
      }
  }

  double sup = atom.a.max_abs();
  if (sup < 1e-12 * rawSup) {
    atom.zero_flag = true;
    for (std::size_t i = 0; i < atom.a.size(); ++i) atom.a.at(i) = 0;
    return atom;
  }
  atom.a *= 1.0 / sup;
  return atom;
}

bool verify_atom(const Atom& atom, std::string* why) {
  const GridSpec& spec = atom.a.spec();
  if (atom.zero_flag) return true;
  if (atom.a.max_abs() > 1.0 + 1e-12) {
    if (why) *why = "sup norm exceeds 1";
    return false;
  }
  CellRange r = cells_in_cube(spec, atom.Q);
  for (std::size_t i = 0; i < spec.extent(0); ++i)
    for (std::size_t j = 0; j < (spec.dim() == 2 ? spec.extent(1) : 1); ++j) {
      bool inside = i >= r.b[0] && i < r.e[0] && j >= r.b[1] && j < r.e[1];
      if (!inside && atom.a[spec.index(i, j)] != 0) {
        if (why) *why = "support escapes the cube";
        return false;
      }
    }
  if (atom.N >= 0) {
    MonomialBasis basis(atom.Q, atom.N, spec.dim());
    double hn = spec.spacing();
    if (spec.dim() == 2) hn *= spec.spacing();
    double volQ = atom.Q.measure(spec.dim());
    for (std::size_t k = 0; k < basis.degrees.size(); ++k) {
      double m = 0;
      for (std::size_t i = r.b[0]; i < r.e[0]; ++i)
        for (std::size_t j = r.b[1]; j < r.e[1]; ++j) {
          double x = spec.coord(0, i);
          double y = spec.dim() == 2 ? spec.coord(1, j) : 0.0;
          m += basis.eval(k, x, y) * atom.a[spec.index(i, j)];
        }
      // scaled monomials make the tolerance l(Q)-free
      if (std::abs(m * hn) > 1e-10 * volQ) {
        if (why) *why = "moment condition fails";
        return false;
      }
    }
  }
  return true;
}

MomentOrders moment_order_required(int dim, double ratio) {
  MomentOrders m;
  double v = double(dim) * (ratio - 1.0);
  m.s = std::max(0, int(std::floor(v)));
  m.N = m.s + 1;
  m.L = std::max(int(std::floor(v)), -1);
  return m;
}

GridFunction AtomicSum::assemble() const {
  if (atoms.empty()) throw GridError("AtomicSum: empty sum");
  GridFunction f(atoms[0].a.spec());
  for (std::size_t k = 0; k < atoms.size(); ++k) {
    GridFunction term = atoms[k].a;
    term *= lambdas[k];
    f += term;
  }
  return f;
}

GridFunction AtomicSum::indicator_sum(double dilation) const {
  if (atoms.empty()) throw GridError("AtomicSum: empty sum");
  const GridSpec& spec = atoms[0].a.spec();
  GridFunction f(spec);
  for (std::size_t k = 0; k < atoms.size(); ++k) {
    Cube Q = dilation == 1.0 ? atoms[k].Q : dilate(atoms[k].Q, dilation);
    CellRange r = cells_in_cube(spec, Q);
    if (r.empty) continue;
    for (std::size_t i = r.b[0]; i < r.e[0]; ++i)
      for (std::size_t j = r.b[1]; j < r.e[1]; ++j) f.at(spec.index(i, j)) += lambdas[k];
  }
  return f;
}

double coefficient_norm(const AtomicSum& s, const Space& X) {
  return X.norm(s.indicator_sum());
}

double hardy_quasinorm(const GridFunction& g, const MollifierSpec& phi,
                       const std::vector<double>& tGrid, const Space& X) {
  return X.norm(radial_maximal(g, phi, tGrid));
}

namespace {

std::function<double(double, double)> profile_fn(const AtomProfile& p, int dim) {
  double c0 = p.Q.center(0), c1 = p.Q.center(1), l = p.Q.side;
  if (p.kind == 0) {
    // steps: 4 pieces per axis with amplitudes from params
    auto pieceVal = [](const std::vector<double>& amps, double frac) {
      int k = std::min(3, int(frac * 4.0));
      return amps[std::size_t(k)];
    };
    std::vector<double> ax(p.params.begin(), p.params.begin() + 4);
    std::vector<double> ay(p.params.begin() + 4, p.params.begin() + 8);
    return [=](double x, double y) {
      double fx = (x - (c0 - l / 2)) / l;
      if (fx < 0 || fx >= 1) return 0.0;
      double v = pieceVal(ax, fx);
      if (dim == 2) {
        double fy = (y - (c1 - l / 2)) / l;
        if (fy < 0 || fy >= 1) return 0.0;
        v *= pieceVal(ay, fy);
      }
      return v;
    };
  }
  // polynomial x bump, supported in the concentric half-cube
  std::vector<double> cx(p.params.begin(), p.params.begin() + 4);
  std::vector<double> cy(p.params.begin() + 4, p.params.begin() + 8);
  return [=](double x, double y) {
    double u = (x - c0) / (l / 2);
    double v = dim == 2 ? (y - c1) / (l / 2) : 0.0;
    double r2 = u * u + v * v;
    if (r2 >= 1.0) return 0.0;
    double px = cx[0] + u * (cx[1] + u * (cx[2] + u * cx[3]));
    double py = dim == 2 ? cy[0] + v * (cy[1] + v * (cy[2] + v * cy[3])) : 1.0;
    return px * py * std::exp(-1.0 / (1.0 - r2));
  };
}

Atom render_profile(const AtomProfile& p, const GridSpec& spec) {
  GridFunction raw = GridFunction::sample(spec, profile_fn(p, spec.dim()));
  return make_atom(raw, p.Q, p.N);
}

}  // namespace

AtomicSumSpec random_atomic_sum_spec(const GridSpec& spec, std::uint64_t seed, int count, int N) {
  Rng rng(seed);
  AtomicSumSpec out;
  double h = spec.spacing();
  std::size_t minExtent = spec.extent(0);
  if (spec.dim() == 2) minExtent = std::min(minExtent, spec.extent(1));

  for (int m = 0; m < count; ++m) {
    for (int attempt = 0; attempt < 16; ++attempt) {
      AtomProfile p;
      p.N = N;
      // dyadic side, at least 8 cells, at most 1/8 of the box
      int jmax = 0;
      while ((minExtent >> (jmax + 4)) >= 8) ++jmax;
      int j = rng.range(0, jmax);
      std::size_t cells = std::max<std::size_t>(8, minExtent >> (j + 3));
      p.Q.side = double(cells) * h;
      // corner inside the inner half-box so Q** stays resolved
      for (int a = 0; a < spec.dim(); ++a) {
        std::size_t quarter = spec.extent(std::size_t(a)) / 4;
        std::size_t span = spec.extent(std::size_t(a)) / 2 - std::min(cells, spec.extent(std::size_t(a)) / 2);
        std::size_t off = quarter + rng.below(span + 1);
        p.Q.corner[std::size_t(a)] = spec.lo(a) + double(off) * h;
      }
      p.kind = int(rng.below(2));
      for (int k = 0; k < 8; ++k) p.params.push_back(rng.uniform(-1.0, 1.0));
      p.lambda = std::pow(10.0, rng.uniform(-1.0, 1.0));  // log-uniform in [0.1, 10]
      Atom probe = render_profile(p, spec);
      if (!probe.zero_flag) {
        out.profiles.push_back(std::move(p));
        break;
      }
    }
  }
  if (int(out.profiles.size()) != count)
    throw GridError("random_atomic_sum: could not generate the requested atoms");
  return out;
}

AtomicSum render_atomic_sum(const AtomicSumSpec& s, const GridSpec& spec) {
  AtomicSum out;
  for (const auto& p : s.profiles) {
    Atom a = render_profile(p, spec);
    out.lambdas.push_back(p.lambda);
    out.atoms.push_back(std::move(a));
  }
  return out;
}

AtomicSum random_atomic_sum(const GridSpec& spec, std::uint64_t seed, int count, int N) {
  return render_atomic_sum(random_atomic_sum_spec(spec, seed, count, N), spec);
}

}  // namespace hardy
