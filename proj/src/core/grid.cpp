#include "grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>

namespace hardy {

GridSpec::GridSpec(int dim, std::array<double, 2> lo, std::array<double, 2> hi, double h)
    : dim_(dim), lo_(lo), hi_(hi), h_(h) {
  if (dim != 1 && dim != 2) throw GridError("GridSpec: dimension must be 1 or 2");
  if (!(h > 0)) throw GridError("GridSpec: spacing must be positive");
  total_ = 1;
  for (int a = 0; a < dim_; ++a) {
    double len = hi_[a] - lo_[a];
    if (!(len > 0)) throw GridError("GridSpec: box side must be positive");
    double cells = len / h;
    double rounded = std::round(cells);
    if (std::abs(cells - rounded) > 1e-9 * std::max(1.0, cells))
      throw GridError("GridSpec: spacing does not divide side length");
    extent_[a] = std::size_t(rounded);
    total_ *= extent_[a];
  }
  if (dim_ == 1) {
    extent_[1] = 1;
    lo_[1] = hi_[1] = 0;  // canonical unused axis, so equality is well-defined
  }
  if (total_ > kMaxSampleBudget) throw GridError("GridSpec: sample budget exceeded");
}

bool GridSpec::locate(const std::array<double, 2>& x, std::size_t& out) const {
  std::size_t idx[2] = {0, 0};
  for (int a = 0; a < dim_; ++a) {
    double u = (x[a] - lo_[a]) / h_;
    if (u < 0 || u >= double(extent_[a])) return false;
    idx[a] = std::min(std::size_t(u), extent_[a] - 1);
  }
  out = index(idx[0], idx[1]);
  return true;
}

bool GridSpec::operator==(const GridSpec& o) const {
  return dim_ == o.dim_ && lo_ == o.lo_ && hi_ == o.hi_ && h_ == o.h_;
}

GridFunction::GridFunction(GridSpec spec) : spec_(spec), samples_(spec.size(), 0.0) {}

GridFunction::GridFunction(GridSpec spec, std::vector<double> samples)
    : spec_(spec), samples_(std::move(samples)) {
  if (samples_.size() != spec_.size()) throw GridError("GridFunction: sample count mismatch");
  validate();
}

GridFunction GridFunction::sample(const GridSpec& spec,
                                  const std::function<double(double, double)>& f) {
  GridFunction g(spec);
  if (spec.dim() == 1) {
    for (std::size_t i = 0; i < spec.extent(0); ++i) g.at(i) = f(spec.coord(0, i), 0.0);
  } else {
    for (std::size_t i = 0; i < spec.extent(0); ++i)
      for (std::size_t j = 0; j < spec.extent(1); ++j)
        g.at(spec.index(i, j)) = f(spec.coord(0, i), spec.coord(1, j));
  }
  g.validate();
  return g;
}

void GridFunction::validate() const {
  for (double v : samples_)
    if (!std::isfinite(v)) throw GridError("GridFunction: non-finite sample");
}

void GridFunction::require_same_spec(const GridFunction& g) const {
  if (spec_ != g.spec_) throw GridError("GridFunction: spec mismatch");
}

GridFunction& GridFunction::operator+=(const GridFunction& g) {
  require_same_spec(g);
  for (std::size_t i = 0; i < samples_.size(); ++i) samples_[i] += g.samples_[i];
  return *this;
}

GridFunction& GridFunction::operator-=(const GridFunction& g) {
  require_same_spec(g);
  for (std::size_t i = 0; i < samples_.size(); ++i) samples_[i] -= g.samples_[i];
  return *this;
}

GridFunction& GridFunction::operator*=(double c) {
  for (double& v : samples_) v *= c;
  return *this;
}

GridFunction GridFunction::abs() const {
  GridFunction g(spec_);
  for (std::size_t i = 0; i < samples_.size(); ++i) g.at(i) = std::abs(samples_[i]);
  return g;
}

double GridFunction::max_abs() const {
  double m = 0;
  for (double v : samples_) m = std::max(m, std::abs(v));
  return m;
}

double Cube::measure(int dim) const {
  return dim == 1 ? side : side * side;
}

bool Cube::contains(const std::array<double, 2>& x, int dim) const {
  for (int a = 0; a < dim; ++a)
    if (x[a] < corner[a] || x[a] >= corner[a] + side) return false;
  return true;
}

Cube dilate(const Cube& Q, double tau) {
  if (!(tau > 0)) throw GridError("dilate: tau must be positive");
  Cube R;
  R.side = tau * Q.side;
  for (int a = 0; a < 2; ++a) R.corner[a] = Q.center(a) - R.side / 2.0;
  R.clipped = Q.clipped;
  return R;
}

Cube star(const Cube& Q, int dim) {
  return dilate(Q, 2.0 * std::sqrt(double(dim)));
}

double integrate(const GridFunction& f) {
  double s = 0;
  for (double v : f.samples()) s += v;
  double hn = f.spec().spacing();
  if (f.spec().dim() == 2) hn *= f.spec().spacing();
  return hn * s;
}

double inner_product(const GridFunction& f, const GridFunction& g) {
  f.require_same_spec(g);
  double s = 0;
  const auto& a = f.samples();
  const auto& b = g.samples();
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  double hn = f.spec().spacing();
  if (f.spec().dim() == 2) hn *= f.spec().spacing();
  return hn * s;
}

CellRange cells_in_cube(const GridSpec& spec, const Cube& Q) {
  CellRange r;
  double h = spec.spacing();
  for (int a = 0; a < spec.dim(); ++a) {
    // cell centers lo + (i+1/2)h inside [corner, corner+side)
    double b = (Q.corner[a] - spec.lo(a)) / h - 0.5;
    double e = (Q.corner[a] + Q.side - spec.lo(a)) / h - 0.5;
    std::ptrdiff_t bi = std::ptrdiff_t(std::ceil(b - 1e-12));
    std::ptrdiff_t ei = std::ptrdiff_t(std::ceil(e - 1e-12));  // exclusive
    bi = std::max<std::ptrdiff_t>(bi, 0);
    ei = std::min<std::ptrdiff_t>(ei, std::ptrdiff_t(spec.extent(a)));
    if (ei <= bi) return r;
    r.b[a] = std::size_t(bi);
    r.e[a] = std::size_t(ei);
  }
  if (spec.dim() == 1) {
    r.b[1] = 0;
    r.e[1] = 1;
  }
  r.empty = false;
  return r;
}

double cube_average(const GridFunction& f, const Cube& Q) {
  const GridSpec& spec = f.spec();
  CellRange r = cells_in_cube(spec, Q);
  if (r.empty) throw GridError("cube_average: cube contains no cell centers");
  double s = 0;
  for (std::size_t i = r.b[0]; i < r.e[0]; ++i)
    for (std::size_t j = r.b[1]; j < r.e[1]; ++j) s += f[spec.index(i, j)];
  double hn = spec.spacing();
  if (spec.dim() == 2) hn *= spec.spacing();
  return s * hn / Q.measure(spec.dim());
}

namespace {
// raw bump integral over B(0,1), computed once per dimension by fine quadrature
double raw_bump(double r2) {
  return r2 < 1.0 ? std::exp(-1.0 / (1.0 - r2)) : 0.0;
}

double bump_mass(int dim) {
  static double cache[3] = {0, 0, 0};
  if (cache[dim] != 0) return cache[dim];
  const int n = 4000;
  double dh = 2.0 / n, s = 0;
  if (dim == 1) {
    for (int i = 0; i < n; ++i) {
      double x = -1.0 + (i + 0.5) * dh;
      s += raw_bump(x * x);
    }
    s *= dh;
  } else {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double x = -1.0 + (i + 0.5) * dh, y = -1.0 + (j + 0.5) * dh;
        s += raw_bump(x * x + y * y);
      }
    s *= dh * dh;
  }
  cache[dim] = s;
  return s;
}
}  // namespace

MollifierSpec::MollifierSpec(int dim) : dim_(dim) {
  if (dim != 1 && dim != 2) throw GridError("MollifierSpec: dimension must be 1 or 2");
  norm_inv_ = 1.0 / bump_mass(dim);
}

double MollifierSpec::value(const std::array<double, 2>& x) const {
  double r2 = x[0] * x[0];
  if (dim_ == 2) r2 += x[1] * x[1];
  return norm_inv_ * raw_bump(r2);
}

std::vector<double> MollifierSpec::default_t_grid(double h, int jmin) {
  int jmax = int(std::floor(std::log2(1.0 / (2.0 * h))));
  std::vector<double> ts;
  for (int j = jmin; j <= jmax; ++j) ts.push_back(std::pow(2.0, -j));
  return ts;
}

GridFunction mollify(const GridFunction& f, const MollifierSpec& phi, double t) {
  const GridSpec& spec = f.spec();
  double h = spec.spacing();
  if (t < 2.0 * h) throw GridError("mollify: t below 2h, kernel under-resolved");
  if (phi.dim() != spec.dim()) throw GridError("mollify: dimension mismatch");
  // kernel offsets j with |j h| < t; weights renormalized to sum exactly 1
  std::ptrdiff_t m = std::ptrdiff_t(std::floor(t / h));
  if (spec.dim() == 1) {
    std::vector<double> w(2 * m + 1);
    double sum = 0;
    for (std::ptrdiff_t j = -m; j <= m; ++j) {
      double v = phi.value1(double(j) * h / t);
      w[j + m] = v;
      sum += v;
    }
    for (double& v : w) v /= sum;
    std::ptrdiff_t N = std::ptrdiff_t(spec.extent(0));
    GridFunction g(spec);
    for (std::ptrdiff_t i = 0; i < N; ++i) {
      double acc = 0;
      std::ptrdiff_t jlo = std::max<std::ptrdiff_t>(-m, i - N + 1);
      std::ptrdiff_t jhi = std::min<std::ptrdiff_t>(m, i);
      for (std::ptrdiff_t j = jlo; j <= jhi; ++j) acc += w[j + m] * f[std::size_t(i - j)];
      g.at(std::size_t(i)) = acc;
    }
    return g;
  }
  // 2D: dense (2m+1)^2 stencil
  std::size_t W = std::size_t(2 * m + 1);
  std::vector<double> w(W * W);
  double sum = 0;
  for (std::ptrdiff_t j0 = -m; j0 <= m; ++j0)
    for (std::ptrdiff_t j1 = -m; j1 <= m; ++j1) {
      double v = phi.value({double(j0) * h / t, double(j1) * h / t});
      w[std::size_t(j0 + m) * W + std::size_t(j1 + m)] = v;
      sum += v;
    }
  for (double& v : w) v /= sum;
  std::ptrdiff_t N0 = std::ptrdiff_t(spec.extent(0)), N1 = std::ptrdiff_t(spec.extent(1));
  GridFunction g(spec);
  for (std::ptrdiff_t i0 = 0; i0 < N0; ++i0)
    for (std::ptrdiff_t i1 = 0; i1 < N1; ++i1) {
      double acc = 0;
      std::ptrdiff_t a_lo = std::max<std::ptrdiff_t>(-m, i0 - N0 + 1);
      std::ptrdiff_t a_hi = std::min<std::ptrdiff_t>(m, i0);
      std::ptrdiff_t b_lo = std::max<std::ptrdiff_t>(-m, i1 - N1 + 1);
      std::ptrdiff_t b_hi = std::min<std::ptrdiff_t>(m, i1);
      for (std::ptrdiff_t a = a_lo; a <= a_hi; ++a)
        for (std::ptrdiff_t b = b_lo; b <= b_hi; ++b)
          acc += w[std::size_t(a + m) * W + std::size_t(b + m)] *
                 f.at(std::size_t(i0 - a), std::size_t(i1 - b));
      g.at(spec.index(std::size_t(i0), std::size_t(i1))) = acc;
    }
  return g;
}

namespace {
constexpr std::uint64_t kGridMagic = 0x44495247594448ULL;  // "HDYGRID"
}

void save_grid(const GridFunction& f, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw GridError("save_grid: cannot open " + path);
  const GridSpec& s = f.spec();
  std::uint64_t magic = kGridMagic;
  std::int64_t dim = s.dim();
  double lo[2] = {s.lo(0), s.dim() == 2 ? s.lo(1) : 0.0};
  double hi[2] = {s.hi(0), s.dim() == 2 ? s.hi(1) : 0.0};
  double h = s.spacing();
  out.write(reinterpret_cast<const char*>(&magic), 8);
  out.write(reinterpret_cast<const char*>(&dim), 8);
  out.write(reinterpret_cast<const char*>(lo), 16);
  out.write(reinterpret_cast<const char*>(hi), 16);
  out.write(reinterpret_cast<const char*>(&h), 8);
  out.write(reinterpret_cast<const char*>(f.samples().data()),
            std::streamsize(f.size() * sizeof(double)));
  if (!out) throw GridError("save_grid: write failed for " + path);
}

GridFunction load_grid(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw GridError("load_grid: cannot open " + path);
  std::uint64_t magic;
  std::int64_t dim;
  double lo[2], hi[2], h;
  in.read(reinterpret_cast<char*>(&magic), 8);
  in.read(reinterpret_cast<char*>(&dim), 8);
  in.read(reinterpret_cast<char*>(lo), 16);
  in.read(reinterpret_cast<char*>(hi), 16);
  in.read(reinterpret_cast<char*>(&h), 8);
  if (!in || magic != kGridMagic) throw GridError("load_grid: bad header in " + path);
  if (dim == 1) {
    lo[1] = 0;
    hi[1] = 1;
  }
  GridSpec spec(int(dim), {lo[0], lo[1]}, {hi[0], hi[1]}, h);
  std::vector<double> samples(spec.size());
  in.read(reinterpret_cast<char*>(samples.data()), std::streamsize(samples.size() * sizeof(double)));
  if (!in) throw GridError("load_grid: truncated payload in " + path);
  return GridFunction(spec, std::move(samples));
}

void save_grid_csv(const GridFunction& f, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw GridError("save_grid_csv: cannot open " + path);
  const GridSpec& s = f.spec();
  char buf[80];
  if (s.dim() == 1) {
    out << "x,value\r\n";
    for (std::size_t i = 0; i < s.extent(0); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g\r\n", s.coord(0, i), f[i]);
      out << buf;
    }
  } else {
    out << "x,y,value\r\n";
    for (std::size_t i = 0; i < s.extent(0); ++i)
      for (std::size_t j = 0; j < s.extent(1); ++j) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\r\n", s.coord(0, i), s.coord(1, j),
                      f.at(i, j));
        out << buf;
      }
  }
}

}  // namespace hardy
