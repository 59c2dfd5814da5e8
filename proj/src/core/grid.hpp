#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace hardy {

// All sampled quantities live on a uniform grid over an axis-aligned box in
// dimension 1 or 2.  Samples sit at cell centers: x_i = lo + (i + 1/2) h, so
// the midpoint rule for integration is just h^n * sum(samples).

inline constexpr std::size_t kMaxSampleBudget = std::size_t(1) << 24;

struct GridError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class GridSpec {
 public:
  GridSpec(int dim, std::array<double, 2> lo, std::array<double, 2> hi, double h);

  int dim() const { return dim_; }
  double lo(int axis) const { return lo_[axis]; }
  double hi(int axis) const { return hi_[axis]; }
  double spacing() const { return h_; }
  // cells along an axis
  std::size_t extent(int axis) const { return extent_[axis]; }
  std::size_t size() const { return total_; }

  // cell-center coordinate
  double coord(int axis, std::size_t i) const { return lo_[axis] + (double(i) + 0.5) * h_; }
  // row-major, axis 0 major
  std::size_t index(std::size_t i0, std::size_t i1 = 0) const {
    return dim_ == 1 ? i0 : i0 * extent_[1] + i1;
  }

  // index of the cell whose center is nearest to x; false if outside the box
  bool locate(const std::array<double, 2>& x, std::size_t& out) const;

  // same box, spacing halved
  GridSpec refined() const { return GridSpec(dim_, lo_, hi_, h_ / 2.0); }

  bool operator==(const GridSpec& o) const;
  bool operator!=(const GridSpec& o) const { return !(*this == o); }

 private:
  int dim_;
  std::array<double, 2> lo_{}, hi_{};
  double h_;
  std::array<std::size_t, 2> extent_{};
  std::size_t total_;
};

class GridFunction {
 public:
  explicit GridFunction(GridSpec spec);
  GridFunction(GridSpec spec, std::vector<double> samples);

  // sample a closed-form function at cell centers
  static GridFunction sample(const GridSpec& spec,
                             const std::function<double(double, double)>& f);

  const GridSpec& spec() const { return spec_; }
  const std::vector<double>& samples() const { return samples_; }
  double operator[](std::size_t i) const { return samples_[i]; }
  double& at(std::size_t i) { return samples_[i]; }
  std::size_t size() const { return samples_.size(); }

  double at(std::size_t i0, std::size_t i1) const { return samples_[spec_.index(i0, i1)]; }

  // rejects NaN/Inf; called by constructors
  void validate() const;

  GridFunction& operator+=(const GridFunction& g);
  GridFunction& operator-=(const GridFunction& g);
  GridFunction& operator*=(double c);
  friend GridFunction operator+(GridFunction a, const GridFunction& b) { return a += b; }
  friend GridFunction operator-(GridFunction a, const GridFunction& b) { return a -= b; }
  friend GridFunction operator*(double c, GridFunction a) { return a *= c; }

  GridFunction abs() const;
  double max_abs() const;

  void require_same_spec(const GridFunction& g) const;

 private:
  GridSpec spec_;
  std::vector<double> samples_;
};

struct Cube {
  std::array<double, 2> corner{};  // lower corner
  double side = 0;
  bool clipped = false;  // set when a dilation spilled outside the box

  double center(int axis) const { return corner[axis] + side / 2.0; }
  double measure(int dim) const;
  bool contains(const std::array<double, 2>& x, int dim) const;
};

// same center, side scaled by tau; clipping against the box is recorded, not applied
Cube dilate(const Cube& Q, double tau);
// Q* = 2 sqrt(n) Q
Cube star(const Cube& Q, int dim);

double integrate(const GridFunction& f);
double inner_product(const GridFunction& f, const GridFunction& g);  // integral of f*g

// mean of f over Q: (sum of samples with centers in Q) * h^n / |Q|.
// Throws if no cell center lies in Q.
double cube_average(const GridFunction& f, const Cube& Q);

// index bounds [b0,e0) x [b1,e1) of cells whose centers lie in Q (clamped to grid)
struct CellRange {
  std::size_t b[2]{}, e[2]{};
  bool empty = true;
};
CellRange cells_in_cube(const GridSpec& spec, const Cube& Q);

// The standard normalized bump exp(-1/(1-|x|^2)) on B(0,1), plus the dyadic
// scale set used in place of the continuous sup over t.
class MollifierSpec {
 public:
  explicit MollifierSpec(int dim);

  int dim() const { return dim_; }
  // normalized profile value at x, zero outside B(0,1)
  double value(const std::array<double, 2>& x) const;
  double value1(double x) const { return value({x, 0.0}); }
  // max of the normalized profile, attained at 0
  double sup() const { return value({0.0, 0.0}); }

  // {2^-j : j in [jmin, jmax]} with defaults jmin=-1, jmax=log2(1/(2h))
  static std::vector<double> default_t_grid(double h, int jmin = -1);

 private:
  int dim_;
  double norm_inv_;  // 1 / integral of the raw bump
};

// phi_t * f by direct convolution; kernel samples renormalized to unit mass.
// Refuses t < 2h (kernel under-resolved).
GridFunction mollify(const GridFunction& f, const MollifierSpec& phi, double t);

// flat binary layout: magic, dim, lo, hi, h, then row-major float64 payload
void save_grid(const GridFunction& f, const std::string& path);
GridFunction load_grid(const std::string& path);
void save_grid_csv(const GridFunction& f, const std::string& path);

}  // namespace hardy
