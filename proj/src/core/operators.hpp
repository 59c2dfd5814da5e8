#pragma once

#include <array>
#include <functional>
#include <vector>

#include "grid.hpp"

namespace hardy {

// Convolution kernels are given in closed form; non-convolution kernels as a
// callable K(x, y) with declared size/smoothness constants.
enum class KernelKind { Hilbert, RieszJ, Power, NonConvolution };

using Point = std::array<double, 2>;

struct KernelSpec {
  KernelKind kind = KernelKind::Hilbert;
  int dim = 1;
  double alpha = 0;    // Power: K(z) = |z|^{alpha - n}
  int riesz_axis = 0;  // RieszJ: K(z) = z_j / (2 pi |z|^3), n = 2
  int regularity_N = 1;
  bool odd = true;  // principal-value policy marker for singular kinds

  std::function<double(const Point&, const Point&)> nonconv;
  double nc_C = 1.0;
  double nc_delta = 1.0;
  int nc_L = 0;

  // convolution kinds only: K at offset z
  double eval(const Point& z) const;

  static KernelSpec hilbert();
  static KernelSpec riesz(int axis);
  static KernelSpec power(int dim, double alpha);
  static KernelSpec nonconvolution(int dim,
                                   std::function<double(const Point&, const Point&)> K,
                                   double C, double delta, int L);

  bool is_singular() const { return kind == KernelKind::Hilbert || kind == KernelKind::RieszJ; }
};

// uncentered Hardy-Littlewood maximal function; sup over grid-aligned cubes
// containing x with side in {1..64 cells} plus dyadic sides up to twice the box
GridFunction hl_maximal(const GridFunction& f);

// fractional maximal function, factor |Q|^{alpha/n}; alpha = 0 reproduces
// hl_maximal bit-exactly
GridFunction frac_maximal(const GridFunction& f, double alpha);

// exact M_alpha(chi_Q) sampled at cell centers: the sup over all cubes
// containing x of |R|^{alpha/n} |Q cap R| / |R|, evaluated in closed form
// (1D) or by a one-variable optimization over the cube side (2D); unlike the
// discrete-family maximal its values do not depend on the grid spacing
GridFunction frac_maximal_indicator(const GridSpec& spec, const Cube& Q, double alpha);

// I_alpha f by direct quadrature; the singular diagonal cell uses the exact
// 1D cell integral or a refined 9-point subquadrature in 2D
GridFunction riesz_potential(const GridFunction& f, double alpha);

// p.v. convolution for an odd kernel (the declared pv policy); cells within
// two of the singularity use the regularized form K(z)(f(y) - f(x)), whose
// constant part cancels over the symmetric window, plus a gradient term for
// the center cell
GridFunction singular_integral(const GridFunction& f, const KernelSpec& K);

// non-convolution quadrature with the same diagonal excision
GridFunction nonconv_apply(const GridFunction& f, const KernelSpec& K);

// K^t(x) = (phi_t * K)(x) by quadrature on a refined subgrid
double smoothed_kernel_value(const KernelSpec& K, const MollifierSpec& phi, double t,
                             const Point& x);

// M_phi g = max over t in tGrid of |phi_t * g|
GridFunction radial_maximal(const GridFunction& g, const MollifierSpec& phi,
                            const std::vector<double>& tGrid);

// Ta for an atom supported in Q, dispatched on kernel kind
GridFunction apply_to_atom(const GridFunction& a, const KernelSpec& K);

struct OperatorParams {
  double tau;      // (n + N + 1) / n
  double alpha_tau;
  OperatorParams(int dim, int N, double alpha)
      : tau((dim + N + 1.0) / dim), alpha_tau(alpha / tau) {
    if (!(tau > 1)) throw GridError("OperatorParams: tau must exceed 1");
    if (!(alpha_tau < dim)) throw GridError("OperatorParams: alpha/tau must be below n");
  }
};

}  // namespace hardy
