#pragma once

#include <functional>
#include <string>

#include "grid.hpp"

namespace hardy {

// Small closed-form grammar used by the CLI and config files.
//
//   const:<c>                         constant c
//   power:<a>                         |x|^a
//   indicator:<a>,<b>                 chi_[a,b)            (1D)
//   indicator:<a0>,<b0>,<a1>,<b1>     chi_[a0,b0)x[a1,b1)  (2D)
//   bump:<center>,<width>,<amp>       amp * exp(-1/(1-r^2)) bump, radial in 2D
//   log:<c1>,<c2>                     c1 + c2/log(e+|x|)
//   pc:<default>;<a>,<b>:<v>;...      piecewise constant on intervals/cubes
//
// Terms may be summed with '+' for the function kinds (indicator, bump).
std::function<double(double, double)> parse_scalar_expr(const std::string& expr, int dim);

GridFunction sample_expr(const GridSpec& spec, const std::string& expr);

}  // namespace hardy
