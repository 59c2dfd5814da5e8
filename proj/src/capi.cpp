#include "hardy.h"

#include <cstdio>
#include <cstring>
#include <string>

#include "core/expr.hpp"
#include "core/harness.hpp"
#include "core/operators.hpp"
#include "core/rubio.hpp"
#include "core/spaces.hpp"
#include "core/varlebesgue.hpp"
#include "core/weights.hpp"

using namespace hardy;

struct hardy_grid {
  GridFunction f;
};

namespace {

thread_local std::string g_error;

hardy_status fail(hardy_status s, const std::string& msg) {
  g_error = msg;
  return s;
}

template <typename Fn>
hardy_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const GridError& e) {
    return fail(HARDY_EINVAL, e.what());
  } catch (const std::exception& e) {
    return fail(HARDY_ERUNTIME, e.what());
  }
}

void copy_out(char* dst, size_t cap, const std::string& src) {
  if (!dst || cap == 0) return;
  size_t n = std::min(cap - 1, src.size());
  std::memcpy(dst, src.data(), n);
  dst[n] = '\0';
}

}  // namespace

extern "C" {

const char* hardy_last_error(void) { return g_error.c_str(); }

hardy_status hardy_grid_create(int dim, const double lo[2], const double hi[2], double h,
                               const char* expr, hardy_grid** out) {
  if (!lo || !hi || !expr || !out) return fail(HARDY_EINVAL, "null argument");
  return guarded([&] {
    GridSpec spec(dim, {lo[0], dim == 2 ? lo[1] : 0.0}, {hi[0], dim == 2 ? hi[1] : 0.0}, h);
    *out = new hardy_grid{sample_expr(spec, expr)};
    return HARDY_OK;
  });
}

hardy_status hardy_grid_default(int dim, const char* expr, hardy_grid** out) {
  if (!expr || !out) return fail(HARDY_EINVAL, "null argument");
  return guarded([&] {
    *out = new hardy_grid{sample_expr(default_grid(dim), expr)};
    return HARDY_OK;
  });
}

hardy_status hardy_grid_load(const char* path, hardy_grid** out) {
  if (!path || !out) return fail(HARDY_EINVAL, "null argument");
  return guarded([&] {
    *out = new hardy_grid{load_grid(path)};
    return HARDY_OK;
  });
}

hardy_status hardy_grid_save(const hardy_grid* g, const char* path) {
  if (!g || !path) return fail(HARDY_EINVAL, "null argument");
  return guarded([&] {
    save_grid(g->f, path);
    return HARDY_OK;
  });
}

hardy_status hardy_grid_save_csv(const hardy_grid* g, const char* path) {
  if (!g || !path) return fail(HARDY_EINVAL, "null argument");
  return guarded([&] {
    save_grid_csv(g->f, path);
    return HARDY_OK;
  });
}

void hardy_grid_free(hardy_grid* g) { delete g; }

hardy_status hardy_grid_info(const hardy_grid* g, int* dim, double lo[2], double hi[2],
                             double* h, size_t* count) {
  if (!g) return fail(HARDY_EINVAL, "null grid");
  const GridSpec& s = g->f.spec();
  if (dim) *dim = s.dim();
  if (lo) {
    lo[0] = s.lo(0);
    lo[1] = s.dim() == 2 ? s.lo(1) : 0.0;
  }
  if (hi) {
    hi[0] = s.hi(0);
    hi[1] = s.dim() == 2 ? s.hi(1) : 0.0;
  }
  if (h) *h = s.spacing();
  if (count) *count = s.size();
  return HARDY_OK;
}

hardy_status hardy_grid_value_at(const hardy_grid* g, const double x[2], double* out) {
  if (!g || !x || !out) return fail(HARDY_EINVAL, "null argument");
  std::size_t idx;
  if (!g->f.spec().locate({x[0], x[1]}, idx)) return fail(HARDY_EINVAL, "point outside the box");
  *out = g->f[idx];
  return HARDY_OK;
}

hardy_status hardy_operator_apply(const hardy_grid* f, const char* kind, double alpha,
                                  hardy_grid** out) {
  if (!f || !kind || !out) return fail(HARDY_EINVAL, "null argument");
  return guarded([&]() -> hardy_status {
    std::string k = kind;
    GridFunction g(f->f.spec());
    if (k == "maximal") {
      g = alpha == 0 ? hl_maximal(f->f) : frac_maximal(f->f, alpha);
    } else if (k == "ialpha") {
      g = riesz_potential(f->f, alpha);
    } else if (k == "hilbert") {
      g = singular_integral(f->f, KernelSpec::hilbert());
    } else if (k == "riesz0" || k == "riesz1") {
      g = singular_integral(f->f, KernelSpec::riesz(k == "riesz0" ? 0 : 1));
    } else if (k == "radial") {
      MollifierSpec phi(f->f.spec().dim());
      g = radial_maximal(f->f, phi, MollifierSpec::default_t_grid(f->f.spec().spacing()));
    } else {
      return fail(HARDY_EINVAL, "unknown operator kind: " + k);
    }
    *out = new hardy_grid{std::move(g)};
    return HARDY_OK;
  });
}

hardy_status hardy_weight_family_trend(const hardy_grid* w, const char* cls, double p,
                                       double q, double s, int maxLevel, double* out) {
  if (!w || !cls || !out) return fail(HARDY_EINVAL, "null argument");
  if (maxLevel < 0) return fail(HARDY_EINVAL, "maxLevel must be >= 0");
  return guarded([&]() -> hardy_status {
    std::string c = cls;
    ClassParams cp;
    if (c == "ap")
      cp = {WeightClass::Ap, p, 0, 0};
    else if (c == "a1")
      cp = {WeightClass::A1, 0, 0, 0};
    else if (c == "rhs")
      cp = {WeightClass::RHs, 0, 0, s};
    else if (c == "rhinf")
      cp = {WeightClass::RHinf, 0, 0, 0};
    else if (c == "apq")
      cp = {WeightClass::Apq, p, q, 0};
    else
      return fail(HARDY_EINVAL, "unknown weight class: " + c);
    Weight W(w->f);
    std::vector<double> tr = family_trend(W, cp, maxLevel);
    for (int l = 0; l <= maxLevel; ++l) out[l] = tr[std::size_t(l)];
    return HARDY_OK;
  });
}

hardy_status hardy_rw_estimate(int dim, const char* weight_expr, double tol, double* lo,
                               double* hi, double* value, int* indeterminate) {
  if (!weight_expr) return fail(HARDY_EINVAL, "null argument");
  return guarded([&] {
    RwEstimate est = rw_estimate(parse_scalar_expr(weight_expr, dim), default_grid(dim), tol);
    if (lo) *lo = est.lo;
    if (hi) *hi = est.hi;
    if (value) *value = est.value;
    if (indeterminate) *indeterminate = est.indeterminate ? 1 : 0;
    return HARDY_OK;
  });
}

hardy_status hardy_weighted_norm(const hardy_grid* f, double p, const hardy_grid* w,
                                 double* out) {
  if (!f || !out) return fail(HARDY_EINVAL, "null argument");
  return guarded([&] {
    if (w) {
      *out = weighted_Lp_norm(f->f, p, Weight(w->f));
    } else {
      GridFunction one(f->f.spec());
      for (std::size_t i = 0; i < one.size(); ++i) one.at(i) = 1.0;
      *out = weighted_Lp_norm(f->f, p, Weight(std::move(one)));
    }
    return HARDY_OK;
  });
}

hardy_status hardy_luxemburg_norm(const hardy_grid* f, const hardy_grid* exponent,
                                  double* out) {
  if (!f || !exponent || !out) return fail(HARDY_EINVAL, "null argument");
  return guarded([&] {
    *out = luxemburg_norm(f->f, ExponentFunction(exponent->f));
    return HARDY_OK;
  });
}

hardy_status hardy_rubio_check(const hardy_grid* h, const hardy_grid* exponent, int kmax,
                               char* csv, size_t cap, int* all_pass) {
  if (!h || !exponent) return fail(HARDY_EINVAL, "null argument");
  return guarded([&] {
    ExponentFunction r(exponent->f);
    MaximalNormEstimate est = estimate_maximal_opnorm(r);
    IterationConfig cfg(kmax, est.B);
    CubeFamily F = CubeFamily::dyadic(h->f.spec(), 6);
    IterationReport rep = check_iteration_properties(h->f, cfg, r, F);
    std::string out = "name,lhs,rhs,pass\r\n";
    char buf[160];
    for (const auto& p : rep.properties) {
      std::snprintf(buf, sizeof buf, "%s,%.17g,%.17g,%d\r\n", p.name.c_str(), p.lhs, p.rhs,
                    p.pass ? 1 : 0);
      out += buf;
    }
    copy_out(csv, cap, out);
    if (all_pass) *all_pass = rep.all_pass ? 1 : 0;
    return HARDY_OK;
  });
}

hardy_status hardy_run_config(const char* config_path, const char* report_dir, char* summary,
                              size_t cap, int* all_pass) {
  if (!config_path || !report_dir) return fail(HARDY_EINVAL, "null argument");
  return guarded([&] {
    RunResult res = run_config(config_path, report_dir);
    std::string out;
    for (const auto& rep : res.reports) out += rep.target + "," + rep.verdict + "\n";
    copy_out(summary, cap, out);
    if (all_pass) *all_pass = res.all_pass ? 1 : 0;
    return HARDY_OK;
  });
}

}  // extern "C"
