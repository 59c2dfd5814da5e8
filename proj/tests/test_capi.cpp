#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>

#include "hardy.h"

namespace {
std::string temp_path(const char* name) {
  return (std::filesystem::temp_directory_path() / name).string();
}
}  // namespace

TEST_CASE("grid lifecycle through the C surface") {
  hardy_grid* g = nullptr;
  REQUIRE(hardy_grid_default(1, "indicator:0,1", &g) == HARDY_OK);
  REQUIRE(g != nullptr);

  int dim = 0;
  double lo[2], hi[2], h = 0;
  size_t cells = 0;
  CHECK(hardy_grid_info(g, &dim, lo, hi, &h, &cells) == HARDY_OK);
  CHECK(dim == 1);
  CHECK(lo[0] == doctest::Approx(-8.0));
  CHECK(hi[0] == doctest::Approx(8.0));
  CHECK(cells > 0);

  double v = -1;
  double x[2] = {0.5, 0.0};
  CHECK(hardy_grid_value_at(g, x, &v) == HARDY_OK);
  CHECK(v == doctest::Approx(1.0));
  x[0] = 5.0;
  CHECK(hardy_grid_value_at(g, x, &v) == HARDY_OK);
  CHECK(v == doctest::Approx(0.0));
  x[0] = 50.0;
  CHECK(hardy_grid_value_at(g, x, &v) == HARDY_EINVAL);

  std::string bin = temp_path("capi_grid.bin");
  CHECK(hardy_grid_save(g, bin.c_str()) == HARDY_OK);
  hardy_grid* loaded = nullptr;
  CHECK(hardy_grid_load(bin.c_str(), &loaded) == HARDY_OK);
  x[0] = 0.5;
  double v2 = -1;
  CHECK(hardy_grid_value_at(loaded, x, &v2) == HARDY_OK);
  CHECK(v2 == v2);
  hardy_grid_free(loaded);
  std::remove(bin.c_str());

  std::string csv = temp_path("capi_grid.csv");
  CHECK(hardy_grid_save_csv(g, csv.c_str()) == HARDY_OK);
  std::remove(csv.c_str());

  hardy_grid_free(g);
  hardy_grid_free(nullptr);  // must be a no-op
}

TEST_CASE("errors are reported with messages") {
  hardy_grid* g = nullptr;
  CHECK(hardy_grid_default(1, "nonsense:1", &g) == HARDY_EINVAL);
  CHECK(std::strlen(hardy_last_error()) > 0);
  CHECK(hardy_grid_default(3, "const:1", &g) == HARDY_EINVAL);
  CHECK(hardy_grid_load("definitely_missing.bin", &g) == HARDY_EINVAL);

  double lo[2] = {0, 0}, hi[2] = {1, 0};
  CHECK(hardy_grid_create(1, lo, hi, -0.5, "const:1", &g) == HARDY_EINVAL);
}

TEST_CASE("operators through the C surface") {
  hardy_grid* f = nullptr;
  REQUIRE(hardy_grid_default(1, "const:2", &f) == HARDY_OK);
  hardy_grid* m = nullptr;
  REQUIRE(hardy_operator_apply(f, "maximal", 0.0, &m) == HARDY_OK);
  double v = 0;
  double x[2] = {1.0, 0.0};
  CHECK(hardy_grid_value_at(m, x, &v) == HARDY_OK);
  CHECK(v == doctest::Approx(2.0).epsilon(1e-12));
  hardy_grid_free(m);

  hardy_grid* bad = nullptr;
  CHECK(hardy_operator_apply(f, "no_such_operator", 0.0, &bad) == HARDY_EINVAL);
  hardy_grid_free(f);

  // Hilbert transform oracle through the C API
  hardy_grid* chi = nullptr;
  REQUIRE(hardy_grid_default(1, "indicator:-1,1", &chi) == HARDY_OK);
  hardy_grid* H = nullptr;
  REQUIRE(hardy_operator_apply(chi, "hilbert", 0.0, &H) == HARDY_OK);
  x[0] = 3.0;
  CHECK(hardy_grid_value_at(H, x, &v) == HARDY_OK);
  CHECK(v == doctest::Approx(std::log(2.0) / std::acos(-1.0)).epsilon(0.01));
  hardy_grid_free(H);

  hardy_grid* I = nullptr;
  REQUIRE(hardy_operator_apply(chi, "ialpha", 0.5, &I) == HARDY_OK);
  hardy_grid_free(I);
  hardy_grid* R = nullptr;
  REQUIRE(hardy_operator_apply(chi, "radial", 0.0, &R) == HARDY_OK);
  hardy_grid_free(R);
  hardy_grid_free(chi);
}

TEST_CASE("norms through the C surface") {
  hardy_grid* f = nullptr;
  REQUIRE(hardy_grid_default(1, "indicator:0,1", &f) == HARDY_OK);

  double v = 0;
  CHECK(hardy_weighted_norm(f, 2.0, nullptr, &v) == HARDY_OK);
  CHECK(v == doctest::Approx(1.0).epsilon(1e-2));

  hardy_grid* w = nullptr;
  REQUIRE(hardy_grid_default(1, "power:0.5", &w) == HARDY_OK);
  CHECK(hardy_weighted_norm(f, 2.0, w, &v) == HARDY_OK);
  CHECK(v == doctest::Approx(std::sqrt(2.0 / 3.0)).epsilon(1e-2));
  hardy_grid_free(w);

  // constant-exponent Luxemburg norm collapses to the classical norm
  hardy_grid* e = nullptr;
  REQUIRE(hardy_grid_default(1, "const:2", &e) == HARDY_OK);
  double lux = 0;
  CHECK(hardy_luxemburg_norm(f, e, &lux) == HARDY_OK);
  double cls = 0;
  CHECK(hardy_weighted_norm(f, 2.0, nullptr, &cls) == HARDY_OK);
  CHECK(lux == doctest::Approx(cls).epsilon(1e-8));
  hardy_grid_free(e);
  hardy_grid_free(f);
}

TEST_CASE("weight machinery through the C surface") {
  hardy_grid* w = nullptr;
  REQUIRE(hardy_grid_default(1, "const:1", &w) == HARDY_OK);
  double trend[9];
  CHECK(hardy_weight_family_trend(w, "ap", 2.0, 2.0, 2.0, 8, trend) == HARDY_OK);
  for (int l = 0; l <= 8; ++l) CHECK(trend[l] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(hardy_weight_family_trend(w, "rhs", 2.0, 2.0, 2.0, 4, trend) == HARDY_OK);
  CHECK(hardy_weight_family_trend(w, "badclass", 2.0, 2.0, 2.0, 4, trend) == HARDY_EINVAL);
  hardy_grid_free(w);

  double lo = 0, hi = 0, value = 0;
  int indeterminate = 1;
  CHECK(hardy_rw_estimate(1, "power:0.5", 0.05, &lo, &hi, &value, &indeterminate) == HARDY_OK);
  CHECK(indeterminate == 0);
  CHECK(value == doctest::Approx(1.5).epsilon(0.08));
  CHECK(lo <= value);
  CHECK(hi >= value);
}

TEST_CASE("iteration check through the C surface") {
  hardy_grid* h = nullptr;
  hardy_grid* e = nullptr;
  REQUIRE(hardy_grid_default(1, "indicator:0,1", &h) == HARDY_OK);
  REQUIRE(hardy_grid_default(1, "const:2", &e) == HARDY_OK);
  char csv[4096] = {0};
  int allPass = 0;
  CHECK(hardy_rubio_check(h, e, 12, csv, sizeof csv, &allPass) == HARDY_OK);
  CHECK(allPass == 1);
  CHECK(std::strstr(csv, "name,lhs,rhs,pass") != nullptr);

  // r == 1 violates the precondition
  hardy_grid* one = nullptr;
  REQUIRE(hardy_grid_default(1, "const:1", &one) == HARDY_OK);
  CHECK(hardy_rubio_check(h, one, 12, csv, sizeof csv, &allPass) == HARDY_EINVAL);
  hardy_grid_free(one);
  hardy_grid_free(e);
  hardy_grid_free(h);
}

TEST_CASE("config runner through the C surface") {
  std::string cfg = temp_path("capi_run.cfg");
  {
    std::ofstream out(cfg, std::ios::binary);
    out << "[check]\ntarget=L4.6\np=0.7\nweight=const:1\ninstances=2\nseed=1\n"
           "refinementLevels=2\ndim=1\n";
  }
  std::string dir = temp_path("capi_report");
  std::filesystem::remove_all(dir);
  char summary[4096] = {0};
  int allPass = 0;
  CHECK(hardy_run_config(cfg.c_str(), dir.c_str(), summary, sizeof summary, &allPass) ==
        HARDY_OK);
  CHECK(allPass == 1);
  CHECK(std::strstr(summary, "L4.6,pass") != nullptr);
  CHECK(std::filesystem::exists(dir + "/L4.6.csv"));

  CHECK(hardy_run_config("missing.cfg", dir.c_str(), summary, sizeof summary, &allPass) !=
        HARDY_OK);
  std::filesystem::remove_all(dir);
  std::remove(cfg.c_str());
}
