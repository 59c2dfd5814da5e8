#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "grid.hpp"

namespace hardy {

// Fixed enumeration of checkable statements.
enum class Target {
  L4_1,   // vector-valued M, weighted
  L4_2,   // vector-valued M, variable
  L4_3,   // vector-valued M_alpha, weighted (A_{p,q})
  L4_4,   // vector-valued M_alpha, variable
  R4_5,   // dilated-indicator comparison
  L4_6,   // cube-localized sums, p <= 1, RH_{(1/p)'}
  L4_7,   // cube-localized sums with L^q averages
  L4_8,   // cube-localized sums, variable exponent
  L4_9,   // fractional cube sums, weighted
  L4_10,  // fractional cube sums, variable
  L5_1,   // smoothed-kernel decay, t-independence
  L5_2,   // far-field bound for smoothed T(atom), convolution kernels
  L7_1,   // far-field bound, non-convolution kernels
  T1_1,   // singular integral on H^p(w)
  T1_2,   // singular integral on H^{p(.)}
  T1_3,   // fractional integral H^p(w^p) -> H^q(w^q)
  T1_4,   // fractional integral, variable
  T1_5,   // non-convolution operator on H^p(w)
  T1_6,   // non-convolution operator on H^{p(.)}
};

Target target_from_string(const std::string& s);
std::string target_to_string(Target t);

struct CheckSpec {
  Target target = Target::L4_1;
  double p = 2.0;
  double q = 2.0;
  double r = 2.0;  // vector exponent; dilation factor for R4.5
  double alpha = 0.0;
  int N = -999;  // moment order; sentinel derives the minimal admissible one
  std::string weight;    // closed-form weight expression; empty means 1
  std::string exponent;  // closed-form exponent expression (variable targets)
  int instances = 200;
  std::uint64_t seed = 1;
  int refinementLevels = 2;
  int dim = 1;

  // throws GridError naming the violated hypothesis identity
  void validate() const;
};

struct InstanceRecord {
  int instance = 0;
  int level = 0;
  double lhs = 0, rhs = 0, ratio = 0;
};

struct CheckReport {
  std::string target;
  std::vector<InstanceRecord> records;  // ordered by (instance, level)
  std::vector<double> maxRatio;         // per level
  std::vector<double> trend;            // maxRatio[l+1] / maxRatio[l]
  std::string verdict;                  // pass | fail | indeterminate
  std::vector<std::string> provenance;  // seeds, grids, hypothesis constants, flags
  bool hypothesis_ok = true;
};

CheckReport run_check(const CheckSpec& cs);

// default grids for the instance suites
GridSpec default_grid(int dim);

// structured text config: one "[check]" section per CheckSpec, "key = value"
// lines with the CheckSpec field names; '#' starts a comment
std::vector<CheckSpec> parse_config(const std::string& text);
std::vector<CheckSpec> load_config(const std::string& path);

// writes report/<target>.csv and report/<target>.svg; returns true iff all pass
struct RunResult {
  std::vector<CheckReport> reports;
  bool all_pass = true;
};
RunResult run_config(const std::string& configPath, const std::string& reportDir);

void write_csv(const CheckReport& rep, const std::string& path);
void write_svg(const CheckReport& rep, const std::string& path);

}  // namespace hardy
