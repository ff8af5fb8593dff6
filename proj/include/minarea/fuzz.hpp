#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "minarea/calibration.hpp"
#include "minarea/rng.hpp"

namespace minarea {

struct FuzzConfig {
  long long samples = 100000;
  std::uint64_t seed = 0;
  std::vector<int> k_set = {2, 3, 4};
  std::vector<int> n_set = {3, 4, 5, 7};
  double ymax = 0.95;          // |y| cap
  double dmin = 1e-3;          // |x - y| floor
  double deficit_slack = 1e-10;
  double fd_rel_tol = 1e-6;
  int workers = 1;  // results are identical for any worker count
};

struct FuzzSampleInfo {
  int k = 0, n = 0;
  Eigen::VectorXd y, x;
};

struct FuzzReport {
  long long samples = 0;
  std::uint64_t seed = 0;
  double min_deficit = 0;
  FuzzSampleInfo argmin;
  double fd_max_rel_err = 0;   // |closed form - quad FD| / max(1, |closed form|)
  FuzzSampleInfo fd_argmax;
  bool conditioning_warning = false;  // ymax beyond the studied range
  bool deficit_pass = false;
  bool fd_pass = false;
  bool pass = false;
};

// Seeded sweep of random (k, n, y, x, frame) configurations: tracks the
// worst pointwise deficit and the worst disagreement between the
// closed-form divergence and the quad-precision finite-difference check.
FuzzReport run_field_fuzz(const FuzzConfig& config);

std::string fuzz_report_to_json(const FuzzReport& report, const FuzzConfig& config);

}  // namespace minarea
