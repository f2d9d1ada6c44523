#pragma once

#include <array>
#include <string>
#include <vector>

#include "json.hpp"

#include "corestab/share.hpp"

namespace corestab {

struct RegressionSample {
  double d_emd = 0.0;
  double d_size = 0.0;
  double d_density = 0.0;
  double d_clustering = 0.0;
  double d_transitivity = 0.0;
  // Source.
  std::string graph;
  int k = 0;
  std::string algorithm;
  int dim = 0;
};

inline constexpr std::size_t kRegressionParams = 5;
inline constexpr std::array<const char*, kRegressionParams> kCoefficientNames = {
    "intercept", "size", "edge_density", "clustering", "transitivity"};

struct RegressionFit {
  std::array<double, kRegressionParams> beta{};
  std::array<double, kRegressionParams> std_error{};
  std::array<double, kRegressionParams> ci_low{};
  std::array<double, kRegressionParams> ci_high{};
  double r_squared = 0.0;
  std::size_t samples = 0;
};

/// One sample per adjacent pair of records, deltas taken as (record k) -
/// (previous record); d_emd is that record's Delta_k.
std::vector<RegressionSample> collect_samples(const std::vector<ShareReport>& reports);

/// OLS of d_emd on [1, d_size, d_density, d_clustering, d_transitivity] via the
/// normal equations (column-pivoted QR), with 95% t intervals on n - 5 degrees
/// of freedom. Throws std::invalid_argument with fewer than 6 samples or a
/// rank-deficient design.
RegressionFit ols_fit(const std::vector<RegressionSample>& samples);

/// Residuals d_emd - X beta for a fit.
std::vector<double> ols_residuals(const std::vector<RegressionSample>& samples, const RegressionFit& fit);

/// Design row [1, d_size, d_density, d_clustering, d_transitivity].
std::array<double, kRegressionParams> design_row(const RegressionSample& s);

std::string format_samples_csv(const std::vector<RegressionSample>& samples);
std::string format_fit_csv(const RegressionFit& fit);
nlohmann::json to_json(const RegressionFit& fit);

}  // namespace corestab
