#include "corestab/regress.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>
#include <boost/math/distributions/students_t.hpp>

#include "corestab/io.hpp"

namespace corestab {

std::vector<RegressionSample> collect_samples(const std::vector<ShareReport>& reports) {
  std::vector<RegressionSample> out;
  for (const auto& r : reports) {
    for (std::size_t t = 1; t < r.records.size(); ++t) {
      const ShareRecord& cur = r.records[t];
      const ShareRecord& prev = r.records[t - 1];
      RegressionSample s;
      s.d_emd = cur.delta.value_or(cur.emd - prev.emd);
      s.d_size = cur.features.size - prev.features.size;
      s.d_density = cur.features.edge_density - prev.features.edge_density;
      s.d_clustering = cur.features.avg_clustering - prev.features.avg_clustering;
      s.d_transitivity = cur.features.transitivity - prev.features.transitivity;
      s.graph = r.dataset;
      s.k = cur.k;
      s.algorithm = r.embedder;
      s.dim = r.dim;
      out.push_back(std::move(s));
    }
  }
  return out;
}

std::array<double, kRegressionParams> design_row(const RegressionSample& s) {
  return {1.0, s.d_size, s.d_density, s.d_clustering, s.d_transitivity};
}

RegressionFit ols_fit(const std::vector<RegressionSample>& samples) {
  const std::size_t n = samples.size();
  constexpr auto p = static_cast<Eigen::Index>(kRegressionParams);
  if (n <= kRegressionParams)
    throw std::invalid_argument("OLS needs at least " + std::to_string(kRegressionParams + 1) + " samples, got " +
                                std::to_string(n));

  Eigen::MatrixXd x(static_cast<Eigen::Index>(n), p);
  Eigen::VectorXd y(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = design_row(samples[i]);
    for (Eigen::Index j = 0; j < p; ++j) x(static_cast<Eigen::Index>(i), j) = row[static_cast<std::size_t>(j)];
    y(static_cast<Eigen::Index>(i)) = samples[i].d_emd;
  }
  if (!x.allFinite() || !y.allFinite()) throw std::invalid_argument("regression samples contain non-finite values");

  const Eigen::MatrixXd xtx = x.transpose() * x;
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(xtx);
  if (qr.rank() < p) throw std::invalid_argument("design matrix is rank deficient (rank " + std::to_string(qr.rank()) + ")");
  const Eigen::VectorXd beta = qr.solve(x.transpose() * y);
  const Eigen::MatrixXd xtx_inv = qr.inverse();

  const Eigen::VectorXd resid = y - x * beta;
  const double rss = resid.squaredNorm();
  const double tss = (y.array() - y.mean()).matrix().squaredNorm();
  const auto dof = static_cast<double>(n - kRegressionParams);
  const double sigma2 = rss / dof;
  const double t = boost::math::quantile(boost::math::students_t(dof), 0.975);

  RegressionFit fit;
  fit.samples = n;
  fit.r_squared = tss > 0.0 ? 1.0 - rss / tss : 1.0;
  for (std::size_t j = 0; j < kRegressionParams; ++j) {
    const auto jj = static_cast<Eigen::Index>(j);
    fit.beta[j] = beta(jj);
    fit.std_error[j] = std::sqrt(std::max(0.0, sigma2 * xtx_inv(jj, jj)));
    fit.ci_low[j] = fit.beta[j] - t * fit.std_error[j];
    fit.ci_high[j] = fit.beta[j] + t * fit.std_error[j];
  }
  return fit;
}

std::vector<double> ols_residuals(const std::vector<RegressionSample>& samples, const RegressionFit& fit) {
  std::vector<double> out;
  out.reserve(samples.size());
  for (const auto& s : samples) {
    const auto row = design_row(s);
    double pred = 0.0;
    for (std::size_t j = 0; j < kRegressionParams; ++j) pred += row[j] * fit.beta[j];
    out.push_back(s.d_emd - pred);
  }
  return out;
}

std::string format_samples_csv(const std::vector<RegressionSample>& samples) {
  std::string out = "graph,algorithm,dim,k,d_emd,d_size,d_density,d_clustering,d_transitivity\n";
  for (const auto& s : samples) {
    out += s.graph + ',' + s.algorithm + ',' + std::to_string(s.dim) + ',' + std::to_string(s.k) + ',' +
           format_double(s.d_emd) + ',' + format_double(s.d_size) + ',' + format_double(s.d_density) + ',' +
           format_double(s.d_clustering) + ',' + format_double(s.d_transitivity) + '\n';
  }
  return out;
}

std::string format_fit_csv(const RegressionFit& fit) {
  std::string out = "coefficient,estimate,std_error,ci_low,ci_high\n";
  for (std::size_t j = 0; j < kRegressionParams; ++j) {
    out += std::string(kCoefficientNames[j]) + ',' + format_double(fit.beta[j]) + ',' +
           format_double(fit.std_error[j]) + ',' + format_double(fit.ci_low[j]) + ',' + format_double(fit.ci_high[j]) +
           '\n';
  }
  return out;
}

nlohmann::json to_json(const RegressionFit& fit) {
  nlohmann::json coefs = nlohmann::json::object();
  for (std::size_t j = 0; j < kRegressionParams; ++j) {
    coefs[kCoefficientNames[j]] = {{"estimate", fit.beta[j]},
                                   {"std_error", fit.std_error[j]},
                                   {"ci_low", fit.ci_low[j]},
                                   {"ci_high", fit.ci_high[j]}};
  }
  return {{"schema_version", 1},
          {"samples", fit.samples},
          {"r_squared", fit.r_squared},
          {"confidence", 0.95},
          {"coefficients", coefs}};
}

}  // namespace corestab
