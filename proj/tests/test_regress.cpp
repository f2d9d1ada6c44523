#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "corestab/regress.hpp"
#include "corestab/rng.hpp"

using namespace corestab;

namespace {

std::vector<RegressionSample> random_samples(corestab::Rng& rng, std::size_t n, const std::array<double, 5>& beta,
                                             double noise) {
  std::vector<RegressionSample> out(n);
  for (auto& s : out) {
    s.d_size = rng.uniform(-50, 0);
    s.d_density = rng.uniform(-0.2, 0.3);
    s.d_clustering = rng.uniform(-0.3, 0.3);
    s.d_transitivity = rng.uniform(-0.3, 0.3);
    auto x = design_row(s);
    double y = 0;
    for (int j = 0; j < 5; ++j) y += beta[j] * x[j];
    // Box-Muller for Gaussian noise.
    const double u1 = 1.0 - rng.uniform(), u2 = rng.uniform();
    s.d_emd = y + noise * std::sqrt(-2 * std::log(u1)) * std::cos(2 * M_PI * u2);
  }
  return out;
}

struct Reference {
  std::array<double, 5> beta;
  std::array<double, 5> se;
};

// Least squares by modified Gram-Schmidt on X itself (no normal equations).
Reference mgs_reference(const std::vector<RegressionSample>& samples) {
  const std::size_t n = samples.size();
  std::vector<std::array<double, 5>> q(n);
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    q[i] = design_row(samples[i]);
    y[i] = samples[i].d_emd;
  }
  double r[5][5] = {};
  for (int j = 0; j < 5; ++j) {
    for (int k = 0; k < j; ++k) {
      double d = 0;
      for (std::size_t i = 0; i < n; ++i) d += q[i][k] * q[i][j];
      r[k][j] = d;
      for (std::size_t i = 0; i < n; ++i) q[i][j] -= d * q[i][k];
    }
    double norm = 0;
    for (std::size_t i = 0; i < n; ++i) norm += q[i][j] * q[i][j];
    norm = std::sqrt(norm);
    r[j][j] = norm;
    for (std::size_t i = 0; i < n; ++i) q[i][j] /= norm;
  }
  std::array<double, 5> qty{}, beta{};
  for (int j = 0; j < 5; ++j)
    for (std::size_t i = 0; i < n; ++i) qty[j] += q[i][j] * y[i];
  for (int j = 4; j >= 0; --j) {
    double s = qty[j];
    for (int k = j + 1; k < 5; ++k) s -= r[j][k] * beta[k];
    beta[j] = s / r[j][j];
  }
  double rss = 0;
  for (std::size_t i = 0; i < n; ++i) {
    auto x = design_row(samples[i]);
    double f = 0;
    for (int j = 0; j < 5; ++j) f += x[j] * beta[j];
    rss += (y[i] - f) * (y[i] - f);
  }
  const double sigma2 = rss / static_cast<double>(n - 5);
  // (X^T X)^-1 = R^-1 R^-T; invert the triangular R column by column.
  double rinv[5][5] = {};
  for (int c = 0; c < 5; ++c) {
    for (int j = 4; j >= 0; --j) {
      double s = j == c ? 1.0 : 0.0;
      for (int k = j + 1; k < 5; ++k) s -= r[j][k] * rinv[k][c];
      rinv[j][c] = s / r[j][j];
    }
  }
  std::array<double, 5> se{};
  for (int j = 0; j < 5; ++j) {
    double d = 0;
    for (int k = 0; k < 5; ++k) d += rinv[j][k] * rinv[j][k];
    se[j] = std::sqrt(sigma2 * d);
  }
  return {beta, se};
}

ShareRecord record(int k, double emd, double size, double density, double clustering, double transitivity) {
  ShareRecord r;
  r.k = k;
  r.emd = emd;
  r.features = {size, density, clustering, transitivity};
  return r;
}

}  // namespace

TEST_CASE("planted density coefficient is recovered") {
  corestab::Rng rng(1);
  auto samples = random_samples(rng, 200, {0, 0, 2, 0, 0}, 1e-6);
  auto fit = ols_fit(samples);
  CHECK(std::fabs(fit.beta[2] - 2.0) <= 1e-3);
  for (int j : {0, 1, 3, 4}) CHECK(std::fabs(fit.beta[j]) <= 1e-3);
  CHECK(fit.r_squared == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(fit.samples == 200);
}

TEST_CASE("fit agrees with a Gram-Schmidt reference solver") {
  corestab::Rng rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    std::array<double, 5> beta;
    for (auto& b : beta) b = rng.uniform(-2, 2);
    auto samples = random_samples(rng, 100, beta, 0.05);
    auto fit = ols_fit(samples);
    auto ref = mgs_reference(samples);
    for (int j = 0; j < 5; ++j) {
      CHECK(std::fabs(fit.beta[j] - ref.beta[j]) <= 1e-8 * std::max(1.0, std::fabs(ref.beta[j])));
      CHECK(fit.std_error[j] == doctest::Approx(ref.se[j]).epsilon(1e-8));
      // 97.5% quantile of Student t with 95 degrees of freedom.
      CHECK((fit.ci_high[j] - fit.beta[j]) / fit.std_error[j] == doctest::Approx(1.985251).epsilon(1e-6));
      CHECK(fit.ci_low[j] <= fit.beta[j]);
      CHECK(fit.beta[j] <= fit.ci_high[j]);
    }
  }
}

TEST_CASE("residuals are orthogonal to the design") {
  corestab::Rng rng(3);
  auto samples = random_samples(rng, 150, {0.1, -0.01, 1.5, 0.3, -0.2}, 0.1);
  auto fit = ols_fit(samples);
  auto r = ols_residuals(samples, fit);
  double rn = 0;
  for (double x : r) rn += x * x;
  rn = std::sqrt(rn);
  for (int j = 0; j < 5; ++j) {
    double dot_rx = 0, xn = 0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
      const double x = design_row(samples[i])[j];
      dot_rx += r[i] * x;
      xn += x * x;
    }
    CHECK(std::fabs(dot_rx) <= 1e-8 * rn * std::sqrt(xn));
  }
}

TEST_CASE("fit does not depend on sample order") {
  corestab::Rng rng(4);
  auto samples = random_samples(rng, 80, {0.2, 0.01, -1, 0.5, 0.5}, 0.2);
  auto a = ols_fit(samples);
  std::reverse(samples.begin(), samples.end());
  std::swap(samples[3], samples[40]);
  auto b = ols_fit(samples);
  for (int j = 0; j < 5; ++j) {
    CHECK(a.beta[j] == doctest::Approx(b.beta[j]).epsilon(1e-10));
    CHECK(a.std_error[j] == doctest::Approx(b.std_error[j]).epsilon(1e-10));
  }
}

TEST_CASE("confidence intervals are calibrated under pure noise") {
  corestab::Rng rng(5);
  int covered = 0, total = 0;
  for (int rep = 0; rep < 50; ++rep) {
    auto fit = ols_fit(random_samples(rng, 1000, {0, 0, 0, 0, 0}, 1.0));
    for (int j = 0; j < 5; ++j) {
      covered += fit.ci_low[j] <= 0.0 && 0.0 <= fit.ci_high[j];
      ++total;
    }
  }
  CAPTURE(covered);
  CHECK(static_cast<double>(covered) / total >= 0.9);
}

TEST_CASE("fit errors") {
  corestab::Rng rng(6);
  CHECK_THROWS_AS(ols_fit(random_samples(rng, 5, {1, 1, 1, 1, 1}, 0.1)), std::invalid_argument);
  auto samples = random_samples(rng, 30, {1, 1, 1, 1, 1}, 0.1);
  for (auto& s : samples) s.d_transitivity = s.d_clustering;
  CHECK_THROWS_AS(ols_fit(samples), std::invalid_argument);
  for (auto& s : samples) s.d_transitivity = 0.0;
  CHECK_THROWS_AS(ols_fit(samples), std::invalid_argument);
}

TEST_CASE("sample collection") {
  ShareReport a;
  a.dataset = "g1";
  a.embedder = "line1";
  a.dim = 8;
  a.records = {record(0, 0, 100, 0.1, 0.3, 0.2), record(1, 0.5, 90, 0.12, 0.35, 0.25),
               record(2, 0.7, 60, 0.2, 0.4, 0.3), record(4, 0.6, 40, 0.3, 0.5, 0.45),
               record(5, 0.9, 20, 0.6, 0.7, 0.65)};
  for (std::size_t i = 1; i < a.records.size(); ++i) a.records[i].delta = a.records[i].emd - a.records[i - 1].emd;
  ShareReport flat;
  flat.records = {record(0, 0, 10, 0.5, 0.5, 0.5), record(1, 0.1, 10, 0.5, 0.5, 0.5)};
  flat.records[1].delta = 0.1;
  auto s = collect_samples({a, flat});
  REQUIRE(s.size() == 5);
  CHECK(s[2].k == 4);
  CHECK(s[2].d_emd == doctest::Approx(-0.1));
  CHECK(s[2].d_size == -20);
  CHECK(s[2].d_density == doctest::Approx(0.1));
  CHECK(s[0].graph == "g1");
  CHECK(s[0].algorithm == "line1");
  CHECK(s[0].dim == 8);
  CHECK(s[4].d_size == 0);
  CHECK(s[4].d_density == 0);
  CHECK(s[4].d_clustering == 0);
  CHECK(s[4].d_transitivity == 0);
}

TEST_CASE("regression output formats") {
  corestab::Rng rng(7);
  auto samples = random_samples(rng, 20, {0, 1, 2, 3, 4}, 0.1);
  auto fit = ols_fit(samples);
  auto csv = format_fit_csv(fit);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 6);
  CHECK(csv.find("edge_density") != std::string::npos);
  auto j = to_json(fit);
  CHECK(j.at("samples") == 20);
  auto scsv = format_samples_csv(samples);
  CHECK(std::count(scsv.begin(), scsv.end(), '\n') == 21);
}
