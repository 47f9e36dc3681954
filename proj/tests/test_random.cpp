#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "netchoice/math_util.hpp"
#include "netchoice/random.hpp"
#include "oracles.hpp"

using namespace netchoice;

TEST_CASE("gumbel inverse CDF fixed point: u = 1/e maps to 0") {
  CHECK(std::abs(gumbel_icdf(1.0 / std::exp(1.0))) < 1e-14);
}

TEST_CASE("gumbel moments match the known mean and variance") {
  RandomStream s(42);
  const int n = 1000000;
  double sum = 0.0, sumsq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double g = gumbel_icdf(s.next_unit());
    sum += g;
    sumsq += g * g;
  }
  const double mean = sum / n;
  const double var = sumsq / n - mean * mean;
  CHECK(std::abs(mean - 0.5772156649) < 0.01);
  CHECK(std::abs(var - M_PI * M_PI / 6.0) < 0.02);
}

TEST_CASE("sample_gumbel draws the requested count") {
  RandomStream s(1);
  CHECK(sample_gumbel(s, 0).empty());
  CHECK(sample_gumbel(s, 17).size() == 17);
}

TEST_CASE("identical seeds give identical draw matrices, derived streams differ") {
  MixingSpec spec;
  spec.coefficients = {{"a", Family::Normal}, {"b", Family::Uniform}};
  ThetaVector t;
  t.means = {0.0, 1.0};
  t.scales = {1.0, 0.5};

  const DrawMatrix d1 = draw_coefficients(spec, t, 64, RandomStream(9));
  const DrawMatrix d2 = draw_coefficients(spec, t, 64, RandomStream(9));
  CHECK((d1.draws.array() == d2.draws.array()).all());  // bit-identical

  const DrawMatrix d3 = draw_coefficients(spec, t, 64, RandomStream(9).derive(1));
  CHECK(!(d1.draws.array() == d3.draws.array()).all());
  // derive is a pure function of (seed, key)
  CHECK(RandomStream(9).derive(5).next_u64() == RandomStream(9).derive(5).next_u64());
}

TEST_CASE("fixed coefficients are exact point masses") {
  MixingSpec spec;
  spec.coefficients = {{"a", Family::Fixed}};
  ThetaVector t;
  t.means = {3.0};
  const DrawMatrix d = draw_coefficients(spec, t, 25, RandomStream(4));
  for (int i = 0; i < 25; ++i) CHECK(d.draws(i, 0) == 3.0);
}

TEST_CASE("lognormal sample median is near exp(m)") {
  MixingSpec spec;
  spec.coefficients = {{"a", Family::LogNormal}};
  ThetaVector t;
  t.means = {0.0};
  t.scales = {1.0};
  const int n = 100000;
  const DrawMatrix d = draw_coefficients(spec, t, n, RandomStream(12));
  std::vector<double> v(d.draws.data(), d.draws.data() + n);
  std::nth_element(v.begin(), v.begin() + n / 2, v.end());
  const double median = v[n / 2];
  CHECK(median > 0.98);
  CHECK(median < 1.02);
  CHECK(d.draws.minCoeff() > 0.0);  // lognormal support
}

TEST_CASE("normal(3, 2) sample mean and sd match") {
  MixingSpec spec;
  spec.coefficients = {{"a", Family::Normal}};
  ThetaVector t;
  t.means = {3.0};
  t.scales = {2.0};
  const int n = 100000;
  const DrawMatrix d = draw_coefficients(spec, t, n, RandomStream(21));
  const double mean = d.draws.col(0).mean();
  const double sd = std::sqrt((d.draws.col(0).array() - mean).square().sum() / (n - 1));
  CHECK(mean > 2.98);
  CHECK(mean < 3.02);
  CHECK(sd > 1.97);
  CHECK(sd < 2.03);
}

TEST_CASE("uniform and triangular draws stay inside their supports") {
  MixingSpec spec;
  spec.coefficients = {{"u", Family::Uniform}, {"t", Family::Triangular}};
  ThetaVector t;
  t.means = {2.0, -1.0};
  t.scales = {-0.5, 1.5};  // negative scale must behave like |s|
  const DrawMatrix d = draw_coefficients(spec, t, 20000, RandomStream(3));
  CHECK(d.draws.col(0).minCoeff() >= 1.5);
  CHECK(d.draws.col(0).maxCoeff() <= 2.5);
  CHECK(d.draws.col(1).minCoeff() >= -2.5);
  CHECK(d.draws.col(1).maxCoeff() <= 0.5);
}

TEST_CASE("correlated normal draws hit the target correlation within 0.01") {
  MixingSpec spec;
  spec.coefficients = {{"a", Family::Normal}, {"b", Family::Normal}};
  spec.correlated = true;
  const double rho = 0.6;
  ThetaVector t;
  t.means = {0.0, 0.0};
  t.scales = {1.0, std::sqrt(1.0 - rho * rho)};
  t.corr_factors = {rho};  // L = [[1,0],[rho, sqrt(1-rho^2)]] -> cor = rho
  const int n = 1000000;
  const DrawMatrix d = draw_coefficients(spec, t, n, RandomStream(17));
  const Eigen::VectorXd a = d.draws.col(0), b = d.draws.col(1);
  const double ma = a.mean(), mb = b.mean();
  const double cov = ((a.array() - ma) * (b.array() - mb)).sum() / (n - 1);
  const double sa = std::sqrt((a.array() - ma).square().sum() / (n - 1));
  const double sb = std::sqrt((b.array() - mb).square().sum() / (n - 1));
  CHECK(std::abs(cov / (sa * sb) - rho) < 0.01);
}

TEST_CASE("halton radical inverses match the textbook values") {
  const Eigen::MatrixXd h = halton_sequence(2, 3, 0);
  CHECK(h(0, 0) == doctest::Approx(0.5));
  CHECK(h(1, 0) == doctest::Approx(0.25));
  CHECK(h(2, 0) == doctest::Approx(0.75));
  CHECK(h(0, 1) == doctest::Approx(1.0 / 3.0));
  CHECK(h(1, 1) == doctest::Approx(2.0 / 3.0));
  CHECK(h(2, 1) == doctest::Approx(1.0 / 9.0));
}

TEST_CASE("halton skip discards the prefix") {
  const Eigen::MatrixXd all = halton_sequence(1, 10, 0);
  const Eigen::MatrixXd tail = halton_sequence(1, 5, 5);
  for (int i = 0; i < 5; ++i) CHECK(tail(i, 0) == all(5 + i, 0));
}

TEST_CASE("halton beats pseudo-random on box-count discrepancy across 20 seeds") {
  const int n = 10000;
  const double h_disc = oracles::box_count_discrepancy(halton_sequence(2, n, 0));
  int halton_wins = 0;
  for (int seed = 0; seed < 20; ++seed) {
    RandomStream s(1000 + seed);
    Eigen::MatrixXd pts(n, 2);
    for (int i = 0; i < n; ++i) {
      pts(i, 0) = s.next_unit();
      pts(i, 1) = s.next_unit();
    }
    if (h_disc < oracles::box_count_discrepancy(pts)) ++halton_wins;
  }
  CHECK(halton_wins == 20);
}

TEST_CASE("transform rejects mismatched theta") {
  MixingSpec spec;
  spec.coefficients = {{"a", Family::Normal}};
  ThetaVector t;
  t.means = {0.0, 1.0};  // too long
  t.scales = {1.0};
  CHECK_THROWS_AS(draw_coefficients(spec, t, 4, RandomStream(0)), std::invalid_argument);
}

TEST_CASE("next_unit stays inside the open interval") {
  RandomStream s(1234);
  for (int i = 0; i < 100000; ++i) {
    const double u = s.next_unit();
    CHECK(u > 0.0);
    CHECK(u < 1.0);
  }
}
