#include "netchoice/random.hpp"

#include <cmath>
#include <stdexcept>

#include "netchoice/math_util.hpp"

namespace netchoice {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

RandomStream::RandomStream(std::uint64_t seed) : seed_(seed), state_(seed) {}

std::uint64_t RandomStream::next_u64() {
  state_ += kGolden;
  return mix64(state_);
}

double RandomStream::next_unit() {
  // 53-bit mantissa shifted into (0,1); never returns an endpoint.
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double RandomStream::next_normal() { return norm_quantile(next_unit()); }

std::uint64_t RandomStream::next_below(std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("next_below: bound must be positive");
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t x;
  do {
    x = next_u64();
  } while (x >= limit);
  return x % bound;
}

RandomStream RandomStream::derive(std::uint64_t key) const {
  return RandomStream(mix64(seed_ ^ (kGolden * (key + 1))));
}

double gumbel_icdf(double u) { return -std::log(-std::log(u)); }

std::vector<double> sample_gumbel(RandomStream& stream, int count) {
  std::vector<double> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) out.push_back(gumbel_icdf(stream.next_unit()));
  return out;
}

double triangular_icdf(double u) {
  return u < 0.5 ? std::sqrt(2.0 * u) - 1.0 : 1.0 - std::sqrt(2.0 * (1.0 - u));
}

namespace {

std::vector<int> first_primes(int n) {
  std::vector<int> primes;
  for (int c = 2; static_cast<int>(primes.size()) < n; ++c) {
    bool ok = true;
    for (int p : primes) {
      if (p * p > c) break;
      if (c % p == 0) { ok = false; break; }
    }
    if (ok) primes.push_back(c);
  }
  return primes;
}

double radical_inverse(long long n, int base) {
  double inv = 1.0 / base, f = inv, x = 0.0;
  while (n > 0) {
    x += static_cast<double>(n % base) * f;
    n /= base;
    f *= inv;
  }
  return x;
}

}  // namespace

Eigen::MatrixXd halton_sequence(int dimension, int count, int skip) {
  if (dimension < 1) throw std::invalid_argument("halton_sequence: dimension >= 1");
  if (skip < 0) throw std::invalid_argument("halton_sequence: skip >= 0");
  const auto bases = first_primes(dimension);
  Eigen::MatrixXd out(count, dimension);
  for (int i = 0; i < count; ++i)
    for (int d = 0; d < dimension; ++d)
      out(i, d) = radical_inverse(static_cast<long long>(skip) + 1 + i, bases[d]);
  return out;
}

DrawScheme draw_scheme_from_string(const std::string& s) {
  if (s == "pseudo") return DrawScheme::Pseudo;
  if (s == "halton") return DrawScheme::Halton;
  throw std::invalid_argument("unknown draw scheme: " + s);
}

Eigen::MatrixXd base_draws_pseudo(const MixingSpec& spec, int r, RandomStream stream) {
  const int k = spec.n_coefficients();
  Eigen::MatrixXd base = Eigen::MatrixXd::Zero(r, k);
  for (int row = 0; row < r; ++row) {
    for (int c = 0; c < k; ++c) {
      const Family f = spec.coefficients[c].family;
      if (f == Family::Fixed) continue;
      const double u = stream.next_unit();
      base(row, c) = is_normal_base(f) ? norm_quantile(u) : u;
    }
  }
  return base;
}

Eigen::MatrixXd base_draws_halton(const MixingSpec& spec, int r, int offset, int skip) {
  const int k = spec.n_coefficients();
  int dims = 0;
  for (const auto& c : spec.coefficients) dims += has_scale(c.family) ? 1 : 0;
  Eigen::MatrixXd base = Eigen::MatrixXd::Zero(r, k);
  if (dims == 0) return base;
  const Eigen::MatrixXd points = halton_sequence(dims, r, skip + offset);
  int d = 0;
  for (int c = 0; c < k; ++c) {
    const Family f = spec.coefficients[c].family;
    if (f == Family::Fixed) continue;
    for (int row = 0; row < r; ++row) {
      const double u = points(row, d);
      base(row, c) = is_normal_base(f) ? norm_quantile(u) : u;
    }
    ++d;
  }
  return base;
}

Eigen::MatrixXd transform_draws(const MixingSpec& spec, const ThetaVector& theta,
                                const Eigen::MatrixXd& base) {
  theta.check_dimensions(spec);
  const int k = spec.n_coefficients();
  if (base.cols() != k)
    throw std::invalid_argument("base draw matrix has wrong number of columns");
  const int r = static_cast<int>(base.rows());
  const auto block = spec.normal_block_coefs();
  const int q = static_cast<int>(block.size());
  Eigen::MatrixXd out(r, k);
  for (int row = 0; row < r; ++row) {
    // Correlated part: w = L z over the normal block.
    Eigen::VectorXd w = Eigen::VectorXd::Zero(q);
    for (int b = 0; b < q; ++b) {
      double acc = theta.scales[spec.scale_index(block[b])] * base(row, block[b]);
      if (spec.correlated)
        for (int c = 0; c < b; ++c)
          acc += theta.corr_factors[corr_factor_offset(b, c)] * base(row, block[c]);
      w[b] = acc;
    }
    for (int c = 0; c < k; ++c) {
      const Family f = spec.coefficients[c].family;
      const double m = theta.means[c];
      switch (f) {
        case Family::Fixed:
          out(row, c) = m;
          break;
        case Family::Normal:
          out(row, c) = m + w[spec.normal_block_index(c)];
          break;
        case Family::LogNormal:
          out(row, c) = std::exp(m + w[spec.normal_block_index(c)]);
          break;
        case Family::Uniform:
          out(row, c) = m + theta.scales[spec.scale_index(c)] * (2.0 * base(row, c) - 1.0);
          break;
        case Family::Triangular:
          out(row, c) = m + theta.scales[spec.scale_index(c)] * triangular_icdf(base(row, c));
          break;
      }
    }
  }
  return out;
}

DrawMatrix draw_coefficients(const MixingSpec& spec, const ThetaVector& theta, int r,
                             RandomStream stream) {
  if (r < 1) throw std::invalid_argument("draw_coefficients: r >= 1");
  DrawMatrix dm;
  dm.seed = stream.seed();
  dm.scheme = DrawScheme::Pseudo;
  dm.draws = transform_draws(spec, theta, base_draws_pseudo(spec, r, stream));
  return dm;
}

}  // namespace netchoice
