#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "netchoice/mixing.hpp"

namespace netchoice {

// Seeded splitmix64 stream. Value-typed and splittable: derive(key) is a pure
// function of (construction seed, key), so workers can own independent streams
// regardless of scheduling. Identical seeds reproduce identical draws
// byte-for-byte on any platform (no library distributions involved).
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed);

  std::uint64_t next_u64();
  // Uniform on (0,1), both endpoints excluded.
  double next_unit();
  // Standard normal via the inverse CDF, one uniform per draw.
  double next_normal();
  // Uniform integer in [0, bound), unbiased.
  std::uint64_t next_below(std::uint64_t bound);

  RandomStream derive(std::uint64_t key) const;
  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
  std::uint64_t state_;
};

// Inverse CDF of the standard type-1 extreme-value (Gumbel) distribution,
// F(x) = exp(-e^{-x}).
double gumbel_icdf(double u);

// i.i.d. Gumbel draws via the inverse CDF.
std::vector<double> sample_gumbel(RandomStream& stream, int count);

// Inverse CDF of the symmetric triangular distribution on [-1, 1].
double triangular_icdf(double u);

// Halton points in (0,1)^dimension with the first `dimension` primes as
// bases; the first `skip` points of the sequence are discarded.
Eigen::MatrixXd halton_sequence(int dimension, int count, int skip);

enum class DrawScheme { Pseudo, Halton };
DrawScheme draw_scheme_from_string(const std::string& s);

// R x K matrix of coefficient draws plus the provenance needed to reproduce it.
struct DrawMatrix {
  Eigen::MatrixXd draws;
  std::uint64_t seed = 0;
  DrawScheme scheme = DrawScheme::Pseudo;
};

// Base draws before any distribution parameters are applied: standard normal
// for Normal/LogNormal coordinates, uniform (0,1) for Uniform/Triangular,
// zero placeholders for Fixed. Filled row by row so the layout is independent
// of how work is later scheduled.
Eigen::MatrixXd base_draws_pseudo(const MixingSpec& spec, int r, RandomStream stream);

// Halton variant: non-Fixed coordinates map to Halton dimensions in order;
// `offset` rows of the sequence are consumed before this block (after the
// global skip), so sequence n can take the slice [n*r, (n+1)*r).
Eigen::MatrixXd base_draws_halton(const MixingSpec& spec, int r, int offset, int skip);

// Applies theta to base draws: Normal -> m + w, LogNormal -> exp(m + w) with
// w the (possibly factor-correlated) normal block, Uniform -> m + s(2u-1),
// Triangular -> m + s T(u), Fixed -> m. Smooth in theta everywhere; the
// likelihood is symmetric under s_i sign flips.
Eigen::MatrixXd transform_draws(const MixingSpec& spec, const ThetaVector& theta,
                                const Eigen::MatrixXd& base);

// One-call sampling of coefficient vectors under (spec, theta).
DrawMatrix draw_coefficients(const MixingSpec& spec, const ThetaVector& theta, int r,
                             RandomStream stream);

}  // namespace netchoice
