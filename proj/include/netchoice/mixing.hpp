#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

namespace netchoice {

// Mixing families for random coefficients. Fixed means the coefficient is a
// deterministic point mass at its mean.
enum class Family { Fixed, Normal, LogNormal, Uniform, Triangular };

Family family_from_string(const std::string& s);
std::string family_to_string(Family f);

// Normal and LogNormal coefficients share a standard-normal base draw; only
// these participate in the correlation structure.
inline bool is_normal_base(Family f) { return f == Family::Normal || f == Family::LogNormal; }
inline bool has_scale(Family f) { return f != Family::Fixed; }

struct CoefficientSpec {
  std::string name;
  Family family = Family::Normal;
};

// Per-coefficient distribution families plus an optional full lower-triangular
// factor across the normal-base coefficients.
struct MixingSpec {
  std::vector<CoefficientSpec> coefficients;
  bool correlated = false;

  int n_coefficients() const { return static_cast<int>(coefficients.size()); }
  int n_scales() const;
  int n_normal_block() const;
  int n_corr_factors() const;
  int n_parameters() const { return n_coefficients() + n_scales() + n_corr_factors(); }

  // Index of a coefficient within the scale vector, -1 for Fixed.
  int scale_index(int coef) const;
  // Position of a coefficient within the correlated normal block, -1 otherwise.
  int normal_block_index(int coef) const;
  // Inverse of normal_block_index.
  std::vector<int> normal_block_coefs() const;

  bool all_fixed() const;
  void check() const;  // throws std::invalid_argument on an ill-formed spec
};

// Packed distribution parameters: means m_i for every coefficient, one scale
// s_i per non-Fixed coefficient, and the strict lower triangle of the
// Cholesky-style factor over the normal block when correlated. Scales are
// unconstrained; reports show |s_i|.
struct ThetaVector {
  std::vector<double> means;
  std::vector<double> scales;
  std::vector<double> corr_factors;

  Eigen::VectorXd pack() const;
  static ThetaVector unpack(const Eigen::VectorXd& packed, const MixingSpec& spec);
  void check_dimensions(const MixingSpec& spec) const;
};

// Row-major position of factor entry (row, col), col < row, within the packed
// strict lower triangle.
int corr_factor_offset(int row, int col);

// Full lower-triangular factor over the normal block: diagonal = scales of the
// block coefficients, strict lower = corr_factors (zero when uncorrelated).
Eigen::MatrixXd normal_block_factor(const MixingSpec& spec, const ThetaVector& theta);

// Correlations of the underlying normal vector implied by the factor,
// reported for every block pair (i, j), i < j, as coefficient ordinals.
struct ImpliedCorrelation {
  int coef_i = 0;
  int coef_j = 0;
  double value = 0.0;
};
std::vector<ImpliedCorrelation> implied_correlations(const MixingSpec& spec,
                                                     const ThetaVector& theta);

// Names of the packed parameters ("m_1", "s_1", "chol_21", ...) and the
// characteristic column shown next to each in reports.
std::vector<std::string> parameter_names(const MixingSpec& spec);
std::vector<std::string> parameter_characteristics(const MixingSpec& spec);

}  // namespace netchoice
