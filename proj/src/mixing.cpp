#include "netchoice/mixing.hpp"

#include <cmath>
#include <stdexcept>

namespace netchoice {

Family family_from_string(const std::string& s) {
  if (s == "fixed") return Family::Fixed;
  if (s == "normal") return Family::Normal;
  if (s == "lognormal") return Family::LogNormal;
  if (s == "uniform") return Family::Uniform;
  if (s == "triangular") return Family::Triangular;
  throw std::invalid_argument("unknown mixing family: " + s);
}

std::string family_to_string(Family f) {
  switch (f) {
    case Family::Fixed: return "fixed";
    case Family::Normal: return "normal";
    case Family::LogNormal: return "lognormal";
    case Family::Uniform: return "uniform";
    case Family::Triangular: return "triangular";
  }
  return "?";
}

int MixingSpec::n_scales() const {
  int n = 0;
  for (const auto& c : coefficients) n += has_scale(c.family) ? 1 : 0;
  return n;
}

int MixingSpec::n_normal_block() const {
  int n = 0;
  for (const auto& c : coefficients) n += is_normal_base(c.family) ? 1 : 0;
  return n;
}

int MixingSpec::n_corr_factors() const {
  if (!correlated) return 0;
  const int q = n_normal_block();
  return q * (q - 1) / 2;
}

int MixingSpec::scale_index(int coef) const {
  int idx = 0;
  for (int i = 0; i < coef; ++i)
    if (has_scale(coefficients[i].family)) ++idx;
  return has_scale(coefficients[coef].family) ? idx : -1;
}

int MixingSpec::normal_block_index(int coef) const {
  int idx = 0;
  for (int i = 0; i < coef; ++i)
    if (is_normal_base(coefficients[i].family)) ++idx;
  return is_normal_base(coefficients[coef].family) ? idx : -1;
}

std::vector<int> MixingSpec::normal_block_coefs() const {
  std::vector<int> out;
  for (int i = 0; i < n_coefficients(); ++i)
    if (is_normal_base(coefficients[i].family)) out.push_back(i);
  return out;
}

bool MixingSpec::all_fixed() const {
  for (const auto& c : coefficients)
    if (c.family != Family::Fixed) return false;
  return !coefficients.empty();
}

void MixingSpec::check() const {
  if (coefficients.empty())
    throw std::invalid_argument("mixing spec needs at least one coefficient");
}

Eigen::VectorXd ThetaVector::pack() const {
  Eigen::VectorXd v(means.size() + scales.size() + corr_factors.size());
  Eigen::Index k = 0;
  for (double m : means) v[k++] = m;
  for (double s : scales) v[k++] = s;
  for (double c : corr_factors) v[k++] = c;
  return v;
}

ThetaVector ThetaVector::unpack(const Eigen::VectorXd& packed, const MixingSpec& spec) {
  const int km = spec.n_coefficients();
  const int ks = spec.n_scales();
  const int kc = spec.n_corr_factors();
  if (packed.size() != km + ks + kc)
    throw std::invalid_argument("packed theta has wrong length for spec");
  ThetaVector t;
  t.means.assign(packed.data(), packed.data() + km);
  t.scales.assign(packed.data() + km, packed.data() + km + ks);
  t.corr_factors.assign(packed.data() + km + ks, packed.data() + km + ks + kc);
  return t;
}

void ThetaVector::check_dimensions(const MixingSpec& spec) const {
  if (static_cast<int>(means.size()) != spec.n_coefficients() ||
      static_cast<int>(scales.size()) != spec.n_scales() ||
      static_cast<int>(corr_factors.size()) != spec.n_corr_factors())
    throw std::invalid_argument("theta dimensions do not match mixing spec");
}

int corr_factor_offset(int row, int col) {
  return row * (row - 1) / 2 + col;
}

Eigen::MatrixXd normal_block_factor(const MixingSpec& spec, const ThetaVector& theta) {
  const int q = spec.n_normal_block();
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(q, q);
  const auto block = spec.normal_block_coefs();
  for (int b = 0; b < q; ++b) {
    l(b, b) = theta.scales[spec.scale_index(block[b])];
    if (spec.correlated)
      for (int c = 0; c < b; ++c) l(b, c) = theta.corr_factors[corr_factor_offset(b, c)];
  }
  return l;
}

std::vector<ImpliedCorrelation> implied_correlations(const MixingSpec& spec,
                                                     const ThetaVector& theta) {
  std::vector<ImpliedCorrelation> out;
  const int q = spec.n_normal_block();
  if (q < 2) return out;
  const Eigen::MatrixXd l = normal_block_factor(spec, theta);
  const Eigen::MatrixXd sigma = l * l.transpose();
  const auto block = spec.normal_block_coefs();
  for (int i = 0; i < q; ++i)
    for (int j = i + 1; j < q; ++j) {
      const double d = std::sqrt(sigma(i, i) * sigma(j, j));
      out.push_back({block[i], block[j], d > 0.0 ? sigma(i, j) / d : 0.0});
    }
  return out;
}

std::vector<std::string> parameter_names(const MixingSpec& spec) {
  std::vector<std::string> names;
  for (int i = 0; i < spec.n_coefficients(); ++i)
    names.push_back("m_" + std::to_string(i + 1));
  for (int i = 0; i < spec.n_coefficients(); ++i)
    if (has_scale(spec.coefficients[i].family))
      names.push_back("s_" + std::to_string(i + 1));
  if (spec.correlated) {
    const auto block = spec.normal_block_coefs();
    for (std::size_t b = 1; b < block.size(); ++b)
      for (std::size_t c = 0; c < b; ++c)
        names.push_back("chol_" + std::to_string(block[b] + 1) + std::to_string(block[c] + 1));
  }
  return names;
}

std::vector<std::string> parameter_characteristics(const MixingSpec& spec) {
  std::vector<std::string> out;
  for (const auto& c : spec.coefficients) out.push_back(c.name);
  for (const auto& c : spec.coefficients)
    if (has_scale(c.family)) out.push_back(c.name);
  for (int i = 0; i < spec.n_corr_factors(); ++i) out.push_back("-");
  return out;
}

}  // namespace netchoice
