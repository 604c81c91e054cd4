#include "gse/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gse {

double wasserstein_sq(const GaussianEncoding& g1, const GaussianEncoding& g2) {
  if (g1.mu.size() != g2.mu.size() || g1.sigma.size() != g2.sigma.size() ||
      g1.mu.size() != g1.sigma.size()) {
    throw std::runtime_error("wasserstein_sq: dimensionality mismatch");
  }
  return (g1.mu - g2.mu).squaredNorm() + (g1.sigma - g2.sigma).squaredNorm();
}

double wasserstein(const GaussianEncoding& g1, const GaussianEncoding& g2) {
  return std::sqrt(wasserstein_sq(g1, g2));
}

double score_candidate_from(const EncoderParams& params,
                            const GaussianEncoding& seed_encoding,
                            const Eigen::VectorXd& seed_centroid,
                            std::size_t seed_size,
                            const Eigen::VectorXd& candidate) {
  Eigen::VectorXd expanded =
      centroid_with(seed_centroid, seed_size, candidate);
  auto enc = encode_centroid(params, expanded);
  return wasserstein(seed_encoding, enc.encoding);
}

double score_candidate(const EncoderParams& params, const SeedSet& seed,
                       const Eigen::VectorXd& candidate) {
  auto enc0 = encode_centroid(params, seed.center);
  return score_candidate_from(params, enc0.encoding, seed.center,
                              seed.vectors.size(), candidate);
}

double centroid_score(const Eigen::VectorXd& seed_centroid,
                      const Eigen::VectorXd& expanded_centroid) {
  if (seed_centroid.size() != expanded_centroid.size()) {
    throw std::runtime_error("centroid_score: dimensionality mismatch");
  }
  return (seed_centroid - expanded_centroid).squaredNorm();
}

double hinge_loss(double s_pref, double s_other, double margin) {
  if (margin < 0.0) {
    throw std::runtime_error("hinge_loss: margin must be non-negative");
  }
  return std::max(0.0, s_pref - s_other + margin);
}

}  // namespace gse
