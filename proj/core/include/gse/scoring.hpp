#pragma once

#include <Eigen/Core>

#include "gse/embedding_store.hpp"
#include "gse/set_encoder.hpp"

namespace gse {

// Closed-form squared 2-Wasserstein distance between diagonal Gaussians:
// ||mu1 - mu2||^2 + ||sigma1 - sigma2||^2 (the sigma term is the diagonal
// Bures term, with sigma already holding the square roots of the scale).
double wasserstein_sq(const GaussianEncoding& g1, const GaussianEncoding& g2);

// sqrt(wasserstein_sq); a metric on diagonal Gaussians.
double wasserstein(const GaussianEncoding& g1, const GaussianEncoding& g2);

// Scores how much adding `candidate` disperses the seed set: the Wasserstein
// distance between the encodings of S0 and [S0, candidate] under the same
// params. Lower is better.
double score_candidate(const EncoderParams& params, const SeedSet& seed,
                       const Eigen::VectorXd& candidate);

// Same scorer given a precomputed seed encoding; used by ranking loops that
// hold the seed fixed across many candidates.
double score_candidate_from(const EncoderParams& params,
                            const GaussianEncoding& seed_encoding,
                            const Eigen::VectorXd& seed_centroid,
                            std::size_t seed_size,
                            const Eigen::VectorXd& candidate);

// Baseline score: squared Euclidean displacement of the centroid caused by
// the expansion.
double centroid_score(const Eigen::VectorXd& seed_centroid,
                      const Eigen::VectorXd& expanded_centroid);

// max(0, s_pref - s_other + margin). Minimizing drives the preferred
// candidate's distance-score below the other's by the margin.
double hinge_loss(double s_pref, double s_other, double margin);

}  // namespace gse
