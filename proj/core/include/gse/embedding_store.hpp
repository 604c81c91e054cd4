#pragma once

#include <Eigen/Core>
#include <istream>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace gse {

// Immutable term -> vector table. Row order follows the input file, which is
// assumed frequency-descending (the GloVe convention), so capping at
// max_terms keeps the most frequent terms. Safe to share across threads
// after construction.
class EmbeddingStore {
 public:
  EmbeddingStore(std::vector<std::string> terms, Eigen::MatrixXd vectors);

  // Parses line-oriented `term v1 v2 ... vd` text. The first line fixes the
  // dimensionality; at most max_terms lines are consumed. Malformed input
  // (non-numeric or non-finite field, arity mismatch, duplicate term, empty
  // source) is a hard error.
  static EmbeddingStore load(std::istream& source, std::size_t max_terms);

  int dim() const { return static_cast<int>(vectors_.cols()); }
  std::size_t size() const { return terms_.size(); }
  const std::vector<std::string>& terms() const { return terms_; }
  const Eigen::MatrixXd& vectors() const { return vectors_; }

  bool contains(const std::string& term) const { return index_.count(term) != 0; }
  std::optional<std::size_t> find(const std::string& term) const;
  Eigen::VectorXd row(std::size_t i) const { return vectors_.row(i); }

  // Exact match first; an underscore-joined multi-token entity that is absent
  // from the table falls back to the mean of its in-vocabulary constituent
  // tokens. Total miss is a value (nullopt), not an error.
  std::optional<Eigen::VectorXd> lookup(const std::string& term) const;

 private:
  std::vector<std::string> terms_;
  Eigen::MatrixXd vectors_;  // one row per term
  std::unordered_map<std::string, std::size_t> index_;
};

// Cosine similarity, clamped to [-1, 1]. Zero-norm input is an error: it
// signals a degenerate embedding row.
double cosine(const Eigen::VectorXd& u, const Eigen::VectorXd& v);

// Element-wise mean. Each coordinate is summed in sorted value order, so the
// result is bitwise invariant under permutations of the input list.
Eigen::VectorXd centroid(std::span<const Eigen::VectorXd> vectors);

// Mean of [n existing vectors with centroid c, v]. Computed incrementally as
// c + (v - c)/(n+1), which keeps the centroid an exact fixed point when
// v == c.
Eigen::VectorXd centroid_with(const Eigen::VectorXd& c, std::size_t n,
                              const Eigen::VectorXd& v);

// The seed entities defining the target class. Every term must resolve.
struct SeedSet {
  std::vector<std::string> terms;
  std::vector<Eigen::VectorXd> vectors;
  Eigen::VectorXd center;  // centroid of `vectors`, cached at construction

  bool contains(const std::string& term) const;
};

SeedSet make_seed_set(const EmbeddingStore& store,
                      const std::vector<std::string>& terms);

}  // namespace gse
