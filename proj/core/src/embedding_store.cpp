#include "gse/embedding_store.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace gse {

namespace {

double parse_double(const std::string& token, std::size_t line_no) {
  double value = 0.0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw std::runtime_error("load_embeddings: non-numeric field '" + token +
                             "' on line " + std::to_string(line_no));
  }
  if (!std::isfinite(value)) {
    throw std::runtime_error("load_embeddings: non-finite value on line " +
                             std::to_string(line_no));
  }
  return value;
}

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  std::string tok;
  while (in >> tok) out.push_back(std::move(tok));
  return out;
}

}  // namespace

EmbeddingStore::EmbeddingStore(std::vector<std::string> terms,
                               Eigen::MatrixXd vectors)
    : terms_(std::move(terms)), vectors_(std::move(vectors)) {
  if (terms_.empty()) {
    throw std::runtime_error("EmbeddingStore: empty term list");
  }
  if (static_cast<std::size_t>(vectors_.rows()) != terms_.size()) {
    throw std::runtime_error("EmbeddingStore: row count does not match terms");
  }
  if (vectors_.cols() < 1) {
    throw std::runtime_error("EmbeddingStore: dimensionality must be positive");
  }
  if (!vectors_.allFinite()) {
    throw std::runtime_error("EmbeddingStore: non-finite vector entry");
  }
  index_.reserve(terms_.size());
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (!index_.emplace(terms_[i], i).second) {
      throw std::runtime_error("EmbeddingStore: duplicate term '" + terms_[i] +
                               "'");
    }
  }
}

EmbeddingStore EmbeddingStore::load(std::istream& source,
                                    std::size_t max_terms) {
  if (max_terms == 0) {
    throw std::runtime_error("load_embeddings: max_terms must be positive");
  }
  std::vector<std::string> terms;
  std::vector<double> values;
  std::size_t dim = 0;
  std::string line;
  std::size_t line_no = 0;
  while (terms.size() < max_terms && std::getline(source, line)) {
    ++line_no;
    auto tokens = split_ws(line);
    if (tokens.empty()) {
      throw std::runtime_error("load_embeddings: blank line " +
                               std::to_string(line_no));
    }
    if (dim == 0) {
      if (tokens.size() < 2) {
        throw std::runtime_error(
            "load_embeddings: first line has no vector entries");
      }
      dim = tokens.size() - 1;
    } else if (tokens.size() - 1 != dim) {
      throw std::runtime_error(
          "load_embeddings: dimensionality mismatch on line " +
          std::to_string(line_no) + " (expected " + std::to_string(dim) +
          " values, got " + std::to_string(tokens.size() - 1) + ")");
    }
    terms.push_back(tokens[0]);
    for (std::size_t j = 1; j < tokens.size(); ++j) {
      values.push_back(parse_double(tokens[j], line_no));
    }
  }
  if (terms.empty()) {
    throw std::runtime_error("load_embeddings: empty source");
  }
  Eigen::MatrixXd vectors(terms.size(), dim);
  for (std::size_t i = 0; i < terms.size(); ++i) {
    for (std::size_t j = 0; j < dim; ++j) {
      vectors(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          values[i * dim + j];
    }
  }
  return EmbeddingStore(std::move(terms), std::move(vectors));
}

std::optional<std::size_t> EmbeddingStore::find(const std::string& term) const {
  auto it = index_.find(term);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::optional<Eigen::VectorXd> EmbeddingStore::lookup(
    const std::string& term) const {
  if (auto i = find(term)) return row(*i);
  if (term.find('_') == std::string::npos) return std::nullopt;
  std::vector<Eigen::VectorXd> parts;
  std::size_t start = 0;
  while (start <= term.size()) {
    std::size_t end = term.find('_', start);
    if (end == std::string::npos) end = term.size();
    if (end > start) {
      if (auto i = find(term.substr(start, end - start))) {
        parts.push_back(row(*i));
      }
    }
    start = end + 1;
  }
  if (parts.empty()) return std::nullopt;
  return centroid(parts);
}

double cosine(const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
  if (u.size() != v.size()) {
    throw std::runtime_error("cosine: dimensionality mismatch");
  }
  double nu = u.norm();
  double nv = v.norm();
  if (nu == 0.0 || nv == 0.0) {
    throw std::runtime_error("cosine: zero-norm input");
  }
  return std::clamp(u.dot(v) / (nu * nv), -1.0, 1.0);
}

Eigen::VectorXd centroid(std::span<const Eigen::VectorXd> vectors) {
  if (vectors.empty()) {
    throw std::runtime_error("centroid: empty input");
  }
  Eigen::Index d = vectors[0].size();
  for (const auto& v : vectors) {
    if (v.size() != d) {
      throw std::runtime_error("centroid: dimensionality mismatch");
    }
  }
  Eigen::VectorXd out(d);
  std::vector<double> column(vectors.size());
  for (Eigen::Index j = 0; j < d; ++j) {
    for (std::size_t i = 0; i < vectors.size(); ++i) column[i] = vectors[i](j);
    std::sort(column.begin(), column.end());
    double sum = 0.0;
    for (double x : column) sum += x;
    out(j) = sum / static_cast<double>(vectors.size());
  }
  return out;
}

Eigen::VectorXd centroid_with(const Eigen::VectorXd& c, std::size_t n,
                              const Eigen::VectorXd& v) {
  if (c.size() != v.size()) {
    throw std::runtime_error("centroid_with: dimensionality mismatch");
  }
  return c + (v - c) / static_cast<double>(n + 1);
}

bool SeedSet::contains(const std::string& term) const {
  return std::find(terms.begin(), terms.end(), term) != terms.end();
}

SeedSet make_seed_set(const EmbeddingStore& store,
                      const std::vector<std::string>& terms) {
  if (terms.empty()) {
    throw std::runtime_error("make_seed_set: empty seed");
  }
  SeedSet seed;
  seed.terms = terms;
  seed.vectors.reserve(terms.size());
  for (const auto& t : terms) {
    auto v = store.lookup(t);
    if (!v) {
      throw std::runtime_error("make_seed_set: seed term '" + t +
                               "' not in vocabulary");
    }
    seed.vectors.push_back(std::move(*v));
  }
  seed.center = centroid(seed.vectors);
  return seed;
}

}  // namespace gse
