#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <string>

namespace gse {

// A set encoded as a diagonal Gaussian: location mu and per-coordinate
// standard deviation sigma. encode_centroid guarantees sigma > 0 through the
// exponential parameterization.
struct GaussianEncoding {
  Eigen::VectorXd mu;
  Eigen::VectorXd sigma;
};

using RowMajorMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ConstMatrixView = Eigen::Map<const RowMajorMatrix>;
using ConstVectorView = Eigen::Map<const Eigen::VectorXd>;

// Weights of the shared 2-layer ReLU trunk plus the linear mean and
// log-variance heads, packed into one flat vector. Block order (row-major):
// W1 (h x d), b1, W2 (h x h), b2, Wmu (d x h), bmu, Ws (d x h), bs.
// The flat layout keeps optimizer updates, finite-difference probes and
// checkpoint serialization trivial.
class EncoderParams {
 public:
  EncoderParams(int d, int h, std::int64_t seed, Eigen::VectorXd theta);

  int dim() const { return d_; }
  int hidden() const { return h_; }
  std::int64_t seed() const { return seed_; }

  const Eigen::VectorXd& flat() const { return theta_; }
  Eigen::VectorXd& flat() { return theta_; }

  ConstMatrixView w1() const { return {theta_.data() + off_w1_, h_, d_}; }
  ConstVectorView b1() const { return {theta_.data() + off_b1_, h_}; }
  ConstMatrixView w2() const { return {theta_.data() + off_w2_, h_, h_}; }
  ConstVectorView b2() const { return {theta_.data() + off_b2_, h_}; }
  ConstMatrixView w_mu() const { return {theta_.data() + off_wmu_, d_, h_}; }
  ConstVectorView b_mu() const { return {theta_.data() + off_bmu_, d_}; }
  ConstMatrixView w_s() const { return {theta_.data() + off_ws_, d_, h_}; }
  ConstVectorView b_s() const { return {theta_.data() + off_bs_, d_}; }

  static std::size_t theta_size(int d, int h);

  friend bool operator==(const EncoderParams& a, const EncoderParams& b);

 private:
  friend struct ParamOffsets;
  int d_;
  int h_;
  std::int64_t seed_;
  Eigen::VectorXd theta_;
  Eigen::Index off_w1_, off_b1_, off_w2_, off_b2_, off_wmu_, off_bmu_, off_ws_,
      off_bs_;
};

// Glorot-uniform weights, zero biases; bit-deterministic for a fixed seed.
EncoderParams init_params(int d, int h, std::int64_t seed);

// Cached forward-pass state for one encode, consumed exactly once by
// backward().
struct ForwardTape {
  Eigen::VectorXd input;  // the centroid fed to the trunk
  Eigen::VectorXd a1, h1, a2, h2;
  Eigen::VectorXd mu, log_var, sigma;
};

struct EncodeResult {
  GaussianEncoding encoding;
  ForwardTape tape;
};

// mu = Wmu z + bmu, sigma = exp(0.5 (Ws z + bs)) with
// z = relu(W2 relu(W1 c + b1) + b2).
EncodeResult encode_centroid(const EncoderParams& params,
                             const Eigen::VectorXd& c);

// Aggregates the set to its centroid and encodes it; permutation-invariant
// by construction (aggregation precedes the network).
EncodeResult encode_set(const EncoderParams& params,
                        std::span<const Eigen::VectorXd> vectors);

struct BackwardResult {
  Eigen::VectorXd theta_grad;
  Eigen::VectorXd input_grad;  // gradient w.r.t. the input centroid
};

// Exact reverse-mode gradients of (mu, sigma) composed with the upstream
// gradients. ReLU subgradient at 0 is 0.
BackwardResult backward(const EncoderParams& params, const ForwardTape& tape,
                        const Eigen::VectorXd& grad_mu,
                        const Eigen::VectorXd& grad_sigma);

// Adds the parameter gradient into theta_grad (size theta_size(d, h));
// input_grad, when non-null, is also accumulated into.
void backward_accumulate(const EncoderParams& params, const ForwardTape& tape,
                         const Eigen::VectorXd& grad_mu,
                         const Eigen::VectorXd& grad_sigma,
                         Eigen::VectorXd& theta_grad,
                         Eigen::VectorXd* input_grad = nullptr);

// Checkpoint format: magic + (d, h, seed) header, float64 row-major payload.
// Round-trips bit-exactly.
void save_params(const EncoderParams& params, std::ostream& out);
EncoderParams load_params(std::istream& in);

std::string params_to_bytes(const EncoderParams& params);
EncoderParams params_from_bytes(const std::string& bytes);

}  // namespace gse
