#include "gse/set_encoder.hpp"

#include <cmath>
#include <cstring>
#include <sstream>
#include <stdexcept>

#include "gse/embedding_store.hpp"
#include "gse/rng.hpp"

namespace gse {

namespace {

constexpr char kMagic[4] = {'G', 'S', 'E', 'C'};
constexpr std::uint32_t kVersion = 1;

using MatrixView = Eigen::Map<RowMajorMatrix>;
using VectorView = Eigen::Map<Eigen::VectorXd>;

}  // namespace

std::size_t EncoderParams::theta_size(int d, int h) {
  return static_cast<std::size_t>(3 * d * h + h * h + 2 * h + 2 * d);
}

EncoderParams::EncoderParams(int d, int h, std::int64_t seed,
                             Eigen::VectorXd theta)
    : d_(d), h_(h), seed_(seed), theta_(std::move(theta)) {
  if (d_ < 1 || h_ < 1) {
    throw std::runtime_error("EncoderParams: d and h must be positive");
  }
  if (static_cast<std::size_t>(theta_.size()) != theta_size(d_, h_)) {
    throw std::runtime_error("EncoderParams: parameter vector has wrong size");
  }
  if (!theta_.allFinite()) {
    throw std::runtime_error("EncoderParams: non-finite parameter");
  }
  off_w1_ = 0;
  off_b1_ = off_w1_ + h_ * d_;
  off_w2_ = off_b1_ + h_;
  off_b2_ = off_w2_ + h_ * h_;
  off_wmu_ = off_b2_ + h_;
  off_bmu_ = off_wmu_ + d_ * h_;
  off_ws_ = off_bmu_ + d_;
  off_bs_ = off_ws_ + d_ * h_;
}

bool operator==(const EncoderParams& a, const EncoderParams& b) {
  return a.d_ == b.d_ && a.h_ == b.h_ && a.seed_ == b.seed_ &&
         a.theta_.size() == b.theta_.size() && (a.theta_ == b.theta_);
}

EncoderParams init_params(int d, int h, std::int64_t seed) {
  if (d < 1 || h < 1) {
    throw std::runtime_error("init_params: d and h must be positive");
  }
  Eigen::VectorXd theta =
      Eigen::VectorXd::Zero(static_cast<Eigen::Index>(EncoderParams::theta_size(d, h)));
  Rng rng(static_cast<std::uint64_t>(seed));
  EncoderParams params(d, h, seed, std::move(theta));
  auto fill = [&](Eigen::Index offset, int rows, int cols) {
    double limit = std::sqrt(6.0 / static_cast<double>(rows + cols));
    double* p = params.flat().data() + offset;
    for (int i = 0; i < rows * cols; ++i) p[i] = rng.uniform(-limit, limit);
  };
  // fan_in/fan_out per matrix; biases stay zero.
  fill(0, h, d);                            // W1
  fill(h * d + h, h, h);                    // W2
  fill(h * d + 2 * h + h * h, d, h);        // Wmu
  fill(h * d + 2 * h + h * h + d * h + d, d, h);  // Ws
  return params;
}

EncodeResult encode_centroid(const EncoderParams& params,
                             const Eigen::VectorXd& c) {
  if (c.size() != params.dim()) {
    throw std::runtime_error("encode: input dimension does not match params");
  }
  ForwardTape tape;
  tape.input = c;
  tape.a1 = params.w1() * c + params.b1();
  tape.h1 = tape.a1.cwiseMax(0.0);
  tape.a2 = params.w2() * tape.h1 + params.b2();
  tape.h2 = tape.a2.cwiseMax(0.0);
  tape.mu = params.w_mu() * tape.h2 + params.b_mu();
  tape.log_var = params.w_s() * tape.h2 + params.b_s();
  tape.sigma = (0.5 * tape.log_var).array().exp();
  EncodeResult result;
  result.encoding.mu = tape.mu;
  result.encoding.sigma = tape.sigma;
  result.tape = std::move(tape);
  return result;
}

EncodeResult encode_set(const EncoderParams& params,
                        std::span<const Eigen::VectorXd> vectors) {
  if (vectors.empty()) {
    throw std::runtime_error("encode_set: empty set");
  }
  return encode_centroid(params, centroid(vectors));
}

void backward_accumulate(const EncoderParams& params, const ForwardTape& tape,
                         const Eigen::VectorXd& grad_mu,
                         const Eigen::VectorXd& grad_sigma,
                         Eigen::VectorXd& theta_grad,
                         Eigen::VectorXd* input_grad) {
  const int d = params.dim();
  const int h = params.hidden();
  if (grad_mu.size() != d || grad_sigma.size() != d) {
    throw std::runtime_error("backward: upstream gradient shape mismatch");
  }
  if (static_cast<std::size_t>(theta_grad.size()) !=
      EncoderParams::theta_size(d, h)) {
    throw std::runtime_error("backward: gradient buffer has wrong size");
  }

  // sigma = exp(0.5 * log_var) so d sigma / d log_var = 0.5 * sigma.
  Eigen::VectorXd g_log_var =
      0.5 * grad_sigma.array() * tape.sigma.array();

  Eigen::Index off = 0;
  MatrixView g_w1(theta_grad.data() + off, h, d);
  off += h * d;
  VectorView g_b1(theta_grad.data() + off, h);
  off += h;
  MatrixView g_w2(theta_grad.data() + off, h, h);
  off += h * h;
  VectorView g_b2(theta_grad.data() + off, h);
  off += h;
  MatrixView g_wmu(theta_grad.data() + off, d, h);
  off += d * h;
  VectorView g_bmu(theta_grad.data() + off, d);
  off += d;
  MatrixView g_ws(theta_grad.data() + off, d, h);
  off += d * h;
  VectorView g_bs(theta_grad.data() + off, d);

  g_wmu += grad_mu * tape.h2.transpose();
  g_bmu += grad_mu;
  g_ws += g_log_var * tape.h2.transpose();
  g_bs += g_log_var;

  Eigen::VectorXd g_h2 = params.w_mu().transpose() * grad_mu +
                         params.w_s().transpose() * g_log_var;
  // ReLU subgradient at exactly 0 is 0.
  Eigen::VectorXd g_a2 =
      (tape.a2.array() > 0.0).select(g_h2, Eigen::VectorXd::Zero(h));
  g_w2 += g_a2 * tape.h1.transpose();
  g_b2 += g_a2;

  Eigen::VectorXd g_h1 = params.w2().transpose() * g_a2;
  Eigen::VectorXd g_a1 =
      (tape.a1.array() > 0.0).select(g_h1, Eigen::VectorXd::Zero(h));
  g_w1 += g_a1 * tape.input.transpose();
  g_b1 += g_a1;

  if (input_grad != nullptr) {
    *input_grad += params.w1().transpose() * g_a1;
  }
}

BackwardResult backward(const EncoderParams& params, const ForwardTape& tape,
                        const Eigen::VectorXd& grad_mu,
                        const Eigen::VectorXd& grad_sigma) {
  BackwardResult result;
  result.theta_grad = Eigen::VectorXd::Zero(
      static_cast<Eigen::Index>(EncoderParams::theta_size(params.dim(), params.hidden())));
  result.input_grad = Eigen::VectorXd::Zero(params.dim());
  backward_accumulate(params, tape, grad_mu, grad_sigma, result.theta_grad,
                      &result.input_grad);
  return result;
}

void save_params(const EncoderParams& params, std::ostream& out) {
  out.write(kMagic, 4);
  std::uint32_t version = kVersion;
  std::uint32_t d = static_cast<std::uint32_t>(params.dim());
  std::uint32_t h = static_cast<std::uint32_t>(params.hidden());
  std::int64_t seed = params.seed();
  out.write(reinterpret_cast<const char*>(&version), sizeof(version));
  out.write(reinterpret_cast<const char*>(&d), sizeof(d));
  out.write(reinterpret_cast<const char*>(&h), sizeof(h));
  out.write(reinterpret_cast<const char*>(&seed), sizeof(seed));
  out.write(reinterpret_cast<const char*>(params.flat().data()),
            static_cast<std::streamsize>(params.flat().size() * sizeof(double)));
  if (!out) {
    throw std::runtime_error("save_params: write failed");
  }
}

EncoderParams load_params(std::istream& in) {
  char magic[4];
  std::uint32_t version = 0, d = 0, h = 0;
  std::int64_t seed = 0;
  in.read(magic, 4);
  in.read(reinterpret_cast<char*>(&version), sizeof(version));
  in.read(reinterpret_cast<char*>(&d), sizeof(d));
  in.read(reinterpret_cast<char*>(&h), sizeof(h));
  in.read(reinterpret_cast<char*>(&seed), sizeof(seed));
  if (!in || std::memcmp(magic, kMagic, 4) != 0 || version != kVersion ||
      d == 0 || h == 0) {
    throw std::runtime_error("load_params: corrupted header");
  }
  std::size_t count =
      EncoderParams::theta_size(static_cast<int>(d), static_cast<int>(h));
  Eigen::VectorXd theta(static_cast<Eigen::Index>(count));
  in.read(reinterpret_cast<char*>(theta.data()),
          static_cast<std::streamsize>(count * sizeof(double)));
  if (static_cast<std::size_t>(in.gcount()) != count * sizeof(double)) {
    throw std::runtime_error("load_params: payload length mismatch");
  }
  if (in.peek() != std::istream::traits_type::eof()) {
    throw std::runtime_error("load_params: payload length mismatch");
  }
  return EncoderParams(static_cast<int>(d), static_cast<int>(h), seed,
                       std::move(theta));
}

std::string params_to_bytes(const EncoderParams& params) {
  std::ostringstream out(std::ios::binary);
  save_params(params, out);
  return out.str();
}

EncoderParams params_from_bytes(const std::string& bytes) {
  std::istringstream in(bytes, std::ios::binary);
  return load_params(in);
}

}  // namespace gse
