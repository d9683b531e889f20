// Copyright 2026 The Backhaul Authors. All rights reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef BACKHAUL_NEURAL_H_
#define BACKHAUL_NEURAL_H_

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace backhaul {

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using RowVectorX = Eigen::Matrix<Scalar, 1, Eigen::Dynamic>;

template <typename Scalar>
struct DenseLayer {
  MatrixX<Scalar> weights;  // out x in
  VectorX<Scalar> bias;     // out
};

// Fully-connected network with ReLU hidden layers and an identity output
// layer. Batches are column-major: one sample per column.
template <typename Scalar>
class Mlp {
 public:
  Mlp() = default;

  // Zero-initialized network; sizes = {input, hidden..., output}.
  explicit Mlp(std::vector<int> layer_sizes) : sizes_(std::move(layer_sizes)) {
    if (sizes_.size() < 2) {
      throw std::invalid_argument("an MLP needs at least input and output sizes");
    }
    for (int s : sizes_) {
      if (s <= 0) throw std::invalid_argument("layer sizes must be positive");
    }
    for (std::size_t l = 1; l < sizes_.size(); ++l) {
      layers_.push_back({MatrixX<Scalar>::Zero(sizes_[l], sizes_[l - 1]),
                         VectorX<Scalar>::Zero(sizes_[l])});
    }
  }

  const std::vector<int>& layer_sizes() const { return sizes_; }
  int input_size() const { return sizes_.front(); }
  int output_size() const { return sizes_.back(); }
  std::vector<DenseLayer<Scalar>>& layers() { return layers_; }
  const std::vector<DenseLayer<Scalar>>& layers() const { return layers_; }

  std::size_t parameter_count() const {
    std::size_t n = 0;
    for (const auto& layer : layers_) n += layer.weights.size() + layer.bias.size();
    return n;
  }

  MatrixX<Scalar> forward_batch(const MatrixX<Scalar>& inputs) const {
    if (inputs.rows() != input_size()) {
      throw std::invalid_argument("input width does not match the network");
    }
    MatrixX<Scalar> a = inputs;
    for (std::size_t l = 0; l < layers_.size(); ++l) {
      MatrixX<Scalar> z = layers_[l].weights * a;
      z.colwise() += layers_[l].bias;
      a = (l + 1 < layers_.size()) ? MatrixX<Scalar>(z.cwiseMax(Scalar(0)))
                                   : std::move(z);
    }
    return a;
  }

  // Scalar output of a single-output network.
  Scalar forward(const Eigen::Ref<const VectorX<Scalar>>& input) const {
    if (output_size() != 1) {
      throw std::logic_error("forward() needs a single-output network");
    }
    if (input.size() != input_size()) {
      throw std::invalid_argument("input width does not match the network");
    }
    VectorX<Scalar> a = input;
    for (std::size_t l = 0; l < layers_.size(); ++l) {
      VectorX<Scalar> z = layers_[l].weights * a + layers_[l].bias;
      a = (l + 1 < layers_.size()) ? VectorX<Scalar>(z.cwiseMax(Scalar(0)))
                                   : std::move(z);
    }
    return a(0);
  }

  bool all_finite() const {
    for (const auto& layer : layers_) {
      if (!layer.weights.allFinite() || !layer.bias.allFinite()) return false;
    }
    return true;
  }

  bool operator==(const Mlp& other) const {
    if (sizes_ != other.sizes_) return false;
    for (std::size_t l = 0; l < layers_.size(); ++l) {
      if (layers_[l].weights != other.layers_[l].weights ||
          layers_[l].bias != other.layers_[l].bias) {
        return false;
      }
    }
    return true;
  }

 private:
  std::vector<int> sizes_;
  std::vector<DenseLayer<Scalar>> layers_;
};

inline double init_limit(int fan_in) {
  return std::sqrt(6.0 / static_cast<double>(fan_in));
}

// Uniform fan-in initialization, U(-sqrt(6 / fan_in), sqrt(6 / fan_in)),
// suited to ReLU layers. Biases start at zero.
template <typename Scalar>
Mlp<Scalar> init_weights(std::vector<int> layer_sizes, std::uint64_t seed) {
  Mlp<Scalar> net(std::move(layer_sizes));
  std::mt19937_64 rng(seed);
  for (auto& layer : net.layers()) {
    const double limit = init_limit(static_cast<int>(layer.weights.cols()));
    std::uniform_real_distribution<double> dist(-limit, limit);
    // Row-major fill order keeps the draw sequence independent of storage.
    for (Eigen::Index r = 0; r < layer.weights.rows(); ++r) {
      for (Eigen::Index c = 0; c < layer.weights.cols(); ++c) {
        layer.weights(r, c) = static_cast<Scalar>(dist(rng));
      }
    }
  }
  return net;
}

// Independent copy whose parameters no longer track `online`.
template <typename Scalar>
Mlp<Scalar> clone_into_target(const Mlp<Scalar>& online) {
  return online;
}

template <typename Scalar>
struct Gradients {
  std::vector<DenseLayer<Scalar>> layers;
  Scalar loss = Scalar(0);
};

// Mean squared error L = (1/M) sum (y_i - q_i)^2 over a batch of M columns
// and its exact gradient. The ReLU derivative is taken as 0 at the kink.
template <typename Scalar>
Gradients<Scalar> backward(const Mlp<Scalar>& net,
                           const MatrixX<Scalar>& inputs,
                           const RowVectorX<Scalar>& targets) {
  const Eigen::Index batch = inputs.cols();
  if (batch == 0) throw std::invalid_argument("empty batch");
  if (targets.size() != batch) {
    throw std::invalid_argument("one target per batch column is required");
  }
  if (!targets.allFinite()) throw std::invalid_argument("non-finite target");
  if (inputs.rows() != net.input_size() || net.output_size() != 1) {
    throw std::invalid_argument("batch does not match the network");
  }
  const auto& layers = net.layers();
  const std::size_t depth = layers.size();

  // activations[0] is the input; pre[l] is layer l's affine output.
  std::vector<MatrixX<Scalar>> activations(depth + 1);
  std::vector<MatrixX<Scalar>> pre(depth);
  activations[0] = inputs;
  for (std::size_t l = 0; l < depth; ++l) {
    pre[l] = layers[l].weights * activations[l];
    pre[l].colwise() += layers[l].bias;
    activations[l + 1] = (l + 1 < depth)
                             ? MatrixX<Scalar>(pre[l].cwiseMax(Scalar(0)))
                             : pre[l];
  }

  const RowVectorX<Scalar> residual = targets - activations[depth].row(0);
  Gradients<Scalar> grads;
  grads.loss = residual.squaredNorm() / static_cast<Scalar>(batch);
  grads.layers.resize(depth);

  MatrixX<Scalar> delta =
      (Scalar(-2) / static_cast<Scalar>(batch)) * residual;
  for (std::size_t l = depth; l-- > 0;) {
    grads.layers[l].weights = delta * activations[l].transpose();
    grads.layers[l].bias = delta.rowwise().sum();
    if (l > 0) {
      delta = (layers[l].weights.transpose() * delta)
                  .cwiseProduct((pre[l - 1].array() > Scalar(0))
                                    .template cast<Scalar>()
                                    .matrix());
    }
  }
  return grads;
}

// Adam moments mirror the parameter shapes.
template <typename Scalar>
struct AdamState {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::int64_t step = 0;
  std::vector<DenseLayer<Scalar>> first_moment;
  std::vector<DenseLayer<Scalar>> second_moment;

  AdamState() = default;
  explicit AdamState(const Mlp<Scalar>& net) {
    for (const auto& layer : net.layers()) {
      DenseLayer<Scalar> zero{
          MatrixX<Scalar>::Zero(layer.weights.rows(), layer.weights.cols()),
          VectorX<Scalar>::Zero(layer.bias.size())};
      first_moment.push_back(zero);
      second_moment.push_back(std::move(zero));
    }
  }

  bool operator==(const AdamState& o) const {
    if (beta1 != o.beta1 || beta2 != o.beta2 || epsilon != o.epsilon ||
        step != o.step || first_moment.size() != o.first_moment.size()) {
      return false;
    }
    for (std::size_t l = 0; l < first_moment.size(); ++l) {
      if (first_moment[l].weights != o.first_moment[l].weights ||
          first_moment[l].bias != o.first_moment[l].bias ||
          second_moment[l].weights != o.second_moment[l].weights ||
          second_moment[l].bias != o.second_moment[l].bias) {
        return false;
      }
    }
    return true;
  }
};

namespace internal {

template <typename Derived, typename Moment>
void adam_apply(Eigen::MatrixBase<Derived>& param, const Moment& grad,
                Moment& m, Moment& v, double beta1, double beta2,
                double epsilon, double lr_m, double v_correction) {
  using Scalar = typename Derived::Scalar;
  m = Scalar(beta1) * m + Scalar(1.0 - beta1) * grad;
  v = Scalar(beta2) * v + Scalar(1.0 - beta2) * grad.cwiseProduct(grad);
  param.derived().array() -=
      Scalar(lr_m) * m.array() /
      ((v.array() / Scalar(v_correction)).sqrt() + Scalar(epsilon));
}

}  // namespace internal

// One bias-corrected Adam descent step.
template <typename Scalar>
void adam_update(Mlp<Scalar>& net, AdamState<Scalar>& state,
                 const Gradients<Scalar>& grads, double learning_rate) {
  auto& layers = net.layers();
  if (grads.layers.size() != layers.size() ||
      state.first_moment.size() != layers.size()) {
    throw std::invalid_argument("gradient or optimizer shape mismatch");
  }
  ++state.step;
  const double t = static_cast<double>(state.step);
  const double m_correction = 1.0 - std::pow(state.beta1, t);
  const double v_correction = 1.0 - std::pow(state.beta2, t);
  const double lr_m = learning_rate / m_correction;
  for (std::size_t l = 0; l < layers.size(); ++l) {
    internal::adam_apply(layers[l].weights, grads.layers[l].weights,
                         state.first_moment[l].weights,
                         state.second_moment[l].weights, state.beta1,
                         state.beta2, state.epsilon, lr_m, v_correction);
    internal::adam_apply(layers[l].bias, grads.layers[l].bias,
                         state.first_moment[l].bias,
                         state.second_moment[l].bias, state.beta1, state.beta2,
                         state.epsilon, lr_m, v_correction);
  }
}

using QNetwork = Mlp<double>;
using QAdamState = AdamState<double>;

// Versioned JSON checkpoint: layer sizes, row-major parameters and the
// optimizer state. Doubles are written in shortest round-trip form, so a
// load reproduces the saved values bit for bit.
void save_checkpoint(const std::filesystem::path& file, const QNetwork& net,
                     const QAdamState& adam);
std::pair<QNetwork, QAdamState> load_checkpoint(
    const std::filesystem::path& file);

}  // namespace backhaul

#endif  // BACKHAUL_NEURAL_H_
