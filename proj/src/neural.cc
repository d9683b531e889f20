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

#include <fstream>
#include <stdexcept>
#include <string>

#include "backhaul/neural.h"
#include "json.hpp"

namespace backhaul {
namespace {

constexpr const char* kFormat = "backhaul-qnetwork";
constexpr int kVersion = 1;

nlohmann::json row_major(const MatrixX<double>& m) {
  nlohmann::json values = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) values.push_back(m(r, c));
  }
  return values;
}

void fill_row_major(const nlohmann::json& values, MatrixX<double>& m) {
  if (values.size() != static_cast<std::size_t>(m.size())) {
    throw std::runtime_error("checkpoint parameter count mismatch");
  }
  std::size_t i = 0;
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = values[i++].get<double>();
  }
}

void fill_vector(const nlohmann::json& values, VectorX<double>& v) {
  if (values.size() != static_cast<std::size_t>(v.size())) {
    throw std::runtime_error("checkpoint parameter count mismatch");
  }
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = values[i].get<double>();
}

nlohmann::json layers_json(const std::vector<DenseLayer<double>>& layers) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& layer : layers) {
    out.push_back({{"weights", row_major(layer.weights)},
                   {"bias", std::vector<double>(layer.bias.data(),
                                                layer.bias.data() +
                                                    layer.bias.size())}});
  }
  return out;
}

void read_layers(const nlohmann::json& j, std::vector<DenseLayer<double>>& layers) {
  if (j.size() != layers.size()) {
    throw std::runtime_error("checkpoint layer count mismatch");
  }
  for (std::size_t l = 0; l < layers.size(); ++l) {
    fill_row_major(j[l].at("weights"), layers[l].weights);
    fill_vector(j[l].at("bias"), layers[l].bias);
  }
}

}  // namespace

void save_checkpoint(const std::filesystem::path& file, const QNetwork& net,
                     const QAdamState& adam) {
  nlohmann::json j;
  j["format"] = kFormat;
  j["version"] = kVersion;
  j["layer_sizes"] = net.layer_sizes();
  j["layers"] = layers_json(net.layers());
  j["adam"] = {{"beta1", adam.beta1},
               {"beta2", adam.beta2},
               {"epsilon", adam.epsilon},
               {"step", adam.step},
               {"first_moment", layers_json(adam.first_moment)},
               {"second_moment", layers_json(adam.second_moment)}};
  std::ofstream out(file);
  if (!out) throw std::runtime_error("cannot write " + file.string());
  out << j.dump() << '\n';
}

std::pair<QNetwork, QAdamState> load_checkpoint(
    const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot open " + file.string());
  const nlohmann::json j = nlohmann::json::parse(in);
  if (j.value("format", std::string{}) != kFormat ||
      j.value("version", 0) != kVersion) {
    throw std::runtime_error(file.string() + " is not a v1 Q-network checkpoint");
  }
  QNetwork net(j.at("layer_sizes").get<std::vector<int>>());
  read_layers(j.at("layers"), net.layers());
  QAdamState adam(net);
  const auto& a = j.at("adam");
  adam.beta1 = a.at("beta1").get<double>();
  adam.beta2 = a.at("beta2").get<double>();
  adam.epsilon = a.at("epsilon").get<double>();
  adam.step = a.at("step").get<std::int64_t>();
  read_layers(a.at("first_moment"), adam.first_moment);
  read_layers(a.at("second_moment"), adam.second_moment);
  return {std::move(net), std::move(adam)};
}

}  // namespace backhaul
