#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "odirl/types.hpp"

namespace odirl::approx {

enum class Activation : std::uint8_t { kTanh, kRelu, kIdentity };

std::string_view to_string(Activation a);
Activation activation_from_string(std::string_view s);

struct LayerShape {
  int in = 0;
  int out = 0;
  bool operator==(const LayerShape&) const = default;
};

// Fully connected network with parameters in one flat array (per layer: W
// column-major out x in, then b) and a same-shape gradient buffer.
//
// forward() caches activations for one batch; backward() consumes that cache,
// accumulates into grad() and returns the gradient with respect to the input.
// Any mutation through mutable_params() invalidates the cache.
class Mlp {
 public:
  Mlp() = default;
  Mlp(std::vector<LayerShape> shapes, std::vector<Activation> activations, std::uint64_t seed,
      double last_layer_scale = 1.0);

  // in -> hidden... -> out, hidden layers share one activation.
  static Mlp make(int in, const std::vector<int>& hidden, int out, Activation hidden_act,
                  Activation out_act, std::uint64_t seed, double last_layer_scale = 1.0);

  int in_dim() const { return shapes_.empty() ? 0 : shapes_.front().in; }
  int out_dim() const { return shapes_.empty() ? 0 : shapes_.back().out; }
  const std::vector<LayerShape>& layer_shapes() const { return shapes_; }
  const std::vector<Activation>& activations() const { return activations_; }
  std::uint64_t seed() const { return seed_; }
  std::size_t num_params() const { return params_.size(); }

  std::span<const double> params() const { return params_; }
  std::span<double> mutable_params();
  std::span<const double> grad() const { return grad_; }
  std::span<double> mutable_grad() { return grad_; }
  void zero_grad();

  const Mat& forward(const Mat& input);
  Mat predict(const Mat& input) const;
  Vec predict(const Vec& input) const;
  Mat backward(const Mat& upstream);

  void save(const std::string& path, std::span<const double> aux = {}) const;
  static Mlp load(const std::string& path, std::vector<double>* aux = nullptr);

  bool operator==(const Mlp& o) const {
    return shapes_ == o.shapes_ && activations_ == o.activations_ && params_ == o.params_;
  }

 private:
  void check_input(const Mat& input) const;
  std::size_t layer_offset(std::size_t l) const { return offsets_[l]; }

  std::vector<LayerShape> shapes_;
  std::vector<Activation> activations_;
  std::vector<std::size_t> offsets_;
  std::uint64_t seed_ = 0;
  std::vector<double> params_;
  std::vector<double> grad_;

  // layer inputs (size L) and final output
  std::vector<Mat> cache_in_;
  Mat cache_out_;
  bool cache_valid_ = false;
  std::uint64_t version_ = 0;
  std::uint64_t cache_version_ = 0;
};

struct AdamConfig {
  double learning_rate = 3e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  double clip_norm = 0.0;  // <= 0 disables global-norm clipping
};

class Adam {
 public:
  Adam() = default;
  Adam(std::size_t n, AdamConfig config);

  // Applies one update and zeroes `grad`. Throws Error on non-finite gradients.
  void step(std::span<double> params, std::span<double> grad);
  void step(Mlp& net);

  const AdamConfig& config() const { return config_; }
  AdamConfig& mutable_config() { return config_; }
  std::uint64_t step_count() const { return t_; }
  // Gradient norm after clipping, from the most recent step.
  double last_grad_norm() const { return last_norm_; }

 private:
  AdamConfig config_;
  std::vector<double> m_;
  std::vector<double> v_;
  std::uint64_t t_ = 0;
  double last_norm_ = 0.0;
};

}  // namespace odirl::approx
