#include "odirl/mlp.hpp"

#include <bit>
#include <cmath>
#include <fstream>
#include <random>

#include <nlohmann/json.hpp>

namespace odirl::approx {

std::string_view to_string(Activation a) {
  switch (a) {
    case Activation::kTanh: return "tanh";
    case Activation::kRelu: return "relu";
    case Activation::kIdentity: return "identity";
  }
  return "identity";
}

Activation activation_from_string(std::string_view s) {
  if (s == "tanh") return Activation::kTanh;
  if (s == "relu") return Activation::kRelu;
  if (s == "identity") return Activation::kIdentity;
  throw Error("unknown activation '" + std::string(s) + "'");
}

namespace {

void apply_activation(Activation a, Mat& z) {
  switch (a) {
    case Activation::kTanh: z = z.array().tanh(); break;
    case Activation::kRelu: z = z.cwiseMax(0.0); break;
    case Activation::kIdentity: break;
  }
}

// Derivative expressed through the activation output y.
void scale_by_derivative(Activation a, const Mat& y, Mat& delta) {
  switch (a) {
    case Activation::kTanh: delta.array() *= 1.0 - y.array().square(); break;
    case Activation::kRelu: delta.array() *= (y.array() > 0.0).cast<double>(); break;
    case Activation::kIdentity: break;
  }
}

}  // namespace

Mlp::Mlp(std::vector<LayerShape> shapes, std::vector<Activation> activations, std::uint64_t seed,
         double last_layer_scale)
    : shapes_(std::move(shapes)), activations_(std::move(activations)), seed_(seed) {
  if (shapes_.empty() || shapes_.size() != activations_.size()) {
    throw Error("mlp: need one activation per layer and at least one layer");
  }
  std::size_t total = 0;
  for (std::size_t l = 0; l < shapes_.size(); ++l) {
    if (shapes_[l].in <= 0 || shapes_[l].out <= 0) throw Error("mlp: layer sizes must be positive");
    if (l > 0 && shapes_[l].in != shapes_[l - 1].out) throw Error("mlp: consecutive layer sizes differ");
    offsets_.push_back(total);
    total += static_cast<std::size_t>(shapes_[l].in * shapes_[l].out + shapes_[l].out);
  }
  params_.assign(total, 0.0);
  grad_.assign(total, 0.0);

  Rng rng(seed);
  for (std::size_t l = 0; l < shapes_.size(); ++l) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(shapes_[l].in));
    const double scale = (l + 1 == shapes_.size()) ? last_layer_scale : 1.0;
    std::uniform_real_distribution<double> u(-bound, bound);
    const std::size_t nw = static_cast<std::size_t>(shapes_[l].in * shapes_[l].out);
    for (std::size_t i = 0; i < nw; ++i) params_[offsets_[l] + i] = scale * u(rng);
  }
}

Mlp Mlp::make(int in, const std::vector<int>& hidden, int out, Activation hidden_act,
              Activation out_act, std::uint64_t seed, double last_layer_scale) {
  std::vector<LayerShape> shapes;
  std::vector<Activation> acts;
  int prev = in;
  for (int h : hidden) {
    shapes.push_back({prev, h});
    acts.push_back(hidden_act);
    prev = h;
  }
  shapes.push_back({prev, out});
  acts.push_back(out_act);
  return Mlp(std::move(shapes), std::move(acts), seed, last_layer_scale);
}

std::span<double> Mlp::mutable_params() {
  ++version_;
  cache_valid_ = false;
  return params_;
}

void Mlp::zero_grad() { std::fill(grad_.begin(), grad_.end(), 0.0); }

void Mlp::check_input(const Mat& input) const {
  if (shapes_.empty()) throw Error("mlp: empty network");
  if (input.rows() != in_dim()) {
    throw Error("mlp: input has " + std::to_string(input.rows()) + " rows, expected " +
                std::to_string(in_dim()));
  }
}

const Mat& Mlp::forward(const Mat& input) {
  check_input(input);
  cache_in_.resize(shapes_.size());
  Mat x = input;
  for (std::size_t l = 0; l < shapes_.size(); ++l) {
    const auto [in, out] = shapes_[l];
    Eigen::Map<const Mat> w(params_.data() + offsets_[l], out, in);
    Eigen::Map<const Vec> b(params_.data() + offsets_[l] + static_cast<std::size_t>(in * out), out);
    Mat z = w * x;
    z.colwise() += b;
    apply_activation(activations_[l], z);
    cache_in_[l] = std::move(x);
    x = std::move(z);
  }
  cache_out_ = std::move(x);
  cache_valid_ = true;
  cache_version_ = version_;
  return cache_out_;
}

Mat Mlp::predict(const Mat& input) const {
  check_input(input);
  Mat x = input;
  for (std::size_t l = 0; l < shapes_.size(); ++l) {
    const auto [in, out] = shapes_[l];
    Eigen::Map<const Mat> w(params_.data() + offsets_[l], out, in);
    Eigen::Map<const Vec> b(params_.data() + offsets_[l] + static_cast<std::size_t>(in * out), out);
    Mat z = w * x;
    z.colwise() += b;
    apply_activation(activations_[l], z);
    x = std::move(z);
  }
  return x;
}

Vec Mlp::predict(const Vec& input) const {
  Mat m = predict(Mat(input));
  return m.col(0);
}

Mat Mlp::backward(const Mat& upstream) {
  if (!cache_valid_ || cache_version_ != version_) {
    throw Error("mlp: backward without a fresh forward pass (stale cache)");
  }
  if (upstream.rows() != cache_out_.rows() || upstream.cols() != cache_out_.cols()) {
    throw Error("mlp: upstream gradient shape does not match cached output");
  }
  Mat delta = upstream;
  const Mat* y = &cache_out_;
  for (std::size_t l = shapes_.size(); l-- > 0;) {
    const auto [in, out] = shapes_[l];
    scale_by_derivative(activations_[l], *y, delta);
    Eigen::Map<const Mat> w(params_.data() + offsets_[l], out, in);
    Eigen::Map<Mat> gw(grad_.data() + offsets_[l], out, in);
    Eigen::Map<Vec> gb(grad_.data() + offsets_[l] + static_cast<std::size_t>(in * out), out);
    gw.noalias() += delta * cache_in_[l].transpose();
    gb.noalias() += delta.rowwise().sum();
    Mat prev = w.transpose() * delta;
    delta = std::move(prev);
    y = &cache_in_[l];
  }
  return delta;
}

void Mlp::save(const std::string& path, std::span<const double> aux) const {
  static_assert(std::endian::native == std::endian::little, "checkpoints assume little-endian");
  nlohmann::json header;
  header["format"] = "odirl-mlp-v1";
  nlohmann::json shapes = nlohmann::json::array();
  for (const auto& s : shapes_) shapes.push_back({s.in, s.out});
  header["layer_shapes"] = shapes;
  nlohmann::json acts = nlohmann::json::array();
  for (auto a : activations_) acts.push_back(std::string(to_string(a)));
  header["activations"] = acts;
  header["seed"] = seed_;
  header["num_params"] = params_.size();
  header["num_aux"] = aux.size();
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot open '" + path + "' for writing");
  os << header.dump() << '\n';
  os.write(reinterpret_cast<const char*>(params_.data()),
           static_cast<std::streamsize>(params_.size() * sizeof(double)));
  os.write(reinterpret_cast<const char*>(aux.data()),
           static_cast<std::streamsize>(aux.size() * sizeof(double)));
  if (!os) throw Error("failed writing checkpoint '" + path + "'");
}

Mlp Mlp::load(const std::string& path, std::vector<double>* aux) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("cannot open checkpoint '" + path + "'");
  std::string line;
  std::getline(is, line);
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw Error("checkpoint '" + path + "': bad header: " + e.what());
  }
  if (header.value("format", "") != "odirl-mlp-v1") throw Error("checkpoint '" + path + "': unknown format");
  std::vector<LayerShape> shapes;
  for (const auto& s : header.at("layer_shapes")) shapes.push_back({s.at(0).get<int>(), s.at(1).get<int>()});
  std::vector<Activation> acts;
  for (const auto& a : header.at("activations")) acts.push_back(activation_from_string(a.get<std::string>()));
  Mlp net(shapes, acts, header.at("seed").get<std::uint64_t>());
  const auto np = header.at("num_params").get<std::size_t>();
  if (np != net.params_.size()) throw Error("checkpoint '" + path + "': parameter count mismatch");
  is.read(reinterpret_cast<char*>(net.params_.data()), static_cast<std::streamsize>(np * sizeof(double)));
  const auto na = header.value("num_aux", std::size_t{0});
  std::vector<double> extra(na);
  is.read(reinterpret_cast<char*>(extra.data()), static_cast<std::streamsize>(na * sizeof(double)));
  if (!is) throw Error("checkpoint '" + path + "': truncated payload");
  if (aux) *aux = std::move(extra);
  return net;
}

}  // namespace odirl::approx
