#include "fedsq/model.hpp"

#include <cmath>
#include <sstream>

#include "fedsq/error.hpp"
#include "fedsq/rng.hpp"

namespace fedsq {

std::string layer_kind_name(LayerKind kind) {
  switch (kind) {
    case LayerKind::Dense: return "dense";
    case LayerKind::Conv2d: return "conv2d";
    case LayerKind::Flatten: return "flatten";
  }
  return "?";
}

LayerSpec LayerSpec::dense(std::size_t in, std::size_t out, bool gated) {
  LayerSpec s;
  s.kind = LayerKind::Dense;
  s.in_dim = in;
  s.out_dim = out;
  s.gated = gated;
  return s;
}

LayerSpec LayerSpec::conv2d(std::size_t in_ch, std::size_t out_ch, std::size_t kernel,
                            std::size_t stride, std::size_t padding, bool gated) {
  LayerSpec s;
  s.kind = LayerKind::Conv2d;
  s.in_ch = in_ch;
  s.out_ch = out_ch;
  s.kernel = kernel;
  s.stride = stride;
  s.padding = padding;
  s.gated = gated;
  return s;
}

LayerSpec LayerSpec::flatten() {
  LayerSpec s;
  s.kind = LayerKind::Flatten;
  s.gated = false;
  return s;
}

namespace {

[[noreturn]] void compose_error(std::size_t layer_index, const std::string& msg) {
  throw ConfigError("layer " + std::to_string(layer_index) + ": " + msg);
}

}  // namespace

std::vector<std::size_t> LayerSpec::output_shape(const std::vector<std::size_t>& in,
                                                 std::size_t layer_index) const {
  switch (kind) {
    case LayerKind::Dense: {
      if (in.size() != 1 || in[0] != in_dim) {
        compose_error(layer_index, "dense expects input shape [" + std::to_string(in_dim) +
                                       "], got " + shape_str(in));
      }
      if (out_dim == 0) compose_error(layer_index, "dense out_dim must be positive");
      return {out_dim};
    }
    case LayerKind::Conv2d: {
      if (in.size() != 3 || in[0] != in_ch) {
        compose_error(layer_index, "conv2d expects input shape [" + std::to_string(in_ch) +
                                       ",H,W], got " + shape_str(in));
      }
      if (kernel == 0 || stride == 0 || out_ch == 0) {
        compose_error(layer_index, "conv2d kernel/stride/out_ch must be positive");
      }
      const std::size_t h = in[1] + 2 * padding;
      const std::size_t w = in[2] + 2 * padding;
      if (h < kernel || w < kernel) {
        compose_error(layer_index, "conv2d kernel " + std::to_string(kernel) +
                                       " exceeds padded input " + shape_str(in));
      }
      return {out_ch, (h - kernel) / stride + 1, (w - kernel) / stride + 1};
    }
    case LayerKind::Flatten: {
      if (in.size() < 2) compose_error(layer_index, "flatten expects a multi-axis input");
      return {shape_numel(in)};
    }
  }
  compose_error(layer_index, "unknown layer kind");
}

void ModelArch::validate() const {
  if (layers.empty()) throw ConfigError("architecture has no layers");
  if (input_shape.empty()) throw ConfigError("architecture input_shape is empty");
  for (std::size_t d : input_shape) {
    if (d == 0) throw ConfigError("architecture input dimensions must be positive");
  }
  if (num_classes == 0) throw ConfigError("num_classes must be positive");

  std::vector<std::size_t> cur = input_shape;
  std::size_t gated = 0;
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const LayerSpec& l = layers[i];
    if (l.kind == LayerKind::Flatten && l.gated) {
      compose_error(i, "flatten has no parameters and cannot be gated");
    }
    cur = l.output_shape(cur, i);
    if (l.gated) ++gated;
  }

  const LayerSpec& head = layers.back();
  if (head.kind != LayerKind::Dense || head.out_dim != num_classes || head.gated) {
    throw ConfigError("last layer must be the ungated dense head onto " +
                      std::to_string(num_classes) + " classes");
  }
  if (gated == 0) throw ConfigError("architecture needs at least one gated layer");
}

std::size_t ModelArch::param_layer_count() const {
  std::size_t n = 0;
  for (const auto& l : layers) {
    if (l.has_params()) ++n;
  }
  return n;
}

std::vector<std::size_t> ModelArch::param_layer_indices() const {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < layers.size(); ++i) {
    if (layers[i].has_params()) idx.push_back(i);
  }
  return idx;
}

std::size_t ModelArch::gated_layer_count() const {
  std::size_t n = 0;
  for (const auto& l : layers) {
    if (l.gated) ++n;
  }
  return n;
}

std::vector<std::vector<std::size_t>> ModelArch::layer_output_shapes() const {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> cur = input_shape;
  for (std::size_t i = 0; i < layers.size(); ++i) {
    cur = layers[i].output_shape(cur, i);
    out.push_back(cur);
  }
  return out;
}

std::uint64_t ModelArch::fingerprint() const {
  std::ostringstream os;
  os << "in=" << shape_str(input_shape) << ";classes=" << num_classes;
  for (const auto& l : layers) {
    os << ";" << layer_kind_name(l.kind);
    switch (l.kind) {
      case LayerKind::Dense: os << "(" << l.in_dim << "," << l.out_dim << ")"; break;
      case LayerKind::Conv2d:
        os << "(" << l.in_ch << "," << l.out_ch << ",k" << l.kernel << ",s" << l.stride << ",p"
           << l.padding << ")";
        break;
      case LayerKind::Flatten: break;
    }
    os << (l.gated ? "+g" : "");
  }
  // FNV-1a 64-bit.
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : os.str()) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

const ParamEntry* ModelParams::find(std::size_t layer) const {
  for (const auto& e : entries) {
    if (e.layer == layer) return &e;
  }
  return nullptr;
}

ParamEntry* ModelParams::find(std::size_t layer) {
  for (auto& e : entries) {
    if (e.layer == layer) return &e;
  }
  return nullptr;
}

std::size_t ModelParams::scalar_count() const {
  std::size_t n = 0;
  for (const auto& e : entries) n += e.weights.numel() + e.bias.numel();
  return n;
}

namespace {

std::vector<std::size_t> weight_shape(const LayerSpec& l) {
  if (l.kind == LayerKind::Dense) return {l.out_dim, l.in_dim};
  return {l.out_ch, l.in_ch, l.kernel, l.kernel};
}

std::vector<std::size_t> bias_shape(const LayerSpec& l) {
  if (l.kind == LayerKind::Dense) return {l.out_dim};
  return {l.out_ch};
}

std::size_t fan_in(const LayerSpec& l) {
  if (l.kind == LayerKind::Dense) return l.in_dim;
  return l.in_ch * l.kernel * l.kernel;
}

}  // namespace

ModelParams init_params(const ModelArch& arch, std::uint64_t seed) {
  arch.validate();
  Rng rng(seed);
  ModelParams params;
  params.arch_id = arch.fingerprint();
  for (std::size_t i = 0; i < arch.layers.size(); ++i) {
    const LayerSpec& l = arch.layers[i];
    if (!l.has_params()) continue;
    ParamEntry e;
    e.layer = i;
    e.weights = Tensor::zeros(weight_shape(l));
    e.bias = Tensor::zeros(bias_shape(l));
    const double bound = std::sqrt(6.0 / static_cast<double>(fan_in(l)));
    for (auto& w : e.weights.data) {
      w = static_cast<real>((2.0 * rng.uniform() - 1.0) * bound);
    }
    params.entries.push_back(std::move(e));
  }
  return params;
}

void check_params(const ModelArch& arch, const ModelParams& params) {
  const auto idx = arch.param_layer_indices();
  if (params.entries.size() != idx.size()) {
    throw ConfigError("parameter set has " + std::to_string(params.entries.size()) +
                      " entries, architecture has " + std::to_string(idx.size()) +
                      " parameterized layers");
  }
  for (std::size_t k = 0; k < idx.size(); ++k) {
    const ParamEntry& e = params.entries[k];
    if (e.layer != idx[k]) {
      throw ConfigError("parameter entry " + std::to_string(k) + " keyed to layer " +
                        std::to_string(e.layer) + ", expected " + std::to_string(idx[k]));
    }
    const LayerSpec& l = arch.layers[e.layer];
    if (e.weights.shape != weight_shape(l) || e.bias.shape != bias_shape(l)) {
      throw ConfigError("parameter shapes for layer " + std::to_string(e.layer) +
                        " do not match its spec");
    }
  }
}

}  // namespace fedsq
