#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fedsq/tensor.hpp"

namespace fedsq {

enum class LayerKind { Dense, Conv2d, Flatten };

std::string layer_kind_name(LayerKind kind);

struct LayerSpec {
  LayerKind kind = LayerKind::Dense;
  // Dense
  std::size_t in_dim = 0;
  std::size_t out_dim = 0;
  // Conv2d (square kernels)
  std::size_t in_ch = 0;
  std::size_t out_ch = 0;
  std::size_t kernel = 0;
  std::size_t stride = 1;
  std::size_t padding = 0;
  // Whether a ReLU gate follows this layer.
  bool gated = false;

  static LayerSpec dense(std::size_t in, std::size_t out, bool gated);
  static LayerSpec conv2d(std::size_t in_ch, std::size_t out_ch, std::size_t kernel,
                          std::size_t stride, std::size_t padding, bool gated);
  static LayerSpec flatten();

  bool has_params() const { return kind != LayerKind::Flatten; }
  // Output shape (without batch dimension) given the input shape; throws
  // ConfigError when the shapes do not compose.
  std::vector<std::size_t> output_shape(const std::vector<std::size_t>& in,
                                        std::size_t layer_index) const;
};

struct ModelArch {
  std::vector<std::size_t> input_shape;
  std::vector<LayerSpec> layers;
  std::size_t num_classes = 0;

  // Checks composition, the head rule (last layer is an ungated Dense onto
  // num_classes) and that at least one gated layer exists.
  void validate() const;

  std::size_t param_layer_count() const;
  std::vector<std::size_t> param_layer_indices() const;
  std::size_t gated_layer_count() const;
  // Shape (without batch) of each layer's output, in layer order.
  std::vector<std::vector<std::size_t>> layer_output_shapes() const;

  std::uint64_t fingerprint() const;
};

struct ParamEntry {
  std::size_t layer = 0;  // index into arch.layers
  Tensor weights;
  Tensor bias;
};

// Layer-ordered named parameter set. Also carries gradients (a GradientSet is
// shape-congruent with the parameters it differentiates, possibly holding
// entries only for trainable layers).
struct ModelParams {
  std::vector<ParamEntry> entries;  // ascending layer index
  std::uint64_t arch_id = 0;

  const ParamEntry* find(std::size_t layer) const;
  ParamEntry* find(std::size_t layer);
  std::size_t scalar_count() const;
};

using GradientSet = ModelParams;

// Fan-in-scaled uniform init (bound sqrt(6/fan_in)), zero biases.
ModelParams init_params(const ModelArch& arch, std::uint64_t seed);

// Shape congruence against the arch; throws ConfigError on mismatch.
void check_params(const ModelArch& arch, const ModelParams& params);

}  // namespace fedsq
