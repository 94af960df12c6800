#pragma once

// Shared forward/backward kernels. The plain ReLU path and the fixed-mask
// (gated) path go through the same arithmetic, so pre-activations agree
// bit-for-bit between the two modes.

#include <vector>

#include "fedsq/model.hpp"

namespace fedsq::detail {

struct ForwardTrace {
  std::vector<Tensor> layer_inputs;   // h_{l-1} for each layer, in layer order
  std::vector<Tensor> gated_preacts;  // z_l of gated layers, in layer order
};

// masks == nullptr applies ReLU at gated layers; otherwise h = mask * z with
// one mask per gated layer. preacts/trace are filled when non-null.
Tensor run_forward(const ModelArch& arch, const ModelParams& params, const Tensor& x,
                   const std::vector<Tensor>* masks, std::vector<Tensor>* preacts,
                   ForwardTrace* trace);

// Loss plus, when dlogits != nullptr, its gradient (softmax - onehot)/batch.
real ce_loss_and_grad(const Tensor& logits, const std::vector<std::size_t>& labels,
                      Tensor* dlogits);

GradientSet run_backward(const ModelArch& arch, const ModelParams& params, const Tensor& x,
                         const std::vector<std::size_t>& labels,
                         const std::vector<Tensor>* masks, const std::vector<bool>& trainable,
                         real* loss_out);

}  // namespace fedsq::detail
