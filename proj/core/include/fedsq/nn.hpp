#pragma once

#include <vector>

#include "fedsq/model.hpp"

namespace fedsq {

struct ForwardResult {
  Tensor logits;                // [batch, num_classes]
  std::vector<Tensor> preacts;  // z of every gated layer, in layer order
};

// Feed-forward pass: ReLU after gated layers, identity otherwise.
ForwardResult forward(const ModelArch& arch, const ModelParams& params, const Tensor& x);

// Mean softmax cross-entropy over the batch, max-stabilized.
real loss_ce(const Tensor& logits, const std::vector<std::size_t>& labels);

struct BackwardResult {
  real loss = 0;
  GradientSet grads;  // entries only for layers marked trainable
};

// Reverse-mode gradients of loss_ce(forward(...)). `trainable` has one flag
// per parameterized layer; frozen layers still pass gradients through.
BackwardResult backward(const ModelArch& arch, const ModelParams& params, const Tensor& x,
                        const std::vector<std::size_t>& labels,
                        const std::vector<bool>& trainable);

// Vanilla SGD with weight decay: p <- p - lr*(g + wd*p) on trainable tensors;
// frozen tensors are returned bit-identical (as is everything when lr == 0).
ModelParams sgd_step(const ModelParams& params, const GradientSet& grads, real lr, real wd,
                     const std::vector<bool>& trainable);

}  // namespace fedsq
