#include "fedsq/nn.hpp"

#include <string>

#include "engine.hpp"
#include "fedsq/error.hpp"

namespace fedsq {

ForwardResult forward(const ModelArch& arch, const ModelParams& params, const Tensor& x) {
  ForwardResult r;
  r.logits = detail::run_forward(arch, params, x, nullptr, &r.preacts, nullptr);
  return r;
}

real loss_ce(const Tensor& logits, const std::vector<std::size_t>& labels) {
  return detail::ce_loss_and_grad(logits, labels, nullptr);
}

BackwardResult backward(const ModelArch& arch, const ModelParams& params, const Tensor& x,
                        const std::vector<std::size_t>& labels,
                        const std::vector<bool>& trainable) {
  BackwardResult r;
  r.grads = detail::run_backward(arch, params, x, labels, nullptr, trainable, &r.loss);
  return r;
}

ModelParams sgd_step(const ModelParams& params, const GradientSet& grads, real lr, real wd,
                     const std::vector<bool>& trainable) {
  if (lr < real{0} || wd < real{0}) throw ConfigError("sgd_step needs lr >= 0 and wd >= 0");
  if (trainable.size() != params.entries.size()) {
    throw ConfigError("trainable mask has " + std::to_string(trainable.size()) +
                      " flags for " + std::to_string(params.entries.size()) + " parameter entries");
  }
  ModelParams out;
  out.arch_id = params.arch_id;
  out.entries.reserve(params.entries.size());
  for (std::size_t k = 0; k < params.entries.size(); ++k) {
    const ParamEntry& e = params.entries[k];
    if (!trainable[k] || lr == real{0}) {
      out.entries.push_back(e);
      continue;
    }
    const ParamEntry* ge = grads.find(e.layer);
    if (!ge) throw Error("internal: missing gradient entry for layer " + std::to_string(e.layer));
    if (!ge->weights.same_shape(e.weights) || !ge->bias.same_shape(e.bias)) {
      throw Error("internal: gradient shapes for layer " + std::to_string(e.layer) +
                  " do not match the parameters");
    }
    ParamEntry ne;
    ne.layer = e.layer;
    ne.weights = e.weights;
    ne.bias = e.bias;
    for (std::size_t i = 0; i < ne.weights.data.size(); ++i) {
      ne.weights.data[i] -= lr * (ge->weights.data[i] + wd * ne.weights.data[i]);
    }
    for (std::size_t i = 0; i < ne.bias.data.size(); ++i) {
      ne.bias.data[i] -= lr * (ge->bias.data[i] + wd * ne.bias.data[i]);
    }
    out.entries.push_back(std::move(ne));
  }
  return out;
}

}  // namespace fedsq
