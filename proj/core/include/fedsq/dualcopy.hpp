#pragma once

#include <string>
#include <vector>

#include "fedsq/model.hpp"
#include "fedsq/nn.hpp"
#include "fedsq/schedule.hpp"

namespace fedsq {

// Binary gates, one tensor (entries 0/1) per gated layer, batch-leading
// shapes equal to the corresponding pre-activations.
struct ActivationMaskSet {
  std::vector<Tensor> masks;
};

// Two disjoint parameter copies over one architecture: a frozen structural
// copy that fixes the gating, and a trainable quantitative copy that is
// optimized and aggregated. Only the quantitative copy is writable.
class DualCopyModel {
 public:
  DualCopyModel(ModelArch arch, const ModelParams& pretrained, Schedule schedule);

  const ModelArch& arch() const { return arch_; }
  const ModelParams& sk() const { return sk_; }
  const ModelParams& qk() const { return qk_; }
  const Schedule& schedule() const { return schedule_; }

  // Replaces the quantitative copy; shape congruence is enforced.
  void set_qk(ModelParams qk);

  std::size_t trainable_scalars() const { return trainable_scalar_count(qk_, schedule_); }

 private:
  ModelArch arch_;
  ModelParams sk_;
  ModelParams qk_;
  Schedule schedule_;
};

// Both copies deep-copied from the pretrained checkpoint; the structural one
// is frozen from here on.
DualCopyModel make_dual_copy(const ModelArch& arch, const ModelParams& pretrained,
                             const Schedule& schedule);

// Masks from the structural copy: 1 exactly where its pre-activation is
// strictly positive.
ActivationMaskSet compute_masks(const DualCopyModel& model, const Tensor& x);

// Forward on the quantitative copy with the supplied gates in place of ReLU:
// h = mask * z, so a negative pre-activation passes through an open gate.
Tensor gated_forward(const DualCopyModel& model, const ActivationMaskSet& masks, const Tensor& x);

struct GatedBackwardResult {
  real loss = 0;
  GradientSet grads;  // quantitative copy only, schedule-enabled layers only
};

GatedBackwardResult gated_backward(const DualCopyModel& model, const ActivationMaskSet& masks,
                                   const Tensor& x, const std::vector<std::size_t>& labels);

// The exact affine map (A, b) with gated_forward(x) == A x + b for every x
// under these masks (batch size 1). A is [num_classes, input_dim].
struct AffineMap {
  Tensor a;
  Tensor b;
};

AffineMap extract_affine(const DualCopyModel& model, const ActivationMaskSet& masks);

// Bundled checkpoint: arch fingerprint, schedule, then both copies.
void save_dualcopy(const DualCopyModel& model, const std::string& path);
// Loads the bundle back; the caller supplies the architecture it expects.
DualCopyModel load_dualcopy(const ModelArch& arch, const std::string& path);

}  // namespace fedsq
