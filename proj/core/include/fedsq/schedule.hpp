#pragma once

#include <string>
#include <vector>

#include "fedsq/model.hpp"

namespace fedsq {

// Per-layer freeze/train policy over parameterized layers; the last flag is
// the head, which is always trainable.
struct Schedule {
  std::vector<bool> trainable;

  void validate() const;
  void validate_for(const ModelArch& arch) const;
  std::size_t trainable_layers() const;
  bool fully_trainable() const;

  // "01…1" bitstring, one char per parameterized layer, head last.
  std::string to_bitstring() const;
  static Schedule from_bitstring(const std::string& bits);
};

Schedule full_schedule(std::size_t param_layers);

// Scalars stepped by SGD under this schedule.
std::size_t trainable_scalar_count(const ModelParams& params, const Schedule& schedule);

}  // namespace fedsq
