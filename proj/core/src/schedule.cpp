#include "fedsq/schedule.hpp"

#include "fedsq/error.hpp"

namespace fedsq {

void Schedule::validate() const {
  if (trainable.empty()) throw ConfigError("schedule is empty");
  if (!trainable.back()) throw ConfigError("schedule must keep the head trainable");
}

void Schedule::validate_for(const ModelArch& arch) const {
  validate();
  if (trainable.size() != arch.param_layer_count()) {
    throw ConfigError("schedule has " + std::to_string(trainable.size()) +
                      " flags, architecture has " + std::to_string(arch.param_layer_count()) +
                      " parameterized layers");
  }
}

std::size_t Schedule::trainable_layers() const {
  std::size_t n = 0;
  for (bool b : trainable) {
    if (b) ++n;
  }
  return n;
}

bool Schedule::fully_trainable() const {
  return trainable_layers() == trainable.size();
}

std::string Schedule::to_bitstring() const {
  std::string s;
  s.reserve(trainable.size());
  for (bool b : trainable) s.push_back(b ? '1' : '0');
  return s;
}

Schedule Schedule::from_bitstring(const std::string& bits) {
  Schedule s;
  for (char c : bits) {
    if (c != '0' && c != '1') throw FormatError("schedule bitstring must be 0/1, got '" + bits + "'");
    s.trainable.push_back(c == '1');
  }
  s.validate();
  return s;
}

Schedule full_schedule(std::size_t param_layers) {
  Schedule s;
  s.trainable.assign(param_layers, true);
  s.validate();
  return s;
}

std::size_t trainable_scalar_count(const ModelParams& params, const Schedule& schedule) {
  if (schedule.trainable.size() != params.entries.size()) {
    throw ConfigError("schedule does not match the parameter set");
  }
  std::size_t n = 0;
  for (std::size_t k = 0; k < params.entries.size(); ++k) {
    if (schedule.trainable[k]) {
      n += params.entries[k].weights.numel() + params.entries[k].bias.numel();
    }
  }
  return n;
}

}  // namespace fedsq
