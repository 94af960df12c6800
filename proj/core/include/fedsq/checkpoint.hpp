#pragma once

#include <string>

#include "fedsq/model.hpp"

namespace fedsq {

// Versioned binary checkpoint: arch fingerprint, layer-ordered tensor shapes,
// row-major 64-bit little-endian payloads. Round-trips bit-exactly.
void save_params(const ModelParams& params, const std::string& path);
ModelParams load_params(const std::string& path);

// Stable content digest of a parameter set (FNV-1a over the encoded scalars);
// used to assert freeze contracts.
std::uint64_t params_digest(const ModelParams& params);

}  // namespace fedsq
