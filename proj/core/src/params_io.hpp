#pragma once

#include "bytes.hpp"
#include "fedsq/model.hpp"

namespace fedsq::detail {

inline void write_param_block(ByteWriter& w, const ModelParams& params) {
  w.u64(params.arch_id);
  w.u32(static_cast<std::uint32_t>(params.entries.size()));
  for (const ParamEntry& e : params.entries) {
    w.u64(e.layer);
    for (const Tensor* t : {&e.weights, &e.bias}) {
      w.u32(static_cast<std::uint32_t>(t->shape.size()));
      for (std::size_t d : t->shape) w.u64(d);
      for (real v : t->data) w.f64(static_cast<double>(v));
    }
  }
}

inline ModelParams read_param_block(ByteReader& r) {
  ModelParams params;
  params.arch_id = r.u64();
  const std::uint32_t count = r.u32();
  for (std::uint32_t k = 0; k < count; ++k) {
    ParamEntry e;
    e.layer = r.u64();
    for (Tensor* t : {&e.weights, &e.bias}) {
      const std::uint32_t rank = r.u32();
      if (rank == 0 || rank > 8) r.fail("implausible tensor rank " + std::to_string(rank));
      std::vector<std::size_t> shape(rank);
      std::size_t numel = 1;
      for (auto& d : shape) {
        d = r.u64();
        if (d == 0) r.fail("zero tensor dimension");
        numel *= d;
      }
      std::vector<real> data(numel);
      for (auto& v : data) v = static_cast<real>(r.f64());
      *t = Tensor(std::move(shape), std::move(data));
    }
    if (!params.entries.empty() && e.layer <= params.entries.back().layer) {
      r.fail("layer indices out of order");
    }
    params.entries.push_back(std::move(e));
  }
  return params;
}

}  // namespace fedsq::detail
