#include "fedsq/checkpoint.hpp"

#include <bit>

#include "params_io.hpp"

namespace fedsq {

namespace {
constexpr char kMagic[9] = "FSQCKPT1";
constexpr std::uint32_t kVersion = 1;
}  // namespace

void save_params(const ModelParams& params, const std::string& path) {
  detail::ByteWriter w(path);
  w.magic(kMagic);
  w.u32(kVersion);
  detail::write_param_block(w, params);
  w.close();
}

ModelParams load_params(const std::string& path) {
  detail::ByteReader r(path);
  r.magic(kMagic);
  const std::uint32_t version = r.u32();
  if (version != kVersion) r.fail("unsupported version " + std::to_string(version));
  ModelParams params = detail::read_param_block(r);
  r.expect_eof();
  return params;
}

std::uint64_t params_digest(const ModelParams& params) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  auto feed = [&h](std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      h ^= (v >> (8 * i)) & 0xff;
      h *= 0x100000001b3ull;
    }
  };
  feed(params.arch_id);
  for (const ParamEntry& e : params.entries) {
    feed(e.layer);
    for (const Tensor* t : {&e.weights, &e.bias}) {
      for (std::size_t d : t->shape) feed(d);
      for (real v : t->data) feed(std::bit_cast<std::uint64_t>(static_cast<double>(v)));
    }
  }
  return h;
}

}  // namespace fedsq
