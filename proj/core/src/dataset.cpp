#include "fedsq/dataset.hpp"

#include <cmath>
#include <utility>

#include "bytes.hpp"
#include "fedsq/error.hpp"
#include "fedsq/rng.hpp"

namespace fedsq {

void Dataset::validate() const {
  if (inputs.size() != labels.size()) {
    throw InputError("dataset has " + std::to_string(inputs.size()) + " inputs and " +
                     std::to_string(labels.size()) + " labels");
  }
  if (class_count == 0) throw InputError("dataset class_count must be positive");
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] >= class_count) {
      throw InputError("label " + std::to_string(labels[i]) + " at sample " + std::to_string(i) +
                       " out of range for " + std::to_string(class_count) + " classes");
    }
    if (!inputs.empty() && !inputs[i].same_shape(inputs[0])) {
      throw InputError("sample " + std::to_string(i) + " shape differs from sample 0");
    }
  }
}

std::string generator_name(Generator g) {
  switch (g) {
    case Generator::GaussianBlobs: return "gaussian_blobs";
    case Generator::ConcentricRings: return "concentric_rings";
    case Generator::ShiftedBlobs: return "shifted_blobs";
  }
  return "?";
}

Generator generator_from_name(const std::string& name) {
  if (name == "gaussian_blobs") return Generator::GaussianBlobs;
  if (name == "concentric_rings") return Generator::ConcentricRings;
  if (name == "shifted_blobs") return Generator::ShiftedBlobs;
  throw ConfigError("unknown generator '" + name + "'");
}

void SyntheticSpec::validate() const {
  if (n_classes < 2) throw ConfigError("synthetic spec needs n_classes >= 2");
  if (noise_sigma < 0.0) throw ConfigError("synthetic spec needs noise_sigma >= 0");
  if (n_samples == 0) throw ConfigError("synthetic spec needs n_samples >= 1");
  if (shape_numel(input_shape) == 0) throw ConfigError("synthetic spec input_shape is empty");
  if (generator == Generator::ConcentricRings && shape_numel(input_shape) < 2) {
    throw ConfigError("concentric_rings needs at least 2 input dimensions");
  }
}

Dataset generate(const SyntheticSpec& spec) {
  spec.validate();
  const std::size_t d = shape_numel(spec.input_shape);
  Rng rng(spec.seed);

  Dataset out;
  out.class_count = spec.n_classes;
  out.inputs.reserve(spec.n_samples);
  out.labels.reserve(spec.n_samples);

  const bool rings = spec.generator == Generator::ConcentricRings;
  // Class centers; blob variants share the layout so shift 0 reproduces the
  // plain blobs stream exactly.
  std::vector<std::vector<double>> centers;
  if (!rings) {
    const double shift = spec.generator == Generator::ShiftedBlobs ? spec.domain_shift : 0.0;
    const double shift_per_dim = shift / std::sqrt(static_cast<double>(d));
    centers.assign(spec.n_classes, std::vector<double>(d));
    for (auto& c : centers) {
      for (auto& v : c) v = 2.0 * rng.normal() + shift_per_dim;
    }
  }

  for (std::size_t i = 0; i < spec.n_samples; ++i) {
    const std::size_t cls = i % spec.n_classes;  // balanced within 1 by construction
    Tensor x = Tensor::zeros(spec.input_shape);
    if (rings) {
      const double radius = 1.0 + 1.5 * static_cast<double>(cls);
      const double theta = 2.0 * 3.14159265358979323846 * rng.uniform();
      x.data[0] = static_cast<real>(radius * std::cos(theta));
      x.data[1] = static_cast<real>(radius * std::sin(theta));
    } else {
      for (std::size_t j = 0; j < d; ++j) x.data[j] = static_cast<real>(centers[cls][j]);
    }
    for (std::size_t j = 0; j < d; ++j) {
      x.data[j] += static_cast<real>(spec.noise_sigma * rng.normal());
    }
    out.inputs.push_back(std::move(x));
    out.labels.push_back(cls);
  }
  return out;
}

namespace {
constexpr char kMagic[9] = "FSQDSET1";
constexpr std::uint32_t kVersion = 1;
}  // namespace

void store(const Dataset& data, const std::string& path) {
  data.validate();
  if (data.size() == 0) throw InputError("refusing to store an empty dataset");
  detail::ByteWriter w(path);
  w.magic(kMagic);
  w.u32(kVersion);
  w.u64(data.size());
  w.u32(static_cast<std::uint32_t>(data.class_count));
  const auto& shape = data.inputs[0].shape;
  w.u32(static_cast<std::uint32_t>(shape.size()));
  for (std::size_t dim : shape) w.u64(dim);
  for (const Tensor& t : data.inputs) {
    for (real v : t.data) w.f64(static_cast<double>(v));
  }
  for (std::size_t l : data.labels) w.u32(static_cast<std::uint32_t>(l));
  w.close();
}

Dataset load(const std::string& path) {
  detail::ByteReader r(path);
  r.magic(kMagic);
  const std::uint32_t version = r.u32();
  if (version != kVersion) r.fail("unsupported version " + std::to_string(version));
  const std::uint64_t count = r.u64();
  if (count == 0) r.fail("declared sample count is zero");
  Dataset out;
  out.class_count = r.u32();
  const std::uint32_t rank = r.u32();
  if (rank == 0 || rank > 8) r.fail("implausible input rank " + std::to_string(rank));
  std::vector<std::size_t> shape(rank);
  for (auto& d : shape) {
    d = r.u64();
    if (d == 0) r.fail("zero input dimension");
  }
  const std::size_t numel = shape_numel(shape);
  out.inputs.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    std::vector<real> data(numel);
    for (auto& v : data) v = static_cast<real>(r.f64());
    out.inputs.emplace_back(shape, std::move(data));
  }
  out.labels.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    const std::uint32_t l = r.u32();
    if (l >= out.class_count) r.fail("label " + std::to_string(l) + " out of range");
    out.labels.push_back(l);
  }
  r.expect_eof();
  return out;
}

std::pair<Dataset, Dataset> split_dataset(const Dataset& data, std::size_t n_head) {
  if (n_head > data.size()) throw InputError("split point beyond dataset size");
  Dataset head, tail;
  head.class_count = tail.class_count = data.class_count;
  head.inputs.assign(data.inputs.begin(), data.inputs.begin() + static_cast<std::ptrdiff_t>(n_head));
  head.labels.assign(data.labels.begin(), data.labels.begin() + static_cast<std::ptrdiff_t>(n_head));
  tail.inputs.assign(data.inputs.begin() + static_cast<std::ptrdiff_t>(n_head), data.inputs.end());
  tail.labels.assign(data.labels.begin() + static_cast<std::ptrdiff_t>(n_head), data.labels.end());
  return {std::move(head), std::move(tail)};
}

Tensor stack_batch(const Dataset& data, const std::vector<std::size_t>& indices,
                   std::size_t begin, std::size_t count) {
  if (count == 0 || begin + count > indices.size()) {
    throw InputError("batch window out of range");
  }
  std::vector<std::size_t> shape = data.inputs[indices[begin]].shape;
  shape.insert(shape.begin(), count);
  Tensor out = Tensor::zeros(shape);
  const std::size_t stride = data.inputs[indices[begin]].numel();
  for (std::size_t i = 0; i < count; ++i) {
    const Tensor& src = data.inputs[indices[begin + i]];
    std::copy(src.data.begin(), src.data.end(), out.data.begin() + static_cast<std::ptrdiff_t>(i * stride));
  }
  return out;
}

std::vector<std::size_t> batch_labels(const Dataset& data, const std::vector<std::size_t>& indices,
                                      std::size_t begin, std::size_t count) {
  std::vector<std::size_t> out(count);
  for (std::size_t i = 0; i < count; ++i) out[i] = data.labels[indices[begin + i]];
  return out;
}

}  // namespace fedsq
