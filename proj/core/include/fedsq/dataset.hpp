#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fedsq/tensor.hpp"

namespace fedsq {

struct Dataset {
  std::vector<Tensor> inputs;  // each of input_shape, no batch axis
  std::vector<std::size_t> labels;
  std::size_t class_count = 0;

  std::size_t size() const { return inputs.size(); }
  void validate() const;
};

enum class Generator { GaussianBlobs, ConcentricRings, ShiftedBlobs };

std::string generator_name(Generator g);
Generator generator_from_name(const std::string& name);

struct SyntheticSpec {
  Generator generator = Generator::GaussianBlobs;
  double domain_shift = 0.0;  // ShiftedBlobs: translation applied to every class center
  std::size_t n_samples = 0;
  std::size_t n_classes = 2;
  std::vector<std::size_t> input_shape;
  double noise_sigma = 0.1;
  std::uint64_t seed = 0;

  void validate() const;
};

// Deterministic synthetic classification data; classes balanced within 1.
Dataset generate(const SyntheticSpec& spec);

// Versioned little-endian binary dataset file; store/load round-trip
// bit-exactly. Layout documented in the README.
void store(const Dataset& data, const std::string& path);
Dataset load(const std::string& path);

// Deterministic contiguous split: first n_head samples and the rest.
std::pair<Dataset, Dataset> split_dataset(const Dataset& data, std::size_t n_head);

// Batch assembly from dataset indices.
Tensor stack_batch(const Dataset& data, const std::vector<std::size_t>& indices,
                   std::size_t begin, std::size_t count);
std::vector<std::size_t> batch_labels(const Dataset& data, const std::vector<std::size_t>& indices,
                                      std::size_t begin, std::size_t count);

}  // namespace fedsq
