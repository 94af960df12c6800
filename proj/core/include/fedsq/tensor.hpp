#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace fedsq {

#ifdef FEDSQ_REAL_FLOAT
using real = float;
#else
using real = double;
#endif

std::size_t shape_numel(const std::vector<std::size_t>& shape);
std::string shape_str(const std::vector<std::size_t>& shape);

// Dense n-dimensional value carrier, row-major.
struct Tensor {
  std::vector<std::size_t> shape;
  std::vector<real> data;

  Tensor() = default;
  Tensor(std::vector<std::size_t> shape_in, std::vector<real> data_in);

  static Tensor zeros(std::vector<std::size_t> shape);
  static Tensor full(std::vector<std::size_t> shape, real value);

  std::size_t numel() const { return data.size(); }
  bool same_shape(const Tensor& other) const { return shape == other.shape; }
  bool all_finite() const;

  real& operator[](std::size_t i) { return data[i]; }
  real operator[](std::size_t i) const { return data[i]; }
};

}  // namespace fedsq
