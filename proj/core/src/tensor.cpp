#include "fedsq/tensor.hpp"

#include <cmath>
#include <sstream>

#include "fedsq/error.hpp"

namespace fedsq {

std::size_t shape_numel(const std::vector<std::size_t>& shape) {
  std::size_t n = 1;
  for (std::size_t d : shape) n *= d;
  return shape.empty() ? 0 : n;
}

std::string shape_str(const std::vector<std::size_t>& shape) {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) os << ",";
    os << shape[i];
  }
  os << "]";
  return os.str();
}

Tensor::Tensor(std::vector<std::size_t> shape_in, std::vector<real> data_in)
    : shape(std::move(shape_in)), data(std::move(data_in)) {
  for (std::size_t d : shape) {
    if (d == 0) throw ConfigError("tensor dimensions must be positive, got " + shape_str(shape));
  }
  if (shape_numel(shape) != data.size()) {
    throw ConfigError("tensor shape " + shape_str(shape) + " does not match payload of " +
                      std::to_string(data.size()) + " scalars");
  }
}

Tensor Tensor::zeros(std::vector<std::size_t> shape) {
  const std::size_t n = shape_numel(shape);
  return Tensor(std::move(shape), std::vector<real>(n, real{0}));
}

Tensor Tensor::full(std::vector<std::size_t> shape, real value) {
  const std::size_t n = shape_numel(shape);
  return Tensor(std::move(shape), std::vector<real>(n, value));
}

bool Tensor::all_finite() const {
  for (real v : data) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

}  // namespace fedsq
