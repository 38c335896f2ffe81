#include "g2r/tensor.hpp"

#include <cmath>
#include <stdexcept>

namespace g2r {

namespace {
std::size_t shape_product(const std::vector<int>& shape) {
  std::size_t p = 1;
  for (int d : shape) {
    if (d < 0) throw std::invalid_argument("negative tensor dimension");
    p *= static_cast<std::size_t>(d);
  }
  return p;
}
}  // namespace

Tensor::Tensor(std::vector<int> shape, std::vector<double> values)
    : shape_(std::move(shape)), values_(std::move(values)) {
  if (shape_.empty() || shape_.size() > 2)
    throw std::invalid_argument("tensor rank must be 1 or 2");
  if (values_.size() != shape_product(shape_))
    throw std::invalid_argument("tensor value count does not match shape " +
                                shape_string());
  for (double v : values_)
    if (!std::isfinite(v))
      throw std::invalid_argument("tensor rejects non-finite value");
}

Tensor Tensor::zeros(std::vector<int> shape) {
  std::size_t n = shape_product(shape);
  return Tensor(std::move(shape), std::vector<double>(n, 0.0));
}

std::string Tensor::shape_string() const {
  std::string s = "[";
  for (std::size_t i = 0; i < shape_.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(shape_[i]);
  }
  return s + "]";
}

double Tensor::item() const {
  if (size() != 1)
    throw std::invalid_argument("item() requires a single-entry tensor, got " +
                                shape_string());
  return values_[0];
}

}  // namespace g2r
