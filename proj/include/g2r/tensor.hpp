#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace g2r {

// Dense row-major tensor of 64-bit reals, rank 1 or 2 in practice. Values
// are validated finite at creation; an op that would produce NaN/Inf
// surfaces as an exception instead of a silent poison value.
class Tensor {
 public:
  Tensor() = default;
  Tensor(std::vector<int> shape, std::vector<double> values);

  static Tensor zeros(std::vector<int> shape);
  static Tensor scalar(double v) { return Tensor({1}, {v}); }

  const std::vector<int>& shape() const { return shape_; }
  int rank() const { return static_cast<int>(shape_.size()); }
  std::size_t size() const { return values_.size(); }

  int rows() const { return shape_.empty() ? 0 : shape_[0]; }
  int cols() const { return rank() == 2 ? shape_[1] : 1; }

  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }
  double at(int r, int c) const { return values_[static_cast<std::size_t>(r) * cols() + c]; }
  double& at(int r, int c) { return values_[static_cast<std::size_t>(r) * cols() + c]; }

  double* data() { return values_.data(); }
  const double* data() const { return values_.data(); }

  bool same_shape(const Tensor& other) const { return shape_ == other.shape_; }
  std::string shape_string() const;

  // Single entry of a scalar (shape {1}) tensor.
  double item() const;

 private:
  std::vector<int> shape_;
  std::vector<double> values_;
};

}  // namespace g2r
