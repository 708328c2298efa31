// SPDX-License-Identifier: Apache-2.0

#include "flowsite/diff/array.hpp"

#include <sstream>
#include <stdexcept>

namespace flowsite::diff {

Shape::Shape(std::initializer_list<std::size_t> dims) : Shape(std::vector<std::size_t>(dims)) {}

Shape::Shape(const std::vector<std::size_t>& dims) {
  if (dims.size() > kMaxRank) {
    throw std::invalid_argument("rank " + std::to_string(dims.size()) + " exceeds maximum of 3");
  }
  rank_ = dims.size();
  for (std::size_t i = 0; i < rank_; ++i) dims_[i] = dims[i];
}

std::size_t Shape::numel() const {
  std::size_t n = 1;
  for (std::size_t i = 0; i < rank_; ++i) n *= dims_[i];
  return n;
}

std::vector<std::size_t> Shape::dims() const { return {dims_.begin(), dims_.begin() + rank_}; }

std::string Shape::str() const {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < rank_; ++i) os << (i ? "," : "") << dims_[i];
  os << ']';
  return os.str();
}

bool Shape::operator==(const Shape& other) const {
  if (rank_ != other.rank_) return false;
  for (std::size_t i = 0; i < rank_; ++i) {
    if (dims_[i] != other.dims_[i]) return false;
  }
  return true;
}

Array::Array(Shape s, double fill) : shape(s), data(s.numel(), fill) {}

Array::Array(Shape s, std::vector<double> values) : shape(s), data(std::move(values)) {
  if (data.size() != shape.numel()) {
    throw std::invalid_argument("array of " + std::to_string(data.size()) +
                                " values does not fill shape " + shape.str());
  }
}

Array Array::vector(std::vector<double> values) {
  const std::size_t n = values.size();
  return Array(Shape{n}, std::move(values));
}

Array Array::matrix(std::size_t rows, std::size_t cols, std::vector<double> values) {
  return Array(Shape{rows, cols}, std::move(values));
}

AxisSplit split_at(const Shape& shape, std::size_t axis) {
  if (axis >= shape.rank()) {
    throw std::invalid_argument("axis " + std::to_string(axis) + " out of range for shape " +
                                shape.str());
  }
  AxisSplit s;
  for (std::size_t i = 0; i < axis; ++i) s.outer *= shape[i];
  s.mid = shape[axis];
  for (std::size_t i = axis + 1; i < shape.rank(); ++i) s.inner *= shape[i];
  return s;
}

}  // namespace flowsite::diff
