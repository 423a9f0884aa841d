#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "cgbench/errors.hpp"

namespace cgbench {

using index_t = std::int64_t;

// Contiguous vector of IEEE doubles. Construction from external input goes
// through from_values(), which rejects NaN/Inf entries; internal arithmetic
// is unchecked.
class DenseVector {
 public:
  DenseVector() = default;
  explicit DenseVector(index_t n) : data_(static_cast<std::size_t>(n), 0.0) {}
  DenseVector(index_t n, double fill) : data_(static_cast<std::size_t>(n), fill) {}

  static DenseVector from_values(std::vector<double> values) {
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (!std::isfinite(values[i])) {
        throw std::invalid_argument("DenseVector: non-finite entry at index " +
                                    std::to_string(i));
      }
    }
    DenseVector v;
    v.data_ = std::move(values);
    return v;
  }

  // Unchecked wrap, for values produced by our own arithmetic.
  static DenseVector wrap(std::vector<double> values) {
    DenseVector v;
    v.data_ = std::move(values);
    return v;
  }

  index_t size() const { return static_cast<index_t>(data_.size()); }
  bool empty() const { return data_.empty(); }

  double operator[](index_t i) const { return data_[static_cast<std::size_t>(i)]; }
  double& operator[](index_t i) { return data_[static_cast<std::size_t>(i)]; }

  const double* data() const { return data_.data(); }
  double* data() { return data_.data(); }

  const std::vector<double>& values() const { return data_; }

  auto begin() const { return data_.begin(); }
  auto end() const { return data_.end(); }

  bool operator==(const DenseVector& other) const = default;

 private:
  std::vector<double> data_;
};

inline void require_same_length(const DenseVector& x, const DenseVector& y,
                                const char* op) {
  if (x.size() != y.size()) {
    throw DimensionError(std::string(op) + ": length mismatch (" +
                         std::to_string(x.size()) + " vs " +
                         std::to_string(y.size()) + ")");
  }
}

}  // namespace cgbench
