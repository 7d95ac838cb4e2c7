#pragma once

// Minimal dense matrix/vector plumbing over exact integers.  Matrices here
// are tiny (block dimensions), so everything is row-major std::vector based.

#include "hmsched/numeric.hpp"

#include <cstddef>
#include <initializer_list>

namespace hmsched {

class IntMatrix {
 public:
  IntMatrix() : rows_(0), cols_(0) {}
  IntMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, Int(0)) {}
  IntMatrix(std::initializer_list<std::initializer_list<long long>> init) {
    rows_ = init.size();
    cols_ = rows_ ? init.begin()->size() : 0;
    data_.reserve(rows_ * cols_);
    for (const auto& row : init) {
      require(row.size() == cols_, "IntMatrix: ragged initializer");
      for (long long v : row) data_.emplace_back(v);
    }
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Int& at(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Int& at(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  IntVec row(std::size_t i) const {
    return IntVec(data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                  data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
  }

  bool operator==(const IntMatrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
  }

  // Largest absolute entry.
  Int inf_norm() const {
    Int m = 0;
    for (const Int& v : data_) m = int_max(m, int_abs(v));
    return m;
  }

 private:
  std::size_t rows_, cols_;
  IntVec data_;
};

inline IntVec mat_vec(const IntMatrix& A, const IntVec& x) {
  require(A.cols() == x.size(), "mat_vec: dimension mismatch");
  IntVec y(A.rows(), Int(0));
  for (std::size_t i = 0; i < A.rows(); ++i)
    for (std::size_t j = 0; j < A.cols(); ++j) y[i] += A.at(i, j) * x[j];
  return y;
}

// alpha^T A for rational row vector alpha: result has one entry per column.
inline RatVec vec_mat(const RatVec& alpha, const IntMatrix& A) {
  require(alpha.size() == A.rows(), "vec_mat: dimension mismatch");
  RatVec y(A.cols(), Rat(0));
  for (std::size_t i = 0; i < A.rows(); ++i)
    for (std::size_t j = 0; j < A.cols(); ++j) y[j] += alpha[i] * A.at(i, j);
  return y;
}

inline Rat dot(const RatVec& a, const IntVec& b) {
  require(a.size() == b.size(), "dot: dimension mismatch");
  Rat s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline Rat dot(const RatVec& a, const RatVec& b) {
  require(a.size() == b.size(), "dot: dimension mismatch");
  Rat s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline Int dot(const IntVec& a, const IntVec& b) {
  require(a.size() == b.size(), "dot: dimension mismatch");
  Int s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline IntVec vec_add(const IntVec& a, const IntVec& b) {
  require(a.size() == b.size(), "vec_add: dimension mismatch");
  IntVec c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i] + b[i];
  return c;
}

inline IntVec vec_sub(const IntVec& a, const IntVec& b) {
  require(a.size() == b.size(), "vec_sub: dimension mismatch");
  IntVec c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i] - b[i];
  return c;
}

inline IntVec vec_scale(const Int& s, const IntVec& a) {
  IntVec c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = s * a[i];
  return c;
}

inline Int vec_inf_norm(const IntVec& a) {
  Int m = 0;
  for (const Int& v : a) m = int_max(m, int_abs(v));
  return m;
}

inline Int vec_one_norm(const IntVec& a) {
  Int s = 0;
  for (const Int& v : a) s += int_abs(v);
  return s;
}

inline bool is_zero(const IntVec& a) {
  for (const Int& v : a)
    if (v != 0) return false;
  return true;
}

}  // namespace hmsched
