#pragma once

#include <cstddef>
#include <initializer_list>
#include <vector>

#include "core/errors.hpp"

namespace toasync {

// Dense row-major real matrix. Every matrix in the estimation path is tiny
// (at most a handful of rows and columns); the test oracles reuse the same
// type for moderately sized dense assemblies, so dimensions stay dynamic.
class Mat {
 public:
  Mat() = default;
  Mat(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}
  Mat(std::size_t rows, std::size_t cols, std::initializer_list<double> entries);

  static Mat identity(std::size_t n);
  static Mat column(std::initializer_list<double> entries);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return data_.empty(); }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  Mat top_rows(std::size_t n) const;
  Mat bottom_rows(std::size_t n) const;
  Mat transposed() const;

  double max_abs() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Mat operator*(const Mat& a, const Mat& b);
Mat operator+(const Mat& a, const Mat& b);
Mat operator-(const Mat& a, const Mat& b);
Mat operator*(double s, const Mat& a);

// Rows of a on top of rows of b; column counts must agree.
Mat vstack(const Mat& a, const Mat& b);

double column_norm(const Mat& a, std::size_t col);

// Tolerance below which a triangular diagonal entry counts as a structural
// zero, relative to the largest diagonal magnitude.
inline constexpr double kSingularityTol = 1e-12;

// QR factorization a = q * r with q orthogonal (rows x rows, held
// explicitly) and r of the same shape as a, zero below the diagonal.
struct QrFactor {
  Mat q;
  Mat r;
};

// Householder QR without column pivoting; requires rows >= cols. Rank
// deficiency is not an error here: it shows up as a (near-)zero diagonal
// entry of r for callers to detect.
QrFactor householder_qr(const Mat& a);

// q^T * v for a factor produced by householder_qr; v.rows() must match.
Mat apply_qt(const QrFactor& f, const Mat& v);

// Back-substitution for r * x = rhs with r square upper triangular.
// Throws SingularTriangularError when a diagonal entry is negligible
// relative to the largest one.
Mat solve_upper_triangular(const Mat& r, const Mat& rhs);

// Singular values of a 2x2 matrix, largest first.
struct SingularValues2 {
  double max = 0;
  double min = 0;
};
SingularValues2 singular_values_2x2(const Mat& m);

// 2-norm condition estimate of a 2x2 matrix; +inf when singular.
double cond_2x2(const Mat& m);

}  // namespace toasync
