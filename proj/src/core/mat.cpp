#include "core/mat.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "core/ops_count.hpp"

namespace toasync {

Mat::Mat(std::size_t rows, std::size_t cols, std::initializer_list<double> entries)
    : rows_(rows), cols_(cols), data_(entries) {
  if (data_.size() != rows * cols) {
    throw Error(ErrorCode::DimensionMismatch, "entry count does not match matrix shape");
  }
}

Mat Mat::identity(std::size_t n) {
  Mat m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Mat Mat::column(std::initializer_list<double> entries) {
  Mat m(entries.size(), 1);
  std::size_t i = 0;
  for (double v : entries) m(i++, 0) = v;
  return m;
}

Mat Mat::top_rows(std::size_t n) const {
  Mat out(n, cols_);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out(i, j) = (*this)(i, j);
  return out;
}

Mat Mat::bottom_rows(std::size_t n) const {
  Mat out(n, cols_);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out(i, j) = (*this)(rows_ - n + i, j);
  return out;
}

Mat Mat::transposed() const {
  Mat out(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
  return out;
}

double Mat::max_abs() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

Mat operator*(const Mat& a, const Mat& b) {
  if (a.cols() != b.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "matrix product shape mismatch");
  }
  Mat c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  ops::add(2 * a.rows() * a.cols() * b.cols());
  return c;
}

Mat operator+(const Mat& a, const Mat& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "matrix sum shape mismatch");
  }
  Mat c(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j) + b(i, j);
  return c;
}

Mat operator-(const Mat& a, const Mat& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "matrix difference shape mismatch");
  }
  Mat c(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j) - b(i, j);
  return c;
}

Mat operator*(double s, const Mat& a) {
  Mat c(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = s * a(i, j);
  return c;
}

Mat vstack(const Mat& a, const Mat& b) {
  if (a.cols() != b.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "vstack column mismatch");
  }
  Mat c(a.rows() + b.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j);
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) c(a.rows() + i, j) = b(i, j);
  return c;
}

double column_norm(const Mat& a, std::size_t col) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) s += a(i, col) * a(i, col);
  ops::add(2 * a.rows(), 1);
  return std::sqrt(s);
}

QrFactor householder_qr(const Mat& a) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  if (m == 0 || n == 0) {
    throw Error(ErrorCode::InvalidArgument, "householder_qr: empty matrix");
  }
  if (m < n) {
    throw Error(ErrorCode::InvalidArgument, "householder_qr: requires rows >= cols");
  }

  Mat r = a;
  Mat qt = Mat::identity(m);
  std::vector<double> v(m);

  for (std::size_t j = 0; j < n; ++j) {
    double norm_x = 0.0;
    for (std::size_t i = j; i < m; ++i) norm_x += r(i, j) * r(i, j);
    norm_x = std::sqrt(norm_x);
    ops::add(2 * (m - j), 1);
    if (norm_x == 0.0) continue;  // column already zero; rank deficiency

    // v = x + sign(x_0) ||x|| e_0, normalized.
    const double alpha = (r(j, j) >= 0.0) ? norm_x : -norm_x;
    for (std::size_t i = j; i < m; ++i) v[i] = r(i, j);
    v[j] += alpha;
    double norm_v_sq = 0.0;
    for (std::size_t i = j; i < m; ++i) norm_v_sq += v[i] * v[i];
    ops::add(2 * (m - j) + 1);
    if (norm_v_sq == 0.0) continue;
    const double beta = 2.0 / norm_v_sq;

    // Reflect the remaining columns of r.
    for (std::size_t c = j; c < n; ++c) {
      double dot = 0.0;
      for (std::size_t i = j; i < m; ++i) dot += v[i] * r(i, c);
      dot *= beta;
      for (std::size_t i = j; i < m; ++i) r(i, c) -= dot * v[i];
    }
    // Accumulate the reflector into q^T.
    for (std::size_t c = 0; c < m; ++c) {
      double dot = 0.0;
      for (std::size_t i = j; i < m; ++i) dot += v[i] * qt(i, c);
      dot *= beta;
      for (std::size_t i = j; i < m; ++i) qt(i, c) -= dot * v[i];
    }
    ops::add(4 * (m - j) * (n - j) + 4 * (m - j) * m);
  }

  // Subdiagonal entries are zero by construction of the reflectors; write
  // exact zeros so downstream triangular code can rely on it.
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = j + 1; i < m; ++i) r(i, j) = 0.0;

  return QrFactor{qt.transposed(), std::move(r)};
}

Mat apply_qt(const QrFactor& f, const Mat& v) {
  if (v.rows() != f.q.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "apply_qt: row count does not match factor");
  }
  return f.q.transposed() * v;
}

Mat solve_upper_triangular(const Mat& r, const Mat& rhs) {
  const std::size_t n = r.rows();
  if (r.cols() != n) {
    throw Error(ErrorCode::InvalidArgument, "solve_upper_triangular: matrix not square");
  }
  if (rhs.rows() != n) {
    throw Error(ErrorCode::DimensionMismatch, "solve_upper_triangular: rhs row mismatch");
  }

  double max_diag = 0.0;
  for (std::size_t i = 0; i < n; ++i) max_diag = std::max(max_diag, std::abs(r(i, i)));
  for (std::size_t i = 0; i < n; ++i) {
    if (std::abs(r(i, i)) <= kSingularityTol * max_diag) {
      throw SingularTriangularError(
          i, "singular triangular system at diagonal index " + std::to_string(i));
    }
  }

  Mat x(n, rhs.cols());
  for (std::size_t c = 0; c < rhs.cols(); ++c) {
    for (std::size_t ii = n; ii-- > 0;) {
      double s = rhs(ii, c);
      for (std::size_t j = ii + 1; j < n; ++j) s -= r(ii, j) * x(j, c);
      x(ii, c) = s / r(ii, ii);
    }
  }
  ops::add(rhs.cols() * n * n);
  return x;
}

SingularValues2 singular_values_2x2(const Mat& m) {
  if (m.rows() != 2 || m.cols() != 2) {
    throw Error(ErrorCode::InvalidArgument, "singular_values_2x2: matrix must be 2x2");
  }
  // Eigenvalues of m^T m via trace/determinant.
  const double a = m(0, 0), b = m(0, 1), c = m(1, 0), d = m(1, 1);
  const double t = a * a + b * b + c * c + d * d;
  const double det = a * d - b * c;
  const double disc = std::sqrt(std::max(0.0, t * t - 4.0 * det * det));
  const double l1 = 0.5 * (t + disc);
  const double l2 = 0.5 * (t - disc);
  return SingularValues2{std::sqrt(std::max(0.0, l1)), std::sqrt(std::max(0.0, l2))};
}

double cond_2x2(const Mat& m) {
  const SingularValues2 sv = singular_values_2x2(m);
  if (sv.min == 0.0) return std::numeric_limits<double>::infinity();
  return sv.max / sv.min;
}

}  // namespace toasync
