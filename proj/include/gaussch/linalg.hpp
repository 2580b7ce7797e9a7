#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <stdexcept>

namespace gaussch {

/// Dense real N x N matrix, row-major.
template <std::size_t N>
class Matrix {
 public:
  constexpr Matrix() : a_{} {}

  /// Row-major initializer; must contain exactly N*N values.
  Matrix(std::initializer_list<double> rows) : a_{} {
    if (rows.size() != N * N) throw std::invalid_argument("Matrix: wrong number of entries");
    std::size_t k = 0;
    for (double v : rows) a_[k++] = v;
  }

  static constexpr Matrix identity() {
    Matrix m;
    for (std::size_t i = 0; i < N; ++i) m.a_[i * N + i] = 1.0;
    return m;
  }

  static constexpr Matrix diagonal(const std::array<double, N>& d) {
    Matrix m;
    for (std::size_t i = 0; i < N; ++i) m.a_[i * N + i] = d[i];
    return m;
  }

  static constexpr std::size_t size() { return N; }

  constexpr double& operator()(std::size_t i, std::size_t j) { return a_[i * N + j]; }
  constexpr double operator()(std::size_t i, std::size_t j) const { return a_[i * N + j]; }

  constexpr Matrix transposed() const {
    Matrix t;
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t j = 0; j < N; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  Matrix& operator+=(const Matrix& o) {
    for (std::size_t k = 0; k < N * N; ++k) a_[k] += o.a_[k];
    return *this;
  }
  Matrix& operator-=(const Matrix& o) {
    for (std::size_t k = 0; k < N * N; ++k) a_[k] -= o.a_[k];
    return *this;
  }
  Matrix& operator*=(double s) {
    for (double& v : a_) v *= s;
    return *this;
  }

  friend Matrix operator+(Matrix l, const Matrix& r) { return l += r; }
  friend Matrix operator-(Matrix l, const Matrix& r) { return l -= r; }
  friend Matrix operator*(Matrix m, double s) { return m *= s; }
  friend Matrix operator*(double s, Matrix m) { return m *= s; }

  friend Matrix operator*(const Matrix& l, const Matrix& r) {
    Matrix p;
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t k = 0; k < N; ++k) {
        const double lik = l(i, k);
        for (std::size_t j = 0; j < N; ++j) p(i, j) += lik * r(k, j);
      }
    return p;
  }

  /// Largest absolute entry.
  double max_abs() const {
    double m = 0.0;
    for (double v : a_) m = std::fmax(m, std::fabs(v));
    return m;
  }

  double frobenius() const {
    double s = 0.0;
    for (double v : a_) s += v * v;
    return std::sqrt(s);
  }

  bool is_finite() const {
    for (double v : a_)
      if (!std::isfinite(v)) return false;
    return true;
  }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::array<double, N * N> a_;
};

using Mat2 = Matrix<2>;
using Mat4 = Matrix<4>;

template <std::size_t N>
double max_abs_diff(const Matrix<N>& l, const Matrix<N>& r) {
  return (l - r).max_abs();
}

template <std::size_t N>
double asymmetry(const Matrix<N>& m) {
  double d = 0.0;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = i + 1; j < N; ++j) d = std::fmax(d, std::fabs(m(i, j) - m(j, i)));
  return d;
}

inline double det(const Mat2& m) { return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0); }

/// Inverse of a 2x2 matrix; throws on exact singularity.
inline Mat2 inverse(const Mat2& m) {
  const double d = det(m);
  if (d == 0.0) throw std::domain_error("inverse: singular 2x2 matrix");
  return Mat2{m(1, 1) / d, -m(0, 1) / d, -m(1, 0) / d, m(0, 0) / d};
}

/// Counter-clockwise rotation by theta.
inline Mat2 rotation(double theta) {
  const double c = std::cos(theta), s = std::sin(theta);
  return Mat2{c, -s, s, c};
}

/// Pauli sigma_3 = diag(1, -1).
inline Mat2 pauli_z() { return Mat2{1.0, 0.0, 0.0, -1.0}; }

/// Pauli sigma_1 (swap).
inline Mat2 pauli_x() { return Mat2{0.0, 1.0, 1.0, 0.0}; }

/// i * sigma_2 = [[0, 1], [-1, 0]], the single-mode symplectic form.
inline Mat2 symplectic_unit() { return Mat2{0.0, 1.0, -1.0, 0.0}; }

/// Real symmetric 2x2 matrix stored by its three independent entries.
struct SymMat2 {
  double xx = 0.0;
  double xy = 0.0;
  double yy = 0.0;

  static SymMat2 identity() { return {1.0, 0.0, 1.0}; }
  static SymMat2 diag(double a, double b) { return {a, 0.0, b}; }

  /// Symmetric part of m; callers that care about asymmetry check it first.
  static SymMat2 from(const Mat2& m) { return {m(0, 0), 0.5 * (m(0, 1) + m(1, 0)), m(1, 1)}; }

  Mat2 full() const { return Mat2{xx, xy, xy, yy}; }
  double det() const { return xx * yy - xy * xy; }
  double trace() const { return xx + yy; }

  friend SymMat2 operator+(SymMat2 l, const SymMat2& r) { return {l.xx + r.xx, l.xy + r.xy, l.yy + r.yy}; }
  friend SymMat2 operator-(SymMat2 l, const SymMat2& r) { return {l.xx - r.xx, l.xy - r.xy, l.yy - r.yy}; }
  friend SymMat2 operator*(double s, SymMat2 m) { return {s * m.xx, s * m.xy, s * m.yy}; }
  friend bool operator==(const SymMat2&, const SymMat2&) = default;
};

/// Congruence M^T A M, returned symmetric by construction.
inline SymMat2 congruence(const SymMat2& a, const Mat2& m) {
  return SymMat2::from(m.transposed() * a.full() * m);
}

/// Eigen-decomposition of a symmetric 2x2 matrix.
struct SymEigen2 {
  double hi;  ///< larger eigenvalue
  double lo;  ///< smaller eigenvalue
  Mat2 rotation;  ///< columns are the eigenvectors for (hi, lo); det = +1
};

/// Closed-form eigenpairs. Equal eigenvalues with zero off-diagonal give the
/// identity rotation.
inline SymEigen2 eigen_sym(const SymMat2& m) {
  const double mean = 0.5 * (m.xx + m.yy);
  const double half = 0.5 * (m.xx - m.yy);
  const double rad = std::hypot(half, m.xy);
  const double theta = 0.5 * std::atan2(m.xy, half);
  return {mean + rad, mean - rad, gaussch::rotation(theta)};
}

inline double min_eigenvalue(const SymMat2& m) { return eigen_sym(m).lo; }

/// Smallest eigenvalue of the 2x2 Hermitian matrix re + i*im, where re is
/// symmetric and im antisymmetric.
inline double hermitian_min_eigenvalue(const Mat2& re, const Mat2& im) {
  const double mean = 0.5 * (re(0, 0) + re(1, 1));
  const double half = 0.5 * (re(0, 0) - re(1, 1));
  const double off_re = 0.5 * (re(0, 1) + re(1, 0));
  const double off_im = 0.5 * (im(0, 1) - im(1, 0));
  return mean - std::sqrt(half * half + off_re * off_re + off_im * off_im);
}

/// Eigenvalues of a real symmetric matrix by cyclic Jacobi rotations, sorted
/// ascending. Stops once the off-diagonal Frobenius norm falls below
/// 1e-13 of the full norm.
template <std::size_t N>
std::array<double, N> jacobi_eigenvalues(Matrix<N> a) {
  const double scale = a.frobenius();
  std::array<double, N> ev{};
  if (scale == 0.0) return ev;
  const double stop = 1e-13 * scale;
  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < N; ++p)
      for (std::size_t q = p + 1; q < N; ++q) off += 2.0 * a(p, q) * a(p, q);
    if (std::sqrt(off) <= stop) break;
    for (std::size_t p = 0; p < N; ++p) {
      for (std::size_t q = p + 1; q < N; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double tau = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = std::copysign(1.0, tau) / (std::fabs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        for (std::size_t k = 0; k < N; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < N; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
      }
    }
  }
  for (std::size_t i = 0; i < N; ++i) ev[i] = a(i, i);
  for (std::size_t i = 1; i < N; ++i)
    for (std::size_t j = i; j > 0 && ev[j - 1] > ev[j]; --j) std::swap(ev[j - 1], ev[j]);
  return ev;
}

/// Smallest eigenvalue of the Hermitian matrix re + i*im (re symmetric, im
/// antisymmetric), via the real symmetric embedding [[re, -im], [im, re]].
template <std::size_t N>
double hermitian_min_eigenvalue(const Matrix<N>& re, const Matrix<N>& im) {
  Matrix<2 * N> big;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) {
      big(i, j) = re(i, j);
      big(i + N, j + N) = re(i, j);
      big(i, j + N) = -im(i, j);
      big(i + N, j) = im(i, j);
    }
  return jacobi_eigenvalues(big)[0];
}

/// Singular values (largest first) of a 2x2 matrix.
inline std::array<double, 2> singular_values(const Mat2& m) {
  const SymEigen2 e = eigen_sym(SymMat2::from(m.transposed() * m));
  const double s1 = std::sqrt(std::fmax(e.hi, 0.0));
  // s1 * s2 = |det m| is more accurate than sqrt(lo) for the small one.
  const double s2 = s1 > 0.0 ? std::fabs(det(m)) / s1 : 0.0;
  return {s1, s2};
}

/// SVD with proper rotations: m = U diag(s1, +-s2) W^T, det U = det W = 1.
/// The sign of the second singular value carries sign(det m).
struct RotationSvd {
  Mat2 u;
  Mat2 w;
  double s1;
  double s2;  ///< signed: s1 * s2 = det m
};

inline RotationSvd rotation_svd(const Mat2& m) {
  // W diagonalises m^T m; the rotation from eigen_sym already has det +1.
  const SymEigen2 e = eigen_sym(SymMat2::from(m.transposed() * m));
  const Mat2 w = e.rotation;
  const Mat2 mw = m * w;  // columns: s1*u1, s2*u2
  const double s1 = std::hypot(mw(0, 0), mw(1, 0));
  Mat2 u = Mat2::identity();
  if (s1 > 0.0) {
    const double c = mw(0, 0) / s1, s = mw(1, 0) / s1;
    u = Mat2{c, -s, s, c};
  }
  const double s2 = s1 > 0.0 ? det(m) / s1 : 0.0;
  return {u, w, s1, s2};
}

}  // namespace gaussch
