#include "gaussch/gaussian_core.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace gaussch {

namespace {

constexpr double kSymmetryTol = 1e-12;

// Jacobi eigenvalues carry an absolute error of a few ulps of the largest
// entry; strongly squeezed two-mode states reach entries of order e^{2r}.
constexpr double kRoundoffUlps = 64.0;

double psd_floor(const VarianceMatrix& v, const Tolerances& tol) {
  if (v.dim() == 2) return -tol.psd;
  const double roundoff = kRoundoffUlps * std::numeric_limits<double>::epsilon() * v.padded().max_abs();
  return -std::fmax(tol.psd, roundoff);
}

double mirrored_min_eigenvalue(const Mat4& v, int mirrored_row) {
  Mat4 lambda = Mat4::identity();
  lambda(mirrored_row, mirrored_row) = -1.0;
  const Mat4 vt = lambda * v * lambda;
  return hermitian_min_eigenvalue(vt, symplectic_form(2));
}

}  // namespace

VarianceMatrix::VarianceMatrix(const SymMat2& v) : dim_(2), e_() {
  e_(0, 0) = v.xx;
  e_(0, 1) = e_(1, 0) = v.xy;
  e_(1, 1) = v.yy;
  if (!e_.is_finite()) throw std::invalid_argument("VarianceMatrix: non-finite entry");
}

VarianceMatrix::VarianceMatrix(const Mat4& v) : dim_(4), e_(v) {
  if (!v.is_finite()) throw std::invalid_argument("VarianceMatrix: non-finite entry");
  if (asymmetry(v) > kSymmetryTol * std::fmax(1.0, v.max_abs()))
    throw std::invalid_argument("VarianceMatrix: matrix is not symmetric");
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) e_(i, j) = e_(j, i) = 0.5 * (v(i, j) + v(j, i));
}

SymMat2 VarianceMatrix::one_mode() const {
  if (dim_ != 2) throw std::invalid_argument("VarianceMatrix: expected a one-mode state");
  return {e_(0, 0), e_(0, 1), e_(1, 1)};
}

const Mat4& VarianceMatrix::two_mode() const {
  if (dim_ != 4) throw std::invalid_argument("VarianceMatrix: expected a two-mode state");
  return e_;
}

Mat4 symplectic_form(int modes) {
  if (modes != 1 && modes != 2) throw std::invalid_argument("symplectic_form: 1 or 2 modes");
  Mat4 s;
  for (int m = 0; m < modes; ++m) {
    s(2 * m, 2 * m + 1) = 1.0;
    s(2 * m + 1, 2 * m) = -1.0;
  }
  return s;
}

double uncertainty_min_eigenvalue(const VarianceMatrix& v) {
  if (v.dim() == 2) return hermitian_min_eigenvalue(v.one_mode().full(), symplectic_unit());
  return hermitian_min_eigenvalue(v.two_mode(), symplectic_form(2));
}

bool is_valid_state(const VarianceMatrix& v, const Tolerances& tol) {
  return uncertainty_min_eigenvalue(v) >= psd_floor(v, tol);
}

bool gaussian_is_classical(const VarianceMatrix& v, const Tolerances& tol) {
  const SymMat2 m = v.one_mode();
  if (!is_valid_state(v, tol)) throw std::invalid_argument("gaussian_is_classical: invalid state");
  return min_eigenvalue(m - SymMat2::identity()) >= -tol.psd;
}

SymMat2 squeezed_vacuum(const SqueezeParam& sq) {
  return congruence(SymMat2::diag(std::exp(2.0 * sq.r), std::exp(-2.0 * sq.r)),
                    rotation(sq.theta).transposed());
}

VarianceMatrix tmsv_variance(const SqueezeParam& sq) {
  const double c = sq.c2r(), s = sq.s2r();
  Mat4 v = c * Mat4::identity();
  // sigma_1 (x) sigma_3 puts sigma_3 on the off-diagonal blocks.
  v(0, 2) = v(2, 0) = s;
  v(1, 3) = v(3, 1) = -s;
  return VarianceMatrix(v);
}

VarianceMatrix apply_channel_one_side(const ChannelXY& ch, const VarianceMatrix& v,
                                      const Tolerances& tol) {
  if (!is_valid_state(v, tol)) throw std::invalid_argument("apply_channel_one_side: invalid state");
  Mat4 xt = Mat4::identity();
  Mat4 yt;
  const Mat2 y = ch.Y.full();
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      xt(i, j) = ch.X(i, j);
      yt(i, j) = y(i, j);
    }
  Mat4 out = xt.transposed() * v.two_mode() * xt + yt;
  // Re-symmetrise exactly; the product is symmetric up to rounding.
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) out(i, j) = out(j, i) = 0.5 * (out(i, j) + out(j, i));
  return VarianceMatrix(out);
}

bool is_ppt_separable(const VarianceMatrix& v, const Tolerances& tol) {
  if (!is_valid_state(v, tol)) throw std::invalid_argument("is_ppt_separable: invalid state");
  return mirrored_min_eigenvalue(v.two_mode(), 3) >= psd_floor(v, tol);
}

bool is_ppt_separable_mirror_a(const VarianceMatrix& v, const Tolerances& tol) {
  if (!is_valid_state(v, tol)) throw std::invalid_argument("is_ppt_separable: invalid state");
  return mirrored_min_eigenvalue(v.two_mode(), 1) >= psd_floor(v, tol);
}

bool symplectic_check(const Mat2& s, const Tolerances& tol) {
  return std::fabs(det(s) - 1.0) <= tol.alg;
}

}  // namespace gaussch
