#pragma once

#include <array>
#include <cmath>

#include "gaussch/channel_xy.hpp"
#include "gaussch/linalg.hpp"
#include "gaussch/tolerances.hpp"

namespace gaussch {

/// Second-moment matrix of a zero-mean Gaussian state on one or two modes.
///
/// Phase-space ordering is (q1, p1, q2, p2) and the vacuum is the identity,
/// so the uncertainty principle reads V + i*Sigma >= 0.
class VarianceMatrix {
 public:
  /// One-mode state.
  explicit VarianceMatrix(const SymMat2& v);
  /// Two-mode state; throws std::invalid_argument if `v` is not symmetric.
  explicit VarianceMatrix(const Mat4& v);

  int dim() const { return dim_; }
  int modes() const { return dim_ / 2; }
  double operator()(int i, int j) const { return e_(i, j); }

  /// The full matrix padded into a 4x4 block (upper-left for one mode).
  const Mat4& padded() const { return e_; }
  /// Single-mode matrix; throws if dim() != 2.
  SymMat2 one_mode() const;
  /// Two-mode matrix; throws if dim() != 4.
  const Mat4& two_mode() const;

 private:
  int dim_;
  Mat4 e_;
};

/// Squeeze parameter with an optional orientation theta in [0, pi).
struct SqueezeParam {
  double r = 0.0;
  double theta = 0.0;

  double c2r() const { return std::cosh(2.0 * r); }
  double s2r() const { return std::sinh(2.0 * r); }
};

/// Block-diagonal i*sigma_2 form for 1 or 2 modes (zero-padded to 4x4).
Mat4 symplectic_form(int modes);

/// Smallest eigenvalue of V + i*Sigma.
double uncertainty_min_eigenvalue(const VarianceMatrix& v);

/// V + i*Sigma >= 0, i.e. V describes a physical Gaussian state.
bool is_valid_state(const VarianceMatrix& v, const Tolerances& tol = kDefaultTol);

/// True iff V - 1 >= 0: the state's P-function is a genuine Gaussian density.
/// Throws std::invalid_argument for an unphysical or two-mode V.
bool gaussian_is_classical(const VarianceMatrix& v, const Tolerances& tol = kDefaultTol);

/// Pure squeezed single-mode state R_theta diag(e^{2r}, e^{-2r}) R_theta^T.
SymMat2 squeezed_vacuum(const SqueezeParam& sq);

/// Two-mode squeezed vacuum: cosh(2r) 1_4 + sinh(2r) sigma_1 (x) sigma_3.
VarianceMatrix tmsv_variance(const SqueezeParam& sq);

/// X~^T V X~ + Y~ with X~ = X (+) 1 and Y~ = Y (+) 0: the channel acts on
/// mode A of a two-mode state.
VarianceMatrix apply_channel_one_side(const ChannelXY& ch, const VarianceMatrix& v,
                                      const Tolerances& tol = kDefaultTol);

/// Momentum mirror on mode B followed by the uncertainty test.
/// For 1+1 modes this is equivalent to separability.
bool is_ppt_separable(const VarianceMatrix& v, const Tolerances& tol = kDefaultTol);

/// Same test with the mirror applied to mode A instead.
bool is_ppt_separable_mirror_a(const VarianceMatrix& v, const Tolerances& tol = kDefaultTol);

/// Sp(2, R) membership: det S = 1.
bool symplectic_check(const Mat2& s, const Tolerances& tol = kDefaultTol);

}  // namespace gaussch
