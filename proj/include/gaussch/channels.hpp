#pragma once

#include <string>
#include <string_view>

#include "gaussch/channel_xy.hpp"
#include "gaussch/gaussian_core.hpp"
#include "gaussch/linalg.hpp"
#include "gaussch/phase_space.hpp"
#include "gaussch/tolerances.hpp"

namespace gaussch {

/// Orbit type of (X, Y) under (S X R, R^T Y R), S symplectic, R a rotation.
/// The kind is fixed by the sign of det X.
enum class FormKind {
  FormI,          ///< det X > 0, canonical (kappa 1, diag(a, b))
  FormII,         ///< det X < 0, canonical (kappa sigma_3, diag(a, b))
  FormIII_rank1,  ///< rank X = 1, canonical (diag(1, 0), Y0)
  FormIII_zero,   ///< X = 0, canonical (0, diag(a, b))
};

std::string_view to_string(FormKind k);
bool is_third_form(FormKind k);

/// Canonical representative with its witnesses:
///   S * X * R == canonical_X(),  R^T * Y * R == canonical_Y().
struct CanonicalForm {
  FormKind kind = FormKind::FormI;
  /// sqrt|det X| for forms I/II, largest singular value for rank-1 X, 0 for X = 0.
  double kappa = 0.0;
  /// Eigenvalues of Y with a >= b.
  double a = 0.0;
  double b = 0.0;
  /// Canonical noise matrix: diag(a, b), or R^T Y R for FormIII_rank1.
  SymMat2 y0{};
  Mat2 S = Mat2::identity();
  Mat2 R = Mat2::identity();

  Mat2 canonical_X() const;
  SymMat2 canonical_Y() const { return y0; }
};

/// Builds the canonical representative directly from its parameters with
/// identity witnesses (FormIII_rank1 gets y0 = diag(a, b)).
CanonicalForm make_canonical(FormKind kind, double kappa, double a, double b);

/// Numerical rank of X: singular values below tol.rank * ||X||_2 count as zero.
int singular_x_rank(const Mat2& x, const Tolerances& tol = kDefaultTol);

/// Complete positivity: Y + i sigma - i X sigma X^T >= 0.
bool is_cp(const ChannelXY& ch, const Tolerances& tol = kDefaultTol);

/// Smallest eigenvalue of Y + i sigma - i X sigma X^T.
double cp_min_eigenvalue(const ChannelXY& ch);

/// X^T V X + Y. Throws std::domain_error for a non-CP channel and
/// std::invalid_argument for an unphysical input state.
SymMat2 act_variance(const ChannelXY& ch, const SymMat2& v, const Tolerances& tol = kDefaultTol);

/// Weyl characteristic function of the output: chi(X xi) exp(-xi^T Y xi / 2)
/// with the input resampled by `stencil`-point Lagrange interpolation.
/// Points mapped off the input grid are taken as zero when the input has
/// decayed at its boundary or the noise envelope is below tol.fft there;
/// otherwise std::domain_error. The input must be Weyl ordered.
CharGrid act_chargrid(const ChannelXY& ch, const CharGrid& c, int stencil = 8,
                      const Tolerances& tol = kDefaultTol);

/// The channel U(S) o ch: (X S, S^T Y S). Requires det S = 1.
ChannelXY compose_post_unitary(const ChannelXY& ch, const Mat2& s, const Tolerances& tol = kDefaultTol);

/// The channel ch o U(S): (S X, Y). Requires det S = 1.
ChannelXY compose_pre_unitary(const ChannelXY& ch, const Mat2& s, const Tolerances& tol = kDefaultTol);

/// Reduces (X, Y) to its canonical form. Raw pairs violating complete
/// positivity are accepted; Y must be positive semidefinite.
CanonicalForm canonical_reduce(const ChannelXY& ch, const Tolerances& tol = kDefaultTol);

/// Largest residual of the witness identities, relative to the scale of the
/// matrices involved.
struct WitnessResiduals {
  double x_residual;    ///< |S X R - X_canonical|_max
  double y_residual;    ///< |R^T Y R - Y_canonical|_max
  double det_s;         ///< |det S - 1|
  double orthogonality; ///< |R^T R - 1|_max
};
WitnessResiduals witness_residuals(const ChannelXY& ch, const CanonicalForm& f);

/// Parses `{"X": [[..],[..]], "Y": [[..],[..]]}`. Throws std::invalid_argument
/// on malformed input or when Y is asymmetric by more than 1e-12.
ChannelXY parse_channel_json(std::string_view text);

/// Inverse of parse_channel_json.
std::string channel_to_json(const ChannelXY& ch);

}  // namespace gaussch
