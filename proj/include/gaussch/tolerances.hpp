#pragma once

namespace gaussch {

/// Numerical thresholds shared by every predicate in the library.
///
/// All closed conditions are evaluated with a non-strict comparison and the
/// matching slack, so boundary channels count as satisfying the condition.
struct Tolerances {
  /// Smallest admissible eigenvalue of an uncertainty-principle matrix.
  /// For 4x4 matrices the floor is max(psd, 64 eps ||V||_max).
  double psd = 1e-9;
  /// Slack for classicality / breaking verdicts.
  double cls = 1e-6;
  /// Accuracy expected from phase-space quadrature.
  double fft = 1e-6;
  /// Algebraic identities (witness checks, exact round trips).
  double alg = 1e-12;
  /// Relative singular-value threshold for the det X = 0 dispatch.
  double rank = 1e-10;
};

inline constexpr Tolerances kDefaultTol{};

}  // namespace gaussch
