#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "gaussch/channels.hpp"
#include "gaussch/tolerances.hpp"

namespace gaussch {

/// Signed slack of each closed condition; a condition holds iff its margin
/// is >= -tol.cls.
struct Margins {
  double cp = 0.0;
  double eb = 0.0;
  double ncb = 0.0;
};

struct BreakingReport {
  CanonicalForm form;
  bool cp = false;
  bool eb = false;
  bool ncb = false;
  /// (a + kappa^2 - 1, b + kappa^2 - 1); kappa is taken as 0 for third forms.
  std::pair<double, double> shifted_noise{0.0, 0.0};
  Margins margins;
};

/// Slack of the three closed conditions for a canonical form:
///   FormI   ncb: (a-1)(b-1) >= kappa^4 with a, b >= 1   eb: ab >= (1+kappa^2)^2   cp: ab >= (1-kappa^2)^2
///   FormII  ncb: as FormI                                 eb: ab >= (1+kappa^2)^2   cp: ab >= (1+kappa^2)^2
///   FormIII ncb: lambda_min(Y0) >= 1                      eb: det Y0 >= 1           cp: det Y0 >= 1
Margins condition_margins(const CanonicalForm& form);

bool is_ncb(const CanonicalForm& form, const Tolerances& tol = kDefaultTol);
bool is_eb(const CanonicalForm& form, const Tolerances& tol = kDefaultTol);
bool is_cp_form(const CanonicalForm& form, const Tolerances& tol = kDefaultTol);

/// Canonical reduction followed by all three predicates.
/// Throws std::invalid_argument when Y is not positive semidefinite.
BreakingReport report(const ChannelXY& ch, const Tolerances& tol = kDefaultTol);

// --- Oracles -------------------------------------------------------------

/// Best point of a sweep over pure squeezed inputs
/// V(r, theta) = R_theta diag(e^{2r}, e^{-2r}) R_theta^T.
struct PureStateExtremum {
  double r = 0.0;
  double theta = 0.0;
  double value = 0.0;
};

/// sup over pure V of lambda_min(Y - 1 - X^T V X).
///
/// Nonnegative exactly when Y - 1 dominates the image of some pure state,
/// which is the squeeze-then-smooth structure of the sufficiency argument:
/// the output P-function is then a Gaussian smoothing of the input
/// Q-function of a squeezed copy of the input.
PureStateExtremum ncb_gaussian_slack(const ChannelXY& ch, double r_max = 8.0, int n_seeds = 4);

/// Independent NCB oracle: ncb_gaussian_slack(...).value >= -tol.cls.
/// Throws std::domain_error for a non-CP channel.
bool ncb_oracle_gaussian(const ChannelXY& ch, double r_max = 8.0, int n_seeds = 4,
                         const Tolerances& tol = kDefaultTol);

/// inf over pure V of lambda_min(X^T V X + Y - 1): how close the worst
/// Gaussian output comes to being nonclassical.
PureStateExtremum gaussian_output_slack(const ChannelXY& ch, double r_max = 8.0, int n_seeds = 4);

/// Every pure Gaussian input yields a classical output. Necessary for NCB but
/// not sufficient: it reduces to Y >= 1 whenever X is invertible.
bool gaussian_outputs_classical(const ChannelXY& ch, double r_max = 8.0, int n_seeds = 4,
                                const Tolerances& tol = kDefaultTol);

/// Sign of the single-photon output P-function at the origin for the
/// kappa = 1 first form. Throws std::invalid_argument for any other form.
bool ncb_necessity_fock1(const CanonicalForm& form, const Tolerances& tol = kDefaultTol);

inline constexpr double kDefaultEbLadder[] = {0.5, 1.0, 2.0, 4.0, 8.0};

/// PPT separability of the channel output on mode A of a two-mode squeezed
/// vacuum, for every r in the ladder. Throws std::domain_error for non-CP.
bool eb_oracle_tmsv(const ChannelXY& ch, std::span<const double> r_list = kDefaultEbLadder,
                    const Tolerances& tol = kDefaultTol);

// --- Squeeze orbits --------------------------------------------------------

struct OrbitPoint {
  double r = 0.0;
  double a_r = 0.0;
  double b_r = 0.0;
  bool ncb = false;
};

/// Noise eigenvalues after a post-channel squeeze diag(e^{-r}, e^{r}) applied in
/// the eigenbasis of the canonical noise: (a e^{-2r}, b e^{2r}). kappa is
/// unchanged and a_r b_r = a b.
OrbitPoint squeeze_orbit(const CanonicalForm& form, double r, const Tolerances& tol = kDefaultTol);

/// The canonical form reached at squeeze r (diagonal noise, same kind and kappa).
CanonicalForm orbit_form(const CanonicalForm& form, double r);

/// Maximum of f(r) = (a_r - 1)(b_r - 1) over the interval where both factors
/// are positive, by golden-section search. nullopt if that interval is empty.
struct OrbitPeak {
  double r = 0.0;
  double value = 0.0;
};
std::optional<OrbitPeak> orbit_peak(const CanonicalForm& form);

/// Smallest |r| at which the squeezed channel is NCB, or nullopt if the orbit
/// never reaches the NCB region. Throws std::invalid_argument for non-EB forms.
std::optional<double> find_r0(const CanonicalForm& form, const Tolerances& tol = kDefaultTol);

// --- Parameter-plane classification ----------------------------------------

enum class Region { Unphysical, CpOnly, EbNotNcb, Ncb };

std::string_view to_string(Region r);

struct RegionRecord {
  FormKind kind = FormKind::FormI;
  double kappa = 0.0;
  double a = 0.0;
  double b = 0.0;
  Region region = Region::Unphysical;
  Margins margins;
};

RegionRecord classify_region(FormKind kind, double kappa, double a, double b, const Tolerances& tol = kDefaultTol);

/// Header and row for `kind,kappa,a,b,class,cp_margin,eb_margin,ncb_margin`.
void write_region_csv_header(std::ostream& os);
void write_region_csv_row(const RegionRecord& rec, std::ostream& os);

// --- Boundary curves --------------------------------------------------------

/// Saturation curve of one condition in the (a, b) plane: (a - p)(b - p) = c.
/// With c = 0 the curve degenerates to the two half-lines a = p, b = p.
struct BoundaryCurve {
  int id = 1;  ///< 1: NCB, 2: EB, 3: CP
  double p = 0.0;
  double c = 0.0;

  /// b on the curve at a (a > p); nullopt where undefined.
  std::optional<double> b_of_a(double a) const;
  /// db/da on the curve at a.
  std::optional<double> slope(double a) const;
  /// `n` points tracing the part of the curve inside the box.
  std::vector<std::pair<double, double>> trace(double amin, double amax, double bmin, double bmax,
                                               int n = 512) const;
};

/// Curves (1), (2), (3) for a form kind at fixed kappa.
BoundaryCurve boundary_curve(FormKind kind, double kappa, int id);

}  // namespace gaussch
