#pragma once

#include <complex>
#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

#include "gaussch/linalg.hpp"
#include "gaussch/tolerances.hpp"

namespace gaussch {

/// Ordering parameter s in [-1, 1] of a characteristic function.
class OrderParameter {
 public:
  /// Throws std::invalid_argument outside [-1, 1].
  explicit OrderParameter(double s);

  static OrderParameter normal() { return OrderParameter(1.0); }
  static OrderParameter weyl() { return OrderParameter(0.0); }
  static OrderParameter antinormal() { return OrderParameter(-1.0); }

  double value() const { return s_; }
  friend bool operator==(const OrderParameter&, const OrderParameter&) = default;

 private:
  double s_;
};

/// Square grid of `side` points per axis spanning [-extent, extent].
struct GridSpec {
  int side = 257;
  double extent = 8.0;

  /// Throws std::invalid_argument unless side is odd, >= 3 and extent > 0.
  void validate() const;
  double step() const { return 2.0 * extent / (side - 1); }
  double coord(int i) const { return -extent + i * step(); }
  std::size_t points() const { return static_cast<std::size_t>(side) * side; }
};

/// Whether sampling may enlarge the extent until the function has decayed.
enum class GridGrowth { Fixed, Auto };

/// Boundary magnitude below which automatic growth stops.
inline constexpr double kBoundaryDecay = 1e-12;

/// Samples of an s-ordered characteristic function chi_s(xi1 + i xi2).
///
/// Index (i1, i2) holds chi at (coord(i1), coord(i2)). Here |xi|^2 =
/// xi1^2 + xi2^2, so a Gaussian with variance matrix V has Weyl function
/// exp(-xi^T V xi / 2) and the vacuum has V = 1.
class CharGrid {
 public:
  CharGrid(OrderParameter s, GridSpec spec);

  OrderParameter order() const { return s_; }
  const GridSpec& spec() const { return spec_; }

  std::complex<double>& at(int i1, int i2) { return values_[idx(i1, i2)]; }
  const std::complex<double>& at(int i1, int i2) const { return values_[idx(i1, i2)]; }
  const std::vector<std::complex<double>>& values() const { return values_; }

  /// Largest |chi| on the outermost ring of samples.
  double boundary_max() const;

  /// Lagrange interpolation with a `stencil`-point tensor stencil (2 gives
  /// bilinear). Returns nullopt outside the grid.
  std::optional<std::complex<double>> interpolate(double xi1, double xi2, int stencil = 8) const;

  /// Set when the grid was produced by raising s; such grids amplify noise.
  bool ill_conditioned() const { return ill_conditioned_; }
  void mark_ill_conditioned() { ill_conditioned_ = true; }

 private:
  std::size_t idx(int i1, int i2) const { return static_cast<std::size_t>(i1) * spec_.side + i2; }

  OrderParameter s_;
  GridSpec spec_;
  std::vector<std::complex<double>> values_;
  bool ill_conditioned_ = false;
};

/// Samples of an s-ordered quasi-probability W_s(alpha1 + i alpha2).
///
/// Normalisation is against d^2 alpha / pi: sum * step^2 / pi = 1.
class QuasiGrid {
 public:
  QuasiGrid(OrderParameter s, GridSpec spec);

  OrderParameter order() const { return s_; }
  const GridSpec& spec() const { return spec_; }

  double& at(int i1, int i2) { return values_[static_cast<std::size_t>(i1) * spec_.side + i2]; }
  double at(int i1, int i2) const { return values_[static_cast<std::size_t>(i1) * spec_.side + i2]; }
  const std::vector<double>& values() const { return values_; }

  /// Largest discarded imaginary part from the transform.
  double imag_residue() const { return imag_residue_; }
  void set_imag_residue(double v) { imag_residue_ = v; }

  /// Riemann sum against d^2 alpha / pi.
  double normalisation() const;

 private:
  OrderParameter s_;
  GridSpec spec_;
  std::vector<double> values_;
  double imag_residue_ = 0.0;
};

using CharFunction = std::function<std::complex<double>(double xi1, double xi2)>;

/// Samples `f` on `spec`; with GridGrowth::Auto the extent doubles (at most
/// eight times) until the boundary magnitude is below kBoundaryDecay.
CharGrid sample_char(OrderParameter s, const CharFunction& f, GridSpec spec = {},
                     GridGrowth growth = GridGrowth::Auto);

/// exp[(s - 1)|xi|^2 / 2].
CharGrid char_vacuum(OrderParameter s, GridSpec spec = {}, GridGrowth growth = GridGrowth::Auto);

/// (1 - |xi|^2) exp[(s - 1)|xi|^2 / 2], the single-photon Fock state.
CharGrid char_fock1(OrderParameter s, GridSpec spec = {}, GridGrowth growth = GridGrowth::Auto);

/// exp[-xi^T V xi / 2 + s |xi|^2 / 2] for a one-mode Gaussian state.
CharGrid char_gaussian(const SymMat2& v, OrderParameter s, GridSpec spec = {},
                       GridGrowth growth = GridGrowth::Auto);

/// chi_{s'} = exp[(s' - s)|xi|^2 / 2] chi_s. Raising s marks the result
/// ill-conditioned.
CharGrid convert_order(const CharGrid& c, OrderParameter s_target);

/// Quasi-probability by direct separable quadrature of
///   W(alpha) = (1/pi) \int exp(2i (alpha1 xi1 + alpha2 xi2)) chi(xi) d^2 xi
/// evaluated on `out` (default: same side as the input, extent 6).
/// Throws std::domain_error if |chi| at the grid boundary exceeds tol.fft,
/// or if the imaginary residue exceeds it.
QuasiGrid quasi_from_char(const CharGrid& c, std::optional<GridSpec> out = std::nullopt,
                          const Tolerances& tol = kDefaultTol);

/// Minimum sampled value, optionally restricted to |alpha| <= radius.
double min_value(const QuasiGrid& q, std::optional<double> radius = std::nullopt);

/// Nonnegativity verdict min_value >= -tol.cls.
bool grid_is_nonnegative(const QuasiGrid& q, const Tolerances& tol = kDefaultTol);

/// Which closed form of the single-photon output P-function to evaluate.
enum class Fock1Form {
  /// Polynomial term 4(alpha1 + alpha2)^2 / a^2; disagrees with quadrature.
  CrossTerm,
  /// Polynomial term 4 alpha1^2 / a^2 + 4 alpha2^2 / b^2; matches quadrature.
  Separable,
};

/// P-function of the output when |1><1| passes through (1, diag(a, b)):
///   (2/sqrt(ab)) exp(-2 alpha1^2/a - 2 alpha2^2/b) (1 + poly - 1/a - 1/b).
/// Throws std::invalid_argument unless a, b > 0.
double fock1_output_p(double a, double b, double alpha1, double alpha2,
                      Fock1Form form = Fock1Form::Separable);

/// Writes `alpha1,alpha2,value` rows (12 significant digits, row-major).
void write_csv(const QuasiGrid& q, std::ostream& os);

}  // namespace gaussch
