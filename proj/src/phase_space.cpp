#include "gaussch/phase_space.hpp"

#include <algorithm>
#include <limits>
#include <cmath>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "gaussch/format.hpp"

namespace gaussch {

namespace {

constexpr int kMaxDoublings = 8;

// Lagrange weights for node offsets 0..n-1 evaluated at fractional position t.
void lagrange_weights(double t, int n, double* w) {
  for (int j = 0; j < n; ++j) {
    double num = 1.0, den = 1.0;
    for (int k = 0; k < n; ++k) {
      if (k == j) continue;
      num *= t - k;
      den *= j - k;
    }
    w[j] = num / den;
  }
}

// First stencil node and offset for coordinate x; nullopt outside the grid.
std::optional<std::pair<int, double>> stencil_start(const GridSpec& g, double x, int n) {
  const double pos = (x + g.extent) / g.step();
  const double last = g.side - 1;
  if (pos < -1e-9 || pos > last + 1e-9) return std::nullopt;
  const double clamped = std::clamp(pos, 0.0, last);
  int base = static_cast<int>(std::floor(clamped)) - (n / 2 - 1);
  base = std::clamp(base, 0, g.side - n);
  return std::make_pair(base, clamped - base);
}

}  // namespace

OrderParameter::OrderParameter(double s) : s_(s) {
  if (!(s >= -1.0 && s <= 1.0)) throw std::invalid_argument("OrderParameter: s must lie in [-1, 1]");
}

void GridSpec::validate() const {
  if (side < 3 || side % 2 == 0) throw std::invalid_argument("GridSpec: side must be odd and >= 3");
  if (!(extent > 0.0) || !std::isfinite(extent)) throw std::invalid_argument("GridSpec: extent must be positive");
}

CharGrid::CharGrid(OrderParameter s, GridSpec spec) : s_(s), spec_(spec) {
  spec_.validate();
  values_.assign(spec_.points(), {0.0, 0.0});
}

double CharGrid::boundary_max() const {
  double m = 0.0;
  const int last = spec_.side - 1;
  for (int i = 0; i < spec_.side; ++i) {
    m = std::max({m, std::abs(at(0, i)), std::abs(at(last, i)), std::abs(at(i, 0)), std::abs(at(i, last))});
  }
  return m;
}

std::optional<std::complex<double>> CharGrid::interpolate(double xi1, double xi2, int stencil) const {
  if (stencil < 2 || stencil > spec_.side) throw std::invalid_argument("interpolate: bad stencil size");
  const auto s1 = stencil_start(spec_, xi1, stencil);
  const auto s2 = stencil_start(spec_, xi2, stencil);
  if (!s1 || !s2) return std::nullopt;
  double w1[32], w2[32];
  if (stencil > 32) throw std::invalid_argument("interpolate: stencil too large");
  lagrange_weights(s1->second, stencil, w1);
  lagrange_weights(s2->second, stencil, w2);
  std::complex<double> acc{0.0, 0.0};
  for (int j = 0; j < stencil; ++j) {
    std::complex<double> row{0.0, 0.0};
    for (int k = 0; k < stencil; ++k) row += w2[k] * at(s1->first + j, s2->first + k);
    acc += w1[j] * row;
  }
  return acc;
}

QuasiGrid::QuasiGrid(OrderParameter s, GridSpec spec) : s_(s), spec_(spec) {
  spec_.validate();
  values_.assign(spec_.points(), 0.0);
}

double QuasiGrid::normalisation() const {
  double sum = 0.0;
  for (double v : values_) sum += v;
  const double h = spec_.step();
  return sum * h * h / std::numbers::pi;
}

CharGrid sample_char(OrderParameter s, const CharFunction& f, GridSpec spec, GridGrowth growth) {
  spec.validate();
  for (int attempt = 0;; ++attempt) {
    CharGrid g(s, spec);
    for (int i = 0; i < spec.side; ++i)
      for (int j = 0; j < spec.side; ++j) g.at(i, j) = f(spec.coord(i), spec.coord(j));
    if (growth == GridGrowth::Fixed || attempt == kMaxDoublings || g.boundary_max() < kBoundaryDecay) return g;
    spec.extent *= 2.0;
  }
}

CharGrid char_vacuum(OrderParameter s, GridSpec spec, GridGrowth growth) {
  const double k = 0.5 * (s.value() - 1.0);
  return sample_char(
      s, [k](double x, double y) { return std::complex<double>(std::exp(k * (x * x + y * y)), 0.0); }, spec,
      growth);
}

CharGrid char_fock1(OrderParameter s, GridSpec spec, GridGrowth growth) {
  const double k = 0.5 * (s.value() - 1.0);
  return sample_char(
      s,
      [k](double x, double y) {
        const double r2 = x * x + y * y;
        return std::complex<double>((1.0 - r2) * std::exp(k * r2), 0.0);
      },
      spec, growth);
}

CharGrid char_gaussian(const SymMat2& v, OrderParameter s, GridSpec spec, GridGrowth growth) {
  const double sv = s.value();
  return sample_char(
      s,
      [v, sv](double x, double y) {
        const double q = v.xx * x * x + 2.0 * v.xy * x * y + v.yy * y * y;
        return std::complex<double>(std::exp(-0.5 * q + 0.5 * sv * (x * x + y * y)), 0.0);
      },
      spec, growth);
}

CharGrid convert_order(const CharGrid& c, OrderParameter s_target) {
  const double ds = s_target.value() - c.order().value();
  CharGrid out(s_target, c.spec());
  const GridSpec& g = c.spec();
  for (int i = 0; i < g.side; ++i)
    for (int j = 0; j < g.side; ++j) {
      const double x = g.coord(i), y = g.coord(j);
      out.at(i, j) = ds == 0.0 ? c.at(i, j) : c.at(i, j) * std::exp(0.5 * ds * (x * x + y * y));
    }
  if (ds > 0.0 || c.ill_conditioned()) out.mark_ill_conditioned();
  return out;
}

QuasiGrid quasi_from_char(const CharGrid& c, std::optional<GridSpec> out, const Tolerances& tol) {
  const GridSpec& in = c.spec();
  const double edge = c.boundary_max();
  if (edge > tol.fft) {
    std::ostringstream msg;
    msg << "quasi_from_char: |chi| = " << edge << " at the grid boundary (extent " << in.extent
        << ") exceeds " << tol.fft << "; the Fourier integral would be truncated";
    throw std::domain_error(msg.str());
  }
  const GridSpec os = out.value_or(GridSpec{in.side, 6.0});
  os.validate();

  const int n = in.side, m = os.side;
  const double h = in.step();

  // kernel(k, j) = w_j h exp(2i alpha_k xi_j), trapezoid weights w_j.
  std::vector<double> kr(static_cast<std::size_t>(m) * n), ki(kr.size());
  for (int k = 0; k < m; ++k) {
    const double alpha = os.coord(k);
    for (int j = 0; j < n; ++j) {
      const double w = (j == 0 || j == n - 1) ? 0.5 * h : h;
      const double phase = 2.0 * alpha * in.coord(j);
      kr[static_cast<std::size_t>(k) * n + j] = w * std::cos(phase);
      ki[static_cast<std::size_t>(k) * n + j] = w * std::sin(phase);
    }
  }

  // Pass 1 over xi1: t(k1, j2) = sum_j1 kernel(k1, j1) chi(j1, j2).
  std::vector<double> tr(static_cast<std::size_t>(m) * n, 0.0), ti(tr.size(), 0.0);
  for (int k1 = 0; k1 < m; ++k1) {
    double* rowr = &tr[static_cast<std::size_t>(k1) * n];
    double* rowi = &ti[static_cast<std::size_t>(k1) * n];
    for (int j1 = 0; j1 < n; ++j1) {
      const double ar = kr[static_cast<std::size_t>(k1) * n + j1];
      const double ai = ki[static_cast<std::size_t>(k1) * n + j1];
      const std::complex<double>* src = &c.at(j1, 0);
      for (int j2 = 0; j2 < n; ++j2) {
        const double cr = src[j2].real(), ci = src[j2].imag();
        rowr[j2] += ar * cr - ai * ci;
        rowi[j2] += ar * ci + ai * cr;
      }
    }
  }

  // Pass 2 over xi2.
  QuasiGrid q(c.order(), os);
  double residue = 0.0;
  for (int k1 = 0; k1 < m; ++k1) {
    const double* rowr = &tr[static_cast<std::size_t>(k1) * n];
    const double* rowi = &ti[static_cast<std::size_t>(k1) * n];
    for (int k2 = 0; k2 < m; ++k2) {
      const double* br = &kr[static_cast<std::size_t>(k2) * n];
      const double* bi = &ki[static_cast<std::size_t>(k2) * n];
      double sr = 0.0, si = 0.0;
      for (int j2 = 0; j2 < n; ++j2) {
        sr += br[j2] * rowr[j2] - bi[j2] * rowi[j2];
        si += br[j2] * rowi[j2] + bi[j2] * rowr[j2];
      }
      q.at(k1, k2) = sr / std::numbers::pi;
      residue = std::max(residue, std::fabs(si / std::numbers::pi));
    }
  }
  q.set_imag_residue(residue);
  if (residue > tol.fft) {
    std::ostringstream msg;
    msg << "quasi_from_char: imaginary residue " << residue << " exceeds " << tol.fft
        << "; input is not a Hermitian characteristic function";
    throw std::domain_error(msg.str());
  }
  return q;
}

double min_value(const QuasiGrid& q, std::optional<double> radius) {
  const GridSpec& g = q.spec();
  double m = std::numeric_limits<double>::infinity();
  for (int i = 0; i < g.side; ++i)
    for (int j = 0; j < g.side; ++j) {
      if (radius && std::hypot(g.coord(i), g.coord(j)) > *radius) continue;
      m = std::min(m, q.at(i, j));
    }
  return m;
}

bool grid_is_nonnegative(const QuasiGrid& q, const Tolerances& tol) { return min_value(q) >= -tol.cls; }

double fock1_output_p(double a, double b, double alpha1, double alpha2, Fock1Form form) {
  if (!(a > 0.0) || !(b > 0.0)) throw std::invalid_argument("fock1_output_p: a and b must be positive");
  const double envelope = 2.0 / std::sqrt(a * b) * std::exp(-2.0 * alpha1 * alpha1 / a - 2.0 * alpha2 * alpha2 / b);
  const double poly = form == Fock1Form::CrossTerm
                          ? 4.0 * (alpha1 + alpha2) * (alpha1 + alpha2) / (a * a)
                          : 4.0 * alpha1 * alpha1 / (a * a) + 4.0 * alpha2 * alpha2 / (b * b);
  return envelope * (1.0 + poly - 1.0 / a - 1.0 / b);
}

void write_csv(const QuasiGrid& q, std::ostream& os) {
  const GridSpec& g = q.spec();
  os << "alpha1,alpha2,value\n";
  for (int i = 0; i < g.side; ++i)
    for (int j = 0; j < g.side; ++j)
      os << format_number(g.coord(i)) << ',' << format_number(g.coord(j)) << ',' << format_number(q.at(i, j))
         << '\n';
}

}  // namespace gaussch
