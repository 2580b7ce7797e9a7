#include "gaussch/channels.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "gaussch/format.hpp"
#include "json.hpp"

namespace gaussch {

namespace {

constexpr double kJsonSymmetryTol = 1e-12;

void require_symplectic(const Mat2& s, const Tolerances& tol, const char* who) {
  // Relative check: witnesses with large entries lose absolute precision in det.
  const double scale = std::fmax(1.0, s.max_abs() * s.max_abs());
  if (std::fabs(det(s) - 1.0) > tol.alg * scale) {
    std::ostringstream msg;
    msg << who << ": matrix is not symplectic (det = " << det(s) << ")";
    throw std::invalid_argument(msg.str());
  }
}

Mat2 matrix_from_json(const nlohmann::json& j, const char* name) {
  if (!j.contains(name)) throw std::invalid_argument(std::string("channel JSON: missing \"") + name + "\"");
  const auto& m = j.at(name);
  if (!m.is_array() || m.size() != 2) throw std::invalid_argument(std::string("channel JSON: \"") + name + "\" must be a 2x2 array");
  Mat2 out;
  for (int i = 0; i < 2; ++i) {
    const auto& row = m.at(i);
    if (!row.is_array() || row.size() != 2)
      throw std::invalid_argument(std::string("channel JSON: \"") + name + "\" must be a 2x2 array");
    for (int k = 0; k < 2; ++k) {
      if (!row.at(k).is_number()) throw std::invalid_argument(std::string("channel JSON: \"") + name + "\" has a non-numeric entry");
      out(i, k) = row.at(k).get<double>();
    }
  }
  if (!out.is_finite()) throw std::invalid_argument(std::string("channel JSON: \"") + name + "\" has a non-finite entry");
  return out;
}

}  // namespace

std::string_view to_string(FormKind k) {
  switch (k) {
    case FormKind::FormI: return "FormI";
    case FormKind::FormII: return "FormII";
    case FormKind::FormIII_rank1: return "FormIII_rank1";
    case FormKind::FormIII_zero: return "FormIII_zero";
  }
  return "unknown";
}

bool is_third_form(FormKind k) { return k == FormKind::FormIII_rank1 || k == FormKind::FormIII_zero; }

Mat2 CanonicalForm::canonical_X() const {
  switch (kind) {
    case FormKind::FormI: return kappa * Mat2::identity();
    case FormKind::FormII: return kappa * pauli_z();
    case FormKind::FormIII_rank1: return Mat2{1.0, 0.0, 0.0, 0.0};
    case FormKind::FormIII_zero: return Mat2{};
  }
  return Mat2{};
}

CanonicalForm make_canonical(FormKind kind, double kappa, double a, double b) {
  CanonicalForm f;
  f.kind = kind;
  f.kappa = kind == FormKind::FormIII_zero ? 0.0 : kappa;
  f.a = a;
  f.b = b;
  f.y0 = SymMat2::diag(a, b);
  return f;
}

int singular_x_rank(const Mat2& x, const Tolerances& tol) {
  const auto sv = singular_values(x);
  if (sv[0] == 0.0) return 0;
  return sv[1] <= tol.rank * sv[0] ? 1 : 2;
}

double cp_min_eigenvalue(const ChannelXY& ch) {
  const Mat2 sigma = symplectic_unit();
  const Mat2 im = sigma - ch.X * sigma * ch.X.transposed();
  return hermitian_min_eigenvalue(ch.Y.full(), im);
}

bool is_cp(const ChannelXY& ch, const Tolerances& tol) { return cp_min_eigenvalue(ch) >= -tol.psd; }

SymMat2 act_variance(const ChannelXY& ch, const SymMat2& v, const Tolerances& tol) {
  if (!is_valid_state(VarianceMatrix(v), tol)) throw std::invalid_argument("act_variance: invalid input state");
  if (!is_cp(ch, tol)) throw std::domain_error("act_variance: channel is not completely positive");
  return congruence(v, ch.X) + ch.Y;
}

CharGrid act_chargrid(const ChannelXY& ch, const CharGrid& c, int stencil, const Tolerances& tol) {
  if (c.order().value() != 0.0) throw std::invalid_argument("act_chargrid: input must be Weyl ordered (s = 0)");
  const GridSpec& g = c.spec();
  const bool input_decayed = c.boundary_max() <= tol.fft;
  CharGrid out(c.order(), g);
  for (int i = 0; i < g.side; ++i) {
    for (int j = 0; j < g.side; ++j) {
      const double x1 = g.coord(i), x2 = g.coord(j);
      const double envelope = std::exp(-0.5 * (ch.Y.xx * x1 * x1 + 2.0 * ch.Y.xy * x1 * x2 + ch.Y.yy * x2 * x2));
      const double m1 = ch.X(0, 0) * x1 + ch.X(0, 1) * x2;
      const double m2 = ch.X(1, 0) * x1 + ch.X(1, 1) * x2;
      const auto in = c.interpolate(m1, m2, stencil);
      if (in) {
        out.at(i, j) = *in * envelope;
      } else if (input_decayed || envelope <= tol.fft) {
        out.at(i, j) = 0.0;
      } else {
        std::ostringstream msg;
        msg << "act_chargrid: X xi = (" << m1 << ", " << m2 << ") leaves the input grid (extent " << g.extent
            << ") where the output envelope is " << envelope;
        throw std::domain_error(msg.str());
      }
    }
  }
  return out;
}

ChannelXY compose_post_unitary(const ChannelXY& ch, const Mat2& s, const Tolerances& tol) {
  require_symplectic(s, tol, "compose_post_unitary");
  return {ch.X * s, congruence(ch.Y, s)};
}

ChannelXY compose_pre_unitary(const ChannelXY& ch, const Mat2& s, const Tolerances& tol) {
  require_symplectic(s, tol, "compose_pre_unitary");
  return {s * ch.X, ch.Y};
}

CanonicalForm canonical_reduce(const ChannelXY& ch, const Tolerances& tol) {
  if (!ch.X.is_finite() || !std::isfinite(ch.Y.xx) || !std::isfinite(ch.Y.xy) || !std::isfinite(ch.Y.yy))
    throw std::invalid_argument("canonical_reduce: non-finite channel entries");
  const SymEigen2 ey = eigen_sym(ch.Y);
  if (ey.lo < -tol.psd * std::fmax(1.0, ey.hi))
    throw std::invalid_argument("canonical_reduce: Y is not positive semidefinite");

  CanonicalForm f;
  f.a = ey.hi;
  f.b = ey.lo;
  f.y0 = SymMat2::diag(f.a, f.b);
  f.R = ey.rotation;

  switch (singular_x_rank(ch.X, tol)) {
    case 0:
      f.kind = FormKind::FormIII_zero;
      f.kappa = 0.0;
      f.S = Mat2::identity();
      break;
    case 1: {
      const RotationSvd svd = rotation_svd(ch.X);
      f.kind = FormKind::FormIII_rank1;
      f.kappa = svd.s1;
      // U^T X W = diag(kappa, ~0); rescale the first row to 1 symplectically.
      f.R = svd.w;
      f.S = Mat2{1.0 / svd.s1, 0.0, 0.0, svd.s1} * svd.u.transposed();
      f.y0 = congruence(ch.Y, f.R);
      break;
    }
    default: {
      const double d = det(ch.X);
      if (d > 0.0) {
        f.kind = FormKind::FormI;
        f.kappa = std::sqrt(d);
        const Mat2 sx = ch.X * (1.0 / f.kappa);
        f.S = f.R.transposed() * inverse(sx);
      } else {
        f.kind = FormKind::FormII;
        f.kappa = std::sqrt(-d);
        const Mat2 sx = ch.X * pauli_z() * (1.0 / f.kappa);
        // R sigma_3 R = sigma_3 for every rotation, so S = R S_X^{-1}.
        f.S = f.R * inverse(sx);
      }
      break;
    }
  }
  return f;
}

WitnessResiduals witness_residuals(const ChannelXY& ch, const CanonicalForm& f) {
  WitnessResiduals w{};
  w.x_residual = max_abs_diff(f.S * ch.X * f.R, f.canonical_X());
  w.y_residual = max_abs_diff(congruence(ch.Y, f.R).full(), f.canonical_Y().full());
  w.det_s = std::fabs(det(f.S) - 1.0);
  w.orthogonality = max_abs_diff(f.R.transposed() * f.R, Mat2::identity());
  return w;
}

ChannelXY parse_channel_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("channel JSON: ") + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("channel JSON: top level must be an object");
  const Mat2 x = matrix_from_json(j, "X");
  const Mat2 y = matrix_from_json(j, "Y");
  if (std::fabs(y(0, 1) - y(1, 0)) > kJsonSymmetryTol)
    throw std::invalid_argument("channel JSON: Y is not symmetric");
  return {x, SymMat2{y(0, 0), y(0, 1), y(1, 1)}};
}

std::string channel_to_json(const ChannelXY& ch) {
  std::ostringstream os;
  const Mat2& x = ch.X;
  const SymMat2& y = ch.Y;
  os << "{\"X\": [[" << format_number(x(0, 0)) << ", " << format_number(x(0, 1)) << "], ["
     << format_number(x(1, 0)) << ", " << format_number(x(1, 1)) << "]], \"Y\": [[" << format_number(y.xx) << ", "
     << format_number(y.xy) << "], [" << format_number(y.xy) << ", " << format_number(y.yy) << "]]}";
  return os.str();
}

}  // namespace gaussch
