#include "checks.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <ostream>
#include <random>
#include <sstream>

#include "gaussch/breaking.hpp"
#include "gaussch/channels.hpp"
#include "gaussch/format.hpp"
#include "gaussch/gaussian_core.hpp"
#include "gaussch/phase_space.hpp"

namespace gaussch::checks {

namespace {

// Pinned tolerances.
constexpr double kExactTol = 1e-12;        // table reproduction, Fock sign flip
constexpr double kCurveTol = 1e-9;         // contact point of NCB and EB curves
constexpr double kFftTol = 1e-6;           // grid oracles
constexpr double kBoundaryGap = 1e-5;      // NCB oracle excludes points this close
constexpr double kEbBand = 1e-6;           // relative band around ab = (1+kappa^2)^2
constexpr double kPeakTol = 1e-8;          // orbit maximum on the EB boundary
constexpr double kWitnessTol = 1e-10;      // canonical reduction residuals
constexpr double kOracleSeconds = 60.0;
constexpr double kSingularRMax = 12.0;    // oracle rim for singular X at boundary points
constexpr GridSpec kQWindow{201, 10.0};    // wide enough that Q tails stay below kFftTol

const double kKappaGrid[] = {0.4, 0.6, 0.8, 1.0, 1.25, 2.0};
const FormKind kAllKinds[] = {FormKind::FormI, FormKind::FormII, FormKind::FormIII_rank1, FormKind::FormIII_zero};

struct Counter {
  long points = 0;
  long failures = 0;
  std::string first;

  void fail(const std::string& what) {
    if (failures++ == 0) first = what;
  }
};

std::string point_label(FormKind k, double kappa, double a, double b) {
  std::ostringstream os;
  os << to_string(k) << " kappa=" << format_number(kappa) << " a=" << format_number(a) << " b=" << format_number(b);
  return os.str();
}

Check finish(std::string name, const Counter& c, const std::string& extra = {}) {
  std::ostringstream os;
  os << "points=" << c.points << " failures=" << c.failures;
  if (!extra.empty()) os << ' ' << extra;
  if (c.failures) os << " first=[" << c.first << ']';
  return {std::move(name), c.failures == 0 && c.points > 0, os.str()};
}

double uniform(std::mt19937_64& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

Mat2 squeeze(double r) { return Mat2{std::exp(-r), 0.0, 0.0, std::exp(r)}; }

Mat2 random_symplectic(std::mt19937_64& rng, double max_r) {
  return rotation(uniform(rng, 0.0, 6.3)) * squeeze(uniform(rng, -max_r, max_r)) * rotation(uniform(rng, 0.0, 6.3));
}

ChannelXY canonical_channel(FormKind kind, double kappa, double a, double b) {
  const CanonicalForm f = make_canonical(kind, kappa, a, b);
  return {f.canonical_X(), f.canonical_Y()};
}

// A channel in the orbit of the canonical one: pre-unitary P, post-rotation R.
ChannelXY scrambled(const ChannelXY& canon, std::mt19937_64& rng, double max_r) {
  const Mat2 p = random_symplectic(rng, max_r);
  const Mat2 r = rotation(uniform(rng, 0.0, 6.3));
  return {p * canon.X * r.transposed(), congruence(canon.Y, r.transposed())};
}

// Table entries written out directly from the inequalities.
struct TableVerdict {
  bool cp, eb, ncb;
};

TableVerdict table_reference(FormKind kind, double kappa, double a, double b, double tol) {
  const double k4 = std::pow(kappa, 4);
  switch (kind) {
    case FormKind::FormI:
      return {a * b - std::pow(1.0 - kappa * kappa, 2) >= -tol, a * b - std::pow(1.0 + kappa * kappa, 2) >= -tol,
              (a - 1.0) * (b - 1.0) - k4 >= -tol && a >= 1.0 - tol && b >= 1.0 - tol};
    case FormKind::FormII:
      return {a * b - std::pow(1.0 + kappa * kappa, 2) >= -tol, a * b - std::pow(1.0 + kappa * kappa, 2) >= -tol,
              (a - 1.0) * (b - 1.0) - k4 >= -tol && a >= 1.0 - tol && b >= 1.0 - tol};
    default:
      return {a * b - 1.0 >= -tol, a * b - 1.0 >= -tol, a >= 1.0 - tol && b >= 1.0 - tol};
  }
}

double max_grid_error(const QuasiGrid& q, const std::function<double(double, double)>& f) {
  double e = 0.0;
  const GridSpec& g = q.spec();
  for (int i = 0; i < g.side; ++i)
    for (int j = 0; j < g.side; ++j) e = std::max(e, std::fabs(q.at(i, j) - f(g.coord(i), g.coord(j))));
  return e;
}

QuasiGrid fock1_output_grid(double a, double b) {
  const ChannelXY ch{Mat2::identity(), SymMat2::diag(a, b)};
  const CharGrid out = act_chargrid(ch, char_fock1(OrderParameter::weyl()));
  return quasi_from_char(convert_order(out, OrderParameter::normal()));
}

// CP noise for a given X: Y >= 0 with det Y >= (1 - det X)^2, plus slack.
SymMat2 random_cp_noise(const Mat2& x, std::mt19937_64& rng) {
  const double need = std::fabs(1.0 - det(x));
  const double ratio = std::exp(uniform(rng, -0.7, 0.7));
  const double scale = need + uniform(rng, 0.2, 1.0);
  return congruence(SymMat2::diag(scale * ratio, scale / ratio), rotation(uniform(rng, 0.0, 6.3)));
}

}  // namespace

Check table1_reproduction() {
  Tolerances tol;
  tol.cls = kExactTol;
  std::mt19937_64 rng(101);
  Counter c;
  for (FormKind kind : kAllKinds)
    for (double kappa : {0.6, 1.0, 1.5})
      for (int i = 1; i <= 50; ++i)
        for (int j = 1; j <= 50; ++j) {
          const double a = 0.08 * i, b = 0.08 * j;
          const TableVerdict ref = table_reference(kind, kappa, a, b, kExactTol);
          const CanonicalForm form = make_canonical(kind, kappa, a, b);
          const Margins m = condition_margins(form);
          ++c.points;
          const bool direct = is_cp_form(form, tol) == ref.cp && is_eb(form, tol) == ref.eb &&
                              is_ncb(form, tol) == ref.ncb && (m.cp >= -kExactTol) == ref.cp &&
                              (m.eb >= -kExactTol) == ref.eb && (m.ncb >= -kExactTol) == ref.ncb;
          // Same point reached through a random orbit element and reduction.
          const BreakingReport rep = report(scrambled(canonical_channel(kind, kappa, a, b), rng, 0.5), tol);
          const bool reduced = rep.cp == ref.cp && rep.eb == ref.eb && rep.ncb == ref.ncb;
          if (!direct || !reduced) c.fail(point_label(kind, kappa, a, b));
        }
  return finish("table1_reproduction", c);
}

Check inclusion_chain() {
  std::mt19937_64 rng(102);
  Counter c;
  auto test = [&](const Margins& m, FormKind kind, const std::string& label) {
    const Tolerances tol;
    const bool cp = m.cp >= -tol.cls, eb = m.eb >= -tol.cls, ncb = m.ncb >= -tol.cls;
    ++c.points;
    if ((ncb && !eb) || (eb && !cp)) c.fail("chain " + label);
    if (kind != FormKind::FormI && eb != cp) c.fail("eb!=cp " + label);
  };
  for (FormKind kind : kAllKinds)
    for (double kappa : kKappaGrid)
      for (int i = 1; i <= 100; ++i)
        for (int j = 1; j <= 100; ++j) {
          const double a = 0.05 * i, b = 0.05 * j;
          test(classify_region(kind, kappa, a, b).margins, kind, point_label(kind, kappa, a, b));
        }
  for (int n = 0; n < 5000; ++n) {
    Mat2 x{uniform(rng, -2, 2), uniform(rng, -2, 2), uniform(rng, -2, 2), uniform(rng, -2, 2)};
    if (n % 10 == 0) x = Mat2{uniform(rng, -2, 2), 0.0, 0.0, 0.0} * rotation(uniform(rng, 0, 6.3));
    const SymMat2 y =
        congruence(SymMat2::diag(uniform(rng, 0.0, 6.0), uniform(rng, 0.0, 6.0)), rotation(uniform(rng, 0, 6.3)));
    const BreakingReport rep = report({x, y});
    test(rep.margins, rep.form.kind, "random #" + std::to_string(n));
  }
  return finish("inclusion_chain", c);
}

Check curve_intersection() {
  Counter c;
  double worst = 0.0;
  for (FormKind kind : {FormKind::FormI, FormKind::FormII})
    for (double kappa : {0.3, 0.6, 1.0, 1.5, 2.0}) {
      const BoundaryCurve ncb = boundary_curve(kind, kappa, 1);
      const BoundaryCurve eb = boundary_curve(kind, kappa, 2);
      // The curves touch tangentially, so root-find the slope difference.
      auto g = [&](double a) { return *ncb.slope(a) - *eb.slope(a); };
      double lo = ncb.p + 1e-6, hi = 1e6;
      ++c.points;
      if (!(g(lo) < 0.0 && g(hi) > 0.0)) {
        c.fail("no bracket " + point_label(kind, kappa, 0, 0));
        continue;
      }
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (g(mid) < 0.0 ? lo : hi) = mid;
      }
      const double a = 0.5 * (lo + hi);
      const double b1 = *ncb.b_of_a(a), b2 = *eb.b_of_a(a);
      const double target = 1.0 + kappa * kappa;
      const double err = std::max({std::fabs(a - target), std::fabs(b1 - target), std::fabs(b1 - b2)});
      worst = std::max(worst, err);
      if (err > kCurveTol) c.fail(point_label(kind, kappa, a, b1));
    }
  return finish("curve_intersection", c, "max_err=" + format_number(worst));
}

Check fock1_necessity() {
  Tolerances tol;
  tol.cls = kExactTol;
  std::mt19937_64 rng(104);
  Counter c;
  for (int n = 0; n < 1000; ++n) {
    const double a = uniform(rng, 0.2, 6.0), b = uniform(rng, 0.2, 6.0);
    const CanonicalForm form = make_canonical(FormKind::FormI, 1.0, a, b);
    const bool sign = fock1_output_p(a, b, 0.0, 0.0) >= -kExactTol;
    const bool curve = 1.0 / a + 1.0 / b <= 1.0 + kExactTol;
    ++c.points;
    if (sign != curve || sign != is_ncb(form, tol) || sign != ncb_necessity_fock1(form, tol))
      c.fail(point_label(FormKind::FormI, 1.0, a, b));
  }
  double worst = 0.0;
  for (auto [a, b] : {std::pair{2.0, 2.0}, {3.0, 1.5}, {4.0, 4.0}}) {
    const double e = max_grid_error(fock1_output_grid(a, b), [&](double x, double y) { return fock1_output_p(a, b, x, y); });
    worst = std::max(worst, e);
    ++c.points;
    if (e > kFftTol) c.fail("fft " + point_label(FormKind::FormI, 1.0, a, b) + " err=" + format_number(e));
  }
  return finish("fock1_necessity", c, "fft_max_err=" + format_number(worst));
}

Check fock1_cross_term_variant() {
  Counter c;
  std::ostringstream extra;
  for (auto [a, b] : {std::pair{2.0, 2.0}, {3.0, 1.5}, {4.0, 4.0}}) {
    const QuasiGrid q = fock1_output_grid(a, b);
    const double separable = max_grid_error(q, [&](double x, double y) { return fock1_output_p(a, b, x, y); });
    const double cross =
        max_grid_error(q, [&](double x, double y) { return fock1_output_p(a, b, x, y, Fock1Form::CrossTerm); });
    ++c.points;
    extra << " (" << format_number(a) << ',' << format_number(b) << "): separable=" << format_number(separable)
          << " cross_term=" << format_number(cross);
    // The grid must single out the separable polynomial.
    if (!(separable <= kFftTol && cross > kFftTol)) c.fail(point_label(FormKind::FormI, 1.0, a, b));
  }
  return finish("fock1_variant_verdict", c, extra.str().substr(1));
}

Check gaussian_ncb_oracle() {
  std::mt19937_64 rng(105);
  Counter c;
  long skipped = 0;
  const auto t0 = std::chrono::steady_clock::now();
  for (FormKind kind : {FormKind::FormI, FormKind::FormII})
    for (double kappa : kKappaGrid)
      for (int i = 0; i < 20; ++i)
        for (int j = 0; j < 20; ++j) {
          const double a = 0.3 * (i + 1), b = 0.3 * (j + 1);
          const ChannelXY ch = scrambled(canonical_channel(kind, kappa, a, b), rng, 0.5);
          if (!is_cp(ch)) continue;
          // Euclidean distance to the NCB boundary in the (a, b) plane.
          const double f = (a - 1.0) * (b - 1.0) - std::pow(kappa, 4);
          const double dist = std::min({std::fabs(f) / std::hypot(a - 1.0, b - 1.0), std::fabs(a - 1.0), std::fabs(b - 1.0)});
          if (dist < kBoundaryGap) {
            ++skipped;
            continue;
          }
          ++c.points;
          if (ncb_oracle_gaussian(ch) != is_ncb(make_canonical(kind, kappa, a, b)))
            c.fail(point_label(kind, kappa, a, b));
        }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (secs >= kOracleSeconds) c.fail("runtime " + format_number(secs) + " s");
  return finish("gaussian_ncb_oracle", c, "near_boundary=" + std::to_string(skipped) + " seconds=" + format_number(secs));
}

Check eb_tmsv_oracle() {
  std::mt19937_64 rng(106);
  Counter c;
  long band = 0, false_eb = 0;
  for (FormKind kind : kAllKinds)
    for (double kappa : kKappaGrid) {
      if (is_third_form(kind) && kappa != kKappaGrid[0]) continue;
      for (int i = 0; i < 20; ++i)
        for (int j = 0; j < 20; ++j) {
          const double a = 0.3 * (i + 1), b = 0.3 * (j + 1);
          const CanonicalForm form = make_canonical(kind, kappa, a, b);
          const ChannelXY ch = scrambled(canonical_channel(kind, kappa, a, b), rng, 0.5);
          if (!is_cp(ch)) continue;
          const double k2 = is_third_form(kind) ? 0.0 : kappa * kappa;
          const double rel = a * b / ((1.0 + k2) * (1.0 + k2)) - 1.0;
          const bool oracle = eb_oracle_tmsv(ch);
          if (oracle && rel < 0.0) {
            ++false_eb;
            c.fail("false EB " + point_label(kind, kappa, a, b));
          }
          if (std::fabs(rel) < kEbBand) {
            ++band;
            continue;
          }
          ++c.points;
          if (oracle != is_eb(form)) c.fail(point_label(kind, kappa, a, b));
        }
    }
  return finish("eb_tmsv_oracle", c, "band=" + std::to_string(band) + " false_eb=" + std::to_string(false_eb));
}

Check squeeze_r0() {
  std::mt19937_64 rng(107);
  Counter c;
  double worst_oracle = 0.0;
  for (int n = 0; n < 1000; ++n) {
    const FormKind kind = kAllKinds[n % 4];
    const double kappa = uniform(rng, 0.2, 2.0);
    const double k2 = is_third_form(kind) ? 0.0 : kappa * kappa;
    const double ab = (1.0 + k2) * (1.0 + k2) * (1.0 + uniform(rng, 0.0, 3.0));
    const double ratio = std::exp(uniform(rng, -2.5, 2.5));
    const ChannelXY raw =
        scrambled(canonical_channel(kind, kappa, std::sqrt(ab * ratio), std::sqrt(ab / ratio)), rng, 0.5);
    const CanonicalForm form = canonical_reduce(raw);
    ++c.points;
    const auto r0 = find_r0(form);
    if (!r0) {
      c.fail("no r0 " + point_label(form.kind, form.kappa, form.a, form.b));
      continue;
    }
    // Squeeze the canonical channel in the eigenbasis of its noise.
    const ChannelXY canon{form.canonical_X(), form.canonical_Y()};
    const ChannelXY post = compose_post_unitary(canon, eigen_sym(form.y0).rotation * squeeze(*r0));
    // Singular X: the supremum is only approached as r grows, with a deficit of
    // about |X|^2 e^{-2 r_max}, so the rim is pushed further out.
    const double slack = ncb_gaussian_slack(post, is_third_form(form.kind) ? kSingularRMax : 8.0).value;
    worst_oracle = std::min(worst_oracle, slack);
    if (!report(post).ncb || slack < -kDefaultTol.cls)
      c.fail("not NCB at r0 " + point_label(form.kind, form.kappa, form.a, form.b));
  }
  double worst_peak = 0.0;
  for (int n = 0; n < 200; ++n) {
    const FormKind kind = kAllKinds[n % 4];
    const double kappa = is_third_form(kind) ? 0.0 : uniform(rng, 0.2, 2.0);
    const double k2 = kappa * kappa;
    const double ratio = std::exp(uniform(rng, -2.5, 2.5));
    const double ab = (1.0 + k2) * (1.0 + k2);
    const CanonicalForm form = make_canonical(kind, kappa, std::sqrt(ab * ratio), std::sqrt(ab / ratio));
    ++c.points;
    const auto peak = orbit_peak(form);
    const double err = peak ? std::fabs(peak->value - k2 * k2) : 1.0;
    worst_peak = std::max(worst_peak, err);
    if (err > kPeakTol) c.fail("boundary peak " + point_label(kind, kappa, form.a, form.b));
  }
  return finish("squeeze_r0", c,
                "min_oracle_slack=" + format_number(worst_oracle) + " boundary_peak_err=" + format_number(worst_peak));
}

Check canonical_round_trip() {
  std::mt19937_64 rng(108);
  Counter c;
  double worst = 0.0;
  for (int n = 0; n < 10000; ++n) {
    Mat2 x{uniform(rng, -2, 2), uniform(rng, -2, 2), uniform(rng, -2, 2), uniform(rng, -2, 2)};
    FormKind expected = det(x) > 0.0 ? FormKind::FormI : FormKind::FormII;
    if (n % 10 == 7) {
      const double u = uniform(rng, 0, 6.3), w = uniform(rng, 0, 6.3), s = uniform(rng, 0.1, 3.0);
      x = rotation(u) * Mat2{s, 0.0, 0.0, 0.0} * rotation(w);
      expected = FormKind::FormIII_rank1;
    } else if (n % 100 == 3) {
      x = Mat2{};
      expected = FormKind::FormIII_zero;
    }
    const SymMat2 y =
        congruence(SymMat2::diag(uniform(rng, 0.0, 5.0), uniform(rng, 0.0, 5.0)), rotation(uniform(rng, 0, 6.3)));
    const ChannelXY ch{x, y};
    const CanonicalForm f = canonical_reduce(ch);
    const WitnessResiduals w = witness_residuals(ch, f);
    const double err = std::max({w.x_residual, w.y_residual, w.det_s, w.orthogonality});
    worst = std::max(worst, err);
    ++c.points;
    if (err > kWitnessTol || f.kind != expected) c.fail("channel #" + std::to_string(n) + " " + channel_to_json(ch));
  }
  return finish("canonical_round_trip", c, "max_residual=" + format_number(worst));
}

Check grid_variance_consistency() {
  std::mt19937_64 rng(109);
  Counter c;
  double worst = 0.0;
  for (int n = 0; n < 20; ++n) {
    const Mat2 x{uniform(rng, -1.2, 1.2), uniform(rng, -1.2, 1.2), uniform(rng, -1.2, 1.2), uniform(rng, -1.2, 1.2)};
    const ChannelXY ch{x, random_cp_noise(x, rng)};
    const SymMat2 v = uniform(rng, 1.0, 2.0) * squeezed_vacuum({uniform(rng, 0.0, 0.35), uniform(rng, 0.0, 3.2)});
    const CharGrid out = act_chargrid(ch, char_gaussian(v, OrderParameter::weyl()));
    const CharGrid ref = char_gaussian(act_variance(ch, v), OrderParameter::weyl(), out.spec(), GridGrowth::Fixed);
    double e = 0.0;
    for (int i = 0; i < out.spec().side; ++i)
      for (int j = 0; j < out.spec().side; ++j) e = std::max(e, std::abs(out.at(i, j) - ref.at(i, j)));
    worst = std::max(worst, e);
    ++c.points;
    if (e > kFftTol) c.fail("pair #" + std::to_string(n) + " err=" + format_number(e));
  }
  return finish("grid_variance_consistency", c, "max_err=" + format_number(worst));
}

Check gaussian_density_round_trip() {
  Counter c;
  double worst = 0.0;
  for (const SymMat2& v : {SymMat2::identity(), SymMat2::diag(2.0, 0.5), SymMat2::diag(3.0, 3.0)}) {
    const QuasiGrid w = quasi_from_char(char_gaussian(v, OrderParameter::weyl()));
    const double d = v.det();
    const SymMat2 inv{v.yy / d, -v.xy / d, v.xx / d};
    const double e = max_grid_error(w, [&](double x, double y) {
      return 2.0 / std::sqrt(d) * std::exp(-2.0 * (inv.xx * x * x + 2.0 * inv.xy * x * y + inv.yy * y * y));
    });
    worst = std::max(worst, e);
    ++c.points;
    if (e > kFftTol || std::fabs(w.normalisation() - 1.0) > kFftTol)
      c.fail("V=diag(" + format_number(v.xx) + "," + format_number(v.yy) + ") err=" + format_number(e));
  }
  return finish("gaussian_density_round_trip", c, "max_err=" + format_number(worst));
}

Check q_nonnegativity() {
  std::mt19937_64 rng(110);
  Counter c;
  double lowest = 1.0;
  auto test = [&](const CharGrid& weyl, const std::string& label) {
    const QuasiGrid q = quasi_from_char(convert_order(weyl, OrderParameter::antinormal()), kQWindow);
    const double m = min_value(q);
    lowest = std::min(lowest, m);
    ++c.points;
    if (m < -kFftTol || std::fabs(q.normalisation() - 1.0) > kFftTol)
      c.fail(label + " min=" + format_number(m) + " norm=" + format_number(q.normalisation()));
  };
  test(char_vacuum(OrderParameter::weyl()), "vacuum");
  test(char_fock1(OrderParameter::weyl()), "fock1");
  for (int n = 0; n < 6; ++n) {
    const Mat2 x{uniform(rng, -1.2, 1.2), uniform(rng, -1.2, 1.2), uniform(rng, -1.2, 1.2), uniform(rng, -1.2, 1.2)};
    const ChannelXY ch{x, random_cp_noise(x, rng)};
    const SymMat2 v = squeezed_vacuum({uniform(rng, 0.0, 0.35), uniform(rng, 0.0, 3.2)});
    test(act_chargrid(ch, char_gaussian(v, OrderParameter::weyl())), "gaussian output #" + std::to_string(n));
    test(act_chargrid(ch, char_fock1(OrderParameter::weyl())), "fock1 output #" + std::to_string(n));
  }
  return finish("q_nonnegativity", c, "min=" + format_number(lowest));
}

Check order_round_trip() {
  Counter c;
  double worst = 0.0;
  const CharGrid base = char_fock1(OrderParameter::weyl());
  for (double s : {-1.0, -0.5, 0.5, 1.0}) {
    const CharGrid back = convert_order(convert_order(base, OrderParameter(s)), OrderParameter::weyl());
    double e = 0.0;
    for (int i = 0; i < base.spec().side; ++i)
      for (int j = 0; j < base.spec().side; ++j) e = std::max(e, std::abs(back.at(i, j) - base.at(i, j)));
    worst = std::max(worst, e);
    ++c.points;
    if (e > kExactTol) c.fail("s=" + format_number(s) + " err=" + format_number(e));
  }
  return finish("order_round_trip", c, "max_err=" + format_number(worst));
}

std::optional<Suite> run_suite(std::string_view name) {
  if (name == "table1") return Suite{table1_reproduction(), inclusion_chain(), curve_intersection()};
  if (name == "oracles") return Suite{gaussian_ncb_oracle(), eb_tmsv_oracle(), squeeze_r0(), canonical_round_trip()};
  if (name == "fock") return Suite{fock1_necessity(), fock1_cross_term_variant()};
  if (name == "fft")
    return Suite{gaussian_density_round_trip(), q_nonnegativity(), order_round_trip(), grid_variance_consistency()};
  return std::nullopt;
}

void print(const Check& c, std::ostream& os) {
  os << (c.pass ? "PASS " : "FAIL ") << c.name << ": " << c.detail << '\n';
}

}  // namespace gaussch::checks
