#include "gaussch/breaking.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "gaussch/format.hpp"
#include "gaussch/gaussian_core.hpp"
#include "gaussch/phase_space.hpp"

namespace gaussch {

namespace {

using PureStateObjective = std::function<double(const SymMat2& v)>;

// Pure states are parametrised by (u, w) = r (cos 2theta, sin 2theta), which
// is smooth through r = 0. A coarse scan of the disk r <= r_max seeds a
// pattern search that keeps its step while the incumbent walks to the window
// edge and halves it otherwise.
PureStateExtremum extremize_pure_states(const PureStateObjective& f, double r_max, int n_seeds, bool maximize) {
  if (!(r_max >= 0.0) || n_seeds < 1) throw std::invalid_argument("pure-state sweep: need r_max >= 0 and n_seeds >= 1");
  const double sign = maximize ? 1.0 : -1.0;

  struct Probe {
    double u, w, value;
  };
  auto eval = [&](double u, double w) -> Probe {
    const double r = std::hypot(u, w);
    if (r > r_max) {
      u *= r_max / r;
      w *= r_max / r;
    }
    const double rr = std::min(r, r_max);
    const double theta = rr == 0.0 ? 0.0 : 0.5 * std::atan2(w, u);
    return {u, w, sign * f(squeezed_vacuum({rr, theta}))};
  };

  const double h0 = 0.125;
  const int half = static_cast<int>(std::ceil(r_max / h0));
  std::vector<Probe> coarse;
  for (int i = -half; i <= half; ++i)
    for (int j = -half; j <= half; ++j)
      if (std::hypot(i * h0, j * h0) <= r_max + 1e-12) coarse.push_back(eval(i * h0, j * h0));
  const int seeds = std::min<int>(n_seeds, static_cast<int>(coarse.size()));
  std::partial_sort(coarse.begin(), coarse.begin() + seeds, coarse.end(),
                    [](const Probe& l, const Probe& r) { return l.value > r.value; });

  Probe best = coarse.front();
  for (int s = 0; s < seeds; ++s) {
    Probe inc = coarse[s];
    double step = h0;
    for (int iter = 0; iter < 400 && step > 1e-11; ++iter) {
      const Probe centre = inc;
      int edge = 0;
      for (int i = -4; i <= 4; ++i)
        for (int j = -4; j <= 4; ++j) {
          if (i == 0 && j == 0) continue;
          const Probe p = eval(centre.u + 0.25 * i * step, centre.w + 0.25 * j * step);
          if (p.value > inc.value) {
            inc = p;
            edge = std::max(std::abs(i), std::abs(j)) == 4;
          }
        }
      if (!edge) step *= 0.5;
    }
    if (inc.value > best.value) best = inc;
  }

  // Polar polish: for rank-deficient X the optimum sits on the rim r = r_max
  // and needs angular resolution far below the Cartesian step.
  const double pi = std::numbers::pi;
  double r = std::hypot(best.u, best.w);
  double theta = r == 0.0 ? 0.0 : 0.5 * std::atan2(best.w, best.u);
  double value = best.value;
  double step_r = 0.05, step_t = 0.05;
  for (int iter = 0; iter < 400 && (step_r > 1e-14 || step_t > 1e-15); ++iter) {
    const double r_c = r, t_c = theta;
    int edge = 0;
    for (int i = -4; i <= 4; ++i)
      for (int j = -4; j <= 4; ++j) {
        if (i == 0 && j == 0) continue;
        const double rr = std::clamp(r_c + 0.25 * i * step_r, 0.0, r_max);
        const double tt = t_c + 0.25 * j * step_t;
        const double v = sign * f(squeezed_vacuum({rr, tt}));
        if (v > value) {
          value = v;
          r = rr;
          theta = tt;
          edge = std::max(std::abs(i), std::abs(j)) == 4;
        }
      }
    if (!edge) {
      step_r *= 0.5;
      step_t *= 0.5;
    }
  }
  theta = std::fmod(theta, pi);
  if (theta < 0.0) theta += pi;
  return {r, r == 0.0 ? 0.0 : theta, sign * value};
}

void require_cp(const ChannelXY& ch, const Tolerances& tol, const char* who) {
  if (!is_cp(ch, tol)) throw std::domain_error(std::string(who) + ": channel is not completely positive");
}

double golden_max(const std::function<double(double)>& f, double lo, double hi, double tol, double& arg) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  while (hi - lo > tol) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = f(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = f(x1);
    }
  }
  arg = 0.5 * (lo + hi);
  return f(arg);
}

}  // namespace

Margins condition_margins(const CanonicalForm& form) {
  const double a = form.a, b = form.b;
  const double k2 = form.kappa * form.kappa;
  Margins m;
  switch (form.kind) {
    case FormKind::FormI:
    case FormKind::FormII:
      m.ncb = std::min({(a - 1.0) * (b - 1.0) - k2 * k2, a - 1.0, b - 1.0});
      m.eb = a * b - (1.0 + k2) * (1.0 + k2);
      m.cp = form.kind == FormKind::FormI ? a * b - (1.0 - k2) * (1.0 - k2) : m.eb;
      break;
    case FormKind::FormIII_rank1:
    case FormKind::FormIII_zero:
      m.ncb = min_eigenvalue(form.y0) - 1.0;
      m.eb = form.y0.det() - 1.0;
      m.cp = m.eb;
      break;
  }
  return m;
}

bool is_ncb(const CanonicalForm& form, const Tolerances& tol) { return condition_margins(form).ncb >= -tol.cls; }
bool is_eb(const CanonicalForm& form, const Tolerances& tol) { return condition_margins(form).eb >= -tol.cls; }
bool is_cp_form(const CanonicalForm& form, const Tolerances& tol) { return condition_margins(form).cp >= -tol.cls; }

BreakingReport report(const ChannelXY& ch, const Tolerances& tol) {
  BreakingReport rep;
  rep.form = canonical_reduce(ch, tol);
  rep.margins = condition_margins(rep.form);
  rep.cp = rep.margins.cp >= -tol.cls;
  rep.eb = rep.margins.eb >= -tol.cls;
  rep.ncb = rep.margins.ncb >= -tol.cls;
  const double k2 = is_third_form(rep.form.kind) ? 0.0 : rep.form.kappa * rep.form.kappa;
  rep.shifted_noise = {rep.form.a + k2 - 1.0, rep.form.b + k2 - 1.0};
  return rep;
}

PureStateExtremum ncb_gaussian_slack(const ChannelXY& ch, double r_max, int n_seeds) {
  const SymMat2 excess = ch.Y - SymMat2::identity();
  return extremize_pure_states(
      [&](const SymMat2& v) { return min_eigenvalue(excess - congruence(v, ch.X)); }, r_max, n_seeds, true);
}

bool ncb_oracle_gaussian(const ChannelXY& ch, double r_max, int n_seeds, const Tolerances& tol) {
  require_cp(ch, tol, "ncb_oracle_gaussian");
  return ncb_gaussian_slack(ch, r_max, n_seeds).value >= -tol.cls;
}

PureStateExtremum gaussian_output_slack(const ChannelXY& ch, double r_max, int n_seeds) {
  const SymMat2 excess = ch.Y - SymMat2::identity();
  return extremize_pure_states(
      [&](const SymMat2& v) { return min_eigenvalue(congruence(v, ch.X) + excess); }, r_max, n_seeds, false);
}

bool gaussian_outputs_classical(const ChannelXY& ch, double r_max, int n_seeds, const Tolerances& tol) {
  require_cp(ch, tol, "gaussian_outputs_classical");
  return gaussian_output_slack(ch, r_max, n_seeds).value >= -tol.cls;
}

bool ncb_necessity_fock1(const CanonicalForm& form, const Tolerances& tol) {
  if (form.kind != FormKind::FormI || std::fabs(form.kappa - 1.0) > 1e-12)
    throw std::invalid_argument("ncb_necessity_fock1: requires the first form with kappa = 1");
  // A noiseless quadrature leaves the photon's delta derivatives in place.
  if (!(form.a > 0.0) || !(form.b > 0.0)) return false;
  return fock1_output_p(form.a, form.b, 0.0, 0.0) >= -tol.cls;
}

bool eb_oracle_tmsv(const ChannelXY& ch, std::span<const double> r_list, const Tolerances& tol) {
  require_cp(ch, tol, "eb_oracle_tmsv");
  for (double r : r_list) {
    const VarianceMatrix out = apply_channel_one_side(ch, tmsv_variance({r, 0.0}), tol);
    if (!is_ppt_separable(out, tol)) return false;
  }
  return true;
}

CanonicalForm orbit_form(const CanonicalForm& form, double r) {
  CanonicalForm out = form;
  out.a = form.a * std::exp(-2.0 * r);
  out.b = form.b * std::exp(2.0 * r);
  out.y0 = SymMat2::diag(out.a, out.b);
  return out;
}

OrbitPoint squeeze_orbit(const CanonicalForm& form, double r, const Tolerances& tol) {
  const CanonicalForm f = orbit_form(form, r);
  return {r, f.a, f.b, is_ncb(f, tol)};
}

std::optional<OrbitPeak> orbit_peak(const CanonicalForm& form) {
  if (!(form.a > 0.0) || !(form.b > 0.0)) return std::nullopt;
  // a e^{-2r} > 1 for r < ln(a)/2; b e^{2r} > 1 for r > -ln(b)/2.
  const double lo = -0.5 * std::log(form.b);
  const double hi = 0.5 * std::log(form.a);
  // ab = 1 collapses the interval to a point; allow for rounding in the logs.
  if (hi < lo - 1e-12) return std::nullopt;
  auto f = [&](double r) { return (form.a * std::exp(-2.0 * r) - 1.0) * (form.b * std::exp(2.0 * r) - 1.0); };
  OrbitPeak peak;
  if (hi - lo <= 1e-10) {
    peak.r = 0.5 * (lo + hi);
    peak.value = f(peak.r);
  } else {
    peak.value = golden_max(f, lo, hi, 1e-10, peak.r);
  }
  return peak;
}

std::optional<double> find_r0(const CanonicalForm& form, const Tolerances& tol) {
  if (!is_eb(form, tol)) throw std::invalid_argument("find_r0: channel is not entanglement-breaking");
  auto ncb_at = [&](double r) { return is_ncb(orbit_form(form, r), tol); };
  auto margin_at = [&](double r) { return condition_margins(orbit_form(form, r)).ncb; };
  if (ncb_at(0.0)) return 0.0;
  const auto peak = orbit_peak(form);
  if (!peak || !ncb_at(peak->r)) return std::nullopt;
  // Boundary-EB forms only touch the NCB region at the peak.
  if (margin_at(peak->r) < 0.0) return peak->r;
  // The NCB set along the orbit is an interval containing the peak, so the
  // margin changes sign once between 0 and peak->r. Bisect on the exact
  // condition so the returned point does not sit at the tolerance edge.
  double outside = 0.0, inside = peak->r;
  for (int i = 0; i < 200 && std::fabs(inside - outside) > 1e-13; ++i) {
    const double mid = 0.5 * (outside + inside);
    (margin_at(mid) >= 0.0 ? inside : outside) = mid;
  }
  return inside;
}

std::string_view to_string(Region r) {
  switch (r) {
    case Region::Unphysical: return "unphysical";
    case Region::CpOnly: return "cp_only";
    case Region::EbNotNcb: return "eb_not_ncb";
    case Region::Ncb: return "ncb";
  }
  return "unknown";
}

RegionRecord classify_region(FormKind kind, double kappa, double a, double b, const Tolerances& tol) {
  const CanonicalForm form = make_canonical(kind, kappa, a, b);
  RegionRecord rec{kind, form.kappa, a, b, Region::Unphysical, condition_margins(form)};
  if (rec.margins.cp < -tol.cls)
    rec.region = Region::Unphysical;
  else if (rec.margins.ncb >= -tol.cls)
    rec.region = Region::Ncb;
  else if (rec.margins.eb >= -tol.cls)
    rec.region = Region::EbNotNcb;
  else
    rec.region = Region::CpOnly;
  return rec;
}

void write_region_csv_header(std::ostream& os) { os << "kind,kappa,a,b,class,cp_margin,eb_margin,ncb_margin\n"; }

void write_region_csv_row(const RegionRecord& rec, std::ostream& os) {
  os << to_string(rec.kind) << ',' << format_number(rec.kappa) << ',' << format_number(rec.a) << ','
     << format_number(rec.b) << ',' << to_string(rec.region) << ',' << format_number(rec.margins.cp) << ','
     << format_number(rec.margins.eb) << ',' << format_number(rec.margins.ncb) << '\n';
}

std::optional<double> BoundaryCurve::b_of_a(double a) const {
  if (!(a > p)) return std::nullopt;
  return p + c / (a - p);
}

std::optional<double> BoundaryCurve::slope(double a) const {
  if (!(a > p)) return std::nullopt;
  return -c / ((a - p) * (a - p));
}

std::vector<std::pair<double, double>> BoundaryCurve::trace(double amin, double amax, double bmin, double bmax,
                                                            int n) const {
  std::vector<std::pair<double, double>> pts;
  if (n < 2) return pts;
  if (c == 0.0) {
    // Degenerate: the half-lines a = p (b from bmax down to p) and b = p.
    const int half = n / 2;
    const double top = std::max(bmax, p);
    for (int i = 0; i < half; ++i) pts.emplace_back(p, top - (top - p) * i / (half - 1));
    const double right = std::max(amax, p);
    for (int i = 0; i < n - half; ++i) pts.emplace_back(p + (right - p) * (i + 1) / (n - half), p);
    return pts;
  }
  if (!(bmax > p)) return pts;
  const double a_lo = std::max({amin, p + c / (bmax - p)});
  const double a_hi = bmin > p ? std::min(amax, p + c / (bmin - p)) : amax;
  if (!(a_hi > a_lo) || !(a_lo > p)) return pts;
  // Geometric spacing in (a - p) keeps both asymptotic arms resolved.
  const double ratio = (a_hi - p) / (a_lo - p);
  for (int i = 0; i < n; ++i) {
    const double a = p + (a_lo - p) * std::pow(ratio, static_cast<double>(i) / (n - 1));
    pts.emplace_back(a, p + c / (a - p));
  }
  return pts;
}

BoundaryCurve boundary_curve(FormKind kind, double kappa, int id) {
  const double k2 = kappa * kappa;
  const bool third = is_third_form(kind);
  switch (id) {
    case 1: return {1, 1.0, third ? 0.0 : k2 * k2};
    case 2: return {2, 0.0, third ? 1.0 : (1.0 + k2) * (1.0 + k2)};
    case 3:
      if (third) return {3, 0.0, 1.0};
      return {3, 0.0, kind == FormKind::FormI ? (1.0 - k2) * (1.0 - k2) : (1.0 + k2) * (1.0 + k2)};
    default: throw std::invalid_argument("boundary_curve: id must be 1, 2 or 3");
  }
}

}  // namespace gaussch
