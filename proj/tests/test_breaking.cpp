#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <sstream>

#include "gaussch/breaking.hpp"

using namespace gaussch;

namespace {

bool near(double a, double b, double tol) { return std::fabs(a - b) <= tol; }

double uniform(std::mt19937_64& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

ChannelXY form_one(double kappa, double a, double b) { return {kappa * Mat2::identity(), SymMat2::diag(a, b)}; }

}  // namespace

TEST_CASE("closed-form predicates on canonical examples") {
  const CanonicalForm boundary = make_canonical(FormKind::FormI, 1.0, 2.0, 2.0);
  CHECK(is_ncb(boundary));
  CHECK(is_eb(boundary));
  CHECK(is_cp_form(boundary));

  const CanonicalForm eb_only = make_canonical(FormKind::FormI, 0.6, 4.0, 0.8);
  CHECK_FALSE(is_ncb(eb_only));
  CHECK(is_eb(eb_only));

  const CanonicalForm id = make_canonical(FormKind::FormI, 1.0, 0.0, 0.0);
  CHECK(is_cp_form(id));
  CHECK_FALSE(is_eb(id));

  CHECK_FALSE(is_cp_form(make_canonical(FormKind::FormII, 1.0, 1.9, 2.0)));
  CHECK(is_eb(make_canonical(FormKind::FormII, 1.0, 2.0, 2.0)));
  CHECK(is_ncb(make_canonical(FormKind::FormIII_zero, 0.0, 1.0, 1.0)));
  CHECK_FALSE(is_ncb(make_canonical(FormKind::FormIII_zero, 0.0, 4.0, 0.5)));
  CHECK(is_eb(make_canonical(FormKind::FormIII_zero, 0.0, 4.0, 0.5)));
}

TEST_CASE("condition margins") {
  const Margins m = condition_margins(make_canonical(FormKind::FormI, 0.6, 4.0, 0.8));
  CHECK(near(m.ncb, 3.0 * -0.2 - 0.1296, 1e-14));
  CHECK(near(m.eb, 3.2 - 1.36 * 1.36, 1e-14));
  CHECK(near(m.cp, 3.2 - 0.64 * 0.64, 1e-14));
  const Margins m3 = condition_margins(make_canonical(FormKind::FormIII_rank1, 2.0, 3.0, 2.0));
  CHECK(near(m3.ncb, 1.0, 1e-15));
  CHECK(near(m3.eb, 5.0, 1e-15));
  CHECK(m3.cp == m3.eb);
}

TEST_CASE("report reduces before classifying") {
  const BreakingReport r = report({rotation(0.4), SymMat2{3.0, 0.0, 3.0}});
  CHECK(r.form.kind == FormKind::FormI);
  CHECK(r.ncb);
  CHECK(near(r.shifted_noise.first, 3.0, 1e-14));
  CHECK_FALSE(report({3.0 * Mat2::identity(), SymMat2{9.0, 0.0, 9.0}}).ncb);
  const BreakingReport z = report({Mat2{}, SymMat2::diag(2, 0.5)});
  CHECK(z.eb);
  CHECK_FALSE(z.ncb);
  CHECK(near(z.shifted_noise.second, -0.5, 1e-15));
  CHECK_THROWS_AS(report({Mat2::identity(), SymMat2::diag(1, -1)}), std::invalid_argument);
}

TEST_CASE("Gaussian NCB oracle examples") {
  CHECK(ncb_oracle_gaussian(form_one(1, 3, 3)));
  CHECK_FALSE(ncb_oracle_gaussian(form_one(0.6, 4, 0.8)));
  CHECK(ncb_oracle_gaussian(form_one(1, 2, 2)));
  CHECK_FALSE(ncb_oracle_gaussian(form_one(1, 1.9, 1.9)));
  CHECK_THROWS_AS(ncb_oracle_gaussian({pauli_z(), SymMat2{}}), std::domain_error);
  const PureStateExtremum e = ncb_gaussian_slack(form_one(1, 3, 3));
  CHECK(near(e.value, 1.0, 1e-9));
  CHECK(e.r <= 1e-6);
}

TEST_CASE("Gaussian oracle matches the closed-form NCB verdict off the boundary") {
  std::mt19937_64 rng(21);
  int compared = 0;
  for (int n = 0; n < 300; ++n) {
    const double kappa = uniform(rng, 0.3, 1.6), a = uniform(rng, 0.2, 6), b = uniform(rng, 0.2, 6);
    const ChannelXY ch{n % 2 ? kappa * Mat2::identity() : kappa * pauli_z(), SymMat2::diag(a, b)};
    if (!is_cp(ch)) continue;
    const BreakingReport r = report(ch);
    if (std::fabs(r.margins.ncb) < 1e-3) continue;
    CHECK(ncb_oracle_gaussian(ch) == r.ncb);
    ++compared;
  }
  CHECK(compared > 100);
}

TEST_CASE("pure Gaussian outputs are classical exactly when Y >= 1 for invertible X") {
  std::mt19937_64 rng(22);
  for (int n = 0; n < 200; ++n) {
    const double a = uniform(rng, 0.5, 3), b = uniform(rng, 0.5, 3);
    if (std::fabs(a - 1) < 1e-3 || std::fabs(b - 1) < 1e-3) continue;
    const ChannelXY ch{Mat2{uniform(rng, 0.5, 1.5), uniform(rng, -0.3, 0.3), uniform(rng, -0.3, 0.3), uniform(rng, 0.5, 1.5)},
                       congruence(SymMat2::diag(a, b), rotation(uniform(rng, 0, 6.3)))};
    CHECK(gaussian_outputs_classical(ch) == (a >= 1 && b >= 1));
  }
  // Necessary only: kappa = 1.5 with Y = 1.5 passes but is not NCB.
  CHECK(gaussian_outputs_classical(form_one(1.5, 1.5, 1.5)));
  CHECK_FALSE(is_ncb(make_canonical(FormKind::FormI, 1.5, 1.5, 1.5)));
}

TEST_CASE("single-photon necessity test") {
  CHECK(ncb_necessity_fock1(make_canonical(FormKind::FormI, 1.0, 2.0, 2.0)));
  CHECK(ncb_necessity_fock1(make_canonical(FormKind::FormI, 1.0, 3.0, 3.0)));
  CHECK_FALSE(ncb_necessity_fock1(make_canonical(FormKind::FormI, 1.0, 1.5, 1.5)));
  CHECK_FALSE(ncb_necessity_fock1(make_canonical(FormKind::FormI, 1.0, 0.0, 4.0)));
  CHECK_THROWS_AS(ncb_necessity_fock1(make_canonical(FormKind::FormI, 0.9, 2.0, 2.0)), std::invalid_argument);
  CHECK_THROWS_AS(ncb_necessity_fock1(make_canonical(FormKind::FormII, 1.0, 2.0, 2.0)), std::invalid_argument);
}

TEST_CASE("single-photon necessity holds wherever the closed form says NCB") {
  std::mt19937_64 rng(23);
  for (int n = 0; n < 2000; ++n) {
    const CanonicalForm f = make_canonical(FormKind::FormI, 1.0, uniform(rng, 0.1, 6), uniform(rng, 0.1, 6));
    if (is_ncb(f)) CHECK(ncb_necessity_fock1(f));
  }
}

TEST_CASE("TMSV entanglement oracle examples") {
  CHECK(eb_oracle_tmsv({Mat2{}, SymMat2::diag(2, 2)}));
  CHECK(eb_oracle_tmsv(form_one(1, 4, 4)));
  CHECK_FALSE(eb_oracle_tmsv(form_one(1, 0, 0)));
  CHECK_FALSE(eb_oracle_tmsv(form_one(0.6, 1.2, 1.2)));
  CHECK_THROWS_AS(eb_oracle_tmsv({pauli_z(), SymMat2{}}), std::domain_error);
}

TEST_CASE("PPT verdicts along the squeezing ladder change at most once") {
  std::mt19937_64 rng(24);
  const double ladder[] = {0.05, 0.1, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0};
  for (int n = 0; n < 500; ++n) {
    const double kappa = uniform(rng, 0.2, 1.8);
    const ChannelXY ch{n % 2 ? kappa * Mat2::identity() : kappa * pauli_z(),
                       SymMat2::diag(uniform(rng, 0.1, 6), uniform(rng, 0.1, 6))};
    if (!is_cp(ch)) continue;
    bool seen_entangled = false;
    for (double r : ladder) {
      const bool sep = eb_oracle_tmsv(ch, std::span<const double>(&r, 1));
      if (seen_entangled) CHECK_FALSE(sep);
      seen_entangled = seen_entangled || !sep;
    }
  }
}

TEST_CASE("squeeze orbit keeps kappa and the noise product") {
  const CanonicalForm f = make_canonical(FormKind::FormI, 0.6, 4.0, 0.8);
  for (double r : {-2.0, -0.3, 0.0, 0.5, 2.0}) {
    const OrbitPoint p = squeeze_orbit(f, r);
    CHECK(near(p.a_r, 4.0 * std::exp(-2 * r), 1e-14));
    CHECK(near(p.a_r * p.b_r, 3.2, 1e-12));
    const CanonicalForm g = orbit_form(f, r);
    CHECK(g.kappa == f.kappa);
    CHECK(g.kind == f.kind);
    CHECK(is_eb(g));
  }
}

TEST_CASE("orbit_peak and find_r0 examples") {
  // (8 e^{-2r} - 1)(0.5 e^{2r} - 1) peaks at e^{2r} = 4 with value 1 = kappa^4.
  const CanonicalForm touch = make_canonical(FormKind::FormI, 1.0, 8.0, 0.5);
  const auto peak = orbit_peak(touch);
  REQUIRE(peak.has_value());
  CHECK(near(peak->r, 0.5 * std::log(4.0), 1e-6));
  CHECK(near(peak->value, 1.0, 1e-12));
  const auto r0 = find_r0(touch);
  REQUIRE(r0.has_value());
  CHECK(near(*r0, 0.5 * std::log(4.0), 1e-6));

  const auto at_origin = find_r0(make_canonical(FormKind::FormI, 0.6, 1.36, 1.36));
  REQUIRE(at_origin.has_value());
  CHECK(*at_origin == 0.0);

  const auto inside = find_r0(make_canonical(FormKind::FormI, 0.6, 4.0, 0.8));
  REQUIRE(inside.has_value());
  // (4/t - 1)(0.8 t - 1) = 0.6^4 with t = e^{2r}: 0.8 t^2 - (4.2 - 0.1296) t + 4 = 0.
  const double bq = 4.2 - 0.1296, t_root = (bq - std::sqrt(bq * bq - 12.8)) / 1.6;
  CHECK(near(*inside, 0.5 * std::log(t_root), 1e-9));
  CHECK(squeeze_orbit(make_canonical(FormKind::FormI, 0.6, 4.0, 0.8), *inside).ncb);

  CHECK_THROWS_AS(find_r0(make_canonical(FormKind::FormI, 1.0, 1.5, 1.5)), std::invalid_argument);
}

TEST_CASE("find_r0 lands on the NCB region for random EB forms") {
  std::mt19937_64 rng(25);
  int found = 0;
  for (int n = 0; n < 1000; ++n) {
    const double kappa = uniform(rng, 0.2, 1.8), ab_min = (1 + kappa * kappa) * (1 + kappa * kappa);
    const double ab = ab_min * uniform(rng, 1.0, 3.0), ratio = std::exp(uniform(rng, -3, 3));
    const CanonicalForm f = make_canonical(n % 2 ? FormKind::FormI : FormKind::FormII, kappa, std::sqrt(ab * ratio),
                                           std::sqrt(ab / ratio));
    const auto r0 = find_r0(f);
    // The orbit peak (sqrt(ab) - 1)^2 is at least kappa^4 on every EB form.
    REQUIRE(r0.has_value());
    ++found;
    CHECK(condition_margins(orbit_form(f, *r0)).ncb >= 0.0);
  }
  CHECK(found > 0);
}

TEST_CASE("classify_region examples") {
  CHECK(classify_region(FormKind::FormI, 0.6, 0.5, 0.5).region == Region::Unphysical);
  CHECK(classify_region(FormKind::FormI, 0.6, 1.0, 1.0).region == Region::CpOnly);
  CHECK(classify_region(FormKind::FormI, 0.6, 4.0, 0.8).region == Region::EbNotNcb);
  CHECK(classify_region(FormKind::FormI, 0.6, 3.0, 3.0).region == Region::Ncb);
  CHECK(classify_region(FormKind::FormII, 0.8, 1.0, 1.0).region == Region::Unphysical);
  CHECK(to_string(Region::CpOnly) == "cp_only");
  CHECK(to_string(Region::EbNotNcb) == "eb_not_ncb");
  std::ostringstream os;
  write_region_csv_header(os);
  write_region_csv_row(classify_region(FormKind::FormI, 0.6, 3.0, 3.0), os);
  CHECK(os.str().rfind("kind,kappa,a,b,class,cp_margin,eb_margin,ncb_margin\n", 0) == 0);
  CHECK(os.str().find(",ncb,") != std::string::npos);
}

TEST_CASE("NCB implies EB implies CP on a dense grid") {
  for (FormKind kind : {FormKind::FormI, FormKind::FormII, FormKind::FormIII_zero})
    for (double kappa : {0.3, 0.6, 1.0, 1.4, 2.0})
      for (int i = 0; i <= 80; ++i)
        for (int j = 0; j <= 80; ++j) {
          const CanonicalForm f = make_canonical(kind, kappa, 0.075 * i, 0.075 * j);
          if (is_ncb(f)) CHECK(is_eb(f));
          if (is_eb(f)) CHECK(is_cp_form(f));
        }
}

TEST_CASE("NCB and EB boundaries touch at a = 1 + kappa^2 and separate elsewhere") {
  for (double kappa : {0.4, 0.6, 1.0, 1.5}) {
    const BoundaryCurve ncb = boundary_curve(FormKind::FormI, kappa, 1);
    const BoundaryCurve eb = boundary_curve(FormKind::FormI, kappa, 2);
    const double t = 1 + kappa * kappa;
    CHECK(near(*ncb.b_of_a(t), *eb.b_of_a(t), 1e-12));
    CHECK(near(*ncb.slope(t), *eb.slope(t), 1e-12));
    for (double a : {1.05, 1.5, 3.0, 10.0, 100.0})
      if (std::fabs(a - t) > 1e-3) CHECK(*ncb.b_of_a(a) > *eb.b_of_a(a));
    // As a grows the NCB curve approaches b = 1 while the EB curve goes to 0.
    CHECK(near(*ncb.b_of_a(1e8), 1.0, 1e-6));
    CHECK(*eb.b_of_a(1e8) < 1e-6);
  }
}

TEST_CASE("BoundaryCurve trace and slope") {
  const BoundaryCurve c = boundary_curve(FormKind::FormI, 0.6, 1);
  CHECK(c.p == 1.0);
  CHECK(near(c.c, 0.1296, 1e-15));
  CHECK_FALSE(c.b_of_a(0.9).has_value());
  const auto pts = c.trace(0.02, 4.0, 0.02, 4.0, 200);
  CHECK(pts.size() == 200);
  for (auto [a, b] : pts) {
    CHECK(near((a - 1) * (b - 1), 0.1296, 1e-9));
    CHECK(a >= 0.02);
    CHECK(a <= 4.0 + 1e-12);
    CHECK(b <= 4.0 + 1e-12);
  }
  for (double a : {1.2, 2.0, 3.5}) {
    const double h = 1e-6;
    CHECK(near(*c.slope(a), (*c.b_of_a(a + h) - *c.b_of_a(a - h)) / (2 * h), 1e-6));
  }
  const BoundaryCurve flat = boundary_curve(FormKind::FormIII_zero, 0.0, 1);
  CHECK(flat.c == 0.0);
  const auto legs = flat.trace(0.02, 4.0, 0.02, 4.0, 100);
  CHECK(legs.size() == 100);
  for (auto [a, b] : legs) CHECK((a == 1.0 || b == 1.0));
  CHECK(boundary_curve(FormKind::FormII, 0.6, 3).c == boundary_curve(FormKind::FormII, 0.6, 2).c);
}
