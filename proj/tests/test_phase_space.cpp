#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <sstream>
#include <string>

#include "gaussch/channels.hpp"
#include "gaussch/phase_space.hpp"

using namespace gaussch;

namespace {

bool near(double a, double b, double tol) { return std::fabs(a - b) <= tol; }

// Unit-step grid so that (1, 0) and (1, 1) are nodes.
const GridSpec kUnitGrid{17, 8.0};
constexpr int kOne = 9;  // coord(9) == 1
constexpr int kZero = 8;

template <class F>
double max_error(const CharGrid& c, F f) {
  double e = 0.0;
  for (int i = 0; i < c.spec().side; ++i)
    for (int j = 0; j < c.spec().side; ++j)
      e = std::fmax(e, std::abs(c.at(i, j) - f(c.spec().coord(i), c.spec().coord(j))));
  return e;
}

template <class F>
double max_error(const QuasiGrid& q, F f) {
  double e = 0.0;
  for (int i = 0; i < q.spec().side; ++i)
    for (int j = 0; j < q.spec().side; ++j)
      e = std::fmax(e, std::fabs(q.at(i, j) - f(q.spec().coord(i), q.spec().coord(j))));
  return e;
}

}  // namespace

TEST_CASE("order parameter and grid validation") {
  CHECK_THROWS_AS(OrderParameter(1.5), std::invalid_argument);
  CHECK_THROWS_AS(OrderParameter(-1.01), std::invalid_argument);
  CHECK(OrderParameter::normal().value() == 1.0);
  CHECK(OrderParameter::antinormal().value() == -1.0);
  CHECK_THROWS_AS((GridSpec{256, 8.0}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((GridSpec{257, 0.0}.validate()), std::invalid_argument);
  CHECK(kUnitGrid.coord(kOne) == 1.0);
  CHECK(kUnitGrid.coord(kZero) == 0.0);
}

TEST_CASE("char_vacuum examples") {
  const CharGrid n = char_vacuum(OrderParameter::normal(), kUnitGrid, GridGrowth::Fixed);
  CHECK(max_error(n, [](double, double) { return 1.0; }) == 0.0);
  const CharGrid w = char_vacuum(OrderParameter::weyl(), kUnitGrid, GridGrowth::Fixed);
  CHECK(max_error(w, [](double x, double y) { return std::exp(-0.5 * (x * x + y * y)); }) <= 1e-16);
  const CharGrid a = char_vacuum(OrderParameter::antinormal(), kUnitGrid, GridGrowth::Fixed);
  CHECK(max_error(a, [](double x, double y) { return std::exp(-(x * x + y * y)); }) <= 1e-16);
}

TEST_CASE("char_fock1 examples") {
  for (double s : {-1.0, 0.0, 1.0}) {
    const CharGrid c = char_fock1(OrderParameter(s), kUnitGrid, GridGrowth::Fixed);
    CHECK(c.at(kZero, kZero) == std::complex<double>(1.0, 0.0));
  }
  CHECK(char_fock1(OrderParameter::weyl(), kUnitGrid, GridGrowth::Fixed).at(kOne, kZero) == 0.0);
  CHECK(char_fock1(OrderParameter::normal(), kUnitGrid, GridGrowth::Fixed).at(kOne, kOne) == -1.0);
}

TEST_CASE("characteristic grids are normalised and Hermitian") {
  for (const CharGrid& c : {char_vacuum(OrderParameter::weyl()), char_fock1(OrderParameter::antinormal()),
                            char_gaussian(SymMat2{2.0, 0.3, 0.8}, OrderParameter::weyl())}) {
    const int mid = c.spec().side / 2, last = c.spec().side - 1;
    CHECK(std::abs(c.at(mid, mid) - 1.0) <= 1e-15);
    for (int i = 0; i < c.spec().side; i += 7)
      for (int j = 0; j < c.spec().side; j += 5) CHECK(std::abs(c.at(last - i, last - j) - std::conj(c.at(i, j))) <= 1e-15);
  }
}

TEST_CASE("grid growth doubles the extent until the boundary decays") {
  const CharGrid c = char_gaussian(SymMat2::diag(0.5, 0.5), OrderParameter::weyl());
  CHECK(c.spec().extent == 16.0);
  CHECK(c.boundary_max() < kBoundaryDecay);
  CHECK(char_vacuum(OrderParameter::weyl()).spec().extent == 8.0);
}

TEST_CASE("order conversion factor follows from the s-dependence of the characteristic function") {
  // chi_s(xi) = Tr(rho D(xi)) e^{s |xi|^2 / 2}, so chi_{s2} / chi_{s1} = e^{(s2 - s1) |xi|^2 / 2}.
  const CharGrid c1 = char_vacuum(OrderParameter(-0.4), kUnitGrid, GridGrowth::Fixed);
  const CharGrid c2 = char_vacuum(OrderParameter(0.6), kUnitGrid, GridGrowth::Fixed);
  const double ratio = (c2.at(kOne, kOne) / c1.at(kOne, kOne)).real();
  CHECK(near(ratio, std::exp(0.5 * 1.0 * 2.0), 1e-14));
  CHECK_FALSE(near(ratio, std::exp(-1.0 * 2.0), 1e-3));
  CHECK(max_error(convert_order(c1, OrderParameter(0.6)), [&](double x, double y) {
          return std::exp(0.5 * (0.6 - 1.0) * (x * x + y * y));
        }) <= 1e-15);
}

TEST_CASE("convert_order examples") {
  const CharGrid f = char_fock1(OrderParameter::normal(), kUnitGrid, GridGrowth::Fixed);
  const CharGrid same = convert_order(f, OrderParameter::normal());
  CHECK(max_error(same, [&](double x, double y) { return (1.0 - x * x - y * y); }) == 0.0);
  const CharGrid v = convert_order(char_vacuum(OrderParameter::normal(), kUnitGrid, GridGrowth::Fixed), OrderParameter::weyl());
  CHECK(max_error(v, [](double x, double y) { return std::exp(-0.5 * (x * x + y * y)); }) <= 1e-16);
  const CharGrid q = convert_order(f, OrderParameter::antinormal());
  const CharGrid ref = char_fock1(OrderParameter::antinormal(), kUnitGrid, GridGrowth::Fixed);
  CHECK(max_error(q, [&](double x, double y) { return (1.0 - x * x - y * y) * std::exp(-(x * x + y * y)); }) <= 1e-16);
  CHECK(ref.order().value() == q.order().value());
  CHECK_FALSE(q.ill_conditioned());
  CHECK(convert_order(q, OrderParameter::weyl()).ill_conditioned());
}

TEST_CASE("convert_order round trip restores the grid") {
  const CharGrid base = char_gaussian(SymMat2{1.5, -0.2, 0.9}, OrderParameter::weyl());
  for (double s : {-1.0, -0.3, 0.4, 1.0}) {
    const CharGrid back = convert_order(convert_order(base, OrderParameter(s)), OrderParameter::weyl());
    double e = 0.0;
    for (int i = 0; i < base.spec().side; ++i)
      for (int j = 0; j < base.spec().side; ++j) e = std::fmax(e, std::abs(back.at(i, j) - base.at(i, j)));
    CHECK(e <= 1e-12);
  }
}

TEST_CASE("vacuum quasiprobabilities match Gaussian Fourier pairs") {
  const QuasiGrid q = quasi_from_char(char_vacuum(OrderParameter::antinormal()));
  CHECK(max_error(q, [](double x, double y) { return std::exp(-(x * x + y * y)); }) < 1e-6);
  CHECK(near(q.at(q.spec().side / 2, q.spec().side / 2), 1.0, 1e-12));
  CHECK(near(q.normalisation(), 1.0, 1e-6));
  const QuasiGrid w = quasi_from_char(char_vacuum(OrderParameter::weyl()));
  CHECK(max_error(w, [](double x, double y) { return 2.0 * std::exp(-2.0 * (x * x + y * y)); }) < 1e-6);
  CHECK(w.imag_residue() < 1e-12);
}

TEST_CASE("Gaussian Wigner functions match the closed-form density") {
  for (const SymMat2& v : {SymMat2::identity(), SymMat2::diag(2.0, 0.5), SymMat2::diag(3.0, 3.0), SymMat2{1.8, 0.4, 0.9}}) {
    const QuasiGrid w = quasi_from_char(char_gaussian(v, OrderParameter::weyl()));
    const double d = v.det();
    const double err = max_error(w, [&](double x, double y) {
      return 2.0 / std::sqrt(d) * std::exp(-2.0 * (v.yy * x * x - 2.0 * v.xy * x * y + v.xx * y * y) / d);
    });
    CHECK(err < 1e-6);
    CHECK(near(w.normalisation(), 1.0, 1e-6));
  }
}

TEST_CASE("quasi_from_char refuses truncated or non-Hermitian input") {
  CHECK_THROWS_AS(quasi_from_char(char_vacuum(OrderParameter::normal(), {}, GridGrowth::Fixed)), std::domain_error);
  const CharGrid odd = sample_char(OrderParameter::weyl(), [](double x, double y) {
    return std::complex<double>(x * std::exp(-(x * x + y * y)), 0.0);
  });
  CHECK_THROWS_AS(quasi_from_char(odd), std::domain_error);
}

TEST_CASE("Q-functions are nonnegative") {
  for (const CharGrid& c : {char_vacuum(OrderParameter::antinormal()), char_fock1(OrderParameter::antinormal())}) {
    const QuasiGrid q = quasi_from_char(c);
    CHECK(min_value(q) >= -1e-6);
    CHECK(grid_is_nonnegative(q));
  }
}

TEST_CASE("regularised vacuum P-function is a narrow nonnegative Gaussian") {
  // s = 1 - 1e-3: chi = exp(-5e-4 |xi|^2) needs a wide, coarse characteristic grid.
  const CharGrid c = char_vacuum(OrderParameter(0.999), GridSpec{341, 170.0}, GridGrowth::Fixed);
  const QuasiGrid p = quasi_from_char(c, GridSpec{41, 0.1});
  CHECK(min_value(p) >= -1e-6);
  CHECK(near(p.at(20, 20), 2.0 / 1e-3, 5e-3));
}

TEST_CASE("fock1_output_p examples") {
  CHECK(fock1_output_p(2, 2, 0, 0) == 0.0);
  CHECK(near(fock1_output_p(4, 4, 0, 0), 0.25, 1e-15));
  CHECK(fock1_output_p(1.5, 1.5, 0, 0) < 0.0);
  CHECK_THROWS_AS(fock1_output_p(0, 1, 0, 0), std::invalid_argument);
  CHECK_THROWS_AS(fock1_output_p(1, -1, 0, 0), std::invalid_argument);
  // Both polynomial variants agree at the origin.
  CHECK(fock1_output_p(3, 1.5, 0, 0, Fock1Form::CrossTerm) == fock1_output_p(3, 1.5, 0, 0, Fock1Form::Separable));
}

TEST_CASE("Fock output P-function on the grid picks the separable polynomial") {
  for (auto [a, b] : {std::pair{2.0, 2.0}, std::pair{3.0, 1.5}, std::pair{4.0, 4.0}}) {
    const ChannelXY ch{Mat2::identity(), SymMat2::diag(a, b)};
    const QuasiGrid p = quasi_from_char(convert_order(act_chargrid(ch, char_fock1(OrderParameter::weyl())), OrderParameter::normal()));
    CHECK(max_error(p, [&](double x, double y) { return fock1_output_p(a, b, x, y); }) < 1e-6);
    CHECK(max_error(p, [&](double x, double y) { return fock1_output_p(a, b, x, y, Fock1Form::CrossTerm); }) > 1e-2);
  }
}

TEST_CASE("single-photon output classicality under the kappa = 1 channel") {
  auto p_min = [](double a, double b) {
    const ChannelXY ch{Mat2::identity(), SymMat2::diag(a, b)};
    return min_value(quasi_from_char(convert_order(act_chargrid(ch, char_fock1(OrderParameter::weyl())), OrderParameter::normal())));
  };
  CHECK(p_min(3, 3) >= -1e-6);
  CHECK(p_min(1.5, 1.5) < -0.4);
}

TEST_CASE("interpolation is exact for low-degree polynomials") {
  const CharGrid c = sample_char(
      OrderParameter::weyl(), [](double x, double y) { return std::complex<double>(1 + x - 0.5 * x * x * y + y * y * y, 0.0); },
      kUnitGrid, GridGrowth::Fixed);
  for (double x : {-7.9, -3.3, 0.25, 4.71, 7.99})
    for (double y : {-6.5, 0.5, 2.2}) {
      const auto v = c.interpolate(x, y);
      REQUIRE(v.has_value());
      CHECK(near(v->real(), 1 + x - 0.5 * x * x * y + y * y * y, 1e-9));
    }
  CHECK_FALSE(c.interpolate(8.5, 0.0).has_value());
  CHECK_THROWS_AS(c.interpolate(0, 0, 1), std::invalid_argument);
}

TEST_CASE("CSV output lists every grid point") {
  const QuasiGrid q = quasi_from_char(char_vacuum(OrderParameter::weyl(), GridSpec{65, 8.0}), GridSpec{5, 2.0});
  std::ostringstream os;
  write_csv(q, os);
  std::istringstream in(os.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "alpha1,alpha2,value");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 25);
}

TEST_CASE("min_value honours the radius mask") {
  const QuasiGrid q = quasi_from_char(char_vacuum(OrderParameter::antinormal(), GridSpec{65, 8.0}), GridSpec{21, 3.0});
  CHECK(near(min_value(q, 0.0), 1.0, 1e-9));
  CHECK(min_value(q) < 1e-3);
}
