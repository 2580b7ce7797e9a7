#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gaussch::checks {

struct Check {
  std::string name;
  bool pass = false;
  std::string detail;
};

using Suite = std::vector<Check>;

// Numbered acceptance criteria.
Check table1_reproduction();
Check inclusion_chain();
Check curve_intersection();
Check fock1_necessity();
Check gaussian_ncb_oracle();
Check eb_tmsv_oracle();
Check squeeze_r0();
Check canonical_round_trip();
Check grid_variance_consistency();

// Supporting properties used by the verify suites.
Check fock1_cross_term_variant();
Check gaussian_density_round_trip();
Check q_nonnegativity();
Check order_round_trip();

/// Suites: table1, oracles, fock, fft. nullopt for an unknown name.
std::optional<Suite> run_suite(std::string_view name);

/// "PASS name: detail" or "FAIL name: detail".
void print(const Check& c, std::ostream& os);

}  // namespace gaussch::checks
