#include "cli.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <iterator>
#include <map>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "checks.hpp"
#include "gaussch/breaking.hpp"
#include "gaussch/channels.hpp"
#include "gaussch/format.hpp"
#include "gaussch/phase_space.hpp"
#include "json.hpp"

namespace gaussch::cli {

namespace {

using Json = nlohmann::ordered_json;

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Round to the fixed 12 significant digits used for all text output.
double rounded(double x) {
  if (!std::isfinite(x)) return x;
  const std::string s = format_number(x);
  double v = 0.0;
  std::from_chars(s.data(), s.data() + s.size(), v);
  return v;
}

Json matrix_json(const Mat2& m) {
  return Json::array({Json::array({rounded(m(0, 0)), rounded(m(0, 1))}), Json::array({rounded(m(1, 0)), rounded(m(1, 1))})});
}

std::string read_input(const std::string& path) {
  if (path == "-") return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

ChannelXY load_channel(const std::string& path) {
  try {
    return parse_channel_json(read_input(path));
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

CanonicalForm reduce_or_usage(const ChannelXY& ch, const Tolerances& tol) {
  try {
    return canonical_reduce(ch, tol);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

Json margins_json(const Margins& m) {
  return {{"cp", rounded(m.cp)}, {"eb", rounded(m.eb)}, {"ncb", rounded(m.ncb)}};
}

Json form_json(const CanonicalForm& f, const ChannelXY& ch) {
  const WitnessResiduals w = witness_residuals(ch, f);
  Json j;
  j["kind"] = std::string(to_string(f.kind));
  j["kappa"] = rounded(f.kappa);
  j["a"] = rounded(f.a);
  j["b"] = rounded(f.b);
  j["Y0"] = matrix_json(f.y0.full());
  j["S"] = matrix_json(f.S);
  j["R"] = matrix_json(f.R);
  j["witness_residuals"] = {{"x", rounded(w.x_residual)},
                            {"y", rounded(w.y_residual)},
                            {"det_s", rounded(w.det_s)},
                            {"orthogonality", rounded(w.orthogonality)}};
  return j;
}

FormKind parse_form(const std::string& s) {
  if (s == "I") return FormKind::FormI;
  if (s == "II") return FormKind::FormII;
  return FormKind::FormIII_rank1;
}

Tolerances tolerances(double cls) {
  Tolerances tol;
  tol.cls = cls;
  return tol;
}

int cmd_classify(const std::string& path, double cls, std::ostream& out) {
  const Tolerances tol = tolerances(cls);
  const ChannelXY ch = load_channel(path);
  reduce_or_usage(ch, tol);
  const BreakingReport rep = report(ch, tol);
  Json j;
  j["channel"] = {{"X", matrix_json(ch.X)}, {"Y", matrix_json(ch.Y.full())}};
  j["canonical"] = form_json(rep.form, ch);
  j["cp"] = rep.cp;
  j["eb"] = rep.eb;
  j["ncb"] = rep.ncb;
  j["unphysical"] = !rep.cp;
  j["margins"] = margins_json(rep.margins);
  j["shifted_noise"] = Json::array({rounded(rep.shifted_noise.first), rounded(rep.shifted_noise.second)});
  out << j.dump(2) << '\n';
  return kOk;
}

int cmd_check(const std::string& path, double cls, std::ostream& out) {
  const Tolerances tol = tolerances(cls);
  const ChannelXY ch = load_channel(path);
  reduce_or_usage(ch, tol);
  const BreakingReport rep = report(ch, tol);
  Json j;
  j["kind"] = std::string(to_string(rep.form.kind));
  j["cp"] = {{"closed_form", rep.cp}, {"direct", is_cp(ch, tol)}};
  bool agree = rep.cp == is_cp(ch, tol);
  if (!rep.cp || !is_cp(ch, tol)) {
    j["oracles"] = "skipped: channel is not completely positive";
  } else {
    const PureStateExtremum slack = ncb_gaussian_slack(ch);
    const bool ncb_oracle = slack.value >= -tol.cls;
    const bool eb_oracle = eb_oracle_tmsv(ch, kDefaultEbLadder, tol);
    j["ncb"] = {{"closed_form", rep.ncb}, {"oracle", ncb_oracle}, {"oracle_slack", rounded(slack.value)},
                {"oracle_r", rounded(slack.r)}, {"oracle_theta", rounded(slack.theta)}};
    j["eb"] = {{"closed_form", rep.eb}, {"oracle", eb_oracle}};
    agree = agree && ncb_oracle == rep.ncb && eb_oracle == rep.eb;
    if (rep.form.kind == FormKind::FormI && std::fabs(rep.form.kappa - 1.0) <= 1e-12) {
      const bool fock = ncb_necessity_fock1(rep.form, tol);
      j["fock1_necessity"] = fock;
      agree = agree && (fock || !rep.ncb);
    }
  }
  j["agree"] = agree;
  out << j.dump(2) << '\n';
  return agree ? kOk : kVerdictFailure;
}

struct SweepConfig {
  std::string form = "I";
  double kappa = 0.6;
  double amin = 0.02, amax = 4.0, bmin = 0.02, bmax = 4.0;
  int grid = 200;
  std::string out_path;
  std::string curves_path;
  std::string format = "csv";
  double tol = kDefaultTol.cls;
};

void write_curves_csv(const std::vector<std::vector<std::pair<double, double>>>& curves, std::ostream& os) {
  os << "curve,index,a,b\n";
  for (std::size_t c = 0; c < curves.size(); ++c)
    for (std::size_t i = 0; i < curves[c].size(); ++i)
      os << c + 1 << ',' << i << ',' << format_number(curves[c][i].first) << ',' << format_number(curves[c][i].second)
         << '\n';
}

int cmd_sweep(const SweepConfig& cfg, std::ostream& out, std::ostream& err) {
  if (!(cfg.amin > 0.0) || !(cfg.bmin > 0.0) || !(cfg.amax > cfg.amin) || !(cfg.bmax > cfg.bmin) ||
      !std::isfinite(cfg.amax) || !std::isfinite(cfg.bmax))
    throw UsageError("sweep: ranges must satisfy 0 < amin < amax and 0 < bmin < bmax");
  if (cfg.grid < 2) throw UsageError("sweep: --grid must be at least 2");
  if (!(cfg.kappa >= 0.0) || !std::isfinite(cfg.kappa)) throw UsageError("sweep: --kappa must be nonnegative");
  if (!(cfg.tol >= 0.0)) throw UsageError("sweep: --tol must be nonnegative");
  const FormKind kind = parse_form(cfg.form);
  const Tolerances tol = tolerances(cfg.tol);

  std::vector<RegionRecord> records;
  records.reserve(static_cast<std::size_t>(cfg.grid) * cfg.grid);
  for (int i = 0; i < cfg.grid; ++i) {
    const double a = cfg.amin + (cfg.amax - cfg.amin) * i / (cfg.grid - 1);
    for (int j = 0; j < cfg.grid; ++j) {
      const double b = cfg.bmin + (cfg.bmax - cfg.bmin) * j / (cfg.grid - 1);
      records.push_back(classify_region(kind, cfg.kappa, a, b, tol));
    }
  }
  std::vector<std::vector<std::pair<double, double>>> curves;
  for (int id = 1; id <= 3; ++id)
    curves.push_back(boundary_curve(kind, cfg.kappa, id).trace(cfg.amin, cfg.amax, cfg.bmin, cfg.bmax));

  std::map<Region, long> counts{{Region::Unphysical, 0}, {Region::CpOnly, 0}, {Region::EbNotNcb, 0}, {Region::Ncb, 0}};
  for (const auto& r : records) ++counts[r.region];

  std::ofstream file;
  if (!cfg.out_path.empty()) {
    file.open(cfg.out_path);
    if (!file) throw UsageError("cannot write " + cfg.out_path);
  }
  std::ostream& dst = cfg.out_path.empty() ? out : file;

  if (cfg.format == "json") {
    Json j;
    j["kind"] = std::string(to_string(kind));
    j["kappa"] = rounded(cfg.kappa);
    Json c;
    for (const auto& [region, n] : counts) c[std::string(to_string(region))] = n;
    j["counts"] = c;
    Json recs = Json::array();
    for (const auto& r : records)
      recs.push_back({{"a", rounded(r.a)}, {"b", rounded(r.b)}, {"class", std::string(to_string(r.region))},
                      {"cp_margin", rounded(r.margins.cp)}, {"eb_margin", rounded(r.margins.eb)},
                      {"ncb_margin", rounded(r.margins.ncb)}});
    j["records"] = std::move(recs);
    Json cj = Json::array();
    for (std::size_t id = 0; id < curves.size(); ++id) {
      Json pts = Json::array();
      for (const auto& [a, b] : curves[id]) pts.push_back(Json::array({rounded(a), rounded(b)}));
      cj.push_back({{"curve", id + 1}, {"points", std::move(pts)}});
    }
    j["curves"] = std::move(cj);
    dst << j.dump() << '\n';
  } else {
    write_region_csv_header(dst);
    for (const auto& r : records) write_region_csv_row(r, dst);
    std::string curves_path = cfg.curves_path;
    if (curves_path.empty() && !cfg.out_path.empty()) {
      const auto dot = cfg.out_path.rfind('.');
      const auto slash = cfg.out_path.rfind('/');
      const bool has_ext = dot != std::string::npos && (slash == std::string::npos || dot > slash);
      curves_path = (has_ext ? cfg.out_path.substr(0, dot) : cfg.out_path) + "_curves.csv";
    }
    if (!curves_path.empty()) {
      std::ofstream cf(curves_path);
      if (!cf) throw UsageError("cannot write " + curves_path);
      write_curves_csv(curves, cf);
    }
  }
  for (const auto& [region, n] : counts) err << to_string(region) << '=' << n << '\n';
  return kOk;
}

int cmd_orbit(const std::string& path, double rmin, double rmax, int steps, const std::string& format, double cls,
              std::ostream& out, std::ostream& err) {
  if (steps < 2 || !(rmax > rmin)) throw UsageError("orbit: need --steps >= 2 and rmin < rmax");
  const Tolerances tol = tolerances(cls);
  const ChannelXY ch = load_channel(path);
  const CanonicalForm form = reduce_or_usage(ch, tol);
  if (!is_eb(form, tol)) {
    err << "orbit: channel is not entanglement-breaking (" << to_string(form.kind) << ", kappa=" << format_number(form.kappa)
        << ", a=" << format_number(form.a) << ", b=" << format_number(form.b) << ")\n";
    return kVerdictFailure;
  }
  const auto r0 = find_r0(form, tol);
  std::vector<OrbitPoint> pts;
  for (int i = 0; i < steps; ++i) pts.push_back(squeeze_orbit(form, rmin + (rmax - rmin) * i / (steps - 1), tol));

  if (format == "json") {
    Json j;
    j["kind"] = std::string(to_string(form.kind));
    j["kappa"] = rounded(form.kappa);
    j["r0"] = r0 ? Json(rounded(*r0)) : Json(nullptr);
    Json arr = Json::array();
    for (const auto& p : pts) arr.push_back({{"r", rounded(p.r)}, {"a_r", rounded(p.a_r)}, {"b_r", rounded(p.b_r)}, {"ncb", p.ncb}});
    j["points"] = std::move(arr);
    out << j.dump(2) << '\n';
  } else {
    out << "r,a_r,b_r,ncb\n";
    for (const auto& p : pts)
      out << format_number(p.r) << ',' << format_number(p.a_r) << ',' << format_number(p.b_r) << ','
          << (p.ncb ? "true" : "false") << '\n';
    err << "r0=" << (r0 ? format_number(*r0) : std::string("none")) << '\n';
  }
  return kOk;
}

int cmd_pfunc(const std::string& path, const std::string& state, double s, int side, double extent, std::ostream& out,
              std::ostream& err) {
  const ChannelXY ch = load_channel(path);
  if (!is_cp(ch)) {
    err << "pfunc: channel is not completely positive\n";
    return kVerdictFailure;
  }
  OrderParameter order(0.0);
  GridSpec spec{side, extent};
  try {
    order = OrderParameter(s);
    spec.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const CharGrid input = state == "fock1" ? char_fock1(OrderParameter::weyl()) : char_vacuum(OrderParameter::weyl());
  try {
    const QuasiGrid q = quasi_from_char(convert_order(act_chargrid(ch, input), order), spec);
    write_csv(q, out);
    err << "min=" << format_number(min_value(q)) << " normalisation=" << format_number(q.normalisation()) << '\n';
  } catch (const std::domain_error& e) {
    err << "pfunc: " << e.what() << '\n';
    return kVerdictFailure;
  }
  return kOk;
}

int cmd_verify(const std::string& suite, std::ostream& out) {
  const auto results = checks::run_suite(suite);
  if (!results) throw UsageError("verify: unknown suite '" + suite + "' (expected table1, oracles, fock or fft)");
  bool all = true;
  for (const auto& c : *results) {
    checks::print(c, out);
    all = all && c.pass;
  }
  return all ? kOk : kVerdictFailure;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Single-mode Gaussian channel atlas"};
  app.require_subcommand(1);
  double tol = kDefaultTol.cls;

  std::string path;
  auto* classify = app.add_subcommand("classify", "Canonical form and CP/EB/NCB report for a channel JSON file");
  classify->add_option("channel", path, "Channel JSON file ('-' for stdin)")->required();
  classify->add_option("--tol", tol, "Classicality tolerance");

  auto* check = app.add_subcommand("check", "Compare closed-form verdicts with the oracles for one channel");
  check->add_option("channel", path, "Channel JSON file ('-' for stdin)")->required();
  check->add_option("--tol", tol, "Classicality tolerance");

  SweepConfig sweep_cfg;
  auto* sweep = app.add_subcommand("sweep", "Classify an (a, b) grid at fixed kappa");
  sweep->add_option("--form", sweep_cfg.form, "Canonical form")->check(CLI::IsMember({"I", "II", "III"}));
  sweep->add_option("--kappa", sweep_cfg.kappa, "kappa = sqrt|det X|");
  sweep->add_option("--amin", sweep_cfg.amin);
  sweep->add_option("--amax", sweep_cfg.amax);
  sweep->add_option("--bmin", sweep_cfg.bmin);
  sweep->add_option("--bmax", sweep_cfg.bmax);
  sweep->add_option("--grid", sweep_cfg.grid, "Points per axis");
  sweep->add_option("--out", sweep_cfg.out_path, "Region output file (default stdout)");
  sweep->add_option("--curves", sweep_cfg.curves_path, "Boundary curve CSV (default <out>_curves.csv)");
  sweep->add_option("--format", sweep_cfg.format)->check(CLI::IsMember({"csv", "json"}));
  sweep->add_option("--tol", sweep_cfg.tol, "Classicality tolerance");

  double rmin = -2.0, rmax = 2.0;
  int steps = 81;
  std::string format = "csv";
  auto* orbit = app.add_subcommand("orbit", "Post-squeeze orbit of an EB channel and the smallest NCB squeeze r0");
  orbit->add_option("channel", path, "Channel JSON file ('-' for stdin)")->required();
  orbit->add_option("--rmin", rmin);
  orbit->add_option("--rmax", rmax);
  orbit->add_option("--steps", steps);
  orbit->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}));
  orbit->add_option("--tol", tol, "Classicality tolerance");

  std::string state = "fock1";
  double s = 0.999;
  int side = 257;
  double extent = 6.0;
  auto* pfunc = app.add_subcommand("pfunc", "s-ordered quasiprobability of a channel output on a grid");
  pfunc->add_option("channel", path, "Channel JSON file ('-' for stdin)")->required();
  pfunc->add_option("--state", state)->check(CLI::IsMember({"vacuum", "fock1"}));
  pfunc->add_option("--s", s, "Order parameter (1 is the P-function)");
  pfunc->add_option("--side", side, "Output grid side (odd)");
  pfunc->add_option("--extent", extent, "Output grid half-width");

  std::string suite;
  auto* verify = app.add_subcommand("verify", "Run a property suite: table1, oracles, fock, fft");
  verify->add_option("suite", suite)->required();

  std::vector<std::string> argv(args.rbegin(), args.rend());
  try {
    app.parse(argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*classify) return cmd_classify(path, tol, out);
    if (*check) return cmd_check(path, tol, out);
    if (*sweep) return cmd_sweep(sweep_cfg, out, err);
    if (*orbit) return cmd_orbit(path, rmin, rmax, steps, format, tol, out, err);
    if (*pfunc) return cmd_pfunc(path, state, s, side, extent, out, err);
    if (*verify) return cmd_verify(suite, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kVerdictFailure;
  }
  return kUsage;
}

}  // namespace gaussch::cli
