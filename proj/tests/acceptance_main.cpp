// End-to-end acceptance checks: one PASS/FAIL line per criterion, nonzero
// exit if any fail. Each check prints the measured numbers it judged so a
// failure can be read directly from the log.

#include <algorithm>
#include <array>
#include <boost/multiprecision/cpp_int.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "odsbounds/cli.hpp"

using namespace odsbounds;
using Rational = boost::multiprecision::cpp_rational;
namespace fs = std::filesystem;

namespace {

struct Check {
  int id = 0;
  std::string name;
  bool pass = false;
  double seconds = 0.0;
  std::string detail;               // appended to the PASS/FAIL line
  std::vector<std::string> notes;   // extra indented lines, mostly for failures
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

double round2(double v) { return std::round(v * 100.0) / 100.0; }
double round4(double v) { return std::round(v * 10000.0) / 10000.0; }

// Selected-sample counts for the worked example: joint probabilities times 1e5.
SampleCounts example_counts() {
  SampleCounts c;
  c.has_z = true;
  c.counts[0][0][0] = 3510;
  c.counts[0][0][1] = 180;
  c.counts[0][1][0] = 4860;
  c.counts[0][1][1] = 3960;
  c.counts[1][0][0] = 49014;
  c.counts[1][0][1] = 1428;
  c.counts[1][1][0] = 2268;
  c.counts[1][1][1] = 1176;
  c.n = 66396;
  c.N = 100000;
  return c;
}

ConditionalCellTable random_table(Rng& rng, double floor) {
  for (;;) {
    double a[4], s = 0.0;
    for (double& v : a) {
      v = rng.uniform();
      s += v;
    }
    ConditionalCellTable t;
    t.p[0][0] = a[0] / s;
    t.p[0][1] = a[1] / s;
    t.p[1][0] = a[2] / s;
    t.p[1][1] = a[3] / s;
    if (t.p[0][0] >= floor && t.p[0][1] >= floor && t.p[1][0] >= floor && t.p[1][1] >= floor)
      return t;
  }
}

ConditionalCellTableIV random_table_iv(Rng& rng, double floor) {
  ConditionalCellTableIV t;
  t.per_z[0] = random_table(rng, floor);
  t.per_z[1] = random_table(rng, floor);
  t.z1_share = 0.2 + 0.6 * rng.uniform();
  return t;
}

const SettingAggregate& agg(const WidthStudyResult& r, const std::string& name) {
  for (const auto& a : r.aggregates)
    if (a.setting == name) return a;
  throw std::runtime_error("missing aggregate " + name);
}

std::string read_file(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void write_file(const fs::path& p, const std::string& content) {
  std::ofstream f(p, std::ios::binary);
  f << content;
}

// ---------------------------------------------------------------------------
// 1. Worked-example endpoints from the published joint distribution.

Check check_worked_example() {
  Check c{1, "worked-example endpoints"};
  auto t0 = std::chrono::steady_clock::now();
  TableBundle bundle = counts_to_tables(example_counts(), std::nullopt, 0.7);
  BoundsInterval d = bounds_for_setting(SettingTag::D, bundle);
  BoundsInterval f = bounds_for_setting(SettingTag::F, bundle);
  if (!d.components) throw std::runtime_error("setting D carries no component endpoints");
  double ld = d.components->l_d, ud = d.components->u_d;
  const double theta = 0.64;
  bool endpoints = std::fabs(ld - (-0.1678)) < 5e-5 && std::fabs(ud - 0.8067) < 5e-5 &&
                   std::fabs(f.lower - 0.1382) < 5e-5 && std::fabs(f.upper - 0.8176) < 5e-5;
  bool contains = ld <= theta && theta <= ud && f.lower <= theta && theta <= f.upper &&
                  d.lower <= theta && theta <= d.upper;
  c.seconds = seconds_since(t0);
  c.pass = endpoints && contains && c.seconds < 1.0;
  c.detail = "d-terms (" + fmt(ld) + ", " + fmt(ud) + ") vs (-0.1678, 0.8067); f (" + fmt(f.lower) +
             ", " + fmt(f.upper) + ") vs (0.1382, 0.8176); theta 0.64 " +
             (contains ? "inside" : "OUTSIDE");
  return c;
}

// ---------------------------------------------------------------------------
// 2. Closed forms against the LP oracle, exact and floating point.

Check check_oracle() {
  Check c{2, "closed forms equal the LP oracle"};
  auto t0 = std::chrono::steady_clock::now();
  const int per_setting = 500;
  int exact_fail = 0, float_fail = 0, not_optimal = 0;
  for (SettingTag tag : {SettingTag::E, SettingTag::F, SettingTag::G, SettingTag::H}) {
    Rng rr = Rng::for_stream(20260816, static_cast<std::uint64_t>(tag));
    Rng rf = Rng::for_stream(20260816, static_cast<std::uint64_t>(tag));
    for (int i = 0; i < per_setting; ++i) {
      RandomCells<Rational> inst = random_feasible_cells<Rational>(tag, rr);
      auto prog = build_program_cells<Rational>(tag, inst.z0, inst.z1);
      MinMaxResult<Rational> lp = solve_min_max<Rational>(prog, Rational(0));
      auto [clo, cup] = closed_form_cells<Rational>(tag, inst.z0, inst.z1);
      if (lp.status != LpStatus::Optimal || lp.lower != clo || lp.upper != cup) ++exact_fail;

      RandomCells<double> dinst = random_feasible_cells<double>(tag, rf);
      OracleReport rep = detail::oracle_check_cells(tag, dinst.z0, dinst.z1, 1e-9);
      if (rep.status != LpStatus::Optimal) ++not_optimal;
      else if (!rep.pass) ++float_fail;
    }
  }
  // The worked-example instance, checked to four decimals.
  std::array<double, 4> z0 = {0.117, 0.006, 0.162, 0.132};
  std::array<double, 4> z1 = {0.7002, 0.0204, 0.0324, 0.0168};
  auto [flo, fup] = closed_form_cells<double>(SettingTag::F, z0, z1);
  bool example_ok = round4(flo) == 0.1382 && round4(fup) == 0.8176;
  c.seconds = seconds_since(t0);
  c.pass = exact_fail == 0 && float_fail == 0 && not_optimal == 0 && example_ok &&
           c.seconds < 120.0;
  c.detail = std::to_string(per_setting) + " instances per setting: " +
             std::to_string(exact_fail) + " exact mismatches, " + std::to_string(float_fail) +
             " float mismatches, " + std::to_string(not_optimal) +
             " non-optimal; example f endpoints " + fmt(round4(flo)) + "/" + fmt(round4(fup));
  return c;
}

// ---------------------------------------------------------------------------
// 3. Fixed inference scenario: effect, selection share, and true bounds.

Check check_fixed_scenario() {
  Check c{3, "fixed-scenario truths"};
  auto t0 = std::chrono::steady_clock::now();
  ScenarioParams s = fixed_inference_scenario();
  FullJoint joint = scenario_to_joint(s);
  ObservedViews v = observed_views(joint);
  double theta = true_ate(s);
  bool ok = round2(theta) == 0.12 && round2(v.r) == 0.31;
  c.detail = "theta " + fmt(theta) + ", selection " + fmt(v.r);

  const double want_lo[6] = {-0.50, -0.46, -0.82, -0.80, -0.82, -0.80};
  const double want_up[6] = {0.64, 0.60, 0.87, 0.85, 0.87, 0.85};
  const SettingTag tags[6] = {SettingTag::C, SettingTag::D, SettingTag::E,
                              SettingTag::F, SettingTag::G, SettingTag::H};
  DesignInfo plain;
  plain.r = v.r;
  DesignInfo iv = plain;
  iv.p_z1 = v.p_z1;
  for (int i = 0; i < 6; ++i) {
    bool needs_iv = tags[i] == SettingTag::D || tags[i] == SettingTag::F || tags[i] == SettingTag::H;
    BoundsInterval b = needs_iv ? bounds_for_setting(tags[i], SettingData(v.pxyz_s1), iv)
                                : bounds_for_setting(tags[i], SettingData(v.pxy_s1), plain);
    if (round2(b.lower) != want_lo[i] || round2(b.upper) != want_up[i]) {
      ok = false;
      c.notes.push_back(std::string("setting ") + to_string(tags[i]) + ": got (" +
                        fmt(round2(b.lower)) + ", " + fmt(round2(b.upper)) + ") want (" +
                        fmt(want_lo[i]) + ", " + fmt(want_up[i]) + ")");
    }
  }
  c.seconds = seconds_since(t0);
  c.pass = ok && c.seconds < 1.0;
  c.detail += ok ? "; all six true bounds match to 2 d.p." : "; bound mismatch, see below";
  return c;
}

// ---------------------------------------------------------------------------
// 4. Validity: no violations where the assumed diagram holds the generator.

Check check_validity() {
  Check c{4, "validity across sampling-strength grid"};
  auto t0 = std::chrono::steady_clock::now();

  WidthStudyConfig base;
  base.seed = 4001;
  base.replicates = 10000;
  WidthStudyResult r0 = run_width_study(base);
  int viol_c = agg(r0, "c").violations;
  int viol_d = agg(r0, "d").violations;
  bool part1 = viol_c == 0 && viol_d == 0;

  const double sig[3] = {0.0, 5.0, 10.0};
  bool part2 = true;
  int f_total = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      WidthStudyConfig cfg;
      cfg.seed = 4100 + 10 * i + j;
      cfg.replicates = 2000;
      cfg.sigma_u = sig[i];
      cfg.sigma_x = sig[j];
      WidthStudyResult r = run_width_study(cfg);
      int ve = agg(r, "e").violations, vf = agg(r, "f").violations;
      int vg = agg(r, "g").violations, vh = agg(r, "h").violations;
      f_total += vf;
      if (ve + vf + vg + vh > 0) {
        part2 = false;
        char buf[160];
        std::snprintf(buf, sizeof(buf),
                      "sigma_u=%g sigma_x=%g: e=%d f=%d g=%d h=%d violations of %d", sig[i],
                      sig[j], ve, vf, vg, vh, agg(r, "e").n);
        c.notes.push_back(buf);
      }
    }
  if (!part2 && f_total > 0)
    c.notes.push_back(
        "setting f assumes selection does not depend directly on the exposure; the generator "
        "breaks that assumption wherever sigma_x > 0, so f violations there reflect the "
        "generator leaving f's model class, not a defect in the bounds (e, g, h stay at zero, "
        "and the misspecification check below requires exactly this f behavior)");
  c.seconds = seconds_since(t0);
  c.pass = part1 && part2 && c.seconds < 600.0;
  c.detail = "sigma=0: c/d violations " + std::to_string(viol_c) + "/" + std::to_string(viol_d) +
             " of 10000; grid: " + (part2 ? "e/f/g/h all zero" : "nonzero cells listed below");
  return c;
}

// ---------------------------------------------------------------------------
// 5. Misspecification behavior in the documented bands.

Check check_misspecification() {
  Check c{5, "misspecification rate bands"};
  auto t0 = std::chrono::steady_clock::now();

  WidthStudyConfig cu;
  cu.seed = 4200;
  cu.replicates = 5000;
  cu.sigma_u = 10.0;
  WidthStudyResult ru = run_width_study(cu);
  auto rate = [](const SettingAggregate& a) {
    return a.n > 0 ? static_cast<double>(a.violations) / a.n : 0.0;
  };
  double u_c = rate(agg(ru, "c")), u_d = rate(agg(ru, "d"));

  WidthStudyConfig cx;
  cx.seed = 4201;
  cx.replicates = 5000;
  cx.sigma_x = 10.0;
  WidthStudyResult rx = run_width_study(cx);
  double x_c = rate(agg(rx, "c")), x_d = rate(agg(rx, "d")), x_f = rate(agg(rx, "f"));

  bool ok = u_c < 0.02 && u_d < 0.02 && x_c < 0.02 && x_d >= 0.05 && x_d <= 0.15 &&
            x_f >= 0.05 && x_f <= 0.15;
  c.seconds = seconds_since(t0);
  c.pass = ok && c.seconds < 600.0;
  c.detail = "sigma_u=10: c " + fmt(u_c * 100) + "%, d " + fmt(u_d * 100) +
             "% (< 2%); sigma_x=10: c " + fmt(x_c * 100) + "% (< 2%), d " + fmt(x_d * 100) +
             "%, f " + fmt(x_f * 100) + "% (in [5%, 15%])";
  return c;
}

// ---------------------------------------------------------------------------
// 6. Monotonicity in the selection share and the small-share limit.

Check check_share_monotonicity() {
  Check c{6, "selection-share monotonicity"};
  auto t0 = std::chrono::steady_clock::now();
  Rng rng(6001);
  int non_monotone = 0, limit_off = 0, non_primary = 0;
  const int tables = 1000;
  for (int i = 0; i < tables; ++i) {
    ConditionalCellTable t = random_table(rng, 0.01);
    DesignInfo d;
    d.r = 0.5;
    if (bounds_for_setting(SettingTag::C, SettingData(t), d).case_label != CaseLabel::Primary) {
      ++non_primary;
      continue;
    }
    double prev_lo = -2.0, prev_up = 2.0;
    for (int k = 1; k <= 99; ++k) {
      d.r = 0.01 * k;
      BoundsInterval b = unconfounded_ods_bounds(t, d);
      if (b.lower < prev_lo - 1e-12 || b.upper > prev_up + 1e-12) {
        ++non_monotone;
        break;
      }
      prev_lo = b.lower;
      prev_up = b.upper;
    }
    d.r = 1e-9;
    BoundsInterval tiny = unconfounded_ods_bounds(t, d);
    BoundsInterval cond = outcome_conditional_bounds(t);
    if (std::fabs(tiny.lower - cond.lower) > 1e-6 || std::fabs(tiny.upper - cond.upper) > 1e-6)
      ++limit_off;
  }
  c.seconds = seconds_since(t0);
  c.pass = non_monotone == 0 && limit_off == 0 && non_primary == 0;
  c.detail = std::to_string(tables) + " tables: " + std::to_string(non_monotone) +
             " non-monotone, " + std::to_string(limit_off) +
             " small-share limits off the outcome-conditional bounds, " +
             std::to_string(non_primary) + " non-primary draws";
  return c;
}

// ---------------------------------------------------------------------------
// 7. Width nesting, duplicate settings, and exposure recoding.

Check check_identities() {
  Check c{7, "nesting and recoding identities"};
  auto t0 = std::chrono::steady_clock::now();
  Rng rng(7001);
  int nest_fail = 0, dup_fail = 0, recode_fail = 0;
  const int instances = 1000;
  for (int i = 0; i < instances; ++i) {
    ConditionalCellTable t = random_table(rng, 0.01);
    DesignInfo d;
    d.r = 0.05 + 0.9 * rng.uniform();

    double wa = robins_bounds(t).width();
    double wc = unconfounded_ods_bounds(t, d).width();
    JointCellTable j = joint_from_conditional(t, d);
    BoundsInterval e = confounded_ods_bounds(j, SettingTag::E);
    BoundsInterval g = confounded_ods_bounds(j, SettingTag::G);
    if (!(wa <= wc + 1e-12 && wc <= e.width() + 1e-12)) ++nest_fail;
    if (e.lower != g.lower || e.upper != g.upper) ++dup_fail;

    BoundsInterval direct = unconfounded_ods_bounds(t, d);
    BoundsInterval rec = unconfounded_ods_bounds(detail::recode_x(t), d);
    if (std::fabs(-rec.upper - direct.lower) > 1e-12 || std::fabs(-rec.lower - direct.upper) > 1e-12)
      ++recode_fail;

    // Redraw until each instrument stratum's implied selection share is < 1.
    ConditionalCellTableIV tv;
    DesignInfo dv;
    for (;;) {
      tv = random_table_iv(rng, 0.01);
      dv.r = 0.05 + 0.9 * rng.uniform();
      dv.p_z1 = 0.2 + 0.6 * rng.uniform();
      double rz0 = dv.r * (1.0 - tv.z1_share) / (1.0 - *dv.p_z1);
      double rz1 = dv.r * tv.z1_share / *dv.p_z1;
      if (rz0 < 1.0 && rz1 < 1.0) break;
    }
    // The identity is a property of the engine-derived terms; the conservative
    // envelope deliberately also covers the asymmetric published reading, so
    // the instrumented check runs under the corrected policy.
    BoundsInterval dd = unconfounded_ods_iv_bounds(tv, dv, Eq8Policy::Corrected);
    BoundsInterval dr = unconfounded_ods_iv_bounds(detail::recode_x(tv), dv, Eq8Policy::Corrected);
    if (std::fabs(-dr.upper - dd.lower) > 1e-12 || std::fabs(-dr.lower - dd.upper) > 1e-12)
      ++recode_fail;
  }
  c.seconds = seconds_since(t0);
  c.pass = nest_fail == 0 && dup_fail == 0 && recode_fail == 0;
  c.detail = std::to_string(instances) + " instances: " + std::to_string(nest_fail) +
             " nesting failures, " + std::to_string(dup_fail) + " e/g mismatches, " +
             std::to_string(recode_fail) + " recode-identity failures";
  return c;
}

// ---------------------------------------------------------------------------
// 8. Bootstrap calibration against the reference bias/SD/coverage table.

struct CalibrationTargets {
  double lo_sd[6], lo_cov[6], up_sd[6], up_cov[6];
};

Check check_bootstrap_calibration() {
  Check c{8, "bootstrap calibration"};
  auto t0 = std::chrono::steady_clock::now();

  const CalibrationTargets type_a = {{0.02, 0.03, 0.00, 0.01, 0.00, 0.01},
                                     {0.97, 0.96, 0.97, 0.96, 0.97, 0.96},
                                     {0.02, 0.02, 0.00, 0.01, 0.00, 0.01},
                                     {0.96, 0.96, 0.97, 0.96, 0.97, 0.96}};
  const CalibrationTargets type_b = {{0.02, 0.03, 0.01, 0.01, 0.01, 0.01},
                                     {0.95, 0.95, 0.95, 0.96, 0.95, 0.96},
                                     {0.02, 0.02, 0.01, 0.01, 0.01, 0.01},
                                     {0.95, 0.96, 0.94, 0.95, 0.94, 0.95}};

  bool ok = true;
  auto run_one = [&](BootScheme scheme, const CalibrationTargets& want, const char* label) {
    CoverageConfig cfg;
    cfg.seed = scheme == BootScheme::TypeA ? 8001 : 8002;
    cfg.datasets = 200;
    cfg.bootstrap = 200;
    cfg.n = 1000;
    cfg.cohort = 3223;
    cfg.scheme = scheme;
    CoverageTable table = coverage_study(cfg);
    for (int i = 0; i < 6; ++i) {
      const CoverageRow& row = table.rows[i];
      auto judge = [&](const EndpointStats& s, double want_sd, double want_cov, const char* end) {
        bool bias_ok = std::fabs(s.mean_bias) < 0.005;
        bool sd_ok = std::fabs(s.sd - want_sd) <= 0.01 + 1e-12;
        bool cov_ok = std::fabs(s.coverage - want_cov) <= 0.04 + 1e-12;
        if (!(bias_ok && sd_ok && cov_ok)) {
          ok = false;
          char buf[200];
          std::snprintf(buf, sizeof(buf),
                        "%s %s %s: bias %.4f, sd %.4f (want %.2f +-0.01), coverage %.3f (want "
                        "%.2f +-0.04)",
                        label, row.setting.c_str(), end, s.mean_bias, s.sd, want_sd, s.coverage,
                        want_cov);
          c.notes.push_back(buf);
        }
      };
      judge(row.lower, want.lo_sd[i], want.lo_cov[i], "lower");
      judge(row.upper, want.up_sd[i], want.up_cov[i], "upper");
    }
  };
  run_one(BootScheme::TypeA, type_a, "fixed-n");
  run_one(BootScheme::TypeB, type_b, "cohort");

  c.seconds = seconds_since(t0);
  c.pass = ok && c.seconds < 900.0;
  c.detail = ok ? "bias rounds to 0.00, SDs within 0.01, coverage within 0.04, both schemes"
              : "out-of-band entries listed below";
  return c;
}

// ---------------------------------------------------------------------------
// 9. Determinism: every study command repeated with the same seed writes
// byte-identical files.

int run_cli_quiet(std::vector<std::string> args, std::string* out_text = nullptr) {
  std::ostringstream out, err;
  int rc = run_cli(std::move(args), out, err);
  if (out_text) *out_text = out.str();
  return rc;
}

Check check_determinism() {
  Check c{9, "seeded rerun determinism"};
  auto t0 = std::chrono::steady_clock::now();
  fs::path base = fs::temp_directory_path() / "odsbounds_acceptance";
  fs::remove_all(base);
  fs::create_directories(base);

  fs::path counts_path = base / "counts.json";
  write_file(counts_path, R"({
  "schema_version": 1,
  "data": {"counts": [
    {"z": 0, "x": 0, "y": 0, "count": 3510},
    {"z": 0, "x": 0, "y": 1, "count": 180},
    {"z": 0, "x": 1, "y": 0, "count": 4860},
    {"z": 0, "x": 1, "y": 1, "count": 3960},
    {"z": 1, "x": 0, "y": 0, "count": 49014},
    {"z": 1, "x": 0, "y": 1, "count": 1428},
    {"z": 1, "x": 1, "y": 0, "count": 2268},
    {"z": 1, "x": 1, "y": 1, "count": 1176}
  ]},
  "design": {"N": 100000, "p_z1": 0.7}
})");
  write_file(base / "sim.json", R"({"replicates": 60, "seed": 11})");
  write_file(base / "cov.json",
             R"({"datasets": 8, "bootstrap": 20, "n": 300, "scheme": "type_a", "seed": 3})");
  write_file(base / "sens.json", "{\"input\": \"" + counts_path.generic_string() +
                                     "\", \"setting\": \"C\", \"grid\": [0.5, 0.66396, 0.9], "
                                     "\"bootstrap\": 40, \"seed\": 2}");

  const std::vector<std::vector<std::string>> commands = {
      {"simulate", "--config", (base / "sim.json").string()},
      {"coverage", "--config", (base / "cov.json").string()},
      {"sensitivity", "--config", (base / "sens.json").string()},
      {"--seed", "5", "bounds", "--input", counts_path.string(), "--bootstrap-reps", "30"},
      {"--seed", "6", "verify", "--random", "5", "--settings", "E,F"},
  };

  bool ok = true;
  for (std::size_t k = 0; k < commands.size(); ++k) {
    fs::path d1 = base / ("run" + std::to_string(k) + "a");
    fs::path d2 = base / ("run" + std::to_string(k) + "b");
    fs::create_directories(d1);
    fs::create_directories(d2);
    auto with_dir = [&](const fs::path& d) {
      std::vector<std::string> args = {"--out-dir", d.string()};
      args.insert(args.end(), commands[k].begin(), commands[k].end());
      return args;
    };
    std::string out1, out2;
    int rc1 = run_cli_quiet(with_dir(d1), &out1);
    int rc2 = run_cli_quiet(with_dir(d2), &out2);
    if (rc1 != 0 || rc2 != 0) {
      ok = false;
      c.notes.push_back("command " + commands[k][0] + " exited " + std::to_string(rc1) + "/" +
                        std::to_string(rc2));
      continue;
    }
    if (out1 != out2) {
      ok = false;
      c.notes.push_back("command " + commands[k][0] + ": stdout differs between reruns");
    }
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(d1)) files.push_back(entry.path().filename());
    std::sort(files.begin(), files.end());
    if (files.empty()) {
      ok = false;
      c.notes.push_back("command " + commands[k][0] + ": wrote no files");
    }
    for (const fs::path& name : files) {
      if (!fs::exists(d2 / name) || read_file(d1 / name) != read_file(d2 / name)) {
        ok = false;
        c.notes.push_back("command " + commands[k][0] + ": file " + name.string() +
                          " differs between reruns");
      }
    }
  }
  c.seconds = seconds_since(t0);
  c.pass = ok;
  c.detail = std::to_string(commands.size()) + " commands rerun; " +
             (ok ? "all stdout and files byte-identical" : "differences listed below");
  return c;
}

}  // namespace

int main() {
  std::vector<Check> checks;
  try {
    checks.push_back(check_worked_example());
    checks.push_back(check_oracle());
    checks.push_back(check_fixed_scenario());
    checks.push_back(check_validity());
    checks.push_back(check_misspecification());
    checks.push_back(check_share_monotonicity());
    checks.push_back(check_identities());
    checks.push_back(check_bootstrap_calibration());
    checks.push_back(check_determinism());
  } catch (const std::exception& e) {
    std::printf("acceptance aborted: %s\n", e.what());
    return 1;
  }

  int failed = 0;
  for (const Check& c : checks) {
    std::printf("criterion %d (%s): %s [%.1fs] %s\n", c.id, c.name.c_str(),
                c.pass ? "PASS" : "FAIL", c.seconds, c.detail.c_str());
    for (const std::string& note : c.notes) std::printf("    %s\n", note.c_str());
    if (!c.pass) ++failed;
  }
  std::printf("acceptance: %d of %d criteria passed\n", static_cast<int>(checks.size()) - failed,
              static_cast<int>(checks.size()));
  return failed == 0 ? 0 : 1;
}
