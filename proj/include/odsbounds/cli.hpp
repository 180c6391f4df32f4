#pragma once
// Command-line surface. Five subcommands: point bounds from a data file,
// LP-oracle verification, the width/violation study, the coverage study, and
// the selection-probability sensitivity grid. All outputs are deterministic
// given seeds: JSON keys are sorted and floats carry 10 significant digits.
//
// Exit codes: 0 success, 1 unreadable file, 2 validation or schema failure,
// 3 data inconsistent with the assumed diagram.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "odsbounds/bounds.hpp"
#include "odsbounds/common.hpp"
#include "odsbounds/inference.hpp"
#include "odsbounds/io.hpp"
#include "odsbounds/lp_oracle.hpp"
#include "odsbounds/prob_model.hpp"
#include "odsbounds/rng.hpp"
#include "odsbounds/simulation.hpp"

namespace odsbounds {

namespace cli_detail {

inline std::vector<SettingTag> parse_settings_list(const std::string& csv) {
  std::vector<SettingTag> out;
  std::string cur;
  auto flush = [&]() {
    if (cur.empty()) return;
    auto tag = setting_from_string(cur);
    if (!tag) throw validation_error("unknown setting: " + cur);
    out.push_back(*tag);
    cur.clear();
  };
  for (char c : csv) {
    if (c == ',' || c == ' ') flush();
    else cur += c;
  }
  flush();
  if (out.empty()) throw validation_error("empty settings list");
  return out;
}

inline Eq8Policy parse_policy(const std::string& s) {
  auto p = policy_from_string(s);
  if (!p) throw validation_error("unknown eq8 policy: " + s);
  return *p;
}

inline bool needs_instrument(SettingTag t) {
  return t == SettingTag::B || t == SettingTag::D || t == SettingTag::F || t == SettingTag::H;
}

inline bool needs_selection_probability(SettingTag t) {
  return !(t == SettingTag::A || t == SettingTag::B);
}

inline std::string join_path(const std::string& dir, const std::string& name) {
  if (dir.empty() || dir == ".") return name;
  if (dir.back() == '/') return dir + name;
  return dir + "/" + name;
}

struct CommonFlags {
  std::uint64_t seed = 1;
  bool seed_given = false;
  std::string out_dir;
  std::string format = "json";
  Eq8Policy policy = Eq8Policy::Conservative;
};

inline double json_num(const nlohmann::json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number()) throw validation_error(std::string("config: ") + key + " must be numeric");
  return j[key].get<double>();
}

inline std::int64_t json_int(const nlohmann::json& j, const char* key, std::int64_t fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number_integer()) throw validation_error(std::string("config: ") + key + " must be an integer");
  return j[key].get<std::int64_t>();
}

inline std::string json_str(const nlohmann::json& j, const char* key, const std::string& fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_string()) throw validation_error(std::string("config: ") + key + " must be a string");
  return j[key].get<std::string>();
}

inline nlohmann::json parse_config(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    throw validation_error(std::string("config: invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw validation_error("config: top level must be an object");
  return j;
}

}  // namespace cli_detail

// --------------------------------------------------------------------------
// bounds

inline int cmd_bounds(const std::string& input_path, std::vector<SettingTag> settings,
                      const cli_detail::CommonFlags& flags, int bootstrap_reps,
                      const std::string& bootstrap_scheme, std::ostream& out, std::ostream& err) {
  InputDocument doc = parse_input_document(read_text_file(input_path));
  if (settings.empty()) settings = doc.settings;
  if (settings.empty()) {
    bool iv = doc.prob_iv.has_value() || (doc.counts && doc.counts->has_z);
    settings = iv ? std::vector<SettingTag>{SettingTag::A, SettingTag::B, SettingTag::C, SettingTag::D,
                                            SettingTag::E, SettingTag::F, SettingTag::G, SettingTag::H}
                  : std::vector<SettingTag>{SettingTag::A, SettingTag::C, SettingTag::E, SettingTag::G};
  }
  bool require_r = false;
  for (SettingTag t : settings) require_r = require_r || cli_detail::needs_selection_probability(t);
  TableBundle bundle = document_to_bundle(doc, require_r);

  bool any_inconsistent = false;
  JsonValue results = JsonValue::object();
  CsvWriter csv({"setting", "lower", "upper", "width", "case", "inconsistent"});
  for (SettingTag t : settings) {
    BoundsInterval b = bounds_for_setting(t, bundle, flags.policy);
    any_inconsistent = any_inconsistent || b.inconsistent;
    JsonValue jb = interval_to_json(b);
    if (bootstrap_reps > 0) {
      if (!doc.counts)
        throw validation_error("bootstrap requires counts data");
      SampleCounts c = *doc.counts;
      if (doc.cohort) c.N = doc.cohort;
      BootstrapResult br =
          bootstrap_scheme == "type_b"
              ? bootstrap_type_b(c, t, bundle.design, bootstrap_reps, flags.seed, flags.policy)
              : bootstrap_type_a(c, t, bundle.design, bootstrap_reps, flags.seed, flags.policy);
      JsonValue ci = JsonValue::object();
      JsonValue lo = JsonValue::array(), up = JsonValue::array();
      lo.push_back(br.lower_ci.lo);
      lo.push_back(br.lower_ci.hi);
      up.push_back(br.upper_ci.lo);
      up.push_back(br.upper_ci.hi);
      ci["lower"] = std::move(lo);
      ci["upper"] = std::move(up);
      ci["scheme"] = to_string(br.scheme);
      ci["replicates"] = br.requested;
      ci["skipped"] = br.skipped;
      ci["flagged"] = br.flagged;
      jb["ci"] = std::move(ci);
    }
    results[to_string(t)] = std::move(jb);
    csv.add_row({to_string(t), fmt_g10(b.lower), fmt_g10(b.upper), fmt_g10(b.width()),
                 to_string(b.case_label), csv_bool(b.inconsistent)});
  }

  JsonValue root = JsonValue::object();
  root["schema_version"] = 1;
  root["eq8_policy"] = to_string(flags.policy);
  root["results"] = std::move(results);
  std::string json_text = root.dump();
  if (flags.format == "csv") out << csv.str();
  else out << json_text;
  if (!flags.out_dir.empty()) {
    write_text_file(cli_detail::join_path(flags.out_dir, "bounds.json"), json_text);
    write_text_file(cli_detail::join_path(flags.out_dir, "bounds.csv"), csv.str());
  }
  if (any_inconsistent) {
    err << "error: data inconsistent with the assumed diagram for at least one setting\n";
    return 3;
  }
  return 0;
}

// --------------------------------------------------------------------------
// verify

namespace cli_detail {

struct VerifyEntry {
  SettingTag tag = SettingTag::E;
  int index = 0;
  OracleReport report;
};

inline void verify_print(std::ostream& out, const VerifyEntry& e) {
  char buf[256];
  if (e.report.status != LpStatus::Optimal) {
    std::snprintf(buf, sizeof(buf), "%s instance %d: %s (warning)\n", to_string(e.tag), e.index,
                  to_string(e.report.status));
    out << buf;
    return;
  }
  std::snprintf(buf, sizeof(buf), "%s instance %d: closed [%s, %s] lp [%s, %s] max_delta %s %s\n",
                to_string(e.tag), e.index, fmt_g10(e.report.closed_lower).c_str(),
                fmt_g10(e.report.closed_upper).c_str(), fmt_g10(e.report.lp_lower).c_str(),
                fmt_g10(e.report.lp_upper).c_str(), fmt_g10(e.report.max_abs_diff).c_str(),
                e.report.pass ? "ok" : "MISMATCH");
  out << buf;
}

inline void require_verify_settings(const std::vector<SettingTag>& settings) {
  for (SettingTag t : settings)
    if (t != SettingTag::E && t != SettingTag::F && t != SettingTag::G && t != SettingTag::H)
      throw validation_error("verify covers settings E, F, G, H only");
}

}  // namespace cli_detail

inline int cmd_verify(const std::optional<std::string>& input_path, int random_count,
                      std::vector<SettingTag> settings, const cli_detail::CommonFlags& flags,
                      std::ostream& out, std::ostream& err) {
  std::vector<cli_detail::VerifyEntry> entries;
  if (input_path) {
    // The data block carries the S=1 joint cells of the instance directly:
    // `cells` for E/G, `per_z` (conditional on Z) for F/H.
    InputDocument doc = parse_input_document(read_text_file(*input_path));
    if (settings.empty())
      settings = doc.prob_iv ? std::vector<SettingTag>{SettingTag::F, SettingTag::H}
                             : std::vector<SettingTag>{SettingTag::E, SettingTag::G};
    cli_detail::require_verify_settings(settings);
    for (SettingTag t : settings) {
      cli_detail::VerifyEntry e;
      e.tag = t;
      e.index = 0;
      if (cli_detail::needs_instrument(t)) {
        if (!doc.prob_iv) throw validation_error("verify: setting needs per_z joint cells");
        e.report = detail::oracle_check_cells(t, doc.prob_iv->per_z[0].cells(),
                                              doc.prob_iv->per_z[1].cells(), 1e-9);
      } else {
        if (!doc.prob) throw validation_error("verify: setting needs cells");
        e.report = detail::oracle_check_cells(t, doc.prob->cells(), {}, 1e-9);
      }
      entries.push_back(e);
    }
  } else {
    if (random_count < 1) throw validation_error("verify: give --input or --random with count >= 1");
    if (settings.empty())
      settings = {SettingTag::E, SettingTag::F, SettingTag::G, SettingTag::H};
    cli_detail::require_verify_settings(settings);
    for (SettingTag t : settings) {
      Rng rng = Rng::for_stream(flags.seed, static_cast<std::uint64_t>(t));
      for (int i = 0; i < random_count; ++i) {
        RandomCells<double> inst = random_feasible_cells<double>(t, rng);
        cli_detail::VerifyEntry e;
        e.tag = t;
        e.index = i;
        e.report = detail::oracle_check_cells(t, inst.z0, inst.z1, 1e-9);
        entries.push_back(e);
      }
    }
  }

  int passed = 0, failed = 0, warned = 0;
  JsonValue arr = JsonValue::array();
  for (const auto& e : entries) {
    cli_detail::verify_print(out, e);
    JsonValue v = JsonValue::object();
    v["setting"] = to_string(e.tag);
    v["instance"] = e.index;
    v["status"] = to_string(e.report.status);
    if (e.report.status == LpStatus::Optimal) {
      v["closed_lower"] = e.report.closed_lower;
      v["closed_upper"] = e.report.closed_upper;
      v["lp_lower"] = e.report.lp_lower;
      v["lp_upper"] = e.report.lp_upper;
      v["max_abs_diff"] = e.report.max_abs_diff;
      v["pass"] = e.report.pass;
      if (e.report.pass) ++passed;
      else ++failed;
    } else {
      ++warned;
    }
    arr.push_back(std::move(v));
  }
  char buf[160];
  std::snprintf(buf, sizeof(buf), "verify: %d passed, %d mismatched, %d warnings\n", passed, failed,
                warned);
  out << buf;
  if (failed > 0) err << "error: LP oracle disagrees with closed forms\n";

  JsonValue root = JsonValue::object();
  root["schema_version"] = 1;
  root["checks"] = std::move(arr);
  root["passed"] = passed;
  root["mismatched"] = failed;
  root["warnings"] = warned;
  if (!flags.out_dir.empty())
    write_text_file(cli_detail::join_path(flags.out_dir, "verify.json"), root.dump());
  return failed > 0 ? 2 : 0;
}

// --------------------------------------------------------------------------
// simulate

inline int cmd_simulate(const std::string& config_path, const cli_detail::CommonFlags& flags,
                        std::ostream& out, std::ostream&) {
  nlohmann::json cfg_json = cli_detail::parse_config(read_text_file(config_path));
  WidthStudyConfig cfg;
  cfg.replicates = static_cast<int>(cli_detail::json_int(cfg_json, "replicates", 1000));
  if (cfg.replicates < 1) throw validation_error("config: replicates must be >= 1");
  cfg.sigma_u = cli_detail::json_num(cfg_json, "sigma_u", 0.0);
  cfg.sigma_x = cli_detail::json_num(cfg_json, "sigma_x", 0.0);
  cfg.seed = static_cast<std::uint64_t>(cli_detail::json_int(cfg_json, "seed", 1));
  if (flags.seed_given) cfg.seed = flags.seed;
  cfg.policy = cli_detail::parse_policy(
      cli_detail::json_str(cfg_json, "eq8_policy", to_string(flags.policy)));

  WidthStudyResult res = run_width_study(cfg);

  CsvWriter csv({"seed", "setting", "lower", "upper", "width", "theta", "violated", "excludes_null"});
  for (const auto& row : res.rows)
    csv.add_row({std::to_string(row.replicate), row.setting, fmt_g10(row.lower), fmt_g10(row.upper),
                 fmt_g10(row.width), fmt_g10(row.theta), csv_bool(row.violated),
                 csv_bool(row.excludes_null)});

  JsonValue root = JsonValue::object();
  root["schema_version"] = 1;
  JsonValue jc = JsonValue::object();
  jc["replicates"] = cfg.replicates;
  jc["sigma_u"] = cfg.sigma_u;
  jc["sigma_x"] = cfg.sigma_x;
  jc["seed"] = static_cast<std::int64_t>(cfg.seed);
  jc["eq8_policy"] = to_string(cfg.policy);
  root["config"] = std::move(jc);
  root["skipped"] = res.skipped;
  JsonValue aggs = JsonValue::object();
  for (const auto& a : res.aggregates) {
    JsonValue ja = JsonValue::object();
    ja["n"] = a.n;
    ja["errors"] = a.errors;
    ja["violations"] = a.violations;
    ja["violation_rate"] = a.n > 0 ? static_cast<double>(a.violations) / a.n : 0.0;
    ja["mean_width"] = a.mean_width;
    ja["median_width"] = a.median_width;
    JsonValue bins = JsonValue::array();
    for (int b = 0; b < kThetaBins; ++b) {
      JsonValue jb = JsonValue::object();
      jb["theta_lo"] = static_cast<double>(b) / kThetaBins;
      jb["theta_hi"] = static_cast<double>(b + 1) / kThetaBins;
      jb["total"] = a.bin_total[b];
      jb["excluding_null"] = a.bin_excluding[b];
      bins.push_back(std::move(jb));
    }
    ja["null_exclusion_bins"] = std::move(bins);
    aggs[a.setting] = std::move(ja);
  }
  root["settings"] = std::move(aggs);

  std::string dir = flags.out_dir.empty() ? "." : flags.out_dir;
  write_text_file(cli_detail::join_path(dir, "simulate.csv"), csv.str());
  write_text_file(cli_detail::join_path(dir, "simulate_summary.json"), root.dump());

  char buf[200];
  std::snprintf(buf, sizeof(buf), "width study: %d replicates, %d skipped (sigma_u=%s, sigma_x=%s)\n",
                cfg.replicates, res.skipped, fmt_g10(cfg.sigma_u).c_str(),
                fmt_g10(cfg.sigma_x).c_str());
  out << buf;
  for (const auto& a : res.aggregates) {
    std::snprintf(buf, sizeof(buf),
                  "  %-11s n=%-6d violations=%-5d mean_width=%-12s median_width=%s\n",
                  a.setting.c_str(), a.n, a.violations, fmt_g10(a.mean_width).c_str(),
                  fmt_g10(a.median_width).c_str());
    out << buf;
  }
  return 0;
}

// --------------------------------------------------------------------------
// coverage

inline int cmd_coverage(const std::string& config_path, const cli_detail::CommonFlags& flags,
                        std::ostream& out, std::ostream&) {
  nlohmann::json cfg_json = cli_detail::parse_config(read_text_file(config_path));
  CoverageConfig cfg;
  cfg.datasets = static_cast<int>(cli_detail::json_int(cfg_json, "datasets", 200));
  cfg.bootstrap = static_cast<int>(cli_detail::json_int(cfg_json, "bootstrap", 200));
  cfg.n = static_cast<int>(cli_detail::json_int(cfg_json, "n", 1000));
  cfg.cohort = static_cast<int>(cli_detail::json_int(cfg_json, "cohort", 3223));
  if (cfg.datasets < 1 || cfg.bootstrap < 1 || cfg.n < 1 || cfg.cohort < 1)
    throw validation_error("config: datasets, bootstrap, n, cohort must be >= 1");
  std::string scheme = cli_detail::json_str(cfg_json, "scheme", "type_a");
  if (scheme == "type_a") cfg.scheme = BootScheme::TypeA;
  else if (scheme == "type_b") cfg.scheme = BootScheme::TypeB;
  else throw validation_error("config: scheme must be type_a or type_b");
  cfg.seed = static_cast<std::uint64_t>(cli_detail::json_int(cfg_json, "seed", 1));
  if (flags.seed_given) cfg.seed = flags.seed;
  cfg.policy = cli_detail::parse_policy(
      cli_detail::json_str(cfg_json, "eq8_policy", to_string(flags.policy)));
  if (cfg_json.contains("scenario")) {
    const auto& s = cfg_json["scenario"];
    cfg.scenario.p_u1 = cli_detail::json_num(s, "p_u1", cfg.scenario.p_u1);
    cfg.scenario.p_z1 = cli_detail::json_num(s, "p_z1", cfg.scenario.p_z1);
    auto read4 = [&](const char* key, std::array<double, 4>& dst) {
      if (!s.contains(key)) return;
      const auto& a = s[key];
      if (!a.is_array() || a.size() != 4)
        throw validation_error(std::string("config: scenario.") + key + " must have 4 entries");
      for (int i = 0; i < 4; ++i) dst[static_cast<std::size_t>(i)] = a[static_cast<std::size_t>(i)].get<double>();
    };
    read4("alpha", cfg.scenario.alpha);
    read4("beta", cfg.scenario.beta);
    read4("gamma", cfg.scenario.gamma);
  }

  CoverageTable table = coverage_study(cfg);

  CsvWriter csv({"setting", "endpoint", "true_value", "mean_bias", "sd", "coverage"});
  for (const auto& row : table.rows) {
    csv.add_row({row.setting, "lower", fmt_g10(row.lower.true_value), fmt_g10(row.lower.mean_bias),
                 fmt_g10(row.lower.sd), fmt_g10(row.lower.coverage)});
    csv.add_row({row.setting, "upper", fmt_g10(row.upper.true_value), fmt_g10(row.upper.mean_bias),
                 fmt_g10(row.upper.sd), fmt_g10(row.upper.coverage)});
  }

  JsonValue root = JsonValue::object();
  root["schema_version"] = 1;
  JsonValue jc = JsonValue::object();
  jc["datasets"] = cfg.datasets;
  jc["bootstrap"] = cfg.bootstrap;
  jc["n"] = cfg.n;
  jc["cohort"] = cfg.cohort;
  jc["scheme"] = to_string(cfg.scheme);
  jc["seed"] = static_cast<std::int64_t>(cfg.seed);
  jc["eq8_policy"] = to_string(cfg.policy);
  root["config"] = std::move(jc);
  root["theta"] = table.theta;
  root["selection_probability"] = table.r;
  root["datasets_used"] = table.datasets_used;
  root["datasets_skipped"] = table.datasets_skipped;
  JsonValue rows = JsonValue::object();
  for (const auto& row : table.rows) {
    JsonValue jr = JsonValue::object();
    auto side = [](const EndpointStats& s) {
      JsonValue v = JsonValue::object();
      v["true_value"] = s.true_value;
      v["mean_bias"] = s.mean_bias;
      v["sd"] = s.sd;
      v["coverage"] = s.coverage;
      return v;
    };
    jr["lower"] = side(row.lower);
    jr["upper"] = side(row.upper);
    rows[row.setting] = std::move(jr);
  }
  root["settings"] = std::move(rows);

  std::string dir = flags.out_dir.empty() ? "." : flags.out_dir;
  write_text_file(cli_detail::join_path(dir, "coverage.csv"), csv.str());
  write_text_file(cli_detail::join_path(dir, "coverage_summary.json"), root.dump());

  char buf[200];
  std::snprintf(buf, sizeof(buf), "coverage study: %s, %d datasets x %d bootstraps, theta=%s r=%s\n",
                to_string(cfg.scheme), cfg.datasets, cfg.bootstrap, fmt_g10(table.theta).c_str(),
                fmt_g10(table.r).c_str());
  out << buf;
  for (const auto& row : table.rows) {
    std::snprintf(buf, sizeof(buf),
                  "  %s lower: bias=%+.4f sd=%.4f cov=%.3f | upper: bias=%+.4f sd=%.4f cov=%.3f\n",
                  row.setting.c_str(), row.lower.mean_bias, row.lower.sd, row.lower.coverage,
                  row.upper.mean_bias, row.upper.sd, row.upper.coverage);
    out << buf;
  }
  return 0;
}

// --------------------------------------------------------------------------
// sensitivity

inline int cmd_sensitivity(const std::string& config_path, const cli_detail::CommonFlags& flags,
                           std::ostream& out, std::ostream&) {
  nlohmann::json cfg_json = cli_detail::parse_config(read_text_file(config_path));
  if (!cfg_json.contains("input") || !cfg_json["input"].is_string())
    throw validation_error("config: input path required");
  std::string setting_str = cli_detail::json_str(cfg_json, "setting", "");
  auto tag = setting_from_string(setting_str);
  if (!tag) throw validation_error("config: valid setting required");
  if (!cfg_json.contains("grid") || !cfg_json["grid"].is_array() || cfg_json["grid"].empty())
    throw validation_error("config: nonempty grid required");
  std::vector<double> grid;
  for (const auto& g : cfg_json["grid"]) {
    if (!g.is_number()) throw validation_error("config: grid entries must be numeric");
    grid.push_back(g.get<double>());
  }
  int B = static_cast<int>(cli_detail::json_int(cfg_json, "bootstrap", 500));
  if (B < 1) throw validation_error("config: bootstrap must be >= 1");
  std::uint64_t seed = static_cast<std::uint64_t>(cli_detail::json_int(cfg_json, "seed", 1));
  if (flags.seed_given) seed = flags.seed;
  Eq8Policy policy = cli_detail::parse_policy(
      cli_detail::json_str(cfg_json, "eq8_policy", to_string(flags.policy)));

  InputDocument doc = parse_input_document(read_text_file(cfg_json["input"].get<std::string>()));
  if (!doc.counts) throw validation_error("sensitivity: input must hold counts data");
  SampleCounts c = *doc.counts;
  std::optional<double> p_z1 = doc.p_z1;
  if (cfg_json.contains("p_z1")) p_z1 = cli_detail::json_num(cfg_json, "p_z1", 0.0);

  GridResult res = sensitivity_grid(c, *tag, grid, B, seed, p_z1, policy);

  CsvWriter csv({"r", "ok", "lower", "upper", "lower_ci_lo", "lower_ci_hi", "upper_ci_lo",
                 "upper_ci_hi", "skipped", "error"});
  JsonValue pts = JsonValue::array();
  for (const auto& pt : res.points) {
    if (pt.ok) {
      csv.add_row({fmt_g10(pt.r), "true", fmt_g10(pt.bounds.lower), fmt_g10(pt.bounds.upper),
                   fmt_g10(pt.lower_ci.lo), fmt_g10(pt.lower_ci.hi), fmt_g10(pt.upper_ci.lo),
                   fmt_g10(pt.upper_ci.hi), std::to_string(pt.skipped), ""});
    } else {
      csv.add_row({fmt_g10(pt.r), "false", "", "", "", "", "", "", "", pt.error});
    }
    JsonValue jp = JsonValue::object();
    jp["r"] = pt.r;
    jp["ok"] = pt.ok;
    if (pt.ok) {
      jp["bounds"] = interval_to_json(pt.bounds);
      JsonValue lo = JsonValue::array(), up = JsonValue::array();
      lo.push_back(pt.lower_ci.lo);
      lo.push_back(pt.lower_ci.hi);
      up.push_back(pt.upper_ci.lo);
      up.push_back(pt.upper_ci.hi);
      jp["lower_ci"] = std::move(lo);
      jp["upper_ci"] = std::move(up);
      jp["skipped"] = pt.skipped;
    } else {
      jp["error"] = pt.error;
    }
    pts.push_back(std::move(jp));
  }

  JsonValue root = JsonValue::object();
  root["schema_version"] = 1;
  root["setting"] = to_string(res.tag);
  root["bootstrap"] = B;
  root["seed"] = static_cast<std::int64_t>(seed);
  root["eq8_policy"] = to_string(policy);
  root["points"] = std::move(pts);

  std::string dir = flags.out_dir.empty() ? "." : flags.out_dir;
  write_text_file(cli_detail::join_path(dir, "sensitivity.csv"), csv.str());
  write_text_file(cli_detail::join_path(dir, "sensitivity_summary.json"), root.dump());

  char buf[160];
  std::snprintf(buf, sizeof(buf), "sensitivity grid: setting %s, %zu points, B=%d\n",
                to_string(res.tag), res.points.size(), B);
  out << buf;
  for (const auto& pt : res.points) {
    if (pt.ok)
      std::snprintf(buf, sizeof(buf), "  r=%-10s [%s, %s]\n", fmt_g10(pt.r).c_str(),
                    fmt_g10(pt.bounds.lower).c_str(), fmt_g10(pt.bounds.upper).c_str());
    else
      std::snprintf(buf, sizeof(buf), "  r=%-10s error: %s\n", fmt_g10(pt.r).c_str(),
                    pt.error.c_str());
    out << buf;
  }
  return 0;
}

// --------------------------------------------------------------------------
// dispatch

inline int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Nonparametric bounds on the causal risk difference under outcome-dependent sampling"};
  app.name("odsbounds");
  app.fallthrough(true);
  app.require_subcommand(1);

  cli_detail::CommonFlags flags;
  std::string policy_str = "conservative";
  app.add_option("--seed", flags.seed, "RNG seed");
  app.add_option("--out-dir", flags.out_dir, "directory for output files");
  app.add_option("--format", flags.format, "stdout format: json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--eq8-policy", policy_str,
                 "reading of the instrumented upper-bound expressions: conservative, corrected, literal")
      ->check(CLI::IsMember({"conservative", "corrected", "literal"}));

  std::string bounds_input, settings_csv, bootstrap_scheme = "type_a";
  int bootstrap_reps = 0;
  CLI::App* sc_bounds = app.add_subcommand("bounds", "compute bounds from a data file");
  sc_bounds->add_option("--input", bounds_input, "input document (JSON)")->required();
  sc_bounds->add_option("--settings", settings_csv, "comma-separated setting tags (A-H)");
  sc_bounds->add_option("--bootstrap-reps", bootstrap_reps, "bootstrap replicates (0 = off)");
  sc_bounds->add_option("--bootstrap-scheme", bootstrap_scheme, "type_a or type_b")
      ->check(CLI::IsMember({"type_a", "type_b"}));

  std::string verify_input;
  int random_count = 0;
  CLI::App* sc_verify = app.add_subcommand("verify", "check closed forms against the LP oracle");
  sc_verify->add_option("--input", verify_input, "instance document with S=1 joint cells");
  sc_verify->add_option("--random", random_count, "number of random feasible instances per setting");
  sc_verify->add_option("--settings", settings_csv, "subset of E,F,G,H");

  std::string config_path;
  CLI::App* sc_simulate = app.add_subcommand("simulate", "width/violation study over random scenarios");
  sc_simulate->add_option("--config", config_path, "study configuration (JSON)")->required();
  CLI::App* sc_coverage = app.add_subcommand("coverage", "bootstrap bias/SD/coverage study");
  sc_coverage->add_option("--config", config_path, "study configuration (JSON)")->required();
  CLI::App* sc_sensitivity = app.add_subcommand("sensitivity", "bounds over a selection-probability grid");
  sc_sensitivity->add_option("--config", config_path, "grid configuration (JSON)")->required();

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e, out, err);
    return rc == 0 ? 0 : 2;
  }
  flags.seed_given = app.count("--seed") > 0;
  flags.policy = cli_detail::parse_policy(policy_str);

  try {
    std::vector<SettingTag> settings;
    if (!settings_csv.empty()) settings = cli_detail::parse_settings_list(settings_csv);
    if (app.got_subcommand(sc_bounds))
      return cmd_bounds(bounds_input, settings, flags, bootstrap_reps, bootstrap_scheme, out, err);
    if (app.got_subcommand(sc_verify)) {
      std::optional<std::string> in;
      if (!verify_input.empty()) in = verify_input;
      return cmd_verify(in, random_count, settings, flags, out, err);
    }
    if (app.got_subcommand(sc_simulate)) return cmd_simulate(config_path, flags, out, err);
    if (app.got_subcommand(sc_coverage)) return cmd_coverage(config_path, flags, out, err);
    if (app.got_subcommand(sc_sensitivity)) return cmd_sensitivity(config_path, flags, out, err);
    err << "error: no subcommand\n";
    return 2;
  } catch (const inconsistent_error& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  } catch (const validation_error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace odsbounds
