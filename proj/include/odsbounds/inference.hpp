#pragma once
// Bootstrap inference for estimated bounds and the Monte Carlo machinery that
// evaluates it: percentile confidence intervals per interval endpoint under
// two resampling schemes, a bias/SD/coverage study against the true bounds,
// and a sensitivity grid over the selection probability.
//
// Type A resamples the selected sample at its fixed size n; the selection
// probability and instrument prevalence are design constants. Type B
// resamples the full cohort of size N (observed rows plus N-n missing rows),
// so the realized selected count and the estimated selection probability vary
// per resample; the instrument prevalence stays externally known.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "odsbounds/bounds.hpp"
#include "odsbounds/common.hpp"
#include "odsbounds/prob_model.hpp"
#include "odsbounds/rng.hpp"
#include "odsbounds/simulation.hpp"

namespace odsbounds {

enum class BootScheme { TypeA, TypeB };

inline const char* to_string(BootScheme s) {
  return s == BootScheme::TypeA ? "type_a" : "type_b";
}

// Linear interpolation on order statistics at h = (n-1)p.
inline double quantile_type7(const std::vector<double>& sorted, double p) {
  if (sorted.empty()) return std::numeric_limits<double>::quiet_NaN();
  if (sorted.size() == 1) return sorted[0];
  double h = static_cast<double>(sorted.size() - 1) * p;
  std::size_t lo = static_cast<std::size_t>(h);
  if (lo >= sorted.size() - 1) return sorted.back();
  double frac = h - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

struct CiPair {
  double lo = 0.0, hi = 0.0;
  bool contains(double v) const { return v >= lo - kViolationSlack && v <= hi + kViolationSlack; }
};

inline CiPair percentile_ci(std::vector<double> draws) {
  std::sort(draws.begin(), draws.end());
  return {quantile_type7(draws, 0.025), quantile_type7(draws, 0.975)};
}

struct BootstrapResult {
  BootScheme scheme = BootScheme::TypeA;
  SettingTag tag = SettingTag::C;
  int requested = 0;
  int skipped = 0;
  bool flagged = false;  // more than 10% of resamples were degenerate
  std::vector<double> lower_draws, upper_draws;
  CiPair lower_ci{}, upper_ci{};
};

namespace detail {

inline std::vector<double> empirical_probs(const SampleCounts& c) {
  std::vector<double> probs;
  double n = static_cast<double>(c.n);
  int nz = c.has_z ? 2 : 1;
  for (int z = 0; z < nz; ++z)
    for (int x = 0; x < 2; ++x)
      for (int y = 0; y < 2; ++y) probs.push_back(static_cast<double>(c.counts[z][x][y]) / n);
  return probs;
}

inline SampleCounts counts_from_draw(const SampleCounts& like, const std::vector<std::uint64_t>& draw) {
  SampleCounts out;
  out.has_z = like.has_z;
  out.n = 0;
  int nz = like.has_z ? 2 : 1;
  std::size_t i = 0;
  for (int z = 0; z < nz; ++z)
    for (int x = 0; x < 2; ++x)
      for (int y = 0; y < 2; ++y) {
        out.counts[z][x][y] = draw[i++];
        out.n += out.counts[z][x][y];
      }
  return out;
}

inline void finalize_bootstrap(BootstrapResult& res) {
  if (res.lower_draws.empty())
    throw validation_error("bootstrap: every resample was degenerate");
  res.flagged = res.skipped * 10 > res.requested;
  res.lower_ci = percentile_ci(res.lower_draws);
  res.upper_ci = percentile_ci(res.upper_draws);
}

}  // namespace detail

inline BootstrapResult bootstrap_type_a(const SampleCounts& c, SettingTag tag, const DesignInfo& design,
                                        int B, std::uint64_t seed,
                                        Eq8Policy policy = Eq8Policy::Conservative) {
  if (B < 1) throw validation_error("bootstrap: B must be at least 1");
  if (c.n < 1) throw validation_error("bootstrap: no observations");
  BootstrapResult res;
  res.scheme = BootScheme::TypeA;
  res.tag = tag;
  res.requested = B;
  std::vector<double> probs = detail::empirical_probs(c);
  for (int rep = 0; rep < B; ++rep) {
    Rng rng = Rng::for_stream(seed, static_cast<std::uint64_t>(rep));
    std::vector<std::uint64_t> draw = multinomial(rng, c.n, probs);
    SampleCounts rc = detail::counts_from_draw(c, draw);
    try {
      TableBundle bundle = counts_to_tables(rc, design.r, design.p_z1, design.sel_given_y);
      BoundsInterval b = bounds_for_setting(tag, bundle, policy);
      res.lower_draws.push_back(b.lower);
      res.upper_draws.push_back(b.upper);
    } catch (const validation_error&) {
      ++res.skipped;
    }
  }
  detail::finalize_bootstrap(res);
  return res;
}

inline BootstrapResult bootstrap_type_b(const SampleCounts& c, SettingTag tag, const DesignInfo& externals,
                                        int B, std::uint64_t seed,
                                        Eq8Policy policy = Eq8Policy::Conservative) {
  if (B < 1) throw validation_error("bootstrap: B must be at least 1");
  if (!c.N) throw validation_error("bootstrap type B: cohort size N required");
  std::uint64_t N = *c.N;
  if (c.n > N) throw validation_error("bootstrap type B: n exceeds N");
  BootstrapResult res;
  res.scheme = BootScheme::TypeB;
  res.tag = tag;
  res.requested = B;
  // Pseudo-cohort categories: the observed cells plus one missing-row bucket.
  std::vector<double> probs = detail::empirical_probs(c);
  for (double& p : probs) p *= static_cast<double>(c.n) / static_cast<double>(N);
  probs.push_back(static_cast<double>(N - c.n) / static_cast<double>(N));
  for (int rep = 0; rep < B; ++rep) {
    Rng rng = Rng::for_stream(seed, static_cast<std::uint64_t>(rep));
    std::vector<std::uint64_t> draw = multinomial(rng, N, probs);
    SampleCounts rc = detail::counts_from_draw(c, {draw.begin(), draw.end() - 1});
    rc.N = N;
    if (rc.n == 0) {
      ++res.skipped;
      continue;
    }
    try {
      TableBundle bundle = counts_to_tables(rc, std::nullopt, externals.p_z1, externals.sel_given_y);
      BoundsInterval b = bounds_for_setting(tag, bundle, policy);
      res.lower_draws.push_back(b.lower);
      res.upper_draws.push_back(b.upper);
    } catch (const validation_error&) {
      ++res.skipped;
    }
  }
  detail::finalize_bootstrap(res);
  return res;
}

// --------------------------------------------------------------------------
// Bias / SD / coverage study on a fixed scenario.

struct CoverageConfig {
  std::uint64_t seed = 1;
  int datasets = 200;
  int bootstrap = 200;
  int n = 1000;       // selected-sample size for Type A
  int cohort = 3223;  // cohort size N for Type B
  BootScheme scheme = BootScheme::TypeA;
  Eq8Policy policy = Eq8Policy::Conservative;
  ScenarioParams scenario = fixed_inference_scenario();
};

struct EndpointStats {
  double true_value = 0.0;
  double mean_bias = 0.0;
  double sd = 0.0;
  double coverage = 0.0;
};

struct CoverageRow {
  std::string setting;
  EndpointStats lower, upper;
};

struct CoverageTable {
  CoverageConfig config;
  double theta = 0.0;
  double r = 0.0;
  int datasets_used = 0;
  int datasets_skipped = 0;
  std::vector<CoverageRow> rows;
};

inline CoverageTable coverage_study(const CoverageConfig& cfg) {
  CoverageTable out;
  out.config = cfg;
  FullJoint joint = scenario_to_joint(cfg.scenario);
  ObservedViews v = observed_views(joint);
  if (!v.ok) throw validation_error("coverage_study: degenerate scenario: " + v.reason);
  out.theta = true_ate(cfg.scenario);
  out.r = v.r;

  const std::vector<SettingTag> tags = {SettingTag::C, SettingTag::D, SettingTag::E,
                                        SettingTag::F, SettingTag::G, SettingTag::H};
  DesignInfo plain;
  plain.r = v.r;
  DesignInfo iv = plain;
  iv.p_z1 = v.p_z1;

  std::vector<CoverageRow> rows(tags.size());
  std::vector<std::vector<double>> lo_est(tags.size()), up_est(tags.size());
  std::vector<int> lo_cover(tags.size(), 0), up_cover(tags.size(), 0);

  for (std::size_t i = 0; i < tags.size(); ++i) {
    SettingTag tag = tags[i];
    bool needs_iv = tag == SettingTag::D || tag == SettingTag::F || tag == SettingTag::H;
    BoundsInterval truth = needs_iv ? bounds_for_setting(tag, v.pxyz_s1, iv, cfg.policy)
                                    : bounds_for_setting(tag, v.pxy_s1, plain, cfg.policy);
    rows[i].setting = to_string(tag);
    rows[i].lower.true_value = truth.lower;
    rows[i].upper.true_value = truth.upper;
  }

  for (int m = 0; m < cfg.datasets; ++m) {
    Rng data_rng = Rng::for_stream(cfg.seed, static_cast<std::uint64_t>(m));
    std::uint64_t boot_seed = detail::mix64(cfg.seed ^ (0x9e3779b97f4a7c15ULL + static_cast<std::uint64_t>(m)));
    SampleCounts sample = cfg.scheme == BootScheme::TypeA
                              ? draw_sample_fixed_n(data_rng, v.pxyz_s1, cfg.n)
                              : draw_sample_fixed_cohort(data_rng, joint, cfg.cohort);
    std::vector<double> ds_lo(tags.size()), ds_up(tags.size());
    std::vector<bool> ds_lo_cov(tags.size()), ds_up_cov(tags.size());
    bool ok = true;
    try {
      TableBundle bundle = cfg.scheme == BootScheme::TypeA
                               ? counts_to_tables(sample, v.r, v.p_z1)
                               : counts_to_tables(sample, std::nullopt, v.p_z1);
      DesignInfo boot_design = bundle.design;
      for (std::size_t i = 0; i < tags.size(); ++i) {
        BoundsInterval est = bounds_for_setting(tags[i], bundle, cfg.policy);
        ds_lo[i] = est.lower;
        ds_up[i] = est.upper;
        BootstrapResult br = cfg.scheme == BootScheme::TypeA
                                 ? bootstrap_type_a(sample, tags[i], boot_design, cfg.bootstrap,
                                                    boot_seed, cfg.policy)
                                 : bootstrap_type_b(sample, tags[i], boot_design, cfg.bootstrap,
                                                    boot_seed, cfg.policy);
        ds_lo_cov[i] = br.lower_ci.contains(rows[i].lower.true_value);
        ds_up_cov[i] = br.upper_ci.contains(rows[i].upper.true_value);
      }
    } catch (const validation_error&) {
      ok = false;
    }
    if (ok) {
      ++out.datasets_used;
      for (std::size_t i = 0; i < tags.size(); ++i) {
        lo_est[i].push_back(ds_lo[i]);
        up_est[i].push_back(ds_up[i]);
        if (ds_lo_cov[i]) ++lo_cover[i];
        if (ds_up_cov[i]) ++up_cover[i];
      }
    } else {
      ++out.datasets_skipped;
    }
  }

  for (std::size_t i = 0; i < tags.size(); ++i) {
    auto stats = [&](std::vector<double>& est, EndpointStats& s, int covered) {
      int m = static_cast<int>(est.size());
      if (m == 0) return;
      double mean = 0.0;
      for (double e : est) mean += e;
      mean /= m;
      double var = 0.0;
      for (double e : est) var += (e - mean) * (e - mean);
      s.mean_bias = mean - s.true_value;
      s.sd = m > 1 ? std::sqrt(var / (m - 1)) : 0.0;
      s.coverage = static_cast<double>(covered) / m;
    };
    stats(lo_est[i], rows[i].lower, lo_cover[i]);
    stats(up_est[i], rows[i].upper, up_cover[i]);
  }
  out.rows = std::move(rows);
  return out;
}

// --------------------------------------------------------------------------
// Sensitivity of the bounds to an unknown selection probability.

struct GridPoint {
  double r = 0.0;
  bool ok = false;
  std::string error;
  BoundsInterval bounds;
  CiPair lower_ci{}, upper_ci{};
  int skipped = 0;
};

struct GridResult {
  SettingTag tag = SettingTag::C;
  std::vector<GridPoint> points;
};

// The same seed drives every grid point, so resampling noise is common across
// points and the estimated endpoints vary smoothly in r.
inline GridResult sensitivity_grid(const SampleCounts& c, SettingTag tag,
                                   const std::vector<double>& r_grid, int B, std::uint64_t seed,
                                   const std::optional<double>& p_z1 = std::nullopt,
                                   Eq8Policy policy = Eq8Policy::Conservative) {
  GridResult out;
  out.tag = tag;
  for (double r : r_grid) {
    GridPoint pt;
    pt.r = r;
    try {
      if (!(r > 0.0 && r <= 1.0)) throw validation_error("grid value outside (0,1]");
      TableBundle bundle = counts_to_tables(c, r, p_z1);
      pt.bounds = bounds_for_setting(tag, bundle, policy);
      BootstrapResult br = bootstrap_type_a(c, tag, bundle.design, B, seed, policy);
      pt.lower_ci = br.lower_ci;
      pt.upper_ci = br.upper_ci;
      pt.skipped = br.skipped;
      pt.ok = true;
    } catch (const std::exception& e) {
      pt.error = e.what();
    }
    out.points.push_back(pt);
  }
  return out;
}

}  // namespace odsbounds
