#pragma once
// Scenario generator and exact-distribution studies: a logistic structural
// model over (U, Z, X, Y, S) with binary nodes, the implied 32-cell joint,
// the true causal risk difference, observed-data views for every design, and
// the width/violation/null-exclusion study over random scenarios.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "odsbounds/bounds.hpp"
#include "odsbounds/common.hpp"
#include "odsbounds/prob_model.hpp"
#include "odsbounds/rng.hpp"

namespace odsbounds {

struct ScenarioParams {
  double p_u1 = 0.5;
  double p_z1 = 0.5;
  std::array<double, 4> alpha{};  // p{X=1|U,Z} = expit(a1 + a2 U + a3 Z + a4 UZ)
  std::array<double, 4> beta{};   // p{Y=1|U,X} = expit(b1 + b2 U + b3 X + b4 UX)
  std::array<double, 4> gamma{};  // p{S=1|U,Y,X} = expit(g1 + g2 Y + g3 U + g4 X)
};

// Coefficient draw order is part of the reproducibility contract: p{U=1},
// p{Z=1}, alpha 1-4, beta 1-4, gamma 1-4. The last two gammas carry the
// confounded-sampling and exposure-dependent-sampling scales; a zero scale
// still consumes a draw so streams align across scale choices.
inline ScenarioParams draw_scenario(Rng& rng, double sigma_u, double sigma_x) {
  ScenarioParams s;
  s.p_u1 = rng.uniform();
  s.p_z1 = rng.uniform();
  for (auto& a : s.alpha) a = rng.normal(5.0);
  for (auto& b : s.beta) b = rng.normal(5.0);
  s.gamma[0] = rng.normal(5.0);
  s.gamma[1] = rng.normal(5.0);
  s.gamma[2] = rng.normal(sigma_u);
  s.gamma[3] = rng.normal(sigma_x);
  return s;
}

inline ScenarioParams fixed_inference_scenario() {
  ScenarioParams s;
  s.p_u1 = 0.5;
  s.p_z1 = 0.5;
  s.alpha = {-1.0, 0.5, 0.5, 0.0};
  s.beta = {-1.0, 0.5, 0.5, 0.0};
  s.gamma = {-1.0, 0.5, 0.0, 0.0};
  return s;
}

struct FullJoint {
  // p[u][z][x][y][s]
  double p[2][2][2][2][2]{};

  double sum() const {
    double t = 0.0;
    for (int u = 0; u < 2; ++u)
      for (int z = 0; z < 2; ++z)
        for (int x = 0; x < 2; ++x)
          for (int y = 0; y < 2; ++y)
            for (int s = 0; s < 2; ++s) t += p[u][z][x][y][s];
    return t;
  }
};

inline FullJoint scenario_to_joint(const ScenarioParams& sc) {
  FullJoint j;
  for (int u = 0; u < 2; ++u) {
    double pu = u ? sc.p_u1 : 1.0 - sc.p_u1;
    for (int z = 0; z < 2; ++z) {
      double pz = z ? sc.p_z1 : 1.0 - sc.p_z1;
      double px1 = expit(sc.alpha[0] + sc.alpha[1] * u + sc.alpha[2] * z + sc.alpha[3] * u * z);
      for (int x = 0; x < 2; ++x) {
        double px = x ? px1 : 1.0 - px1;
        double py1 = expit(sc.beta[0] + sc.beta[1] * u + sc.beta[2] * x + sc.beta[3] * u * x);
        for (int y = 0; y < 2; ++y) {
          double py = y ? py1 : 1.0 - py1;
          double ps1 = expit(sc.gamma[0] + sc.gamma[1] * y + sc.gamma[2] * u + sc.gamma[3] * x);
          j.p[u][z][x][y][1] = pu * pz * px * py * ps1;
          j.p[u][z][x][y][0] = pu * pz * px * py * (1.0 - ps1);
        }
      }
    }
  }
  return j;
}

inline double true_ate(const ScenarioParams& sc) {
  double theta = 0.0;
  for (int u = 0; u < 2; ++u) {
    double pu = u ? sc.p_u1 : 1.0 - sc.p_u1;
    double y1 = expit(sc.beta[0] + sc.beta[1] * u + sc.beta[2] + sc.beta[3] * u);
    double y0 = expit(sc.beta[0] + sc.beta[1] * u);
    theta += (y1 - y0) * pu;
  }
  return theta;
}

// Exact observed-data views for each design family. The selected-sample IV
// view carries p{Z=1|S=1} as its stratum share; the full-population view
// carries p{Z=1}.
struct ObservedViews {
  bool ok = false;
  std::string reason;
  ConditionalCellTable pxy_full{};
  ConditionalCellTableIV pxyz_full{};
  ConditionalCellTable pxy_s1{};
  ConditionalCellTableIV pxyz_s1{};
  double r = 0.0;                  // p{S=1}
  std::array<double, 2> r_z{};     // p{S=1|Z=z}
  double p_z1 = 0.0;               // p{Z=1}
};

inline ObservedViews observed_views(const FullJoint& j) {
  ObservedViews v;
  double pz[2] = {0.0, 0.0};
  double pxy[2][2] = {};
  double pxy_z[2][2][2] = {};    // [z][x][y]
  double pxys1[2][2] = {};
  double pxys1_z[2][2][2] = {};  // [z][x][y]
  double ps1 = 0.0, ps1_z[2] = {0.0, 0.0};
  for (int u = 0; u < 2; ++u)
    for (int z = 0; z < 2; ++z)
      for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) {
          double m = j.p[u][z][x][y][0] + j.p[u][z][x][y][1];
          double m1 = j.p[u][z][x][y][1];
          pz[z] += m;
          pxy[x][y] += m;
          pxy_z[z][x][y] += m;
          ps1 += m1;
          ps1_z[z] += m1;
          pxys1[x][y] += m1;
          pxys1_z[z][x][y] += m1;
        }
  if (!(ps1 > 0.0)) {
    v.reason = "selected fraction is zero";
    return v;
  }
  if (!(pz[0] > 0.0 && pz[1] > 0.0)) {
    v.reason = "an instrument stratum has probability zero";
    return v;
  }
  if (!(ps1_z[0] > 0.0 && ps1_z[1] > 0.0)) {
    v.reason = "no selected mass in an instrument stratum";
    return v;
  }
  v.r = ps1;
  v.r_z = {ps1_z[0] / pz[0], ps1_z[1] / pz[1]};
  v.p_z1 = pz[1];
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) {
      v.pxy_full.p[x][y] = pxy[x][y];
      v.pxy_s1.p[x][y] = pxys1[x][y] / ps1;
      for (int z = 0; z < 2; ++z) {
        v.pxyz_full.per_z[z].p[x][y] = pxy_z[z][x][y] / pz[z];
        v.pxyz_s1.per_z[z].p[x][y] = pxys1_z[z][x][y] / ps1_z[z];
      }
    }
  v.pxyz_full.z1_share = pz[1];
  v.pxyz_s1.z1_share = ps1_z[1] / ps1;
  v.ok = true;
  return v;
}

// --------------------------------------------------------------------------
// Width / violation / null-exclusion study over random scenarios.

inline constexpr int kThetaBins = 20;

struct WidthStudyConfig {
  std::uint64_t seed = 1;
  int replicates = 1000;
  double sigma_u = 0.0;
  double sigma_x = 0.0;
  Eq8Policy policy = Eq8Policy::Conservative;
};

struct WidthRow {
  int replicate = 0;
  std::string setting;  // a-h, plus d_unrefined for the pre-intersection endpoints
  double lower = 0.0, upper = 0.0, width = 0.0, theta = 0.0;
  bool violated = false;
  bool excludes_null = false;
};

struct SettingAggregate {
  std::string setting;
  int n = 0;
  int violations = 0;
  int errors = 0;
  double mean_width = 0.0;
  double median_width = 0.0;
  std::array<int, kThetaBins> bin_total{};
  std::array<int, kThetaBins> bin_excluding{};
};

struct WidthStudyResult {
  WidthStudyConfig config;
  int skipped = 0;
  std::vector<WidthRow> rows;
  std::vector<SettingAggregate> aggregates;
};

namespace detail {

inline int theta_bin(double theta) {
  double a = std::fabs(theta);
  int b = static_cast<int>(a * kThetaBins);
  return std::min(b, kThetaBins - 1);
}

}  // namespace detail

inline WidthStudyResult run_width_study(const WidthStudyConfig& cfg) {
  WidthStudyResult res;
  res.config = cfg;
  const std::vector<std::string> names = {"a", "b", "c", "d", "d_unrefined", "e", "f", "g", "h"};
  std::vector<SettingAggregate> agg(names.size());
  std::vector<std::vector<double>> widths(names.size());
  for (std::size_t i = 0; i < names.size(); ++i) agg[i].setting = names[i];

  for (int rep = 0; rep < cfg.replicates; ++rep) {
    Rng rng = Rng::for_stream(cfg.seed, static_cast<std::uint64_t>(rep));
    ScenarioParams sc = draw_scenario(rng, cfg.sigma_u, cfg.sigma_x);
    FullJoint joint = scenario_to_joint(sc);
    ObservedViews v = observed_views(joint);
    if (!v.ok) {
      ++res.skipped;
      continue;
    }
    double theta = true_ate(sc);
    DesignInfo plain;
    plain.r = v.r;
    DesignInfo iv = plain;
    iv.p_z1 = v.p_z1;

    for (std::size_t i = 0; i < names.size(); ++i) {
      BoundsInterval b;
      try {
        const std::string& s = names[i];
        if (s == "a") b = robins_bounds(v.pxy_full);
        else if (s == "b") b = balke_pearl_iv_bounds(v.pxyz_full);
        else if (s == "c") b = unconfounded_ods_bounds(v.pxy_s1, plain);
        else if (s == "d" || s == "d_unrefined") {
          b = unconfounded_ods_iv_bounds(v.pxyz_s1, iv, cfg.policy);
          if (s == "d_unrefined" && b.components) {
            b.raw_lower = b.components->l_d;
            b.raw_upper = b.components->u_d;
            b.lower = clamp_to_unit_interval(b.raw_lower);
            b.upper = clamp_to_unit_interval(b.raw_upper);
          }
        } else if (s == "e") b = bounds_for_setting(SettingTag::E, v.pxy_s1, plain);
        else if (s == "f") b = bounds_for_setting(SettingTag::F, v.pxyz_s1, iv);
        else if (s == "g") b = bounds_for_setting(SettingTag::G, v.pxy_s1, plain);
        else b = bounds_for_setting(SettingTag::H, v.pxyz_s1, iv);
      } catch (const std::exception&) {
        ++agg[i].errors;
        continue;
      }
      WidthRow row;
      row.replicate = rep;
      row.setting = names[i];
      row.lower = b.lower;
      row.upper = b.upper;
      row.width = b.width();
      row.theta = theta;
      row.violated = !b.contains(theta);
      row.excludes_null = !b.contains(0.0);
      res.rows.push_back(row);

      SettingAggregate& a = agg[i];
      ++a.n;
      if (row.violated) ++a.violations;
      a.mean_width += row.width;
      widths[i].push_back(row.width);
      int bin = detail::theta_bin(theta);
      ++a.bin_total[bin];
      if (row.excludes_null) ++a.bin_excluding[bin];
    }
  }

  for (std::size_t i = 0; i < names.size(); ++i) {
    SettingAggregate& a = agg[i];
    if (a.n > 0) a.mean_width /= a.n;
    if (!widths[i].empty()) {
      std::vector<double>& w = widths[i];
      std::sort(w.begin(), w.end());
      std::size_t m = w.size();
      a.median_width = (m % 2 == 1) ? w[m / 2] : 0.5 * (w[m / 2 - 1] + w[m / 2]);
    }
  }
  res.aggregates = std::move(agg);
  return res;
}

// --------------------------------------------------------------------------
// Finite-sample draws from a scenario's observed-data distribution.

// Fixed selected-sample size: n independent draws from p{Z,X,Y|S=1}
// (or p{X,Y|S=1} without an instrument).
inline SampleCounts draw_sample_fixed_n(Rng& rng, const ConditionalCellTableIV& pxyz_s1, int n) {
  std::vector<double> probs(8);
  for (int z = 0; z < 2; ++z) {
    double pz = z ? pxyz_s1.z1_share : 1.0 - pxyz_s1.z1_share;
    for (int x = 0; x < 2; ++x)
      for (int y = 0; y < 2; ++y) probs[z * 4 + x * 2 + y] = pz * pxyz_s1.per_z[z].p[x][y];
  }
  std::vector<std::uint64_t> c = multinomial(rng, static_cast<std::uint64_t>(n), probs);
  SampleCounts out;
  out.has_z = true;
  out.n = static_cast<std::uint64_t>(n);
  for (int z = 0; z < 2; ++z)
    for (int x = 0; x < 2; ++x)
      for (int y = 0; y < 2; ++y) out.counts[z][x][y] = c[static_cast<std::size_t>(z * 4 + x * 2 + y)];
  return out;
}

inline SampleCounts draw_sample_fixed_n(Rng& rng, const ConditionalCellTable& pxy_s1, int n) {
  std::vector<double> probs(4);
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) probs[x * 2 + y] = pxy_s1.p[x][y];
  std::vector<std::uint64_t> c = multinomial(rng, static_cast<std::uint64_t>(n), probs);
  SampleCounts out;
  out.has_z = false;
  out.n = static_cast<std::uint64_t>(n);
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) out.counts[0][x][y] = c[static_cast<std::size_t>(x * 2 + y)];
  return out;
}

// Fixed cohort size: N independent draws from p{Z,X,Y,S}; subjects with S=0
// contribute only to the cohort total, so the selected count n is random.
inline SampleCounts draw_sample_fixed_cohort(Rng& rng, const FullJoint& joint, int cohort) {
  std::vector<double> probs(9, 0.0);
  for (int u = 0; u < 2; ++u)
    for (int z = 0; z < 2; ++z)
      for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) {
          probs[static_cast<std::size_t>(z * 4 + x * 2 + y)] += joint.p[u][z][x][y][1];
          probs[8] += joint.p[u][z][x][y][0];
        }
  std::vector<std::uint64_t> c = multinomial(rng, static_cast<std::uint64_t>(cohort), probs);
  SampleCounts out;
  out.has_z = true;
  out.N = static_cast<std::uint64_t>(cohort);
  out.n = 0;
  for (int z = 0; z < 2; ++z)
    for (int x = 0; x < 2; ++x)
      for (int y = 0; y < 2; ++y) {
        out.counts[z][x][y] = c[static_cast<std::size_t>(z * 4 + x * 2 + y)];
        out.n += out.counts[z][x][y];
      }
  return out;
}

}  // namespace odsbounds
