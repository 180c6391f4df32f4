#pragma once
// Probability-table types, validation, and conversions between conditional,
// joint and per-instrument representations. All types are immutable value
// types in practice; every operation is a pure function.

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "odsbounds/common.hpp"

namespace odsbounds {

// Cell probabilities p{X=x, Y=y | .} indexed [x][y]. Depending on context this
// holds p_xy (full population), p_xy given S=1, or a per-z slice of either.
struct ConditionalCellTable {
  std::array<std::array<double, 2>, 2> p{{{0.0, 0.0}, {0.0, 0.0}}};

  double at(int x, int y) const { return p[x][y]; }
  double& at(int x, int y) { return p[x][y]; }

  // cells ordered (p00, p01, p10, p11)
  static ConditionalCellTable from_cells(double p00, double p01, double p10, double p11) {
    ConditionalCellTable t;
    t.p[0][0] = p00;
    t.p[0][1] = p01;
    t.p[1][0] = p10;
    t.p[1][1] = p11;
    return t;
  }
  std::array<double, 4> cells() const { return {p[0][0], p[0][1], p[1][0], p[1][1]}; }
  double sum() const { return p[0][0] + p[0][1] + p[1][0] + p[1][1]; }
};

// Per-instrument-level tables plus the observed share p{Z=1 | S=1} (or p{Z=1}
// when the table holds full-population slices), needed to recover p{S=1|Z=z}.
struct ConditionalCellTableIV {
  std::array<ConditionalCellTable, 2> per_z;
  double z1_share = 0.5;
};

enum class RSource { FixedByDesign, Estimated };

struct DesignInfo {
  double r = 1.0;  // p{S=1}
  RSource r_source = RSource::FixedByDesign;
  std::optional<double> p_z1;                         // p{Z=1}, externally known
  std::optional<std::array<double, 2>> sel_given_y;   // (p{S=1|Y=0}, p{S=1|Y=1})
};

// Joint cells p{X=x, Y=y, S=1} plus the aggregate S=0 mass. The S=0 block is
// never identified cell-by-cell, so it is deliberately stored as one number.
struct JointCellTable {
  std::array<std::array<double, 2>, 2> s1{{{0.0, 0.0}, {0.0, 0.0}}};
  double s0_mass = 0.0;

  double at(int x, int y) const { return s1[x][y]; }
  std::array<double, 4> s1_cells() const { return {s1[0][0], s1[0][1], s1[1][0], s1[1][1]}; }
  double sum() const { return s1[0][0] + s1[0][1] + s1[1][0] + s1[1][1] + s0_mass; }
};

// Per-z joints p{X=x, Y=y, S=s | Z=z}; each z-slice normalizes to 1.
struct JointCellTableIV {
  std::array<JointCellTable, 2> per_z;
};

// Selected-sample cell counts. z index is meaningful only when has_z is set.
struct SampleCounts {
  bool has_z = false;
  std::array<std::array<std::array<std::uint64_t, 2>, 2>, 2> counts{};  // [z][x][y]
  std::uint64_t n = 0;
  std::optional<std::uint64_t> N;

  std::uint64_t z_total(int z) const {
    return counts[z][0][0] + counts[z][0][1] + counts[z][1][0] + counts[z][1][1];
  }
};

struct ValidationReport {
  bool pass = true;
  std::vector<std::string> violations;

  void fail(const std::string& what) {
    pass = false;
    violations.push_back(what);
  }
};

inline ValidationReport validate_table(const ConditionalCellTable& t) {
  ValidationReport rep;
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) {
      double v = t.p[x][y];
      if (!(v >= 0.0)) rep.fail("negative entry p" + std::to_string(x) + std::to_string(y));
      if (v > 1.0 + kProbTol) rep.fail("entry above 1: p" + std::to_string(x) + std::to_string(y));
    }
  double s = t.sum();
  if (std::fabs(s - 1.0) > kProbTol) rep.fail("sum=" + fmt_g10(s));
  return rep;
}

inline ValidationReport validate_table(const ConditionalCellTableIV& t) {
  ValidationReport rep;
  for (int z = 0; z < 2; ++z) {
    ValidationReport sub = validate_table(t.per_z[z]);
    for (const auto& v : sub.violations) rep.fail("z=" + std::to_string(z) + ": " + v);
  }
  if (!(t.z1_share >= 0.0 && t.z1_share <= 1.0)) rep.fail("z1 share outside [0,1]");
  return rep;
}

inline ValidationReport validate_design(const DesignInfo& d) {
  ValidationReport rep;
  if (!(d.r > 0.0 && d.r <= 1.0)) rep.fail("r outside (0,1]");
  if (d.p_z1 && !(*d.p_z1 > 0.0 && *d.p_z1 < 1.0)) rep.fail("p_z1 outside (0,1)");
  if (d.sel_given_y)
    for (int y = 0; y < 2; ++y) {
      double v = (*d.sel_given_y)[y];
      if (!(v >= 0.0 && v <= 1.0)) rep.fail("sel_given_y[" + std::to_string(y) + "] outside [0,1]");
    }
  return rep;
}

inline void require_valid(const ValidationReport& rep, const std::string& what) {
  if (rep.pass) return;
  std::string msg = what + ":";
  for (const auto& v : rep.violations) msg += " " + v + ";";
  throw validation_error(msg);
}

// Plug-in cell frequencies from selected-sample counts. r comes from n/N when
// a cohort size is present, otherwise it must be supplied externally.
struct TableBundle {
  std::optional<ConditionalCellTable> no_iv;
  std::optional<ConditionalCellTableIV> iv;
  DesignInfo design;
};

inline TableBundle counts_to_tables(const SampleCounts& c,
                                    const std::optional<double>& external_r = std::nullopt,
                                    const std::optional<double>& external_p_z1 = std::nullopt,
                                    const std::optional<std::array<double, 2>>& sel_given_y = std::nullopt) {
  if (c.n < 1) throw validation_error("counts: n must be at least 1");
  TableBundle out;
  double n = static_cast<double>(c.n);
  if (c.has_z) {
    ConditionalCellTableIV t;
    for (int z = 0; z < 2; ++z) {
      std::uint64_t tz = c.z_total(z);
      if (tz == 0) throw validation_error("empty instrument stratum z=" + std::to_string(z));
      for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
          t.per_z[z].p[x][y] = static_cast<double>(c.counts[z][x][y]) / static_cast<double>(tz);
    }
    t.z1_share = static_cast<double>(c.z_total(1)) / n;
    out.iv = t;
  } else {
    ConditionalCellTable t;
    for (int x = 0; x < 2; ++x)
      for (int y = 0; y < 2; ++y)
        t.p[x][y] = static_cast<double>(c.counts[0][x][y]) / n;
    out.no_iv = t;
  }
  if (c.N) {
    if (c.n > *c.N) throw validation_error("counts: n exceeds N");
    out.design.r = n / static_cast<double>(*c.N);
    out.design.r_source = RSource::Estimated;
  } else if (external_r) {
    out.design.r = *external_r;
    out.design.r_source = RSource::FixedByDesign;
  } else {
    throw validation_error("selection probability unavailable: supply r or cohort size N");
  }
  if (external_p_z1)
    out.design.p_z1 = *external_p_z1;
  else if (c.has_z && c.N)
    out.design.p_z1 = out.iv->z1_share;  // estimated z share; only without external knowledge
  out.design.sel_given_y = sel_given_y;
  require_valid(validate_design(out.design), "counts: design");
  return out;
}

inline ConditionalCellTable marginal_over_z(const ConditionalCellTableIV& t) {
  ConditionalCellTable out;
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      out.p[x][y] = (1.0 - t.z1_share) * t.per_z[0].p[x][y] + t.z1_share * t.per_z[1].p[x][y];
  return out;
}

inline JointCellTable joint_from_conditional(const ConditionalCellTable& t, const DesignInfo& d) {
  require_valid(validate_table(t), "joint_from_conditional: table");
  if (!(d.r > 0.0 && d.r <= 1.0)) throw validation_error("joint_from_conditional: r outside (0,1]");
  JointCellTable j;
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) j.s1[x][y] = t.p[x][y] * d.r;
  j.s0_mass = 1.0 - d.r;
  return j;
}

// p{S=1|Z=z} from observed z shares, the overall selection probability, and
// the known instrument prevalence.
inline std::array<double, 2> selection_given_z(const ConditionalCellTableIV& obs, const DesignInfo& d) {
  if (!d.p_z1) throw validation_error("selection_given_z: p{Z=1} unavailable");
  double pz1 = *d.p_z1;
  if (!(pz1 > 0.0 && pz1 < 1.0)) throw validation_error("selection_given_z: p{Z=1} outside (0,1)");
  std::array<double, 2> shares = {1.0 - obs.z1_share, obs.z1_share};
  std::array<double, 2> pz = {1.0 - pz1, pz1};
  std::array<double, 2> rz{};
  for (int z = 0; z < 2; ++z) {
    rz[z] = shares[z] * d.r / pz[z];
    if (rz[z] > 1.0 + kProbTol)
      throw validation_error("inconsistent selection/instrument inputs: p{S=1|Z=" +
                             std::to_string(z) + "}=" + fmt_g10(rz[z]));
    if (rz[z] > 1.0) rz[z] = 1.0;
  }
  return rz;
}

inline JointCellTableIV joint_from_conditional_iv(const ConditionalCellTableIV& t, const DesignInfo& d) {
  require_valid(validate_table(t), "joint_from_conditional_iv: table");
  std::array<double, 2> rz = selection_given_z(t, d);
  JointCellTableIV j;
  for (int z = 0; z < 2; ++z) {
    for (int x = 0; x < 2; ++x)
      for (int y = 0; y < 2; ++y) j.per_z[z].s1[x][y] = t.per_z[z].p[x][y] * rz[z];
    j.per_z[z].s0_mass = 1.0 - rz[z];
  }
  return j;
}

}  // namespace odsbounds
