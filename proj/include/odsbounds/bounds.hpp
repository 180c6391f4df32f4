#pragma once
// Closed-form bounds on the causal risk difference for the eight sampling
// designs, with the full zero-cell case dispatch and the refined intersection
// for the instrumented outcome-dependent design.
//
// One evaluation engine drives settings C and D: each term of the underlying
// random-sampling bound is linear in the full-population cells, and the
// unsampled block of each instrument stratum ranges over a polytope whose
// vertices depend on what is known about the empty rows. A term's bound value
// is its observed part plus the per-stratum extremum over those vertices.
// Row states:
//   Proportional - row observed with positive mass; the unsampled row is a
//                  scalar multiple of it, so it contributes its normalized
//                  observed direction as one vertex.
//   KnownZero    - the row is known to carry no unsampled mass (selection
//                  probability for that outcome known positive while the row
//                  is empty, or deduced from the other instrument stratum).
//   Free         - nothing is known; the row contributes both unit vertices.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "odsbounds/common.hpp"
#include "odsbounds/prob_model.hpp"

namespace odsbounds {

enum class SettingTag { A, B, C, D, E, F, G, H };
enum class CaseLabel { Primary, InvertedExposure, Case2Alternative, ConfoundedFallback, NotApplicable };

// Readings of the ambiguous coefficient sites in the instrumented
// unconfounded-sampling upper bound:
//   Corrected    - the derivation's values (tightest reading).
//   Literal      - the published expressions verbatim; invalid on some inputs.
//   Conservative - per term, the wider of the two readings; always valid.
enum class Eq8Policy { Conservative, Corrected, Literal };

inline const char* to_string(SettingTag t) {
  switch (t) {
    case SettingTag::A: return "A";
    case SettingTag::B: return "B";
    case SettingTag::C: return "C";
    case SettingTag::D: return "D";
    case SettingTag::E: return "E";
    case SettingTag::F: return "F";
    case SettingTag::G: return "G";
    case SettingTag::H: return "H";
  }
  return "?";
}

inline const char* to_string(CaseLabel c) {
  switch (c) {
    case CaseLabel::Primary: return "primary";
    case CaseLabel::InvertedExposure: return "inverted_exposure";
    case CaseLabel::Case2Alternative: return "case2_alternative";
    case CaseLabel::ConfoundedFallback: return "confounded_fallback";
    case CaseLabel::NotApplicable: return "not_applicable";
  }
  return "?";
}

inline const char* to_string(Eq8Policy p) {
  switch (p) {
    case Eq8Policy::Conservative: return "conservative";
    case Eq8Policy::Corrected: return "corrected";
    case Eq8Policy::Literal: return "literal";
  }
  return "?";
}

inline std::optional<SettingTag> setting_from_string(const std::string& s) {
  if (s.size() != 1) return std::nullopt;
  char c = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
  if (c < 'A' || c > 'H') return std::nullopt;
  return static_cast<SettingTag>(c - 'A');
}

inline std::optional<Eq8Policy> policy_from_string(const std::string& s) {
  if (s == "conservative") return Eq8Policy::Conservative;
  if (s == "corrected") return Eq8Policy::Corrected;
  if (s == "literal") return Eq8Policy::Literal;
  return std::nullopt;
}

// Exposure odds within outcome strata. An entry is Undefined exactly when its
// denominator cell is zero; Undefined is a value here, never NaN or infinity.
struct RatioValue {
  bool defined = false;
  double value = 0.0;
};

struct ExposureRatios {
  bool iv = false;
  std::array<RatioValue, 2> A{};                  // A[y] = p_{1y.1}/p_{0y.1}
  std::array<std::array<RatioValue, 2>, 2> B{};   // B[y][z] = p_{1y.z1}/p_{0y.z1}
};

inline ExposureRatios compute_ratios(const ConditionalCellTable& t) {
  ExposureRatios r;
  r.iv = false;
  for (int y = 0; y < 2; ++y)
    if (t.p[0][y] > 0.0) r.A[y] = {true, t.p[1][y] / t.p[0][y]};
  return r;
}

inline ExposureRatios compute_ratios(const ConditionalCellTableIV& t) {
  ExposureRatios r;
  r.iv = true;
  for (int y = 0; y < 2; ++y)
    for (int z = 0; z < 2; ++z)
      if (t.per_z[z].p[0][y] > 0.0) r.B[y][z] = {true, t.per_z[z].p[1][y] / t.per_z[z].p[0][y]};
  return r;
}

// Pre-refinement and confounded-side endpoints for the instrumented design.
struct BoundsComponents {
  double l_d = 0.0, u_d = 0.0;  // instrumented unconfounded-sampling terms
  double l_f = 0.0, u_f = 0.0;  // confounded-sampling terms on the implied joint
};

struct BoundsInterval {
  double lower = -1.0;
  double upper = 1.0;
  SettingTag setting = SettingTag::A;
  CaseLabel case_label = CaseLabel::NotApplicable;
  std::vector<int> active_lower;  // 0-based indices of the attaining terms
  std::vector<int> active_upper;
  double raw_lower = -1.0;  // endpoint values before clamping to [-1,1]
  double raw_upper = 1.0;
  bool clamped_lower = false;
  bool clamped_upper = false;
  // Crossing endpoints (beyond tolerance) mean the data are incompatible with
  // the assumed diagram; lower/upper then hold the crossing pair as computed.
  bool inconsistent = false;
  std::optional<BoundsComponents> components;
  std::vector<std::string> notes;

  double width() const { return upper - lower; }
  bool contains(double theta) const {
    return theta >= lower - kViolationSlack && theta <= upper + kViolationSlack;
  }
};

namespace detail {

enum class RowState { Proportional, KnownZero, Free };

struct Stratum {
  std::array<double, 4> obs{};  // (p00,p01,p10,p11) given S=1 within the stratum
  double r = 1.0;               // p{S=1 | stratum}
  std::array<RowState, 2> row{RowState::Proportional, RowState::Proportional};
};

// Cell index for (x,y) in the (p00,p01,p10,p11) order.
inline constexpr int cell_index(int x, int y) { return 2 * x + y; }

inline std::vector<std::array<double, 4>> block_vertices(const Stratum& st) {
  std::vector<std::array<double, 4>> verts;
  for (int y = 0; y < 2; ++y) {
    int i0 = cell_index(0, y), i1 = cell_index(1, y);
    switch (st.row[y]) {
      case RowState::Proportional: {
        double a = st.obs[i0], b = st.obs[i1], s = a + b;
        std::array<double, 4> u{0.0, 0.0, 0.0, 0.0};
        u[i0] = a / s;
        u[i1] = b / s;
        verts.push_back(u);
        break;
      }
      case RowState::Free: {
        std::array<double, 4> e0{0.0, 0.0, 0.0, 0.0}, e1{0.0, 0.0, 0.0, 0.0};
        e0[i0] = 1.0;
        e1[i1] = 1.0;
        verts.push_back(e0);
        verts.push_back(e1);
        break;
      }
      case RowState::KnownZero:
        break;
    }
  }
  return verts;
}

// One term of a random-sampling bound: per-stratum cell coefficients plus a
// constant. Single-stratum settings use c[0] only.
struct TermPattern {
  std::array<std::array<double, 4>, 2> c;
  double k;
};

constexpr TermPattern tp(std::array<double, 4> c0, std::array<double, 4> c1, double k) {
  return TermPattern{{c0, c1}, k};
}

// The eight instrumented random-sampling lower/upper term patterns,
// c[0] = coefficients on the z=0 cells, c[1] on the z=1 cells.
inline constexpr std::array<TermPattern, 8> kIvLower = {
    tp({1, 0, 0, 0}, {0, 0, 0, 1}, -1.0),
    tp({0, 0, 0, 1}, {1, 0, 0, 0}, -1.0),
    tp({0, -1, -1, 1}, {0, -1, 0, -1}, 0.0),
    tp({0, -1, 0, -1}, {0, -1, -1, 1}, 0.0),
    tp({0, 0, 0, 0}, {0, -1, -1, 0}, 0.0),
    tp({0, -1, -1, 0}, {0, 0, 0, 0}, 0.0),
    tp({-1, 0, -1, 0}, {1, -1, -1, 0}, 0.0),
    tp({1, -1, -1, 0}, {-1, 0, -1, 0}, 0.0),
};
inline constexpr std::array<TermPattern, 8> kIvUpper = {
    tp({0, -1, 0, 0}, {0, 0, -1, 0}, 1.0),
    tp({0, 0, -1, 0}, {0, -1, 0, 0}, 1.0),
    tp({1, 0, -1, 1}, {1, 0, 1, 0}, 0.0),
    tp({1, 0, 1, 0}, {1, 0, -1, 1}, 0.0),
    tp({0, 0, 0, 0}, {1, 0, 0, 1}, 0.0),
    tp({1, 0, 0, 1}, {0, 0, 0, 0}, 0.0),
    tp({0, 1, 0, 1}, {1, -1, 0, 1}, 0.0),
    tp({1, -1, 0, 1}, {0, 1, 0, 1}, 0.0),
};

// Single-stratum patterns for the design without an instrument.
inline constexpr TermPattern kPlainLower = tp({0, -1, -1, 0}, {0, 0, 0, 0}, 0.0);
inline constexpr TermPattern kPlainUpper = tp({0, -1, -1, 0}, {0, 0, 0, 0}, 1.0);

template <std::size_t NS>
double eval_term(const TermPattern& pat, const std::array<Stratum, NS>& strata,
                 const std::array<std::vector<std::array<double, 4>>, NS>& verts, bool lower) {
  double val = pat.k;
  for (std::size_t s = 0; s < NS; ++s) {
    const auto& c = pat.c[s];
    double obs = 0.0;
    for (int i = 0; i < 4; ++i) obs += c[i] * strata[s].obs[i];
    val += obs * strata[s].r;
    double w = 1.0 - strata[s].r;
    if (w > 0.0 && !verts[s].empty()) {
      bool first = true;
      double ext = 0.0;
      for (const auto& v : verts[s]) {
        double t = 0.0;
        for (int i = 0; i < 4; ++i) t += c[i] * v[i];
        if (first || (lower ? t < ext : t > ext)) {
          ext = t;
          first = false;
        }
      }
      val += ext * w;
    }
  }
  return val;
}

template <std::size_t N>
std::pair<double, std::vector<int>> pick_max(const std::array<double, N>& terms) {
  double best = terms[0];
  for (double t : terms) best = std::max(best, t);
  std::vector<int> active;
  for (std::size_t i = 0; i < N; ++i)
    if (terms[i] >= best - 1e-12) active.push_back(static_cast<int>(i));
  return {best, active};
}

template <std::size_t N>
std::pair<double, std::vector<int>> pick_min(const std::array<double, N>& terms) {
  double best = terms[0];
  for (double t : terms) best = std::min(best, t);
  std::vector<int> active;
  for (std::size_t i = 0; i < N; ++i)
    if (terms[i] <= best + 1e-12) active.push_back(static_cast<int>(i));
  return {best, active};
}

inline BoundsInterval make_interval(SettingTag tag, CaseLabel cl, double lo, double up,
                                    std::vector<int> active_lo, std::vector<int> active_up) {
  BoundsInterval b;
  b.setting = tag;
  b.case_label = cl;
  b.raw_lower = lo;
  b.raw_upper = up;
  b.lower = clamp_to_unit_interval(lo);
  b.upper = clamp_to_unit_interval(up);
  b.clamped_lower = (b.lower != lo);
  b.clamped_upper = (b.upper != up);
  if (b.clamped_lower) b.notes.push_back("lower endpoint clamped to [-1,1]");
  if (b.clamped_upper) b.notes.push_back("upper endpoint clamped to [-1,1]");
  b.inconsistent = (lo > up + kInconsistencyTol);
  b.active_lower = std::move(active_lo);
  b.active_upper = std::move(active_up);
  return b;
}

// Closed-form term lists for the always-valid designs, templated so the exact
// rational oracle can evaluate them without rounding. Cells are the S=1 joint
// cells (p001, p011, p101, p111) in (x,y) order; per-z for the IV variants.
template <class S>
std::array<S, 2> confounded_endpoints(const std::array<S, 4>& c) {
  return {c[3] + c[0] - S(1), S(1) - c[1] - c[2]};
}

template <class S>
std::pair<std::array<S, 10>, std::array<S, 10>> confounded_iv_terms(const std::array<S, 4>& z0,
                                                                    const std::array<S, 4>& z1) {
  const S &a0 = z0[0], &b0 = z0[1], &c0 = z0[2], &d0 = z0[3];
  const S &a1 = z1[0], &b1 = z1[1], &c1 = z1[2], &d1 = z1[3];
  const S one(1);
  std::array<S, 10> lo = {
      a1 - b0 - d0 + S(2) * d1 - one,
      a1 + d0 - one,
      a0 + d1 - one,
      a1 + d1 - one,
      a0 - b1 + S(2) * d0 - d1 - one,
      -a0 + S(2) * a1 - c0 + d1 - one,
      a0 + d0 - one,
      S(2) * a0 - a1 - c1 + d0 - one,
      S(2) * a0 - a1 - c1 - b1 + S(2) * d0 - d1 - one,
      -a0 + S(2) * a1 - c0 - b0 - d0 + S(2) * d1 - one,
  };
  std::array<S, 10> up = {
      -c0 - S(2) * b0 + b1 + d1 + one,
      -c1 + b0 - S(2) * b1 + d0 + one,
      a1 - S(2) * c0 + c1 - b0 + one,
      -c0 - b1 + one,
      -c1 - b0 + one,
      -c0 - b0 + one,
      a1 - S(2) * c0 + c1 - S(2) * b0 + b1 + d1 + one,
      -c1 - b1 + one,
      a0 + c0 - S(2) * c1 - b1 + one,
      a0 + c0 - S(2) * c1 + b0 - S(2) * b1 + d0 + one,
  };
  return {lo, up};
}

template <class S>
std::pair<std::array<S, 8>, std::array<S, 8>> exposure_confounded_iv_terms(
    const std::array<S, 4>& z0, const std::array<S, 4>& z1) {
  const S &a0 = z0[0], &b0 = z0[1], &c0 = z0[2], &d0 = z0[3];
  const S &a1 = z1[0], &b1 = z1[1], &c1 = z1[2], &d1 = z1[3];
  const S one(1), two(2);
  std::array<S, 8> lo = {
      a1 + d1 - one,
      a0 + d1 - one,
      a1 + d0 - one,
      a0 + d0 - one,
      two * a1 + b0 + d0 + d1 - two,
      two * a0 + b1 + d0 + d1 - two,
      a0 + a1 + c0 + two * d1 - two,
      a0 + a1 + c1 + two * d0 - two,
  };
  std::array<S, 8> up = {
      -c0 - b0 + one,
      -c1 - b0 + one,
      -c0 - b1 + one,
      -c1 - b1 + one,
      -a0 - c0 - c1 - two * b1 + two,
      -a1 - c0 - c1 - two * b0 + two,
      -two * c0 - b0 - b1 - d1 + two,
      -two * c1 - b0 - b1 - d0 + two,
  };
  return {lo, up};
}

// Published instrumented unconfounded-sampling expressions evaluated verbatim,
// including the sites the derivation disagrees with. Requires every within-row
// exposure ratio's denominator to be positive; a zero numerator turns the
// 1/B sites into +infinity, which simply drops those terms from the minimum.
struct LiteralTerms {
  bool evaluable = false;
  std::array<double, 8> lower{};
  std::array<double, 8> upper{};
};

inline LiteralTerms literal_iv_terms(const std::array<double, 4>& t0, const std::array<double, 4>& t1,
                                     double r0, double r1) {
  LiteralTerms out;
  if (t0[0] <= 0.0 || t0[1] <= 0.0 || t1[0] <= 0.0 || t1[1] <= 0.0) return out;
  out.evaluable = true;
  const double inf = std::numeric_limits<double>::infinity();
  double B001 = t0[2] / t0[0], B101 = t0[3] / t0[1];
  double B011 = t1[2] / t1[0], B111 = t1[3] / t1[1];
  auto inv = [&](double b) { return b > 0.0 ? 1.0 / b : inf; };
  out.lower = {
      t1[3] * r1 + t0[0] * r0 - 1.0,
      t0[3] * r0 + t1[0] * r1 - 1.0,
      (t0[3] - t0[2] - t0[1]) * r0 - (t1[3] + t1[1]) * r1 - (B001 / (1.0 + B001)) * (1.0 - r0) - (1.0 - r1),
      (t1[3] - t1[2] - t1[1]) * r1 - (t0[3] + t0[1]) * r0 - (B011 / (1.0 + B011)) * (1.0 - r1) - (1.0 - r0),
      -(t1[2] + t1[1]) * r1 - std::max(1.0 / (1.0 + B111), B011 / (1.0 + B011)) * (1.0 - r1),
      -(t0[2] + t0[1]) * r0 - std::max(1.0 / (1.0 + B101), B001 / (1.0 + B001)) * (1.0 - r0),
      (t1[0] - t1[2] - t1[1]) * r1 - (t0[2] + t0[0]) * r0 -
          std::max(1.0 / (1.0 + B111), -(1.0 - B011) / (1.0 + B011)) * (1.0 - r1) - (1.0 - r0),
      (t0[0] - t0[2] - t0[1]) * r0 - (t1[2] + t1[0]) * r1 -
          std::max(1.0 / (1.0 + B101), -(1.0 - B001) / (1.0 + B001)) * (1.0 - r0) - (1.0 - r1),
  };
  out.upper = {
      1.0 - t1[2] * r1 - t0[1] * r0,
      1.0 - t0[2] * r0 - t1[1] * r1,
      (t1[2] + t1[0]) * r1 + (t0[3] + t0[0] - t0[2]) * r0 + (1.0 - r1) +
          std::max((1.0 - B001) / (1.0 + B001), B101 / (1.0 + B101)) * r0,
      (t1[3] + t1[0] - t1[2]) * r1 + (t0[2] + t0[0]) * r0 +
          std::max((1.0 - B011) / (1.0 + B011), 1.0) * (1.0 - r1) + (1.0 - r0),
      (t1[3] + t1[0]) * r1 + std::max(1.0 / (1.0 + B011), B111 / (1.0 + B111)) * (1.0 - r1),
      (t0[3] + t0[0]) * r0 + std::max(1.0 / (1.0 + B001), B101 / (1.0 + B101)) * (1.0 - r0),
      (t1[3] + t1[0] - t1[1]) * r1 + (t0[3] + t0[1]) * r0 +
          std::max(inv(B011), -(1.0 - B111) / (1.0 + B111)) * (1.0 - r1) + (1.0 - r0),
      (t0[3] + t0[0] - t0[1]) * r0 + (t1[3] + t1[1]) * r1 +
          std::max(inv(B001), -(1.0 - B101) / (1.0 + B101)) * (1.0 - r0) + (1.0 - r1),
  };
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Random sampling (setting A): interval of width exactly 1.
inline BoundsInterval robins_bounds(const ConditionalCellTable& t) {
  require_valid(validate_table(t), "robins_bounds: table");
  double disc = t.p[0][1] + t.p[1][0];
  return detail::make_interval(SettingTag::A, CaseLabel::NotApplicable, -disc, 1.0 - disc, {0}, {0});
}

// Random sampling with a binary instrument (setting B): 8+8 terms over the
// full-population per-z tables.
inline BoundsInterval balke_pearl_iv_bounds(const ConditionalCellTableIV& t) {
  require_valid(validate_table(t), "balke_pearl_iv_bounds: table");
  std::array<double, 8> lo{}, up{};
  for (int i = 0; i < 8; ++i) {
    const auto& pl = detail::kIvLower[i];
    const auto& pu = detail::kIvUpper[i];
    double vl = pl.k, vu = pu.k;
    for (int z = 0; z < 2; ++z) {
      auto cells = t.per_z[z].cells();
      for (int j = 0; j < 4; ++j) {
        vl += pl.c[z][j] * cells[j];
        vu += pu.c[z][j] * cells[j];
      }
    }
    lo[i] = vl;
    up[i] = vu;
  }
  auto [l, al] = detail::pick_max(lo);
  auto [u, au] = detail::pick_min(up);
  return detail::make_interval(SettingTag::B, CaseLabel::NotApplicable, l, u, al, au);
}

// Confounded outcome-dependent sampling (settings E and G share the form).
inline BoundsInterval confounded_ods_bounds(const JointCellTable& j, SettingTag tag = SettingTag::E) {
  if (!(tag == SettingTag::E || tag == SettingTag::G))
    throw validation_error("confounded_ods_bounds: tag must be E or G");
  auto ends = detail::confounded_endpoints<double>(j.s1_cells());
  return detail::make_interval(tag, CaseLabel::NotApplicable, ends[0], ends[1], {0}, {0});
}

// Confounded outcome-dependent sampling with an instrument (setting F).
inline BoundsInterval confounded_ods_iv_bounds(const JointCellTableIV& j) {
  auto [lo, up] = detail::confounded_iv_terms<double>(j.per_z[0].s1_cells(), j.per_z[1].s1_cells());
  auto [l, al] = detail::pick_max(lo);
  auto [u, au] = detail::pick_min(up);
  return detail::make_interval(SettingTag::F, CaseLabel::NotApplicable, l, u, al, au);
}

// Confounded exposure- and outcome-dependent sampling with an instrument (setting H).
inline BoundsInterval confounded_exposure_ods_iv_bounds(const JointCellTableIV& j) {
  auto [lo, up] =
      detail::exposure_confounded_iv_terms<double>(j.per_z[0].s1_cells(), j.per_z[1].s1_cells());
  auto [l, al] = detail::pick_max(lo);
  auto [u, au] = detail::pick_min(up);
  return detail::make_interval(SettingTag::H, CaseLabel::NotApplicable, l, u, al, au);
}

// Outcome-conditional bounds: the r->0 limit of the setting-C bounds, computed
// from within-outcome-stratum exposure conditionals of the selected sample.
inline BoundsInterval outcome_conditional_bounds(const ConditionalCellTable& t) {
  require_valid(validate_table(t), "outcome_conditional_bounds: table");
  double y0 = t.p[0][0] + t.p[1][0];
  double y1 = t.p[0][1] + t.p[1][1];
  if (y0 <= 0.0 || y1 <= 0.0) throw validation_error("outcome_conditional_bounds: empty outcome stratum");
  double pX0gY1 = t.p[0][1] / y1;
  double pX1gY0 = t.p[1][0] / y0;
  double pX1gY1 = t.p[1][1] / y1;
  double pX0gY0 = t.p[0][0] / y0;
  auto b = detail::make_interval(SettingTag::C, CaseLabel::NotApplicable, -std::max(pX0gY1, pX1gY0),
                                 std::max(pX1gY1, pX0gY0), {0}, {0});
  b.notes.push_back("outcome-conditional limit (selection probability -> 0)");
  return b;
}

namespace detail {

inline ConditionalCellTable recode_x(const ConditionalCellTable& t) {
  return ConditionalCellTable::from_cells(t.p[1][0], t.p[1][1], t.p[0][0], t.p[0][1]);
}

inline ConditionalCellTableIV recode_x(const ConditionalCellTableIV& t) {
  ConditionalCellTableIV out;
  out.per_z = {recode_x(t.per_z[0]), recode_x(t.per_z[1])};
  out.z1_share = t.z1_share;
  return out;
}

inline BoundsInterval negate_swap(BoundsInterval b) {
  std::swap(b.raw_lower, b.raw_upper);
  b.raw_lower = -b.raw_lower;
  b.raw_upper = -b.raw_upper;
  std::swap(b.lower, b.upper);
  b.lower = -b.lower;
  b.upper = -b.upper;
  std::swap(b.active_lower, b.active_upper);
  std::swap(b.clamped_lower, b.clamped_upper);
  if (b.components) {
    auto& c = *b.components;
    c = BoundsComponents{-c.u_d, -c.l_d, -c.u_f, -c.l_f};
  }
  b.case_label = CaseLabel::InvertedExposure;
  b.notes.push_back("exposure recoded (x* = 1-x); bounds negated and swapped");
  return b;
}

// Row state for an empty observed row, given what is known about selection
// and (for IV data) the same outcome row in the other stratum.
inline RowState empty_row_state(int y, const DesignInfo& d, bool nonempty_elsewhere) {
  if (d.sel_given_y) {
    double sel = (*d.sel_given_y)[y];
    return sel > 0.0 ? RowState::KnownZero : RowState::Free;
  }
  return nonempty_elsewhere ? RowState::KnownZero : RowState::Free;
}

}  // namespace detail

// Unconfounded outcome-dependent sampling (setting C), full case dispatch.
inline BoundsInterval unconfounded_ods_bounds(const ConditionalCellTable& t, const DesignInfo& d) {
  require_valid(validate_table(t), "unconfounded_ods_bounds: table");
  if (!(d.r > 0.0 && d.r <= 1.0)) throw validation_error("unconfounded_ods_bounds: r outside (0,1]");

  std::array<bool, 2> row_empty = {t.p[0][0] + t.p[1][0] <= 0.0, t.p[0][1] + t.p[1][1] <= 0.0};

  if (!row_empty[0] && !row_empty[1]) {
    ExposureRatios ratios = compute_ratios(t);
    bool direct = ratios.A[0].defined && ratios.A[1].defined;
    bool inverse = t.p[1][0] > 0.0 && t.p[1][1] > 0.0;
    if (!direct && inverse) {
      BoundsInterval rec = unconfounded_ods_bounds(detail::recode_x(t), d);
      return detail::negate_swap(std::move(rec));
    }
    detail::Stratum st{t.cells(), d.r, {detail::RowState::Proportional, detail::RowState::Proportional}};
    std::array<detail::Stratum, 1> strata = {st};
    std::array<std::vector<std::array<double, 4>>, 1> verts = {detail::block_vertices(st)};
    double lo = detail::eval_term(detail::kPlainLower, strata, verts, true);
    double up = detail::eval_term(detail::kPlainUpper, strata, verts, false);
    auto b = detail::make_interval(SettingTag::C, CaseLabel::Primary, lo, up, {0}, {0});
    if (!direct) b.notes.push_back("an exposure ratio is infinite; segment endpoints used directly");
    return b;
  }

  // Exactly one outcome row can be empty in a normalized table.
  int ye = row_empty[0] ? 0 : 1;
  detail::RowState state = detail::empty_row_state(ye, d, false);
  if (state == detail::RowState::KnownZero) {
    detail::Stratum st{t.cells(), d.r, {detail::RowState::Proportional, detail::RowState::Proportional}};
    st.row[ye] = detail::RowState::KnownZero;
    std::array<detail::Stratum, 1> strata = {st};
    std::array<std::vector<std::array<double, 4>>, 1> verts = {detail::block_vertices(st)};
    double lo = detail::eval_term(detail::kPlainLower, strata, verts, true);
    double up = detail::eval_term(detail::kPlainUpper, strata, verts, false);
    bool nondeterministic = d.sel_given_y && (*d.sel_given_y)[0] > 0.0 && (*d.sel_given_y)[0] < 1.0 &&
                            (*d.sel_given_y)[1] > 0.0 && (*d.sel_given_y)[1] < 1.0;
    CaseLabel label = nondeterministic ? CaseLabel::Case2Alternative : CaseLabel::Primary;
    auto b = detail::make_interval(SettingTag::C, label, lo, up, {0}, {0});
    b.notes.push_back("outcome stratum y=" + std::to_string(ye) +
                      " has probability zero; its unsampled row drops out");
    return b;
  }

  // Both the ratio and its inverse are undefined and selection is unknown (or
  // the stratum is unsampleable): only the confounded-design bounds are valid.
  BoundsInterval fb = confounded_ods_bounds(joint_from_conditional(t, d));
  fb.setting = SettingTag::C;
  fb.case_label = CaseLabel::ConfoundedFallback;
  fb.notes.push_back("empty outcome row whose population share cannot be ruled out; "
                     "confounded-design bounds apply");
  return fb;
}

namespace detail {

struct IvEngineEval {
  std::array<double, 8> lower{}, upper{};
  std::array<RowState, 4> states{};  // [y + 2*z]
  bool any_free = false;
  bool any_known_zero = false;
};

inline IvEngineEval eval_iv_engine(const ConditionalCellTableIV& t, const std::array<double, 2>& rz,
                                   const DesignInfo& d) {
  IvEngineEval out;
  std::array<Stratum, 2> strata;
  for (int z = 0; z < 2; ++z) {
    strata[z].obs = t.per_z[z].cells();
    strata[z].r = rz[z];
    for (int y = 0; y < 2; ++y) {
      bool empty = t.per_z[z].p[0][y] + t.per_z[z].p[1][y] <= 0.0;
      RowState st = RowState::Proportional;
      if (empty) {
        bool elsewhere = t.per_z[1 - z].p[0][y] + t.per_z[1 - z].p[1][y] > 0.0;
        st = empty_row_state(y, d, elsewhere);
        if (st == RowState::Free) out.any_free = true;
        if (st == RowState::KnownZero) out.any_known_zero = true;
      }
      strata[z].row[y] = st;
      out.states[y + 2 * z] = st;
    }
    if (strata[z].row[0] == RowState::KnownZero && strata[z].row[1] == RowState::KnownZero &&
        rz[z] < 1.0 - kProbTol)
      throw validation_error("selection information inconsistent: stratum z=" + std::to_string(z) +
                             " has unsampled mass but both outcome rows are known empty");
  }
  std::array<std::vector<std::array<double, 4>>, 2> verts = {block_vertices(strata[0]),
                                                             block_vertices(strata[1])};
  for (int i = 0; i < 8; ++i) {
    out.lower[i] = eval_term(kIvLower[i], strata, verts, true);
    out.upper[i] = eval_term(kIvUpper[i], strata, verts, false);
  }
  return out;
}

inline void apply_iv_policy(IvEngineEval& eval, const ConditionalCellTableIV& t,
                            const std::array<double, 2>& rz, Eq8Policy policy,
                            std::vector<std::string>& notes) {
  if (policy == Eq8Policy::Corrected) return;
  LiteralTerms lit = literal_iv_terms(t.per_z[0].cells(), t.per_z[1].cells(), rz[0], rz[1]);
  if (!lit.evaluable) {
    if (policy == Eq8Policy::Literal)
      notes.push_back("literal expressions not evaluable (zero denominator cell); derivation values used");
    return;
  }
  for (int i = 0; i < 8; ++i) {
    if (policy == Eq8Policy::Literal) {
      eval.lower[i] = lit.lower[i];
      eval.upper[i] = lit.upper[i];
    } else {  // Conservative: the wider of the two readings, term by term
      eval.lower[i] = std::min(eval.lower[i], lit.lower[i]);
      eval.upper[i] = std::max(eval.upper[i], lit.upper[i]);
    }
  }
}

}  // namespace detail

// Unconfounded outcome-dependent sampling with an instrument (setting D).
// Returns the refined intersection with the confounded-design bounds computed
// on the implied joint; the pre-refinement endpoints live in `components`.
inline BoundsInterval unconfounded_ods_iv_bounds(const ConditionalCellTableIV& t, const DesignInfo& d,
                                                 Eq8Policy policy = Eq8Policy::Conservative) {
  require_valid(validate_table(t), "unconfounded_ods_iv_bounds: table");
  std::array<double, 2> rz = selection_given_z(t, d);

  // Inverted-exposure dispatch: some within-row ratio undefined while every
  // recoded ratio is defined.
  bool all_direct = true, all_inverse = true;
  for (int z = 0; z < 2; ++z)
    for (int y = 0; y < 2; ++y) {
      if (t.per_z[z].p[0][y] <= 0.0) all_direct = false;
      if (t.per_z[z].p[1][y] <= 0.0) all_inverse = false;
    }
  if (!all_direct && all_inverse) {
    BoundsInterval rec = unconfounded_ods_iv_bounds(detail::recode_x(t), d, policy);
    return detail::negate_swap(std::move(rec));
  }

  detail::IvEngineEval eval = detail::eval_iv_engine(t, rz, d);
  std::vector<std::string> policy_notes;
  detail::apply_iv_policy(eval, t, rz, policy, policy_notes);

  auto [l_d, al] = detail::pick_max(eval.lower);
  auto [u_d, au] = detail::pick_min(eval.upper);

  JointCellTableIV j = joint_from_conditional_iv(t, d);
  auto [flo, fup] = detail::confounded_iv_terms<double>(j.per_z[0].s1_cells(), j.per_z[1].s1_cells());
  auto [l_f, afl] = detail::pick_max(flo);
  auto [u_f, afu] = detail::pick_min(fup);

  CaseLabel label = CaseLabel::Primary;
  if (eval.any_free)
    label = CaseLabel::ConfoundedFallback;
  else if (eval.any_known_zero && d.sel_given_y && (*d.sel_given_y)[0] > 0.0 &&
           (*d.sel_given_y)[0] < 1.0 && (*d.sel_given_y)[1] > 0.0 && (*d.sel_given_y)[1] < 1.0)
    label = CaseLabel::Case2Alternative;

  BoundsInterval b = detail::make_interval(SettingTag::D, label, std::max(l_d, l_f), std::min(u_d, u_f),
                                           al, au);
  b.components = BoundsComponents{l_d, u_d, l_f, u_f};
  for (auto& n : policy_notes) b.notes.push_back(n);
  if (eval.any_free)
    b.notes.push_back("an outcome row is empty in every stratum with selection unknown; "
                      "its unsampled rows are unconstrained");
  else if (eval.any_known_zero && label == CaseLabel::Primary) {
    if (d.sel_given_y)
      b.notes.push_back("empty outcome row with selection probability known positive; "
                        "its unsampled row drops out");
    else
      b.notes.push_back("outcome row empty in one instrument stratum but not the other: "
                        "the full-population row is deduced empty there");
  }
  if (l_f > l_d + 1e-15) {
    b.notes.push_back("refined lower endpoint supplied by the confounded-design terms (index " +
                      std::to_string(afl.front()) + ")");
    b.active_lower = afl;
  }
  if (u_f < u_d - 1e-15) {
    b.notes.push_back("refined upper endpoint supplied by the confounded-design terms (index " +
                      std::to_string(afu.front()) + ")");
    b.active_upper = afu;
  }
  return b;
}

// Data holder for bounds_for_setting: settings B, D, F, H need per-z tables.
using SettingData = std::variant<ConditionalCellTable, ConditionalCellTableIV>;

inline BoundsInterval bounds_for_setting(SettingTag tag, const SettingData& data, const DesignInfo& d,
                                         Eq8Policy policy = Eq8Policy::Conservative) {
  bool needs_iv = tag == SettingTag::B || tag == SettingTag::D || tag == SettingTag::F || tag == SettingTag::H;
  if (needs_iv && !std::holds_alternative<ConditionalCellTableIV>(data))
    throw validation_error(std::string("setting ") + to_string(tag) + " requires per-instrument tables");
  if (!needs_iv && !std::holds_alternative<ConditionalCellTable>(data))
    throw validation_error(std::string("setting ") + to_string(tag) + " takes a single cell table");
  switch (tag) {
    case SettingTag::A:
      return robins_bounds(std::get<ConditionalCellTable>(data));
    case SettingTag::B:
      return balke_pearl_iv_bounds(std::get<ConditionalCellTableIV>(data));
    case SettingTag::C:
      return unconfounded_ods_bounds(std::get<ConditionalCellTable>(data), d);
    case SettingTag::D:
      return unconfounded_ods_iv_bounds(std::get<ConditionalCellTableIV>(data), d, policy);
    case SettingTag::E:
    case SettingTag::G:
      return confounded_ods_bounds(joint_from_conditional(std::get<ConditionalCellTable>(data), d), tag);
    case SettingTag::F:
      return confounded_ods_iv_bounds(joint_from_conditional_iv(std::get<ConditionalCellTableIV>(data), d));
    case SettingTag::H:
      return confounded_exposure_ods_iv_bounds(
          joint_from_conditional_iv(std::get<ConditionalCellTableIV>(data), d));
  }
  throw validation_error("unknown setting");
}

inline BoundsInterval bounds_for_setting(SettingTag tag, const TableBundle& bundle,
                                         Eq8Policy policy = Eq8Policy::Conservative) {
  bool needs_iv = tag == SettingTag::B || tag == SettingTag::D || tag == SettingTag::F || tag == SettingTag::H;
  if (needs_iv) {
    if (!bundle.iv)
      throw validation_error(std::string("setting ") + to_string(tag) + " requires per-instrument data");
    return bounds_for_setting(tag, SettingData(*bundle.iv), bundle.design, policy);
  }
  if (bundle.no_iv) return bounds_for_setting(tag, SettingData(*bundle.no_iv), bundle.design, policy);
  if (bundle.iv)
    return bounds_for_setting(tag, SettingData(marginal_over_z(*bundle.iv)), bundle.design, policy);
  throw validation_error("bounds_for_setting: bundle holds no table");
}

}  // namespace odsbounds
