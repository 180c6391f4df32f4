#pragma once
// Independent verification of the closed-form bounds for the confounded
// designs by direct linear programming over response-function variables.
//
// Each unobserved-confounding setting is parameterized by a finite vector q of
// response-type probabilities: R_x picks the exposure (a constant, or a
// function of the instrument where one is present), R_y picks Y as a function
// of X, and R_s picks S as a function of its parents (Y alone, or X and Y
// under exposure-dependent sampling). Unary function codes pack truth tables
// into integers: code bit v is f(v), so 0=never, 1=complement, 2=identity,
// 3=always; the 16 codes of a two-argument function use bit x+2y. The causal
// risk difference is linear in q, and the observed S=1 cells are linear
// equality constraints, so the tight bounds are LP optima.

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "odsbounds/bounds.hpp"
#include "odsbounds/common.hpp"
#include "odsbounds/prob_model.hpp"
#include "odsbounds/rng.hpp"
#include "odsbounds/simplex.hpp"

namespace odsbounds {

inline int unary(int code, int v) { return (code >> v) & 1; }

struct QIndex {
  int rx = 0, ry = 0, rs = 0;
};

struct ProgramDims {
  int nx, ny, ns;
  int vars() const { return nx * ny * ns; }
};

inline ProgramDims program_dims(SettingTag tag) {
  switch (tag) {
    case SettingTag::E: return {2, 4, 4};
    case SettingTag::F: return {4, 4, 4};
    case SettingTag::G: return {2, 4, 16};
    case SettingTag::H: return {4, 4, 16};
    default: throw validation_error("response-function program: setting must be E, F, G, or H");
  }
}

inline bool program_has_instrument(SettingTag tag) {
  return tag == SettingTag::F || tag == SettingTag::H;
}

inline QIndex decode_q(SettingTag tag, int index) {
  ProgramDims d = program_dims(tag);
  QIndex q;
  q.rs = index % d.ns;
  q.ry = (index / d.ns) % d.ny;
  q.rx = index / (d.ns * d.ny);
  return q;
}

inline int encode_q(SettingTag tag, const QIndex& q) {
  ProgramDims d = program_dims(tag);
  return q.rx * d.ny * d.ns + q.ry * d.ns + q.rs;
}

struct QBehavior {
  int x, y, s;
};

inline QBehavior q_behavior(SettingTag tag, const QIndex& q, int z) {
  QBehavior b;
  b.x = program_has_instrument(tag) ? unary(q.rx, z) : q.rx;
  b.y = unary(q.ry, b.x);
  if (tag == SettingTag::E || tag == SettingTag::F)
    b.s = unary(q.rs, b.y);
  else
    b.s = (q.rs >> (b.x + 2 * b.y)) & 1;
  return b;
}

// Shared structure of a program: which q's enter each observed-cell row and
// each variable's objective sign. Row order is z-major, cells in
// (x,y) = 00, 01, 10, 11 order; names are p{x}{y}1 with a .z suffix when an
// instrument is present. The normalization row is implicit and goes first
// when the dense program is materialized.
struct ProgramShape {
  SettingTag tag = SettingTag::E;
  int vars = 0;
  std::vector<std::string> row_names;
  std::vector<std::vector<int>> row_vars;
  std::vector<int> obj_sign;  // per variable, in {-1,0,1}
};

inline ProgramShape program_shape(SettingTag tag) {
  ProgramDims d = program_dims(tag);
  ProgramShape s;
  s.tag = tag;
  s.vars = d.vars();
  int nz = program_has_instrument(tag) ? 2 : 1;
  for (int z = 0; z < nz; ++z)
    for (int x = 0; x < 2; ++x)
      for (int y = 0; y < 2; ++y) {
        std::string name = "p" + std::to_string(x) + std::to_string(y) + "1";
        if (nz == 2) name += "." + std::to_string(z);
        s.row_names.push_back(name);
        s.row_vars.emplace_back();
      }
  s.obj_sign.assign(s.vars, 0);
  for (int v = 0; v < s.vars; ++v) {
    QIndex q = decode_q(tag, v);
    s.obj_sign[v] = unary(q.ry, 1) - unary(q.ry, 0);
    for (int z = 0; z < nz; ++z) {
      QBehavior b = q_behavior(tag, q, z);
      if (b.s != 1) continue;
      int row = z * 4 + b.x * 2 + b.y;
      s.row_vars[row].push_back(v);
    }
  }
  return s;
}

template <class S>
struct ResponseFunctionProgram {
  SettingTag tag = SettingTag::E;
  int vars = 0;
  std::vector<std::string> row_names;        // normalization row first
  std::vector<std::vector<S>> rows;
  std::vector<S> rhs;
  std::vector<S> objective;

  LpProblem<S> problem() const {
    LpProblem<S> p;
    p.n = vars;
    p.rows = rows;
    p.rhs = rhs;
    p.objective = objective;
    return p;
  }
};

// cells arrays hold the S=1 joint cells (p001, p011, p101, p111); one array
// per instrument stratum for the IV settings, z1 ignored otherwise.
template <class S>
ResponseFunctionProgram<S> build_program_cells(SettingTag tag, const std::array<S, 4>& z0,
                                               const std::array<S, 4>& z1 = {}) {
  ProgramShape shape = program_shape(tag);
  ResponseFunctionProgram<S> p;
  p.tag = tag;
  p.vars = shape.vars;
  p.row_names.push_back("norm");
  p.rows.push_back(std::vector<S>(shape.vars, S(1)));
  p.rhs.push_back(S(1));
  for (std::size_t i = 0; i < shape.row_vars.size(); ++i) {
    p.row_names.push_back(shape.row_names[i]);
    std::vector<S> row(shape.vars, S(0));
    for (int v : shape.row_vars[i]) row[v] = S(1);
    p.rows.push_back(std::move(row));
    const std::array<S, 4>& cells = (i < 4) ? z0 : z1;
    p.rhs.push_back(cells[i % 4]);
  }
  p.objective.assign(shape.vars, S(0));
  for (int v = 0; v < shape.vars; ++v) p.objective[v] = S(shape.obj_sign[v]);
  return p;
}

inline ResponseFunctionProgram<double> build_program(SettingTag tag, const JointCellTable& j) {
  if (program_has_instrument(tag))
    throw validation_error("build_program: setting needs per-instrument joint tables");
  return build_program_cells<double>(tag, j.s1_cells());
}

inline ResponseFunctionProgram<double> build_program(SettingTag tag, const JointCellTableIV& j) {
  if (!program_has_instrument(tag))
    throw validation_error("build_program: setting takes a single joint table");
  return build_program_cells<double>(tag, j.per_z[0].s1_cells(), j.per_z[1].s1_cells());
}

template <class S>
struct MinMaxResult {
  LpStatus status = LpStatus::Infeasible;
  S lower{};
  S upper{};
  std::vector<S> argmin, argmax;
};

template <class S>
MinMaxResult<S> solve_min_max(const ResponseFunctionProgram<S>& prog, const S& eps) {
  LpProblem<S> p = prog.problem();
  LpResult<S> lo = lp_minimize(p, eps);
  LpResult<S> hi = lp_maximize(p, eps);
  MinMaxResult<S> out;
  if (lo.status != LpStatus::Optimal || hi.status != LpStatus::Optimal) {
    out.status = (lo.status == LpStatus::Infeasible || hi.status == LpStatus::Infeasible)
                     ? LpStatus::Infeasible
                     : LpStatus::Unbounded;
    return out;
  }
  out.status = LpStatus::Optimal;
  out.lower = lo.value;
  out.upper = hi.value;
  out.argmin = std::move(lo.solution);
  out.argmax = std::move(hi.solution);
  return out;
}

inline MinMaxResult<double> solve_min_max(const ResponseFunctionProgram<double>& prog) {
  return solve_min_max<double>(prog, 1e-10);
}

// Closed-form interval for a confounded setting from raw S=1 cells, exact in
// the scalar type.
template <class S>
std::pair<S, S> closed_form_cells(SettingTag tag, const std::array<S, 4>& z0,
                                  const std::array<S, 4>& z1 = {}) {
  auto max_of = [](const auto& terms) {
    S best = terms[0];
    for (const S& t : terms) if (t > best) best = t;
    return best;
  };
  auto min_of = [](const auto& terms) {
    S best = terms[0];
    for (const S& t : terms) if (t < best) best = t;
    return best;
  };
  switch (tag) {
    case SettingTag::E:
    case SettingTag::G: {
      auto e = detail::confounded_endpoints<S>(z0);
      return {e[0], e[1]};
    }
    case SettingTag::F: {
      auto [lo, up] = detail::confounded_iv_terms<S>(z0, z1);
      return {max_of(lo), min_of(up)};
    }
    case SettingTag::H: {
      auto [lo, up] = detail::exposure_confounded_iv_terms<S>(z0, z1);
      return {max_of(lo), min_of(up)};
    }
    default:
      throw validation_error("closed_form_cells: setting must be E, F, G, or H");
  }
}

struct OracleReport {
  SettingTag tag = SettingTag::E;
  LpStatus status = LpStatus::Infeasible;
  double lp_lower = 0.0, lp_upper = 0.0;
  double closed_lower = 0.0, closed_upper = 0.0;
  double max_abs_diff = 0.0;
  bool pass = false;
};

namespace detail {

inline OracleReport oracle_check_cells(SettingTag tag, const std::array<double, 4>& z0,
                                       const std::array<double, 4>& z1, double tol) {
  OracleReport rep;
  rep.tag = tag;
  auto prog = build_program_cells<double>(tag, z0, z1);
  auto mm = solve_min_max(prog);
  rep.status = mm.status;
  if (mm.status != LpStatus::Optimal) return rep;
  auto [cl, cu] = closed_form_cells<double>(tag, z0, z1);
  rep.lp_lower = mm.lower;
  rep.lp_upper = mm.upper;
  rep.closed_lower = cl;
  rep.closed_upper = cu;
  rep.max_abs_diff = std::max(std::abs(cl - mm.lower), std::abs(cu - mm.upper));
  rep.pass = rep.max_abs_diff <= tol;
  return rep;
}

}  // namespace detail

inline OracleReport oracle_check(SettingTag tag, const JointCellTable& j, double tol = 1e-9) {
  if (program_has_instrument(tag))
    throw validation_error("oracle_check: setting needs per-instrument joint tables");
  return detail::oracle_check_cells(tag, j.s1_cells(), {}, tol);
}

inline OracleReport oracle_check(SettingTag tag, const JointCellTableIV& j, double tol = 1e-9) {
  if (!program_has_instrument(tag))
    throw validation_error("oracle_check: setting takes a single joint table");
  return detail::oracle_check_cells(tag, j.per_z[0].s1_cells(), j.per_z[1].s1_cells(), tol);
}

// Feasible random instance: sample a response-type distribution q with small
// integer weights and read the observed cells off the constraint rows, so the
// instance is consistent with the setting's diagram by construction.
template <class S>
struct RandomCells {
  std::array<S, 4> z0{}, z1{};
  std::vector<S> q;
};

template <class S>
RandomCells<S> random_feasible_cells(SettingTag tag, Rng& rng) {
  ProgramShape shape = program_shape(tag);
  RandomCells<S> out;
  out.q.assign(shape.vars, S(0));
  unsigned long long total = 0;
  std::vector<unsigned> w(shape.vars, 0);
  while (total == 0) {
    for (int v = 0; v < shape.vars; ++v) {
      w[v] = static_cast<unsigned>(rng.next_u64() % 10);
      total += w[v];
    }
  }
  for (int v = 0; v < shape.vars; ++v) out.q[v] = S(w[v]) / S(total);
  for (std::size_t i = 0; i < shape.row_vars.size(); ++i) {
    S sum(0);
    for (int v : shape.row_vars[i]) sum += out.q[v];
    (i < 4 ? out.z0 : out.z1)[i % 4] = sum;
  }
  return out;
}

// Line dump used by the golden tests: `var (rx,ry,rs)` per variable in index
// order, `row <name>: <var indices> = <rhs>`, then `obj:` with signed indices.
inline std::string dump_program(const ResponseFunctionProgram<double>& prog) {
  std::string out;
  out += "program " + std::string(to_string(prog.tag)) + " vars " + std::to_string(prog.vars) + "\n";
  for (int v = 0; v < prog.vars; ++v) {
    QIndex q = decode_q(prog.tag, v);
    out += "var (" + std::to_string(q.rx) + "," + std::to_string(q.ry) + "," + std::to_string(q.rs) + ")\n";
  }
  for (std::size_t i = 0; i < prog.rows.size(); ++i) {
    out += "row " + prog.row_names[i] + ":";
    for (int v = 0; v < prog.vars; ++v)
      if (prog.rows[i][v] != 0.0) out += " " + std::to_string(v);
    out += " = " + fmt_g10(prog.rhs[i]) + "\n";
  }
  out += "obj:";
  for (int v = 0; v < prog.vars; ++v) {
    if (prog.objective[v] > 0.0) out += " +" + std::to_string(v);
    else if (prog.objective[v] < 0.0) out += " -" + std::to_string(v);
  }
  out += "\n";
  return out;
}

}  // namespace odsbounds
