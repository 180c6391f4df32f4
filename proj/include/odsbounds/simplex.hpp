#pragma once
// Dense two-phase primal simplex on equality-form problems
//   min c.x  s.t.  A x = b,  x >= 0
// templated on the scalar type so the same code runs in double (eps ~ 1e-10)
// and in exact rational arithmetic (eps = 0). Bland's rule throughout, so the
// method terminates without cycling.

#include <stdexcept>
#include <string>
#include <vector>

#include "odsbounds/common.hpp"

namespace odsbounds {

enum class LpStatus { Optimal, Infeasible, Unbounded };

inline const char* to_string(LpStatus s) {
  switch (s) {
    case LpStatus::Optimal: return "optimal";
    case LpStatus::Infeasible: return "infeasible";
    case LpStatus::Unbounded: return "unbounded";
  }
  return "?";
}

template <class S>
struct LpProblem {
  int n = 0;                       // number of variables
  std::vector<std::vector<S>> rows;  // each of size n
  std::vector<S> rhs;
  std::vector<S> objective;        // size n, minimized
};

template <class S>
struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  S value{};
  std::vector<S> solution;
};

namespace detail {

template <class S>
class SimplexTableau {
 public:
  SimplexTableau(const LpProblem<S>& p, const S& eps) : n_(p.n), eps_(eps) {
    std::size_t m = p.rows.size();
    if (p.rhs.size() != m) throw std::runtime_error("simplex: rhs size mismatch");
    if (static_cast<int>(p.objective.size()) != n_) throw std::runtime_error("simplex: objective size mismatch");
    width_ = n_ + static_cast<int>(m);
    rows_.assign(m, std::vector<S>(width_, S(0)));
    b_.assign(m, S(0));
    basis_.assign(m, 0);
    for (std::size_t i = 0; i < m; ++i) {
      if (static_cast<int>(p.rows[i].size()) != n_) throw std::runtime_error("simplex: row size mismatch");
      bool flip = p.rhs[i] < S(0);
      for (int j = 0; j < n_; ++j) rows_[i][j] = flip ? -p.rows[i][j] : p.rows[i][j];
      b_[i] = flip ? -p.rhs[i] : p.rhs[i];
      rows_[i][n_ + static_cast<int>(i)] = S(1);
      basis_[i] = n_ + static_cast<int>(i);
    }
  }

  LpResult<S> solve(const std::vector<S>& objective) {
    // Phase 1: minimize the artificial mass.
    d_.assign(width_, S(0));
    obj_ = S(0);
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      obj_ += b_[i];
      for (int j = 0; j < width_; ++j) d_[j] -= rows_[i][j];
    }
    for (int j = n_; j < width_; ++j) d_[j] += S(1);
    LpStatus st = iterate(width_);
    if (st != LpStatus::Optimal) throw std::runtime_error("simplex: phase 1 did not terminate optimal");
    if (obj_ > eps_) return {LpStatus::Infeasible, S(0), {}};
    purge_artificials();

    // Phase 2: minimize the real objective over the feasible basis.
    d_.assign(width_, S(0));
    obj_ = S(0);
    for (int j = 0; j < n_; ++j) d_[j] = objective[j];
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      const S& cb = objective[basis_[i]];
      if (cb == S(0)) continue;
      obj_ += cb * b_[i];
      for (int j = 0; j < width_; ++j) d_[j] -= cb * rows_[i][j];
    }
    st = iterate(n_);
    LpResult<S> res;
    res.status = st;
    if (st == LpStatus::Optimal) {
      res.value = obj_;
      res.solution.assign(n_, S(0));
      for (std::size_t i = 0; i < rows_.size(); ++i)
        if (basis_[i] < n_) res.solution[basis_[i]] = b_[i];
    }
    return res;
  }

 private:
  LpStatus iterate(int active_width) {
    long limit = 2000 + 200L * width_;
    for (long it = 0; it < limit; ++it) {
      int pj = -1;
      for (int j = 0; j < active_width; ++j)
        if (d_[j] < -eps_) {
          pj = j;
          break;
        }
      if (pj < 0) return LpStatus::Optimal;
      int pi = -1;
      S best{};
      for (std::size_t i = 0; i < rows_.size(); ++i) {
        if (!(rows_[i][pj] > eps_)) continue;
        S ratio = b_[i] / rows_[i][pj];
        if (pi < 0 || ratio < best || (ratio == best && basis_[i] < basis_[pi]))
          pi = static_cast<int>(i), best = ratio;
      }
      if (pi < 0) return LpStatus::Unbounded;
      pivot(pi, pj);
    }
    throw std::runtime_error("simplex: iteration limit exceeded");
  }

  void pivot(int pi, int pj) {
    S piv = rows_[pi][pj];
    for (int j = 0; j < width_; ++j) rows_[pi][j] /= piv;
    b_[pi] /= piv;
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      if (static_cast<int>(i) == pi) continue;
      S f = rows_[i][pj];
      if (f == S(0)) continue;
      for (int j = 0; j < width_; ++j) rows_[i][j] -= f * rows_[pi][j];
      rows_[i][pj] = S(0);
      b_[i] -= f * b_[pi];
    }
    S f = d_[pj];
    obj_ += f * b_[pi];
    for (int j = 0; j < width_; ++j) d_[j] -= f * rows_[pi][j];
    d_[pj] = S(0);
    basis_[pi] = pj;
  }

  // Pivot basic artificials onto real columns; drop rows that turn out to be
  // redundant so they cannot re-admit artificial mass in phase 2.
  void purge_artificials() {
    for (std::size_t i = 0; i < rows_.size();) {
      if (basis_[i] < n_) {
        ++i;
        continue;
      }
      int pj = -1;
      for (int j = 0; j < n_; ++j) {
        S a = rows_[i][j];
        if (a > eps_ || a < -eps_) {
          pj = j;
          break;
        }
      }
      if (pj >= 0) {
        pivot(static_cast<int>(i), pj);
        ++i;
      } else {
        rows_.erase(rows_.begin() + static_cast<long>(i));
        b_.erase(b_.begin() + static_cast<long>(i));
        basis_.erase(basis_.begin() + static_cast<long>(i));
      }
    }
  }

  int n_;
  int width_;
  S eps_;
  std::vector<std::vector<S>> rows_;
  std::vector<S> b_;
  std::vector<int> basis_;
  std::vector<S> d_;
  S obj_{};
};

}  // namespace detail

template <class S>
LpResult<S> lp_minimize(const LpProblem<S>& p, const S& eps) {
  detail::SimplexTableau<S> t(p, eps);
  return t.solve(p.objective);
}

template <class S>
LpResult<S> lp_maximize(const LpProblem<S>& p, const S& eps) {
  LpProblem<S> q = p;
  for (auto& c : q.objective) c = -c;
  LpResult<S> res = lp_minimize(q, eps);
  if (res.status == LpStatus::Optimal) res.value = -res.value;
  return res;
}

}  // namespace odsbounds
