#pragma once

// Small dense linear programs
//
//     maximize c . z   subject to   G z <= h,   z free,
//
// solved through the dual standard form  min h . y,  G^T y = c,  y >= 0  with
// a two-phase tableau simplex under Bland's rule (no cycling). The same code
// runs on exact rationals (certificates) and on doubles (search heuristics).
// The primal optimum is recovered by solving the active rows of the optimal
// dual basis, so every exact answer can be re-checked by substitution.

#include "dualdepth/rational.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

namespace dualdepth::lp {

template <typename T>
struct Traits;

template <>
struct Traits<Rational> {
  static int sign(const Rational& v) { return sgn(v); }
};

template <>
struct Traits<double> {
  static constexpr double kEps = 1e-11;
  static int sign(double v) { return v > kEps ? 1 : (v < -kEps ? -1 : 0); }
};

enum class Status { kOptimal, kInfeasible, kUnbounded };

template <typename T>
struct Problem {
  std::size_t vars = 0;
  std::vector<std::vector<T>> G;  // rows of length vars
  std::vector<T> h;
  std::vector<T> c;
};

template <typename T>
struct Solution {
  Status status = Status::kInfeasible;
  std::vector<T> z;
  T value{};
  /// Constraint rows in the optimal basis (tight at z).
  std::vector<std::size_t> active;
};

namespace detail {

template <typename T>
class Tableau {
public:
  Tableau(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * (cols + 1)) {}
  T& at(std::size_t r, std::size_t c) { return a_[r * (cols_ + 1) + c]; }
  T& rhs(std::size_t r) { return a_[r * (cols_ + 1) + cols_]; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  void pivot(std::size_t pr, std::size_t pc) {
    const T inv = T(1) / at(pr, pc);
    for (std::size_t c = 0; c <= cols_; ++c) a_[pr * (cols_ + 1) + c] *= inv;
    for (std::size_t r = 0; r < rows_; ++r) {
      if (r == pr) continue;
      const T f = at(r, pc);
      if (Traits<T>::sign(f) == 0) {
        at(r, pc) = T(0);
        continue;
      }
      for (std::size_t c = 0; c <= cols_; ++c) a_[r * (cols_ + 1) + c] -= f * a_[pr * (cols_ + 1) + c];
      at(r, pc) = T(0);
    }
  }

private:
  std::size_t rows_, cols_;
  std::vector<T> a_;
};

// Minimizes cost . x over the tableau's current basic feasible solution,
// considering only columns with allowed[c]. Returns false when unbounded.
template <typename T>
bool run_simplex(Tableau<T>& tab, std::vector<std::size_t>& basis, const std::vector<T>& cost,
                 const std::vector<bool>& allowed, const std::vector<bool>& live_row) {
  const std::size_t m = tab.rows(), n = tab.cols();
  std::vector<T> reduced(n);
  while (true) {
    // Reduced costs c_j - c_B B^{-1} A_j, recomputed each pivot (tiny tableaux).
    std::ptrdiff_t enter = -1;
    for (std::size_t j = 0; j < n && enter < 0; ++j) {
      if (!allowed[j]) continue;
      T rc = cost[j];
      for (std::size_t r = 0; r < m; ++r)
        if (live_row[r]) rc -= cost[basis[r]] * tab.at(r, j);
      if (Traits<T>::sign(rc) < 0) enter = static_cast<std::ptrdiff_t>(j);
    }
    if (enter < 0) return true;
    const auto e = static_cast<std::size_t>(enter);
    std::ptrdiff_t leave = -1;
    T best{};
    for (std::size_t r = 0; r < m; ++r) {
      if (!live_row[r] || Traits<T>::sign(tab.at(r, e)) <= 0) continue;
      T ratio = tab.rhs(r) / tab.at(r, e);
      const int cmp = leave < 0 ? -1 : Traits<T>::sign(ratio - best);
      if (cmp < 0 || (cmp == 0 && basis[r] < basis[static_cast<std::size_t>(leave)])) {
        leave = static_cast<std::ptrdiff_t>(r);
        best = ratio;
      }
    }
    if (leave < 0) return false;
    tab.pivot(static_cast<std::size_t>(leave), e);
    basis[static_cast<std::size_t>(leave)] = e;
  }
}

// Solves the square-or-underdetermined system rows . z = rhs with free
// variables set to zero. Returns nullopt if inconsistent.
template <typename T>
std::optional<std::vector<T>> solve_rows(std::vector<std::vector<T>> A, std::vector<T> b,
                                         std::size_t vars) {
  const std::size_t m = A.size();
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < vars && row < m; ++col) {
    std::size_t p = row;
    if constexpr (std::is_same_v<T, double>) {
      for (std::size_t r = row + 1; r < m; ++r)
        if (std::fabs(A[r][col]) > std::fabs(A[p][col])) p = r;
      if (Traits<T>::sign(A[p][col]) == 0) continue;
    } else {
      while (p < m && Traits<T>::sign(A[p][col]) == 0) ++p;
      if (p == m) continue;
    }
    std::swap(A[p], A[row]);
    std::swap(b[p], b[row]);
    for (std::size_t r = 0; r < m; ++r) {
      if (r == row || Traits<T>::sign(A[r][col]) == 0) continue;
      const T f = A[r][col] / A[row][col];
      for (std::size_t c = col; c < vars; ++c) A[r][c] -= f * A[row][c];
      b[r] -= f * b[row];
    }
    pivots.push_back(col);
    ++row;
  }
  for (std::size_t r = row; r < m; ++r)
    if (Traits<T>::sign(b[r]) != 0) return std::nullopt;
  std::vector<T> z(vars, T(0));
  for (std::size_t r = 0; r < pivots.size(); ++r) z[pivots[r]] = b[r] / A[r][pivots[r]];
  return z;
}

}  // namespace detail

template <typename T>
Solution<T> maximize(const Problem<T>& p) {
  const std::size_t k = p.vars, m = p.G.size();
  Solution<T> out;

  // Dual: rows = primal variables, columns = constraints + artificials.
  detail::Tableau<T> tab(k, m + k);
  for (std::size_t r = 0; r < k; ++r) {
    const bool flip = Traits<T>::sign(p.c[r]) < 0;
    for (std::size_t j = 0; j < m; ++j) tab.at(r, j) = flip ? T(-p.G[j][r]) : p.G[j][r];
    tab.at(r, m + r) = T(1);
    tab.rhs(r) = flip ? T(-p.c[r]) : p.c[r];
  }
  std::vector<std::size_t> basis(k);
  for (std::size_t r = 0; r < k; ++r) basis[r] = m + r;
  std::vector<bool> live(k, true);

  std::vector<T> phase1(m + k, T(0));
  for (std::size_t r = 0; r < k; ++r) phase1[m + r] = T(1);
  std::vector<bool> all(m + k, true);
  detail::run_simplex(tab, basis, phase1, all, live);
  for (std::size_t r = 0; r < k; ++r) {
    if (basis[r] >= m && Traits<T>::sign(tab.rhs(r)) != 0) {
      out.status = Status::kUnbounded;  // dual infeasible
      return out;
    }
  }
  for (std::size_t r = 0; r < k; ++r) {
    if (basis[r] < m) continue;
    std::size_t j = 0;
    while (j < m && Traits<T>::sign(tab.at(r, j)) == 0) ++j;
    if (j == m) {
      live[r] = false;  // redundant equality
      continue;
    }
    tab.pivot(r, j);
    basis[r] = j;
  }

  std::vector<T> cost(m + k, T(0));
  for (std::size_t j = 0; j < m; ++j) cost[j] = p.h[j];
  std::vector<bool> allowed(m + k, false);
  for (std::size_t j = 0; j < m; ++j) allowed[j] = true;
  if (!detail::run_simplex(tab, basis, cost, allowed, live)) {
    out.status = Status::kInfeasible;  // dual unbounded
    return out;
  }

  std::vector<std::vector<T>> rows;
  std::vector<T> rhs;
  for (std::size_t r = 0; r < k; ++r) {
    if (!live[r]) continue;
    out.active.push_back(basis[r]);
    rows.push_back(p.G[basis[r]]);
    rhs.push_back(p.h[basis[r]]);
  }
  std::sort(out.active.begin(), out.active.end());
  auto z = detail::solve_rows(std::move(rows), std::move(rhs), k);
  if (!z) {
    out.status = Status::kInfeasible;
    return out;
  }
  out.z = std::move(*z);
  out.value = T(0);
  for (std::size_t i = 0; i < k; ++i) out.value += p.c[i] * out.z[i];
  out.status = Status::kOptimal;
  return out;
}

}  // namespace dualdepth::lp
