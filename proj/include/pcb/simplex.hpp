#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "pcb/error.hpp"

namespace pcb {

template <class S>
struct ScalarTraits;

template <>
struct ScalarTraits<double> {
  static constexpr double tolerance = 1e-9;
  static bool positive(double v) { return v > tolerance; }
  static bool negative(double v) { return v < -tolerance; }
  static bool zero(double v) { return std::fabs(v) <= tolerance; }
  static double to_double(double v) { return v; }
};

template <>
struct ScalarTraits<mpq_class> {
  static bool positive(const mpq_class& v) { return sgn(v) > 0; }
  static bool negative(const mpq_class& v) { return sgn(v) < 0; }
  static bool zero(const mpq_class& v) { return sgn(v) == 0; }
  static double to_double(const mpq_class& v) { return v.get_d(); }
};

/// Two-phase dense tableau simplex for  A x = b, x >= 0  with Bland's rule.
/// Phase 1 runs once in the constructor; every objective is then optimised
/// from the stored feasible basis. Linearly dependent rows are detected while
/// driving artificials out of the basis and dropped.
template <class S>
class Simplex {
  using T = ScalarTraits<S>;

 public:
  Simplex(const std::vector<std::vector<S>>& a, const std::vector<S>& b) : cols_(0) {
    if (a.size() != b.size()) throw Error(ErrorCode::ShapeMismatch, "constraint matrix and right-hand side differ");
    const std::size_t rows = a.size();
    cols_ = rows ? a.front().size() : 0;
    const std::size_t width = cols_ + rows + 1;  // structural, artificial, rhs

    tableau_.assign(rows, std::vector<S>(width, S(0)));
    basis_.resize(rows);
    for (std::size_t r = 0; r < rows; ++r) {
      if (a[r].size() != cols_) throw Error(ErrorCode::ShapeMismatch, "ragged constraint matrix");
      const bool flip = T::negative(b[r]);
      for (std::size_t c = 0; c < cols_; ++c) tableau_[r][c] = flip ? S(-a[r][c]) : a[r][c];
      tableau_[r][cols_ + r] = S(1);
      tableau_[r][width - 1] = flip ? S(-b[r]) : b[r];
      basis_[r] = cols_ + r;
    }

    // Phase 1: minimise the artificial sum.
    std::vector<S> cost(width - 1, S(0));
    for (std::size_t r = 0; r < rows; ++r) cost[cols_ + r] = S(1);
    std::vector<S> objective = reduced_costs(cost);
    optimise(objective, width - 1);
    const S infeasibility = -objective[width - 1];
    feasible_ = !T::positive(infeasibility);
    if (!feasible_) return;

    // Pivot remaining artificials out; a row with no structural entry is redundant.
    for (std::size_t r = 0; r < tableau_.size();) {
      if (basis_[r] < cols_) {
        ++r;
        continue;
      }
      std::optional<std::size_t> enter;
      for (std::size_t c = 0; c < cols_; ++c) {
        if (!T::zero(tableau_[r][c])) {
          enter = c;
          break;
        }
      }
      if (enter) {
        pivot(r, *enter, nullptr);
        ++r;
      } else {
        tableau_.erase(tableau_.begin() + static_cast<std::ptrdiff_t>(r));
        basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(r));
      }
    }
    for (auto& row : tableau_) {
      S rhs = row.back();
      row.resize(cols_);
      row.push_back(rhs);
    }
  }

  bool feasible() const noexcept { return feasible_; }
  std::size_t variables() const noexcept { return cols_; }
  std::size_t rank() const noexcept { return tableau_.size(); }

  S minimize(const std::vector<S>& cost) const { return solve(cost, false); }
  S maximize(const std::vector<S>& cost) const { return solve(cost, true); }

 private:
  S solve(const std::vector<S>& cost, bool maximise) const {
    if (!feasible_) throw Error(ErrorCode::Infeasible, "constraint system has no solution");
    if (cost.size() != cols_) throw Error(ErrorCode::ShapeMismatch, "objective length differs from variable count");
    Simplex copy = *this;
    std::vector<S> c(cost);
    if (maximise) {
      for (auto& v : c) v = -v;
    }
    std::vector<S> objective = copy.reduced_costs(c);
    copy.optimise(objective, cols_);
    S value = -objective[cols_];
    return maximise ? S(-value) : value;
  }

  // Objective row z_c = cost_c - sum_r cost_{basis r} * row_r[c]; last entry holds -value.
  std::vector<S> reduced_costs(const std::vector<S>& cost) const {
    const std::size_t width = tableau_.empty() ? cost.size() + 1 : tableau_.front().size();
    std::vector<S> z(width, S(0));
    for (std::size_t c = 0; c < cost.size(); ++c) z[c] = cost[c];
    for (std::size_t r = 0; r < tableau_.size(); ++r) {
      const S& cb = cost[basis_[r]];
      if (T::zero(cb)) continue;
      for (std::size_t c = 0; c < width; ++c) z[c] -= cb * tableau_[r][c];
    }
    return z;
  }

  // Minimises over the first `active` columns; Bland's rule for entering and leaving.
  void optimise(std::vector<S>& objective, std::size_t active) {
    for (;;) {
      std::optional<std::size_t> enter;
      for (std::size_t c = 0; c < active; ++c) {
        if (T::negative(objective[c])) {
          enter = c;
          break;
        }
      }
      if (!enter) return;
      std::optional<std::size_t> leave;
      S best(0);
      for (std::size_t r = 0; r < tableau_.size(); ++r) {
        const S& coef = tableau_[r][*enter];
        if (!T::positive(coef)) continue;
        S ratio = tableau_[r].back() / coef;
        if (!leave || ratio < best || (ratio == best && basis_[r] < basis_[*leave])) {
          leave = r;
          best = ratio;
        }
      }
      if (!leave) throw Error(ErrorCode::Infeasible, "objective is unbounded");
      pivot(*leave, *enter, &objective);
    }
  }

  void pivot(std::size_t row, std::size_t col, std::vector<S>* objective) {
    auto& pr = tableau_[row];
    const S inv = S(1) / pr[col];
    for (auto& v : pr) v *= inv;
    pr[col] = S(1);
    auto eliminate = [&](std::vector<S>& target) {
      const S factor = target[col];
      if (factor == S(0)) return;
      for (std::size_t c = 0; c < target.size(); ++c) {
        if (pr[c] != S(0)) target[c] -= factor * pr[c];
      }
      target[col] = S(0);
    };
    for (std::size_t r = 0; r < tableau_.size(); ++r) {
      if (r != row) eliminate(tableau_[r]);
    }
    if (objective) eliminate(*objective);
    basis_[row] = col;
  }

  std::size_t cols_;
  std::vector<std::vector<S>> tableau_;
  std::vector<std::size_t> basis_;
  bool feasible_ = false;
};

}  // namespace pcb
