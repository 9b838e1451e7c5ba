// Exact LP optimum by enumerating basic feasible solutions in rational arithmetic.
// Only for tiny bounded programs.
#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <vector>

#include "support/random_instance.hpp"
#include "sysopt/simplex.hpp"

namespace testing_support {

using Rational = boost::multiprecision::cpp_rational;

/// Integer-coefficient LP used by the vertex enumerator.
struct SmallLp {
  std::vector<std::vector<long long>> a;  // rows x columns
  std::vector<long long> b;
  std::vector<sysopt::lp::RowSense> sense;
  std::vector<long long> c;

  sysopt::lp::LinearProgram build() const {
    sysopt::lp::LinearProgram lp;
    for (std::size_t i = 0; i < b.size(); ++i) lp.add_row(sense[i], static_cast<double>(b[i]));
    for (std::size_t j = 0; j < c.size(); ++j) {
      std::vector<sysopt::lp::Entry> col;
      for (std::size_t i = 0; i < b.size(); ++i)
        if (a[i][j] != 0) col.push_back({static_cast<int>(i), static_cast<double>(a[i][j])});
      lp.add_column(static_cast<double>(c[j]), col);
    }
    return lp;
  }
};

namespace detail {

/// Solves B z = b exactly; nullopt when B is singular.
inline std::optional<std::vector<Rational>> solve_square(std::vector<std::vector<Rational>> m,
                                                         std::vector<Rational> rhs) {
  const std::size_t n = rhs.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && m[pivot][col] == 0) ++pivot;
    if (pivot == n) return std::nullopt;
    std::swap(m[pivot], m[col]);
    std::swap(rhs[pivot], rhs[col]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || m[r][col] == 0) continue;
      Rational f = m[r][col] / m[col][col];
      for (std::size_t k = col; k < n; ++k) m[r][k] -= f * m[col][k];
      rhs[r] -= f * rhs[col];
    }
  }
  std::vector<Rational> z(n);
  for (std::size_t i = 0; i < n; ++i) z[i] = rhs[i] / m[i][i];
  return z;
}

}  // namespace detail

/// Minimum of c^T x over all basic feasible solutions; nullopt when none exists.
/// The caller guarantees boundedness (e.g. with a box row).
inline std::optional<Rational> enumerate_vertices(const SmallLp& lp) {
  const std::size_t m = lp.b.size();
  const std::size_t n = lp.c.size();
  // Standard form: one slack column per <= row.
  std::vector<std::vector<Rational>> a(m);
  std::vector<Rational> cost;
  for (std::size_t j = 0; j < n; ++j) cost.emplace_back(lp.c[j]);
  std::size_t width = n;
  for (std::size_t i = 0; i < m; ++i)
    if (lp.sense[i] == sysopt::lp::RowSense::le) ++width;
  cost.resize(width, Rational(0));
  std::size_t slack = n;
  for (std::size_t i = 0; i < m; ++i) {
    a[i].assign(width, Rational(0));
    for (std::size_t j = 0; j < n; ++j) a[i][j] = lp.a[i][j];
    if (lp.sense[i] == sysopt::lp::RowSense::le) a[i][slack++] = 1;
  }
  std::vector<Rational> rhs;
  for (long long v : lp.b) rhs.emplace_back(v);

  std::optional<Rational> best;
  std::vector<std::size_t> pick;
  auto visit = [&](auto&& self, std::size_t next) -> void {
    if (pick.size() == m) {
      std::vector<std::vector<Rational>> basis(m, std::vector<Rational>(m));
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t k = 0; k < m; ++k) basis[i][k] = a[i][pick[k]];
      auto z = detail::solve_square(basis, rhs);
      if (!z) return;
      Rational value = 0;
      for (std::size_t k = 0; k < m; ++k) {
        if ((*z)[k] < 0) return;
        value += cost[pick[k]] * (*z)[k];
      }
      if (!best || value < *best) best = value;
      return;
    }
    for (std::size_t j = next; j < width; ++j) {
      pick.push_back(j);
      self(self, j + 1);
      pick.pop_back();
    }
  };
  visit(visit, 0);
  return best;
}

/// Random bounded LP; the last row caps the sum of all variables.
inline SmallLp random_small_lp(std::uint64_t seed) {
  Rng rng(seed);
  SmallLp lp;
  const int n = static_cast<int>(rng.between(2, 5));
  const int m = static_cast<int>(rng.between(1, 3));
  for (int i = 0; i < m; ++i) {
    std::vector<long long> row(n);
    for (auto& v : row) v = rng.between(-4, 5);
    lp.a.push_back(row);
    bool eq = rng.between(0, 4) == 0;
    lp.sense.push_back(eq ? sysopt::lp::RowSense::eq : sysopt::lp::RowSense::le);
    lp.b.push_back(rng.between(eq ? 0 : -3, 10));
  }
  lp.a.emplace_back(n, 1);
  lp.sense.push_back(sysopt::lp::RowSense::le);
  lp.b.push_back(rng.between(1, 12));
  for (int j = 0; j < n; ++j) lp.c.push_back(rng.between(-5, 5));
  return lp;
}

}  // namespace testing_support
