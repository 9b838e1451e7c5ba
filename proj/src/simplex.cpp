#include "sysopt/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

namespace sysopt::lp {

int LinearProgram::add_row(RowSense sense, double rhs) {
  senses_.push_back(sense);
  rhs_.push_back(rhs);
  return row_count() - 1;
}

int LinearProgram::add_column(double cost, std::span<const Entry> entries) {
  for (const Entry& e : entries)
    if (e.index < 0 || e.index >= row_count())
      throw std::out_of_range("column entry references row " + std::to_string(e.index));
  costs_.push_back(cost);
  enabled_.push_back(true);
  std::vector<Entry> col;
  for (const Entry& e : entries)
    if (e.value != 0.0) col.push_back(e);
  columns_.push_back(std::move(col));
  return column_count() - 1;
}

void LinearProgram::write(std::ostream& out) const {
  out << "lp " << row_count() << ' ' << column_count() << '\n';
  for (int j = 0; j < column_count(); ++j) out << "c " << j << ' ' << costs_[j] << '\n';
  for (int i = 0; i < row_count(); ++i)
    out << "b " << i << ' ' << (senses_[i] == RowSense::eq ? "eq" : "le") << ' ' << rhs_[i]
        << '\n';
  // Row-major triplets.
  std::vector<std::vector<std::pair<int, double>>> rows(row_count());
  for (int j = 0; j < column_count(); ++j)
    for (const Entry& e : columns_[j]) rows[e.index].emplace_back(j, e.value);
  for (int i = 0; i < row_count(); ++i)
    for (auto [j, v] : rows[i]) out << "a " << i << ' ' << j << ' ' << v << '\n';
}

const char* to_string(LpStatus status) {
  switch (status) {
    case LpStatus::optimal: return "optimal";
    case LpStatus::infeasible: return "infeasible";
    case LpStatus::unbounded: return "unbounded";
    case LpStatus::iteration_limit: return "iteration_limit";
  }
  return "?";
}

namespace {

enum class Phase { one, two };
enum class StepResult { pivoted, optimal, unbounded };

/// Working state over the normalised problem (rhs >= 0). Variable numbering:
/// [0,n) structural, n+i slack of row i, n+m+i artificial of row i.
class Simplex {
 public:
  Simplex(const LinearProgram& lp, const SimplexOptions& opt)
      : lp_(lp), opt_(opt), n_(lp.column_count()), m_(lp.row_count()) {
    sign_.assign(m_, 1.0);
    rhs_.assign(m_, 0.0);
    row_kind_.assign(m_, RowKind::le);
    for (int i = 0; i < m_; ++i) {
      double b = lp.rhs(i);
      if (b < 0) sign_[i] = -1.0;
      rhs_[i] = std::abs(b);
      if (lp.sense(i) == RowSense::eq)
        row_kind_[i] = RowKind::eq;
      else
        row_kind_[i] = sign_[i] > 0 ? RowKind::le : RowKind::ge;
    }
    position_.assign(n_ + 2 * m_, -1);
  }

  LpSolution run(const Basis* warm) {
    LpSolution sol;
    bool ready = warm && try_warm(*warm);
    sol.warm_started = ready;
    if (!ready) {
      cold_basis();
      LpStatus s = optimise(Phase::one);
      if (s == LpStatus::iteration_limit) return finish(sol, s);
      double infeas = 0.0;
      for (int i = 0; i < m_; ++i)
        if (is_artificial(basis_[i])) infeas += std::max(0.0, x_[i]);
      if (infeas > opt_.tol_feas) return finish(sol, LpStatus::infeasible);
      drive_out_artificials();
    }
    return finish(sol, optimise(Phase::two));
  }

 private:
  enum class RowKind { le, ge, eq };

  bool is_artificial(int var) const { return var >= n_ + m_; }
  bool is_slack(int var) const { return var >= n_ && var < n_ + m_; }

  bool eligible(int var) const {
    if (var < n_) return lp_.enabled(var);
    if (is_slack(var)) return row_kind_[var - n_] != RowKind::eq;
    return false;  // artificials never re-enter
  }

  double cost(int var, Phase phase) const {
    if (phase == Phase::one) return is_artificial(var) ? 1.0 : 0.0;
    return var < n_ ? lp_.cost(var) : 0.0;
  }

  /// Calls f(row, value) for each nonzero of the normalised column.
  template <typename F>
  void for_column(int var, F&& f) const {
    if (var < n_) {
      for (const Entry& e : lp_.column(var)) f(e.index, sign_[e.index] * e.value);
    } else if (is_slack(var)) {
      int i = var - n_;
      f(i, row_kind_[i] == RowKind::ge ? -1.0 : 1.0);
    } else {
      f(var - n_ - m_, 1.0);
    }
  }

  void set_basis(std::vector<int> basis) {
    std::fill(position_.begin(), position_.end(), -1);
    basis_ = std::move(basis);
    for (int i = 0; i < m_; ++i) position_[basis_[i]] = i;
  }

  void cold_basis() {
    std::vector<int> basis(m_);
    for (int i = 0; i < m_; ++i) {
      if (row_kind_[i] == RowKind::le) {
        basis[i] = n_ + i;
      } else {
        basis[i] = n_ + m_ + i;
      }
    }
    set_basis(std::move(basis));
    binv_.assign(static_cast<std::size_t>(m_) * m_, 0.0);
    for (int i = 0; i < m_; ++i) at(i, i) = 1.0;
    compute_x();
  }

  bool try_warm(const Basis& warm) {
    if (static_cast<int>(warm.size()) != m_) return false;
    std::vector<int> basis(m_);
    std::vector<char> used(n_ + 2 * m_, 0);
    for (int i = 0; i < m_; ++i) {
      const BasisEntry& e = warm[i];
      int var = -1;
      switch (e.kind) {
        case BasisEntry::Kind::structural:
          if (e.index < 0 || e.index >= n_ || !lp_.enabled(e.index)) return false;
          var = e.index;
          break;
        case BasisEntry::Kind::slack:
          if (e.index < 0 || e.index >= m_ || row_kind_[e.index] == RowKind::eq) return false;
          var = n_ + e.index;
          break;
        case BasisEntry::Kind::artificial:
          if (e.index < 0 || e.index >= m_) return false;
          var = n_ + m_ + e.index;
          break;
      }
      if (used[var]) return false;
      used[var] = 1;
      basis[i] = var;
    }
    set_basis(std::move(basis));
    try {
      refactor();
    } catch (const SingularBasis&) {
      return false;
    }
    for (int i = 0; i < m_; ++i) {
      if (x_[i] < -opt_.tol_feas) return false;
      if (is_artificial(basis_[i]) && x_[i] > opt_.tol_feas) return false;
    }
    return true;
  }

  double& at(int r, int c) { return binv_[static_cast<std::size_t>(r) * m_ + c]; }
  double at(int r, int c) const { return binv_[static_cast<std::size_t>(r) * m_ + c]; }

  void compute_x() {
    x_.assign(m_, 0.0);
    for (int r = 0; r < m_; ++r) {
      double s = 0.0;
      for (int c = 0; c < m_; ++c) s += at(r, c) * rhs_[c];
      x_[r] = s;
    }
  }

  /// Gauss-Jordan inversion of the basis matrix with partial pivoting.
  void refactor() {
    std::vector<double> b(static_cast<std::size_t>(m_) * m_, 0.0);
    for (int k = 0; k < m_; ++k)
      for_column(basis_[k], [&](int i, double v) { b[static_cast<std::size_t>(i) * m_ + k] = v; });
    binv_.assign(static_cast<std::size_t>(m_) * m_, 0.0);
    for (int i = 0; i < m_; ++i) at(i, i) = 1.0;
    auto B = [&](int r, int c) -> double& { return b[static_cast<std::size_t>(r) * m_ + c]; };
    for (int k = 0; k < m_; ++k) {
      int best = -1;
      double best_abs = 1e-11;
      for (int r = k; r < m_; ++r)
        if (std::abs(B(r, k)) > best_abs) {
          best_abs = std::abs(B(r, k));
          best = r;
        }
      if (best < 0)
        throw SingularBasis(k, "singular basis: no pivot for basic variable in row " +
                                   std::to_string(k));
      if (best != k) {
        for (int c = 0; c < m_; ++c) {
          std::swap(B(best, c), B(k, c));
          std::swap(at(best, c), at(k, c));
        }
      }
      double piv = B(k, k);
      for (int c = 0; c < m_; ++c) {
        B(k, c) /= piv;
        at(k, c) /= piv;
      }
      for (int r = 0; r < m_; ++r) {
        if (r == k) continue;
        double f = B(r, k);
        if (f == 0.0) continue;
        for (int c = 0; c < m_; ++c) {
          B(r, c) -= f * B(k, c);
          at(r, c) -= f * at(k, c);
        }
      }
    }
    compute_x();
    since_refactor_ = 0;
  }

  std::vector<double> duals(Phase phase) const {
    std::vector<double> y(m_, 0.0);
    for (int r = 0; r < m_; ++r) {
      double cb = cost(basis_[r], phase);
      if (cb == 0.0) continue;
      for (int c = 0; c < m_; ++c) y[c] += cb * at(r, c);
    }
    return y;
  }

  double reduced_cost(int var, Phase phase, const std::vector<double>& y) const {
    double d = cost(var, phase);
    for_column(var, [&](int i, double v) { d -= y[i] * v; });
    return d;
  }

  double objective(Phase phase) const {
    double z = 0.0;
    for (int r = 0; r < m_; ++r) z += cost(basis_[r], phase) * x_[r];
    return z;
  }

  StepResult step(Phase phase) {
    std::vector<double> y = duals(phase);
    int entering = -1;
    double best = -opt_.entry_threshold;
    for (int var = 0; var < n_ + m_; ++var) {
      if (position_[var] >= 0 || !eligible(var)) continue;
      double d = reduced_cost(var, phase, y);
      if (bland_) {
        if (d < -opt_.entry_threshold) {
          entering = var;
          break;
        }
      } else if (d < best) {
        best = d;
        entering = var;
      }
    }
    if (entering < 0) return StepResult::optimal;

    std::vector<double> alpha(m_, 0.0);
    for_column(entering, [&](int i, double v) {
      for (int r = 0; r < m_; ++r) alpha[r] += at(r, i) * v;
    });

    int leave = -1;
    double ratio = std::numeric_limits<double>::infinity();
    for (int r = 0; r < m_; ++r) {
      double a = alpha[r];
      double cand;
      if (phase == Phase::two && is_artificial(basis_[r])) {
        // Leftover artificials on redundant rows are fixed at zero.
        if (std::abs(a) <= opt_.pivot_tolerance) continue;
        cand = 0.0;
      } else {
        if (a <= opt_.pivot_tolerance) continue;
        cand = std::max(0.0, x_[r]) / a;
      }
      bool take = false;
      if (leave < 0 || cand < ratio - 1e-12) {
        take = true;
      } else if (cand <= ratio + 1e-12) {
        if (bland_) {
          take = basis_[r] < basis_[leave];
        } else {
          // Structural variables leave before slacks, so tied capacity rows keep zero duals.
          bool r_slack = is_slack(basis_[r]);
          bool l_slack = is_slack(basis_[leave]);
          take = r_slack != l_slack ? l_slack : std::abs(a) > std::abs(alpha[leave]);
        }
      }
      if (take) {
        leave = r;
        ratio = cand;
      }
    }
    if (leave < 0) return StepResult::unbounded;
    pivot(entering, leave, alpha, ratio);
    return StepResult::pivoted;
  }

  void pivot(int entering, int leave, const std::vector<double>& alpha, double theta) {
    for (int r = 0; r < m_; ++r) x_[r] -= theta * alpha[r];
    x_[leave] = theta;
    double piv = alpha[leave];
    for (int c = 0; c < m_; ++c) at(leave, c) /= piv;
    for (int r = 0; r < m_; ++r) {
      if (r == leave || alpha[r] == 0.0) continue;
      double f = alpha[r];
      for (int c = 0; c < m_; ++c) at(r, c) -= f * at(leave, c);
    }
    position_[basis_[leave]] = -1;
    basis_[leave] = entering;
    position_[entering] = leave;
    ++pivots_;
    if (++since_refactor_ >= opt_.refactor_interval) refactor();
  }

  LpStatus optimise(Phase phase) {
    bland_ = false;
    int stalled = 0;
    double last = objective(phase);
    while (true) {
      if (pivots_ >= opt_.max_pivots) return LpStatus::iteration_limit;
      StepResult s = step(phase);
      if (s == StepResult::optimal) return LpStatus::optimal;
      if (s == StepResult::unbounded) return LpStatus::unbounded;
      double z = objective(phase);
      if (z < last - 1e-12) {
        stalled = 0;
      } else if (++stalled >= opt_.stall_threshold) {
        bland_ = true;
      }
      last = z;
    }
  }

  void drive_out_artificials() {
    for (int r = 0; r < m_; ++r) {
      if (!is_artificial(basis_[r])) continue;
      for (int var = 0; var < n_ + m_; ++var) {
        if (position_[var] >= 0 || !eligible(var)) continue;
        double a = 0.0;
        for_column(var, [&](int i, double v) { a += at(r, i) * v; });
        if (std::abs(a) > 1e-7) {
          std::vector<double> alpha(m_, 0.0);
          for_column(var, [&](int i, double v) {
            for (int k = 0; k < m_; ++k) alpha[k] += at(k, i) * v;
          });
          pivot(var, r, alpha, 0.0);
          break;
        }
      }
    }
  }

  LpSolution& finish(LpSolution& sol, LpStatus status) {
    sol.status = status;
    sol.pivots = pivots_;
    sol.primal.assign(n_, 0.0);
    for (int r = 0; r < m_; ++r)
      if (basis_[r] < n_) sol.primal[basis_[r]] = std::max(0.0, x_[r]);
    sol.objective = 0.0;
    for (int j = 0; j < n_; ++j) sol.objective += lp_.cost(j) * sol.primal[j];
    std::vector<double> y = duals(Phase::two);
    sol.duals.assign(m_, 0.0);
    for (int i = 0; i < m_; ++i) sol.duals[i] = sign_[i] * y[i];
    sol.basis.resize(m_);
    for (int r = 0; r < m_; ++r) {
      int var = basis_[r];
      if (var < n_)
        sol.basis[r] = {BasisEntry::Kind::structural, var};
      else if (is_slack(var))
        sol.basis[r] = {BasisEntry::Kind::slack, var - n_};
      else
        sol.basis[r] = {BasisEntry::Kind::artificial, var - n_ - m_};
    }
    return sol;
  }

  const LinearProgram& lp_;
  SimplexOptions opt_;
  int n_;
  int m_;
  std::vector<double> sign_;
  std::vector<double> rhs_;
  std::vector<RowKind> row_kind_;
  std::vector<int> basis_;
  std::vector<int> position_;
  std::vector<double> binv_;
  std::vector<double> x_;
  int pivots_ = 0;
  int since_refactor_ = 0;
  bool bland_ = false;
};

}  // namespace

LpSolution solve_lp(const LinearProgram& lp, const SimplexOptions& options, const Basis* warm) {
  Simplex simplex(lp, options);
  return simplex.run(warm);
}

}  // namespace sysopt::lp
