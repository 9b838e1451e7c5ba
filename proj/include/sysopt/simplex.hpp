// Revised primal simplex for  min c^T x  s.t.  rows (= or <=),  x >= 0.
//
// Duals follow the minimisation convention: reduced costs are
// d_j = c_j - y^T A_j, so a binding <= row reports y_i <= 0.
#pragma once

#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace sysopt::lp {

enum class RowSense { eq, le };

struct Entry {
  int index = 0;
  double value = 0.0;
};

class LinearProgram {
 public:
  int add_row(RowSense sense, double rhs);
  /// Appends a variable; `entries` index rows. Returns the new variable index.
  int add_column(double cost, std::span<const Entry> entries);
  /// A disabled column is held at zero (used for branching).
  void set_enabled(int column, bool enabled) { enabled_[column] = enabled; }

  int row_count() const { return static_cast<int>(senses_.size()); }
  int column_count() const { return static_cast<int>(costs_.size()); }
  RowSense sense(int row) const { return senses_[row]; }
  double rhs(int row) const { return rhs_[row]; }
  double cost(int column) const { return costs_[column]; }
  bool enabled(int column) const { return enabled_[column]; }
  std::span<const Entry> column(int j) const { return columns_[j]; }

  /// Plain-text dump: a header line, `c j value`, `b i sense rhs`, then `a i j value` triplets.
  void write(std::ostream& out) const;

 private:
  std::vector<RowSense> senses_;
  std::vector<double> rhs_;
  std::vector<double> costs_;
  std::vector<bool> enabled_;
  std::vector<std::vector<Entry>> columns_;
};

enum class LpStatus { optimal, infeasible, unbounded, iteration_limit };

const char* to_string(LpStatus status);

struct BasisEntry {
  enum class Kind { structural, slack, artificial };
  Kind kind = Kind::structural;
  int index = 0;  // column index for structural, row index otherwise

  friend bool operator==(const BasisEntry&, const BasisEntry&) = default;
};

/// One basic variable per row.
using Basis = std::vector<BasisEntry>;

struct LpSolution {
  LpStatus status = LpStatus::infeasible;
  double objective = 0.0;
  std::vector<double> primal;
  std::vector<double> duals;
  Basis basis;
  int pivots = 0;
  bool warm_started = false;
};

struct SimplexOptions {
  double tol_feas = 1e-7;
  double tol_dual = 1e-9;
  double entry_threshold = 1e-9;
  double pivot_tolerance = 1e-9;
  int max_pivots = 200000;
  /// Consecutive non-improving pivots before switching to Bland's rule.
  int stall_threshold = 50;
  int refactor_interval = 100;
};

class SingularBasis : public std::runtime_error {
 public:
  SingularBasis(int row, const std::string& what) : std::runtime_error(what), row_(row) {}
  int row() const { return row_; }

 private:
  int row_;
};

/// Solves `lp`. A warm basis from an earlier solve of the same rows is reused
/// when it is still primal feasible; otherwise the solve starts cold.
LpSolution solve_lp(const LinearProgram& lp, const SimplexOptions& options = {},
                    const Basis* warm = nullptr);

/// Swappable LP engine; the built-in simplex is the default.
class LpEngine {
 public:
  virtual ~LpEngine() = default;
  virtual LpSolution solve(const LinearProgram& lp, const Basis* warm) = 0;
};

class SimplexEngine final : public LpEngine {
 public:
  explicit SimplexEngine(SimplexOptions options = {}) : options_(options) {}
  LpSolution solve(const LinearProgram& lp, const Basis* warm) override {
    return solve_lp(lp, options_, warm);
  }

 private:
  SimplexOptions options_;
};

}  // namespace sysopt::lp
