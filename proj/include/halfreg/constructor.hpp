#pragma once

#include <span>
#include <vector>

#include "halfreg/degree_matrix.hpp"
#include "halfreg/realization.hpp"

namespace halfreg {

/// 0/1 incidence matrix of one color class.
class FactorGraph {
 public:
  FactorGraph(int rows, int cols) : rows_(rows), cols_(cols), cells_(rows * cols, 0) {}

  int rows() const noexcept { return rows_; }
  int cols() const noexcept { return cols_; }
  bool has(int row, int col) const { return cells_[row * cols_ + col] != 0; }
  void set(int row, int col, bool on) { cells_[row * cols_ + col] = on ? 1 : 0; }

  int row_sum(int row) const;
  int col_sum(int col) const;

 private:
  int rows_;
  int cols_;
  std::vector<char> cells_;
};

/// Realizes the half-regular sequence (every row degree `row_degree`,
/// column degrees `col_degrees`) as a simple bipartite graph. Each row in
/// index order takes the columns of largest remaining demand, smallest
/// index first on ties. Throws Error(Infeasible) if the degree sequence is
/// not graphical.
FactorGraph realize_factor(int rows, int row_degree, std::span<const int> col_degrees);

/// Union of per-color factor graphs over the same vertex sets: a bipartite
/// multigraph whose parallel edges all carry distinct colors.
class MultiUnion {
 public:
  MultiUnion(int rows, int cols, int colors);

  int rows() const noexcept { return rows_; }
  int cols() const noexcept { return cols_; }
  int colors() const noexcept { return colors_; }

  bool has(int row, int col, Color c) const { return layers_[index(row, col, c)] != 0; }
  void set(int row, int col, Color c, bool on);

  /// Number of parallel edges between row and col.
  int multiplicity(int row, int col) const { return mult_[row * cols_ + col]; }

  /// Extracts one color layer.
  FactorGraph layer(Color c) const;
  void set_layer(Color c, const FactorGraph& factor);

  bool operator==(const MultiUnion&) const = default;

 private:
  std::size_t index(int row, int col, Color c) const {
    return (static_cast<std::size_t>(row) * cols_ + col) * colors_ + c;
  }

  int rows_;
  int cols_;
  int colors_;
  std::vector<char> layers_;
  std::vector<int> mult_;
};

/// Sum over vertex pairs of max(multiplicity - 1, 0). Zero iff the union is
/// simple.
long exceed_number(const MultiUnion& g);

/// Which configuration closed the alternating chain in a reduction step.
struct ReductionReport {
  int anchor_row = -1;
  int anchor_col = -1;
  int partner_row = -1;
  int case_applied = 0;    // 1 or 2
  int chain_depth = 0;     // number of case-3 expansions before closing
  long exceed_before = 0;
  long exceed_after = 0;
};

/// One step of the exceed-number descent. Picks the first pair (u,v) with
/// parallel edges, a row u' with no edge to v, grows the alternating vertex
/// sets until a column closes the chain, and moves the chain's colored edges
/// between u and u'. Every color layer keeps its degrees and stays simple;
/// the exceed number drops by at least one.
/// Throws Error(AlreadySimple) when the union has no parallel edges.
MultiUnion reduce_exceed_step(const MultiUnion& g, ReductionReport* report = nullptr);

struct ConstructionLog {
  std::vector<long> exceed_sequence;     // exceed number before each step, then 0
  std::vector<ReductionReport> steps;
};

/// Builds one realization deterministically. Non-equality instances are
/// first extended with the non-edge color, whose id is the original k; the
/// result is a realization of that extended matrix.
/// Throws Error(InvalidMatrix) when the instance fails validation.
ColoredRealization construct_realization(const DegreeMatrix& matrix, ConstructionLog* log = nullptr);

}  // namespace halfreg
