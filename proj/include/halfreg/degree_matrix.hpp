#pragma once

#include <string>
#include <vector>

namespace halfreg {

using Color = int;

/// Half-regular bipartite degree matrix.
///
/// Every vertex of the regular class U (the rows) carries `row_degree(i)`
/// edges of color i; column v of the class V carries `col_degree(i, v)`.
class DegreeMatrix {
 public:
  DegreeMatrix(int rows, int cols, std::vector<int> row_degrees,
               std::vector<std::vector<int>> col_degrees);

  int rows() const noexcept { return rows_; }
  int cols() const noexcept { return cols_; }
  int colors() const noexcept { return static_cast<int>(row_degrees_.size()); }

  int row_degree(Color c) const { return row_degrees_.at(c); }
  int col_degree(Color c, int col) const { return col_degrees_.at(c).at(col); }

  const std::vector<int>& row_degrees() const noexcept { return row_degrees_; }
  const std::vector<std::vector<int>>& col_degrees() const noexcept { return col_degrees_; }

  bool operator==(const DegreeMatrix&) const = default;

 private:
  int rows_;
  int cols_;
  std::vector<int> row_degrees_;
  std::vector<std::vector<int>> col_degrees_;
};

/// The three existence conditions, numbered as they are usually cited.
enum class Condition {
  ColorBalance = 1,    // rows * d[i] == sum_v f[i][v]
  RowCapacity = 2,     // sum_i d[i] <= cols
  ColumnCapacity = 3,  // sum_i f[i][v] <= rows
};

struct Violation {
  Condition condition;
  int color = -1;   // set for ColorBalance
  int column = -1;  // set for ColumnCapacity
  long lhs = 0;
  long rhs = 0;

  std::string describe() const;
};

struct ValidationReport {
  bool ok = false;
  // Row capacity is tight (sum of row degrees equals cols). For a valid
  // matrix this forces every column to be tight as well.
  bool equality = false;
  std::vector<Violation> violations;
};

ValidationReport validate(const DegreeMatrix& matrix);

/// Appends the non-edge color (id == colors()) that absorbs the slack of
/// every row and column. Equality-case matrices are returned unchanged.
/// Throws Error(InvalidMatrix) if `matrix` fails validation.
DegreeMatrix extend_with_nonedge_color(const DegreeMatrix& matrix);

/// All rows carry sum_i d[i] == cols edges and every column is tight.
bool is_equality_form(const DegreeMatrix& matrix);

}  // namespace halfreg
