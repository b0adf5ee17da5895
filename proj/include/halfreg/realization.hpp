#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "halfreg/degree_matrix.hpp"

namespace halfreg {

/// Dense rows x cols grid of color ids.
class ColorMatrix {
 public:
  ColorMatrix() = default;
  ColorMatrix(int rows, int cols, Color fill = 0);
  explicit ColorMatrix(const std::vector<std::vector<Color>>& cells);

  int rows() const noexcept { return rows_; }
  int cols() const noexcept { return cols_; }

  Color operator()(int row, int col) const { return cells_[index(row, col)]; }
  Color& operator()(int row, int col) { return cells_[index(row, col)]; }

  std::span<const Color> row(int r) const {
    return {cells_.data() + static_cast<std::size_t>(r) * cols_, static_cast<std::size_t>(cols_)};
  }
  std::span<const Color> cells() const noexcept { return cells_; }

  std::vector<std::vector<Color>> to_nested() const;

  /// Row-major concatenation of color ids, fixed width per cell so the
  /// encoding stays injective when ids have more than one digit.
  std::string encode(int colors) const;

  std::uint64_t hash() const noexcept;

  bool operator==(const ColorMatrix&) const = default;

 private:
  std::size_t index(int row, int col) const {
    return static_cast<std::size_t>(row) * cols_ + col;
  }

  int rows_ = 0;
  int cols_ = 0;
  std::vector<Color> cells_;
};

/// An edge coloring of K_{rows,cols} with cached per-column color counts.
///
/// The type itself only guarantees that the cache matches the cells; whether
/// the coloring realizes a particular DegreeMatrix is what
/// check_realization() decides.
class ColoredRealization {
 public:
  ColoredRealization() = default;
  ColoredRealization(ColorMatrix matrix, int colors);

  int rows() const noexcept { return matrix_.rows(); }
  int cols() const noexcept { return matrix_.cols(); }
  int colors() const noexcept { return colors_; }

  const ColorMatrix& matrix() const noexcept { return matrix_; }
  Color color(int row, int col) const { return matrix_(row, col); }

  /// colCounts[c][v]: number of rows whose cell in column v has color c.
  int col_count(Color c, int col) const { return col_counts_[c * cols() + col]; }

  /// Per-color edge count of one row.
  std::vector<int> row_counts(int row) const;

  /// Overwrites a single cell (keeps the cache consistent).
  void assign(int row, int col, Color c);

  /// Exchanges the cells of two rows in every listed column. Column counts
  /// are unchanged by construction.
  void swap_columns(int row_a, int row_b, std::span<const int> cols);

  /// Rebuilds the column-count cache from scratch and reports whether the
  /// incrementally maintained cache agreed with it.
  bool recount();

  bool operator==(const ColoredRealization& other) const {
    return colors_ == other.colors_ && matrix_ == other.matrix_;
  }

 private:
  ColorMatrix matrix_;
  int colors_ = 0;
  std::vector<int> col_counts_;
};

/// True iff every row and column carries exactly the prescribed color
/// counts. Throws Error(DimensionMismatch) on shape disagreement; `matrix`
/// must be in equality form.
bool check_realization(const DegreeMatrix& matrix, const ColoredRealization& r);

/// Returns a copy of `r` with rows u1 and u2 exchanged on every column of
/// `cols`. Column counts are conserved; applying the same swap twice is the
/// identity.
ColoredRealization swap_cells(const ColoredRealization& r, int u1, int u2,
                              std::span<const int> cols);

/// A row holding one surplus edge of `plus` and one missing edge of `minus`.
struct Deficiency {
  int row = 0;
  Color plus = 0;
  Color minus = 0;

  bool operator==(const Deficiency&) const = default;
};

/// Deficiency records for every row that deviates from the row degrees by a
/// single (+1, -1) pair, in row order. Throws Error(NotNearRealization) when
/// a column count is off or a row deviates in any other way.
std::vector<Deficiency> deficiencies(const DegreeMatrix& matrix, const ColoredRealization& r);

/// Coloring that satisfies every column constraint and misses the row
/// constraints on at most three rows, in one of the two repairable shapes:
/// two complementary records (u1,+a,-b), (u2,+b,-a), or a color 3-cycle
/// (u1,+a,-b), (u2,+b,-c), (u3,+c,-a), listed in that order.
struct NearRealization {
  ColoredRealization state;
  std::vector<Deficiency> defects;
};

/// Builds a NearRealization from the coloring's actual deficiencies. With
/// three defects the records are rotated into cyclic order starting at
/// `first_row` (or at the lowest row when `first_row` is not defective).
NearRealization make_near_realization(const DegreeMatrix& matrix, ColoredRealization state,
                                      int first_row = -1);

bool is_two_defect_shape(std::span<const Deficiency> defects);
bool is_three_defect_shape(std::span<const Deficiency> defects);

}  // namespace halfreg
