#include "halfreg/realization.hpp"

#include <algorithm>
#include <set>

#include "halfreg/error.hpp"

namespace halfreg {

ColorMatrix::ColorMatrix(int rows, int cols, Color fill)
    : rows_(rows), cols_(cols), cells_(static_cast<std::size_t>(rows) * cols, fill) {}

ColorMatrix::ColorMatrix(const std::vector<std::vector<Color>>& cells)
    : rows_(static_cast<int>(cells.size())), cols_(cells.empty() ? 0 : static_cast<int>(cells[0].size())) {
  cells_.reserve(static_cast<std::size_t>(rows_) * cols_);
  for (const auto& row : cells) {
    if (static_cast<int>(row.size()) != cols_) {
      throw Error(ErrorKind::DimensionMismatch, "ragged color matrix");
    }
    cells_.insert(cells_.end(), row.begin(), row.end());
  }
}

std::vector<std::vector<Color>> ColorMatrix::to_nested() const {
  std::vector<std::vector<Color>> out(rows_);
  for (int r = 0; r < rows_; ++r) out[r].assign(row(r).begin(), row(r).end());
  return out;
}

std::string ColorMatrix::encode(int colors) const {
  int width = 1;
  for (int top = std::max(colors - 1, 0); top >= 10; top /= 10) ++width;
  std::string out;
  out.reserve(cells_.size() * width);
  for (Color c : cells_) {
    auto digits = std::to_string(c);
    out.append(width - std::min<int>(width, static_cast<int>(digits.size())), '0');
    out += digits;
  }
  return out;
}

std::uint64_t ColorMatrix::hash() const noexcept {
  // FNV-1a over the dimensions and cells.
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](std::uint64_t x) {
    for (int b = 0; b < 8; ++b) {
      h ^= (x >> (8 * b)) & 0xFF;
      h *= 1099511628211ULL;
    }
  };
  mix(static_cast<std::uint64_t>(rows_));
  mix(static_cast<std::uint64_t>(cols_));
  for (Color c : cells_) mix(static_cast<std::uint64_t>(c));
  return h;
}

ColoredRealization::ColoredRealization(ColorMatrix matrix, int colors)
    : matrix_(std::move(matrix)), colors_(colors),
      col_counts_(static_cast<std::size_t>(colors) * matrix_.cols(), 0) {
  for (Color c : matrix_.cells()) {
    if (c < 0 || c >= colors_) {
      throw Error(ErrorKind::DimensionMismatch,
                  "color id " + std::to_string(c) + " outside [0, " + std::to_string(colors_) + ")");
    }
  }
  recount();
}

std::vector<int> ColoredRealization::row_counts(int row) const {
  std::vector<int> counts(colors_, 0);
  for (Color c : matrix_.row(row)) ++counts[c];
  return counts;
}

void ColoredRealization::assign(int row, int col, Color c) {
  --col_counts_[matrix_(row, col) * cols() + col];
  matrix_(row, col) = c;
  ++col_counts_[c * cols() + col];
}

void ColoredRealization::swap_columns(int row_a, int row_b, std::span<const int> cols) {
  for (int v : cols) std::swap(matrix_(row_a, v), matrix_(row_b, v));
}

bool ColoredRealization::recount() {
  std::vector<int> fresh(static_cast<std::size_t>(colors_) * cols(), 0);
  for (int r = 0; r < rows(); ++r) {
    for (int v = 0; v < cols(); ++v) ++fresh[matrix_(r, v) * cols() + v];
  }
  const bool agreed = fresh == col_counts_;
  col_counts_ = std::move(fresh);
  return agreed;
}

namespace {

void require_same_shape(const DegreeMatrix& matrix, const ColoredRealization& r) {
  if (r.rows() != matrix.rows() || r.cols() != matrix.cols() || r.colors() != matrix.colors()) {
    throw Error(ErrorKind::DimensionMismatch,
                "realization is " + std::to_string(r.rows()) + "x" + std::to_string(r.cols()) +
                    " with " + std::to_string(r.colors()) + " colors, instance is " +
                    std::to_string(matrix.rows()) + "x" + std::to_string(matrix.cols()) +
                    " with " + std::to_string(matrix.colors()));
  }
}

bool columns_exact(const DegreeMatrix& matrix, const ColoredRealization& r) {
  for (Color c = 0; c < matrix.colors(); ++c) {
    for (int v = 0; v < matrix.cols(); ++v) {
      if (r.col_count(c, v) != matrix.col_degree(c, v)) return false;
    }
  }
  return true;
}

}  // namespace

bool check_realization(const DegreeMatrix& matrix, const ColoredRealization& r) {
  require_same_shape(matrix, r);
  if (!columns_exact(matrix, r)) return false;
  for (int u = 0; u < r.rows(); ++u) {
    if (r.row_counts(u) != matrix.row_degrees()) return false;
  }
  return true;
}

ColoredRealization swap_cells(const ColoredRealization& r, int u1, int u2,
                              std::span<const int> cols) {
  ColoredRealization out = r;
  out.swap_columns(u1, u2, cols);
  return out;
}

std::vector<Deficiency> deficiencies(const DegreeMatrix& matrix, const ColoredRealization& r) {
  require_same_shape(matrix, r);
  if (!columns_exact(matrix, r)) {
    throw Error(ErrorKind::NotNearRealization, "column counts differ from the instance");
  }
  std::vector<Deficiency> out;
  for (int u = 0; u < r.rows(); ++u) {
    const auto counts = r.row_counts(u);
    Color plus = -1;
    Color minus = -1;
    for (Color c = 0; c < matrix.colors(); ++c) {
      const int delta = counts[c] - matrix.row_degree(c);
      if (delta == 0) continue;
      if (delta == 1 && plus < 0) {
        plus = c;
      } else if (delta == -1 && minus < 0) {
        minus = c;
      } else {
        throw Error(ErrorKind::NotNearRealization,
                    "row " + std::to_string(u) + " deviates by " + std::to_string(delta) +
                        " in color " + std::to_string(c));
      }
    }
    if ((plus >= 0) != (minus >= 0)) {
      throw Error(ErrorKind::NotNearRealization,
                  "row " + std::to_string(u) + " has an unpaired deviation");
    }
    if (plus >= 0) out.push_back({u, plus, minus});
  }
  return out;
}

bool is_two_defect_shape(std::span<const Deficiency> defects) {
  return defects.size() == 2 && defects[0].row != defects[1].row &&
         defects[0].plus != defects[0].minus && defects[0].plus == defects[1].minus &&
         defects[0].minus == defects[1].plus;
}

bool is_three_defect_shape(std::span<const Deficiency> defects) {
  if (defects.size() != 3) return false;
  const auto& [a, b, c] = std::tie(defects[0], defects[1], defects[2]);
  const std::set<int> rows{a.row, b.row, c.row};
  const std::set<Color> colors{a.plus, b.plus, c.plus};
  return rows.size() == 3 && colors.size() == 3 && a.minus == b.plus && b.minus == c.plus &&
         c.minus == a.plus;
}

NearRealization make_near_realization(const DegreeMatrix& matrix, ColoredRealization state,
                                      int first_row) {
  auto defects = deficiencies(matrix, state);
  if (defects.size() == 3) {
    // Rotate into the cyclic (+a-b), (+b-c), (+c-a) order.
    auto start = std::find_if(defects.begin(), defects.end(),
                              [&](const Deficiency& d) { return d.row == first_row; });
    std::vector<Deficiency> ordered{start == defects.end() ? defects.front() : *start};
    while (ordered.size() < 3) {
      auto next = std::find_if(defects.begin(), defects.end(), [&](const Deficiency& d) {
        return d.plus == ordered.back().minus;
      });
      if (next == defects.end()) break;
      ordered.push_back(*next);
    }
    if (ordered.size() == 3) defects = std::move(ordered);
  } else if (defects.size() == 2 && first_row == defects[1].row) {
    std::swap(defects[0], defects[1]);
  }
  return {std::move(state), std::move(defects)};
}

}  // namespace halfreg
