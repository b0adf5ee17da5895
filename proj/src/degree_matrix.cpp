#include "halfreg/degree_matrix.hpp"

#include <numeric>
#include <sstream>

#include "halfreg/error.hpp"

namespace halfreg {

DegreeMatrix::DegreeMatrix(int rows, int cols, std::vector<int> row_degrees,
                           std::vector<std::vector<int>> col_degrees)
    : rows_(rows), cols_(cols), row_degrees_(std::move(row_degrees)),
      col_degrees_(std::move(col_degrees)) {
  if (rows_ < 1 || cols_ < 1) {
    throw Error(ErrorKind::Malformed, "n and m must be at least 1");
  }
  if (row_degrees_.empty()) {
    throw Error(ErrorKind::Malformed, "k must be at least 1");
  }
  if (col_degrees_.size() != row_degrees_.size()) {
    throw Error(ErrorKind::Malformed, "f must have exactly k rows");
  }
  for (std::size_t i = 0; i < row_degrees_.size(); ++i) {
    if (row_degrees_[i] < 0) {
      throw Error(ErrorKind::Malformed, "d[" + std::to_string(i) + "] is negative");
    }
    if (static_cast<int>(col_degrees_[i].size()) != cols_) {
      throw Error(ErrorKind::Malformed, "f[" + std::to_string(i) + "] must have m entries");
    }
    for (std::size_t v = 0; v < col_degrees_[i].size(); ++v) {
      if (col_degrees_[i][v] < 0) {
        throw Error(ErrorKind::Malformed, "f[" + std::to_string(i) + "][" + std::to_string(v) +
                                              "] is negative");
      }
    }
  }
}

std::string Violation::describe() const {
  std::ostringstream out;
  switch (condition) {
    case Condition::ColorBalance:
      out << "condition 1 (color balance) fails for color " << color << ": n*d = " << lhs
          << " but column sum = " << rhs;
      break;
    case Condition::RowCapacity:
      out << "condition 2 (row capacity) fails: sum of d = " << lhs << " exceeds m = " << rhs;
      break;
    case Condition::ColumnCapacity:
      out << "condition 3 (column capacity) fails for column " << column
          << ": sum of f = " << lhs << " exceeds n = " << rhs;
      break;
  }
  return out.str();
}

ValidationReport validate(const DegreeMatrix& matrix) {
  ValidationReport report;
  const int k = matrix.colors();

  for (Color i = 0; i < k; ++i) {
    const long lhs = static_cast<long>(matrix.rows()) * matrix.row_degree(i);
    const auto& f = matrix.col_degrees()[i];
    const long rhs = std::accumulate(f.begin(), f.end(), 0L);
    if (lhs != rhs) {
      report.violations.push_back({Condition::ColorBalance, i, -1, lhs, rhs});
    }
  }

  const long row_total =
      std::accumulate(matrix.row_degrees().begin(), matrix.row_degrees().end(), 0L);
  if (row_total > matrix.cols()) {
    report.violations.push_back({Condition::RowCapacity, -1, -1, row_total, matrix.cols()});
  }
  report.equality = row_total == matrix.cols();

  for (int v = 0; v < matrix.cols(); ++v) {
    long col_total = 0;
    for (Color i = 0; i < k; ++i) col_total += matrix.col_degree(i, v);
    if (col_total > matrix.rows()) {
      report.violations.push_back({Condition::ColumnCapacity, -1, v, col_total, matrix.rows()});
    }
  }

  report.ok = report.violations.empty();
  return report;
}

bool is_equality_form(const DegreeMatrix& matrix) {
  const auto report = validate(matrix);
  if (!report.ok || !report.equality) return false;
  for (int v = 0; v < matrix.cols(); ++v) {
    long col_total = 0;
    for (Color i = 0; i < matrix.colors(); ++i) col_total += matrix.col_degree(i, v);
    if (col_total != matrix.rows()) return false;
  }
  return true;
}

DegreeMatrix extend_with_nonedge_color(const DegreeMatrix& matrix) {
  const auto report = validate(matrix);
  if (!report.ok) {
    throw Error(ErrorKind::InvalidMatrix, report.violations.front().describe());
  }
  if (report.equality) return matrix;

  auto d = matrix.row_degrees();
  auto f = matrix.col_degrees();
  const int row_total = std::accumulate(d.begin(), d.end(), 0);
  d.push_back(matrix.cols() - row_total);
  std::vector<int> slack(matrix.cols());
  for (int v = 0; v < matrix.cols(); ++v) {
    int col_total = 0;
    for (const auto& row : f) col_total += row[v];
    slack[v] = matrix.rows() - col_total;
  }
  f.push_back(std::move(slack));
  return DegreeMatrix(matrix.rows(), matrix.cols(), std::move(d), std::move(f));
}

}  // namespace halfreg
