#include "halfreg/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <numeric>

#include <boost/math/special_functions/gamma.hpp>

#include "halfreg/error.hpp"

namespace halfreg {

int size_guard() {
  if (const char* env = std::getenv("HALFREG_SIZE_GUARD")) {
    char* end = nullptr;
    const long value = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && value > 0) return static_cast<int>(value);
  }
  return kDefaultSizeGuard;
}

namespace {

class Search {
 public:
  Search(const DegreeMatrix& matrix, const std::function<bool(const ColorMatrix&)>& visit)
      : n_(matrix.rows()), m_(matrix.cols()), k_(matrix.colors()), visit_(visit),
        grid_(matrix.rows(), matrix.cols()) {
    row_budget_.assign(matrix.row_degrees().begin(), matrix.row_degrees().end());
    row_budget_.push_back(m_ - std::accumulate(row_budget_.begin(), row_budget_.end(), 0));
    row_need_ = row_budget_;
    col_need_.assign(static_cast<std::size_t>(k_ + 1) * m_, 0);
    for (int v = 0; v < m_; ++v) {
      int used = 0;
      for (Color c = 0; c < k_; ++c) {
        col_need_[c * m_ + v] = matrix.col_degree(c, v);
        used += matrix.col_degree(c, v);
      }
      col_need_[k_ * m_ + v] = n_ - used;
    }
  }

  long run() {
    auto negative = [](const std::vector<int>& xs) {
      return std::any_of(xs.begin(), xs.end(), [](int x) { return x < 0; });
    };
    if (!negative(row_budget_) && !negative(col_need_)) fill(0);
    return found_;
  }

 private:
  // Residuals count the cells a row or column still owes each color; the
  // filler id k_ absorbs the slack. Rows hold m_ cells and columns n_, so a
  // full grid reached without overdrawing any residual meets every count.
  bool fill(int cell) {
    if (cell == n_ * m_) {
      ++found_;
      return visit_(grid_);
    }
    const int u = cell / m_;
    const int v = cell % m_;
    for (Color c = 0; c <= k_; ++c) {
      int& rn = row_need_[c];
      int& cn = col_need_[c * m_ + v];
      if (rn == 0 || cn == 0) continue;
      --rn;
      --cn;
      grid_(u, v) = c;
      bool go_on;
      if (v == m_ - 1) {
        // The row is complete, so every residual is zero here.
        row_need_ = row_budget_;
        go_on = fill(cell + 1);
        std::fill(row_need_.begin(), row_need_.end(), 0);
      } else {
        go_on = fill(cell + 1);
      }
      ++rn;
      ++cn;
      if (!go_on) return false;
    }
    return true;
  }

  int n_;
  int m_;
  int k_;
  const std::function<bool(const ColorMatrix&)>& visit_;
  ColorMatrix grid_;
  std::vector<int> row_budget_;
  std::vector<int> row_need_;
  std::vector<int> col_need_;
  long found_ = 0;
};

}  // namespace

long enumerate_each(const DegreeMatrix& matrix,
                    const std::function<bool(const ColorMatrix&)>& visit) {
  if (matrix.rows() * matrix.cols() > size_guard()) {
    throw Error(ErrorKind::TooLarge, std::to_string(matrix.rows()) + "x" +
                                         std::to_string(matrix.cols()) +
                                         " exceeds the enumeration guard of " +
                                         std::to_string(size_guard()) + " cells");
  }
  return Search(matrix, visit).run();
}

EnumerationResult enumerate(const DegreeMatrix& matrix, bool count_only) {
  EnumerationResult result{matrix, 0, matrix.colors(), {}};
  const int sum_d = std::accumulate(matrix.row_degrees().begin(), matrix.row_degrees().end(), 0);
  if (sum_d != matrix.cols()) result.colors = matrix.colors() + 1;
  result.count = enumerate_each(matrix, [&](const ColorMatrix& grid) {
    if (!count_only) result.encodings.push_back(grid.encode(result.colors));
    return true;
  });
  std::sort(result.encodings.begin(), result.encodings.end());
  return result;
}

bool has_realization(const DegreeMatrix& matrix) {
  return enumerate_each(matrix, [](const ColorMatrix&) { return false; }) > 0;
}

ExistenceReport verify_existence_equivalence(const ExistenceBounds& bounds) {
  ExistenceReport report;
  for (int k = 1; k <= bounds.max_colors; ++k) {
    for (int n = 1; n <= bounds.max_rows; ++n) {
      for (int m = 1; m <= bounds.max_cols; ++m) {
        const int base = bounds.max_entry + 1;
        long d_total = 1;
        for (int i = 0; i < k; ++i) d_total *= base;
        long f_total = 1;
        for (int i = 0; i < k * m; ++i) f_total *= base;

        std::vector<int> d(k);
        std::vector<std::vector<int>> f(k, std::vector<int>(m));
        std::map<std::vector<int>, bool> cache;
        std::vector<std::vector<int>> columns(m, std::vector<int>(k));
        for (long di = 0; di < d_total; ++di) {
          long x = di;
          for (int i = 0; i < k; ++i, x /= base) d[i] = static_cast<int>(x % base);
          cache.clear();
          for (long fi = 0; fi < f_total; ++fi) {
            long y = fi;
            for (int i = 0; i < k; ++i) {
              for (int v = 0; v < m; ++v, y /= base) f[i][v] = static_cast<int>(y % base);
            }
            DegreeMatrix matrix(n, m, d, f);
            const bool valid = validate(matrix).ok;

            for (int v = 0; v < m; ++v) {
              for (int i = 0; i < k; ++i) columns[v][i] = f[i][v];
            }
            std::sort(columns.begin(), columns.end());
            std::vector<int> key;
            for (const auto& col : columns) key.insert(key.end(), col.begin(), col.end());
            auto [it, fresh] = cache.try_emplace(std::move(key), false);
            if (fresh) it->second = has_realization(matrix);
            const bool realizable = it->second;

            ++report.matrices;
            report.valid += valid;
            report.realizable += realizable;
            if (valid != realizable) report.discrepancies.push_back(std::move(matrix));
          }
        }
      }
    }
  }
  return report;
}

double chi_square_survival(double statistic, double dof) {
  if (statistic <= 0) return 1.0;
  return boost::math::gamma_q(dof / 2.0, statistic / 2.0);
}

UniformityStats uniformity_test(const std::unordered_map<std::string, long>& counts,
                                long state_space) {
  if (state_space < 2) throw Error(ErrorKind::Malformed, "state space needs at least two states");
  if (static_cast<long>(counts.size()) > state_space) {
    throw Error(ErrorKind::Malformed, "more distinct states observed than the space holds");
  }
  long total = 0;
  for (const auto& [state, count] : counts) {
    if (count < 0) throw Error(ErrorKind::Malformed, "negative count");
    total += count;
  }
  if (total < 10 * state_space) {
    throw Error(ErrorKind::InsufficientSamples,
                std::to_string(total) + " samples, need at least " + std::to_string(10 * state_space));
  }
  const double expected = static_cast<double>(total) / static_cast<double>(state_space);
  const double uniform = 1.0 / static_cast<double>(state_space);
  double chi2 = 0;
  double tv = 0;
  for (const auto& [state, count] : counts) {
    const double diff = static_cast<double>(count) - expected;
    chi2 += diff * diff / expected;
    tv += std::abs(static_cast<double>(count) / static_cast<double>(total) - uniform);
  }
  const long unseen = state_space - static_cast<long>(counts.size());
  chi2 += static_cast<double>(unseen) * expected;
  tv += static_cast<double>(unseen) * uniform;
  return {chi2, chi_square_survival(chi2, static_cast<double>(state_space - 1)), tv / 2.0, total,
          state_space};
}

}  // namespace halfreg
