#include "halfreg/constructor.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "halfreg/error.hpp"

namespace halfreg {

int FactorGraph::row_sum(int row) const {
  int total = 0;
  for (int v = 0; v < cols_; ++v) total += has(row, v);
  return total;
}

int FactorGraph::col_sum(int col) const {
  int total = 0;
  for (int u = 0; u < rows_; ++u) total += has(u, col);
  return total;
}

FactorGraph realize_factor(int rows, int row_degree, std::span<const int> col_degrees) {
  const int cols = static_cast<int>(col_degrees.size());
  const long demand = std::accumulate(col_degrees.begin(), col_degrees.end(), 0L);
  if (row_degree < 0 || row_degree > cols || demand != static_cast<long>(rows) * row_degree ||
      std::any_of(col_degrees.begin(), col_degrees.end(),
                  [rows](int f) { return f < 0 || f > rows; })) {
    throw Error(ErrorKind::Infeasible, "degree sequence is not graphical");
  }

  FactorGraph g(rows, cols);
  std::vector<int> remaining(col_degrees.begin(), col_degrees.end());
  std::vector<int> order(cols);
  for (int u = 0; u < rows; ++u) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return remaining[a] > remaining[b]; });
    for (int i = 0; i < row_degree; ++i) {
      const int v = order[i];
      if (remaining[v] == 0) throw Error(ErrorKind::Infeasible, "greedy placement ran dry");
      g.set(u, v, true);
      --remaining[v];
    }
  }
  return g;
}

MultiUnion::MultiUnion(int rows, int cols, int colors)
    : rows_(rows), cols_(cols), colors_(colors),
      layers_(static_cast<std::size_t>(rows) * cols * colors, 0),
      mult_(static_cast<std::size_t>(rows) * cols, 0) {}

void MultiUnion::set(int row, int col, Color c, bool on) {
  char& cell = layers_[index(row, col, c)];
  if ((cell != 0) == on) return;
  cell = on ? 1 : 0;
  mult_[row * cols_ + col] += on ? 1 : -1;
}

FactorGraph MultiUnion::layer(Color c) const {
  FactorGraph g(rows_, cols_);
  for (int u = 0; u < rows_; ++u) {
    for (int v = 0; v < cols_; ++v) g.set(u, v, has(u, v, c));
  }
  return g;
}

void MultiUnion::set_layer(Color c, const FactorGraph& factor) {
  for (int u = 0; u < rows_; ++u) {
    for (int v = 0; v < cols_; ++v) set(u, v, c, factor.has(u, v));
  }
}

long exceed_number(const MultiUnion& g) {
  long total = 0;
  for (int u = 0; u < g.rows(); ++u) {
    for (int v = 0; v < g.cols(); ++v) total += std::max(g.multiplicity(u, v) - 1, 0);
  }
  return total;
}

namespace {

// The column and color that close the alternating chain.
struct Closing {
  int col = -1;
  Color color = -1;
  int which_case = 0;
};

// Colors x with pending demand such that u' has an x edge at col and u has
// none there.
bool transferable(const MultiUnion& g, int u, int partner, int col, Color x) {
  return g.has(partner, col, x) && !g.has(u, col, x);
}

}  // namespace

MultiUnion reduce_exceed_step(const MultiUnion& g, ReductionReport* report) {
  const long before = exceed_number(g);
  if (before == 0) throw Error(ErrorKind::AlreadySimple, "union has no parallel edges");

  int u = -1;
  int v = -1;
  for (int r = 0; r < g.rows() && u < 0; ++r) {
    for (int c = 0; c < g.cols(); ++c) {
      if (g.multiplicity(r, c) >= 2) {
        u = r;
        v = c;
        break;
      }
    }
  }
  int partner = -1;
  for (int r = 0; r < g.rows(); ++r) {
    if (g.multiplicity(r, v) == 0) {
      partner = r;
      break;
    }
  }
  if (partner < 0) throw std::logic_error("column with parallel edges has no empty row");

  const int k = g.colors();
  std::vector<bool> used(g.cols(), false);
  used[v] = true;
  std::vector<std::vector<int>> levels{{v}};
  // Multiset of colors u carries over the newest level.
  std::vector<int> demand(k, 0);
  for (Color c = 0; c < k; ++c) demand[c] = g.has(u, v, c) ? 1 : 0;

  Closing closing;
  while (closing.col < 0) {
    bool any_candidate = false;
    for (int col = 0; col < g.cols() && closing.col < 0; ++col) {
      if (used[col]) continue;
      for (Color x = 0; x < k; ++x) {
        if (demand[x] == 0 || !transferable(g, u, partner, col, x)) continue;
        any_candidate = true;
        if (g.multiplicity(partner, col) >= 2) {
          closing = {col, x, 1};
        } else if (g.multiplicity(u, col) == 0) {
          closing = {col, x, 2};
        }
        break;
      }
    }
    if (closing.col >= 0) break;
    if (!any_candidate) throw std::logic_error("alternating chain has no continuation");

    // Case 3: every candidate column has a single edge at u' and at least
    // one at u. Cover the pending color multiset with candidate columns.
    std::vector<int> level;
    std::vector<int> next_demand(k, 0);
    for (Color x = 0; x < k; ++x) {
      int need = demand[x];
      for (int col = 0; col < g.cols() && need > 0; ++col) {
        if (used[col] || !transferable(g, u, partner, col, x)) continue;
        used[col] = true;
        level.push_back(col);
        --need;
        for (Color c = 0; c < k; ++c) next_demand[c] += g.has(u, col, c) ? 1 : 0;
      }
      if (need > 0) throw std::logic_error("case-3 cover failed for color " + std::to_string(x));
    }
    std::sort(level.begin(), level.end());
    levels.push_back(std::move(level));
    demand = std::move(next_demand);
  }

  MultiUnion out = g;
  Color x = closing.color;
  out.set(partner, closing.col, x, false);
  out.set(u, closing.col, x, true);
  for (std::size_t depth = levels.size() - 1; depth >= 1; --depth) {
    const auto& level = levels[depth];
    auto pick = std::find_if(level.begin(), level.end(), [&](int col) { return out.has(u, col, x); });
    if (pick == level.end()) throw std::logic_error("chain level lacks the color to hand back");
    const int col = *pick;
    Color y = -1;
    for (Color c = 0; c < k; ++c) {
      if (out.has(partner, col, c)) y = c;
    }
    out.set(u, col, x, false);
    out.set(partner, col, x, true);
    out.set(partner, col, y, false);
    out.set(u, col, y, true);
    x = y;
  }
  out.set(u, v, x, false);
  out.set(partner, v, x, true);

  const long after = exceed_number(out);
  if (after >= before) throw std::logic_error("exceed number did not decrease");
  if (report) {
    *report = {u, v, partner, closing.which_case, static_cast<int>(levels.size()) - 1, before, after};
  }
  return out;
}

ColoredRealization construct_realization(const DegreeMatrix& matrix, ConstructionLog* log) {
  const DegreeMatrix full = extend_with_nonedge_color(matrix);
  MultiUnion g(full.rows(), full.cols(), full.colors());
  for (Color c = 0; c < full.colors(); ++c) {
    g.set_layer(c, realize_factor(full.rows(), full.row_degree(c), full.col_degrees()[c]));
  }

  long ex = exceed_number(g);
  if (log) log->exceed_sequence.push_back(ex);
  while (ex > 0) {
    ReductionReport step;
    g = reduce_exceed_step(g, &step);
    ex = step.exceed_after;
    if (log) {
      log->exceed_sequence.push_back(ex);
      log->steps.push_back(step);
    }
  }

  ColorMatrix cells(full.rows(), full.cols());
  for (int u = 0; u < full.rows(); ++u) {
    for (int v = 0; v < full.cols(); ++v) {
      for (Color c = 0; c < full.colors(); ++c) {
        if (g.has(u, v, c)) cells(u, v) = c;
      }
    }
  }
  ColoredRealization result(std::move(cells), full.colors());
  if (!check_realization(full, result)) {
    throw std::logic_error("constructed coloring does not realize the instance");
  }
  return result;
}

}  // namespace halfreg
