#include "fixtures.hpp"

#include <algorithm>

#include "halfreg/constructor.hpp"
#include "halfreg/kernel.hpp"
#include "halfreg/oracle.hpp"

namespace halfreg::testing {

DegreeMatrix latin_instance(int n) {
  return DegreeMatrix(n, n, std::vector<int>(n, 1),
                      std::vector<std::vector<int>>(n, std::vector<int>(n, 1)));
}

DegreeMatrix instance_of(const ColoredRealization& r) {
  std::vector<std::vector<int>> f(r.colors(), std::vector<int>(r.cols()));
  for (Color c = 0; c < r.colors(); ++c) {
    for (int v = 0; v < r.cols(); ++v) f[c][v] = r.col_count(c, v);
  }
  return DegreeMatrix(r.rows(), r.cols(), r.row_counts(0), std::move(f));
}

namespace {

DegreeMatrix from_grid(Rng& rng, int n, int m, int k, bool slack) {
  std::uniform_int_distribution<int> pick(0, slack ? k : k - 1);
  std::vector<int> row(m);
  for (int& c : row) c = pick(rng);
  std::vector<int> d(k, 0);
  for (int c : row) {
    if (c < k) ++d[c];
  }
  std::vector<std::vector<int>> f(k, std::vector<int>(m, 0));
  for (int u = 0; u < n; ++u) {
    std::shuffle(row.begin(), row.end(), rng);
    for (int v = 0; v < m; ++v) {
      if (row[v] < k) ++f[row[v]][v];
    }
  }
  return DegreeMatrix(n, m, std::move(d), std::move(f));
}

}  // namespace

DegreeMatrix random_instance(Rng& rng, int max_rows, int max_cols, int max_colors, bool slack) {
  const int n = std::uniform_int_distribution<int>(1, max_rows)(rng);
  const int m = std::uniform_int_distribution<int>(1, max_cols)(rng);
  const int k = std::uniform_int_distribution<int>(1, max_colors)(rng);
  return from_grid(rng, n, m, k, slack);
}

DegreeMatrix random_instance(Rng& rng, int rows, int cols, int colors) {
  return from_grid(rng, rows, cols, colors, false);
}

ColorMultigraph three_color_fixture() {
  return ColorMultigraph(3, {{0, 1}, {0, 2}, {1, 0}, {1, 2}, {2, 0}, {2, 1}, {0, 0}, {0, 2}});
}

namespace {

void expand(const ColorMultigraph& k, Color at, Color end, std::vector<bool>& used,
            std::vector<int>& walk, const Rational& p,
            std::map<std::vector<int>, Rational>& out) {
  if (!walk.empty() && at == end) {
    out[walk] += p;
    return;
  }
  std::vector<int> open;
  for (int label = 0; label < k.edge_count(); ++label) {
    const AuxEdge& e = k.edge(label);
    if (e.from == at && e.to != at && !used[label]) open.push_back(label);
  }
  if (open.empty()) {
    walk.push_back(-1);
    out[walk] += p;
    walk.pop_back();
    return;
  }
  const Rational step = p * reciprocal(static_cast<long>(open.size()));
  for (int label : open) {
    used[label] = true;
    walk.push_back(label);
    expand(k, k.edge(label).to, end, used, walk, step, out);
    walk.pop_back();
    used[label] = false;
  }
}

}  // namespace

std::map<std::vector<int>, Rational> trail_law(const ColorMultigraph& k, Color start, Color end) {
  std::map<std::vector<int>, Rational> out;
  std::vector<bool> used(k.edge_count(), false);
  std::vector<int> walk;
  expand(k, start, end, used, walk, 1, out);
  return out;
}

std::vector<ColoredRealization> all_realizations(const DegreeMatrix& matrix) {
  std::vector<ColoredRealization> out;
  enumerate_each(matrix, [&](const ColorMatrix& grid) {
    out.emplace_back(grid, matrix.colors());
    return true;
  });
  // The search tries colors in ascending order cell by cell, so visits are
  // already in canonical order.
  return out;
}

ColoredRealization random_realization(const DegreeMatrix& matrix, Rng& rng, long steps) {
  ColoredRealization r = construct_realization(matrix);
  for (long i = 0; i < steps; ++i) r = mh_step(r, rng, false).state;
  return r;
}

void for_each_row_neighbor(const ColoredRealization& r, int rows,
                           const std::function<void(const ColoredRealization&)>& visit) {
  const int n = r.rows();
  const int m = r.cols();
  const int s = std::min(rows, n);
  std::vector<bool> mask(n, false);
  std::fill(mask.begin(), mask.begin() + s, true);
  const std::vector<int> d = r.row_counts(0);
  do {
    std::vector<int> chosen;
    for (int u = 0; u < n; ++u) {
      if (mask[u]) chosen.push_back(u);
    }
    std::vector<std::vector<int>> f(r.colors(), std::vector<int>(m, 0));
    for (int u : chosen) {
      for (int v = 0; v < m; ++v) ++f[r.color(u, v)][v];
    }
    const DegreeMatrix sub(s, m, d, std::move(f));
    enumerate_each(sub, [&](const ColorMatrix& grid) {
      ColoredRealization next = r;
      for (int i = 0; i < s; ++i) {
        for (int v = 0; v < m; ++v) next.assign(chosen[i], v, grid(i, v));
      }
      visit(next);
      return true;
    });
  } while (std::prev_permutation(mask.begin(), mask.end()));
}

}  // namespace halfreg::testing
