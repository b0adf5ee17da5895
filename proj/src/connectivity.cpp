#include "halfreg/connectivity.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "halfreg/aux_graph.hpp"
#include "halfreg/error.hpp"

namespace halfreg {

PerturbationStep diff_step(const ColoredRealization& from, const ColoredRealization& to) {
  if (from.rows() != to.rows() || from.cols() != to.cols() || from.colors() != to.colors()) {
    throw Error(ErrorKind::DimensionMismatch, "step endpoints have different shapes");
  }
  PerturbationStep step;
  std::set<int> touched;
  std::vector<int> differing;
  std::vector<Color> column(from.rows());
  for (int v = 0; v < from.cols(); ++v) {
    differing.clear();
    for (int u = 0; u < from.rows(); ++u) {
      column[u] = from.color(u, v);
      if (column[u] != to.color(u, v)) differing.push_back(u);
    }
    for (std::size_t i = 0; i < differing.size(); ++i) {
      const int row = differing[i];
      const Color want = to.color(row, v);
      if (column[row] == want) continue;
      auto source = std::find_if(differing.begin() + static_cast<long>(i) + 1, differing.end(),
                                 [&](int other) { return column[other] == want; });
      if (source == differing.end()) {
        throw Error(ErrorKind::DimensionMismatch,
                    "column " + std::to_string(v) + " holds different color multisets");
      }
      std::swap(column[row], column[*source]);
      touched.insert(row);
      touched.insert(*source);
      auto& swaps = step.swaps;
      if (!swaps.empty() && swaps.back().row_a == row && swaps.back().row_b == *source &&
          swaps.back().cols.back() != v) {
        swaps.back().cols.push_back(v);
      } else {
        swaps.push_back({row, *source, {v}});
      }
    }
  }
  step.touched_rows.assign(touched.begin(), touched.end());
  step.result_hash = to.matrix().hash();
  return step;
}

ColoredRealization apply_step(const ColoredRealization& r, const PerturbationStep& step) {
  ColoredRealization out = r;
  for (const auto& op : step.swaps) out.swap_columns(op.row_a, op.row_b, op.cols);
  return out;
}

ColoredRealization repair_two(const NearRealization& near) {
  if (!is_two_defect_shape(near.defects)) {
    throw Error(ErrorKind::BadDefectShape, "expected two complementary defects");
  }
  const auto& [u1, a, b] = near.defects[0];
  const int u2 = near.defects[1].row;
  const auto k = build_aux(near.state, u1, u2);
  const Trail trail = find_trail_deterministic(k, a, b);
  ColoredRealization out = near.state;
  apply_trail(out, u1, u2, trail);
  return out;
}

NearRealization repair_three(const NearRealization& near) {
  if (!is_three_defect_shape(near.defects)) {
    throw Error(ErrorKind::BadDefectShape, "expected three defects in cyclic order");
  }
  const Deficiency first = near.defects[0];
  const int u2 = near.defects[1].row;
  const int u3 = near.defects[2].row;
  const Color a = first.plus;
  const Color b = first.minus;
  const Color c = near.defects[1].minus;
  // Color b has one more in- than out-edge in this graph, so the greedy walk
  // could stall there; a breadth-first trail cannot.
  const auto k = build_aux(near.state, u3, u2);
  const Trail trail = find_shortest_trail(k, c, a);
  NearRealization out{near.state, {first, {u2, b, a}}};
  apply_trail(out.state, u3, u2, trail);
  return out;
}

namespace {

void require_cycle(const ColoredRealization& r, int u, std::span<const int> cycle,
                   const ColoredRealization& target) {
  auto fail = [](const std::string& why) { throw Error(ErrorKind::NotACyclicPermutation, why); };
  if (target.rows() != r.rows() || target.cols() != r.cols()) fail("target has a different shape");
  if (u < 0 || u >= r.rows()) fail("row out of range");
  if (cycle.empty()) fail("empty cycle");
  std::vector<bool> seen_col(r.cols(), false);
  std::vector<bool> seen_color(r.colors(), false);
  for (int v : cycle) {
    if (v < 0 || v >= r.cols() || seen_col[v]) fail("cycle repeats or leaves the columns");
    seen_col[v] = true;
    if (seen_color[r.color(u, v)]) fail("row repeats a color on the cycle");
    seen_color[r.color(u, v)] = true;
  }
  const std::size_t len = cycle.size();
  for (std::size_t l = 0; l < len; ++l) {
    if (target.color(u, cycle[(l + 1) % len]) != r.color(u, cycle[l])) {
      fail("target is not the rotation along the cycle");
    }
  }
}

}  // namespace

std::vector<PerturbationStep> apply_cycle(const ColoredRealization& r, int u,
                                          std::span<const int> cycle,
                                          const ColoredRealization& target,
                                          const std::vector<bool>& active) {
  require_cycle(r, u, cycle, target);
  const std::size_t len = cycle.size();
  std::vector<PerturbationStep> steps;
  if (len == 1) return steps;

  std::vector<Color> colors;
  for (int v : cycle) colors.push_back(r.color(u, v));

  ColoredRealization raw = r;
  ColoredRealization last = r;
  auto partner = [&](int col, Color c) {
    for (int row = 0; row < raw.rows(); ++row) {
      const bool usable = active.empty() || active[row];
      if (row != u && usable && raw.color(row, col) == c) return row;
    }
    throw std::logic_error("no active row carries the color a cycle column needs");
  };
  auto emit = [&](const ColoredRealization& next) {
    PerturbationStep step = diff_step(last, next);
    if (step.touched_rows.size() > 3) throw std::logic_error("cycle step touches more than three rows");
    if (!step.touched_rows.empty()) steps.push_back(std::move(step));
    last = next;
  };
  auto swap_one = [&](int other, int col) {
    const int cols[] = {col};
    raw.swap_columns(u, other, cols);
  };

  const Color closing = colors[len - 1];
  int p = partner(cycle[0], closing);
  swap_one(p, cycle[0]);
  // Invariant: u has (+closing, -colors[s]) and p has (+colors[s], -closing).
  for (std::size_t s = 1; s < len; ++s) {
    const int w = partner(cycle[s], colors[s - 1]);
    swap_one(w, cycle[s]);
    if (s + 1 == len) {
      if (w == p) {
        emit(raw);
      } else {
        emit(repair_two({raw, {{p, colors[s - 1], closing}, {w, closing, colors[s - 1]}}}));
      }
      break;
    }
    if (w == p) continue;
    NearRealization near{raw,
                         {{u, closing, colors[s]}, {w, colors[s], colors[s - 1]},
                          {p, colors[s - 1], closing}}};
    near = repair_three(near);
    raw = near.state;
    emit(repair_two(near));
    p = w;
  }

  for (std::size_t l = 0; l < len; ++l) {
    if (last.color(u, cycle[l]) != target.color(u, cycle[l])) {
      throw std::logic_error("cycle application left the row unfinished");
    }
  }
  return steps;
}

namespace {

bool same_instance(const ColoredRealization& r1, const ColoredRealization& r2) {
  if (r1.rows() != r2.rows() || r1.cols() != r2.cols() || r1.colors() != r2.colors()) return false;
  const auto profile = r1.row_counts(0);
  for (int u = 0; u < r1.rows(); ++u) {
    if (r1.row_counts(u) != profile || r2.row_counts(u) != profile) return false;
  }
  for (Color c = 0; c < r1.colors(); ++c) {
    for (int v = 0; v < r1.cols(); ++v) {
      if (r1.col_count(c, v) != r2.col_count(c, v)) return false;
    }
  }
  return true;
}

}  // namespace

std::vector<PerturbationStep> transformation_path(const ColoredRealization& r1,
                                                  const ColoredRealization& r2) {
  if (!same_instance(r1, r2)) {
    throw Error(ErrorKind::DifferentInstances, "colorings do not realize the same degree matrix");
  }
  std::vector<PerturbationStep> path;
  ColoredRealization cur = r1;
  std::vector<bool> active(r1.rows(), true);
  for (int u = 0; u + 1 < r1.rows(); ++u) {
    std::vector<AuxEdge> edges;
    for (int v = 0; v < r1.cols(); ++v) edges.push_back({r2.color(u, v), cur.color(u, v)});
    const ColorMultigraph k(r1.colors(), std::move(edges));
    for (const auto& cycle : eulerian_cycle_decomposition(k)) {
      if (cycle.size() < 2) continue;
      for (auto& step : apply_cycle(cur, u, cycle, r2, active)) {
        cur = apply_step(cur, step);
        if (cur.matrix().hash() != step.result_hash) {
          throw std::logic_error("step script does not reproduce its snapshot");
        }
        path.push_back(std::move(step));
      }
    }
    for (int v = 0; v < r1.cols(); ++v) {
      if (cur.color(u, v) != r2.color(u, v)) throw std::logic_error("row not fixed after its cycles");
    }
    active[u] = false;
  }
  if (!(cur == r2)) throw std::logic_error("last row not forced by the fixed rows");
  return path;
}

}  // namespace halfreg
