#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "halfreg/realization.hpp"

namespace halfreg {

/// Exchange of rows `row_a` and `row_b` on every listed column.
struct SwapOp {
  int row_a = 0;
  int row_b = 0;
  std::vector<int> cols;

  bool operator==(const SwapOp&) const = default;
};

/// One realization-to-realization move. Applying `swaps` in order to the
/// predecessor gives a coloring whose hash is `result_hash`.
struct PerturbationStep {
  std::vector<int> touched_rows;  // ascending, at most three
  std::vector<SwapOp> swaps;
  std::uint64_t result_hash = 0;
};

/// Step that turns `from` into `to`. Within each column the rows that differ
/// are permuted by a sequence of transpositions.
/// Throws Error(DimensionMismatch) if the column multisets of colors differ.
PerturbationStep diff_step(const ColoredRealization& from, const ColoredRealization& to);

ColoredRealization apply_step(const ColoredRealization& r, const PerturbationStep& step);

/// Fixes the complementary defects (u1,+a,-b), (u2,+b,-a) by swapping the
/// two rows along a trail from a to b in K(G,u1,u2). Only u1 and u2 change.
/// Throws Error(BadDefectShape) for any other defect list.
ColoredRealization repair_two(const NearRealization& near);

/// Takes the cyclic defects (u1,+a,-b), (u2,+b,-c), (u3,+c,-a), swaps rows
/// u3 and u2 along a trail from c to a in K(G,u3,u2), and returns the
/// remaining pair (u1,+a,-b), (u2,+b,-a). Only u2 and u3 change.
/// Throws Error(BadDefectShape) for any other defect list.
NearRealization repair_three(const NearRealization& near);

/// Rotates row u along the cycle v1 -> v2 -> ... -> vr -> v1: afterwards
/// (u, v_{l+1}) holds the color (u, v_l) had, and (u, v1) the color of
/// (u, vr). Returns realization-to-realization steps touching at most three
/// rows each; rows outside `active` (when given) are never touched.
/// `target` must already show the rotated colors of row u on the cycle.
/// Throws Error(NotACyclicPermutation) when the cycle repeats a column or a
/// color of row u, or `target` disagrees with the rotation.
std::vector<PerturbationStep> apply_cycle(const ColoredRealization& r, int u,
                                          std::span<const int> cycle,
                                          const ColoredRealization& target,
                                          const std::vector<bool>& active = {});

/// Moves from r1 to r2 through realizations only, fixing rows 0, 1, ...
/// in turn; every step touches at most three rows.
/// Throws Error(DifferentInstances) unless both colorings realize the same
/// degree matrix.
std::vector<PerturbationStep> transformation_path(const ColoredRealization& r1,
                                                  const ColoredRealization& r2);

}  // namespace halfreg
