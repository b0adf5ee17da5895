#pragma once

#include <cstddef>
#include <limits>
#include <random>
#include <span>
#include <vector>

#include "halfreg/degree_matrix.hpp"
#include "halfreg/rational.hpp"
#include "halfreg/realization.hpp"

namespace halfreg {

struct AuxEdge {
  Color from = 0;
  Color to = 0;

  bool is_loop() const noexcept { return from == to; }
};

/// Directed edge-labeled multigraph on the colors built from two rows
/// (u, u') of a coloring: for every column v there is exactly one edge from
/// color(u, v) to color(u', v), labeled v.
class ColorMultigraph {
 public:
  ColorMultigraph(int colors, std::vector<AuxEdge> edges);

  int colors() const noexcept { return colors_; }
  int edge_count() const noexcept { return static_cast<int>(edges_.size()); }
  const AuxEdge& edge(int label) const { return edges_.at(label); }

  /// Labels of edges leaving `c`, ascending.
  std::span<const int> out_labels(Color c) const { return out_[c]; }

  int out_degree(Color c) const { return static_cast<int>(out_[c].size()); }
  int in_degree(Color c) const { return in_degree_[c]; }
  int nonloop_out_degree(Color c) const;
  /// out_degree - in_degree.
  int imbalance(Color c) const { return out_degree(c) - in_degree(c); }
  bool balanced() const;

  /// Same labels, every edge reversed.
  ColorMultigraph reversed() const;

 private:
  int colors_;
  std::vector<AuxEdge> edges_;
  std::vector<std::vector<int>> out_;
  std::vector<int> in_degree_;
};

/// Throws Error(SameRow) if u == u_prime.
ColorMultigraph build_aux(const ColoredRealization& r, int u, int u_prime);

/// A walk through distinct, non-loop edges together with the probability
/// that the step-uniform generator produces exactly this walk.
struct Trail {
  Color start = 0;
  std::vector<int> labels;
  /// colors[0] == start; colors[i + 1] is the head of labels[i].
  std::vector<Color> colors;
  Rational probability = 1;
  /// The walk ended on the requested end color (as opposed to being cut
  /// short by a step budget).
  bool closed = false;

  std::size_t size() const noexcept { return labels.size(); }
  Color end() const { return colors.back(); }
};

/// Picks one of the currently available edges. The generator is written
/// against this interface so that sampling, replaying a recorded walk, and
/// exhaustive enumeration all share one stepping rule.
class EdgeChooser {
 public:
  virtual ~EdgeChooser() = default;
  /// `available` is non-empty and sorted ascending; returns an index into it.
  virtual std::size_t choose(std::span<const int> available) = 0;
};

constexpr std::size_t kUnbounded = std::numeric_limits<std::size_t>::max();

/// Checks the generator's degree condition: every color other than `end`
/// has out-degree >= in-degree, and `start` has strictly more out- than
/// in-edges when start != end.
bool trail_precondition_holds(const ColorMultigraph& k, Color start, Color end);

/// The random trail generator: leave `start` by a uniformly chosen non-loop
/// edge, then keep leaving the current color by a uniformly chosen non-loop
/// edge whose label is unused, until `end` is reached or `max_steps` edges
/// have been taken. With start == end this draws a circuit.
/// Throws Error(NoNonLoopEdge) when `start` only has loops, and
/// Error(PreconditionViolated) when the degree condition fails.
Trail generate_trail(const ColorMultigraph& k, Color start, Color end, EdgeChooser& chooser,
                     std::size_t max_steps = kUnbounded);

template <class Rng>
class RandomEdgeChooser final : public EdgeChooser {
 public:
  explicit RandomEdgeChooser(Rng& rng) : rng_(rng) {}
  std::size_t choose(std::span<const int> available) override {
    return std::uniform_int_distribution<std::size_t>(0, available.size() - 1)(rng_);
  }

 private:
  Rng& rng_;
};

template <class Rng>
Trail sample_trail(const ColorMultigraph& k, Color start, Color end, Rng& rng,
                   std::size_t max_steps = kUnbounded) {
  RandomEdgeChooser<Rng> chooser(rng);
  return generate_trail(k, start, end, chooser, max_steps);
}

/// Deterministic trail for the repair lemmas: always the smallest available
/// label. Throws Error(PreconditionViolated) if the degree condition fails
/// or `start` has no non-loop edge.
Trail find_trail_deterministic(const ColorMultigraph& k, Color start, Color end);

/// Fewest-edge trail from `start` to `end` over non-loop edges (breadth
/// first, smaller labels explored first). Needs no degree condition, which
/// matters when a color other than `end` has a surplus of in-edges and the
/// greedy walk may stall there. Throws Error(PreconditionViolated) when
/// `end` is unreachable or start == end.
Trail find_shortest_trail(const ColorMultigraph& k, Color start, Color end);

/// Re-runs the generator along a recorded label sequence and returns the
/// trail with its exact probability. A sequence that the generator could
/// not have produced (unknown label, wrong tail, loop, repeated label, or
/// continuing after `end` was reached) raises Error(InvalidTrail).
Trail replay_trail(const ColorMultigraph& k, Color start, Color end, std::span<const int> labels);

Rational trail_probability_replay(const ColorMultigraph& k, Color start, Color end,
                                  std::span<const int> labels);

/// Splits a balanced multigraph into edge-disjoint directed cycles, labels
/// in traversal order. Loops become one-edge cycles; every longer cycle
/// visits each color at most once.
/// Throws Error(NotBalanced) if some color has out-degree != in-degree.
std::vector<std::vector<int>> eulerian_cycle_decomposition(const ColorMultigraph& k);

/// Exchanges rows u and u' on every column that labels an edge of `trail`.
void apply_trail(ColoredRealization& r, int u, int u_prime, const Trail& trail);

}  // namespace halfreg
