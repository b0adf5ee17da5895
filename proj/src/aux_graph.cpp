#include "halfreg/aux_graph.hpp"

#include <algorithm>
#include <deque>

#include "halfreg/error.hpp"

namespace halfreg {

ColorMultigraph::ColorMultigraph(int colors, std::vector<AuxEdge> edges)
    : colors_(colors), edges_(std::move(edges)), out_(colors), in_degree_(colors, 0) {
  for (int label = 0; label < edge_count(); ++label) {
    const auto& e = edges_[label];
    if (e.from < 0 || e.from >= colors_ || e.to < 0 || e.to >= colors_) {
      throw Error(ErrorKind::DimensionMismatch, "edge endpoint outside the color range");
    }
    out_[e.from].push_back(label);
    ++in_degree_[e.to];
  }
}

int ColorMultigraph::nonloop_out_degree(Color c) const {
  return static_cast<int>(std::count_if(out_[c].begin(), out_[c].end(),
                                        [&](int label) { return !edges_[label].is_loop(); }));
}

bool ColorMultigraph::balanced() const {
  for (Color c = 0; c < colors_; ++c) {
    if (imbalance(c) != 0) return false;
  }
  return true;
}

ColorMultigraph ColorMultigraph::reversed() const {
  std::vector<AuxEdge> flipped;
  flipped.reserve(edges_.size());
  for (const auto& e : edges_) flipped.push_back({e.to, e.from});
  return ColorMultigraph(colors_, std::move(flipped));
}

ColorMultigraph build_aux(const ColoredRealization& r, int u, int u_prime) {
  if (u == u_prime) throw Error(ErrorKind::SameRow, "auxiliary graph needs two distinct rows");
  std::vector<AuxEdge> edges;
  edges.reserve(r.cols());
  for (int v = 0; v < r.cols(); ++v) edges.push_back({r.color(u, v), r.color(u_prime, v)});
  return ColorMultigraph(r.colors(), std::move(edges));
}

bool trail_precondition_holds(const ColorMultigraph& k, Color start, Color end) {
  for (Color c = 0; c < k.colors(); ++c) {
    if (c != end && k.imbalance(c) < 0) return false;
  }
  return start == end || k.imbalance(start) > 0;
}

Trail generate_trail(const ColorMultigraph& k, Color start, Color end, EdgeChooser& chooser,
                     std::size_t max_steps) {
  if (start < 0 || start >= k.colors() || end < 0 || end >= k.colors()) {
    throw Error(ErrorKind::PreconditionViolated, "trail endpoints outside the color range");
  }
  if (!trail_precondition_holds(k, start, end)) {
    throw Error(ErrorKind::PreconditionViolated, "degree condition for the trail generator fails");
  }
  if (k.nonloop_out_degree(start) == 0) {
    throw Error(ErrorKind::NoNonLoopEdge, "start color has only loops");
  }

  Trail trail;
  trail.start = start;
  trail.colors.push_back(start);
  std::vector<bool> used(k.edge_count(), false);
  std::vector<int> available;
  Color current = start;
  while (trail.labels.size() < max_steps) {
    available.clear();
    for (int label : k.out_labels(current)) {
      if (!used[label] && !k.edge(label).is_loop()) available.push_back(label);
    }
    if (available.empty()) {
      // Unreachable under the degree condition.
      throw Error(ErrorKind::PreconditionViolated, "trail got stuck before reaching its end");
    }
    const std::size_t pick = chooser.choose(available);
    const int label = available.at(pick);
    used[label] = true;
    trail.labels.push_back(label);
    trail.probability /= static_cast<long>(available.size());
    current = k.edge(label).to;
    trail.colors.push_back(current);
    if (current == end) {
      trail.closed = true;
      break;
    }
  }
  return trail;
}

namespace {

class SmallestLabelChooser final : public EdgeChooser {
 public:
  std::size_t choose(std::span<const int>) override { return 0; }
};

class ReplayChooser final : public EdgeChooser {
 public:
  explicit ReplayChooser(std::span<const int> labels) : labels_(labels) {}

  std::size_t choose(std::span<const int> available) override {
    const int want = labels_[next_++];
    auto it = std::find(available.begin(), available.end(), want);
    if (it == available.end()) {
      throw Error(ErrorKind::InvalidTrail,
                  "label " + std::to_string(want) + " is not an available edge at step " +
                      std::to_string(next_ - 1));
    }
    return static_cast<std::size_t>(it - available.begin());
  }

 private:
  std::span<const int> labels_;
  std::size_t next_ = 0;
};

}  // namespace

Trail find_trail_deterministic(const ColorMultigraph& k, Color start, Color end) {
  SmallestLabelChooser chooser;
  try {
    return generate_trail(k, start, end, chooser);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::NoNonLoopEdge) {
      throw Error(ErrorKind::PreconditionViolated, "start color has only loops");
    }
    throw;
  }
}

Trail find_shortest_trail(const ColorMultigraph& k, Color start, Color end) {
  if (start == end) throw Error(ErrorKind::PreconditionViolated, "shortest trail needs start != end");
  std::vector<int> via(k.colors(), -1);
  std::vector<bool> seen(k.colors(), false);
  std::deque<Color> queue{start};
  seen[start] = true;
  while (!queue.empty() && !seen[end]) {
    const Color c = queue.front();
    queue.pop_front();
    for (int label : k.out_labels(c)) {
      const Color head = k.edge(label).to;
      if (seen[head]) continue;
      seen[head] = true;
      via[head] = label;
      queue.push_back(head);
    }
  }
  if (!seen[end]) throw Error(ErrorKind::PreconditionViolated, "end color is unreachable");
  std::vector<int> labels;
  for (Color c = end; c != start; c = k.edge(via[c]).from) labels.push_back(via[c]);
  std::reverse(labels.begin(), labels.end());

  Trail trail;
  trail.start = start;
  trail.colors.push_back(start);
  for (int label : labels) {
    trail.labels.push_back(label);
    trail.colors.push_back(k.edge(label).to);
  }
  trail.closed = true;
  return trail;
}

Trail replay_trail(const ColorMultigraph& k, Color start, Color end, std::span<const int> labels) {
  if (labels.empty()) throw Error(ErrorKind::InvalidTrail, "empty label sequence");
  for (int label : labels) {
    if (label < 0 || label >= k.edge_count()) {
      throw Error(ErrorKind::InvalidTrail, "label " + std::to_string(label) + " out of range");
    }
  }
  ReplayChooser chooser(labels);
  Trail trail;
  try {
    trail = generate_trail(k, start, end, chooser, labels.size());
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::InvalidTrail) throw;
    throw Error(ErrorKind::InvalidTrail, e.what());
  }
  if (trail.size() != labels.size()) {
    throw Error(ErrorKind::InvalidTrail, "sequence continues after reaching its end color");
  }
  return trail;
}

Rational trail_probability_replay(const ColorMultigraph& k, Color start, Color end,
                                  std::span<const int> labels) {
  return replay_trail(k, start, end, labels).probability;
}

std::vector<std::vector<int>> eulerian_cycle_decomposition(const ColorMultigraph& k) {
  if (!k.balanced()) throw Error(ErrorKind::NotBalanced, "some color has in-degree != out-degree");

  std::vector<std::vector<int>> cycles;
  std::vector<bool> used(k.edge_count(), false);
  for (int label = 0; label < k.edge_count(); ++label) {
    if (k.edge(label).is_loop()) {
      cycles.push_back({label});
      used[label] = true;
    }
  }

  auto next_edge = [&](Color c) {
    for (int label : k.out_labels(c)) {
      if (!used[label]) return label;
    }
    return -1;
  };

  // Walk by smallest unused labels; whenever the walk revisits a color on
  // the current path, the closed segment is a simple cycle and is peeled off.
  std::vector<int> position(k.colors(), -1);
  for (int seed = 0; seed < k.edge_count(); ++seed) {
    if (used[seed]) continue;
    std::vector<Color> path{k.edge(seed).from};
    std::vector<int> path_labels;
    position[path.front()] = 0;
    while (!path.empty()) {
      const int label = next_edge(path.back());
      if (label < 0) {
        // Only the path's first color can run out, and only with an empty path.
        position[path.back()] = -1;
        path.pop_back();
        continue;
      }
      used[label] = true;
      const Color head = k.edge(label).to;
      path_labels.push_back(label);
      if (position[head] >= 0) {
        const auto cut = static_cast<std::size_t>(position[head]);
        cycles.emplace_back(path_labels.begin() + static_cast<long>(cut), path_labels.end());
        path_labels.resize(cut);
        while (path.size() > cut + 1) {
          position[path.back()] = -1;
          path.pop_back();
        }
      } else {
        position[head] = static_cast<int>(path.size());
        path.push_back(head);
      }
    }
  }
  return cycles;
}

void apply_trail(ColoredRealization& r, int u, int u_prime, const Trail& trail) {
  r.swap_columns(u, u_prime, trail.labels);
}

}  // namespace halfreg
