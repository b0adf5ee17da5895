#pragma once

#include <concepts>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include "halfreg/aux_graph.hpp"
#include "halfreg/degree_matrix.hpp"
#include "halfreg/rational.hpp"
#include "halfreg/realization.hpp"
#include "halfreg/rng.hpp"

namespace halfreg {

enum class Branch { Lazy, CircuitII, TripleII, CircuitIII, TripleIII, IdentityBail };

// Why a proposal collapsed to the identity. Each of these either has no
// valid move at all or has a move whose paired reverse could not be drawn.
enum class BailReason {
  None,
  TooFewRows,          // fewer rows than the branch needs
  NoNonLoopEdge,       // the start color has only loops in K(G,u,u')
  PivotIsStart,        // II: the pivot row holds c0 at the pivot column
  BridgeHitsTarget,    // II: the bridge trail passes through c' early
  EmptyQualification,  // III: the truncated bridge does not qualify
};

std::string_view to_string(Branch branch);
std::string_view to_string(BailReason reason);

enum class DecisionTag {
  Lazy,
  Branch,
  Pair,
  StartColor,
  Cut,
  LeadStep,
  ThirdRow,
  Pivot,
  BridgeCut,
  BridgeStep,
  CloseStep,
};

struct Decision {
  DecisionTag tag;
  int value;

  bool operator==(const Decision&) const = default;
};

/// Supplies every random choice the proposal makes. `options` is non-empty;
/// the returned value must be one of them.
class DecisionSource {
 public:
  virtual ~DecisionSource() = default;
  virtual int choose(DecisionTag tag, std::span<const int> options) = 0;
};

template <class Engine>
class SamplingSource final : public DecisionSource {
 public:
  explicit SamplingSource(Engine& rng) : rng_(rng) {}
  int choose(DecisionTag, std::span<const int> options) override {
    return options[std::uniform_int_distribution<std::size_t>(0, options.size() - 1)(rng_)];
  }

 private:
  Engine& rng_;
};

/// Feeds back a recorded decision list. Any mismatch in tag or value raises
/// Error(NotReversible).
class ReplaySource final : public DecisionSource {
 public:
  explicit ReplaySource(std::span<const Decision> decisions) : decisions_(decisions) {}
  int choose(DecisionTag tag, std::span<const int> options) override;
  bool exhausted() const noexcept { return next_ == decisions_.size(); }

 private:
  std::span<const Decision> decisions_;
  std::size_t next_ = 0;
};

/// Everything one proposal drew and built. Rows follow the branch's own
/// naming: in II the lead pair is (u, u') and u'' is the pivot row; in III
/// the lead pair is (u, u'') and u' is the third row.
struct ProposalTrace {
  Branch branch = Branch::Lazy;
  BailReason bail = BailReason::None;

  ColoredRealization from;
  ColoredRealization proposed;
  ColoredRealization tilde;  // II: after the pivot swap; III: after the bridge
  ColoredRealization bar;    // II: after the bridge; III: after the lead prefix

  int u = -1;
  int u_prime = -1;
  int u_dprime = -1;
  Color c0 = -1;
  Color c = -1;
  Color c_prime = -1;
  int cut = 0;         // l; for circuits, the circuit length
  int bridge_cut = 0;  // III only
  int pivot = -1;      // II: v; III: v'' (-1 when no swap happened)
  int merge_pivot = -1;  // III with c == c': the column II would report as v

  Trail lead;    // T or T'
  Trail bridge;  // T1 or T1''
  Trail close;   // T2 or T2'

  std::vector<Decision> decisions;
  Rational p_fwd = 0;
  Rational p_rev = 0;

  bool is_move() const noexcept {
    return branch != Branch::Lazy && branch != Branch::IdentityBail;
  }
  bool is_circuit() const noexcept {
    return branch == Branch::CircuitII || branch == Branch::CircuitIII;
  }
  bool is_triple() const noexcept {
    return branch == Branch::TripleII || branch == Branch::TripleIII;
  }
};

/// One run of the three-branch proposal. p_fwd is the exact probability of
/// the drawn event with the constant 1/2 and 1/4 branch factors left out.
/// Identity outcomes (Lazy, IdentityBail) leave p_fwd = 0.
ProposalTrace propose(const ColoredRealization& g, DecisionSource& source);

template <class Engine>
  requires(!std::derived_from<Engine, DecisionSource>)
ProposalTrace propose(const ColoredRealization& g, Engine& rng) {
  SamplingSource<Engine> source(rng);
  return propose(g, source);
}

/// Decision list of the paired reverse move (II <-> III, circuit <-> the
/// reversed circuit) for a move trace.
std::vector<Decision> reverse_decisions(const ProposalTrace& t);

/// Replays the paired reverse move on t.proposed. Throws
/// Error(NotReversible) unless the replay consumes exactly the reverse
/// decisions and lands on t.from.
ProposalTrace reverse_trace(const ProposalTrace& t);

/// Fills t.p_rev from the paired reverse move. Circuits additionally
/// require p_rev == p_fwd.
void attach_reverse(ProposalTrace& t);

/// p_rev / p_fwd; 1 for circuits and identities. Requires attach_reverse.
Rational acceptance_ratio(const ProposalTrace& t);

/// The asserted per-move bracket [2/m^6, m^5] for triple-move ratios.
bool ratio_within_bounds(const Rational& ratio, int cols);

/// Exact Bernoulli(min(1, ratio)) trial from a 53-bit uniform draw.
template <class Engine>
bool accept_with(const Rational& ratio, Engine& rng) {
  if (ratio >= 1) return true;
  const std::uint64_t draw = rng() >> 11;
  mpz_class lhs = mpz_class(static_cast<unsigned long>(draw)) * ratio.get_den();
  mpz_class rhs = ratio.get_num();
  rhs <<= 53;
  return lhs < rhs;
}

struct StepResult {
  ColoredRealization state;
  bool accepted = false;
  bool changed = false;
  Rational ratio = 1;
  ProposalTrace trace;
};

/// One Metropolis-Hastings step towards the uniform distribution. With
/// `verify`, the proposal must realize the same instance as `g` and
/// triple-move ratios must lie within ratio_within_bounds.
template <class Engine>
StepResult mh_step(const ColoredRealization& g, Engine& rng, bool verify = true);

enum class ChainMode { ExactReplay, DiagnosticsOnly };

struct ChainConfig {
  std::uint64_t seed = 1;
  long steps = 0;
  long burnin = 0;
  long thin = 1;
  int chains = 1;
  ChainMode mode = ChainMode::ExactReplay;
};

struct Diagnostics {
  long total_steps = 0;
  long lazy_steps = 0;
  long identity_bails = 0;
  long circuit_moves = 0;
  long triple_moves = 0;
  long accepted = 0;
  long state_changes = 0;
  long empty_vprime = 0;
  long bails_by_reason[6] = {};
  std::optional<Rational> min_ratio;
  std::optional<Rational> max_ratio;

  void record(const StepResult& step);
  void merge(const Diagnostics& other);
  bool consistent() const noexcept {
    return lazy_steps + identity_bails + circuit_moves + triple_moves == total_steps;
  }
};

/// Receives emitted states. Calls are serialized across chains.
using SampleSink = std::function<void(int chain, long step, const ColoredRealization& state)>;

struct ChainResult {
  ColoredRealization initial;
  std::vector<Diagnostics> per_chain;
  Diagnostics total;
};

/// Runs config.chains independent chains in parallel from the constructed
/// realization of `matrix`. State t (t = 0 is the start) is emitted when
/// t >= burnin and (t - burnin) % thin == 0.
/// ExactReplay verifies every proposal; DiagnosticsOnly skips the checks
/// and the sink.
/// Throws Error(InvalidMatrix) when `matrix` fails validation and
/// Error(Malformed) for a config with steps < 0, burnin < 0, thin < 1 or
/// chains < 1.
ChainResult run_chain(const DegreeMatrix& matrix, const ChainConfig& config,
                      const SampleSink& sink = {});

// Explicit instantiation for the library's engine.
extern template StepResult mh_step<Rng>(const ColoredRealization&, Rng&, bool);

}  // namespace halfreg
