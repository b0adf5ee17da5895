#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <set>

#include "fixtures.hpp"
#include "halfreg/constructor.hpp"
#include "halfreg/error.hpp"
#include "halfreg/kernel.hpp"
#include "halfreg/oracle.hpp"
#include "odometer.hpp"

namespace halfreg {

std::ostream& operator<<(std::ostream& os, const Decision& d) {
  return os << static_cast<int>(d.tag) << ':' << d.value;
}

namespace {

using testing::latin_instance;
using testing::OdometerSource;

Rational min_one(const Rational& q) { return q < 1 ? q : Rational(1); }

TEST(Propose, LazyFractionIsHalf) {
  Rng rng(1);
  const ColoredRealization g = construct_realization(latin_instance(4));
  const int calls = 10000;
  int lazy = 0;
  for (int i = 0; i < calls; ++i) lazy += propose(g, rng).branch == Branch::Lazy;
  const double sigma = std::sqrt(0.25 / calls);
  EXPECT_NEAR(static_cast<double>(lazy) / calls, 0.5, 3 * sigma);
}

TEST(Propose, MovesAreRealizations) {
  Rng rng(2);
  const DegreeMatrix m = latin_instance(4);
  ColoredRealization g = construct_realization(m);
  int moves = 0;
  while (moves < 20000) {
    const ProposalTrace t = propose(g, rng);
    if (!t.is_move()) continue;
    ++moves;
    ASSERT_TRUE(check_realization(m, t.proposed));
    ASSERT_GT(t.p_fwd, 0);
    g = t.proposed;
  }
}

TEST(Propose, LoopOnlyStartColorBails) {
  // Rows 0 and 1 agree everywhere, so K(G,0,1) is all loops.
  const ColoredRealization g(ColorMatrix({{0, 1}, {0, 1}, {1, 0}}), 2);
  const std::vector<Decision> script{{DecisionTag::Lazy, 1},
                                     {DecisionTag::Branch, 2},
                                     {DecisionTag::Pair, 0 * 3 + 1},
                                     {DecisionTag::StartColor, 0},
                                     {DecisionTag::Cut, 1}};
  ReplaySource source(script);
  const ProposalTrace t = propose(g, source);
  EXPECT_EQ(t.branch, Branch::IdentityBail);
  EXPECT_EQ(t.bail, BailReason::NoNonLoopEdge);
  EXPECT_EQ(t.proposed, g);
  EXPECT_TRUE(source.exhausted());
}

TEST(Propose, TwoRowsOnlyCircuits) {
  Rng rng(3);
  const ColoredRealization g = construct_realization(latin_instance(2));
  for (int i = 0; i < 500; ++i) {
    const ProposalTrace t = propose(g, rng);
    EXPECT_TRUE(t.branch == Branch::Lazy || t.is_circuit() ||
                (t.branch == Branch::IdentityBail && t.bail == BailReason::TooFewRows));
  }
}

// Groups every decision path of one proposal from g by its recorded
// decisions and checks that each group's total weight is the trace's p_fwd
// times the omitted 1/4 branch factor.
void check_path_bookkeeping(const ColoredRealization& g) {
  OdometerSource src;
  std::map<std::vector<std::pair<int, int>>, Rational> mass;
  std::map<std::vector<std::pair<int, int>>, Rational> reported;
  Rational total = 0;
  do {
    src.rewind();
    const ProposalTrace t = propose(g, src);
    const Rational w = src.weight();
    total += w;
    if (!t.is_move()) continue;
    std::vector<std::pair<int, int>> key;
    for (const auto& d : t.decisions) key.emplace_back(static_cast<int>(d.tag), d.value);
    mass[key] += w;
    auto [it, fresh] = reported.try_emplace(key, t.p_fwd);
    ASSERT_TRUE(fresh || it->second == t.p_fwd);
  } while (src.advance());
  EXPECT_EQ(total, 1);
  ASSERT_FALSE(mass.empty());
  for (const auto& [key, w] : mass) EXPECT_EQ(w, reported[key] / 4);
}

TEST(Propose, ForwardProbabilityMatchesPathMassLatinThree) {
  for (const auto& g : testing::all_realizations(latin_instance(3))) check_path_bookkeeping(g);
}

TEST(Propose, ForwardProbabilityMatchesPathMassRectangular) {
  Rng rng(4);
  for (int i = 0; i < 4; ++i) {
    const DegreeMatrix m = testing::random_instance(rng, 4, 3, 3);
    check_path_bookkeeping(testing::random_realization(m, rng, 10));
  }
}

// Exact transition matrix of mh_step over a whole state space.
struct Transitions {
  std::vector<ColoredRealization> states;
  std::map<std::string, int> index;
  std::vector<std::vector<Rational>> p;
};

Transitions exact_transitions(const DegreeMatrix& m) {
  Transitions tr;
  tr.states = testing::all_realizations(m);
  const int s = static_cast<int>(tr.states.size());
  for (int i = 0; i < s; ++i) tr.index[tr.states[i].matrix().encode(m.colors())] = i;
  tr.p.assign(s, std::vector<Rational>(s, Rational(0)));
  for (int i = 0; i < s; ++i) {
    OdometerSource src;
    do {
      src.rewind();
      ProposalTrace t = propose(tr.states[i], src);
      const Rational w = src.weight();
      if (!t.is_move()) {
        tr.p[i][i] += w;
        continue;
      }
      attach_reverse(t);
      const Rational a = min_one(acceptance_ratio(t));
      const int j = tr.index.at(t.proposed.matrix().encode(m.colors()));
      tr.p[i][j] += w * a;
      tr.p[i][i] += w * (1 - a);
    } while (src.advance());
  }
  return tr;
}

void check_detailed_balance(const DegreeMatrix& m) {
  const Transitions tr = exact_transitions(m);
  const std::size_t s = tr.states.size();
  ASSERT_GE(s, 2u);
  for (std::size_t i = 0; i < s; ++i) {
    Rational row = 0;
    for (std::size_t j = 0; j < s; ++j) {
      row += tr.p[i][j];
      // Uniform target: detailed balance is symmetry of the kernel.
      EXPECT_EQ(tr.p[i][j], tr.p[j][i]) << "states " << i << " and " << j;
    }
    EXPECT_EQ(row, 1);
  }
  // Irreducible: every state reaches every other.
  std::vector<bool> seen(s, false);
  std::vector<std::size_t> stack{0};
  seen[0] = true;
  while (!stack.empty()) {
    const std::size_t i = stack.back();
    stack.pop_back();
    for (std::size_t j = 0; j < s; ++j) {
      if (!seen[j] && tr.p[i][j] > 0) {
        seen[j] = true;
        stack.push_back(j);
      }
    }
  }
  EXPECT_EQ(std::count(seen.begin(), seen.end(), true), static_cast<long>(s));
}

TEST(MhKernel, ExactDetailedBalanceLatinThree) { check_detailed_balance(latin_instance(3)); }

TEST(MhKernel, ExactDetailedBalanceSmallInstances) {
  check_detailed_balance(DegreeMatrix(3, 4, {2, 1, 1}, {{2, 2, 1, 1}, {1, 1, 0, 1}, {0, 0, 2, 1}}));
  check_detailed_balance(DegreeMatrix(4, 3, {1, 2}, {{2, 1, 1}, {2, 3, 3}}));
  check_detailed_balance(DegreeMatrix(3, 3, {1, 1, 1}, {{2, 1, 0}, {1, 1, 1}, {0, 1, 2}}));
}

TEST(Reverse, PairingIsAnInvolution) {
  Rng rng(5);
  int moves = 0;
  for (int trial = 0; trial < 40; ++trial) {
    const DegreeMatrix m = testing::random_instance(rng, 6, 6, 4, false);
    if (m.rows() < 2) continue;
    ColoredRealization g = testing::random_realization(m, rng, 10);
    for (int i = 0; i < 300; ++i) {
      ProposalTrace t = propose(g, rng);
      if (!t.is_move()) continue;
      ++moves;
      const ProposalTrace back = reverse_trace(t);
      ASSERT_TRUE(back.is_move());
      EXPECT_EQ(back.proposed, t.from);
      EXPECT_EQ(back.decisions, reverse_decisions(t));
      EXPECT_EQ(reverse_decisions(back), t.decisions);
      EXPECT_EQ(back.is_circuit(), t.is_circuit());
      if (t.branch == Branch::TripleII) EXPECT_EQ(back.branch, Branch::TripleIII);
      if (t.branch == Branch::TripleIII) EXPECT_EQ(back.branch, Branch::TripleII);
      attach_reverse(t);
      EXPECT_EQ(t.p_rev, back.p_fwd);
      if (t.is_circuit()) {
        EXPECT_EQ(t.p_rev, t.p_fwd);
        EXPECT_EQ(acceptance_ratio(t), 1);
      } else {
        EXPECT_TRUE(ratio_within_bounds(acceptance_ratio(t), m.cols()));
      }
      g = t.proposed;
    }
  }
  EXPECT_GT(moves, 1000);
}

TEST(Reverse, IdentityHasNoPair) {
  Rng rng(6);
  const ColoredRealization g = construct_realization(latin_instance(3));
  ProposalTrace t;
  do t = propose(g, rng);
  while (t.branch != Branch::Lazy);
  try {
    reverse_trace(t);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotReversible);
  }
}

TEST(Ratio, BoundsAreInclusive) {
  EXPECT_TRUE(ratio_within_bounds(fraction(2, 4096), 4));
  EXPECT_FALSE(ratio_within_bounds(fraction(1, 4096), 4));
  EXPECT_TRUE(ratio_within_bounds(1024, 4));
  EXPECT_FALSE(ratio_within_bounds(1025, 4));
}

TEST(Ratio, TripleRatiosOnLatinFour) {
  Rng rng(7);
  ColoredRealization g = construct_realization(latin_instance(4));
  int triples = 0;
  while (triples < 3000) {
    ProposalTrace t = propose(g, rng);
    if (!t.is_triple()) continue;
    ++triples;
    attach_reverse(t);
    EXPECT_GE(acceptance_ratio(t), fraction(2, 4096));
    EXPECT_LE(acceptance_ratio(t), 1024);
    g = t.proposed;
  }
}

TEST(AcceptWith, ExactBernoulli) {
  Rng rng(8);
  EXPECT_TRUE(accept_with(Rational(1), rng));
  EXPECT_TRUE(accept_with(Rational(7, 3), rng));
  EXPECT_FALSE(accept_with(Rational(0), rng));
  const int draws = 40000;
  int hits = 0;
  for (int i = 0; i < draws; ++i) hits += accept_with(fraction(1, 3), rng);
  EXPECT_NEAR(static_cast<double>(hits) / draws, 1.0 / 3, 3 * std::sqrt(2.0 / 9 / draws));
}

TEST(MhStep, LazyAndCircuitBehaviour) {
  Rng rng(9);
  const ColoredRealization g = construct_realization(latin_instance(4));
  bool lazy = false;
  bool circuit = false;
  for (int i = 0; i < 2000 && !(lazy && circuit); ++i) {
    const StepResult step = mh_step(g, rng);
    if (step.trace.branch == Branch::Lazy) {
      lazy = true;
      EXPECT_EQ(step.state, g);
      EXPECT_FALSE(step.changed);
    }
    if (step.trace.is_circuit()) {
      circuit = true;
      EXPECT_TRUE(step.accepted);
      EXPECT_EQ(step.ratio, 1);
      EXPECT_EQ(step.state, step.trace.proposed);
    }
  }
  EXPECT_TRUE(lazy);
  EXPECT_TRUE(circuit);
}

TEST(MhStep, ChangeFrequencyAboveWaitingBound) {
  Rng rng(10);
  ColoredRealization g = construct_realization(latin_instance(4));
  const int steps = 100000;
  int changed = 0;
  for (int i = 0; i < steps; ++i) {
    StepResult step = mh_step(g, rng, false);
    changed += step.changed;
    g = std::move(step.state);
  }
  EXPECT_GE(static_cast<double>(changed) / steps, 1.0 / 2048);
}

TEST(RunChain, ZeroStepsEmitsInitialState) {
  ChainConfig config;
  config.steps = 0;
  std::vector<ColoredRealization> seen;
  const ChainResult result = run_chain(latin_instance(4), config,
                                       [&](int, long, const ColoredRealization& s) { seen.push_back(s); });
  ASSERT_EQ(seen.size(), 1u);
  EXPECT_EQ(seen[0], construct_realization(latin_instance(4)));
  EXPECT_EQ(result.initial, seen[0]);
  EXPECT_EQ(result.total.total_steps, 0);
}

std::vector<std::tuple<int, long, std::string>> stream(const DegreeMatrix& m, ChainConfig config) {
  std::vector<std::tuple<int, long, std::string>> out;
  run_chain(m, config, [&](int chain, long step, const ColoredRealization& s) {
    out.emplace_back(chain, step, s.matrix().encode(s.colors()));
  });
  std::sort(out.begin(), out.end());
  return out;
}

TEST(RunChain, DeterministicGivenSeed) {
  ChainConfig config;
  config.seed = 99;
  config.steps = 2000;
  config.chains = 3;
  const auto a = stream(latin_instance(4), config);
  const auto b = stream(latin_instance(4), config);
  EXPECT_EQ(a, b);
  config.seed = 100;
  EXPECT_NE(a, stream(latin_instance(4), config));
}

TEST(RunChain, BurninAndThin) {
  ChainConfig config;
  config.steps = 100;
  config.burnin = 10;
  config.thin = 7;
  std::vector<long> steps;
  run_chain(latin_instance(3), config, [&](int, long step, const ColoredRealization&) { steps.push_back(step); });
  std::vector<long> want;
  for (long t = 10; t <= 100; t += 7) want.push_back(t);
  EXPECT_EQ(steps, want);
}

TEST(RunChain, DiagnosticsAreConsistent) {
  ChainConfig config;
  config.steps = 5000;
  config.chains = 2;
  const ChainResult r = run_chain(latin_instance(5), config);
  ASSERT_EQ(r.per_chain.size(), 2u);
  EXPECT_TRUE(r.total.consistent());
  EXPECT_EQ(r.total.total_steps, 10000);
  EXPECT_EQ(r.per_chain[0].total_steps + r.per_chain[1].total_steps, r.total.total_steps);
  long bails = 0;
  for (long b : r.total.bails_by_reason) bails += b;
  EXPECT_EQ(bails, r.total.identity_bails);
  EXPECT_LE(r.total.state_changes, r.total.accepted);
  ASSERT_TRUE(r.total.min_ratio.has_value());
  EXPECT_TRUE(ratio_within_bounds(*r.total.min_ratio, 5));
  EXPECT_TRUE(ratio_within_bounds(*r.total.max_ratio, 5));
}

TEST(RunChain, DiagnosticsOnlySkipsSink) {
  ChainConfig config;
  config.steps = 100;
  config.mode = ChainMode::DiagnosticsOnly;
  int calls = 0;
  const ChainResult r =
      run_chain(latin_instance(3), config, [&](int, long, const ColoredRealization&) { ++calls; });
  EXPECT_EQ(calls, 0);
  EXPECT_EQ(r.total.total_steps, 100);
}

TEST(RunChain, RejectsBadInput) {
  auto kind = [](const DegreeMatrix& m, ChainConfig c) {
    try {
      run_chain(m, c);
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::IoError;
  };
  ChainConfig ok;
  ok.steps = 10;
  EXPECT_EQ(kind(DegreeMatrix(2, 2, {1}, {{1, 2}}), ok), ErrorKind::InvalidMatrix);
  ChainConfig bad = ok;
  bad.thin = 0;
  EXPECT_EQ(kind(latin_instance(3), bad), ErrorKind::Malformed);
  bad = ok;
  bad.steps = -1;
  EXPECT_EQ(kind(latin_instance(3), bad), ErrorKind::Malformed);
}

TEST(RunChain, NonEqualityInstanceEmitsExtendedStates) {
  const DegreeMatrix m(3, 4, {1, 1}, {{1, 1, 1, 0}, {0, 1, 1, 1}});
  ChainConfig config;
  config.steps = 500;
  const DegreeMatrix ext = extend_with_nonedge_color(m);
  run_chain(m, config, [&](int, long, const ColoredRealization& s) {
    EXPECT_TRUE(check_realization(ext, s));
  });
}

}  // namespace
}  // namespace halfreg
