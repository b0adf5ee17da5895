// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <chrono>
#include <cmath>
#include <deque>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <unordered_map>
#include <unordered_set>

#include "fixtures.hpp"
#include "halfreg/connectivity.hpp"
#include "halfreg/constructor.hpp"
#include "halfreg/kernel.hpp"
#include "halfreg/oracle.hpp"

namespace halfreg {
namespace {

using testing::latin_instance;

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void criterion(int id, const std::string& name, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!o.pass) ++failures;
  std::cout << (o.pass ? "PASS" : "FAIL") << "  " << id << ". " << name << ": " << o.detail
            << " [" << std::fixed << std::setprecision(1) << secs << " s]" << std::endl;
}

Outcome existence() {
  const ExistenceReport r = verify_existence_equivalence({3, 3, 3, 3});
  std::ostringstream s;
  s << r.matrices << " matrices, " << r.valid << " valid, " << r.realizable << " realizable, "
    << r.discrepancies.size() << " discrepancies";
  return {r.discrepancies.empty() && r.valid == r.realizable, s.str()};
}

Outcome constructor_soundness() {
  Rng rng(2024);
  int bad_check = 0;
  int bad_descent = 0;
  long reductions = 0;
  for (int i = 0; i < 200; ++i) {
    const DegreeMatrix m = testing::random_instance(rng, 8, 8, 5, i % 2 == 1);
    ConstructionLog log;
    const ColoredRealization r = construct_realization(m, &log);
    bad_check += !check_realization(extend_with_nonedge_color(m), r);
    const auto& seq = log.exceed_sequence;
    bool descending = !seq.empty() && seq.back() == 0;
    for (std::size_t j = 1; j < seq.size(); ++j) descending &= seq[j] < seq[j - 1];
    bad_descent += !descending;
    reductions += static_cast<long>(log.steps.size());
  }
  std::ostringstream s;
  s << "200 instances, " << reductions << " reduction steps, " << bad_check
    << " invalid outputs, " << bad_descent << " non-decreasing exceed sequences";
  return {bad_check == 0 && bad_descent == 0, s.str()};
}

struct KernelAudit {
  long proposals = 0;
  long moves = 0;
  long invalid = 0;
  long accepted_moves = 0;
  long reverse_failures = 0;
  long circuit_mismatch = 0;
  long ratio_violations = 0;
  long triples = 0;
  Rational min_ratio = 0;
  Rational max_ratio = 0;
};

// Chain of raw proposals with the MH accept step done here, so that every
// proposal and every accepted move is audited.
void audit_kernel(const DegreeMatrix& m, std::uint64_t seed, long proposals, KernelAudit& a) {
  Rng rng(seed);
  ColoredRealization g = construct_realization(m);
  for (long i = 0; i < proposals; ++i) {
    ProposalTrace t = propose(g, rng);
    ++a.proposals;
    if (!t.is_move()) continue;
    ++a.moves;
    if (!check_realization(m, t.proposed)) {
      ++a.invalid;
      continue;
    }
    Rational ratio = 1;
    try {
      const ProposalTrace back = reverse_trace(t);
      if (!(back.proposed == t.from)) throw std::runtime_error("reverse lands elsewhere");
      t.p_rev = back.p_fwd;
      ratio = acceptance_ratio(t);
    } catch (const std::exception&) {
      ++a.reverse_failures;
      continue;
    }
    if (!accept_with(ratio, rng)) continue;
    ++a.accepted_moves;
    if (t.is_circuit() && t.p_rev != t.p_fwd) ++a.circuit_mismatch;
    if (t.is_triple()) {
      if (a.triples == 0 || ratio < a.min_ratio) a.min_ratio = ratio;
      if (a.triples == 0 || ratio > a.max_ratio) a.max_ratio = ratio;
      ++a.triples;
      if (!ratio_within_bounds(ratio, m.cols())) ++a.ratio_violations;
    }
    g = t.proposed;
  }
}

KernelAudit& kernel_audit() {
  static KernelAudit audit;
  return audit;
}

Outcome kernel_validity() {
  KernelAudit& a = kernel_audit();
  audit_kernel(latin_instance(5), 31, 100000, a);
  Rng rng(32);
  const DegreeMatrix six = testing::random_instance(rng, 6, 6, 3);
  audit_kernel(six, 33, 100000, a);
  std::ostringstream s;
  s << a.proposals << " proposals (5x5 Latin, 6x6 k=3 d=[" << six.row_degree(0) << ","
    << six.row_degree(1) << "," << six.row_degree(2) << "]), " << a.moves << " non-identity, "
    << a.invalid << " invalid";
  return {a.invalid == 0 && a.moves > 0, s.str()};
}

Outcome reversibility() {
  const KernelAudit& a = kernel_audit();
  std::ostringstream s;
  s << a.accepted_moves << " accepted moves, " << a.reverse_failures << " reverse failures, "
    << a.circuit_mismatch << " circuit mismatches, " << a.triples << " triple ratios in ["
    << a.min_ratio.get_str() << ", " << a.max_ratio.get_str() << "], " << a.ratio_violations
    << " outside [2/m^6, m^5]";
  return {a.accepted_moves > 0 && a.reverse_failures == 0 && a.circuit_mismatch == 0 &&
              a.ratio_violations == 0,
          s.str()};
}

Outcome waiting_time() {
  ChainConfig config;
  config.seed = 5;
  config.steps = 1000000;
  config.mode = ChainMode::DiagnosticsOnly;
  const ChainResult r = run_chain(latin_instance(4), config);
  const double fraction = static_cast<double>(r.total.state_changes) / config.steps;
  std::ostringstream s;
  s << r.total.state_changes << " state changes in " << config.steps << " steps, fraction "
    << std::setprecision(5) << fraction << " vs bound " << 1.0 / 2048;
  return {fraction >= 1.0 / 2048, s.str()};
}

Outcome uniformity() {
  const long states = enumerate(latin_instance(4), true).count;
  ChainConfig config;
  config.seed = 6;
  config.burnin = 10000;
  config.steps = config.burnin + 1000000;
  config.thin = 10;
  std::unordered_map<std::string, long> counts;
  run_chain(latin_instance(4), config, [&](int, long, const ColoredRealization& s) {
    ++counts[s.matrix().encode(s.colors())];
  });
  const UniformityStats u = uniformity_test(counts, states);
  std::ostringstream s;
  s << u.samples << " samples over " << states << " oracle states (" << counts.size()
    << " seen), chi2 " << std::setprecision(2) << std::fixed << u.chi2 << ", p "
    << std::setprecision(4) << u.p_value << ", TV " << u.tv_distance;
  return {u.p_value >= 0.001 && u.tv_distance <= 0.05, s.str()};
}

bool valid_path(const ColoredRealization& a, const ColoredRealization& b, const DegreeMatrix& m,
                long& steps) {
  ColoredRealization cur = a;
  for (const auto& step : transformation_path(a, b)) {
    if (step.touched_rows.size() > 3) return false;
    cur = apply_step(cur, step);
    if (!check_realization(m, cur)) return false;
    ++steps;
  }
  return cur == b;
}

Outcome connectivity() {
  Rng rng(7);
  const DegreeMatrix five = latin_instance(5);
  const DegreeMatrix six = testing::random_instance(rng, 6, 6, 3);
  int failed = 0;
  long steps = 0;
  for (const DegreeMatrix* m : {&five, &six}) {
    for (int i = 0; i < 100; ++i) {
      const ColoredRealization a = testing::random_realization(*m, rng, 200);
      const ColoredRealization b = testing::random_realization(*m, rng, 200);
      failed += !valid_path(a, b, *m, steps);
    }
  }
  const auto squares = testing::all_realizations(latin_instance(4));
  std::unordered_set<std::string> seen{squares[0].matrix().encode(4)};
  std::deque<ColoredRealization> queue{squares[0]};
  while (!queue.empty()) {
    const ColoredRealization cur = std::move(queue.front());
    queue.pop_front();
    testing::for_each_row_neighbor(cur, 3, [&](const ColoredRealization& next) {
      if (seen.insert(next.matrix().encode(4)).second) queue.push_back(next);
    });
  }
  std::ostringstream s;
  s << "200 pairs, " << steps << " steps, " << failed << " failed paths; BFS reached "
    << seen.size() << " of " << squares.size() << " 4x4 states";
  return {failed == 0 && seen.size() == squares.size() && squares.size() == 576, s.str()};
}

Outcome trail_law() {
  const ColorMultigraph k = testing::three_color_fixture();
  const auto law = testing::trail_law(k, 0, 2);
  const long draws = 100000;
  Rng rng(8);
  std::map<std::vector<int>, long> seen;
  for (long i = 0; i < draws; ++i) ++seen[sample_trail(k, 0, 2, rng).labels];
  int outside = 0;
  double worst = 0;
  for (const auto& [labels, p] : law) {
    const double q = p.get_d();
    const double sigma = std::sqrt(q * (1 - q) / draws);
    const double z = std::abs(static_cast<double>(seen[labels]) / draws - q) / sigma;
    worst = std::max(worst, z);
    outside += z > 3;
  }
  const bool same_support = seen.size() == law.size();
  std::ostringstream s;
  s << law.size() << " trails, " << draws << " draws, max |z| " << std::setprecision(2)
    << std::fixed << worst << ", " << outside << " beyond 3 sigma"
    << (same_support ? "" : ", sampled a trail outside the exhaustive set");
  return {outside == 0 && same_support, s.str()};
}

}  // namespace
}  // namespace halfreg

int main() {
  using namespace halfreg;
  criterion(1, "existence equivalence", existence);
  criterion(2, "constructor soundness", constructor_soundness);
  criterion(3, "kernel validity", kernel_validity);
  criterion(4, "reversibility and ratio bounds", reversibility);
  criterion(5, "waiting-time bound", waiting_time);
  criterion(6, "uniformity on 4x4 Latin squares", uniformity);
  criterion(7, "connectivity", connectivity);
  criterion(8, "trail-law fidelity", trail_law);
  return failures == 0 ? 0 : 1;
}
