#include "halfreg/kernel.hpp"

#include <algorithm>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "halfreg/constructor.hpp"
#include "halfreg/error.hpp"

namespace halfreg {

std::string_view to_string(Branch branch) {
  switch (branch) {
    case Branch::Lazy: return "Lazy";
    case Branch::CircuitII: return "CircuitII";
    case Branch::TripleII: return "TripleII";
    case Branch::CircuitIII: return "CircuitIII";
    case Branch::TripleIII: return "TripleIII";
    case Branch::IdentityBail: return "IdentityBail";
  }
  return "?";
}

std::string_view to_string(BailReason reason) {
  switch (reason) {
    case BailReason::None: return "None";
    case BailReason::TooFewRows: return "TooFewRows";
    case BailReason::NoNonLoopEdge: return "NoNonLoopEdge";
    case BailReason::PivotIsStart: return "PivotIsStart";
    case BailReason::BridgeHitsTarget: return "BridgeHitsTarget";
    case BailReason::EmptyQualification: return "EmptyQualification";
  }
  return "?";
}

int ReplaySource::choose(DecisionTag tag, std::span<const int> options) {
  if (next_ >= decisions_.size()) {
    throw Error(ErrorKind::NotReversible, "replay ran out of decisions");
  }
  const Decision& d = decisions_[next_++];
  if (d.tag != tag) {
    throw Error(ErrorKind::NotReversible,
                "decision " + std::to_string(next_ - 1) + " has the wrong kind");
  }
  if (std::find(options.begin(), options.end(), d.value) == options.end()) {
    throw Error(ErrorKind::NotReversible,
                "decision " + std::to_string(next_ - 1) + " value " + std::to_string(d.value) +
                    " is not available");
  }
  return d.value;
}

namespace {

constexpr int kMove = 1;
constexpr int kBranchII = 2;
constexpr int kBranchIII = 3;

// Routes trail steps through the decision source and records them.
class TaggedChooser final : public EdgeChooser {
 public:
  TaggedChooser(DecisionSource& source, DecisionTag tag, std::vector<Decision>& log)
      : source_(source), tag_(tag), log_(log) {}

  std::size_t choose(std::span<const int> available) override {
    const int label = source_.choose(tag_, available);
    log_.push_back({tag_, label});
    return static_cast<std::size_t>(std::find(available.begin(), available.end(), label) -
                                    available.begin());
  }

 private:
  DecisionSource& source_;
  DecisionTag tag_;
  std::vector<Decision>& log_;
};

std::vector<int> range(int first, int last) {
  std::vector<int> out(static_cast<std::size_t>(last - first + 1));
  std::iota(out.begin(), out.end(), first);
  return out;
}

class Proposer {
 public:
  Proposer(const ColoredRealization& g, DecisionSource& source) : source_(source) {
    t_.from = g;
    t_.proposed = g;
  }

  ProposalTrace run() {
    if (pick(DecisionTag::Lazy, {0, kMove}) != kMove) {
      t_.branch = Branch::Lazy;
      return std::move(t_);
    }
    const int branch = pick(DecisionTag::Branch, {kBranchII, kBranchIII});
    const ColoredRealization& g = t_.from;
    const int n = g.rows();
    const int m = g.cols();
    if (n < 2) return bail(BailReason::TooFewRows);

    std::vector<int> pairs;
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) {
        if (a != b) pairs.push_back(a * n + b);
      }
    }
    const int pair = pick(DecisionTag::Pair, pairs);
    const int a = pair / n;
    const int b = pair % n;
    t_.u = a;
    (branch == kBranchII ? t_.u_prime : t_.u_dprime) = b;

    t_.c0 = pick(DecisionTag::StartColor, range(0, g.colors() - 1));
    const std::size_t cut_index = t_.decisions.size();
    t_.cut = pick(DecisionTag::Cut, range(1, m));

    const ColorMultigraph k = build_aux(g, a, b);
    try {
      TaggedChooser chooser(source_, DecisionTag::LeadStep, t_.decisions);
      t_.lead = generate_trail(k, t_.c0, t_.c0, chooser, static_cast<std::size_t>(t_.cut));
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NoNonLoopEdge) throw;
      return bail(BailReason::NoNonLoopEdge);
    }
    p_ = reciprocal(static_cast<long>(n) * (n - 1)) * reciprocal(g.colors()) * t_.lead.probability;

    if (t_.lead.closed) {
      // Every cut l >= r yields the same circuit move; report the smallest.
      const int r = static_cast<int>(t_.lead.size());
      t_.cut = r;
      t_.decisions[cut_index].value = r;
      p_ *= fraction(m - r + 1, m);
      t_.branch = branch == kBranchII ? Branch::CircuitII : Branch::CircuitIII;
      t_.proposed.swap_columns(a, b, t_.lead.labels);
      t_.p_fwd = p_;
      return std::move(t_);
    }
    p_ *= reciprocal(m);
    if (n < 3) return bail(BailReason::TooFewRows);
    return branch == kBranchII ? triple_ii() : triple_iii();
  }

 private:
  int pick(DecisionTag tag, std::span<const int> options) {
    const int value = source_.choose(tag, options);
    t_.decisions.push_back({tag, value});
    return value;
  }
  int pick(DecisionTag tag, std::initializer_list<int> options) {
    return pick(tag, std::span<const int>(options.begin(), options.size()));
  }

  std::vector<int> other_rows(int x, int y) const {
    std::vector<int> rows;
    for (int r = 0; r < t_.from.rows(); ++r) {
      if (r != x && r != y) rows.push_back(r);
    }
    return rows;
  }

  Trail trail(const ColoredRealization& g, int row_a, int row_b, Color start, Color end,
              DecisionTag tag, std::size_t max_steps = kUnbounded) {
    TaggedChooser chooser(source_, tag, t_.decisions);
    return generate_trail(build_aux(g, row_a, row_b), start, end, chooser, max_steps);
  }

  ProposalTrace bail(BailReason reason) {
    t_.branch = Branch::IdentityBail;
    t_.bail = reason;
    t_.proposed = t_.from;
    t_.p_fwd = 0;
    return std::move(t_);
  }

  ProposalTrace triple_ii() {
    const int u = t_.u;
    const int up = t_.u_prime;
    const Color c0 = t_.c0;
    const Color c = t_.lead.end();
    t_.c = c;

    ColoredRealization g1 = t_.from;
    g1.swap_columns(u, up, t_.lead.labels);

    const int upp = pick(DecisionTag::ThirdRow, other_rows(u, up));
    t_.u_dprime = upp;
    p_ *= reciprocal(t_.from.rows() - 2);

    std::vector<int> cand;
    for (int v = 0; v < g1.cols(); ++v) {
      if (g1.color(u, v) == c) cand.push_back(v);
    }
    if (static_cast<int>(cand.size()) != t_.from.row_counts(u)[c] + 1) {
      throw std::logic_error("pivot candidates differ from d_c + 1");
    }
    const std::size_t pivot_index = t_.decisions.size();
    int v = pick(DecisionTag::Pivot, cand);
    const Color cp = g1.color(upp, v);
    t_.c_prime = cp;
    if (cp == c0) return bail(BailReason::PivotIsStart);

    ColoredRealization tilde = g1;
    if (cp != c) {
      p_ *= reciprocal(static_cast<long>(cand.size()));
      const int cols[] = {v};
      tilde.swap_columns(u, upp, cols);
    } else {
      // Every candidate where u'' also holds c leaves the state untouched;
      // they form one event reported at the smallest such column.
      long same = 0;
      int first = -1;
      for (int w : cand) {
        if (g1.color(upp, w) == c) {
          ++same;
          if (first < 0) first = w;
        }
      }
      p_ *= fraction(same, static_cast<long>(cand.size()));
      v = first;
      t_.decisions[pivot_index].value = v;
    }
    t_.pivot = v;

    t_.bridge = trail(tilde, up, upp, c0, c, DecisionTag::BridgeStep);
    const auto& seen = t_.bridge.colors;
    if (std::find(seen.begin() + 1, seen.end() - 1, cp) != seen.end() - 1) {
      return bail(BailReason::BridgeHitsTarget);
    }
    p_ *= t_.bridge.probability;
    ColoredRealization bar = tilde;
    bar.swap_columns(up, upp, t_.bridge.labels);

    t_.close = trail(bar, u, upp, cp, c0, DecisionTag::CloseStep);
    p_ *= t_.close.probability;
    t_.proposed = bar;
    t_.proposed.swap_columns(u, upp, t_.close.labels);
    t_.tilde = std::move(tilde);
    t_.bar = std::move(bar);
    t_.branch = Branch::TripleII;
    t_.p_fwd = p_;
    return std::move(t_);
  }

  ProposalTrace triple_iii() {
    const int u = t_.u;
    const int upp = t_.u_dprime;
    const Color c0 = t_.c0;
    const Color cp = t_.lead.end();
    t_.c_prime = cp;

    ColoredRealization bar = t_.from;
    bar.swap_columns(u, upp, t_.lead.labels);

    const int up = pick(DecisionTag::ThirdRow, other_rows(u, upp));
    t_.u_prime = up;
    p_ *= reciprocal(t_.from.rows() - 2);
    t_.bridge_cut = pick(DecisionTag::BridgeCut, range(1, t_.from.cols()));
    p_ *= reciprocal(t_.from.cols());

    t_.bridge = trail(bar, upp, up, c0, cp, DecisionTag::BridgeStep,
                      static_cast<std::size_t>(t_.bridge_cut));
    if (static_cast<int>(t_.bridge.size()) < t_.bridge_cut) {
      return bail(BailReason::EmptyQualification);
    }
    const Color x = t_.bridge.end();
    const auto& seen = t_.bridge.colors;
    if (std::find(seen.begin(), seen.end() - 1, x) != seen.end() - 1) {
      return bail(BailReason::EmptyQualification);
    }
    ColoredRealization tilde = bar;
    tilde.swap_columns(upp, up, t_.bridge.labels);
    std::vector<int> qualifying;
    for (int v = 0; v < tilde.cols(); ++v) {
      if (tilde.color(u, v) == cp && tilde.color(upp, v) == x) qualifying.push_back(v);
    }
    if (qualifying.empty()) return bail(BailReason::EmptyQualification);
    p_ *= t_.bridge.probability;

    const Color c = x;
    t_.c = c;
    ColoredRealization g1 = tilde;
    if (c != cp) {
      t_.pivot = pick(DecisionTag::Pivot, qualifying);
      p_ *= reciprocal(static_cast<long>(qualifying.size()));
      const int cols[] = {t_.pivot};
      g1.swap_columns(u, upp, cols);
    } else {
      t_.merge_pivot = qualifying.front();
    }

    t_.close = trail(g1, u, up, c, c0, DecisionTag::CloseStep);
    p_ *= t_.close.probability;
    t_.proposed = g1;
    t_.proposed.swap_columns(u, up, t_.close.labels);
    t_.tilde = std::move(tilde);
    t_.bar = std::move(bar);
    t_.branch = Branch::TripleIII;
    t_.p_fwd = p_;
    return std::move(t_);
  }

  DecisionSource& source_;
  ProposalTrace t_;
  Rational p_ = 1;
};

void append_steps(std::vector<Decision>& out, DecisionTag tag, const std::vector<int>& labels,
                  bool reversed) {
  if (reversed) {
    for (auto it = labels.rbegin(); it != labels.rend(); ++it) out.push_back({tag, *it});
  } else {
    for (int label : labels) out.push_back({tag, label});
  }
}

}  // namespace

ProposalTrace propose(const ColoredRealization& g, DecisionSource& source) {
  return Proposer(g, source).run();
}

std::vector<Decision> reverse_decisions(const ProposalTrace& t) {
  if (!t.is_move()) throw Error(ErrorKind::NotReversible, "identity traces have no paired move");
  const int n = t.from.rows();
  std::vector<Decision> out{{DecisionTag::Lazy, kMove}};
  switch (t.branch) {
    case Branch::CircuitII:
    case Branch::CircuitIII: {
      const bool ii = t.branch == Branch::CircuitII;
      out.push_back({DecisionTag::Branch, ii ? kBranchII : kBranchIII});
      out.push_back({DecisionTag::Pair, t.u * n + (ii ? t.u_prime : t.u_dprime)});
      out.push_back({DecisionTag::StartColor, t.c0});
      out.push_back({DecisionTag::Cut, t.cut});
      append_steps(out, DecisionTag::LeadStep, t.lead.labels, true);
      break;
    }
    case Branch::TripleII:
      out.push_back({DecisionTag::Branch, kBranchIII});
      out.push_back({DecisionTag::Pair, t.u * n + t.u_dprime});
      out.push_back({DecisionTag::StartColor, t.c0});
      out.push_back({DecisionTag::Cut, static_cast<int>(t.close.size())});
      append_steps(out, DecisionTag::LeadStep, t.close.labels, true);
      out.push_back({DecisionTag::ThirdRow, t.u_prime});
      out.push_back({DecisionTag::BridgeCut, static_cast<int>(t.bridge.size())});
      append_steps(out, DecisionTag::BridgeStep, t.bridge.labels, false);
      if (t.c != t.c_prime) out.push_back({DecisionTag::Pivot, t.pivot});
      append_steps(out, DecisionTag::CloseStep, t.lead.labels, true);
      break;
    case Branch::TripleIII:
      out.push_back({DecisionTag::Branch, kBranchII});
      out.push_back({DecisionTag::Pair, t.u * n + t.u_prime});
      out.push_back({DecisionTag::StartColor, t.c0});
      out.push_back({DecisionTag::Cut, static_cast<int>(t.close.size())});
      append_steps(out, DecisionTag::LeadStep, t.close.labels, true);
      out.push_back({DecisionTag::ThirdRow, t.u_dprime});
      out.push_back({DecisionTag::Pivot, t.c != t.c_prime ? t.pivot : t.merge_pivot});
      append_steps(out, DecisionTag::BridgeStep, t.bridge.labels, false);
      append_steps(out, DecisionTag::CloseStep, t.lead.labels, true);
      break;
    default:
      break;
  }
  return out;
}

ProposalTrace reverse_trace(const ProposalTrace& t) {
  const auto decisions = reverse_decisions(t);
  ReplaySource source(decisions);
  ProposalTrace back = propose(t.proposed, source);
  if (!source.exhausted()) throw Error(ErrorKind::NotReversible, "replay left decisions unused");
  if (!back.is_move()) {
    throw Error(ErrorKind::NotReversible,
                "paired move collapsed to " + std::string(to_string(back.bail)));
  }
  if (!(back.proposed == t.from)) throw Error(ErrorKind::NotReversible, "paired move misses the origin");
  return back;
}

void attach_reverse(ProposalTrace& t) {
  if (!t.is_move()) return;
  t.p_rev = reverse_trace(t).p_fwd;
  if (t.is_circuit() && t.p_rev != t.p_fwd) {
    throw Error(ErrorKind::NotReversible, "circuit reverse has a different probability");
  }
}

Rational acceptance_ratio(const ProposalTrace& t) {
  if (!t.is_triple()) return 1;
  return t.p_rev / t.p_fwd;
}

bool ratio_within_bounds(const Rational& ratio, int cols) {
  mpz_class m = cols;
  mpz_class m5;
  mpz_pow_ui(m5.get_mpz_t(), m.get_mpz_t(), 5);
  const Rational lower(mpz_class(2), m5 * m);
  return ratio >= lower && ratio <= Rational(m5);
}

template <class Engine>
StepResult mh_step(const ColoredRealization& g, Engine& rng, bool verify) {
  StepResult out;
  out.trace = propose(g, rng);
  if (!out.trace.is_move()) {
    out.state = g;
    out.accepted = true;
    return out;
  }
  attach_reverse(out.trace);
  out.ratio = acceptance_ratio(out.trace);
  if (verify) {
    const auto profile = g.row_counts(0);
    const auto& p = out.trace.proposed;
    for (int u = 0; u < p.rows(); ++u) {
      if (p.row_counts(u) != profile) throw std::logic_error("proposal breaks a row constraint");
    }
    if (out.trace.is_triple() && !ratio_within_bounds(out.ratio, g.cols())) {
      throw std::logic_error("triple-move ratio " + out.ratio.get_str() + " outside bounds");
    }
  }
  out.accepted = accept_with(out.ratio, rng);
  out.state = out.accepted ? out.trace.proposed : g;
  out.changed = out.accepted && !(out.trace.proposed == g);
  return out;
}

template StepResult mh_step<Rng>(const ColoredRealization&, Rng&, bool);

void Diagnostics::record(const StepResult& step) {
  ++total_steps;
  const auto& t = step.trace;
  switch (t.branch) {
    case Branch::Lazy: ++lazy_steps; break;
    case Branch::IdentityBail:
      ++identity_bails;
      ++bails_by_reason[static_cast<int>(t.bail)];
      if (t.bail == BailReason::EmptyQualification) ++empty_vprime;
      break;
    case Branch::CircuitII:
    case Branch::CircuitIII: ++circuit_moves; break;
    case Branch::TripleII:
    case Branch::TripleIII:
      ++triple_moves;
      if (!min_ratio || step.ratio < *min_ratio) min_ratio = step.ratio;
      if (!max_ratio || step.ratio > *max_ratio) max_ratio = step.ratio;
      break;
  }
  if (t.is_move() && step.accepted) ++accepted;
  if (step.changed) ++state_changes;
}

void Diagnostics::merge(const Diagnostics& other) {
  total_steps += other.total_steps;
  lazy_steps += other.lazy_steps;
  identity_bails += other.identity_bails;
  circuit_moves += other.circuit_moves;
  triple_moves += other.triple_moves;
  accepted += other.accepted;
  state_changes += other.state_changes;
  empty_vprime += other.empty_vprime;
  for (int i = 0; i < 6; ++i) bails_by_reason[i] += other.bails_by_reason[i];
  if (other.min_ratio && (!min_ratio || *other.min_ratio < *min_ratio)) min_ratio = other.min_ratio;
  if (other.max_ratio && (!max_ratio || *other.max_ratio > *max_ratio)) max_ratio = other.max_ratio;
}

ChainResult run_chain(const DegreeMatrix& matrix, const ChainConfig& config, const SampleSink& sink) {
  if (config.steps < 0 || config.burnin < 0 || config.thin < 1 || config.chains < 1) {
    throw Error(ErrorKind::Malformed, "steps and burnin must be >= 0, thin and chains >= 1");
  }
  ChainResult result;
  result.initial = construct_realization(matrix);
  result.per_chain.resize(static_cast<std::size_t>(config.chains));
  const bool verify = config.mode == ChainMode::ExactReplay;
  std::mutex sink_mutex;

  auto emit = [&](int chain, long t, const ColoredRealization& state) {
    if (!sink || !verify) return;
    if (t < config.burnin || (t - config.burnin) % config.thin != 0) return;
    std::lock_guard lock(sink_mutex);
    sink(chain, t, state);
  };
  auto run_one = [&](int chain) {
    Rng rng = chain_rng(config.seed, static_cast<std::uint64_t>(chain));
    Diagnostics& diag = result.per_chain[chain];
    ColoredRealization state = result.initial;
    emit(chain, 0, state);
    for (long t = 1; t <= config.steps; ++t) {
      StepResult step = mh_step(state, rng, verify);
      diag.record(step);
      state = std::move(step.state);
      emit(chain, t, state);
    }
  };

  if (config.chains == 1) {
    run_one(0);
  } else {
    std::vector<std::thread> workers;
    std::exception_ptr failure;
    std::mutex failure_mutex;
    for (int chain = 0; chain < config.chains; ++chain) {
      workers.emplace_back([&, chain] {
        try {
          run_one(chain);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      });
    }
    for (auto& w : workers) w.join();
    if (failure) std::rethrow_exception(failure);
  }
  for (const auto& d : result.per_chain) result.total.merge(d);
  return result;
}

}  // namespace halfreg
