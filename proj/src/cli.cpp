#include "halfreg/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <unordered_map>

#include "halfreg/connectivity.hpp"
#include "halfreg/constructor.hpp"
#include "halfreg/error.hpp"
#include "halfreg/io.hpp"
#include "halfreg/kernel.hpp"
#include "halfreg/oracle.hpp"

namespace halfreg::cli {

namespace {

using io::json;

struct Options {
  std::string matrix;
  std::string out;
  std::string format = "json";
  bool log = false;

  long steps = 1000;
  long burnin = 0;
  long thin = 1;
  int chains = 1;
  std::uint64_t seed = 1;
  std::string diagnostics;

  bool count_only = false;

  std::string from;
  std::string to;

  std::string samples;
  long states = 0;
  std::string space_matrix;
};

// Writes to the --out file when given, else to the stream.
class Output {
 public:
  Output(const std::string& path, std::ostream& fallback) : path_(path), fallback_(fallback) {}

  std::ostream& stream() { return path_.empty() ? fallback_ : buffer_; }

  void finish() {
    if (!path_.empty()) io::write_file(path_, buffer_.str());
  }

 private:
  std::string path_;
  std::ostream& fallback_;
  std::ostringstream buffer_;
};

int cmd_check(const Options& o, std::ostream& out) {
  const DegreeMatrix matrix = io::parse_matrix_file(o.matrix);
  const ValidationReport report = validate(matrix);
  if (!report.ok) {
    out << "invalid instance\n";
    for (const auto& v : report.violations) out << "  " << v.describe() << '\n';
    return kInvalidInstance;
  }
  out << (report.equality ? "valid: equality case\n"
                          : "valid: a non-edge color absorbs the slack\n");
  return kOk;
}

int cmd_construct(const Options& o, std::ostream& out) {
  const DegreeMatrix matrix = io::parse_matrix_file(o.matrix);
  ConstructionLog log;
  const ColoredRealization r = construct_realization(matrix, &log);
  Output sink(o.out, out);
  if (o.format == "csv") {
    sink.stream() << io::to_csv(r);
  } else {
    json doc = io::to_json(r);
    if (o.log) doc["exceed_sequence"] = log.exceed_sequence;
    sink.stream() << doc.dump() << '\n';
  }
  sink.finish();
  return kOk;
}

json diagnostics_json(const Diagnostics& d) {
  json reasons = json::object();
  for (int i = 1; i < 6; ++i) {
    reasons[std::string(to_string(static_cast<BailReason>(i)))] = d.bails_by_reason[i];
  }
  auto ratio = [](const std::optional<Rational>& q) {
    return q ? json(q->get_str()) : json(nullptr);
  };
  return json{{"totalSteps", d.total_steps},
              {"lazySteps", d.lazy_steps},
              {"identityBails", d.identity_bails},
              {"circuitMoves", d.circuit_moves},
              {"tripleMoves", d.triple_moves},
              {"accepted", d.accepted},
              {"stateChanges", d.state_changes},
              {"emptyVPrime", d.empty_vprime},
              {"bailsByReason", reasons},
              {"minRatio", ratio(d.min_ratio)},
              {"maxRatio", ratio(d.max_ratio)},
              {"omittedFactors", {{"lazy", "1/2"}, {"branch", "1/4"}}}};
}

int cmd_sample(const Options& o, std::ostream& out) {
  const DegreeMatrix matrix = io::parse_matrix_file(o.matrix);
  ChainConfig config;
  config.seed = o.seed;
  config.steps = o.steps;
  config.burnin = o.burnin;
  config.thin = o.thin;
  config.chains = o.chains;

  Output sink(o.out, out);
  // Each chain buffers its own lines so the combined stream does not
  // depend on thread scheduling; a single chain streams directly.
  std::vector<std::ostringstream> per_chain(config.chains > 1 ? config.chains : 0);
  auto line = [&](int chain, long step, const ColoredRealization& state) {
    json doc{{"chain", chain},
             {"step", step},
             {"n", state.rows()},
             {"m", state.cols()},
             {"k", state.colors()},
             {"matrix", state.matrix().to_nested()}};
    std::ostream& target = per_chain.empty() ? sink.stream() : per_chain[chain];
    target << doc.dump() << '\n';
  };
  const ChainResult result = run_chain(matrix, config, line);
  for (const auto& buffer : per_chain) sink.stream() << buffer.str();
  sink.finish();

  if (!o.diagnostics.empty()) {
    json doc = diagnostics_json(result.total);
    doc["perChain"] = json::array();
    for (const auto& d : result.per_chain) doc["perChain"].push_back(diagnostics_json(d));
    io::write_file(o.diagnostics, doc.dump(2) + "\n");
  }
  return kOk;
}

int cmd_enumerate(const Options& o, std::ostream& out) {
  const DegreeMatrix matrix = io::parse_matrix_file(o.matrix);
  Output sink(o.out, out);
  if (o.count_only) {
    sink.stream() << json{{"count", enumerate(matrix, true).count}}.dump() << '\n';
  } else {
    std::vector<json> states;
    enumerate_each(matrix, [&](const ColorMatrix& grid) {
      states.push_back(grid.to_nested());
      return true;
    });
    std::sort(states.begin(), states.end());
    sink.stream() << json{{"count", states.size()}, {"states", states}}.dump() << '\n';
  }
  sink.finish();
  return kOk;
}

int cmd_path(const Options& o, std::ostream& out) {
  const ColoredRealization from = io::realization_from_json(io::parse_json_file(o.from));
  const ColoredRealization to = io::realization_from_json(io::parse_json_file(o.to));
  const auto path = transformation_path(from, to);
  json steps = json::array();
  for (const auto& step : path) {
    json swaps = json::array();
    for (const auto& op : step.swaps) {
      swaps.push_back({{"rows", {op.row_a, op.row_b}}, {"cols", op.cols}});
    }
    std::ostringstream hash;
    hash << std::hex << step.result_hash;
    steps.push_back({{"touched_rows", step.touched_rows}, {"swaps", swaps}, {"hash", hash.str()}});
  }
  Output sink(o.out, out);
  sink.stream() << json{{"length", path.size()}, {"steps", steps}}.dump() << '\n';
  sink.finish();
  return kOk;
}

int cmd_test_uniformity(const Options& o, std::ostream& out) {
  long space = o.states;
  if (!o.space_matrix.empty()) {
    space = enumerate(io::parse_matrix_file(o.space_matrix), true).count;
  }
  if (space < 2) {
    throw Error(ErrorKind::Malformed, "give --states S (S >= 2) or --matrix with at least two states");
  }
  std::ifstream in(o.samples);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + o.samples);
  std::unordered_map<std::string, long> counts;
  std::string text;
  long line_no = 0;
  while (std::getline(in, text)) {
    ++line_no;
    if (text.empty()) continue;
    json doc;
    try {
      doc = json::parse(text);
    } catch (const json::parse_error& e) {
      throw Error(ErrorKind::SchemaError, "line " + std::to_string(line_no) + ": " + e.what());
    }
    const ColoredRealization r = io::realization_from_json(doc);
    ++counts[r.matrix().encode(r.colors())];
  }
  const UniformityStats stats = uniformity_test(counts, space);
  Output sink(o.out, out);
  sink.stream() << json{{"chi2", stats.chi2},
                        {"pValue", stats.p_value},
                        {"tvDistance", stats.tv_distance},
                        {"samples", stats.samples},
                        {"states", stats.states},
                        {"observedStates", counts.size()}}
                       .dump()
                << '\n';
  sink.finish();
  return kOk;
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidMatrix:
    case ErrorKind::DifferentInstances:
      return kInvalidInstance;
    case ErrorKind::IoError:
    case ErrorKind::SchemaError:
    case ErrorKind::Malformed:
    case ErrorKind::DimensionMismatch:
    case ErrorKind::TooLarge:
    case ErrorKind::InsufficientSamples:
      return kInputError;
    default:
      return kInternalError;
  }
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sample and analyse realizations of half-regular bipartite degree matrices"};
  app.require_subcommand(1);
  Options o;

  auto* check = app.add_subcommand("check", "Validate a degree matrix");
  check->add_option("matrix", o.matrix, "Degree matrix JSON")->required();

  auto* construct = app.add_subcommand("construct", "Build one realization");
  construct->add_option("matrix", o.matrix, "Degree matrix JSON")->required();
  construct->add_option("--out", o.out, "Output file (default stdout)");
  construct->add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  construct->add_flag("--log", o.log, "Include the exceed-number sequence");

  auto* sample = app.add_subcommand("sample", "Run the Metropolis-Hastings sampler");
  sample->add_option("matrix", o.matrix, "Degree matrix JSON")->required();
  sample->add_option("--steps", o.steps, "Steps per chain")->check(CLI::NonNegativeNumber);
  sample->add_option("--burnin", o.burnin, "Steps before the first emitted state")
      ->check(CLI::NonNegativeNumber);
  sample->add_option("--thin", o.thin, "Emit every thin-th state")->check(CLI::PositiveNumber);
  sample->add_option("--chains", o.chains, "Independent chains")->check(CLI::PositiveNumber);
  sample->add_option("--seed", o.seed, "Random seed");
  sample->add_option("--out", o.out, "NDJSON output (default stdout)");
  sample->add_option("--diagnostics", o.diagnostics, "Write chain diagnostics JSON here");

  auto* enumerate_cmd = app.add_subcommand("enumerate", "List every realization of a small instance");
  enumerate_cmd->add_option("matrix", o.matrix, "Degree matrix JSON")->required();
  enumerate_cmd->add_flag("--count", o.count_only, "Only report the count");
  enumerate_cmd->add_option("--out", o.out, "Output file (default stdout)");

  auto* path = app.add_subcommand("path", "Realization-to-realization path between two colorings");
  path->add_option("from", o.from, "Realization JSON")->required();
  path->add_option("to", o.to, "Realization JSON")->required();
  path->add_option("--out", o.out, "Output file (default stdout)");

  auto* uniformity = app.add_subcommand("test-uniformity", "Chi-square test of an NDJSON sample stream");
  uniformity->add_option("samples", o.samples, "NDJSON samples")->required();
  auto* states_opt = uniformity->add_option("--states", o.states, "Size of the state space");
  auto* matrix_opt = uniformity->add_option("--matrix", o.space_matrix,
                                            "Degree matrix whose realizations form the space");
  states_opt->excludes(matrix_opt);
  uniformity->add_option("--out", o.out, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    std::ostringstream text;
    app.exit(e, text, text);
    err << text.str();
    return kInputError;
  }

  try {
    if (*check) return cmd_check(o, out);
    if (*construct) return cmd_construct(o, out);
    if (*sample) return cmd_sample(o, out);
    if (*enumerate_cmd) return cmd_enumerate(o, out);
    if (*path) return cmd_path(o, out);
    if (*uniformity) return cmd_test_uniformity(o, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    if (e.kind() == ErrorKind::InvalidMatrix) {
      try {
        for (const auto& v : validate(io::parse_matrix_file(o.matrix)).violations) {
          err << "  " << v.describe() << '\n';
        }
      } catch (const Error&) {
      }
    }
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kInternalError;
  }
  return kInputError;
}

}  // namespace halfreg::cli
