#include "cli.hpp"

#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "rdsmc/io.hpp"
#include "rdsmc/simulate.hpp"
#include "report.hpp"

#ifndef RDSMC_VERSION
#define RDSMC_VERSION "unknown"
#endif

namespace rdsmc::cli {

namespace {

struct Options {
  std::string matrix;
  std::string rds;
  std::optional<std::uint64_t> seed;
  std::size_t steps = 1000;
  std::optional<std::size_t> initial_state;
  std::string format = "text";
  std::string report;
  std::string trajectory;
  std::size_t samples = 1;
  std::size_t max_horizon = std::size_t{1} << 20;
};

Provenance provenance(const std::string& command, const std::string& input, std::optional<std::uint64_t> seed) {
  return Provenance{command, fnv1a64(io::slurp(input)), seed, RDSMC_VERSION};
}

StochasticMatrix matrix_input(const Options& o) { return io::load_matrix(o.matrix); }

/// Explicit RDS file, or the maximum-entropy RDS of a matrix file.
RDSMeasure rds_input(const Options& o, std::string& input) {
  if (!o.rds.empty()) {
    input = o.rds;
    return io::load_rds(o.rds);
  }
  input = o.matrix;
  std::vector<WeightedMap> support;
  maxent_rds(io::load_matrix(o.matrix)).for_each([&](const DeterministicMap& a, double w) {
    support.push_back({a, w});
  });
  return RDSMeasure(std::move(support));
}

State initial_state(const Options& o, std::size_t n) {
  const std::size_t label = o.initial_state.value_or(1);
  if (label < 1 || label > n) throw DimensionError("--initial-state must be in 1.." + std::to_string(n));
  return label - 1;
}

int emit(const Json& report, const Options& o, std::ostream& out) {
  const std::string body = o.format == "structured" ? report.dump(2) + "\n" : render_text(report);
  if (o.report.empty()) {
    out << body;
  } else {
    std::ofstream f(o.report);
    if (!f) throw ParseError("cannot write report to " + o.report);
    f << body;
  }
  return checks_pass(report) ? kOk : kCheckFailed;
}

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--format", o.format, "Output format")
      ->check(CLI::IsMember({"text", "structured"}))
      ->capture_default_str();
  cmd->add_option("--report", o.report, "Write the report to FILE instead of stdout");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Random dynamical systems and Markov chain analysis"};
  app.set_version_flag("--version", RDSMC_VERSION);
  app.require_subcommand(1);
  Options o;

  auto* analyze_cmd = app.add_subcommand("analyze", "Stationary law, entropy production, cycle table, bounds");
  analyze_cmd->add_option("--matrix", o.matrix, "Transition matrix file")->required()->check(CLI::ExistingFile);
  add_common(analyze_cmd, o);

  auto* maxent_cmd = app.add_subcommand("maxent", "Maximum-entropy RDS of a matrix");
  maxent_cmd->add_option("--matrix", o.matrix, "Transition matrix file")->required()->check(CLI::ExistingFile);
  add_common(maxent_cmd, o);

  auto* birkhoff_cmd = app.add_subcommand("birkhoff", "Permutation decomposition of a doubly stochastic matrix");
  birkhoff_cmd->add_option("--matrix", o.matrix, "Transition matrix file")->required()->check(CLI::ExistingFile);
  add_common(birkhoff_cmd, o);

  auto* simulate_cmd = app.add_subcommand("simulate", "Seeded Markov chain or RDS simulation");
  auto* sim_matrix = simulate_cmd->add_option("--matrix", o.matrix, "Simulate the chain of this matrix");
  auto* sim_rds = simulate_cmd->add_option("--rds", o.rds, "Simulate the grand coupling of this RDS");
  sim_matrix->check(CLI::ExistingFile)->excludes(sim_rds);
  sim_rds->check(CLI::ExistingFile);
  simulate_cmd->add_option("--seed", o.seed, "RNG seed")->required();
  simulate_cmd->add_option("--steps", o.steps, "Number of transitions")->capture_default_str();
  simulate_cmd->add_option("--initial-state", o.initial_state,
                           "Start state, 1-based (matrix: default 1; rds: default all states)");
  simulate_cmd->add_option("--trajectory", o.trajectory, "Dump the chain trajectory to FILE");
  add_common(simulate_cmd, o);

  auto* cftp_cmd = app.add_subcommand("cftp", "Coupling-from-the-past samples of an RDS");
  auto* cftp_matrix = cftp_cmd->add_option("--matrix", o.matrix, "Use the maximum-entropy RDS of this matrix");
  auto* cftp_rds = cftp_cmd->add_option("--rds", o.rds, "RDS file");
  cftp_matrix->check(CLI::ExistingFile)->excludes(cftp_rds);
  cftp_rds->check(CLI::ExistingFile);
  cftp_cmd->add_option("--seed", o.seed, "RNG seed")->required();
  cftp_cmd->add_option("--samples", o.samples, "Independent samples")->capture_default_str();
  cftp_cmd->add_option("--max-horizon", o.max_horizon, "Largest past horizon tried")->capture_default_str();
  add_common(cftp_cmd, o);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*analyze_cmd) {
      const auto m = matrix_input(o);
      return emit(to_json(analyze(m, provenance("analyze", o.matrix, std::nullopt))), o, out);
    }
    if (*maxent_cmd) {
      return emit(maxent_report(matrix_input(o), provenance("maxent", o.matrix, std::nullopt)), o, out);
    }
    if (*birkhoff_cmd) {
      return emit(birkhoff_report(matrix_input(o), provenance("birkhoff", o.matrix, std::nullopt)), o, out);
    }
    if (*simulate_cmd) {
      if (o.matrix.empty() && o.rds.empty()) throw CLI::RequiredError("--matrix or --rds");
      if (!o.matrix.empty()) {
        const auto m = matrix_input(o);
        std::vector<State> states;
        const auto report = simulate_mc_report(m, initial_state(o, m.size()), o.steps,
                                               provenance("simulate", o.matrix, o.seed), &states);
        if (!o.trajectory.empty()) {
          std::ofstream f(o.trajectory);
          if (!f) throw ParseError("cannot write trajectory to " + o.trajectory);
          write_trajectory(f, Trajectory{states, *o.seed, std::string(CounterRng::kGeneratorId)});
        }
        return emit(report, o, out);
      }
      std::string input;
      const auto q = rds_input(o, input);
      std::vector<State> starts;
      if (o.initial_state) {
        starts.push_back(initial_state(o, q.state_count()));
      } else {
        for (State i = 0; i < q.state_count(); ++i) starts.push_back(i);
      }
      return emit(simulate_rds_report(q, starts, o.steps, provenance("simulate", input, o.seed)), o, out);
    }
    if (*cftp_cmd) {
      if (o.matrix.empty() && o.rds.empty()) throw CLI::RequiredError("--matrix or --rds");
      std::string input;
      const auto q = rds_input(o, input);
      return emit(cftp_report(q, o.samples, o.max_horizon, provenance("cftp", input, o.seed)), o, out);
    }
  } catch (const CLI::RequiredError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const NoCoalescenceError& e) {
    err << "error: " << e.what() << '\n';
    return kNoCoalescence;
  } catch (const ConsistencyError& e) {
    err << "error: cross-check failed: " << e.what() << '\n';
    return kCheckFailed;
  } catch (const PreconditionError& e) {
    err << "error: " << e.what() << '\n';
    return kPrecondition;
  } catch (const CapExceededError& e) {
    err << "error: " << e.what() << '\n';
    return kPrecondition;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const DimensionError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kCheckFailed;
  }
  return kUsage;
}

}  // namespace rdsmc::cli
