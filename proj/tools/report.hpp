#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "rdsmc/birkhoff.hpp"
#include "rdsmc/core.hpp"
#include "rdsmc/rds.hpp"

namespace rdsmc::cli {

using Json = nlohmann::ordered_json;

inline constexpr std::string_view kSchema = "rdsmc-report/1";

struct Provenance {
  std::string command;
  std::string input_hash;
  std::optional<std::uint64_t> seed;
  std::string version;
};

struct CrossCheck {
  std::string name;
  double defect = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct CycleRow {
  std::vector<State> cycle;  // 0-based, canonical rotation
  double w = 0.0;
  double p = 0.0;
};

struct EpSummary {
  double rate = 0.0;
  double ratio = 0.0;
  double pi_ratio = 0.0;
  double reversed = 0.0;
  double half_sum = 0.0;
  std::optional<double> cycle_weight;
  std::optional<double> cycle_relative_entropy;
};

struct AnalysisReport {
  Provenance provenance;
  std::size_t states = 0;
  std::vector<double> pi_linear;
  std::vector<double> pi_tree;
  double pi_disagreement = 0.0;
  double sigma = 0.0;
  EpSummary ep;
  bool detailed_balance = false;
  double h_mc = 0.0;
  std::optional<double> h_rds;
  std::optional<double> ep_bound;
  std::optional<double> lambda;
  std::vector<CycleRow> cycles;
  std::string cycles_note;
  std::vector<CrossCheck> checks;

  bool passed() const;
};

/// 64-bit FNV-1a, lowercase hex.
std::string fnv1a64(std::string_view bytes);

/// Full analysis of an ergodic, support-symmetric chain.
AnalysisReport analyze(const StochasticMatrix& m, Provenance provenance);

/// Non-finite doubles are written as the strings "inf", "-inf", "nan".
Json number(double x);
double number(const Json& j);

Json to_json(const AnalysisReport& r);
AnalysisReport analysis_from_json(const Json& j);

/// Reports of the thin subcommands. Each carries "provenance" and "checks".
Json maxent_report(const StochasticMatrix& m, const Provenance& provenance);
Json birkhoff_report(const StochasticMatrix& m, const Provenance& provenance);
Json simulate_mc_report(const StochasticMatrix& m, State initial, std::size_t steps, const Provenance& provenance,
                        std::vector<State>* trajectory_out);
Json simulate_rds_report(const RDSMeasure& q, const std::vector<State>& starts, std::size_t steps,
                         const Provenance& provenance);
Json cftp_report(const RDSMeasure& q, std::size_t samples, std::size_t max_horizon, const Provenance& provenance);

/// True when every entry of the "checks" array passes.
bool checks_pass(const Json& report);

/// `key = value` lines; nested objects use dotted keys, states are 1-based,
/// cycle tables print as `(i1,...,it) w p` lines.
std::string render_text(const Json& report);

}  // namespace rdsmc::cli
