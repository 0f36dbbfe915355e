#include "report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <sstream>

#include "rdsmc/cycles.hpp"
#include "rdsmc/entropy.hpp"
#include "rdsmc/io.hpp"
#include "rdsmc/simulate.hpp"
#include "rdsmc/trees.hpp"

namespace rdsmc::cli {

namespace {

constexpr double kCheckTol = Tolerances::sum;

CrossCheck make_check(std::string name, double defect, double tolerance) {
  const bool pass = std::isfinite(defect) ? defect <= tolerance : false;
  return CrossCheck{std::move(name), defect, tolerance, pass};
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

Json labels(const std::vector<State>& states) {
  Json out = Json::array();
  for (State s : states) out.push_back(s + 1);
  return out;
}

std::vector<State> unlabel(const Json& j) {
  std::vector<State> out;
  for (const auto& v : j) out.push_back(v.get<State>() - 1);
  return out;
}

Json numbers(const std::vector<double>& xs) {
  Json out = Json::array();
  for (double x : xs) out.push_back(number(x));
  return out;
}

std::vector<double> numbers(const Json& j) {
  std::vector<double> out;
  for (const auto& v : j) out.push_back(number(v));
  return out;
}

Json optional_number(const std::optional<double>& x) { return x ? number(*x) : Json(nullptr); }

std::optional<double> optional_number(const Json& j) {
  if (j.is_null()) return std::nullopt;
  return number(j);
}

Json provenance_json(const Provenance& p) {
  Json j;
  j["command"] = p.command;
  j["input_hash"] = p.input_hash;
  j["seed"] = p.seed ? Json(*p.seed) : Json(nullptr);
  j["version"] = p.version;
  return j;
}

Provenance provenance_from(const Json& j) {
  Provenance p;
  p.command = j.at("command").get<std::string>();
  p.input_hash = j.at("input_hash").get<std::string>();
  if (!j.at("seed").is_null()) p.seed = j.at("seed").get<std::uint64_t>();
  p.version = j.at("version").get<std::string>();
  return p;
}

Json checks_json(const std::vector<CrossCheck>& checks) {
  Json out = Json::array();
  for (const auto& c : checks) {
    Json j;
    j["name"] = c.name;
    j["pass"] = c.pass;
    j["defect"] = number(c.defect);
    j["tolerance"] = number(c.tolerance);
    out.push_back(std::move(j));
  }
  return out;
}

Json envelope(const Provenance& p) {
  Json j;
  j["schema"] = kSchema;
  j["provenance"] = provenance_json(p);
  return j;
}

void finish(Json& j, const std::vector<CrossCheck>& checks) {
  j["checks"] = checks_json(checks);
  j["passed"] = std::all_of(checks.begin(), checks.end(), [](const CrossCheck& c) { return c.pass; });
}

Json matrix_json(const StochasticMatrix& m) {
  Json rows = Json::array();
  for (State i = 0; i < m.size(); ++i) {
    std::vector<double> row(m.size());
    for (State j = 0; j < m.size(); ++j) row[j] = m(i, j);
    rows.push_back(numbers(row));
  }
  return rows;
}

Json maps_json(const std::vector<WeightedMap>& support) {
  Json out = Json::array();
  for (const auto& wm : support) {
    Json j;
    j["image"] = labels(wm.map.image());
    j["weight"] = number(wm.weight);
    out.push_back(std::move(j));
  }
  return out;
}

double induced_defect(const StochasticMatrix& induced, const StochasticMatrix& m) {
  return (induced.matrix() - m.matrix()).cwiseAbs().maxCoeff();
}

std::vector<double> frequencies(std::span<const State> states, std::size_t n) {
  std::vector<double> f(n, 0.0);
  for (State s : states) f[s] += 1.0;
  if (!states.empty()) {
    for (double& x : f) x /= static_cast<double>(states.size());
  }
  return f;
}

std::optional<ProbVector> stationary_if_ergodic(const StochasticMatrix& m) {
  if (!m.irreducible()) return std::nullopt;
  return hill_stationary(m).pi;
}

std::string scalar_text(const Json& v) {
  if (v.is_null()) return "none";
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_float()) return io::format_double(v.get<double>());
  return v.dump();
}

std::string tuple_text(const Json& states) {
  std::string s = "(";
  for (std::size_t k = 0; k < states.size(); ++k) {
    if (k) s += ',';
    s += states[k].dump();
  }
  return s + ")";
}

void render(std::ostringstream& out, const std::string& key, const Json& v) {
  if (v.is_object()) {
    for (const auto& [k, child] : v.items()) render(out, key.empty() ? k : key + "." + k, child);
    return;
  }
  if (!v.is_array()) {
    if (v.is_string() && v.get_ref<const std::string&>().empty()) return;
    out << key << " = " << scalar_text(v) << '\n';
    return;
  }
  if (v.empty() || !v.front().is_object()) {
    out << key << " =";
    for (const auto& x : v) {
      if (x.is_array()) {
        out << " [";
        for (std::size_t k = 0; k < x.size(); ++k) out << (k ? " " : "") << scalar_text(x[k]);
        out << "]";
      } else {
        out << ' ' << scalar_text(x);
      }
    }
    out << '\n';
    return;
  }
  const Json& first = v.front();
  const char* tuple_key = first.contains("cycle") ? "cycle" : first.contains("image") ? "image" : nullptr;
  if (tuple_key != nullptr) {
    out << key << ": " << tuple_key;
    for (const auto& [k, x] : first.items()) {
      if (k != tuple_key) out << ' ' << k;
    }
    out << '\n';
    for (const auto& row : v) {
      out << "  " << tuple_text(row.at(tuple_key));
      for (const auto& [k, x] : row.items()) {
        if (k != tuple_key) out << ' ' << scalar_text(x);
      }
      out << '\n';
    }
    return;
  }
  if (first.contains("name")) {
    for (const auto& row : v) {
      out << key << '.' << row.at("name").get<std::string>() << " =";
      for (const auto& [k, x] : row.items()) {
        if (k != "name") out << ' ' << k << '=' << scalar_text(x);
      }
      out << '\n';
    }
    return;
  }
  for (std::size_t idx = 0; idx < v.size(); ++idx) render(out, key + "[" + std::to_string(idx) + "]", v[idx]);
}

}  // namespace

bool AnalysisReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CrossCheck& c) { return c.pass; });
}

std::string fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Json number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

double number(const Json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    throw ParseError("expected a number, got \"" + s + "\"");
  }
  if (!j.is_number()) throw ParseError("expected a number");
  return j.get<double>();
}

AnalysisReport analyze(const StochasticMatrix& m, Provenance provenance) {
  m.require_ergodic();
  m.require_support_symmetric();

  AnalysisReport r;
  r.provenance = std::move(provenance);
  r.states = m.size();

  const auto hill = hill_stationary(m);
  r.pi_tree = hill.pi.values();
  r.sigma = hill.sigma;
  r.pi_linear = stationary_distribution(m).values();
  r.pi_disagreement = max_abs_diff(r.pi_linear, r.pi_tree);
  r.checks.push_back(make_check("stationary_methods", r.pi_disagreement, kCheckTol));

  const auto ep = ep_rate(m);
  r.ep.rate = ep.ep_rate;
  r.ep.ratio = ep.forms.ratio;
  r.ep.pi_ratio = ep.forms.pi_ratio;
  r.ep.reversed = ep.forms.reversed;
  r.ep.half_sum = ep.forms.half_sum;
  r.detailed_balance = ep.detailed_balance;
  const double ep_scale = std::max(1.0, std::abs(ep.forms.ratio));
  {
    const std::vector<double> forms{ep.forms.ratio, ep.forms.pi_ratio, ep.forms.reversed, ep.forms.half_sum};
    const auto [lo, hi] = std::minmax_element(forms.begin(), forms.end());
    r.checks.push_back(make_check("ep_closed_forms", *hi - *lo, Tolerances::alg * ep_scale));
  }

  r.h_mc = metric_entropy_mc(m, hill.pi);
  if (m.size() <= MaxEntRDS::kEnumerationCap) {
    r.h_rds = rds_metric_entropy(maxent_rds(m));
    r.checks.push_back(make_check("h_rds_ge_h_mc", std::max(0.0, r.h_mc - *r.h_rds), kCheckTol));
  }
  if (m.doubly_stochastic()) {
    r.ep_bound = ep_upper_bound(birkhoff_decompose(m));
    r.checks.push_back(make_check("ep_le_birkhoff_bound", std::max(0.0, r.ep.rate - *r.ep_bound), kCheckTol));
  }

  try {
    const auto cw = cycle_weights(m);
    r.lambda = cw.lambda;
    double psum = 0.0;
    for (const auto& e : cw.ranked()) {
      r.cycles.push_back(CycleRow{e.cycle.states(), e.w, e.p});
      psum += e.p;
    }
    const auto cep = cycle_ep(m, cw);
    r.ep.cycle_weight = cep.weight_form;
    r.ep.cycle_relative_entropy = cep.relative_entropy_form;
    const double cycle_defect =
        std::max(std::abs(cep.weight_form - ep.forms.ratio), std::abs(cep.relative_entropy_form - ep.forms.ratio));
    r.checks.push_back(make_check("ep_cycle_forms", cycle_defect, kCheckTol * ep_scale));
    const auto circ = circulation_identities(m, cw, hill.pi);
    r.checks.push_back(make_check("cycle_circulation", std::max(circ.node, circ.edge), kCheckTol));
    r.checks.push_back(make_check("cycle_probability_sum", std::abs(psum - 1.0), kCheckTol));
  } catch (const CapExceededError& e) {
    r.cycles_note = std::string("cycle table skipped: ") + e.what();
  }
  return r;
}

Json to_json(const AnalysisReport& r) {
  Json j = envelope(r.provenance);
  j["states"] = r.states;

  Json& st = j["stationary"];
  st["linear"] = numbers(r.pi_linear);
  st["tree"] = numbers(r.pi_tree);
  st["disagreement"] = number(r.pi_disagreement);
  st["sigma"] = number(r.sigma);

  Json& ep = j["entropy_production"];
  ep["rate"] = number(r.ep.rate);
  ep["detailed_balance"] = r.detailed_balance;
  Json& forms = ep["forms"];
  forms["ratio"] = number(r.ep.ratio);
  forms["pi_ratio"] = number(r.ep.pi_ratio);
  forms["reversed"] = number(r.ep.reversed);
  forms["half_sum"] = number(r.ep.half_sum);
  forms["cycle_weight"] = optional_number(r.ep.cycle_weight);
  forms["cycle_relative_entropy"] = optional_number(r.ep.cycle_relative_entropy);

  Json& ent = j["entropy"];
  ent["h_mc"] = number(r.h_mc);
  ent["h_rds"] = optional_number(r.h_rds);
  ent["ep_upper_bound"] = optional_number(r.ep_bound);

  Json& cyc = j["cycles"];
  cyc["lambda"] = optional_number(r.lambda);
  cyc["note"] = r.cycles_note;
  Json table = Json::array();
  for (const auto& row : r.cycles) {
    Json e;
    e["cycle"] = labels(row.cycle);
    e["w"] = number(row.w);
    e["p"] = number(row.p);
    table.push_back(std::move(e));
  }
  cyc["table"] = std::move(table);

  finish(j, r.checks);
  return j;
}

AnalysisReport analysis_from_json(const Json& j) {
  if (j.value("schema", std::string{}) != kSchema) throw ParseError("unknown report schema");
  AnalysisReport r;
  r.provenance = provenance_from(j.at("provenance"));
  r.states = j.at("states").get<std::size_t>();

  const Json& st = j.at("stationary");
  r.pi_linear = numbers(st.at("linear"));
  r.pi_tree = numbers(st.at("tree"));
  r.pi_disagreement = number(st.at("disagreement"));
  r.sigma = number(st.at("sigma"));

  const Json& ep = j.at("entropy_production");
  r.ep.rate = number(ep.at("rate"));
  r.detailed_balance = ep.at("detailed_balance").get<bool>();
  const Json& forms = ep.at("forms");
  r.ep.ratio = number(forms.at("ratio"));
  r.ep.pi_ratio = number(forms.at("pi_ratio"));
  r.ep.reversed = number(forms.at("reversed"));
  r.ep.half_sum = number(forms.at("half_sum"));
  r.ep.cycle_weight = optional_number(forms.at("cycle_weight"));
  r.ep.cycle_relative_entropy = optional_number(forms.at("cycle_relative_entropy"));

  const Json& ent = j.at("entropy");
  r.h_mc = number(ent.at("h_mc"));
  r.h_rds = optional_number(ent.at("h_rds"));
  r.ep_bound = optional_number(ent.at("ep_upper_bound"));

  const Json& cyc = j.at("cycles");
  r.lambda = optional_number(cyc.at("lambda"));
  r.cycles_note = cyc.at("note").get<std::string>();
  for (const auto& e : cyc.at("table")) {
    r.cycles.push_back(CycleRow{unlabel(e.at("cycle")), number(e.at("w")), number(e.at("p"))});
  }

  for (const auto& c : j.at("checks")) {
    r.checks.push_back(CrossCheck{c.at("name").get<std::string>(), number(c.at("defect")), number(c.at("tolerance")),
                                  c.at("pass").get<bool>()});
  }
  return r;
}

Json maxent_report(const StochasticMatrix& m, const Provenance& provenance) {
  const auto q = maxent_rds(m);
  std::vector<WeightedMap> support;
  double total = 0.0;
  q.for_each([&](const DeterministicMap& alpha, double w) {
    support.push_back({alpha, w});
    total += w;
  });
  const RDSMeasure measure(support);
  const double sigma = tree_normalization(m);
  const double attractor = expected_attractor_size(measure);

  std::vector<CrossCheck> checks;
  checks.push_back(make_check("weight_sum", std::abs(total - 1.0), kCheckTol));
  checks.push_back(make_check("induced_matrix", induced_defect(induce_markov(measure), m), kCheckTol));
  checks.push_back(make_check("sigma_attractor_size", std::abs(sigma - attractor), kCheckTol));

  Json j = envelope(provenance);
  j["states"] = m.size();
  j["support_size"] = support.size();
  j["weight_sum"] = number(total);
  j["metric_entropy"] = number(rds_metric_entropy(measure));
  j["sigma"] = number(sigma);
  j["expected_attractor_size"] = number(attractor);
  j["maps"] = maps_json(support);
  finish(j, checks);
  return j;
}

Json birkhoff_report(const StochasticMatrix& m, const Provenance& provenance) {
  const auto q = birkhoff_decompose(m);
  const auto dual = dual_measure(q);
  double total = 0.0;
  for (const auto& wm : q.support()) total += wm.weight;
  const double bound = ep_upper_bound(q);

  std::vector<CrossCheck> checks;
  checks.push_back(make_check("weight_sum", std::abs(total - 1.0), kCheckTol));
  checks.push_back(make_check("reconstruction", induced_defect(induce_markov(q.measure()), m), kCheckTol));
  checks.push_back(
      make_check("dual_reconstruction", induced_defect(induce_markov(dual.measure()), m.transpose()), kCheckTol));

  Json j = envelope(provenance);
  j["states"] = m.size();
  j["permutations"] = maps_json(q.support());
  j["dual"] = maps_json(dual.support());
  j["ep_upper_bound"] = number(bound);
  std::optional<double> ep;
  std::string note;
  if (m.ergodic() && m.support_symmetric()) {
    ep = ep_rate(m).ep_rate;
    checks.push_back(make_check("ep_le_bound", std::max(0.0, *ep - bound), kCheckTol));
  } else {
    note = "entropy production needs an ergodic chain with symmetric support";
  }
  j["ep_rate"] = optional_number(ep);
  j["note"] = note;
  finish(j, checks);
  return j;
}

Json simulate_mc_report(const StochasticMatrix& m, State initial, std::size_t steps, const Provenance& provenance,
                        std::vector<State>* trajectory_out) {
  if (initial >= m.size()) throw DimensionError("initial state outside the state space");
  if (!provenance.seed) throw PreconditionError("simulation needs an explicit seed");
  const auto traj = simulate_mc(m, ProbVector::point_mass(m.size(), initial), steps, *provenance.seed);

  Json j = envelope(provenance);
  j["generator"] = traj.generator;
  j["states"] = m.size();
  j["steps"] = steps;
  j["initial_state"] = initial + 1;
  j["final_state"] = traj.states.back() + 1;
  const std::span<const State> visited(traj.states.data() + 1, traj.states.size() - 1);
  const auto freq = frequencies(visited, m.size());
  j["frequencies"] = numbers(freq);
  const auto pi = stationary_if_ergodic(m);
  j["stationary"] = pi ? numbers(pi->values()) : Json(nullptr);
  j["max_abs_deviation"] = pi && steps > 0 ? number(max_abs_diff(freq, pi->values())) : Json(nullptr);

  const auto empirical = count_cycles(traj.states);
  std::optional<CycleWeights> analytic;
  if (m.ergodic()) {
    try {
      analytic = cycle_weights(m);
    } catch (const CapExceededError&) {
    }
  }
  Json& cyc = j["cycles"];
  cyc["completed"] = empirical.total;
  cyc["mean_length"] = number(empirical.mean_length());
  cyc["lambda"] = analytic ? number(analytic->lambda) : Json(nullptr);
  Json table = Json::array();
  for (const auto& [c, count] : empirical.counts) {
    Json e;
    e["cycle"] = labels(c.states());
    e["w"] = number(empirical.w(c));
    e["p"] = number(empirical.p(c));
    e["w_analytic"] = analytic ? number(analytic->weight(c)) : Json(nullptr);
    table.push_back(std::move(e));
  }
  cyc["table"] = std::move(table);
  finish(j, {});
  if (trajectory_out != nullptr) *trajectory_out = traj.states;
  return j;
}

Json simulate_rds_report(const RDSMeasure& q, const std::vector<State>& starts, std::size_t steps,
                         const Provenance& provenance) {
  if (!provenance.seed) throw PreconditionError("simulation needs an explicit seed");
  const auto run = simulate_rds(IidSource{q}, starts, steps, *provenance.seed);
  std::optional<std::size_t> coalesced;
  for (std::size_t t = 0; t <= steps && !coalesced; ++t) {
    bool same = true;
    for (const auto& p : run.points) same = same && p.states[t] == run.points.front().states[t];
    if (same) coalesced = t;
  }
  const auto pullback = pullback_support(q, steps, *provenance.seed);
  std::optional<std::size_t> synchronized;
  for (std::size_t t = 0; t < pullback.size() && !synchronized; ++t) {
    if (pullback[t] == 1) synchronized = t;
  }

  Json j = envelope(provenance);
  j["generator"] = std::string(CounterRng::kGeneratorId);
  j["states"] = q.state_count();
  j["steps"] = steps;
  j["induced_matrix"] = matrix_json(induce_markov(q));
  j["start_states"] = labels(starts);
  std::vector<State> finals;
  for (const auto& p : run.points) finals.push_back(p.states.back());
  j["final_states"] = labels(finals);
  j["forward_coalescence_step"] = coalesced ? Json(*coalesced) : Json(nullptr);
  j["pullback_final_support"] = pullback.back();
  j["pullback_sync_step"] = synchronized ? Json(*synchronized) : Json(nullptr);
  std::vector<CrossCheck> checks;
  std::size_t violations = 0;
  for (std::size_t t = 1; t < pullback.size(); ++t) violations += pullback[t] > pullback[t - 1] ? 1 : 0;
  checks.push_back(make_check("pullback_non_increasing", static_cast<double>(violations), 0.0));
  finish(j, checks);
  return j;
}

Json cftp_report(const RDSMeasure& q, std::size_t samples, std::size_t max_horizon, const Provenance& provenance) {
  if (!provenance.seed) throw PreconditionError("sampling needs an explicit seed");
  const std::size_t n = q.state_count();
  std::vector<double> counts(n, 0.0);
  std::size_t longest = 0;
  double horizon_sum = 0.0;
  for (std::size_t r = 0; r < samples; ++r) {
    const auto s = cftp_sample(q, *provenance.seed, max_horizon, r);
    counts[s.state] += 1.0;
    longest = std::max(longest, s.horizon);
    horizon_sum += static_cast<double>(s.horizon);
  }
  const auto m = induce_markov(q);
  const auto pi = stationary_if_ergodic(m);

  Json j = envelope(provenance);
  j["generator"] = std::string(CounterRng::kGeneratorId);
  j["states"] = n;
  j["samples"] = samples;
  j["max_horizon"] = max_horizon;
  j["longest_horizon"] = longest;
  j["mean_horizon"] = number(samples ? horizon_sum / static_cast<double>(samples) : 0.0);
  std::vector<double> law(counts);
  for (double& x : law) x /= static_cast<double>(std::max<std::size_t>(samples, 1));
  j["empirical_law"] = numbers(law);
  j["stationary"] = pi ? numbers(pi->values()) : Json(nullptr);
  if (pi && samples > 0) {
    double chi2 = 0.0;
    std::size_t cells = 0;
    for (State i = 0; i < n; ++i) {
      const double expected = (*pi)[i] * static_cast<double>(samples);
      if (expected <= 0.0) continue;
      chi2 += (counts[i] - expected) * (counts[i] - expected) / expected;
      ++cells;
    }
    j["chi_square"] = number(chi2);
    j["degrees_of_freedom"] = cells > 0 ? cells - 1 : 0;
  } else {
    j["chi_square"] = nullptr;
    j["degrees_of_freedom"] = nullptr;
  }
  finish(j, {});
  return j;
}

bool checks_pass(const Json& report) {
  if (!report.contains("checks")) return true;
  return std::all_of(report.at("checks").begin(), report.at("checks").end(),
                     [](const Json& c) { return c.at("pass").get<bool>(); });
}

std::string render_text(const Json& report) {
  std::ostringstream out;
  render(out, "", report);
  return out.str();
}

}  // namespace rdsmc::cli
