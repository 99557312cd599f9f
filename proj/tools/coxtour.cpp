// coxtour: fibers, interchange graphs, networks, walks and couplings from the
// command line. Scores are given in half-units: --score -2,0,2 means (-1,0,1).

#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "coxeter/dynamics.hpp"
#include "coxeter/errors.hpp"
#include "coxeter/parallel.hpp"
#include "coxeter/zframe.hpp"

using namespace coxeter;
using nlohmann::json;

namespace {

enum Exit { kOk = 0, kInvalid = 2, kInfeasible = 3, kLemma = 4, kCap = 5 };

struct RunConfig {
  std::string command;
  std::string type = "C";
  int n = 3;
  std::string score;
  std::uint64_t seed = 1;
  long long steps = 0;
  int horizon = -1;
  int cap = 0;
  std::string out;
  std::string format = "json";
  int threads = 0;

  RootType root() const { return parse_root_type(type); }
  int resolved_cap() const { return cap > 0 ? cap : default_cap(root()); }
};

struct Resolved {
  RootType type;
  int n;
  std::optional<ScoreVector> score;
};

Resolved resolve(const RunConfig& c, bool needs_score) {
  Resolved r{c.root(), c.n, std::nullopt};
  if (c.n < 1) throw InvalidInput("--n must be positive");
  if (c.n > c.resolved_cap())
    throw CapExceeded("n = " + std::to_string(c.n) + " is above the cap", c.n);
  if (!c.score.empty()) {
    r.score = parse_score(c.score);
    if (r.score->size() != c.n) throw InvalidInput("--score needs exactly n components");
  } else if (needs_score) {
    throw InvalidInput("--score is required for " + c.command);
  }
  if (c.steps < 0) throw InvalidInput("--steps must be nonnegative");
  if (c.horizon < -1) throw InvalidInput("--horizon must be nonnegative");
  return r;
}

json config_json(const RunConfig& c) {
  json j{{"command", c.command},
         {"type", c.type},
         {"n", c.n},
         {"seed", c.seed},
         {"steps", c.steps},
         {"horizon", c.horizon},
         {"cap", c.resolved_cap()},
         {"format", c.format},
         {"threads", thread_count()}};
  j["score"] = c.score.empty() ? json(nullptr) : to_json(parse_score(c.score));
  if (!c.out.empty()) j["out"] = c.out;
  return j;
}

void require_format(const RunConfig& c, std::initializer_list<const char*> allowed) {
  for (const char* f : allowed)
    if (c.format == f) return;
  throw InvalidInput("format '" + c.format + "' is not available for " + c.command);
}

void emit(const RunConfig& c, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(c.out, std::ios::binary);
  if (!f) throw InvalidInput("cannot open " + c.out);
  f << text;
}

std::string with_comment(const RunConfig& c, const char* marker, const std::string& body) {
  return std::string(marker) + " config: " + config_json(c).dump() + "\n" + body;
}

InterchangeGraph graph_for(const RunConfig& c, const Resolved& r) {
  return build_interchange_graph(enumerate_fiber(r.type, r.n, *r.score, c.resolved_cap()));
}

std::vector<InterchangeGraph> graphs_for(const RunConfig& c, const Resolved& r) {
  std::vector<InterchangeGraph> out;
  if (r.score) {
    out.push_back(graph_for(c, r));
  } else {
    for (auto& f : enumerate_all_fibers(r.type, r.n, c.resolved_cap())) out.push_back(build_interchange_graph(f));
  }
  return out;
}

int gamma_of(const InterchangeGraph& g, const CrystalStatistics& s) {
  return g.signed_graph().root_type() == RootType::C ? s.gamma : 0;
}

std::string rational_text(const Rational& r) {
  std::ostringstream s;
  s << r;
  return s.str();
}

int cmd_fiber(const RunConfig& c) {
  require_format(c, {"json", "csv"});
  auto r = resolve(c, true);
  auto f = enumerate_fiber(r.type, r.n, *r.score, c.resolved_cap());
  if (f.empty()) throw InfeasibleScore("no tournament has score " + to_string(*r.score));
  const int m = f.graph->num_games();
  if (c.format == "csv") {
    std::string body = "tournament\n";
    for (GameSet t : f.tournaments) body += to_bitstring(t, m) + "\n";
    emit(c, with_comment(c, "#", body));
    return kOk;
  }
  json j{{"config", config_json(c)}, {"type", c.type}, {"n", r.n}, {"s", to_json(f.score)}, {"count", f.size()}};
  j["tournaments"] = json::array();
  for (GameSet t : f.tournaments) j["tournaments"].push_back(to_bitstring(t, m));
  emit(c, j.dump(2) + "\n");
  return kOk;
}

json metrics_json(const GraphMetrics& m) {
  return {{"vertices", m.num_vertices},
          {"edges", m.num_edges},
          {"connected", m.connected},
          {"diameter", m.diameter},
          {"degree", m.regular_degree}};
}

int cmd_graph(const RunConfig& c) {
  require_format(c, {"json", "dot"});
  auto r = resolve(c, true);
  auto g = graph_for(c, r);
  if (c.format == "dot") {
    emit(c, with_comment(c, "//", graph_to_dot(g)));
    return kOk;
  }
  json j{{"config", config_json(c)}, {"graph", graph_to_json(g)}, {"metrics", metrics_json(graph_metrics(g))}};
  emit(c, j.dump(2) + "\n");
  return kOk;
}

int cmd_networks(const RunConfig& c) {
  require_format(c, {"json", "csv"});
  auto r = resolve(c, false);
  auto graphs = graphs_for(c, r);
  if (c.format == "csv") {
    if (graphs.size() != 1) throw InvalidInput("csv output needs --score");
    emit(c, with_comment(c, "#", crystal_statistics_csv(graphs[0], crystal_statistics(graphs[0]))));
    return kOk;
  }
  json fibers = json::array();
  bool failed = false;
  for (const auto& g : graphs) {
    auto census = network_census(g, distance_two_pairs(g));
    auto ext = extended_networks_and_crystals(g);
    json classes = json::object(), projections = json::object();
    for (auto [k, v] : census.by_class) classes[std::string(to_string(k))] = v;
    for (auto [k, v] : census.by_projection)
      projections[std::string(to_string(k.first)) + "/" + std::string(to_string(k.second))] = v;
    json violations{{"unstable", ext.stable_violations},
                    {"crystal_shape", ext.crystal_shape_violations},
                    {"shared_edges", ext.shared_edge_violations},
                    {"crystal_single_edge_shares", ext.crystal_single_edge_shares},
                    {"crystal_degree", ext.crystal_degree_violations},
                    {"crystal_degree_sharper", ext.sharper_bound_violations}};
    failed |= census.unclassified || census.inconsistent || ext.stable_violations || ext.crystal_shape_violations ||
              ext.shared_edge_violations || ext.crystal_single_edge_shares || ext.crystal_degree_violations ||
              ext.sharper_bound_violations;
    fibers.push_back({{"s", to_json(g.fiber().score)},
                      {"vertices", g.num_vertices()},
                      {"pairs", census.pairs},
                      {"classes", classes},
                      {"projections", projections},
                      {"unclassified", census.unclassified},
                      {"inconsistent", census.inconsistent},
                      {"extended_networks", ext.networks.size()},
                      {"crystals", ext.crystals.crystals.size()},
                      {"gamma", ext.crystals.gamma},
                      {"violations", violations}});
  }
  json j{{"config", config_json(c)}, {"fibers", fibers}, {"pass", !failed}};
  emit(c, j.dump(2) + "\n");
  return failed ? kLemma : kOk;
}

int cmd_walk(const RunConfig& c) {
  require_format(c, {"json", "csv"});
  auto r = resolve(c, true);
  auto g = graph_for(c, r);
  WalkKernel k(g);
  TvReport tv = c.horizon >= 0 ? exact_tv_curve(k, c.horizon) : mixing_time_exact(k);
  if (c.format == "csv") {
    emit(c, with_comment(c, "#", tv_curve_csv(tv)));
    return kOk;
  }
  auto stats = crystal_statistics(g);
  auto check = verify_coupling(g, stats);
  json j{{"config", config_json(c)},
         {"type", c.type},
         {"n", r.n},
         {"s", to_json(g.fiber().score)},
         {"vertices", g.num_vertices()},
         {"d", k.degree()},
         {"gamma", gamma_of(g, stats)},
         {"t_mix", tv.t_mix},
         {"alpha_min", rational_text(check.alpha_min)},
         {"monotone", tv.monotone},
         {"spot_checks", tv.spot_checks},
         {"max_spot_error", tv.max_spot_error},
         {"tau", tv.tau}};
  if (c.steps > 0) {
    auto occ = walk_occupancy(k, 0, c.steps, c.seed);
    j["walk"] = {{"start", 0}, {"steps", c.steps}, {"seed", c.seed}, {"occupancy", occ}};
  }
  emit(c, j.dump(2) + "\n");
  return kOk;
}

int cmd_couple(const RunConfig& c) {
  require_format(c, {"json", "csv"});
  auto r = resolve(c, true);
  auto g = graph_for(c, r);
  auto stats = crystal_statistics(g);
  WalkKernel k(g);
  const int gamma = gamma_of(g, stats);
  WeightedMetric metric(g, gamma);
  const int m = g.signed_graph().num_games();
  std::ostringstream csv;
  csv << "u,v,multiplicity,case,gamma_prime,w,expected,formula,ratio";
  if (c.steps > 0) csv << ",empirical";
  csv << "\n";
  json rows = json::array();
  bool failed = false;
  for (const auto& e : g.edges()) {
    auto psi = edge_pairing_psi(g, stats, e.u, e.v);
    Rational w = metric.weight(e.u, e.v);
    Rational expect = expected_coupled_weight(k, psi, metric);
    Rational formula = expected_weight_formula(psi, k.degree());
    bool ok = expect == formula && expect < w && marginals_match(k, psi);
    failed |= !ok;
    json row{{"u", to_bitstring(g.fiber().tournaments[e.u], m)},
             {"v", to_bitstring(g.fiber().tournaments[e.v], m)},
             {"multiplicity", e.multiplicity},
             {"case", to_string(psi.kind)},
             {"gamma_prime", psi.gamma_prime},
             {"w", rational_text(w)},
             {"expected", rational_text(expect)},
             {"formula", rational_text(formula)},
             {"ratio", rational_text(expect / w)},
             {"ok", ok}};
    csv << row["u"].get<std::string>() << ',' << row["v"].get<std::string>() << ',' << e.multiplicity << ','
        << to_string(psi.kind) << ',' << psi.gamma_prime << ',' << w << ',' << expect << ',' << formula << ','
        << expect / w;
    if (c.steps > 0) {
      double acc = 0;
      for (long long s = 0; s < c.steps; ++s) {
        auto [a, b] = coupled_step(k, psi, c.seed, static_cast<std::uint64_t>(s));
        acc += boost::rational_cast<double>(metric.distance(a, b));
      }
      row["empirical"] = acc / static_cast<double>(c.steps);
      csv << ',' << row["empirical"].get<double>();
    }
    csv << "\n";
    rows.push_back(row);
  }
  if (c.format == "csv") {
    emit(c, with_comment(c, "#", csv.str()));
  } else {
    json j{{"config", config_json(c)}, {"d", k.degree()}, {"gamma", gamma}, {"pairs", rows}, {"pass", !failed}};
    emit(c, j.dump(2) + "\n");
  }
  return failed ? kLemma : kOk;
}

struct Tally {
  long long count = 0, failures = 0;
  void add(bool ok) {
    ++count;
    failures += !ok;
  }
};

int cmd_verify(const RunConfig& c) {
  require_format(c, {"json"});
  auto r = resolve(c, false);
  auto graphs = graphs_for(c, r);
  const long long reversal_pairs = c.steps > 0 ? c.steps : 20;
  std::map<std::string, Tally> t;
  for (const auto& g : graphs) {
    const auto& f = g.fiber();
    const long long d = degree_formula(r.type, r.n, f.score);
    for (int v = 0; v < g.num_vertices(); ++v) t["degree_regularity"].add(g.degree(v) == d);
    auto metrics = graph_metrics(g);
    t["connected_diameter"].add(metrics.connected &&
                                metrics.diameter <= std::max(g.signed_graph().num_games() - 2, 0));

    auto census = network_census(g, distance_two_pairs(g));
    t["network_classes"].add(census.unclassified == 0 && census.inconsistent == 0);
    auto ext = extended_networks_and_crystals(g);
    t["extended_networks"].add(ext.stable_violations == 0 && ext.crystal_shape_violations == 0 &&
                               ext.shared_edge_violations == 0);
    t["crystals_share_no_single_edge"].add(ext.crystal_single_edge_shares == 0);
    t["crystal_degree"].add(ext.crystal_degree_violations == 0 && ext.sharper_bound_violations == 0);

    // Two tournaments of one fiber differ by a neutral sub-tournament.
    if (f.size() > 1)
      for (long long p = 0; p < reversal_pairs; ++p) {
        int a = static_cast<int>(counter_uniform(c.seed, 1, 2 * p, f.size()));
        int b = static_cast<int>(counter_uniform(c.seed, 1, 2 * p + 1, f.size()));
        if (a == b) continue;
        Tournament start(f.graph, f.tournaments[a]);
        GameSet diff = f.tournaments[a] ^ f.tournaments[b];
        auto steps = reverse_neutral_subtournament(start, diff);
        Tournament cur = start;
        for (const auto& s : steps) cur = apply_generator_reversal(cur, s);
        t["reversal"].add(cur.bits() == f.tournaments[b] &&
                          static_cast<int>(steps.size()) <= game_count(diff) - 2);
      }

    if (g.num_vertices() < 2) continue;
    auto stats = crystal_statistics(g);
    auto check = verify_coupling(g, stats);
    t["coupling_formula"].add(check.formula_mismatches == 0);
    t["coupling_marginals"].add(check.marginal_failures == 0);
    t["coupling_contraction"].add(check.contraction_failures == 0);
    WalkKernel k(g);
    auto tv = mixing_time_exact(k);
    WeightedMetric metric(g, check.gamma);
    const double bound = std::ceil(std::log(4 * boost::rational_cast<double>(metric.diameter())) /
                                   boost::rational_cast<double>(check.alpha_min));
    t["mixing"].add(tv.monotone && tv.t_mix <= bound);
  }
  json checks = json::array();
  bool failed = false;
  for (const auto& [name, tally] : t) {
    failed |= tally.failures > 0;
    checks.push_back({{"name", name}, {"checked", tally.count}, {"failures", tally.failures}});
  }
  json j{{"config", config_json(c)}, {"fibers", graphs.size()}, {"checks", checks}, {"pass", !failed}};
  emit(c, j.dump(2) + "\n");
  return failed ? kLemma : kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coxeter tournaments: fibers, interchange graphs and random walks"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto add_common = [&](CLI::App* sub, bool randomized) {
    sub->add_option("--type", cfg.type, "root system: A, B, C or D")->capture_default_str();
    sub->add_option("--n", cfg.n, "number of players")->capture_default_str();
    sub->add_option("--score", cfg.score, "score sequence in half-units, comma separated")->allow_extra_args(false);
    sub->add_option("--cap", cfg.cap, "largest n for exhaustive enumeration (0: default)");
    sub->add_option("--out", cfg.out, "output file (default: stdout)");
    sub->add_option("--format", cfg.format, "json, dot or csv")->capture_default_str();
    sub->add_option("--threads", cfg.threads, "worker threads (0: all cores)");
    if (randomized) {
      sub->add_option("--seed", cfg.seed, "64-bit seed")->capture_default_str();
      sub->add_option("--steps", cfg.steps, "sampled steps or pairs");
    }
  };
  auto* fiber = app.add_subcommand("fiber", "list the tournaments with a given score");
  add_common(fiber, false);
  auto* graph = app.add_subcommand("graph", "interchange graph with metrics");
  add_common(graph, false);
  auto* networks = app.add_subcommand("networks", "network census and crystal statistics");
  add_common(networks, false);
  auto* walk = app.add_subcommand("walk", "total-variation curve and mixing time");
  add_common(walk, true);
  walk->add_option("--horizon", cfg.horizon, "curve length (default: until mixed)");
  auto* couple = app.add_subcommand("couple", "per-pair contraction table");
  add_common(couple, true);
  auto* verify = app.add_subcommand("verify", "run every lemma check over the fibers");
  add_common(verify, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kInvalid;
  }
  cfg.command = app.get_subcommands().front()->get_name();

  try {
    if (cfg.threads < 0) throw InvalidInput("--threads must be nonnegative");
    set_thread_count(cfg.threads);
    if (cfg.command == "fiber") return cmd_fiber(cfg);
    if (cfg.command == "graph") return cmd_graph(cfg);
    if (cfg.command == "networks") return cmd_networks(cfg);
    if (cfg.command == "walk") return cmd_walk(cfg);
    if (cfg.command == "couple") return cmd_couple(cfg);
    return cmd_verify(cfg);
  } catch (const InvalidInput& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kInvalid;
  } catch (const InfeasibleScore& e) {
    std::cerr << "infeasible score: " << e.what() << "\n";
    return kInfeasible;
  } catch (const CapExceeded& e) {
    std::cerr << "cap exceeded: " << e.what() << " (rerun with --cap " << e.required_cap() << ")\n";
    return kCap;
  } catch (const LemmaViolation& e) {
    std::cerr << "lemma violation: " << e.what() << "\n";
    return kLemma;
  }
}
