#include "coxeter/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>

#include <boost/multiprecision/cpp_int.hpp>

#include "coxeter/errors.hpp"
#include "coxeter/parallel.hpp"

namespace coxeter {

WalkKernel::WalkKernel(const InterchangeGraph& graph) : graph_(&graph), degree_(0) {
  if (graph.num_vertices() == 0) throw InvalidInput("walk on an empty graph");
  degree_ = graph.degree(0);
  for (int v = 1; v < graph.num_vertices(); ++v)
    if (graph.degree(v) != degree_) throw LemmaViolation("interchange graph is not regular");
}

std::map<int, Rational> WalkKernel::row(int x) const {
  std::map<int, Rational> out;
  if (degree_ == 0) {
    out[x] = Rational(1);
    return out;
  }
  out[x] = Rational(1, 2);
  for (const auto& nb : graph_->neighbors(x)) out[nb.vertex] += Rational(nb.multiplicity, 2 * degree_);
  return out;
}

int WalkKernel::slot_target(int x, int slot) const {
  for (const auto& nb : graph_->neighbors(x)) {
    if (slot < nb.multiplicity) return nb.vertex;
    slot -= nb.multiplicity;
  }
  throw InvalidInput("edge slot out of range");
}

std::uint64_t counter_hash(std::uint64_t seed, std::uint64_t stream, std::uint64_t step, std::uint64_t draw) {
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  return mix(mix(mix(mix(seed) ^ stream) ^ step) ^ draw);
}

std::uint64_t counter_uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t step, std::uint64_t bound) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
  for (std::uint64_t draw = 1;; ++draw) {
    std::uint64_t r = counter_hash(seed, stream, step, draw);
    if (r < limit) return r % bound;
  }
}

StepDraw draw_step(std::uint64_t seed, std::uint64_t stream, std::uint64_t step, int degree) {
  StepDraw d;
  d.hold = (counter_hash(seed, stream, step, 0) >> 63) == 0;
  d.slot = degree > 0 ? static_cast<int>(counter_uniform(seed, stream, step, degree)) : 0;
  return d;
}

std::vector<int> run_walk(const WalkKernel& kernel, int start, long long steps, std::uint64_t seed,
                          std::uint64_t stream) {
  if (start < 0 || start >= kernel.graph().num_vertices()) throw InvalidInput("walk start out of range");
  std::vector<int> path{start};
  int x = start;
  for (long long t = 1; t <= steps; ++t) {
    StepDraw d = draw_step(seed, stream, t, kernel.degree());
    if (!d.hold && kernel.degree() > 0) x = kernel.slot_target(x, d.slot);
    path.push_back(x);
  }
  return path;
}

std::vector<long long> walk_occupancy(const WalkKernel& kernel, int start, long long steps, std::uint64_t seed,
                                      std::uint64_t stream) {
  if (start < 0 || start >= kernel.graph().num_vertices()) throw InvalidInput("walk start out of range");
  std::vector<long long> counts(kernel.graph().num_vertices(), 0);
  int x = start;
  for (long long t = 1; t <= steps; ++t) {
    StepDraw d = draw_step(seed, stream, t, kernel.degree());
    if (!d.hold && kernel.degree() > 0) x = kernel.slot_target(x, d.slot);
    ++counts[x];
  }
  return counts;
}

std::vector<double> occupancy_variance(const WalkKernel& kernel, long long steps) {
  const auto& g = kernel.graph();
  const int n = g.num_vertices();
  const int d = kernel.degree();
  const double pi = 1.0 / n;
  std::vector<double> out(n, 0.0);
  if (n == 1) return out;
  parallel_for(n, [&](std::size_t y) {
    std::vector<double> p(n, 0.0), next(n);
    p[y] = 1.0;
    double z = 1.0;
    for (int t = 0; t < 1000000; ++t) {
      for (int x = 0; x < n; ++x) {
        double acc = 0.5 * p[x];
        for (const auto& nb : g.neighbors(x)) acc += p[nb.vertex] * nb.multiplicity / (2.0 * d);
        next[x] = acc;
      }
      p.swap(next);
      z += p[y] - pi;
      if (std::abs(p[y] - pi) < 1e-15) break;
    }
    out[y] = static_cast<double>(steps) * pi * (2.0 * z - 1.0 - pi);
  });
  return out;
}

namespace {

using BigInt = boost::multiprecision::cpp_int;

struct StartState {
  std::vector<double> p;
  std::vector<BigInt> counts;  // (d I + A)^t e_x, when tracked exactly
  bool exact = false;
};

double tv_to_uniform(const std::vector<double>& p) {
  const double u = 1.0 / static_cast<double>(p.size());
  double acc = 0;
  for (double x : p) acc += std::abs(x - u);
  return acc / 2;
}

// TV of counts / (2d)^t against uniform, exactly, then rounded.
double exact_tv(const std::vector<BigInt>& counts, const BigInt& total) {
  const BigInt n = counts.size();
  BigInt acc = 0;
  for (const auto& c : counts) {
    BigInt diff = n * c - total;
    acc += diff < 0 ? BigInt(-diff) : diff;
  }
  // acc / (2 n total), kept exact until the final division.
  BigInt denom = 2 * n * total;
  BigInt scaled = (acc << 60) / denom;
  return static_cast<double>(scaled) / std::ldexp(1.0, 60);
}

TvReport tv_iteration(const WalkKernel& kernel, int horizon, bool stop_at_quarter) {
  if (horizon < 0) throw InvalidInput("horizon must be nonnegative");
  const auto& g = kernel.graph();
  const int n = g.num_vertices();
  const int d = kernel.degree();
  TvReport report;
  report.start_t_mix.assign(n, -1);
  if (n == 1) {
    report.tau.assign(horizon + 1, 0.0);
    report.start_t_mix[0] = 0;
    report.t_mix = 0;
    return report;
  }
  const bool all_exact = n <= 64;
  std::vector<std::vector<double>> per_start(n);
  std::vector<double> spot_error(n, 0.0);
  std::vector<int> spot_count(n, 0);
  std::vector<char> monotone(n, 1);

  parallel_for(n, [&](std::size_t x) {
    std::vector<double> p(n, 0.0), next(n);
    p[x] = 1.0;
    const bool exact = all_exact || x == 0;
    std::vector<BigInt> counts, next_counts;
    BigInt total = 1;
    if (exact) {
      counts.assign(n, 0);
      counts[x] = 1;
      next_counts.assign(n, 0);
    }
    auto& curve = per_start[x];
    for (int t = 0; t <= horizon; ++t) {
      double tv = tv_to_uniform(p);
      if (exact && t % 10 == 0) {
        spot_error[x] = std::max(spot_error[x], std::abs(tv - exact_tv(counts, total)));
        ++spot_count[x];
      }
      if (!curve.empty() && tv > curve.back() + 1e-12) monotone[x] = 0;
      curve.push_back(tv);
      if (report.start_t_mix[x] < 0 && tv <= 0.25) {
        report.start_t_mix[x] = t;
        if (stop_at_quarter) break;
      }
      if (t == horizon) break;
      for (int y = 0; y < n; ++y) {
        double acc = 0.5 * p[y];
        for (const auto& nb : g.neighbors(y)) acc += p[nb.vertex] * nb.multiplicity / (2.0 * d);
        next[y] = acc;
      }
      p.swap(next);
      if (exact) {
        for (int y = 0; y < n; ++y) {
          BigInt acc = counts[y] * d;
          for (const auto& nb : g.neighbors(y)) acc += counts[nb.vertex] * nb.multiplicity;
          next_counts[y] = std::move(acc);
        }
        counts.swap(next_counts);
        total *= 2 * d;
      }
    }
  });

  std::size_t longest = 0;
  for (const auto& c : per_start) longest = std::max(longest, c.size());
  report.tau.assign(longest, 0.0);
  for (int x = 0; x < n; ++x) {
    // A start that stopped early stays at or below its last value.
    for (std::size_t t = 0; t < longest; ++t) {
      double v = t < per_start[x].size() ? per_start[x][t] : per_start[x].back();
      report.tau[t] = std::max(report.tau[t], v);
    }
    report.monotone &= monotone[x] != 0;
    report.spot_checks += spot_count[x];
    report.max_spot_error = std::max(report.max_spot_error, spot_error[x]);
  }
  for (std::size_t t = 1; t < report.tau.size(); ++t)
    if (report.tau[t] > report.tau[t - 1] + 1e-12) report.monotone = false;
  report.t_mix = 0;
  for (int x = 0; x < n; ++x) {
    if (report.start_t_mix[x] < 0) {
      report.t_mix = -1;
      break;
    }
    report.t_mix = std::max(report.t_mix, report.start_t_mix[x]);
  }
  return report;
}

}  // namespace

TvReport exact_tv_curve(const WalkKernel& kernel, int horizon) { return tv_iteration(kernel, horizon, false); }

TvReport mixing_time_exact(const WalkKernel& kernel, int safety_horizon) {
  TvReport r = tv_iteration(kernel, safety_horizon, true);
  if (r.t_mix < 0) throw LemmaViolation("walk did not mix within the safety horizon");
  return r;
}

std::string tv_curve_csv(const TvReport& report) {
  std::ostringstream out;
  out.precision(17);
  out << "t,tau\n";
  for (std::size_t t = 0; t < report.tau.size(); ++t) out << t << ',' << report.tau[t] << '\n';
  return out.str();
}

WeightedMetric::WeightedMetric(const InterchangeGraph& graph, int gamma) : graph_(&graph), gamma_(gamma) {
  if (gamma < 0) throw InvalidInput("gamma must be nonnegative");
}

std::int64_t WeightedMetric::edge_units(int multiplicity) const {
  if (gamma_ == 0) return 1;
  return multiplicity == 2 ? gamma_ : gamma_ + 1;
}

std::vector<std::int64_t> WeightedMetric::dijkstra(int source) const {
  const auto& g = *graph_;
  std::vector<std::int64_t> dist(g.num_vertices(), std::numeric_limits<std::int64_t>::max());
  using Item = std::pair<std::int64_t, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
  dist[source] = 0;
  queue.push({0, source});
  while (!queue.empty()) {
    auto [d, x] = queue.top();
    queue.pop();
    if (d != dist[x]) continue;
    for (const auto& nb : g.neighbors(x)) {
      std::int64_t nd = d + edge_units(nb.multiplicity);
      if (nd < dist[nb.vertex]) {
        dist[nb.vertex] = nd;
        queue.push({nd, nb.vertex});
      }
    }
  }
  return dist;
}

std::int64_t WeightedMetric::distance_units(int a, int b) const {
  if (a == b) return 0;
  if (int m = graph_->multiplicity(a, b)) return edge_units(m);
  std::int64_t d = dijkstra(a)[b];
  if (d == std::numeric_limits<std::int64_t>::max()) throw LemmaViolation("interchange graph is disconnected");
  return d;
}

Rational WeightedMetric::weight(int u, int v) const {
  int m = graph_->multiplicity(u, v);
  if (!m) throw InvalidInput("weight of a non-edge");
  return Rational(edge_units(m), scale());
}

Rational WeightedMetric::diameter() const {
  std::vector<std::int64_t> ecc(graph_->num_vertices());
  parallel_for(ecc.size(), [&](std::size_t x) {
    auto d = dijkstra(static_cast<int>(x));
    ecc[x] = *std::max_element(d.begin(), d.end());
  });
  std::int64_t best = ecc.empty() ? 0 : *std::max_element(ecc.begin(), ecc.end());
  if (best == std::numeric_limits<std::int64_t>::max()) throw LemmaViolation("interchange graph is disconnected");
  return Rational(best, scale());
}

std::string_view to_string(CouplingCase c) {
  switch (c) {
    case CouplingCase::Unweighted: return "unweighted";
    case CouplingCase::Case1a: return "case_1a";
    case CouplingCase::Case1b: return "case_1b";
    case CouplingCase::Case2: return "case_2";
  }
  return "?";
}

namespace {

std::vector<Slot> slots_at(const InterchangeGraph& g, int x) {
  std::vector<Slot> out;
  for (const auto& nb : g.neighbors(x))
    for (int i = 0; i < nb.multiplicity; ++i) out.push_back({nb.vertex, i});
  return out;
}

// Edges of a crystal at x other than the one to `skip`, split by multiplicity.
void crystal_edges_at(const ExtendedNetwork& k, int x, int skip, std::vector<int>& singles, std::vector<int>& doubles) {
  for (const auto& e : k.edges) {
    int other = e.u == x ? e.v : (e.v == x ? e.u : -1);
    if (other < 0 || other == skip) continue;
    (e.multiplicity == 2 ? doubles : singles).push_back(other);
  }
  std::sort(singles.begin(), singles.end());
  std::sort(doubles.begin(), doubles.end());
}

}  // namespace

EdgePairing edge_pairing_psi(const InterchangeGraph& g, const CrystalStatistics& crystals, int u, int v) {
  if (u < 0 || v < 0 || u >= g.num_vertices() || v >= g.num_vertices()) throw InvalidInput("vertex out of range");
  const int mult = g.multiplicity(u, v);
  if (!mult) throw InvalidInput("coupling endpoints are not adjacent");
  EdgePairing psi;
  psi.u = u;
  psi.v = v;
  const bool weighted = g.signed_graph().root_type() == RootType::C && crystals.gamma > 0;
  psi.gamma = weighted ? crystals.gamma : 0;
  const auto& in_crystals = crystals.crystals_containing(u, v);
  psi.gamma_prime = static_cast<int>(in_crystals.size());

  std::map<Slot, Slot> map;
  std::map<Slot, bool> meet;
  auto assign = [&](Slot from, Slot to, bool coalesce) {
    if (map.count(from)) throw LemmaViolation("edge slot paired twice");
    map[from] = to;
    meet[from] = coalesce;
  };
  auto require = [&](int a, int b, int m, const char* what) {
    if (g.multiplicity(a, b) != m) throw LemmaViolation(what);
  };

  if (!weighted) {
    psi.kind = CouplingCase::Unweighted;
    for (int i = 0; i < mult; ++i) assign({v, i}, {u, i}, true);
  } else if (mult == 1 && in_crystals.empty()) {
    psi.kind = CouplingCase::Case1a;
    assign({v, 0}, {u, 0}, true);
  } else if (mult == 1) {
    if (in_crystals.size() > 1) throw LemmaViolation("single edge lies in two crystals");
    psi.kind = CouplingCase::Case1b;
    const auto& k = crystals.crystals[in_crystals[0]];
    std::vector<int> us, ud, vs, vd;
    crystal_edges_at(k, u, v, us, ud);
    crystal_edges_at(k, v, u, vs, vd);
    if (us.size() != 1 || ud.size() != 1 || vs.size() != 1 || vd.size() != 1)
      throw LemmaViolation("crystal vertex without two single edges and one double edge");
    const int a = us[0], z = ud[0], e = vs[0], y = vd[0];
    assign({v, 0}, {y, 0}, false);
    assign({a, 0}, {y, 1}, false);
    assign({z, 0}, {u, 0}, false);
    assign({z, 1}, {e, 0}, false);
    require(a, y, 2, "case 1b outcome pair is not double-joined");
    require(z, e, 2, "case 1b outcome pair is not double-joined");
  } else {
    psi.kind = CouplingCase::Case2;
    for (int i = 0; i < 2; ++i) assign({v, i}, {u, i}, true);
    for (int c : in_crystals) {
      const auto& k = crystals.crystals[c];
      std::vector<int> us, ud, vs, vd;
      crystal_edges_at(k, u, v, us, ud);
      crystal_edges_at(k, v, u, vs, vd);
      if (us.size() == 2 && ud.empty() && vs.empty() && vd.size() == 1) {
        assign({us[0], 0}, {vd[0], 0}, false);
        assign({us[1], 0}, {vd[0], 1}, false);
        require(us[0], vd[0], 1, "case 2 outcome pair is not single-joined");
        require(us[1], vd[0], 1, "case 2 outcome pair is not single-joined");
      } else if (us.empty() && ud.size() == 1 && vs.size() == 2 && vd.empty()) {
        assign({ud[0], 0}, {vs[0], 0}, false);
        assign({ud[0], 1}, {vs[1], 0}, false);
        require(ud[0], vs[0], 1, "case 2 outcome pair is not single-joined");
        require(ud[0], vs[1], 1, "case 2 outcome pair is not single-joined");
      } else {
        throw LemmaViolation("crystal around a double edge has an unexpected shape");
      }
    }
  }

  // Everything else is paired across the diamond through x, u, v and y.
  for (const auto& nb : g.neighbors(u)) {
    if (nb.vertex == v || map.count({nb.vertex, 0})) continue;
    Network net = interchange_network(g, nb.vertex, v);
    if (net.midpoints.size() != 2) throw LemmaViolation("unpaired slot whose network is not a diamond");
    const int y = net.midpoints[0] == u ? net.midpoints[1] : net.midpoints[0];
    if (g.multiplicity(v, y) != nb.multiplicity) throw LemmaViolation("opposite diamond edges differ in multiplicity");
    for (int i = 0; i < nb.multiplicity; ++i) assign({nb.vertex, i}, {y, i}, false);
  }

  psi.from = slots_at(g, u);
  std::vector<Slot> targets = slots_at(g, v);
  std::vector<Slot> images;
  for (const auto& s : psi.from) {
    auto it = map.find(s);
    if (it == map.end()) throw LemmaViolation("edge slot left unpaired");
    psi.to.push_back(it->second);
    psi.coalescing.push_back(meet[s]);
    images.push_back(it->second);
  }
  std::sort(images.begin(), images.end());
  if (images != targets) throw LemmaViolation("psi is not a bijection onto the slots at v");
  return psi;
}

namespace {

std::pair<int, int> apply_draw(const EdgePairing& psi, bool hold, int slot) {
  const Slot& a = psi.from[slot];
  const Slot& b = psi.to[slot];
  const bool hold2 = psi.coalescing[slot] ? !hold : hold;
  return {hold ? psi.u : a.neighbor, hold2 ? psi.v : b.neighbor};
}

}  // namespace

std::pair<int, int> coupled_step(const WalkKernel& kernel, const EdgePairing& psi, std::uint64_t seed,
                                 std::uint64_t step) {
  if (kernel.degree() == 0) return {psi.u, psi.v};
  StepDraw d = draw_step(seed, 0, step, kernel.degree());
  return apply_draw(psi, d.hold, d.slot);
}

std::map<std::pair<int, int>, Rational> coupling_distribution(const WalkKernel& kernel, const EdgePairing& psi) {
  std::map<std::pair<int, int>, Rational> out;
  const int d = kernel.degree();
  for (int slot = 0; slot < d; ++slot)
    for (bool hold : {true, false}) out[apply_draw(psi, hold, slot)] += Rational(1, 2 * d);
  return out;
}

bool marginals_match(const WalkKernel& kernel, const EdgePairing& psi) {
  std::map<int, Rational> first, second;
  for (const auto& [pair, p] : coupling_distribution(kernel, psi)) {
    first[pair.first] += p;
    second[pair.second] += p;
  }
  auto clean = [](std::map<int, Rational> m) {
    for (auto it = m.begin(); it != m.end();) it = it->second.numerator() == 0 ? m.erase(it) : std::next(it);
    return m;
  };
  return clean(first) == clean(kernel.row(psi.u)) && clean(second) == clean(kernel.row(psi.v));
}

Rational expected_coupled_weight(const WalkKernel& kernel, const EdgePairing& psi, const WeightedMetric& metric) {
  Rational acc(0);
  for (const auto& [pair, p] : coupling_distribution(kernel, psi)) acc += p * metric.distance(pair.first, pair.second);
  return acc;
}

Rational expected_weight_formula(const EdgePairing& psi, int degree) {
  const Rational d(degree);
  const Rational gamma(psi.gamma);
  const Rational one(1), two(2);
  switch (psi.kind) {
    case CouplingCase::Unweighted: {
      // Each fixed slot coalesces; everything else keeps distance one.
      Rational fixed(static_cast<std::int64_t>(std::count(psi.coalescing.begin(), psi.coalescing.end(), true)));
      return Rational(1) - fixed / d;
    }
    case CouplingCase::Case1a: return (one - one / d) * (one + one / gamma);
    case CouplingCase::Case1b: return (one - two / (d * (one + gamma))) * (one + one / gamma);
    case CouplingCase::Case2: return one - (two * gamma - Rational(psi.gamma_prime)) / (d * gamma);
  }
  return 0;
}

CouplingCheck verify_coupling(const InterchangeGraph& graph, const CrystalStatistics& crystals) {
  CouplingCheck check;
  const bool weighted = graph.signed_graph().root_type() == RootType::C && crystals.gamma > 0;
  check.gamma = weighted ? crystals.gamma : 0;
  if (graph.num_vertices() < 2) return check;
  WalkKernel kernel(graph);
  WeightedMetric metric(graph, check.gamma);
  auto edges = graph.edges();
  struct Result {
    CouplingCase kind;
    bool formula, marginal, contracts, case2_bound;
    Rational alpha;
  };
  std::vector<Result> results(edges.size());
  const Rational d(kernel.degree());
  parallel_for(edges.size(), [&](std::size_t k) {
    auto psi = edge_pairing_psi(graph, crystals, edges[k].u, edges[k].v);
    Rational e = expected_coupled_weight(kernel, psi, metric);
    Rational w = metric.weight(edges[k].u, edges[k].v);
    Result r;
    r.kind = psi.kind;
    r.formula = e == expected_weight_formula(psi, kernel.degree());
    r.marginal = marginals_match(kernel, psi);
    r.contracts = e < w;
    r.case2_bound = psi.kind != CouplingCase::Case2 || e <= (Rational(1) - Rational(1) / d) * w;
    r.alpha = Rational(1) - e / w;
    results[k] = r;
  });
  check.pairs = static_cast<long long>(edges.size());
  for (const auto& r : results) {
    ++check.by_case[r.kind];
    check.formula_mismatches += !r.formula;
    check.marginal_failures += !r.marginal;
    check.contraction_failures += !r.contracts || !r.case2_bound;
    check.alpha_min = std::min(check.alpha_min, r.alpha);
  }
  return check;
}

}  // namespace coxeter
