#include <algorithm>
#include <set>
#include <sstream>

#include "coxeter/errors.hpp"
#include "coxeter/interchange.hpp"
#include "coxeter/parallel.hpp"

namespace coxeter {

std::string_view to_string(NetworkClass c) {
  switch (c) {
    case NetworkClass::SingleDiamond: return "single_diamond";
    case NetworkClass::DoubleDiamond: return "double_diamond";
    case NetworkClass::QuadrupleDiamond: return "quadruple_diamond";
    case NetworkClass::SplitDiamond: return "split_diamond";
    case NetworkClass::HeavyDiamond: return "heavy_diamond";
    case NetworkClass::Unclassified: return "unclassified";
  }
  return "?";
}

std::string_view to_string(ProjectionClass c) {
  switch (c) {
    case ProjectionClass::Disjoint: return "disjoint";
    case ProjectionClass::Square: return "square";
    case ProjectionClass::Tent: return "tent";
    case ProjectionClass::Fork: return "fork";
    case ProjectionClass::Hanger: return "hanger";
    case ProjectionClass::Other: return "other";
  }
  return "?";
}

namespace {

std::vector<int> common_neighbors(const InterchangeGraph& g, int u, int v) {
  std::vector<int> out;
  const auto& a = g.neighbors(u);
  const auto& b = g.neighbors(v);
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i].vertex < b[j].vertex) ++i;
    else if (b[j].vertex < a[i].vertex) ++j;
    else {
      out.push_back(a[i].vertex);
      ++i;
      ++j;
    }
  }
  return out;
}

bool at_distance_two(const InterchangeGraph& g, int u, int v) {
  return u != v && g.multiplicity(u, v) == 0 && !common_neighbors(g, u, v).empty();
}

}  // namespace

Network interchange_network(const InterchangeGraph& g, int u, int v) {
  if (u < 0 || v < 0 || u >= g.num_vertices() || v >= g.num_vertices()) throw InvalidInput("vertex out of range");
  Network net;
  net.u = u;
  net.v = v;
  if (u == v || g.multiplicity(u, v) != 0) throw InvalidInput("network endpoints are not at distance two");
  net.midpoints = common_neighbors(g, u, v);
  if (net.midpoints.empty()) throw InvalidInput("network endpoints are not at distance two");
  for (int m : net.midpoints) net.paths.push_back({g.multiplicity(u, m), g.multiplicity(m, v)});
  return net;
}

std::vector<std::pair<int, int>> network_signature(const Network& net) {
  auto forward = net.paths;
  auto backward = net.paths;
  for (auto& [a, b] : backward) std::swap(a, b);
  std::sort(forward.begin(), forward.end());
  std::sort(backward.begin(), backward.end());
  return std::min(forward, backward);
}

const std::vector<std::pair<int, int>>& heavy_diamond_signature() {
  static const std::vector<std::pair<int, int>> sig = {{1, 2}, {1, 2}};
  return sig;
}

NetworkClass classify_signature(const std::vector<std::pair<int, int>>& signature) {
  using P = std::vector<std::pair<int, int>>;
  if (signature == P{{1, 1}, {1, 1}}) return NetworkClass::SingleDiamond;
  if (signature == P{{1, 2}, {2, 1}}) return NetworkClass::DoubleDiamond;
  if (signature == P{{2, 2}, {2, 2}}) return NetworkClass::QuadrupleDiamond;
  if (signature == P{{1, 1}, {1, 1}, {2, 2}}) return NetworkClass::SplitDiamond;
  if (signature == heavy_diamond_signature()) return NetworkClass::HeavyDiamond;
  return NetworkClass::Unclassified;
}

ProjectionClass projection_class(const CompleteSignedGraph& graph, GameSet difference) {
  if (game_count(difference) == 6) return ProjectionClass::Disjoint;
  if (game_count(difference) != 4) return ProjectionClass::Other;
  std::vector<int> degree(graph.n(), 0);
  std::set<std::pair<int, int>> pairs;
  int halves = 0, loops = 0, pair_games = 0, loop_player = -1;
  for (GameSet r = difference; r; r &= r - 1) {
    const Game& game = graph.game(__builtin_ctzll(r));
    switch (game.kind) {
      case GameKind::Half: ++halves; ++degree[game.first]; break;
      case GameKind::Loop: ++loops; loop_player = game.first; break;
      default:
        ++pair_games;
        ++degree[game.first];
        ++degree[game.second];
        pairs.insert({game.first, game.second});
        break;
    }
  }
  std::vector<int> touched;
  for (int p = 0; p < graph.n(); ++p)
    if (degree[p] > 0) touched.push_back(degree[p]);
  std::sort(touched.begin(), touched.end());
  if (loops == 1 && pair_games == 3 && pairs.size() == 3 && touched == std::vector<int>{2, 2, 2} &&
      degree[loop_player] == 2)
    return ProjectionClass::Hanger;
  if (halves == 2 && pair_games == 2 && loops == 0) return ProjectionClass::Fork;
  if (pair_games == 4 && loops == 0 && halves == 0) {
    if (touched == std::vector<int>{2, 2, 2, 2}) return ProjectionClass::Square;
    if (touched == std::vector<int>{2, 2, 4}) return ProjectionClass::Tent;
  }
  return ProjectionClass::Other;
}

NetworkClassification classify_network(const InterchangeGraph& g, const Network& net) {
  NetworkClassification out;
  out.network = classify_signature(network_signature(net));
  const auto& graph = g.signed_graph();
  const GameSet diff = g.fiber().tournaments[net.u] ^ g.fiber().tournaments[net.v];
  out.projection = projection_class(graph, diff);
  for (GameSet r = diff; r; r &= r - 1) out.loops_in_difference += graph.game(__builtin_ctzll(r)).kind == GameKind::Loop;
  const bool type_c = graph.root_type() == RootType::C;
  switch (out.projection) {
    case ProjectionClass::Disjoint: {
      static const NetworkClass by_loops[] = {NetworkClass::SingleDiamond, NetworkClass::DoubleDiamond,
                                              NetworkClass::QuadrupleDiamond};
      out.consistent = out.loops_in_difference <= 2 && out.network == by_loops[out.loops_in_difference];
      break;
    }
    case ProjectionClass::Square: out.consistent = out.network == NetworkClass::SingleDiamond; break;
    case ProjectionClass::Fork: out.consistent = !type_c && out.network == NetworkClass::SingleDiamond; break;
    case ProjectionClass::Tent:
      out.consistent = out.network == (type_c ? NetworkClass::SplitDiamond : NetworkClass::SingleDiamond);
      break;
    case ProjectionClass::Hanger:
      out.consistent = type_c && (out.network == NetworkClass::DoubleDiamond || out.network == NetworkClass::HeavyDiamond);
      break;
    case ProjectionClass::Other: out.consistent = false; break;
  }
  if (out.network == NetworkClass::Unclassified) out.consistent = false;
  return out;
}

ExtendedNetwork extended_network(const InterchangeGraph& g, int u, int v, int vertex_cap) {
  Network seed = interchange_network(g, u, v);
  ExtendedNetwork out;
  out.seed_class = classify_signature(network_signature(seed));
  std::set<int> vertices{u, v};
  std::set<std::pair<int, int>> edges;
  std::set<std::pair<int, int>> done;
  auto absorb = [&](const Network& net) {
    for (int m : net.midpoints) {
      vertices.insert(m);
      edges.insert(std::minmax(net.u, m));
      edges.insert(std::minmax(m, net.v));
    }
  };
  absorb(seed);
  done.insert(std::minmax(u, v));
  bool grew = true;
  while (grew) {
    grew = false;
    std::vector<int> list(vertices.begin(), vertices.end());
    for (std::size_t a = 0; a < list.size(); ++a)
      for (std::size_t b = a + 1; b < list.size(); ++b) {
        auto key = std::make_pair(list[a], list[b]);
        if (done.count(key) || !at_distance_two(g, list[a], list[b])) continue;
        done.insert(key);
        std::size_t before = vertices.size() + edges.size();
        absorb(interchange_network(g, list[a], list[b]));
        if (vertices.size() + edges.size() != before) grew = true;
        if (static_cast<int>(vertices.size()) > vertex_cap)
          throw CapExceeded("extended network grew past " + std::to_string(vertex_cap) + " vertices", vertex_cap);
      }
  }
  out.vertices.assign(vertices.begin(), vertices.end());
  for (auto [a, b] : edges) out.edges.push_back({a, b, g.multiplicity(a, b), 0, 0});
  out.crystal = out.seed_class == NetworkClass::SplitDiamond || out.seed_class == NetworkClass::HeavyDiamond;
  return out;
}

bool has_crystal_shape(const ExtendedNetwork& net) {
  std::map<int, std::vector<int>> incident;
  for (const auto& e : net.edges) {
    incident[e.u].push_back(e.multiplicity);
    incident[e.v].push_back(e.multiplicity);
  }
  if (incident.size() != net.vertices.size()) return false;
  for (auto& [v, mults] : incident) {
    std::sort(mults.begin(), mults.end());
    if (mults != std::vector<int>{1, 1, 2} && mults != std::vector<int>{2, 2}) return false;
  }
  return true;
}

int CrystalStatistics::crystal_degree(int u, int v) const {
  auto it = double_edge_degree.find(std::minmax(u, v));
  return it == double_edge_degree.end() ? 0 : it->second;
}

const std::vector<int>& CrystalStatistics::crystals_containing(int u, int v) const {
  static const std::vector<int> none;
  auto it = crystals_of_edge.find(std::minmax(u, v));
  return it == crystals_of_edge.end() ? none : it->second;
}

std::vector<std::pair<int, int>> distance_two_pairs(const InterchangeGraph& g) {
  std::vector<std::pair<int, int>> out;
  std::vector<int> mark(g.num_vertices(), -1);
  for (int u = 0; u < g.num_vertices(); ++u) {
    mark[u] = u;
    for (const auto& a : g.neighbors(u)) mark[a.vertex] = u;
    std::vector<int> found;
    for (const auto& a : g.neighbors(u))
      for (const auto& b : g.neighbors(a.vertex))
        if (b.vertex > u && mark[b.vertex] != u) {
          mark[b.vertex] = u;
          found.push_back(b.vertex);
        }
    std::sort(found.begin(), found.end());
    for (int v : found) out.push_back({u, v});
  }
  return out;
}

NetworkCensus network_census(const InterchangeGraph& g, const std::vector<std::pair<int, int>>& pairs) {
  std::vector<NetworkClassification> results(pairs.size());
  parallel_for(pairs.size(), [&](std::size_t k) {
    results[k] = classify_network(g, interchange_network(g, pairs[k].first, pairs[k].second));
  });
  NetworkCensus census;
  census.pairs = static_cast<long long>(pairs.size());
  for (const auto& r : results) {
    ++census.by_class[r.network];
    ++census.by_projection[{r.projection, r.network}];
    census.unclassified += r.network == NetworkClass::Unclassified;
    census.inconsistent += !r.consistent;
  }
  return census;
}

namespace {

std::vector<ExtendedNetwork> distinct_extended_networks(const InterchangeGraph& g, bool crystals_only) {
  auto pairs = distance_two_pairs(g);
  std::vector<NetworkClass> classes(pairs.size());
  parallel_for(pairs.size(), [&](std::size_t k) {
    classes[k] = classify_signature(network_signature(interchange_network(g, pairs[k].first, pairs[k].second)));
  });
  std::vector<ExtendedNetwork> out;
  std::set<std::vector<int>> seen;
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    bool is_crystal_seed = classes[k] == NetworkClass::SplitDiamond || classes[k] == NetworkClass::HeavyDiamond;
    if (crystals_only && !is_crystal_seed) continue;
    ExtendedNetwork net = extended_network(g, pairs[k].first, pairs[k].second);
    if (seen.insert(net.vertices).second) out.push_back(std::move(net));
  }
  return out;
}

CrystalStatistics collect_crystals(const InterchangeGraph& g, const std::vector<ExtendedNetwork>& networks) {
  CrystalStatistics stats;
  for (const auto& net : networks)
    if (net.crystal) stats.crystals.push_back(net);
  for (std::size_t c = 0; c < stats.crystals.size(); ++c)
    for (const auto& e : stats.crystals[c].edges) {
      stats.crystals_of_edge[{e.u, e.v}].push_back(static_cast<int>(c));
      if (e.multiplicity == 2) stats.gamma = std::max(stats.gamma, ++stats.double_edge_degree[{e.u, e.v}]);
    }
  (void)g;
  return stats;
}

}  // namespace

CrystalStatistics crystal_statistics(const InterchangeGraph& g) {
  return collect_crystals(g, distinct_extended_networks(g, true));
}

ExtendedNetworkReport extended_networks_and_crystals(const InterchangeGraph& g) {
  ExtendedNetworkReport report;
  report.networks = distinct_extended_networks(g, false);
  report.crystals = collect_crystals(g, report.networks);

  for (const auto& net : report.networks) {
    if (net.crystal) {
      report.crystal_shape_violations += !has_crystal_shape(net);
    } else {
      // A stable network is exactly one diamond: two endpoints and their midpoints.
      report.stable_violations += net.vertices.size() > 4 || net.seed_class == NetworkClass::Unclassified;
    }
  }

  std::map<std::pair<int, int>, std::vector<int>> owners;
  for (std::size_t k = 0; k < report.networks.size(); ++k)
    for (const auto& e : report.networks[k].edges) owners[{e.u, e.v}].push_back(static_cast<int>(k));
  std::map<std::pair<int, int>, int> shared;
  for (const auto& [edge, list] : owners)
    for (std::size_t a = 0; a < list.size(); ++a)
      for (std::size_t b = a + 1; b < list.size(); ++b) ++shared[{list[a], list[b]}];
  for (const auto& [pair, count] : shared) report.shared_edge_violations += count > 1;

  for (const auto& [edge, list] : report.crystals.crystals_of_edge)
    if (g.multiplicity(edge.first, edge.second) == 1 && list.size() > 1) ++report.crystal_single_edge_shares;

  const int d = g.num_vertices() ? g.degree(0) : 0;
  const int n = g.fiber().n();
  for (const auto& [edge, deg] : report.crystals.double_edge_degree) {
    report.crystal_degree_violations += deg > std::min(d, 2 * n);
    report.sharper_bound_violations += deg > 2 * (n - 2);
  }
  return report;
}

std::string crystal_statistics_csv(const InterchangeGraph& g, const CrystalStatistics& stats) {
  const int m = g.signed_graph().num_games();
  std::ostringstream out;
  out << "u,v,crystal_degree\n";
  for (const auto& e : g.edges())
    if (e.multiplicity == 2)
      out << to_bitstring(g.fiber().tournaments[e.u], m) << ',' << to_bitstring(g.fiber().tournaments[e.v], m) << ','
          << stats.crystal_degree(e.u, e.v) << '\n';
  return out.str();
}

}  // namespace coxeter
