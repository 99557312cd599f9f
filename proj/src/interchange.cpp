#include "coxeter/interchange.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <sstream>

#include "coxeter/errors.hpp"
#include "coxeter/parallel.hpp"

namespace coxeter {

int default_cap(RootType type) {
  switch (type) {
    case RootType::A: return 6;
    case RootType::D: return 5;
    default: return 4;
  }
}

namespace {

void check_cap(RootType type, int n, int cap) {
  if (cap <= 0) cap = default_cap(type);
  if (n > cap)
    throw CapExceeded("n = " + std::to_string(n) + " exceeds the exhaustive cap " + std::to_string(cap) +
                          " for type " + std::string(1, to_char(type)),
                      n);
}

class FiberSearch {
 public:
  FiberSearch(const CompleteSignedGraph& g, const ScoreVector& target) : g_(g), m_(g.num_games()), n_(g.n()) {
    reach_.assign(static_cast<std::size_t>(m_ + 1) * n_, 0);
    for (int k = m_ - 1; k >= 0; --k) {
      auto v = g.win_vector(k);
      for (int p = 0; p < n_; ++p) reach_[k * n_ + p] = reach_[(k + 1) * n_ + p] + std::abs(v[p]);
    }
    target_ = target.halves;
  }

  int num_games() const { return m_; }

  /// Residual after fixing the first `depth` games to `prefix`, or empty if
  /// already infeasible.
  bool residual_for(GameSet prefix, int depth, std::vector<int>& residual) const {
    residual = target_;
    for (int k = 0; k < depth; ++k) {
      int s = contains(prefix, k) ? 1 : -1;
      auto v = g_.win_vector(k);
      for (int p = 0; p < n_; ++p) residual[p] -= s * v[p];
    }
    return feasible(depth, residual);
  }

  void run(int depth, GameSet bits, std::vector<int>& residual, std::vector<GameSet>& out) const {
    if (depth == m_) {
      out.push_back(bits);
      return;
    }
    auto v = g_.win_vector(depth);
    for (int s : {-1, 1}) {
      for (int p = 0; p < n_; ++p) residual[p] -= s * v[p];
      if (feasible(depth + 1, residual)) run(depth + 1, s > 0 ? bits | (GameSet{1} << depth) : bits, residual, out);
      for (int p = 0; p < n_; ++p) residual[p] += s * v[p];
    }
  }

 private:
  bool feasible(int depth, const std::vector<int>& residual) const {
    for (int p = 0; p < n_; ++p) {
      int r = reach_[depth * n_ + p];
      if (std::abs(residual[p]) > r || ((r - residual[p]) & 1)) return false;
    }
    return true;
  }

  const CompleteSignedGraph& g_;
  int m_, n_;
  std::vector<int> reach_;
  std::vector<int> target_;
};

}  // namespace

int Fiber::index_of(GameSet bits) const {
  auto it = std::lower_bound(tournaments.begin(), tournaments.end(), bits);
  if (it == tournaments.end() || *it != bits) return -1;
  return static_cast<int>(it - tournaments.begin());
}

Fiber enumerate_fiber(RootType type, int n, const ScoreVector& score, int cap) {
  check_cap(type, n, cap);
  Fiber fiber;
  fiber.graph = build_complete_graph(type, n);
  fiber.score = score;
  if (score.size() != n)
    throw InvalidInput("score has " + std::to_string(score.size()) + " entries, expected " + std::to_string(n));
  FiberSearch search(*fiber.graph, score);
  const int depth = std::min(search.num_games(), 6);
  std::vector<std::vector<GameSet>> shards(std::size_t{1} << depth);
  parallel_for(shards.size(), [&](std::size_t prefix) {
    std::vector<int> residual;
    if (search.residual_for(prefix, depth, residual)) search.run(depth, prefix, residual, shards[prefix]);
  });
  for (auto& s : shards) fiber.tournaments.insert(fiber.tournaments.end(), s.begin(), s.end());
  std::sort(fiber.tournaments.begin(), fiber.tournaments.end());
  return fiber;
}

std::vector<Fiber> enumerate_all_fibers(RootType type, int n, int cap) {
  check_cap(type, n, cap);
  auto graph = build_complete_graph(type, n);
  std::map<std::vector<int>, std::vector<GameSet>> groups;
  std::vector<int> s = graph->score(0).halves;
  // Gray-code walk: one game changes per step.
  GameSet bits = 0;
  groups[s].push_back(0);
  const GameSet total = GameSet{1} << graph->num_games();
  for (GameSet step = 1; step < total; ++step) {
    int k = __builtin_ctzll(step);
    bits ^= GameSet{1} << k;
    int delta = contains(bits, k) ? 2 : -2;
    auto v = graph->win_vector(k);
    for (int p = 0; p < n; ++p) s[p] += delta * v[p];
    groups[s].push_back(bits);
  }
  std::vector<Fiber> out;
  for (auto& [score, list] : groups) {
    Fiber f;
    f.graph = graph;
    f.score.halves = score;
    f.tournaments = std::move(list);
    std::sort(f.tournaments.begin(), f.tournaments.end());
    out.push_back(std::move(f));
  }
  return out;
}

std::vector<ScoreVector> enumerate_score_set(RootType type, int n, int cap) {
  std::vector<ScoreVector> out;
  for (auto& f : enumerate_all_fibers(type, n, cap)) out.push_back(f.score);
  return out;
}

InterchangeGraph::InterchangeGraph(Fiber fiber) : fiber_(std::move(fiber)) {
  const auto& index = generator_index(fiber_.root_type(), fiber_.n());
  adj_.resize(fiber_.size());
  parallel_for(adj_.size(), [&](std::size_t v) {
    const GameSet bits = fiber_.tournaments[v];
    index.for_each_copy(bits, [&](const GeneratorSupport& s, const GeneratorSupport::Orientation& o) {
      int w = fiber_.index_of(bits ^ s.games);
      if (w < 0) throw LemmaViolation("generator reversal left the fiber");
      adj_[v].push_back({w, s.multiplicity, s.games, o.template_id});
    });
    std::sort(adj_[v].begin(), adj_[v].end(), [](const Neighbor& a, const Neighbor& b) { return a.vertex < b.vertex; });
    for (std::size_t k = 1; k < adj_[v].size(); ++k)
      if (adj_[v][k].vertex == adj_[v][k - 1].vertex) throw LemmaViolation("two generators join the same pair");
  });
}

int InterchangeGraph::degree(int v) const {
  int d = 0;
  for (const auto& nb : adj_[v]) d += nb.multiplicity;
  return d;
}

int InterchangeGraph::multiplicity(int u, int v) const {
  const auto& list = adj_[u];
  auto it = std::lower_bound(list.begin(), list.end(), v, [](const Neighbor& a, int x) { return a.vertex < x; });
  return it != list.end() && it->vertex == v ? it->multiplicity : 0;
}

std::vector<InterchangeEdge> InterchangeGraph::edges() const {
  std::vector<InterchangeEdge> out;
  for (int u = 0; u < num_vertices(); ++u)
    for (const auto& nb : adj_[u])
      if (u < nb.vertex) out.push_back({u, nb.vertex, nb.multiplicity, nb.games, nb.template_id});
  return out;
}

InterchangeGraph build_interchange_graph(Fiber fiber) {
  if (fiber.empty()) throw InfeasibleScore("empty fiber: (" + to_string(fiber.score) + ") is not a score sequence");
  return InterchangeGraph(std::move(fiber));
}

std::vector<int> bfs_distances(const InterchangeGraph& g, int source) {
  std::vector<int> dist(g.num_vertices(), -1);
  std::deque<int> queue{source};
  dist[source] = 0;
  while (!queue.empty()) {
    int x = queue.front();
    queue.pop_front();
    for (const auto& nb : g.neighbors(x))
      if (dist[nb.vertex] < 0) {
        dist[nb.vertex] = dist[x] + 1;
        queue.push_back(nb.vertex);
      }
  }
  return dist;
}

GraphMetrics graph_metrics(const InterchangeGraph& g) {
  GraphMetrics m;
  m.num_vertices = g.num_vertices();
  for (int v = 0; v < m.num_vertices; ++v) m.num_edges += static_cast<int>(g.neighbors(v).size());
  m.num_edges /= 2;
  m.regular_degree = m.num_vertices ? g.degree(0) : 0;
  for (int v = 1; v < m.num_vertices; ++v)
    if (g.degree(v) != m.regular_degree) m.regular_degree = -1;
  std::vector<int> ecc(m.num_vertices, 0);
  parallel_for(ecc.size(), [&](std::size_t v) {
    auto dist = bfs_distances(g, static_cast<int>(v));
    int e = 0;
    for (int d : dist) e = d < 0 ? -1 : (e < 0 ? e : std::max(e, d));
    ecc[v] = e;
  });
  m.connected = std::none_of(ecc.begin(), ecc.end(), [](int e) { return e < 0; });
  m.diameter = m.connected ? (ecc.empty() ? 0 : *std::max_element(ecc.begin(), ecc.end())) : -1;
  return m;
}

nlohmann::json graph_to_json(const InterchangeGraph& g) {
  const int m = g.signed_graph().num_games();
  nlohmann::json vertices = nlohmann::json::array();
  for (GameSet bits : g.fiber().tournaments) vertices.push_back(to_bitstring(bits, m));
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& e : g.edges()) edges.push_back({e.u, e.v, e.multiplicity});
  return {{"type", std::string(1, to_char(g.fiber().root_type()))},
          {"n", g.fiber().n()},
          {"s", to_json(g.fiber().score)},
          {"vertices", vertices},
          {"edges", edges}};
}

std::string graph_to_dot(const InterchangeGraph& g) {
  const int m = g.signed_graph().num_games();
  std::ostringstream out;
  out << "graph interchange {\n";
  for (int v = 0; v < g.num_vertices(); ++v)
    out << "  v" << v << " [label=\"" << to_bitstring(g.fiber().tournaments[v], m) << "\"];\n";
  for (const auto& e : g.edges())
    for (int k = 0; k < e.multiplicity; ++k) out << "  v" << e.u << " -- v" << e.v << ";\n";
  out << "}\n";
  return out.str();
}

namespace {

struct IsoSearch {
  const std::vector<std::vector<int>>& a;
  const std::vector<std::vector<int>>& b;
  std::vector<int> map_ab, used_b;
  std::vector<std::vector<int>> sig_a, sig_b;

  static std::vector<std::vector<int>> signatures(const std::vector<std::vector<int>>& m) {
    std::vector<std::vector<int>> out(m.size());
    for (std::size_t v = 0; v < m.size(); ++v) {
      out[v] = m[v];
      std::sort(out[v].begin(), out[v].end());
    }
    return out;
  }

  bool extend(std::size_t k) {
    if (k == a.size()) return true;
    for (std::size_t y = 0; y < b.size(); ++y) {
      if (used_b[y] || sig_a[k] != sig_b[y]) continue;
      bool ok = true;
      for (std::size_t x = 0; x < k && ok; ++x) ok = a[k][x] == b[y][map_ab[x]];
      if (!ok) continue;
      map_ab[k] = static_cast<int>(y);
      used_b[y] = 1;
      if (extend(k + 1)) return true;
      used_b[y] = 0;
    }
    return false;
  }
};

}  // namespace

bool isomorphic(const std::vector<std::vector<int>>& a, const std::vector<std::vector<int>>& b) {
  if (a.size() != b.size()) return false;
  IsoSearch s{a, b, std::vector<int>(a.size(), -1), std::vector<int>(b.size(), 0), IsoSearch::signatures(a),
              IsoSearch::signatures(b)};
  auto sa = s.sig_a, sb = s.sig_b;
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  if (sa != sb) return false;
  return s.extend(0);
}

std::vector<std::vector<int>> multiplicity_matrix(const InterchangeGraph& g) {
  const int n = g.num_vertices();
  std::vector<std::vector<int>> out(n, std::vector<int>(n, 0));
  for (int v = 0; v < n; ++v)
    for (const auto& nb : g.neighbors(v)) out[v][nb.vertex] = nb.multiplicity;
  return out;
}

std::vector<std::vector<int>> cartesian_product(const std::vector<std::vector<int>>& a,
                                                const std::vector<std::vector<int>>& b) {
  const std::size_t na = a.size(), nb = b.size();
  std::vector<std::vector<int>> out(na * nb, std::vector<int>(na * nb, 0));
  for (std::size_t i = 0; i < na; ++i)
    for (std::size_t j = 0; j < nb; ++j)
      for (std::size_t k = 0; k < na; ++k)
        for (std::size_t l = 0; l < nb; ++l) {
          int m = 0;
          if (j == l) m = a[i][k];
          else if (i == k) m = b[j][l];
          out[i * nb + j][k * nb + l] = m;
        }
  return out;
}

}  // namespace coxeter
