#include "coxeter/zframe.hpp"

#include <algorithm>
#include <array>
#include <deque>
#include <limits>
#include <mutex>
#include <sstream>

#include "coxeter/errors.hpp"

namespace coxeter {

ZFrame::ZFrame(int n, GameSet matches, std::vector<ZEdge> edges)
    : n_(n), matches_(matches), edges_(std::move(edges)) {}

int ZFrame::net_charge(int player) const {
  int acc = 0;
  for (const auto& e : edges_)
    if (e.player == player) acc += e.charge;
  return acc;
}

int ZFrame::degree(int player) const {
  int acc = 0;
  for (const auto& e : edges_)
    if (e.player == player) ++acc;
  return acc;
}

int ZFrame::match_degree(int match) const {
  int acc = 0;
  for (const auto& e : edges_)
    if (e.match == match) ++acc;
  return acc;
}

bool ZFrame::is_neutral() const {
  for (int p = 0; p < n_; ++p)
    if (net_charge(p) != 0) return false;
  return true;
}

ZFrame build_zframe(const CompleteSignedGraph& graph, GameSet bits, GameSet subset) {
  if (subset & ~graph.all_games()) throw InvalidInput("sub-tournament names an unknown game id");
  std::vector<ZEdge> edges;
  for (GameSet rest = subset; rest; rest &= rest - 1) {
    const Game& g = graph.game(__builtin_ctzll(rest));
    const int s = contains(bits, g.id) ? 1 : -1;
    switch (g.kind) {
      case GameKind::Negative:
        edges.push_back({g.first, g.id, s});
        edges.push_back({g.second, g.id, -s});
        break;
      case GameKind::Positive:
        edges.push_back({g.first, g.id, s});
        edges.push_back({g.second, g.id, s});
        break;
      case GameKind::Half:
        edges.push_back({g.first, g.id, s});
        break;
      case GameKind::Loop:
        edges.push_back({g.first, g.id, s});
        edges.push_back({g.first, g.id, s});
        break;
    }
  }
  return ZFrame(graph.n(), subset, std::move(edges));
}

ZFrame build_zframe(const Tournament& t, GameSet subset) { return build_zframe(t.graph(), t.bits(), subset); }

int Trail::length() const { return game_count(matches()); }

GameSet Trail::matches() const {
  GameSet out = 0;
  for (const auto& e : edges) out |= GameSet{1} << e.match;
  return out;
}

bool Trail::is_neutral() const {
  for (std::size_t k = 0; k + 1 < edges.size(); k += 2)
    if (edges[k].charge != -edges[k + 1].charge || edges[k].player != edges[k + 1].player) return false;
  return true;
}

TrailDecomposition decompose_neutral_trails(const ZFrame& frame) {
  for (int p = 0; p < frame.n(); ++p)
    if (frame.net_charge(p) != 0)
      throw InvalidInput("Z-frame is not neutral at player " + std::to_string(p + 1));

  const auto& edges = frame.edges();
  const int m = static_cast<int>(edges.size());

  // Opposite charges at each player, paired in game-id order.
  std::vector<int> visit_partner(m, -1);
  for (int p = 0; p < frame.n(); ++p) {
    std::vector<int> plus, minus;
    for (int k = 0; k < m; ++k)
      if (edges[k].player == p) (edges[k].charge > 0 ? plus : minus).push_back(k);
    auto by_match = [&](int a, int b) { return edges[a].match < edges[b].match || (edges[a].match == edges[b].match && a < b); };
    std::sort(plus.begin(), plus.end(), by_match);
    std::sort(minus.begin(), minus.end(), by_match);
    for (std::size_t k = 0; k < plus.size(); ++k) {
      visit_partner[plus[k]] = minus[k];
      visit_partner[minus[k]] = plus[k];
    }
  }
  std::vector<int> match_partner(m, -1);
  for (int a = 0; a < m; ++a)
    for (int b = a + 1; b < m; ++b)
      if (edges[a].match == edges[b].match) {
        match_partner[a] = b;
        match_partner[b] = a;
      }

  TrailDecomposition out;
  std::vector<bool> used(m, false);
  // Open trails run between degree-one matches.
  for (int start = 0; start < m; ++start) {
    if (used[start] || match_partner[start] >= 0) continue;
    Trail trail;
    int e = start;
    while (true) {
      int f = visit_partner[e];
      trail.edges.push_back(edges[e]);
      trail.edges.push_back(edges[f]);
      used[e] = used[f] = true;
      int g = match_partner[f];
      if (g < 0) break;
      e = g;
    }
    // Stored from the first player visit: the leading half match edge is kept
    // as edges[0] so (0,1) still meet at a player.
    out.trails.push_back(std::move(trail));
  }
  for (int start = 0; start < m; ++start) {
    if (used[start]) continue;
    Trail trail;
    trail.closed = true;
    int e = start;
    do {
      int f = visit_partner[e];
      trail.edges.push_back(edges[e]);
      trail.edges.push_back(edges[f]);
      used[e] = used[f] = true;
      e = match_partner[f];
    } while (e != start);
    out.trails.push_back(std::move(trail));
  }
  return out;
}

namespace {

// Gray-code walk over all nonempty proper subsets of the matches.
GameSet gray_search(const CompleteSignedGraph& graph, GameSet bits, GameSet subset) {
  std::vector<int> ids;
  for (GameSet rest = subset; rest; rest &= rest - 1) ids.push_back(__builtin_ctzll(rest));
  const int l = static_cast<int>(ids.size());
  if (l > 26) throw CapExceeded("exhaustive irreducibility check limited to 26 games", 26);
  const int n = graph.n();
  std::vector<std::vector<int>> contrib(l, std::vector<int>(n));
  for (int k = 0; k < l; ++k) {
    auto v = graph.win_vector(ids[k]);
    int s = contains(bits, ids[k]) ? 1 : -1;
    for (int p = 0; p < n; ++p) contrib[k][p] = s * v[p];
  }
  std::vector<int> sum(n, 0);
  std::uint64_t current = 0;
  const std::uint64_t full = (std::uint64_t{1} << l) - 1;
  for (std::uint64_t step = 1; step < (std::uint64_t{1} << l); ++step) {
    int k = __builtin_ctzll(step);
    int dir = ((current >> k) & 1U) ? -1 : 1;
    current ^= std::uint64_t{1} << k;
    bool zero = true;
    for (int p = 0; p < n; ++p) {
      sum[p] += dir * contrib[k][p];
      zero &= sum[p] == 0;
    }
    if (zero && current != full) {
      GameSet out = 0;
      for (int j = 0; j < l; ++j)
        if ((current >> j) & 1U) out |= GameSet{1} << ids[j];
      return out;
    }
  }
  return 0;
}

}  // namespace

GameSet find_neutral_proper_subset(const CompleteSignedGraph& graph, GameSet bits, GameSet subset) {
  return gray_search(graph, bits, subset);
}

bool is_irreducible(const CompleteSignedGraph& graph, GameSet bits, GameSet subset) {
  ZFrame frame = build_zframe(graph, bits, subset);
  if (frame.empty() || !frame.is_neutral()) return false;
  for (int p = 0; p < graph.n(); ++p) {
    int d = frame.degree(p);
    if (d != 0 && d != 2 && d != 4) return false;
  }
  if (decompose_neutral_trails(frame).trails.size() != 1) return false;
  return gray_search(graph, bits, subset) == 0;
}

bool is_irreducible(const Tournament& t, GameSet subset) { return is_irreducible(t.graph(), t.bits(), subset); }

namespace {

// Shortest generator-reversal paths inside K_Phi on three players, over every
// pair of orientations. Used for irreducible closed trails on three players.
struct LocalTable {
  GraphPtr graph;
  std::vector<GameSet> moves;                  // local generator supports
  std::vector<std::vector<std::uint8_t>> dist;  // [from][to], 255 = unreachable
  std::vector<std::vector<std::int8_t>> first;  // index into moves
};

LocalTable build_local_table(RootType type) {
  LocalTable table;
  table.graph = build_complete_graph(type, 3);
  GeneratorIndex index(table.graph);
  for (const auto& s : index.supports()) table.moves.push_back(s.games);
  const std::size_t states = std::size_t{1} << table.graph->num_games();
  table.dist.assign(states, std::vector<std::uint8_t>(states, 255));
  table.first.assign(states, std::vector<std::int8_t>(states, -1));
  for (std::size_t src = 0; src < states; ++src) {
    auto& dist = table.dist[src];
    auto& first = table.first[src];
    std::deque<GameSet> queue{src};
    dist[src] = 0;
    while (!queue.empty()) {
      GameSet cur = queue.front();
      queue.pop_front();
      index.for_each_copy(cur, [&](const GeneratorSupport& s, const GeneratorSupport::Orientation&) {
        GameSet next = cur ^ s.games;
        if (dist[next] != 255) return;
        dist[next] = static_cast<std::uint8_t>(dist[cur] + 1);
        if (cur == src) {
          auto it = std::find(table.moves.begin(), table.moves.end(), s.games);
          first[next] = static_cast<std::int8_t>(it - table.moves.begin());
        } else {
          first[next] = first[cur];
        }
        queue.push_back(next);
      });
    }
  }
  return table;
}

const LocalTable& local_table(RootType type) {
  static std::array<std::once_flag, 4> flags;
  static std::array<LocalTable, 4> tables;
  const int k = static_cast<int>(type);
  std::call_once(flags[k], [&] { tables[k] = build_local_table(type); });
  return tables[k];
}

class Reverser {
 public:
  Reverser(const Tournament& t)
      : graph_(t.graph()), index_(generator_index(graph_.root_type(), graph_.n())), bits_(t.bits()) {}

  std::vector<GeneratorCopy> run(GameSet subset) {
    reverse(subset);
    return std::move(steps_);
  }

 private:
  void apply(GameSet games) {
    auto copy = index_.copy_on(bits_, games);
    if (!copy) throw LemmaViolation("reversal step is not a generator copy of the current tournament");
    steps_.push_back(*copy);
    bits_ ^= games;
  }

  void reverse(GameSet subset) {
    const int l = game_count(subset);
    if (!graph_.is_neutral(bits_, subset)) throw InvalidInput("sub-tournament to reverse is not neutral");
    if (l < 3) throw InvalidInput("a neutral sub-tournament to reverse needs at least three games");
    if (l == 3) {
      apply(subset);
      return;
    }
    if (GameSet part = find_neutral_proper_subset(graph_, bits_, subset)) {
      reverse(part);
      reverse(subset & ~part);
      return;
    }
    auto decomposition = decompose_neutral_trails(build_zframe(graph_, bits_, subset));
    if (decomposition.trails.size() != 1) throw LemmaViolation("irreducible Z-frame is not a single neutral trail");
    const Trail& trail = decomposition.trails.front();
    std::vector<int> players = graph_.players_of(subset);
    if (!trail.closed) {
      split_open(trail, subset);
    } else if (players.size() <= 3) {
      base_case(players, subset);
    } else {
      split_closed(trail, subset);
    }
  }

  // Reverses `first ∪ {g}` and then `second ∪ {g}`; g ends where it started.
  void reverse_in_two(GameSet first, GameSet second, int g) {
    const GameSet gbit = GameSet{1} << g;
    reverse(first | gbit);
    reverse(second | gbit);
  }

  // Charge at `player` of game g as currently oriented.
  int charge_at(int g, int player) const {
    const Game& game = graph_.game(g);
    int s = contains(bits_, g) ? 1 : -1;
    if (game.kind == GameKind::Negative && player == game.second) return -s;
    return s;
  }

  void split_open(const Trail& trail, GameSet subset) {
    // edges: [h_a], then pairs (2t,2t+1) at player visits t = 0..l-2.
    const auto& e = trail.edges;
    const int l = trail.length();
    int best_t = -1, best_first = std::numeric_limits<int>::max();
    GameSet best_left = 0, best_right = 0;
    int best_h = -1;
    for (int t = 1; t <= l - 3; ++t) {
      const int u = e[2 * t].player;
      auto h = graph_.half_id(u);
      if (!h || contains(subset, *h)) continue;
      GameSet left = 0, right = 0;
      for (int k = 0; k <= 2 * t; ++k) left |= GameSet{1} << e[k].match;
      for (int k = 2 * t + 1; k < static_cast<int>(e.size()); ++k) right |= GameSet{1} << e[k].match;
      const bool left_first = charge_at(*h, u) == -e[2 * t].charge;
      int first_size = game_count(left_first ? left : right);
      if (first_size < best_first) {
        best_first = first_size;
        best_t = t;
        best_h = *h;
        best_left = left_first ? left : right;
        best_right = left_first ? right : left;
      }
    }
    if (best_t < 0) throw LemmaViolation("open neutral trail has no interior player with a free half edge");
    reverse_in_two(best_left, best_right, best_h);
  }

  void split_closed(const Trail& trail, GameSet subset) {
    const auto& e = trail.edges;
    const int l = trail.length();
    // Players that meet in a game of the trail.
    auto play_in_subset = [&](int a, int b) {
      for (auto id : {graph_.negative_id(a, b), graph_.positive_id(a, b)})
        if (id && contains(subset, *id)) return true;
      return false;
    };
    int best_first = std::numeric_limits<int>::max();
    GameSet best_a = 0, best_b = 0;
    int best_g = -1;
    for (int t1 = 0; t1 < l; ++t1)
      for (int t2 = t1 + 1; t2 < l; ++t2) {
        const int p1 = e[2 * t1].player, p2 = e[2 * t2].player;
        if (p1 == p2 || play_in_subset(p1, p2)) continue;
        // Arc A holds the matches between visit t1 and visit t2.
        GameSet arc_a = 0;
        for (int k = 2 * t1 + 1; k <= 2 * t2; ++k) arc_a |= GameSet{1} << e[k].match;
        GameSet arc_b = subset & ~arc_a;
        const int a1 = e[2 * t1 + 1].charge;  // arc A at p1
        const int a2 = e[2 * t2].charge;      // arc A at p2
        auto g = a1 == a2 ? graph_.positive_id(p1, p2) : graph_.negative_id(p1, p2);
        if (!g) continue;
        const bool a_first = charge_at(*g, p1) == -a1;
        if (a_first && charge_at(*g, p2) != -a2) throw LemmaViolation("closing game charges inconsistent with trail");
        GameSet first = a_first ? arc_a : arc_b;
        if (game_count(first) < best_first) {
          best_first = game_count(first);
          best_a = first;
          best_b = a_first ? arc_b : arc_a;
          best_g = *g;
        }
      }
    if (best_g < 0) throw LemmaViolation("closed neutral trail on four or more players has no split pair");
    reverse_in_two(best_a, best_b, best_g);
  }

  void base_case(std::vector<int> players, GameSet subset) {
    if (graph_.n() < 3) throw LemmaViolation("three-player base case needs n >= 3");
    for (int p = 0; static_cast<int>(players.size()) < 3; ++p)
      if (std::find(players.begin(), players.end(), p) == players.end()) players.push_back(p);
    std::sort(players.begin(), players.end());
    const LocalTable& table = local_table(graph_.root_type());
    const auto& local = *table.graph;
    // local game id -> global game id
    std::vector<int> to_global(local.num_games());
    for (const Game& g : local.games()) {
      std::optional<int> id;
      switch (g.kind) {
        case GameKind::Negative: id = graph_.negative_id(players[g.first], players[g.second]); break;
        case GameKind::Positive: id = graph_.positive_id(players[g.first], players[g.second]); break;
        case GameKind::Half: id = graph_.half_id(players[g.first]); break;
        case GameKind::Loop: id = graph_.loop_id(players[g.first]); break;
      }
      to_global[g.id] = *id;
    }
    auto to_local = [&](GameSet global) {
      GameSet out = 0;
      for (int k = 0; k < local.num_games(); ++k)
        if (contains(global, to_global[k])) out |= GameSet{1} << k;
      return out;
    };
    auto from_local = [&](GameSet lset) {
      GameSet out = 0;
      for (int k = 0; k < local.num_games(); ++k)
        if (contains(lset, k)) out |= GameSet{1} << to_global[k];
      return out;
    };
    GameSet state = to_local(bits_);
    const GameSet target = state ^ to_local(subset);
    const int steps = table.dist[state][target];
    if (steps == 255 || steps > game_count(subset) - 2)
      throw LemmaViolation("three-player neutral trail not reversible within l-2 steps");
    while (state != target) {
      GameSet move = table.moves[table.first[state][target]];
      apply(from_local(move));
      state ^= move;
    }
  }

  const CompleteSignedGraph& graph_;
  const GeneratorIndex& index_;
  GameSet bits_;
  std::vector<GeneratorCopy> steps_;
};

}  // namespace

std::vector<GeneratorCopy> reverse_neutral_subtournament(const Tournament& t, GameSet subset) {
  if (subset & ~t.graph().all_games()) throw InvalidInput("sub-tournament names an unknown game id");
  if (t.graph().root_type() == RootType::A)
    throw InvalidInput("the reversing procedure is defined for types B, C and D");
  return Reverser(t).run(subset);
}

std::string zframe_to_dot(const ZFrame& frame, const CompleteSignedGraph& graph) {
  std::ostringstream out;
  out << "digraph zframe {\n";
  for (int p = 0; p < frame.n(); ++p)
    if (frame.degree(p) > 0) out << "  p" << p + 1 << " [label=\"" << p + 1 << "\", shape=circle, style=filled, fillcolor=black, fontcolor=white];\n";
  for (GameSet rest = frame.matches(); rest; rest &= rest - 1) {
    const Game& g = graph.game(__builtin_ctzll(rest));
    out << "  m" << g.id << " [label=\"" << to_string(g.kind) << "\", shape=circle, style=solid];\n";
  }
  for (const auto& e : frame.edges()) {
    if (e.charge > 0) out << "  p" << e.player + 1 << " -> m" << e.match << ";\n";
    else out << "  m" << e.match << " -> p" << e.player + 1 << ";\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace coxeter
