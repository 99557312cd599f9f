#include "coxeter/generators.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <mutex>
#include <numeric>

#include "coxeter/errors.hpp"

namespace coxeter {

std::string_view to_string(GeneratorKind kind) {
  switch (kind) {
    case GeneratorKind::CyclicTriangle: return "cyclic_triangle";
    case GeneratorKind::BalancedTriangle: return "balanced_triangle";
    case GeneratorKind::NeutralPair: return "neutral_pair";
    case GeneratorKind::NeutralClover: return "neutral_clover";
  }
  return "?";
}

namespace {

// Z-frame charges of one oriented game, in global player labels.
std::vector<std::pair<int, int>> game_charges(const Game& g, bool won) {
  const int s = won ? 1 : -1;
  switch (g.kind) {
    case GameKind::Negative: return {{g.first, s}, {g.second, -s}};
    case GameKind::Positive: return {{g.first, s}, {g.second, s}};
    case GameKind::Half: return {{g.first, s}};
    case GameKind::Loop: return {{g.first, s}, {g.first, s}};
  }
  return {};
}

std::vector<TemplateGame> relabel(const std::vector<TemplateGame>& games, const std::vector<int>& local_of) {
  std::vector<TemplateGame> out = games;
  for (auto& g : out) {
    for (auto& [p, c] : g.charges) p = local_of[p];
    std::sort(g.charges.begin(), g.charges.end());
  }
  std::sort(out.begin(), out.end());
  return out;
}

GeneratorKind classify_kind(const std::vector<GameKind>& kinds) {
  bool loop = false, half = false, positive = false;
  for (GameKind k : kinds) {
    loop |= k == GameKind::Loop;
    half |= k == GameKind::Half;
    positive |= k == GameKind::Positive;
  }
  if (loop) return GeneratorKind::NeutralClover;
  if (half) return GeneratorKind::NeutralPair;
  return positive ? GeneratorKind::BalancedTriangle : GeneratorKind::CyclicTriangle;
}

std::vector<GeneratorTemplate> discover_catalog(RootType type) {
  const auto graph = build_complete_graph(type, 3);
  const int m = graph->num_games();
  std::vector<std::vector<TemplateGame>> found;

  // Smallest neutral sub-tournaments: grow the subset size until one appears.
  for (int size = 1; size <= m && found.empty(); ++size) {
    std::vector<int> pick(size);
    std::iota(pick.begin(), pick.end(), 0);
    while (true) {
      GameSet games = 0;
      for (int id : pick) games |= GameSet{1} << id;
      for (GameSet o = 0; o < (GameSet{1} << size); ++o) {
        GameSet bits = 0;
        for (int k = 0; k < size; ++k)
          if ((o >> k) & 1U) bits |= GameSet{1} << pick[k];
        if (graph->is_neutral(bits, games)) found.push_back(canonical_form(*graph, bits, games));
      }
      int k = size - 1;
      while (k >= 0 && pick[k] == m - size + k) --k;
      if (k < 0) break;
      ++pick[k];
      for (int r = k + 1; r < size; ++r) pick[r] = pick[r - 1] + 1;
    }
  }
  std::sort(found.begin(), found.end());
  found.erase(std::unique(found.begin(), found.end()), found.end());

  std::vector<GeneratorTemplate> out;
  for (auto& form : found) {
    GeneratorTemplate t;
    t.games = form;
    for (const auto& g : form) {
      t.game_kinds.push_back(g.kind);
      for (auto [p, c] : g.charges) t.num_players = std::max(t.num_players, p + 1);
    }
    std::sort(t.game_kinds.begin(), t.game_kinds.end());
    t.kind = classify_kind(t.game_kinds);
    out.push_back(std::move(t));
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const GeneratorTemplate& a, const GeneratorTemplate& b) { return a.kind < b.kind; });
  std::map<GeneratorKind, int> seen;
  std::map<GeneratorKind, int> total;
  for (const auto& t : out) ++total[t.kind];
  for (std::size_t i = 0; i < out.size(); ++i) {
    auto& t = out[i];
    t.id = static_cast<int>(i);
    int k = ++seen[t.kind];
    switch (t.kind) {
      case GeneratorKind::CyclicTriangle: t.label = total[t.kind] > 1 ? "Delta_c" + std::to_string(k) : "Delta_c"; break;
      case GeneratorKind::BalancedTriangle: t.label = total[t.kind] > 1 ? "Delta_b" + std::to_string(k) : "Delta_b"; break;
      case GeneratorKind::NeutralPair: t.label = "Omega_" + std::to_string(k); break;
      case GeneratorKind::NeutralClover: t.label = "Theta_" + std::to_string(k); break;
    }
  }
  return out;
}

const std::array<std::vector<GeneratorTemplate>, 4>& catalogs() {
  static const std::array<std::vector<GeneratorTemplate>, 4> all = {
      discover_catalog(RootType::A), discover_catalog(RootType::B), discover_catalog(RootType::C),
      discover_catalog(RootType::D)};
  return all;
}

int template_id_of(RootType type, const std::vector<TemplateGame>& form) {
  for (const auto& t : generator_catalog(type))
    if (t.games == form) return t.id;
  return -1;
}

}  // namespace

std::vector<TemplateGame> canonical_form(const CompleteSignedGraph& graph, GameSet bits, GameSet games,
                                         std::vector<int>* embedding) {
  std::vector<TemplateGame> raw;
  for (GameSet rest = games; rest; rest &= rest - 1) {
    const Game& g = graph.game(__builtin_ctzll(rest));
    raw.push_back({g.kind, game_charges(g, contains(bits, g.id))});
  }
  std::vector<int> players = graph.players_of(games);
  std::vector<int> order(players.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<int> local_of(graph.n(), -1);
  std::vector<TemplateGame> best;
  std::vector<int> best_embedding;
  do {
    for (std::size_t k = 0; k < players.size(); ++k) local_of[players[k]] = order[k];
    auto form = relabel(raw, local_of);
    if (best.empty() || form < best) {
      best = std::move(form);
      best_embedding.assign(players.size(), -1);
      for (std::size_t k = 0; k < players.size(); ++k) best_embedding[order[k]] = players[k];
    }
  } while (std::next_permutation(order.begin(), order.end()));
  if (embedding) *embedding = std::move(best_embedding);
  return best;
}

const std::vector<GeneratorTemplate>& generator_catalog(RootType type) {
  return catalogs()[static_cast<int>(type)];
}

nlohmann::json catalog_to_json(RootType type) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& t : generator_catalog(type)) {
    nlohmann::json games = nlohmann::json::array();
    for (const auto& g : t.games) {
      nlohmann::json charges = nlohmann::json::array();
      for (auto [p, c] : g.charges) charges.push_back({p + 1, c});
      games.push_back({{"kind", std::string(to_string(g.kind))}, {"charges", charges}});
    }
    nlohmann::json kinds = nlohmann::json::array();
    for (GameKind k : t.game_kinds) kinds.push_back(std::string(to_string(k)));
    out.push_back({{"id", t.id},
                   {"label", t.label},
                   {"kind", std::string(to_string(t.kind))},
                   {"players", t.num_players},
                   {"game_kinds", kinds},
                   {"games", games},
                   {"multiplicity", t.multiplicity()}});
  }
  return out;
}

GeneratorIndex::GeneratorIndex(GraphPtr graph) : graph_(std::move(graph)) {
  const auto& g = *graph_;
  const int m = g.num_games();
  const auto& catalog = generator_catalog(g.root_type());
  std::size_t size = catalog.empty() ? 0 : catalog.front().games.size();
  if (size != 3) throw LemmaViolation("generator catalog does not consist of three-game structures");

  for (int a = 0; a < m; ++a)
    for (int b = a + 1; b < m; ++b)
      for (int c = b + 1; c < m; ++c) {
        GameSet games = (GameSet{1} << a) | (GameSet{1} << b) | (GameSet{1} << c);
        if (g.players_of(games).size() > 3) continue;
        GeneratorSupport support;
        support.games = games;
        for (int o = 0; o < 8; ++o) {
          GameSet bits = ((o & 1) ? GameSet{1} << a : 0) | ((o & 2) ? GameSet{1} << b : 0) |
                         ((o & 4) ? GameSet{1} << c : 0);
          if (!g.is_neutral(bits, games)) continue;
          GeneratorSupport::Orientation orient;
          orient.pattern = bits;
          auto form = canonical_form(g, bits, games, &orient.players);
          orient.template_id = template_id_of(g.root_type(), form);
          if (orient.template_id < 0) throw LemmaViolation("neutral three-game set outside the generator catalog");
          support.multiplicity = catalog[orient.template_id].multiplicity();
          support.orientations.push_back(std::move(orient));
        }
        if (!support.orientations.empty()) supports_.push_back(std::move(support));
      }
}

std::vector<GeneratorCopy> GeneratorIndex::find_copies(GameSet bits) const {
  std::vector<GeneratorCopy> out;
  for_each_copy(bits, [&](const GeneratorSupport& s, const GeneratorSupport::Orientation& o) {
    out.push_back({o.template_id, o.players, s.games, o.pattern, s.multiplicity});
  });
  return out;
}

int GeneratorIndex::weighted_copy_count(GameSet bits) const {
  int total = 0;
  for_each_copy(bits, [&](const GeneratorSupport& s, const GeneratorSupport::Orientation&) { total += s.multiplicity; });
  return total;
}

std::optional<GeneratorCopy> GeneratorIndex::copy_on(GameSet bits, GameSet games) const {
  for (const auto& s : supports_) {
    if (s.games != games) continue;
    for (const auto& o : s.orientations)
      if (o.pattern == (bits & games)) return GeneratorCopy{o.template_id, o.players, s.games, o.pattern, s.multiplicity};
    return std::nullopt;
  }
  return std::nullopt;
}

const GeneratorIndex& generator_index(RootType type, int n) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::unique_ptr<GeneratorIndex>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[{static_cast<int>(type), n}];
  if (!slot) slot = std::make_unique<GeneratorIndex>(build_complete_graph(type, n));
  return *slot;
}

std::vector<GeneratorCopy> find_generator_copies(const Tournament& t) {
  return generator_index(t.graph().root_type(), t.graph().n()).find_copies(t.bits());
}

Tournament apply_generator_reversal(const Tournament& t, const GeneratorCopy& copy) {
  if ((t.bits() & copy.games) != copy.orientation)
    throw InvalidInput("generator copy is not oriented as in the host tournament");
  return reverse_subset(t, copy.games);
}

GeneratorCopy reversed(const CompleteSignedGraph& graph, const GeneratorCopy& copy) {
  GeneratorCopy out = copy;
  out.orientation = copy.games & ~copy.orientation;
  auto form = canonical_form(graph, out.orientation, out.games, &out.players);
  out.template_id = template_id_of(graph.root_type(), form);
  return out;
}

}  // namespace coxeter
