#include "coxeter/signed_core.hpp"

#include <charconv>
#include <sstream>

#include "coxeter/errors.hpp"

namespace coxeter {

char to_char(RootType type) {
  switch (type) {
    case RootType::A: return 'A';
    case RootType::B: return 'B';
    case RootType::C: return 'C';
    case RootType::D: return 'D';
  }
  return '?';
}

RootType parse_root_type(std::string_view text) {
  if (text.size() == 1) {
    switch (text[0]) {
      case 'A': case 'a': return RootType::A;
      case 'B': case 'b': return RootType::B;
      case 'C': case 'c': return RootType::C;
      case 'D': case 'd': return RootType::D;
      default: break;
    }
  }
  throw InvalidInput("unknown root type '" + std::string(text) + "' (expected A, B, C or D)");
}

std::string_view to_string(GameKind kind) {
  switch (kind) {
    case GameKind::Negative: return "negative";
    case GameKind::Positive: return "positive";
    case GameKind::Half: return "half";
    case GameKind::Loop: return "loop";
  }
  return "?";
}

int Game::win_value(int player) const {
  switch (kind) {
    case GameKind::Negative:
      if (player == first) return 1;
      if (player == second) return -1;
      return 0;
    case GameKind::Positive:
      return involves(player) ? 1 : 0;
    case GameKind::Half:
      return player == first ? 1 : 0;
    case GameKind::Loop:
      return player == first ? 2 : 0;
  }
  return 0;
}

long long ScoreVector::squared_norm() const {
  long long acc = 0;
  for (int h : halves) acc += static_cast<long long>(h) * h;
  return acc;
}

bool ScoreVector::is_zero() const {
  for (int h : halves)
    if (h != 0) return false;
  return true;
}

ScoreVector ScoreVector::operator-() const {
  ScoreVector out = *this;
  for (int& h : out.halves) h = -h;
  return out;
}

std::string to_string(const ScoreVector& score) {
  std::string out;
  for (std::size_t i = 0; i < score.halves.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(score.halves[i]);
  }
  return out;
}

ScoreVector parse_score(std::string_view text) {
  ScoreVector out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t comma = text.find(',', pos);
    if (comma == std::string_view::npos) comma = text.size();
    std::string_view item = text.substr(pos, comma - pos);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    if (!item.empty() && item.front() == '+') item.remove_prefix(1);
    int value = 0;
    auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), value);
    if (item.empty() || ec != std::errc() || ptr != item.data() + item.size())
      throw InvalidInput("malformed score component '" + std::string(item) + "'");
    out.halves.push_back(value);
    pos = comma + 1;
  }
  return out;
}

CompleteSignedGraph::CompleteSignedGraph(RootType type, int n) : type_(type), n_(n) {
  if (n < 1) throw InvalidInput("a complete signed graph needs n >= 1 players");
  const long long pairs = static_cast<long long>(n) * (n - 1) / 2;
  long long total = 0;
  switch (type) {
    case RootType::A: total = pairs; break;
    case RootType::D: total = 2 * pairs; break;
    case RootType::B:
    case RootType::C: total = 2 * pairs + n; break;
  }
  if (total > kMaxGames)
    throw InvalidInput("K_" + std::string(1, to_char(type)) + " on " + std::to_string(n) +
                       " players has " + std::to_string(total) + " games; at most " +
                       std::to_string(kMaxGames) + " are supported");

  neg_.assign(static_cast<std::size_t>(n) * n, -1);
  pos_.assign(static_cast<std::size_t>(n) * n, -1);
  half_.assign(n, -1);
  loop_.assign(n, -1);

  auto add = [&](GameKind kind, int first, int second) {
    Game g;
    g.id = static_cast<int>(games_.size());
    g.kind = kind;
    g.first = first;
    g.second = second;
    games_.push_back(g);
    return g.id;
  };
  for (int i = 1; i < n; ++i)
    for (int j = 0; j < i; ++j) neg_[i * n + j] = add(GameKind::Negative, i, j);
  if (type != RootType::A)
    for (int i = 1; i < n; ++i)
      for (int j = 0; j < i; ++j) pos_[i * n + j] = add(GameKind::Positive, i, j);
  if (type == RootType::B)
    for (int i = 0; i < n; ++i) half_[i] = add(GameKind::Half, i, -1);
  if (type == RootType::C)
    for (int i = 0; i < n; ++i) loop_[i] = add(GameKind::Loop, i, -1);

  win_vectors_.assign(games_.size() * n, 0);
  incident_.assign(n, 0);
  for (const Game& g : games_) {
    for (int p = 0; p < n; ++p) {
      win_vectors_[static_cast<std::size_t>(g.id) * n + p] = g.win_value(p);
      if (g.involves(p)) incident_[p] |= GameSet{1} << g.id;
    }
    all_ |= GameSet{1} << g.id;
  }
}

const Game& CompleteSignedGraph::game(int id) const {
  if (id < 0 || id >= num_games()) throw InvalidInput("unknown game id " + std::to_string(id));
  return games_[id];
}

namespace {
std::optional<int> lookup_pair(const std::vector<int>& table, int n, int i, int j) {
  if (i < 0 || j < 0 || i >= n || j >= n || i == j) return std::nullopt;
  if (i < j) std::swap(i, j);
  int id = table[i * n + j];
  if (id < 0) return std::nullopt;
  return id;
}
std::optional<int> lookup_single(const std::vector<int>& table, int n, int i) {
  if (i < 0 || i >= n || table[i] < 0) return std::nullopt;
  return table[i];
}
}  // namespace

std::optional<int> CompleteSignedGraph::negative_id(int i, int j) const { return lookup_pair(neg_, n_, i, j); }
std::optional<int> CompleteSignedGraph::positive_id(int i, int j) const { return lookup_pair(pos_, n_, i, j); }
std::optional<int> CompleteSignedGraph::half_id(int i) const { return lookup_single(half_, n_, i); }
std::optional<int> CompleteSignedGraph::loop_id(int i) const { return lookup_single(loop_, n_, i); }

ScoreVector CompleteSignedGraph::subset_score(GameSet bits, GameSet subset) const {
  ScoreVector out;
  out.halves.assign(n_, 0);
  for (GameSet rest = subset & all_; rest; rest &= rest - 1) {
    int id = __builtin_ctzll(rest);
    int sign = contains(bits, id) ? 1 : -1;
    auto v = win_vector(id);
    for (int p = 0; p < n_; ++p) out.halves[p] += sign * v[p];
  }
  return out;
}

bool CompleteSignedGraph::is_neutral(GameSet bits, GameSet subset) const {
  return subset_score(bits, subset).is_zero();
}

std::vector<int> CompleteSignedGraph::players_of(GameSet subset) const {
  std::vector<int> out;
  for (int p = 0; p < n_; ++p)
    if (subset & incident_[p]) out.push_back(p);
  return out;
}

GraphPtr build_complete_graph(RootType type, int n) {
  return std::make_shared<const CompleteSignedGraph>(type, n);
}

ScoreVector game_vector(const Game& game, int n) {
  if (game.first < 0 || game.first >= n || game.second >= n || game.first == game.second)
    throw InvalidInput("game player index out of range for n = " + std::to_string(n));
  ScoreVector out;
  out.halves.assign(n, 0);
  for (int p = 0; p < n; ++p) out.halves[p] = game.win_value(p);
  return out;
}

Tournament::Tournament(GraphPtr graph, GameSet bits) : graph_(std::move(graph)), bits_(bits) {
  if (!graph_) throw InvalidInput("tournament without a graph");
  if (bits_ & ~graph_->all_games()) throw InvalidInput("orientation bits beyond the game count");
}

ScoreVector score(const Tournament& t) { return t.graph().score(t.bits()); }

ScoreVector standard_score(RootType type, int n) {
  auto g = build_complete_graph(type, n);
  return g->score(g->all_games());
}

Tournament reverse_subset(const Tournament& t, GameSet subset) {
  if (subset & ~t.graph().all_games()) throw InvalidInput("reversal set names an unknown game id");
  return Tournament(t.graph_ptr(), t.bits() ^ subset);
}

long long degree_formula(RootType type, int n, const ScoreVector& score) {
  if (score.size() != n)
    throw InvalidInput("score has " + std::to_string(score.size()) + " entries, expected " + std::to_string(n));
  long long diff = standard_score(type, n).squared_norm() - score.squared_norm();
  if (diff < 0 || diff % 8 != 0)
    throw InfeasibleScore("score (" + to_string(score) + ") is not a score sequence of K_" +
                          std::string(1, to_char(type)) + std::to_string(n));
  return diff / 8;
}

std::string to_bitstring(GameSet bits, int num_games) {
  std::string out(num_games, '0');
  for (int i = 0; i < num_games; ++i)
    if (contains(bits, i)) out[i] = '1';
  return out;
}

GameSet parse_bitstring(std::string_view text, int num_games) {
  if (static_cast<int>(text.size()) != num_games)
    throw InvalidInput("bit string has " + std::to_string(text.size()) + " characters, expected " +
                       std::to_string(num_games));
  GameSet bits = 0;
  for (int i = 0; i < num_games; ++i) {
    if (text[i] == '1') bits |= GameSet{1} << i;
    else if (text[i] != '0') throw InvalidInput("bit string must contain only 0 and 1");
  }
  return bits;
}

nlohmann::json to_json(const Tournament& t) {
  return {{"type", std::string(1, to_char(t.graph().root_type()))},
          {"n", t.graph().n()},
          {"w", to_bitstring(t.bits(), t.graph().num_games())}};
}

Tournament tournament_from_json(const nlohmann::json& j) {
  try {
    RootType type = parse_root_type(j.at("type").get<std::string>());
    int n = j.at("n").get<int>();
    auto g = build_complete_graph(type, n);
    return Tournament(g, parse_bitstring(j.at("w").get<std::string>(), g->num_games()));
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("malformed tournament JSON: ") + e.what());
  }
}

nlohmann::json to_json(const ScoreVector& s) { return s.halves; }

}  // namespace coxeter
