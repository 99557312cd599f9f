#pragma once

// Type-Phi generators: the smallest neutral sub-tournaments (cyclic and
// balanced triangles, neutral pairs in B, neutral clovers in C).
//
// The catalog is not typed in by hand. It is found by enumerating every
// neutral sub-tournament of K_Phi on three players and keeping the ones of
// minimum size, deduplicated up to relabelling of players.

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "coxeter/signed_core.hpp"

namespace coxeter {

enum class GeneratorKind { CyclicTriangle, BalancedTriangle, NeutralPair, NeutralClover };

std::string_view to_string(GeneratorKind kind);

/// One game of a template with its Z-frame charges: (local player, +1/-1)
/// for every edge, so the orientation is part of the data.
struct TemplateGame {
  GameKind kind = GameKind::Negative;
  std::vector<std::pair<int, int>> charges;

  friend bool operator==(const TemplateGame&, const TemplateGame&) = default;
  friend auto operator<=>(const TemplateGame&, const TemplateGame&) = default;
};

struct GeneratorTemplate {
  int id = 0;
  std::string label;
  GeneratorKind kind = GeneratorKind::CyclicTriangle;
  int num_players = 0;
  std::vector<GameKind> game_kinds;  // sorted multiset
  std::vector<TemplateGame> games;   // canonical under player relabelling

  /// Clover reversals are double edges of the interchange graph.
  int multiplicity() const { return kind == GeneratorKind::NeutralClover ? 2 : 1; }
};

/// Canonical encoding of an oriented sub-tournament up to player relabelling.
/// `embedding`, when given, receives the global player for each local label.
std::vector<TemplateGame> canonical_form(const CompleteSignedGraph& graph, GameSet bits, GameSet games,
                                         std::vector<int>* embedding = nullptr);

const std::vector<GeneratorTemplate>& generator_catalog(RootType type);

nlohmann::json catalog_to_json(RootType type);

struct GeneratorCopy {
  int template_id = 0;
  std::vector<int> players;  // global player of each local template label
  GameSet games = 0;
  GameSet orientation = 0;   // required bits on `games` in the host
  int multiplicity = 1;
};

/// A set of three games that is neutral under at least one orientation.
struct GeneratorSupport {
  struct Orientation {
    GameSet pattern = 0;
    int template_id = 0;
    std::vector<int> players;
  };
  GameSet games = 0;
  int multiplicity = 1;
  std::vector<Orientation> orientations;
};

/// Every place a generator can sit inside K_Phi, precomputed once per graph.
class GeneratorIndex {
 public:
  explicit GeneratorIndex(GraphPtr graph);

  const CompleteSignedGraph& graph() const { return *graph_; }
  const std::vector<GeneratorSupport>& supports() const { return supports_; }

  std::vector<GeneratorCopy> find_copies(GameSet bits) const;
  /// Weighted copy count: clovers count twice.
  int weighted_copy_count(GameSet bits) const;
  /// The copy on exactly `games` if it is present in `bits`.
  std::optional<GeneratorCopy> copy_on(GameSet bits, GameSet games) const;

  template <class F>
  void for_each_copy(GameSet bits, F&& fn) const {
    for (const auto& s : supports_) {
      GameSet local = bits & s.games;
      for (const auto& o : s.orientations)
        if (o.pattern == local) fn(s, o);
    }
  }

 private:
  GraphPtr graph_;
  std::vector<GeneratorSupport> supports_;
};

/// Shared, lazily built index for K_Phi on n players.
const GeneratorIndex& generator_index(RootType type, int n);

std::vector<GeneratorCopy> find_generator_copies(const Tournament& t);

/// T * G. Throws InvalidInput when the copy is not oriented as in `t`.
Tournament apply_generator_reversal(const Tournament& t, const GeneratorCopy& copy);

/// The copy reversed in place, as it appears after apply_generator_reversal.
GeneratorCopy reversed(const CompleteSignedGraph& graph, const GeneratorCopy& copy);

}  // namespace coxeter
