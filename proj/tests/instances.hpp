#pragma once

// Random neutral sub-tournaments for property tests.

#include <random>
#include <vector>

#include "coxeter/signed_core.hpp"
#include "oracle.hpp"

namespace instances {

struct NeutralInstance {
  coxeter::GameSet bits = 0;
  coxeter::GameSet subset = 0;
};

// A random game set of random size, oriented uniformly among the orientations
// that make it neutral; the rest of the tournament is uniform. Returns false
// when the drawn set has no neutral orientation.
inline bool draw_neutral(std::mt19937_64& rng, const coxeter::CompleteSignedGraph& g, const std::vector<oracle::G>& ref,
                         int max_size, NeutralInstance& out) {
  const int m = g.num_games();
  std::uniform_int_distribution<int> size_dist(3, std::min(max_size, m));
  const int size = size_dist(rng);
  std::vector<int> ids(m);
  for (int k = 0; k < m; ++k) ids[k] = k;
  std::shuffle(ids.begin(), ids.end(), rng);
  coxeter::GameSet mask = 0;
  for (int k = 0; k < size; ++k) mask |= coxeter::GameSet{1} << ids[k];
  std::vector<coxeter::GameSet> good;
  for (coxeter::GameSet o = mask;; o = (o - 1) & mask) {
    if (oracle::neutral(ref, g.n(), o, mask)) good.push_back(o);
    if (o == 0) break;
  }
  if (good.empty()) return false;
  out.subset = mask;
  out.bits = (rng() & g.all_games() & ~mask) | good[rng() % good.size()];
  return true;
}

// Brute force: no proper nonempty subset of the games is neutral.
inline bool irreducible(const std::vector<oracle::G>& ref, int n, coxeter::GameSet bits, coxeter::GameSet mask) {
  for (coxeter::GameSet sub = (mask - 1) & mask; sub; sub = (sub - 1) & mask)
    if (oracle::neutral(ref, n, bits, sub)) return false;
  return true;
}

}  // namespace instances
