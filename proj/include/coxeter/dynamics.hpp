#pragma once

// Lazy simple random walk on an interchange graph, exact total-variation
// curves, and the one-step path coupling with its exact contraction.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <boost/rational.hpp>
#include <json.hpp>

#include "coxeter/interchange.hpp"

namespace coxeter {

using Rational = boost::rational<std::int64_t>;

/// Hold with probability 1/2, otherwise move along a uniform edge slot
/// (a double edge offers two slots).
class WalkKernel {
 public:
  explicit WalkKernel(const InterchangeGraph& graph);

  const InterchangeGraph& graph() const { return *graph_; }
  int degree() const { return degree_; }
  /// Exact one-step law from `x`, keyed by target vertex.
  std::map<int, Rational> row(int x) const;
  /// The vertex reached through slot `slot` in [0, degree) at `x`.
  int slot_target(int x, int slot) const;

 private:
  const InterchangeGraph* graph_;
  int degree_;
};

/// splitmix64 finaliser applied to (seed, stream, step, draw).
std::uint64_t counter_hash(std::uint64_t seed, std::uint64_t stream, std::uint64_t step, std::uint64_t draw);

/// Uniform integer in [0, bound) from the counter stream, by rejection.
std::uint64_t counter_uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t step, std::uint64_t bound);

struct StepDraw {
  bool hold = true;
  int slot = 0;
};

/// The hold coin and slot used at `step` of chain `stream`.
StepDraw draw_step(std::uint64_t seed, std::uint64_t stream, std::uint64_t step, int degree);

/// Vertices visited, starting with `start`; steps + 1 entries.
std::vector<int> run_walk(const WalkKernel& kernel, int start, long long steps, std::uint64_t seed,
                          std::uint64_t stream = 0);

/// Visit counts over steps 1..steps.
std::vector<long long> walk_occupancy(const WalkKernel& kernel, int start, long long steps, std::uint64_t seed,
                                      std::uint64_t stream = 0);

/// Asymptotic variance of each state's visit count over `steps` steps of the
/// stationary chain: steps * pi_y * (2 Z_yy - 1 - pi_y), with Z the
/// fundamental matrix. Differs from the multinomial value steps * pi_y * (1 - pi_y)
/// by the autocorrelation of the walk.
std::vector<double> occupancy_variance(const WalkKernel& kernel, long long steps);

struct TvReport {
  std::vector<double> tau;       // tau(t), t = 0..horizon
  std::vector<int> start_t_mix;  // per start, first t with TV <= 1/4, or -1
  int t_mix = -1;                // max of start_t_mix, -1 if not reached
  bool monotone = true;
  int spot_checks = 0;
  double max_spot_error = 0.0;   // against the exact rational TV
};

/// TV distance to uniform from every start, by repeated application of the
/// kernel in double precision. Every tenth step the per-start values are
/// compared against exact big-integer counts, for every start when the graph
/// has at most 64 vertices and for the first start otherwise.
TvReport exact_tv_curve(const WalkKernel& kernel, int horizon);

/// First t with tau(t) <= 1/4. Throws LemmaViolation when `safety_horizon`
/// is reached first.
TvReport mixing_time_exact(const WalkKernel& kernel, int safety_horizon = 100000);

std::string tv_curve_csv(const TvReport& report);

/// Edge weights in units of 1/gamma: a double edge weighs gamma and a single
/// edge gamma + 1. With gamma = 0 every edge weighs 1 (the graph metric).
class WeightedMetric {
 public:
  WeightedMetric(const InterchangeGraph& graph, int gamma);

  int gamma() const { return gamma_; }
  int scale() const { return gamma_ > 0 ? gamma_ : 1; }
  std::int64_t edge_units(int multiplicity) const;
  /// Weighted distance in units.
  std::int64_t distance_units(int a, int b) const;
  Rational distance(int a, int b) const { return Rational(distance_units(a, b), scale()); }
  Rational weight(int u, int v) const;
  /// Largest weighted distance, as a rational.
  Rational diameter() const;

 private:
  std::vector<std::int64_t> dijkstra(int source) const;

  const InterchangeGraph* graph_;
  int gamma_;
};

enum class CouplingCase { Unweighted, Case1a, Case1b, Case2 };

std::string_view to_string(CouplingCase c);

struct Slot {
  int neighbor = 0;
  int index = 0;

  friend bool operator==(const Slot&, const Slot&) = default;
  friend auto operator<=>(const Slot&, const Slot&) = default;
};

/// psi: edge slots at u to edge slots at v.
struct EdgePairing {
  int u = 0, v = 0;
  CouplingCase kind = CouplingCase::Unweighted;
  int gamma = 0;
  int gamma_prime = 0;  // crystals containing {u, v}
  std::vector<Slot> from;
  std::vector<Slot> to;
  /// Slots of the connecting edge: the two chains meet on a shared endpoint.
  std::vector<bool> coalescing;
};

/// Builds psi and checks that it is a bijection and that every outcome pair
/// has the required adjacency. Throws InvalidInput when u, v are not
/// adjacent and LemmaViolation when the construction breaks down.
EdgePairing edge_pairing_psi(const InterchangeGraph& graph, const CrystalStatistics& crystals, int u, int v);

/// One coupled step; both chains use the same draw, except on coalescing
/// slots where the second chain uses the opposite hold coin.
std::pair<int, int> coupled_step(const WalkKernel& kernel, const EdgePairing& psi, std::uint64_t seed,
                                 std::uint64_t step);

/// Exact law of the pair after one coupled step.
std::map<std::pair<int, int>, Rational> coupling_distribution(const WalkKernel& kernel, const EdgePairing& psi);

/// Each coordinate of the coupling has the kernel's one-step law.
bool marginals_match(const WalkKernel& kernel, const EdgePairing& psi);

Rational expected_coupled_weight(const WalkKernel& kernel, const EdgePairing& psi, const WeightedMetric& metric);

/// The closed form the expectation must equal for this case.
Rational expected_weight_formula(const EdgePairing& psi, int degree);

struct CouplingCheck {
  long long pairs = 0;
  std::map<CouplingCase, long long> by_case;
  long long formula_mismatches = 0;
  long long marginal_failures = 0;
  long long contraction_failures = 0;  // E >= w, or E > (1 - 1/d) w in case 2
  Rational alpha_min{1};
  int gamma = 0;
};

/// Every adjacent pair of the graph. LemmaViolation from psi propagates.
CouplingCheck verify_coupling(const InterchangeGraph& graph, const CrystalStatistics& crystals);

}  // namespace coxeter
