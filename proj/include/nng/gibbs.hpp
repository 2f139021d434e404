#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "nng/graph.hpp"
#include "nng/localspec.hpp"
#include "nng/state.hpp"

namespace nng {

// Everything the Gibbs construction needs: graph, full clique inventory,
// alphabet and noise. The reference ("zero") local state is the full word
// list. Immutable after construction.
class EnergyContext {
public:
  EnergyContext(std::shared_ptr<const Graph> graph, Alphabet alphabet, Noise noise,
                std::size_t clique_guard = CliqueInventory::default_guard);

  const Graph& graph() const { return *graph_; }
  const std::shared_ptr<const Graph>& graph_ptr() const { return graph_; }
  const CliqueInventory& cliques() const { return *inventory_; }
  const Alphabet& alphabet() const { return alphabet_; }
  Noise noise() const { return noise_; }
  WordList zero_state() const { return WordList::full(alphabet_); }
  // Alphabets beyond two words have no certified local detailed balance.
  bool experimental() const { return alphabet_.size() > 2; }

  // Net multiplicity of -ln F(x(E)) in H: sum over cliques L containing E of
  // (-1)^{|L|-|E|}.
  int energy_weight(std::size_t clique_index) const { return (*weights_)[clique_index]; }

  // canonical_order() of clique `clique_index`, precomputed.
  const SiteSet& switch_order(std::size_t clique_index) const { return (*orders_)[clique_index]; }

  // Same context with different noise.
  EnergyContext with_noise(Noise noise) const;

private:
  std::shared_ptr<const Graph> graph_;
  std::shared_ptr<const CliqueInventory> inventory_;
  Alphabet alphabet_;
  Noise noise_;
  std::shared_ptr<const std::vector<int>> weights_;
  std::shared_ptr<const std::vector<SiteSet>> orders_;
};

// Order in which sites of E are switched from the zero state to their target:
// fewest neighbors on the boundary N(E) first, ties by site id.
SiteSet canonical_order(const Graph& g, const SiteSet& members);

// ln F(x(E) | 0(N(E))): the product of local-specification ratios
// f(x(s) | ...) / f(0 | ...) taken along `order`, where each factor sees the
// already-switched members at their targets and everything else at zero.
// Only x restricted to E is read. `order` must be a permutation of E; empty
// means canonical_order(). Limit mode throws Divergence on zero probabilities.
double log_F(const EnergyContext& ctx, const SiteSet& members, const Configuration& x,
             std::span<const Site> order = {});
double evaluate_F(const EnergyContext& ctx, const SiteSet& members, const Configuration& x,
                  std::span<const Site> order = {});

// V(x(L)) = -sum_{E subset of L} (-1)^{|L-E|} ln F(x(E) | 0(N(E))).
double clique_potential(const EnergyContext& ctx, const SiteSet& members, const Configuration& x);

// H(x) = sum over all cliques of V. Evaluated as sum_E w(E) * (-ln F(x(E)))
// with the precomputed weights, skipping cliques that sit entirely at zero.
double gibbs_energy(const EnergyContext& ctx, const Configuration& c);
// Literal sum of clique_potential over the inventory. Slow; cross-check only.
double gibbs_energy_by_potentials(const EnergyContext& ctx, const Configuration& c);

struct EnergyTable {
  Alphabet alphabet;
  int sites = 0;
  std::vector<double> energy;       // by mixed-radix state index
  std::vector<double> probability;  // exp(-H) / Z
  double log_partition = 0.0;       // ln Z
};

// H and the normalized Gibbs distribution over every configuration. Requires
// finite noise and (2^k-1)^n <= guard.
EnergyTable exact_gibbs_distribution(const EnergyContext& ctx, std::uint64_t guard = 10'000'000,
                                     unsigned workers = 1);

// Every configuration differing at exactly one site has strictly larger H.
// Requires finite noise.
bool is_local_minimum(const EnergyContext& ctx, const Configuration& c);

// Energy report JSON: [{state, H, pi}] sorted by H, ties by state string.
nlohmann::json energy_report_json(const EnergyTable& table);

}  // namespace nng
