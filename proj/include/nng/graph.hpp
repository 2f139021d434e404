#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace nng {

using Site = int;
using SiteSet = std::vector<Site>;  // always sorted, no duplicates

// Undirected, simple, connected graph on sites 0..n-1. Immutable once built.
class Graph {
public:
  // Builds from an edge list. Throws InvalidInput on self-loops, ids outside
  // 0..n-1, or a disconnected result. Duplicate edges are merged.
  Graph(int n, std::span<const std::pair<Site, Site>> edges);

  int size() const { return static_cast<int>(adj_.size()); }
  std::size_t edge_count() const { return edge_count_; }
  const SiteSet& neighbors(Site s) const { return adj_[static_cast<std::size_t>(s)]; }
  int degree(Site s) const { return static_cast<int>(neighbors(s).size()); }
  bool adjacent(Site a, Site b) const;
  std::vector<std::pair<Site, Site>> edges() const;

private:
  std::vector<SiteSet> adj_;
  std::size_t edge_count_ = 0;
};

// True iff every site is reachable from site 0 (breadth-first search).
bool is_connected(int n, const std::vector<SiteSet>& adjacency);

// Parses the edge-list format: '#' comment lines, otherwise "u v" per line.
Graph load_edge_list(std::string_view text);
Graph load_edge_list_file(const std::string& path);
std::string to_edge_list(const Graph& g);

// "fig1": a single edge. "fig2": triangles {0,1,2} and {3,4,5} bridged by 0-3.
Graph builtin_graph(std::string_view name);

// Union of the members' neighborhoods minus the members themselves.
SiteSet clique_neighborhood(const Graph& g, const SiteSet& members);

struct Clique {
  SiteSet members;
  SiteSet boundary;
};

// Every complete subgraph of the graph, grouped by size (ascending), then
// lexicographically by members.
class CliqueInventory {
public:
  static constexpr std::size_t default_guard = 1'000'000;

  const std::vector<Clique>& cliques() const { return cliques_; }
  std::size_t size() const { return cliques_.size(); }
  std::size_t max_clique_size() const;
  std::size_t count_of_size(std::size_t s) const;
  std::optional<std::size_t> index_of(const SiteSet& members) const;

private:
  friend CliqueInventory enumerate_cliques(const Graph&, std::optional<std::size_t>,
                                           std::size_t);
  struct SetHash {
    std::size_t operator()(const SiteSet& s) const;
  };
  std::vector<Clique> cliques_;
  std::unordered_map<SiteSet, std::size_t, SetHash> index_;
};

// Maximal cliques by Bron-Kerbosch with pivoting, then expanded into all
// nonempty subsets of size <= max_size. Throws GuardExceeded when more than
// `guard` cliques would be produced.
CliqueInventory enumerate_cliques(const Graph& g, std::optional<std::size_t> max_size = {},
                                  std::size_t guard = CliqueInventory::default_guard);

// Maximal cliques only, each sorted.
std::vector<SiteSet> maximal_cliques(const Graph& g);

struct PlantedGraph {
  Graph graph;
  std::vector<int> block_of;  // ground-truth block per site
  int attempts = 0;
};

// Stochastic block model with intra-block edge probability p_in and
// inter-block probability p_out. Attempt a uses RandomStream(seed, a);
// regenerates until connected, at most 100 attempts (NotConverged otherwise).
PlantedGraph planted_partition(int n, const std::vector<int>& blocks, double p_in, double p_out,
                               std::uint64_t seed);

}  // namespace nng
