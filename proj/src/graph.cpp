#include "nng/graph.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <queue>
#include <set>
#include <sstream>

#include "nng/error.hpp"
#include "nng/rng.hpp"

namespace nng {

namespace {

std::vector<SiteSet> build_adjacency(int n, std::span<const std::pair<Site, Site>> edges) {
  std::vector<SiteSet> adj(static_cast<std::size_t>(n));
  for (auto [u, v] : edges) {
    if (u < 0 || v < 0 || u >= n || v >= n) {
      throw InvalidInput("edge (" + std::to_string(u) + ", " + std::to_string(v) +
                         ") has a site id outside 0.." + std::to_string(n - 1));
    }
    if (u == v) throw InvalidInput("self-loop on site " + std::to_string(u));
    adj[static_cast<std::size_t>(u)].push_back(v);
    adj[static_cast<std::size_t>(v)].push_back(u);
  }
  for (auto& nb : adj) {
    std::sort(nb.begin(), nb.end());
    nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
  }
  return adj;
}

}  // namespace

bool is_connected(int n, const std::vector<SiteSet>& adjacency) {
  if (n <= 0) return false;
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  std::queue<Site> frontier;
  frontier.push(0);
  seen[0] = 1;
  int reached = 1;
  while (!frontier.empty()) {
    Site s = frontier.front();
    frontier.pop();
    for (Site t : adjacency[static_cast<std::size_t>(s)]) {
      if (!seen[static_cast<std::size_t>(t)]) {
        seen[static_cast<std::size_t>(t)] = 1;
        ++reached;
        frontier.push(t);
      }
    }
  }
  return reached == n;
}

Graph::Graph(int n, std::span<const std::pair<Site, Site>> edges) {
  if (n <= 0) throw InvalidInput("graph must have at least one site");
  adj_ = build_adjacency(n, edges);
  for (const auto& nb : adj_) edge_count_ += nb.size();
  edge_count_ /= 2;
  if (!is_connected(n, adj_)) throw InvalidInput("graph is not connected");
}

bool Graph::adjacent(Site a, Site b) const {
  const auto& nb = neighbors(a);
  return std::binary_search(nb.begin(), nb.end(), b);
}

std::vector<std::pair<Site, Site>> Graph::edges() const {
  std::vector<std::pair<Site, Site>> out;
  out.reserve(edge_count_);
  for (Site u = 0; u < size(); ++u) {
    for (Site v : neighbors(u)) {
      if (u < v) out.emplace_back(u, v);
    }
  }
  return out;
}

Graph load_edge_list(std::string_view text) {
  std::vector<std::pair<Site, Site>> edges;
  int max_id = -1;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;

    std::size_t first = line.find_first_not_of(" \t\r\v\f");
    if (first == std::string_view::npos) continue;
    if (line[first] == '#') continue;

    Site ids[2];
    std::size_t cursor = first;
    for (int k = 0; k < 2; ++k) {
      cursor = line.find_first_not_of(" \t\r\v\f", cursor);
      if (cursor == std::string_view::npos) {
        throw InvalidInput("line " + std::to_string(line_no) + ": expected two site ids");
      }
      const char* b = line.data() + cursor;
      const char* e = line.data() + line.size();
      auto [ptr, ec] = std::from_chars(b, e, ids[k]);
      if (ec != std::errc{} || ids[k] < 0 ||
          (ptr != e && std::string_view(" \t\r\v\f").find(*ptr) == std::string_view::npos)) {
        throw InvalidInput("line " + std::to_string(line_no) + ": malformed site id");
      }
      cursor = static_cast<std::size_t>(ptr - line.data());
    }
    if (line.find_first_not_of(" \t\r\v\f", cursor) != std::string_view::npos) {
      throw InvalidInput("line " + std::to_string(line_no) + ": trailing tokens");
    }
    if (ids[0] == ids[1]) {
      throw InvalidInput("line " + std::to_string(line_no) + ": self-loop on site " +
                         std::to_string(ids[0]));
    }
    edges.emplace_back(ids[0], ids[1]);
    max_id = std::max({max_id, ids[0], ids[1]});
    if (end == text.size()) break;
  }
  if (edges.empty()) throw InvalidInput("edge list is empty");

  const int n = max_id + 1;
  std::vector<char> used(static_cast<std::size_t>(n), 0);
  for (auto [u, v] : edges) used[static_cast<std::size_t>(u)] = used[static_cast<std::size_t>(v)] = 1;
  for (int s = 0; s < n; ++s) {
    if (!used[static_cast<std::size_t>(s)]) {
      throw InvalidInput("site ids are not contiguous: " + std::to_string(s) + " is missing");
    }
  }
  return Graph(n, edges);
}

Graph load_edge_list_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open edge list '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_edge_list(buf.str());
}

std::string to_edge_list(const Graph& g) {
  std::ostringstream out;
  out << "# sites=" << g.size() << " edges=" << g.edge_count() << '\n';
  for (auto [u, v] : g.edges()) out << u << ' ' << v << '\n';
  return out.str();
}

Graph builtin_graph(std::string_view name) {
  if (name == "fig1") {
    const std::pair<Site, Site> e[] = {{0, 1}};
    return Graph(2, e);
  }
  if (name == "fig2") {
    const std::pair<Site, Site> e[] = {{0, 1}, {0, 2}, {1, 2}, {0, 3}, {3, 4}, {3, 5}, {4, 5}};
    return Graph(6, e);
  }
  throw InvalidInput("unknown builtin graph '" + std::string(name) + "' (expected fig1 or fig2)");
}

SiteSet clique_neighborhood(const Graph& g, const SiteSet& members) {
  if (members.empty()) throw InvalidInput("clique_neighborhood: empty member set");
  for (Site s : members) {
    if (s < 0 || s >= g.size()) {
      throw InvalidInput("clique_neighborhood: site " + std::to_string(s) + " out of range");
    }
  }
  SiteSet sorted = members;
  std::sort(sorted.begin(), sorted.end());
  SiteSet out;
  for (Site s : sorted) {
    for (Site t : g.neighbors(s)) {
      if (!std::binary_search(sorted.begin(), sorted.end(), t)) out.push_back(t);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

namespace {

SiteSet intersect(const SiteSet& a, const SiteSet& b) {
  SiteSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

void bron_kerbosch(const Graph& g, SiteSet& r, SiteSet p, SiteSet x, std::vector<SiteSet>& out) {
  if (p.empty() && x.empty()) {
    SiteSet c = r;
    std::sort(c.begin(), c.end());
    out.push_back(std::move(c));
    return;
  }
  // Pivot on the vertex of P u X with the most neighbors in P.
  Site pivot = -1;
  std::size_t best = 0;
  for (const SiteSet* pool : {&p, &x}) {
    for (Site u : *pool) {
      std::size_t cnt = intersect(p, g.neighbors(u)).size();
      if (pivot < 0 || cnt > best) {
        pivot = u;
        best = cnt;
      }
    }
  }
  SiteSet candidates;
  std::set_difference(p.begin(), p.end(), g.neighbors(pivot).begin(), g.neighbors(pivot).end(),
                      std::back_inserter(candidates));
  for (Site v : candidates) {
    r.push_back(v);
    bron_kerbosch(g, r, intersect(p, g.neighbors(v)), intersect(x, g.neighbors(v)), out);
    r.pop_back();
    p.erase(std::lower_bound(p.begin(), p.end(), v));
    x.insert(std::lower_bound(x.begin(), x.end(), v), v);
  }
}

}  // namespace

std::vector<SiteSet> maximal_cliques(const Graph& g) {
  std::vector<SiteSet> out;
  SiteSet r;
  SiteSet p(static_cast<std::size_t>(g.size()));
  for (Site s = 0; s < g.size(); ++s) p[static_cast<std::size_t>(s)] = s;
  bron_kerbosch(g, r, std::move(p), {}, out);
  std::sort(out.begin(), out.end());
  return out;
}

std::size_t CliqueInventory::SetHash::operator()(const SiteSet& s) const {
  std::uint64_t h = 0x84222325CBF29CE4ULL;
  for (Site v : s) h = mix64(h ^ static_cast<std::uint64_t>(v));
  return static_cast<std::size_t>(h);
}

std::size_t CliqueInventory::max_clique_size() const {
  return cliques_.empty() ? 0 : cliques_.back().members.size();
}

std::size_t CliqueInventory::count_of_size(std::size_t s) const {
  return static_cast<std::size_t>(std::count_if(
      cliques_.begin(), cliques_.end(), [s](const Clique& c) { return c.members.size() == s; }));
}

std::optional<std::size_t> CliqueInventory::index_of(const SiteSet& members) const {
  auto it = index_.find(members);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

CliqueInventory enumerate_cliques(const Graph& g, std::optional<std::size_t> max_size,
                                  std::size_t guard) {
  if (max_size && *max_size < 1) throw InvalidInput("enumerate_cliques: max_size must be >= 1");
  const std::size_t cap = max_size.value_or(static_cast<std::size_t>(g.size()));

  auto maximal = maximal_cliques(g);

  // Upper bound on the number of subsets before expanding anything.
  long double estimate = 0;
  for (const auto& m : maximal) {
    long double total = 0, binom = 1;
    for (std::size_t s = 1; s <= std::min(cap, m.size()); ++s) {
      binom = binom * static_cast<long double>(m.size() - s + 1) / static_cast<long double>(s);
      total += binom;
    }
    estimate += total;
  }
  if (estimate > static_cast<long double>(guard) * 64) {
    throw GuardExceeded("clique enumeration: estimated " + std::to_string(static_cast<double>(estimate)) +
                        " subsets exceeds guard " + std::to_string(guard));
  }

  std::set<SiteSet> all;
  for (const auto& m : maximal) {
    const std::size_t k = m.size();
    // Walk subsets by size via combination indices.
    for (std::size_t s = 1; s <= std::min(cap, k); ++s) {
      std::vector<std::size_t> idx(s);
      for (std::size_t i = 0; i < s; ++i) idx[i] = i;
      while (true) {
        SiteSet sub(s);
        for (std::size_t i = 0; i < s; ++i) sub[i] = m[idx[i]];
        all.insert(std::move(sub));
        if (all.size() > guard) {
          throw GuardExceeded("clique enumeration exceeds guard of " + std::to_string(guard) +
                              " cliques");
        }
        std::size_t i = s;
        while (i > 0 && idx[i - 1] == k - s + (i - 1)) --i;
        if (i == 0) break;
        ++idx[i - 1];
        for (std::size_t j = i; j < s; ++j) idx[j] = idx[j - 1] + 1;
      }
    }
  }

  CliqueInventory inv;
  std::vector<SiteSet> sorted(all.begin(), all.end());
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const SiteSet& a, const SiteSet& b) { return a.size() < b.size(); });
  inv.cliques_.reserve(sorted.size());
  for (auto& members : sorted) {
    SiteSet boundary = clique_neighborhood(g, members);
    inv.index_.emplace(members, inv.cliques_.size());
    inv.cliques_.push_back({std::move(members), std::move(boundary)});
  }
  return inv;
}

PlantedGraph planted_partition(int n, const std::vector<int>& blocks, double p_in, double p_out,
                               std::uint64_t seed) {
  long total = 0;
  for (int b : blocks) {
    if (b <= 0) throw InvalidInput("planted_partition: block sizes must be positive");
    total += b;
  }
  if (total != n) throw InvalidInput("planted_partition: block sizes do not sum to n");
  if (!(0.0 <= p_out && p_out <= p_in && p_in <= 1.0)) {
    throw InvalidInput("planted_partition: need 0 <= p_out <= p_in <= 1");
  }

  std::vector<int> block_of;
  block_of.reserve(static_cast<std::size_t>(n));
  for (std::size_t b = 0; b < blocks.size(); ++b) block_of.insert(block_of.end(), static_cast<std::size_t>(blocks[b]), static_cast<int>(b));

  constexpr int max_attempts = 100;
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    RandomStream rng(seed, static_cast<std::uint64_t>(attempt));
    std::vector<std::pair<Site, Site>> edges;
    for (Site u = 0; u < n; ++u) {
      for (Site v = u + 1; v < n; ++v) {
        const double p = block_of[static_cast<std::size_t>(u)] == block_of[static_cast<std::size_t>(v)] ? p_in : p_out;
        if (rng.bernoulli(p)) edges.emplace_back(u, v);
      }
    }
    if (is_connected(n, build_adjacency(n, edges))) {
      return {Graph(n, edges), std::move(block_of), attempt + 1};
    }
  }
  throw NotConverged("planted_partition: no connected graph in " + std::to_string(max_attempts) +
                     " attempts");
}

}  // namespace nng
