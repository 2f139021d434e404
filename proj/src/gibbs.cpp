#include "nng/gibbs.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <thread>

#include <json.hpp>

#include "nng/error.hpp"

namespace nng {

namespace {

std::vector<int> compute_energy_weights(const CliqueInventory& inv) {
  std::vector<int> weights(inv.size(), 0);
  SiteSet sub;
  for (const Clique& L : inv.cliques()) {
    const std::size_t m = L.members.size();
    const std::uint64_t full = (std::uint64_t{1} << m) - 1;
    for (std::uint64_t mask = 1; mask <= full; ++mask) {
      sub.clear();
      for (std::size_t i = 0; i < m; ++i) {
        if ((mask >> i) & 1u) sub.push_back(L.members[i]);
      }
      const int sign = ((m - sub.size()) % 2 == 0) ? 1 : -1;
      weights[*inv.index_of(sub)] += sign;
    }
  }
  return weights;
}

// Scratch labels start at the zero state everywhere; log_F_scratch switches
// members on and restores them before returning.
double log_F_scratch(const EnergyContext& ctx, std::span<const Site> order,
                     std::span<const WordList> target, std::vector<WordList>& scratch) {
  const WordList zero = ctx.zero_state();
  double total = 0.0;
  try {
    for (Site s : order) {
      const WordList x = target[static_cast<std::size_t>(s)];
      if (x == zero) continue;
      total += local_log_ratio(ctx.graph(), s, scratch, ctx.alphabet(), ctx.noise(), x, zero);
      scratch[static_cast<std::size_t>(s)] = x;
    }
  } catch (...) {
    for (Site s : order) scratch[static_cast<std::size_t>(s)] = zero;
    throw;
  }
  for (Site s : order) scratch[static_cast<std::size_t>(s)] = zero;
  return total;
}

void check_sized(const EnergyContext& ctx, const Configuration& c) {
  if (c.size() != ctx.graph().size()) throw InvalidInput("configuration size does not match graph");
  if (c.alphabet() != ctx.alphabet()) throw InvalidInput("configuration uses a different alphabet");
}

}  // namespace

EnergyContext::EnergyContext(std::shared_ptr<const Graph> graph, Alphabet alphabet, Noise noise,
                             std::size_t clique_guard)
    : graph_(std::move(graph)), alphabet_(alphabet), noise_(noise) {
  if (!graph_) throw InvalidInput("energy context needs a graph");
  if (noise_.mode == NoiseMode::finite && !(noise_.epsilon > 0.0 && noise_.epsilon <= 1.0)) {
    throw InvalidInput("finite noise needs epsilon in (0, 1]");
  }
  inventory_ = std::make_shared<const CliqueInventory>(enumerate_cliques(*graph_, std::nullopt, clique_guard));
  weights_ = std::make_shared<const std::vector<int>>(compute_energy_weights(*inventory_));
  std::vector<SiteSet> orders;
  orders.reserve(inventory_->size());
  for (const Clique& c : inventory_->cliques()) orders.push_back(canonical_order(*graph_, c.members));
  orders_ = std::make_shared<const std::vector<SiteSet>>(std::move(orders));
}

EnergyContext EnergyContext::with_noise(Noise noise) const {
  if (noise.mode == NoiseMode::finite && !(noise.epsilon > 0.0 && noise.epsilon <= 1.0)) {
    throw InvalidInput("finite noise needs epsilon in (0, 1]");
  }
  EnergyContext copy = *this;
  copy.noise_ = noise;
  return copy;
}

SiteSet canonical_order(const Graph& g, const SiteSet& members) {
  const SiteSet boundary = clique_neighborhood(g, members);
  std::vector<std::pair<int, Site>> keyed;
  keyed.reserve(members.size());
  for (Site s : members) {
    int outside = 0;
    for (Site t : g.neighbors(s)) {
      outside += std::binary_search(boundary.begin(), boundary.end(), t);
    }
    keyed.emplace_back(outside, s);
  }
  std::sort(keyed.begin(), keyed.end());
  SiteSet order;
  order.reserve(keyed.size());
  for (auto [_, s] : keyed) order.push_back(s);
  return order;
}

double log_F(const EnergyContext& ctx, const SiteSet& members, const Configuration& x,
             std::span<const Site> order) {
  check_sized(ctx, x);
  if (members.empty()) throw InvalidInput("log_F: empty clique");
  SiteSet sorted = members;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    for (std::size_t j = i + 1; j < sorted.size(); ++j) {
      if (!ctx.graph().adjacent(sorted[i], sorted[j])) throw InvalidInput("log_F: members do not form a clique");
    }
  }
  SiteSet chosen;
  if (order.empty()) {
    chosen = canonical_order(ctx.graph(), sorted);
  } else {
    chosen.assign(order.begin(), order.end());
    SiteSet check = chosen;
    std::sort(check.begin(), check.end());
    if (check != sorted) throw InvalidInput("log_F: order is not a permutation of the clique");
  }
  std::vector<WordList> scratch(static_cast<std::size_t>(x.size()), ctx.zero_state());
  return log_F_scratch(ctx, chosen, x.labels(), scratch);
}

double evaluate_F(const EnergyContext& ctx, const SiteSet& members, const Configuration& x,
                  std::span<const Site> order) {
  return std::exp(log_F(ctx, members, x, order));
}

double clique_potential(const EnergyContext& ctx, const SiteSet& members, const Configuration& x) {
  check_sized(ctx, x);
  const std::size_t m = members.size();
  if (m == 0) throw InvalidInput("clique_potential: empty clique");
  if (m > 30) throw GuardExceeded("clique_potential: clique too large for subset expansion");
  double sum = 0.0;
  SiteSet sub;
  const std::uint64_t full = (std::uint64_t{1} << m) - 1;
  for (std::uint64_t mask = 1; mask <= full; ++mask) {
    sub.clear();
    for (std::size_t i = 0; i < m; ++i) {
      if ((mask >> i) & 1u) sub.push_back(members[i]);
    }
    const double sign = ((m - sub.size()) % 2 == 0) ? 1.0 : -1.0;
    sum += sign * log_F(ctx, sub, x);
  }
  return -sum;
}

double gibbs_energy(const EnergyContext& ctx, const Configuration& c) {
  check_sized(ctx, c);
  const WordList zero = ctx.zero_state();
  std::vector<WordList> scratch(static_cast<std::size_t>(c.size()), zero);
  const auto& cliques = ctx.cliques().cliques();
  double h = 0.0;
  for (std::size_t idx = 0; idx < cliques.size(); ++idx) {
    const int w = ctx.energy_weight(idx);
    if (w == 0) continue;
    const SiteSet& members = cliques[idx].members;
    if (std::all_of(members.begin(), members.end(), [&](Site s) { return c[s] == zero; })) continue;
    h -= w * log_F_scratch(ctx, ctx.switch_order(idx), c.labels(), scratch);
  }
  return h;
}

double gibbs_energy_by_potentials(const EnergyContext& ctx, const Configuration& c) {
  double h = 0.0;
  for (const Clique& L : ctx.cliques().cliques()) h += clique_potential(ctx, L.members, c);
  return h;
}

EnergyTable exact_gibbs_distribution(const EnergyContext& ctx, std::uint64_t guard,
                                     unsigned workers) {
  if (ctx.noise().mode != NoiseMode::finite) {
    throw InvalidInput("exact Gibbs distribution requires finite epsilon (limit mode diverges on single-name states)");
  }
  const int n = ctx.graph().size();
  const std::uint64_t total = state_count(ctx.alphabet(), n);
  if (total > guard) {
    throw GuardExceeded("state space of " + std::to_string(total) + " configurations exceeds guard " +
                        std::to_string(guard));
  }
  EnergyTable table{ctx.alphabet(), n, std::vector<double>(total), std::vector<double>(total), 0.0};

  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(total)));
  auto fill = [&](std::uint64_t begin, std::uint64_t end) {
    for (std::uint64_t i = begin; i < end; ++i) {
      table.energy[i] = gibbs_energy(ctx, state_from_index(i, ctx.alphabet(), n));
    }
  };
  if (workers == 1) {
    fill(0, total);
  } else {
    std::vector<std::thread> pool;
    const std::uint64_t chunk = (total + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
      const std::uint64_t b = std::min(total, w * chunk), e = std::min(total, b + chunk);
      pool.emplace_back(fill, b, e);
    }
    for (auto& t : pool) t.join();
  }

  const double h_min = *std::min_element(table.energy.begin(), table.energy.end());
  double z = 0.0;
  for (double h : table.energy) z += std::exp(-(h - h_min));
  table.log_partition = std::log(z) - h_min;
  for (std::uint64_t i = 0; i < total; ++i) {
    table.probability[i] = std::exp(-(table.energy[i] - h_min)) / z;
  }
  return table;
}

bool is_local_minimum(const EnergyContext& ctx, const Configuration& c) {
  if (ctx.noise().mode != NoiseMode::finite) {
    throw InvalidInput("is_local_minimum requires finite epsilon");
  }
  const double h0 = gibbs_energy(ctx, c);
  Configuration probe = c;
  for (int i = 0; i < c.size(); ++i) {
    for (std::uint32_t bits = 1; bits <= ctx.alphabet().list_count(); ++bits) {
      const WordList x = WordList::from_bits(bits);
      if (x == c[i]) continue;
      probe.set(i, x);
      const bool higher = gibbs_energy(ctx, probe) > h0;
      probe.set(i, c[i]);
      if (!higher) return false;
    }
  }
  return true;
}

nlohmann::json energy_report_json(const EnergyTable& table) {
  struct Row {
    std::string state;
    double h, pi;
  };
  std::vector<Row> rows;
  rows.reserve(table.energy.size());
  for (std::uint64_t i = 0; i < table.energy.size(); ++i) {
    rows.push_back({encode(state_from_index(i, table.alphabet, table.sites)), table.energy[i],
                    table.probability[i]});
  }
  std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
    return a.h != b.h ? a.h < b.h : a.state < b.state;
  });
  nlohmann::json doc = nlohmann::json::array();
  for (const Row& r : rows) doc.push_back({{"state", r.state}, {"H", r.h}, {"pi", r.pi}});
  return doc;
}

}  // namespace nng
