#include "nng/mc_community.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <thread>
#include <unordered_map>

#include "nng/error.hpp"

namespace nng {

std::string Projector::id() const {
  switch (kind) {
    case Kind::strict_count:
      return std::string("strict-count:") + Alphabet::letter(word);
    case Kind::full_state:
      return "full-state";
    case Kind::energy: {
      char buf[64];
      std::snprintf(buf, sizeof buf, "energy:%g", bin_width);
      return buf;
    }
  }
  return {};
}

Projector Projector::parse(const std::string& id) {
  if (id == "full-state") return full_state();
  if (id.rfind("strict-count:", 0) == 0 && id.size() == 14 && id[13] >= 'A' && id[13] <= 'P') {
    return strict(id[13] - 'A');
  }
  if (id == "energy") return energy(0.01);
  if (id.rfind("energy:", 0) == 0) {
    try {
      std::size_t used = 0;
      const double w = std::stod(id.substr(7), &used);
      if (used == id.size() - 7 && w > 0.0) return energy(w);
    } catch (const std::exception&) {
    }
  }
  throw InvalidInput("unknown projector '" + id + "' (expected strict-count:<word>, full-state or energy:<width>)");
}

std::uint64_t OccupationHistogram::total() const {
  std::uint64_t t = 0;
  for (const auto& [_, c] : counts) t += c;
  return t;
}

double OccupationHistogram::probability(std::int64_t bin) const {
  const auto it = counts.find(bin);
  const std::uint64_t t = total();
  if (it == counts.end() || t == 0) return 0.0;
  return static_cast<double>(it->second) / static_cast<double>(t);
}

OccupationHistogram simulate_occupation(const Kernel& kernel, const Configuration& c0,
                                        std::uint64_t steps, std::uint64_t burnin,
                                        std::uint64_t thin, std::uint64_t seed,
                                        const Projector& projector,
                                        const OccupationOptions& options, std::uint64_t stream) {
  if (steps <= burnin) throw InvalidInput("simulate_occupation: steps must exceed burn-in");
  if (thin == 0) throw InvalidInput("simulate_occupation: thinning interval must be >= 1");
  if (c0.size() != kernel.graph().size()) throw InvalidInput("simulate_occupation: configuration size mismatch");
  if (projector.kind == Projector::Kind::full_state &&
      state_count(kernel.alphabet(), c0.size()) > options.full_state_guard) {
    throw GuardExceeded("simulate_occupation: full-state projector over " +
                        std::to_string(state_count(kernel.alphabet(), c0.size())) +
                        " configurations exceeds guard " + std::to_string(options.full_state_guard));
  }
  if (projector.kind == Projector::Kind::energy && !options.energy) {
    throw InvalidInput("simulate_occupation: energy projector needs an energy context");
  }
  if (projector.kind == Projector::Kind::strict_count && !kernel.alphabet().contains(projector.word)) {
    throw InvalidInput("simulate_occupation: projector word outside the alphabet");
  }

  OccupationHistogram h;
  h.projector = projector;
  h.steps = steps;
  h.burnin = burnin;
  h.thin = thin;

  RandomStream rng(seed, stream);
  Configuration c = c0;
  const WordList target = WordList::single(projector.word);
  int strict = strict_count(c, projector.word);
  const bool track_index = projector.kind == Projector::Kind::full_state;
  std::uint64_t index = track_index ? state_index(c) : 0;

  // Place value of each site, for incremental full-state indices.
  std::vector<std::uint64_t> place(static_cast<std::size_t>(c.size()), 1);
  if (track_index) {
    for (int i = c.size() - 2; i >= 0; --i) {
      place[static_cast<std::size_t>(i)] = place[static_cast<std::size_t>(i) + 1] * kernel.alphabet().list_count();
    }
  }

  for (std::uint64_t t = 1; t <= steps; ++t) {
    const auto [i, before] = advance(kernel, c, rng);
    const WordList after = c[i];
    if (before != after) {
      strict += (after == target) - (before == target);
      if (track_index)
        index = index - before.digit() * place[static_cast<std::size_t>(i)] +
              after.digit() * place[static_cast<std::size_t>(i)];
    }
    if (t <= burnin || (t - burnin) % thin != 0) continue;
    std::int64_t bin = 0;
    switch (projector.kind) {
      case Projector::Kind::strict_count:
        bin = strict;
        break;
      case Projector::Kind::full_state:
        bin = static_cast<std::int64_t>(index);
        break;
      case Projector::Kind::energy:
        bin = std::llround(gibbs_energy(*options.energy, c) / projector.bin_width);
        break;
    }
    ++h.counts[bin];
  }
  return h;
}

void merge_into(OccupationHistogram& a, const OccupationHistogram& b) {
  if (a.projector.id() != b.projector.id() || a.steps != b.steps || a.burnin != b.burnin ||
      a.thin != b.thin) {
    throw InvalidInput("merge: histograms have different projectors or schedules");
  }
  for (const auto& [bin, c] : b.counts) a.counts[bin] += c;
  a.chains += b.chains;
}

OccupationHistogram simulate_occupation_chains(const Kernel& kernel, const Configuration& c0,
                                               std::uint64_t steps, std::uint64_t burnin,
                                               std::uint64_t thin, std::uint64_t seed,
                                               const Projector& projector, unsigned chains,
                                               const OccupationOptions& options) {
  if (chains == 0) throw InvalidInput("simulate_occupation: need at least one chain");
  std::vector<OccupationHistogram> parts(chains);
  std::vector<std::exception_ptr> errors(chains);
  {
    std::vector<std::jthread> pool;
    for (unsigned s = 0; s < chains; ++s) {
      pool.emplace_back([&, s] {
        try {
          parts[s] = simulate_occupation(kernel, c0, steps, burnin, thin, seed, projector, options, s);
        } catch (...) {
          errors[s] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  OccupationHistogram merged = std::move(parts[0]);
  for (unsigned s = 1; s < chains; ++s) merge_into(merged, parts[s]);
  return merged;
}

std::vector<double> empirical_distribution(const OccupationHistogram& h, std::uint64_t states) {
  if (h.projector.kind != Projector::Kind::full_state) {
    throw InvalidInput("empirical_distribution needs a full-state histogram");
  }
  std::vector<double> p(states, 0.0);
  const double t = static_cast<double>(h.total());
  for (const auto& [bin, c] : h.counts) {
    if (bin < 0 || static_cast<std::uint64_t>(bin) >= states) throw InvalidInput("histogram bin outside the state space");
    p[static_cast<std::size_t>(bin)] = static_cast<double>(c) / t;
  }
  return p;
}

std::string histogram_tsv(const OccupationHistogram& h) {
  std::ostringstream out;
  out << "# projector=" << h.projector.id() << " steps=" << h.steps << " burnin=" << h.burnin
      << " thin=" << h.thin << '\n';
  const double t = static_cast<double>(h.total());
  char buf[64];
  for (const auto& [bin, c] : h.counts) {
    std::snprintf(buf, sizeof buf, "%.17g", static_cast<double>(c) / t);
    out << bin << '\t' << c << '\t' << buf << '\n';
  }
  return out.str();
}

PartitionCandidate make_candidate(const Configuration& c) {
  PartitionCandidate p{c, std::vector<SiteSet>(static_cast<std::size_t>(c.alphabet().size())), {}, 0.0, 0.0, 0};
  for (int i = 0; i < c.size(); ++i) {
    if (c[i].is_single()) {
      p.blocks[static_cast<std::size_t>(c[i].nth(0))].push_back(i);
    } else {
      p.boundary.push_back(i);
    }
  }
  return p;
}

namespace {

// Visit counter keyed by codec string. When it outgrows its bound, every
// entry at the current minimum count is dropped.
class VisitMap {
public:
  explicit VisitMap(std::size_t bound) : bound_(bound) {}

  void add(const std::string& key, std::uint64_t n = 1) {
    counts_[key] += n;
    if (counts_.size() > bound_) evict();
  }
  const std::unordered_map<std::string, std::uint64_t>& counts() const { return counts_; }

private:
  void evict() {
    std::uint64_t lowest = UINT64_MAX;
    for (const auto& [_, c] : counts_) lowest = std::min(lowest, c);
    std::erase_if(counts_, [lowest](const auto& kv) { return kv.second == lowest; });
  }

  std::size_t bound_;
  std::unordered_map<std::string, std::uint64_t> counts_;
};

}  // namespace

std::vector<PartitionCandidate> detect_communities(const Kernel& kernel, const EnergyContext& ctx,
                                                   const DetectOptions& options) {
  if (options.budget == 0) throw InvalidInput("detect_communities: budget must be positive");
  if (options.chains == 0) throw InvalidInput("detect_communities: need at least one chain");
  if (ctx.noise().mode != NoiseMode::finite) throw InvalidInput("detect_communities: scoring needs finite epsilon");
  const int n = kernel.graph().size();
  const Alphabet& a = kernel.alphabet();
  const std::uint64_t burnin = options.burnin.value_or(10ULL * static_cast<std::uint64_t>(n) * static_cast<std::uint64_t>(a.size()));
  const std::uint64_t thin = std::max<std::uint64_t>(1, options.thin.value_or(static_cast<std::uint64_t>(n)));

  std::vector<VisitMap> maps(options.chains, VisitMap(options.max_tracked));
  std::vector<std::uint64_t> samples(options.chains, 0);
  {
    std::vector<std::jthread> pool;
    for (unsigned s = 0; s < options.chains; ++s) {
      pool.emplace_back([&, s] {
        RandomStream rng(options.seed, s);
        Configuration c = random_configuration(a, n, rng);
        for (std::uint64_t t = 1; t <= options.budget; ++t) {
          advance(kernel, c, rng);
          if (t <= burnin || (t - burnin) % thin != 0) continue;
          ++samples[s];
          if (c.is_multi_name()) maps[s].add(encode(c));
        }
      });
    }
  }
  VisitMap merged(options.max_tracked);
  std::uint64_t total_samples = 0;
  for (unsigned s = 0; s < options.chains; ++s) {
    total_samples += samples[s];
    // Sorted keys keep the merge (and any eviction) deterministic.
    std::vector<std::pair<std::string, std::uint64_t>> entries(maps[s].counts().begin(), maps[s].counts().end());
    std::sort(entries.begin(), entries.end());
    for (const auto& [k, c] : entries) merged.add(k, c);
  }
  if (merged.counts().empty()) {
    throw NotConverged("detect_communities: no multi-name state visited within the budget");
  }

  std::vector<std::pair<std::string, std::uint64_t>> visited(merged.counts().begin(), merged.counts().end());
  std::sort(visited.begin(), visited.end(), [](const auto& x, const auto& y) {
    return x.second != y.second ? x.second > y.second : x.first < y.first;
  });
  if (visited.size() > options.max_scored) visited.resize(options.max_scored);

  std::vector<PartitionCandidate> scored;
  scored.reserve(visited.size());
  for (const auto& [key, count] : visited) {
    PartitionCandidate p = make_candidate(decode(key, a, n));
    p.energy = gibbs_energy(ctx, p.state);
    p.visits = count;
    p.frequency = static_cast<double>(count) / static_cast<double>(total_samples);
    scored.push_back(std::move(p));
  }
  std::sort(scored.begin(), scored.end(), [](const PartitionCandidate& x, const PartitionCandidate& y) {
    if (x.energy != y.energy) return x.energy < y.energy;
    if (x.visits != y.visits) return x.visits > y.visits;
    return encode(x.state) < encode(y.state);
  });
  if (scored.size() > options.top_m) scored.erase(scored.begin() + static_cast<std::ptrdiff_t>(options.top_m), scored.end());
  return scored;
}

double partition_similarity(const PartitionCandidate& a, const std::vector<int>& reference) {
  const int n = a.state.size();
  if (static_cast<int>(reference.size()) != n) throw InvalidInput("partition_similarity: site universes differ");
  std::vector<int> label(static_cast<std::size_t>(n), -1);
  for (std::size_t w = 0; w < a.blocks.size(); ++w) {
    for (Site s : a.blocks[w]) label[static_cast<std::size_t>(s)] = static_cast<int>(w);
  }
  std::uint64_t agree = 0, pairs = 0;
  for (int i = 0; i < n; ++i) {
    if (label[static_cast<std::size_t>(i)] < 0) continue;
    for (int j = i + 1; j < n; ++j) {
      if (label[static_cast<std::size_t>(j)] < 0) continue;
      ++pairs;
      const bool same_a = label[static_cast<std::size_t>(i)] == label[static_cast<std::size_t>(j)];
      const bool same_r = reference[static_cast<std::size_t>(i)] == reference[static_cast<std::size_t>(j)];
      agree += same_a == same_r;
    }
  }
  return pairs == 0 ? 1.0 : static_cast<double>(agree) / static_cast<double>(pairs);
}

nlohmann::json community_report_json(const std::vector<PartitionCandidate>& candidates) {
  nlohmann::json doc = nlohmann::json::array();
  for (const auto& c : candidates) {
    doc.push_back({{"state", encode(c.state)},
                   {"H", c.energy},
                   {"frequency", c.frequency},
                   {"blocks", c.blocks},
                   {"boundary", c.boundary}});
  }
  return doc;
}

}  // namespace nng
