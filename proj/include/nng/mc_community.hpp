#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "nng/dynamics.hpp"
#include "nng/gibbs.hpp"

namespace nng {

// What a histogram bins on.
struct Projector {
  enum class Kind { strict_count, full_state, energy };
  Kind kind = Kind::strict_count;
  Word word = 0;             // strict_count
  double bin_width = 0.01;   // energy: bin = round(H / bin_width)

  static Projector strict(Word w) { return {Kind::strict_count, w, 0.01}; }
  static Projector full_state() { return {Kind::full_state, 0, 0.01}; }
  static Projector energy(double width) { return {Kind::energy, 0, width}; }

  // "strict-count:A", "full-state", "energy:0.01".
  std::string id() const;
  static Projector parse(const std::string& id);
};

// Visit counts of the projector value, sampled every `thin` steps once the
// burn-in is over: samples at t = burnin + thin, burnin + 2*thin, ... <= steps,
// so the total count is (steps - burnin) / thin (integer division).
struct OccupationHistogram {
  Projector projector;
  std::map<std::int64_t, std::uint64_t> counts;
  std::uint64_t steps = 0;
  std::uint64_t burnin = 0;
  std::uint64_t thin = 1;
  std::uint64_t chains = 1;

  std::uint64_t total() const;
  double probability(std::int64_t bin) const;
};

struct OccupationOptions {
  std::uint64_t full_state_guard = 10'000'000;  // max configurations for full-state
  const EnergyContext* energy = nullptr;        // required by the energy projector
};

// One chain on RandomStream(seed, stream).
OccupationHistogram simulate_occupation(const Kernel& kernel, const Configuration& c0,
                                        std::uint64_t steps, std::uint64_t burnin,
                                        std::uint64_t thin, std::uint64_t seed,
                                        const Projector& projector,
                                        const OccupationOptions& options = {},
                                        std::uint64_t stream = 0);

// `chains` independent chains on streams 0..chains-1, run concurrently and
// merged in stream order.
OccupationHistogram simulate_occupation_chains(const Kernel& kernel, const Configuration& c0,
                                               std::uint64_t steps, std::uint64_t burnin,
                                               std::uint64_t thin, std::uint64_t seed,
                                               const Projector& projector, unsigned chains,
                                               const OccupationOptions& options = {});

// Adds b's counts into a. Projector and schedule must agree.
void merge_into(OccupationHistogram& a, const OccupationHistogram& b);

// Empirical distribution over state indices of a full-state histogram.
std::vector<double> empirical_distribution(const OccupationHistogram& h, std::uint64_t states);

// Header "# projector=<id> steps=<N> burnin=<B> thin=<T>", then one
// "bin\tcount\tprobability" row per bin, ascending.
std::string histogram_tsv(const OccupationHistogram& h);

// Community read-out of a multi-name state.
struct PartitionCandidate {
  Configuration state;
  std::vector<SiteSet> blocks;  // blocks[w]: sites whose list is exactly {w}
  SiteSet boundary;             // sites holding more than one word
  double energy = 0.0;
  double frequency = 0.0;       // share of recorded samples in this state
  std::uint64_t visits = 0;
};

PartitionCandidate make_candidate(const Configuration& c);

struct DetectOptions {
  std::uint64_t budget = 1'000'000;          // NNG steps per chain
  std::optional<std::uint64_t> burnin;       // default 10 * n * k
  std::optional<std::uint64_t> thin;         // default n
  std::uint64_t seed = 0;
  std::size_t top_m = 5;
  unsigned chains = 1;
  std::size_t max_tracked = 1'000'000;       // distinct states kept in the visit map
  std::size_t max_scored = 50'000;           // most-visited states whose H is evaluated
};

// Runs the NNG from a uniformly random start, counts visits to multi-name
// states, scores them by exact H and returns the top_m by ascending H
// (higher frequency, then state string, break ties). Throws NotConverged
// when no multi-name state was recorded.
std::vector<PartitionCandidate> detect_communities(const Kernel& kernel, const EnergyContext& ctx,
                                                   const DetectOptions& options);

// Pair-counting Rand index between the candidate's blocks and a reference
// labelling, over pairs of non-boundary sites. 1 when fewer than two such sites.
double partition_similarity(const PartitionCandidate& a, const std::vector<int>& reference);

nlohmann::json community_report_json(const std::vector<PartitionCandidate>& candidates);

}  // namespace nng
