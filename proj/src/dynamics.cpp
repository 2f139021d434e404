#include "nng/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "nng/error.hpp"
#include "nng/localspec.hpp"

namespace nng {

Kernel::Kernel(std::shared_ptr<const Graph> graph, Alphabet alphabet, double epsilon)
    : Kernel(graph, alphabet, epsilon,
             std::vector<double>(static_cast<std::size_t>(graph ? graph->size() : 0),
                                 graph ? 1.0 / graph->size() : 0.0)) {
  uniform_ = true;
}

Kernel::Kernel(std::shared_ptr<const Graph> graph, Alphabet alphabet, double epsilon,
               std::vector<double> listener_weights)
    : graph_(std::move(graph)), alphabet_(alphabet), epsilon_(epsilon), q_(std::move(listener_weights)) {
  if (!graph_) throw InvalidInput("kernel needs a graph");
  if (!(epsilon_ >= 0.0 && epsilon_ <= 1.0)) throw InvalidInput("epsilon must lie in [0, 1]");
  if (q_.size() != static_cast<std::size_t>(graph_->size())) {
    throw InvalidInput("listener weights must have one entry per site");
  }
  double total = 0;
  for (double w : q_) {
    if (!(w > 0.0)) throw InvalidInput("listener weights must be positive");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12) throw InvalidInput("listener weights must sum to 1");
  cumulative_.resize(q_.size());
  std::partial_sum(q_.begin(), q_.end(), cumulative_.begin());
  uniform_ = std::all_of(q_.begin(), q_.end(), [&](double w) { return w == q_.front(); });
}

Site Kernel::draw_listener(RandomStream& rng) const {
  const auto n = static_cast<std::uint64_t>(q_.size());
  if (uniform_) return static_cast<Site>(rng.below(n));
  const double u = rng.uniform() * cumulative_.back();
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  if (it == cumulative_.end()) --it;
  return static_cast<Site>(it - cumulative_.begin());
}

StepResult advance(const Kernel& kernel, Configuration& c, RandomStream& rng) {
  const Graph& g = kernel.graph();
  const Site listener = kernel.draw_listener(rng);
  const auto& nb = g.neighbors(listener);
  const Site speaker = nb[rng.below(nb.size())];
  const WordList spoken = c[speaker];
  Word w = spoken.nth(static_cast<int>(rng.below(static_cast<std::uint64_t>(spoken.count()))));
  if (kernel.epsilon() > 0.0 && rng.uniform() < kernel.epsilon()) {
    w = static_cast<Word>(rng.below(static_cast<std::uint64_t>(kernel.alphabet().size())));
  }
  const WordList previous = c[listener];
  c.set(listener, apply_word(previous, w));
  return {listener, previous};
}

Configuration step(const Kernel& kernel, const Configuration& c, RandomStream& rng) {
  Configuration next = c;
  advance(kernel, next, rng);
  return next;
}

double local_transition_probability(const Kernel& kernel, const Configuration& g, Site i,
                                    WordList to) {
  const int k = kernel.alphabet().size();
  double p[Alphabet::max_words];
  receive_probs_into(kernel.graph(), i, g.labels(), k, kernel.epsilon(),
                     std::span<double>(p, static_cast<std::size_t>(k)));
  const WordList from = g[i];
  double total = 0.0;
  for (Word w = 0; w < k; ++w) {
    if (apply_word(from, w) == to) total += p[w];
  }
  return total;
}

double transition_probability(const Kernel& kernel, const Configuration& g,
                              const Configuration& g2) {
  const int n = kernel.graph().size();
  if (g.size() != n || g2.size() != n) {
    throw InvalidInput("transition_probability: configuration size mismatch");
  }
  int diff_site = -1;
  for (int i = 0; i < n; ++i) {
    if (g[i] != g2[i]) {
      if (diff_site >= 0) return 0.0;
      diff_site = i;
    }
  }
  if (diff_site >= 0) {
    return kernel.listener_weight(diff_site) *
           local_transition_probability(kernel, g, diff_site, g2[diff_site]);
  }
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    total += kernel.listener_weight(i) * local_transition_probability(kernel, g, i, g[i]);
  }
  return total;
}

Trajectory run(const Kernel& kernel, const Configuration& c0, std::uint64_t steps,
               std::uint64_t seed, const RecorderSpec& recorder, std::uint64_t stream) {
  if (c0.size() != kernel.graph().size()) throw InvalidInput("run: configuration size mismatch");
  if (recorder.every == 0) throw InvalidInput("run: recording interval must be >= 1");
  const std::uint64_t records = steps / recorder.every + 1;
  if (recorder.states) {
    const std::size_t bytes = static_cast<std::size_t>(records) *
                              (static_cast<std::size_t>(c0.size()) * sizeof(WordList) + sizeof(Configuration));
    if (bytes > recorder.memory_guard_bytes) {
      throw GuardExceeded("run: storing " + std::to_string(records) +
                          " full states exceeds the memory guard of " +
                          std::to_string(recorder.memory_guard_bytes) + " bytes");
    }
  }

  Trajectory tr;
  tr.seed = seed;
  tr.steps = steps;
  auto record = [&](std::uint64_t t, const Configuration& c) {
    tr.times.push_back(t);
    if (recorder.states) tr.states.push_back(c);
    if (recorder.strict_count) tr.strict_counts.push_back(strict_count(c, *recorder.strict_count));
    if (recorder.energy) tr.energies.push_back(recorder.energy(c));
  };

  RandomStream rng(seed, stream);
  Configuration c = c0;
  record(0, c);
  for (std::uint64_t t = 1; t <= steps; ++t) {
    advance(kernel, c, rng);
    if (t % recorder.every == 0) record(t, c);
  }
  tr.final_state = std::move(c);
  return tr;
}

Configuration random_configuration(const Alphabet& a, int n, RandomStream& rng) {
  std::vector<WordList> labels;
  labels.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    labels.push_back(WordList::from_bits(static_cast<std::uint32_t>(rng.below(a.list_count())) + 1u));
  }
  return Configuration(a, std::move(labels));
}

}  // namespace nng
