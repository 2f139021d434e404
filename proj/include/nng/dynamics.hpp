#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "nng/graph.hpp"
#include "nng/rng.hpp"
#include "nng/state.hpp"

namespace nng {

// Transition kernel of the (noisy) naming game. epsilon = 0 is the plain NG.
class Kernel {
public:
  // Uniform listener weights.
  Kernel(std::shared_ptr<const Graph> graph, Alphabet alphabet, double epsilon);
  // Explicit listener weights; must be positive and sum to 1 within 1e-12.
  Kernel(std::shared_ptr<const Graph> graph, Alphabet alphabet, double epsilon,
         std::vector<double> listener_weights);

  const Graph& graph() const { return *graph_; }
  const std::shared_ptr<const Graph>& graph_ptr() const { return graph_; }
  const Alphabet& alphabet() const { return alphabet_; }
  double epsilon() const { return epsilon_; }
  double listener_weight(Site s) const { return q_[static_cast<std::size_t>(s)]; }
  bool uniform_listeners() const { return uniform_; }

  // Draws a listener according to q.
  Site draw_listener(RandomStream& rng) const;

private:
  std::shared_ptr<const Graph> graph_;
  Alphabet alphabet_;
  double epsilon_;
  std::vector<double> q_;
  std::vector<double> cumulative_;
  bool uniform_ = true;
};

struct StepResult {
  Site listener;
  WordList previous;  // listener's list before the step
};

// One NG/NNG step in place: listener i ~ q, speaker uniform on N(i), word
// uniform on the speaker's list, replaced with probability epsilon by a
// uniform word.
StepResult advance(const Kernel& kernel, Configuration& c, RandomStream& rng);

// Value-returning form of advance().
Configuration step(const Kernel& kernel, const Configuration& c, RandomStream& rng);

// Probability that site i's list goes from its current value to `to` in a
// step where i is the listener.
double local_transition_probability(const Kernel& kernel, const Configuration& g, Site i,
                                    WordList to);

// Exact one-step probability P(g, g2). Zero when the configurations differ
// at two or more sites; includes the self-transition mass when g == g2.
double transition_probability(const Kernel& kernel, const Configuration& g,
                              const Configuration& g2);

struct RecorderSpec {
  bool states = false;
  std::optional<Word> strict_count;
  std::function<double(const Configuration&)> energy;
  std::uint64_t every = 1;
  std::size_t memory_guard_bytes = std::size_t{256} << 20;
};

// Observables at t = 0, every, 2*every, ... (<= steps).
struct Trajectory {
  std::uint64_t seed = 0;
  std::uint64_t steps = 0;
  std::vector<std::uint64_t> times;
  std::vector<Configuration> states;
  std::vector<int> strict_counts;
  std::vector<double> energies;
  std::optional<Configuration> final_state;
};

// Applies `steps` steps using RandomStream(seed, stream).
Trajectory run(const Kernel& kernel, const Configuration& c0, std::uint64_t steps,
               std::uint64_t seed, const RecorderSpec& recorder, std::uint64_t stream = 0);

// Configuration with every site's list drawn uniformly from all nonempty lists.
Configuration random_configuration(const Alphabet& a, int n, RandomStream& rng);

}  // namespace nng
