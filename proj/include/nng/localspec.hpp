#pragma once

#include <span>
#include <vector>

#include "nng/graph.hpp"
#include "nng/state.hpp"

namespace nng {

enum class NoiseMode { finite, limit };

// Noise setting shared by the local specification and the Gibbs construction.
// In limit mode the epsilon -> 0 formulas are used regardless of `epsilon`.
struct Noise {
  NoiseMode mode = NoiseMode::finite;
  double epsilon = 0.01;

  double effective() const { return mode == NoiseMode::limit ? 0.0 : epsilon; }
  static Noise limit() { return {NoiseMode::limit, 0.0}; }
  static Noise finite(double eps) { return {NoiseMode::finite, eps}; }
};

// Probability that a listener receives each word, given its neighbors' lists.
struct ReceiveProbs {
  std::vector<double> p;  // indexed by word
  Noise noise;
};

// p(w) = eps/k + (1-eps)/deg * sum_{j in N(i)} [w in X(j)] / |X(j)|.
// Only the neighbors of `site` are read from `config`.
ReceiveProbs receive_probs(const Graph& g, Site site, const Configuration& config, Noise noise);

// Same formula over a raw label array, writing k probabilities into `out`.
void receive_probs_into(const Graph& g, Site site, std::span<const WordList> labels, int k,
                        double epsilon, std::span<double> out);

// Stationary law of the single-site chain x -> apply_word(x, w), w ~ p, with
// the neighborhood frozen. Indexed by WordList::digit().
struct LocalDistribution {
  std::vector<double> f;
  // p_A^2 + p_B^2 + p_A p_B for two words; 1 for the numerical solve.
  double normalizer = 1.0;

  double operator()(WordList x) const { return f[x.digit()]; }
};

// Two words use the closed form f(A) ~ p_A^2, f(B) ~ p_B^2, f(AB) ~ p_A p_B.
// Larger alphabets solve the (2^k - 1)-state chain numerically. Limit-mode
// input with any zero receive probability throws Divergence.
LocalDistribution local_spec(const ReceiveProbs& rp);

// Numerical stationary solve of the local chain, any k. Exposed so the
// closed form can be checked against it.
LocalDistribution solve_local_chain(std::span<const double> p);

// Row-stochastic transition matrix of the local chain, dense, row-major,
// indexed by digit.
std::vector<double> local_chain_matrix(std::span<const double> p);

// ln f(x) - ln f(ref) for the local specification of `site`.
// Throws Divergence when a limit-mode evaluation meets a zero probability.
double local_log_ratio(const Graph& g, Site site, std::span<const WordList> labels,
                       const Alphabet& a, Noise noise, WordList x, WordList ref);

}  // namespace nng
