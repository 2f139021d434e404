#include "nng/localspec.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include <Eigen/Dense>

#include "nng/error.hpp"

namespace nng {

void receive_probs_into(const Graph& g, Site site, std::span<const WordList> labels, int k,
                        double epsilon, std::span<double> out) {
  for (int w = 0; w < k; ++w) out[static_cast<std::size_t>(w)] = 0.0;
  const auto& nb = g.neighbors(site);
  for (Site j : nb) {
    const WordList x = labels[static_cast<std::size_t>(j)];
    const double share = 1.0 / x.count();
    for (int w = 0; w < k; ++w) {
      if (x.contains(w)) out[static_cast<std::size_t>(w)] += share;
    }
  }
  const double scale = (1.0 - epsilon) / static_cast<double>(nb.size());
  const double floor = epsilon / k;
  for (int w = 0; w < k; ++w) {
    out[static_cast<std::size_t>(w)] = floor + scale * out[static_cast<std::size_t>(w)];
  }
}

ReceiveProbs receive_probs(const Graph& g, Site site, const Configuration& config, Noise noise) {
  if (site < 0 || site >= g.size()) throw InvalidInput("receive_probs: site out of range");
  if (config.size() != g.size()) throw InvalidInput("receive_probs: configuration size mismatch");
  const int k = config.alphabet().size();
  ReceiveProbs rp{std::vector<double>(static_cast<std::size_t>(k)), noise};
  receive_probs_into(g, site, config.labels(), k, noise.effective(), rp.p);
  return rp;
}

std::vector<double> local_chain_matrix(std::span<const double> p) {
  const int k = static_cast<int>(p.size());
  const std::size_t m = (1u << k) - 1u;
  std::vector<double> P(m * m, 0.0);
  for (std::uint32_t bits = 1; bits <= m; ++bits) {
    const WordList x = WordList::from_bits(bits);
    for (int w = 0; w < k; ++w) {
      P[x.digit() * m + apply_word(x, w).digit()] += p[static_cast<std::size_t>(w)];
    }
  }
  return P;
}

LocalDistribution solve_local_chain(std::span<const double> p) {
  const int k = static_cast<int>(p.size());
  const std::size_t m = (1u << k) - 1u;
  LocalDistribution out;
  out.f.assign(m, 0.0);

  if (m <= 1023) {
    const auto P = local_chain_matrix(p);
    // (P^T - I) f = 0 with the last equation replaced by sum(f) = 1.
    Eigen::MatrixXd A(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
    for (std::size_t r = 0; r < m; ++r) {
      for (std::size_t c = 0; c < m; ++c) {
        A(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = P[c * m + r] - (r == c ? 1.0 : 0.0);
      }
    }
    A.row(static_cast<Eigen::Index>(m - 1)).setOnes();
    Eigen::VectorXd b = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m));
    b(static_cast<Eigen::Index>(m - 1)) = 1.0;
    Eigen::VectorXd f = A.fullPivLu().solve(b);
    for (std::size_t i = 0; i < m; ++i) out.f[i] = std::max(0.0, f(static_cast<Eigen::Index>(i)));
  } else {
    // Sparse power iteration; every state has k outgoing moves.
    std::vector<double> cur(m, 1.0 / static_cast<double>(m)), next(m);
    for (int it = 0; it < 1'000'000; ++it) {
      std::fill(next.begin(), next.end(), 0.0);
      for (std::uint32_t bits = 1; bits <= m; ++bits) {
        const WordList x = WordList::from_bits(bits);
        for (int w = 0; w < k; ++w) {
          next[apply_word(x, w).digit()] += cur[x.digit()] * p[static_cast<std::size_t>(w)];
        }
      }
      double diff = 0;
      for (std::size_t i = 0; i < m; ++i) diff += std::abs(next[i] - cur[i]);
      cur.swap(next);
      if (diff < 1e-15) break;
    }
    out.f = cur;
  }
  const double total = std::accumulate(out.f.begin(), out.f.end(), 0.0);
  for (double& v : out.f) v /= total;
  return out;
}

namespace {

// A zero receive probability can only occur at epsilon = 0.
void check_positive(std::span<const double> p) {
  for (std::size_t w = 0; w < p.size(); ++w) {
    if (p[w] <= 0.0) {
      throw Divergence(std::string("local specification: word ") +
                       Alphabet::letter(static_cast<Word>(w)) + " has zero receive probability");
    }
  }
}

}  // namespace

LocalDistribution local_spec(const ReceiveProbs& rp) {
  check_positive(rp.p);
  if (rp.p.size() == 2) {
    const double pa = rp.p[0], pb = rp.p[1];
    const double z = pa * pa + pb * pb + pa * pb;
    LocalDistribution out;
    // digits: A=0, B=1, AB=2
    out.f = {pa * pa / z, pb * pb / z, pa * pb / z};
    out.normalizer = z;
    return out;
  }
  return solve_local_chain(rp.p);
}

double local_log_ratio(const Graph& g, Site site, std::span<const WordList> labels,
                       const Alphabet& a, Noise noise, WordList x, WordList ref) {
  if (x == ref) return 0.0;
  const int k = a.size();
  double buf[Alphabet::max_words];
  std::span<double> p(buf, static_cast<std::size_t>(k));
  receive_probs_into(g, site, labels, k, noise.effective(), p);
  check_positive(p);

  if (k == 2) {
    // f(x) ~ p_A^{a(x)} p_B^{b(x)} with (a,b) = (2,0), (0,2), (1,1).
    auto log_weight = [&](WordList y) {
      const int na = y.contains(0) ? (y.contains(1) ? 1 : 2) : 0;
      const int nb = 2 - na;
      return na * std::log(p[0]) + nb * std::log(p[1]);
    };
    return log_weight(x) - log_weight(ref);
  }

  const auto ld = solve_local_chain(p);
  const double fx = ld(x), fr = ld(ref);
  if (fx <= 0.0 || fr <= 0.0) {
    throw Divergence("local specification ratio " + format_list(x) + "/" + format_list(ref) +
                     " has a zero term");
  }
  return std::log(fx) - std::log(fr);
}

}  // namespace nng
