#include "nng/exact_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include <Eigen/Dense>

#include "nng/error.hpp"
#include "nng/localspec.hpp"

namespace nng {

double FullKernelMatrix::at(std::uint64_t row, std::uint64_t col) const {
  auto b = column.begin() + static_cast<std::ptrdiff_t>(row_start[row]);
  auto e = column.begin() + static_cast<std::ptrdiff_t>(row_start[row + 1]);
  auto it = std::lower_bound(b, e, static_cast<std::uint32_t>(col));
  if (it == e || *it != col) return 0.0;
  return value[static_cast<std::size_t>(it - column.begin())];
}

double FullKernelMatrix::row_sum(std::uint64_t row) const {
  double s = 0.0;
  for (std::uint64_t k = row_start[row]; k < row_start[row + 1]; ++k) s += value[k];
  return s;
}

std::vector<double> FullKernelMatrix::left_multiply(const std::vector<double>& pi) const {
  std::vector<double> out(states(), 0.0);
  for (std::uint64_t r = 0; r < states(); ++r) {
    const double w = pi[r];
    if (w == 0.0) continue;
    for (std::uint64_t k = row_start[r]; k < row_start[r + 1]; ++k) out[column[k]] += w * value[k];
  }
  return out;
}

FullKernelMatrix build_transition_matrix(const Kernel& kernel, MatrixGuard guard) {
  const int n = kernel.graph().size();
  const Alphabet& a = kernel.alphabet();
  const std::uint64_t total = state_count(a, n);
  if (total > guard.max_states || total > std::uint64_t{0xFFFFFFFFu}) {
    throw GuardExceeded("transition matrix: " + std::to_string(total) + " states exceeds guard " +
                        std::to_string(guard.max_states));
  }
  const std::uint64_t per_row = 1 + static_cast<std::uint64_t>(n) * (a.list_count() - 1);
  if (total * per_row > guard.max_nonzeros) {
    throw GuardExceeded("transition matrix: up to " + std::to_string(total * per_row) +
                        " nonzeros exceeds guard " + std::to_string(guard.max_nonzeros));
  }

  FullKernelMatrix m{a, n, kernel.epsilon(), {}, {}, {}};
  m.row_start.reserve(total + 1);
  m.row_start.push_back(0);

  // Place value of site i in the mixed-radix index.
  std::vector<std::uint64_t> place(static_cast<std::size_t>(n));
  std::uint64_t p = 1;
  for (int i = n - 1; i >= 0; --i) {
    place[static_cast<std::size_t>(i)] = p;
    p *= a.list_count();
  }

  std::map<std::uint64_t, double> row;
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    const Configuration g = state_from_index(idx, a, n);
    row.clear();
    double stay = 0.0;
    for (int i = 0; i < n; ++i) {
      const WordList from = g[i];
      // Each reachable list once, in ascending bit order.
      for (std::uint32_t bits = 1; bits <= a.list_count(); ++bits) {
        const WordList to = WordList::from_bits(bits);
        bool reachable = false;
        for (Word w = 0; w < a.size() && !reachable; ++w) reachable = apply_word(from, w) == to;
        if (!reachable) continue;
        const double pr = kernel.listener_weight(i) * local_transition_probability(kernel, g, i, to);
        if (to == from) {
          stay += pr;
        } else if (pr > 0.0) {
          const std::uint64_t target = idx - from.digit() * place[static_cast<std::size_t>(i)] +
                                       to.digit() * place[static_cast<std::size_t>(i)];
          row[target] += pr;
        }
      }
    }
    if (stay > 0.0) row[idx] += stay;
    for (auto [col, v] : row) {
      m.column.push_back(static_cast<std::uint32_t>(col));
      m.value.push_back(v);
    }
    m.row_start.push_back(m.column.size());
  }
  return m;
}

namespace {

std::vector<char> reach(const FullKernelMatrix& m, bool reverse) {
  const std::uint64_t n = m.states();
  std::vector<std::vector<std::uint32_t>> rev;
  if (reverse) {
    rev.resize(n);
    for (std::uint64_t r = 0; r < n; ++r) {
      for (std::uint64_t k = m.row_start[r]; k < m.row_start[r + 1]; ++k) {
        if (m.value[k] > 0.0) rev[m.column[k]].push_back(static_cast<std::uint32_t>(r));
      }
    }
  }
  std::vector<char> seen(n, 0);
  std::vector<std::uint64_t> stack{0};
  seen[0] = 1;
  while (!stack.empty()) {
    const std::uint64_t r = stack.back();
    stack.pop_back();
    auto visit = [&](std::uint64_t c) {
      if (!seen[c]) {
        seen[c] = 1;
        stack.push_back(c);
      }
    };
    if (reverse) {
      for (auto c : rev[r]) visit(c);
    } else {
      for (std::uint64_t k = m.row_start[r]; k < m.row_start[r + 1]; ++k) {
        if (m.value[k] > 0.0) visit(m.column[k]);
      }
    }
  }
  return seen;
}

}  // namespace

bool is_irreducible(const FullKernelMatrix& m) {
  auto fwd = reach(m, false), bwd = reach(m, true);
  return std::all_of(fwd.begin(), fwd.end(), [](char c) { return c; }) &&
         std::all_of(bwd.begin(), bwd.end(), [](char c) { return c; });
}

bool is_aperiodic(const FullKernelMatrix& m) {
  if (!is_irreducible(m)) return false;
  for (std::uint64_t r = 0; r < m.states(); ++r) {
    if (m.at(r, r) > 0.0) return true;
  }
  return false;
}

namespace {

double l1_residual(const FullKernelMatrix& m, const std::vector<double>& pi) {
  const auto next = m.left_multiply(pi);
  double r = 0.0;
  for (std::size_t i = 0; i < pi.size(); ++i) r += std::abs(next[i] - pi[i]);
  return r;
}

}  // namespace

StationaryResult stationary_power(const FullKernelMatrix& m, std::uint64_t max_iterations,
                                  double tolerance) {
  const std::uint64_t n = m.states();
  StationaryResult res;
  res.method = SolveMethod::power_iteration;
  std::vector<double> pi(n, 1.0 / static_cast<double>(n));
  for (res.iterations = 0; res.iterations < max_iterations; ++res.iterations) {
    auto next = m.left_multiply(pi);
    const double total = std::accumulate(next.begin(), next.end(), 0.0);
    double r = 0.0;
    for (std::uint64_t i = 0; i < n; ++i) {
      next[i] /= total;
      r += std::abs(next[i] - pi[i]);
    }
    pi.swap(next);
    res.residual = r;
    if (r < tolerance) break;
  }
  res.residual = l1_residual(m, pi);
  res.pi = std::move(pi);
  return res;
}

StationaryResult stationary_dense(const FullKernelMatrix& m) {
  const auto n = static_cast<Eigen::Index>(m.states());
  // (P^T - I) pi = 0 with the last equation replaced by sum(pi) = 1.
  Eigen::MatrixXd A = -Eigen::MatrixXd::Identity(n, n);
  for (std::uint64_t r = 0; r < m.states(); ++r) {
    for (std::uint64_t k = m.row_start[r]; k < m.row_start[r + 1]; ++k) {
      A(static_cast<Eigen::Index>(m.column[k]), static_cast<Eigen::Index>(r)) += m.value[k];
    }
  }
  A.row(n - 1).setOnes();
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
  b(n - 1) = 1.0;
  Eigen::VectorXd x = A.partialPivLu().solve(b);

  StationaryResult res;
  res.method = SolveMethod::dense;
  res.pi.resize(m.states());
  for (Eigen::Index i = 0; i < n; ++i) res.pi[static_cast<std::size_t>(i)] = std::max(0.0, x(i));
  const double total = std::accumulate(res.pi.begin(), res.pi.end(), 0.0);
  for (double& v : res.pi) v /= total;
  res.residual = l1_residual(m, res.pi);
  return res;
}

StationaryResult stationary_distribution(const FullKernelMatrix& m, const StationaryOptions& opts) {
  auto res = stationary_power(m, opts.max_iterations, opts.tolerance);
  if (res.residual < opts.tolerance) return res;
  if (opts.allow_fallback && m.states() <= opts.dense_fallback_max) {
    auto dense = stationary_dense(m);
    dense.iterations = res.iterations;
    return dense;
  }
  throw NotConverged("stationary distribution: power iteration stopped after " +
                     std::to_string(res.iterations) + " iterations with residual " +
                     std::to_string(res.residual));
}

ComparisonReport compare_distributions(const std::vector<double>& p, const std::vector<double>& q,
                                       const FullKernelMatrix* m) {
  if (p.size() != q.size()) throw InvalidInput("compare_distributions: index spaces differ");
  if (m && m->states() != p.size()) throw InvalidInput("compare_distributions: matrix index space differs");
  ComparisonReport r;
  r.states = p.size();
  for (std::size_t i = 0; i < p.size(); ++i) r.tv += std::abs(p[i] - q[i]);
  r.tv *= 0.5;
  if (m) {
    r.epsilon = m->epsilon;
    double db = 0.0;
    for (std::uint64_t g = 0; g < m->states(); ++g) {
      for (std::uint64_t k = m->row_start[g]; k < m->row_start[g + 1]; ++k) {
        const std::uint64_t h = m->column[k];
        db = std::max(db, std::abs(p[g] * m->value[k] - p[h] * m->at(h, g)));
      }
    }
    r.max_db_residual = db;
    const auto moved = m->left_multiply(p);
    double delta = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) delta = std::max(delta, std::abs(moved[i] - p[i]));
    r.max_delta_pi = delta;
  }
  return r;
}

nlohmann::json comparison_report_json(const ComparisonReport& r) {
  nlohmann::json doc;
  doc["tv"] = r.tv;
  doc["max_db_residual"] = r.max_db_residual ? nlohmann::json(*r.max_db_residual) : nlohmann::json(nullptr);
  doc["max_delta_pi"] = r.max_delta_pi ? nlohmann::json(*r.max_delta_pi) : nlohmann::json(nullptr);
  doc["states"] = r.states;
  doc["epsilon"] = r.epsilon;
  return doc;
}

AbsorptionReport absorption_analysis(const Kernel& kernel, std::uint64_t trials,
                                     std::uint64_t max_steps, std::uint64_t seed) {
  if (kernel.epsilon() != 0.0) throw InvalidInput("absorption analysis requires epsilon = 0");
  if (trials == 0) throw InvalidInput("absorption analysis: empty experiment (trials = 0)");
  const int n = kernel.graph().size();
  const Alphabet& a = kernel.alphabet();

  AbsorptionReport rep;
  rep.trials = trials;
  rep.max_steps = max_steps;
  double time_sum = 0.0;
  std::vector<int> strict(static_cast<std::size_t>(a.size()));
  for (std::uint64_t t = 0; t < trials; ++t) {
    RandomStream rng(seed, t);
    Configuration c = random_configuration(a, n, rng);
    std::fill(strict.begin(), strict.end(), 0);
    for (WordList x : c.labels()) {
      if (x.is_single()) ++strict[static_cast<std::size_t>(x.nth(0))];
    }
    auto absorbed = [&] {
      return std::any_of(strict.begin(), strict.end(), [n](int s) { return s == n; });
    };
    std::uint64_t steps = 0;
    while (!absorbed() && steps < max_steps) {
      const auto [listener, old_x] = advance(kernel, c, rng);
      const WordList new_x = c[listener];
      if (old_x != new_x) {
        if (old_x.is_single()) --strict[static_cast<std::size_t>(old_x.nth(0))];
        if (new_x.is_single()) ++strict[static_cast<std::size_t>(new_x.nth(0))];
      }
      ++steps;
    }
    if (absorbed()) {
      ++rep.absorbed;
      time_sum += static_cast<double>(steps);
    }
  }
  rep.fraction = static_cast<double>(rep.absorbed) / static_cast<double>(trials);
  rep.mean_absorption_time = rep.absorbed ? time_sum / static_cast<double>(rep.absorbed) : 0.0;
  return rep;
}

}  // namespace nng
