#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <json.hpp>

#include "nng/dynamics.hpp"
#include "nng/state.hpp"

namespace nng {

// Sparse row-stochastic matrix of P(g, g') over all configurations, indexed
// by the mixed-radix state index. Columns within a row are sorted.
struct FullKernelMatrix {
  Alphabet alphabet;
  int sites = 0;
  double epsilon = 0.0;
  std::vector<std::uint64_t> row_start;  // size states + 1
  std::vector<std::uint32_t> column;
  std::vector<double> value;

  std::uint64_t states() const { return row_start.size() - 1; }
  double at(std::uint64_t row, std::uint64_t col) const;
  double row_sum(std::uint64_t row) const;
  // Returns pi * P.
  std::vector<double> left_multiply(const std::vector<double>& pi) const;
};

struct MatrixGuard {
  std::uint64_t max_states = 10'000'000;
  std::uint64_t max_nonzeros = 50'000'000;
};

FullKernelMatrix build_transition_matrix(const Kernel& kernel, MatrixGuard guard = {});

// True iff every state reaches every other along positive entries.
bool is_irreducible(const FullKernelMatrix& m);
// Irreducible with a positive diagonal entry somewhere.
bool is_aperiodic(const FullKernelMatrix& m);

enum class SolveMethod { power_iteration, dense };

struct StationaryOptions {
  std::uint64_t max_iterations = 200'000;
  double tolerance = 1e-12;             // on ||pi P - pi||_1
  std::uint64_t dense_fallback_max = 2000;
  bool allow_fallback = true;
};

struct StationaryResult {
  std::vector<double> pi;
  double residual = 0.0;  // ||pi P - pi||_1
  std::uint64_t iterations = 0;
  SolveMethod method = SolveMethod::power_iteration;
};

// Power iteration from the uniform vector; when it does not reach the
// tolerance, falls back to a dense solve for small state spaces or throws
// NotConverged naming the final residual.
StationaryResult stationary_distribution(const FullKernelMatrix& m, const StationaryOptions& opts = {});
StationaryResult stationary_power(const FullKernelMatrix& m, std::uint64_t max_iterations,
                                  double tolerance);
StationaryResult stationary_dense(const FullKernelMatrix& m);

struct ComparisonReport {
  std::uint64_t states = 0;
  double tv = 0.0;
  std::optional<double> max_db_residual;  // max |p(g)P(g,g') - p(g')P(g',g)|
  std::optional<double> max_delta_pi;     // max |(pP)(g) - p(g)|
  double epsilon = 0.0;
};

ComparisonReport compare_distributions(const std::vector<double>& p, const std::vector<double>& q,
                                       const FullKernelMatrix* m = nullptr);
nlohmann::json comparison_report_json(const ComparisonReport& r);

struct AbsorptionReport {
  std::uint64_t trials = 0;
  std::uint64_t absorbed = 0;
  double fraction = 0.0;
  double mean_absorption_time = 0.0;  // over absorbed trials
  std::uint64_t max_steps = 0;
};

// Plain NG (epsilon = 0) from uniformly random starts; trial t uses
// RandomStream(seed, t).
AbsorptionReport absorption_analysis(const Kernel& kernel, std::uint64_t trials,
                                     std::uint64_t max_steps, std::uint64_t seed);

}  // namespace nng
