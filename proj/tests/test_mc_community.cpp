#include <doctest.h>

#include <cmath>
#include <limits>

#include "nng/error.hpp"
#include "nng/exact_oracle.hpp"
#include "nng/mc_community.hpp"

using namespace nng;

namespace {

const Alphabet k2(2);

std::shared_ptr<const Graph> builtin(const char* name) {
  return std::make_shared<const Graph>(builtin_graph(name));
}

std::shared_ptr<const Graph> two_four_cliques() {
  std::vector<std::pair<Site, Site>> e;
  for (int base : {0, 4})
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j) e.emplace_back(base + i, base + j);
  e.emplace_back(3, 4);
  return std::make_shared<const Graph>(Graph(8, e));
}

}  // namespace

TEST_CASE("partition similarity") {
  const PartitionCandidate c = make_candidate(decode("A-A-A-B-B-B", k2));
  CHECK(partition_similarity(c, {0, 0, 0, 1, 1, 1}) == 1.0);
  CHECK(partition_similarity(c, {1, 1, 1, 0, 0, 0}) == 1.0);
  CHECK(partition_similarity(make_candidate(decode("B-B-B-A-A-A", k2)), {0, 0, 0, 1, 1, 1}) == 1.0);
  CHECK(partition_similarity(make_candidate(decode("A-A-A-A", k2)), {0, 1, 2, 3}) == 0.0);
  // boundary sites leave the pair universe
  const PartitionCandidate b = make_candidate(decode("A-AB-A-B-B-B", k2));
  CHECK(b.boundary == SiteSet{1});
  CHECK(partition_similarity(b, {0, 1, 0, 1, 1, 1}) == 1.0);
  CHECK(partition_similarity(make_candidate(decode("AB-AB-A", k2)), {0, 1, 2}) == 1.0);
  CHECK_THROWS_AS(partition_similarity(c, {0, 0, 0}), InvalidInput);
  // blocks and boundary partition the sites
  CHECK(b.blocks[0] == SiteSet{0, 2});
  CHECK(b.blocks[1] == SiteSet{3, 4, 5});
}

TEST_CASE("projector ids") {
  CHECK(Projector::parse("strict-count:A").id() == "strict-count:A");
  CHECK(Projector::parse("strict-count:B").word == 1);
  CHECK(Projector::parse("full-state").kind == Projector::Kind::full_state);
  CHECK(Projector::parse("energy:0.5").bin_width == 0.5);
  CHECK_THROWS_AS(Projector::parse("nonsense"), InvalidInput);
  CHECK_THROWS_AS(Projector::parse("energy:-1"), InvalidInput);
}

TEST_CASE("occupation histogram schedule") {
  const Kernel k(builtin("fig2"), k2, 0.01);
  const Configuration c0 = decode("A-B-AB-A-B-AB", k2);
  CHECK_THROWS_AS(simulate_occupation(k, c0, 100, 100, 1, 1, Projector::strict(0)), InvalidInput);
  CHECK_THROWS_AS(simulate_occupation(k, c0, 100, 10, 0, 1, Projector::strict(0)), InvalidInput);
  CHECK_THROWS_AS(simulate_occupation(k, c0, 100, 10, 1, 1, Projector::energy(0.1)), InvalidInput);

  const OccupationHistogram h = simulate_occupation(k, c0, 1000, 100, 7, 5, Projector::strict(0));
  CHECK(h.total() == (1000 - 100) / 7);
  const OccupationHistogram again = simulate_occupation(k, c0, 1000, 100, 7, 5, Projector::strict(0));
  CHECK(h.counts == again.counts);
  CHECK(histogram_tsv(h) == histogram_tsv(again));
  CHECK(histogram_tsv(h).rfind("# projector=strict-count:A steps=1000 burnin=100 thin=7\n", 0) == 0);

  const OccupationHistogram multi = simulate_occupation_chains(k, c0, 1000, 100, 7, 5, Projector::strict(0), 3);
  CHECK(multi.total() == 3 * h.total());
  OccupationHistogram manual = simulate_occupation(k, c0, 1000, 100, 7, 5, Projector::strict(0), {}, 0);
  merge_into(manual, simulate_occupation(k, c0, 1000, 100, 7, 5, Projector::strict(0), {}, 1));
  merge_into(manual, simulate_occupation(k, c0, 1000, 100, 7, 5, Projector::strict(0), {}, 2));
  CHECK(manual.counts == multi.counts);

  const EnergyContext ctx(builtin("fig2"), k2, Noise::finite(0.01));
  OccupationOptions eo;
  eo.energy = &ctx;
  const OccupationHistogram eh = simulate_occupation(k, c0, 2000, 0, 1, 5, Projector::energy(0.01), eo);
  CHECK(eh.total() == 2000);
}

TEST_CASE("full-state occupation converges towards the exact chain") {
  const auto g = builtin("fig2");
  const Kernel k(g, k2, 0.01);
  const StationaryResult pi = stationary_distribution(build_transition_matrix(k));
  const Configuration c0 = Configuration::uniform(k2, 6, WordList::from_bits(3));
  std::vector<double> tv;
  for (std::uint64_t steps : {100'000ULL, 1'000'000ULL, 10'000'000ULL}) {
    const OccupationHistogram h = simulate_occupation(k, c0, steps, 10'000, 1, 77, Projector::full_state());
    tv.push_back(compare_distributions(empirical_distribution(h, 729), pi.pi).tv);
  }
  const int down = (tv[1] <= tv[0]) + (tv[2] <= tv[1]);
  CHECK(down >= 1);
  CHECK(tv[2] < 0.02);
  MESSAGE("TV at 1e5/1e6/1e7 steps: " << tv[0] << " " << tv[1] << " " << tv[2]);
}

TEST_CASE("detection on the bridged triangles") {
  const auto g = builtin("fig2");
  const Kernel k(g, k2, 0.01);
  const EnergyContext ctx(g, k2, Noise::finite(0.01));
  DetectOptions o;
  o.budget = 2'000'000;
  o.seed = 3;
  const auto top = detect_communities(k, ctx, o);
  REQUIRE(!top.empty());
  CHECK(top.size() <= 5);
  for (std::size_t i = 0; i + 1 < top.size(); ++i) CHECK(top[i].energy <= top[i + 1].energy);
  for (const auto& c : top) {
    CHECK(c.state.is_multi_name());
    CHECK(c.energy == gibbs_energy(ctx, c.state));
  }
  CHECK(partition_similarity(top[0], {0, 0, 0, 1, 1, 1}) == 1.0);
  CHECK(top[0].boundary.empty());

  const auto again = detect_communities(k, ctx, o);
  CHECK(community_report_json(top) == community_report_json(again));

  CHECK_THROWS_AS(detect_communities(Kernel(g, k2, 0.01), ctx, DetectOptions{0}), InvalidInput);
}

TEST_CASE("detection on two bridged 4-cliques matches exhaustive ranking") {
  const auto g = two_four_cliques();
  const EnergyContext ctx(g, k2, Noise::finite(0.01));
  // exhaustive oracle over all 3^8 states
  double best = std::numeric_limits<double>::infinity();
  std::string best_state;
  for (std::uint64_t i = 0; i < state_count(k2, 8); ++i) {
    const Configuration c = state_from_index(i, k2, 8);
    if (!c.is_multi_name()) continue;
    const double h = gibbs_energy(ctx, c);
    if (h < best) {
      best = h;
      best_state = encode(c);
    }
  }
  const PartitionCandidate oracle = make_candidate(decode(best_state, k2));
  CHECK(partition_similarity(oracle, {0, 0, 0, 0, 1, 1, 1, 1}) == 1.0);
  CHECK(oracle.boundary.empty());

  DetectOptions o;
  o.budget = 3'000'000;
  o.seed = 11;
  const auto top = detect_communities(Kernel(g, k2, 0.01), ctx, o);
  REQUIRE(!top.empty());
  CHECK(top[0].energy == doctest::Approx(best).epsilon(1e-12));
  CHECK(partition_similarity(top[0], {0, 0, 0, 0, 1, 1, 1, 1}) == 1.0);
  const auto json = community_report_json(top);
  CHECK(json[0].contains("blocks"));
  CHECK(json[0].contains("frequency"));
}
