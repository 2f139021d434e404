#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numeric>

#include "nng/error.hpp"
#include "nng/gibbs.hpp"
#include "nng/rng.hpp"

using namespace nng;

namespace {

const Alphabet k2(2);

EnergyContext context(const char* name, Noise noise, const Alphabet& a = k2) {
  return EnergyContext(std::make_shared<const Graph>(builtin_graph(name)), a, noise);
}

Configuration swap_ab(const Configuration& c) {
  std::vector<WordList> out;
  for (WordList x : c.labels()) {
    std::uint32_t b = x.bits() & ~3u;
    if (x.contains(0)) b |= 2u;
    if (x.contains(1)) b |= 1u;
    out.push_back(WordList::from_bits(b));
  }
  return Configuration(c.alphabet(), out);
}

Configuration random_state(const Alphabet& a, int n, RandomStream& rng) {
  std::vector<WordList> labels;
  for (int i = 0; i < n; ++i) labels.push_back(WordList::from_bits(1 + static_cast<std::uint32_t>(rng.below(a.list_count()))));
  return Configuration(a, labels);
}

}  // namespace

TEST_CASE("bridge edge potentials") {
  // The bridge {0,3}: each end keeps two more neighbors at the zero state.
  const EnergyContext ctx = context("fig2", Noise::limit());
  const SiteSet L{0, 3};
  auto at = [](const char* s) { return decode(s, k2); };
  CHECK(evaluate_F(ctx, L, at("A-AB-AB-AB-AB-AB")) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(evaluate_F(ctx, L, at("A-AB-AB-A-AB-AB")) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(evaluate_F(ctx, L, at("A-AB-AB-B-AB-AB")) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(std::abs(clique_potential(ctx, L, at("A-AB-AB-AB-AB-AB"))) < 1e-12);
  CHECK(clique_potential(ctx, L, at("A-AB-AB-A-AB-AB")) == doctest::Approx(-std::log(2.0)).epsilon(1e-12));
  CHECK(clique_potential(ctx, L, at("A-AB-AB-B-AB-AB")) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("isolated edge") {
  // Once one end is A, the other hears no B at all.
  const EnergyContext lim = context("fig1", Noise::limit());
  const SiteSet L{0, 1};
  CHECK(evaluate_F(lim, L, decode("A-AB", k2)) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(clique_potential(lim, L, decode("A-AB", k2))) < 1e-12);
  CHECK_THROWS_AS(evaluate_F(lim, L, decode("A-A", k2)), Divergence);
  CHECK_THROWS_AS(evaluate_F(lim, L, decode("A-B", k2)), Divergence);

  // finite noise: p_A = 1 - eps/2 at the second switch, so F(A-A) = p_A / p_B
  const double eps = 0.01;
  const EnergyContext fin = lim.with_noise(Noise::finite(eps));
  CHECK(evaluate_F(fin, L, decode("A-A", k2)) == doctest::Approx((1 - eps / 2) / (eps / 2)).epsilon(1e-12));
  CHECK(evaluate_F(fin, L, decode("A-B", k2)) == doctest::Approx((eps / 2) / (1 - eps / 2)).epsilon(1e-12));
}

TEST_CASE("triangle F values on the bridged graph") {
  const EnergyContext ctx = context("fig2", Noise::limit());
  const SiteSet L{0, 1, 2};
  auto at = [](const char* s) { return decode(s, k2); };
  CHECK(std::abs(evaluate_F(ctx, L, at("A-A-A-AB-AB-AB")) - 15.0) < 1e-12);
  CHECK(std::abs(evaluate_F(ctx, L, at("AB-A-A-AB-AB-AB")) - 3.0) < 1e-12);
  CHECK(std::abs(evaluate_F(ctx, L, at("B-A-A-AB-AB-AB")) - 0.6) < 1e-12);
  // Only members are read: the rest of the configuration is irrelevant.
  CHECK(std::abs(evaluate_F(ctx, L, at("A-A-A-B-B-B")) - 15.0) < 1e-12);

  // Summed over sub-cliques, the potentials telescope to -ln F.
  for (const char* s : {"A-A-A-AB-AB-AB", "AB-A-A-AB-AB-AB", "B-A-A-AB-AB-AB"}) {
    double cumulative = 0.0;
    for (const Clique& c : ctx.cliques().cliques()) {
      if (std::includes(L.begin(), L.end(), c.members.begin(), c.members.end()))
        cumulative += clique_potential(ctx, c.members, at(s));
    }
    CHECK(std::abs(cumulative + std::log(evaluate_F(ctx, L, at(s)))) < 1e-12);
  }
  CHECK(std::abs(clique_potential(ctx, L, at("A-A-A-B-B-B")) + std::log(15.0 / 12.0)) < 1e-12);
}

TEST_CASE("total energies on the bridged graph") {
  const EnergyContext ctx = context("fig2", Noise::limit());
  const double h1 = gibbs_energy(ctx, decode("A-A-A-B-B-B", k2));
  const double h2 = gibbs_energy(ctx, decode("A-A-A-A-B-B", k2));
  // 2 ln(1/15) + ln 2 and ln(1/15) - ln(3 * 3/5 * ...) from the switch products
  CHECK(std::abs(h1 - (-2 * std::log(15.0) + std::log(2.0))) < 1e-12);
  CHECK(h1 == doctest::Approx(-4.7230).epsilon(1e-4));
  CHECK(h2 == doctest::Approx(-2.8904).epsilon(1e-4));
}

TEST_CASE("F of the zero state and of single sites") {
  for (Noise noise : {Noise::limit(), Noise::finite(0.01)}) {
    const EnergyContext ctx = context("fig2", noise);
    const Configuration zero = Configuration::uniform(k2, 6, ctx.zero_state());
    for (const Clique& c : ctx.cliques().cliques()) {
      CHECK(evaluate_F(ctx, c.members, zero) == 1.0);
      if (c.members.size() == 1) {
        for (const char* s : {"A-A-A-A-A-A", "B-B-B-B-B-B"})
          CHECK(std::abs(clique_potential(ctx, c.members, decode(s, k2))) < 1e-12);
      }
    }
    CHECK(gibbs_energy(ctx, zero) == 0.0);
  }
}

TEST_CASE("energy by weights equals the literal potential sum") {
  RandomStream rng(17);
  for (const char* name : {"fig1", "fig2"}) {
    const EnergyContext ctx = context(name, Noise::finite(0.01));
    const int n = ctx.graph().size();
    for (int t = 0; t < 200; ++t) {
      const Configuration c = random_state(k2, n, rng);
      CHECK(std::abs(gibbs_energy(ctx, c) - gibbs_energy_by_potentials(ctx, c)) < 1e-10);
      CHECK(std::abs(gibbs_energy(ctx, c) - gibbs_energy(ctx, swap_ab(c))) < 1e-10);
    }
  }
}

TEST_CASE("Mobius telescoping on random cliques") {
  RandomStream rng(23);
  const EnergyContext ctx = context("fig2", Noise::finite(0.05));
  const auto& cl = ctx.cliques().cliques();
  for (int t = 0; t < 200; ++t) {
    const Clique& L = cl[rng.below(cl.size())];
    const Configuration c = random_state(k2, 6, rng);
    double sum = 0.0;
    for (const Clique& s : cl)
      if (std::includes(L.members.begin(), L.members.end(), s.members.begin(), s.members.end()))
        sum += clique_potential(ctx, s.members, c);
    CHECK(std::abs(sum + log_F(ctx, L.members, c)) < 1e-10);
  }
}

TEST_CASE("switch order on a single edge") {
  const EnergyContext ctx = context("fig1", Noise::finite(0.01));
  RandomStream rng(4);
  for (int t = 0; t < 20; ++t) {
    const Configuration c = random_state(k2, 2, rng);
    const std::vector<Site> fwd{0, 1}, rev{1, 0};
    CHECK(std::abs(log_F(ctx, {0, 1}, c, fwd) - log_F(ctx, {0, 1}, c, rev)) < 1e-10);
  }
}

TEST_CASE("canonical order puts boundary-heavy sites last") {
  const Graph g = builtin_graph("fig2");
  CHECK(canonical_order(g, {0, 1, 2}) == SiteSet{1, 2, 0});
  CHECK(canonical_order(g, {0, 3}) == SiteSet{0, 3});
  const EnergyContext ctx = context("fig2", Noise::finite(0.01));
  const Configuration c = decode("A-A-A-B-B-B", k2);
  const std::vector<Site> bad{0, 0, 1};
  CHECK_THROWS_AS(log_F(ctx, {0, 1, 2}, c, bad), InvalidInput);
  CHECK_THROWS_AS(log_F(ctx, {1, 4}, c), InvalidInput);
}

TEST_CASE("limit mode matches tiny noise") {
  for (const char* name : {"fig1", "fig2"}) {
    const EnergyContext lim = context(name, Noise::limit());
    const EnergyContext tiny = lim.with_noise(Noise::finite(1e-8));
    const int n = lim.graph().size();
    const char* states[] = {"A-AB", "A-A", "A-B", "A-A-A-B-B-B", "AB-A-A-AB-AB-AB", "A-A-A-A-B-B"};
    for (const char* s : states) {
      if (static_cast<int>(std::count(s, s + std::strlen(s), '-')) + 1 != n) continue;
      const Configuration c = decode(s, k2);
      for (const Clique& L : lim.cliques().cliques()) {
        double v = 0.0;
        try {
          v = clique_potential(lim, L.members, c);
        } catch (const Divergence&) {
          continue;
        }
        CHECK(std::abs(v - clique_potential(tiny, L.members, c)) < 1e-3);
      }
    }
  }
}

TEST_CASE("limit mode diverges on consensus") {
  const EnergyContext ctx = context("fig2", Noise::limit());
  CHECK_THROWS_AS(gibbs_energy(context("fig1", Noise::limit()), decode("A-A", k2)), Divergence);
  CHECK_THROWS_AS(exact_gibbs_distribution(ctx), InvalidInput);
}

TEST_CASE("exact Gibbs table") {
  const EnergyContext ctx = context("fig2", Noise::finite(0.01));
  const EnergyTable t = exact_gibbs_distribution(ctx);
  REQUIRE(t.energy.size() == 729);
  CHECK(std::abs(std::accumulate(t.probability.begin(), t.probability.end(), 0.0) - 1.0) < 1e-10);
  const auto hmin = std::min_element(t.energy.begin(), t.energy.end()) - t.energy.begin();
  const auto pmax = std::max_element(t.probability.begin(), t.probability.end()) - t.probability.begin();
  CHECK(t.energy[static_cast<std::size_t>(hmin)] == t.energy[static_cast<std::size_t>(pmax)]);
  const EnergyTable par = exact_gibbs_distribution(ctx, 10'000'000, 3);
  CHECK(par.energy == t.energy);
  CHECK_THROWS_AS(exact_gibbs_distribution(ctx, 100), GuardExceeded);

  const auto report = energy_report_json(t);
  CHECK(report.size() == 729);
  CHECK(report[0]["H"].get<double>() <= report[1]["H"].get<double>());
}

TEST_CASE("local minima") {
  const EnergyContext ctx = context("fig2", Noise::finite(0.01));
  CHECK(is_local_minimum(ctx, decode("A-A-A-B-B-B", k2)));
  CHECK(is_local_minimum(ctx, decode("A-A-A-A-A-A", k2)));
  CHECK(!is_local_minimum(ctx, decode("AB-AB-AB-AB-AB-AB", k2)));
  CHECK_THROWS_AS(is_local_minimum(context("fig2", Noise::limit()), decode("A-A-A-B-B-B", k2)), InvalidInput);
}

TEST_CASE("three-word alphabet is experimental") {
  const EnergyContext ctx = context("fig2", Noise::finite(0.05), Alphabet(3));
  CHECK(ctx.experimental());
  const Configuration c = decode("A-A-A-C-C-B", Alphabet(3));
  CHECK(std::isfinite(gibbs_energy(ctx, c)));
  CHECK(std::abs(gibbs_energy(ctx, c) - gibbs_energy_by_potentials(ctx, c)) < 1e-10);
}
