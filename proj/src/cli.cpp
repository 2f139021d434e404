#include "nng/cli.hpp"

#include <cstdio>
#include <fstream>
#include <memory>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "nng/dynamics.hpp"
#include "nng/error.hpp"
#include "nng/exact_oracle.hpp"
#include "nng/gibbs.hpp"
#include "nng/graph.hpp"
#include "nng/localspec.hpp"
#include "nng/mc_community.hpp"
#include "nng/state.hpp"

namespace nng {

namespace {

struct Options {
  std::string graph_path;
  std::string builtin;
  double epsilon = 0.01;
  std::string mode = "finite";
  int words = 2;
  std::uint64_t steps = 1'000'000;
  std::optional<std::uint64_t> burnin;
  std::optional<std::uint64_t> thin;
  std::uint64_t seed = 0;
  std::string state;
  std::string out_path;
  std::string format;
  unsigned chains = 1;

  // gen-graph
  int n = 60;
  std::vector<int> blocks{20, 20, 20};
  double p_in = 0.5;
  double p_out = 0.02;

  // local-spec
  int site = 0;

  // simulate / detect
  std::string projector = "strict-count:A";
  std::size_t top = 5;
};

std::string human(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v + 0.0);
  return buf;
}

std::string join(const std::vector<std::string>& args) {
  std::string s;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) s.push_back(' ');
    s += args[i];
  }
  return s;
}

std::shared_ptr<const Graph> load_graph(const Options& o) {
  if (!o.graph_path.empty() && !o.builtin.empty()) throw InvalidInput("use either --graph or --builtin, not both");
  if (!o.graph_path.empty()) return std::make_shared<const Graph>(load_edge_list_file(o.graph_path));
  if (!o.builtin.empty()) return std::make_shared<const Graph>(builtin_graph(o.builtin));
  throw InvalidInput("a graph is required: pass --graph PATH or --builtin NAME");
}

Noise noise_of(const Options& o) {
  if (o.mode == "limit") return Noise::limit();
  return Noise::finite(o.epsilon);
}

class Emitter {
public:
  Emitter(const Options& o, std::ostream& fallback, std::string invocation)
      : invocation_(std::move(invocation)), seed_(o.seed) {
    if (!o.out_path.empty()) {
      file_.open(o.out_path);
      if (!file_) throw InvalidInput("cannot open output file '" + o.out_path + "'");
      out_ = &file_;
    } else {
      out_ = &fallback;
    }
  }

  void json(const std::string& command, const nlohmann::json& data) {
    nlohmann::json doc;
    doc["meta"] = {{"command", command}, {"invocation", invocation_}, {"seed", seed_}};
    doc["data"] = data;
    *out_ << doc.dump(2) << '\n';
  }
  std::ostream& text() { return *out_; }
  const std::string& invocation() const { return invocation_; }
  std::uint64_t seed() const { return seed_; }

private:
  std::string invocation_;
  std::uint64_t seed_;
  std::ofstream file_;
  std::ostream* out_;
};

int cmd_gen_graph(const Options& o, Emitter& em) {
  if (!o.builtin.empty()) {
    const Graph g = builtin_graph(o.builtin);
    em.text() << "# " << em.invocation() << '\n' << to_edge_list(g);
    return 0;
  }
  const PlantedGraph pg = planted_partition(o.n, o.blocks, o.p_in, o.p_out, o.seed);
  std::ostringstream labels;
  for (std::size_t i = 0; i < pg.block_of.size(); ++i) labels << (i ? "," : "") << pg.block_of[i];
  em.text() << "# " << em.invocation() << '\n'
            << "# seed=" << o.seed << " attempts=" << pg.attempts << '\n'
            << "# block_of=" << labels.str() << '\n'
            << to_edge_list(pg.graph);
  return 0;
}

int cmd_energy(const Options& o, Emitter& em) {
  auto g = load_graph(o);
  const Alphabet a(o.words);
  const EnergyContext ctx(g, a, noise_of(o));
  if (o.state.empty()) {
    const EnergyTable table = exact_gibbs_distribution(ctx);
    em.json("energy", energy_report_json(table));
    return 0;
  }
  const Configuration c = decode(o.state, a, g->size());
  const double h = gibbs_energy(ctx, c);
  if (o.format == "json") {
    nlohmann::json cliques = nlohmann::json::array();
    for (const Clique& L : ctx.cliques().cliques()) {
      cliques.push_back({{"members", L.members}, {"F", evaluate_F(ctx, L.members, c)},
                         {"V", clique_potential(ctx, L.members, c)}});
    }
    em.json("energy", {{"state", encode(c)}, {"H", h}, {"cliques", cliques}});
    return 0;
  }
  auto& out = em.text();
  out << "# " << em.invocation() << '\n';
  out << "# clique\tF\tV\n";
  for (const Clique& L : ctx.cliques().cliques()) {
    std::string members;
    for (Site s : L.members) members += (members.empty() ? "" : ",") + std::to_string(s);
    out << "# {" << members << "}\t" << human(evaluate_F(ctx, L.members, c)) << '\t'
        << human(clique_potential(ctx, L.members, c)) << '\n';
  }
  out << "state = " << encode(c) << '\n';
  out << "H = " << human(h) << '\n';
  return 0;
}

int cmd_cliques(const Options& o, Emitter& em) {
  auto g = load_graph(o);
  const CliqueInventory inv = enumerate_cliques(*g);
  if (o.format == "json") {
    nlohmann::json by_size = nlohmann::json::object(), list = nlohmann::json::array();
    for (std::size_t s = 1; s <= inv.max_clique_size(); ++s) by_size[std::to_string(s)] = inv.count_of_size(s);
    for (const Clique& c : inv.cliques()) list.push_back({{"members", c.members}, {"boundary", c.boundary}});
    em.json("cliques", {{"count", inv.size()}, {"by_size", by_size}, {"cliques", list}});
    return 0;
  }
  auto& out = em.text();
  out << "# " << em.invocation() << '\n' << "# size\tmembers\tboundary\n";
  auto fmt = [](const SiteSet& s) {
    std::string r;
    for (Site v : s) r += (r.empty() ? "" : ",") + std::to_string(v);
    return r.empty() ? std::string("-") : r;
  };
  for (const Clique& c : inv.cliques()) {
    out << c.members.size() << '\t' << fmt(c.members) << '\t' << fmt(c.boundary) << '\n';
  }
  out << "# total=" << inv.size() << '\n';
  return 0;
}

int cmd_local_spec(const Options& o, Emitter& em) {
  auto g = load_graph(o);
  const Alphabet a(o.words);
  if (o.state.empty()) throw InvalidInput("local-spec needs --state");
  const Configuration c = decode(o.state, a, g->size());
  const ReceiveProbs rp = receive_probs(*g, o.site, c, noise_of(o));
  const LocalDistribution ld = local_spec(rp);
  nlohmann::json receive = nlohmann::json::object(), f = nlohmann::json::object();
  for (Word w = 0; w < a.size(); ++w) receive[std::string(1, Alphabet::letter(w))] = rp.p[static_cast<std::size_t>(w)];
  for (std::uint32_t bits = 1; bits <= a.list_count(); ++bits) {
    const WordList x = WordList::from_bits(bits);
    f[format_list(x)] = ld(x);
  }
  if (o.format == "json") {
    em.json("local-spec", {{"site", o.site}, {"receive", receive}, {"f", f}, {"normalizer", ld.normalizer}});
    return 0;
  }
  auto& out = em.text();
  out << "# " << em.invocation() << '\n';
  for (Word w = 0; w < a.size(); ++w) out << "p(" << Alphabet::letter(w) << ") = " << human(rp.p[static_cast<std::size_t>(w)]) << '\n';
  for (std::uint32_t bits = 1; bits <= a.list_count(); ++bits) {
    const WordList x = WordList::from_bits(bits);
    out << "f(" << format_list(x) << ") = " << human(ld(x)) << '\n';
  }
  out << "Z_l = " << human(ld.normalizer) << '\n';
  return 0;
}

int cmd_exact(const Options& o, Emitter& em) {
  if (o.mode == "limit") throw InvalidInput("exact comparison requires finite epsilon");
  auto g = load_graph(o);
  const Alphabet a(o.words);
  const Kernel kernel(g, a, o.epsilon);
  const EnergyContext ctx(g, a, Noise::finite(o.epsilon));
  const FullKernelMatrix m = build_transition_matrix(kernel);
  const StationaryResult pi = stationary_distribution(m);
  const EnergyTable table = exact_gibbs_distribution(ctx);
  const ComparisonReport rep = compare_distributions(table.probability, pi.pi, &m);
  em.json("exact", comparison_report_json(rep));
  return 0;
}

Configuration initial_state(const Options& o, const Alphabet& a, int n) {
  if (!o.state.empty()) return decode(o.state, a, n);
  // Stream index 2^32 is reserved for drawing the start state.
  RandomStream rng(o.seed, std::uint64_t{1} << 32);
  return random_configuration(a, n, rng);
}

int cmd_simulate(const Options& o, Emitter& em) {
  auto g = load_graph(o);
  const Alphabet a(o.words);
  const Kernel kernel(g, a, o.epsilon);
  const Projector proj = Projector::parse(o.projector);
  std::optional<EnergyContext> ctx;
  OccupationOptions opts;
  if (proj.kind == Projector::Kind::energy) {
    ctx.emplace(g, a, Noise::finite(o.epsilon));
    opts.energy = &*ctx;
  }
  const std::uint64_t burnin = o.burnin.value_or(10ULL * static_cast<std::uint64_t>(g->size()) * static_cast<std::uint64_t>(a.size()));
  const std::uint64_t thin = o.thin.value_or(static_cast<std::uint64_t>(g->size()));
  const Configuration c0 = initial_state(o, a, g->size());
  const OccupationHistogram h =
      simulate_occupation_chains(kernel, c0, o.steps, burnin, thin, o.seed, proj, o.chains, opts);
  if (o.format == "json") {
    nlohmann::json bins = nlohmann::json::array();
    for (const auto& [bin, c] : h.counts) bins.push_back({{"bin", bin}, {"count", c}, {"probability", h.probability(bin)}});
    em.json("simulate", {{"projector", proj.id()}, {"steps", h.steps}, {"burnin", h.burnin}, {"thin", h.thin},
                         {"chains", h.chains}, {"bins", bins}});
    return 0;
  }
  const std::string tsv = histogram_tsv(h);
  const auto eol = tsv.find('\n');
  em.text() << tsv.substr(0, eol + 1) << "# invocation=" << em.invocation() << " seed=" << o.seed
            << " chains=" << o.chains << '\n'
            << tsv.substr(eol + 1);
  return 0;
}

int cmd_detect(const Options& o, Emitter& em) {
  if (o.mode == "limit") throw InvalidInput("detect requires finite epsilon");
  auto g = load_graph(o);
  const Alphabet a(o.words);
  const Kernel kernel(g, a, o.epsilon);
  const EnergyContext ctx(g, a, Noise::finite(o.epsilon));
  DetectOptions d;
  d.budget = o.steps;
  d.burnin = o.burnin;
  d.thin = o.thin;
  d.seed = o.seed;
  d.top_m = o.top;
  d.chains = o.chains;
  em.json("detect", community_report_json(detect_communities(kernel, ctx, d)));
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Noisy naming game: dynamics, Gibbs energies and community detection", "nng"};
  app.require_subcommand(1);
  Options o;

  auto add_graph = [&](CLI::App* sub) {
    sub->add_option("--graph", o.graph_path, "Edge-list file");
    sub->add_option("--builtin", o.builtin, "Builtin graph: fig1 or fig2");
  };
  auto add_noise = [&](CLI::App* sub) {
    sub->add_option("--epsilon", o.epsilon, "Noise probability")->check(CLI::Range(0.0, 1.0));
    sub->add_option("--mode", o.mode, "finite or limit")->check(CLI::IsMember({"finite", "limit"}));
    sub->add_option("--words", o.words, "Alphabet size")->check(CLI::Range(2, Alphabet::max_words));
  };
  auto add_common = [&](CLI::App* sub, std::vector<std::string> formats) {
    sub->add_option("--out", o.out_path, "Output file (default: stdout)");
    sub->add_option("--format", o.format, "Output format")->check(CLI::IsMember(formats));
    sub->add_option("--seed", o.seed, "Random seed");
  };
  auto add_schedule = [&](CLI::App* sub) {
    sub->add_option("--steps", o.steps, "Number of NNG steps")->check(CLI::PositiveNumber);
    sub->add_option("--burnin", o.burnin, "Burn-in steps (default 10*n*k)");
    sub->add_option("--thin", o.thin, "Thinning interval (default n)")->check(CLI::PositiveNumber);
    sub->add_option("--chains", o.chains, "Independent chains")->check(CLI::Range(1u, 1024u));
    sub->add_option("--state", o.state, "Initial configuration (default: random)");
  };

  auto* gen = app.add_subcommand("gen-graph", "Generate a planted-partition graph or print a builtin");
  gen->add_option("--n", o.n, "Sites")->check(CLI::PositiveNumber);
  gen->add_option("--blocks", o.blocks, "Block sizes")->delimiter(',');
  gen->add_option("--p-in", o.p_in, "Intra-block edge probability")->check(CLI::Range(0.0, 1.0));
  gen->add_option("--p-out", o.p_out, "Inter-block edge probability")->check(CLI::Range(0.0, 1.0));
  gen->add_option("--builtin", o.builtin, "Print a builtin graph instead");
  add_common(gen, {"text"});

  auto* energy = app.add_subcommand("energy", "Gibbs energy of a state, or the full energy table");
  add_graph(energy);
  add_noise(energy);
  energy->add_option("--state", o.state, "Configuration, e.g. A-A-A-B-B-B");
  add_common(energy, {"text", "json"});

  auto* cliques = app.add_subcommand("cliques", "List every clique with its boundary");
  add_graph(cliques);
  add_common(cliques, {"text", "json"});

  auto* local = app.add_subcommand("local-spec", "Receive probabilities and local specification at one site");
  add_graph(local);
  add_noise(local);
  local->add_option("--state", o.state, "Configuration")->required();
  local->add_option("--site", o.site, "Focal site")->required();
  add_common(local, {"text", "json"});

  auto* exact = app.add_subcommand("exact", "Exact stationary distribution vs Gibbs distribution");
  add_graph(exact);
  add_noise(exact);
  add_common(exact, {"json"});

  auto* sim = app.add_subcommand("simulate", "Occupation histogram of a long NNG run");
  add_graph(sim);
  add_noise(sim);
  add_schedule(sim);
  sim->add_option("--projector", o.projector, "strict-count:<word>, full-state or energy:<width>");
  add_common(sim, {"tsv", "json"});

  auto* detect = app.add_subcommand("detect", "Rank visited multi-name states by Gibbs energy");
  add_graph(detect);
  add_noise(detect);
  add_schedule(detect);
  detect->add_option("--top", o.top, "Number of candidates")->check(CLI::PositiveNumber);
  add_common(detect, {"json"});

  std::vector<std::string> rest(args.rbegin(), args.rend());
  if (!rest.empty()) rest.pop_back();  // program name
  try {
    app.parse(rest);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  try {
    Emitter em(o, out, join(args));
    if (gen->parsed()) return cmd_gen_graph(o, em);
    if (energy->parsed()) return cmd_energy(o, em);
    if (cliques->parsed()) return cmd_cliques(o, em);
    if (local->parsed()) return cmd_local_spec(o, em);
    if (exact->parsed()) return cmd_exact(o, em);
    if (sim->parsed()) return cmd_simulate(o, em);
    if (detect->parsed()) return cmd_detect(o, em);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace nng
