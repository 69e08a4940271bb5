#include "cli.hpp"

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <future>
#include <iomanip>
#include <iostream>
#include <nlohmann/json.hpp>
#include <random>
#include <sstream>

#include "sinkatlas/corpus.hpp"
#include "sinkatlas/dynamics.hpp"
#include "sinkatlas/game_io.hpp"
#include "sinkatlas/preference_graph.hpp"
#include "sinkatlas/stability.hpp"
#include "sinkatlas/verify.hpp"

namespace sinkatlas::cli {

namespace {

using nlohmann::json;

enum class LogLevel { Error = 0, Warn = 1, Info = 2, Debug = 3 };

LogLevel log_level_from_env() {
  const char* v = std::getenv("SINKATLAS_LOG");
  if (!v) return LogLevel::Warn;
  std::string s(v);
  if (s == "error") return LogLevel::Error;
  if (s == "warn") return LogLevel::Warn;
  if (s == "info") return LogLevel::Info;
  if (s == "debug") return LogLevel::Debug;
  return LogLevel::Warn;
}

struct Logger {
  std::ostream& err;
  LogLevel level = log_level_from_env();
  void log(LogLevel l, const std::string& msg) const {
    if (l <= level) {
      static const char* names[] = {"error", "warn", "info", "debug"};
      err << "[" << names[static_cast<int>(l)] << "] " << msg << "\n";
    }
  }
};

std::string digest_hex(const Game& g) {
  std::ostringstream out;
  out << std::hex << std::setw(16) << std::setfill('0') << g.digest();
  return out.str();
}

std::string shape_string(const Game& g) {
  std::ostringstream out;
  for (int i = 0; i < g.num_players(); ++i) {
    if (i) out << "x";
    out << g.strategy_counts()[i];
  }
  return out.str();
}

std::vector<int> parse_shape(const std::string& text) {
  std::vector<int> shape;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, 'x')) {
    try {
      shape.push_back(std::stoi(part));
    } catch (const std::exception&) {
      throw InputError("bad shape '" + text + "' (expected e.g. 3x3 or 2x2x2)");
    }
  }
  if (shape.empty()) throw InputError("bad shape '" + text + "'");
  return shape;
}

MixedProfile parse_start(const std::string& spec, const Game& g,
                         std::uint64_t seed) {
  if (spec == "barycenter") {
    return MixedProfile::barycenter(g.strategy_counts());
  }
  if (spec.rfind("random:", 0) == 0) {
    std::uint64_t s = seed;
    try {
      s = std::stoull(spec.substr(7));
    } catch (const std::exception&) {
      throw InputError("bad start spec '" + spec + "'");
    }
    std::mt19937_64 rng(s);
    auto uniform = [&rng]() {
      return static_cast<double>(rng() >> 11) * 0x1.0p-53;
    };
    std::vector<std::vector<double>> d(g.num_players());
    for (int i = 0; i < g.num_players(); ++i) {
      double sum = 0.0;
      d[i].resize(g.strategy_counts()[i]);
      for (double& v : d[i]) {
        v = -std::log(uniform() + 1e-300);
        sum += v;
      }
      for (double& v : d[i]) v /= sum;
    }
    return MixedProfile(std::move(d));
  }
  // Explicit vector: per-player blocks separated by ';', entries by ','.
  std::vector<std::vector<double>> d;
  std::stringstream ss(spec);
  std::string block;
  while (std::getline(ss, block, ';')) {
    std::vector<double> dist;
    std::stringstream bs(block);
    std::string entry;
    while (std::getline(bs, entry, ',')) {
      try {
        dist.push_back(std::stod(entry));
      } catch (const std::exception&) {
        throw InputError("bad start vector entry '" + entry + "'");
      }
    }
    d.push_back(std::move(dist));
  }
  try {
    MixedProfile x(std::move(d));
    if (!x.same_shape(g.strategy_counts())) {
      throw InputError("start vector shape does not match the game");
    }
    return x;
  } catch (const InputError&) {
    throw;
  }
}

json cavity_json(const Game& g, const Cavity& c) {
  return json{{"kind", cavity_kind_name(c.kind)},
              {"subgame", c.subgame.subsets()},
              {"outside_profile", g.unflatten(c.out)},
              {"diagonal_profile", g.unflatten(c.diag)},
              {"signed_sum", c.signed_sum},
              {"boundary", c.boundary}};
}

// ---------------------------------------------------------------------------
// analyze

int cmd_analyze(const std::string& path, bool as_json, double tie_tol,
                bool strict, std::ostream& out, const Logger& log) {
  Game g = read_game(path);
  log.log(LogLevel::Info, "loaded " + shape_string(g) + " game from " + path);
  PreferenceGraph pg = build_graph(g, tie_tol);
  auto sinks = sink_equilibria(pg, g);  // raises GenericityError on ties
  PseudoconvexityMode mode =
      strict ? PseudoconvexityMode::Strict : PseudoconvexityMode::NonStrict;

  json report;
  report["game"] = {{"players", g.num_players()},
                    {"strategy_counts", g.strategy_counts()},
                    {"profiles", g.num_profiles()},
                    {"digest", digest_hex(g)}};
  report["tie_tolerance"] = tie_tol;
  report["pseudoconvexity_mode"] = strict ? "strict" : "nonstrict";
  report["genericity_warnings"] = json::array();
  report["sinks"] = json::array();

  struct SinkSummary {
    const SinkEquilibrium* sink;
    PseudoconvexityReport pc;
    std::vector<LocalSourceCertificate> certs;
  };
  std::vector<SinkSummary> summaries;
  for (const auto& s : sinks) {
    SinkSummary sum{&s, is_pseudoconvex_sink(g, pg, s, mode),
                    find_local_sources(g, pg, s)};
    for (const Cavity& c : find_cavities(g, pg, s)) {
      if (c.boundary) {
        report["genericity_warnings"].push_back(
            "sink " + std::to_string(s.id) +
            ": boundary cavity (zero deviation sum) at profile " +
            g.profile_label(c.diag));
      }
    }
    summaries.push_back(std::move(sum));
  }

  for (const auto& sum : summaries) {
    json js;
    js["id"] = sum.sink->id;
    js["profiles"] = json::array();
    for (ProfileId p : sum.sink->profiles) js["profiles"].push_back(g.unflatten(p));
    js["is_subgame"] = sum.sink->is_subgame;
    js["is_singleton_pne"] = sum.sink->is_singleton_pne;
    js["pseudoconvexity"] = pseudoconvexity_report_json(g, sum.pc);
    js["local_sources"] = json::array();
    for (const auto& c : sum.certs) {
      js["local_sources"].push_back(certificate_json(g, c));
    }
    report["sinks"].push_back(std::move(js));
  }

  if (as_json) {
    out << report.dump(2) << "\n";
    return 0;
  }

  out << "game: " << shape_string(g) << ", " << g.num_profiles()
      << " profiles, digest " << digest_hex(g) << "\n";
  out << "sink equilibria: " << sinks.size() << "\n";
  for (const auto& sum : summaries) {
    const auto& s = *sum.sink;
    out << "  sink " << s.id << ": " << s.profiles.size() << " profile"
        << (s.profiles.size() == 1 ? "" : "s") << " {";
    for (size_t k = 0; k < s.profiles.size(); ++k) {
      out << (k ? " " : "") << "(" << g.profile_label(s.profiles[k]) << ")";
    }
    out << "}";
    if (s.is_singleton_pne) out << " [pure Nash]";
    if (s.is_subgame) out << " [subgame]";
    out << "\n";
    out << "    pseudoconvex: " << (sum.pc.verdict ? "yes" : "no")
        << " (cavities: " << sum.pc.num_cavities
        << ", two-in: " << sum.pc.num_two_in
        << ", one-in-one-out: " << sum.pc.num_one_in_one_out
        << ", local-source: " << sum.pc.num_local_source
        << ", boundary: " << sum.pc.num_boundary << ")\n";
    for (const Cavity& c : sum.pc.failing) {
      out << "    failing cavity [" << cavity_kind_name(c.kind)
          << "] at (" << g.profile_label(c.diag) << "), outside profile ("
          << g.profile_label(c.out) << "), deviation sum " << c.signed_sum
          << "\n";
    }
    if (sum.certs.empty()) {
      out << "    local sources: none found in the searched families\n";
    } else {
      out << "    local sources: " << sum.certs.size() << "\n";
      for (const auto& c : sum.certs) {
        out << "      ["
            << (c.kind == LocalSourceCertificate::Kind::Pure ? "pure"
                                                             : "gadget")
            << "] in subgame ";
        for (int i = 0; i < (int)c.subgame.subsets().size(); ++i) {
          if (i) out << "x";
          out << c.subgame.subset(i).size();
        }
        out << " at point";
        for (int i = 0; i < c.point.num_players(); ++i) {
          out << " (";
          for (size_t q = 0; q < c.point.dist(i).size(); ++q) {
            out << (q ? "," : "") << c.point.dist(i)[q];
          }
          out << ")";
        }
        out << "\n";
      }
    }
  }
  for (const auto& w : report["genericity_warnings"]) {
    out << "warning: " << w.get<std::string>() << "\n";
  }
  return 0;
}

// ---------------------------------------------------------------------------
// simulate

struct SimulateArgs {
  std::string path;
  std::string start = "barycenter";
  double t_max = kDefaultTMax;
  double step = kDefaultStep;
  std::uint64_t seed = 0;
  int record_stride = 1;
  int ensemble = 0;
  double stop_displacement = 0.0;
  std::string csv_path;
  bool as_json = false;
};

json run_one_simulation(const Game& g,
                        const std::vector<SinkEquilibrium>& sinks,
                        const MixedProfile& x0, const SimulateArgs& a,
                        TrajectoryRecord* keep) {
  IntegrateOptions opts;
  opts.t_max = a.t_max;
  opts.step = a.step;
  opts.record_stride = a.record_stride;
  for (const auto& s : sinks) {
    opts.observables.push_back(ObservableSpec::content_mass(
        "sink" + std::to_string(s.id) + ".mass", s.profile_set()));
  }
  if (a.stop_displacement > 0) {
    opts.stops.push_back(StopCondition::displacement_below(a.stop_displacement));
  }
  TrajectoryRecord tr = integrate(g, x0, opts);

  json j;
  j["final_time"] = tr.final_time;
  j["stopped_early"] = tr.stop_index >= 0;
  MixedProfile fin = tr.final_state();
  j["final_state"] = fin.dists();
  j["content_mass"] = json::object();
  for (const auto& s : sinks) {
    j["content_mass"]["sink" + std::to_string(s.id)] =
        content_mass(g, s.profile_set(), fin);
  }
  ProfileSet omega = estimate_omega_limit(tr, 0.2);
  j["omega_limit_support"] = json::array();
  for (ProfileId p : omega) j["omega_limit_support"].push_back(g.unflatten(p));
  if (keep) *keep = std::move(tr);
  return j;
}

int cmd_simulate(const SimulateArgs& a, std::ostream& out, const Logger& log) {
  Game g = read_game(a.path);
  std::vector<SinkEquilibrium> sinks;
  try {
    sinks = sink_equilibria(build_graph(g), g);
  } catch (const GenericityError& e) {
    log.log(LogLevel::Warn,
            std::string("degenerate graph; per-sink masses unavailable: ") +
                e.what());
  }

  if (a.ensemble > 0) {
    std::vector<std::future<json>> futures;
    futures.reserve(a.ensemble);
    for (int k = 0; k < a.ensemble; ++k) {
      MixedProfile x0 =
          parse_start("random:" + std::to_string(a.seed + k), g, a.seed);
      futures.push_back(std::async(std::launch::async, [&, x0]() {
        return run_one_simulation(g, sinks, x0, a, nullptr);
      }));
    }
    json runs = json::array();
    for (int k = 0; k < a.ensemble; ++k) {
      json r = futures[k].get();
      r["run"] = k;
      runs.push_back(std::move(r));
    }
    if (a.as_json) {
      out << runs.dump(2) << "\n";
    } else {
      for (const auto& r : runs) {
        out << "run " << r["run"] << ": t=" << r["final_time"].get<double>();
        for (auto& [key, val] : r["content_mass"].items()) {
          out << " " << key << "=" << val.get<double>();
        }
        out << "\n";
      }
    }
    return 0;
  }

  MixedProfile x0 = parse_start(a.start, g, a.seed);
  TrajectoryRecord tr;
  json j = run_one_simulation(g, sinks, x0, a, &tr);
  if (!a.csv_path.empty()) {
    std::ofstream csv(a.csv_path);
    if (!csv) throw InputError("cannot open CSV output: " + a.csv_path);
    csv << trajectory_csv(g, tr);
    log.log(LogLevel::Info, "wrote trajectory CSV to " + a.csv_path);
  }
  if (a.as_json) {
    out << j.dump(2) << "\n";
    return 0;
  }
  out << "integrated to t=" << j["final_time"].get<double>()
      << (j["stopped_early"].get<bool>() ? " (stop condition)" : " (t_max)")
      << "\n";
  out << "final state:";
  MixedProfile fin = tr.final_state();
  for (int i = 0; i < fin.num_players(); ++i) {
    out << " (";
    for (size_t s = 0; s < fin.dist(i).size(); ++s) {
      out << (s ? "," : "") << fin.dist(i)[s];
    }
    out << ")";
  }
  out << "\n";
  for (auto& [key, val] : j["content_mass"].items()) {
    out << "content mass " << key << ": " << val.get<double>() << "\n";
  }
  out << "omega-limit support (" << j["omega_limit_support"].size()
      << " profiles):";
  for (const auto& p : j["omega_limit_support"]) {
    out << " (";
    for (size_t i = 0; i < p.size(); ++i) out << (i ? "," : "") << p[i].get<int>();
    out << ")";
  }
  out << "\n";
  return 0;
}

// ---------------------------------------------------------------------------

int cmd_verify(const std::string& id, std::uint64_t seed, bool as_json,
               std::ostream& out) {
  auto checks = verify_named_game(id, seed);
  if (as_json) {
    json j = json::array();
    for (const auto& c : checks) {
      j.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
    }
    out << j.dump(2) << "\n";
  } else {
    for (const auto& c : checks) {
      out << (c.pass ? "[PASS] " : "[FAIL] ") << c.name;
      if (!c.detail.empty()) out << " (" << c.detail << ")";
      out << "\n";
    }
  }
  return all_passed(checks) ? 0 : 3;
}

int cmd_gen(const std::string& cls, const std::string& shape,
            std::uint64_t seed, const std::string& out_path, std::ostream& out,
            const Logger& log) {
  Game g = random_game(parse_shape(shape), random_game_class_from_string(cls),
                       seed);
  if (out_path.empty()) {
    out << game_to_json(g).dump(2) << "\n";
  } else {
    write_game(g, out_path);
    log.log(LogLevel::Info, "wrote game to " + out_path);
  }
  out << "digest: " << digest_hex(g) << "\n";
  return 0;
}

int cmd_graph(const std::string& path, const std::string& dot_path,
              double tie_tol, std::ostream& out) {
  Game g = read_game(path);
  PreferenceGraph pg = build_graph(g, tie_tol);
  std::vector<std::vector<ProfileId>> highlights;
  try {
    for (const auto& s : sink_equilibria(pg, g)) highlights.push_back(s.profiles);
  } catch (const GenericityError&) {
    // Degenerate graphs are still drawable, just without sink shading.
  }
  std::string dot = export_dot(pg, g, highlights);
  if (dot_path.empty()) {
    out << dot;
  } else {
    std::ofstream f(dot_path);
    if (!f) throw InputError("cannot open DOT output: " + dot_path);
    f << dot;
  }
  return 0;
}

int cmd_corpus(const std::string& action, const std::string& id,
               const std::string& out_path, std::ostream& out) {
  if (action == "list") {
    for (const auto& name : corpus_ids()) {
      out << name << " - " << corpus_description(name) << "\n";
    }
    return 0;
  }
  if (action == "export") {
    NamedGame ng = make_named(id);
    if (out_path.empty()) {
      out << game_to_json(ng.game).dump(2) << "\n";
    } else {
      write_game(ng.game, out_path);
    }
    return 0;
  }
  throw InputError("unknown corpus action: " + action);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  Logger log{err};

  CLI::App app{"sinkatlas: preference graphs, sink equilibria and replicator "
               "dynamics for finite normal-form games"};
  app.require_subcommand(1);

  double tie_tol = kTieTol;
  bool as_json = false;
  bool strict = false;
  std::uint64_t seed = 0;

  // analyze
  auto* analyze = app.add_subcommand(
      "analyze", "sink equilibria, pseudoconvexity and local sources");
  std::string analyze_path;
  analyze->add_option("file", analyze_path, "game file")->required();
  analyze->add_flag("--json", as_json, "machine-readable output");
  analyze->add_option("--tie-tol", tie_tol, "payoff tie tolerance");
  analyze->add_flag("--strict-pseudoconvex", strict,
                    "strict reading of the cavity test");

  // simulate
  SimulateArgs sim;
  auto* simulate =
      app.add_subcommand("simulate", "integrate the replicator dynamic");
  simulate->add_option("file", sim.path, "game file")->required();
  simulate->add_option("--start", sim.start,
                       "barycenter | random:<seed> | explicit "
                       "\"p,...;q,...\" vector");
  simulate->add_option("--tmax", sim.t_max, "integration horizon");
  simulate->add_option("--step", sim.step, "integration step");
  simulate->add_option("--seed", sim.seed, "seed for random starts");
  simulate->add_option("--record-stride", sim.record_stride,
                       "record every k-th step");
  simulate->add_option("--csv", sim.csv_path, "write trajectory CSV here");
  simulate->add_option("--ensemble", sim.ensemble,
                       "number of independent random-start runs");
  simulate->add_option("--stop-displacement", sim.stop_displacement,
                       "stop when displacement per unit time drops below");
  simulate->add_flag("--json", sim.as_json, "machine-readable output");

  // verify
  auto* verify =
      app.add_subcommand("verify", "run a fixture's scripted checks");
  std::string verify_id;
  verify->add_option("id", verify_id, "corpus fixture id")->required();
  verify->add_flag("--json", as_json, "machine-readable output");
  verify->add_option("--seed", seed, "seed for sampling checks");

  // gen
  auto* gen = app.add_subcommand("gen", "generate a random game file");
  std::string gen_class, gen_shape, gen_out;
  gen->add_option("class", gen_class, "generic | zero_sum | potential")
      ->required();
  gen->add_option("shape", gen_shape, "e.g. 3x3 or 2x2x2")->required();
  gen->add_option("--seed", seed, "generator seed");
  gen->add_option("--out", gen_out, "output path (stdout if omitted)");

  // graph
  auto* graph = app.add_subcommand("graph", "export the preference graph");
  std::string graph_path, dot_out;
  graph->add_option("file", graph_path, "game file")->required();
  graph->add_option("--dot", dot_out, "DOT output path (stdout if omitted)");
  graph->add_option("--tie-tol", tie_tol, "payoff tie tolerance");

  // corpus
  auto* corpus = app.add_subcommand("corpus", "fixture games");
  std::string corpus_action, corpus_id, corpus_out;
  corpus->add_option("action", corpus_action, "list | export")->required();
  corpus->add_option("id", corpus_id, "fixture id (for export)");
  corpus->add_option("--out", corpus_out, "output path (for export)");

  std::vector<std::string> argv(args.rbegin(), args.rend());
  try {
    app.parse(argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return 1;
  }

  try {
    if (app.got_subcommand(analyze)) {
      return cmd_analyze(analyze_path, as_json, tie_tol, strict, out, log);
    }
    if (app.got_subcommand(simulate)) {
      return cmd_simulate(sim, out, log);
    }
    if (app.got_subcommand(verify)) {
      return cmd_verify(verify_id, seed, as_json, out);
    }
    if (app.got_subcommand(gen)) {
      return cmd_gen(gen_class, gen_shape, seed, gen_out, out, log);
    }
    if (app.got_subcommand(graph)) {
      return cmd_graph(graph_path, dot_out, tie_tol, out);
    }
    if (app.got_subcommand(corpus)) {
      return cmd_corpus(corpus_action, corpus_id, corpus_out, out);
    }
  } catch (const GenericityError& e) {
    err << "genericity error: " << e.what() << "\n";
    return 2;
  } catch (const InputError& e) {
    err << "input error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace sinkatlas::cli
