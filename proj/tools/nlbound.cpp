// nlbound: command-line front end for the exact bound toolkit.

#include <CLI11.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "nlbound/bounds.hpp"
#include "nlbound/decompose.hpp"
#include "nlbound/delta_tables.hpp"
#include "nlbound/json_io.hpp"
#include "nlbound/protocol.hpp"

namespace fs = std::filesystem;
using namespace nlbound;

namespace {

enum Exit {
  kOk = 0,
  kUsage = 1,
  kInvalidBox = 2,
  kInfeasible = 3,
  kIo = 4,
  kCacheCorrupt = 5,
  kNeedsLongRun = 6,
  kInternal = 70,
};

struct CliError : std::runtime_error {
  CliError(int code, const std::string& what) : std::runtime_error(what), code(code) {}
  int code;
};

struct RunConfig {
  std::string command;
  std::string wedge;
  std::string box_path;
  int n = 1;
  std::string cache_dir;
  std::string out_path;
  std::string format;
  int jobs = 1;
  bool long_run = false;
  std::uint64_t seed = 0;
  bool approx = false;
};

void log_event(Json event) {
  const auto now = std::chrono::system_clock::now().time_since_epoch();
  event["t_ms"] = std::chrono::duration_cast<std::chrono::milliseconds>(now).count();
  std::cerr << event.dump() << std::endl;
}

void emit(const RunConfig& cfg, const std::string& text) {
  if (cfg.out_path.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream out(cfg.out_path);
  if (!out) throw CliError(kIo, "cannot open " + cfg.out_path + " for writing");
  out << text;
  if (!text.empty() && text.back() != '\n') out << '\n';
  if (!out) throw CliError(kIo, "failed writing " + cfg.out_path);
}

BinarySystem load_box(const RunConfig& cfg) {
  if (!cfg.wedge.empty() == !cfg.box_path.empty()) throw CliError(kUsage, "give exactly one of --wedge or --box");
  if (!cfg.wedge.empty()) {
    const auto comma = cfg.wedge.find(',');
    if (comma == std::string::npos) throw CliError(kUsage, "--wedge expects eps,delta");
    Rational eps, delta;
    try {
      eps = Rational::parse(cfg.wedge.substr(0, comma));
      delta = Rational::parse(cfg.wedge.substr(comma + 1));
    } catch (const std::invalid_argument& e) {
      throw CliError(kUsage, std::string("--wedge: ") + e.what());
    }
    try {
      return wedge(eps, delta);
    } catch (const std::invalid_argument& e) {
      throw CliError(kInfeasible, e.what());
    }
  }
  std::ifstream in(cfg.box_path);
  if (!in) throw CliError(kIo, "cannot read " + cfg.box_path);
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw CliError(kInvalidBox, cfg.box_path + ": " + e.what());
  }
  try {
    return box_from_json(j);
  } catch (const std::invalid_argument& e) {
    throw CliError(kInvalidBox, cfg.box_path + ": " + e.what());
  }
}

BinarySystem load_valid_box(const RunConfig& cfg) {
  BinarySystem p = load_box(cfg);
  const ValidationReport report = validate(p);
  if (!report.ok()) {
    std::string msg = "input is not a nonsignaling system:";
    for (const auto& v : report.violations) msg += "\n  " + v.describe();
    throw CliError(kInvalidBox, msg);
  }
  return p;
}

void require_n(const RunConfig& cfg) {
  if (cfg.n < 1) throw CliError(kInfeasible, "--n must be at least 1");
}

void guard_long_run(const RunConfig& cfg, bool needed, const std::string& what) {
  if (needed && !cfg.long_run) throw CliError(kNeedsLongRun, what + " is a long run; pass --long-run to proceed");
}

BuildOptions build_options(const RunConfig& cfg) {
  BuildOptions opts;
  opts.jobs = cfg.jobs;
  opts.on_level = [](const LevelStats& s) {
    log_event({{"event", "level_filled"},
               {"level", s.level},
               {"entries_optimized", s.entries_optimized},
               {"split_evaluations", s.split_evaluations},
               {"seconds", s.seconds}});
  };
  return opts;
}

// Looks for a cached table covering (p, n); builds and stores one on a miss.
TableSource cached_source(const RunConfig& cfg) {
  const BuildOptions opts = build_options(cfg);
  return [cfg, opts](const Rational& p, int n) {
    try {
      if (!cfg.cache_dir.empty()) {
        for (int m = n; m <= 20; ++m) {
          const fs::path path = table_cache_path(cfg.cache_dir, p, m);
          if (!fs::exists(path)) continue;
          DeltaTables t = load_tables(path, p, m);
          log_event({{"event", "cache_hit"}, {"path", path.string()}, {"levels", m}});
          return t;
        }
        log_event({{"event", "cache_miss"}, {"p", p.fraction_str()}, {"n", n}});
      }
      DeltaTables t = build_tables(p, n, opts);
      if (!cfg.cache_dir.empty()) {
        fs::create_directories(cfg.cache_dir);
        const fs::path path = table_cache_path(cfg.cache_dir, p, n);
        save_tables(t, path);
        log_event({{"event", "cache_store"}, {"path", path.string()}});
      }
      return t;
    } catch (const TableFileError& e) {
      throw CliError(kCacheCorrupt, std::string("table cache: ") + e.what());
    } catch (const TableBudgetError& e) {
      throw CliError(kInfeasible, e.what());
    } catch (const fs::filesystem_error& e) {
      throw CliError(kIo, e.what());
    } catch (const std::ios_base::failure& e) {
      throw CliError(kIo, e.what());
    }
  };
}

ScanOptions scan_options(const RunConfig& cfg) {
  ScanOptions s;
  s.jobs = cfg.jobs;
  return s;
}

// The isotropic system whose tables a grid or table build uses.
BinarySystem isotropic_envelope(const BinarySystem& p) {
  if (is_isotropic(p)) return p;
  const Decomposition d = minimal_isotropic(p);
  log_event({{"event", "envelope"}, {"epsilon", d.epsilon.fraction_str()}, {"q", d.q.fraction_str()}});
  return d.p_iso;
}

int cmd_validate(const RunConfig& cfg) {
  const BinarySystem p = load_box(cfg);
  const ValidationReport report = validate(p);
  emit(cfg, validation_to_json(report).dump(2));
  return report.ok() ? kOk : kInvalidBox;
}

int cmd_nl(const RunConfig& cfg) {
  const BinarySystem p = load_valid_box(cfg);
  const NLValue nl = nl_value(p);
  Json out = {{"nl", nl.value.fraction_str()}, {"facet", {{"id", nl.expression.index()}, {"expression", nl.expression.str()}}}};
  emit(cfg, out.dump(2));
  return kOk;
}

int cmd_decompose(const RunConfig& cfg) {
  const BinarySystem p = load_valid_box(cfg);
  emit(cfg, decomposition_to_json(minimal_isotropic(p)).dump(2));
  return kOk;
}

int cmd_tables(const RunConfig& cfg) {
  require_n(cfg);
  guard_long_run(cfg, cfg.n >= 8, "table fill at n >= 8");
  if (cfg.cache_dir.empty()) throw CliError(kUsage, "tables needs --cache DIR");
  const BinarySystem p_iso = isotropic_envelope(load_valid_box(cfg));
  const Rational p = p_iso(0, 0, 0, 0);
  const DeltaTables t = cached_source(cfg)(p, cfg.n);
  Json levels = Json::array();
  for (const auto& s : t.stats())
    levels.push_back({{"level", s.level},
                      {"entries_optimized", s.entries_optimized},
                      {"split_evaluations", s.split_evaluations},
                      {"seconds_approx", s.seconds}});
  Json out = {{"p", p.fraction_str()},
              {"levels", t.copies()},
              {"path", table_cache_path(cfg.cache_dir, p, t.copies()).string()},
              {"fill", levels}};
  emit(cfg, out.dump(2));
  return kOk;
}

int cmd_bound(const RunConfig& cfg) {
  require_n(cfg);
  guard_long_run(cfg, cfg.n >= 8, "profile scan at n >= 8");
  const BinarySystem p = load_valid_box(cfg);
  const auto start = std::chrono::steady_clock::now();
  const BoundReport r = general_bound(p, cfg.n, cached_source(cfg), scan_options(cfg));
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const double profiles = std::pow(static_cast<double>((1 << cfg.n) + 1), 2) * (2 * ((1 << cfg.n) + 1));
  log_event({{"event", "scan_done"},
             {"bound", r.raw_bound.fraction_str()},
             {"seconds", secs},
             {"profiles_per_second", secs > 0 ? profiles / secs : profiles}});
  if (cfg.format == "csv") {
    const auto& w = r.witness;
    emit(cfg, "n,bound_num,bound_den,k0,k1,l0,l1\n" + std::to_string(r.n) + "," + r.raw_bound.numerator().get_str() +
                  "," + r.raw_bound.denominator().get_str() + "," + std::to_string(w.k0) + "," + std::to_string(w.k1) +
                  "," + std::to_string(w.l0) + "," + std::to_string(w.l1) + "\n");
  } else {
    emit(cfg, bound_to_json(r).dump(2));
  }
  return kOk;
}

int cmd_grid(const RunConfig& cfg) {
  require_n(cfg);
  guard_long_run(cfg, cfg.n >= 8, "grid at n >= 8");
  const BinarySystem p_iso = isotropic_envelope(load_valid_box(cfg));
  const ClassGrid grid = class_grid(p_iso, cfg.n, cached_source(cfg));
  if (cfg.format == "json") {
    Json cells = Json::array();
    for (int sk = 0; sk < grid.side(); ++sk)
      for (int sl = 0; sl < grid.side(); ++sl)
        cells.push_back({{"s_k", sk}, {"s_l", sl}, {"bound", grid.at(sk, sl).fraction_str()}});
    emit(cfg, Json{{"n", grid.n()}, {"cells", cells}}.dump(2));
  } else {
    emit(cfg, grid.to_csv(cfg.approx));
  }
  return kOk;
}

int cmd_search(const RunConfig& cfg) {
  if (cfg.n < 1 || cfg.n > 2) throw CliError(kInfeasible, "search supports --n 1 or 2 only");
  guard_long_run(cfg, cfg.n == 2, "two-copy search");
  const BinarySystem p = load_valid_box(cfg);
  SearchOptions opts;
  opts.jobs = cfg.jobs;
  auto last = std::chrono::steady_clock::now();
  opts.on_progress = [&last](std::uint64_t done, std::uint64_t total, const Rational& incumbent) {
    const auto now = std::chrono::steady_clock::now();
    if (now - last < std::chrono::seconds(5) && done < total) return;
    last = now;
    log_event({{"event", "search_progress"}, {"done", done}, {"total", total}, {"incumbent", incumbent.fraction_str()}});
  };
  const SearchReport r = brute_force_D(p, cfg.n, opts);
  Json out = search_to_json(r);
  out["seed"] = cfg.seed;
  emit(cfg, out.dump(2));
  return kOk;
}

int dispatch(const RunConfig& cfg) {
  if (cfg.command == "validate") return cmd_validate(cfg);
  if (cfg.command == "nl") return cmd_nl(cfg);
  if (cfg.command == "decompose") return cmd_decompose(cfg);
  if (cfg.command == "tables") return cmd_tables(cfg);
  if (cfg.command == "bound") return cmd_bound(cfg);
  if (cfg.command == "grid") return cmd_grid(cfg);
  if (cfg.command == "search") return cmd_search(cfg);
  throw CliError(kUsage, "unknown command " + cfg.command);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact upper bounds on distillable nonlocality of binary nonsignaling systems"};
  app.require_subcommand(1);
  RunConfig cfg;
  cfg.jobs = std::max(1u, std::thread::hardware_concurrency());

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"validate", "Check a box for nonnegativity, normalization and nonsignaling"},
      {"nl", "CHSH value NL(P) with the maximizing facet"},
      {"decompose", "Least nonlocal isotropic decomposition"},
      {"tables", "Fill and cache the delta tables up to level n"},
      {"bound", "Upper bound on D(n, P)"},
      {"grid", "Class bounds aggregated by (k0+k1, l0+l1), as CSV"},
      {"search", "Exhaustive protocol search for D(n, P), n <= 2"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--wedge", cfg.wedge, "Wedge system parameters eps,delta (rationals)");
    sub->add_option("--box", cfg.box_path, "Box JSON file");
    sub->add_option("--n", cfg.n, "Number of copies");
    sub->add_option("--cache", cfg.cache_dir, "Table cache directory");
    sub->add_option("--out", cfg.out_path, "Write output here instead of stdout");
    sub->add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--jobs", cfg.jobs, "Worker threads")->check(CLI::PositiveNumber);
    sub->add_flag("--long-run", cfg.long_run, "Allow runs expected to take hours");
    sub->add_option("--seed", cfg.seed, "Seed recorded in reports");
    if (name == "grid") sub->add_flag("--approx", cfg.approx, "Add a decimal bound_approx column");
    sub->final_callback([&cfg, name = name] { cfg.command = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kUsage;
  }

  try {
    return dispatch(cfg);
  } catch (const CliError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.code;
  } catch (const TableFileError& e) {
    std::cerr << "error: table cache: " << e.what() << '\n';
    return kCacheCorrupt;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInfeasible;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kInternal;
  }
}
