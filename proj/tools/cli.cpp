#include "cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "pcdiff/analysis.hpp"
#include "pcdiff/attack_calc.hpp"
#include "pcdiff/diffadjust.hpp"
#include "pcdiff/errors.hpp"
#include "pcdiff/report.hpp"
#include "pcdiff/sim.hpp"

namespace pcdiff::cli {

namespace fs = std::filesystem;

namespace {

constexpr const char* kEventsFile = "events.csv";
constexpr const char* kConfigFile = "config.ini";

struct RunOptions {
  std::string config;
  std::vector<std::uint64_t> seeds;
  std::string out;
  std::vector<std::string> overrides;
  bool quiet = false;
};

struct CalcOptions {
  std::string attack;
  std::optional<double> n, t, k, phi, x, tau;
};

struct ReportOptions {
  std::string log_dir;
  std::string out;
};

fs::path seed_dir(const fs::path& out, std::uint64_t seed) { return out / ("seed-" + std::to_string(seed)); }

sim::SimConfig prepare(const RunOptions& o, std::uint64_t seed) {
  sim::SimConfig cfg = sim::load_config(o.config);
  for (const auto& ov : o.overrides) sim::apply_override(cfg, ov);
  cfg.seed = seed;
  cfg.resolve();
  cfg.validate();
  return cfg;
}

void warn_params(const sim::SimConfig& cfg, std::ostream& err) {
  try {
    const auto report = diffadjust::validate_params(cfg.params);
    for (const auto& c : report.conditions)
      if (c.binding && !c.satisfied) err << "warning: parameter condition not satisfied: " << c.name << '\n';
  } catch (const DomainError& e) {
    err << "warning: " << e.what() << '\n';
  }
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw Error("cannot write " + p.string());
  out << text;
}

int cmd_run(const RunOptions& o, std::ostream& out, std::ostream& err) {
  const std::set<std::uint64_t> distinct(o.seeds.begin(), o.seeds.end());
  if (distinct.size() != o.seeds.size()) {
    err << "error: --seed values must be distinct\n";
    return kConfigError;
  }
  std::vector<sim::SimConfig> configs;
  try {
    for (std::uint64_t s : o.seeds) configs.push_back(prepare(o, s));
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  }
  warn_params(configs.front(), err);

  try {
    std::vector<std::pair<std::uint64_t, analysis::MetricsReport>> runs;
    for (const auto& cfg : configs) {
      const sim::EventLog log = sim::run(cfg);
      const fs::path dir = seed_dir(o.out, cfg.seed);
      fs::create_directories(dir);
      {
        std::ofstream ev(dir / kEventsFile, std::ios::binary);
        sim::write_event_log(ev, log);
        if (!ev) throw Error("cannot write " + (dir / kEventsFile).string());
      }
      std::ostringstream cfg_text;
      sim::write_config(cfg_text, cfg);
      write_file(dir / kConfigFile, cfg_text.str());
      auto report = analysis::compute_metrics(log);
      report::write_metrics(dir, report, cfg);
      if (!o.quiet)
        out << "seed " << cfg.seed << ": " << log.store().size() << " blocks, forking rate "
            << report::format_double(report.forking_rate.to_double()) << " -> " << dir.string() << '\n';
      runs.emplace_back(cfg.seed, std::move(report));
    }
    report::write_merged(o.out, runs);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
  return kOk;
}

int cmd_validate(const std::string& path, std::ostream& out, std::ostream& err) {
  sim::SimConfig cfg;
  try {
    cfg = sim::load_config(path);
    cfg.resolve();
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  }
  try {
    const auto report = diffadjust::validate_params(cfg.params);
    out << "ell = " << (report.ell ? report.ell->str() : std::string("undefined")) << '\n';
    for (const auto& c : report.conditions) {
      out << (c.satisfied ? "ok   " : "FAIL ") << c.name;
      if (!c.binding) out << " (informational)";
      out << "  margin = " << (c.margin ? c.margin->str() : std::string("undefined")) << '\n';
    }
    return report.all_satisfied() ? kOk : kConfigError;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  }
}

double need(const std::optional<double>& v, const char* flag) {
  if (!v) throw CLI::ValidationError(std::string("--") + flag + " is required for this attack");
  return *v;
}

int cmd_attack_calc(const CalcOptions& o, std::ostream& out, std::ostream& err) {
  std::string flags;
  try {
    if (o.attack == "simple") {
      flags = "--n, --t, --k";
      const double n = need(o.n, "n"), t = need(o.t, "t"), k = need(o.k, "k");
      out << "exact = " << report::format_double(analysis::simple_attack_prob(n, t, k)) << '\n';
      out << "limit = " << report::format_double(analysis::simple_attack_limit(n, t)) << '\n';
    } else if (o.attack == "raising") {
      flags = "--n, --t, --phi, --x";
      const double n = need(o.n, "n"), t = need(o.t, "t"), phi = need(o.phi, "phi"), x = need(o.x, "x");
      out << "exact = " << report::format_double(analysis::raising_attack_prob(n, t, phi, x)) << '\n';
      out << "limit = " << report::format_double(analysis::simple_attack_limit(n, t)) << '\n';
    } else {
      flags = "--n, --t, --tau, --phi";
      const double n = need(o.n, "n"), t = need(o.t, "t"), tau = need(o.tau, "tau"), phi = need(o.phi, "phi");
      out << "deficit = " << report::format_double(analysis::dampened_catchup_deficit(n, t, tau, phi)) << '\n';
    }
  } catch (const CLI::ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << " (flags " << flags << ")\n";
    return kConfigError;
  }
  return kOk;
}

// Directories holding one run each: the log dir itself, or its seed-* children.
std::vector<fs::path> run_dirs(const fs::path& root) {
  std::vector<fs::path> dirs;
  if (fs::exists(root / kEventsFile)) {
    dirs.push_back(root);
    return dirs;
  }
  if (!fs::is_directory(root)) throw Error("no such log directory: " + root.string());
  for (const auto& e : fs::directory_iterator(root))
    if (e.is_directory() && fs::exists(e.path() / kEventsFile)) dirs.push_back(e.path());
  std::sort(dirs.begin(), dirs.end());
  if (dirs.empty()) throw Error("no event logs under " + root.string());
  return dirs;
}

int cmd_report(const ReportOptions& o, std::ostream& out, std::ostream& err) {
  try {
    std::vector<std::pair<std::uint64_t, analysis::MetricsReport>> runs;
    for (const fs::path& dir : run_dirs(o.log_dir)) {
      if (!fs::exists(dir / kConfigFile)) throw LogFormatError("missing " + (dir / kConfigFile).string());
      const sim::SimConfig cfg = sim::load_config((dir / kConfigFile).string());
      std::ifstream in(dir / kEventsFile, std::ios::binary);
      const sim::EventLog log = sim::read_event_log(in, cfg);
      auto report = analysis::compute_metrics(log);
      const fs::path target = seed_dir(o.out, cfg.seed);
      report::write_metrics(target, report, cfg);
      out << "seed " << cfg.seed << " -> " << target.string() << '\n';
      runs.emplace_back(cfg.seed, std::move(report));
    }
    std::sort(runs.begin(), runs.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    report::write_merged(o.out, runs);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
  return kOk;
}

}  // namespace

int main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Simulator and analysis tools for parallel-chain proof-of-work difficulty adjustment", "pcdiff"};
  app.require_subcommand(1);

  RunOptions run;
  auto* run_cmd = app.add_subcommand("run", "Simulate and write event logs, metric CSVs and summaries");
  run_cmd->add_option("config", run.config, "Config file")->required()->check(CLI::ExistingFile);
  run_cmd->add_option("--seed", run.seeds, "Seed; repeat for several runs")->required();
  run_cmd->add_option("--out", run.out, "Output directory")->required();
  run_cmd->add_option("--override", run.overrides, "key=value replacing one config entry");
  run_cmd->add_flag("--quiet", run.quiet, "No per-run progress lines");

  std::string validate_path;
  auto* validate_cmd = app.add_subcommand("validate-params", "Check the parameter conditions of a config");
  validate_cmd->add_option("config", validate_path, "Config file")->required()->check(CLI::ExistingFile);

  CalcOptions calc;
  auto* calc_cmd = app.add_subcommand("attack-calc", "Closed-form attack probabilities");
  calc_cmd->add_option("--attack", calc.attack, "simple | raising | catchup")
      ->required()
      ->check(CLI::IsMember({"simple", "raising", "catchup"}));
  calc_cmd->add_option("--n", calc.n, "Honest queries per unit time");
  calc_cmd->add_option("--t", calc.t, "Adversary queries per unit time");
  calc_cmd->add_option("--k", calc.k, "Confirmation depth");
  calc_cmd->add_option("--phi", calc.phi, "Epoch length in blocks");
  calc_cmd->add_option("--x", calc.x, "Raised difficulty");
  calc_cmd->add_option("--tau", calc.tau, "Dampening filter");

  ReportOptions rep;
  auto* report_cmd = app.add_subcommand("report", "Recompute metrics from stored event logs");
  report_cmd->add_option("log-dir", rep.log_dir, "Directory written by run")->required();
  report_cmd->add_option("--out", rep.out, "Output directory")->required();

  std::vector<std::string> rev(args.rbegin(), args.rend());
  if (!rev.empty()) rev.pop_back();
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  }

  if (run_cmd->parsed()) return cmd_run(run, out, err);
  if (validate_cmd->parsed()) return cmd_validate(validate_path, out, err);
  if (calc_cmd->parsed()) return cmd_attack_calc(calc, out, err);
  return cmd_report(rep, out, err);
}

}  // namespace pcdiff::cli
