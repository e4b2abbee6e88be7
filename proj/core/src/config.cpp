#include "pcdiff/config.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <functional>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "pcdiff/errors.hpp"

namespace pcdiff::sim {

std::string_view to_string(ProtocolKind k) {
  switch (k) {
    case ProtocolKind::Prism: return "prism";
    case ProtocolKind::Ohie: return "ohie";
    case ProtocolKind::FruitChains: return "fruitchains";
    case ProtocolKind::GenericParallel: return "generic-parallel";
  }
  return "unknown";
}

std::string_view to_string(StrategyKind k) {
  switch (k) {
    case StrategyKind::None: return "none";
    case StrategyKind::EpochDelayer: return "epoch-delayer";
    case StrategyKind::GenesisReferrer: return "genesis-referrer";
    case StrategyKind::DifficultyRaiser: return "difficulty-raiser";
    case StrategyKind::PrivateMiner: return "private-miner";
    case StrategyKind::StalePivotRef: return "stale-pivot-ref";
  }
  return "unknown";
}

std::string_view to_string(TraceKind k) {
  switch (k) {
    case TraceKind::Constant: return "constant";
    case TraceKind::Ramp: return "ramp";
    case TraceKind::Step: return "step";
    case TraceKind::File: return "file";
  }
  return "unknown";
}

namespace {

[[noreturn]] void bad(std::string_view key, std::string_view value, std::string_view expect) {
  throw ConfigError("invalid value '" + std::string(value) + "' for " + std::string(key) + ": expected " + std::string(expect));
}

template <class T>
T to_int(std::string_view key, std::string_view v) {
  T out{};
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || ec != std::errc() || p != v.data() + v.size()) bad(key, v, "a non-negative integer");
  return out;
}

double to_real(std::string_view key, std::string_view v) {
  if (v.find('/') != std::string_view::npos) {
    try {
      return Rational::parse(v).to_double();
    } catch (const Error&) {
      bad(key, v, "a number");
    }
  }
  double out = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || ec != std::errc() || p != v.data() + v.size()) bad(key, v, "a number");
  return out;
}

Rational to_rational(std::string_view key, std::string_view v) {
  try {
    return Rational::parse(v);
  } catch (const Error&) {
    bad(key, v, "a rational such as 3/2 or 0.25");
  }
}

bool to_bool(std::string_view key, std::string_view v) {
  if (v == "true") return true;
  if (v == "false") return false;
  bad(key, v, "true or false");
}

std::string real_str(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

template <class E, std::size_t N>
E to_enum(std::string_view key, std::string_view v, const E (&all)[N]) {
  for (E e : all)
    if (to_string(e) == v) return e;
  std::string names;
  for (E e : all) names += (names.empty() ? "" : ", ") + std::string(to_string(e));
  bad(key, v, "one of " + names);
}

constexpr ProtocolKind kProtocols[] = {ProtocolKind::Prism, ProtocolKind::Ohie, ProtocolKind::FruitChains,
                                       ProtocolKind::GenericParallel};
constexpr StrategyKind kStrategies[] = {StrategyKind::None, StrategyKind::EpochDelayer, StrategyKind::GenesisReferrer,
                                        StrategyKind::DifficultyRaiser, StrategyKind::PrivateMiner,
                                        StrategyKind::StalePivotRef};
constexpr TraceKind kTraces[] = {TraceKind::Constant, TraceKind::Ramp, TraceKind::Step, TraceKind::File};

template <class T>
std::vector<T> to_list(std::string_view key, std::string_view v, const std::function<T(std::string_view, std::string_view)>& one) {
  std::vector<T> out;
  if (v.empty()) return out;
  std::size_t start = 0;
  for (;;) {
    auto pos = v.find(',', start);
    auto item = v.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    out.push_back(one(key, item));
    if (pos == std::string_view::npos) return out;
    start = pos + 1;
  }
}

template <class T>
std::string join(const std::vector<T>& xs, const std::function<std::string(const T&)>& one) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? "," : "") + one(xs[i]);
  return s;
}

struct Key {
  std::string_view section;
  std::string_view name;
  std::function<void(SimConfig&, std::string_view)> set;
  std::function<std::string(const SimConfig&)> get;
};

#define PCDIFF_U32(sec, key, field)                                                              \
  Key { sec, key, [](SimConfig& c, std::string_view v) { c.field = to_int<std::uint32_t>(key, v); }, \
        [](const SimConfig& c) { return std::to_string(c.field); } }
#define PCDIFF_U64(sec, key, field)                                                              \
  Key { sec, key, [](SimConfig& c, std::string_view v) { c.field = to_int<std::uint64_t>(key, v); }, \
        [](const SimConfig& c) { return std::to_string(c.field); } }
#define PCDIFF_RAT(sec, key, field)                                                              \
  Key { sec, key, [](SimConfig& c, std::string_view v) { c.field = to_rational(key, v); },       \
        [](const SimConfig& c) { return c.field.str(); } }
#define PCDIFF_REAL(sec, key, field)                                                             \
  Key { sec, key, [](SimConfig& c, std::string_view v) { c.field = to_real(key, v); },           \
        [](const SimConfig& c) { return real_str(c.field); } }
#define PCDIFF_BOOL(sec, key, field)                                                             \
  Key { sec, key, [](SimConfig& c, std::string_view v) { c.field = to_bool(key, v); },           \
        [](const SimConfig& c) { return std::string(c.field ? "true" : "false"); } }

const std::vector<Key>& keys() {
  static const std::vector<Key> table = {
      Key{"protocol", "protocol",
          [](SimConfig& c, std::string_view v) { c.protocol = to_enum("protocol", v, kProtocols); },
          [](const SimConfig& c) { return std::string(to_string(c.protocol)); }},
      PCDIFF_BOOL("protocol", "enforce_m2", enforce_m2),
      PCDIFF_U32("protocol", "chains", params.m),

      PCDIFF_U32("params", "delta", params.delta),
      PCDIFF_U32("params", "kappa", params.kappa),
      PCDIFF_U32("params", "phi", params.phi),
      PCDIFF_RAT("params", "tau", params.tau),
      PCDIFF_RAT("params", "gamma", params.gamma),
      PCDIFF_U32("params", "s", params.s),
      PCDIFF_RAT("params", "honest_advantage", params.delta_adv),
      PCDIFF_RAT("params", "epsilon", params.epsilon),
      PCDIFF_RAT("params", "lambda", params.lambda),
      PCDIFF_RAT("params", "t0", params.t0),
      PCDIFF_RAT("params", "n0", params.n0),
      PCDIFF_RAT("params", "p", params.p),
      PCDIFF_U32("params", "recency", params.recency),
      PCDIFF_RAT("params", "sigma", params.sigma),
      PCDIFF_U64("params", "r_max", params.r_max),
      PCDIFF_U32("params", "ell", params.ell),
      PCDIFF_U32("params", "target_precision_bits", params.target_precision_bits),
      PCDIFF_RAT("params", "fruit_ratio", params.fruit_ratio),

      PCDIFF_RAT("sim", "block_rate", block_rate),
      PCDIFF_RAT("sim", "round_interval", round_interval),
      PCDIFF_U32("sim", "duration", duration),
      PCDIFF_U32("sim", "honest_nodes", honest_nodes),
      Key{"sim", "node_weights",
          [](SimConfig& c, std::string_view v) {
            c.node_weights = to_list<double>("node_weights", v, [](std::string_view k, std::string_view x) { return to_real(k, x); });
          },
          [](const SimConfig& c) { return join<double>(c.node_weights, [](const double& x) { return real_str(x); }); }},
      PCDIFF_U64("sim", "seed", seed),

      PCDIFF_REAL("adversary", "adversary_fraction", adversary.fraction),
      Key{"adversary", "adversary_strategy",
          [](SimConfig& c, std::string_view v) { c.adversary.strategy = to_enum("adversary_strategy", v, kStrategies); },
          [](const SimConfig& c) { return std::string(to_string(c.adversary.strategy)); }},
      PCDIFF_U32("adversary", "attack_chain", adversary.attack_chain),
      PCDIFF_U32("adversary", "confirm_depth", adversary.confirm_depth),
      PCDIFF_U32("adversary", "release_delay", adversary.release_delay),
      PCDIFF_U32("adversary", "attack_start", adversary.attack_start),
      PCDIFF_RAT("adversary", "attack_margin", adversary.attack_margin),
      PCDIFF_U32("adversary", "giveup_blocks", adversary.giveup_blocks),
      PCDIFF_BOOL("adversary", "stop_on_resolution", adversary.stop_on_resolution),

      Key{"trace", "trace_kind",
          [](SimConfig& c, std::string_view v) { c.trace.kind = to_enum("trace_kind", v, kTraces); },
          [](const SimConfig& c) { return std::string(to_string(c.trace.kind)); }},
      PCDIFF_REAL("trace", "trace_factor", trace.factor),
      PCDIFF_REAL("trace", "trace_step_fraction", trace.step_fraction),
      PCDIFF_U32("trace", "trace_steps", trace.steps),
      Key{"trace", "trace_file", [](SimConfig& c, std::string_view v) { c.trace.file = std::string(v); },
          [](const SimConfig& c) { return c.trace.file; }},
      PCDIFF_REAL("trace", "trace_time_scale", trace.time_scale),

      PCDIFF_U32("metrics", "windows", metrics.windows),
      PCDIFF_U32("metrics", "sample_interval", metrics.sample_interval),
      PCDIFF_BOOL("metrics", "record_rounds", metrics.record_rounds),
      Key{"metrics", "fairness_subset",
          [](SimConfig& c, std::string_view v) {
            c.metrics.fairness_subset = to_list<std::uint32_t>(
                "fairness_subset", v, [](std::string_view k, std::string_view x) { return to_int<std::uint32_t>(k, x); });
          },
          [](const SimConfig& c) {
            return join<std::uint32_t>(c.metrics.fairness_subset, [](const std::uint32_t& x) { return std::to_string(x); });
          }},
      PCDIFF_U32("metrics", "fairness_begin", metrics.fairness_begin),
      PCDIFF_U32("metrics", "fairness_end", metrics.fairness_end),
  };
  return table;
}

#undef PCDIFF_U32
#undef PCDIFF_U64
#undef PCDIFF_RAT
#undef PCDIFF_REAL
#undef PCDIFF_BOOL

const Key* find_key(std::string_view name) {
  for (const auto& k : keys())
    if (k.name == name) return &k;
  return nullptr;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

}  // namespace

void SimConfig::resolve() { params.f = block_rate * round_interval; }

void SimConfig::validate() const {
  auto fail = [](const std::string& msg) { throw ConfigError(msg); };
  if (duration < 1) fail("duration must be at least 1");
  if (honest_nodes < 1 || honest_nodes > 30000) fail("honest_nodes must be in [1, 30000]");
  if (!node_weights.empty()) {
    if (node_weights.size() != honest_nodes) fail("node_weights needs one entry per honest node");
    for (double w : node_weights)
      if (!(w > 0)) fail("node_weights must be positive");
  }
  if (!(adversary.fraction >= 0 && adversary.fraction < 1)) fail("adversary_fraction must be in [0, 1)");
  if (params.m < 1) fail("chains must be at least 1");
  if (protocol == ProtocolKind::FruitChains && params.m != 1) fail("fruitchains runs use chains = 1");
  if (protocol == ProtocolKind::Prism && params.m < 2) fail("prism needs a proposer chain and at least one voter chain");
  if (params.phi < 1) fail("phi must be at least 1");
  if (params.tau < Rational(1)) fail("tau must be at least 1");
  if (params.t0.sign() <= 0) fail("t0 must be positive");
  if (params.kappa < 1 || params.kappa > 4096) fail("kappa must be in [1, 4096]");
  if (params.fruit_ratio.sign() <= 0) fail("fruit_ratio must be positive");
  if (params.n0.sign() < 0 || params.p.sign() < 0 || params.sigma.sign() < 0) fail("n0, p and sigma must not be negative");
  if (round_interval.sign() <= 0) fail("round_interval must be positive");
  if (block_rate.sign() <= 0) fail("block_rate must be positive");

  const auto s = adversary.strategy;
  if (s != StrategyKind::None && !(adversary.fraction > 0)) fail("adversary_strategy needs adversary_fraction > 0");
  const bool generic = protocol == ProtocolKind::GenericParallel;
  if ((s == StrategyKind::EpochDelayer || s == StrategyKind::GenesisReferrer || s == StrategyKind::DifficultyRaiser ||
       s == StrategyKind::StalePivotRef) && !generic)
    fail(std::string(to_string(s)) + " runs with protocol generic-parallel only");
  if (s == StrategyKind::PrivateMiner && !(generic || protocol == ProtocolKind::FruitChains))
    fail("private-miner runs with generic-parallel or fruitchains only");
  if ((s == StrategyKind::EpochDelayer || s == StrategyKind::GenesisReferrer) && params.m < 2)
    fail(std::string(to_string(s)) + " needs at least one non-pivot chain");
  if (s == StrategyKind::StalePivotRef && (adversary.attack_chain < 1 || adversary.attack_chain >= params.m))
    fail("attack_chain must name a non-pivot chain");
  if (s == StrategyKind::PrivateMiner && adversary.attack_chain >= params.m) fail("attack_chain out of range");
  if (adversary.release_delay > std::max<std::uint32_t>(params.delta, 1)) fail("release_delay cannot exceed delta");
  if (adversary.confirm_depth < 1) fail("confirm_depth must be at least 1");
  if (adversary.attack_margin.sign() <= 0) fail("attack_margin must be positive");
  if (adversary.giveup_blocks < 1) fail("giveup_blocks must be at least 1");

  if (!(trace.factor > 0)) fail("trace_factor must be positive");
  if (trace.steps < 1) fail("trace_steps must be at least 1");
  if (!(trace.step_fraction > 0 && trace.step_fraction <= 1)) fail("trace_step_fraction must be in (0, 1]");
  if (!(trace.time_scale > 0)) fail("trace_time_scale must be positive");
  if (trace.kind == TraceKind::File && trace.file.empty()) fail("trace_kind = file needs trace_file");

  if (metrics.windows < 1) fail("windows must be at least 1");
  if (metrics.sample_interval < 1) fail("sample_interval must be at least 1");
  std::set<std::uint32_t> seen;
  for (auto p : metrics.fairness_subset) {
    if (p > honest_nodes) fail("fairness_subset names an unknown party");
    if (!seen.insert(p).second) fail("fairness_subset lists a party twice");
  }
}

SimConfig parse_config(std::istream& in, const std::string& base_dir) {
  SimConfig cfg;
  std::string raw;
  std::string section;
  std::set<std::string_view> seen;
  std::size_t n = 0;
  while (std::getline(in, raw)) {
    ++n;
    std::string_view line = raw;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("line " + std::to_string(n) + ": malformed section header");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      static const std::set<std::string_view> known{"protocol", "params", "sim", "adversary", "trace", "metrics"};
      if (!known.count(section)) throw ConfigError("line " + std::to_string(n) + ": unknown section [" + section + "]");
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError("line " + std::to_string(n) + ": expected key = value");
    auto key = trim(line.substr(0, eq));
    auto value = trim(line.substr(eq + 1));
    const Key* k = find_key(key);
    if (!k) throw ConfigError("line " + std::to_string(n) + ": unknown key '" + std::string(key) + "'");
    if (section.empty()) throw ConfigError("line " + std::to_string(n) + ": key '" + std::string(key) + "' outside a section");
    if (k->section != section)
      throw ConfigError("line " + std::to_string(n) + ": key '" + std::string(key) + "' belongs in [" + std::string(k->section) + "]");
    if (!seen.insert(k->name).second) throw ConfigError("line " + std::to_string(n) + ": duplicate key '" + std::string(key) + "'");
    k->set(cfg, value);
  }
  if (!cfg.trace.file.empty()) {
    std::filesystem::path p(cfg.trace.file);
    if (p.is_relative()) cfg.trace.file = (std::filesystem::path(base_dir) / p).lexically_normal().string();
  }
  cfg.resolve();
  return cfg;
}

SimConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  auto dir = std::filesystem::path(path).parent_path();
  return parse_config(in, dir.empty() ? "." : dir.string());
}

void apply_override(SimConfig& cfg, std::string_view assignment) {
  auto eq = assignment.find('=');
  if (eq == std::string_view::npos) throw ConfigError("override must look like key=value");
  auto key = trim(assignment.substr(0, eq));
  auto value = trim(assignment.substr(eq + 1));
  std::string_view section;
  if (auto dot = key.find('.'); dot != std::string_view::npos) {
    section = key.substr(0, dot);
    key = key.substr(dot + 1);
  }
  const Key* k = find_key(key);
  if (!k) throw ConfigError("unknown key '" + std::string(key) + "' in override");
  if (!section.empty() && section != k->section)
    throw ConfigError("key '" + std::string(key) + "' belongs in [" + std::string(k->section) + "]");
  k->set(cfg, value);
  cfg.resolve();
}

void write_config(std::ostream& out, const SimConfig& cfg) {
  std::string_view section;
  for (const auto& k : keys()) {
    if (k.section != section) {
      if (!section.empty()) out << '\n';
      section = k.section;
      out << '[' << section << "]\n";
    }
    out << k.name << " = " << k.get(cfg) << '\n';
  }
}

}  // namespace pcdiff::sim
