#include "pcdiff/report.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "pcdiff/errors.hpp"

namespace pcdiff::report {

namespace {

using json = nlohmann::ordered_json;

std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw Error("cannot write " + p.string());
  return out;
}

double mean_changes_per_second(const analysis::MetricsReport& r) {
  if (r.chains.empty()) return 0;
  double sum = 0;
  for (const auto& c : r.chains) sum += c.changes_per_second;
  return sum / static_cast<double>(r.chains.size());
}

std::uint64_t mid_epoch_changes(const analysis::MetricsReport& r) {
  std::uint64_t n = 0;
  for (const auto& c : r.chains) n += c.changes.mid_epoch;
  return n;
}

json optional_number(const std::optional<Rational>& v) {
  return v ? json(v->to_double()) : json(nullptr);
}

json histogram(const std::map<std::uint32_t, std::uint64_t>& h) {
  json out = json::object();
  for (const auto& [d, k] : h) out[std::to_string(d)] = k;
  return out;
}

json run_summary(const analysis::MetricsReport& r) {
  json j;
  j["end_round"] = r.end_round;
  j["seconds"] = r.seconds;
  j["forking_rate"] = r.forking_rate.to_double();
  j["forking_rate_exact"] = r.forking_rate.str();
  j["on_chain_blocks"] = r.forks.on_chain;
  j["off_chain_blocks"] = r.forks.off_chain;
  j["adoption"] = {{"transitions", r.adoption.transitions},
                   {"censored", r.adoption.censored},
                   {"within_1_5", r.adoption.fraction_within(1, 5)},
                   {"blocks", histogram(r.adoption.blocks)},
                   {"intervals", histogram(r.adoption.intervals)}};
  j["changes_per_second"] = mean_changes_per_second(r);
  j["mid_epoch_changes"] = mid_epoch_changes(r);
  j["overhead"] = optional_number(r.overhead);
  if (r.fairness) {
    j["fairness"] = {{"fraction", optional_number(r.fairness->fraction)},
                     {"window_begin", r.fairness->begin},
                     {"window_end", r.fairness->end},
                     {"honest_fruits", r.fairness->honest_fruits},
                     {"lost_fruits", r.fairness->lost_fruits}};
  } else {
    j["fairness"] = nullptr;
  }
  j["attacks"] = {{"success", r.attacks.success}, {"failure", r.attacks.failure}, {"unresolved", r.attacks.unresolved}};
  if (r.good_rounds)
    j["good_rounds"] = {{"good", r.good_rounds->good}, {"total", r.good_rounds->total}};
  else
    j["good_rounds"] = nullptr;
  return j;
}

void merged_row(std::ostream& out, const std::string& label, double fork, double within, double cps, double mid,
                const std::string& overhead, const std::string& fair, double s, double f, double u) {
  out << label << ',' << format_double(fork) << ',' << format_double(within) << ',' << format_double(cps) << ','
      << format_double(mid) << ',' << overhead << ',' << fair << ',' << format_double(s) << ',' << format_double(f)
      << ',' << format_double(u) << '\n';
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

const std::vector<MetricFile>& metric_files() {
  static const std::vector<MetricFile> files = {
      {"forking.csv", "window,begin_round,end_round,on_chain,off_chain,forking_rate"},
      {"chains.csv", "chain,on_chain,off_chain,forking_rate,difficulty_changes,mid_epoch_changes,changes_per_second"},
      {"band.csv", "round,hashrate_multiplier,min_target,max_target,min_difficulty,max_difficulty"},
      {"adoption_delay.csv", "unit,delay,count"},
      {"overhead.csv", "protocol,chains,phi,overhead"},
      {"fairness.csv", "subset,window_begin,window_end,fraction,honest_fruits,lost_fruits"},
      {"attacks.csv", "strategy,confirm_depth,success,failure,unresolved"},
  };
  return files;
}

void write_forking(std::ostream& out, const analysis::MetricsReport& r) {
  out << metric_files()[0].header << '\n';
  for (std::size_t w = 0; w < r.forking_series.size(); ++w) {
    const auto& fw = r.forking_series[w];
    out << w << ',' << fw.begin << ',' << fw.end << ',' << fw.count.on_chain << ',' << fw.count.off_chain << ','
        << format_double(analysis::forking_rate(fw.count).to_double()) << '\n';
  }
}

void write_chains(std::ostream& out, const analysis::MetricsReport& r) {
  out << metric_files()[1].header << '\n';
  for (const auto& c : r.chains)
    out << c.chain << ',' << c.forks.on_chain << ',' << c.forks.off_chain << ','
        << format_double(analysis::forking_rate(c.forks).to_double()) << ',' << c.changes.changes << ','
        << c.changes.mid_epoch << ',' << format_double(c.changes_per_second) << '\n';
}

void write_band(std::ostream& out, const analysis::MetricsReport& r) {
  out << metric_files()[2].header << '\n';
  for (const auto& s : r.band)
    out << s.round << ',' << format_double(s.multiplier) << ',' << s.min_target.str() << ',' << s.max_target.str()
        << ',' << format_double(s.max_target.reciprocal().to_double()) << ','
        << format_double(s.min_target.reciprocal().to_double()) << '\n';
}

void write_adoption(std::ostream& out, const analysis::MetricsReport& r) {
  out << metric_files()[3].header << '\n';
  for (const auto& [d, k] : r.adoption.blocks) out << "blocks," << d << ',' << k << '\n';
  for (const auto& [d, k] : r.adoption.intervals) out << "intervals," << d << ',' << k << '\n';
  out << "censored,," << r.adoption.censored << '\n';
}

void write_overhead(std::ostream& out, const analysis::MetricsReport& r, const sim::SimConfig& cfg) {
  out << metric_files()[4].header << '\n';
  if (r.overhead)
    out << sim::to_string(cfg.protocol) << ',' << cfg.chain_count() << ',' << cfg.params.phi << ','
        << format_double(r.overhead->to_double()) << '\n';
}

void write_fairness(std::ostream& out, const analysis::MetricsReport& r, const sim::SimConfig& cfg) {
  out << metric_files()[5].header << '\n';
  if (!r.fairness) return;
  std::string subset;
  for (std::uint32_t i : cfg.metrics.fairness_subset) subset += (subset.empty() ? "" : ";") + std::to_string(i);
  const auto& f = *r.fairness;
  out << subset << ',' << f.begin << ',' << f.end << ','
      << (f.fraction ? format_double(f.fraction->to_double()) : std::string()) << ',' << f.honest_fruits << ','
      << f.lost_fruits << '\n';
}

void write_attacks(std::ostream& out, const analysis::MetricsReport& r, const sim::SimConfig& cfg) {
  out << metric_files()[6].header << '\n';
  out << sim::to_string(cfg.adversary.strategy) << ',' << cfg.adversary.confirm_depth << ',' << r.attacks.success
      << ',' << r.attacks.failure << ',' << r.attacks.unresolved << '\n';
}

std::string summary_json(const analysis::MetricsReport& r, const sim::SimConfig& cfg) {
  json j;
  j["protocol"] = sim::to_string(cfg.protocol);
  j["seed"] = cfg.seed;
  j["metrics"] = run_summary(r);
  return j.dump(2) + "\n";
}

void write_metrics(const std::filesystem::path& dir, const analysis::MetricsReport& r, const sim::SimConfig& cfg) {
  std::filesystem::create_directories(dir);
  const auto& files = metric_files();
  {
    auto out = open_out(dir / files[0].name);
    write_forking(out, r);
  }
  {
    auto out = open_out(dir / files[1].name);
    write_chains(out, r);
  }
  {
    auto out = open_out(dir / files[2].name);
    write_band(out, r);
  }
  {
    auto out = open_out(dir / files[3].name);
    write_adoption(out, r);
  }
  {
    auto out = open_out(dir / files[4].name);
    write_overhead(out, r, cfg);
  }
  {
    auto out = open_out(dir / files[5].name);
    write_fairness(out, r, cfg);
  }
  {
    auto out = open_out(dir / files[6].name);
    write_attacks(out, r, cfg);
  }
  auto out = open_out(dir / "summary.json");
  out << summary_json(r, cfg);
}

void write_merged(const std::filesystem::path& dir,
                  const std::vector<std::pair<std::uint64_t, analysis::MetricsReport>>& runs) {
  std::filesystem::create_directories(dir);
  auto csv = open_out(dir / "merged.csv");
  csv << kMergedHeader << '\n';
  json j;
  j["runs"] = json::array();
  double fork = 0, within = 0, cps = 0, mid = 0, over = 0, fair = 0, s = 0, f = 0, u = 0;
  std::size_t over_n = 0, fair_n = 0;
  for (const auto& [seed, r] : runs) {
    const double rf = r.forking_rate.to_double();
    const double rw = r.adoption.fraction_within(1, 5);
    const double rc = mean_changes_per_second(r);
    const double rm = static_cast<double>(mid_epoch_changes(r));
    std::string ro, rfair;
    if (r.overhead) {
      over += r.overhead->to_double();
      ++over_n;
      ro = format_double(r.overhead->to_double());
    }
    if (r.fairness && r.fairness->fraction) {
      fair += r.fairness->fraction->to_double();
      ++fair_n;
      rfair = format_double(r.fairness->fraction->to_double());
    }
    merged_row(csv, std::to_string(seed), rf, rw, rc, rm, ro, rfair, static_cast<double>(r.attacks.success),
               static_cast<double>(r.attacks.failure), static_cast<double>(r.attacks.unresolved));
    fork += rf;
    within += rw;
    cps += rc;
    mid += rm;
    s += static_cast<double>(r.attacks.success);
    f += static_cast<double>(r.attacks.failure);
    u += static_cast<double>(r.attacks.unresolved);
    json run = run_summary(r);
    run["seed"] = seed;
    j["runs"].push_back(run);
  }
  const double n = runs.empty() ? 1.0 : static_cast<double>(runs.size());
  const std::string mo = over_n ? format_double(over / static_cast<double>(over_n)) : std::string();
  const std::string mf = fair_n ? format_double(fair / static_cast<double>(fair_n)) : std::string();
  merged_row(csv, "mean", fork / n, within / n, cps / n, mid / n, mo, mf, s / n, f / n, u / n);
  j["mean"] = {{"forking_rate", fork / n},
               {"adoption_within_1_5", within / n},
               {"changes_per_second", cps / n},
               {"mid_epoch_changes", mid / n},
               {"overhead", over_n ? json(over / static_cast<double>(over_n)) : json(nullptr)},
               {"fairness", fair_n ? json(fair / static_cast<double>(fair_n)) : json(nullptr)},
               {"attack_success", s / n},
               {"attack_failure", f / n},
               {"attack_unresolved", u / n}};
  auto out = open_out(dir / "merged.json");
  out << j.dump(2) << '\n';
}

}  // namespace pcdiff::report
