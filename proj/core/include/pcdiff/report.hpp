#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pcdiff/analysis.hpp"
#include "pcdiff/config.hpp"

namespace pcdiff::report {

struct MetricFile {
  std::string_view name;
  std::string_view header;
};

// Every CSV a run directory carries. Files are always written, possibly with no rows.
//   forking.csv         windowed forking rate by block timestamp
//   chains.csv          per-chain fork counts and difficulty changes on the heaviest chain
//   band.csv            min/max target across chain tips at each sample round
//   adoption_delay.csv  epoch-adoption delay histograms (unit = blocks | intervals)
//   overhead.csv        Prism confirmation overhead
//   fairness.csv        FruitChains fruit-difficulty share of the fairness subset
//   attacks.csv         attack outcomes
const std::vector<MetricFile>& metric_files();

inline constexpr std::string_view kMergedHeader =
    "seed,forking_rate,adoption_within_1_5,changes_per_second,mid_epoch_changes,overhead,fairness,attack_success,"
    "attack_failure,attack_unresolved";

void write_forking(std::ostream& out, const analysis::MetricsReport& r);
void write_chains(std::ostream& out, const analysis::MetricsReport& r);
void write_band(std::ostream& out, const analysis::MetricsReport& r);
void write_adoption(std::ostream& out, const analysis::MetricsReport& r);
void write_overhead(std::ostream& out, const analysis::MetricsReport& r, const sim::SimConfig& cfg);
void write_fairness(std::ostream& out, const analysis::MetricsReport& r, const sim::SimConfig& cfg);
void write_attacks(std::ostream& out, const analysis::MetricsReport& r, const sim::SimConfig& cfg);
std::string summary_json(const analysis::MetricsReport& r, const sim::SimConfig& cfg);

// All metric CSVs plus summary.json into dir.
void write_metrics(const std::filesystem::path& dir, const analysis::MetricsReport& r, const sim::SimConfig& cfg);

// One row per seed followed by a "mean" row; the summary document repeats both.
void write_merged(const std::filesystem::path& dir,
                  const std::vector<std::pair<std::uint64_t, analysis::MetricsReport>>& runs);

// Fixed formatting used by every numeric column.
std::string format_double(double v);

}  // namespace pcdiff::report
