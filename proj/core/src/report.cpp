#include "jitune/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "jitune/errors.hpp"

namespace jitune {

namespace {

// Ticks are usually integral; print them plainly and fall back to a
// round-trip-exact form otherwise.
std::string format_tick_value(double value) {
  if (std::isfinite(value) && value == std::floor(value) &&
      std::fabs(value) < 9.0e15) {
    return std::to_string(static_cast<long long>(value));
  }
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) {
    fields.push_back(field);
  }
  return fields;
}

constexpr const char* kIterationHeader =
    "run_id,call_index,phase,candidate,compile_ticks,exec_ticks,"
    "cumulative_ticks";

} // namespace

std::string phase_name(PhaseKind phase) { return to_string(phase); }

PhaseKind phase_from_name(const std::string& name) {
  if (name == "exploring") {
    return PhaseKind::Exploring;
  }
  if (name == "finalizing") {
    return PhaseKind::Finalizing;
  }
  if (name == "tuned") {
    return PhaseKind::Tuned;
  }
  throw Error("unknown phase name: " + name);
}

void write_iteration_csv(std::ostream& out,
                         std::span<const IterationRow> rows) {
  out << kIterationHeader << '\n';
  for (const IterationRow& row : rows) {
    out << row.run_id << ',' << row.call_index << ',' << phase_name(row.phase)
        << ',' << row.candidate << ',' << format_tick_value(row.compile_ticks)
        << ',' << format_tick_value(row.exec_ticks) << ','
        << format_tick_value(row.cumulative_ticks) << '\n';
  }
}

std::vector<IterationRow> read_iteration_csv(std::istream& in) {
  std::vector<IterationRow> rows;
  std::string line;
  if (!std::getline(in, line)) {
    throw Error("iteration CSV is empty");
  }
  if (line != kIterationHeader) {
    throw Error("unexpected iteration CSV header: " + line);
  }
  while (std::getline(in, line)) {
    if (line.empty()) {
      continue;
    }
    const std::vector<std::string> fields = split_fields(line);
    if (fields.size() != 7) {
      throw Error("malformed iteration CSV row: " + line);
    }
    IterationRow row;
    row.run_id = std::stoi(fields[0]);
    row.call_index = std::stoi(fields[1]);
    row.phase = phase_from_name(fields[2]);
    row.candidate = std::stoi(fields[3]);
    row.compile_ticks = std::stod(fields[4]);
    row.exec_ticks = std::stod(fields[5]);
    row.cumulative_ticks = std::stod(fields[6]);
    rows.push_back(row);
  }
  return rows;
}

void write_histogram_csv(std::ostream& out, const ExperimentResult& result,
                         const CandidateSpace& space) {
  out << "candidate_index,candidate_value,runs_chosen\n";
  for (int i = 0; i < space.size(); ++i) {
    const auto it = result.histogram.find(i);
    const int chosen = it == result.histogram.end() ? 0 : it->second;
    out << i << ',' << space.value_at(i) << ',' << chosen << '\n';
  }
}

std::optional<int> first_crossing(std::span<const IterationRow> autotuned,
                                  std::span<const IterationRow> baseline) {
  const std::size_t calls = std::min(autotuned.size(), baseline.size());
  for (std::size_t i = 0; i < calls; ++i) {
    if (autotuned[i].cumulative_ticks < baseline[i].cumulative_ticks) {
      return autotuned[i].call_index;
    }
  }
  return std::nullopt;
}

std::string summary_json(const ExperimentConfig& config,
                         const ExperimentResult& result,
                         const CandidateSpace& space,
                         std::span<const BaselineReport> baselines,
                         double min_stable_gap) {
  nlohmann::json doc;
  doc["kernel"] = to_string(config.kernel);
  doc["n"] = config.n;
  doc["iterations"] = config.iterations;
  doc["runs"] = config.runs;
  doc["seed"] = config.seed;
  doc["metric"] = result.metric_id;
  doc["factory"] = config.factory.kind == FactorySpec::Kind::Simulated
                       ? "simulated"
                       : "closure";

  auto candidates = nlohmann::json::array();
  for (int i = 0; i < space.size(); ++i) {
    candidates.push_back(space.value_at(i));
  }
  doc["candidates"] = candidates;

  auto runs = nlohmann::json::array();
  for (const RunSummary& run : result.runs) {
    nlohmann::json entry;
    entry["run_id"] = run.run_id;
    entry["total_ticks"] = run.total_ticks;
    entry["finalized"] = run.finalized_candidate.has_value();
    if (run.finalized_candidate) {
      entry["winner_index"] = *run.finalized_candidate;
      entry["winner_value"] = space.value_at(*run.finalized_candidate);
    }
    entry["best_gap_ratio"] = run.best_gap_ratio;
    // Near-tied candidates make run-to-run disagreement expected, not a
    // defect; flag those runs.
    entry["stable"] = run.best_gap_ratio >= min_stable_gap;
    runs.push_back(entry);
  }
  doc["run_summaries"] = runs;

  nlohmann::json histogram = nlohmann::json::object();
  int modal_index = -1;
  int modal_count = 0;
  int finalized_runs = 0;
  for (const auto& [index, count] : result.histogram) {
    histogram[std::to_string(space.value_at(index))] = count;
    finalized_runs += count;
    if (count > modal_count) {
      modal_count = count;
      modal_index = index;
    }
  }
  doc["histogram"] = histogram;
  if (modal_index >= 0) {
    doc["modal_choice"] = {
        {"index", modal_index},
        {"value", space.value_at(modal_index)},
        {"frequency",
         static_cast<double>(modal_count) / std::max(finalized_runs, 1)},
    };
  }

  if (!baselines.empty()) {
    auto entries = nlohmann::json::array();
    for (const BaselineReport& baseline : baselines) {
      nlohmann::json entry;
      entry["candidate_index"] = baseline.candidate_index;
      entry["candidate_value"] = baseline.candidate_value;
      entry["total_ticks"] = baseline.total_ticks;
      if (baseline.observed_break_even) {
        entry["observed_break_even"] = *baseline.observed_break_even;
      } else {
        entry["observed_break_even"] = nullptr;
      }
      entries.push_back(entry);
    }
    doc["baselines"] = entries;
  }

  return doc.dump(2);
}

} // namespace jitune
