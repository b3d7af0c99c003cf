#pragma once

#include <optional>
#include <string>
#include <vector>

#include "viewsync/metrics.hpp"
#include "viewsync/scenario.hpp"
#include "viewsync/trace.hpp"

namespace viewsync {

/// Everything a single run produces, ready for serialization.
struct SyncReport {
  ScenarioConfig config;
  std::vector<SyncInterval> intervals;
  std::optional<LatencyStats> latency;
  std::optional<CommunicationStats> communication;
  AuditResult audit;
};

SyncReport analyze(const Trace& trace, const ScenarioConfig& config);
SyncReport run_scenario(const ScenarioConfig& config);

enum class SweepAxis : std::uint8_t { N, T, Seed };
const char* to_string(SweepAxis a);
std::optional<SweepAxis> parse_axis(const std::string& s);

struct SweepPoint {
  std::int64_t value = 0;
  SyncReport report;
  std::string error;  // non-empty when the point failed; sweep continues
};

/// Simple least squares of y against {1, x} or {1, x^2}. The two forms are
/// non-nested, so their R^2 values can be compared to pick a growth order.
struct Fit {
  double intercept = 0;
  double slope = 0;
  double r2 = 1;
};
Fit fit_linear(const std::vector<double>& x, const std::vector<double>& y);
Fit fit_pure_quadratic(const std::vector<double>& x, const std::vector<double>& y);

struct MetricFits {
  std::string metric;
  Fit linear;
  Fit quadratic;
};

struct SweepResult {
  SweepAxis axis = SweepAxis::N;
  std::vector<SweepPoint> points;
  std::vector<MetricFits> fits;  // comm_mean, comm_first, latency_mean, latency_first
};

/// Re-runs the base config once per axis value. Axis N re-derives f as
/// floor((n-1)/3); axis T sets the crashed-leader count.
SweepResult run_sweep(const ScenarioConfig& base, SweepAxis axis,
                      const std::vector<std::int64_t>& values);

enum class EmitFormat : std::uint8_t { Csv, Jsonl };
std::optional<EmitFormat> parse_format(const std::string& s);

std::string to_csv(const SyncReport& report);
std::string to_jsonl(const SyncReport& report);
std::string to_csv(const SweepResult& sweep);
std::string to_jsonl(const SweepResult& sweep);

void emit(const SyncReport& report, EmitFormat format, const std::string& path);
void emit(const SweepResult& sweep, EmitFormat format, const std::string& path);

}  // namespace viewsync
