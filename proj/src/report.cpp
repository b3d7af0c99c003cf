#include "viewsync/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "json.hpp"
#include "viewsync/simnet.hpp"

namespace viewsync {

namespace {

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

Fit regress(const std::vector<double>& u, const std::vector<double>& y) {
  const std::size_t m = u.size();
  double mu = 0, my = 0;
  for (std::size_t i = 0; i < m; ++i) {
    mu += u[i];
    my += y[i];
  }
  mu /= static_cast<double>(m);
  my /= static_cast<double>(m);
  double suu = 0, suy = 0, syy = 0;
  for (std::size_t i = 0; i < m; ++i) {
    suu += (u[i] - mu) * (u[i] - mu);
    suy += (u[i] - mu) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  Fit fit;
  fit.slope = suu == 0 ? 0 : suy / suu;
  fit.intercept = my - fit.slope * mu;
  if (syy == 0) {
    fit.r2 = 1;  // constant data is fit perfectly by a flat line
    return fit;
  }
  double ssr = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const double e = y[i] - (fit.intercept + fit.slope * u[i]);
    ssr += e * e;
  }
  fit.r2 = 1.0 - ssr / syy;
  return fit;
}

}  // namespace

SyncReport analyze(const Trace& trace, const ScenarioConfig& config) {
  SyncReport report;
  report.config = config;
  report.intervals = detect_sync_intervals(trace, config.min_overlap);
  report.latency = measure_latency(trace, report.intervals);
  report.communication = measure_communication(trace, report.intervals);
  report.audit = audit_validity(trace);
  return report;
}

SyncReport run_scenario(const ScenarioConfig& config) {
  const Trace trace = run_scenario_trace(config);
  return analyze(trace, config);
}

const char* to_string(SweepAxis a) {
  switch (a) {
    case SweepAxis::N: return "n";
    case SweepAxis::T: return "t";
    case SweepAxis::Seed: return "seed";
  }
  return "?";
}

std::optional<SweepAxis> parse_axis(const std::string& s) {
  if (s == "n") return SweepAxis::N;
  if (s == "t") return SweepAxis::T;
  if (s == "seed") return SweepAxis::Seed;
  return std::nullopt;
}

Fit fit_linear(const std::vector<double>& x, const std::vector<double>& y) {
  return regress(x, y);
}

Fit fit_pure_quadratic(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<double> u(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) u[i] = x[i] * x[i];
  return regress(u, y);
}

namespace {

ScenarioConfig config_at(const ScenarioConfig& base, SweepAxis axis, std::int64_t value) {
  ScenarioConfig c = base;
  switch (axis) {
    case SweepAxis::N:
      c.n = static_cast<NodeId>(value);
      c.f = value >= 1 ? static_cast<std::size_t>((value - 1) / 3) : 0;
      break;
    case SweepAxis::T:
      c.adversary.kind = AdversaryKind::CrashLeaders;
      c.adversary.count = static_cast<unsigned>(value);
      break;
    case SweepAxis::Seed:
      c.seed = static_cast<std::uint64_t>(value);
      break;
  }
  return c;
}

struct MetricColumn {
  const char* name;
  double (*get)(const SyncReport&);
};

double comm_mean_of(const SyncReport& r) {
  return r.communication ? r.communication->mean_per_sync : std::nan("");
}
double comm_first_of(const SyncReport& r) {
  return r.communication ? static_cast<double>(r.communication->first) : std::nan("");
}
double latency_mean_of(const SyncReport& r) {
  return r.latency ? r.latency->mean : std::nan("");
}
double latency_first_of(const SyncReport& r) {
  return r.latency ? r.latency->first.to_double() : std::nan("");
}

constexpr MetricColumn kMetricColumns[] = {
    {"comm_mean", comm_mean_of},
    {"comm_first", comm_first_of},
    {"latency_mean", latency_mean_of},
    {"latency_first", latency_first_of},
};

}  // namespace

SweepResult run_sweep(const ScenarioConfig& base, SweepAxis axis,
                      const std::vector<std::int64_t>& values) {
  SweepResult result;
  result.axis = axis;
  for (std::int64_t value : values) {
    SweepPoint point;
    point.value = value;
    try {
      const ScenarioConfig c = config_at(base, axis, value);
      point.report = run_scenario(c);
    } catch (const std::exception& e) {
      point.error = e.what();
    }
    result.points.push_back(std::move(point));
  }

  std::vector<double> xs;
  for (const auto& p : result.points) {
    if (p.error.empty()) xs.push_back(static_cast<double>(p.value));
  }
  for (const auto& column : kMetricColumns) {
    std::vector<double> ys;
    bool usable = xs.size() >= 2;
    for (const auto& p : result.points) {
      if (!p.error.empty()) continue;
      const double y = column.get(p.report);
      if (std::isnan(y)) usable = false;
      ys.push_back(y);
    }
    if (!usable) continue;
    MetricFits fits;
    fits.metric = column.name;
    fits.linear = fit_linear(xs, ys);
    fits.quadratic = fit_pure_quadratic(xs, ys);
    result.fits.push_back(fits);
  }
  return result;
}

std::optional<EmitFormat> parse_format(const std::string& s) {
  if (s == "csv") return EmitFormat::Csv;
  if (s == "jsonl") return EmitFormat::Jsonl;
  return std::nullopt;
}

namespace {

const char* kReportColumns =
    "syncs,latency_first,latency_mean,comm_first,comm_mean,comm_tail,honest_sends,audit";

std::string report_values(const SyncReport& r) {
  std::string row = std::to_string(r.intervals.size());
  row += ",";
  row += r.latency ? r.latency->first.to_string() : "none";
  row += ",";
  row += r.latency ? fmt_double(r.latency->mean) : "none";
  row += ",";
  row += r.communication ? std::to_string(r.communication->first) : "none";
  row += ",";
  row += r.communication ? fmt_double(r.communication->mean_per_sync) : "none";
  row += ",";
  row += r.communication ? std::to_string(r.communication->tail) : "none";
  row += ",";
  row += r.communication ? std::to_string(r.communication->total_honest_sends) : "0";
  row += ",";
  row += r.audit.ok ? "pass" : "fail";
  return row;
}

}  // namespace

std::string to_csv(const SyncReport& report) {
  std::string out;
  bool first = true;
  for (const auto& [key, value] : config_fields(report.config)) {
    if (!first) out += ",";
    out += key;
    first = false;
  }
  out += ",";
  out += kReportColumns;
  out += "\n";
  first = true;
  for (const auto& [key, value] : config_fields(report.config)) {
    if (!first) out += ",";
    out += value;
    first = false;
  }
  out += ",";
  out += report_values(report);
  out += "\n";
  return out;
}

namespace {

nlohmann::ordered_json report_json(const SyncReport& r) {
  nlohmann::ordered_json j;
  for (const auto& [key, value] : config_fields(r.config)) j["config"][key] = value;
  j["syncs"] = r.intervals.size();
  auto& rows = j["intervals"];
  rows = nlohmann::ordered_json::array();
  for (const auto& si : r.intervals) {
    nlohmann::ordered_json row;
    row["k"] = si.index;
    row["view"] = si.view;
    row["begin"] = si.begin.to_string();
    row["end"] = si.end.to_string();
    row["leader"] = si.leader;
    rows.push_back(row);
  }
  if (r.latency) {
    j["latency_first"] = r.latency->first.to_string();
    j["latency_mean"] = r.latency->mean;
  } else {
    j["latency_first"] = nullptr;
    j["latency_mean"] = nullptr;
  }
  if (r.communication) {
    j["comm_first"] = r.communication->first;
    j["comm_mean"] = r.communication->mean_per_sync;
    j["comm_tail"] = r.communication->tail;
    j["honest_sends"] = r.communication->total_honest_sends;
  } else {
    j["comm_first"] = nullptr;
    j["comm_mean"] = nullptr;
  }
  j["audit"] = r.audit.ok ? "pass" : "fail";
  if (!r.audit.ok) j["audit_detail"] = r.audit.detail;
  return j;
}

}  // namespace

std::string to_jsonl(const SyncReport& report) {
  return report_json(report).dump() + "\n";
}

std::string to_csv(const SweepResult& sweep) {
  std::string out = "axis,value,";
  bool first = true;
  ScenarioConfig defaults;
  for (const auto& [key, value] : config_fields(defaults)) {
    if (!first) out += ",";
    out += key;
    first = false;
  }
  out += ",";
  out += kReportColumns;
  out += ",error\n";
  for (const auto& p : sweep.points) {
    out += to_string(sweep.axis);
    out += ",";
    out += std::to_string(p.value);
    out += ",";
    first = true;
    for (const auto& [key, value] : config_fields(p.report.config)) {
      if (!first) out += ",";
      out += value;
      first = false;
    }
    out += ",";
    out += report_values(p.report);
    out += ",";
    out += p.error;
    out += "\n";
  }
  return out;
}

std::string to_jsonl(const SweepResult& sweep) {
  std::string out;
  for (const auto& p : sweep.points) {
    nlohmann::ordered_json j;
    j["axis"] = to_string(sweep.axis);
    j["value"] = p.value;
    if (p.error.empty()) {
      j["report"] = report_json(p.report);
    } else {
      j["error"] = p.error;
    }
    out += j.dump();
    out += "\n";
  }
  for (const auto& fits : sweep.fits) {
    nlohmann::ordered_json j;
    j["fit"] = fits.metric;
    j["linear_r2"] = fits.linear.r2;
    j["linear_slope"] = fits.linear.slope;
    j["quadratic_r2"] = fits.quadratic.r2;
    j["quadratic_slope"] = fits.quadratic.slope;
    out += j.dump();
    out += "\n";
  }
  return out;
}

namespace {

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  f << content;
  if (!f) throw std::runtime_error("write failed: " + path);
}

}  // namespace

void emit(const SyncReport& report, EmitFormat format, const std::string& path) {
  write_file(path, format == EmitFormat::Csv ? to_csv(report) : to_jsonl(report));
}

void emit(const SweepResult& sweep, EmitFormat format, const std::string& path) {
  write_file(path, format == EmitFormat::Csv ? to_csv(sweep) : to_jsonl(sweep));
}

}  // namespace viewsync
