#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "viewsync/metrics.hpp"
#include "viewsync/report.hpp"
#include "viewsync/simnet.hpp"

namespace {

using namespace viewsync;

// Scenario options arrive as text from three sources with the precedence
// command line > config file > preset. Parsing to typed values happens once,
// after the winner is known.
struct RawOptions {
  std::string preset;
  std::string sync;
  std::string n;
  std::string f;
  std::string delta;
  std::string gst;
  std::string wish_interval;
  std::string beta;
  std::string min_overlap;
  std::string horizon;
  std::string seed;
  std::string leader_map;
  std::string adversary;
  std::string delay;
  std::string start_view_min;
  std::string start_view_max;
  std::string config_path;
};

// Flat key=value lines; '#' starts a comment; blank lines ignored.
std::map<std::string, std::string> load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file: " + path);
  std::map<std::string, std::string> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto strip = [](std::string s) {
      const auto a = s.find_first_not_of(" \t\r");
      if (a == std::string::npos) return std::string();
      const auto b = s.find_last_not_of(" \t\r");
      return s.substr(a, b - a + 1);
    };
    line = strip(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key=value");
    }
    out[strip(line.substr(0, eq))] = strip(line.substr(eq + 1));
  }
  return out;
}

class OptionResolver {
 public:
  OptionResolver(const CLI::App* cmd, std::map<std::string, std::string> file)
      : cmd_(cmd), file_(std::move(file)) {}

  /// The effective textual value for an option, if the user supplied one.
  std::optional<std::string> get(const char* flag, const std::string& flag_value,
                                 const char* key) {
    seen_.insert(key);
    if (cmd_->count(flag) > 0) return flag_value;
    auto it = file_.find(key);
    if (it != file_.end()) return it->second;
    return std::nullopt;
  }

  void reject_unknown_keys() const {
    for (const auto& [key, value] : file_) {
      if (!seen_.count(key)) throw ConfigError("unknown config key: " + key);
    }
  }

 private:
  const CLI::App* cmd_;
  std::map<std::string, std::string> file_;
  std::set<std::string> seen_;
};

Time time_of(const std::string& text, const char* name) {
  auto t = Time::parse(text);
  if (!t) throw ConfigError(std::string(name) + ": not a decimal time value: " + text);
  return *t;
}

std::uint64_t u64_of(const std::string& text, const char* name) {
  try {
    std::size_t used = 0;
    const std::uint64_t value = std::stoull(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return value;
  } catch (const std::exception&) {
    throw ConfigError(std::string(name) + ": not a non-negative integer: " + text);
  }
}

ScenarioConfig build_config(const RawOptions& raw, const CLI::App* cmd) {
  OptionResolver opts(cmd, raw.config_path.empty()
                               ? std::map<std::string, std::string>{}
                               : load_config_file(raw.config_path));

  ScenarioConfig c;
  bool have_preset = false;
  if (auto name = opts.get("--preset", raw.preset, "preset")) {
    auto base = find_preset(*name);
    if (!base) throw ConfigError("unknown preset: " + *name);
    c = *base;
    have_preset = true;
  }

  if (auto v = opts.get("--sync", raw.sync, "sync")) {
    auto kind = parse_sync_kind(*v);
    if (!kind) throw ConfigError("unknown synchronizer: " + *v);
    c.synchronizer = *kind;
    if (!have_preset) {
      // Baseline timing knobs per kind; explicit values below still win.
      switch (c.synchronizer) {
        case SyncKind::Doubling:
          c.beta = Time::units(10);
          c.wish_interval = Time::units(10);
          break;
        case SyncKind::Broadcast:
          c.wish_interval = Time::parse("2.5").value();
          break;
        case SyncKind::Cogsworth:
          c.wish_interval = Time::parse("4.5").value();
          break;
      }
    }
  }
  if (auto v = opts.get("--n", raw.n, "n")) c.n = static_cast<NodeId>(u64_of(*v, "n"));
  if (auto v = opts.get("--f", raw.f, "f")) c.f = u64_of(*v, "f");
  if (auto v = opts.get("--delta", raw.delta, "delta")) c.delta = time_of(*v, "delta");
  if (auto v = opts.get("--gst", raw.gst, "gst")) c.gst = time_of(*v, "gst");
  if (auto v = opts.get("--wish-interval", raw.wish_interval, "wish-interval")) {
    c.wish_interval = time_of(*v, "wish-interval");
  }
  if (auto v = opts.get("--beta", raw.beta, "beta")) c.beta = time_of(*v, "beta");
  if (auto v = opts.get("--min-overlap", raw.min_overlap, "min-overlap")) {
    c.min_overlap = time_of(*v, "min-overlap");
  }
  if (auto v = opts.get("--horizon", raw.horizon, "horizon")) c.horizon = time_of(*v, "horizon");
  if (auto v = opts.get("--seed", raw.seed, "seed")) c.seed = u64_of(*v, "seed");
  if (auto v = opts.get("--leader-map", raw.leader_map, "leader-map")) {
    auto map = parse_leader_map(*v);
    if (!map) throw ConfigError("unknown leader map: " + *v);
    c.leader_map = *map;
  }
  if (auto v = opts.get("--adversary", raw.adversary, "adversary")) {
    auto adv = parse_adversary(*v);
    if (!adv) throw ConfigError("cannot parse adversary spec: " + *v);
    c.adversary = *adv;
  }
  if (auto v = opts.get("--delay", raw.delay, "delay")) {
    auto mode = parse_delay_mode(*v);
    if (!mode) throw ConfigError("unknown delay mode: " + *v);
    c.delay_mode = *mode;
  }
  if (auto v = opts.get("--start-view-min", raw.start_view_min, "start-view-min")) {
    c.start_view_min = u64_of(*v, "start-view-min");
  }
  if (auto v = opts.get("--start-view-max", raw.start_view_max, "start-view-max")) {
    c.start_view_max = u64_of(*v, "start-view-max");
  }
  opts.reject_unknown_keys();
  validate(c);
  return c;
}

void add_scenario_flags(CLI::App* cmd, RawOptions& raw) {
  cmd->add_option("--preset", raw.preset, "start from a named preset (see `viewsync presets`)");
  cmd->add_option("--sync", raw.sync, "synchronizer: doubling | broadcast | cogsworth");
  cmd->add_option("--n", raw.n, "number of nodes");
  cmd->add_option("--f", raw.f, "fault budget (requires n >= 3f+1)");
  cmd->add_option("--delta", raw.delta, "post-GST delivery bound (time units)");
  cmd->add_option("--gst", raw.gst, "global stabilization time");
  cmd->add_option("--wish-interval", raw.wish_interval, "spacing of wishToAdvance calls");
  cmd->add_option("--beta", raw.beta, "doubling: duration of the first view");
  cmd->add_option("--min-overlap", raw.min_overlap, "required common-view length c");
  cmd->add_option("--horizon", raw.horizon, "simulated time limit");
  cmd->add_option("--seed", raw.seed, "random seed");
  cmd->add_option("--leader-map", raw.leader_map, "roundrobin | random");
  cmd->add_option("--adversary", raw.adversary,
                  "none | crash:leader@T | crash:leaders=K@T | crash:node=I@T | "
                  "silent:node=I | qc-withhold | tc-amplify[:node=I]");
  cmd->add_option("--delay", raw.delay, "worstcase | uniform");
  cmd->add_option("--start-view-min", raw.start_view_min, "doubling: lowest start view");
  cmd->add_option("--start-view-max", raw.start_view_max, "doubling: highest start view");
  cmd->add_option("--config", raw.config_path,
                  "flat key=value config file; command-line flags win");
}

int cmd_run(const RawOptions& raw, const CLI::App* cmd, const std::string& out,
            const std::string& format_name, const std::string& trace_out) {
  const ScenarioConfig config = build_config(raw, cmd);
  auto format = parse_format(format_name);
  if (!format) throw ConfigError("unknown output format: " + format_name);

  const Trace trace = run_scenario_trace(config);
  const SyncReport report = analyze(trace, config);
  if (!trace_out.empty()) write_jsonl(trace, trace_out);
  if (!out.empty()) {
    emit(report, *format, out);
  } else {
    std::cout << (*format == EmitFormat::Csv ? to_csv(report) : to_jsonl(report));
  }
  if (!report.audit.ok) {
    std::cerr << "validity audit failed: " << report.audit.detail << "\n";
    return 1;
  }
  return 0;
}

int cmd_sweep(const RawOptions& raw, const CLI::App* cmd, const std::string& axis_name,
              const std::vector<std::int64_t>& values, const std::string& out,
              const std::string& format_name) {
  const ScenarioConfig base = build_config(raw, cmd);
  auto axis = parse_axis(axis_name);
  if (!axis) throw ConfigError("unknown sweep axis: " + axis_name);
  if (values.empty()) throw ConfigError("sweep needs at least one --values entry");
  auto format = parse_format(format_name);
  if (!format) throw ConfigError("unknown output format: " + format_name);

  const SweepResult sweep = run_sweep(base, *axis, values);
  if (!out.empty()) {
    emit(sweep, *format, out);
  } else {
    std::cout << (*format == EmitFormat::Csv ? to_csv(sweep) : to_jsonl(sweep));
  }
  for (const auto& fits : sweep.fits) {
    std::printf("fit %-14s linear R2=%.6f slope=%.4f | quadratic R2=%.6f slope=%.6f\n",
                fits.metric.c_str(), fits.linear.r2, fits.linear.slope,
                fits.quadratic.r2, fits.quadratic.slope);
  }
  return 0;
}

int cmd_presets() {
  for (const auto& p : presets()) {
    std::printf("%-28s %s\n", p.name.c_str(), p.summary.c_str());
  }
  return 0;
}

int cmd_geometric(std::uint64_t n, std::uint64_t f, int trials, std::uint64_t seed) {
  if (n < 1 || f >= n) throw ConfigError("geometric experiment needs 0 <= f < n");
  const double mean = mean_views_to_honest_leader(static_cast<NodeId>(n), f, trials, seed);
  const double expected = static_cast<double>(n) / static_cast<double>(n - f);
  std::printf("n=%llu f=%llu trials=%d mean_views_to_honest_leader=%.6f expected=%.6f\n",
              static_cast<unsigned long long>(n), static_cast<unsigned long long>(f),
              trials, mean, expected);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Byzantine view-synchronization simulator and analyzer"};
  app.require_subcommand(1);

  RawOptions run_raw;
  std::string run_out, run_format = "csv", run_trace;
  CLI::App* run = app.add_subcommand("run", "simulate one scenario and report metrics");
  add_scenario_flags(run, run_raw);
  run->add_option("--out", run_out, "write the report here instead of stdout");
  run->add_option("--format", run_format, "csv | jsonl");
  run->add_option("--trace", run_trace, "also dump the full trace as JSONL");

  RawOptions sweep_raw;
  std::string sweep_axis = "n", sweep_out, sweep_format = "csv";
  std::vector<std::int64_t> sweep_values;
  CLI::App* sweep = app.add_subcommand("sweep", "run a scenario across an axis and fit growth");
  add_scenario_flags(sweep, sweep_raw);
  sweep->add_option("--axis", sweep_axis, "n | t | seed");
  sweep->add_option("--values", sweep_values, "axis values, comma separated")->delimiter(',');
  sweep->add_option("--out", sweep_out, "write the table here instead of stdout");
  sweep->add_option("--format", sweep_format, "csv | jsonl");

  CLI::App* list = app.add_subcommand("presets", "list named scenarios");

  std::uint64_t geo_n = 100, geo_f = 33, geo_seed = 1;
  int geo_trials = 10000;
  CLI::App* geo = app.add_subcommand(
      "geometric", "measure mean views until an honest leader under random allocation");
  geo->add_option("--n", geo_n, "number of nodes");
  geo->add_option("--f", geo_f, "corrupt nodes");
  geo->add_option("--trials", geo_trials, "sample count");
  geo->add_option("--seed", geo_seed, "random seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(run_raw, run, run_out, run_format, run_trace);
    if (sweep->parsed()) return cmd_sweep(sweep_raw, sweep, sweep_axis, sweep_values,
                                          sweep_out, sweep_format);
    if (list->parsed()) return cmd_presets();
    if (geo->parsed()) return cmd_geometric(geo_n, geo_f, geo_trials, geo_seed);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
