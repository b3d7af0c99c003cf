#include "viewsync/scenario.hpp"

#include <algorithm>
#include <cctype>

#include "viewsync/leader.hpp"

namespace viewsync {

const char* to_string(SyncKind k) {
  switch (k) {
    case SyncKind::Doubling: return "doubling";
    case SyncKind::Broadcast: return "broadcast";
    case SyncKind::Cogsworth: return "cogsworth";
  }
  return "?";
}

const char* to_string(LeaderMapKind k) {
  return k == LeaderMapKind::RoundRobin ? "roundrobin" : "random";
}

const char* to_string(DelayMode k) {
  switch (k) {
    case DelayMode::WorstCase: return "worstcase";
    case DelayMode::UniformRandom: return "uniform";
    case DelayMode::AdversaryChosen: return "adversarial";
  }
  return "?";
}

std::string to_string(const AdversarySpec& a) {
  switch (a.kind) {
    case AdversaryKind::None: return "none";
    case AdversaryKind::CrashLeaders:
      return "crash:leaders=" + std::to_string(a.count) + "@" + a.at.to_string();
    case AdversaryKind::CrashNode:
      return "crash:node=" + std::to_string(a.node) + "@" + a.at.to_string();
    case AdversaryKind::SilentNode:
      return "silent:node=" + std::to_string(a.node);
    case AdversaryKind::QcWithhold: return "qc-withhold";
    case AdversaryKind::TcAmplify:
      return "tc-amplify:node=" + std::to_string(a.node);
    case AdversaryKind::Scripted: return "scripted";
  }
  return "?";
}

std::optional<SyncKind> parse_sync_kind(const std::string& s) {
  if (s == "doubling") return SyncKind::Doubling;
  if (s == "broadcast") return SyncKind::Broadcast;
  if (s == "cogsworth") return SyncKind::Cogsworth;
  return std::nullopt;
}

std::optional<LeaderMapKind> parse_leader_map(const std::string& s) {
  if (s == "roundrobin") return LeaderMapKind::RoundRobin;
  if (s == "random") return LeaderMapKind::Random;
  return std::nullopt;
}

std::optional<DelayMode> parse_delay_mode(const std::string& s) {
  if (s == "worstcase") return DelayMode::WorstCase;
  if (s == "uniform") return DelayMode::UniformRandom;
  return std::nullopt;
}

namespace {

// Accepted forms:
//   none
//   crash:leader@T            crash leader(1) at time T
//   crash:leaders=K@T         crash the leaders of views 1..K at time T
//   crash:node=I@T
//   silent:node=I
//   qc-withhold
//   tc-amplify | tc-amplify:node=I
std::optional<AdversarySpec> parse_adversary_impl(const std::string& s) {
  AdversarySpec a;
  if (s == "none" || s.empty()) return a;
  if (s == "qc-withhold") {
    a.kind = AdversaryKind::QcWithhold;
    return a;
  }
  if (s == "tc-amplify") {
    a.kind = AdversaryKind::TcAmplify;
    a.node = 1;
    return a;
  }
  auto num_after = [](const std::string& text, const std::string& prefix,
                      std::string* rest) -> std::optional<std::uint64_t> {
    if (text.rfind(prefix, 0) != 0) return std::nullopt;
    std::size_t pos = prefix.size();
    std::uint64_t value = 0;
    bool any = false;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
      value = value * 10 + static_cast<std::uint64_t>(text[pos] - '0');
      any = true;
      ++pos;
    }
    if (!any) return std::nullopt;
    *rest = text.substr(pos);
    return value;
  };

  std::string rest;
  if (auto node = num_after(s, "tc-amplify:node=", &rest); node && rest.empty()) {
    a.kind = AdversaryKind::TcAmplify;
    a.node = static_cast<NodeId>(*node);
    return a;
  }
  if (auto node = num_after(s, "silent:node=", &rest); node && rest.empty()) {
    a.kind = AdversaryKind::SilentNode;
    a.node = static_cast<NodeId>(*node);
    return a;
  }

  auto time_tail = [](const std::string& tail) -> std::optional<Time> {
    if (tail.size() < 2 || tail[0] != '@') return std::nullopt;
    return Time::parse(tail.substr(1));
  };
  if (s.rfind("crash:leader@", 0) == 0) {
    auto t = time_tail(s.substr(std::string("crash:leader").size()));
    if (!t) return std::nullopt;
    a.kind = AdversaryKind::CrashLeaders;
    a.count = 1;
    a.at = *t;
    return a;
  }
  if (auto k = num_after(s, "crash:leaders=", &rest)) {
    auto t = time_tail(rest);
    if (!t || *k == 0) return std::nullopt;
    a.kind = AdversaryKind::CrashLeaders;
    a.count = static_cast<unsigned>(*k);
    a.at = *t;
    return a;
  }
  if (auto node = num_after(s, "crash:node=", &rest)) {
    auto t = time_tail(rest);
    if (!t) return std::nullopt;
    a.kind = AdversaryKind::CrashNode;
    a.node = static_cast<NodeId>(*node);
    a.at = *t;
    return a;
  }
  return std::nullopt;
}

}  // namespace

std::optional<AdversarySpec> parse_adversary(const std::string& s) {
  return parse_adversary_impl(s);
}

std::vector<NodeId> corrupt_nodes(const ScenarioConfig& config) {
  const auto rr = LeaderSchedule::round_robin(config.n);
  std::vector<NodeId> out;
  switch (config.adversary.kind) {
    case AdversaryKind::None:
      break;
    case AdversaryKind::CrashLeaders:
      for (unsigned k = 1; k <= config.adversary.count; ++k) {
        out.push_back(rr.leader_of(k));
      }
      break;
    case AdversaryKind::CrashNode:
    case AdversaryKind::SilentNode:
    case AdversaryKind::TcAmplify:
      out.push_back(config.adversary.node);
      break;
    case AdversaryKind::QcWithhold:
      out.push_back(rr.leader_of(1));
      break;
    case AdversaryKind::Scripted:
      out = config.adversary.scripted_nodes;
      break;
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

void validate(const ScenarioConfig& c) {
  const Time zero;
  if (c.n < 1) throw ConfigError("n must be at least 1");
  if (c.n < 3 * c.f + 1) {
    throw ConfigError("n must satisfy n >= 3f+1 (got n=" + std::to_string(c.n) +
                      ", f=" + std::to_string(c.f) + ")");
  }
  if (c.delta <= zero) throw ConfigError("delta must be positive");
  if (c.gst < zero) throw ConfigError("gst must be non-negative");
  if (c.min_overlap < zero) throw ConfigError("min-overlap must be non-negative");
  if (c.horizon <= c.gst) throw ConfigError("horizon must exceed gst");
  if (c.wish_interval <= zero) throw ConfigError("wish-interval must be positive");

  switch (c.synchronizer) {
    case SyncKind::Doubling:
      if (c.beta <= zero) throw ConfigError("beta must be positive");
      if (c.wish_interval > c.beta) {
        throw ConfigError("doubling requires wish-interval <= beta");
      }
      break;
    case SyncKind::Broadcast:
      if (c.wish_interval < c.delta.scaled(2) + c.min_overlap) {
        throw ConfigError("broadcast requires wish-interval >= 2*delta + min-overlap");
      }
      break;
    case SyncKind::Cogsworth:
      if (c.wish_interval < c.delta.scaled(4) + c.min_overlap) {
        throw ConfigError("cogsworth requires wish-interval >= 4*delta + min-overlap");
      }
      break;
  }

  if (c.start_view_min > c.start_view_max) {
    throw ConfigError("start-view-min must not exceed start-view-max");
  }
  if (c.synchronizer != SyncKind::Doubling && c.start_view_max != 0) {
    throw ConfigError("staggered start views apply to the doubling synchronizer only");
  }

  const auto corrupt = corrupt_nodes(c);
  if (corrupt.size() > c.f) {
    throw ConfigError("adversary corrupts " + std::to_string(corrupt.size()) +
                      " nodes but f=" + std::to_string(c.f));
  }
  for (NodeId id : corrupt) {
    if (id < 1 || id > c.n) throw ConfigError("adversary targets node outside [1, n]");
  }
  const bool leader_targeted = c.adversary.kind == AdversaryKind::CrashLeaders ||
                               c.adversary.kind == AdversaryKind::QcWithhold;
  if (leader_targeted && c.leader_map != LeaderMapKind::RoundRobin) {
    // The corrupt set is fixed before a random permutation is drawn, so an
    // adversary defined by leader position cannot be combined with one.
    throw ConfigError("leader-targeted adversaries require leader-map=roundrobin");
  }
  if (c.adversary.kind == AdversaryKind::CrashLeaders ||
      c.adversary.kind == AdversaryKind::CrashNode) {
    if (c.adversary.at < zero) throw ConfigError("crash time must be non-negative");
  }
  if (c.delay_mode == DelayMode::AdversaryChosen && !c.delay_hook) {
    throw ConfigError("adversary-chosen delays need a delay hook");
  }
}

std::vector<std::pair<std::string, std::string>> config_fields(const ScenarioConfig& c) {
  return {
      {"sync", to_string(c.synchronizer)},
      {"n", std::to_string(c.n)},
      {"f", std::to_string(c.f)},
      {"delta", c.delta.to_string()},
      {"gst", c.gst.to_string()},
      {"wish_interval", c.wish_interval.to_string()},
      {"beta", c.beta.to_string()},
      {"min_overlap", c.min_overlap.to_string()},
      {"horizon", c.horizon.to_string()},
      {"seed", std::to_string(c.seed)},
      {"leader_map", to_string(c.leader_map)},
      {"adversary", to_string(c.adversary)},
      {"delay_mode", to_string(c.delay_mode)},
      {"start_view_min", std::to_string(c.start_view_min)},
      {"start_view_max", std::to_string(c.start_view_max)},
  };
}

namespace {

ScenarioConfig base_config(SyncKind kind) {
  ScenarioConfig c;
  c.synchronizer = kind;
  c.n = 4;
  c.f = 1;
  c.delta = Time::units(1);
  c.gst = Time::units(0);
  c.min_overlap = Time::parse("0.5").value();
  c.horizon = Time::units(200);
  c.seed = 7;
  switch (kind) {
    case SyncKind::Doubling:
      c.beta = Time::units(10);
      c.wish_interval = Time::units(10);
      c.min_overlap = Time::units(1);
      c.horizon = Time::units(20000);
      break;
    case SyncKind::Broadcast:
      c.wish_interval = Time::parse("2.5").value();
      break;
    case SyncKind::Cogsworth:
      c.wish_interval = Time::parse("4.5").value();
      break;
  }
  return c;
}

std::vector<Preset> build_presets() {
  std::vector<Preset> out;

  {
    Preset p{"cogsworth-faultless", "cogsworth, n=4, no failures: 20 messages and one round trip per sync",
             base_config(SyncKind::Cogsworth)};
    out.push_back(p);
  }
  {
    Preset p{"cogsworth-benign", "cogsworth, n=16, one crashed leader from the start",
             base_config(SyncKind::Cogsworth)};
    p.config.n = 16;
    p.config.f = 5;
    p.config.adversary.kind = AdversaryKind::CrashLeaders;
    p.config.adversary.count = 1;
    out.push_back(p);
  }
  {
    Preset p{"cogsworth-qc-withhold", "cogsworth, n=4, leader(1) reveals its QC to one node only",
             base_config(SyncKind::Cogsworth)};
    p.config.adversary.kind = AdversaryKind::QcWithhold;
    out.push_back(p);
  }
  {
    Preset p{"cogsworth-tc-amplify", "cogsworth, n=4, a corrupt node forwards TCs to the next f+1 leaders",
             base_config(SyncKind::Cogsworth)};
    p.config.adversary.kind = AdversaryKind::TcAmplify;
    p.config.adversary.node = 1;
    out.push_back(p);
  }
  {
    Preset p{"broadcast-faultless", "broadcast, n=4, no failures: n^2 messages per sync",
             base_config(SyncKind::Broadcast)};
    out.push_back(p);
  }
  {
    Preset p{"doubling-faultless", "view doubling, n=4: 0 messages ever", base_config(SyncKind::Doubling)};
    out.push_back(p);
  }
  {
    Preset p{"doubling-gap", "view doubling with start views 0..4: first common view is 4",
             base_config(SyncKind::Doubling)};
    p.config.beta = Time::units(1);
    p.config.wish_interval = Time::units(1);
    p.config.min_overlap = Time::units(1);
    p.config.start_view_min = 0;
    p.config.start_view_max = 4;
    p.config.horizon = Time::units(130);
    out.push_back(p);
  }

  // Complexity-table sweep bases; pair with `sweep --axis n` or `--axis t`.
  {
    Preset p{"table1-doubling", "sweep base: doubling communication stays 0 as n grows",
             base_config(SyncKind::Doubling)};
    out.push_back(p);
  }
  {
    Preset p{"table1-broadcast", "sweep base: broadcast communication grows with n^2",
             base_config(SyncKind::Broadcast)};
    out.push_back(p);
  }
  {
    Preset p{"table1-cogsworth-optimistic", "sweep base: faultless cogsworth communication grows with n",
             base_config(SyncKind::Cogsworth)};
    out.push_back(p);
  }
  {
    Preset p{"table1-cogsworth-benign", "sweep base: cogsworth with crashed leaders; sweep t for linear cost",
             base_config(SyncKind::Cogsworth)};
    p.config.n = 16;
    p.config.f = 5;
    p.config.adversary.kind = AdversaryKind::CrashLeaders;
    p.config.adversary.count = 1;
    out.push_back(p);
  }
  {
    Preset p{"table1-cogsworth-byzantine", "sweep base: cogsworth with a TC-amplifying node; quadratic cost",
             base_config(SyncKind::Cogsworth)};
    p.config.adversary.kind = AdversaryKind::TcAmplify;
    p.config.adversary.node = 1;
    p.config.horizon = Time::units(400);
    out.push_back(p);
  }

  return out;
}

}  // namespace

const std::vector<Preset>& presets() {
  static const std::vector<Preset> all = build_presets();
  return all;
}

std::optional<ScenarioConfig> find_preset(const std::string& name) {
  for (const auto& p : presets()) {
    if (p.name == name) return p.config;
  }
  return std::nullopt;
}

}  // namespace viewsync
