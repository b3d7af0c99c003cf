#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "viewsync/synchronizer.hpp"
#include "viewsync/time.hpp"
#include "viewsync/types.hpp"

namespace viewsync {

enum class SyncKind : std::uint8_t { Doubling, Broadcast, Cogsworth };
enum class LeaderMapKind : std::uint8_t { RoundRobin, Random };

/// How delivery times are picked within the legal window (s, max(s,GST)+d].
/// AdversaryChosen delegates to a caller-supplied hook (code only, not CLI);
/// whatever it returns is clamped into the window.
enum class DelayMode : std::uint8_t { WorstCase, UniformRandom, AdversaryChosen };

/// (message, recipient, send time, earliest, latest) -> delivery time.
using DelayHook = std::function<Time(const Message&, NodeId, Time, Time, Time)>;

enum class AdversaryKind : std::uint8_t {
  None,
  CrashLeaders,   // crash the leaders of views 1..count at time `at`
  CrashNode,      // crash one explicit node at time `at`
  SilentNode,     // node never sends anything
  QcWithhold,     // leader(1) sends its QCs to a single victim only
  TcAmplify,      // corrupt node forwards every TC to the f+1 next leaders
  Scripted,       // custom machine injected in code (tests)
};

struct AdversarySpec {
  AdversaryKind kind = AdversaryKind::None;
  unsigned count = 1;   // CrashLeaders: how many consecutive leaders
  NodeId node = 1;      // CrashNode / SilentNode / TcAmplify target
  Time at;              // crash time

  // Scripted adversaries replace a corrupt node's machine entirely.
  std::function<std::unique_ptr<Synchronizer>(NodeId)> scripted_machine;
  std::vector<NodeId> scripted_nodes;
};

const char* to_string(SyncKind k);
const char* to_string(LeaderMapKind k);
const char* to_string(DelayMode k);
std::string to_string(const AdversarySpec& a);

std::optional<SyncKind> parse_sync_kind(const std::string& s);
std::optional<LeaderMapKind> parse_leader_map(const std::string& s);
std::optional<DelayMode> parse_delay_mode(const std::string& s);
std::optional<AdversarySpec> parse_adversary(const std::string& s);

struct ScenarioConfig {
  SyncKind synchronizer = SyncKind::Cogsworth;
  NodeId n = 4;
  std::size_t f = 1;
  Time delta = Time::units(1);
  Time gst = Time::units(0);
  Time wish_interval = Time::parse("4.5").value();
  Time beta = Time::units(10);       // doubling: first view duration
  Time min_overlap = Time::units(0); // c: required common-view length
  Time horizon = Time::units(200);
  std::uint64_t seed = 1;
  LeaderMapKind leader_map = LeaderMapKind::RoundRobin;
  AdversarySpec adversary;
  DelayMode delay_mode = DelayMode::WorstCase;
  DelayHook delay_hook;  // required iff delay_mode is AdversaryChosen
  // Doubling start staggering: node 1 holds view start_view_min at time 0,
  // node n holds start_view_max, the rest are spread evenly between.
  View start_view_min = 0;
  View start_view_max = 0;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Throws ConfigError naming the violated constraint.
void validate(const ScenarioConfig& config);

/// The corrupt set implied by the adversary (empty for None).
std::vector<NodeId> corrupt_nodes(const ScenarioConfig& config);

/// Stable key/value view of a config, used for CSV columns and echoes.
std::vector<std::pair<std::string, std::string>> config_fields(const ScenarioConfig& config);

struct Preset {
  std::string name;
  std::string summary;
  ScenarioConfig config;
};

const std::vector<Preset>& presets();
std::optional<ScenarioConfig> find_preset(const std::string& name);

}  // namespace viewsync
