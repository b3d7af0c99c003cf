#pragma once

#include "viewsync/scenario.hpp"
#include "viewsync/trace.hpp"

namespace viewsync {

/// Runs one deterministic simulation of the configured scenario. The trace is
/// a pure function of the config (including its seed).
///
/// Delivery: a message sent at s arrives at d with s < d <= max(s, GST) +
/// delta. Worst-case mode pins d to the bound; uniform mode draws d from the
/// legal range. Events at the same instant are ordered crash, start, deliver,
/// timer, wish — so a certificate arriving exactly at a retry deadline counts
/// as received in time — and by insertion order within a class.
Trace run_scenario_trace(const ScenarioConfig& config);

/// Trace well-formedness checks used by tests: delivery bounds, no honest
/// spoofing, per-node monotone proposals, no activity before a node's start.
/// Returns an empty string when clean, else a description of the first
/// violation.
std::string check_trace_invariants(const Trace& trace);

}  // namespace viewsync
