#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "viewsync/metrics.hpp"
#include "viewsync/simnet.hpp"
#include "viewsync/synchronizer.hpp"

namespace viewsync::testing {

inline std::size_t count_sends(const Actions& actions) {
  std::size_t n = 0;
  for (const auto& a : actions) {
    if (std::holds_alternative<SendAction>(a) || std::holds_alternative<MulticastAction>(a)) ++n;
  }
  return n;
}

inline std::vector<View> proposals(const Actions& actions) {
  std::vector<View> out;
  for (const auto& a : actions) {
    if (const auto* p = std::get_if<ProposeViewAction>(&a)) out.push_back(p->view);
  }
  return out;
}

inline std::vector<SendAction> sends(const Actions& actions) {
  std::vector<SendAction> out;
  for (const auto& a : actions) {
    if (const auto* s = std::get_if<SendAction>(&a)) out.push_back(*s);
  }
  return out;
}

inline std::vector<MulticastAction> multicasts(const Actions& actions) {
  std::vector<MulticastAction> out;
  for (const auto& a : actions) {
    if (const auto* m = std::get_if<MulticastAction>(&a)) out.push_back(*m);
  }
  return out;
}

inline std::size_t count_trace_sends(const Trace& trace) {
  std::size_t n = 0;
  for (const auto& r : trace.records) {
    if (r.kind == RecordKind::Send) ++n;
  }
  return n;
}

inline std::size_t count_honest_sends(const Trace& trace) {
  std::size_t n = 0;
  for (const auto& r : trace.records) {
    if (r.kind == RecordKind::Send && trace.context.is_honest(r.node)) ++n;
  }
  return n;
}

/// Propose times per (node, view).
inline std::map<NodeId, std::map<View, Time>> propose_times(const Trace& trace) {
  std::map<NodeId, std::map<View, Time>> out;
  for (const auto& r : trace.records) {
    if (r.kind == RecordKind::Propose) out[r.node][r.view] = r.at;
  }
  return out;
}

/// Brute-force re-derivation of synchronization intervals from timelines:
/// for every view, intersect all honest execution spans directly. Used as an
/// independent oracle for detect_sync_intervals.
inline std::vector<SyncInterval> brute_force_intervals(const Trace& trace, Duration c) {
  const auto timelines = build_timelines(trace);
  const auto honest = trace.context.honest_nodes();
  std::set<View> candidate_views;
  for (NodeId id : honest) {
    for (const auto& span : timelines.at(id)) candidate_views.insert(span.view);
  }
  std::vector<SyncInterval> out;
  for (View v : candidate_views) {
    std::optional<Time> begin, end;
    bool everyone = true;
    for (NodeId id : honest) {
      bool found = false;
      for (const auto& span : timelines.at(id)) {
        if (span.view != v || !span.end) continue;
        found = true;
        begin = begin ? std::max(*begin, span.start) : span.start;
        end = end ? std::min(*end, *span.end) : *span.end;
      }
      if (!found) everyone = false;
    }
    if (!everyone || !begin || !end) continue;
    if (*end < *begin || *end - *begin < c) continue;
    if (!trace.context.is_honest(trace.context.leader_of(v))) continue;
    SyncInterval si;
    si.index = out.size() + 1;
    si.view = v;
    si.begin = *begin;
    si.end = *end;
    si.leader = trace.context.leader_of(v);
    out.push_back(si);
  }
  return out;
}

}  // namespace viewsync::testing
