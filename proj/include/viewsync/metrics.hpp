#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "viewsync/trace.hpp"

namespace viewsync {

/// One closed stretch of a node's execution: it held `view` from `start`
/// until `end` (the entry into its next view). The last, unterminated view of
/// a run has no end and is excluded from interval detection.
struct ViewSpan {
  View view = 0;
  Time start;
  std::optional<Time> end;
};

/// Per-node view history, seeded with the node's initial view at its start
/// time and extended by its propose records.
std::map<NodeId, std::vector<ViewSpan>> build_timelines(const Trace& trace);

/// A time interval during which every honest node executed `view`, the
/// overlap lasted at least the required length, and the view's leader is
/// honest.
struct SyncInterval {
  std::size_t index = 0;  // 1-based, in time order
  View view = 0;
  Time begin;             // latest honest entry into the view
  Time end;               // earliest honest exit
  NodeId leader = 0;
};

std::vector<SyncInterval> detect_sync_intervals(const Trace& trace, Duration min_overlap);

struct LatencyStats {
  Time first;   // begin of the first interval minus GST
  double mean;  // mean of the first gap and the gaps between intervals
};

/// Empty when the trace contains no synchronization intervals. Both
/// estimators ignore a leading interval that already held when the last
/// honest node started (the given initial view, not a reached one).
std::optional<LatencyStats> measure_latency(const Trace& trace,
                                            const std::vector<SyncInterval>& intervals);

struct CommunicationStats {
  std::uint64_t first = 0;    // honest sends before each node entered the first synced view
  double mean_per_sync = 0;   // (first + between-interval sends) / interval count
  std::uint64_t counted = 0;  // numerator of the mean
  std::uint64_t tail = 0;     // honest sends at or after the last synced entry
  std::uint64_t total_honest_sends = 0;
};

std::optional<CommunicationStats> measure_communication(
    const Trace& trace, const std::vector<SyncInterval>& intervals);

struct AuditResult {
  bool ok = true;
  std::string detail;  // first violation, when not ok
};

/// Checks that every honest proposeView(v') is justified: some honest node
/// wished at least v' - v times while executing some earlier view v.
AuditResult audit_validity(const Trace& trace);

/// Honest view-entry times (initial views excluded), for bound checks.
struct ViewEntries {
  Time first;
  Time last;
  std::vector<std::pair<NodeId, Time>> entries;
};
std::map<View, ViewEntries> honest_view_entries(const Trace& trace);

/// Earliest time the node held a view >= v, if it ever did.
std::optional<Time> time_reached(const std::vector<ViewSpan>& timeline, View v);

/// Mean number of views tried until one with an honest leader comes up, with
/// leaders drawn independently per view and nodes 1..f corrupt. Converges on
/// n / (n - f).
double mean_views_to_honest_leader(NodeId n, std::size_t f, int trials, std::uint64_t seed);

}  // namespace viewsync
