#include "viewsync/metrics.hpp"

#include <algorithm>

#include "viewsync/rng.hpp"

namespace viewsync {

std::map<NodeId, std::vector<ViewSpan>> build_timelines(const Trace& trace) {
  std::map<NodeId, std::vector<ViewSpan>> out;
  for (NodeId id = 1; id <= trace.context.n; ++id) {
    auto v0 = trace.context.initial_view.find(id);
    auto t0 = trace.context.start_time.find(id);
    ViewSpan first;
    first.view = v0 == trace.context.initial_view.end() ? 0 : v0->second;
    first.start = t0 == trace.context.start_time.end() ? Time{} : t0->second;
    out[id].push_back(first);
  }
  for (const auto& r : trace.records) {
    if (r.kind != RecordKind::Propose) continue;
    auto& spans = out[r.node];
    spans.back().end = r.at;
    spans.push_back(ViewSpan{r.view, r.at, std::nullopt});
  }
  return out;
}

std::vector<SyncInterval> detect_sync_intervals(const Trace& trace, Duration min_overlap) {
  const auto honest = trace.context.honest_nodes();
  if (honest.empty()) return {};
  const auto timelines = build_timelines(trace);

  // Closed spans per honest node, keyed by view.
  std::map<View, std::map<NodeId, const ViewSpan*>> by_view;
  for (NodeId id : honest) {
    for (const auto& span : timelines.at(id)) {
      if (span.end) by_view[span.view][id] = &span;
    }
  }

  std::vector<SyncInterval> out;
  for (const auto& [view, spans] : by_view) {
    if (spans.size() != honest.size()) continue;  // some honest node skipped it
    Time begin = spans.begin()->second->start;
    Time end = *spans.begin()->second->end;
    for (const auto& [id, span] : spans) {
      begin = std::max(begin, span->start);
      end = std::min(end, *span->end);
    }
    if (end < begin || end - begin < min_overlap) continue;
    const NodeId leader = trace.context.leader_of(view);
    if (!trace.context.is_honest(leader)) continue;
    SyncInterval si;
    si.index = out.size() + 1;
    si.view = view;
    si.begin = begin;
    si.end = end;
    si.leader = leader;
    out.push_back(si);
  }
  return out;
}

namespace {

// A leading interval that already held when the last honest node started was
// never reached by the synchronizer; latency and message cost are about the
// synchronizations the protocol brings about, so it is not measured.
std::vector<SyncInterval> measured_intervals(const Trace& trace,
                                             std::vector<SyncInterval> intervals) {
  Time last_start;
  for (NodeId id : trace.context.honest_nodes()) {
    auto it = trace.context.start_time.find(id);
    if (it != trace.context.start_time.end()) last_start = std::max(last_start, it->second);
  }
  while (!intervals.empty() && intervals.front().begin <= last_start) {
    intervals.erase(intervals.begin());
  }
  return intervals;
}

}  // namespace

std::optional<LatencyStats> measure_latency(const Trace& trace,
                                            const std::vector<SyncInterval>& detected) {
  const auto intervals = measured_intervals(trace, detected);
  if (intervals.empty()) return std::nullopt;
  LatencyStats stats;
  stats.first = intervals.front().begin - trace.context.gst;
  double sum = stats.first.to_double();
  for (std::size_t k = 1; k < intervals.size(); ++k) {
    sum += (intervals[k].begin - intervals[k - 1].begin).to_double();
  }
  stats.mean = sum / static_cast<double>(intervals.size());
  return stats;
}

std::optional<CommunicationStats> measure_communication(
    const Trace& trace, const std::vector<SyncInterval>& detected) {
  const auto intervals = measured_intervals(trace, detected);
  if (intervals.empty()) return std::nullopt;
  const auto timelines = build_timelines(trace);
  const auto honest = trace.context.honest_nodes();

  // Per honest node, its entry times into each synchronized view. Interval
  // views are executed by every honest node, so the lookup always succeeds.
  std::map<NodeId, std::vector<Time>> cutoffs;
  for (NodeId id : honest) {
    const auto& spans = timelines.at(id);
    for (const auto& si : intervals) {
      auto it = std::find_if(spans.begin(), spans.end(),
                             [&](const ViewSpan& s) { return s.view == si.view; });
      cutoffs[id].push_back(it->start);
    }
  }

  CommunicationStats stats;
  for (const auto& r : trace.records) {
    if (r.kind != RecordKind::Send) continue;
    if (!trace.context.is_honest(r.node)) continue;
    ++stats.total_honest_sends;
    const auto& cuts = cutoffs[r.node];
    if (r.at < cuts.front()) {
      ++stats.first;
    } else if (r.at < cuts.back()) {
      ++stats.counted;  // between two synchronized entries
    } else {
      ++stats.tail;
    }
  }
  stats.counted += stats.first;
  stats.mean_per_sync = static_cast<double>(stats.counted) /
                        static_cast<double>(intervals.size());
  return stats;
}

AuditResult audit_validity(const Trace& trace) {
  const auto timelines = build_timelines(trace);

  // For each honest node: its wishes as (time, view it was executing).
  struct WishPoint {
    Time at;
    View during;
  };
  std::map<NodeId, std::vector<WishPoint>> wishes;
  for (const auto& r : trace.records) {
    if (r.kind != RecordKind::Wish || !trace.context.is_honest(r.node)) continue;
    const auto& spans = timelines.at(r.node);
    // Spans are half-open [start, end): the span whose start is the last one
    // not after the wish.
    View during = spans.front().view;
    for (const auto& span : spans) {
      if (span.start <= r.at) during = span.view;
    }
    wishes[r.node].push_back({r.at, during});
  }

  for (const auto& r : trace.records) {
    if (r.kind != RecordKind::Propose || !trace.context.is_honest(r.node)) continue;
    const View target = r.view;
    bool justified = false;
    for (const auto& [id, points] : wishes) {
      std::map<View, std::uint64_t> per_view;
      for (const auto& p : points) {
        if (p.at < r.at && p.during < target) ++per_view[p.during];
      }
      for (const auto& [v, count] : per_view) {
        if (count >= target - v) {
          justified = true;
          break;
        }
      }
      if (justified) break;
    }
    if (!justified) {
      return {false, "proposeView(" + std::to_string(target) + ") at node " +
                         std::to_string(r.node) + ", t=" + r.at.to_string() +
                         " has no justifying honest wishes"};
    }
  }
  return {true, ""};
}

std::map<View, ViewEntries> honest_view_entries(const Trace& trace) {
  std::map<View, ViewEntries> out;
  for (const auto& r : trace.records) {
    if (r.kind != RecordKind::Propose || !trace.context.is_honest(r.node)) continue;
    auto [it, fresh] = out.try_emplace(r.view);
    if (fresh) {
      it->second.first = r.at;
      it->second.last = r.at;
    } else {
      it->second.first = std::min(it->second.first, r.at);
      it->second.last = std::max(it->second.last, r.at);
    }
    it->second.entries.emplace_back(r.node, r.at);
  }
  return out;
}

std::optional<Time> time_reached(const std::vector<ViewSpan>& timeline, View v) {
  for (const auto& span : timeline) {
    if (span.view >= v) return span.start;
  }
  return std::nullopt;
}

double mean_views_to_honest_leader(NodeId n, std::size_t f, int trials, std::uint64_t seed) {
  Rng rng(seed);
  std::uint64_t total = 0;
  for (int t = 0; t < trials; ++t) {
    std::uint64_t tried = 0;
    for (;;) {
      ++tried;
      const NodeId leader = static_cast<NodeId>(rng.below(n)) + 1;
      if (leader > f) break;  // nodes 1..f are the corrupt ones
    }
    total += tried;
  }
  return static_cast<double>(total) / static_cast<double>(trials);
}

}  // namespace viewsync
