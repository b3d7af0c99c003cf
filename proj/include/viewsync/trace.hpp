#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "viewsync/message.hpp"
#include "viewsync/synchronizer.hpp"
#include "viewsync/time.hpp"
#include "viewsync/types.hpp"

namespace viewsync {

enum class RecordKind : std::uint8_t {
  Start,
  Crash,
  Wish,       // wishToAdvance invoked on a node
  Send,       // one message to one recipient; a multicast yields n of these
  Deliver,
  TimerFired,
  Propose,
};

const char* to_string(RecordKind k);

struct TraceRecord {
  Time at;
  RecordKind kind = RecordKind::Start;
  NodeId node = 0;  // acting node: sender for Send, receiver for Deliver

  // Send / Deliver
  Message msg;
  NodeId to = 0;
  Time sent_at;  // Deliver: when the message left the sender

  // TimerFired
  TimerId timer;

  // Propose
  View view = 0;
};

/// Static facts about a run that the analysis needs alongside the records.
struct TraceContext {
  NodeId n = 0;
  std::size_t f = 0;
  Time delta;
  Time gst;
  Time horizon;
  std::set<NodeId> corrupt;
  std::vector<NodeId> leader_perm;
  std::map<NodeId, Time> start_time;
  std::map<NodeId, View> initial_view;

  bool is_honest(NodeId id) const { return corrupt.count(id) == 0; }
  NodeId leader_of(View v) const { return leader_perm[v % leader_perm.size()]; }
  std::vector<NodeId> honest_nodes() const;
};

struct Trace {
  TraceContext context;
  std::vector<TraceRecord> records;
};

/// One line per record; stable field order.
std::string to_jsonl(const Trace& trace);
void write_jsonl(const Trace& trace, const std::string& path);

std::string to_string(const TraceRecord& r);

}  // namespace viewsync
