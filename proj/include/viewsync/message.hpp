#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "viewsync/types.hpp"

namespace viewsync {

enum class CertKind : std::uint8_t { TC, QC };

/// Ideal threshold certificate: stands in for an aggregate signature of the
/// listed signers. Validity is checked against recorded contributions, not
/// real crypto; a certificate counts as one message payload regardless of
/// signer-set size.
struct Certificate {
  CertKind kind = CertKind::TC;
  View view = 0;
  std::vector<NodeId> signers;  // sorted, distinct

  bool operator==(const Certificate&) const = default;
};

enum class MsgKind : std::uint8_t { WISH, TC, VOTE, QC, NEWROUND };

/// How a message reached its receiver. A directed send addresses one node; a
/// multicast fans out to everyone. Receivers can tell the two apart, which
/// lets a leader distinguish an enlistment (a TC sent straight at it) from
/// another leader's relay passing by.
enum class Route : std::uint8_t { Direct, Multicast };

struct Message {
  MsgKind kind = MsgKind::WISH;
  View view = 0;
  NodeId sender = 0;
  std::optional<Certificate> cert;  // present iff kind is TC or QC
  Route route = Route::Direct;      // stamped by the transport on delivery

  bool operator==(const Message&) const = default;
};

const char* to_string(CertKind k);
const char* to_string(MsgKind k);
std::string to_string(const Message& m);

/// Signature threshold for the given certificate kind.
std::size_t cert_threshold(CertKind kind, std::size_t f);

/// Aggregates distinct contributions for view v into a certificate, or
/// returns nullopt while below threshold.
std::optional<Certificate> form_certificate(CertKind kind, View v,
                                            const std::set<NodeId>& contributors,
                                            std::size_t f);

/// Threshold-and-distinctness part of certificate validity (no trace
/// context). Full verification additionally needs a ContributionLedger.
bool certificate_well_formed(const Certificate& c, std::size_t f);

}  // namespace viewsync
