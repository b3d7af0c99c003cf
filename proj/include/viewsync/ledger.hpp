#pragma once

#include <map>
#include <set>

#include "viewsync/message.hpp"
#include "viewsync/types.hpp"

namespace viewsync {

/// Verifies certificates for a synchronizer. Injected so state machines stay
/// pure: the simulation supplies a trace-backed verifier, unit tests supply
/// stubs.
class CertificateVerifier {
 public:
  virtual ~CertificateVerifier() = default;
  virtual bool verify(const Certificate& cert) const = 0;
};

/// Accepts any well-formed certificate for the configured f. Used by tests
/// and by scenarios that never exercise forgery.
class ThresholdOnlyVerifier : public CertificateVerifier {
 public:
  explicit ThresholdOnlyVerifier(std::size_t f) : f_(f) {}
  bool verify(const Certificate& cert) const override {
    return certificate_well_formed(cert, f_);
  }

 private:
  std::size_t f_;
};

/// The ideal-crypto stand-in: records which node contributed a signature for
/// which (kind, view), and verifies certificates against that record.
/// Corrupt nodes may sign anything; honest signers must have genuinely
/// contributed, so certificates naming honest non-contributors are forgeries.
class ContributionLedger : public CertificateVerifier {
 public:
  ContributionLedger(std::size_t f, std::set<NodeId> corrupt)
      : f_(f), corrupt_(std::move(corrupt)) {}

  void record(CertKind kind, View view, NodeId node) {
    contributions_[{kind, view}].insert(node);
  }

  bool contributed(CertKind kind, View view, NodeId node) const {
    auto it = contributions_.find({kind, view});
    return it != contributions_.end() && it->second.count(node) > 0;
  }

  bool verify(const Certificate& cert) const override {
    if (!certificate_well_formed(cert, f_)) return false;
    for (NodeId signer : cert.signers) {
      if (corrupt_.count(signer)) continue;
      if (!contributed(cert.kind, cert.view, signer)) return false;
    }
    return true;
  }

 private:
  std::size_t f_;
  std::set<NodeId> corrupt_;
  std::map<std::pair<CertKind, View>, std::set<NodeId>> contributions_;
};

}  // namespace viewsync
