#pragma once

// One-round redaction: each redactor runs red_inf once per document id and
// releases h_m^{f(i)} for the blocks it wants gone; the combiner removes
// every block that collected at least t such shares.

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "tnrss/hex.hpp"
#include "tnrss/scheme.hpp"

namespace tnrss {

/// Append-only on-disk list of processed document ids, one lowercase hex id
/// per line. Holds an exclusive flock() for its lifetime.
class ReplayJournal {
 public:
  explicit ReplayJournal(std::filesystem::path path) : path_(std::move(path)) {
    fd_ = ::open(path_.c_str(), O_RDWR | O_CREAT | O_APPEND | O_CLOEXEC, 0600);
    if (fd_ < 0) throw Error(ErrorCode::Io, "cannot open journal " + path_.string() + ": " + std::strerror(errno));
    if (::flock(fd_, LOCK_EX) != 0) {
      ::close(fd_);
      throw Error(ErrorCode::Io, "cannot lock journal " + path_.string());
    }
  }

  ReplayJournal(const ReplayJournal&) = delete;
  ReplayJournal& operator=(const ReplayJournal&) = delete;

  ~ReplayJournal() {
    if (fd_ >= 0) {
      ::flock(fd_, LOCK_UN);
      ::close(fd_);
    }
  }

  const std::filesystem::path& path() const { return path_; }

  std::set<DocumentId> load() const {
    std::set<DocumentId> out;
    std::ifstream in(path_);
    if (!in) throw Error(ErrorCode::Io, "cannot read journal " + path_.string());
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      out.insert(DocumentId::from_bytes(from_hex(line)));
    }
    return out;
  }

  void append(const DocumentId& did) {
    const std::string line = to_hex(did.bytes) + "\n";
    std::size_t written = 0;
    while (written < line.size()) {
      const ssize_t r = ::write(fd_, line.data() + written, line.size() - written);
      if (r < 0) {
        if (errno == EINTR) continue;
        throw Error(ErrorCode::Io, "journal write failed: " + std::string(std::strerror(errno)));
      }
      written += static_cast<std::size_t>(r);
    }
    if (::fsync(fd_) != 0) throw Error(ErrorCode::Io, "journal fsync failed");
  }

 private:
  std::filesystem::path path_;
  int fd_ = -1;
};

/// The set L_i of document ids a redactor has already processed.
class ReplayList {
 public:
  ReplayList() = default;

  /// Journal-backed list; existing entries are loaded immediately.
  static ReplayList open(const std::filesystem::path& journal_path) {
    ReplayList list;
    list.journal_ = std::make_unique<ReplayJournal>(journal_path);
    list.seen_ = list.journal_->load();
    return list;
  }

  bool contains(const DocumentId& did) const { return seen_.contains(did); }

  void insert(const DocumentId& did) {
    if (!seen_.insert(did).second) return;
    if (journal_) journal_->append(did);
  }

  std::size_t size() const { return seen_.size(); }
  bool persistent() const { return journal_ != nullptr; }

 private:
  std::set<DocumentId> seen_;
  std::unique_ptr<ReplayJournal> journal_;
};

struct RedactorState {
  RedactorKey key;
  ReplayList replay;
  // Off only for the multiple-redaction demonstration.
  bool enforce_one_time = true;
};

/// RI_i: shares h_m^{x_i}, present only for blocks redactor i votes to remove.
struct RedactionInfo {
  std::uint32_t redactor_index = 0;
  std::map<Block, G1Element> shares;

  friend bool operator==(const RedactionInfo&, const RedactionInfo&) = default;
};

/// Redactor side. Step order: replay check, record the id, validate MOD,
/// verify the signature, then release shares. A rejected request still
/// consumes the id for this redactor.
inline RedactionInfo red_inf(RedactorState& state, const PublicKey& pk, const Document& doc,
                             const Signature& sig, const BlockSet& mod, const Limits& limits = {}) {
  if (state.enforce_one_time && state.replay.contains(doc.did)) {
    throw Error(ErrorCode::DidReplayed, "document id already processed by redactor " +
                                            std::to_string(state.key.index));
  }
  state.replay.insert(doc.did);

  for (const auto& m : mod) {
    if (doc.adm.contains(m)) throw Error(ErrorCode::InvalidMod, "MOD intersects ADM");
    if (!doc.blocks.contains(m)) throw Error(ErrorCode::InvalidMod, "MOD is not a subset of M");
  }

  if (!within_limits(doc, limits)) throw Error(ErrorCode::BadSignature, "document exceeds limits");
  const DocumentHashes h = hash_document(doc);
  if (!verify_hashed(pk, doc, sig, h)) throw Error(ErrorCode::BadSignature, "signature does not verify");

  RedactionInfo ri{state.key.index, {}};
  for (const auto& m : mod) ri.shares.emplace(m, h.h_blocks.at(m).pow(state.key.share));
  return ri;
}

/// Per-block contributions gathered by the combiner. Only blocks of M are
/// tracked; at most one contribution per (redactor, block).
class VoteTable {
 public:
  explicit VoteTable(const Document& doc) : doc_(&doc) {}

  void add(const RedactionInfo& ri) {
    for (const auto& [block, share] : ri.shares) {
      if (!doc_->blocks.contains(block)) continue;
      votes_[block].emplace(ri.redactor_index, share);
    }
  }

  void drop(const Block& block, std::uint32_t index) {
    auto it = votes_.find(block);
    if (it != votes_.end()) it->second.erase(index);
  }

  std::size_t count(const Block& block) const {
    auto it = votes_.find(block);
    return it == votes_.end() ? 0 : it->second.size();
  }

  /// Blocks with at least t contributions.
  BlockSet mod(std::uint32_t t) const {
    BlockSet out;
    for (const auto& [block, contribs] : votes_) {
      if (contribs.size() >= t) out.insert(block);
    }
    return out;
  }

  const std::map<std::uint32_t, G1Element>& contributions(const Block& block) const {
    static const std::map<std::uint32_t, G1Element> kEmpty;
    auto it = votes_.find(block);
    return it == votes_.end() ? kEmpty : it->second;
  }

  const std::map<Block, std::map<std::uint32_t, G1Element>>& entries() const { return votes_; }

 private:
  const Document* doc_;
  std::map<Block, std::map<std::uint32_t, G1Element>> votes_;
};

struct CombineOptions {
  // When set, shares that fail e(RI, g2) == e(h_m, y_i) are discarded
  // before counting votes.
  const RedactorVerificationSet* verification = nullptr;
  Limits limits{};
};

/// The t smallest contributing indices.
inline IndexSet select_quorum(const std::map<std::uint32_t, G1Element>& contribs, std::uint32_t t) {
  IndexSet j;
  for (const auto& [idx, share] : contribs) {
    if (j.size() == t) break;
    j.insert(idx);
  }
  return j;
}

/// Combiner side: removes every block with >= t votes and divides the
/// reconstructed block signatures out of Sigma_agg. The result is verified
/// before it is returned.
inline SignedDocument thr_red(const PublicKey& pk, const Document& doc, const Signature& sig,
                              std::span<const RedactionInfo> infos, const CombineOptions& opts = {}) {
  std::set<std::uint32_t> seen;
  for (const auto& ri : infos) {
    if (ri.redactor_index == 0 || ri.redactor_index > pk.n) {
      throw Error(ErrorCode::InvalidParams, "redactor index " + std::to_string(ri.redactor_index) + " out of range");
    }
    if (!seen.insert(ri.redactor_index).second) {
      throw Error(ErrorCode::DuplicateRedactor, "redactor " + std::to_string(ri.redactor_index) + " submitted twice");
    }
  }

  VoteTable table(doc);
  for (const auto& ri : infos) table.add(ri);

  if (opts.verification != nullptr) {
    const G2Element neg_g2 = PairingContext::bls12_381().g2.inverse();
    std::vector<std::pair<Block, std::uint32_t>> bad;
    for (const auto& [block, contribs] : table.entries()) {
      const G1Element h = hash_block(doc.did, block);
      for (const auto& [idx, share] : contribs) {
        const std::pair<G1Element, G2Element> terms[] = {{share, neg_g2}, {h, opts.verification->at(idx)}};
        if (!pairing_product_is_one(terms)) bad.emplace_back(block, idx);
      }
    }
    for (const auto& [block, idx] : bad) table.drop(block, idx);
  }

  const BlockSet mod = table.mod(pk.t);
  G1Element sigma_mod;
  for (const auto& m : mod) {
    const auto& contribs = table.contributions(m);
    const IndexSet quorum = select_quorum(contribs, pk.t);
    std::vector<ExponentShare> shares;
    shares.reserve(quorum.size());
    for (std::uint32_t i : quorum) shares.emplace_back(i, contribs.at(i));
    sigma_mod *= reconstruct_in_exponent(shares, quorum);
  }

  SignedDocument out{doc, Signature{sig.sigma_fix, sig.sigma_agg / sigma_mod}};
  for (const auto& m : mod) out.doc.blocks.erase(m);

  if (!verify(pk, out.doc, out.sig, opts.limits)) {
    throw Error(ErrorCode::CombineFailed, "redacted signature does not verify");
  }
  return out;
}

struct RedactorOutcome {
  std::uint32_t index = 0;
  std::optional<ErrorCode> error;  // set when the redactor stopped interacting
};

struct RedactOutcome {
  SignedDocument result;
  std::vector<RedactorOutcome> redactors;
};

/// Runs red_inf for every state (mods[k] is the vote of states[k]) and then
/// thr_red. A redactor whose red_inf fails contributes nothing.
inline RedactOutcome run_redact(const PublicKey& pk, const SignedDocument& input, std::span<const BlockSet> mods,
                                std::span<RedactorState> states, const CombineOptions& opts = {}) {
  if (mods.size() != states.size()) throw Error(ErrorCode::InvalidParams, "one MOD per redactor required");
  RedactOutcome outcome;
  std::vector<RedactionInfo> infos;
  infos.reserve(states.size());
  for (std::size_t k = 0; k < states.size(); ++k) {
    RedactorOutcome ro{states[k].key.index, std::nullopt};
    try {
      infos.push_back(red_inf(states[k], pk, input.doc, input.sig, mods[k], opts.limits));
    } catch (const Error& e) {
      if (e.code() == ErrorCode::Io) throw;
      ro.error = e.code();
      infos.push_back(RedactionInfo{states[k].key.index, {}});
    }
    outcome.redactors.push_back(ro);
  }
  outcome.result = thr_red(pk, input.doc, input.sig, infos, opts);
  return outcome;
}

/// Fresh in-memory states for a set of redactor keys.
inline std::vector<RedactorState> make_states(std::span<const RedactorKey> keys, bool enforce_one_time = true) {
  std::vector<RedactorState> out;
  out.reserve(keys.size());
  for (const auto& k : keys) out.push_back(RedactorState{k, ReplayList{}, enforce_one_time});
  return out;
}

}  // namespace tnrss
