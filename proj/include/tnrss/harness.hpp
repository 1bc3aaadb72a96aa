#pragma once

// Executable checks of the scheme's security-relevant behaviour: the
// correctness suite, exact transparency, the t-1 / t threshold boundary and
// the multiple-redaction forgery that the one-time model rules out.
//
// Every run is driven by a SeededRandom, and reports contain no timing or
// address data, so the same seed reproduces the same report byte for byte.

#include <json.hpp>

#include <algorithm>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "tnrss/hex.hpp"
#include "tnrss/redact.hpp"
#include "tnrss/scheme.hpp"
#include "tnrss/serialize.hpp"

namespace tnrss {

struct SuiteReport {
  SuiteReport() = default;
  SuiteReport(std::string suite_name, std::uint64_t suite_seed) : name(std::move(suite_name)), seed(suite_seed) {}

  std::string name;
  std::uint64_t seed = 0;
  std::size_t trials = 0;
  std::size_t failures = 0;
  std::vector<std::string> lines;
  std::vector<std::string> failing_instances;

  bool passed() const { return failures == 0; }

  nlohmann::ordered_json summary() const {
    nlohmann::ordered_json j;
    j["name"] = name;
    j["trials"] = trials;
    j["failures"] = failures;
    j["seed"] = seed;
    return j;
  }

  std::string text() const {
    std::ostringstream os;
    os << "== " << name << " (seed " << seed << ")\n";
    for (const auto& l : lines) os << "  " << l << "\n";
    for (const auto& f : failing_instances) os << "  FAIL " << f << "\n";
    os << "  " << (passed() ? "PASS" : "FAIL") << ": " << trials << " trials, " << failures << " failures\n";
    return os.str();
  }
};

/// Compact replayable dump of (M, ADM, DID, sigma).
inline std::string describe_instance(const Document& doc, const Signature& sig) {
  std::ostringstream os;
  os << "did=" << to_hex(doc.did.bytes) << " M=[";
  bool first = true;
  for (const auto& b : doc.blocks) {
    os << (first ? "" : ",") << to_hex(b.bytes) << (doc.adm.contains(b) ? "*" : "");
    first = false;
  }
  os << "] sig=" << to_hex(signature_body(sig));
  return os.str();
}

namespace detail {

/// Distinct random blocks of 0..24 bytes.
inline BlockSet random_blocks(SeededRandom& rng, std::size_t count) {
  BlockSet out;
  while (out.size() < count) {
    Bytes b(rng.uniform(0, 24));
    rng.fill(b);
    out.insert(Block{std::move(b)});
  }
  return out;
}

inline BlockSet random_subset(SeededRandom& rng, const BlockSet& from) {
  BlockSet out;
  for (const auto& b : from) {
    if (rng.coin()) out.insert(b);
  }
  return out;
}

inline BlockSet set_difference(const BlockSet& a, const BlockSet& b) {
  BlockSet out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.end()));
  return out;
}

/// Calls fn for every k-subset of {1..n}, in lexicographic order.
inline void for_each_subset(std::uint32_t n, std::uint32_t k, const std::function<void(const IndexSet&)>& fn) {
  if (k > n) return;
  std::vector<std::uint32_t> idx(k);
  for (std::uint32_t i = 0; i < k; ++i) idx[i] = i + 1;
  while (true) {
    fn(IndexSet(idx.begin(), idx.end()));
    int pos = static_cast<int>(k) - 1;
    while (pos >= 0 && idx[pos] == n - k + pos + 1) --pos;
    if (pos < 0) return;
    ++idx[pos];
    for (std::uint32_t j = pos + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

/// Blocks with at least t votes among mods.
inline BlockSet quorum_blocks(std::span<const BlockSet> mods, std::uint32_t t) {
  std::map<Block, std::uint32_t> count;
  for (const auto& m : mods) {
    for (const auto& b : m) ++count[b];
  }
  BlockSet out;
  for (const auto& [b, c] : count) {
    if (c >= t) out.insert(b);
  }
  return out;
}

}  // namespace detail

struct CorrectnessConfig {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> params = {{1, 1}, {2, 3}, {3, 5}};
  std::vector<std::size_t> sizes = {0, 1, 8, 16};
  std::size_t epochs = 1;  // trials per (t, n, |M|) cell
  std::uint64_t seed = 0;
  // Corrupts the fresh document of this trial; used to self-test the harness.
  std::optional<std::size_t> fault_trial;
};

/// Fresh signatures verify, honest redactions verify and remove exactly the
/// >= t voted blocks, and a rerun with a consumed DID leaves the original
/// intact and verifying.
inline SuiteReport run_correctness_suite(const CorrectnessConfig& cfg) {
  SuiteReport rep{"correctness", cfg.seed};
  SeededRandom rng(cfg.seed);
  std::size_t trial = 0;

  for (const auto& [t, n] : cfg.params) {
    const KeyMaterial km = keygen(t, n, rng);
    for (std::size_t size : cfg.sizes) {
      for (std::size_t e = 0; e < cfg.epochs; ++e, ++trial) {
        std::vector<std::string> problems;
        const BlockSet blocks = detail::random_blocks(rng, size);
        const BlockSet adm = detail::random_subset(rng, blocks);
        const SignedDocument signed_doc = sign(km.sk, blocks, adm, rng);

        Document checked = signed_doc.doc;
        if (cfg.fault_trial && *cfg.fault_trial == trial) checked.did.bytes[0] ^= 0x01;
        if (!verify(km.pk, checked, signed_doc.sig)) problems.emplace_back("fresh signature rejected");

        const BlockSet redactable = detail::set_difference(blocks, adm);
        std::vector<BlockSet> mods;
        for (std::uint32_t i = 0; i < n; ++i) mods.push_back(detail::random_subset(rng, redactable));
        const BlockSet expected_mod = detail::quorum_blocks(mods, t);

        auto states = make_states(km.redactor_keys);
        try {
          const RedactOutcome out = run_redact(km.pk, signed_doc, mods, states);
          if (out.result.doc.blocks != detail::set_difference(blocks, expected_mod)) {
            problems.emplace_back("redacted block set differs from the >= t vote set");
          }
          if (!verify(km.pk, out.result.doc, out.result.sig)) problems.emplace_back("redacted signature rejected");

          const RedactOutcome replay = run_redact(km.pk, signed_doc, mods, states);
          const bool all_aborted = std::all_of(replay.redactors.begin(), replay.redactors.end(), [](const auto& r) {
            return r.error == ErrorCode::DidReplayed;
          });
          if (!all_aborted) problems.emplace_back("replayed DID was not rejected by every redactor");
          if (!(replay.result.doc == signed_doc.doc) || !(replay.result.sig == signed_doc.sig)) {
            problems.emplace_back("replayed run changed the document");
          }
          if (!verify(km.pk, signed_doc.doc, signed_doc.sig)) {
            problems.emplace_back("original stopped verifying after replay");
          }
        } catch (const Error& err) {
          problems.emplace_back(std::string("redaction raised ") + err.what());
        }

        if (!problems.empty()) {
          ++rep.failures;
          std::ostringstream os;
          os << "trial " << trial << " (t=" << t << ", n=" << n << ", |M|=" << size << "): " << problems.front()
             << "; " << describe_instance(checked, signed_doc.sig);
          rep.failing_instances.push_back(os.str());
        }
      }
    }
    std::ostringstream os;
    os << "(t=" << t << ", n=" << n << ") sizes=" << cfg.sizes.size() << " epochs=" << cfg.epochs;
    rep.lines.push_back(os.str());
  }
  rep.trials = trial;
  return rep;
}

/// Redacting a signed document yields exactly the signature a fresh signing
/// of the redacted set under the same DID would have produced.
inline SuiteReport run_transparency_check(std::size_t instances, std::uint64_t seed) {
  SuiteReport rep{"transparency", seed};
  SeededRandom rng(seed);
  std::size_t equal = 0;

  for (std::size_t k = 0; k < instances; ++k) {
    const auto n = static_cast<std::uint32_t>(rng.uniform(1, 5));
    const auto t = static_cast<std::uint32_t>(rng.uniform(1, n));
    const KeyMaterial km = keygen(t, n, rng);
    const BlockSet blocks = detail::random_blocks(rng, rng.uniform(0, 8));
    const BlockSet adm = detail::random_subset(rng, blocks);
    const BlockSet redactable = detail::set_difference(blocks, adm);

    std::vector<BlockSet> mods(n);
    if (k % 3 == 1) {
      std::fill(mods.begin(), mods.end(), redactable);  // remove everything redactable
    } else if (k % 3 == 2) {
      for (auto& m : mods) m = detail::random_subset(rng, redactable);
    }  // k % 3 == 0: nobody votes

    const DocumentId did = DocumentId::random(rng);
    const SignedDocument original = sign_with_did(km.sk, blocks, adm, did);
    auto states = make_states(km.redactor_keys);
    std::string problem;
    try {
      const SignedDocument redacted = run_redact(km.pk, original, mods, states).result;
      const SignedDocument fresh = sign_with_did(km.sk, redacted.doc.blocks, adm, did);
      if (redacted.sig.sigma_agg.compress() != fresh.sig.sigma_agg.compress() ||
          redacted.sig.sigma_fix.compress() != fresh.sig.sigma_fix.compress()) {
        problem = "redacted signature differs from fresh signature";
      }
    } catch (const Error& err) {
      problem = std::string("redaction raised ") + err.what();
    }
    if (problem.empty()) {
      ++equal;
    } else {
      ++rep.failures;
      rep.failing_instances.push_back("instance " + std::to_string(k) + ": " + problem + "; " +
                                      describe_instance(original.doc, original.sig));
    }
  }
  rep.trials = instances;
  rep.lines.push_back("exact matches " + std::to_string(equal) + "/" + std::to_string(instances));
  return rep;
}

/// Every (t-1)-subset of shares fails to strip a block, every t-subset
/// succeeds.
inline SuiteReport run_threshold_boundary_check(std::uint32_t t, std::uint32_t n, std::size_t trials,
                                                std::uint64_t seed) {
  SuiteReport rep{"threshold-boundary t=" + std::to_string(t) + " n=" + std::to_string(n), seed};
  SeededRandom rng(seed);
  std::size_t below_rejected = 0;
  std::size_t below_total = 0;
  std::size_t at_accepted = 0;
  std::size_t at_total = 0;

  for (std::size_t k = 0; k < trials; ++k) {
    const KeyMaterial km = keygen(t, n, rng);
    const BlockSet blocks = detail::random_blocks(rng, 3);
    const Block target = *blocks.begin();
    const SignedDocument signed_doc = sign(km.sk, blocks, {}, rng);

    std::vector<ExponentShare> shares;
    auto states = make_states(km.redactor_keys);
    for (auto& st : states) {
      const RedactionInfo ri = red_inf(st, km.pk, signed_doc.doc, signed_doc.sig, BlockSet{target});
      shares.emplace_back(ri.redactor_index, ri.shares.at(target));
    }

    Document reduced = signed_doc.doc;
    reduced.blocks.erase(target);
    auto strip_verifies = [&](const IndexSet& subset) {
      const G1Element sigma_m = reconstruct_in_exponent(shares, subset);
      const Signature sig{signed_doc.sig.sigma_fix, signed_doc.sig.sigma_agg / sigma_m};
      return verify(km.pk, reduced, sig);
    };

    if (t >= 2) {
      detail::for_each_subset(n, t - 1, [&](const IndexSet& s) {
        ++below_total;
        if (!strip_verifies(s)) {
          ++below_rejected;
        } else {
          ++rep.failures;
          rep.failing_instances.push_back("trial " + std::to_string(k) + ": " + std::to_string(t - 1) +
                                          "-subset produced a verifying signature");
        }
      });
    }
    detail::for_each_subset(n, t, [&](const IndexSet& s) {
      ++at_total;
      if (strip_verifies(s)) {
        ++at_accepted;
      } else {
        ++rep.failures;
        rep.failing_instances.push_back("trial " + std::to_string(k) + ": " + std::to_string(t) +
                                        "-subset failed to verify");
      }
    });
  }
  rep.trials = trials;
  rep.lines.push_back("(t-1)-subsets rejected " + std::to_string(below_rejected) + "/" + std::to_string(below_total));
  rep.lines.push_back("t-subsets accepted " + std::to_string(at_accepted) + "/" + std::to_string(at_total));
  return rep;
}

struct TranscriptStep {
  Document doc;
  Signature sig;
  bool verifies = false;
};

/// Record of the multiple-redaction attack: sign, redact MOD1, redact MOD2
/// on the result, then splice the first redaction's removed factor back in.
struct AttackTranscript {
  bool replay_protection = true;
  BlockSet mod1;
  BlockSet mod2;
  TranscriptStep original;
  TranscriptStep first;
  std::optional<TranscriptStep> second;
  std::optional<ErrorCode> second_abort;  // set when every redactor refused the second round
  std::optional<TranscriptStep> forged;
  bool forged_is_novel = false;

  /// A verifying tuple that was never output by sign or redact.
  bool forgery_succeeded() const { return forged && forged->verifies && forged_is_novel; }
};

struct ForgeryDemoConfig {
  BlockSet blocks = {Block("m1"), Block("m2"), Block("m3")};
  BlockSet mod1 = {Block("m1")};
  BlockSet mod2 = {Block("m2")};
  bool replay_protection = false;
};

inline DocumentId demo_document_id() {
  DocumentId did;
  for (std::size_t i = 0; i < did.bytes.size(); ++i) did.bytes[i] = static_cast<std::uint8_t>(0xd0 + i);
  return did;
}

/// ADM is empty and every redactor votes each MOD, so each round removes it.
inline AttackTranscript run_forgery_demo(const KeyMaterial& km, const ForgeryDemoConfig& cfg = {}) {
  AttackTranscript tr;
  tr.replay_protection = cfg.replay_protection;
  tr.mod1 = cfg.mod1;
  tr.mod2 = cfg.mod2;

  const SignedDocument original = sign_with_did(km.sk, cfg.blocks, {}, demo_document_id());
  tr.original = {original.doc, original.sig, verify(km.pk, original.doc, original.sig)};

  auto states = make_states(km.redactor_keys, cfg.replay_protection);
  const std::vector<BlockSet> round1(km.redactor_keys.size(), cfg.mod1);
  const SignedDocument first = run_redact(km.pk, original, round1, states).result;
  tr.first = {first.doc, first.sig, verify(km.pk, first.doc, first.sig)};

  const std::vector<BlockSet> round2(km.redactor_keys.size(), cfg.mod2);
  const RedactOutcome out2 = run_redact(km.pk, first, round2, states);
  const bool all_replayed = std::all_of(out2.redactors.begin(), out2.redactors.end(),
                                        [](const auto& r) { return r.error == ErrorCode::DidReplayed; });
  if (all_replayed) {
    tr.second_abort = ErrorCode::DidReplayed;
    return tr;
  }
  const SignedDocument& second = out2.result;
  tr.second = TranscriptStep{second.doc, second.sig, verify(km.pk, second.doc, second.sig)};

  // sigma_{MOD1} = Sigma / Sigma';  Sigma* = sigma_{MOD1} * Sigma''.
  const G1Element removed_factor = original.sig.sigma_agg / first.sig.sigma_agg;
  Document forged_doc = second.doc;
  for (const auto& b : detail::set_difference(original.doc.blocks, first.doc.blocks)) forged_doc.blocks.insert(b);
  const Signature forged_sig{original.sig.sigma_fix, removed_factor * second.sig.sigma_agg};
  tr.forged = TranscriptStep{forged_doc, forged_sig, verify(km.pk, forged_doc, forged_sig)};

  // Novel iff (M*, ADM, DID) is none of the signed or redacted tuples.
  tr.forged_is_novel = !(forged_doc == original.doc) && !(forged_doc == first.doc) && !(forged_doc == second.doc);
  return tr;
}

inline std::string block_list(const BlockSet& blocks) {
  std::string out = "{";
  bool first = true;
  for (const auto& b : blocks) {
    out += first ? "" : ", ";
    out += std::string(b.bytes.begin(), b.bytes.end());
    first = false;
  }
  return out + "}";
}

inline std::string describe(const AttackTranscript& tr) {
  std::ostringstream os;
  auto step = [&](const char* label, const TranscriptStep& s) {
    os << label << " M=" << block_list(s.doc.blocks) << " Sigma_agg=" << to_hex(s.sig.sigma_agg.compress())
       << " verify=" << (s.verifies ? 1 : 0) << "\n";
  };
  os << "replay protection: " << (tr.replay_protection ? "ON" : "OFF") << "\n";
  os << "DID=" << to_hex(tr.original.doc.did.bytes) << " ADM=" << block_list(tr.original.doc.adm) << "\n";
  step("signed:        ", tr.original);
  os << "redact MOD1=" << block_list(tr.mod1) << "\n";
  step("redaction 1:   ", tr.first);
  os << "redact MOD2=" << block_list(tr.mod2) << "\n";
  if (tr.second_abort) {
    os << "redaction 2:    aborted at " << to_string(*tr.second_abort) << " by every redactor; no forgery produced\n";
    return os.str();
  }
  step("redaction 2:   ", *tr.second);
  if (tr.forged) {
    step("forged:        ", *tr.forged);
    if (tr.forgery_succeeded()) {
      os << "forged signature VERIFIES on novel tuple (M*=" << block_list(tr.forged->doc.blocks)
         << ", ADM=" << block_list(tr.forged->doc.adm) << ", DID=" << to_hex(tr.forged->doc.did.bytes) << ")\n";
    } else if (!tr.forged_is_novel) {
      os << "forged tuple equals an earlier signed/redacted tuple; not a forgery\n";
    } else {
      os << "forged signature does not verify\n";
    }
  }
  return os.str();
}

/// Tries every (MOD1, MOD2) pair over the demo's blocks with replay
/// protection on; none may yield a verifying novel tuple.
inline SuiteReport run_replay_protection_search(const KeyMaterial& km, const BlockSet& blocks = ForgeryDemoConfig{}.blocks) {
  SuiteReport rep{"replay-protection-search", 0};
  const std::vector<Block> list(blocks.begin(), blocks.end());
  const std::size_t combos = std::size_t{1} << list.size();
  auto subset = [&](std::size_t mask) {
    BlockSet s;
    for (std::size_t i = 0; i < list.size(); ++i) {
      if (mask & (std::size_t{1} << i)) s.insert(list[i]);
    }
    return s;
  };
  std::size_t blocked = 0;
  for (std::size_t a = 0; a < combos; ++a) {
    for (std::size_t b = 0; b < combos; ++b) {
      ForgeryDemoConfig cfg{blocks, subset(a), subset(b), true};
      const AttackTranscript tr = run_forgery_demo(km, cfg);
      ++rep.trials;
      if (tr.second_abort) ++blocked;
      if (tr.forgery_succeeded()) {
        ++rep.failures;
        rep.failing_instances.push_back("MOD1=" + block_list(cfg.mod1) + " MOD2=" + block_list(cfg.mod2) +
                                        " produced a novel verifying tuple");
      }
    }
  }
  rep.lines.push_back("action pairs tried " + std::to_string(rep.trials) + ", second round blocked " +
                      std::to_string(blocked));
  return rep;
}

}  // namespace tnrss
