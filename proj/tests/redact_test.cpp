#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "tnrss/harness.hpp"
#include "tnrss/redact.hpp"

using namespace tnrss;

namespace {

BlockSet blocks_of(std::initializer_list<std::string_view> names) {
  BlockSet out;
  for (auto n : names) out.insert(Block(n));
  return out;
}

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::Io;
}

class TempDir {
 public:
  TempDir() {
    path_ = std::filesystem::temp_directory_path() /
            ("tnrss-redact-" + std::to_string(::getpid()) + "-" + std::to_string(counter_++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() { std::filesystem::remove_all(path_); }
  const std::filesystem::path& path() const { return path_; }

 private:
  static inline int counter_ = 0;
  std::filesystem::path path_;
};

struct Fixture {
  explicit Fixture(std::uint32_t t, std::uint32_t n, std::uint64_t seed = 50) : rng(seed), km(keygen(t, n, rng)) {
    signed_doc = sign(km.sk, blocks_of({"m1", "m2", "m3", "keep"}), blocks_of({"keep"}), rng);
  }
  SeededRandom rng;
  KeyMaterial km;
  SignedDocument signed_doc;
};

TEST(RedInf, SecondCallWithSameDidIsReplayed) {
  Fixture f(2, 3);
  auto states = make_states(f.km.redactor_keys);
  red_inf(states[0], f.km.pk, f.signed_doc.doc, f.signed_doc.sig, blocks_of({"m1"}));
  EXPECT_EQ(code_of([&] { red_inf(states[0], f.km.pk, f.signed_doc.doc, f.signed_doc.sig, {}); }),
            ErrorCode::DidReplayed);
  EXPECT_EQ(states[0].replay.size(), 1u);
}

TEST(RedInf, EmptyVoteRecordsDid) {
  Fixture f(2, 3);
  auto states = make_states(f.km.redactor_keys);
  const RedactionInfo ri = red_inf(states[1], f.km.pk, f.signed_doc.doc, f.signed_doc.sig, {});
  EXPECT_EQ(ri.redactor_index, 2u);
  EXPECT_TRUE(ri.shares.empty());
  EXPECT_TRUE(states[1].replay.contains(f.signed_doc.doc.did));
}

TEST(RedInf, SharesAreHashToTheShare) {
  Fixture f(2, 3);
  auto states = make_states(f.km.redactor_keys);
  const RedactionInfo ri = red_inf(states[2], f.km.pk, f.signed_doc.doc, f.signed_doc.sig, blocks_of({"m1", "m3"}));
  ASSERT_EQ(ri.shares.size(), 2u);
  for (const auto& [block, share] : ri.shares) {
    EXPECT_TRUE(share == hash_block(f.signed_doc.doc.did, block).pow(f.km.redactor_keys[2].share));
    const auto& g2 = PairingContext::bls12_381().g2;
    EXPECT_TRUE(pairing(share, g2) == pairing(hash_block(f.signed_doc.doc.did, block), f.km.verification.at(3)));
  }
}

TEST(RedInf, InvalidModStillBurnsDid) {
  Fixture f(2, 3);
  auto states = make_states(f.km.redactor_keys);
  EXPECT_EQ(code_of([&] { red_inf(states[0], f.km.pk, f.signed_doc.doc, f.signed_doc.sig, blocks_of({"keep"})); }),
            ErrorCode::InvalidMod);
  EXPECT_TRUE(states[0].replay.contains(f.signed_doc.doc.did));
  EXPECT_EQ(code_of([&] { red_inf(states[1], f.km.pk, f.signed_doc.doc, f.signed_doc.sig, blocks_of({"absent"})); }),
            ErrorCode::InvalidMod);
  EXPECT_EQ(code_of([&] { red_inf(states[0], f.km.pk, f.signed_doc.doc, f.signed_doc.sig, {}); }),
            ErrorCode::DidReplayed);
}

TEST(RedInf, BadSignatureStillBurnsDid) {
  Fixture f(2, 3);
  auto states = make_states(f.km.redactor_keys);
  Signature forged = f.signed_doc.sig;
  forged.sigma_agg = forged.sigma_agg * PairingContext::bls12_381().g1;
  EXPECT_EQ(code_of([&] { red_inf(states[0], f.km.pk, f.signed_doc.doc, forged, blocks_of({"m1"})); }),
            ErrorCode::BadSignature);
  EXPECT_TRUE(states[0].replay.contains(f.signed_doc.doc.did));

  forged = f.signed_doc.sig;
  forged.sigma_fix = forged.sigma_fix * PairingContext::bls12_381().g1;
  EXPECT_EQ(code_of([&] { red_inf(states[1], f.km.pk, f.signed_doc.doc, forged, blocks_of({"m1"})); }),
            ErrorCode::BadSignature);
}

TEST(RedInf, ReplayCheckCanBeDisabledForTheDemo) {
  Fixture f(1, 1);
  auto states = make_states(f.km.redactor_keys, false);
  red_inf(states[0], f.km.pk, f.signed_doc.doc, f.signed_doc.sig, {});
  EXPECT_NO_THROW(red_inf(states[0], f.km.pk, f.signed_doc.doc, f.signed_doc.sig, {}));
}

TEST(ThrRed, NoVotesLeavesDocumentUnchanged) {
  Fixture f(2, 3);
  const std::vector<RedactionInfo> infos = {{1, {}}, {2, {}}, {3, {}}};
  const SignedDocument out = thr_red(f.km.pk, f.signed_doc.doc, f.signed_doc.sig, infos);
  EXPECT_TRUE(out.doc == f.signed_doc.doc);
  EXPECT_TRUE(out.sig == f.signed_doc.sig);
}

TEST(ThrRed, TwoOfThreeRemoveBlock) {
  Fixture f(2, 3);
  auto states = make_states(f.km.redactor_keys);
  std::vector<RedactionInfo> infos;
  infos.push_back(red_inf(states[0], f.km.pk, f.signed_doc.doc, f.signed_doc.sig, blocks_of({"m1"})));
  infos.push_back(red_inf(states[1], f.km.pk, f.signed_doc.doc, f.signed_doc.sig, blocks_of({"m1"})));
  infos.push_back(red_inf(states[2], f.km.pk, f.signed_doc.doc, f.signed_doc.sig, {}));
  const SignedDocument out = thr_red(f.km.pk, f.signed_doc.doc, f.signed_doc.sig, infos);
  EXPECT_EQ(out.doc.blocks, blocks_of({"m2", "m3", "keep"}));
  EXPECT_TRUE(verify(f.km.pk, out.doc, out.sig));
  // Oracle: a fresh signature over the redacted set under the same DID.
  const SignedDocument fresh = sign_with_did(f.km.sk, out.doc.blocks, out.doc.adm, out.doc.did);
  EXPECT_TRUE(out.sig == fresh.sig);
}

TEST(ThrRed, BelowThresholdBlockIsRetained) {
  Fixture f(3, 5);
  auto states = make_states(f.km.redactor_keys);
  std::vector<RedactionInfo> infos;
  // m1: 2 votes (t - 1), m2: 3 votes (t).
  const BlockSet votes[] = {blocks_of({"m1", "m2"}), blocks_of({"m1", "m2"}), blocks_of({"m2"}), {}, {}};
  for (std::size_t k = 0; k < 5; ++k) {
    infos.push_back(red_inf(states[k], f.km.pk, f.signed_doc.doc, f.signed_doc.sig, votes[k]));
  }
  const SignedDocument out = thr_red(f.km.pk, f.signed_doc.doc, f.signed_doc.sig, infos);
  EXPECT_TRUE(out.doc.blocks.contains(Block("m1")));
  EXPECT_FALSE(out.doc.blocks.contains(Block("m2")));
  EXPECT_TRUE(verify(f.km.pk, out.doc, out.sig));
}

TEST(ThrRed, AcceptsFewerThanNSubmissions) {
  Fixture f(2, 5);
  auto states = make_states(f.km.redactor_keys);
  std::vector<RedactionInfo> infos;
  infos.push_back(red_inf(states[3], f.km.pk, f.signed_doc.doc, f.signed_doc.sig, blocks_of({"m2"})));
  infos.push_back(red_inf(states[4], f.km.pk, f.signed_doc.doc, f.signed_doc.sig, blocks_of({"m2"})));
  const SignedDocument out = thr_red(f.km.pk, f.signed_doc.doc, f.signed_doc.sig, infos);
  EXPECT_FALSE(out.doc.blocks.contains(Block("m2")));
}

TEST(ThrRed, DuplicateRedactor) {
  Fixture f(2, 3);
  const std::vector<RedactionInfo> infos = {{1, {}}, {1, {}}};
  EXPECT_EQ(code_of([&] { thr_red(f.km.pk, f.signed_doc.doc, f.signed_doc.sig, infos); }),
            ErrorCode::DuplicateRedactor);
}

TEST(ThrRed, IndexOutOfRange) {
  Fixture f(2, 3);
  const std::vector<RedactionInfo> infos = {{4, {}}};
  EXPECT_EQ(code_of([&] { thr_red(f.km.pk, f.signed_doc.doc, f.signed_doc.sig, infos); }), ErrorCode::InvalidParams);
}

TEST(ThrRed, MalformedShareFailsCombine) {
  Fixture f(2, 3);
  auto states = make_states(f.km.redactor_keys);
  std::vector<RedactionInfo> infos;
  infos.push_back(red_inf(states[0], f.km.pk, f.signed_doc.doc, f.signed_doc.sig, blocks_of({"m1"})));
  infos.push_back(red_inf(states[1], f.km.pk, f.signed_doc.doc, f.signed_doc.sig, blocks_of({"m1"})));
  infos[1].shares.begin()->second = infos[1].shares.begin()->second * PairingContext::bls12_381().g1;
  EXPECT_EQ(code_of([&] { thr_red(f.km.pk, f.signed_doc.doc, f.signed_doc.sig, infos); }), ErrorCode::CombineFailed);
}

TEST(ThrRed, PrevalidationDropsBadShares) {
  Fixture f(2, 3);
  auto states = make_states(f.km.redactor_keys);
  std::vector<RedactionInfo> infos;
  for (auto& st : states) infos.push_back(red_inf(st, f.km.pk, f.signed_doc.doc, f.signed_doc.sig, blocks_of({"m1"})));
  // Redactor 1's share is corrupted; 2 and 3 still form a quorum.
  infos[0].shares.begin()->second = infos[0].shares.begin()->second * PairingContext::bls12_381().g1;
  EXPECT_EQ(code_of([&] { thr_red(f.km.pk, f.signed_doc.doc, f.signed_doc.sig, infos); }), ErrorCode::CombineFailed);

  CombineOptions opts;
  opts.verification = &f.km.verification;
  const SignedDocument out = thr_red(f.km.pk, f.signed_doc.doc, f.signed_doc.sig, infos, opts);
  EXPECT_FALSE(out.doc.blocks.contains(Block("m1")));
  EXPECT_TRUE(verify(f.km.pk, out.doc, out.sig));
}

TEST(ThrRed, SharesForUnknownBlocksAreIgnored) {
  Fixture f(1, 2);
  RedactionInfo stray{1, {}};
  stray.shares.emplace(Block("not-in-M"), PairingContext::bls12_381().g1);
  const std::vector<RedactionInfo> infos = {stray};
  const SignedDocument out = thr_red(f.km.pk, f.signed_doc.doc, f.signed_doc.sig, infos);
  EXPECT_TRUE(out.doc == f.signed_doc.doc);
}

TEST(VoteTable, QuorumIsSmallestIndices) {
  Fixture f(2, 4);
  VoteTable table(f.signed_doc.doc);
  const Block m("m1");
  for (std::uint32_t i : {4u, 2u, 3u}) {
    RedactionInfo ri{i, {}};
    ri.shares.emplace(m, PairingContext::bls12_381().g1);
    table.add(ri);
  }
  EXPECT_EQ(table.count(m), 3u);
  EXPECT_EQ(select_quorum(table.contributions(m), 2), (IndexSet{2, 3}));
  EXPECT_EQ(table.mod(2), BlockSet{m});
  EXPECT_EQ(table.mod(4), BlockSet{});
}

// Adding a vote never removes a block from MOD; MOD is exactly the >= t set.
TEST(VoteTable, QuorumMonotone) {
  SeededRandom rng(51);
  const Fixture f(3, 6);
  const std::vector<Block> blocks(f.signed_doc.doc.blocks.begin(), f.signed_doc.doc.blocks.end());
  for (int trial = 0; trial < 100; ++trial) {
    VoteTable table(f.signed_doc.doc);
    std::map<Block, std::uint32_t> counts;
    BlockSet prev_mod;
    for (std::uint32_t i = 1; i <= 6; ++i) {
      RedactionInfo ri{i, {}};
      for (const auto& b : blocks)
        if (rng.coin()) ri.shares.emplace(b, PairingContext::bls12_381().g1);
      for (const auto& [b, s] : ri.shares) ++counts[b];
      table.add(ri);
      const BlockSet mod = table.mod(3);
      EXPECT_TRUE(is_subset(prev_mod, mod));
      BlockSet expected;
      for (const auto& [b, c] : counts)
        if (c >= 3) expected.insert(b);
      EXPECT_EQ(mod, expected);
      prev_mod = mod;
    }
  }
}

TEST(RunRedact, HonestQuorum) {
  Fixture f(2, 3);
  auto states = make_states(f.km.redactor_keys);
  const std::vector<BlockSet> mods = {blocks_of({"m1", "m2"}), blocks_of({"m1"}), blocks_of({"m2", "m3"})};
  const RedactOutcome out = run_redact(f.km.pk, f.signed_doc, mods, states);
  EXPECT_EQ(out.result.doc.blocks, blocks_of({"m3", "keep"}));
  EXPECT_TRUE(verify(f.km.pk, out.result.doc, out.result.sig));
  for (const auto& r : out.redactors) EXPECT_FALSE(r.error.has_value());
}

TEST(RunRedact, ReplayedDidLeavesDocumentUnchanged) {
  Fixture f(2, 3);
  auto states = make_states(f.km.redactor_keys);
  const std::vector<BlockSet> mods(3, blocks_of({"m1"}));
  run_redact(f.km.pk, f.signed_doc, mods, states);
  const RedactOutcome again = run_redact(f.km.pk, f.signed_doc, mods, states);
  EXPECT_TRUE(again.result.doc == f.signed_doc.doc);
  EXPECT_TRUE(again.result.sig == f.signed_doc.sig);
  for (const auto& r : again.redactors) EXPECT_EQ(r.error, ErrorCode::DidReplayed);
  EXPECT_TRUE(verify(f.km.pk, f.signed_doc.doc, f.signed_doc.sig));
}

TEST(RunRedact, SingleRedactorControlsMod) {
  Fixture f(1, 1);
  auto states = make_states(f.km.redactor_keys);
  const std::vector<BlockSet> mods = {blocks_of({"m1", "m2", "m3"})};
  const RedactOutcome out = run_redact(f.km.pk, f.signed_doc, mods, states);
  EXPECT_EQ(out.result.doc.blocks, blocks_of({"keep"}));
  EXPECT_TRUE(verify(f.km.pk, out.result.doc, out.result.sig));
}

TEST(RunRedact, InvalidVoterContributesNothing) {
  Fixture f(2, 3);
  auto states = make_states(f.km.redactor_keys);
  const std::vector<BlockSet> mods = {blocks_of({"m1"}), blocks_of({"m1", "keep"}), blocks_of({})};
  const RedactOutcome out = run_redact(f.km.pk, f.signed_doc, mods, states);
  EXPECT_EQ(out.redactors[1].error, ErrorCode::InvalidMod);
  EXPECT_TRUE(out.result.doc.blocks.contains(Block("m1")));
}

TEST(ReplayJournal, SurvivesRestart) {
  TempDir dir;
  const auto path = dir.path() / "replay-1.journal";
  SeededRandom rng(52);
  const DocumentId a = DocumentId::random(rng);
  const DocumentId b = DocumentId::random(rng);
  {
    ReplayList list = ReplayList::open(path);
    EXPECT_TRUE(list.persistent());
    list.insert(a);
    list.insert(a);
    list.insert(b);
  }
  ReplayList reloaded = ReplayList::open(path);
  EXPECT_TRUE(reloaded.contains(a));
  EXPECT_TRUE(reloaded.contains(b));
  EXPECT_EQ(reloaded.size(), 2u);

  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, to_hex(a.bytes));
}

TEST(ReplayJournal, RejectsCorruptLines) {
  TempDir dir;
  const auto path = dir.path() / "bad.journal";
  std::ofstream(path) << "zz\n";
  EXPECT_THROW(ReplayList::open(path), Error);
}

TEST(ReplayJournal, RedInfAcrossRestart) {
  TempDir dir;
  Fixture f(2, 3);
  const auto path = dir.path() / "replay-1.journal";
  {
    RedactorState st{f.km.redactor_keys[0], ReplayList::open(path)};
    red_inf(st, f.km.pk, f.signed_doc.doc, f.signed_doc.sig, blocks_of({"m1"}));
  }
  RedactorState restarted{f.km.redactor_keys[0], ReplayList::open(path)};
  EXPECT_EQ(code_of([&] { red_inf(restarted, f.km.pk, f.signed_doc.doc, f.signed_doc.sig, {}); }),
            ErrorCode::DidReplayed);
}

}  // namespace
