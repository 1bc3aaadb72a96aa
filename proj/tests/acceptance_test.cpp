// Acceptance run: one PASS/FAIL line per criterion, non-zero exit if any fails.

#include <unistd.h>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "tnrss/tnrss.hpp"

using namespace tnrss;
namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kSeed = 20240601;

struct Outcome {
  bool ok = false;
  std::string detail;
};

bool run_criterion(int id, const std::string& name, double budget_s, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const bool in_time = secs < budget_s;
  const bool pass = o.ok && in_time;
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(2);
  os << (pass ? "PASS" : "FAIL") << " [" << id << "] " << name << ": " << o.detail << " (" << secs << " s, budget "
     << budget_s << " s" << (in_time ? "" : ", OVER BUDGET") << ")";
  std::cout << os.str() << std::endl;
  return pass;
}

Outcome from_report(const SuiteReport& rep, const std::string& extra = "") {
  std::string detail = std::to_string(rep.trials) + " trials, " + std::to_string(rep.failures) + " failures";
  for (const auto& l : rep.lines) detail += "; " + l;
  if (!extra.empty()) detail += "; " + extra;
  if (!rep.passed()) {
    for (const auto& f : rep.failing_instances) std::cerr << "  " << rep.name << ": " << f << "\n";
  }
  return {rep.passed(), detail};
}

Outcome correctness() {
  CorrectnessConfig cfg;
  cfg.params = {{1, 1}, {2, 3}, {3, 5}, {5, 8}};
  cfg.sizes = {0, 1, 8, 16};
  cfg.epochs = 50;
  cfg.seed = kSeed;
  return from_report(run_correctness_suite(cfg));
}

// Oracle: h^{f(0)} computed directly from the sampled polynomial.
Outcome shamir_equivalence() {
  SeededRandom rng(kSeed + 2);
  const G1Element& g = PairingContext::bls12_381().g1;
  std::size_t checked = 0;
  std::size_t failures = 0;
  for (std::uint32_t n = 1; n <= 6; ++n) {
    for (std::uint32_t t = 1; t <= n; ++t) {
      const auto f = sample_polynomial(t, rng);
      const G1Element h = g.pow(Scalar::random(rng));
      const G1Element direct = h.pow(f.secret());
      std::vector<ExponentShare> lifted;
      for (std::uint32_t i = 1; i <= n; ++i) lifted.emplace_back(i, h.pow(evaluate(f, i)));
      detail::for_each_subset(n, t, [&](const IndexSet& j) {
        ++checked;
        if (!(reconstruct_in_exponent(lifted, j) == direct)) ++failures;
      });
    }
  }
  // sum over n <= 6 of (2^n - 1) subsets
  const std::size_t expected = 1 + 3 + 7 + 15 + 31 + 63;
  return {failures == 0 && checked == expected,
          std::to_string(checked) + "/" + std::to_string(expected) + " t-subsets, " + std::to_string(failures) +
              " mismatches"};
}

Outcome threshold_boundary() {
  const SuiteReport a = run_threshold_boundary_check(2, 3, 20, kSeed + 3);
  const SuiteReport b = run_threshold_boundary_check(3, 5, 20, kSeed + 4);
  const Outcome oa = from_report(a);
  const Outcome ob = from_report(b);
  return {oa.ok && ob.ok, "(2,3): " + oa.detail + " | (3,5): " + ob.detail};
}

Outcome transparency() { return from_report(run_transparency_check(200, kSeed + 5)); }

Outcome one_time_enforcement() {
  SeededRandom rng(kSeed + 6);
  const KeyMaterial km = keygen(2, 3, rng);
  std::size_t second_calls = 0;
  std::size_t aborted = 0;

  auto try_again = [&](RedactorState& st, const SignedDocument& sd) {
    ++second_calls;
    try {
      red_inf(st, km.pk, sd.doc, sd.sig, {});
    } catch (const Error& e) {
      if (e.code() == ErrorCode::DidReplayed) ++aborted;
    }
  };

  // In memory: 20 documents, every redactor, varying second-call MODs.
  auto states = make_states(km.redactor_keys);
  for (int d = 0; d < 20; ++d) {
    const BlockSet blocks = detail::random_blocks(rng, 4);
    const SignedDocument sd = sign(km.sk, blocks, {}, rng);
    for (auto& st : states) {
      red_inf(st, km.pk, sd.doc, sd.sig, detail::random_subset(rng, blocks));
      try_again(st, sd);
    }
  }

  // Across a restart: the journal is closed and reopened between calls.
  std::string tmpl = (fs::temp_directory_path() / "tnrss-accept-XXXXXX").string();
  if (::mkdtemp(tmpl.data()) == nullptr) return {false, "cannot create temp dir"};
  const fs::path dir = tmpl;
  std::size_t restart_calls = 0;
  std::size_t restart_aborted = 0;
  {
    std::vector<SignedDocument> docs;
    for (int d = 0; d < 10; ++d) docs.push_back(sign(km.sk, detail::random_blocks(rng, 3), {}, rng));
    for (const auto& rk : km.redactor_keys) {
      const fs::path journal = dir / ("replay-" + std::to_string(rk.index) + ".journal");
      {
        RedactorState st{rk, ReplayList::open(journal)};
        for (const auto& sd : docs) red_inf(st, km.pk, sd.doc, sd.sig, {});
      }
      RedactorState restarted{rk, ReplayList::open(journal)};
      for (const auto& sd : docs) {
        const std::size_t before = aborted;
        try_again(restarted, sd);
        ++restart_calls;
        if (aborted > before) ++restart_aborted;
      }
    }
  }
  fs::remove_all(dir);

  return {aborted == second_calls && restart_aborted == restart_calls,
          std::to_string(aborted) + "/" + std::to_string(second_calls) + " second calls aborted with DidReplayed (" +
              std::to_string(restart_aborted) + "/" + std::to_string(restart_calls) + " after journal reload)"};
}

Outcome forgery_demo() {
  SeededRandom rng(kSeed + 7);
  const KeyMaterial km = keygen(2, 3, rng);
  const AttackTranscript open1 = run_forgery_demo(km);
  const AttackTranscript open2 = run_forgery_demo(km);
  ForgeryDemoConfig cfg;
  cfg.replay_protection = true;
  const AttackTranscript guarded1 = run_forgery_demo(km, cfg);
  const AttackTranscript guarded2 = run_forgery_demo(km, cfg);

  const BlockSet expected{Block("m1"), Block("m3")};
  const bool forged = open1.forgery_succeeded() && open1.forged->doc.blocks == expected;
  const bool blocked = guarded1.second_abort == ErrorCode::DidReplayed && !guarded1.forged;
  const bool deterministic = describe(open1) == describe(open2) && describe(guarded1) == describe(guarded2);
  return {forged && blocked && deterministic,
          std::string("unprotected: ") + (forged ? "M*={m1, m3} verifies and is novel" : "no forgery") +
              "; protected: " + (blocked ? "aborted at DidReplayed" : "not blocked") +
              "; deterministic: " + (deterministic ? "yes" : "no")};
}

Outcome tamper_rejection() {
  SeededRandom rng(kSeed + 8);
  const KeyMaterial km = keygen(2, 3, rng);
  std::size_t variants = 0;
  std::size_t false_accepts = 0;
  auto check = [&](const Document& d, const Signature& s) {
    ++variants;
    if (verify(km.pk, d, s)) ++false_accepts;
  };

  SignedDocument previous = sign(km.sk, detail::random_blocks(rng, 3), {}, rng);
  for (int k = 0; k < 100; ++k) {
    BlockSet blocks = detail::random_blocks(rng, rng.uniform(1, 8));
    // Empty blocks have no bit to flip; give every block at least one byte.
    BlockSet nonempty;
    for (const auto& b : blocks) nonempty.insert(b.bytes.empty() ? Block("e") : b);
    const BlockSet adm = detail::random_subset(rng, nonempty);
    const SignedDocument sd = sign(km.sk, nonempty, adm, rng);
    if (!verify(km.pk, sd.doc, sd.sig)) return {false, "document " + std::to_string(k) + " did not verify untampered"};

    for (const auto& b : sd.doc.blocks) {
      Block flipped = b;
      const auto bit = rng.uniform(0, b.size() * 8 - 1);
      flipped.bytes[bit / 8] ^= static_cast<std::uint8_t>(1u << (bit % 8));
      if (sd.doc.blocks.contains(flipped)) continue;
      Document d = sd.doc;
      d.blocks.erase(b);
      d.blocks.insert(flipped);
      if (d.adm.erase(b) > 0) d.adm.insert(flipped);
      check(d, sd.sig);
    }
    for (const auto& a : sd.doc.adm) {
      Document from_m = sd.doc;
      from_m.blocks.erase(a);
      check(from_m, sd.sig);
      Document from_both = from_m;
      from_both.adm.erase(a);
      check(from_both, sd.sig);
    }
    Document other_did = sd.doc;
    other_did.did = previous.doc.did;
    check(other_did, sd.sig);
    check(sd.doc, Signature{sd.sig.sigma_agg, sd.sig.sigma_fix});
    check(sd.doc, Signature{previous.sig.sigma_fix, sd.sig.sigma_agg});
    check(sd.doc, Signature{sd.sig.sigma_fix, previous.sig.sigma_agg});
    previous = sd;
  }
  return {false_accepts == 0, std::to_string(variants) + " tampered variants, " + std::to_string(false_accepts) +
                                  " false accepts"};
}

Outcome pairing_sanity() {
  SeededRandom rng(kSeed + 9);
  const PairingContext& ctx = PairingContext::bls12_381();
  const GTElement base = pairing(ctx.g1, ctx.g2);
  std::size_t failures = 0;
  for (int k = 0; k < 100; ++k) {
    const Scalar a = Scalar::random(rng);
    const Scalar b = Scalar::random(rng);
    const G1Element p = ctx.g1.pow(a);
    const G2Element q = ctx.g2.pow(b);
    if (!(pairing(p, q) == base.pow(a * b))) ++failures;
    if (!(pairing(p, q) == pairing(ctx.g1.pow(a * b), ctx.g2))) ++failures;
    if (!p.in_subgroup() || !q.in_subgroup()) ++failures;
    if (!(G1Element::from_compressed(p.compress()) == p)) ++failures;
    if (!(G2Element::from_compressed(q.compress()) == q)) ++failures;
    if (!(Scalar::from_bytes(a.to_bytes()) == a)) ++failures;
  }
  return {failures == 0, "100 elements per group, " + std::to_string(failures) + " failures"};
}

}  // namespace

int main() {
  std::cout << "acceptance seed " << kSeed << std::endl;
  int failed = 0;
  failed += !run_criterion(1, "correctness grid", 60, correctness);
  failed += !run_criterion(2, "shamir oracle equivalence", 10, shamir_equivalence);
  failed += !run_criterion(3, "threshold boundary", 30, threshold_boundary);
  failed += !run_criterion(4, "transparency by determinism", 30, transparency);
  failed += !run_criterion(5, "one-time enforcement", 10, one_time_enforcement);
  failed += !run_criterion(6, "multiple-redaction forgery demo", 5, forgery_demo);
  failed += !run_criterion(7, "tamper rejection", 60, tamper_rejection);
  failed += !run_criterion(8, "pairing-layer sanity", 10, pairing_sanity);
  std::cout << (8 - failed) << "/8 criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
