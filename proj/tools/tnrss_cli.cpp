// tnrss-cli: key generation, signing, per-redactor votes, combining,
// verification and the security demos.
//
// Exit codes: 0 accept/ok, 1 reject, 2 usage or validation, 3 I/O,
// 4 cryptographic failure.

#include <openssl/evp.h>
#include <openssl/sha.h>

#include <CLI11.hpp>
#include <json.hpp>

#include <array>
#include <cctype>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "tnrss/tnrss.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace tnrss;

namespace {

enum Exit : int {
  kAccept = 0,
  kReject = 1,
  kValidation = 2,
  kIo = 3,
  kCrypto = 4,
};

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::Io:
      return kIo;
    case ErrorCode::BadSignature:
    case ErrorCode::CombineFailed:
    case ErrorCode::InvertZero:
      return kCrypto;
    default:
      return kValidation;
  }
}

Bytes read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot read " + path.string());
  Bytes out((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw Error(ErrorCode::Io, "error reading " + path.string());
  return out;
}

void write_file(const fs::path& path, ByteSpan data, bool secret = false) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  if (secret) {
    std::error_code ec;
    fs::permissions(path, fs::perms::owner_read | fs::perms::owner_write, ec);
  }
  out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
  out.close();
  if (!out) throw Error(ErrorCode::Io, "error writing " + path.string());
}

void write_text(const fs::path& path, const std::string& text) {
  write_file(path, ByteSpan(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

std::string base64_encode(ByteSpan in) {
  std::string out(4 * ((in.size() + 2) / 3) + 1, '\0');
  const int n = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()), in.data(), static_cast<int>(in.size()));
  out.resize(static_cast<std::size_t>(n));
  return out;
}

Bytes base64_decode(std::string_view in) {
  if (in.size() % 4 != 0) throw Error(ErrorCode::Malformed, "base64 length is not a multiple of 4");
  std::size_t pad = 0;
  for (std::size_t i = 0; i < in.size(); ++i) {
    const char c = in[i];
    const bool alpha = std::isalnum(static_cast<unsigned char>(c)) || c == '+' || c == '/';
    if (c == '=' && i + 2 >= in.size()) {
      ++pad;
    } else if (!alpha || pad > 0) {
      throw Error(ErrorCode::Malformed, "invalid base64");
    }
  }
  if (in.empty()) return {};
  Bytes out(in.size() / 4 * 3);
  const int n = EVP_DecodeBlock(out.data(), reinterpret_cast<const unsigned char*>(in.data()), static_cast<int>(in.size()));
  if (n < 0) throw Error(ErrorCode::Malformed, "invalid base64");
  out.resize(static_cast<std::size_t>(n) - pad);
  return out;
}

std::string fingerprint(ByteSpan data) {
  std::array<std::uint8_t, SHA256_DIGEST_LENGTH> digest{};
  SHA256(data.data(), data.size(), digest.data());
  return to_hex(ByteSpan(digest).first(8));
}

// On-disk document: blocks keep the file's order; ADM is referenced by index.
struct DocumentFile {
  std::vector<Block> blocks;
  std::vector<std::size_t> adm_indices;
  std::optional<DocumentId> did;
  std::optional<Bytes> signature;

  Document document() const {
    Document doc;
    doc.blocks = make_block_set(blocks);
    for (std::size_t i : adm_indices) doc.adm.insert(blocks[i]);
    if (did) doc.did = *did;
    return doc;
  }
};

DocumentFile parse_document_file(const Bytes& raw) {
  json j;
  try {
    j = json::parse(raw.begin(), raw.end());
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Malformed, std::string("document is not valid JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("blocks") || !j["blocks"].is_array()) {
    throw Error(ErrorCode::Malformed, "document needs a \"blocks\" array");
  }
  DocumentFile df;
  for (const auto& b : j["blocks"]) {
    if (!b.is_string()) throw Error(ErrorCode::Malformed, "blocks must be base64 strings");
    df.blocks.emplace_back(base64_decode(b.get<std::string>()));
  }
  if (j.contains("adm_indices") && !j["adm_indices"].is_null()) {
    std::set<std::size_t> seen;
    for (const auto& v : j["adm_indices"]) {
      if (!v.is_number_unsigned()) throw Error(ErrorCode::Malformed, "adm_indices must be non-negative integers");
      const auto i = v.get<std::size_t>();
      if (i >= df.blocks.size()) throw Error(ErrorCode::Malformed, "adm index " + std::to_string(i) + " out of range");
      if (!seen.insert(i).second) throw Error(ErrorCode::Malformed, "duplicate adm index " + std::to_string(i));
      df.adm_indices.push_back(i);
    }
  }
  if (j.contains("did") && !j["did"].is_null()) {
    if (!j["did"].is_string()) throw Error(ErrorCode::Malformed, "did must be a hex string");
    df.did = DocumentId::from_bytes(from_hex(j["did"].get<std::string>()));
  }
  if (j.contains("signature") && !j["signature"].is_null()) {
    if (!j["signature"].is_string()) throw Error(ErrorCode::Malformed, "signature must be a hex string");
    df.signature = from_hex(j["signature"].get<std::string>());
  }
  return df;
}

std::string store_document_file(const DocumentFile& df) {
  json j;
  j["blocks"] = json::array();
  for (const auto& b : df.blocks) j["blocks"].push_back(base64_encode(b.bytes));
  j["adm_indices"] = df.adm_indices;
  j["did"] = df.did ? json(to_hex(df.did->bytes)) : json(nullptr);
  j["signature"] = df.signature ? json(to_hex(*df.signature)) : json(nullptr);
  return j.dump(2) + "\n";
}

DocumentFile load_document(const fs::path& path) { return parse_document_file(read_file(path)); }

// A signed document ready for red_inf / thr_red; malformed signatures are
// validation errors here.
SignedDocument signed_document(const DocumentFile& df) {
  if (!df.did) throw Error(ErrorCode::Malformed, "document has no did");
  if (!df.signature) throw Error(ErrorCode::Malformed, "document has no signature");
  return SignedDocument{df.document(), parse_signature_body(*df.signature)};
}

BlockSet parse_mod(const std::string& arg, const DocumentFile& df) {
  BlockSet mod;
  std::stringstream ss(arg);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t pos = 0;
    unsigned long idx = 0;
    try {
      idx = std::stoul(item, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos != item.size()) throw Error(ErrorCode::InvalidMod, "bad block index '" + item + "'");
    if (idx >= df.blocks.size()) throw Error(ErrorCode::InvalidMod, "block index " + item + " out of range");
    mod.insert(df.blocks[idx]);
  }
  return mod;
}

int cmd_keygen(std::uint32_t t, std::uint32_t n, const fs::path& dir) {
  SystemRandom rng;
  const KeyMaterial km = keygen(t, n, rng);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot create " + dir.string() + ": " + ec.message());

  auto emit = [&](const std::string& name, const Bytes& bytes, bool secret) {
    write_file(dir / name, bytes, secret);
    std::cout << name << "  " << fingerprint(bytes) << "\n";
  };
  emit("pk.tnr", serialize_public_key(km.pk), false);
  emit("sk.tnr", serialize_secret_key(km.sk), true);
  for (const auto& rk : km.redactor_keys) {
    emit("rk-" + std::to_string(rk.index) + ".tnr", serialize_redactor_key(rk, km.pk), true);
  }
  emit("rvs.tnr", serialize_verification_set(km.verification), false);
  return kAccept;
}

int cmd_sign(const fs::path& sk_path, const fs::path& doc_path, const fs::path& out_path) {
  const SecretKey sk = parse_secret_key(read_file(sk_path));
  DocumentFile df = load_document(doc_path);
  const Document doc = df.document();
  SystemRandom rng;
  const SignedDocument sd = sign(sk, doc.blocks, doc.adm, rng);
  df.did = sd.doc.did;
  df.signature = signature_body(sd.sig);
  write_text(out_path, store_document_file(df));
  std::cout << "did " << to_hex(sd.doc.did.bytes) << "\n";
  return kAccept;
}

int cmd_redinf(const fs::path& rk_path, const std::optional<fs::path>& pk_path, const fs::path& doc_path,
               const std::string& mod_arg, const fs::path& state_dir, const fs::path& out_path) {
  const RedactorKeyFile rkf = parse_redactor_key(read_file(rk_path));
  if (pk_path && !(parse_public_key(read_file(*pk_path)) == rkf.pk)) {
    throw Error(ErrorCode::InvalidParams, "redactor key was issued under a different public key");
  }
  const DocumentFile df = load_document(doc_path);
  const SignedDocument sd = signed_document(df);
  const BlockSet mod = parse_mod(mod_arg, df);

  std::error_code ec;
  fs::create_directories(state_dir, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot create " + state_dir.string() + ": " + ec.message());
  RedactorState state{rkf.key, ReplayList::open(state_dir / ("replay-" + std::to_string(rkf.key.index) + ".journal"))};

  const RedactionInfo ri = red_inf(state, rkf.pk, sd.doc, sd.sig, mod);
  write_file(out_path, serialize_redaction_info(ri));
  std::cout << "redactor " << ri.redactor_index << " released " << ri.shares.size() << " share(s)\n";
  return kAccept;
}

int cmd_combine(const fs::path& pk_path, const fs::path& doc_path, const std::vector<fs::path>& ri_paths,
                const std::optional<fs::path>& rvs_path, const fs::path& out_path) {
  const PublicKey pk = parse_public_key(read_file(pk_path));
  const DocumentFile df = load_document(doc_path);
  const SignedDocument sd = signed_document(df);
  std::vector<RedactionInfo> infos;
  for (const auto& p : ri_paths) infos.push_back(parse_redaction_info(read_file(p)));

  std::optional<RedactorVerificationSet> rvs;
  CombineOptions opts;
  if (rvs_path) {
    rvs = parse_verification_set(read_file(*rvs_path));
    if (rvs->points.size() != pk.n) throw Error(ErrorCode::InvalidParams, "verification set size does not match n");
    opts.verification = &*rvs;
  }
  const SignedDocument out = thr_red(pk, sd.doc, sd.sig, infos, opts);

  DocumentFile result;
  result.did = out.doc.did;
  result.signature = signature_body(out.sig);
  const std::set<std::size_t> adm(df.adm_indices.begin(), df.adm_indices.end());
  for (std::size_t i = 0; i < df.blocks.size(); ++i) {
    if (!out.doc.blocks.contains(df.blocks[i])) continue;
    if (adm.contains(i)) result.adm_indices.push_back(result.blocks.size());
    result.blocks.push_back(df.blocks[i]);
  }
  write_text(out_path, store_document_file(result));
  std::cout << "removed " << (sd.doc.blocks.size() - out.doc.blocks.size()) << " block(s)\n";
  return kAccept;
}

int cmd_verify(const fs::path& pk_path, const fs::path& doc_path) {
  const PublicKey pk = parse_public_key(read_file(pk_path));
  const DocumentFile df = load_document(doc_path);
  bool ok = false;
  if (df.did && df.signature) {
    try {
      ok = verify(pk, df.document(), parse_signature_body(*df.signature));
    } catch (const Error& e) {
      // An undecodable signature is a rejection, not a usage error.
      if (e.code() != ErrorCode::Malformed) throw;
    }
  }
  std::cout << (ok ? "accept" : "reject") << "\n";
  return ok ? kAccept : kReject;
}

KeyMaterial demo_keys(std::uint64_t seed) {
  SeededRandom rng(seed);
  return keygen(2, 3, rng);
}

int cmd_demo_forgery(bool protected_mode, std::uint64_t seed) {
  ForgeryDemoConfig cfg;
  cfg.replay_protection = protected_mode;
  const AttackTranscript tr = run_forgery_demo(demo_keys(seed), cfg);
  std::cout << describe(tr);
  const bool expected = protected_mode ? (tr.second_abort.has_value() && !tr.forgery_succeeded())
                                       : tr.forgery_succeeded();
  return expected ? kAccept : kReject;
}

SuiteReport forgery_suite(const KeyMaterial& km, std::uint64_t seed) {
  SuiteReport rep{"forgery-demo", seed};
  rep.trials = 2;
  const AttackTranscript open = run_forgery_demo(km);
  ForgeryDemoConfig cfg;
  cfg.replay_protection = true;
  const AttackTranscript guarded = run_forgery_demo(km, cfg);
  rep.lines.push_back(std::string("unprotected: ") + (open.forgery_succeeded() ? "novel tuple verifies" : "no forgery"));
  rep.lines.push_back(std::string("protected: ") +
                      (guarded.second_abort ? "aborted at " + std::string(to_string(*guarded.second_abort)) : "not aborted"));
  if (!open.forgery_succeeded()) {
    ++rep.failures;
    rep.failing_instances.push_back("unprotected run did not forge");
  }
  if (!guarded.second_abort || guarded.forgery_succeeded()) {
    ++rep.failures;
    rep.failing_instances.push_back("protected run was not blocked");
  }
  return rep;
}

int cmd_selftest(std::uint64_t seed) {
  std::vector<SuiteReport> reports;

  CorrectnessConfig cc;
  cc.params = {{1, 1}, {2, 3}, {3, 5}, {5, 8}};
  cc.epochs = 2;
  cc.seed = seed;
  reports.push_back(run_correctness_suite(cc));
  reports.push_back(run_transparency_check(20, seed));
  reports.push_back(run_threshold_boundary_check(2, 3, 3, seed));
  reports.push_back(run_threshold_boundary_check(3, 5, 1, seed));
  const KeyMaterial km = demo_keys(seed);
  reports.push_back(forgery_suite(km, seed));
  SuiteReport search = run_replay_protection_search(km);
  search.seed = seed;
  reports.push_back(search);

  bool ok = true;
  for (const auto& r : reports) {
    std::cout << r.text();
    ok = ok && r.passed();
  }
  for (const auto& r : reports) std::cout << r.summary().dump() << "\n";
  std::cout << (ok ? "selftest PASS" : "selftest FAIL") << "\n";
  return ok ? kAccept : kReject;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Threshold one-time redactable signatures"};
  app.require_subcommand(1);
  std::function<int()> action;

  std::uint32_t t = 0;
  std::uint32_t n = 0;
  std::string out_dir;
  auto* keygen_cmd = app.add_subcommand("keygen", "Generate pk, sk, redactor keys and verification set");
  keygen_cmd->add_option("--t", t, "Threshold")->required();
  keygen_cmd->add_option("--n", n, "Number of redactors")->required();
  keygen_cmd->add_option("--out-dir", out_dir, "Output directory")->required();
  keygen_cmd->callback([&] { action = [&] { return cmd_keygen(t, n, out_dir); }; });

  std::string sk_path, doc_path, out_path;
  auto* sign_cmd = app.add_subcommand("sign", "Sign a document file");
  sign_cmd->add_option("--sk", sk_path)->required();
  sign_cmd->add_option("--doc", doc_path)->required();
  sign_cmd->add_option("--out", out_path)->required();
  sign_cmd->callback([&] { action = [&] { return cmd_sign(sk_path, doc_path, out_path); }; });

  std::string rk_path, pk_path, mod_arg, state_dir;
  auto* redinf_cmd = app.add_subcommand("redinf", "Vote to redact blocks as one redactor");
  redinf_cmd->add_option("--rk", rk_path)->required();
  auto* redinf_pk = redinf_cmd->add_option("--pk", pk_path, "Check the key against this public key");
  redinf_cmd->add_option("--doc", doc_path)->required();
  redinf_cmd->add_option("--mod", mod_arg, "Comma-separated 0-based block indices")->required();
  redinf_cmd->add_option("--state", state_dir, "Directory holding the replay journal")->required();
  redinf_cmd->add_option("--out", out_path)->required();
  redinf_cmd->callback([&] {
    action = [&] {
      const std::optional<fs::path> pk = redinf_pk->count() ? std::optional<fs::path>(pk_path) : std::nullopt;
      return cmd_redinf(rk_path, pk, doc_path, mod_arg, state_dir, out_path);
    };
  });

  std::vector<std::string> ri_paths;
  std::string rvs_path;
  auto* combine_cmd = app.add_subcommand("combine", "Combine redaction infos into a redacted document");
  combine_cmd->add_option("--pk", pk_path)->required();
  combine_cmd->add_option("--doc", doc_path)->required();
  combine_cmd->add_option("--ri", ri_paths)->required();
  auto* combine_rvs = combine_cmd->add_option("--rvs", rvs_path, "Drop shares that fail the verification set");
  combine_cmd->add_option("--out", out_path)->required();
  combine_cmd->callback([&] {
    action = [&] {
      const std::vector<fs::path> ris(ri_paths.begin(), ri_paths.end());
      const std::optional<fs::path> rvs = combine_rvs->count() ? std::optional<fs::path>(rvs_path) : std::nullopt;
      return cmd_combine(pk_path, doc_path, ris, rvs, out_path);
    };
  });

  auto* verify_cmd = app.add_subcommand("verify", "Verify a signed document (exit 0 accept, 1 reject)");
  verify_cmd->add_option("--pk", pk_path)->required();
  verify_cmd->add_option("--doc", doc_path)->required();
  verify_cmd->callback([&] { action = [&] { return cmd_verify(pk_path, doc_path); }; });

  bool protected_mode = false;
  std::uint64_t seed = 1;
  auto* demo_cmd = app.add_subcommand("demo", "Security demonstrations");
  demo_cmd->require_subcommand(1);
  auto* forgery_cmd = demo_cmd->add_subcommand("forgery", "Multiple-redaction forgery");
  forgery_cmd->add_flag("--protected", protected_mode, "Enforce one redaction per document id");
  forgery_cmd->add_option("--seed", seed, "Key generation seed");
  forgery_cmd->callback([&] { action = [&] { return cmd_demo_forgery(protected_mode, seed); }; });

  auto* selftest_cmd = app.add_subcommand("selftest", "Run the seeded harness suites");
  selftest_cmd->add_option("--seed", seed, "Harness seed");
  selftest_cmd->callback([&] { action = [&] { return cmd_selftest(seed); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kAccept : kValidation;
  }

  if (const char* profile = std::getenv("TNRSS_PROFILE"); profile != nullptr && *profile != '\0') {
    if (kProfileName != profile) {
      std::cerr << "error: unsupported profile " << profile << " (supported: " << kProfileName << ")\n";
      return kValidation;
    }
  }

  try {
    return action();
  } catch (const Error& e) {
    std::cerr << "error: " << to_string(e.code()) << ": " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIo;
  }
}
