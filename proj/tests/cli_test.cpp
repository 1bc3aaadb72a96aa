#include <gtest/gtest.h>
#include <sys/wait.h>

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct RunResult {
  int code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    std::string tmpl = (fs::temp_directory_path() / "tnrss-cli-XXXXXX").string();
    ASSERT_NE(::mkdtemp(tmpl.data()), nullptr);
    dir_ = tmpl;
  }
  void TearDown() override { fs::remove_all(dir_); }

  RunResult run(const std::string& args, const std::string& env = "") {
    const fs::path out = dir_ / "stdout.txt";
    const fs::path err = dir_ / "stderr.txt";
    const std::string cmd = env + " " + TNRSS_CLI_PATH + " " + args + " >" + out.string() + " 2>" + err.string();
    const int status = std::system(cmd.c_str());
    RunResult r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
  }

  std::string p(const std::string& name) const { return (dir_ / name).string(); }

  // Three blocks "alpha", "beta", "gamma"; ADM = {alpha}.
  void write_doc(const std::string& name) {
    std::ofstream(dir_ / name) << R"({"blocks": ["YWxwaGE=", "YmV0YQ==", "Z2FtbWE="], "adm_indices": [0]})";
  }

  void keygen_and_sign() {
    ASSERT_EQ(run("keygen --t 2 --n 3 --out-dir " + p("keys")).code, 0);
    write_doc("doc.json");
    ASSERT_EQ(run("sign --sk " + p("keys/sk.tnr") + " --doc " + p("doc.json") + " --out " + p("signed.json")).code, 0);
  }

  RunResult redinf(int i, const std::string& mod, const std::string& out, const std::string& doc = "signed.json") {
    return run("redinf --rk " + p("keys/rk-" + std::to_string(i) + ".tnr") + " --doc " + p(doc) + " --mod \"" +
               mod + "\" --state " + p("state") + " --out " + p(out));
  }

  fs::path dir_;
};

TEST_F(Cli, KeygenWritesAllFiles) {
  const RunResult r = run("keygen --t 2 --n 3 --out-dir " + p("keys"));
  ASSERT_EQ(r.code, 0) << r.err;
  for (const char* f : {"pk.tnr", "sk.tnr", "rk-1.tnr", "rk-2.tnr", "rk-3.tnr", "rvs.tnr"}) {
    EXPECT_TRUE(fs::exists(dir_ / "keys" / f)) << f;
  }
  EXPECT_NE(r.out.find("pk.tnr"), std::string::npos);
}

TEST_F(Cli, KeygenZeroThresholdIsValidationError) {
  const RunResult r = run("keygen --t 0 --n 3 --out-dir " + p("keys"));
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("InvalidParams"), std::string::npos) << r.err;
}

TEST_F(Cli, FullPipeline) {
  keygen_and_sign();
  EXPECT_EQ(run("verify --pk " + p("keys/pk.tnr") + " --doc " + p("signed.json")).code, 0);

  // beta gets three votes, gamma only one.
  ASSERT_EQ(redinf(1, "1", "ri1.bin").code, 0);
  ASSERT_EQ(redinf(2, "1,2", "ri2.bin").code, 0);
  ASSERT_EQ(redinf(3, "1", "ri3.bin").code, 0);
  const RunResult c = run("combine --pk " + p("keys/pk.tnr") + " --doc " + p("signed.json") + " --ri " + p("ri1.bin") +
                          " " + p("ri2.bin") + " " + p("ri3.bin") + " --rvs " + p("keys/rvs.tnr") + " --out " +
                          p("redacted.json"));
  ASSERT_EQ(c.code, 0) << c.err;

  const auto j = nlohmann::json::parse(slurp(dir_ / "redacted.json"));
  EXPECT_EQ(j["blocks"], nlohmann::json::array({"YWxwaGE=", "Z2FtbWE="}));
  EXPECT_EQ(j["adm_indices"], nlohmann::json::array({0}));
  EXPECT_EQ(run("verify --pk " + p("keys/pk.tnr") + " --doc " + p("redacted.json")).code, 0);
}

TEST_F(Cli, CombineBelowThresholdKeepsEverything) {
  keygen_and_sign();
  ASSERT_EQ(redinf(1, "2", "ri1.bin").code, 0);
  ASSERT_EQ(run("combine --pk " + p("keys/pk.tnr") + " --doc " + p("signed.json") + " --ri " + p("ri1.bin") +
                " --out " + p("redacted.json"))
                .code,
            0);
  const auto j = nlohmann::json::parse(slurp(dir_ / "redacted.json"));
  EXPECT_EQ(j["blocks"].size(), 3u);
  EXPECT_EQ(run("verify --pk " + p("keys/pk.tnr") + " --doc " + p("redacted.json")).code, 0);
}

TEST_F(Cli, RedinfTwiceOnOneDidIsRejected) {
  keygen_and_sign();
  ASSERT_EQ(redinf(1, "1", "ri1.bin").code, 0);
  const RunResult again = redinf(1, "2", "ri1b.bin");
  EXPECT_EQ(again.code, 2);
  EXPECT_NE(again.err.find("DidReplayed"), std::string::npos) << again.err;
  EXPECT_FALSE(fs::exists(dir_ / "ri1b.bin"));
}

TEST_F(Cli, RedinfRejectsAdmBlock) {
  keygen_and_sign();
  const RunResult r = redinf(1, "0", "ri.bin");
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("InvalidMod"), std::string::npos) << r.err;
}

TEST_F(Cli, VerifyRejectsFlippedBlock) {
  keygen_and_sign();
  auto j = nlohmann::json::parse(slurp(dir_ / "signed.json"));
  j["blocks"][2] = "Z2FtbWI=";  // gammb
  std::ofstream(dir_ / "tampered.json") << j.dump();
  const RunResult r = run("verify --pk " + p("keys/pk.tnr") + " --doc " + p("tampered.json"));
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(r.out, "reject\n");
}

TEST_F(Cli, VerifyRejectsUnsignedDocument) {
  ASSERT_EQ(run("keygen --t 1 --n 1 --out-dir " + p("keys")).code, 0);
  write_doc("doc.json");
  EXPECT_EQ(run("verify --pk " + p("keys/pk.tnr") + " --doc " + p("doc.json")).code, 1);
}

TEST_F(Cli, ForeignSharesAreCryptoFailure) {
  keygen_and_sign();
  ASSERT_EQ(run("sign --sk " + p("keys/sk.tnr") + " --doc " + p("doc.json") + " --out " + p("other.json")).code, 0);
  ASSERT_EQ(redinf(1, "1", "ri1.bin", "other.json").code, 0);
  ASSERT_EQ(redinf(2, "1", "ri2.bin", "other.json").code, 0);
  const RunResult r = run("combine --pk " + p("keys/pk.tnr") + " --doc " + p("signed.json") + " --ri " +
                          p("ri1.bin") + " " + p("ri2.bin") + " --out " + p("redacted.json"));
  EXPECT_EQ(r.code, 4);
  EXPECT_NE(r.err.find("CombineFailed"), std::string::npos) << r.err;
}

TEST_F(Cli, MissingInputIsIoError) {
  EXPECT_EQ(run("verify --pk " + p("nope.tnr") + " --doc " + p("nope.json")).code, 3);
}

TEST_F(Cli, MalformedDocumentIsValidationError) {
  ASSERT_EQ(run("keygen --t 1 --n 1 --out-dir " + p("keys")).code, 0);
  std::ofstream(dir_ / "bad.json") << R"({"blocks": ["YQ==", "YQ=="]})";
  EXPECT_EQ(run("sign --sk " + p("keys/sk.tnr") + " --doc " + p("bad.json") + " --out " + p("o.json")).code, 2);
  std::ofstream(dir_ / "bad2.json") << R"({"blocks": ["YQ=="], "adm_indices": [1]})";
  EXPECT_EQ(run("sign --sk " + p("keys/sk.tnr") + " --doc " + p("bad2.json") + " --out " + p("o.json")).code, 2);
}

TEST_F(Cli, UnknownProfileIsRejected) {
  EXPECT_EQ(run("keygen --t 1 --n 1 --out-dir " + p("keys"), "TNRSS_PROFILE=OTHER").code, 2);
  EXPECT_EQ(run("keygen --t 1 --n 1 --out-dir " + p("keys"), "TNRSS_PROFILE=TNRSS-V1").code, 0);
}

TEST_F(Cli, UsageErrorExitsTwo) { EXPECT_EQ(run("sign --sk x").code, 2); }

TEST_F(Cli, DemoForgery) {
  const RunResult r = run("demo forgery");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("forged signature VERIFIES"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("M*={m1, m3}"), std::string::npos) << r.out;
}

TEST_F(Cli, DemoForgeryProtected) {
  const RunResult r = run("demo forgery --protected");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("aborted at DidReplayed"), std::string::npos) << r.out;
  EXPECT_EQ(r.out.find("VERIFIES"), std::string::npos);
}

TEST_F(Cli, SelftestIsDeterministic) {
  const RunResult a = run("selftest --seed 42");
  const RunResult b = run("selftest --seed 42");
  EXPECT_EQ(a.code, 0) << a.out;
  EXPECT_EQ(a.out, b.out);
  EXPECT_NE(a.out.find("\"seed\":42"), std::string::npos);
}

}  // namespace
