#include "qspec/pipeline.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <sys/wait.h>

using namespace qspec;

namespace {

const std::filesystem::path kExamples = QSPEC_EXAMPLES_DIR;

SystemConfig full(const std::string& source) {
  SystemConfig c;
  c.source = source;
  c.stages = {Stage::Validate, Stage::Crossed, Stage::Spectra, Stage::Theorems, Stage::Closure};
  return c;
}

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "qspec-cli-test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

void write(const std::filesystem::path& p, const std::string& text) { std::ofstream(p) << text; }

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int cli(const std::string& args) {
  const std::string cmd = std::string(QSPEC_CLI) + " -q " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST(Parse, BuiltinSources) {
  EXPECT_EQ(load_system("builtin:z2-flip")->algebra().dim(), 2);
  EXPECT_EQ(load_system("z2-flip")->name(), "z2-flip");
  const auto kp = load_system("builtin:kac-paljutkin-regular");
  EXPECT_EQ(kp->group().dim(), 8);
  EXPECT_EQ(kp->group().num_irreps(), 5);
}

TEST(Parse, UnknownBuiltinListsCatalog) {
  try {
    load_system("builtin:no-such-thing");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("z2-flip"), std::string::npos);
  }
}

TEST(Parse, SyntaxErrorCarriesLineAndColumn) {
  try {
    load_system((kExamples / "malformed.json").string());
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(e.where().find("line 4"), std::string::npos) << e.what();
  }
}

TEST(Parse, SchemaErrorsNameTheField) {
  const auto p = scratch("short-delta.json");
  write(p, R"j({"qgroup": "builtin:C(Z2)", "blocks": [1, 1], "delta": [[[1,0],[0,0]]]})j");
  try {
    load_system(p.string());
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.where(), "/delta");
  }
  write(p, R"j({"qgroup": "builtin:C(Z2)", "blocks": [0], "delta": []})j");
  EXPECT_THROW(load_system(p.string()), ParseError);
}

TEST(Parse, FileFormsMatchBuiltins) {
  const auto flip = load_system((kExamples / "coaction-flip.json").string());
  EXPECT_LT((flip->delta() - load_system("z2-flip")->delta()).norm(), 1e-12);
  const auto rot = load_system((kExamples / "classical-z3-rotation.json").string());
  EXPECT_LT((rot->delta() - load_system("z3-rotation")->delta()).norm(), 1e-12);
  const auto conj = load_system((kExamples / "classical-z2-conj.json").string());
  EXPECT_LT((conj->delta() - load_system("z2-conj-m2")->delta()).norm(), 1e-12);
}

TEST(Parse, QuantumGroupRoundTrip) {
  for (const auto& name : builtin_quantum_group_names()) {
    const auto g = builtin_quantum_group(name);
    const auto back = quantum_group_from_json(json::parse(quantum_group_to_json(*g).dump()));
    EXPECT_LT((back->comult() - g->comult()).norm(), 1e-12) << name;
    EXPECT_EQ(back->num_irreps(), g->num_irreps()) << name;
  }
}

TEST(Parse, MissingAntipodeIsSolved) {
  const auto g = quantum_group_from_json(io::read_file(kExamples / "qgroup-z2.json"));
  EXPECT_LT((g->antipode() - identity(2)).norm(), 1e-9);
}

TEST(Run, FlipAllChecks) {
  const RunReport r = run(full("builtin:z2-flip"));
  EXPECT_EQ(r.exit_code, kOk) << r.error;
  ASSERT_TRUE(r.spectra);
  EXPECT_TRUE(r.spectra->theorem_flags.all());
  EXPECT_TRUE(r.spectra->full(r.spectra->gamma_strong));
}

TEST(Run, TrivialOnTwoPointsIsNotPrime) {
  const RunReport r = run(full("builtin:trivial-c2-z2"));
  EXPECT_EQ(r.exit_code, kOk);
  EXPECT_FALSE(r.spectra->verdicts.crossed_prime);
  EXPECT_TRUE(r.spectra->theorem_flags.primeness);
}

TEST(Run, CapExceededIsClean) {
  SystemConfig c = full("builtin:kac-paljutkin-regular");
  c.cap = 16;
  const RunReport r = run(c);
  EXPECT_EQ(r.exit_code, kResourceCap);
  EXPECT_FALSE(r.error.empty());
  EXPECT_EQ(r.to_json()["exit_code"], 3);
}

TEST(Run, ToleranceOutOfRange) {
  SystemConfig c = full("builtin:z2-flip");
  c.tol = 1e-2;
  EXPECT_EQ(run(c).exit_code, kValidationFailure);
}

TEST(Run, InvalidCoactionIsValidationFailure) {
  const auto p = scratch("not-multiplicative.json");
  // δ(b0) = δ(b1) = b0⊗1 is not unital-multiplicative
  write(p, R"j({"qgroup": "builtin:C(Z2)", "blocks": [1, 1],
              "delta": [[1, 1], [1, 1], [0, 0], [0, 0]]})j");
  const RunReport r = run(full(p.string()));
  EXPECT_EQ(r.exit_code, kValidationFailure);
  EXPECT_NE(r.error.find("coaction"), std::string::npos) << r.error;
}

TEST(Run, ReportIsDeterministic) {
  for (const std::string s : {"builtin:s3-perm", "builtin:z2-conj-m2"}) {
    const std::string a = run(full(s)).to_json().dump(2);
    const std::string b = run(full(s)).to_json().dump(2);
    EXPECT_EQ(a, b) << s;
  }
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(cli("catalog"), 0);
  EXPECT_EQ(cli("verify builtin:z2-flip"), 0);
  EXPECT_EQ(cli("--cap 16 verify builtin:kac-paljutkin-regular"), 3);
  EXPECT_EQ(cli("validate " + (kExamples / "malformed.json").string()), 1);
  EXPECT_EQ(cli("validate builtin:no-such-thing"), 1);
  EXPECT_EQ(cli("--tol 0.5 validate builtin:z2-flip"), 1);
  EXPECT_EQ(cli("frobnicate"), 1);
}

TEST(Cli, JsonOutputIsByteIdentical) {
  const auto a = scratch("a.json"), b = scratch("b.json");
  ASSERT_EQ(cli("--json " + a.string() + " verify builtin:s3-regular builtin:z2-flip"), 0);
  ASSERT_EQ(cli("--json " + b.string() + " verify builtin:s3-regular builtin:z2-flip"), 0);
  const std::string ta = slurp(a);
  EXPECT_FALSE(ta.empty());
  EXPECT_EQ(ta, slurp(b));
  const json j = json::parse(ta);
  ASSERT_EQ(j.size(), 2u);
  EXPECT_EQ(j[1]["spectrum"]["gamma_strong"], json::array({0, 1}));
  EXPECT_FALSE(j[0].contains("timings"));
}

TEST(Cli, FailedRunStillWritesReport) {
  const auto p = scratch("cap.json");
  std::filesystem::remove(p);
  EXPECT_EQ(cli("--cap 16 --json " + p.string() + " verify builtin:kac-paljutkin-regular"), 3);
  const json j = json::parse(slurp(p));
  EXPECT_EQ(j["exit_code"], 3);
  EXPECT_TRUE(j.contains("error"));
}
