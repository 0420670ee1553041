#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <numbers>
#include <random>
#include <string>

#include "symctl/json_io.hpp"
#include "symctl/spin_model.hpp"

using namespace symctl;
namespace fs = std::filesystem;

namespace {

struct CliResult {
  int code = -1;
  std::string out;
  std::string err;
};

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / ("symctl_cli_" + std::string(info->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  CliResult run(const std::string& args) const {
    const std::string err_file = path("stderr.txt");
    const std::string cmd = std::string(SYMCTL_CLI) + " " + args + " 2>" + err_file;
    CliResult r;
    FILE* p = popen(cmd.c_str(), "r");
    char buf[4096];
    std::size_t got;
    while ((got = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, got);
    const int status = pclose(p);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    if (FILE* e = fopen(err_file.c_str(), "r")) {
      while ((got = fread(buf, 1, sizeof buf, e)) > 0) r.err.append(buf, got);
      fclose(e);
    }
    return r;
  }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, ClosureTwoSpins) {
  const auto r = run("closure --n 2");
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = io::json::parse(r.out);
  EXPECT_EQ(j.at("generated_dim").get<int>(), 9);
  EXPECT_EQ(j.at("predicted_dim").get<int>(), 9);
}

TEST_F(Cli, ModelNeedsTwoSpins) {
  const auto r = run("model --n 1");
  EXPECT_EQ(r.code, 2);
  EXPECT_EQ(io::json::parse(r.err).at("error").at("kind"), "usage");
}

TEST_F(Cli, UnknownFlagAndVerb) {
  EXPECT_EQ(run("model --n 2 --bogus").code, 2);
  EXPECT_EQ(run("frobnicate").code, 2);
  EXPECT_EQ(run("").code, 2);
}

TEST_F(Cli, ModelDump) {
  const auto r = run("model --n 2");
  ASSERT_EQ(r.code, 0);
  const Matrix zz = io::matrix_from_json(io::json::parse(r.out).at("H_zz"));
  EXPECT_EQ(tensor::max_abs(zz - spin::hamiltonian_zz(2)), 0.0);
}

TEST_F(Cli, InvarianceOfFile) {
  io::write_json_file(path("h.json"), io::matrix_to_json(spin::model(3).x));
  const auto yes = run("invariance --n 3 --matrix " + path("h.json"));
  ASSERT_EQ(yes.code, 0);
  EXPECT_TRUE(io::json::parse(yes.out).at("invariant").get<bool>());
  io::write_json_file(path("z.json"), io::matrix_to_json(tensor::pauli_string_matrix(
                                          tensor::PauliString::parse("z00"))));
  EXPECT_FALSE(io::json::parse(run("invariance --n 3 --matrix " + path("z.json")).out)
                   .at("invariant")
                   .get<bool>());
  EXPECT_EQ(run("invariance --n 2 --matrix " + path("z.json")).code, 1);
}

TEST_F(Cli, MissingFileIsValidationError) {
  const auto r = run("synth --n 2 --target " + path("nope.json"));
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(io::json::parse(r.err).at("error").at("kind"), "validation");
}

TEST_F(Cli, BasisAndIdentities) {
  const auto b = run("basis --n 3");
  ASSERT_EQ(b.code, 0);
  EXPECT_TRUE(io::json::parse(b.out).contains("M"));
  const auto i = run("identities --n 3");
  ASSERT_EQ(i.code, 0);
  EXPECT_GT(io::json::parse(i.out).at("evaluated").get<int>(), 0);
}

TEST_F(Cli, TransferThenSimulate) {
  const auto t = run("transfer --n 3 --from ket:000 --to w --out " + path("plan.json"));
  ASSERT_EQ(t.code, 0) << t.err;
  const auto ideal = run("simulate --schedule " + path("plan.json"));
  ASSERT_EQ(ideal.code, 0) << ideal.err;
  const auto ji = io::json::parse(ideal.out);
  EXPECT_EQ(ji.at("mode"), "ideal");
  EXPECT_GE(ji.at("fidelity").get<double>(), 1.0 - 1e-6);

  const auto hard = run("simulate --schedule " + path("plan.json") + " --amplitude 1000");
  ASSERT_EQ(hard.code, 0) << hard.err;
  EXPECT_GE(io::json::parse(hard.out).at("fidelity").get<double>(), 0.99);
}

TEST_F(Cli, SynthRoundTripReproducesError) {
  std::mt19937_64 rng(5);
  io::write_json_file(path("u.json"), io::matrix_to_json(tensor::random_unitary(4, rng)));
  const auto s = run("synth --n 3 --target " + path("u.json") + " --out " + path("p.json"));
  ASSERT_EQ(s.code, 0) << s.err;
  const double recorded = io::json::parse(s.out).at("reconstruction_error").get<double>();
  const auto sim = run("simulate --schedule " + path("p.json"));
  ASSERT_EQ(sim.code, 0) << sim.err;
  const double measured = io::json::parse(sim.out).at("reconstruction_error").get<double>();
  EXPECT_LE(measured, 2.0 * recorded);
  EXPECT_GE(measured, 0.5 * recorded);
}

TEST_F(Cli, SimulateScheduleWithNamedStates) {
  const double dt = std::numbers::pi / 4;
  io::write_json_file(path("s.json"),
                      io::json{{"n", 2}, {"segments", {{{"ux", 0.0}, {"uy", 0.0}, {"dt", dt}}}}});
  const auto r = run("simulate --schedule " + path("s.json") + " --initial ghz --target ghz");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(io::json::parse(r.out).at("fidelity").get<double>(), 1.0, 1e-12);
  EXPECT_EQ(run("simulate --schedule " + path("s.json") + " --amplitude 10").code, 1);
  EXPECT_EQ(run("simulate --schedule " + path("s.json") + " --amplitude -1").code, 2);
}

TEST_F(Cli, DeterministicOutput) {
  const auto a = run("transfer --n 3 --from ket:000 --to ghz --seed 3");
  const auto b = run("transfer --n 3 --from ket:000 --to ghz --seed 3");
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
}

TEST_F(Cli, VerifySingleCriterion) {
  const auto r = run("verify-all --criterion 5");
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = io::json::parse(r.out);
  EXPECT_TRUE(j.at("passed").get<bool>());
  EXPECT_EQ(j.at("criteria").size(), 1u);
}
