#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "hypbc/error.hpp"

using namespace hypbc;
using namespace hypbc::cli;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("hypbc_cli_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

ErrorCode parse_error(const std::vector<std::string>& args) {
  try {
    parse_config(args);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "parse_config accepted the arguments";
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST(ParseConfig, WaveSimulation) {
  const auto c = parse_config({"simulate", "preset=wave", "alpha=0.6", "beta=0.8", "nx=65", "ny=65", "t_end=1.0"});
  EXPECT_EQ(c.command, Command::Simulate);
  EXPECT_EQ(c.preset, "wave");
  EXPECT_EQ(c.params.at("alpha"), 0.6);
  EXPECT_EQ(c.nx, 65);
  EXPECT_EQ(c.ny, 65);
  EXPECT_EQ(c.t_end, 1.0);
  EXPECT_EQ(c.seed, 42u);
}

TEST(ParseConfig, ConflictingSources) {
  EXPECT_EQ(parse_error({"diagonalize", "preset=swe", "a1_file=a.txt"}), ErrorCode::ConflictingSources);
}

TEST(ParseConfig, UnknownKeyIsNamed) {
  try {
    parse_config({"verify", "preset=swe", "gravity=3"});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnknownKey);
    EXPECT_NE(std::string(e.what()).find("gravity"), std::string::npos);
  }
  EXPECT_EQ(parse_error({"verify", "preset=swe", "alpha=0.3"}), ErrorCode::UnknownKey);
}

TEST(ParseConfig, MissingInput) {
  EXPECT_EQ(parse_error({"verify"}), ErrorCode::MissingInput);
  EXPECT_EQ(parse_error({"verify", "a1_file=a.txt"}), ErrorCode::MissingInput);
  EXPECT_EQ(parse_error({}), ErrorCode::MissingInput);
  EXPECT_NO_THROW(parse_config({"preset-list"}));
}

TEST(ParseConfig, FlagsOverrideFile) {
  const auto dir = scratch("config");
  {
    std::ofstream f(dir / "run.cfg");
    f << "# grid\nnx = 33\nny = 17   # coarse\n\npreset = swe\nu0 = 2.5\n";
  }
  const auto c = parse_config({"verify", "config=" + (dir / "run.cfg").string(), "nx=65"});
  EXPECT_EQ(c.nx, 65);
  EXPECT_EQ(c.ny, 17);
  EXPECT_EQ(c.preset, "swe");
  EXPECT_EQ(c.params.at("u0"), 2.5);
}

TEST(ParseConfig, BadValues) {
  EXPECT_EQ(parse_error({"verify", "preset=swe", "nx=abc"}), ErrorCode::InvalidArgument);
  EXPECT_EQ(parse_error({"verify", "preset=swe", "cfl=1.5"}), ErrorCode::InvalidArgument);
  EXPECT_EQ(parse_error({"explode", "preset=swe"}), ErrorCode::InvalidArgument);
}

TEST(Execute, DiagonalizeWave) {
  const auto dir = scratch("diag");
  std::ostringstream out;
  std::ostringstream err;
  const int rc = main_entry({"diagonalize", "preset=wave", "alpha=0.6", "beta=0.8", "out=" + dir.string()}, out, err);
  EXPECT_EQ(rc, 0) << err.str();
  EXPECT_NE(out.str().find("StandardTypeII"), std::string::npos);
  EXPECT_NE(out.str().find("det=1"), std::string::npos);
  EXPECT_EQ(slurp(dir / "decomposition.txt"), out.str());
}

TEST(Execute, VerifyShallowWater) {
  const auto dir = scratch("verify");
  std::ostringstream out;
  std::ostringstream err;
  const int rc = main_entry({"verify", "preset=swe", "nx=17", "ny=17", "out=" + dir.string()}, out, err);
  EXPECT_EQ(rc, 0) << err.str();
  const std::string cert = slurp(dir / "cert.csv");
  EXPECT_EQ(cert.rfind("name,grid,residual,tol,verdict,rate\n", 0), 0u);
  EXPECT_EQ(cert.find(",fail,"), std::string::npos);
  EXPECT_NE(cert.find("energy_monotone"), std::string::npos);
  EXPECT_EQ(slurp(dir / "norms.csv").rfind("t,norm\n", 0), 0u);
}

TEST(Execute, MissingMatrixFile) {
  std::ostringstream out;
  std::ostringstream err;
  const int rc = main_entry({"diagonalize", "a1_file=/nonexistent/a1.txt", "a2_file=/nonexistent/a2.txt"}, out, err);
  EXPECT_EQ(rc, 1);
  EXPECT_NE(err.str().find("/nonexistent/a1.txt"), std::string::npos);
}

TEST(Execute, MatrixFilesWithSymmetrizer) {
  const auto dir = scratch("files");
  {
    std::ofstream(dir / "e1.txt") << "3 3\n2 0 1\n0 2 0\n1 0 2\n";
    std::ofstream(dir / "e2.txt") << "3 3\n3 0 0\n0 3 1\n0 1 3\n";
    std::ofstream(dir / "s0.txt") << "3 3\n1 0 0\n0 1 0\n0 0 1\n";
  }
  std::ostringstream out;
  std::ostringstream err;
  const int rc = main_entry({"bc", "a1_file=" + (dir / "e1.txt").string(), "a2_file=" + (dir / "e2.txt").string(),
                             "s0_file=" + (dir / "s0.txt").string(), "out=" + dir.string()},
                            out, err);
  EXPECT_EQ(rc, 0) << err.str();
  EXPECT_NE(out.str().find("mode 2: TypeI inflow="), std::string::npos);
  EXPECT_EQ(slurp(dir / "bcs.txt"), out.str());
}

TEST(Execute, SimulateWritesNorms) {
  const auto dir = scratch("simulate");
  std::ostringstream out;
  std::ostringstream err;
  const int rc = main_entry({"simulate", "preset=wave", "alpha=0.6", "beta=0.8", "nx=17", "ny=17", "t_end=0.5",
                             "snapshot=1", "out=" + dir.string()},
                            out, err);
  EXPECT_EQ(rc, 0) << err.str();
  EXPECT_NE(out.str().find("verdict=pass"), std::string::npos);
  EXPECT_TRUE(fs::exists(dir / "u_final_1.txt"));
}

TEST(Execute, ClassifyAndPresetList) {
  std::ostringstream out;
  std::ostringstream err;
  EXPECT_EQ(main_entry({"classify", "preset=swe", "u0=1", "v0=1", "g=10", "phi0=1", "out=" + scratch("cls").string()},
                       out, err),
            0);
  EXPECT_NE(out.str().find("type1 1"), std::string::npos);
  EXPECT_NE(out.str().find("type2 1"), std::string::npos);
  std::ostringstream list;
  EXPECT_EQ(main_entry({"preset-list"}, list, err), 0);
  EXPECT_NE(list.str().find("swmhd"), std::string::npos);
}

TEST(Execute, GenericityFailureIsInputError) {
  std::ostringstream out;
  std::ostringstream err;
  EXPECT_EQ(main_entry({"diagonalize", "preset=swe", "u0=1", "v0=2", "out=" + scratch("gen").string()}, out, err), 1);
  EXPECT_NE(err.str().find("GenericityViolated"), std::string::npos);
}
