#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace hypbc::cli {

enum class Command { Diagonalize, Classify, Bc, Simulate, Verify, PresetList };

struct RunConfig {
  Command command = Command::Verify;

  // exactly one input source
  std::string preset;
  std::map<std::string, double> params;  // preset parameters
  std::string a1_file;
  std::string a2_file;
  std::string b_file;
  std::string s0_file;  // when set, a1/a2/b are unsymmetrized E1/E2/B

  int nx = 33;
  int ny = 33;
  double l1 = 1.0;
  double l2 = 1.0;
  std::optional<double> t_end;  // default 2 * l1 / max speed
  double cfl = 0.4;
  int output_every = 1;
  double tol = 1e-8;
  double cluster_tol = 1e-8;
  int samples = 10;  // random fields per mode in verify
  bool snapshot = false;
  std::string out = "hypbc_out";
  std::uint32_t seed = 42;
};

/// args[0] is the command; the rest are key=value flags. A `config=path`
/// flag reads "key = value" lines first, then the flags override them.
/// Throws UnknownKey, MissingInput, ConflictingSources, InvalidArgument.
RunConfig parse_config(const std::vector<std::string>& args);

/// Returns 0 when every requested certificate passes, 2 on certification
/// failure, 1 on input errors (reported on err).
int execute(const RunConfig& config, std::ostream& out, std::ostream& err);

/// parse_config + execute with the exit-code mapping.
int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hypbc::cli
