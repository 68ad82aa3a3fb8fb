#pragma once

// Subcommands behind the hypwave executable. Each returns the process exit
// status: 0 success, 2 configuration error, 3 blow-up, 4 failed checks.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

namespace hypwave {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitBlowUp = 3;
inline constexpr int kExitSuiteFailure = 4;

struct CommandOptions {
  std::optional<std::filesystem::path> config;  // defaults apply when absent
  std::filesystem::path out = "hypwave_out";
  int jobs = 1;
  std::optional<std::uint64_t> seed;  // overrides the config's seed
  // weights only
  std::optional<std::string> family;
  std::optional<double> param;
};

// HYPWAVE_OUT if set, else ./hypwave_out
std::filesystem::path default_output_root();

int cmd_solve(const CommandOptions& opt, std::ostream& out, std::ostream& err);
int cmd_truncation(const CommandOptions& opt, std::ostream& out, std::ostream& err);
int cmd_weights(const CommandOptions& opt, std::ostream& out, std::ostream& err);
int cmd_inequalities(const CommandOptions& opt, std::ostream& out, std::ostream& err);
int cmd_strichartz(const CommandOptions& opt, std::ostream& out, std::ostream& err);

// Dispatch by subcommand name; unknown names give kExitConfig.
int run_command(const std::string& name, const CommandOptions& opt, std::ostream& out, std::ostream& err);

}  // namespace hypwave
