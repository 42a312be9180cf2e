#pragma once

#include "bergman/numeric.hpp"

#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace bergman {

// Exit codes shared by every command.
enum ExitCode { exit_pass = 0, exit_violation = 1, exit_config = 2 };

struct RunConfig {
  std::string command;
  std::string weight = "gaussian";
  int M = 8;
  unsigned precision = 256;
  // log-spaced grid; kept as text so it is generated at the working precision
  std::string h_min = "0.01";
  std::string h_max = "0.1";
  int h_count = 10;
  std::string out = "out";
  std::optional<std::string> tol;
  std::string method = "both";  // charles, hs or both
  std::optional<int> budget;
  // validate: coefficient table to check instead of computing one
  std::string table;
  // fit: validate report whose residuals feed the remainder fit
  std::string report;
  // fit: sigma to compare against ("auto" = 2s - 1 of the weight); unset = no check
  std::optional<std::string> target_sigma;
  std::optional<std::string> disc;
  std::optional<int> series_terms;
  // spcheck
  int dim = 1;
  int k_max = 4;
  std::string cubic = "0.1";
};

// Raised for inconsistent or missing configuration (exit code 2).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

void check_config(const RunConfig& c);
std::vector<Real> h_grid(const RunConfig& c);

int cmd_coeffs(const RunConfig& c, std::ostream& log);
int cmd_validate(const RunConfig& c, std::ostream& log);
int cmd_spcheck(const RunConfig& c, std::ostream& log);
int cmd_fit(const RunConfig& c, std::ostream& log);

// Dispatches on c.command at c.precision; maps exceptions to exit codes.
int run_command(const RunConfig& c, std::ostream& log, std::ostream& err);

}  // namespace bergman
