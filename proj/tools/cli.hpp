#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ngon::cli {

enum ExitCode : int { kOk = 0, kFailure = 1, kUsage = 2 };

struct RunSpec {
  std::string command;
  int n = 3;
  double m = 1.0;
  double m_min = 0.1;
  double m_max = 5.0;
  int steps = 50;
  int n_max = 10;
  std::string format = "text";
  bool no_assert = false;
  double tol_analytic = 1e-9;
  double tol_fd = 1e-5;
  double tol_kernel = 1e-7;
  bool flip_sep_sign = false;
};

/// Shortest representation that parses back to the same double.
std::string format_number(double x);

/// Parses args (without the program name) and runs one subcommand.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

int execute(const RunSpec& spec, std::ostream& out, std::ostream& err);

}  // namespace ngon::cli
