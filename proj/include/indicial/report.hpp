#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "indicial/extensions.hpp"

namespace indicial {

enum class Command { Roots, Classify, Sf, Extensions, Verify, All };

struct RunOptions {
  Command command = Command::All;
  Tolerances tol;
  std::optional<double> window;
  int samples = 201;
  bool json = true;
  unsigned seed = 1;
};

struct RunResult {
  int exit_code = 0;
  std::string output;
};

// Analysis of an already parsed pencil; never throws.
RunResult run_analysis(const PencilSpec& p, const RunOptions& opt);

// Reads the pencil from `path` ("-" for stdin).
RunResult run_file(const std::string& path, const RunOptions& opt);

// Full command line front end.
int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

int exit_code_for(ErrorCategory c);

}  // namespace indicial
