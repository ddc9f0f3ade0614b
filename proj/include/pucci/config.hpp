#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pucci/domain.hpp"
#include "pucci/operators.hpp"

namespace pucci {

/// Parse/validation failure with the offending location.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& what, int line, int column)
      : std::runtime_error(what + " (line " + std::to_string(line) + ", column " +
                           std::to_string(column) + ")"),
        line(line),
        column(column) {}
  int line = 0;
  int column = 0;
};

enum class Command { Eigen, Solve, Radial, VerifyOperator, Barrier, Compare };

const char* to_string(Command c);

/// Fully resolved run configuration. Every applied default is echoed in
/// `resolved` (section.key, value) in a fixed order so downstream records
/// carry the exact configuration that ran.
struct RunConfig {
  OperatorSpec op;
  bool eps_reg_explicit = false;
  DomainSpec domain;
  double h = 1.0 / 64;
  int stencil_width = 2;

  Command command = Command::Eigen;
  double bracket_tol = 0.05;  // eigen, compare
  double lambda = 0.0;        // solve
  double f_const = -1.0;      // solve
  double tol = 1e-8;          // solve, radial
  long max_steps = 0;         // solve
  int n_samples = 100000;     // verify-operator
  double gamma = 0.5;         // barrier
  double delta = 0.1;         // barrier
  double beta = -1.0;         // barrier

  std::string out_dir = "out";
  std::string prefix;  // defaults to the command name

  std::vector<std::pair<std::string, std::string>> resolved;
};

/// Parses the flat sectioned key = value format. Unknown keys and sections
/// are rejected by name with their position; numeric fields are validated
/// against the module preconditions (e.g. alpha > -1, 0 < a <= A).
RunConfig parse_config(const std::string& text);

}  // namespace pucci
