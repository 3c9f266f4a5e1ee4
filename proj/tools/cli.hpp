#pragma once

#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "walgebra/linalg.hpp"
#include "walgebra/pyramid.hpp"

namespace walgebra::cli {

enum class Format { Json, Latex, Text };

struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct RunConfig {
  std::string command;
  std::vector<int> partition;
  /// "identity", "E11", "zero" or a path to a whitespace-separated rational matrix.
  std::string sbar = "identity";
  std::optional<int> floor;
  int flows = 3;
  /// z-depth of the Adler checks; defaults to the floor.
  std::optional<int> depth;
  Format format = Format::Text;
  bool constrained = false;
  std::string out_dir;
  bool corrupt = false;

  /// -(2 p1 + 2) unless set.
  int effective_floor() const;
  int effective_depth() const;
};

/// Resolves the S-bar specification; ConfigError unless it is r1 x r1.
RatMatrix resolve_sbar(const std::string& choice, const Pyramid& pyr);

/// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kCheckFailed = 1;
inline constexpr int kUsage = 2;
inline constexpr int kComputeError = 3;

/// Full command line entry point; documents go to `out` unless --out is given.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Runs a parsed configuration.
int execute(const RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace walgebra::cli
