#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>

#include "xprod_cli/report.hpp"
#include "xprod_cli/spec.hpp"

namespace xprod::cli {

struct GlobalOptions {
  std::uint64_t seed = 0;
  std::optional<double> tolerance;
  std::optional<std::filesystem::path> cache_dir;
  bool timings = false;
};

struct EvalOptions {
  std::string expression;
  int norm_iters = 4;
  std::optional<int> window;
};

inline constexpr int kDefaultDepth = 3;
inline constexpr int kDefaultWindow = 3;
inline constexpr int kDefaultCKCoeffLevel = 2;
inline constexpr std::size_t kOrbitGuard = 1'000'000;

Report cmd_analyze(const SystemSpec& spec, const GlobalOptions& opts);
Report cmd_eval(const SystemSpec& spec, const EvalOptions& eval, const GlobalOptions& opts);
Report cmd_extend(const SystemSpec& spec, std::optional<int> depth, const GlobalOptions& opts);

/// Full command line; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace xprod::cli
