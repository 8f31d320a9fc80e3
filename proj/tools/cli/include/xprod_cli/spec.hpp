#pragma once

// Line-oriented system description:
//
//   # comment
//   kind dynsys            | kind ck
//   points a b c           | row 1 1
//   map b->a               | row 1 0
//   depth 3
//   window 3
//   level 2
//   functional all
//   tolerance 1e-9

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "xprod/ckalg.hpp"
#include "xprod/errors.hpp"
#include "xprod/funalg.hpp"

namespace xprod::cli {

class ParseError : public ValidationError {
 public:
  ParseError(const std::string& source, std::size_t line, std::size_t column, const std::string& message);
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_, column_;
};

enum class SystemKind { Dynsys, CK };

struct SystemSpec {
  SystemKind kind = SystemKind::Dynsys;
  std::vector<std::string> labels;
  std::vector<std::pair<std::string, std::string>> pairs;
  std::vector<std::vector<int>> rows;
  std::optional<int> depth;
  std::optional<int> window;
  std::optional<int> level;
  std::string functional = "all";
  std::optional<double> tolerance;

  funalg::PointSet point_set() const;
  funalg::PartialMap partial_map() const;
  ck::CKMatrix matrix() const;
  /// Stable text form used for cache keys.
  std::string canonical() const;
};

SystemSpec parse_spec(std::string_view text, const std::string& source = "<spec>");
SystemSpec load_spec(const std::filesystem::path& path);

}  // namespace xprod::cli
