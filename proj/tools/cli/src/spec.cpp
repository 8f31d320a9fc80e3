#include "xprod_cli/spec.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace xprod::cli {

ParseError::ParseError(const std::string& source, std::size_t line, std::size_t column, const std::string& message)
    : ValidationError(source + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + message),
      line_(line),
      column_(column) {}

namespace {

struct Token {
  std::string text;
  std::size_t column;
};

std::vector<Token> tokenize(std::string_view line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    if (i >= line.size() || line[i] == '#') break;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r' && line[i] != '#') ++i;
    out.push_back({std::string(line.substr(start, i - start)), start + 1});
  }
  return out;
}

class Parser {
 public:
  Parser(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void fail(std::size_t col, const std::string& msg) const { throw ParseError(source_, line_, col, msg); }

  int integer(const Token& t, int lo) const {
    int v = 0;
    auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
    if (ec != std::errc() || p != t.text.data() + t.text.size()) fail(t.column, "expected an integer, got '" + t.text + "'");
    if (v < lo) fail(t.column, "value must be >= " + std::to_string(lo));
    return v;
  }

  double real(const Token& t) const {
    try {
      std::size_t used = 0;
      const double v = std::stod(t.text, &used);
      if (used != t.text.size()) throw std::invalid_argument("trailing");
      return v;
    } catch (const std::exception&) {
      fail(t.column, "expected a number, got '" + t.text + "'");
    }
  }

  void expect_count(const std::vector<Token>& toks, std::size_t n) const {
    if (toks.size() < n + 1) fail(toks[0].column + toks[0].text.size(), "missing value for '" + toks[0].text + "'");
    if (toks.size() > n + 1) fail(toks[n + 1].column, "unexpected token '" + toks[n + 1].text + "'");
  }

  void line(std::size_t number, const std::vector<Token>& toks, SystemSpec& spec) {
    line_ = number;
    const std::string& key = toks[0].text;
    if (key == "kind") {
      expect_count(toks, 1);
      if (seen_kind_) fail(toks[0].column, "kind given twice");
      seen_kind_ = true;
      if (toks[1].text == "dynsys") spec.kind = SystemKind::Dynsys;
      else if (toks[1].text == "ck") spec.kind = SystemKind::CK;
      else fail(toks[1].column, "unknown kind '" + toks[1].text + "' (expected dynsys or ck)");
    } else if (key == "points") {
      if (toks.size() < 2) fail(toks[0].column + key.size(), "points needs at least one label");
      if (!spec.labels.empty()) fail(toks[0].column, "points given twice");
      for (std::size_t i = 1; i < toks.size(); ++i) {
        for (std::size_t j = 1; j < i; ++j)
          if (toks[j].text == toks[i].text) fail(toks[i].column, "duplicate point label '" + toks[i].text + "'");
        spec.labels.push_back(toks[i].text);
      }
      dynsys_key(toks[0]);
    } else if (key == "map") {
      std::string a, b;
      std::size_t col_b = 0;
      if (toks.size() == 2) {
        const auto arrow = toks[1].text.find("->");
        if (arrow == std::string::npos) fail(toks[1].column, "expected 'x->y'");
        a = toks[1].text.substr(0, arrow);
        b = toks[1].text.substr(arrow + 2);
        col_b = toks[1].column + arrow + 2;
      } else if (toks.size() == 4 && toks[2].text == "->") {
        a = toks[1].text;
        b = toks[3].text;
        col_b = toks[3].column;
      } else {
        fail(toks[0].column, "expected 'map x->y'");
      }
      if (a.empty()) fail(toks[1].column, "missing source label");
      if (b.empty()) fail(col_b, "missing target label");
      map_positions_.push_back({number, toks[1].column, col_b});
      spec.pairs.emplace_back(a, b);
      dynsys_key(toks[0]);
    } else if (key == "row") {
      if (toks.size() < 2) fail(toks[0].column + key.size(), "row needs entries");
      std::vector<int> row;
      for (std::size_t i = 1; i < toks.size(); ++i) {
        const int v = integer(toks[i], 0);
        if (v > 1) fail(toks[i].column, "matrix entries must be 0 or 1");
        row.push_back(v);
      }
      row_positions_.push_back({number, toks[0].column});
      spec.rows.push_back(std::move(row));
      ck_key(toks[0]);
    } else if (key == "depth") {
      expect_count(toks, 1);
      spec.depth = integer(toks[1], 0);
    } else if (key == "window") {
      expect_count(toks, 1);
      spec.window = integer(toks[1], 1);
    } else if (key == "level") {
      expect_count(toks, 1);
      spec.level = integer(toks[1], 0);
    } else if (key == "functional") {
      expect_count(toks, 1);
      spec.functional = toks[1].text;
    } else if (key == "tolerance") {
      expect_count(toks, 1);
      const double t = real(toks[1]);
      if (!(t > 0.0)) fail(toks[1].column, "tolerance must be positive");
      spec.tolerance = t;
    } else {
      fail(toks[0].column, "unknown key '" + key + "'");
    }
  }

  void finish(SystemSpec& spec, std::size_t last_line) {
    line_ = last_line;
    if (!seen_kind_) fail(1, "missing 'kind'");
    if (spec.kind == SystemKind::Dynsys) {
      if (first_ck_) {
        line_ = first_ck_->first;
        fail(first_ck_->second, "'row' is not valid for kind dynsys");
      }
      if (spec.labels.empty()) fail(1, "dynsys spec needs 'points'");
      std::vector<bool> mapped(spec.labels.size(), false);
      for (std::size_t i = 0; i < spec.pairs.size(); ++i) {
        const auto& [a, b] = spec.pairs[i];
        const auto& pos = map_positions_[i];
        line_ = pos.line;
        auto find = [&](const std::string& l) -> std::optional<std::size_t> {
          for (std::size_t k = 0; k < spec.labels.size(); ++k)
            if (spec.labels[k] == l) return k;
          return std::nullopt;
        };
        const auto ia = find(a);
        if (!ia) fail(pos.col_a, "unknown point '" + a + "'");
        if (!find(b)) fail(pos.col_b, "unknown point '" + b + "'");
        if (mapped[*ia]) fail(pos.col_a, "point '" + a + "' mapped twice");
        mapped[*ia] = true;
      }
    } else {
      if (first_dynsys_) {
        line_ = first_dynsys_->first;
        fail(first_dynsys_->second, "'points'/'map' are not valid for kind ck");
      }
      if (spec.rows.empty()) fail(1, "ck spec needs 'row' lines");
      for (std::size_t i = 0; i < spec.rows.size(); ++i)
        if (spec.rows[i].size() != spec.rows.size()) {
          line_ = row_positions_[i].first;
          fail(row_positions_[i].second, "row has " + std::to_string(spec.rows[i].size()) + " entries, expected " +
                                             std::to_string(spec.rows.size()));
        }
    }
  }

 private:
  struct MapPos {
    std::size_t line, col_a, col_b;
  };
  void dynsys_key(const Token& t) {
    if (!first_dynsys_) first_dynsys_ = std::make_pair(line_, t.column);
  }
  void ck_key(const Token& t) {
    if (!first_ck_) first_ck_ = std::make_pair(line_, t.column);
  }

  std::string source_;
  std::size_t line_ = 0;
  bool seen_kind_ = false;
  std::vector<MapPos> map_positions_;
  std::vector<std::pair<std::size_t, std::size_t>> row_positions_;
  std::optional<std::pair<std::size_t, std::size_t>> first_dynsys_, first_ck_;
};

}  // namespace

SystemSpec parse_spec(std::string_view text, const std::string& source) {
  SystemSpec spec;
  Parser p(source);
  std::size_t number = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t end = std::min(text.find('\n', start), text.size());
    ++number;
    const auto toks = tokenize(text.substr(start, end - start));
    if (!toks.empty()) p.line(number, toks, spec);
    if (end == text.size()) break;
    start = end + 1;
  }
  p.finish(spec, number);
  return spec;
}

SystemSpec load_spec(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read spec file '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_spec(ss.str(), path.filename().string());
}

funalg::PointSet SystemSpec::point_set() const {
  if (kind != SystemKind::Dynsys) throw ContractError("not a dynsys spec");
  return funalg::PointSet(labels);
}

funalg::PartialMap SystemSpec::partial_map() const {
  const auto X = point_set();
  std::vector<std::pair<funalg::PointIndex, funalg::PointIndex>> idx;
  for (const auto& [a, b] : pairs) idx.emplace_back(*X.index_of(a), *X.index_of(b));
  return funalg::PartialMap::from_pairs(X, idx);
}

ck::CKMatrix SystemSpec::matrix() const {
  if (kind != SystemKind::CK) throw ContractError("not a ck spec");
  return ck::validate_matrix(rows);
}

std::string SystemSpec::canonical() const {
  std::ostringstream os;
  if (kind == SystemKind::Dynsys) {
    os << "dynsys";
    for (const auto& l : labels) os << ' ' << l;
    os << ';';
    for (const auto& [a, b] : pairs) os << a << "->" << b << ';';
  } else {
    os << "ck";
    for (const auto& r : rows) {
      os << ';';
      for (int v : r) os << v;
    }
  }
  return os.str();
}

}  // namespace xprod::cli
