#include "xprod_cli/expression.hpp"

#include <cctype>
#include <cstdlib>

namespace xprod::cli {

ExpressionError::ExpressionError(std::size_t offset, const std::string& message)
    : ValidationError("expression offset " + std::to_string(offset) + ": " + message), offset_(offset) {}

namespace {

using cross::CrossedElement;

class ExprParser {
 public:
  ExprParser(std::string_view s, BackendPtr b) : s_(s), B_(std::move(b)) {}

  CrossedElement parse() {
    skip();
    if (pos_ == s_.size()) throw ExpressionError(pos_, "empty expression");
    CrossedElement x = expr();
    skip();
    if (pos_ != s_.size()) throw ExpressionError(pos_, std::string("unexpected '") + s_[pos_] + "'");
    return x;
  }

 private:
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  char peek() {
    skip();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }
  static bool starts_factor(char c) {
    return c == 'U' || c == 'a' || c == '(' || c == '.' || std::isdigit(static_cast<unsigned char>(c));
  }

  CrossedElement scalar(Complex z) { return cross::from_coefficient(B_, Complex(z) * B_->unit(0)); }

  CrossedElement expr() {
    CrossedElement x = term();
    for (char c = peek(); c == '+' || c == '-'; c = peek()) {
      ++pos_;
      CrossedElement y = term();
      x = c == '+' ? cross::cross_add(x, y) : cross::cross_sub(x, y);
    }
    return x;
  }

  CrossedElement term() {
    CrossedElement x = unary();
    while (peek() == '*') {
      ++pos_;
      x = cross::cross_mul(x, unary());
    }
    return x;
  }

  CrossedElement unary() {
    if (peek() == '-') {
      ++pos_;
      return cross::cross_scale(-1.0, unary());
    }
    return power();
  }

  CrossedElement power() {
    CrossedElement x = postfix();
    if (peek() == '^') {
      ++pos_;
      skip();
      const std::size_t at = pos_;
      std::size_t end = pos_;
      while (end < s_.size() && std::isdigit(static_cast<unsigned char>(s_[end]))) ++end;
      if (end == at) throw ExpressionError(at, "expected a nonnegative integer exponent");
      const int e = std::atoi(std::string(s_.substr(at, end - at)).c_str());
      if (end - at > 3 || e > cross::kDegreeCap) throw ExpressionError(at, "exponent too large");
      pos_ = end;
      x = cross::cross_pow(x, e);
    }
    return x;
  }

  CrossedElement postfix() {
    CrossedElement x = primary();
    while (peek() == '*') {
      std::size_t look = pos_ + 1;
      while (look < s_.size() && std::isspace(static_cast<unsigned char>(s_[look]))) ++look;
      if (look < s_.size() && starts_factor(s_[look])) break;
      pos_ += 1;
      x = cross::cross_star(x);
    }
    return x;
  }

  std::optional<double> try_number() {
    skip();
    const std::size_t at = pos_;
    std::size_t i = pos_;
    if (i < s_.size() && (s_[i] == '-' || s_[i] == '+')) ++i;
    const std::size_t digits = i;
    while (i < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[i])) || s_[i] == '.')) ++i;
    if (i == digits) return std::nullopt;
    if (i < s_.size() && (s_[i] == 'e' || s_[i] == 'E')) {
      std::size_t j = i + 1;
      if (j < s_.size() && (s_[j] == '-' || s_[j] == '+')) ++j;
      if (j < s_.size() && std::isdigit(static_cast<unsigned char>(s_[j]))) {
        i = j;
        while (i < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i]))) ++i;
      }
    }
    const std::string text(s_.substr(at, i - at));
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (end != text.c_str() + text.size()) throw ExpressionError(at, "malformed number '" + text + "'");
    pos_ = i;
    return v;
  }

  CrossedElement primary() {
    const char c = peek();
    const std::size_t at = pos_;
    if (c == 'U') {
      ++pos_;
      return cross::u_power(B_, 1);
    }
    if (c == 'a') {
      ++pos_;
      if (pos_ >= s_.size() || s_[pos_] != '(') throw ExpressionError(pos_, "expected '(' after 'a'");
      ++pos_;
      const std::size_t name_at = pos_;
      const std::size_t close = s_.find(')', pos_);
      if (close == std::string_view::npos) throw ExpressionError(name_at, "unterminated coefficient name");
      std::string name(s_.substr(name_at, close - name_at));
      while (!name.empty() && std::isspace(static_cast<unsigned char>(name.back()))) name.pop_back();
      std::size_t lead = 0;
      while (lead < name.size() && std::isspace(static_cast<unsigned char>(name[lead]))) ++lead;
      name = name.substr(lead);
      const auto el = B_->named_element(name);
      if (!el) throw ExpressionError(name_at + lead, "unknown coefficient '" + name + "'");
      pos_ = close + 1;
      return cross::from_coefficient(B_, *el);
    }
    if (c == '(') {
      ++pos_;
      const std::size_t save = pos_;
      if (auto re = try_number(); re && peek() == ',') {
        ++pos_;
        const std::size_t im_at = pos_;
        auto im = try_number();
        if (!im) throw ExpressionError(im_at, "expected the imaginary part");
        if (peek() != ')') throw ExpressionError(pos_, "expected ')'");
        ++pos_;
        return scalar(Complex(*re, *im));
      }
      pos_ = save;
      CrossedElement x = expr();
      if (peek() != ')') throw ExpressionError(pos_, "expected ')'");
      ++pos_;
      return x;
    }
    if (c == '.' || std::isdigit(static_cast<unsigned char>(c))) return scalar(*try_number());
    if (c == '\0') throw ExpressionError(at, "unexpected end of expression");
    throw ExpressionError(at, std::string("unexpected '") + c + "'");
  }

  std::string_view s_;
  BackendPtr B_;
  std::size_t pos_ = 0;
};

}  // namespace

cross::CrossedElement parse_expression(std::string_view text, const BackendPtr& backend) {
  return ExprParser(text, backend).parse();
}

}  // namespace xprod::cli
