#pragma once

#include <complex>
#include <cstddef>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace xprod::cli {

/// %.12g, with -0 printed as 0.
std::string format_real(double v);
std::string format_complex(std::complex<double> z);
std::string format_bool(bool b);

template <class T, class F>
std::string format_list(const std::vector<T>& items, F&& fmt) {
  std::string s = "[";
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) s += ", ";
    s += fmt(items[i]);
  }
  return s + "]";
}

/// Flat `key = value` document; lines keep insertion order.
class Report {
 public:
  void set(const std::string& key, const std::string& value);
  void set(const std::string& key, const char* value) { set(key, std::string(value)); }
  void set(const std::string& key, double value) { set(key, format_real(value)); }
  void set(const std::string& key, int value) { set(key, std::to_string(value)); }
  void set(const std::string& key, std::size_t value) { set(key, std::to_string(value)); }
  void set(const std::string& key, bool value) { set(key, format_bool(value)); }

  const std::vector<std::pair<std::string, std::string>>& lines() const { return lines_; }
  const std::string* find(const std::string& key) const;
  void write(std::ostream& os) const;
  std::string str() const;

 private:
  std::vector<std::pair<std::string, std::string>> lines_;
};

}  // namespace xprod::cli
