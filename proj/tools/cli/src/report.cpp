#include "xprod_cli/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace xprod::cli {

std::string format_real(double v) {
  if (v == 0.0) v = 0.0;
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  std::string s(buf);
  return s == "-0" ? "0" : s;
}

std::string format_complex(std::complex<double> z) {
  if (std::abs(z.imag()) == 0.0) return format_real(z.real());
  return "(" + format_real(z.real()) + "," + format_real(z.imag()) + ")";
}

std::string format_bool(bool b) { return b ? "true" : "false"; }

void Report::set(const std::string& key, const std::string& value) {
  for (auto& [k, v] : lines_)
    if (k == key) {
      v = value;
      return;
    }
  lines_.emplace_back(key, value);
}

const std::string* Report::find(const std::string& key) const {
  for (const auto& [k, v] : lines_)
    if (k == key) return &v;
  return nullptr;
}

void Report::write(std::ostream& os) const {
  for (const auto& [k, v] : lines_) os << k << " = " << v << '\n';
}

std::string Report::str() const {
  std::ostringstream os;
  write(os);
  return os.str();
}

}  // namespace xprod::cli
