#include "xprod_cli/cache.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include "xprod/errors.hpp"

namespace xprod::cli {

namespace fs = std::filesystem;

std::string cache_key(const std::string& text) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::optional<fs::path> resolve_cache_dir(const std::optional<fs::path>& flag) {
  if (flag) return flag;
  if (const char* env = std::getenv("XPROD_CACHE_DIR"); env && *env) return fs::path(env);
  return std::nullopt;
}

CacheLock::CacheLock(const fs::path& target) : lock_(target.string() + ".lock") {
  for (int attempt = 0; attempt < 400; ++attempt) {
    const int fd = ::open(lock_.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
    if (fd >= 0) {
      ::close(fd);
      return;
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(25));
  }
  throw ResourceError("cache lock '" + lock_.string() + "' is held by another process");
}

CacheLock::~CacheLock() {
  std::error_code ec;
  fs::remove(lock_, ec);
}

void write_atomic(const fs::path& path, const std::string& content) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ResourceError("cannot write cache file '" + tmp.string() + "'");
    out << content;
    if (!out) throw ResourceError("short write to '" + tmp.string() + "'");
  }
  fs::rename(tmp, path);
}

std::optional<std::string> read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

namespace {

[[noreturn]] void corrupt(const std::string& what) { throw ValidationError("corrupt cache file: " + what); }

std::string expect_line(std::istringstream& in, const std::string& head) {
  std::string line;
  if (!std::getline(in, line) || line.rfind(head, 0) != 0) corrupt("expected '" + head + "'");
  return line.substr(head.size());
}

}  // namespace

OrbitCache build_orbit_cache(const dynsys::ReversibleExtension& ext, const std::string& system, int depth) {
  OrbitCache c;
  c.system = system;
  c.depth = depth;
  for (int n = 0; n <= depth; ++n) {
    const auto pts = ext.orbit_points(n);
    const std::size_t t = dynsys::count_terminated(pts);
    c.terminated.push_back(t);
    c.cylinders.push_back(pts.size() - t);
    if (n == depth) c.points = pts;
  }
  return c;
}

std::string serialize(const OrbitCache& c) {
  std::ostringstream os;
  os << "xprod-orbits 1\n";
  os << "system " << c.system << '\n';
  os << "depth " << c.depth << '\n';
  for (int n = 0; n <= c.depth; ++n)
    os << "count " << n << ' ' << c.terminated[static_cast<std::size_t>(n)] << ' '
       << c.cylinders[static_cast<std::size_t>(n)] << '\n';
  for (const auto& p : c.points) {
    os << "point " << (p.terminated ? 'T' : 'C');
    for (auto e : p.entries) os << ' ' << e;
    os << '\n';
  }
  return os.str();
}

OrbitCache parse_orbit_cache(const std::string& text) {
  std::istringstream in(text);
  OrbitCache c;
  if (expect_line(in, "xprod-orbits ") != "1") corrupt("unsupported orbit cache version");
  c.system = expect_line(in, "system ");
  c.depth = std::stoi(expect_line(in, "depth "));
  for (int n = 0; n <= c.depth; ++n) {
    std::istringstream row(expect_line(in, "count "));
    int level = -1;
    std::size_t t = 0, y = 0;
    if (!(row >> level >> t >> y) || level != n) corrupt("bad count line");
    c.terminated.push_back(t);
    c.cylinders.push_back(y);
  }
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string tag;
    char kind = 0;
    if (!(row >> tag >> kind) || tag != "point" || (kind != 'T' && kind != 'C')) corrupt("bad point line");
    dynsys::OrbitPoint p;
    p.terminated = kind == 'T';
    std::size_t e = 0;
    while (row >> e) p.entries.push_back(e);
    if (p.entries.empty()) corrupt("empty point");
    c.points.push_back(std::move(p));
  }
  return c;
}

AFCache build_af_cache(const ck::AFStructure& af, const std::string& system) {
  AFCache c;
  c.system = system;
  c.levels = af.max_level();
  for (int k = 0; k <= af.max_level(); ++k) {
    std::vector<long> dims;
    std::vector<std::vector<std::string>> words;
    for (int r = 0; r < af.symbols(); ++r) {
      dims.push_back(static_cast<long>(af.words(k, r).size()));
      std::vector<std::string> ws;
      for (const auto& w : af.words(k, r)) ws.push_back(ck::format_word(w));
      words.push_back(std::move(ws));
    }
    c.dims.push_back(std::move(dims));
    c.words.push_back(std::move(words));
  }
  for (int k = 1; k <= af.max_level(); ++k) {
    const BlockElement d1 = af.lift(af.ck_delta(af.unit(0)), k);
    std::vector<std::vector<double>> blocks;
    for (const auto& b : d1.blocks()) {
      std::vector<double> vals;
      for (Eigen::Index i = 0; i < b.rows(); ++i)
        for (Eigen::Index j = 0; j < b.cols(); ++j) vals.push_back(b(i, j).real());
      blocks.push_back(std::move(vals));
    }
    c.delta_one.push_back(std::move(blocks));
  }
  return c;
}

std::string serialize(const AFCache& c) {
  std::ostringstream os;
  os << "xprod-af 1\n";
  os << "system " << c.system << '\n';
  os << "levels " << c.levels << '\n';
  for (int k = 0; k <= c.levels; ++k) {
    const auto& dims = c.dims[static_cast<std::size_t>(k)];
    os << "level " << k << " dims";
    for (long d : dims) os << ' ' << d;
    os << '\n';
    for (std::size_t r = 0; r < dims.size(); ++r) {
      os << "words " << k << ' ' << r + 1;
      for (const auto& w : c.words[static_cast<std::size_t>(k)][r]) os << ' ' << w;
      os << '\n';
    }
  }
  char buf[40];
  for (int k = 1; k <= c.levels; ++k)
    for (std::size_t r = 0; r < c.delta_one[static_cast<std::size_t>(k - 1)].size(); ++r) {
      os << "delta1 " << k << ' ' << r + 1;
      for (double v : c.delta_one[static_cast<std::size_t>(k - 1)][r]) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        os << ' ' << buf;
      }
      os << '\n';
    }
  return os.str();
}

AFCache parse_af_cache(const std::string& text) {
  std::istringstream in(text);
  AFCache c;
  if (expect_line(in, "xprod-af ") != "1") corrupt("unsupported AF cache version");
  c.system = expect_line(in, "system ");
  c.levels = std::stoi(expect_line(in, "levels "));
  for (int k = 0; k <= c.levels; ++k) {
    std::istringstream row(expect_line(in, "level "));
    int level = -1;
    std::string tag;
    if (!(row >> level >> tag) || level != k || tag != "dims") corrupt("bad level line");
    std::vector<long> dims;
    long d = 0;
    while (row >> d) dims.push_back(d);
    std::vector<std::vector<std::string>> words;
    for (std::size_t r = 0; r < dims.size(); ++r) {
      std::istringstream wr(expect_line(in, "words "));
      int lk = -1;
      std::size_t rr = 0;
      if (!(wr >> lk >> rr) || lk != k || rr != r + 1) corrupt("bad words line");
      std::vector<std::string> ws;
      std::string w;
      while (wr >> w) ws.push_back(w);
      if (static_cast<long>(ws.size()) != dims[r]) corrupt("word count does not match block dimension");
      words.push_back(std::move(ws));
    }
    c.dims.push_back(std::move(dims));
    c.words.push_back(std::move(words));
  }
  for (int k = 1; k <= c.levels; ++k) {
    std::vector<std::vector<double>> blocks;
    for (std::size_t r = 0; r < c.dims[static_cast<std::size_t>(k)].size(); ++r) {
      std::istringstream mr(expect_line(in, "delta1 "));
      int lk = -1;
      std::size_t rr = 0;
      if (!(mr >> lk >> rr) || lk != k || rr != r + 1) corrupt("bad delta1 line");
      std::vector<double> vals;
      std::string v;
      while (mr >> v) vals.push_back(std::strtod(v.c_str(), nullptr));
      const long d = c.dims[static_cast<std::size_t>(k)][r];
      if (static_cast<long>(vals.size()) != d * d) corrupt("matrix size does not match block dimension");
      blocks.push_back(std::move(vals));
    }
    c.delta_one.push_back(std::move(blocks));
  }
  return c;
}

}  // namespace xprod::cli
