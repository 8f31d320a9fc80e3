#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "support/fixtures.hpp"
#include "xprod/funalg.hpp"
#include "xprod_cli/cache.hpp"
#include "xprod_cli/commands.hpp"
#include "xprod_cli/expression.hpp"
#include "xprod_cli/spec.hpp"

namespace fs = std::filesystem;
namespace fx = xprod::testing;
using namespace xprod;
using namespace xprod::cli;

namespace {

const char* kChain = "kind dynsys\npoints 1 2 3\nmap 2->1\nmap 3->2\n";

template <class F>
ParseError parse_error(F&& f) {
  try {
    f();
  } catch (const ParseError& e) {
    return e;
  }
  ADD_FAILURE() << "no parse error";
  return ParseError("<none>", 0, 0, "");
}

std::size_t expression_offset(const std::string& text, const BackendPtr& B) {
  try {
    parse_expression(text, B);
  } catch (const ExpressionError& e) {
    return e.offset();
  }
  ADD_FAILURE() << "no error for '" << text << "'";
  return std::string::npos;
}

BackendPtr chain_backend() {
  auto X = fx::points(3);
  return std::make_shared<funalg::FunBackend>(X, fx::chain3(X));
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("xprod-cli-" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
                                        "-" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  fs::path write(const std::string& name, const std::string& text) const {
    std::ofstream(path / name) << text;
    return path / name;
  }
};

struct Run {
  int code;
  std::string out, err;
};

Run run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "xprod");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST(SpecParser, ReadsDynsys) {
  const auto s = parse_spec(std::string(kChain) + "depth 4\n# note\nwindow 2\n");
  EXPECT_EQ(s.kind, SystemKind::Dynsys);
  EXPECT_EQ(s.labels.size(), 3u);
  ASSERT_EQ(s.pairs.size(), 2u);
  EXPECT_EQ(*s.depth, 4);
  EXPECT_EQ(*s.window, 2);
  EXPECT_TRUE(s.partial_map().injective());
}

TEST(SpecParser, ArrowWithSpaces) {
  const auto s = parse_spec("kind dynsys\npoints a b\nmap a -> b\n");
  ASSERT_EQ(s.pairs.size(), 1u);
  EXPECT_EQ(s.pairs[0].second, "b");
}

TEST(SpecParser, ReadsCK) {
  const auto s = parse_spec("kind ck\nrow 1 1\nrow 0 1\nlevel 3\n");
  EXPECT_EQ(s.matrix().size(), 2);
  EXPECT_EQ(*s.level, 3);
}

TEST(SpecParser, UnknownKeyReportsLineAndColumn) {
  const auto e = parse_error([] { parse_spec("kind dynsys\npoints 1 2\n  colour red\n", "sys.txt"); });
  EXPECT_EQ(e.line(), 3u);
  EXPECT_EQ(e.column(), 3u);
  EXPECT_NE(std::string(e.what()).find("sys.txt:3:3"), std::string::npos);
}

TEST(SpecParser, UnknownLabelPointsAtLabel) {
  const auto e = parse_error([] { parse_spec("kind dynsys\npoints 1 2\nmap 1->7\n"); });
  EXPECT_EQ(e.line(), 3u);
  EXPECT_EQ(e.column(), 8u);
}

TEST(SpecParser, DoubleMappingRejected) {
  const auto e = parse_error([] { parse_spec("kind dynsys\npoints 1 2\nmap 1->2\nmap 1->1\n"); });
  EXPECT_EQ(e.line(), 4u);
}

TEST(SpecParser, RowLengthMismatch) {
  const auto e = parse_error([] { parse_spec("kind ck\nrow 1 1\nrow 1\n"); });
  EXPECT_EQ(e.line(), 3u);
}

TEST(SpecParser, KindMismatch) {
  const auto e = parse_error([] { parse_spec("kind ck\nrow 1\npoints a\n"); });
  EXPECT_EQ(e.line(), 3u);
  EXPECT_THROW(parse_spec("points a\n"), ParseError);
}

TEST(SpecParser, NonBinaryEntry) {
  const auto e = parse_error([] { parse_spec("kind ck\nrow 1 2\n"); });
  EXPECT_EQ(e.column(), 7u);
}

TEST(SpecParser, CanonicalIgnoresFormatting) {
  const auto a = parse_spec(kChain);
  const auto b = parse_spec("# same system\nkind   dynsys\npoints 1 2 3\nmap 2 -> 1\n\nmap 3->2\n");
  EXPECT_EQ(a.canonical(), b.canonical());
}

TEST(Expression, OffsetsOfErrors) {
  const auto B = chain_backend();
  EXPECT_EQ(expression_offset("a(chi1) + ", B), 10u);
  EXPECT_EQ(expression_offset("a(nope)", B), 2u);
  EXPECT_EQ(expression_offset("U^x", B), 2u);
  EXPECT_EQ(expression_offset("U ) ", B), 2u);
  EXPECT_EQ(expression_offset("", B), 0u);
  EXPECT_EQ(expression_offset("(1,", B), 3u);
}

TEST(Expression, PostfixStarIsAdjoint) {
  const auto B = chain_backend();
  const auto U = cross::u_power(B, 1);
  const auto Us = cross::cross_star(U);
  EXPECT_EQ(cross::cross_distance(parse_expression("U*", B), Us), 0.0);
  EXPECT_EQ(cross::cross_distance(parse_expression("U * U*", B), cross::cross_mul(U, Us)), 0.0);
  EXPECT_EQ(cross::cross_distance(parse_expression("U*U", B), cross::cross_mul(U, U)), 0.0);
  EXPECT_EQ(cross::cross_distance(parse_expression("U* * U", B), cross::cross_mul(Us, U)), 0.0);
  EXPECT_EQ(cross::cross_distance(parse_expression("U**", B), U), 0.0);
  EXPECT_EQ(cross::cross_distance(parse_expression("U*^2", B), cross::cross_pow(Us, 2)), 0.0);
}

TEST(Expression, RewritesToDeltaOne) {
  const auto B = chain_backend();
  const auto x = parse_expression("U * U*", B);
  const auto d1 = cross::from_coefficient(B, *B->named_element("d1"));
  EXPECT_EQ(cross::cross_distance(x, d1), 0.0);
  EXPECT_TRUE(cross::is_zero(parse_expression("0", B)));
  EXPECT_TRUE(cross::is_zero(parse_expression("a(chi1) - a(chi1)", B)));
}

TEST(Expression, ComplexScalarsAndWhitespace) {
  const auto B = chain_backend();
  const auto x = parse_expression(" ( 0 , 2 ) *a(chi2)", B);
  const auto y = parse_expression("(0,2)*a(chi2)", B);
  EXPECT_EQ(cross::cross_distance(x, y), 0.0);
  EXPECT_EQ(cross::coeff_N(x, 0).block(1)(0, 0), Complex(0, 2));
}

TEST(Cache, KeyIsStable) {
  EXPECT_EQ(cache_key(""), "cbf29ce484222325");
  EXPECT_EQ(cache_key("a"), "af63dc4c8601ec8c");
  EXPECT_EQ(cache_key("foobar"), "85944171f73967e8");
  EXPECT_NE(cache_key("a"), cache_key("b"));
}

TEST(Cache, OrbitRoundTrip) {
  auto X = fx::points(2);
  const dynsys::ReversibleExtension ext(X, fx::collapse2(X));
  const auto c = build_orbit_cache(ext, "collapse", 4);
  EXPECT_EQ(parse_orbit_cache(serialize(c)), c);
  EXPECT_THROW(parse_orbit_cache("xprod-orbits 2\n"), ValidationError);
}

TEST(Cache, AFRoundTrip) {
  const ck::AFStructure af(fx::full2(), 3);
  const auto c = build_af_cache(af, "full2");
  const auto back = parse_af_cache(serialize(c));
  EXPECT_EQ(back, c);
  EXPECT_EQ(back.dims[3], (std::vector<long>{8, 8}));
}

TEST(Cli, ExitCodes) {
  TempDir dir;
  const auto good = dir.write("good.txt", kChain);
  const auto bad = dir.write("bad.txt", "kind dynsys\npoints 1\nshape round\n");
  const auto deep = dir.write("deep.txt", "kind ck\nrow 1 1\nrow 1 1\ndepth 7\n");
  const auto nontransfer = dir.write("coll.txt", "kind dynsys\npoints 1 2\nmap 1->1\nmap 2->1\n");
  EXPECT_EQ(run_cli({"analyze", good.string()}).code, 0);
  const auto r = run_cli({"analyze", bad.string()});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("bad.txt:3:1"), std::string::npos);
  EXPECT_EQ(run_cli({"analyze", deep.string()}).code, 3);
  EXPECT_EQ(run_cli({"analyze", (dir.path / "missing.txt").string()}).code, 2);
  EXPECT_EQ(run_cli({"frobnicate"}).code, 2);
  const auto refused = run_cli({"eval", nontransfer.string(), "-e", "U"});
  EXPECT_EQ(refused.code, 2);
  EXPECT_NE(refused.err.find("extend the system first"), std::string::npos);
  EXPECT_EQ(run_cli({"eval", good.string(), "-e", "a(chi1) +"}).code, 2);
}

TEST(Cli, DeterministicReports) {
  TempDir dir;
  const auto spec = dir.write("s.txt", kChain);
  for (const std::vector<std::string>& args :
       {std::vector<std::string>{"analyze", spec.string()},
        std::vector<std::string>{"--seed", "11", "eval", spec.string(), "-e", "a(chi1) + U"},
        std::vector<std::string>{"extend", spec.string(), "--depth", "3"}}) {
    const auto a = run_cli(args), b = run_cli(args);
    EXPECT_EQ(a.code, 0);
    EXPECT_EQ(a.out, b.out);
  }
  EXPECT_NE(run_cli({"--seed", "11", "eval", spec.string(), "-e", "U"}).out.find("seed = 11"), std::string::npos);
}

TEST(Cli, TimingsOnlyOnRequest) {
  TempDir dir;
  const auto spec = dir.write("s.txt", kChain);
  EXPECT_EQ(run_cli({"analyze", spec.string()}).out.find("timing."), std::string::npos);
  EXPECT_NE(run_cli({"--timings", "analyze", spec.string()}).out.find("timing.total_ms"), std::string::npos);
}

TEST(Cli, CacheRoundTripAndRepair) {
  TempDir dir;
  const auto spec = dir.write("s.txt", "kind dynsys\npoints 1 2\nmap 1->1\nmap 2->1\n");
  const auto cache = dir.path / "cache";
  const std::vector<std::string> args{"--cache-dir", cache.string(), "extend", spec.string(), "--depth", "4"};
  const auto first = run_cli(args);
  ASSERT_EQ(first.code, 0);
  EXPECT_NE(first.out.find("cache_verified = true"), std::string::npos);
  std::vector<fs::path> files(fs::directory_iterator(cache), fs::directory_iterator{});
  ASSERT_EQ(files.size(), 1u);
  const auto reloaded = parse_orbit_cache(*read_file(files[0]));
  EXPECT_EQ(reloaded.terminated, (std::vector<std::size_t>{1, 2, 3, 4, 5}));
  EXPECT_EQ(reloaded.cylinders, (std::vector<std::size_t>{1, 1, 1, 1, 1}));

  EXPECT_EQ(run_cli(args).out, first.out);
  std::ofstream(files[0]) << "garbage\n";
  EXPECT_EQ(run_cli(args).out, first.out);
  EXPECT_EQ(parse_orbit_cache(*read_file(files[0])), reloaded);
  EXPECT_FALSE(fs::exists(files[0].string() + ".lock"));
}

TEST(Cli, CacheDirFromEnvironment) {
  TempDir dir;
  const auto spec = dir.write("s.txt", "kind ck\nrow 1 1\nrow 0 1\ndepth 2\n");
  const auto cache = dir.path / "envcache";
  ::setenv("XPROD_CACHE_DIR", cache.c_str(), 1);
  const auto r = run_cli({"analyze", spec.string()});
  ::unsetenv("XPROD_CACHE_DIR");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("cache_file = af-"), std::string::npos);
  EXPECT_NE(r.out.find("cache_verified = true"), std::string::npos);
  EXPECT_FALSE(fs::is_empty(cache));
}
