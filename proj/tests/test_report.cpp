#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>

#include "homog/report.hpp"

using namespace homog;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& name) : path("test_artifact_" + name) {}
  ~TempFile() { std::remove(path.c_str()); }
};

} // namespace

TEST_CASE("format_number round-trips and is minimal") {
  CHECK(format_number(0.5) == "0.5");
  CHECK(format_number(3.0) == "3");
  double third = 1.0 / 3.0;
  CHECK(std::strtod(format_number(third).c_str(), nullptr) == third);
  double tricky = 0.1 + 0.2;
  CHECK(std::strtod(format_number(tricky).c_str(), nullptr) == tricky);
}

TEST_CASE("csv writer emits header, LF endings and dot decimals") {
  TempFile f("table.csv");
  write_csv(f.path, {"eps", "value"}, {{0.5, 1.25}, {0.25, 2.5}});
  std::string content = slurp(f.path);
  CHECK(content == "eps,value\n0.5,1.25\n0.25,2.5\n");
}

TEST_CASE("csv writer validates its inputs") {
  TempFile f("bad.csv");
  CHECK_THROWS_AS(write_csv(f.path, {"a", "b"}, {{1.0}}), ValidationError);
  CHECK_THROWS_AS(write_csv(f.path, {"a"}, {{std::numeric_limits<double>::quiet_NaN()}}),
                  ValidationError);
}

TEST_CASE("svg plot is emitted deterministically") {
  PlotSeries s{"err", {0.5, 0.25, 0.125}, {0.1, 0.03, 0.008}};
  TempFile f1("plot1.svg"), f2("plot2.svg");
  write_loglog_svg(f1.path, "decay", "eps", "error", {s});
  write_loglog_svg(f2.path, "decay", "eps", "error", {s});
  std::string a = slurp(f1.path), b = slurp(f2.path);
  CHECK(a == b);
  CHECK(a.find("<svg") != std::string::npos);
  CHECK(a.find("polyline") != std::string::npos);
  CHECK(a.find("decay") != std::string::npos);
}

TEST_CASE("svg plot rejects nonpositive data") {
  TempFile f("bad.svg");
  PlotSeries s{"err", {0.5, 0.25}, {0.1, 0.0}};
  CHECK_THROWS_AS(write_loglog_svg(f.path, "t", "x", "y", {s}), ValidationError);
  CHECK_THROWS_AS(write_loglog_svg(f.path, "t", "x", "y", {}), ValidationError);
}
