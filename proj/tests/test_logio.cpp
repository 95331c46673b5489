#include <doctest.h>

#include <Eigen/Dense>
#include <cfloat>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>

#include "dobac/errors.hpp"
#include "dobac/logio.hpp"
#include "dobac/sim.hpp"
#include "support.hpp"

using dobac::format_double;
using dobac::read_csv;
using dobac::RunLog;
using dobac::write_csv;

namespace {
RunLog tiny_run() {
  dobac::ScenarioConfig sc = testsup::paper_scenario();
  sc.sim.t_end = 0.5;
  return dobac::simulate(sc);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}
}  // namespace

TEST_CASE("doubles survive the text round trip bit for bit") {
  const double cases[] = {0.0,
                          -0.0,
                          1.0,
                          1.0 / 3.0,
                          M_PI,
                          -M_PI,
                          1e-300,
                          -1e300,
                          5e-324,                        // smallest denormal
                          DBL_MAX,
                          DBL_MIN,
                          0.1,
                          -123456.789e-12,
                          std::nextafter(1.0, 2.0)};
  for (const double v : cases) {
    const std::string s = format_double(v);
    const double back = std::strtod(s.c_str(), nullptr);
    CHECK(std::memcmp(&back, &v, sizeof v) == 0);
  }
}

TEST_CASE("a run log survives the file round trip bit for bit") {
  RunLog log = tiny_run();
  // Plant some awkward values to make the round trip earn its keep.
  log.data(0, 1) = 1.0 / 3.0;
  log.data(1, 2) = -0.0;
  log.data(2, 3) = 1e-300;
  log.data(3, 4) = M_PI;
  const std::string path = testsup::tmp_path("roundtrip.csv");
  write_csv(path, log);
  const RunLog back = read_csv(path);

  CHECK(back.schema == log.schema);
  CHECK(back.columns == log.columns);
  CHECK(back.meta.name == log.meta.name);
  CHECK(back.meta.mode == log.meta.mode);
  CHECK(back.meta.h == log.meta.h);
  CHECK(back.meta.n == log.meta.n);
  CHECK(back.meta.decimate == log.meta.decimate);
  REQUIRE(back.rows() == log.rows());
  CHECK((back.data.array() == log.data.array()).all());
}

TEST_CASE("the file leads with the schema tag") {
  const std::string path = testsup::tmp_path("schema.csv");
  write_csv(path, tiny_run());
  const std::string text = slurp(path);
  CHECK(text.rfind("# dobac-log/1\n", 0) == 0);
}

TEST_CASE("a foreign or missing schema tag is rejected") {
  const std::string good = testsup::tmp_path("good.csv");
  write_csv(good, tiny_run());
  const std::string text = slurp(good);

  const std::string bad1 = testsup::tmp_path("bad-schema.csv");
  {
    std::ofstream out(bad1);
    out << "# dobac-log/2\n" << text.substr(text.find('\n') + 1);
  }
  CHECK_THROWS_AS((void)read_csv(bad1), dobac::SchemaMismatch);

  const std::string bad2 = testsup::tmp_path("no-schema.csv");
  {
    std::ofstream out(bad2);
    out << text.substr(text.find('\n') + 1);
  }
  CHECK_THROWS_AS((void)read_csv(bad2), dobac::SchemaMismatch);
}

TEST_CASE("truncated or ragged files are rejected") {
  const std::string good = testsup::tmp_path("good2.csv");
  write_csv(good, tiny_run());
  const std::string text = slurp(good);

  // Drop the metadata line.
  const std::string no_meta = testsup::tmp_path("no-meta.csv");
  {
    const std::size_t first = text.find('\n') + 1;
    const std::size_t second = text.find('\n', first) + 1;
    std::ofstream out(no_meta);
    out << text.substr(0, first) << text.substr(second);
  }
  CHECK_THROWS(read_csv(no_meta));

  // Chop a cell off the last row.
  const std::string ragged = testsup::tmp_path("ragged.csv");
  {
    const std::size_t cut = text.find_last_of(',');
    std::ofstream out(ragged);
    out << text.substr(0, cut) << "\n";
  }
  CHECK_THROWS(read_csv(ragged));
}

TEST_CASE("filesystem problems surface as IO errors") {
  CHECK_THROWS_AS(write_csv("/nonexistent-dir/x.csv", tiny_run()), dobac::IoError);
  CHECK_THROWS_AS((void)read_csv(testsup::tmp_path("does-not-exist.csv")),
                  dobac::IoError);
}

TEST_CASE("reports are flat key-value lines") {
  const std::string path = testsup::tmp_path("report.txt");
  dobac::write_report(path, {{"rms_e", "0.05"}, {"window", "[30, 50]"}});
  const std::string text = slurp(path);
  CHECK(text == "rms_e = 0.05\nwindow = [30, 50]\n");
}

TEST_CASE("report writing to a bad path is an IO error") {
  CHECK_THROWS_AS(dobac::write_report("/nonexistent-dir/r.txt", {{"a", "1"}}),
                  dobac::IoError);
}
