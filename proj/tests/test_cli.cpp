#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "support.hpp"

namespace {

struct CliResult {
  int code = -1;
  std::string output;
};

CliResult cli(const std::string& args) {
  static int seq = 0;
  const std::string capture = testsup::tmp_path("cli-out-" + std::to_string(seq++));
  const std::string cmd =
      std::string(DOBAC_CLI_PATH) + " " + args + " > " + capture + " 2>&1";
  const int st = std::system(cmd.c_str());
  CliResult r;
  r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  std::ifstream in(capture);
  std::stringstream buf;
  buf << in.rdbuf();
  r.output = buf.str();
  return r;
}

bool file_exists(const std::string& path) { return std::ifstream(path).good(); }

std::string first_line(const std::string& path) {
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  return line;
}

}  // namespace

TEST_CASE("validate accepts the preset") {
  const CliResult r = cli("validate --preset msd-cubic-paper");
  CHECK(r.code == 0);
  CHECK(r.output.find("configuration ok") != std::string::npos);
}

TEST_CASE("validate --dump prints the normalized configuration") {
  const CliResult r = cli("validate --preset msd-cubic-paper --dump");
  CHECK(r.code == 0);
  CHECK(r.output.find("\"derived\"") != std::string::npos);
  CHECK(r.output.find("k_x_star") != std::string::npos);
}

TEST_CASE("run writes a log and a report") {
  const std::string out = testsup::tmp_path("cli-run");
  const CliResult r = cli("run --preset msd-cubic-paper --set sim.t_end=0.5 --out " + out);
  CHECK(r.code == 0);
  CHECK(r.output.find("rms_e_window=") != std::string::npos);
  REQUIRE(file_exists(out + "/run.csv"));
  REQUIRE(file_exists(out + "/report.txt"));
  CHECK(first_line(out + "/run.csv") == "# dobac-log/1");
  std::ifstream rep(out + "/report.txt");
  std::stringstream buf;
  buf << rep.rdbuf();
  CHECK(buf.str().find("rms_e_window = ") != std::string::npos);
  CHECK(buf.str().find("epsilon_r = ") != std::string::npos);
  CHECK(buf.str().find("bound_satisfied = ") != std::string::npos);
}

TEST_CASE("an unknown override key is a configuration error") {
  const std::string out = testsup::tmp_path("cli-badkey");
  const CliResult r =
      cli("run --preset msd-cubic-paper --set plant.bogus=1 --out " + out);
  CHECK(r.code == 2);
  CHECK(r.output.find("error:") != std::string::npos);
}

TEST_CASE("a diverging run exits with the runtime-failure code") {
  const std::string out = testsup::tmp_path("cli-diverge");
  const CliResult r = cli(
      "run --preset msd-cubic-paper --set observer.gain=5000 --set sim.t_end=1 --out " +
      out);
  CHECK(r.code == 3);
  CHECK(r.output.find("error:") != std::string::npos);
}

TEST_CASE("neither preset nor config is a configuration error") {
  const CliResult r = cli("run --out " + testsup::tmp_path("cli-none"));
  CHECK(r.code == 2);
}

TEST_CASE("a bad subcommand is a parse error") {
  const CliResult r = cli("frobnicate");
  CHECK(r.code == 2);
}

TEST_CASE("plot renders a figure from a finished run") {
  const std::string out = testsup::tmp_path("cli-plotrun");
  REQUIRE(cli("run --preset msd-cubic-paper --set sim.t_end=0.5 --out " + out).code == 0);
  const std::string svg = testsup::tmp_path("cli-fig.svg");
  const CliResult r = cli("plot " + out + "/run.csv --kind tracking --out " + svg);
  CHECK(r.code == 0);
  REQUIRE(file_exists(svg));
  std::ifstream in(svg);
  std::stringstream buf;
  buf << in.rdbuf();
  CHECK(buf.str().find("</svg>") != std::string::npos);
}

TEST_CASE("plotting a missing log is an IO error") {
  const CliResult r = cli("plot " + testsup::tmp_path("absent.csv") +
                          " --kind tracking --out " + testsup::tmp_path("x.svg"));
  CHECK(r.code == 4);
}

TEST_CASE("a sweep with one bad run reports the partial failure") {
  const std::string out = testsup::tmp_path("cli-sweep");
  const CliResult r = cli(
      "sweep --preset msd-cubic-paper --set sim.t_end=1 --key observer.gain "
      "--values 50,5000 --out " +
      out);
  CHECK(r.code == 3);
  CHECK(r.output.find("with failures") != std::string::npos);
  REQUIRE(file_exists(out + "/sweep-report.txt"));
  CHECK(file_exists(out + "/sweep-1.csv"));
  CHECK(!file_exists(out + "/sweep-2.csv"));
  std::ifstream rep(out + "/sweep-report.txt");
  std::stringstream buf;
  buf << rep.rdbuf();
  CHECK(buf.str().find("entry1.status = ok") != std::string::npos);
  CHECK(buf.str().find("entry2.status = diverged") != std::string::npos);
}

TEST_CASE("a sweep over the leak gain succeeds end to end") {
  const std::string out = testsup::tmp_path("cli-sweep-ok");
  const CliResult r = cli(
      "sweep --preset msd-cubic-paper --set sim.t_end=1 --key rejection.k_eta "
      "--values 1,10 --out " +
      out);
  CHECK(r.code == 0);
  CHECK(r.output.find("all ok") != std::string::npos);
  CHECK(file_exists(out + "/sweep-1.csv"));
  CHECK(file_exists(out + "/sweep-2.csv"));
}
