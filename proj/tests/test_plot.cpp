#include <doctest.h>

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "dobac/errors.hpp"
#include "dobac/plot.hpp"
#include "dobac/sim.hpp"
#include "support.hpp"

using dobac::plot_kind_from_string;
using dobac::PlotKind;
using dobac::render_svg;
using dobac::RunLog;

namespace {
RunLog short_run(double k_eta = 1.0) {
  dobac::ScenarioConfig sc = testsup::paper_scenario();
  sc.sim.t_end = 1.0;
  sc.rejection.k_eta = k_eta;
  return dobac::simulate(sc);
}
}  // namespace

TEST_CASE("every figure kind renders a complete document") {
  const std::vector<RunLog> logs = {short_run()};
  for (const std::string& name : dobac::plot_kind_names()) {
    const std::string svg = render_svg(logs, plot_kind_from_string(name));
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("</svg>") != std::string::npos);
    CHECK(svg.find("<polyline") != std::string::npos);
  }
}

TEST_CASE("kind names round trip and bad names are rejected") {
  CHECK(plot_kind_from_string("tracking") == PlotKind::Tracking);
  CHECK(plot_kind_from_string("error-comparison") == PlotKind::ErrorComparison);
  CHECK(plot_kind_from_string("u-drj") == PlotKind::UDrj);
  CHECK(plot_kind_from_string("d-vs-dhat") == PlotKind::DVsDhat);
  CHECK(plot_kind_from_string("eta") == PlotKind::Eta);
  CHECK_THROWS_AS((void)plot_kind_from_string("pie-chart"), dobac::ConfigError);
}

TEST_CASE("rendering nothing is an error") {
  CHECK_THROWS_AS((void)render_svg({}, PlotKind::Tracking), dobac::ConfigError);
}

TEST_CASE("mixed schemas are rejected") {
  std::vector<RunLog> logs = {short_run(), short_run()};
  logs[1].schema = "dobac-log/0";
  CHECK_THROWS_AS((void)render_svg(logs, PlotKind::ErrorComparison),
                  dobac::SchemaMismatch);
}

TEST_CASE("comparison figures overlay every supplied run") {
  const std::vector<RunLog> logs = {short_run(1.0), short_run(10.0)};
  const std::string svg = render_svg(logs, PlotKind::ErrorComparison);
  std::size_t count = 0;
  for (std::size_t pos = svg.find("<polyline"); pos != std::string::npos;
       pos = svg.find("<polyline", pos + 1))
    ++count;
  CHECK(count >= 2);
}

TEST_CASE("the rejection-input figure draws the magnitude limits") {
  const std::string svg = render_svg({short_run()}, PlotKind::UDrj);
  // Limit guides are dashed horizontal lines at +-u_bar.
  CHECK(svg.find("stroke-dasharray") != std::string::npos);
}

TEST_CASE("documents land on disk") {
  const std::string path = testsup::tmp_path("figure.svg");
  dobac::write_svg(path, render_svg({short_run()}, PlotKind::Tracking));
  std::ifstream in(path);
  REQUIRE(in.good());
  std::stringstream buf;
  buf << in.rdbuf();
  CHECK(buf.str().find("</svg>") != std::string::npos);
  CHECK_THROWS_AS(dobac::write_svg("/nonexistent-dir/f.svg", "<svg/>"),
                  dobac::IoError);
}
