#pragma once

#include <string>
#include <vector>

#include "dobac/sim.hpp"

namespace dobac {

// Built-in figure kinds over one or more run logs:
//   tracking          first plant state against its reference (first log)
//   error-comparison  ||e(t)|| of every log on shared axes
//   u-drj             rejection input of every log, with magnitude limits
//   d-vs-dhat         true disturbance against its estimate (first log)
//   eta               rejection residual eta(t) of every log
enum class PlotKind { Tracking, ErrorComparison, UDrj, DVsDhat, Eta };

PlotKind plot_kind_from_string(const std::string& name);  // ConfigError
std::vector<std::string> plot_kind_names();

// Self-contained SVG document. Throws ConfigError when logs is empty and
// SchemaMismatch when the logs carry differing schema tags.
std::string render_svg(const std::vector<RunLog>& logs, PlotKind kind);

void write_svg(const std::string& path, const std::string& svg);

}  // namespace dobac
