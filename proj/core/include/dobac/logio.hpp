#pragma once

#include <string>
#include <utility>
#include <vector>

#include "dobac/sim.hpp"

namespace dobac {

// Shortest text form of a double that parses back to the same bits.
std::string format_double(double v);

// CSV with two leading comment lines:
//   # dobac-log/1
//   # name=... mode=... k_eta=... u_bar=... f_bar=... observer_gain=...
//     h=... t_end=... decimate=... n=... m_v=... m_w=...
// followed by the header row and one data row per logged instant. Values are
// written so that reading the file back reproduces them bit for bit.
void write_csv(const std::string& path, const RunLog& log);

// Throws IoError on filesystem problems and SchemaMismatch when the leading
// schema tag is absent or names a different schema version.
RunLog read_csv(const std::string& path);

// Flat "key = value" report, one pair per line.
void write_report(const std::string& path,
                  const std::vector<std::pair<std::string, std::string>>& pairs);

}  // namespace dobac
