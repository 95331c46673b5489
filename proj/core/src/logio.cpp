#include "dobac/logio.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "dobac/errors.hpp"

namespace dobac {

namespace {

constexpr const char* kSchema = "dobac-log/1";

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  out.push_back(cur);
  return out;
}

std::string meta_line(const RunMeta& m) {
  std::ostringstream os;
  os << "# name=" << m.name << " mode=" << m.mode << " k_eta=" << format_double(m.k_eta)
     << " u_bar=" << format_double(m.u_bar) << " f_bar=" << format_double(m.f_bar)
     << " observer_gain=" << format_double(m.observer_gain)
     << " h=" << format_double(m.h) << " t_end=" << format_double(m.t_end)
     << " decimate=" << m.decimate << " n=" << m.n << " m_v=" << m.m_v
     << " m_w=" << m.m_w;
  return os.str();
}

RunMeta parse_meta(const std::string& line) {
  RunMeta m;
  std::istringstream is(line);
  std::string tok;
  is >> tok;  // leading '#'
  while (is >> tok) {
    const std::size_t eq = tok.find('=');
    if (eq == std::string::npos) continue;
    const std::string key = tok.substr(0, eq);
    const std::string val = tok.substr(eq + 1);
    if (key == "name") m.name = val;
    else if (key == "mode") m.mode = val;
    else if (key == "k_eta") m.k_eta = std::strtod(val.c_str(), nullptr);
    else if (key == "u_bar") m.u_bar = std::strtod(val.c_str(), nullptr);
    else if (key == "f_bar") m.f_bar = std::strtod(val.c_str(), nullptr);
    else if (key == "observer_gain") m.observer_gain = std::strtod(val.c_str(), nullptr);
    else if (key == "h") m.h = std::strtod(val.c_str(), nullptr);
    else if (key == "t_end") m.t_end = std::strtod(val.c_str(), nullptr);
    else if (key == "decimate") m.decimate = std::atoi(val.c_str());
    else if (key == "n") m.n = std::atoi(val.c_str());
    else if (key == "m_v") m.m_v = std::atoi(val.c_str());
    else if (key == "m_w") m.m_w = std::atoi(val.c_str());
  }
  return m;
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_csv(const std::string& path, const RunLog& log) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open \"" + path + "\" for writing");
  out << "# " << log.schema << "\n" << meta_line(log.meta) << "\n";
  for (std::size_t c = 0; c < log.columns.size(); ++c) {
    if (c) out << ',';
    out << log.columns[c];
  }
  out << '\n';
  for (Eigen::Index r = 0; r < log.data.rows(); ++r) {
    for (Eigen::Index c = 0; c < log.data.cols(); ++c) {
      if (c) out << ',';
      out << format_double(log.data(r, c));
    }
    out << '\n';
  }
  if (!out) throw IoError("write to \"" + path + "\" failed");
}

RunLog read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open \"" + path + "\" for reading");
  std::string line;
  if (!std::getline(in, line))
    throw SchemaMismatch("\"" + path + "\" is empty, expected schema " +
                         std::string(kSchema));
  if (line.rfind("# ", 0) != 0 || line.substr(2) != kSchema)
    throw SchemaMismatch("\"" + path + "\" does not carry schema " +
                         std::string(kSchema) + " (found \"" + line + "\")");
  RunLog log;
  log.schema = kSchema;
  if (!std::getline(in, line) || line.rfind("#", 0) != 0)
    throw SchemaMismatch("\"" + path + "\" is missing the metadata line");
  log.meta = parse_meta(line);
  if (!std::getline(in, line))
    throw SchemaMismatch("\"" + path + "\" is missing the header row");
  log.columns = split(line, ',');

  std::vector<double> values;
  Eigen::Index rows = 0;
  const std::size_t ncol = log.columns.size();
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const std::vector<std::string> cells = split(line, ',');
    if (cells.size() != ncol)
      throw SchemaMismatch("\"" + path + "\" row " + std::to_string(rows + 1) +
                           " has " + std::to_string(cells.size()) + " cells, header has " +
                           std::to_string(ncol));
    for (const std::string& cell : cells)
      values.push_back(std::strtod(cell.c_str(), nullptr));
    ++rows;
  }
  log.data.resize(rows, static_cast<Eigen::Index>(ncol));
  for (Eigen::Index r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < ncol; ++c)
      log.data(r, static_cast<Eigen::Index>(c)) =
          values[static_cast<std::size_t>(r) * ncol + c];
  return log;
}

void write_report(const std::string& path,
                  const std::vector<std::pair<std::string, std::string>>& pairs) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open \"" + path + "\" for writing");
  for (const auto& [key, value] : pairs) out << key << " = " << value << "\n";
  if (!out) throw IoError("write to \"" + path + "\" failed");
}

}  // namespace dobac
