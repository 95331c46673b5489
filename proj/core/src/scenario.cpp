#include "dobac/scenario.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "dobac/errors.hpp"

namespace dobac {
namespace {

using nlohmann::json;

// ---- json <-> Eigen ----

json to_j(const Eigen::VectorXd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

json to_j(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(i, c));
    rows.push_back(row);
  }
  return rows;
}

Eigen::VectorXd vec_from(const json& j, const std::string& ctx) {
  if (!j.is_array()) throw ConfigError(ctx + ": expected an array of numbers");
  Eigen::VectorXd v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw ConfigError(ctx + ": expected an array of numbers");
    v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  }
  return v;
}

Eigen::MatrixXd mat_from(const json& j, const std::string& ctx) {
  if (!j.is_array()) throw ConfigError(ctx + ": expected an array of rows");
  const std::size_t rows = j.size();
  if (rows == 0) return Eigen::MatrixXd(0, 0);
  if (!j[0].is_array()) throw ConfigError(ctx + ": expected an array of rows");
  const std::size_t cols = j[0].size();
  Eigen::MatrixXd m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    if (!j[i].is_array() || j[i].size() != cols)
      throw ConfigError(ctx + ": rows must have equal length");
    for (std::size_t c = 0; c < cols; ++c) {
      if (!j[i][c].is_number())
        throw ConfigError(ctx + ": expected an array of numeric rows");
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) =
          j[i][c].get<double>();
    }
  }
  return m;
}

double num_from(const json& j, const std::string& ctx) {
  if (!j.is_number()) throw ConfigError(ctx + ": expected a number");
  return j.get<double>();
}

std::string str_from(const json& j, const std::string& ctx) {
  if (!j.is_string()) throw ConfigError(ctx + ": expected a string");
  return j.get<std::string>();
}

void check_keys(const json& j, std::initializer_list<const char*> allowed,
                const std::string& ctx) {
  if (!j.is_object()) throw ConfigError(ctx + ": expected an object");
  for (const auto& item : j.items()) {
    bool ok = false;
    for (const char* k : allowed)
      if (item.key() == k) {
        ok = true;
        break;
      }
    if (!ok) throw ConfigError(ctx + ": unknown key \"" + item.key() + "\"");
  }
}

// ---- signals ----

std::vector<double> num_list(const json& j, const std::string& ctx) {
  std::vector<double> out;
  if (j.is_number()) {
    out.push_back(j.get<double>());
  } else if (j.is_array()) {
    for (const auto& e : j) {
      if (!e.is_number()) throw ConfigError(ctx + ": expected numbers");
      out.push_back(e.get<double>());
    }
  } else {
    throw ConfigError(ctx + ": expected a number or an array of numbers");
  }
  return out;
}

json signal_to_j(const SignalSpec& s) {
  json j;
  switch (s.kind) {
    case SignalSpec::Kind::Zero: j["kind"] = "zero"; break;
    case SignalSpec::Kind::Constant: j["kind"] = "constant"; break;
    case SignalSpec::Kind::Sinusoid: j["kind"] = "sinusoid"; break;
    case SignalSpec::Kind::SumOfSinusoids: j["kind"] = "sum-of-sinusoids"; break;
  }
  j["offset"] = s.offset;
  j["amplitude"] = s.amplitude;
  j["frequency"] = s.frequency;
  j["phase"] = s.phase;
  return j;
}

SignalSpec signal_from_j(const json& j, const std::string& ctx) {
  check_keys(j, {"kind", "offset", "amplitude", "frequency", "phase"}, ctx);
  SignalSpec s;
  const std::string kind =
      j.contains("kind") ? str_from(j.at("kind"), ctx + ".kind") : "zero";
  if (kind == "zero")
    s.kind = SignalSpec::Kind::Zero;
  else if (kind == "constant")
    s.kind = SignalSpec::Kind::Constant;
  else if (kind == "sinusoid")
    s.kind = SignalSpec::Kind::Sinusoid;
  else if (kind == "sum-of-sinusoids")
    s.kind = SignalSpec::Kind::SumOfSinusoids;
  else
    throw ConfigError(ctx + ": unknown signal kind \"" + kind + "\"");
  if (j.contains("offset")) s.offset = num_from(j.at("offset"), ctx + ".offset");
  if (j.contains("amplitude"))
    s.amplitude = num_list(j.at("amplitude"), ctx + ".amplitude");
  if (j.contains("frequency"))
    s.frequency = num_list(j.at("frequency"), ctx + ".frequency");
  if (j.contains("phase")) s.phase = num_list(j.at("phase"), ctx + ".phase");
  if (s.phase.empty()) s.phase.assign(s.amplitude.size(), 0.0);
  s.validate();
  return s;
}

// ---- bases ----

json basis_to_j(const MonomialBasis& b) {
  json rows = json::array();
  for (int r = 0; r < b.size(); ++r) {
    json row = json::array();
    for (int c = 0; c < b.dim(); ++c) row.push_back(b.exponents(r, c));
    rows.push_back(row);
  }
  return rows;
}

MonomialBasis basis_from_j(const json& j, int state_dim, const std::string& ctx) {
  if (j.is_string()) return MonomialBasis::named(j.get<std::string>(), state_dim);
  if (!j.is_array())
    throw ConfigError(ctx + ": expected a basis name or an exponent matrix");
  if (j.empty()) return MonomialBasis::zero(state_dim);
  MonomialBasis b;
  const std::size_t rows = j.size();
  if (!j[0].is_array()) throw ConfigError(ctx + ": expected rows of exponents");
  const std::size_t cols = j[0].size();
  b.exponents.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].size() != cols)
      throw ConfigError(ctx + ": exponent rows must have equal length");
    for (std::size_t c = 0; c < cols; ++c) {
      if (!j[r][c].is_number_integer())
        throw ConfigError(ctx + ": exponents must be integers");
      b.exponents(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          j[r][c].get<int>();
    }
  }
  b.validate();
  if (b.dim() != state_dim)
    throw DimensionMismatch(ctx + ": exponent rows have " + std::to_string(b.dim()) +
                            " entries, state dimension is " + std::to_string(state_dim));
  return b;
}

// ---- plant ----

json plant_to_j(const PlantParams& p) {
  json j;
  j["A"] = to_j(p.A);
  j["b"] = to_j(p.b);
  j["lambda"] = p.Lambda;
  j["V"] = to_j(p.V_true);
  j["W"] = to_j(p.W_true);
  j["basis_V"] = basis_to_j(p.basis_V);
  j["basis_W"] = basis_to_j(p.basis_W);
  return j;
}

json deep_merge(json base, const json& overlay);

PlantParams plant_from_j(const json& jin, const std::string& ctx) {
  json j = jin;
  if (j.is_object() && j.contains("preset")) {
    const std::string name = str_from(j.at("preset"), ctx + ".preset");
    j.erase("preset");
    j = deep_merge(plant_to_j(plant_preset(name)), j);
  }
  check_keys(j, {"A", "b", "lambda", "V", "W", "basis_V", "basis_W"}, ctx);
  PlantParams p;
  if (!j.contains("A")) throw ConfigError(ctx + ": missing \"A\"");
  p.A = mat_from(j.at("A"), ctx + ".A");
  const int n = static_cast<int>(p.A.rows());
  if (j.contains("b")) p.b = vec_from(j.at("b"), ctx + ".b");
  if (j.contains("lambda")) p.Lambda = num_from(j.at("lambda"), ctx + ".lambda");
  p.basis_V = j.contains("basis_V") ? basis_from_j(j.at("basis_V"), n, ctx + ".basis_V")
                                    : MonomialBasis::zero(n);
  p.basis_W = j.contains("basis_W") ? basis_from_j(j.at("basis_W"), n, ctx + ".basis_W")
                                    : MonomialBasis::zero(n);
  p.V_true = j.contains("V") ? vec_from(j.at("V"), ctx + ".V")
                             : Eigen::VectorXd::Zero(p.basis_V.size());
  p.W_true = j.contains("W") ? vec_from(j.at("W"), ctx + ".W")
                             : Eigen::VectorXd::Zero(p.basis_W.size());
  return p;
}

// ---- reference ----

json reference_to_j(const ReferenceConfig& r) {
  json j;
  j["A_r"] = to_j(r.A_r);
  j["b"] = to_j(r.b);
  j["lambda_r"] = r.Lambda_r;
  j["V_r"] = to_j(r.V_r);
  json cmd;
  cmd["kind"] = r.r_kind == RKind::FeedbackPlusSignal ? "feedback-plus-signal"
                                                      : "external-signal";
  cmd["c_r"] = to_j(r.c_r);
  cmd["signal"] = signal_to_j(r.excitation);
  j["r"] = cmd;
  return j;
}

ReferenceConfig reference_from_j(const json& j, const std::string& ctx) {
  check_keys(j, {"A_r", "b", "lambda_r", "V_r", "r"}, ctx);
  ReferenceConfig r;
  if (!j.contains("A_r")) throw ConfigError(ctx + ": missing \"A_r\"");
  r.A_r = mat_from(j.at("A_r"), ctx + ".A_r");
  if (j.contains("b")) r.b = vec_from(j.at("b"), ctx + ".b");
  if (j.contains("lambda_r")) r.Lambda_r = num_from(j.at("lambda_r"), ctx + ".lambda_r");
  if (j.contains("V_r")) r.V_r = vec_from(j.at("V_r"), ctx + ".V_r");
  if (j.contains("r")) {
    const json& cmd = j.at("r");
    check_keys(cmd, {"kind", "c_r", "signal"}, ctx + ".r");
    if (cmd.contains("kind")) {
      const std::string kind = str_from(cmd.at("kind"), ctx + ".r.kind");
      if (kind == "external-signal")
        r.r_kind = RKind::ExternalSignal;
      else if (kind == "feedback-plus-signal")
        r.r_kind = RKind::FeedbackPlusSignal;
      else
        throw ConfigError(ctx + ".r: unknown kind \"" + kind + "\"");
    }
    if (cmd.contains("c_r")) r.c_r = vec_from(cmd.at("c_r"), ctx + ".r.c_r");
    if (cmd.contains("signal"))
      r.excitation = signal_from_j(cmd.at("signal"), ctx + ".r.signal");
  }
  if (r.r_kind == RKind::FeedbackPlusSignal && r.c_r.size() == 0)
    r.c_r = Eigen::VectorXd::Zero(r.A_r.rows());
  return r;
}

// ---- adaptation gains / projection sets ----

json gains_to_j(const AdaptationGains& g) {
  json j;
  j["Gamma_x"] = to_j(g.Gamma_x);
  j["gamma_r"] = g.gamma_r;
  j["Gamma_V"] = to_j(g.Gamma_V);
  j["Gamma_W"] = to_j(g.Gamma_W);
  j["P"] = to_j(g.P);
  return j;
}

AdaptationGains gains_from_j(const json& j, const std::string& ctx) {
  check_keys(j, {"Gamma_x", "gamma_r", "Gamma_V", "Gamma_W", "P"}, ctx);
  AdaptationGains g;
  if (j.contains("Gamma_x")) g.Gamma_x = mat_from(j.at("Gamma_x"), ctx + ".Gamma_x");
  if (j.contains("gamma_r")) g.gamma_r = num_from(j.at("gamma_r"), ctx + ".gamma_r");
  if (j.contains("Gamma_V")) g.Gamma_V = mat_from(j.at("Gamma_V"), ctx + ".Gamma_V");
  if (j.contains("Gamma_W")) g.Gamma_W = mat_from(j.at("Gamma_W"), ctx + ".Gamma_W");
  if (j.contains("P")) g.P = mat_from(j.at("P"), ctx + ".P");
  return g;
}

json set_to_j(const ProjectionSet& s) {
  json j;
  j["center"] = to_j(s.center);
  j["half_width"] = to_j(s.half_width);
  return j;
}

ProjectionSet set_from_j(const json& j, double margin, const std::string& ctx) {
  check_keys(j, {"center", "half_width"}, ctx);
  Eigen::VectorXd c, s;
  if (j.contains("center")) c = vec_from(j.at("center"), ctx + ".center");
  if (j.contains("half_width")) s = vec_from(j.at("half_width"), ctx + ".half_width");
  if (c.size() != s.size())
    throw DimensionMismatch(ctx + ": center and half_width lengths differ");
  return ProjectionSet::from_interval(c, s, margin);
}

json sets_to_j(const ProjectionSets& s) {
  json j;
  j["margin"] = s.k_x.margin;
  j["k_x"] = set_to_j(s.k_x);
  j["k_r"] = set_to_j(s.k_r);
  j["V"] = set_to_j(s.V);
  j["W"] = set_to_j(s.W);
  return j;
}

ProjectionSets sets_from_j(const json& j, const std::string& ctx) {
  check_keys(j, {"margin", "k_x", "k_r", "V", "W"}, ctx);
  double margin = 0.1;
  if (j.contains("margin")) margin = num_from(j.at("margin"), ctx + ".margin");
  ProjectionSets s;
  auto block = [&](const char* key) {
    if (j.contains(key)) return set_from_j(j.at(key), margin, ctx + "." + key);
    return ProjectionSet::from_interval(Eigen::VectorXd(), Eigen::VectorXd(), margin);
  };
  s.k_x = block("k_x");
  s.k_r = block("k_r");
  s.V = block("V");
  s.W = block("W");
  return s;
}

// ---- observer / rejection / initial / sim ----

json observer_to_j(const ObserverConfig& o) { return json{{"gain", o.gain}}; }

ObserverConfig observer_from_j(const json& j, const std::string& ctx) {
  check_keys(j, {"gain"}, ctx);
  ObserverConfig o;
  if (j.contains("gain")) o.gain = num_from(j.at("gain"), ctx + ".gain");
  return o;
}

json rejection_to_j(const RejectionConfig& r) {
  json j;
  j["mode"] = to_string(r.mode);
  j["u_bar"] = r.u_bar;
  j["f_bar"] = r.f_bar;
  j["k_eta"] = r.k_eta;
  return j;
}

RejectionConfig rejection_from_j(const json& j, const std::string& ctx) {
  check_keys(j, {"mode", "u_bar", "f_bar", "k_eta"}, ctx);
  RejectionConfig r;
  if (j.contains("mode"))
    r.mode = rejection_mode_from_string(str_from(j.at("mode"), ctx + ".mode"));
  if (j.contains("u_bar")) r.u_bar = num_from(j.at("u_bar"), ctx + ".u_bar");
  if (j.contains("f_bar")) r.f_bar = num_from(j.at("f_bar"), ctx + ".f_bar");
  if (j.contains("k_eta")) r.k_eta = num_from(j.at("k_eta"), ctx + ".k_eta");
  return r;
}

json init_to_j(const InitialConditions& i) {
  json j;
  j["x"] = to_j(i.x);
  j["x_r"] = to_j(i.x_r);
  if (i.k_x) j["k_x"] = to_j(*i.k_x);
  if (i.k_r) j["k_r"] = *i.k_r;
  if (i.V) j["V"] = to_j(*i.V);
  if (i.W) j["W"] = to_j(*i.W);
  j["d_u_hat"] = to_j(i.d_u_hat);
  j["u_drj"] = i.u_drj;
  return j;
}

InitialConditions init_from_j(const json& j, const std::string& ctx) {
  check_keys(j, {"x", "x_r", "k_x", "k_r", "V", "W", "d_u_hat", "u_drj"}, ctx);
  InitialConditions i;
  if (j.contains("x")) i.x = vec_from(j.at("x"), ctx + ".x");
  if (j.contains("x_r")) i.x_r = vec_from(j.at("x_r"), ctx + ".x_r");
  if (j.contains("k_x") && !j.at("k_x").is_null())
    i.k_x = vec_from(j.at("k_x"), ctx + ".k_x");
  if (j.contains("k_r") && !j.at("k_r").is_null())
    i.k_r = num_from(j.at("k_r"), ctx + ".k_r");
  if (j.contains("V") && !j.at("V").is_null()) i.V = vec_from(j.at("V"), ctx + ".V");
  if (j.contains("W") && !j.at("W").is_null()) i.W = vec_from(j.at("W"), ctx + ".W");
  if (j.contains("d_u_hat")) i.d_u_hat = vec_from(j.at("d_u_hat"), ctx + ".d_u_hat");
  if (j.contains("u_drj")) i.u_drj = num_from(j.at("u_drj"), ctx + ".u_drj");
  return i;
}

json sim_to_j(const SimParams& s) {
  json j;
  j["t_end"] = s.t_end;
  j["h"] = s.h;
  j["decimate"] = s.decimate;
  j["divergence_guard"] = s.divergence_guard;
  return j;
}

SimParams sim_from_j(const json& j, const std::string& ctx) {
  check_keys(j, {"t_end", "h", "decimate", "divergence_guard"}, ctx);
  SimParams s;
  if (j.contains("t_end")) s.t_end = num_from(j.at("t_end"), ctx + ".t_end");
  if (j.contains("h")) s.h = num_from(j.at("h"), ctx + ".h");
  if (j.contains("decimate")) {
    if (!j.at("decimate").is_number_integer())
      throw ConfigError(ctx + ".decimate: expected an integer");
    s.decimate = j.at("decimate").get<int>();
  }
  if (j.contains("divergence_guard"))
    s.divergence_guard = num_from(j.at("divergence_guard"), ctx + ".divergence_guard");
  return s;
}

// ---- whole scenario ----

json scenario_to_j(const ScenarioConfig& sc) {
  json j;
  j["name"] = sc.name;
  j["plant"] = plant_to_j(sc.plant);
  j["disturbance"] = signal_to_j(sc.disturbance);
  j["reference"] = reference_to_j(sc.reference);
  j["adaptation"] = gains_to_j(sc.gains);
  j["projection"] = sets_to_j(sc.sets);
  j["observer"] = observer_to_j(sc.observer);
  j["rejection"] = rejection_to_j(sc.rejection);
  j["initial"] = init_to_j(sc.init);
  j["sim"] = sim_to_j(sc.sim);
  return j;
}

ScenarioConfig scenario_from_j(const json& jin) {
  json j = jin;
  if (j.is_object() && j.contains("preset")) {
    const std::string name = str_from(j.at("preset"), "preset");
    j.erase("preset");
    j = deep_merge(scenario_to_j(scenario_preset(name)), j);
  }
  // A dumped configuration carries a "derived" section for the reader's
  // benefit; it is always recomputed, never read back.
  if (j.is_object()) j.erase("derived");
  check_keys(j,
             {"name", "plant", "disturbance", "reference", "adaptation", "projection",
              "observer", "rejection", "initial", "sim"},
             "config");
  ScenarioConfig sc;
  if (j.contains("name")) sc.name = str_from(j.at("name"), "name");
  if (j.contains("plant")) sc.plant = plant_from_j(j.at("plant"), "plant");
  if (j.contains("disturbance"))
    sc.disturbance = signal_from_j(j.at("disturbance"), "disturbance");
  if (j.contains("reference"))
    sc.reference = reference_from_j(j.at("reference"), "reference");
  if (j.contains("adaptation")) sc.gains = gains_from_j(j.at("adaptation"), "adaptation");
  if (j.contains("projection")) sc.sets = sets_from_j(j.at("projection"), "projection");
  if (j.contains("observer")) sc.observer = observer_from_j(j.at("observer"), "observer");
  if (j.contains("rejection"))
    sc.rejection = rejection_from_j(j.at("rejection"), "rejection");
  if (j.contains("initial")) sc.init = init_from_j(j.at("initial"), "initial");
  if (j.contains("sim")) sc.sim = sim_from_j(j.at("sim"), "sim");
  // Unspecified state vectors default to the origin.
  const int n = sc.plant.n();
  if (sc.init.x.size() == 0) sc.init.x = Eigen::VectorXd::Zero(n);
  if (sc.init.x_r.size() == 0) sc.init.x_r = Eigen::VectorXd::Zero(n);
  if (sc.init.d_u_hat.size() == 0) sc.init.d_u_hat = Eigen::VectorXd::Zero(n);
  return sc;
}

json deep_merge(json base, const json& overlay) {
  if (!base.is_object() || !overlay.is_object()) return overlay;
  for (const auto& item : overlay.items()) {
    if (item.value().is_null()) {
      base.erase(item.key());
    } else if (base.contains(item.key())) {
      base[item.key()] = deep_merge(base[item.key()], item.value());
    } else {
      base[item.key()] = item.value();
    }
  }
  return base;
}

void set_by_path(json& root, const std::string& path, const json& value) {
  std::vector<std::string> parts;
  std::string cur;
  for (char ch : path) {
    if (ch == '.') {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  parts.push_back(cur);
  json* node = &root;
  for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
    if (parts[i].empty()) throw ConfigError("override path \"" + path + "\" is malformed");
    if (!node->contains(parts[i]) || !(*node)[parts[i]].is_object())
      (*node)[parts[i]] = json::object();
    node = &(*node)[parts[i]];
  }
  if (parts.back().empty())
    throw ConfigError("override path \"" + path + "\" is malformed");
  (*node)[parts.back()] = value;
}

json parse_override_value(const std::string& text) {
  json v = json::parse(text, nullptr, false);
  if (v.is_discarded()) return json(text);  // bare words are strings
  return v;
}

}  // namespace

ScenarioConfig scenario_preset(const std::string& name) {
  if (name != "msd-cubic-paper")
    throw ConfigError("unknown scenario preset \"" + name + "\"");

  ScenarioConfig sc;
  sc.name = name;
  sc.plant = plant_preset("msd-cubic");
  sc.disturbance = SignalSpec::sinusoid(5.0, 0.5);

  ReferenceConfig& ref = sc.reference;
  ref.A_r.resize(2, 2);
  ref.A_r << 0.0, 1.0, -1.0, -1.0;
  ref.b = sc.plant.b;
  ref.Lambda_r = 1.0;
  ref.V_r = Eigen::VectorXd::Constant(1, 1.0);
  ref.r_kind = RKind::FeedbackPlusSignal;
  ref.c_r = Eigen::VectorXd::Constant(2, 1.0);
  ref.excitation = SignalSpec::sinusoid(-1.0, 1.0);

  AdaptationGains& g = sc.gains;
  g.Gamma_x = Eigen::MatrixXd::Identity(2, 2);
  g.gamma_r = 1.0;
  g.Gamma_V = Eigen::MatrixXd::Identity(1, 1);
  g.Gamma_W = Eigen::MatrixXd(0, 0);
  g.P.resize(2, 2);
  g.P << 1.5, 0.5, 0.5, 1.0;  // solves A_r'P + P A_r = -I

  // Component intervals bracketing the matched gains and true weights with
  // slack; centers and half widths follow from the interval endpoints.
  const double margin = 0.1;
  auto interval = [&](double lo, double hi, int dim) {
    return ProjectionSet::from_interval(
        Eigen::VectorXd::Constant(dim, 0.5 * (lo + hi)),
        Eigen::VectorXd::Constant(dim, 0.5 * (hi - lo)), margin);
  };
  sc.sets.k_x = interval(-1.5 / 1.4, 0.5, 2);
  sc.sets.k_r = interval(1.0 / 1.4, 1.0, 1);
  sc.sets.V = interval(-0.5 / 1.4, 1.5, 1);
  sc.sets.W = ProjectionSet::from_interval(Eigen::VectorXd(), Eigen::VectorXd(), margin);

  sc.observer.gain = 50.0;

  sc.rejection.mode = RejectionMode::Integrating;
  sc.rejection.u_bar = 10.0;
  sc.rejection.f_bar = 5.0;
  sc.rejection.k_eta = 1.0;

  sc.init.x = Eigen::VectorXd::Zero(2);
  // Start the reference model on its steady oscillation (x_r = (sin t, cos t));
  // from the origin the neutrally stable closed reference loop would drift.
  sc.init.x_r.resize(2);
  sc.init.x_r << 0.0, 1.0;
  sc.init.d_u_hat = Eigen::VectorXd::Zero(2);
  sc.init.u_drj = 0.0;

  sc.sim.t_end = 50.0;
  sc.sim.h = 1e-3;
  sc.sim.decimate = 1;
  sc.sim.divergence_guard = 1e6;
  return sc;
}

void validate_scenario(const ScenarioConfig& sc) {
  sc.plant.validate();
  validate_reference(sc.reference);
  const int n = sc.plant.n();
  const int m_v = sc.plant.basis_V.size();
  const int m_w = sc.plant.basis_W.size();
  if (sc.reference.n() != n)
    throw DimensionMismatch("plant and reference state dimensions differ");
  if ((sc.plant.b - sc.reference.b).norm() >
      1e-12 * std::max(1.0, sc.reference.b.norm()))
    throw ConfigError("plant and reference must share the input direction b");
  if (static_cast<int>(sc.reference.V_r.size()) != m_v)
    throw DimensionMismatch("V_r length does not match the V-basis size");
  sc.disturbance.validate();
  validate_gains(sc.gains, n, m_v, m_w);
  lyapunov_q(sc.reference.A_r, sc.gains.P);
  solve_matching(sc.plant.A, sc.reference.A_r, sc.plant.b, sc.plant.Lambda,
                 sc.reference.Lambda_r);

  auto check_set = [](const ProjectionSet& s, int dim, const char* label) {
    s.validate();
    if (s.dim() != dim)
      throw DimensionMismatch(std::string("projection set ") + label +
                              " has dimension " + std::to_string(s.dim()) +
                              ", expected " + std::to_string(dim));
  };
  check_set(sc.sets.k_x, n, "k_x");
  check_set(sc.sets.k_r, 1, "k_r");
  check_set(sc.sets.V, m_v, "V");
  check_set(sc.sets.W, m_w, "W");

  if (!(sc.observer.gain > 0.0)) throw ConfigError("observer gain must be positive");
  sc.rejection.validate();

  auto check_len = [](const Eigen::VectorXd& v, int len, const char* label) {
    if (static_cast<int>(v.size()) != len)
      throw DimensionMismatch(std::string("initial ") + label + " has length " +
                              std::to_string(v.size()) + ", expected " +
                              std::to_string(len));
  };
  check_len(sc.init.x, n, "x");
  check_len(sc.init.x_r, n, "x_r");
  check_len(sc.init.d_u_hat, n, "d_u_hat");
  if (sc.init.k_x) check_len(*sc.init.k_x, n, "k_x");
  if (sc.init.V) check_len(*sc.init.V, m_v, "V");
  if (sc.init.W) check_len(*sc.init.W, m_w, "W");
  auto check_inside = [](const ProjectionSet& s, const Eigen::VectorXd& theta,
                         const char* label) {
    if (s.dim() > 0 && s.value(theta) > 1.0 + 1e-12)
      throw ConfigError(std::string("initial ") + label +
                        " lies outside its admissible region");
  };
  check_inside(sc.sets.k_x, sc.init.k_x ? *sc.init.k_x : sc.sets.k_x.center, "k_x");
  check_inside(sc.sets.k_r,
               Eigen::VectorXd::Constant(
                   1, sc.init.k_r ? *sc.init.k_r
                                  : (sc.sets.k_r.dim() > 0 ? sc.sets.k_r.center[0] : 0.0)),
               "k_r");
  check_inside(sc.sets.V, sc.init.V ? *sc.init.V : sc.sets.V.center, "V");
  check_inside(sc.sets.W, sc.init.W ? *sc.init.W : sc.sets.W.center, "W");
  if (sc.rejection.mode == RejectionMode::Integrating &&
      std::abs(sc.init.u_drj) > sc.rejection.u_bar)
    throw ConfigError("initial u_drj exceeds the magnitude limit u_bar");

  const SimParams& sp = sc.sim;
  if (!(sp.t_end > 0.0)) throw ConfigError("t_end must be positive");
  if (!(sp.h > 0.0)) throw ConfigError("step size h must be positive");
  const double steps_real = sp.t_end / sp.h;
  const long long steps = std::llround(steps_real);
  if (steps < 1 || std::abs(static_cast<double>(steps) * sp.h - sp.t_end) >
                       1e-9 * std::max(1.0, sp.t_end))
    throw ConfigError("t_end must be an integer number of steps h");
  if (steps > 100'000'000LL) throw ConfigError("step count exceeds the supported limit");
  if (sp.decimate < 1) throw ConfigError("decimate must be at least 1");
  if (!(sp.divergence_guard > 0.0))
    throw ConfigError("divergence_guard must be positive");
}

ScenarioConfig load_scenario(const std::optional<std::string>& preset,
                             const std::optional<std::string>& config_path,
                             const std::vector<std::string>& overrides) {
  json j = json::object();
  if (preset) j = scenario_to_j(scenario_preset(*preset));
  if (config_path) {
    std::ifstream in(*config_path);
    if (!in) throw IoError("cannot open config file \"" + *config_path + "\"");
    std::stringstream buf;
    buf << in.rdbuf();
    json file = json::parse(buf.str(), nullptr, false);
    if (file.is_discarded())
      throw ConfigError("config file \"" + *config_path + "\" is not valid JSON");
    if (!file.is_object())
      throw ConfigError("config file \"" + *config_path + "\" must hold an object");
    j = deep_merge(j, file);
  }
  for (const std::string& kv : overrides) {
    const std::size_t eq = kv.find('=');
    if (eq == std::string::npos || eq == 0)
      throw ConfigError("override \"" + kv + "\" must have the form key=value");
    set_by_path(j, kv.substr(0, eq), parse_override_value(kv.substr(eq + 1)));
  }
  ScenarioConfig sc = scenario_from_j(j);
  validate_scenario(sc);
  return sc;
}

ScenarioConfig scenario_from_json_text(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw ConfigError("scenario text is not valid JSON");
  ScenarioConfig sc = scenario_from_j(j);
  validate_scenario(sc);
  return sc;
}

ScenarioConfig apply_override(const ScenarioConfig& sc, const std::string& key,
                              const std::string& value) {
  json j = scenario_to_j(sc);
  set_by_path(j, key, parse_override_value(value));
  ScenarioConfig out = scenario_from_j(j);
  validate_scenario(out);
  return out;
}

std::string dump_scenario(const ScenarioConfig& sc) {
  json j = scenario_to_j(sc);
  json d;
  const MatchedGains mg = solve_matching(sc.plant.A, sc.reference.A_r, sc.plant.b,
                                         sc.plant.Lambda, sc.reference.Lambda_r);
  d["k_x_star"] = to_j(mg.k_x_star);
  d["k_r_star"] = mg.k_r_star;
  const Eigen::MatrixXd Q = lyapunov_q(sc.reference.A_r, sc.gains.P);
  d["Q"] = to_j(Q);
  d["lambda_min_Q"] =
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(Q).eigenvalues().minCoeff();
  d["projection_alpha"] = {{"k_x", to_j(sc.sets.k_x.alpha)},
                           {"k_r", to_j(sc.sets.k_r.alpha)},
                           {"V", to_j(sc.sets.V.alpha)},
                           {"W", to_j(sc.sets.W.alpha)}};
  const ParamErrorBounds pb = param_error_bounds(sc.sets);
  d["param_error_bounds"] = {
      {"k_x", pb.b_kx}, {"k_r", pb.b_kr}, {"V", pb.b_V}, {"W", pb.b_W}};
  d["disturbance_bound"] = sc.disturbance.bound();
  d["sign_lambda"] = sc.plant.Lambda >= 0.0 ? 1 : -1;
  d["steps"] = std::llround(sc.sim.t_end / sc.sim.h);
  j["derived"] = d;
  return j.dump(2);
}

}  // namespace dobac
