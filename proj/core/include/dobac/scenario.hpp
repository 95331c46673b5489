#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "dobac/adaptive.hpp"
#include "dobac/observer.hpp"
#include "dobac/plant.hpp"
#include "dobac/reference.hpp"
#include "dobac/rejection.hpp"
#include "dobac/signals.hpp"

namespace dobac {

struct InitialConditions {
  Eigen::VectorXd x;
  Eigen::VectorXd x_r;
  // Unset adaptive blocks start at the projection-set centers.
  std::optional<Eigen::VectorXd> k_x;
  std::optional<double> k_r;
  std::optional<Eigen::VectorXd> V;
  std::optional<Eigen::VectorXd> W;
  Eigen::VectorXd d_u_hat;  // observer output at t = 0 (z is derived from it)
  double u_drj = 0.0;
};

struct SimParams {
  double t_end = 50.0;
  double h = 1e-3;
  int decimate = 1;               // log every decimate-th step
  double divergence_guard = 1e6;  // sup-norm limit on the full state
};

// Complete description of one closed-loop run.
struct ScenarioConfig {
  std::string name = "custom";
  PlantParams plant;
  SignalSpec disturbance;
  ReferenceConfig reference;
  AdaptationGains gains;
  ProjectionSets sets;
  ObserverConfig observer;
  RejectionConfig rejection;
  InitialConditions init;
  SimParams sim;
};

// Registered scenario presets: "msd-cubic-paper" (the msd-cubic plant under a
// sinusoidal disturbance, with the matching reference model, gains, and
// projection geometry; rejection defaults to integrating with k_eta = 1).
ScenarioConfig scenario_preset(const std::string& name);

// Cross-field validation; throws ConfigError (or one of its causes:
// NotLyapunov, Unmatchable, DimensionMismatch) on the first problem found.
void validate_scenario(const ScenarioConfig& sc);

// Assemble a scenario from an optional preset, an optional JSON config file,
// and dotted-path overrides ("rejection.k_eta=10"). Later sources win.
// The result is validated before being returned.
ScenarioConfig load_scenario(const std::optional<std::string>& preset,
                             const std::optional<std::string>& config_path,
                             const std::vector<std::string>& overrides);

// Parse a scenario from JSON text (same schema as config files).
ScenarioConfig scenario_from_json_text(const std::string& text);

// Normalized JSON rendering of a scenario, including derived quantities
// (projection weights, matched gains, Q and its smallest eigenvalue,
// parameter-error bounds, disturbance bound) under "derived".
std::string dump_scenario(const ScenarioConfig& sc);

// Apply one dotted-path override to a copy of the scenario and revalidate.
ScenarioConfig apply_override(const ScenarioConfig& sc, const std::string& key,
                              const std::string& value);

}  // namespace dobac
