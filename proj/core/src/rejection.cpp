#include "dobac/rejection.hpp"

#include <algorithm>
#include <cmath>

#include "dobac/errors.hpp"

namespace dobac {

std::string to_string(RejectionCase c) {
  switch (c) {
    case RejectionCase::Off: return "off";
    case RejectionCase::Direct: return "direct";
    case RejectionCase::Integrate: return "integrate";
    case RejectionCase::ResetToNegDhat: return "reset-to-neg-dhat";
    case RejectionCase::ResetToZero: return "reset-to-zero";
  }
  return "?";
}

RejectionMode rejection_mode_from_string(const std::string& s) {
  if (s == "off") return RejectionMode::Off;
  if (s == "direct") return RejectionMode::Direct;
  if (s == "integrating") return RejectionMode::Integrating;
  throw ConfigError("rejection: unknown mode '" + s + "'");
}

std::string to_string(RejectionMode m) {
  switch (m) {
    case RejectionMode::Off: return "off";
    case RejectionMode::Direct: return "direct";
    case RejectionMode::Integrating: return "integrating";
  }
  return "?";
}

int case_code(RejectionCase c) { return static_cast<int>(c); }

RejectionCase case_from_code(int code) {
  if (code < 0 || code > static_cast<int>(RejectionCase::ResetToZero))
    throw ConfigError("unknown rejection case code " + std::to_string(code));
  return static_cast<RejectionCase>(code);
}

void RejectionConfig::validate() const {
  if (mode == RejectionMode::Off) return;
  if (u_bar <= 0.0) throw ConfigError("rejection: u_bar must be positive");
  if (mode == RejectionMode::Integrating) {
    if (f_bar <= 0.0) throw ConfigError("rejection: f_bar must be positive");
    if (k_eta <= 0.0) throw ConfigError("rejection: k_eta must be positive");
  }
}

RejectionDecision decide(double u_drj_prev, double d_hat, double d_hat_dot_star,
                         const RejectionConfig& cfg) {
  RejectionDecision d;
  switch (cfg.mode) {
    case RejectionMode::Off:
      d.case_taken = RejectionCase::Off;
      d.u_drj = 0.0;
      break;
    case RejectionMode::Direct:
      d.case_taken = RejectionCase::Direct;
      d.u_drj = (std::abs(d_hat) < cfg.u_bar) ? -d_hat : 0.0;
      break;
    case RejectionMode::Integrating:
      if (std::abs(u_drj_prev) < cfg.u_bar) {
        d.case_taken = RejectionCase::Integrate;
        d.u_drj = u_drj_prev;
      } else if (std::abs(d_hat) < cfg.u_bar) {
        d.case_taken = RejectionCase::ResetToNegDhat;
        d.u_drj = -d_hat;
      } else {
        d.case_taken = RejectionCase::ResetToZero;
        d.u_drj = 0.0;
      }
      break;
  }
  d.eta = eta_eval(d.u_drj, d_hat);
  d.phi_drj = -cfg.k_eta * d.eta - d_hat_dot_star;
  d.f_drj = std::clamp(d.phi_drj, -cfg.f_bar, cfg.f_bar);
  if (d.case_taken == RejectionCase::Integrate) d.rate = d.f_drj;
  return d;
}

}  // namespace dobac
