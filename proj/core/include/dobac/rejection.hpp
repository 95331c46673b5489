#pragma once

#include <string>

namespace dobac {

// How the disturbance-rejection input u_drj is produced.
enum class RejectionMode { Off, Direct, Integrating };

// What actually happened at one step.
enum class RejectionCase {
  Off,             // u_drj = 0
  Direct,          // u_drj = -d_hat (0 while |d_hat| >= u_bar)
  Integrate,       // u_drj' = f_drj, magnitude still below u_bar
  ResetToNegDhat,  // magnitude limit hit, |d_hat| < u_bar: jump to -d_hat
  ResetToZero      // magnitude limit hit and d_hat also too large: jump to 0
};

std::string to_string(RejectionCase c);
RejectionMode rejection_mode_from_string(const std::string& s);
std::string to_string(RejectionMode m);

// Stable numeric codes used in log files: off=0, direct=1, integrate=2,
// reset-to-neg-dhat=3, reset-to-zero=4.
int case_code(RejectionCase c);
RejectionCase case_from_code(int code);

struct RejectionConfig {
  RejectionMode mode = RejectionMode::Integrating;
  double u_bar = 10.0;  // magnitude limit on u_drj
  double f_bar = 5.0;   // rate limit on u_drj
  double k_eta = 1.0;   // leak gain on the residual eta = u_drj + d_hat

  void validate() const;
};

struct RejectionDecision {
  RejectionCase case_taken = RejectionCase::Off;
  double u_drj = 0.0;     // value in force for the coming step (after any jump)
  double rate = 0.0;      // applied u_drj' (f_drj when integrating, else 0)
  double eta = 0.0;       // u_drj + d_hat with the applied u_drj
  double phi_drj = 0.0;   // -k_eta * eta - d_hat_dot_star
  double f_drj = 0.0;     // phi_drj clamped to [-f_bar, f_bar]
};

// One-step decision, evaluated at the step start and frozen across the step.
//
// Integrating mode:
//   |u_drj| <  u_bar              -> integrate with rate f_drj
//   |u_drj| >= u_bar, |d_hat| < u_bar -> jump to -d_hat
//   |u_drj| >= u_bar otherwise        -> jump to 0
// Both jumps land strictly inside the magnitude limit, so the next step
// integrates again.
//
// Direct mode applies u_drj = -d_hat algebraically, zeroed while
// |d_hat| >= u_bar so the magnitude limit is honored during transients.
RejectionDecision decide(double u_drj_prev, double d_hat, double d_hat_dot_star,
                         const RejectionConfig& cfg);

inline double eta_eval(double u_drj, double d_hat) { return u_drj + d_hat; }

}  // namespace dobac
