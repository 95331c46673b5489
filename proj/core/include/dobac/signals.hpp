#pragma once

#include <vector>

namespace dobac {

// Scalar exogenous signal: disturbances and reference excitations.
// All kinds have analytic derivatives and a closed-form amplitude bound.
struct SignalSpec {
  enum class Kind { Zero, Constant, Sinusoid, SumOfSinusoids };

  Kind kind = Kind::Zero;
  double offset = 0.0;  // constant term (the value itself for Kind::Constant)
  // Parallel arrays, one entry per sinusoid term: a*sin(w*t + p).
  std::vector<double> amplitude;
  std::vector<double> frequency;  // rad/s
  std::vector<double> phase;      // rad

  static SignalSpec zero();
  static SignalSpec constant(double value);
  static SignalSpec sinusoid(double amplitude, double frequency, double phase = 0.0,
                             double offset = 0.0);

  double eval(double t) const;
  double deriv(double t) const;
  // sup_t |signal(t)| upper bound: |offset| + sum |amplitude|.
  double bound() const;

  void validate() const;  // term array lengths must agree
};

}  // namespace dobac
