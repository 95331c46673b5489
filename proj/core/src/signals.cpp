#include "dobac/signals.hpp"

#include <cmath>
#include <cstdlib>

#include "dobac/errors.hpp"

namespace dobac {

SignalSpec SignalSpec::zero() { return SignalSpec{}; }

SignalSpec SignalSpec::constant(double value) {
  SignalSpec s;
  s.kind = Kind::Constant;
  s.offset = value;
  return s;
}

SignalSpec SignalSpec::sinusoid(double amplitude, double frequency, double phase,
                                double offset) {
  SignalSpec s;
  s.kind = Kind::Sinusoid;
  s.offset = offset;
  s.amplitude = {amplitude};
  s.frequency = {frequency};
  s.phase = {phase};
  return s;
}

void SignalSpec::validate() const {
  const std::size_t n = amplitude.size();
  if (frequency.size() != n || phase.size() != n)
    throw DimensionMismatch("signal: amplitude/frequency/phase lengths differ");
  if (kind == Kind::Sinusoid && n != 1)
    throw ConfigError("signal: sinusoid kind requires exactly one term");
  if ((kind == Kind::Zero || kind == Kind::Constant) && n != 0)
    throw ConfigError("signal: zero/constant kinds take no sinusoid terms");
}

double SignalSpec::eval(double t) const {
  double v = (kind == Kind::Zero) ? 0.0 : offset;
  for (std::size_t i = 0; i < amplitude.size(); ++i)
    v += amplitude[i] * std::sin(frequency[i] * t + phase[i]);
  return v;
}

double SignalSpec::deriv(double t) const {
  double v = 0.0;
  for (std::size_t i = 0; i < amplitude.size(); ++i)
    v += amplitude[i] * frequency[i] * std::cos(frequency[i] * t + phase[i]);
  return v;
}

double SignalSpec::bound() const {
  double v = (kind == Kind::Zero) ? 0.0 : std::abs(offset);
  for (double a : amplitude) v += std::abs(a);
  return v;
}

}  // namespace dobac
