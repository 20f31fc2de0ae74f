#ifndef MSHLAB_ESTIMATE_HPP
#define MSHLAB_ESTIMATE_HPP

#include <string>

#include "mshlab/errors.hpp"

namespace mshlab {

enum class Method { ClosedForm, RadialQuadrature, MonteCarlo, AscentLowerBound };

inline std::string methodName(Method m) {
  switch (m) {
    case Method::ClosedForm:
      return "closed-form";
    case Method::RadialQuadrature:
      return "radial-quadrature";
    case Method::MonteCarlo:
      return "monte-carlo";
    case Method::AscentLowerBound:
      return "ascent-lower-bound";
  }
  return "?";
}

// A numeric result with its provenance; stderr is nonzero only on the
// Monte Carlo path.
struct Estimate {
  double value = 0.0;
  double stderrOfMean = 0.0;
  Method method = Method::ClosedForm;
  bool degenerate = false;

  static Estimate closedForm(double v) { return {v, 0.0, Method::ClosedForm, false}; }
  static Estimate quadrature(double v) { return {v, 0.0, Method::RadialQuadrature, false}; }
  static Estimate monteCarlo(double v, double se) { return {v, se, Method::MonteCarlo, false}; }
  static Estimate ascent(double v) { return {v, 0.0, Method::AscentLowerBound, false}; }
};

}  // namespace mshlab

#endif
