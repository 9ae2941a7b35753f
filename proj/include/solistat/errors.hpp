#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace solistat {

// Base class for everything this library throws on purpose.
class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Violated precondition or argument outside a function's domain.
class domain_error : public error {
 public:
  using error::error;
};

// Wave speed with |u| >= 1 (singular Lorentz factor).
class frame_error : public error {
 public:
  using error::error;
};

// Operation not defined for the given equation form (e.g. phi*sin(phi)
// nonlinearity with a != 0, or energy for a quasilinear spec).
class unsupported_form_error : public error {
 public:
  using error::error;
};

// Quadrature failed to reach the requested accuracy; carries the best
// estimate it produced.
class accuracy_error : public error {
 public:
  accuracy_error(const std::string& msg, double best)
      : error(msg), best_estimate(best) {}
  double best_estimate;
};

// ODE step control underflowed (stiffness or a singularity); carries the
// last successfully reached point.
class integration_error : public error {
 public:
  integration_error(const std::string& msg, double eta, std::vector<double> state)
      : error(msg), last_eta(eta), last_state(std::move(state)) {}
  double last_eta;
  std::vector<double> last_state;
};

// First-integral right-hand side went negative: the square-root branch is
// imaginary at the reported coordinate.
class branch_error : public error {
 public:
  branch_error(const std::string& msg, double eta) : error(msg), at_eta(eta) {}
  double at_eta;
};

// No closed-form catalog pattern matches the equation.
class catalog_miss : public error {
 public:
  using error::error;
};

// A catalog pattern matched structurally but the integration constant is
// incompatible with the closed form.
class constant_mismatch : public error {
 public:
  using error::error;
};

// Field simulation produced NaN/Inf or violated the positivity floor;
// carries the time of the last good state.
class stability_error : public error {
 public:
  stability_error(const std::string& msg, double t) : error(msg), last_time(t) {}
  double last_time;
};

// Tracked feature (peak or level crossing) left the simulation domain.
class tracking_error : public error {
 public:
  using error::error;
};

// Scenario file violates the schema.
class schema_error : public error {
 public:
  using error::error;
};

// Filesystem write/read failure.
class io_error : public error {
 public:
  using error::error;
};

}  // namespace solistat
