#pragma once

// Extremals for p = 1 (RK4 on the reduced spray equation), harmonic-map
// residuals on grids for p >= 2, and trapezoidal action values.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "jetlag/sampling.hpp"
#include "jetlag/space.hpp"

namespace jetlag {

struct ExtremalProblem {
  double t0 = 0.0;
  std::vector<double> x0;
  std::vector<double> y0;
  double t_end = 1.0;
  double dt = 1e-3;

  void validate(const Dims& d) const;
};

struct TrajectoryState {
  double t = 0.0;
  std::vector<double> x;
  std::vector<double> y;
};

struct Trajectory {
  std::vector<TrajectoryState> states;
  bool aborted = false;
  std::string abort_reason;
  double max_el_residual = 0.0;  // over all accepted states
};

/// x'' = H^1_11 x' - 2 h_11 G(t, x, x').
std::vector<double> extremal_acceleration(const Space& space, double t, const std::vector<double>& x,
                                          const std::vector<double>& y);

/// Euler-Lagrange left side at a state, with x'' from the extremal ODE.
std::vector<double> el_residual(const Space& space, const TrajectoryState& s);

/// Same, with x'' supplied by the caller.
std::vector<double> el_residual(const Space& space, const TrajectoryState& s, const std::vector<double>& xdd);

/// Classical RK4 with uniform steps. A degenerate spray ends the run; the
/// states computed so far are kept and `aborted` is set.
Trajectory integrate_extremal(const Space& space, const ExtremalProblem& problem);

/// Trapezoidal integral of L * sqrt|h_11| along the states.
double action_value(const Space& space, const Trajectory& traj);

/// Adds eps * phi(t) to x and eps * phi'(t) to y at every state.
using Variation = std::function<void(double t, std::vector<double>& phi, std::vector<double>& dphi)>;
Trajectory perturb(const Trajectory& traj, const Variation& v, double eps);

struct FirstVariation {
  std::vector<double> eps;
  std::vector<double> delta;  // action(perturbed) - action(extremal)
  double ratio = 0.0;         // delta[0] / delta[1]
  double expected = 0.0;      // (eps[0] / eps[1])^2
  bool passed = false;        // ratio within 20% of expected
};

/// Bump variation vanishing at both ends: phi^i = sin(pi s)^2 * (i + 1).
FirstVariation first_variation_check(const Space& space, const Trajectory& traj, double eps_a = 1e-3,
                                     double eps_b = 1e-4);

struct MinimalityCheck {
  bool skipped = false;  // g not positive definite
  double extremal_action = 0.0;
  double min_perturbed_action = 0.0;
  std::size_t count = 0;
  bool passed = false;
};

/// Compares the extremal action with `count` random endpoint-preserving
/// sine-series perturbations.
MinimalityCheck action_minimality(const Space& space, const Trajectory& traj, std::size_t count = 50,
                                  std::uint64_t seed = 0, double amplitude = 0.05);

/// Node values of a map from a box in T (p >= 2) to M, on a uniform grid.
struct GridMap {
  std::vector<std::size_t> shape;  // nodes per axis
  std::vector<Interval> box;
  std::vector<std::vector<double>> values;  // row-major over nodes, axis 0 slowest

  static GridMap sample(const std::vector<std::size_t>& shape, const std::vector<Interval>& box,
                        const std::function<std::vector<double>(const std::vector<double>&)>& f);
  double spacing(std::size_t axis) const;
  std::size_t node_count() const;
  std::vector<std::size_t> unravel(std::size_t node) const;
  std::size_t ravel(const std::vector<std::size_t>& idx) const;
  std::vector<double> node_time(std::size_t node) const;
};

struct HarmonicResidual {
  std::vector<std::size_t> nodes;             // interior node indices
  std::vector<std::vector<double>> residual;  // per interior node
  double max_norm = 0.0;                      // max Euclidean norm
  double rms_norm = 0.0;
};

/// Delta_h x + 2G at the interior nodes, with first and second derivatives
/// from central differences.
HarmonicResidual harmonic_residual(const Space& space, const GridMap& map);

/// Trapezoidal integral of L * sqrt|det h| over the grid; derivatives from
/// second-order differences (one-sided on the boundary).
double action_value(const Space& space, const GridMap& map);

}  // namespace jetlag
