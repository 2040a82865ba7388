#pragma once

// Kronecker h-regularity: does the vertical Hessian factor as h^{ab}(t) g_ij?
// For p >= 2 such Lagrangians are exactly the electrodynamics ones, and
// electrodynamics_decompose recovers g, U, F from L.

#include <cstdint>
#include <string>
#include <vector>

#include "jetlag/sampling.hpp"
#include "jetlag/space.hpp"

namespace jetlag {

class DecompositionError : public Error {
 public:
  DecompositionError(const std::string& what, double residual) : Error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

struct KroneckerOptions {
  std::size_t samples = 64;
  double tol = 1e-6;
  std::size_t velocity_redraws = 8;
  std::uint64_t seed = 0;
};

struct SampleVerdict {
  JetPoint point;
  Matrix g_estimate;
  double residual = 0.0;       // max |G - h^{ab} g_est|
  double asymmetry = 0.0;      // of g_estimate
  double determinant = 0.0;    // of g_estimate
  Signature signature;
  double velocity_spread = 0.0;  // max change of g_estimate over velocity redraws
  bool ok = true;
  std::string note;
};

struct RegularityVerdict {
  bool is_kronecker = false;
  bool velocity_dependent_g = false;
  double max_block_residual = 0.0;
  double max_velocity_spread = 0.0;
  Signature signature;
  std::vector<SampleVerdict> samples;
  std::string diagnostic;
};

/// Vertical Hessian as a DTensor with slots (VerticalUpper, VerticalUpper)
/// flattened to the (np) x (np) block matrix.
Matrix vertical_hessian(const Space& space, const JetPoint& pt);

/// g_est = (1/p) h_{ab} G^{(a)(b)}_{(i)(j)} and the block residual of the
/// Kronecker factorization at one point.
struct KroneckerSample {
  Matrix g_estimate;
  double residual = 0.0;
};
KroneckerSample kronecker_factor(const Space& space, const JetPoint& pt);

RegularityVerdict kronecker_test(const Space& space, const SamplingBox& box, const KroneckerOptions& opt = {});

struct DecompositionOptions {
  std::size_t base_points = 8;
  std::size_t velocity_draws = 4;
  double tol = 1e-8;
  std::uint64_t seed = 0;
};

/// g, U, F and U curl at one (t, x) base point, velocities zero.
struct DecompositionSample {
  JetPoint base;
  Matrix g;
  Matrix U;                   // n x p
  double F = 0.0;
  std::vector<double> U_curl;  // (i * n + j) * p + a
};

struct ElectrodynamicsDecomposition {
  std::vector<DecompositionSample> samples;
  double max_reassembly_residual = 0.0;
  double max_curl_asymmetry = 0.0;
};

/// Decompose L at seeded base points and reassemble it at random
/// velocities. Throws DecompositionError when the reassembly residual
/// exceeds tol * max(1, |L|).
ElectrodynamicsDecomposition electrodynamics_decompose(const Space& space, const SamplingBox& box,
                                                       const DecompositionOptions& opt = {});

/// Largest |L - L_declared| over seeded points, where L_declared is
/// assembled from the components attached to an expression model.
double declared_roundtrip_residual(const Space& space, const SamplingBox& box, std::size_t count, std::uint64_t seed);

/// Throws DecompositionError unless p == 1, the model is a builtin family,
/// or L decomposes as an electrodynamics Lagrangian.
void require_electrodynamic(const Space& space, const SamplingBox& box, std::uint64_t seed = 0);

}  // namespace jetlag
