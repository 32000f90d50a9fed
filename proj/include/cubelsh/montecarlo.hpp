#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "cubelsh/asymptotics.hpp"

namespace cubelsh {

/// How to draw the (rotation, pair) randomness of one collision trial.
///  - PlaneMarginal: integrates the rotation out analytically; each trial
///    draws an isotropic orthonormal 2-frame and places the pair in it
///    (two Gaussian vectors per trial, no rotation build). The default.
///  - HaarDense: a fresh partial dense rotation per trial, applied to one
///    fixed probe pair at the requested angle. Dense rotations are
///    exactly rotation invariant, so the probe pair is immaterial and the
///    estimated law equals PlaneMarginal's.
///  - PseudoStructured: a fresh structured rotation (3 rounds) per trial,
///    applied to the same probe pair; needs a power-of-two dimension.
///    Structured rotations are only approximately invariant, so the
///    estimate genuinely depends on the probe pair. The pair is drawn in
///    a generic direction from a reserved stream of the seed: coordinate
///    axes are the family's known worst case (a few percent low at small
///    dimensions), and averaging over random pairs instead would exactly
///    reproduce the dense law for any fixed map, hiding the structure
///    this backend exists to measure.
enum class SamplerKind { PlaneMarginal, HaarDense, PseudoStructured };

/// One binomial estimate of a collision probability.
struct CollisionEstimate {
  int d = 0;
  int dprime = 0;
  double theta = 0.0;  ///< radians
  long long trials = 0;
  long long successes = 0;
  double p_hat = 0.0;
  /// Plain binomial standard error sqrt(p (1-p) / n); zero when every
  /// trial agreed, so admissibility filters must look at `successes`.
  /// (Named std_error because C stdio reserves `stderr` as a macro.)
  double std_error = 0.0;
};

/// Least-squares fit of log p against dimension: ln p ~= c2 + c1 * d.
struct CurveFit {
  double c1 = 0.0;  // slope per dimension
  double c2 = 0.0;  // intercept
  double rms_residual = 0.0;
  int points_used = 0;
};

/// The canonical planted pair at one angle: x = e1 and
/// y = cos(theta) e1 + sin(theta) e2, both exactly unit length with
/// <x, y> = cos(theta). Requires d >= 2.
std::pair<std::vector<double>, std::vector<double>> pair_at_angle(
    int d, Angle theta);

/// Probability that two unit vectors at angle theta land in the same
/// orthant of the first dprime coordinates after a random rotation of
/// R^d, estimated from `trials` independent trials. Deterministic in
/// (seed, trials): trial i draws from its own counter-derived stream, so
/// the result is independent of threading and of how the trial range is
/// partitioned. Requires d >= 2 and 1 <= dprime <= d.
CollisionEstimate estimate_collision(int d, int dprime, Angle theta,
                                     long long trials, std::uint64_t seed,
                                     SamplerKind sampler =
                                         SamplerKind::PlaneMarginal,
                                     int threads = 1);

/// Fits ln p_hat = c2 + c1 * dim over the admissible points (those with
/// at least 20 successes, so the log is meaningfully resolved). Throws
/// std::runtime_error if fewer than two points are admissible.
CurveFit fit_exponential(
    const std::vector<std::pair<int, CollisionEstimate>>& points);

/// Histogram of the angle between two independent uniform directions of
/// R^d over `bins` equal cells of [0, pi]. Deterministic per-trial
/// streams, as above. Requires d >= 2, bins >= 1.
std::vector<long long> angle_histogram(int d, long long trials,
                                       std::uint64_t seed, int bins = 64);

}  // namespace cubelsh
