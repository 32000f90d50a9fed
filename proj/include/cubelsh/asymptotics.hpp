#pragma once

#include <numbers>
#include <optional>
#include <stdexcept>

namespace cubelsh {

inline constexpr double kPi = std::numbers::pi;

/// An angle in radians, restricted to [0, pi]. Construction from a value
/// outside that range (or a NaN) throws std::domain_error, so any function
/// taking an Angle may assume the range.
struct Angle {
  Angle(double r) : radians(r) {  // NOLINT: implicit by design
    if (!(r >= 0.0 && r <= kPi)) {
      throw std::domain_error("Angle: radians must lie in [0, pi]");
    }
  }
  double radians;
};

enum class HashModel { Hyperplane, Hypercube, Square };

/// Which piece of the piecewise collision asymptote produced a value.
/// Beta0/Beta1 are the two transcendental-root pieces; ClosedForm covers
/// the elementary pieces (including the theta = 0 limit and the boundary
/// values at the branch seams); Zero is the vanishing region theta >= pi/2.
enum class BaseBranch { Beta0, Beta1, ClosedForm, Zero };

/// Root of one of the two defining identities behind the hypercube
/// collision asymptote, with the defect of the identity at the returned
/// point. residual stays below 1e-10 for angles away from the extreme
/// ends of each branch interval; near those ends (theta < ~0.03 on the
/// Beta0 side) double precision cannot express the root accurately enough
/// for the printed-form defect to reach that level, and the field simply
/// reports what was achieved.
struct BetaRoot {
  Angle theta;
  double beta;      ///< root, always > 1
  double residual;  ///< |lhs - rhs| of the defining identity at beta
  BaseBranch branch;
};

/// Value of p(theta)^(1/d) in the large-d limit for full hypercube
/// hashing, together with the branch that produced it and, on the
/// transcendental branches, the root used.
struct CollisionAsymptote {
  Angle theta;
  double base;  ///< in [0, 1]
  BaseBranch branch;
  std::optional<BetaRoot> beta;  ///< present iff branch is Beta0 or Beta1
};

/// (theta1, theta2, p1, p2)-sensitivity summary: per-dimension collision
/// bases at the near and far angle and the query exponent
/// rho = ln(p1)/ln(p2).
struct SensitivityProfile {
  Angle theta1;
  Angle theta2;
  double p1_base;
  double p2_base;
  double rho;
  HashModel model;
};

/// Boundary angle arccos(2/pi) where the two transcendental branches of
/// the hypercube asymptote meet (also the concentration point of the
/// normalized half-normal inner product).
double pivot_angle();

/// Collision base at pivot_angle(): pi / (2 sqrt(pi^2 - 4)).
double pivot_base();

/// Solve the first defining identity,
///   arccos(-1/b) = (b - cos t) sqrt(b^2 - 1) / (b (b cos t - 1)),
/// for its unique root b > 1/cos(t). Valid for 0 < theta < pivot_angle().
/// Bracketed bisection, refined until the bracket is one ulp wide.
/// Throws std::domain_error outside the open interval and
/// std::runtime_error if bracket expansion passes b = 1e12.
BetaRoot solve_beta0(Angle theta);

/// Solve the second defining identity,
///   arccos(1/b) = (b + cos t) sqrt(b^2 - 1) / (b (b cos t + 1)),
/// for its unique root b > 1. Valid for pivot_angle() < theta < pi/3.
/// Same method and error behavior as solve_beta0.
BetaRoot solve_beta1(Angle theta);

/// Per-dimension asymptotic collision base for full hypercube hashing.
///
/// Piecewise: the Beta0 formula (b-c)^2/(pi b (bc-1) sin t) below
/// pivot_angle(), the Beta1 formula (b+c)^2/(pi b (bc+1) sin t) between
/// pivot_angle() and pi/3, (1+c)/(pi sin t) on [pi/3, pi/2), and 0 on
/// [pi/2, pi]. theta = 0 returns 1 (the limit).
///
/// Numerical guards, each leaving the value within 1e-9 of the exact
/// piecewise formula: within 1e-9 of pivot_angle() the boundary value
/// pivot_base() is returned directly (the roots diverge there), and below
/// theta = 1e-3 the base and root come from the validated series
/// 1 - (sqrt(2)/pi) sqrt(e) - e/pi^2, b = 1/cos t + (2 sqrt(2)/pi) e^(3/2)
/// with e = 1 - cos t (the direct formula loses all precision there).
CollisionAsymptote hypercube_collision_base(Angle theta);

/// Exact collision probability of k independent random-hyperplane sign
/// hashes: (1 - theta/pi)^k. No order terms.
double hyperplane_collision(Angle theta, int k);

/// Exact collision probability of the two-dimensional orthant hash:
/// 1 - 2 theta/pi for theta <= pi/2, else 0.
double square_collision(Angle theta);

/// Sensitivity profile of a model between a near angle theta1 and a far
/// angle theta2 (theta1 <= theta2; equal angles give rho = 1).
///
/// For the hypercube model the base vanishes at pi/2, so theta2 = pi/2 is
/// interpreted through hypercube_p2_left_limit: true (default) uses the
/// left-limit base 1/pi, false keeps the literal 0 and returns rho = 0
/// (beyond that distance the far collision event is impossible, making
/// the filter perfect). Any other degenerate base (p2 of 0 or 1 elsewhere,
/// or hypercube theta2 > pi/2) throws std::domain_error.
SensitivityProfile rho(Angle theta1, Angle theta2, HashModel model,
                       bool hypercube_p2_left_limit = true);

/// Sensitivity profile of the random-data regime at approximation factor
/// c > 1: theta1 = arccos(1 - 1/c^2), theta2 = pi/2 (left limit by
/// default). Delegates to rho() on the same code path.
SensitivityProfile rho_random(double c, HashModel model,
                              bool hypercube_p2_left_limit = true);

/// First-order small-angle collision base 1 - (sqrt(2)/pi) sqrt(epsilon)
/// at cos(theta) = 1 - epsilon, 0 < epsilon < 1.
double small_angle_base(double epsilon);

/// Leading-order rho in the random-data regime for hypercube hashing,
/// sqrt(2) / (pi c ln pi), valid for c >= 2.
double large_c_rho(double c);

/// Exponential rate ln(sin theta) of the density of the angle between two
/// independent random directions as dimension grows. Endpoints excluded
/// (the rate diverges); throws std::domain_error at 0 and pi.
double log_sin_density_exponent(Angle theta);

}  // namespace cubelsh
