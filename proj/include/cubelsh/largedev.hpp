#pragma once

#include <optional>

#include "cubelsh/asymptotics.hpp"

namespace cubelsh {

/// Dual variables of the three-statistic moment problem. The admissible
/// domain D requires l2 < 1/2, l3 < 1/2 and
/// discriminant() = l1^2 - (1-2*l2)(1-2*l3) < 0.
struct Lambda3 {
  double l1 = 0.0;
  double l2 = 0.0;
  double l3 = 0.0;

  double discriminant() const {
    return l1 * l1 - (1.0 - 2.0 * l2) * (1.0 - 2.0 * l3);
  }
  bool in_domain() const {
    return l2 < 0.5 && l3 < 0.5 && discriminant() < 0.0;
  }
};

/// Target point for the rate function: per-coordinate means of
/// (X*Y, X^2, Y^2) over half-normal pairs. For collision analysis the
/// point is (cos(theta) * x * y, x^2, y^2). z2 and z3 must be positive.
struct ZPoint {
  double z1;
  double z2;
  double z3;
};

enum class RateBranch { PlusClosed, MinusClosed, Numeric };

/// Value of the convex-dual supremum sup_lambda { <lambda, z> - lmgf }.
/// Nonnegative everywhere (the supremum dominates lambda = 0) and +inf for
/// z outside the support cone z1^2 < z2*z3. argmax is present only when
/// the supremum is attained at an interior dual point; boundary suprema
/// (beta -> 1 or beta -> infinity internally) leave it empty.
struct RateValue {
  double value;
  RateBranch branch;
  std::optional<Lambda3> argmax;
};

/// Closed form of the quadrant integral
///   I(a,b,c) = int_0^inf int_0^inf exp(a x^2 + b x y + c y^2) dx dy
///            = (pi + 2 arctan(b / sqrt(4ac - b^2))) / (2 sqrt(4ac - b^2)).
/// Requires a < 0, c < 0 and b^2 < 4ac; throws std::domain_error otherwise.
double quadrant_gaussian_integral(double a, double b, double c);

/// Log-moment-generating function of (X*Y, X^2, Y^2) for independent
/// half-normal X, Y:
///   ln(pi + 2 arctan(l1 / sqrt(-disc))) - ln(pi) - ln(-disc)/2.
/// Throws std::domain_error outside the admissible domain.
double lmgf(const Lambda3& l);

/// Convex-dual supremum over the admissible domain of Lambda3 (the
/// symmetric discriminant < 0 region) by multi-start ascent.
///
/// Internally the two inner dual coordinates are eliminated in closed form
/// (their optimum for fixed (sign l1, product scale) is explicit), leaving
/// a one-dimensional profile per sign of l1 that is maximized by
/// expanding-window golden section from 16 lattice starts; the merge picks
/// the maximum deterministically (ties broken by lexicographic lambda).
/// Suprema that run off to the domain boundary are evaluated through their
/// analytic limits, so the reported value approaches the truth from below.
/// On the collision slice z = (cos t, 1, 1) this reproduces the closed
/// branches; for targets with z1 small relative to sqrt(z2 z3) the
/// supremum may sit on the discriminant -> 0 edge instead.
/// Throws std::runtime_error if the best two starts of the winning sign
/// disagree by more than 1e-5 after refinement.
RateValue rate_numeric(const ZPoint& z);

/// Closed-form supremum restricted to l1 > 0, evaluated at the collision
/// point z = (cos theta, 1, 1) for theta in (0, pi/2):
/// ln(pi b (b cos t - 1) / (2 (b - cos t)^2)) with the Beta0 root below
/// pivot_angle(), 0 at and beyond it.
RateValue rate_plus_closed(Angle theta);

/// Closed-form supremum restricted to l1 < 0 at the same collision point:
/// 0 up to pivot_angle(); ln(pi b (b cos t + 1) / (2 (b + cos t)^2)) with
/// the Beta1 root on (pivot_angle(), pi/3); ln(pi / (2 (1 + cos t))) on
/// [pi/3, pi/2).
RateValue rate_minus_closed(Angle theta);

/// Collision base reconstructed through the rate pipeline:
/// exp(-max(rate_plus, rate_minus)) / (2 sin theta). The larger branch is
/// the active one (the other is identically zero in its region), and the
/// result reproduces hypercube_collision_base to 1e-9 on (0, pi/2).
double collision_base_via_ld(Angle theta);

/// Norm deviation penalty x^2/2 + y^2/2 - 1 - ln(x y), nonnegative with
/// equality exactly at x = y = 1. Requires x, y > 0.
double norm_penalty(double x, double y);

namespace detail {

/// One-sign restriction of rate_numeric (sign = +1 or -1 for the sign of
/// l1). Exposed for the branch-restricted consistency tests.
RateValue rate_numeric_signed(const ZPoint& z, int sign);

}  // namespace detail

}  // namespace cubelsh
