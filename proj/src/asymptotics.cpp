#include "cubelsh/asymptotics.hpp"

#include <cmath>
#include <limits>

namespace cubelsh {

namespace {

// Defect of the first defining identity. The differences b*cos(t) - 1 and
// b^2 - 1 both cancel catastrophically near the left bracket end, so they
// are formed with fused multiply-adds (single rounding of the product).
double beta0_defect(double beta, double cos_theta) {
  const double bc_m1 = std::fma(beta, cos_theta, -1.0);
  const double b2_m1 = std::fma(beta, beta, -1.0);
  return std::acos(-1.0 / beta) -
         (beta - cos_theta) * std::sqrt(b2_m1) / (beta * bc_m1);
}

// Defect of the second defining identity (no cancellation in b*cos(t)+1).
double beta1_defect(double beta, double cos_theta) {
  const double bc_p1 = std::fma(beta, cos_theta, 1.0);
  const double b2_m1 = std::fma(beta, beta, -1.0);
  return std::acos(1.0 / beta) -
         (beta + cos_theta) * std::sqrt(b2_m1) / (beta * bc_p1);
}

// Long-double re-substitution used only for reporting residuals of roots
// that were obtained from a series instead of bisection.
double beta0_defect_ld(double beta, double cos_theta) {
  const long double b = beta;
  const long double c = cos_theta;
  const long double bc_m1 = b * c - 1.0L;
  const long double b2_m1 = (b - 1.0L) * (b + 1.0L);
  return static_cast<double>(std::acos(-1.0L / b) -
                             (b - c) * std::sqrt(b2_m1) / (b * bc_m1));
}

// Bisect f on [lo, hi] down to a one-ulp bracket. `rising` says the sign
// of f goes - to + across the root. The endpoint values are trusted by
// the caller and never evaluated here.
template <typename F>
double bisect_to_ulp(F f, double lo, double hi, bool rising) {
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == rising) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

constexpr double kBracketCap = 1e12;
// Below this angle the Beta0 root and base switch to their validated
// series; see the header.
constexpr double kSeriesTheta = 1e-3;
// Half-width of the guard window around pivot_angle().
constexpr double kPivotGuard = 1e-9;

double one_minus_cos(double theta) {
  const double s = std::sin(0.5 * theta);
  return 2.0 * s * s;
}

const double kPivot = std::acos(2.0 / kPi);

}  // namespace

double pivot_angle() { return kPivot; }

double pivot_base() { return kPi / (2.0 * std::sqrt(kPi * kPi - 4.0)); }

BetaRoot solve_beta0(Angle theta) {
  const double t = theta.radians;
  if (!(t > 0.0 && t < kPivot)) {
    throw std::domain_error("solve_beta0: theta must lie in (0, arccos(2/pi))");
  }
  const double c = std::cos(t);
  const double lo_base = 1.0 / c;
  auto f = [c](double b) { return beta0_defect(b, c); };

  // The defect runs to -inf as beta approaches 1/cos(theta) from above, but
  // for small theta the sign flip happens within O(e^{3/2}) of that pole, so
  // the probe offset shrinks until it lands on the negative side.
  double off = 1e-9 * lo_base;
  const double off_floor = std::ldexp(lo_base, -48);
  while (f(lo_base + off) >= 0.0 && off > off_floor) off /= 16.0;
  double lo = lo_base + off;
  if (f(lo) >= 0.0) {
    // Root is within one probe of the pole; representable resolution ends
    // here (only reachable for theta far below kSeriesTheta).
    return BetaRoot{theta, lo, std::fabs(f(lo)), BaseBranch::Beta0};
  }

  double gap = std::max(1.0, 2.0 * off);
  while (f(lo_base + gap) < 0.0) {
    gap *= 2.0;
    if (lo_base + gap > kBracketCap) {
      throw std::runtime_error("solve_beta0: no sign change by beta = 1e12");
    }
  }
  const double root = bisect_to_ulp(f, lo, lo_base + gap, /*rising=*/true);
  return BetaRoot{theta, root, std::fabs(f(root)), BaseBranch::Beta0};
}

BetaRoot solve_beta1(Angle theta) {
  const double t = theta.radians;
  if (!(t > kPivot && t < kPi / 3.0)) {
    throw std::domain_error(
        "solve_beta1: theta must lie in (arccos(2/pi), pi/3)");
  }
  const double c = std::cos(t);
  auto f = [c](double b) { return beta1_defect(b, c); };

  // The defect is positive as beta -> 1+ on this interval (provably, though
  // the floating evaluation there is pure cancellation noise, so the sign is
  // assumed rather than measured) and negative for large beta.
  const double lo = 1.0 + 1e-9;
  double gap = 1.0;
  while (f(lo + gap) > 0.0) {
    gap *= 2.0;
    if (lo + gap > kBracketCap) {
      throw std::runtime_error("solve_beta1: no sign change by beta = 1e12");
    }
  }
  const double root = bisect_to_ulp(f, lo, lo + gap, /*rising=*/false);
  return BetaRoot{theta, root, std::fabs(f(root)), BaseBranch::Beta1};
}

CollisionAsymptote hypercube_collision_base(Angle theta) {
  const double t = theta.radians;
  if (t == 0.0) {
    return {theta, 1.0, BaseBranch::ClosedForm, std::nullopt};
  }
  if (t >= kPi / 2.0) {
    return {theta, 0.0, BaseBranch::Zero, std::nullopt};
  }
  if (t >= kPi / 3.0) {
    const double base = (1.0 + std::cos(t)) / (kPi * std::sin(t));
    return {theta, base, BaseBranch::ClosedForm, std::nullopt};
  }
  if (std::fabs(t - kPivot) <= kPivotGuard) {
    // Roots diverge like 1/|t - pivot| here; the true value is within 1e-9
    // of the boundary value.
    return {theta, pivot_base(), BaseBranch::ClosedForm, std::nullopt};
  }
  if (t < kSeriesTheta) {
    const double e = one_minus_cos(t);
    const double base =
        1.0 - std::numbers::sqrt2 / kPi * std::sqrt(e) - e / (kPi * kPi);
    const double c = std::cos(t);
    const double b = 1.0 / c + 2.0 * std::numbers::sqrt2 / kPi * e * std::sqrt(e);
    BetaRoot root{theta, b, std::fabs(beta0_defect_ld(b, c)), BaseBranch::Beta0};
    return {theta, base, BaseBranch::Beta0, root};
  }
  if (t < kPivot) {
    const BetaRoot r = solve_beta0(theta);
    const double c = std::cos(t);
    const double b = r.beta;
    const double base = (b - c) * (b - c) /
                        (kPi * b * std::fma(b, c, -1.0) * std::sin(t));
    return {theta, base, BaseBranch::Beta0, r};
  }
  const BetaRoot r = solve_beta1(theta);
  const double c = std::cos(t);
  const double b = r.beta;
  const double base =
      (b + c) * (b + c) / (kPi * b * std::fma(b, c, 1.0) * std::sin(t));
  return {theta, base, BaseBranch::Beta1, r};
}

double hyperplane_collision(Angle theta, int k) {
  if (k < 1) throw std::domain_error("hyperplane_collision: k must be >= 1");
  return std::pow(1.0 - theta.radians / kPi, k);
}

double square_collision(Angle theta) {
  if (theta.radians >= kPi / 2.0) return 0.0;
  return 1.0 - 2.0 * theta.radians / kPi;
}

namespace {

// Collision base of one hash dimension at the far angle conventions used
// by rho(); returns the literal piecewise value.
double model_base(HashModel model, Angle theta) {
  switch (model) {
    case HashModel::Hyperplane:
      return 1.0 - theta.radians / kPi;
    case HashModel::Hypercube:
      return hypercube_collision_base(theta).base;
    case HashModel::Square:
      return square_collision(theta);
  }
  throw std::logic_error("model_base: unreachable");
}

}  // namespace

SensitivityProfile rho(Angle theta1, Angle theta2, HashModel model,
                       bool hypercube_p2_left_limit) {
  if (theta1.radians > theta2.radians) {
    throw std::domain_error("rho: theta1 must not exceed theta2");
  }
  if (theta1.radians == theta2.radians) {
    const double p = model_base(model, theta1);
    return {theta1, theta2, p, p, 1.0, model};
  }
  if (model == HashModel::Hypercube && theta2.radians > kPi / 2.0) {
    throw std::domain_error("rho: hypercube far angle beyond pi/2");
  }

  double p2 = model_base(model, theta2);
  if (model == HashModel::Hypercube && theta2.radians == kPi / 2.0) {
    if (hypercube_p2_left_limit) {
      p2 = 1.0 / kPi;
    } else {
      // Literal zero: a far collision is impossible, the filter is perfect.
      const double p1 = model_base(model, theta1);
      return {theta1, theta2, p1, 0.0, 0.0, model};
    }
  }
  if (p2 <= 0.0 || p2 >= 1.0) {
    throw std::domain_error("rho: far-angle collision base is degenerate");
  }
  const double p1 = model_base(model, theta1);
  if (p1 <= 0.0) {
    throw std::domain_error("rho: near-angle collision base is degenerate");
  }
  return {theta1, theta2, p1, p2, std::log(p1) / std::log(p2), model};
}

SensitivityProfile rho_random(double c, HashModel model,
                              bool hypercube_p2_left_limit) {
  if (!(c > 1.0)) throw std::domain_error("rho_random: c must exceed 1");
  const double theta1 = std::acos(1.0 - 1.0 / (c * c));
  return rho(theta1, kPi / 2.0, model, hypercube_p2_left_limit);
}

double small_angle_base(double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw std::domain_error("small_angle_base: epsilon must lie in (0, 1)");
  }
  return 1.0 - std::numbers::sqrt2 / kPi * std::sqrt(epsilon);
}

double large_c_rho(double c) {
  if (!(c >= 2.0)) throw std::domain_error("large_c_rho: c must be >= 2");
  return std::numbers::sqrt2 / (kPi * c * std::log(kPi));
}

double log_sin_density_exponent(Angle theta) {
  if (theta.radians <= 0.0 || theta.radians >= kPi) {
    throw std::domain_error("log_sin_density_exponent: theta in (0, pi) only");
  }
  return std::log(std::sin(theta.radians));
}

}  // namespace cubelsh
