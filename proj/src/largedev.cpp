#include "cubelsh/largedev.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

namespace cubelsh {

namespace {

// Guard bands shared with the collision-base branch logic: the transcendental
// roots blow up within kPivotGuard of pivot_angle(), and below kTinyTheta the
// Beta0 root is evaluated through its series expansion.
constexpr double kPivotGuard = 1e-9;
constexpr double kTinyTheta = 1e-3;

// Search space for the one-dimensional profile maximization, in
// u = ln(beta - 1). The cap corresponds to beta = 1e9 (suprema that keep
// climbing past it are boundary suprema, evaluated at the cap where the
// remaining gap is O(1/beta)); the floor is deep enough that the profile has
// flattened to its beta -> 1 limit to machine precision.
constexpr double kCapU = 20.72326583694641;  // ln(1e9 - 1)
constexpr double kFloorU = -60.0;
constexpr double kGradTol = 1e-8;
constexpr double kStartGapTol = 1e-5;

/// One-dimensional profile of the dual objective for a fixed sign of l1.
///
/// For fixed sign s and beta = sqrt((1-2*l2)(1-2*l3)) / |l1| > 1, the
/// remaining dual coordinates have a closed-form optimum: |l1| =
/// 1 / (beta * sqrt(z2 z3) - s z1) and the (1-2*l2)(1-2*l3) product splits
/// so that (1-2*l2) z2 = (1-2*l3) z3. Substituting both gives
///   G_s(beta) = (z2+z3)/2 - 1 + ln(pi) + ln(beta^2-1)/2
///             - ln(beta sqrt(z2 z3) - s z1) - ln(2 arccos(-s/beta)).
/// Evaluated in u = ln(beta - 1) with arccos(1/beta) = atan(sqrt(beta^2-1))
/// so both domain edges are numerically stable.
struct Profile {
  double s;         // sign of l1: +1.0 or -1.0
  double z1;
  double sqrt23;    // sqrt(z2 * z3)
  double half_sum;  // (z2 + z3) / 2

  double operator()(double u) const {
    const double eu = std::exp(u);
    const double beta = 1.0 + eu;
    const double b2m1 = eu * (2.0 + eu);  // beta^2 - 1, exact to rounding
    const double phi = std::atan(std::sqrt(b2m1));  // arccos(1/beta)
    const double arc = (s > 0.0) ? (kPi - phi) : phi;
    return half_sum - 1.0 + std::log(kPi) + 0.5 * (u + std::log(2.0 + eu)) -
           std::log(beta * sqrt23 - s * z1) - std::log(2.0 * arc);
  }
};

/// Golden-section maximum of f on [lo, hi]; returns (argmax, value).
template <typename F>
std::pair<double, double> golden_max(const F& f, double lo, double hi) {
  constexpr double kInvPhi = 0.6180339887498949;
  double a = lo;
  double b = hi;
  double x1 = b - kInvPhi * (b - a);
  double x2 = a + kInvPhi * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  while (b - a > 1e-12) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = f(x1);
    }
  }
  const double mid = 0.5 * (a + b);
  return {mid, f(mid)};
}

/// Refines one start by golden section inside a window that slides and
/// expands whenever the maximum is pinned to a window edge that is not a
/// domain edge. Returns (u, value), or nothing if the gradient check fails
/// away from the domain edges.
std::optional<std::pair<double, double>> refine_start(const Profile& f,
                                                      double u0) {
  double lo = std::max(kFloorU, u0 - 2.0);
  double hi = std::min(kCapU, std::max(u0 + 2.0, lo + 1.0));
  for (int round = 0; round < 200; ++round) {
    const auto [u, v] = golden_max(f, lo, hi);
    const bool pinned_lo = (u - lo) < 1e-9;
    const bool pinned_hi = (hi - u) < 1e-9;
    if (pinned_lo && lo > kFloorU + 1e-9) {
      const double w = hi - lo;
      hi = lo + 0.25 * w;
      lo = std::max(kFloorU, lo - 2.0 * w);
      continue;
    }
    if (pinned_hi && hi < kCapU - 1e-9) {
      const double w = hi - lo;
      lo = hi - 0.25 * w;
      hi = std::min(kCapU, hi + 2.0 * w);
      continue;
    }
    if (pinned_lo || pinned_hi) {
      return std::make_pair(u, v);  // boundary supremum at a domain edge
    }
    // Central difference at h ~ eps^(1/3): roundoff noise ~1e-11, well
    // below the acceptance threshold (at h = 1e-7 the noise floor would
    // sit right at kGradTol and fail stochastically).
    const double h = 1e-5;
    const double grad = (f(u + h) - f(u - h)) / (2.0 * h);
    if (std::abs(grad) <= kGradTol) {
      return std::make_pair(u, v);
    }
    lo = std::max(kFloorU, u - 0.5);  // re-center and try again
    hi = std::min(kCapU, u + 0.5);
  }
  return std::nullopt;
}

void check_z(const ZPoint& z) {
  if (!(z.z2 > 0.0) || !(z.z3 > 0.0)) {
    throw std::domain_error("rate target needs positive z2 and z3");
  }
}

void check_rate_angle(const Angle& theta) {
  const double t = theta.radians;
  if (!(t > 0.0) || !(t < kPi / 2.0)) {
    throw std::domain_error("rate branches are defined on (0, pi/2)");
  }
}

}  // namespace

double quadrant_gaussian_integral(double a, double b, double c) {
  if (!(a < 0.0) || !(c < 0.0)) {
    throw std::domain_error("quadrant integral needs a < 0 and c < 0");
  }
  const double disc = 4.0 * a * c - b * b;
  if (!(disc > 0.0)) {
    throw std::domain_error("quadrant integral needs b^2 < 4ac");
  }
  const double root = std::sqrt(disc);
  return (kPi + 2.0 * std::atan(b / root)) / (2.0 * root);
}

double lmgf(const Lambda3& l) {
  if (!l.in_domain()) {
    throw std::domain_error("lmgf argument outside the admissible domain");
  }
  const double neg_disc = -l.discriminant();
  return std::log(kPi + 2.0 * std::atan(l.l1 / std::sqrt(neg_disc))) -
         std::log(kPi) - 0.5 * std::log(neg_disc);
}

namespace detail {

RateValue rate_numeric_signed(const ZPoint& z, int sign) {
  check_z(z);
  if (sign != 1 && sign != -1) {
    throw std::domain_error("sign must be +1 or -1");
  }
  if (z.z1 * z.z1 >= z.z2 * z.z3) {
    // Outside (or on the edge of) the support cone |z1| < sqrt(z2 z3):
    // the dual objective is unbounded above.
    return {std::numeric_limits<double>::infinity(), RateBranch::Numeric,
            std::nullopt};
  }

  const double s = static_cast<double>(sign);
  const Profile profile{s, z.z1, std::sqrt(z.z2 * z.z3),
                        0.5 * (z.z2 + z.z3)};

  // Lattice starts: |l1| in {0.3, 0.9} crossed with four (l2, l3) probes,
  // mapped into u = ln(beta - 1) via beta = sqrt((1-2*l2)(1-2*l3)) / |l1|.
  constexpr double kAbsL1[2] = {0.3, 0.9};
  constexpr std::pair<double, double> kInner[4] = {
      {0.0, 0.0}, {0.25, -0.5}, {-0.5, 0.25}, {-1.5, -1.5}};

  std::vector<std::pair<double, double>> finals;  // (value, u), per start
  for (const double abs_l1 : kAbsL1) {
    for (const auto& [l2, l3] : kInner) {
      const double beta =
          std::sqrt((1.0 - 2.0 * l2) * (1.0 - 2.0 * l3)) / abs_l1;
      const double u0 =
          std::clamp(std::log(beta - 1.0), kFloorU + 1.0, kCapU - 1.0);
      if (const auto hit = refine_start(profile, u0)) {
        finals.emplace_back(hit->second, hit->first);
      }
    }
  }
  if (finals.empty()) {
    throw std::runtime_error("rate ascent failed to converge from any start");
  }
  std::sort(finals.begin(), finals.end(),
            [](const auto& a, const auto& b) { return a.first > b.first; });
  if (finals.size() >= 2 && finals[0].first - finals[1].first > kStartGapTol) {
    throw std::runtime_error("rate ascent starts disagree beyond tolerance");
  }

  const double value = finals[0].first;
  const double u = finals[0].second;
  std::optional<Lambda3> argmax;
  if (u > kFloorU + 25.0 && u < kCapU - 1e-6) {
    // Interior optimum: reconstruct the full dual point.
    const double beta = 1.0 + std::exp(u);
    const double m = 1.0 / (beta * profile.sqrt23 - s * z.z1);
    const double t2 = m * beta * std::sqrt(z.z3 / z.z2);
    const double t3 = m * beta * std::sqrt(z.z2 / z.z3);
    argmax = Lambda3{s * m, 0.5 * (1.0 - t2), 0.5 * (1.0 - t3)};
  }
  return {value, RateBranch::Numeric, argmax};
}

}  // namespace detail

RateValue rate_numeric(const ZPoint& z) {
  const RateValue plus = detail::rate_numeric_signed(z, +1);
  const RateValue minus = detail::rate_numeric_signed(z, -1);
  if (plus.value > minus.value) {
    return plus;
  }
  if (minus.value > plus.value) {
    return minus;
  }
  // Exact tie: prefer the lexicographically smaller interior argmax.
  if (plus.argmax && minus.argmax) {
    const auto key = [](const Lambda3& l) {
      return std::array<double, 3>{l.l1, l.l2, l.l3};
    };
    return key(*plus.argmax) <= key(*minus.argmax) ? plus : minus;
  }
  return plus.argmax ? plus : minus;
}

RateValue rate_plus_closed(Angle theta) {
  check_rate_angle(theta);
  const double t = theta.radians;
  if (t >= pivot_angle() - kPivotGuard) {
    // The positive branch degenerates: its supremum runs to beta -> inf
    // where the profile limit is zero.
    return {0.0, RateBranch::PlusClosed, std::nullopt};
  }
  const double c = std::cos(t);
  if (t < kTinyTheta) {
    // Sub-milliradian regime: the root solver hands over to its series
    // form, so recover the rate through the collision base directly.
    const double base = hypercube_collision_base(theta).base;
    return {-std::log(2.0 * std::sin(t) * base), RateBranch::PlusClosed,
            std::nullopt};
  }
  const double b = solve_beta0(theta).beta;
  const double value = std::log(kPi) + std::log(b) +
                       std::log(std::fma(b, c, -1.0)) - std::log(2.0) -
                       2.0 * std::log(b - c);
  const double m = 1.0 / (b - c);
  const double l23 = 0.5 * (1.0 - m * b);
  return {value, RateBranch::PlusClosed, Lambda3{m, l23, l23}};
}

RateValue rate_minus_closed(Angle theta) {
  check_rate_angle(theta);
  const double t = theta.radians;
  if (t <= pivot_angle() + kPivotGuard) {
    return {0.0, RateBranch::MinusClosed, std::nullopt};
  }
  const double c = std::cos(t);
  if (t < kPi / 3.0) {
    const double b = solve_beta1(theta).beta;
    const double value = std::log(kPi) + std::log(b) +
                         std::log(std::fma(b, c, 1.0)) - std::log(2.0) -
                         2.0 * std::log(b + c);
    const double m = 1.0 / (b + c);
    const double l23 = 0.5 * (1.0 - m * b);
    return {value, RateBranch::MinusClosed, Lambda3{-m, l23, l23}};
  }
  // On [pi/3, pi/2) the supremum sits on the beta -> 1 domain edge, where
  // the profile limit is ln(pi / (2 (1 + cos t))); no interior argmax.
  const double value = std::log(kPi) - std::log(2.0) - std::log1p(c);
  return {value, RateBranch::MinusClosed, std::nullopt};
}

double collision_base_via_ld(Angle theta) {
  check_rate_angle(theta);
  const double rate = std::max(rate_plus_closed(theta).value,
                               rate_minus_closed(theta).value);
  return std::exp(-rate) / (2.0 * std::sin(theta.radians));
}

double norm_penalty(double x, double y) {
  if (!(x > 0.0) || !(y > 0.0)) {
    throw std::domain_error("norm penalty needs positive arguments");
  }
  return 0.5 * x * x + 0.5 * y * y - 1.0 - std::log(x * y);
}

}  // namespace cubelsh
