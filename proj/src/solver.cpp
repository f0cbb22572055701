#include "dpvmf/solver.hpp"

#include <limits>

namespace dpvmf {

void TransitionParams::validate() const {
  if (!(w > 0.0) || !std::isfinite(w))
    fail(ErrorCode::InvalidArgument, "transition params: w must be finite and > 0");
  if (!(beta > 0.0) || !std::isfinite(beta))
    fail(ErrorCode::InvalidArgument, "transition params: beta must be finite and > 0");
  if (dt < 1) fail(ErrorCode::InvalidArgument, "transition params: dt must be >= 1");
  if (!(rho > 0.0) || !std::isfinite(rho))
    fail(ErrorCode::InvalidArgument, "transition params: rho must be finite and > 0");
}

namespace {

constexpr double kResidualTarget = 1e-12;
constexpr int kIterationCap = 100;

// Scalar form after eliminating theta and phi through the sine constraints:
//   g(eta) = asin(r_w sin eta) + dt * asin(r_b sin eta) + eta - zeta
struct ScalarSystem {
  double r_w, r_b, zeta;
  int dt;

  double g(double eta) const {
    double s = std::sin(eta);
    return std::asin(clamp_unit(r_w * s)) + dt * std::asin(clamp_unit(r_b * s)) +
           eta - zeta;
  }
  double dg(double eta) const {
    double s = std::sin(eta), c = std::cos(eta);
    double aw = 1.0 - r_w * s * r_w * s;
    double ab = 1.0 - r_b * s * r_b * s;
    if (aw <= 0.0 || ab <= 0.0) return std::numeric_limits<double>::infinity();
    return 1.0 + c * (r_w / std::sqrt(aw) + dt * r_b / std::sqrt(ab));
  }
};

// Safeguarded Newton on a bracketed root of sys.g; the bracket is maintained
// so a wild Newton step falls back to bisection.
double newton_bisect(const ScalarSystem& sys, double lo, double hi, double init,
                     int& iterations) {
  double glo = sys.g(lo);
  double x = std::min(std::max(init, lo), hi);
  bool lo_negative = glo <= 0.0;
  for (int it = 0; it < kIterationCap; ++it) {
    iterations = it + 1;
    double f = sys.g(x);
    if (std::abs(f) <= kResidualTarget) return x;
    if ((f <= 0.0) == lo_negative)
      lo = x;
    else
      hi = x;
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(x)))
      return x;  // root resolved to machine precision
    double df = sys.dg(x);
    double step = f / df;
    double next = x - step;
    if (!std::isfinite(next) || next <= lo || next >= hi) next = 0.5 * (lo + hi);
    x = next;
  }
  if (std::abs(sys.g(x)) > kResidualTarget &&
      hi - lo > 4.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(x)))
    fail(ErrorCode::NonConvergence, "transition angle iteration did not converge");
  return x;
}

}  // namespace

AngleSolution solve_transition_angles(double zeta, const TransitionParams& params) {
  params.validate();
  if (!(zeta >= 0.0 && zeta <= kPi + 1e-12))
    fail(ErrorCode::InvalidArgument, "zeta must lie in [0, pi]");
  zeta = std::min(zeta, kPi);

  AngleSolution sol;
  if (zeta <= 1e-15) {
    sol.f_star = params.w + params.beta * params.dt + params.rho;
    return sol;
  }

  ScalarSystem sys{params.rho / params.w, params.rho / params.beta, zeta, params.dt};

  // sin(eta) may not exceed min(w, beta)/rho or theta/phi would go obtuse.
  double s_cap = std::min({1.0, 1.0 / sys.r_w, 1.0 / sys.r_b});
  double eta = -1.0;
  double eta0 = zeta / (sys.r_w + params.dt * sys.r_b + 1.0);
  if (s_cap >= 1.0) {
    eta = newton_bisect(sys, 0.0, zeta, eta0, sol.iterations);
  } else {
    double a = std::asin(s_cap);
    if (sys.g(std::min(zeta, a)) >= 0.0) {
      eta = newton_bisect(sys, 0.0, std::min(zeta, a), eta0, sol.iterations);
    } else if (zeta >= kPi - a && sys.g(kPi - a) <= 0.0) {
      // eta obtuse while theta and phi stay acute
      eta = newton_bisect(sys, kPi - a, zeta, 0.5 * (kPi - a + zeta), sol.iterations);
    } else {
      fail(ErrorCode::NoPrincipalSolution,
           "transition system has no root with theta, phi in [0, pi/2]");
    }
  }

  double s = std::sin(eta);
  sol.eta = eta;
  sol.theta = std::asin(clamp_unit(sys.r_w * s));
  sol.phi = std::asin(clamp_unit(sys.r_b * s));
  sol.f_star = params.w * std::cos(sol.theta) +
               params.beta * params.dt * std::cos(sol.phi) +
               params.rho * std::cos(sol.eta);
  return sol;
}

double dead_cluster_score(double zeta, const TransitionParams& params, double Q) {
  if (params.rho != 1.0)
    fail(ErrorCode::InvalidArgument, "dead_cluster_score requires rho == 1");
  if (Q > 0.0) fail(ErrorCode::InvalidArgument, "survival exponent Q must be <= 0");
  AngleSolution sol = solve_transition_angles(zeta, params);
  return params.dt * params.beta * (std::cos(sol.phi) - 1.0) +
         params.w * (std::cos(sol.theta) - 1.0) + std::cos(sol.eta) +
         params.dt * Q;
}

double revival_threshold(const TransitionParams& params, double Q, double lambda) {
  const double target = lambda + 1.0;
  double at_zero = 1.0 + params.dt * Q;  // score at zeta = 0
  if (at_zero <= target) return 0.0;

  auto score_or_neg_inf = [&](double zeta) {
    try {
      return dead_cluster_score(zeta, params, Q);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::NoPrincipalSolution)
        return -std::numeric_limits<double>::infinity();
      throw;
    }
  };

  double lo = 0.0, hi = kPi;
  if (score_or_neg_inf(hi) >= target) return hi;
  while (hi - lo > 1e-10) {
    double mid = 0.5 * (lo + hi);
    if (score_or_neg_inf(mid) >= target)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace dpvmf
