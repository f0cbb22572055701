#ifndef DPVMF_SOLVER_HPP
#define DPVMF_SOLVER_HPP

#include "dpvmf/common.hpp"

namespace dpvmf {

/// Prior-side coefficients of the transition geodesic system.
/// rho is the data-side coefficient: 1 for label scoring, ||xbar||_2 for the
/// parameter update.
struct TransitionParams {
  double w = 0.0;   // prior weight w_k
  double beta = 0.0;  // random-walk stiffness
  int dt = 1;       // timesteps since last instantiated
  double rho = 1.0;

  void validate() const;
};

/// Solved angle triple for one transition geodesic, with the maximized
/// exponent value f_star = w cos(theta) + beta dt cos(phi) + rho cos(eta).
struct AngleSolution {
  double theta = 0.0;
  double phi = 0.0;
  double eta = 0.0;
  double f_star = 0.0;
  int iterations = 0;
};

/// Solve w sin(theta) = beta sin(phi) = rho sin(eta),
///       theta + dt*phi + eta = zeta
/// on the branch theta, phi in [0, pi/2], eta in [0, pi], by safeguarded
/// Newton iteration in eta. Raises NoPrincipalSolution when the system has
/// no root on that branch (an obtuse theta or phi would be required).
AngleSolution solve_transition_angles(double zeta, const TransitionParams& params);

/// J_k for an uninstantiated tracked cluster at angle zeta from the query:
///   dt*beta*(cos phi - 1) + w*(cos theta - 1) + cos eta + dt*Q.
/// Requires params.rho == 1. Strictly decreasing in zeta.
double dead_cluster_score(double zeta, const TransitionParams& params, double Q);

/// Largest zeta at which dead_cluster_score still reaches lambda + 1.
/// Points with m_k^T x < cos(zeta_max) can never pick cluster k over a new
/// cluster, so one dot product replaces the Newton solve for them.
double revival_threshold(const TransitionParams& params, double Q, double lambda);

}  // namespace dpvmf

#endif
