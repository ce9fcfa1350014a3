#pragma once

#include "libra/types.hpp"

namespace libra {

// Exact Inverse Scale Space path for l1-penalized linear regression:
// the kappa->inf, alpha->0 limit of the Bregman iteration. theta(t) is
// piecewise constant; rho(t) is piecewise linear in [-1,1]^p.
struct IssPath {
  // knots[k] is the time the k-th support change happens; segment k lives
  // on [knots[k], knots[k+1]) (last segment unbounded).
  std::vector<double> knots;
  std::vector<Vec> solutions;       // theta per segment, original scale
  std::vector<double> intercepts;   // theta0 per segment
  std::vector<Vec> rho_at_knot;     // dual at the start of each segment
  std::vector<Vec> rho_slopes;      // d rho / dt on each segment

  // Piecewise-constant evaluation; t must be >= first knot time 0.
  Vec theta_at(double t) const;
  double intercept_at(double t) const;
  Vec rho_at(double t) const;

  // Variables in order of first entry into the support.
  std::vector<int> entry_order() const;
};

struct IssOptions {
  bool intercept = true;
  bool normalize = true;
  double t_max = kInf;
  int max_knots_per_var = 10;  // knot cap = max_knots_per_var * p
};

IssPath iss_path(const Mat& X, const Vec& y, const IssOptions& opts = {});

struct IssConvergenceReport {
  std::vector<double> kappas;
  std::vector<double> distances;  // sup over tlist of ||theta_LB - theta_ISS||_inf
  std::vector<double> tlist;
};

// Distance between LB paths (alpha tied by alpha*kappa*||S_n|| = 1) and
// the ISS path on a shared tlist, per kappa.
IssConvergenceReport lb_iss_convergence_check(
    const Mat& X, const Vec& y, const std::vector<double>& kappas,
    bool intercept = false);

}  // namespace libra
