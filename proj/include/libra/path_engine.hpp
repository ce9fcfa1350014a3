#pragma once

#include "libra/loss_model.hpp"
#include "libra/types.hpp"

namespace libra {

// Group soft-thresholding at radius 1:
//   theta_j = max(0, 1 - 1/||z_g||) * z_j  for j in group g.
Vec shrinkage(const Vec& z, const GroupIndex& groups);

struct FirstEntry {
  double t0 = 0.0;
  Vec z0;
  Vec theta0_init;
  Vec null_gradient;  // grad of the penalized block at the null model
};

// Start of the iteration: before any coefficient enters, the penalized
// gradient is constant, so z(t) = -t * g and the first group reaches the
// unit ball boundary at t0 = 1 / max_g ||g_g||.
FirstEntry first_entry_time(const LossModel& model, const GroupIndex& groups);

// alpha = 1 / (kappa * Lhat), a factor 2 below the stability bound
// alpha * kappa * Lhat <= 2.
double default_alpha(const LossModel& model, double kappa);

// Geometric sequence of length nt from t0 to t0*trate unless an explicit
// tlist was configured.
std::vector<double> resolve_tlist(double t0, const PathConfig& config);

SolutionPath run_lb(const LossModel& model, const GroupIndex& groups,
                    const PathConfig& config);

// Snapshot a stored iterate sequence at tlist points. Interpolation is
// linear in (z, theta0); theta is re-shrunk from the interpolated z.
SolutionPath interpolate_path(const std::vector<BregmanState>& iterates,
                              const std::vector<double>& tlist, double kappa,
                              const GroupIndex& groups);

}  // namespace libra
