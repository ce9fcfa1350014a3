#pragma once

#include "libra/types.hpp"

namespace libra {

// A loss family as seen by the path engine: value, gradients, the
// intercept-restricted minimizer, and a gradient-Lipschitz bound for
// choosing the default step size.
class LossModel {
 public:
  virtual ~LossModel() = default;

  virtual int penalized_dim() const = 0;
  virtual int unpenalized_dim() const = 0;

  virtual double loss(const Vec& theta0, const Vec& theta) const = 0;

  // Returns the loss; fills g0 (length unpenalized_dim) and
  // g (length penalized_dim).
  virtual double loss_grad(const Vec& theta0, const Vec& theta, Vec& g0,
                           Vec& g) const = 0;

  // argmin over theta0 of L(theta0, 0), available in closed form for
  // every family here.
  virtual Vec init_unpenalized() const = 0;

  // Upper bound on the gradient Lipschitz constant of the penalized block.
  virtual double curvature_bound() const = 0;
};

// Largest eigenvalue of a symmetric PSD matrix by power iteration.
double power_iteration_norm(const Mat& S, double tol = 1e-12,
                            int max_iter = 20000);

}  // namespace libra
