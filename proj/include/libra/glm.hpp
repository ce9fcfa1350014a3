#pragma once

#include "libra/loss_model.hpp"
#include "libra/types.hpp"

namespace libra {

enum class MultinomialSparsity { entry, column, block };

// L = (1/2n) sum (y_i - theta0 - x_i'theta)^2
class LinearModel : public LossModel {
 public:
  LinearModel(Mat X, Vec y, bool intercept);

  int penalized_dim() const override { return static_cast<int>(X_.cols()); }
  int unpenalized_dim() const override { return intercept_ ? 1 : 0; }
  double loss(const Vec& theta0, const Vec& theta) const override;
  double loss_grad(const Vec& theta0, const Vec& theta, Vec& g0,
                   Vec& g) const override;
  Vec init_unpenalized() const override;
  double curvature_bound() const override;

  const Mat& X() const { return X_; }
  const Vec& y() const { return y_; }

 private:
  Mat X_;
  Vec y_;
  bool intercept_;
  mutable double gram_norm_ = -1.0;
};

// L = (1/n) sum log(1 + exp(-y_i (theta0 + x_i'theta))), y in {-1,+1}
class BinomialModel : public LossModel {
 public:
  BinomialModel(Mat X, Vec y, bool intercept);

  int penalized_dim() const override { return static_cast<int>(X_.cols()); }
  int unpenalized_dim() const override { return intercept_ ? 1 : 0; }
  double loss(const Vec& theta0, const Vec& theta) const override;
  double loss_grad(const Vec& theta0, const Vec& theta, Vec& g0,
                   Vec& g) const override;
  Vec init_unpenalized() const override;
  double curvature_bound() const override;

 private:
  Mat X_;
  Vec y_;
  bool intercept_;
  mutable double gram_norm_ = -1.0;
};

// L = (1/n) sum [logsumexp_k(theta_k0 + x_i'theta_k) - theta_{y_i 0} - x_i'theta_{y_i}]
//
// The penalized vector is the K x p coefficient matrix flattened
// feature-major: all K entries of feature j are contiguous at offset j*K.
class MultinomialModel : public LossModel {
 public:
  // labels in 0..K-1, every class present.
  MultinomialModel(Mat X, std::vector<int> labels, int num_classes,
                   bool intercept);

  int penalized_dim() const override {
    return static_cast<int>(X_.cols()) * K_;
  }
  int unpenalized_dim() const override { return intercept_ ? K_ : 0; }
  double loss(const Vec& theta0, const Vec& theta) const override;
  double loss_grad(const Vec& theta0, const Vec& theta, Vec& g0,
                   Vec& g) const override;
  Vec init_unpenalized() const override;
  double curvature_bound() const override;

  int num_classes() const { return K_; }

 private:
  // theta (feature-major flat) viewed as p x K, row j = coefficients of
  // feature j across classes.
  Mat coef_matrix(const Vec& theta) const;

  Mat X_;
  std::vector<int> labels_;
  int K_;
  bool intercept_;
  mutable double gram_norm_ = -1.0;
};

// theta0 at the null model, per family:
// gaussian -> mean(y); binomial -> log(n+/n-); multinomial -> log(n_k/n).
double gaussian_intercept_init(const Vec& y);
double binomial_intercept_init(const Vec& y);
Vec multinomial_intercept_init(const std::vector<int>& labels, int num_classes);

GroupIndex build_multinomial_groups(
    int p, int num_classes, MultinomialSparsity mode,
    const std::optional<GroupIndex>& feature_groups = std::nullopt);

}  // namespace libra
