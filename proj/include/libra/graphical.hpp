#pragma once

#include "libra/loss_model.hpp"
#include "libra/types.hpp"

namespace libra {

// Upper-triangle indexing for a symmetric p x p matrix stored once,
// pairs ordered (0,1),(0,2),...,(0,p-1),(1,2),...
int pair_count(int p);
int pair_index(int j, int k, int p);  // requires j < k
std::pair<int, int> pair_from_index(int idx, int p);

// Assemble a full symmetric matrix from (diag, offdiag) storage.
Mat symmetric_from_parts(const Vec& diag, const Vec& offdiag, int p);

// Gaussian graphical model via composite conditional likelihood:
//   L(Theta) = sum_j [ Theta_{.j}' S Theta_{.j} / (2 Theta_jj) - log(Theta_jj)/2 ]
// theta0 is the (unpenalized, positive) diagonal of Theta; the penalized
// vector holds the off-diagonal upper triangle.
class GgmModel : public LossModel {
 public:
  explicit GgmModel(Mat S);
  // Covariance computed from raw data with 1/n normalization after
  // column centering.
  static GgmModel from_data(const Mat& X);

  int penalized_dim() const override { return pair_count(p_); }
  int unpenalized_dim() const override { return p_; }
  double loss(const Vec& diag, const Vec& offdiag) const override;
  double loss_grad(const Vec& diag, const Vec& offdiag, Vec& g_diag,
                   Vec& g_offdiag) const override;
  Vec init_unpenalized() const override;  // diag_j = 1/S_jj
  double curvature_bound() const override;

  int dim() const { return p_; }
  const Mat& S() const { return S_; }

 private:
  Mat S_;
  int p_;
};

enum class IsingCoding { zero_one, pm_one };

// Ising composite conditional likelihood. The penalized vector is the
// off-diagonal upper triangle of the symmetric interaction matrix; theta0
// is the per-node intercept (h in the +-1 formulation).
class IsingModel : public LossModel {
 public:
  IsingModel(Mat X, IsingCoding coding, bool intercept);

  int penalized_dim() const override { return pair_count(p_); }
  int unpenalized_dim() const override { return intercept_ ? p_ : 0; }
  double loss(const Vec& theta0, const Vec& theta) const override;
  double loss_grad(const Vec& theta0, const Vec& theta, Vec& g0,
                   Vec& g) const override;
  Vec init_unpenalized() const override;
  double curvature_bound() const override;

  int dim() const { return p_; }
  IsingCoding coding() const { return coding_; }

  // P(x_v = "high" | x_{-v}) for one configuration of the other nodes.
  double conditional_prob(const Vec& theta0, const Vec& theta, int v,
                          const Vec& others) const;

 private:
  Mat predictor(const Vec& theta0, const Vec& theta) const;

  Mat X_;
  Mat B_;  // responses as 0/1 regardless of coding
  IsingCoding coding_;
  bool intercept_;
  int p_;
  mutable double gram_norm_ = -1.0;
};

struct IsingParamsPm {
  Vec h;
  Vec interactions;  // J, upper triangle
};
struct IsingParamsZeroOne {
  Vec theta0;
  Vec interactions;  // theta, upper triangle
};

// Conversion between the {0,1} and {-1,1} formulations:
//   J = theta/2,  h = theta0 + J*1.
IsingParamsPm ising_recode_to_pm(const IsingParamsZeroOne& p01, int p);
IsingParamsZeroOne ising_recode_to_zero_one(const IsingParamsPm& ppm, int p);

// Nodewise logistic intercept at null interactions, log(mean/(1-mean))
// with the mean taken of the 0/1-coded column.
Vec ising_intercept_init(const Mat& X, IsingCoding coding);

// Potts composite conditional likelihood. Variable j takes classes
// 0..K_j-1. theta0 stacks per-variable intercept blocks; the penalized
// vector stacks one K_j x K_k block (row-major) per unordered pair (j,k).
class PottsModel : public LossModel {
 public:
  // labels(i, j) in 0..K_j-1; num_classes gives K_j per variable.
  PottsModel(IntMat labels, std::vector<int> num_classes, bool intercept);

  int penalized_dim() const override { return pen_dim_; }
  int unpenalized_dim() const override { return intercept_ ? theta0_dim_ : 0; }
  double loss(const Vec& theta0, const Vec& theta) const override;
  double loss_grad(const Vec& theta0, const Vec& theta, Vec& g0,
                   Vec& g) const override;
  Vec init_unpenalized() const override;
  double curvature_bound() const override;

  int num_vars() const { return p_; }
  const std::vector<int>& class_counts() const { return K_; }
  int block_offset(int j, int k) const;  // offset of pair (j,k), j<k
  int theta0_offset(int j) const { return t0_offset_[j]; }

  // One group per unordered variable pair spanning its K_j x K_k block
  // (group_mode), or singletons.
  GroupIndex groups(bool group_mode) const;

 private:
  std::vector<Mat> predictors(const Vec& theta0, const Vec& theta) const;

  IntMat labels_;
  std::vector<Mat> onehot_;  // per variable, n x K_j
  std::vector<int> K_;
  std::vector<int> t0_offset_;
  std::vector<int> block_offset_;  // per pair index
  int p_, n_, theta0_dim_, pen_dim_;
  bool intercept_;
  mutable double gram_norm_ = -1.0;
};

}  // namespace libra
