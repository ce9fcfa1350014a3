#include "libra/graphical.hpp"

#include <cmath>

namespace libra {

namespace {

double log1pexp(double m) {
  return m > 0.0 ? m + std::log1p(std::exp(-m)) : std::log1p(std::exp(m));
}

double sigmoid(double m) {
  if (m >= 0.0) return 1.0 / (1.0 + std::exp(-m));
  const double e = std::exp(m);
  return e / (1.0 + e);
}

}  // namespace

int pair_count(int p) { return p * (p - 1) / 2; }

int pair_index(int j, int k, int p) {
  // j < k, pairs ordered (0,1),(0,2),...,(1,2),...
  return j * p - j * (j + 1) / 2 + (k - j - 1);
}

std::pair<int, int> pair_from_index(int idx, int p) {
  int j = 0;
  while (idx >= p - j - 1) {
    idx -= p - j - 1;
    ++j;
  }
  return {j, j + 1 + idx};
}

Mat symmetric_from_parts(const Vec& diag, const Vec& offdiag, int p) {
  Mat T = Mat::Zero(p, p);
  if (diag.size() > 0) T.diagonal() = diag;
  for (int j = 0; j < p; ++j)
    for (int k = j + 1; k < p; ++k) {
      const double v = offdiag[pair_index(j, k, p)];
      T(j, k) = v;
      T(k, j) = v;
    }
  return T;
}

// -------------------------------------------------------------------- GGM

GgmModel::GgmModel(Mat S) : S_(std::move(S)), p_(static_cast<int>(S_.rows())) {
  if (S_.rows() != S_.cols()) throw data_error("covariance must be square");
  if ((S_ - S_.transpose()).cwiseAbs().maxCoeff() > 1e-8)
    throw data_error("covariance matrix is not symmetric");
  S_ = (S_ + S_.transpose()) / 2.0;
}

GgmModel GgmModel::from_data(const Mat& X) {
  Mat Xc = X.rowwise() - X.colwise().mean();
  return GgmModel(Xc.transpose() * Xc / static_cast<double>(X.rows()));
}

double GgmModel::loss(const Vec& diag, const Vec& offdiag) const {
  Mat T = symmetric_from_parts(diag, offdiag, p_);
  double s = 0.0;
  const Mat W = S_ * T;
  for (int j = 0; j < p_; ++j) {
    if (!(diag[j] > 0.0))
      throw std::domain_error(
          "GGM precision diagonal became nonpositive at variable " +
          std::to_string(j) + "; try a smaller alpha");
    s += T.col(j).dot(W.col(j)) / (2.0 * diag[j]) - 0.5 * std::log(diag[j]);
  }
  return s;
}

double GgmModel::loss_grad(const Vec& diag, const Vec& offdiag, Vec& g_diag,
                           Vec& g_offdiag) const {
  Mat T = symmetric_from_parts(diag, offdiag, p_);
  const Mat W = S_ * T;  // W(j,k) = S_{j.} Theta_{.k}
  double s = 0.0;
  g_diag.resize(p_);
  g_offdiag.resize(pair_count(p_));
  for (int j = 0; j < p_; ++j) {
    if (!(diag[j] > 0.0))
      throw std::domain_error(
          "GGM precision diagonal became nonpositive at variable " +
          std::to_string(j) + "; try a smaller alpha");
    const double q = T.col(j).dot(W.col(j));
    s += q / (2.0 * diag[j]) - 0.5 * std::log(diag[j]);
    g_diag[j] = W(j, j) / diag[j] - q / (2.0 * diag[j] * diag[j]) -
                0.5 / diag[j];
  }
  for (int j = 0; j < p_; ++j)
    for (int k = j + 1; k < p_; ++k)
      g_offdiag[pair_index(j, k, p_)] =
          W(k, j) / diag[j] + W(j, k) / diag[k];
  return s;
}

Vec GgmModel::init_unpenalized() const {
  Vec diag(p_);
  for (int j = 0; j < p_; ++j) {
    if (!(S_(j, j) > 0.0))
      throw data_error("variable " + std::to_string(j) +
                       " has zero variance; remove constant columns");
    diag[j] = 1.0 / S_(j, j);
  }
  return diag;
}

double GgmModel::curvature_bound() const {
  // Nodewise Hessian in the off-diagonals is S / Theta_jj; at the
  // initialization Theta_jj = 1/S_jj, and each symmetric entry appears in
  // two node terms.
  return 2.0 * power_iteration_norm(S_) * S_.diagonal().maxCoeff();
}

// ------------------------------------------------------------------ Ising

IsingModel::IsingModel(Mat X, IsingCoding coding, bool intercept)
    : X_(std::move(X)),
      coding_(coding),
      intercept_(intercept),
      p_(static_cast<int>(X_.cols())) {
  const double lo = coding_ == IsingCoding::zero_one ? 0.0 : -1.0;
  for (int i = 0; i < X_.rows(); ++i)
    for (int j = 0; j < p_; ++j)
      if (X_(i, j) != lo && X_(i, j) != 1.0)
        throw std::invalid_argument(
            "value outside the declared Ising coding at row " +
            std::to_string(i) + ", column " + std::to_string(j));
  B_ = coding_ == IsingCoding::zero_one ? X_ : ((X_.array() + 1.0) / 2.0).matrix();
  for (int j = 0; j < p_; ++j) {
    const double m = B_.col(j).mean();
    if (m == 0.0 || m == 1.0)
      throw data_error("column " + std::to_string(j) +
                       " is constant; degenerate Ising variable");
  }
}

Mat IsingModel::predictor(const Vec& theta0, const Vec& theta) const {
  Mat M = X_ * symmetric_from_parts(Vec(0), theta, p_);
  if (intercept_) M.rowwise() += theta0.transpose();
  return M;
}

double IsingModel::loss(const Vec& theta0, const Vec& theta) const {
  const Mat M = predictor(theta0, theta);
  double s = 0.0;
  for (int i = 0; i < M.rows(); ++i)
    for (int v = 0; v < p_; ++v)
      s += log1pexp(M(i, v)) - B_(i, v) * M(i, v);
  return s / M.rows();
}

double IsingModel::loss_grad(const Vec& theta0, const Vec& theta, Vec& g0,
                             Vec& g) const {
  const int n = static_cast<int>(X_.rows());
  const Mat M = predictor(theta0, theta);
  Mat R(n, p_);
  double s = 0.0;
  for (int i = 0; i < n; ++i)
    for (int v = 0; v < p_; ++v) {
      s += log1pexp(M(i, v)) - B_(i, v) * M(i, v);
      R(i, v) = sigmoid(M(i, v)) - B_(i, v);
    }
  const Mat G = (X_.transpose() * R + R.transpose() * X_) / n;
  g.resize(pair_count(p_));
  for (int j = 0; j < p_; ++j)
    for (int k = j + 1; k < p_; ++k) g[pair_index(j, k, p_)] = G(j, k);
  if (intercept_) g0 = R.colwise().sum().transpose() / n;
  return s / n;
}

Vec IsingModel::init_unpenalized() const {
  if (!intercept_) return Vec(0);
  return ising_intercept_init(X_, coding_);
}

double IsingModel::curvature_bound() const {
  if (gram_norm_ < 0.0) {
    const Mat S = X_.transpose() * X_ / static_cast<double>(X_.rows());
    gram_norm_ = power_iteration_norm(S);
  }
  // logistic curvature <= 1/4, two conditional terms per pair
  return gram_norm_ / 2.0;
}

double IsingModel::conditional_prob(const Vec& theta0, const Vec& theta, int v,
                                    const Vec& others) const {
  double m = intercept_ ? theta0[v] : 0.0;
  for (int w = 0; w < p_; ++w) {
    if (w == v) continue;
    const int idx = w < v ? pair_index(w, v, p_) : pair_index(v, w, p_);
    m += theta[idx] * others[w];
  }
  return sigmoid(m);
}

IsingParamsPm ising_recode_to_pm(const IsingParamsZeroOne& p01, int p) {
  IsingParamsPm out;
  out.interactions = p01.interactions / 2.0;
  const Mat J = symmetric_from_parts(Vec(0), out.interactions, p);
  out.h = p01.theta0 + J * Vec::Ones(p);
  return out;
}

IsingParamsZeroOne ising_recode_to_zero_one(const IsingParamsPm& ppm, int p) {
  IsingParamsZeroOne out;
  out.interactions = 2.0 * ppm.interactions;
  const Mat J = symmetric_from_parts(Vec(0), ppm.interactions, p);
  out.theta0 = ppm.h - J * Vec::Ones(p);
  return out;
}

Vec ising_intercept_init(const Mat& X, IsingCoding coding) {
  const int p = static_cast<int>(X.cols());
  Vec theta0(p);
  for (int j = 0; j < p; ++j) {
    double m = X.col(j).mean();
    if (coding == IsingCoding::pm_one) m = (m + 1.0) / 2.0;
    if (m <= 0.0 || m >= 1.0)
      throw data_error("column " + std::to_string(j) +
                       " is constant; degenerate Ising variable");
    theta0[j] = std::log(m / (1.0 - m));
  }
  return theta0;
}

// ------------------------------------------------------------------ Potts

PottsModel::PottsModel(IntMat labels, std::vector<int> num_classes,
                       bool intercept)
    : labels_(std::move(labels)),
      K_(std::move(num_classes)),
      p_(static_cast<int>(labels_.cols())),
      n_(static_cast<int>(labels_.rows())),
      intercept_(intercept) {
  if (static_cast<int>(K_.size()) != p_)
    throw std::invalid_argument("class count list must match column count");
  theta0_dim_ = 0;
  t0_offset_.resize(p_);
  for (int j = 0; j < p_; ++j) {
    if (K_[j] < 2)
      throw data_error("column " + std::to_string(j) +
                       " has fewer than two classes");
    t0_offset_[j] = theta0_dim_;
    theta0_dim_ += K_[j];
  }
  onehot_.resize(p_);
  for (int j = 0; j < p_; ++j) {
    onehot_[j] = Mat::Zero(n_, K_[j]);
    for (int i = 0; i < n_; ++i) {
      const int lab = labels_(i, j);
      if (lab < 0 || lab >= K_[j])
        throw std::invalid_argument("unseen class label " +
                                    std::to_string(lab) + " at row " +
                                    std::to_string(i) + ", column " +
                                    std::to_string(j));
      onehot_[j](i, lab) = 1.0;
    }
    for (int s = 0; s < K_[j]; ++s)
      if (onehot_[j].col(s).sum() == 0.0)
        throw data_error("empty class " + std::to_string(s) + " in column " +
                         std::to_string(j));
  }
  block_offset_.resize(pair_count(p_));
  pen_dim_ = 0;
  for (int j = 0; j < p_; ++j)
    for (int k = j + 1; k < p_; ++k) {
      block_offset_[pair_index(j, k, p_)] = pen_dim_;
      pen_dim_ += K_[j] * K_[k];
    }
}

int PottsModel::block_offset(int j, int k) const {
  return block_offset_[pair_index(j, k, p_)];
}

std::vector<Mat> PottsModel::predictors(const Vec& theta0,
                                        const Vec& theta) const {
  std::vector<Mat> M(p_);
  for (int j = 0; j < p_; ++j) {
    M[j] = Mat::Zero(n_, K_[j]);
    if (intercept_)
      M[j].rowwise() += theta0.segment(t0_offset_[j], K_[j]).transpose();
  }
  for (int j = 0; j < p_; ++j)
    for (int k = j + 1; k < p_; ++k) {
      // block (j,k): K_j x K_k, row-major
      Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                     Eigen::RowMajor>>
          B(theta.data() + block_offset(j, k), K_[j], K_[k]);
      M[j] += onehot_[k] * B.transpose();
      M[k] += onehot_[j] * B;
    }
  return M;
}

double PottsModel::loss(const Vec& theta0, const Vec& theta) const {
  const auto M = predictors(theta0, theta);
  double s = 0.0;
  for (int j = 0; j < p_; ++j)
    for (int i = 0; i < n_; ++i) {
      const double mx = M[j].row(i).maxCoeff();
      s += mx + std::log((M[j].row(i).array() - mx).exp().sum()) -
           M[j](i, labels_(i, j));
    }
  return s / n_;
}

double PottsModel::loss_grad(const Vec& theta0, const Vec& theta, Vec& g0,
                             Vec& g) const {
  const auto M = predictors(theta0, theta);
  double s = 0.0;
  std::vector<Mat> R(p_);
  for (int j = 0; j < p_; ++j) {
    R[j].resize(n_, K_[j]);
    for (int i = 0; i < n_; ++i) {
      const double mx = M[j].row(i).maxCoeff();
      Eigen::RowVectorXd e = (M[j].row(i).array() - mx).exp();
      const double denom = e.sum();
      s += mx + std::log(denom) - M[j](i, labels_(i, j));
      R[j].row(i) = e / denom;
    }
    R[j] -= onehot_[j];
  }
  if (intercept_) {
    g0.resize(theta0_dim_);
    for (int j = 0; j < p_; ++j)
      g0.segment(t0_offset_[j], K_[j]) = R[j].colwise().sum().transpose() / n_;
  }
  g.resize(pen_dim_);
  for (int j = 0; j < p_; ++j)
    for (int k = j + 1; k < p_; ++k) {
      const Mat G =
          (R[j].transpose() * onehot_[k] + onehot_[j].transpose() * R[k]) / n_;
      const int off = block_offset(j, k);
      for (int a = 0; a < K_[j]; ++a)
        for (int b = 0; b < K_[k]; ++b) g[off + a * K_[k] + b] = G(a, b);
    }
  return s / n_;
}

Vec PottsModel::init_unpenalized() const {
  if (!intercept_) return Vec(0);
  Vec theta0(theta0_dim_);
  for (int j = 0; j < p_; ++j)
    for (int s = 0; s < K_[j]; ++s)
      theta0[t0_offset_[j] + s] = std::log(onehot_[j].col(s).sum() / n_);
  return theta0;
}

double PottsModel::curvature_bound() const {
  if (gram_norm_ < 0.0) {
    Mat Z(n_, theta0_dim_);
    for (int j = 0; j < p_; ++j)
      Z.middleCols(t0_offset_[j], K_[j]) = onehot_[j];
    gram_norm_ = power_iteration_norm(Z.transpose() * Z / n_);
  }
  // softmax curvature <= 1/2, two conditional terms per pair
  return gram_norm_;
}

GroupIndex PottsModel::groups(bool group_mode) const {
  if (!group_mode) return GroupIndex::singletons(pen_dim_);
  std::vector<int> labels(pen_dim_);
  for (int j = 0; j < p_; ++j)
    for (int k = j + 1; k < p_; ++k) {
      const int pi = pair_index(j, k, p_);
      const int off = block_offset_[pi];
      for (int c = 0; c < K_[j] * K_[k]; ++c) labels[off + c] = pi;
    }
  return GroupIndex(std::move(labels));
}

}  // namespace libra
