#include "libra/glm.hpp"

#include <algorithm>
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

double gram_spectral_norm(const Mat& X, double& cache) {
  if (cache < 0.0) {
    const Mat S = X.transpose() * X / static_cast<double>(X.rows());
    cache = power_iteration_norm(S);
  }
  return cache;
}

}  // namespace

// ---------------------------------------------------------------- linear

LinearModel::LinearModel(Mat X, Vec y, bool intercept)
    : X_(std::move(X)), y_(std::move(y)), intercept_(intercept) {
  if (X_.rows() != y_.size())
    throw std::invalid_argument("X and y have different sample counts");
}

double LinearModel::loss(const Vec& theta0, const Vec& theta) const {
  Vec r = y_ - X_ * theta;
  if (intercept_) r.array() -= theta0[0];
  return r.squaredNorm() / (2.0 * X_.rows());
}

double LinearModel::loss_grad(const Vec& theta0, const Vec& theta, Vec& g0,
                              Vec& g) const {
  const double n = static_cast<double>(X_.rows());
  Vec r = y_ - X_ * theta;
  if (intercept_) r.array() -= theta0[0];
  g = -(X_.transpose() * r) / n;
  g0.resize(unpenalized_dim());
  if (intercept_) g0[0] = -r.sum() / n;
  return r.squaredNorm() / (2.0 * n);
}

Vec LinearModel::init_unpenalized() const {
  if (!intercept_) return Vec(0);
  Vec v(1);
  v[0] = gaussian_intercept_init(y_);
  return v;
}

double LinearModel::curvature_bound() const {
  return gram_spectral_norm(X_, gram_norm_);
}

// -------------------------------------------------------------- binomial

BinomialModel::BinomialModel(Mat X, Vec y, bool intercept)
    : X_(std::move(X)), y_(std::move(y)), intercept_(intercept) {
  if (X_.rows() != y_.size())
    throw std::invalid_argument("X and y have different sample counts");
  for (int i = 0; i < y_.size(); ++i)
    if (y_[i] != 1.0 && y_[i] != -1.0)
      throw std::invalid_argument("binomial labels must be +1/-1, got " +
                                  std::to_string(y_[i]) + " at row " +
                                  std::to_string(i));
}

double BinomialModel::loss(const Vec& theta0, const Vec& theta) const {
  const double n = static_cast<double>(X_.rows());
  Vec eta = X_ * theta;
  if (intercept_) eta.array() += theta0[0];
  double s = 0.0;
  for (int i = 0; i < y_.size(); ++i) s += log1pexp(-y_[i] * eta[i]);
  return s / n;
}

double BinomialModel::loss_grad(const Vec& theta0, const Vec& theta, Vec& g0,
                                Vec& g) const {
  const double n = static_cast<double>(X_.rows());
  Vec eta = X_ * theta;
  if (intercept_) eta.array() += theta0[0];
  double s = 0.0;
  Vec w(y_.size());  // -y_i / (1 + exp(y_i eta_i))
  for (int i = 0; i < y_.size(); ++i) {
    const double m = y_[i] * eta[i];
    s += log1pexp(-m);
    w[i] = -y_[i] * sigmoid(-m);
  }
  g = (X_.transpose() * w) / n;
  g0.resize(unpenalized_dim());
  if (intercept_) g0[0] = w.sum() / n;
  return s / n;
}

Vec BinomialModel::init_unpenalized() const {
  if (!intercept_) return Vec(0);
  Vec v(1);
  v[0] = binomial_intercept_init(y_);
  return v;
}

double BinomialModel::curvature_bound() const {
  // logistic curvature <= 1/4
  return gram_spectral_norm(X_, gram_norm_) / 4.0;
}

// ----------------------------------------------------------- multinomial

MultinomialModel::MultinomialModel(Mat X, std::vector<int> labels,
                                   int num_classes, bool intercept)
    : X_(std::move(X)),
      labels_(std::move(labels)),
      K_(num_classes),
      intercept_(intercept) {
  if (static_cast<int>(labels_.size()) != X_.rows())
    throw std::invalid_argument("X and labels have different sample counts");
  if (K_ < 2) throw std::invalid_argument("need at least 2 classes");
  std::vector<int> counts(K_, 0);
  for (int lab : labels_) {
    if (lab < 0 || lab >= K_)
      throw std::invalid_argument("class label out of range: " +
                                  std::to_string(lab));
    ++counts[lab];
  }
  for (int k = 0; k < K_; ++k)
    if (counts[k] == 0)
      throw data_error("empty class " + std::to_string(k) +
                       " in multinomial response");
}

Mat MultinomialModel::coef_matrix(const Vec& theta) const {
  const int p = static_cast<int>(X_.cols());
  Mat C(p, K_);
  for (int j = 0; j < p; ++j)
    for (int k = 0; k < K_; ++k) C(j, k) = theta[j * K_ + k];
  return C;
}

double MultinomialModel::loss(const Vec& theta0, const Vec& theta) const {
  Mat M = X_ * coef_matrix(theta);
  if (intercept_) M.rowwise() += theta0.transpose();
  double s = 0.0;
  for (int i = 0; i < M.rows(); ++i) {
    const double mx = M.row(i).maxCoeff();
    s += mx + std::log((M.row(i).array() - mx).exp().sum()) - M(i, labels_[i]);
  }
  return s / M.rows();
}

double MultinomialModel::loss_grad(const Vec& theta0, const Vec& theta, Vec& g0,
                                   Vec& g) const {
  const int n = static_cast<int>(X_.rows());
  const int p = static_cast<int>(X_.cols());
  Mat M = X_ * coef_matrix(theta);
  if (intercept_) M.rowwise() += theta0.transpose();
  double s = 0.0;
  Mat R(n, K_);  // softmax residuals
  for (int i = 0; i < n; ++i) {
    const double mx = M.row(i).maxCoeff();
    Eigen::RowVectorXd e = (M.row(i).array() - mx).exp();
    const double denom = e.sum();
    s += mx + std::log(denom) - M(i, labels_[i]);
    R.row(i) = e / denom;
    R(i, labels_[i]) -= 1.0;
  }
  const Mat G = X_.transpose() * R / n;  // p x K
  g.resize(p * K_);
  for (int j = 0; j < p; ++j)
    for (int k = 0; k < K_; ++k) g[j * K_ + k] = G(j, k);
  if (intercept_) g0 = R.colwise().sum().transpose() / n;
  return s / n;
}

Vec MultinomialModel::init_unpenalized() const {
  if (!intercept_) return Vec(0);
  return multinomial_intercept_init(labels_, K_);
}

double MultinomialModel::curvature_bound() const {
  // softmax Hessian <= 1/2 * I
  return gram_spectral_norm(X_, gram_norm_) / 2.0;
}

// ------------------------------------------------------- initializers etc.

double gaussian_intercept_init(const Vec& y) { return y.mean(); }

double binomial_intercept_init(const Vec& y) {
  long npos = 0;
  for (int i = 0; i < y.size(); ++i)
    if (y[i] > 0) ++npos;
  const long nneg = y.size() - npos;
  if (npos == 0 || nneg == 0)
    throw data_error("degenerate binomial response: all labels equal");
  return std::log(static_cast<double>(npos) / nneg);
}

Vec multinomial_intercept_init(const std::vector<int>& labels,
                               int num_classes) {
  std::vector<long> counts(num_classes, 0);
  for (int lab : labels) ++counts[lab];
  Vec theta0(num_classes);
  for (int k = 0; k < num_classes; ++k) {
    if (counts[k] == 0)
      throw data_error("degenerate multinomial response: empty class " +
                       std::to_string(k));
    theta0[k] = std::log(static_cast<double>(counts[k]) / labels.size());
  }
  return theta0;
}

GroupIndex build_multinomial_groups(
    int p, int num_classes, MultinomialSparsity mode,
    const std::optional<GroupIndex>& feature_groups) {
  const int K = num_classes;
  std::vector<int> labels(p * K);
  switch (mode) {
    case MultinomialSparsity::entry:
      return GroupIndex::singletons(p * K);
    case MultinomialSparsity::column:
      for (int j = 0; j < p; ++j)
        for (int k = 0; k < K; ++k) labels[j * K + k] = j;
      return GroupIndex(std::move(labels));
    case MultinomialSparsity::block: {
      if (!feature_groups)
        throw std::invalid_argument("block sparsity requires feature groups");
      if (feature_groups->size() != p)
        throw std::invalid_argument("feature group index length must equal p");
      for (int j = 0; j < p; ++j)
        for (int k = 0; k < K; ++k)
          labels[j * K + k] = feature_groups->group_of(j);
      return GroupIndex(std::move(labels));
    }
  }
  throw std::invalid_argument("unknown sparsity mode");
}

}  // namespace libra
