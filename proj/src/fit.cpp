#include "libra/fit.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace libra {

namespace {

// Column scales for normalize: unit 1/n-norm columns. Coefficients are
// mapped back to the original scale, so predictions are unchanged.
Vec column_scales(const Mat& X) {
  Vec scale(X.cols());
  for (int j = 0; j < X.cols(); ++j) {
    scale[j] = std::sqrt(X.col(j).squaredNorm() / X.rows());
    if (!(scale[j] > 0.0))
      throw data_error("column " + std::to_string(j) +
                       " is constant; cannot normalize");
  }
  return scale;
}

void rescale_path(SolutionPath& path, const Vec& coef_scale) {
  for (Vec& theta : path.theta_path)
    theta = theta.cwiseQuotient(coef_scale);
}

std::vector<int> compact_labels(const Vec& y, int& num_classes) {
  std::map<double, int> seen;
  for (int i = 0; i < y.size(); ++i) seen.try_emplace(y[i], 0);
  int next = 0;
  for (auto& [val, id] : seen) id = next++;
  num_classes = next;
  std::vector<int> labels(y.size());
  for (int i = 0; i < y.size(); ++i) labels[i] = seen[y[i]];
  return labels;
}

}  // namespace

FitResult fit_lb(const Mat& X, const Vec& y, const PathConfig& config,
                 const std::optional<GroupIndex>& index,
                 MultinomialSparsity mn_mode) {
  config.validate();
  const int p = static_cast<int>(X.cols());
  FitResult out;
  out.family = config.family;

  Mat Xw = X;
  Vec scale = Vec::Ones(p);
  if (config.normalize) {
    scale = column_scales(X);
    for (int j = 0; j < p; ++j) Xw.col(j) /= scale[j];
  }

  std::unique_ptr<LossModel> model;
  Vec coef_scale;
  switch (config.family) {
    case Family::gaussian: {
      model = std::make_unique<LinearModel>(Xw, y, config.intercept);
      out.groups = index ? *index : GroupIndex::singletons(p);
      coef_scale = scale;
      break;
    }
    case Family::binomial: {
      Vec yb = y;
      bool zero_one = true;
      for (int i = 0; i < y.size(); ++i)
        if (y[i] != 0.0 && y[i] != 1.0) zero_one = false;
      if (zero_one) yb = (2.0 * y.array() - 1.0).matrix();
      model = std::make_unique<BinomialModel>(Xw, yb, config.intercept);
      out.groups = index ? *index : GroupIndex::singletons(p);
      coef_scale = scale;
      break;
    }
    case Family::multinomial: {
      int K = 0;
      std::vector<int> labels = compact_labels(y, K);
      model = std::make_unique<MultinomialModel>(Xw, labels, K,
                                                 config.intercept);
      out.groups = build_multinomial_groups(p, K, mn_mode, index);
      coef_scale.resize(p * K);
      for (int j = 0; j < p; ++j)
        for (int k = 0; k < K; ++k) coef_scale[j * K + k] = scale[j];
      for (int j = 0; j < p; ++j)
        for (int k = 0; k < K; ++k)
          out.coef_names.push_back("x" + std::to_string(j) + ":class" +
                                   std::to_string(k));
      if (config.intercept)
        for (int k = 0; k < K; ++k)
          out.theta0_names.push_back("intercept:class" + std::to_string(k));
      break;
    }
    default:
      throw std::invalid_argument(
          "fit_lb handles gaussian/binomial/multinomial; use the dedicated "
          "entry point for " + to_string(config.family));
  }
  if (out.groups.size() != model->penalized_dim())
    throw std::invalid_argument("group index length does not match the "
                                "number of penalized coefficients");
  if (out.coef_names.empty())
    for (int j = 0; j < p; ++j) out.coef_names.push_back("x" + std::to_string(j));
  if (config.intercept && out.theta0_names.empty())
    out.theta0_names.push_back("intercept");

  out.path = run_lb(*model, out.groups, config);
  out.alpha = out.path.alpha;
  out.t0 = out.path.entry_time_t0;
  rescale_path(out.path, coef_scale);
  return out;
}

FitResult fit_ggm(const std::optional<Mat>& X, const std::optional<Mat>& S,
                  const PathConfig& config) {
  config.validate();
  if (!X && !S)
    throw std::invalid_argument("ggm needs either data X or a covariance S");
  GgmModel model = X ? GgmModel::from_data(*X) : GgmModel(*S);
  const int p = model.dim();

  FitResult out;
  out.family = Family::ggm;
  out.groups = GroupIndex::singletons(pair_count(p));
  for (int j = 0; j < p; ++j)
    for (int k = j + 1; k < p; ++k)
      out.coef_names.push_back("theta_" + std::to_string(j) + "_" +
                               std::to_string(k));
  for (int j = 0; j < p; ++j)
    out.theta0_names.push_back("theta_" + std::to_string(j) + "_" +
                               std::to_string(j));
  out.path = run_lb(model, out.groups, config);
  out.alpha = out.path.alpha;
  out.t0 = out.path.entry_time_t0;
  return out;
}

FitResult fit_ising(const Mat& X, const PathConfig& config,
                    IsingCoding coding) {
  config.validate();
  IsingModel model(X, coding, config.intercept);
  const int p = model.dim();

  FitResult out;
  out.family = Family::ising;
  out.groups = GroupIndex::singletons(pair_count(p));
  for (int j = 0; j < p; ++j)
    for (int k = j + 1; k < p; ++k)
      out.coef_names.push_back("theta_" + std::to_string(j) + "_" +
                               std::to_string(k));
  if (config.intercept)
    for (int v = 0; v < p; ++v)
      out.theta0_names.push_back("theta0_" + std::to_string(v));
  out.path = run_lb(model, out.groups, config);
  out.alpha = out.path.alpha;
  out.t0 = out.path.entry_time_t0;
  return out;
}

FitResult fit_potts(const IntMat& labels, const PathConfig& config,
                    bool group_penalty) {
  config.validate();
  const int p = static_cast<int>(labels.cols());
  // Compact each column's observed labels to 0..K_j-1 in value order.
  IntMat compact(labels.rows(), p);
  std::vector<int> K(p);
  for (int j = 0; j < p; ++j) {
    std::map<int, int> seen;
    for (int i = 0; i < labels.rows(); ++i) seen.try_emplace(labels(i, j), 0);
    int next = 0;
    for (auto& [val, id] : seen) id = next++;
    K[j] = next;
    for (int i = 0; i < labels.rows(); ++i)
      compact(i, j) = seen[labels(i, j)];
  }
  PottsModel model(compact, K, config.intercept);

  FitResult out;
  out.family = Family::potts;
  out.groups = model.groups(group_penalty);
  for (int j = 0; j < p; ++j)
    for (int k = j + 1; k < p; ++k)
      for (int s = 0; s < K[j]; ++s)
        for (int t = 0; t < K[k]; ++t)
          out.coef_names.push_back("theta_" + std::to_string(j) + "." +
                                   std::to_string(s) + "_" +
                                   std::to_string(k) + "." +
                                   std::to_string(t));
  if (config.intercept)
    for (int j = 0; j < p; ++j)
      for (int s = 0; s < K[j]; ++s)
        out.theta0_names.push_back("theta0_" + std::to_string(j) + "." +
                                   std::to_string(s));
  out.path = run_lb(model, out.groups, config);
  out.alpha = out.path.alpha;
  out.t0 = out.path.entry_time_t0;
  return out;
}

}  // namespace libra
