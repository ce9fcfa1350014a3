#pragma once

#include <memory>

#include "libra/glm.hpp"
#include "libra/graphical.hpp"
#include "libra/path_engine.hpp"
#include "libra/types.hpp"

namespace libra {

struct FitResult {
  SolutionPath path;
  Family family = Family::gaussian;
  double alpha = 0.0;  // resolved step size
  double t0 = 0.0;
  GroupIndex groups;
  std::vector<std::string> coef_names;
  std::vector<std::string> theta0_names;
};

// lb entry point for the regression families (gaussian, binomial,
// multinomial). Binomial y may be {0,1} or {-1,1}; multinomial y holds
// class labels (compacted to 0..K-1 in label order). When normalize is
// set, columns are scaled to unit 1/n-norm (and centered when an
// intercept is fit) and coefficients are reported back on the original
// scale.
FitResult fit_lb(const Mat& X, const Vec& y, const PathConfig& config,
                 const std::optional<GroupIndex>& index = std::nullopt,
                 MultinomialSparsity mn_mode = MultinomialSparsity::entry);

// ggm entry point: either raw data X or a precomputed covariance S.
FitResult fit_ggm(const std::optional<Mat>& X, const std::optional<Mat>& S,
                  const PathConfig& config);

FitResult fit_ising(const Mat& X, const PathConfig& config, IsingCoding coding);

FitResult fit_potts(const IntMat& labels, const PathConfig& config,
                    bool group_penalty);

}  // namespace libra
