#include <doctest.h>

#include <cmath>

#include "libra/simulate.hpp"
#include "oracles.hpp"

using namespace libra;

TEST_CASE("grid edge set is the 4-neighbor lattice") {
  GridIsingSpec spec;
  spec.rows = 3;
  spec.cols = 4;
  const auto edges = spec.edge_set();
  // 3 rows x 3 horizontal + 2 x 4 vertical
  CHECK(static_cast<int>(edges.size()) == 3 * 3 + 2 * 4);
  CHECK(edges.count(pair_index(0, 1, 12)) == 1);
  CHECK(edges.count(pair_index(0, 4, 12)) == 1);
  CHECK(edges.count(pair_index(0, 5, 12)) == 0);  // diagonal is not an edge

  GridIsingSpec paper;  // defaults match the 10x10 benchmark setting
  CHECK(paper.rows == 10);
  CHECK(paper.cols == 10);
  CHECK(paper.coupling == doctest::Approx(2.0 / 2.3));
  CHECK(paper.n_samples == 5000);
  CHECK(static_cast<int>(paper.edge_set().size()) == 180);
}

TEST_CASE("gibbs sampler is deterministic for a fixed spec") {
  GridIsingSpec spec;
  spec.rows = 3;
  spec.cols = 3;
  spec.n_samples = 50;
  spec.burn_in = 20;
  spec.thinning = 2;
  spec.seed = 99;
  const Mat a = gibbs_sample_ising(spec);
  const Mat b = gibbs_sample_ising(spec);
  CHECK((a - b).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("zero coupling gives i.i.d. Bernoulli(1/2) sites") {
  GridIsingSpec spec;
  spec.rows = 3;
  spec.cols = 3;
  spec.coupling = 0.0;
  spec.n_samples = 5000;
  spec.burn_in = 100;
  spec.thinning = 1;
  spec.seed = 5;
  const Mat X = gibbs_sample_ising(spec);
  const double sd = 0.5 / std::sqrt(5000.0);
  for (int v = 0; v < spec.num_nodes(); ++v)
    CHECK(std::abs(X.col(v).mean() - 0.5) < 3 * sd);
}

TEST_CASE("two-node sampler matches the exact Boltzmann distribution") {
  GridIsingSpec spec;
  spec.rows = 1;
  spec.cols = 2;
  spec.coupling = 0.8;
  spec.n_samples = 50000;
  spec.burn_in = 200;
  spec.thinning = 3;
  spec.seed = 7;
  const Mat X = gibbs_sample_ising(spec);  // {0,1} coding

  // The sampler's conditional sigmoid(h + J * sum of neighbor spins) is
  // the Gibbs conditional of P(x) proportional to exp(h'x/2 + x'Jx/4).
  Mat J = Mat::Zero(2, 2);
  J(0, 1) = J(1, 0) = spec.coupling;
  const auto probs = oracles::ising_boltzmann_pm(Vec::Zero(2), J);

  std::vector<double> freq(4, 0.0);
  for (int i = 0; i < X.rows(); ++i) {
    const int pat = static_cast<int>(X(i, 0)) | (static_cast<int>(X(i, 1)) << 1);
    freq[pat] += 1.0 / X.rows();
  }
  double chi2 = 0.0, tv = 0.0;
  for (int pat = 0; pat < 4; ++pat) {
    chi2 += X.rows() * (freq[pat] - probs[pat]) * (freq[pat] - probs[pat]) /
            probs[pat];
    tv += 0.5 * std::abs(freq[pat] - probs[pat]);
  }
  CHECK(chi2 < 16.27);  // 99.9th percentile of chi-square with 3 dof
  CHECK(tv < 0.01);
}

TEST_CASE("gen_linear_data: noiseless, deterministic, support-refit") {
  const LinearData a = gen_linear_data(40, 8, 3, kInf, 12);
  CHECK((a.y - a.X * a.true_theta).cwiseAbs().maxCoeff() == 0.0);
  int nnz = 0;
  for (int j = 0; j < 8; ++j)
    if (a.true_theta[j] != 0.0) {
      ++nnz;
      CHECK(std::abs(a.true_theta[j]) == 1.0);
    }
  CHECK(nnz == 3);

  const LinearData b = gen_linear_data(40, 8, 3, kInf, 12);
  CHECK((a.X - b.X).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a.y - b.y).cwiseAbs().maxCoeff() == 0.0);

  // noisy case: least squares on the true support recovers theta within
  // a few noise standard errors
  const LinearData c = gen_linear_data(200, 8, 3, 50.0, 13);
  std::vector<int> support;
  for (int j = 0; j < 8; ++j)
    if (c.true_theta[j] != 0.0) support.push_back(j);
  Mat Xs(200, support.size());
  for (size_t s = 0; s < support.size(); ++s) Xs.col(s) = c.X.col(support[s]);
  const Vec beta = (Xs.transpose() * Xs).ldlt().solve(Xs.transpose() * c.y);
  for (size_t s = 0; s < support.size(); ++s)
    CHECK(std::abs(beta[s] - c.true_theta[support[s]]) < 0.2);
}

TEST_CASE("support recovery curve endpoints and exact interval") {
  SolutionPath path;
  path.times = {1.0, 2.0, 3.0, 4.0};
  Vec null_pt = Vec::Zero(3), exact(3), dense(3);
  exact << 0.5, 0.0, 0.0;
  dense << 0.5, 0.2, -0.1;
  path.theta_path = {null_pt, exact, exact, dense};
  const std::set<int> truth = {0};
  const RecoveryCurve curve = support_recovery_curve(path, truth);
  CHECK(curve.tp_rate[0] == 0.0);
  CHECK(curve.fp_rate[0] == 0.0);
  CHECK(curve.tp_rate[3] == 1.0);
  CHECK(curve.fp_rate[3] == 1.0);
  CHECK(curve.exact_recovery);
  CHECK(curve.exact_t_lo == 2.0);
  CHECK(curve.exact_t_hi == 3.0);
}
