#include <doctest.h>

#include <cmath>

#include "libra/graphical.hpp"
#include "oracles.hpp"

using namespace libra;

namespace {

Vec make_vec(std::initializer_list<double> v) {
  Vec out(static_cast<int>(v.size()));
  int i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

Mat random_spd(int p, std::mt19937_64& rng) {
  const Mat A = oracles::random_matrix(p + 3, p, rng);
  return A.transpose() * A / (p + 3) + 0.1 * Mat::Identity(p, p);
}

// All {0,1}^p patterns as rows.
Mat all_binary_patterns(int p) {
  Mat X(1 << p, p);
  for (int pat = 0; pat < (1 << p); ++pat)
    for (int v = 0; v < p; ++v) X(pat, v) = (pat >> v) & 1;
  return X;
}

}  // namespace

TEST_CASE("pair indexing round-trips") {
  const int p = 7;
  int idx = 0;
  for (int j = 0; j < p; ++j)
    for (int k = j + 1; k < p; ++k) {
      CHECK(pair_index(j, k, p) == idx);
      const auto [jj, kk] = pair_from_index(idx, p);
      CHECK(jj == j);
      CHECK(kk == k);
      ++idx;
    }
  CHECK(idx == pair_count(p));
}

TEST_CASE("symmetric_from_parts reconstructs exactly") {
  const Vec diag = make_vec({1, 2, 3});
  const Vec off = make_vec({4, 5, 6});
  const Mat T = symmetric_from_parts(diag, off, 3);
  CHECK(T(0, 1) == 4.0);
  CHECK(T(1, 0) == 4.0);
  CHECK(T(0, 2) == 5.0);
  CHECK(T(1, 2) == 6.0);
  CHECK((T - T.transpose()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("GGM closed-form values at S = I, Theta = I") {
  const GgmModel model(Mat::Identity(2, 2));
  const Vec diag = make_vec({1.0, 1.0});
  const Vec off = make_vec({0.0});
  CHECK(model.loss(diag, off) == doctest::Approx(1.0).epsilon(1e-14));
  Vec gd, go;
  model.loss_grad(diag, off, gd, go);
  CHECK(std::abs(gd[0]) < 1e-14);
  CHECK(std::abs(gd[1]) < 1e-14);
}

TEST_CASE("GGM: diagonal S is stationary in the off-diagonals at the init") {
  Mat S = Mat::Zero(3, 3);
  S.diagonal() = make_vec({1.0, 4.0, 0.25});
  const GgmModel model(S);
  const Vec diag = model.init_unpenalized();
  CHECK(diag[0] == doctest::Approx(1.0));
  CHECK(diag[1] == doctest::Approx(0.25));
  CHECK(diag[2] == doctest::Approx(4.0));
  Vec gd, go;
  model.loss_grad(diag, Vec::Zero(3), gd, go);
  CHECK(go.cwiseAbs().maxCoeff() < 1e-14);
  CHECK(gd.cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("GGM errors: asymmetry, zero variance, nonpositive diagonal") {
  Mat bad(2, 2);
  bad << 1, 0.5, 0.2, 1;
  CHECK_THROWS_AS(GgmModel{bad}, data_error);

  Mat zero_var = Mat::Identity(2, 2);
  zero_var(1, 1) = 0.0;
  CHECK_THROWS_AS(GgmModel(zero_var).init_unpenalized(), data_error);

  const GgmModel ok(Mat::Identity(2, 2));
  Vec gd, go;
  CHECK_THROWS_AS(ok.loss(make_vec({-1.0, 1.0}), make_vec({0.0})),
                  std::domain_error);
  CHECK_THROWS_AS(ok.loss_grad(make_vec({0.0, 1.0}), make_vec({0.0}), gd, go),
                  std::domain_error);
}

TEST_CASE("GGM gradient matches finite differences; loss is convex") {
  std::mt19937_64 rng(5);
  for (int rep = 0; rep < 10; ++rep) {
    const Mat S = random_spd(4, rng);
    const GgmModel model(S);
    Vec diag(4), off(pair_count(4));
    for (int j = 0; j < 4; ++j) diag[j] = 0.5 + oracles::uniform01(rng);
    for (int j = 0; j < off.size(); ++j) off[j] = 0.3 * oracles::normal(rng);
    Vec gd, go;
    model.loss_grad(diag, off, gd, go);
    const auto fd = oracles::finite_diff(model, diag, off, 1e-6);
    CHECK(oracles::max_rel_err(gd, fd.g0) < 1e-6);
    CHECK(oracles::max_rel_err(go, fd.g) < 1e-6);

    Vec diag2(4), off2(off.size());
    for (int j = 0; j < 4; ++j) diag2[j] = 0.5 + oracles::uniform01(rng);
    for (int j = 0; j < off.size(); ++j) off2[j] = 0.3 * oracles::normal(rng);
    const double mid = model.loss((diag + diag2) / 2, (off + off2) / 2);
    CHECK(mid <= (model.loss(diag, off) + model.loss(diag2, off2)) / 2 + 1e-10);
  }
}

TEST_CASE("GGM from_data centers columns") {
  std::mt19937_64 rng(6);
  Mat X = oracles::random_matrix(50, 3, rng);
  X.col(1).array() += 100.0;  // large offset must not change S
  const GgmModel a = GgmModel::from_data(X);
  Mat Xc = X.rowwise() - X.colwise().mean();
  const Mat S = Xc.transpose() * Xc / 50.0;
  CHECK((a.S() - S).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("Ising: closed-form null gradients") {
  const Mat X = all_binary_patterns(2);  // all four {0,1}^2 patterns
  const IsingModel model(X, IsingCoding::zero_one, true);
  Vec g0, g;
  model.loss_grad(Vec::Zero(2), Vec::Zero(1), g0, g);
  // mean 0.5 columns: sigmoid(0) - 0.5 = 0
  CHECK(g0.cwiseAbs().maxCoeff() < 1e-14);
  // closed form (1/n) sum [x2/2 + x1/2 - 2 x1 x2] over the four patterns
  double expect = 0.0;
  for (int i = 0; i < 4; ++i)
    expect += X(i, 1) / 2.0 + X(i, 0) / 2.0 - 2.0 * X(i, 0) * X(i, 1);
  expect /= 4.0;
  CHECK(g[0] == doctest::Approx(expect).epsilon(1e-14));
}

TEST_CASE("Ising: coding validation and degenerate columns") {
  Mat bad(2, 2);
  bad << 0, 1, 2, 0;
  CHECK_THROWS_AS(IsingModel(bad, IsingCoding::zero_one, true),
                  std::invalid_argument);
  Mat pm(2, 2);
  pm << 0, 1, 1, 0;
  CHECK_THROWS_AS(IsingModel(pm, IsingCoding::pm_one, true),
                  std::invalid_argument);
  Mat constant(3, 2);
  constant << 1, 0, 1, 1, 1, 0;
  CHECK_THROWS_AS(IsingModel(constant, IsingCoding::zero_one, true),
                  data_error);
}

TEST_CASE("Ising gradient matches finite differences in both codings") {
  std::mt19937_64 rng(8);
  for (int rep = 0; rep < 6; ++rep) {
    Mat X01(20, 4);
    for (int i = 0; i < 20; ++i)
      for (int j = 0; j < 4; ++j)
        X01(i, j) = oracles::uniform01(rng) < 0.5 ? 0.0 : 1.0;
    // guard against constant columns in a small sample
    for (int j = 0; j < 4; ++j) {
      X01(0, j) = 0.0;
      X01(1, j) = 1.0;
    }
    const Mat Xpm = (2.0 * X01.array() - 1.0).matrix();
    const IsingModel m01(X01, IsingCoding::zero_one, true);
    const IsingModel mpm(Xpm, IsingCoding::pm_one, true);
    for (const IsingModel* m : {&m01, &mpm}) {
      Vec theta0(4), theta(pair_count(4));
      for (int j = 0; j < 4; ++j) theta0[j] = 0.4 * oracles::normal(rng);
      for (int j = 0; j < theta.size(); ++j)
        theta[j] = 0.4 * oracles::normal(rng);
      Vec g0, g;
      m->loss_grad(theta0, theta, g0, g);
      const auto fd = oracles::finite_diff(*m, theta0, theta);
      CHECK(oracles::max_rel_err(g, fd.g) < 1e-6);
      CHECK(oracles::max_rel_err(g0, fd.g0) < 1e-6);
    }
  }
}

TEST_CASE("Ising recode: examples and round trip") {
  IsingParamsZeroOne p01;
  p01.theta0 = Vec::Zero(2);
  p01.interactions = make_vec({2.0});
  const IsingParamsPm pm = ising_recode_to_pm(p01, 2);
  CHECK(pm.interactions[0] == doctest::Approx(1.0));
  CHECK(pm.h[0] == doctest::Approx(1.0));
  CHECK(pm.h[1] == doctest::Approx(1.0));

  const IsingParamsZeroOne back = ising_recode_to_zero_one(pm, 2);
  CHECK((back.theta0 - p01.theta0).cwiseAbs().maxCoeff() < 1e-14);
  CHECK((back.interactions - p01.interactions).cwiseAbs().maxCoeff() < 1e-14);

  IsingParamsPm zero;
  zero.h = Vec::Zero(3);
  zero.interactions = Vec::Zero(3);
  const auto z01 = ising_recode_to_zero_one(zero, 3);
  CHECK(z01.theta0.cwiseAbs().maxCoeff() == 0.0);
  CHECK(z01.interactions.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("Ising recode preserves every conditional probability (p = 4)") {
  const int p = 4;
  std::mt19937_64 rng(12);
  IsingParamsZeroOne p01;
  p01.theta0 = Vec(p);
  p01.interactions = Vec(pair_count(p));
  for (int j = 0; j < p; ++j) p01.theta0[j] = oracles::normal(rng);
  for (int j = 0; j < p01.interactions.size(); ++j)
    p01.interactions[j] = oracles::normal(rng);
  const IsingParamsPm pm = ising_recode_to_pm(p01, p);

  const Mat X01 = all_binary_patterns(p);
  const Mat Xpm = (2.0 * X01.array() - 1.0).matrix();
  const IsingModel m01(X01, IsingCoding::zero_one, true);
  const IsingModel mpm(Xpm, IsingCoding::pm_one, true);
  for (int pat = 0; pat < (1 << p); ++pat)
    for (int v = 0; v < p; ++v) {
      const double a = m01.conditional_prob(p01.theta0, p01.interactions, v,
                                            X01.row(pat).transpose());
      const double b = mpm.conditional_prob(pm.h, pm.interactions, v,
                                            Xpm.row(pat).transpose());
      CHECK(std::abs(a - b) < 1e-12);
    }
}

TEST_CASE("ising_intercept_init values and errors") {
  Mat X(4, 2);
  X << 1, 1, 0, 1, 1, 1, 0, 0;  // means 0.5 and 0.75
  const Vec init = ising_intercept_init(X, IsingCoding::zero_one);
  CHECK(std::abs(init[0]) < 1e-14);
  CHECK(init[1] == doctest::Approx(std::log(3.0)).epsilon(1e-14));
  Mat constant(2, 1);
  constant << 1, 1;
  CHECK_THROWS_AS(ising_intercept_init(constant, IsingCoding::zero_one),
                  data_error);
}

TEST_CASE("Ising/Potts: intercept gradient vanishes at the initialized null") {
  std::mt19937_64 rng(14);
  Mat X01(30, 3);
  for (int i = 0; i < 30; ++i)
    for (int j = 0; j < 3; ++j)
      X01(i, j) = oracles::uniform01(rng) < 0.4 ? 0.0 : 1.0;
  for (int j = 0; j < 3; ++j) {
    X01(0, j) = 0.0;
    X01(1, j) = 1.0;
  }
  const IsingModel ising(X01, IsingCoding::zero_one, true);
  Vec g0, g;
  ising.loss_grad(ising.init_unpenalized(), Vec::Zero(pair_count(3)), g0, g);
  CHECK(g0.cwiseAbs().maxCoeff() < 1e-12);

  IntMat labels(30, 3);
  for (int i = 0; i < 30; ++i)
    for (int j = 0; j < 3; ++j)
      labels(i, j) = static_cast<int>(oracles::uniform01(rng) * 3);
  for (int j = 0; j < 3; ++j)
    for (int s = 0; s < 3; ++s) labels(s, j) = s;  // every class present
  const PottsModel potts(labels, {3, 3, 3}, true);
  Vec pg0, pg;
  potts.loss_grad(potts.init_unpenalized(), Vec::Zero(potts.penalized_dim()),
                  pg0, pg);
  CHECK(pg0.cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("Potts: uniform class distribution zeroes the null intercept grad") {
  IntMat labels(6, 2);
  for (int i = 0; i < 6; ++i) {
    labels(i, 0) = i % 3;
    labels(i, 1) = i % 2;
  }
  const PottsModel model(labels, {3, 2}, true);
  Vec g0, g;
  model.loss_grad(Vec::Zero(5), Vec::Zero(model.penalized_dim()), g0, g);
  // softmax(0) = 1/K equals the empirical frequency here
  CHECK(g0.cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("Potts with K = 2 everywhere reduces to the Ising loss") {
  const int p = 3;
  const Mat X01 = all_binary_patterns(p);  // 8-pattern exhaustive dataset
  IntMat labels(X01.rows(), p);
  for (int i = 0; i < X01.rows(); ++i)
    for (int j = 0; j < p; ++j) labels(i, j) = static_cast<int>(X01(i, j));
  const PottsModel potts(labels, {2, 2, 2}, true);
  const IsingModel ising(X01, IsingCoding::zero_one, true);

  std::mt19937_64 rng(15);
  Vec itheta0(p), itheta(pair_count(p));
  for (int j = 0; j < p; ++j) itheta0[j] = oracles::normal(rng);
  for (int j = 0; j < itheta.size(); ++j) itheta[j] = oracles::normal(rng);

  // Embed: class-1 intercept = theta0_v, class-1/class-1 block entry = theta.
  Vec ptheta0 = Vec::Zero(2 * p);
  for (int v = 0; v < p; ++v) ptheta0[potts.theta0_offset(v) + 1] = itheta0[v];
  Vec ptheta = Vec::Zero(potts.penalized_dim());
  for (int j = 0; j < p; ++j)
    for (int k = j + 1; k < p; ++k) {
      // row-major 2x2 block: entry (1,1) sits at offset 3
      ptheta[potts.block_offset(j, k) + 3] = itheta[pair_index(j, k, p)];
    }
  CHECK(potts.loss(ptheta0, ptheta) ==
        doctest::Approx(ising.loss(itheta0, itheta)).epsilon(1e-12));
}

TEST_CASE("Potts gradient matches finite differences") {
  std::mt19937_64 rng(16);
  for (int rep = 0; rep < 4; ++rep) {
    IntMat labels(25, 3);
    const std::vector<int> K = {2, 3, 2};
    for (int i = 0; i < 25; ++i)
      for (int j = 0; j < 3; ++j)
        labels(i, j) = static_cast<int>(oracles::uniform01(rng) * K[j]);
    for (int j = 0; j < 3; ++j)
      for (int s = 0; s < K[j]; ++s) labels(s, j) = s;
    const PottsModel model(labels, K, true);
    Vec theta0(model.unpenalized_dim()), theta(model.penalized_dim());
    for (int j = 0; j < theta0.size(); ++j) theta0[j] = 0.4 * oracles::normal(rng);
    for (int j = 0; j < theta.size(); ++j) theta[j] = 0.4 * oracles::normal(rng);
    Vec g0, g;
    model.loss_grad(theta0, theta, g0, g);
    const auto fd = oracles::finite_diff(model, theta0, theta);
    CHECK(oracles::max_rel_err(g, fd.g) < 1e-6);
    CHECK(oracles::max_rel_err(g0, fd.g0) < 1e-6);
  }
}

TEST_CASE("Potts groups: one group per variable pair") {
  IntMat labels(4, 3);
  labels << 0, 0, 0, 1, 1, 1, 0, 1, 0, 1, 0, 1;
  const PottsModel model(labels, {2, 2, 2}, true);
  const GroupIndex gi = model.groups(true);
  CHECK(gi.num_groups() == 3);
  for (int g = 0; g < 3; ++g)
    CHECK(static_cast<int>(gi.members(g).size()) == 4);
  CHECK(model.groups(false).is_entrywise());

  IntMat mixed(6, 2);
  for (int i = 0; i < 6; ++i) {
    mixed(i, 0) = i % 2;
    mixed(i, 1) = i % 3;
  }
  const PottsModel mk(mixed, {2, 3}, true);
  const GroupIndex mg = mk.groups(true);
  CHECK(mg.num_groups() == 1);
  CHECK(static_cast<int>(mg.members(0).size()) == 6);
}

TEST_CASE("Potts errors: unseen labels and empty classes") {
  IntMat labels(3, 2);
  labels << 0, 0, 1, 1, 2, 0;
  CHECK_THROWS_AS(PottsModel(labels, {2, 2}, true), std::invalid_argument);
  IntMat empty(3, 1);
  empty << 0, 0, 2;
  CHECK_THROWS_AS(PottsModel(empty, {3}, true), data_error);
}
