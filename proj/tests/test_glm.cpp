#include <doctest.h>

#include <cmath>

#include "libra/fit.hpp"
#include "libra/glm.hpp"
#include "oracles.hpp"

using namespace libra;

namespace {

Vec make_vec(std::initializer_list<double> v) {
  Vec out(static_cast<int>(v.size()));
  int i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

Vec scalar(double x) { return make_vec({x}); }

}  // namespace

TEST_CASE("linear loss/grad closed forms") {
  Mat X(2, 2);
  X.setIdentity();
  const LinearModel model(X, make_vec({3.0, 1.0}), false);
  Vec g0, g;
  const double loss = model.loss_grad(Vec(0), make_vec({3.0, 1.0}), g0, g);
  CHECK(loss == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(g.cwiseAbs().maxCoeff() < 1e-15);

  // theta = 0, theta0 = mean(y): intercept gradient vanishes.
  std::mt19937_64 rng(1);
  const Mat X2 = oracles::random_matrix(10, 4, rng);
  Vec y(10);
  for (int i = 0; i < 10; ++i) y[i] = oracles::normal(rng);
  const LinearModel m2(X2, y, true);
  Vec g02, g2;
  m2.loss_grad(scalar(y.mean()), Vec::Zero(4), g02, g2);
  CHECK(std::abs(g02[0]) < 1e-14);
  CHECK((g2 + X2.transpose() * (y.array() - y.mean()).matrix() / 10.0)
            .cwiseAbs()
            .maxCoeff() < 1e-14);
}

TEST_CASE("binomial loss/grad closed forms and stability") {
  Mat X1(1, 1);
  X1 << 1;
  const BinomialModel single(X1, scalar(1.0), false);
  Vec g0, g;
  single.loss_grad(Vec(0), scalar(0.0), g0, g);
  CHECK(g[0] == doctest::Approx(-0.5).epsilon(1e-14));

  Mat X(4, 1);
  X << 1, -1, 2, -2;
  const BinomialModel balanced(X, make_vec({1, -1, 1, -1}), true);
  const double loss = balanced.loss_grad(scalar(0.0), scalar(0.0), g0, g);
  CHECK(loss == doctest::Approx(std::log(2.0)).epsilon(1e-14));
  CHECK(std::abs(g0[0]) < 1e-14);

  // Large margins must not overflow.
  const double big = balanced.loss(scalar(0.0), scalar(700.0));
  CHECK(std::isfinite(big));

  CHECK_THROWS_AS(BinomialModel(X, make_vec({1, 0.5, 1, -1}), false),
                  std::invalid_argument);
}

TEST_CASE("multinomial loss at zero and K=2 binomial consistency") {
  std::mt19937_64 rng(2);
  const Mat X = oracles::random_matrix(30, 3, rng);
  std::vector<int> labels(30);
  for (int i = 0; i < 30; ++i) labels[i] = i % 3;
  const MultinomialModel model(X, labels, 3, true);
  Vec g0, g;
  const double loss =
      model.loss_grad(Vec::Zero(3), Vec::Zero(9), g0, g);
  CHECK(loss == doctest::Approx(std::log(3.0)).epsilon(1e-12));
  // g0_k = softmax(0) - class frequency = 1/3 - 1/3 = 0 here.
  CHECK(g0.cwiseAbs().maxCoeff() < 1e-14);

  // K = 2 with the (theta, -theta)/2-style embedding reduces to logistic.
  std::vector<int> bin(30);
  Vec ypm(30);
  for (int i = 0; i < 30; ++i) {
    bin[i] = i % 2;
    ypm[i] = bin[i] == 1 ? 1.0 : -1.0;
  }
  const MultinomialModel mn(X, bin, 2, false);
  const BinomialModel bm(X, ypm, false);
  const Vec theta = make_vec({0.3, -0.7, 1.1});
  // class-0 coefficients 0, class-1 coefficients theta (feature-major).
  Vec flat = Vec::Zero(6);
  for (int j = 0; j < 3; ++j) flat[j * 2 + 1] = theta[j];
  CHECK(mn.loss(Vec(0), flat) ==
        doctest::Approx(bm.loss(Vec(0), theta)).epsilon(1e-12));

  CHECK_THROWS_AS(MultinomialModel(X, std::vector<int>(30, 0), 2, false),
                  data_error);
}

TEST_CASE("intercept initializers") {
  CHECK(gaussian_intercept_init(make_vec({1, 2, 3})) == doctest::Approx(2.0));
  CHECK(binomial_intercept_init(make_vec({1, 1, 1, -1})) ==
        doctest::Approx(std::log(3.0)).epsilon(1e-14));
  CHECK_THROWS_AS(binomial_intercept_init(make_vec({1, 1, 1})), data_error);
  const Vec mn = multinomial_intercept_init({0, 0, 1, 2}, 3);
  CHECK(mn[0] == doctest::Approx(std::log(0.5)).epsilon(1e-14));
  CHECK(mn[1] == doctest::Approx(std::log(0.25)).epsilon(1e-14));
}

TEST_CASE("multinomial group builders") {
  const GroupIndex column = build_multinomial_groups(2, 3, MultinomialSparsity::column);
  REQUIRE(column.size() == 6);
  CHECK(column.num_groups() == 2);
  // feature-major: entries of feature 0 are indices 0..2
  CHECK(column.members(column.group_of(0)) == std::vector<int>({0, 1, 2}));
  CHECK(column.members(column.group_of(3)) == std::vector<int>({3, 4, 5}));

  const GroupIndex entry = build_multinomial_groups(2, 3, MultinomialSparsity::entry);
  CHECK(entry.num_groups() == 6);
  CHECK(entry.is_entrywise());

  const GroupIndex block = build_multinomial_groups(
      2, 3, MultinomialSparsity::block, GroupIndex({1, 1}));
  CHECK(block.num_groups() == 1);
  CHECK(static_cast<int>(block.members(0).size()) == 6);
  CHECK_THROWS_AS(build_multinomial_groups(2, 3, MultinomialSparsity::block),
                  std::invalid_argument);
  CHECK_THROWS_AS(build_multinomial_groups(2, 3, MultinomialSparsity::block,
                                           GroupIndex({1, 1, 2})),
                  std::invalid_argument);
}

TEST_CASE("gradients match finite differences (spot checks per family)") {
  std::mt19937_64 rng(7);
  for (int rep = 0; rep < 5; ++rep) {
    const Mat X = oracles::random_matrix(12, 4, rng);
    Vec yg(12), ypm(12);
    std::vector<int> labels(12);
    for (int i = 0; i < 12; ++i) {
      yg[i] = oracles::normal(rng);
      ypm[i] = oracles::uniform01(rng) < 0.5 ? -1.0 : 1.0;
      labels[i] = i % 3;
    }
    const LinearModel lin(X, yg, true);
    const BinomialModel bin(X, ypm, true);
    const MultinomialModel mn(X, labels, 3, true);
    const LossModel* models[] = {&lin, &bin, &mn};
    for (const LossModel* m : models) {
      Vec theta0(m->unpenalized_dim()), theta(m->penalized_dim());
      for (int j = 0; j < theta0.size(); ++j) theta0[j] = oracles::normal(rng) * 0.3;
      for (int j = 0; j < theta.size(); ++j) theta[j] = oracles::normal(rng) * 0.3;
      Vec g0, g;
      m->loss_grad(theta0, theta, g0, g);
      const auto fd = oracles::finite_diff(*m, theta0, theta);
      CHECK(oracles::max_rel_err(g, fd.g) < 1e-6);
      CHECK(oracles::max_rel_err(g0, fd.g0) < 1e-6);
    }
  }
}

TEST_CASE("losses are convex (midpoint test)") {
  std::mt19937_64 rng(13);
  const Mat X = oracles::random_matrix(15, 3, rng);
  Vec yg(15), ypm(15);
  std::vector<int> labels(15);
  for (int i = 0; i < 15; ++i) {
    yg[i] = oracles::normal(rng);
    ypm[i] = i % 2 == 0 ? 1.0 : -1.0;
    labels[i] = i % 3;
  }
  const LinearModel lin(X, yg, true);
  const BinomialModel bin(X, ypm, true);
  const MultinomialModel mn(X, labels, 3, true);
  const LossModel* models[] = {&lin, &bin, &mn};
  for (const LossModel* m : models)
    for (int rep = 0; rep < 30; ++rep) {
      Vec a0(m->unpenalized_dim()), a(m->penalized_dim());
      Vec b0(m->unpenalized_dim()), b(m->penalized_dim());
      for (int j = 0; j < a0.size(); ++j) {
        a0[j] = oracles::normal(rng);
        b0[j] = oracles::normal(rng);
      }
      for (int j = 0; j < a.size(); ++j) {
        a[j] = oracles::normal(rng);
        b[j] = oracles::normal(rng);
      }
      const double mid = m->loss((a0 + b0) / 2, (a + b) / 2);
      CHECK(mid <= (m->loss(a0, a) + m->loss(b0, b)) / 2 + 1e-10);
    }
}

TEST_CASE("normalize: fit on scaled columns maps back to identical predictions") {
  const int n = 40, p = 5;
  std::mt19937_64 rng(21);
  Mat X = oracles::random_matrix(n, p, rng);
  for (int j = 0; j < p; ++j) X.col(j) *= (1.0 + j);  // uneven scales
  Vec y(n);
  for (int i = 0; i < n; ++i) y[i] = X(i, 0) - 2 * X(i, 2) + 0.1 * oracles::normal(rng);

  PathConfig cfg;
  cfg.kappa = 50.0;
  cfg.nt = 20;
  cfg.normalize = true;
  const FitResult norm = fit_lb(X, y, cfg);

  Mat Xn = X;
  Vec scale(p);
  for (int j = 0; j < p; ++j) {
    scale[j] = std::sqrt(X.col(j).squaredNorm() / n);
    Xn.col(j) /= scale[j];
  }
  PathConfig raw = cfg;
  raw.normalize = false;
  raw.tlist = norm.path.times;
  const FitResult manual = fit_lb(Xn, y, raw);
  REQUIRE(norm.path.size() == manual.path.size());
  for (int i = 0; i < norm.path.size(); ++i) {
    const Vec pred_norm = X * norm.path.theta_path[i];
    const Vec pred_manual = Xn * manual.path.theta_path[i];
    CHECK((pred_norm - pred_manual).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("binomial and K=2 multinomial paths agree on entry order") {
  const int n = 60, p = 5;
  std::mt19937_64 rng(31);
  const Mat X = oracles::random_matrix(n, p, rng);
  Vec y01(n);
  for (int i = 0; i < n; ++i) {
    const double m = 1.5 * X(i, 1) - 2.0 * X(i, 3);
    y01[i] = oracles::uniform01(rng) < 1.0 / (1.0 + std::exp(-m)) ? 1.0 : 0.0;
  }
  PathConfig bc;
  bc.kappa = 20.0;
  bc.family = Family::binomial;
  bc.nt = 60;
  const FitResult bin = fit_lb(X, y01, bc);

  PathConfig mc = bc;
  mc.family = Family::multinomial;
  const FitResult mn =
      fit_lb(X, y01, mc, std::nullopt, MultinomialSparsity::column);
  // column groups are ordered by feature, so orders are comparable directly
  CHECK(bin.path.entry_order() == mn.path.entry_order());
}

TEST_CASE("fit_lb recodes {0,1} binomial labels") {
  Mat X(6, 2);
  std::mt19937_64 rng(41);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 2; ++j) X(i, j) = oracles::normal(rng);
  const Vec y01 = [&] {
    Vec y(6);
    for (int i = 0; i < 6; ++i) y[i] = i % 2;
    return y;
  }();
  Vec ypm = (2.0 * y01.array() - 1.0).matrix();
  PathConfig cfg;
  cfg.kappa = 10.0;
  cfg.family = Family::binomial;
  cfg.nt = 10;
  const FitResult a = fit_lb(X, y01, cfg);
  const FitResult b = fit_lb(X, ypm, cfg);
  for (int i = 0; i < a.path.size(); ++i)
    CHECK((a.path.theta_path[i] - b.path.theta_path[i]).cwiseAbs().maxCoeff() ==
          0.0);
}
