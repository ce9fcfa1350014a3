#include "libra/iss.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "libra/glm.hpp"
#include "libra/path_engine.hpp"

namespace libra {

namespace {

constexpr double kBoundaryTol = 1e-12;
constexpr double kSlopeTol = 1e-13;

// Lawson-Hanson nonnegative least squares, min ||A x - b||, x >= 0.
// Throws on a rank-deficient passive set.
Vec nnls(const Mat& A, const Vec& b) {
  const int m = static_cast<int>(A.cols());
  Vec x = Vec::Zero(m);
  std::vector<bool> passive(m, false);
  const double tol = 1e-12 * std::max(1.0, b.norm());
  for (int outer = 0; outer < 4 * m + 8; ++outer) {
    Vec w = A.transpose() * (b - A * x);
    int best = -1;
    double wbest = tol;
    for (int j = 0; j < m; ++j)
      if (!passive[j] && w[j] > wbest) {
        wbest = w[j];
        best = j;
      }
    if (best < 0) return x;
    passive[best] = true;
    for (int inner = 0; inner < 4 * m + 8; ++inner) {
      std::vector<int> P;
      for (int j = 0; j < m; ++j)
        if (passive[j]) P.push_back(j);
      Mat Ap(A.rows(), P.size());
      for (size_t c = 0; c < P.size(); ++c) Ap.col(c) = A.col(P[c]);
      Eigen::ColPivHouseholderQR<Mat> qr(Ap);
      if (qr.rank() < static_cast<int>(P.size()))
        throw std::runtime_error("rank-deficient active block");
      Vec z = qr.solve(b);
      if ((z.array() > 0.0).all()) {
        x.setZero();
        for (size_t c = 0; c < P.size(); ++c) x[P[c]] = z[c];
        break;
      }
      double step = 1.0;
      for (size_t c = 0; c < P.size(); ++c)
        if (z[c] <= 0.0)
          step = std::min(step, x[P[c]] / (x[P[c]] - z[c]));
      for (size_t c = 0; c < P.size(); ++c) {
        x[P[c]] += step * (z[c] - x[P[c]]);
        if (z[c] <= 0.0 && x[P[c]] <= 1e-14) {
          x[P[c]] = 0.0;
          passive[P[c]] = false;
        }
      }
    }
  }
  return x;
}

}  // namespace

Vec IssPath::theta_at(double t) const {
  if (knots.empty() || t < knots.front())
    throw std::out_of_range("t below the start of the ISS path");
  auto it = std::upper_bound(knots.begin(), knots.end(), t);
  return solutions[it - knots.begin() - 1];
}

double IssPath::intercept_at(double t) const {
  auto it = std::upper_bound(knots.begin(), knots.end(), t);
  return intercepts[it - knots.begin() - 1];
}

Vec IssPath::rho_at(double t) const {
  auto it = std::upper_bound(knots.begin(), knots.end(), t);
  const size_t k = it - knots.begin() - 1;
  return rho_at_knot[k] + (t - knots[k]) * rho_slopes[k];
}

std::vector<int> IssPath::entry_order() const {
  std::vector<int> order;
  if (solutions.empty()) return order;
  const int p = static_cast<int>(solutions.front().size());
  std::vector<size_t> first_seg(p, solutions.size());
  for (size_t k = 0; k < solutions.size(); ++k)
    for (int j = 0; j < p; ++j)
      if (first_seg[j] == solutions.size() && solutions[k][j] != 0.0)
        first_seg[j] = k;
  for (int j = 0; j < p; ++j)
    if (first_seg[j] < solutions.size()) order.push_back(j);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return first_seg[a] < first_seg[b]; });
  return order;
}

IssPath iss_path(const Mat& X, const Vec& y, const IssOptions& opts) {
  const int n = static_cast<int>(X.rows());
  const int p = static_cast<int>(X.cols());
  if (n < 1 || p < 1) throw std::invalid_argument("empty problem");
  if (y.size() != n)
    throw std::invalid_argument("X and y have different sample counts");

  Mat Xw = X;
  Vec yw = y;
  Vec xbar = Vec::Zero(p);
  double ybar = 0.0;
  if (opts.intercept) {
    xbar = Xw.colwise().mean();
    Xw.rowwise() -= xbar.transpose();
    ybar = yw.mean();
    yw.array() -= ybar;
  }
  Vec scale = Vec::Ones(p);
  if (opts.normalize) {
    for (int j = 0; j < p; ++j) {
      scale[j] = std::sqrt(Xw.col(j).squaredNorm() / n);
      if (!(scale[j] > 0.0))
        throw data_error("column " + std::to_string(j) +
                         " is constant; cannot normalize");
      Xw.col(j) /= scale[j];
    }
  }

  IssPath path;
  const int knot_cap = opts.max_knots_per_var * p;
  Vec rho = Vec::Zero(p);
  double t = 0.0;

  auto back_transform = [&](const Vec& theta_w) {
    Vec th = theta_w.cwiseQuotient(scale);
    path.solutions.push_back(th);
    path.intercepts.push_back(opts.intercept ? ybar - xbar.dot(th) : 0.0);
  };

  for (int knot = 0;; ++knot) {
    if (knot > knot_cap) {
      std::ostringstream msg;
      msg << "ISS knot cap exceeded (" << knot_cap << " knots, t = " << t
          << "); the path did not stabilize";
      throw std::runtime_error(msg.str());
    }
    // Boundary set and sign-constrained restricted least squares.
    std::vector<int> A;
    for (int j = 0; j < p; ++j)
      if (std::abs(rho[j]) >= 1.0 - kBoundaryTol) A.push_back(j);
    Vec theta_w = Vec::Zero(p);
    if (!A.empty()) {
      Mat As(n, A.size());
      for (size_t c = 0; c < A.size(); ++c)
        As.col(c) = Xw.col(A[c]) * (rho[A[c]] > 0 ? 1.0 : -1.0);
      Vec u;
      try {
        u = nnls(As, yw);
      } catch (const std::runtime_error&) {
        std::ostringstream msg;
        msg << "rank-deficient active block at knot t = " << t;
        throw std::runtime_error(msg.str());
      }
      for (size_t c = 0; c < A.size(); ++c)
        theta_w[A[c]] = (rho[A[c]] > 0 ? 1.0 : -1.0) * u[c];
    }
    const Vec r = yw - Xw * theta_w;
    Vec d = Xw.transpose() * r / n;  // d rho / d t
    // Active coefficients sit at a restricted least-squares optimum, so
    // their slope is zero up to round-off; pin it to keep rho at +-1.
    for (int j = 0; j < p; ++j)
      if (theta_w[j] != 0.0) d[j] = 0.0;

    path.knots.push_back(t);
    back_transform(theta_w);
    path.rho_at_knot.push_back(rho);
    path.rho_slopes.push_back(d);

    // Next boundary crossing.
    double dt = kInf;
    const double gscale = std::max(1.0, yw.norm() / std::sqrt(double(n)));
    for (int j = 0; j < p; ++j) {
      if (theta_w[j] != 0.0) continue;
      double hit = kInf;
      if (d[j] > kSlopeTol * gscale)
        hit = (1.0 - rho[j]) / d[j];
      else if (d[j] < -kSlopeTol * gscale)
        hit = (-1.0 - rho[j]) / d[j];
      dt = std::min(dt, hit);
    }
    if (!std::isfinite(dt)) break;  // gradient vanished; path is complete
    if (t + dt > opts.t_max) break;
    t += dt;
    rho += dt * d;
    for (int j = 0; j < p; ++j) {  // snap coordinates that just crossed
      if (rho[j] > 1.0 - kBoundaryTol) rho[j] = 1.0;
      if (rho[j] < -1.0 + kBoundaryTol) rho[j] = -1.0;
    }
  }
  return path;
}

IssConvergenceReport lb_iss_convergence_check(const Mat& X, const Vec& y,
                                              const std::vector<double>& kappas,
                                              bool intercept) {
  IssConvergenceReport report;
  report.kappas = kappas;

  IssOptions iopts;
  iopts.intercept = intercept;
  iopts.normalize = false;
  const IssPath iss = iss_path(X, y, iopts);

  const Mat S = X.transpose() * X / static_cast<double>(X.rows());
  const double s_norm = power_iteration_norm(S);

  const LinearModel model(X, y, intercept);
  const GroupIndex groups = GroupIndex::singletons(static_cast<int>(X.cols()));

  for (double kappa : kappas) {
    PathConfig cfg;
    cfg.kappa = kappa;
    cfg.alpha = 1.0 / (kappa * s_norm);
    cfg.intercept = intercept;
    if (report.tlist.empty()) {
      const FirstEntry fe = first_entry_time(model, groups);
      PathConfig base = cfg;
      base.nt = 50;
      base.trate = 100.0;
      report.tlist = resolve_tlist(fe.t0, base);
    }
    cfg.tlist = report.tlist;
    const SolutionPath lb = run_lb(model, groups, cfg);
    double dist = 0.0;
    for (int i = 0; i < lb.size(); ++i) {
      const double t = lb.times[i];
      // The limit path jumps at its knots, so pointwise convergence only
      // holds at continuity points; skip grid times that sit on a knot.
      bool on_knot = false;
      for (double knot : iss.knots)
        if (std::abs(t - knot) <= 1e-9 * std::max(1.0, knot)) {
          on_knot = true;
          break;
        }
      if (on_knot) continue;
      const Vec diff = lb.theta_path[i] - iss.theta_at(t);
      dist = std::max(dist, diff.cwiseAbs().maxCoeff());
    }
    report.distances.push_back(dist);
  }
  return report;
}

}  // namespace libra
