#include "libra/path_engine.hpp"

#include <cmath>
#include <sstream>

namespace libra {

double power_iteration_norm(const Mat& S, double tol, int max_iter) {
  const int p = static_cast<int>(S.rows());
  if (p == 0) return 0.0;
  Vec v(p);
  for (int i = 0; i < p; ++i) v[i] = 1.0 + 0.01 * i;  // break symmetry
  v.normalize();
  double lambda = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    Vec w = S * v;
    double nw = w.norm();
    if (nw == 0.0) return 0.0;
    v = w / nw;
    double next = v.dot(S * v);
    if (std::abs(next - lambda) <= tol * std::max(1.0, std::abs(next))) {
      return next;
    }
    lambda = next;
  }
  return lambda;
}

Vec shrinkage(const Vec& z, const GroupIndex& groups) {
  if (z.size() != groups.size())
    throw std::invalid_argument("shrinkage: length of z (" +
                                std::to_string(z.size()) +
                                ") does not match group index (" +
                                std::to_string(groups.size()) + ")");
  Vec theta = Vec::Zero(z.size());
  for (int g = 0; g < groups.num_groups(); ++g) {
    const double norm = groups.group_norm(z, g);
    if (norm > 1.0) {
      const double factor = 1.0 - 1.0 / norm;
      for (int j : groups.members(g)) theta[j] = factor * z[j];
    }
  }
  return theta;
}

FirstEntry first_entry_time(const LossModel& model, const GroupIndex& groups) {
  if (groups.size() != model.penalized_dim())
    throw std::invalid_argument("group index does not match penalized dimension");
  FirstEntry fe;
  fe.theta0_init = model.init_unpenalized();
  Vec g0(model.unpenalized_dim());
  fe.null_gradient.resize(model.penalized_dim());
  model.loss_grad(fe.theta0_init, Vec::Zero(model.penalized_dim()), g0,
                  fe.null_gradient);
  const double gmax = groups.group_norms(fe.null_gradient).maxCoeff();
  if (!(gmax > 1e-14))
    throw data_error(
        "degenerate problem: gradient at the null model is zero, "
        "no variable ever enters");
  fe.t0 = 1.0 / gmax;
  fe.z0 = -fe.t0 * fe.null_gradient;
  return fe;
}

double default_alpha(const LossModel& model, double kappa) {
  if (!(kappa > 0.0)) throw std::invalid_argument("kappa must be positive");
  return 1.0 / (kappa * model.curvature_bound());
}

std::vector<double> resolve_tlist(double t0, const PathConfig& config) {
  if (config.tlist) return *config.tlist;
  if (!(t0 > 0.0)) throw std::invalid_argument("t0 must be positive");
  std::vector<double> tlist(config.nt);
  if (config.nt == 1) {
    tlist[0] = t0;
    return tlist;
  }
  const double ratio = std::pow(config.trate, 1.0 / (config.nt - 1));
  for (int i = 0; i < config.nt; ++i) tlist[i] = t0 * std::pow(ratio, i);
  return tlist;
}

namespace {

// Linear interpolation in (z, theta0) between two grid iterates; theta is
// re-shrunk from the interpolated z.
void snapshot_between(const BregmanState& a, const BregmanState& b, double t,
                      double kappa, const GroupIndex& groups,
                      SolutionPath& out) {
  out.times.push_back(t);
  if (t == a.t) {
    out.theta0_path.push_back(a.theta0);
    out.theta_path.push_back(a.theta);
    return;
  }
  if (t == b.t) {
    out.theta0_path.push_back(b.theta0);
    out.theta_path.push_back(b.theta);
    return;
  }
  const double w = (t - a.t) / (b.t - a.t);
  Vec z = (1.0 - w) * a.z + w * b.z;
  out.theta0_path.push_back((1.0 - w) * a.theta0 + w * b.theta0);
  out.theta_path.push_back(kappa * shrinkage(z, groups));
}

void record_entries(const BregmanState& s, const GroupIndex& groups,
                    std::vector<double>& entry_time) {
  for (int g = 0; g < groups.num_groups(); ++g) {
    if (std::isfinite(entry_time[g])) continue;
    for (int j : groups.members(g)) {
      if (s.theta[j] != 0.0) {
        entry_time[g] = s.t;
        break;
      }
    }
  }
}

}  // namespace

SolutionPath run_lb(const LossModel& model, const GroupIndex& groups,
                    const PathConfig& config) {
  config.validate();
  const FirstEntry fe = first_entry_time(model, groups);
  const double kappa = config.kappa;
  const double alpha = config.alpha ? *config.alpha : default_alpha(model, kappa);
  const std::vector<double> tlist = resolve_tlist(fe.t0, config);
  const double t_max = tlist.back();

  SolutionPath out;
  out.entry_time_t0 = fe.t0;
  out.alpha = alpha;
  out.group_entry_time.assign(groups.num_groups(), kInf);

  BregmanState cur;
  cur.k = 0;
  cur.t = fe.t0;
  cur.z = fe.z0;
  cur.theta = kappa * shrinkage(fe.z0, groups);
  cur.theta0 = fe.theta0_init;

  size_t next_t = 0;
  // Points at or before t0: the path is still the null model, z = -t*g.
  while (next_t < tlist.size() && tlist[next_t] <= cur.t) {
    out.times.push_back(tlist[next_t]);
    out.theta0_path.push_back(cur.theta0);
    out.theta_path.push_back(Vec::Zero(groups.size()));
    ++next_t;
  }
  record_entries(cur, groups, out.group_entry_time);

  Vec g0(model.unpenalized_dim()), g(model.penalized_dim());
  const long k_cap = static_cast<long>((t_max - fe.t0) / alpha) + 2;
  while (cur.t < t_max) {
    const double loss = model.loss_grad(cur.theta0, cur.theta, g0, g);
    if (!std::isfinite(loss) || !g.allFinite() || !g0.allFinite()) {
      std::ostringstream msg;
      msg << "non-finite loss or gradient at iteration " << cur.k
          << ", t = " << cur.t << " (try a smaller alpha)";
      throw divergence_error(msg.str(), cur.k, cur.t);
    }
    BregmanState next;
    next.k = cur.k + 1;
    next.z = cur.z - alpha * g;
    next.theta = kappa * shrinkage(next.z, groups);
    next.theta0 = cur.theta0 - kappa * alpha * g0;
    next.t = fe.t0 + next.k * alpha;

    while (next_t < tlist.size() && tlist[next_t] <= next.t) {
      snapshot_between(cur, next, tlist[next_t], kappa, groups, out);
      ++next_t;
    }
    record_entries(next, groups, out.group_entry_time);
    cur = std::move(next);
    if (cur.k > k_cap) break;  // unreachable unless t bookkeeping breaks
  }
  return out;
}

SolutionPath interpolate_path(const std::vector<BregmanState>& iterates,
                              const std::vector<double>& tlist, double kappa,
                              const GroupIndex& groups) {
  if (iterates.empty()) throw std::invalid_argument("no iterates");
  SolutionPath out;
  out.entry_time_t0 = iterates.front().t;
  out.group_entry_time.assign(groups.num_groups(), kInf);
  size_t seg = 0;
  for (double t : tlist) {
    if (t < iterates.front().t || t > iterates.back().t)
      throw std::out_of_range("tlist entry " + std::to_string(t) +
                              " outside covered range [" +
                              std::to_string(iterates.front().t) + ", " +
                              std::to_string(iterates.back().t) + "]");
    while (seg + 1 < iterates.size() && iterates[seg + 1].t < t) ++seg;
    const BregmanState& a = iterates[seg];
    const BregmanState& b = iterates[std::min(seg + 1, iterates.size() - 1)];
    snapshot_between(a, b, t, kappa, groups, out);
  }
  for (const BregmanState& s : iterates)
    record_entries(s, groups, out.group_entry_time);
  return out;
}

}  // namespace libra
