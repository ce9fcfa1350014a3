#include "libra/simulate.hpp"

#include <cmath>
#include <random>

namespace libra {

namespace {

double uniform01(std::mt19937_64& rng) {
  return (rng() >> 11) * 0x1.0p-53;
}

// Box-Muller; keeps output independent of the standard library's
// normal_distribution implementation.
class NormalGen {
 public:
  explicit NormalGen(std::mt19937_64& rng) : rng_(rng) {}
  double operator()() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform01(rng_);
    while (u1 <= 0.0) u1 = uniform01(rng_);
    const double u2 = uniform01(rng_);
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(2.0 * M_PI * u2);
    have_spare_ = true;
    return r * std::cos(2.0 * M_PI * u2);
  }

 private:
  std::mt19937_64& rng_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

double sigmoid(double m) {
  if (m >= 0.0) return 1.0 / (1.0 + std::exp(-m));
  const double e = std::exp(m);
  return e / (1.0 + e);
}

}  // namespace

std::set<int> GridIsingSpec::edge_set() const {
  std::set<int> edges;
  const int p = num_nodes();
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      const int id = r * cols + c;
      if (c + 1 < cols) edges.insert(pair_index(id, id + 1, p));
      if (r + 1 < rows) edges.insert(pair_index(id, id + cols, p));
    }
  return edges;
}

Mat gibbs_sample_ising(const GridIsingSpec& spec) {
  if (spec.n_samples <= 0) throw std::invalid_argument("n_samples must be positive");
  if (!std::isfinite(spec.coupling))
    throw std::invalid_argument("coupling must be finite");
  const int p = spec.num_nodes();
  Vec h = spec.field.size() == 0 ? Vec::Zero(p) : spec.field;
  if (h.size() != p) throw std::invalid_argument("field length must match grid");

  // Neighbor lists of the 4-neighbor lattice.
  std::vector<std::vector<int>> nbr(p);
  for (int r = 0; r < spec.rows; ++r)
    for (int c = 0; c < spec.cols; ++c) {
      const int id = r * spec.cols + c;
      if (c + 1 < spec.cols) { nbr[id].push_back(id + 1); nbr[id + 1].push_back(id); }
      if (r + 1 < spec.rows) { nbr[id].push_back(id + spec.cols); nbr[id + spec.cols].push_back(id); }
    }

  std::mt19937_64 rng(spec.seed);
  std::vector<int> spin(p);  // +-1
  for (int v = 0; v < p; ++v) spin[v] = uniform01(rng) < 0.5 ? -1 : 1;

  auto sweep = [&] {
    for (int v = 0; v < p; ++v) {
      double m = h[v];
      for (int w : nbr[v]) m += spec.coupling * spin[w];
      spin[v] = uniform01(rng) < sigmoid(m) ? 1 : -1;
    }
  };

  for (int s = 0; s < spec.burn_in; ++s) sweep();
  Mat X(spec.n_samples, p);
  for (int i = 0; i < spec.n_samples; ++i) {
    for (int s = 0; s < std::max(1, spec.thinning); ++s) sweep();
    for (int v = 0; v < p; ++v)
      X(i, v) = spec.coding == IsingCoding::pm_one
                    ? static_cast<double>(spin[v])
                    : (spin[v] + 1) / 2.0;
  }
  return X;
}

LinearData gen_linear_data(int n, int p, int sparsity, double snr,
                           std::uint64_t seed) {
  if (sparsity > p) throw std::invalid_argument("sparsity exceeds dimension");
  std::mt19937_64 rng(seed);
  NormalGen normal(rng);
  LinearData data;
  data.X.resize(n, p);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < p; ++j) data.X(i, j) = normal();

  data.true_theta = Vec::Zero(p);
  std::vector<int> idx(p);
  for (int j = 0; j < p; ++j) idx[j] = j;
  for (int j = 0; j < sparsity; ++j) {
    const int pick = j + static_cast<int>(uniform01(rng) * (p - j));
    std::swap(idx[j], idx[std::min(pick, p - 1)]);
    data.true_theta[idx[j]] = uniform01(rng) < 0.5 ? -1.0 : 1.0;
  }

  data.y = data.X * data.true_theta;
  if (std::isfinite(snr)) {
    const double sigma = data.y.norm() / std::sqrt(n * snr);
    for (int i = 0; i < n; ++i) data.y[i] += sigma * normal();
  }
  return data;
}

RecoveryCurve support_recovery_curve(const SolutionPath& path,
                                     const std::set<int>& true_edges,
                                     double tol) {
  RecoveryCurve curve;
  curve.true_edges = true_edges;
  const int n_coef =
      path.theta_path.empty() ? 0 : static_cast<int>(path.theta_path[0].size());
  const int n_true = static_cast<int>(true_edges.size());
  const int n_non = n_coef - n_true;
  int run_start = -1;
  for (int i = 0; i < path.size(); ++i) {
    int tp = 0, fp = 0;
    for (int e = 0; e < n_coef; ++e) {
      if (std::abs(path.theta_path[i][e]) <= tol) continue;
      if (true_edges.count(e)) ++tp; else ++fp;
    }
    curve.times.push_back(path.times[i]);
    curve.tp_rate.push_back(n_true > 0 ? double(tp) / n_true : 0.0);
    curve.fp_rate.push_back(n_non > 0 ? double(fp) / n_non : 0.0);
    const bool exact = tp == n_true && fp == 0;
    if (exact && run_start < 0) run_start = i;
    if (exact) {
      const double lo = path.times[run_start], hi = path.times[i];
      if (!curve.exact_recovery || hi - lo > curve.exact_t_hi - curve.exact_t_lo) {
        curve.exact_recovery = true;
        curve.exact_t_lo = lo;
        curve.exact_t_hi = hi;
      }
    } else {
      run_start = -1;
    }
  }
  return curve;
}

}  // namespace libra
