#pragma once

#include <cstdint>
#include <set>

#include "libra/graphical.hpp"
#include "libra/types.hpp"

namespace libra {

struct GridIsingSpec {
  int rows = 10;
  int cols = 10;
  double coupling = 2.0 / 2.3;  // J on 4-neighbor grid edges
  Vec field;                    // h per node; empty => zeros
  int n_samples = 5000;
  int burn_in = 1000;           // sweeps discarded
  int thinning = 10;            // sweeps between kept samples
  std::uint64_t seed = 0;
  IsingCoding coding = IsingCoding::zero_one;

  int num_nodes() const { return rows * cols; }
  // 4-neighbor lattice edges as upper-triangle pair indices
  // (row-major node ids).
  std::set<int> edge_set() const;
};

// Systematic-scan Gibbs sampler for the (h, J) Ising model on the grid.
// Deterministic for a fixed spec.
Mat gibbs_sample_ising(const GridIsingSpec& spec);

struct LinearData {
  Mat X;
  Vec y;
  Vec true_theta;
};

// Gaussian design, s-sparse +-1 signal, noise scaled to the requested
// signal-to-noise ratio (snr = inf => noiseless). Deterministic per seed.
LinearData gen_linear_data(int n, int p, int sparsity, double snr,
                           std::uint64_t seed);

struct RecoveryCurve {
  std::vector<double> times;
  std::vector<double> tp_rate;
  std::vector<double> fp_rate;
  std::set<int> true_edges;
  // Largest t-interval with TP = 1, FP = 0 (empty if none).
  bool exact_recovery = false;
  double exact_t_lo = 0.0, exact_t_hi = 0.0;
};

// Support recovery along a path whose penalized coefficients are edge
// indicators (upper-triangle pair indexing over num_coef entries).
RecoveryCurve support_recovery_curve(const SolutionPath& path,
                                     const std::set<int>& true_edges,
                                     double tol = 1e-10);

}  // namespace libra
