#pragma once

#include <Eigen/Dense>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace libra {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using IntMat = Eigen::MatrixXi;

// Thrown for malformed or degenerate input data (constant columns,
// empty classes, asymmetric covariance, ...).
class data_error : public std::runtime_error {
 public:
  explicit data_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Thrown when the iteration produces non-finite values.
class divergence_error : public std::runtime_error {
 public:
  divergence_error(const std::string& msg, long iteration, double t)
      : std::runtime_error(msg), iteration(iteration), t(t) {}
  long iteration;
  double t;
};

enum class Family { gaussian, binomial, multinomial, ggm, ising, potts };

Family family_from_string(const std::string& s);
std::string to_string(Family f);

// Disjoint partition of the penalized coefficients into groups.
// Labels are arbitrary ints; they are compacted to 0..G-1 on construction.
class GroupIndex {
 public:
  GroupIndex() = default;
  explicit GroupIndex(std::vector<int> labels);

  static GroupIndex singletons(int p);

  int size() const { return static_cast<int>(group_of_.size()); }
  int num_groups() const { return static_cast<int>(members_.size()); }
  int group_of(int j) const { return group_of_[j]; }
  const std::vector<int>& members(int g) const { return members_[g]; }
  const std::vector<std::vector<int>>& all_members() const { return members_; }

  bool is_entrywise() const;

  double group_norm(const Vec& z, int g) const;
  // Norm of each group's slice of z.
  Vec group_norms(const Vec& z) const;

 private:
  std::vector<int> group_of_;
  std::vector<std::vector<int>> members_;
};

// Everything the Bregman iteration needs besides the data.
struct PathConfig {
  double kappa = 0.0;
  std::optional<double> alpha;           // missing => default_alpha
  std::optional<std::vector<double>> tlist;
  int nt = 100;
  double trate = 100.0;
  Family family = Family::gaussian;
  bool intercept = true;
  bool normalize = false;

  void validate() const;
};

struct BregmanState {
  long k = 0;
  double t = 0.0;
  Vec z;
  Vec theta;
  Vec theta0;
};

struct SolutionPath {
  std::vector<double> times;
  std::vector<Vec> theta0_path;
  std::vector<Vec> theta_path;
  double entry_time_t0 = 0.0;
  double alpha = 0.0;
  // First time each group became nonzero along the iteration grid
  // (+inf if it never entered).
  std::vector<double> group_entry_time;

  int size() const { return static_cast<int>(times.size()); }
  // Group labels in order of first entry (groups that never enter omitted).
  std::vector<int> entry_order() const;
};

inline constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace libra
