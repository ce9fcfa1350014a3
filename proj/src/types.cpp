#include "libra/types.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace libra {

Family family_from_string(const std::string& s) {
  if (s == "gaussian") return Family::gaussian;
  if (s == "binomial") return Family::binomial;
  if (s == "multinomial") return Family::multinomial;
  if (s == "ggm") return Family::ggm;
  if (s == "ising") return Family::ising;
  if (s == "potts") return Family::potts;
  throw std::invalid_argument("unknown family: " + s);
}

std::string to_string(Family f) {
  switch (f) {
    case Family::gaussian: return "gaussian";
    case Family::binomial: return "binomial";
    case Family::multinomial: return "multinomial";
    case Family::ggm: return "ggm";
    case Family::ising: return "ising";
    case Family::potts: return "potts";
  }
  return "?";
}

GroupIndex::GroupIndex(std::vector<int> labels) {
  std::map<int, int> compact;
  group_of_.reserve(labels.size());
  for (int lab : labels) {
    auto [it, inserted] = compact.try_emplace(lab, static_cast<int>(compact.size()));
    group_of_.push_back(it->second);
  }
  members_.resize(compact.size());
  for (int j = 0; j < static_cast<int>(group_of_.size()); ++j)
    members_[group_of_[j]].push_back(j);
}

GroupIndex GroupIndex::singletons(int p) {
  std::vector<int> labels(p);
  std::iota(labels.begin(), labels.end(), 0);
  return GroupIndex(std::move(labels));
}

bool GroupIndex::is_entrywise() const {
  return std::all_of(members_.begin(), members_.end(),
                     [](const auto& m) { return m.size() == 1; });
}

double GroupIndex::group_norm(const Vec& z, int g) const {
  double s = 0.0;
  for (int j : members_[g]) s += z[j] * z[j];
  return std::sqrt(s);
}

Vec GroupIndex::group_norms(const Vec& z) const {
  Vec norms(num_groups());
  for (int g = 0; g < num_groups(); ++g) norms[g] = group_norm(z, g);
  return norms;
}

void PathConfig::validate() const {
  if (!(kappa > 0.0)) throw std::invalid_argument("kappa must be positive");
  if (alpha && !(*alpha > 0.0))
    throw std::invalid_argument("alpha must be positive");
  if (nt <= 0) throw std::invalid_argument("nt must be positive");
  if (!(trate > 1.0)) throw std::invalid_argument("trate must exceed 1");
  if (tlist) {
    if (tlist->empty()) throw std::invalid_argument("tlist must be non-empty");
    for (size_t i = 0; i < tlist->size(); ++i) {
      if (!((*tlist)[i] > 0.0))
        throw std::invalid_argument("tlist entries must be positive");
      if (i > 0 && !((*tlist)[i] > (*tlist)[i - 1]))
        throw std::invalid_argument("tlist must be strictly increasing");
    }
  }
}

std::vector<int> SolutionPath::entry_order() const {
  std::vector<int> order;
  for (int g = 0; g < static_cast<int>(group_entry_time.size()); ++g)
    if (std::isfinite(group_entry_time[g])) order.push_back(g);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return group_entry_time[a] < group_entry_time[b];
  });
  return order;
}

}  // namespace libra
