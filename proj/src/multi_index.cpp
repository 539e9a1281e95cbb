#include "blockadapt/multi_index.hpp"

#include <algorithm>
#include <stdexcept>

namespace blockadapt {

MultiIndex::MultiIndex(std::vector<int> entries) : e_(std::move(entries)) {
  if (e_.empty()) throw std::invalid_argument("MultiIndex: dimension must be >= 1");
  for (int v : e_)
    if (v < 0) throw std::invalid_argument("MultiIndex: entries must be non-negative");
}

MultiIndex MultiIndex::zeros(int dim) {
  return MultiIndex(std::vector<int>(static_cast<std::size_t>(dim), 0));
}

int MultiIndex::order() const {
  int s = 0;
  for (int v : e_) s += v;
  return s;
}

double MultiIndex::factorial() const {
  double f = 1.0;
  for (int v : e_)
    for (int j = 2; j <= v; ++j) f *= j;
  return f;
}

int MultiIndex::maxdeg() const { return *std::max_element(e_.begin(), e_.end()); }

bool MultiIndex::operator<(const MultiIndex& o) const {
  return std::lexicographical_compare(e_.begin(), e_.end(), o.e_.begin(), o.e_.end());
}

std::string MultiIndex::str() const {
  std::string s = "(";
  for (std::size_t i = 0; i < e_.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(e_[i]);
  }
  return s + ")";
}

}  // namespace blockadapt
