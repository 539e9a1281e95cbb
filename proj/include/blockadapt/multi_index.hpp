#pragma once

#include <string>
#include <vector>

namespace blockadapt {

/// A d-vector of non-negative integer exponents (alpha_1, ..., alpha_d).
class MultiIndex {
 public:
  explicit MultiIndex(std::vector<int> entries);
  static MultiIndex zeros(int dim);

  int dim() const { return static_cast<int>(e_.size()); }
  int operator[](int i) const { return e_[static_cast<std::size_t>(i)]; }
  const std::vector<int>& entries() const { return e_; }

  /// |alpha| = sum of entries.
  int order() const;
  /// alpha! = product of entry factorials (exact for the orders used here).
  double factorial() const;
  /// max(alpha).
  int maxdeg() const;

  bool operator==(const MultiIndex& o) const { return e_ == o.e_; }
  bool operator!=(const MultiIndex& o) const { return e_ != o.e_; }
  /// Lexicographic order; fixes all term-map iteration orders.
  bool operator<(const MultiIndex& o) const;

  std::string str() const;

 private:
  std::vector<int> e_;
};

}  // namespace blockadapt
