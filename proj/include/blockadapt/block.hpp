#pragma once

#include <iosfwd>
#include <utility>
#include <vector>

namespace blockadapt {

/// Axis-aligned box prod_i [lo_i, hi_i] with lo_i < hi_i strictly.
class Block {
 public:
  Block(std::vector<double> lo, std::vector<double> hi);
  /// The canonical block I^d = [-1/2, 1/2]^d.
  static Block unit_cube(int d);
  /// Block centered at the origin with the given side widths.
  static Block centered(const std::vector<double>& widths);

  int dim() const { return static_cast<int>(lo_.size()); }
  const std::vector<double>& lo() const { return lo_; }
  const std::vector<double>& hi() const { return hi_; }
  double lo(int i) const { return lo_[static_cast<std::size_t>(i)]; }
  double hi(int i) const { return hi_[static_cast<std::size_t>(i)]; }
  double width(int i) const { return hi(i) - lo(i); }
  std::vector<double> widths() const;
  std::vector<double> center() const;

  double volume() const;
  double diam() const;
  /// Degeneracy measure diam(R)^d / |R|; minimal (= d^{d/2}) exactly for cubes.
  double rho() const;

  bool contains(const double* x, double tol = 0.0) const;

 private:
  std::vector<double> lo_, hi_;
};

double rho(const Block& R);

/// The affine normalization phi(x) = center + scale .* x with phi(I^d) = R.
struct BlockMap {
  std::vector<double> center;
  std::vector<double> scale;

  int dim() const { return static_cast<int>(center.size()); }
  double det() const;
  Block image() const;
  void forward(const double* in, double* out) const;
  void inverse(const double* in, double* out) const;
};

/// The unique (center, scale) with phi(I^d) = R.
BlockMap normalize(const Block& R);

/// Finite partition of a block by blocks; pairwise overlaps have zero volume.
class BlockPartition {
 public:
  BlockPartition(Block domain, std::vector<Block> cells);

  int dim() const { return domain_.dim(); }
  std::size_t size() const { return cells_.size(); }
  const Block& domain() const { return domain_; }
  const Block& cell(std::size_t i) const { return cells_[i]; }
  const std::vector<Block>& cells() const { return cells_; }
  double max_diam() const;

  /// Exact pairwise interior-overlap check on the coordinate intervals.
  /// O(#cells^2); meant for tests and debugging.
  void check_no_overlap() const;

  /// CSV dump: header then (cell_id, lo_1..lo_d, hi_1..hi_d), 17 significant
  /// digits.
  void dump_csv(std::ostream& os) const;

 private:
  Block domain_;
  std::vector<Block> cells_;
};

/// Admissibility statistic of a partition family: sup over entries of
/// N^{1/d} * max cell diameter, where N is the entry's cell budget.
/// Throws if some partition exceeds its budget.
double admissibility_stat(
    const std::vector<std::pair<long long, const BlockPartition*>>& seq);

}  // namespace blockadapt
