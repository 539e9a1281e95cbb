#include "blockadapt/block.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>

namespace blockadapt {

Block::Block(std::vector<double> lo, std::vector<double> hi)
    : lo_(std::move(lo)), hi_(std::move(hi)) {
  if (lo_.empty() || lo_.size() != hi_.size())
    throw std::invalid_argument("Block: lo/hi must be non-empty and equal-sized");
  for (std::size_t i = 0; i < lo_.size(); ++i) {
    if (!(lo_[i] < hi_[i]))
      throw std::invalid_argument("Block: requires lo < hi strictly on every axis");
    if (!std::isfinite(lo_[i]) || !std::isfinite(hi_[i]))
      throw std::invalid_argument("Block: non-finite bound");
  }
}

Block Block::unit_cube(int d) {
  return Block(std::vector<double>(static_cast<std::size_t>(d), -0.5),
               std::vector<double>(static_cast<std::size_t>(d), 0.5));
}

Block Block::centered(const std::vector<double>& widths) {
  std::vector<double> lo(widths.size()), hi(widths.size());
  for (std::size_t i = 0; i < widths.size(); ++i) {
    lo[i] = -0.5 * widths[i];
    hi[i] = 0.5 * widths[i];
  }
  return Block(std::move(lo), std::move(hi));
}

std::vector<double> Block::widths() const {
  std::vector<double> w(lo_.size());
  for (std::size_t i = 0; i < lo_.size(); ++i) w[i] = hi_[i] - lo_[i];
  return w;
}

std::vector<double> Block::center() const {
  std::vector<double> c(lo_.size());
  for (std::size_t i = 0; i < lo_.size(); ++i) c[i] = 0.5 * (lo_[i] + hi_[i]);
  return c;
}

double Block::volume() const {
  double v = 1.0;
  for (std::size_t i = 0; i < lo_.size(); ++i) v *= hi_[i] - lo_[i];
  return v;
}

double Block::diam() const {
  double s = 0.0;
  for (std::size_t i = 0; i < lo_.size(); ++i) {
    double w = hi_[i] - lo_[i];
    s += w * w;
  }
  return std::sqrt(s);
}

double Block::rho() const { return std::pow(diam(), dim()) / volume(); }

bool Block::contains(const double* x, double tol) const {
  for (std::size_t i = 0; i < lo_.size(); ++i)
    if (x[i] < lo_[i] - tol || x[i] > hi_[i] + tol) return false;
  return true;
}

double rho(const Block& R) { return R.rho(); }

double BlockMap::det() const {
  double v = 1.0;
  for (double s : scale) v *= s;
  return v;
}

Block BlockMap::image() const {
  std::vector<double> lo(center.size()), hi(center.size());
  for (std::size_t i = 0; i < center.size(); ++i) {
    lo[i] = center[i] - 0.5 * scale[i];
    hi[i] = center[i] + 0.5 * scale[i];
  }
  return Block(std::move(lo), std::move(hi));
}

void BlockMap::forward(const double* in, double* out) const {
  for (std::size_t i = 0; i < center.size(); ++i) out[i] = center[i] + scale[i] * in[i];
}

void BlockMap::inverse(const double* in, double* out) const {
  for (std::size_t i = 0; i < center.size(); ++i) out[i] = (in[i] - center[i]) / scale[i];
}

BlockMap normalize(const Block& R) {
  BlockMap m;
  m.center = R.center();
  m.scale = R.widths();
  return m;
}

BlockPartition::BlockPartition(Block domain, std::vector<Block> cells)
    : domain_(std::move(domain)), cells_(std::move(cells)) {
  if (cells_.empty()) throw std::invalid_argument("BlockPartition: no cells");
  const double dvol = domain_.volume();
  double sum = 0.0, comp = 0.0;  // Kahan
  for (const Block& c : cells_) {
    if (c.dim() != domain_.dim())
      throw std::invalid_argument("BlockPartition: cell dimension mismatch");
    for (int i = 0; i < c.dim(); ++i) {
      if (c.lo(i) < domain_.lo(i) - 1e-12 || c.hi(i) > domain_.hi(i) + 1e-12)
        throw std::invalid_argument("BlockPartition: cell leaves the domain");
    }
    double y = c.volume() - comp;
    double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  if (std::abs(sum - dvol) > 1e-10 * dvol)
    throw std::invalid_argument("BlockPartition: cell volumes do not sum to the domain volume");
}

double BlockPartition::max_diam() const {
  double m = 0.0;
  for (const Block& c : cells_) m = std::max(m, c.diam());
  return m;
}

void BlockPartition::check_no_overlap() const {
  const int d = dim();
  for (std::size_t i = 0; i < cells_.size(); ++i)
    for (std::size_t j = i + 1; j < cells_.size(); ++j) {
      bool open_overlap = true;
      for (int a = 0; a < d; ++a) {
        if (!(cells_[i].lo(a) < cells_[j].hi(a) && cells_[j].lo(a) < cells_[i].hi(a))) {
          open_overlap = false;
          break;
        }
      }
      if (open_overlap)
        throw std::runtime_error("BlockPartition: cells " + std::to_string(i) + " and " +
                                 std::to_string(j) + " overlap with positive volume");
    }
}

void BlockPartition::dump_csv(std::ostream& os) const {
  const int d = dim();
  os << "cell_id";
  for (int i = 1; i <= d; ++i) os << ",lo_" << i;
  for (int i = 1; i <= d; ++i) os << ",hi_" << i;
  os << "\n";
  char buf[64];
  for (std::size_t id = 0; id < cells_.size(); ++id) {
    os << id;
    for (int i = 0; i < d; ++i) {
      std::snprintf(buf, sizeof buf, ",%.17g", cells_[id].lo(i));
      os << buf;
    }
    for (int i = 0; i < d; ++i) {
      std::snprintf(buf, sizeof buf, ",%.17g", cells_[id].hi(i));
      os << buf;
    }
    os << "\n";
  }
}

double admissibility_stat(
    const std::vector<std::pair<long long, const BlockPartition*>>& seq) {
  if (seq.empty()) throw std::invalid_argument("admissibility_stat: empty sequence");
  double stat = 0.0;
  for (const auto& [N, part] : seq) {
    if (N < 1 || static_cast<long long>(part->size()) > N)
      throw std::invalid_argument("admissibility_stat: partition exceeds its budget N=" +
                                  std::to_string(N));
    const double d = part->dim();
    stat = std::max(stat, std::pow(static_cast<double>(N), 1.0 / d) * part->max_diam());
  }
  return stat;
}

}  // namespace blockadapt
