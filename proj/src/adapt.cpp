#include "blockadapt/adapt.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>

#include "blockadapt/parallel.hpp"

namespace blockadapt {

double LocalBlockSpec::validate(int pts_per_axis) {
  const int d = domain.dim();
  std::size_t total = 1;
  for (int i = 0; i < d; ++i) total *= static_cast<std::size_t>(pts_per_axis);
  std::vector<double> x(static_cast<std::size_t>(d));
  double sup = 0.0;
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t rest = idx;
    for (int a = d - 1; a >= 0; --a) {
      std::size_t j = rest % static_cast<std::size_t>(pts_per_axis);
      rest /= static_cast<std::size_t>(pts_per_axis);
      x[static_cast<std::size_t>(a)] =
          domain.lo(a) + domain.width(a) * static_cast<double>(j) / (pts_per_axis - 1);
    }
    Block b = shape(x.data());
    if (!(b.volume() > 0.0))
      throw std::runtime_error("LocalBlockSpec: non-positive volume at a sample point");
    sup = std::max(sup, b.diam());
  }
  recorded_sup_diam = sup;
  return sup;
}

BlockPartition uniform_partition(const Block& R0, int n) {
  if (n < 1) throw std::invalid_argument("uniform_partition: n must be >= 1");
  const int d = R0.dim();
  std::vector<std::vector<double>> edges(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) {
    auto& e = edges[static_cast<std::size_t>(i)];
    e.resize(static_cast<std::size_t>(n) + 1);
    for (int j = 0; j <= n; ++j)
      e[static_cast<std::size_t>(j)] =
          R0.lo(i) + R0.width(i) * static_cast<double>(j) / n;
    e.front() = R0.lo(i);
    e.back() = R0.hi(i);
  }
  std::size_t total = 1;
  for (int i = 0; i < d; ++i) total *= static_cast<std::size_t>(n);
  std::vector<Block> cells;
  cells.reserve(total);
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::vector<double> lo(static_cast<std::size_t>(d)), hi(static_cast<std::size_t>(d));
    std::size_t rest = idx;
    for (int a = d - 1; a >= 0; --a) {
      std::size_t j = rest % static_cast<std::size_t>(n);
      rest /= static_cast<std::size_t>(n);
      lo[static_cast<std::size_t>(a)] = edges[static_cast<std::size_t>(a)][j];
      hi[static_cast<std::size_t>(a)] = edges[static_cast<std::size_t>(a)][j + 1];
    }
    cells.emplace_back(std::move(lo), std::move(hi));
  }
  return BlockPartition(R0, std::move(cells));
}

namespace {

struct AxisInterval {
  double lo, hi;
  bool whole;  // exact (or fitted) tile vs clipped fragment
};

// Slice one coarse-cell axis [lo, hi] by tiles of width w.
std::vector<AxisInterval> slice_axis(double lo, double hi, double w, TilePolicy policy,
                                     double thin, double* stretch) {
  const double side = hi - lo;
  std::vector<AxisInterval> out;
  if (policy == TilePolicy::Fit) {
    const long long c = std::max<long long>(1, std::llround(side / w));
    *stretch = std::max(*stretch, std::abs(side / (static_cast<double>(c) * w) - 1.0));
    for (long long j = 0; j < c; ++j) {
      double a = lo + side * static_cast<double>(j) / static_cast<double>(c);
      double b = (j + 1 == c) ? hi : lo + side * static_cast<double>(j + 1) / static_cast<double>(c);
      out.push_back({a, b, true});
    }
    return out;
  }
  long long c = static_cast<long long>(std::floor(side / w + 1e-9));
  if (c < 1) {
    out.push_back({lo, hi, false});  // tile wider than the cell: one fragment
    return out;
  }
  double rem = side - static_cast<double>(c) * w;
  if (rem <= thin) {
    // Exact fit: translates snapped to the cell boundary.
    for (long long j = 0; j < c; ++j) {
      double a = lo + static_cast<double>(j) * w;
      double b = (j + 1 == c) ? hi : lo + static_cast<double>(j + 1) * w;
      out.push_back({a, b, true});
    }
    return out;
  }
  // Whole-tile run centered in the cell, equal clipped fragments at both ends.
  const double off = 0.5 * rem;
  if (off > thin) out.push_back({lo, lo + off, false});
  for (long long j = 0; j < c; ++j) {
    double a = lo + off + static_cast<double>(j) * w;
    double b = (j + 1 == c) ? hi - off : lo + off + static_cast<double>(j + 1) * w;
    out.push_back({a, b, true});
  }
  if (off > thin) out.push_back({hi - off, hi, false});
  return out;
}

struct QCells {
  std::vector<Block> cells;
  std::vector<bool> is_part1;
  double stretch = 0.0;
};

QCells tile_coarse_cell(const Block& Q, const Block& shape, int n, TilePolicy policy,
                        double thin) {
  const int d = Q.dim();
  const int g = std::max(1, static_cast<int>(std::floor(std::log(static_cast<double>(n)))));
  const double scale = 1.0 / (static_cast<double>(n) * static_cast<double>(n));

  QCells out;
  std::vector<std::vector<AxisInterval>> axes(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) {
    double w = shape.width(i) * scale;
    axes[static_cast<std::size_t>(i)] =
        slice_axis(Q.lo(i), Q.hi(i), w, policy, thin, &out.stretch);
  }

  std::size_t total = 1;
  for (int i = 0; i < d; ++i) total *= axes[static_cast<std::size_t>(i)].size();
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::vector<const AxisInterval*> iv(static_cast<std::size_t>(d));
    std::size_t rest = idx;
    bool whole = true;
    for (int a = d - 1; a >= 0; --a) {
      const auto& list = axes[static_cast<std::size_t>(a)];
      iv[static_cast<std::size_t>(a)] = &list[rest % list.size()];
      rest /= list.size();
      whole = whole && iv[static_cast<std::size_t>(a)]->whole;
    }
    if (whole) {
      std::vector<double> lo(static_cast<std::size_t>(d)), hi(static_cast<std::size_t>(d));
      for (int a = 0; a < d; ++a) {
        lo[static_cast<std::size_t>(a)] = iv[static_cast<std::size_t>(a)]->lo;
        hi[static_cast<std::size_t>(a)] = iv[static_cast<std::size_t>(a)]->hi;
      }
      out.cells.emplace_back(std::move(lo), std::move(hi));
      out.is_part1.push_back(true);
    } else {
      // Clipped fragment: subdivide into g equal pieces per axis.
      std::size_t pieces = 1;
      for (int a = 0; a < d; ++a) pieces *= static_cast<std::size_t>(g);
      for (std::size_t pidx = 0; pidx < pieces; ++pidx) {
        std::vector<double> lo(static_cast<std::size_t>(d)), hi(static_cast<std::size_t>(d));
        std::size_t prest = pidx;
        for (int a = d - 1; a >= 0; --a) {
          std::size_t j = prest % static_cast<std::size_t>(g);
          prest /= static_cast<std::size_t>(g);
          const AxisInterval* v = iv[static_cast<std::size_t>(a)];
          double width = (v->hi - v->lo) / g;
          lo[static_cast<std::size_t>(a)] = v->lo + width * static_cast<double>(j);
          hi[static_cast<std::size_t>(a)] =
              (j + 1 == static_cast<std::size_t>(g)) ? v->hi : v->lo + width * static_cast<double>(j + 1);
        }
        out.cells.emplace_back(std::move(lo), std::move(hi));
        out.is_part1.push_back(false);
      }
    }
  }
  return out;
}

}  // namespace

AdaptivePartition build_adaptive(const LocalBlockSpec& spec, int n, TilePolicy policy) {
  if (n < 2) throw std::invalid_argument("build_adaptive: n must be >= 2");
  const Block& R0 = spec.domain;
  const double thin = 1e-14 * R0.diam();

  BlockPartition coarse = uniform_partition(R0, n);
  const std::size_t nq = coarse.size();

  std::vector<QCells> per_q(nq);
  std::vector<std::vector<double>> centers(nq);
  std::vector<std::string> failures(nq);
  parallel_for(nq, [&](std::size_t qi) {
    const Block& Q = coarse.cell(qi);
    centers[qi] = Q.center();
    try {
      Block shape = spec.shape(centers[qi].data());
      per_q[qi] = tile_coarse_cell(Q, shape, n, policy, thin);
    } catch (const std::exception& e) {
      failures[qi] = e.what();
    }
  });
  for (std::size_t qi = 0; qi < nq; ++qi)
    if (!failures[qi].empty())
      throw std::runtime_error("build_adaptive: specification failed on coarse cell " +
                               std::to_string(qi) + ": " + failures[qi]);

  AdaptivePartition out{BlockPartition(R0, [&] {
                          std::vector<Block> all;
                          std::size_t total = 0;
                          for (const auto& q : per_q) total += q.cells.size();
                          all.reserve(total);
                          for (const auto& q : per_q)
                            for (const Block& b : q.cells) all.push_back(b);
                          return all;
                        }()),
                        {},
                        {},
                        n,
                        policy,
                        {},
                        std::move(centers),
                        0.0,
                        0.0,
                        0.0};
  std::size_t id = 0;
  for (std::size_t qi = 0; qi < nq; ++qi) {
    out.max_stretch = std::max(out.max_stretch, per_q[qi].stretch);
    for (std::size_t c = 0; c < per_q[qi].cells.size(); ++c, ++id) {
      out.owner.push_back(qi);
      const double dm = out.partition.cell(id).diam();
      if (per_q[qi].is_part1[c]) {
        out.part1.push_back(id);
        out.part1_max_diam = std::max(out.part1_max_diam, dm);
      } else {
        out.part2.push_back(id);
        out.part2_max_diam = std::max(out.part2_max_diam, dm);
      }
    }
  }
  return out;
}

AdaptivePartition partition_for_budget(const LocalBlockSpec& spec, long long N,
                                       TilePolicy policy) {
  AdaptivePartition current = build_adaptive(spec, 2, policy);
  if (static_cast<long long>(current.partition.size()) > N)
    throw std::invalid_argument("partition_for_budget: budget " + std::to_string(N) +
                                " is below the P_2 cell count " +
                                std::to_string(current.partition.size()));
  for (int n = 3; n <= 8192; ++n) {
    AdaptivePartition next = build_adaptive(spec, n, policy);
    if (static_cast<long long>(next.partition.size()) > N) return current;
    current = std::move(next);
  }
  throw std::runtime_error("partition_for_budget: construction index limit reached");
}

LocalBlockSpec spec_from_km(const CorpusFunction& f, const ProjectionOperator& op,
                            double p, double M, const KOptions& opt) {
  const int d = f.dim;
  if (M < std::sqrt(static_cast<double>(d)))
    throw std::invalid_argument("spec_from_km: M must be >= sqrt(d)");
  const int m = op.detect_k() + 1;
  const double inv_p = std::isinf(p) ? 0.0 : 1.0 / p;
  const double tau = 1.0 / (static_cast<double>(m) / d + inv_p);

  auto memo = std::make_shared<std::map<std::vector<double>, Block>>();
  auto mtx = std::make_shared<std::mutex>();
  ProjectionOperator op_copy = op;
  CorpusFunction f_copy = f;

  LocalBlockSpec spec{
      [memo, mtx, op_copy, f_copy, p, M, opt, m, tau, d](const double* x) {
        std::vector<double> key(x, x + d);
        {
          std::lock_guard<std::mutex> lock(*mtx);
          auto it = memo->find(key);
          if (it != memo->end()) return it->second;
        }
        HomogeneousPoly pi = f_copy.pi_at(key, m);
        KResult r = k_modified(op_copy, pi, p, M, opt);
        const double factor = std::pow(r.value + 1.0 / M, -tau / d);
        std::vector<double> widths(static_cast<std::size_t>(d));
        for (int i = 0; i < d; ++i)
          widths[static_cast<std::size_t>(i)] = factor * r.scales[static_cast<std::size_t>(i)];
        Block b = Block::centered(widths);
        std::lock_guard<std::mutex> lock(*mtx);
        memo->emplace(std::move(key), b);
        return b;
      },
      f.domain};
  return spec;
}

LocalBlockSpec spec_from_closed_form(const CorpusFunction& f, const ProjectionOperator& op,
                                     double p, const WeightFn* weight, const KOptions& opt) {
  const int d = f.dim;
  const int m = op.detect_k() + 1;
  const double inv_p = std::isinf(p) ? 0.0 : 1.0 / p;
  const double tau = 1.0 / (static_cast<double>(m) / d + inv_p);

  // Precondition scan: K positive and pure-power signs constant over the
  // sample grid.
  const int pts = 33;
  std::size_t total = 1;
  for (int i = 0; i < d; ++i) total *= static_cast<std::size_t>(pts);
  std::vector<double> x(static_cast<std::size_t>(d));
  std::vector<int> signs;
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t rest = idx;
    for (int a = d - 1; a >= 0; --a) {
      std::size_t j = rest % static_cast<std::size_t>(pts);
      rest /= static_cast<std::size_t>(pts);
      x[static_cast<std::size_t>(a)] =
          f.domain.lo(a) + f.domain.width(a) * static_cast<double>(j) / (pts - 1);
    }
    HomogeneousPoly pi = f.pi_at(x, m);
    KResult r = k_closed_form(op, pi, p, opt);
    if (!(r.value > 1e-10))
      throw std::runtime_error(
          "spec_from_closed_form: K vanishes on the domain; use spec_from_km");
    std::vector<double> lambda = pi.pure_power_coeffs();
    std::vector<int> s(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) {
      if (lambda[static_cast<std::size_t>(i)] == 0.0)
        throw std::runtime_error(
            "spec_from_closed_form: pure-power coefficient vanishes; use spec_from_km");
      s[static_cast<std::size_t>(i)] = lambda[static_cast<std::size_t>(i)] > 0.0 ? 1 : -1;
    }
    if (signs.empty())
      signs = s;
    else if (signs != s)
      throw std::runtime_error(
          "spec_from_closed_form: pure-power sign pattern changes; use spec_from_km");
  }

  // Reference block R_eps for the signature polynomial; the unit cube when
  // the numeric minimizer sits at D = (1, ..., 1).
  Polynomial pe(d);
  for (int i = 0; i < d; ++i) {
    std::vector<int> e(static_cast<std::size_t>(d), 0);
    e[static_cast<std::size_t>(i)] = m;
    pe.add(MultiIndex(e), static_cast<double>(signs[static_cast<std::size_t>(i)]));
  }
  KResult re = k_numeric(op, HomogeneousPoly(pe, m), p, opt);
  std::vector<double> ref_widths(static_cast<std::size_t>(d), 1.0);
  bool at_cube = true;
  for (double s : re.scales) at_cube = at_cube && std::abs(s - 1.0) <= 1e-3;
  if (!at_cube) ref_widths = re.scales;

  ProjectionOperator op_copy = op;
  CorpusFunction f_copy = f;
  WeightFn w_copy = weight ? *weight : WeightFn{};
  const bool has_w = weight != nullptr;

  LocalBlockSpec spec{
      [op_copy, f_copy, p, opt, m, tau, d, ref_widths, has_w, w_copy](const double* x) {
        std::vector<double> pos(x, x + d);
        HomogeneousPoly pi = f_copy.pi_at(pos, m);
        KResult r = k_closed_form(op_copy, pi, p, opt);
        std::vector<double> lambda = pi.pure_power_coeffs();
        double det = 1.0;
        for (double l : lambda) det *= std::abs(l);
        const double fac = std::pow(det, 1.0 / (static_cast<double>(m) * d));
        double scale = std::pow(r.value, -tau / d);
        if (has_w) scale *= std::pow(w_copy.fn(x), -tau / d);
        std::vector<double> widths(static_cast<std::size_t>(d));
        for (int i = 0; i < d; ++i)
          widths[static_cast<std::size_t>(i)] =
              scale * fac *
              std::pow(std::abs(lambda[static_cast<std::size_t>(i)]), -1.0 / m) *
              ref_widths[static_cast<std::size_t>(i)];
        return Block::centered(widths);
      },
      f.domain};
  return spec;
}

}  // namespace blockadapt
