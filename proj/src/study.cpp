#include "blockadapt/study.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace blockadapt {

std::string kind_name(PartitionKind k) {
  switch (k) {
    case PartitionKind::Uniform: return "uniform";
    case PartitionKind::AdaptiveKM: return "adaptive-km";
    case PartitionKind::AdaptiveClosedForm: return "adaptive-cf";
  }
  return "?";
}

PartitionKind kind_from_name(const std::string& s) {
  if (s == "uniform") return PartitionKind::Uniform;
  if (s == "adaptive-km") return PartitionKind::AdaptiveKM;
  if (s == "adaptive-cf") return PartitionKind::AdaptiveClosedForm;
  throw std::invalid_argument("unknown partition kind '" + s + "'");
}

double predicted_constant(const CorpusFunction& f, const ProjectionOperator& op, double p,
                          const WeightFn* weight, int quad_order) {
  if (!(p >= 1.0)) throw std::invalid_argument("predicted_constant: p must be in [1, inf]");
  const int d = f.dim;
  const int m = op.detect_k() + 1;
  const double inv_p = std::isinf(p) ? 0.0 : 1.0 / p;
  const double tau = 1.0 / (static_cast<double>(m) / d + inv_p);

  auto h = op.check_hypotheses();
  const bool closed = (m % 2 == 1) ? (h.h_pm && h.h_sigma && h.h_star)
                                   : (h.h_sigma && h.h_star && h.h_star_star);
  KOptions kopt;
  QuadratureRule rule(f.domain, quad_order);
  std::vector<double> x(static_cast<std::size_t>(d));
  double sum = 0.0, comp = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    rule.point(i, x.data());
    HomogeneousPoly pi = f.pi_at(x, m);
    double K = closed ? k_closed_form(op, pi, p, kopt).value
                      : k_numeric(op, pi, p, kopt).value;
    if (weight) K *= weight->fn(x.data());
    double term = rule.weight(i) * std::pow(K, tau);
    double y = term - comp;
    double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  return std::pow(sum, 1.0 / tau);
}

StudyResult run_study(const CorpusFunction& f, const ProjectionOperator& op, double p,
                      const std::vector<long long>& budgets, PartitionKind kind,
                      const StudyOptions& opt) {
  if (budgets.empty()) throw std::invalid_argument("run_study: no budgets");
  for (std::size_t i = 1; i < budgets.size(); ++i)
    if (budgets[i] <= budgets[i - 1])
      throw std::invalid_argument("run_study: budgets must be strictly increasing");
  const int d = f.dim;
  if (op.dim() != d) throw std::invalid_argument("run_study: operator/function dimension mismatch");
  const int m = op.detect_k() + 1;

  const double predicted = predicted_constant(f, op, p, opt.weight);

  LocalBlockSpec spec{nullptr, f.domain};
  if (kind == PartitionKind::AdaptiveClosedForm) {
    KOptions kopt;
    kopt.norms = opt.norms;
    spec = spec_from_closed_form(f, op, p, opt.weight, kopt);
  } else if (kind == PartitionKind::AdaptiveKM) {
    KOptions kopt;
    kopt.norms = opt.norms;
    spec = spec_from_km(f, op, p, opt.M, kopt);
  }

  StudyResult out;
  for (long long budget : budgets) {
    ConvergenceRecord rec;
    rec.kind = kind;
    rec.budget = budget;
    rec.predicted = predicted;
    auto measure = [&](const BlockPartition& P) {
      return f.poly ? partition_error_poly(*f.poly, op, P, p, opt.weight, opt.norms)
                    : partition_error(f.f, op, P, p, opt.weight, opt.norms);
    };
    double err = 0.0;
    if (kind == PartitionKind::Uniform) {
      int nn = std::max(1, static_cast<int>(std::floor(
                               std::pow(static_cast<double>(budget), 1.0 / d) + 1e-9)));
      BlockPartition P = uniform_partition(f.domain, nn);
      err = measure(P);
      rec.n = nn;
      rec.N = static_cast<long long>(P.size());
      rec.max_diam = P.max_diam();
    } else {
      AdaptivePartition AP = partition_for_budget(spec, budget, opt.policy);
      err = measure(AP.partition);
      rec.n = AP.n;
      rec.N = static_cast<long long>(AP.partition.size());
      rec.max_diam = AP.partition.max_diam();
    }
    rec.error = err;
    rec.scaled = std::pow(static_cast<double>(rec.N), static_cast<double>(m) / d) * err;
    rec.ratio = rec.scaled / predicted;
    out.records.push_back(rec);
    out.admissibility =
        std::max(out.admissibility,
                 std::pow(static_cast<double>(rec.N), 1.0 / d) * rec.max_diam);
  }

  // Least-squares slope of ln(error) against ln(N).
  if (out.records.size() >= 2) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    double cnt = 0;
    for (const auto& r : out.records) {
      if (!(r.error > 0.0)) continue;
      double lx = std::log(static_cast<double>(r.N)), ly = std::log(r.error);
      sx += lx;
      sy += ly;
      sxx += lx * lx;
      sxy += lx * ly;
      cnt += 1;
    }
    if (cnt >= 2 && cnt * sxx - sx * sx > 0)
      out.slope = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
  }
  return out;
}

void write_report_csv(std::ostream& os, const std::vector<ConvergenceRecord>& records) {
  std::vector<ConvergenceRecord> sorted = records;
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const ConvergenceRecord& a, const ConvergenceRecord& b) {
                     return static_cast<int>(a.kind) < static_cast<int>(b.kind);
                   });
  os << "kind,N,n,error,scaled,predicted,ratio\n";
  char buf[256];
  for (const auto& r : sorted) {
    std::snprintf(buf, sizeof buf, "%s,%lld,%d,%.17g,%.17g,%.17g,%.17g\n",
                  kind_name(r.kind).c_str(), r.N, r.n, r.error, r.scaled, r.predicted,
                  r.ratio);
    os << buf;
  }
}

std::string report_summary(const StudyResult& result) {
  std::ostringstream os;
  os.precision(12);
  std::map<int, const ConvergenceRecord*> last_by_kind;
  for (const auto& r : result.records) last_by_kind[static_cast<int>(r.kind)] = &r;
  for (const auto& [k, r] : last_by_kind) {
    os << kind_name(static_cast<PartitionKind>(k)) << ": final N = " << r->N
       << ", scaled = " << r->scaled << ", predicted = " << r->predicted
       << ", ratio = " << r->ratio << "\n";
  }
  os << "log-log slope: " << result.slope << "\n";
  os << "admissibility stat: " << result.admissibility << "\n";
  auto& cache = ConstantCache::instance();
  os << "constant cache: " << cache.storage_path() << ", hits = " << cache.hits()
     << ", misses = " << cache.misses() << "\n";
  return os.str();
}

}  // namespace blockadapt
