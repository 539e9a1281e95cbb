#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "blockadapt/adapt.hpp"
#include "blockadapt/corpus.hpp"
#include "blockadapt/kfun.hpp"
#include "blockadapt/norms.hpp"
#include "blockadapt/operator.hpp"

namespace blockadapt {

enum class PartitionKind { Uniform, AdaptiveKM, AdaptiveClosedForm };

std::string kind_name(PartitionKind k);
PartitionKind kind_from_name(const std::string& s);

/// One convergence row. N is the attained cell count of the built partition
/// (at most the requested budget); scaled = N^{m/d} * error.
struct ConvergenceRecord {
  PartitionKind kind = PartitionKind::Uniform;
  long long budget = 0;
  long long N = 0;
  int n = 0;
  double error = 0.0;
  double scaled = 0.0;
  double predicted = 0.0;
  double ratio = 0.0;
  double max_diam = 0.0;
};

/// The sharp-constant target: L_tau(R0, [Omega]) quasi-norm of
/// x -> K(pi_x), with 1/tau = m/d + 1/p. tau < 1 integrates K^tau directly.
double predicted_constant(const CorpusFunction& f, const ProjectionOperator& op, double p,
                          const WeightFn* weight = nullptr, int quad_order = 20);

struct StudyOptions {
  double M = 8.0;
  TilePolicy policy = TilePolicy::Fit;
  const WeightFn* weight = nullptr;
  NormOptions norms;
};

struct StudyResult {
  std::vector<ConvergenceRecord> records;
  double admissibility = 0.0;
  double slope = 0.0;  // log-log slope of error against N
};

/// Runs one convergence study over increasing budgets.
StudyResult run_study(const CorpusFunction& f, const ProjectionOperator& op, double p,
                      const std::vector<long long>& budgets, PartitionKind kind,
                      const StudyOptions& opt = {});

/// CSV with columns kind,N,n,error,scaled,predicted,ratio; rows grouped by
/// kind in stable order. 17 significant digits throughout.
void write_report_csv(std::ostream& os, const std::vector<ConvergenceRecord>& records);

/// Plain-text summary: per-kind final ratio, slope and the constant-cache
/// location.
std::string report_summary(const StudyResult& result);

}  // namespace blockadapt
