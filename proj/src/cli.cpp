#include "blockadapt/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "blockadapt/adapt.hpp"
#include "blockadapt/config.hpp"
#include "blockadapt/corpus.hpp"
#include "blockadapt/kfun.hpp"
#include "blockadapt/parallel.hpp"
#include "blockadapt/study.hpp"

namespace blockadapt {

namespace {

double parse_p(const std::string& s) {
  if (s == "inf" || s == "Inf" || s == "infinity") return kInfinity;
  double v = std::stod(s);
  if (!(v >= 1.0)) throw std::invalid_argument("p must be in [1, inf]");
  return v;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string p_label(double p) { return std::isinf(p) ? "inf" : fmt(p); }

// "c e1 .. ed; c e1 .. ed" -> polynomial terms.
Polynomial parse_poly(const std::string& text, int d) {
  Polynomial poly(d);
  std::stringstream terms(text);
  std::string term;
  bool any = false;
  while (std::getline(terms, term, ';')) {
    std::stringstream ts(term);
    double c;
    if (!(ts >> c)) continue;
    std::vector<int> e(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i)
      if (!(ts >> e[static_cast<std::size_t>(i)]))
        throw std::invalid_argument("--poly: each term needs a coefficient and " +
                                    std::to_string(d) + " exponents");
    poly.add(MultiIndex(e), c);
    any = true;
  }
  if (!any) throw std::invalid_argument("--poly: no terms parsed");
  return poly;
}

std::vector<long long> parse_budgets(const std::string& text) {
  std::vector<long long> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) v.push_back(std::stoll(item));
  if (v.empty()) throw std::invalid_argument("--budgets: empty list");
  return v;
}

TilePolicy parse_policy(const std::string& s) {
  if (s == "clip") return TilePolicy::Clip;
  if (s == "fit") return TilePolicy::Fit;
  throw std::invalid_argument("--policy must be clip or fit");
}

std::string operator_descriptor_from_config(const OperatorConfig& oc, int d) {
  std::ostringstream os;
  if (oc.variant == "l2")
    os << "l2:" << oc.space;
  else
    os << oc.variant << ":" << oc.nodes;
  os << ":k=" << oc.k << ":d=" << d;
  return os.str();
}

int cmd_constants(const std::string& op_desc, const std::string& p_str) {
  ProjectionOperator op = ProjectionOperator::from_descriptor(op_desc);
  const double p = parse_p(p_str);
  const int m = op.detect_k() + 1;
  if (m % 2 == 1) {
    std::cout << "C(" << p_label(p) << ") = " << fmt(c_odd(op, p)) << "\n";
  } else {
    for (int s = 0; s <= op.dim(); ++s)
      std::cout << "C(" << p_label(p) << "," << s << ") = " << fmt(c_even(op, p, s))
                << "\n";
  }
  return 0;
}

int cmd_kfun(const std::string& op_desc, const std::string& p_str,
             const std::string& poly_str, double M, bool closed) {
  ProjectionOperator op = ProjectionOperator::from_descriptor(op_desc);
  const double p = parse_p(p_str);
  const int m = op.detect_k() + 1;
  HomogeneousPoly pi(parse_poly(poly_str, op.dim()), m);
  KResult r;
  if (closed)
    r = k_closed_form(op, pi, p);
  else if (M > 0.0)
    r = k_modified(op, pi, p, M);
  else
    r = k_numeric(op, pi, p);
  std::cout << fmt(r.value) << ","
            << (r.method == KMethod::ClosedForm ? "closed-form" : "numeric");
  if (r.degenerate) {
    for (int i = 0; i < op.dim(); ++i) std::cout << ",degenerate";
  } else {
    for (double s : r.scales) std::cout << "," << fmt(s);
  }
  std::cout << "," << signature(pi) << "," << fmt(k_star(pi)) << "\n";
  return 0;
}

int cmd_verify(const std::string& op_desc) {
  ProjectionOperator op = ProjectionOperator::from_descriptor(op_desc);
  std::cout << "operator: " << op.descriptor() << "\n";
  std::cout << "k = " << op.detect_k() << "\n";
  auto h = op.check_hypotheses();
  auto b = [](bool v) { return v ? "true" : "false"; };
  std::cout << "H_pm = " << b(h.h_pm) << "\n";
  std::cout << "H_sigma = " << b(h.h_sigma) << "\n";
  std::cout << "H_star = " << b(h.h_star) << "\n";
  std::cout << "H_starstar = " << b(h.h_star_star) << "\n";
  std::cout << "operator_norm_estimate = " << fmt(op.operator_norm_estimate()) << "\n";
  return 0;
}

LocalBlockSpec spec_from_flags(const std::string& spec_str, const std::string& fn,
                               const std::string& op_desc, const std::string& p_str,
                               double M) {
  if (spec_str == "cube") {
    Block dom({0.0, 0.0}, {1.0, 1.0});
    return LocalBlockSpec{[](const double*) { return Block::unit_cube(2); }, dom};
  }
  if (spec_str.rfind("const:", 0) == 0) {
    std::vector<double> widths;
    std::stringstream ss(spec_str.substr(6));
    std::string item;
    while (std::getline(ss, item, ',')) widths.push_back(std::stod(item));
    Block shape = Block::centered(widths);
    std::vector<double> lo(widths.size(), 0.0), hi(widths.size(), 1.0);
    Block dom(lo, hi);
    return LocalBlockSpec{[shape](const double*) { return shape; }, dom};
  }
  const CorpusFunction& f = corpus_function(fn);
  ProjectionOperator op = ProjectionOperator::from_descriptor(op_desc);
  const double p = parse_p(p_str);
  if (spec_str == "cf") return spec_from_closed_form(f, op, p);
  if (spec_str == "km") return spec_from_km(f, op, p, M);
  throw std::invalid_argument("--spec must be cube, const:w1[,w2..], cf or km");
}

int cmd_partition(const std::string& spec_str, const std::string& fn,
                  const std::string& op_desc, const std::string& p_str, double M, int n,
                  const std::string& policy_str, const std::string& out_path) {
  LocalBlockSpec spec = spec_from_flags(spec_str, fn, op_desc, p_str, M);
  AdaptivePartition ap = build_adaptive(spec, n, parse_policy(policy_str));
  std::ostringstream os;
  ap.partition.dump_csv(os);
  const double n2d2 = static_cast<double>(n) * n * ap.part2_max_diam;
  const double adm = std::pow(static_cast<double>(ap.partition.size()),
                              1.0 / ap.partition.dim()) *
                     ap.partition.max_diam();
  os << "stats," << ap.n << "," << ap.part1.size() << "," << ap.part2.size() << ","
     << fmt(ap.part1_max_diam) << "," << fmt(ap.part2_max_diam) << "," << fmt(n2d2) << ","
     << fmt(adm) << "\n";
  if (out_path.empty()) {
    std::cout << os.str();
  } else {
    std::ofstream f(out_path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open output file " + out_path);
    f << os.str();
  }
  return 0;
}

int cmd_converge(const ExperimentConfig& cfg, bool gates, TilePolicy policy) {
  const CorpusFunction& f = corpus_function(cfg.function);
  CorpusFunction with_domain = f;
  if (cfg.domain_lo && cfg.domain_hi)
    with_domain.domain = Block(*cfg.domain_lo, *cfg.domain_hi);
  const CorpusFunction* fp = &with_domain;
  ProjectionOperator op = ProjectionOperator::from_descriptor(
      operator_descriptor_from_config(cfg.op, fp->dim));
  PartitionKind kind = kind_from_name(cfg.kind);
  WeightFn weight = weight_by_name(cfg.weight);

  StudyOptions opt;
  opt.M = cfg.M;
  opt.policy = policy;
  opt.weight = cfg.weight == "unit" ? nullptr : &weight;
  opt.norms.quad_order = cfg.quad_order;
  opt.norms.grid_points = cfg.grid_points;

  StudyResult res = run_study(*fp, op, cfg.p, cfg.budgets, kind, opt);

  std::ostringstream csv;
  write_report_csv(csv, res.records);
  if (cfg.out.empty()) {
    std::cout << csv.str();
  } else {
    std::ofstream out(cfg.out, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file " + cfg.out);
    out << csv.str();
  }
  std::cerr << report_summary(res);

  if (!gates) return 0;
  const ConvergenceRecord& last = res.records.back();
  const int m = op.detect_k() + 1;
  bool ok = last.scaled >= 0.95 * last.predicted;
  if (kind != PartitionKind::Uniform) {
    ok = ok && last.scaled <= 1.15 * last.predicted;
    ok = ok && std::isfinite(res.admissibility);
    if (res.records.size() >= 2)
      ok = ok && std::abs(res.slope + static_cast<double>(m) / fp->dim) <= 0.05;
  }
  if (!ok) std::cerr << "property gates FAILED\n";
  return ok ? 0 : 1;
}

}  // namespace

int dispatch(const std::vector<std::string>& args) {
  CLI::App app{"block-partition interpolation toolkit"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "cap worker parallelism (default: machine cores)");

  std::string op_desc, p_str = "inf";

  auto* constants = app.add_subcommand("constants", "print the sharp constants C(p[,s])");
  constants->add_option("--op", op_desc, "operator descriptor")->required();
  constants->add_option("--p", p_str, "norm exponent or inf");

  std::string poly_str;
  double M = 0.0;
  bool closed = false;
  auto* kfun = app.add_subcommand("kfun", "evaluate the error function on a polynomial");
  kfun->add_option("--op", op_desc, "operator descriptor")->required();
  kfun->add_option("--p", p_str, "norm exponent or inf");
  kfun->add_option("--poly", poly_str, "terms 'c e1 .. ed; c e1 .. ed'")->required();
  kfun->add_option("--M", M, "diameter cap (uses the modified error function)");
  kfun->add_flag("--closed-form", closed, "use the closed-form route");

  std::string spec_str = "cube", fn_name = "quad_aniso", policy_str = "clip", out_path;
  int n = 4;
  auto* partition = app.add_subcommand("partition", "build and dump one partition");
  partition->add_option("--spec", spec_str, "cube | const:w1[,w2..] | cf | km");
  partition->add_option("--fn", fn_name, "corpus function (for cf/km specs)");
  partition->add_option("--op", op_desc, "operator descriptor (for cf/km specs)");
  partition->add_option("--p", p_str, "norm exponent or inf");
  partition->add_option("--M", M, "diameter cap for km specs")->default_val(8.0);
  partition->add_option("--n", n, "construction index (>= 2)");
  partition->add_option("--policy", policy_str, "clip | fit");
  partition->add_option("--out", out_path, "output file (default: stdout)");

  std::string kind_str = "adaptive-cf", budgets_str = "100,400,1600,6400";
  std::string weight_str = "unit", config_path;
  int quad_order = 20, grid_points = 33;
  bool no_gates = false;
  auto* converge = app.add_subcommand("converge", "run a convergence study");
  converge->add_option("--config", config_path, "JSON experiment config");
  auto* fn_opt = converge->add_option("--fn", fn_name, "corpus function");
  auto* op_opt = converge->add_option("--op", op_desc, "operator descriptor");
  auto* p_opt = converge->add_option("--p", p_str, "norm exponent or inf");
  auto* kind_opt = converge->add_option("--kind", kind_str, "uniform | adaptive-km | adaptive-cf");
  auto* budgets_opt = converge->add_option("--budgets", budgets_str, "comma-separated cell budgets");
  auto* m_opt = converge->add_option("--M", M, "diameter cap for the km spec");
  auto* weight_opt = converge->add_option("--weight", weight_str, "weight name");
  auto* policy_opt = converge->add_option("--policy", policy_str, "clip | fit");
  auto* quad_opt = converge->add_option("--quad-order", quad_order, "quadrature order per axis");
  auto* grid_opt = converge->add_option("--grid-points", grid_points, "sup-norm grid per axis");
  auto* out_opt = converge->add_option("--out", out_path, "CSV output path");
  converge->add_flag("--no-gates", no_gates, "skip the property gates");

  auto* verify = app.add_subcommand("verify", "report hypotheses and operator checks");
  verify->add_option("--op", op_desc, "operator descriptor")->required();

  std::vector<const char*> argv;
  argv.push_back("blockadapt");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    std::cout << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n" << app.help();
    return 2;
  }

  if (threads > 0) set_max_threads(threads);

  try {
    if (constants->parsed()) return cmd_constants(op_desc, p_str);
    if (kfun->parsed()) return cmd_kfun(op_desc, p_str, poly_str, M, closed);
    if (verify->parsed()) return cmd_verify(op_desc);
    if (partition->parsed())
      return cmd_partition(spec_str, fn_name, op_desc, p_str, M, n, policy_str, out_path);
    if (converge->parsed()) {
      ExperimentConfig cfg;
      if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) throw std::invalid_argument("cannot read config file " + config_path);
        std::stringstream ss;
        ss << in.rdbuf();
        cfg = ExperimentConfig::from_json(ss.str());
      }
      // Flags override config-file values.
      if (fn_opt->count()) cfg.function = fn_name;
      if (op_opt->count()) {
        ProjectionOperator op = ProjectionOperator::from_descriptor(op_desc);
        std::istringstream probe(op_desc);
        std::string variant;
        std::getline(probe, variant, ':');
        cfg.op.variant = variant;
        std::string second;
        std::getline(probe, second, ':');
        if (variant == "l2")
          cfg.op.space = second;
        else
          cfg.op.nodes = second;
        cfg.op.k = op.wave();
      }
      if (p_opt->count()) cfg.p = parse_p(p_str);
      if (kind_opt->count()) cfg.kind = kind_str;
      if (budgets_opt->count()) cfg.budgets = parse_budgets(budgets_str);
      if (m_opt->count()) cfg.M = M;
      if (weight_opt->count()) cfg.weight = weight_str;
      if (quad_opt->count()) cfg.quad_order = quad_order;
      if (grid_opt->count()) cfg.grid_points = grid_points;
      if (out_opt->count()) cfg.out = out_path;
      TilePolicy policy = TilePolicy::Fit;
      if (policy_opt->count()) policy = parse_policy(policy_str);
      return cmd_converge(cfg, !no_gates, policy);
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

int dispatch(int argc, const char* const* argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return dispatch(args);
}

}  // namespace blockadapt
