#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>

#include "modsel/audit.hpp"
#include "modsel/baselines.hpp"
#include "modsel/cli.hpp"
#include "modsel/csv_ingest.hpp"
#include "modsel/datagen.hpp"
#include "modsel/dataset_io.hpp"
#include "modsel/errors.hpp"
#include "modsel/importance.hpp"
#include "modsel/info.hpp"
#include "modsel/oracle.hpp"
#include "modsel/parallel.hpp"
#include "modsel/select.hpp"
#include "modsel/simd/kernels.hpp"

namespace modsel {
namespace {

struct Common {
  std::string dataset;
  std::string gen;
  std::string out;
  std::optional<std::uint64_t> seed;
  unsigned threads = 0;
};

// Guarantee violations are reported through the exit code, not an exception.
struct ViolationExit {};

ordered_json read_json_arg(const std::string& arg) {
  try {
    if (!arg.empty() && arg.front() == '{') return ordered_json::parse(arg);
    std::ifstream in(arg);
    if (!in) throw DataError("cannot open " + arg);
    return ordered_json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw DataError("cannot parse JSON from " + arg + ": " + e.what());
  }
}

unsigned threads_of(const Common& c) { return c.threads == 0 ? default_thread_count() : c.threads; }

DiscreteDataset load_input(const Common& c) {
  if (c.dataset.empty() == c.gen.empty())
    throw InvalidArgument("give exactly one of --dataset or --gen");
  if (!c.dataset.empty()) return load_dataset(c.dataset);
  auto spec = GeneratorSpec::from_json(read_json_arg(c.gen));
  if (c.seed) spec.seed = *c.seed;
  return generate(spec);
}

void emit(const Common& c, const ordered_json& j, std::ostream& out) {
  const std::string text = j.dump(2) + "\n";
  if (c.out.empty()) {
    out << text;
    return;
  }
  std::ofstream f(c.out, std::ios::binary);
  if (!f || !(f << text)) throw DataError("cannot write " + c.out);
}

ordered_json dataset_summary(const DiscreteDataset& d) {
  ordered_json j;
  j["k"] = d.n_modalities();
  j["n"] = d.n_samples();
  j["alphabets"] = std::vector<std::uint32_t>(d.alphabets().begin(), d.alphabets().end());
  j["label_alphabet"] = d.label_alphabet();
  j["population"] = d.population();
  j["label_entropy"] = label_entropy(d).nats;
  return j;
}

std::string fmt(double v, int prec = 6) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(prec) << v;
  return s.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f || !(f << text)) throw DataError("cannot write " + path);
}

// ---- gen ---------------------------------------------------------------

struct GenArgs {
  std::string csv;
  std::string label_column;
  std::vector<std::string> columns;
  std::vector<std::string> groups;  // "a,b" per group
  std::string binning = "equal_frequency:8";
};

int cmd_gen(const Common& c, const GenArgs& g, std::ostream& out, std::ostream& err) {
  std::optional<DiscreteDataset> data;
  ordered_json mapping;
  if (!g.csv.empty()) {
    if (!c.gen.empty() || !c.dataset.empty())
      throw InvalidArgument("--csv cannot be combined with --gen or --dataset");
    IngestSpec spec;
    spec.path = g.csv;
    spec.label_column = g.label_column;
    spec.modality_columns = g.columns;
    for (const auto& grp : g.groups) {
      std::vector<std::string> cols;
      std::stringstream ss(grp);
      for (std::string col; std::getline(ss, col, ',');)
        if (!col.empty()) cols.push_back(col);
      spec.groups.push_back(std::move(cols));
    }
    spec.binning = Binning::parse(g.binning);
    auto result = ingest_csv(spec);
    data.emplace(std::move(result.data));
    mapping = std::move(result.mapping);
  } else {
    if (c.gen.empty()) throw InvalidArgument("gen needs --gen <spec.json> or --csv <file>");
    auto spec = GeneratorSpec::from_json(read_json_arg(c.gen));
    if (c.seed) spec.seed = *c.seed;
    data.emplace(generate(spec));
  }

  if (c.out.empty()) {
    write_dataset(out, *data);
  } else {
    save_dataset(c.out, *data);
    if (!mapping.is_null()) write_text_file(c.out + ".mapping.json", mapping.dump(2) + "\n");
  }
  err << "generated k=" << data->n_modalities() << " n=" << data->n_samples()
      << (data->population() ? " (population)" : "") << " H(Y)=" << fmt(label_entropy(*data).nats)
      << "\n";
  return kExitOk;
}

// ---- audit -------------------------------------------------------------

int cmd_audit(const Common& c, const std::string& scope, std::ostream& out, std::ostream& err) {
  const auto data = load_input(c);
  AuditOptions opts;
  opts.threads = threads_of(c);
  const auto est = estimate_epsilon(data, AuditScope::parse(scope), opts);
  err << audit_table(est);
  ordered_json j;
  j["dataset"] = dataset_summary(data);
  j["audit"] = audit_report(est);
  emit(c, j, out);
  return kExitOk;
}

// ---- select ------------------------------------------------------------

struct SelectArgs {
  std::size_t q = 0;
  std::size_t p = 0;
  std::string mode = "full";
  double lazy_slack = 0.0;
  std::string baseline = "greedy";
  std::string curve_csv;
};

void check_qp(std::size_t q, std::size_t& p, std::size_t k) {
  if (q < 1 || q > k)
    throw InvalidArgument("--q must lie in [1, " + std::to_string(k) + "], got " + std::to_string(q));
  if (p == 0) p = q;
  if (p > q) throw InvalidArgument("--p must not exceed --q");
}

void print_curve(const std::vector<CurvePoint>& curve, const std::string& name, std::ostream& err) {
  err << "size  " << name << "\n";
  for (const auto& pt : curve) err << std::setw(4) << pt.size << "  " << fmt(pt.utility) << "\n";
}

int cmd_select(const Common& c, SelectArgs a, std::ostream& out, std::ostream& err) {
  const auto data = load_input(c);
  check_qp(a.q, a.p, data.n_modalities());
  OracleBudget budget;
  budget.threads = threads_of(c);

  if (a.baseline == "optimal" || a.baseline == "average") {
    const auto curve = a.baseline == "optimal" ? optimal_curve(data, a.q, budget)
                                               : average_curve(data, a.q, budget);
    print_curve(curve, a.baseline, err);
    if (!a.curve_csv.empty()) write_text_file(a.curve_csv, curve_to_csv(curve));
    ordered_json j;
    j["method"] = a.baseline;
    j["q"] = a.q;
    j["curve"] = curve_to_json(curve);
    emit(c, j, out);
    return kExitOk;
  }

  SelectionTrace trace;
  if (a.baseline == "greedy") {
    GreedyOptions opts;
    if (a.mode == "full")
      opts.mode = GreedyMode::full_scan;
    else if (a.mode == "lazy")
      opts.mode = GreedyMode::lazy;
    else
      throw InvalidArgument("--mode must be 'full' or 'lazy'");
    if (!(a.lazy_slack >= 0.0)) throw InvalidArgument("--lazy-slack must be non-negative");
    opts.lazy_slack = a.lazy_slack;
    opts.threads = threads_of(c);
    trace = greedy_select(data, a.q, a.p, opts);
  } else if (a.baseline == "random") {
    trace = random_trace(data, a.q, c.seed.value_or(0));
    trace.p = a.p;
  } else if (a.baseline == "mci") {
    const auto report = importance_report(data, ImportanceEpsilons{});
    const auto order = ranking(report, RankScore::mci_point);
    trace = path_trace(data, order, a.q, "mci");
    trace.p = a.p;
  } else {
    throw InvalidArgument("--baseline must be greedy, random, mci, optimal or average");
  }

  const auto losses = loss_report(trace, data);
  err << "step  chosen  gain        utility     ce          0-1\n";
  for (std::size_t i = 0; i < trace.iterations.size(); ++i) {
    const auto& it = trace.iterations[i];
    const auto& l = i + 1 < losses.size() ? losses[i + 1] : losses.back();
    err << std::setw(4) << i + 1 << "  " << std::setw(6) << it.chosen << "  " << fmt(it.marginal_gain)
        << "  " << fmt(it.cumulative_utility) << "  " << fmt(l.cross_entropy) << "  "
        << fmt(l.zero_one) << "\n";
  }
  if (!a.curve_csv.empty()) write_text_file(a.curve_csv, curve_to_csv(trace_curve(trace)));
  auto j = trace_to_json(trace);
  j["losses"] = losses_to_json(losses);
  emit(c, j, out);
  return kExitOk;
}

// ---- rank --------------------------------------------------------------

struct RankArgs {
  std::string score = "mci";
  std::size_t q = 0;
  std::optional<double> epsilon;
  std::string scope = "singletons";
  bool exact = false;
};

int cmd_rank(const Common& c, const RankArgs& a, std::ostream& out, std::ostream& err) {
  const auto data = load_input(c);
  const std::size_t k = data.n_modalities();
  const RankScore score = parse_rank_score(a.score);
  const std::size_t q = a.q == 0 ? k : a.q;
  ImportanceEpsilons eps;
  if (a.epsilon) {
    if (!(*a.epsilon >= 0.0)) throw InvalidArgument("--epsilon must be non-negative");
    eps.conditional = eps.marginal = *a.epsilon;
  } else if (k >= 2) {
    AuditOptions opts;
    opts.threads = threads_of(c);
    eps = ImportanceEpsilons::from_estimate(estimate_epsilon(data, AuditScope::parse(a.scope), opts));
  }
  ImportanceOptions opts;
  opts.with_exact = a.exact;
  opts.budget.threads = threads_of(c);
  const auto report = importance_report(data, eps, opts);
  const auto top = rank_top_q(report, q, score);
  const auto order = ranking(report, score);

  err << "rank  modality  I(Xi;Y)     mci interval              shapley interval\n";
  for (std::size_t r = 0; r < q; ++r) {
    const auto& m = report.modalities[order[r]];
    err << std::setw(4) << r + 1 << "  " << std::setw(8) << m.modality << "  " << fmt(m.self_mi)
        << "  [" << fmt(m.mci.lo) << ", " << fmt(m.mci.hi) << "]  [" << fmt(std::max(0.0, m.shapley.lo))
        << ", " << fmt(m.shapley.hi) << "]\n";
  }
  ordered_json j;
  j["score"] = score == RankScore::mci_point ? "mci" : "shapley";
  j["q"] = q;
  j["top"] = std::vector<Modality>(top.begin(), top.end());
  j["ranking"] = std::vector<Modality>(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(q));
  j["importance"] = importance_to_json(report);
  emit(c, j, out);
  return kExitOk;
}

// ---- oracle ------------------------------------------------------------

int cmd_oracle(const Common& c, std::size_t q, bool importance, std::ostream& out,
               std::ostream& err) {
  const auto data = load_input(c);
  const std::size_t k = data.n_modalities();
  if (q < 1 || q > k)
    throw InvalidArgument("--q must lie in [1, " + std::to_string(k) + "], got " + std::to_string(q));
  OracleBudget budget;
  budget.threads = threads_of(c);
  const auto best = brute_force_optimal(data, q, budget);
  err << "optimal size-" << q << " subset " << best.subset.to_string() << "  I(S;Y)="
      << fmt(best.value) << "  (" << binomial(k, q) << " subsets)\n";
  ordered_json j;
  j["q"] = q;
  j["subset"] = std::vector<Modality>(best.subset.begin(), best.subset.end());
  j["value"] = best.value;
  j["label_entropy"] = label_entropy(data).nats;
  j["average"] = average_utility(data, q, budget);
  if (importance) {
    const auto shap = exact_shapley_all(data, budget);
    const auto mci = exact_mci_all(data, budget);
    ordered_json arr = ordered_json::array();
    for (Modality i = 0; i < k; ++i) {
      ordered_json m;
      m["modality"] = i;
      m["shapley"] = shap[i];
      m["mci"] = mci[i].value;
      m["mci_argmax"] = std::vector<Modality>(mci[i].argmax.begin(), mci[i].argmax.end());
      arr.push_back(std::move(m));
    }
    j["importance"] = std::move(arr);
  }
  emit(c, j, out);
  return kExitOk;
}

// ---- verify ------------------------------------------------------------

struct VerifyArgs {
  std::string trace;
  std::size_t q = 0;
  std::size_t p = 0;
  std::optional<double> epsilon;
  std::string scope;
  std::optional<double> opt;
};

int cmd_verify(const Common& c, VerifyArgs a, std::ostream& out, std::ostream& err) {
  const auto data = load_input(c);
  const std::size_t k = data.n_modalities();
  SelectionTrace trace;
  if (!a.trace.empty()) {
    trace = trace_from_json(read_json_arg(a.trace));
  } else {
    check_qp(a.q, a.p, k);
    GreedyOptions opts;
    opts.threads = threads_of(c);
    trace = greedy_select(data, a.q, a.p, opts);
  }

  ordered_json eps_json;
  double epsilon = 0.0;
  if (a.epsilon) {
    if (!(*a.epsilon >= 0.0)) throw InvalidArgument("--epsilon must be non-negative");
    epsilon = *a.epsilon;
    eps_json["source"] = "provided";
  } else if (k >= 2) {
    AuditOptions opts;
    opts.threads = threads_of(c);
    AuditScope scope;
    if (!a.scope.empty()) {
      scope = AuditScope::parse(a.scope);
    } else if (disjoint_pair_count(k, k - 1) <= opts.pair_budget &&
               k < 64 && (std::uint64_t{1} << k) <= opts.table_budget) {
      scope = AuditScope::exhaustive(k - 1);
    }
    const auto est = estimate_epsilon(data, scope, opts);
    epsilon = est.epsilon_conditional;
    eps_json["source"] = "audit";
    eps_json["audit"] = audit_report(est);
  } else {
    eps_json["source"] = "single modality";
  }
  eps_json["epsilon"] = epsilon;

  OracleBudget budget;
  budget.threads = threads_of(c);
  const auto check = check_guarantee(trace, data, epsilon,
                                     a.opt ? OptSource::value(*a.opt) : OptSource::oracle(), budget);
  err << "greedy " << fmt(check.greedy_value) << "  opt " << fmt(check.opt_value) << "  bound "
      << fmt(check.bound_value) << "  slack " << fmt(check.slack) << "  eps " << fmt(epsilon)
      << "\n";
  for (const auto& v : check.violations) err << "violation: " << v << "\n";
  ordered_json j;
  j["epsilon"] = std::move(eps_json);
  j["check"] = guarantee_to_json(check);
  emit(c, j, out);
  return check.ok() ? kExitOk : kExitViolation;
}

void add_input(CLI::App* sub, Common& c) {
  sub->add_option("--dataset", c.dataset, "dataset file (modsel JSON-lines)");
  sub->add_option("--gen", c.gen, "generator spec: JSON file or inline JSON object");
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Modality selection by greedy mutual-information maximization", "modsel"};
  app.require_subcommand(1);
  Common c;
  std::string simd;
  app.add_option("--out", c.out, "write JSON output to this file instead of stdout");
  app.add_option("--threads", c.threads, "worker thread cap (0 = hardware)");
  app.add_option("--simd", simd, "kernel level: auto, scalar, avx2");
  std::uint64_t seed = 0;
  auto* seed_opt = app.add_option("--seed", seed, "random seed");

  GenArgs gen_args;
  auto* gen = app.add_subcommand("gen", "generate a synthetic dataset or ingest a CSV");
  gen->add_option("--gen", c.gen, "generator spec: JSON file or inline JSON object");
  gen->add_option("--csv", gen_args.csv, "CSV file with a header row");
  gen->add_option("--label-column", gen_args.label_column, "CSV label column");
  gen->add_option("--columns", gen_args.columns, "CSV modality columns")->delimiter(',');
  gen->add_option("--group", gen_args.groups, "comma-separated column group forming one modality");
  gen->add_option("--binning", gen_args.binning, "none or equal_frequency:<B>");

  std::string scope = "singletons";
  auto* audit = app.add_subcommand("audit", "estimate the independence constants");
  add_input(audit, c);
  audit->add_option("--scope", scope, "singletons or exhaustive:<m>");

  SelectArgs sel;
  auto* select = app.add_subcommand("select", "greedy selection or a baseline");
  add_input(select, c);
  select->add_option("--q", sel.q, "cardinality budget")->required();
  select->add_option("--p", sel.p, "iterations to run (default q)");
  select->add_option("--mode", sel.mode, "full or lazy");
  select->add_option("--lazy-slack", sel.lazy_slack, "slack added to stale gains in lazy mode");
  select->add_option("--baseline", sel.baseline, "greedy, random, mci, optimal or average");
  select->add_option("--curve-csv", sel.curve_csv, "also write the utility curve as CSV");

  RankArgs rank_args;
  auto* rank = app.add_subcommand("rank", "rank modalities by self-information");
  add_input(rank, c);
  rank->add_option("--score", rank_args.score, "mci or shapley");
  rank->add_option("--q", rank_args.q, "how many to report (default k)");
  rank->add_option("--epsilon", rank_args.epsilon, "use this epsilon instead of auditing");
  rank->add_option("--scope", rank_args.scope, "audit scope when --epsilon is absent");
  rank->add_flag("--exact", rank_args.exact, "attach exact Shapley and MCI values");

  std::size_t oracle_q = 0;
  bool oracle_importance = false;
  auto* oracle = app.add_subcommand("oracle", "brute-force optimum");
  add_input(oracle, c);
  oracle->add_option("--q", oracle_q, "subset size")->required();
  oracle->add_flag("--importance", oracle_importance, "also compute exact Shapley and MCI");

  VerifyArgs ver;
  auto* verify = app.add_subcommand("verify", "check a greedy run against its guarantee");
  add_input(verify, c);
  verify->add_option("--trace", ver.trace, "trace JSON from select (default: run greedy)");
  verify->add_option("--q", ver.q, "cardinality budget when running greedy");
  verify->add_option("--p", ver.p, "iterations when running greedy");
  verify->add_option("--epsilon", ver.epsilon, "epsilon in nats (default: audit)");
  verify->add_option("--scope", ver.scope, "audit scope for epsilon");
  verify->add_option("--opt", ver.opt, "known optimum instead of brute force");

  for (auto* sub : {gen, audit, select, rank, oracle, verify}) {
    sub->add_option("--seed", seed, "random seed");
    sub->add_option("--out", c.out, "write JSON output to this file instead of stdout");
    sub->add_option("--threads", c.threads, "worker thread cap (0 = hardware)");
    sub->add_option("--simd", simd, "kernel level: auto, scalar, avx2");
  }

  try {
    try {
      app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
      std::ostringstream o;
      std::ostringstream e2;
      const int code = app.exit(e, o, e2);
      out << o.str();
      err << e2.str();
      return code == 0 ? kExitOk : kExitConfig;
    }
    bool seed_given = seed_opt->count() > 0;
    for (auto* sub : app.get_subcommands())
      if (sub->get_option("--seed")->count() > 0) seed_given = true;
    if (seed_given) c.seed = seed;

    if (simd == "scalar")
      simd::force_level(simd::Level::scalar);
    else if (simd == "avx2")
      simd::force_level(simd::Level::avx2);
    else if (simd.empty() || simd == "auto")
      simd::force_level(std::nullopt);
    else
      throw InvalidArgument("--simd must be auto, scalar or avx2");

    if (gen->parsed()) return cmd_gen(c, gen_args, out, err);
    if (audit->parsed()) return cmd_audit(c, scope, out, err);
    if (select->parsed()) return cmd_select(c, sel, out, err);
    if (rank->parsed()) return cmd_rank(c, rank_args, out, err);
    if (oracle->parsed()) return cmd_oracle(c, oracle_q, oracle_importance, out, err);
    if (verify->parsed()) return cmd_verify(c, ver, out, err);
    return kExitConfig;
  } catch (const BudgetExceeded& e) {
    err << "budget exceeded: " << e.what() << "\n";
    return kExitBudget;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const DataError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}

}  // namespace modsel
