#include "isanneal/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <functional>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "isanneal/errors.hpp"
#include "isanneal/rng.hpp"
#include "isanneal/schedule.hpp"

namespace isanneal {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

double PowerRule::operator()(int n) const { return coeff * std::pow(static_cast<double>(n), exponent); }

std::string PowerRule::describe() const {
  if (exponent == 0.0) return format_double(coeff);
  return format_double(coeff) + "*n^" + format_double(exponent);
}

namespace {

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

double to_double(const std::string& text, const std::string& context) {
  double v = 0.0;
  const std::string t = trim(text);
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc{} || ptr != t.data() + t.size()) {
    throw DomainError("cannot parse number '" + text + "' in " + context);
  }
  return v;
}

int to_int(const std::string& text, const std::string& context) {
  int v = 0;
  const std::string t = trim(text);
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc{} || ptr != t.data() + t.size()) {
    throw DomainError("cannot parse integer '" + text + "' in " + context);
  }
  return v;
}

}  // namespace

PowerRule PowerRule::parse(const std::string& raw) {
  const std::string text = trim(raw);
  const std::string ctx = "rule '" + raw + "'";
  PowerRule rule;
  const auto npos = text.find('n');
  if (npos == std::string::npos) {
    rule.coeff = to_double(text, ctx);
    rule.exponent = 0.0;
    return rule;
  }
  std::string head = trim(text.substr(0, npos));
  const std::string tail = trim(text.substr(npos + 1));
  if (!head.empty() && head.back() == '/') {
    // "<c>/n" or "<c>/n^<e>"
    rule.coeff = to_double(head.substr(0, head.size() - 1), ctx);
    rule.exponent = tail.empty() ? -1.0 : -to_double(tail.substr(tail[0] == '^' ? 1 : 0), ctx);
    if (!tail.empty() && tail[0] != '^') throw DomainError("malformed " + ctx);
    return rule;
  }
  if (!head.empty() && head.back() == '*') head.pop_back();
  rule.coeff = head.empty() ? 1.0 : to_double(head, ctx);
  if (tail.empty()) {
    rule.exponent = 1.0;
  } else if (tail[0] == '^') {
    rule.exponent = to_double(tail.substr(1), ctx);
  } else {
    throw DomainError("malformed " + ctx);
  }
  return rule;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    const auto c1 = item.find(':');
    if (c1 == std::string::npos) {
      out.push_back(to_int(item, "list '" + text + "'"));
      continue;
    }
    const auto c2 = item.find(':', c1 + 1);
    const int lo = to_int(item.substr(0, c1), "range '" + item + "'");
    const int hi = to_int(item.substr(c1 + 1, c2 == std::string::npos ? std::string::npos : c2 - c1 - 1),
                          "range '" + item + "'");
    const int step = c2 == std::string::npos ? 1 : to_int(item.substr(c2 + 1), "range '" + item + "'");
    if (step <= 0) throw DomainError("range step must be positive in '" + item + "'");
    for (int v = lo; v <= hi; v += step) out.push_back(v);
  }
  return out;
}

ExperimentConfig ExperimentConfig::fig4_defaults() { return ExperimentConfig{}; }

ExperimentConfig ExperimentConfig::fig3_defaults() {
  ExperimentConfig cfg;
  cfg.experiment = "fig3";
  cfg.n_list = {6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16};
  cfg.p = 0.5;
  cfg.t_rule = {20.0, -1.0};
  cfg.omega0_rule = {1.0, 2.0};
  cfg.schedule = "fig3";
  return cfg;
}

void ExperimentConfig::validate() const {
  if (n_list.empty()) throw DomainError("n_list must not be empty");
  if (samples < 1) throw DomainError("samples must be >= 1");
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("edge probability must lie in [0, 1]");
  if (!(tolerance > 0.0)) throw DomainError("tolerance must be positive");
  if (!(s_end > 0.0 && s_end <= 1.0)) throw DomainError("s_end must lie in (0, 1]");
  for (int n : n_list) {
    if (n < 1 || n > kMaxVertices) throw DomainError("vertex count " + std::to_string(n) + " out of range");
    if (!(t_rule(n) > 0.0)) throw DomainError("T rule evaluates nonpositive at n=" + std::to_string(n));
    if (!(omega0_rule(n) > 0.0)) {
      throw DomainError("omega0 rule evaluates nonpositive at n=" + std::to_string(n));
    }
  }
  (void)builtin_schedule(schedule);
}

namespace {

void parallel_for(std::size_t count, unsigned workers, const std::function<void(std::size_t)>& body) {
  if (workers == 0) workers = std::max(1U, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, count));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) body(i);
    });
  }
}

// Pairwise summation over a fixed order, so aggregates do not depend on the
// worker count.
double pairwise_sum(std::span<const double> v) {
  if (v.size() <= 8) return std::accumulate(v.begin(), v.end(), 0.0);
  const std::size_t half = v.size() / 2;
  return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

struct Stat {
  double mean;
  std::optional<double> se;
};

std::optional<Stat> stat_of(const std::vector<ResultRow>& rows,
                            std::optional<double> ResultRow::*field) {
  std::vector<double> vals;
  for (const auto& r : rows)
    if (r.*field) vals.push_back(*(r.*field));
  if (vals.empty()) return std::nullopt;
  const double k = static_cast<double>(vals.size());
  const double mean = pairwise_sum(vals) / k;
  if (vals.size() < 2) return Stat{mean, std::nullopt};
  std::vector<double> sq;
  sq.reserve(vals.size());
  for (double v : vals) sq.push_back((v - mean) * (v - mean));
  return Stat{mean, std::sqrt(pairwise_sum(sq) / (k - 1.0) / k)};
}

ResultRow aggregate(const std::string& experiment, int n, const std::vector<ResultRow>& rows) {
  ResultRow a;
  a.kind = "aggregate";
  a.experiment = experiment;
  a.n = n;
  a.count = static_cast<double>(std::count_if(rows.begin(), rows.end(),
                                              [](const ResultRow& r) { return r.status == "ok"; }));

  using Field = std::optional<double> ResultRow::*;
  const std::pair<Field, Field> with_se[] = {
      {&ResultRow::p_is, &ResultRow::p_is_se},
      {&ResultRow::expected_is_size, &ResultRow::expected_is_size_se},
      {&ResultRow::greedy_size, &ResultRow::greedy_size_se},
      {&ResultRow::mis_size, &ResultRow::mis_size_se},
      {&ResultRow::p2_simulated, &ResultRow::p2_simulated_se},
  };
  for (auto [field, se_field] : with_se) {
    if (auto s = stat_of(rows, field)) {
      a.*field = s->mean;
      a.*se_field = s->se;
    }
  }
  const Field mean_only[] = {&ResultRow::m_edges,      &ResultRow::leakage,      &ResultRow::sampled_is_size,
                             &ResultRow::p2_full,      &ResultRow::p2_walk,      &ResultRow::p2_eq5,
                             &ResultRow::p2_eq6,       &ResultRow::p2_oracle,    &ResultRow::bound_leading,
                             &ResultRow::bound_second, &ResultRow::bound,        &ResultRow::steps};
  for (auto field : mean_only)
    if (auto s = stat_of(rows, field)) a.*field = s->mean;

  for (const auto& r : rows) {
    if (r.norm_drift) a.norm_drift = std::max(a.norm_drift.value_or(0.0), *r.norm_drift);
    if (r.convergence_ok) a.convergence_ok = a.convergence_ok.value_or(true) && *r.convergence_ok;
    if (r.certified) a.certified = a.certified.value_or(true) && *r.certified;
    if (r.wall_time) a.wall_time = a.wall_time.value_or(0.0) + *r.wall_time;
  }

  std::size_t failed = rows.size() - static_cast<std::size_t>(*a.count);
  a.status = failed == 0 ? "ok" : std::to_string(failed) + " sample(s) failed";
  return a;
}

// Descending order of the simulated and the two closed-form size-2 curves.
std::string curve_ordering(const ResultRow& a) {
  std::vector<std::pair<double, std::string>> curves;
  if (a.p2_simulated) curves.emplace_back(*a.p2_simulated, "simulated");
  if (a.p2_eq6) curves.emplace_back(*a.p2_eq6, "eq6");
  if (a.p2_eq5) curves.emplace_back(*a.p2_eq5, "eq5");
  std::stable_sort(curves.begin(), curves.end(),
                   [](const auto& x, const auto& y) { return x.first > y.first; });
  std::string out;
  for (const auto& [v, name] : curves) out += (out.empty() ? "" : ">") + name;
  return out;
}

void fill_bounds(ResultRow& r, const Schedule& sched, double t, double omega0, int n) {
  const auto bp = bounds::derive_constants(sched, t, omega0, n);
  const auto rep = bounds::leakage_upper_bound(bp);
  r.bound_leading = rep.leading_term;
  r.bound_second = rep.second_term;
  r.bound = rep.truncated_bound;
  r.convergence_ok = rep.convergence_ok;
  r.certified = rep.certified;
}

using Clock = std::chrono::steady_clock;

ResultRow fig4_sample(const ExperimentConfig& cfg, int n, int k) {
  const auto start = Clock::now();
  ResultRow r;
  r.experiment = cfg.experiment;
  r.n = n;
  r.sample = k;
  const std::uint64_t seed = derive_seed(cfg.master_seed, static_cast<std::uint64_t>(n),
                                         static_cast<std::uint64_t>(k));
  r.seed = seed;
  std::vector<std::string> errors;
  const Graph g = erdos_renyi(n, cfg.p, seed);
  r.m_edges = static_cast<double>(g.num_edges());
  r.greedy_size = greedy_mis(g).size();
  try {
    r.mis_size = mis_size(g);
  } catch (const std::exception& e) {
    errors.emplace_back(e.what());
  }

  const double t = cfg.t_rule(n);
  const double omega0 = cfg.omega0_rule(n);
  const Schedule sched = builtin_schedule(cfg.schedule);
  fill_bounds(r, sched, t, omega0, n);
  try {
    EvolveOptions opts;
    opts.tol = cfg.tolerance;
    opts.max_vertices = cfg.full_space_max;
    const auto ev = evolve_full(g, AnnealParams{t, omega0, sched}, cfg.s_end, opts);
    r.p_is = ev.p_is;
    r.leakage = ev.leakage;
    r.norm_drift = ev.norm_drift;
    r.steps = static_cast<double>(ev.steps_taken);
    if (ev.sizes.conditioned_defined) {
      r.expected_is_size = expected_is_size(ev.final_state, g);
      Engine eng(splitmix64(seed ^ 0x6D656173757265ULL));
      r.sampled_is_size = sample_is_size(ev.final_state, g, eng);
    }
  } catch (const std::exception& e) {
    errors.emplace_back(e.what());
  }
  if (!errors.empty()) {
    r.status.clear();
    for (const auto& e : errors) r.status += (r.status.empty() ? "" : "; ") + e;
  }
  if (cfg.record_time) r.wall_time = std::chrono::duration<double>(Clock::now() - start).count();
  check_row_invariants(r);
  return r;
}

ResultRow fig3_sample(const ExperimentConfig& cfg, int n, int k) {
  const auto start = Clock::now();
  ResultRow r;
  r.experiment = cfg.experiment;
  r.n = n;
  r.sample = k;
  const std::uint64_t seed = derive_seed(cfg.master_seed, static_cast<std::uint64_t>(n),
                                         static_cast<std::uint64_t>(k));
  r.seed = seed;
  std::vector<std::string> errors;
  const Graph g = erdos_renyi(n, cfg.p, seed);
  const auto m = static_cast<long long>(g.num_edges());
  r.m_edges = static_cast<double>(m);
  r.greedy_size = greedy_mis(g).size();
  try {
    r.mis_size = mis_size(g);
  } catch (const std::exception& e) {
    errors.emplace_back(e.what());
  }

  const double t = cfg.t_rule(n);
  const double omega0 = cfg.omega0_rule(n);
  const Schedule sched = builtin_schedule(cfg.schedule);
  const double omega = sched.omega(0.0);
  const double delta = sched.delta(0.0);
  fill_bounds(r, sched, t, omega0, n);

  // Closed-form curves: hitting time s = kappa / n with the runtime scale
  // folded into kappa (T = 1 in both formulas).
  r.p2_eq5 = p2_short_time(n, m, omega, 1.0, cfg.kappa / n);
  r.p2_eq6 = p2_asymptotic_lower_bound(cfg.density_c, omega, 1.0, cfg.kappa);

  if (n <= cfg.full_space_max) {
    try {
      EvolveOptions opts;
      opts.tol = cfg.tolerance;
      opts.max_vertices = cfg.full_space_max;
      const auto ev = evolve_full(g, AnnealParams{t, omega0, sched}, cfg.s_end, opts);
      auto it = ev.sizes.by_size.find(2);
      r.p2_full = it == ev.sizes.by_size.end() ? 0.0 : it->second.unconditioned;
      r.p_is = ev.p_is;
      r.leakage = ev.leakage;
      r.norm_drift = ev.norm_drift;
      r.steps = static_cast<double>(ev.steps_taken);
    } catch (const std::exception& e) {
      errors.emplace_back(e.what());
    }
  }
  try {
    const MedianGraph mg = MedianGraph::build(g, cfg.walk_is_limit);
    const WalkResult w = walk_evolve(mg, omega, delta, t, cfg.s_end);
    r.p2_walk = w.p2;
    r.p2_oracle = p2_perturbative_oracle(mg, omega, t, cfg.s_end);
    r.norm_drift = std::max(r.norm_drift.value_or(0.0), w.norm_drift);
  } catch (const std::exception& e) {
    if (!r.p2_full) errors.emplace_back(e.what());
  }
  r.p2_simulated = r.p2_full ? r.p2_full : r.p2_walk;
  if (!errors.empty()) {
    r.status.clear();
    for (const auto& e : errors) r.status += (r.status.empty() ? "" : "; ") + e;
  }
  if (cfg.record_time) r.wall_time = std::chrono::duration<double>(Clock::now() - start).count();
  check_row_invariants(r);
  return r;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg,
                                ResultRow (*sample_fn)(const ExperimentConfig&, int, int)) {
  cfg.validate();
  ExperimentResult result;
  result.config = cfg;
  const auto per_n = static_cast<std::size_t>(cfg.samples);
  const std::size_t total = cfg.n_list.size() * per_n;
  result.rows.resize(total);
  parallel_for(total, cfg.workers, [&](std::size_t i) {
    const int n = cfg.n_list[i / per_n];
    const int k = static_cast<int>(i % per_n);
    result.rows[i] = sample_fn(cfg, n, k);
  });
  for (std::size_t j = 0; j < cfg.n_list.size(); ++j) {
    const std::vector<ResultRow> group(result.rows.begin() + static_cast<std::ptrdiff_t>(j * per_n),
                                       result.rows.begin() + static_cast<std::ptrdiff_t>((j + 1) * per_n));
    ResultRow a = aggregate(cfg.experiment, cfg.n_list[j], group);
    if (cfg.experiment == "fig3") a.ordering = curve_ordering(a);
    result.aggregates.push_back(std::move(a));
  }
  return result;
}

}  // namespace

void check_row_invariants(const ResultRow& row) {
  constexpr double slack = 1e-9;
  auto prob = [&](const std::optional<double>& v, const char* name) {
    if (v && !(*v >= -slack && *v <= 1.0 + slack)) {
      throw std::logic_error(std::string(name) + " = " + format_double(*v) + " outside [0, 1] (n=" +
                             std::to_string(row.n) + ")");
    }
  };
  prob(row.p_is, "p_is");
  prob(row.leakage, "leakage");
  prob(row.p2_simulated, "p2_simulated");
  prob(row.p2_full, "p2_full");
  prob(row.p2_walk, "p2_walk");
  if (row.greedy_size && row.mis_size && *row.greedy_size > *row.mis_size + slack) {
    throw std::logic_error("greedy size exceeds MIS size (n=" + std::to_string(row.n) + ")");
  }
  if (row.expected_is_size && row.mis_size && *row.expected_is_size > *row.mis_size + slack) {
    throw std::logic_error("expected IS size exceeds MIS size (n=" + std::to_string(row.n) + ")");
  }
}

ExperimentResult run_fig4(const ExperimentConfig& cfg) { return run_experiment(cfg, &fig4_sample); }

ExperimentResult run_fig3(const ExperimentConfig& cfg) { return run_experiment(cfg, &fig3_sample); }

const std::vector<std::string>& csv_columns() {
  static const std::vector<std::string> cols = {
      "kind",          "experiment",   "n",
      "sample",        "seed",         "count",
      "m_edges",       "p_is",         "leakage",
      "expected_is_size", "sampled_is_size", "greedy_size",
      "mis_size",      "p2_simulated", "p2_full",
      "p2_walk",       "p2_eq5",       "p2_eq6",
      "p2_oracle",     "bound_leading", "bound_second",
      "bound",         "convergence_ok", "certified",
      "norm_drift",    "steps",        "p_is_se",
      "expected_is_size_se", "greedy_size_se", "mis_size_se",
      "p2_simulated_se", "ordering",   "status",
      "wall_time"};
  return cols;
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

std::string opt(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }
std::string opt(const std::optional<bool>& v) { return v ? (*v ? "true" : "false") : std::string(); }
std::string opt(const std::optional<int>& v) { return v ? std::to_string(*v) : std::string(); }
std::string opt(const std::optional<std::uint64_t>& v) { return v ? std::to_string(*v) : std::string(); }

void write_row(std::ostream& out, const ResultRow& r) {
  const std::string fields[] = {
      r.kind,          r.experiment,          std::to_string(r.n),
      opt(r.sample),   opt(r.seed),           opt(r.count),
      opt(r.m_edges),  opt(r.p_is),           opt(r.leakage),
      opt(r.expected_is_size), opt(r.sampled_is_size), opt(r.greedy_size),
      opt(r.mis_size), opt(r.p2_simulated),   opt(r.p2_full),
      opt(r.p2_walk),  opt(r.p2_eq5),         opt(r.p2_eq6),
      opt(r.p2_oracle), opt(r.bound_leading), opt(r.bound_second),
      opt(r.bound),    opt(r.convergence_ok), opt(r.certified),
      opt(r.norm_drift), opt(r.steps),        opt(r.p_is_se),
      opt(r.expected_is_size_se), opt(r.greedy_size_se), opt(r.mis_size_se),
      opt(r.p2_simulated_se), r.ordering,     r.status,
      opt(r.wall_time)};
  bool first = true;
  for (const auto& f : fields) {
    if (!first) out << ',';
    out << csv_field(f);
    first = false;
  }
  out << '\n';
}

}  // namespace

void write_csv(std::ostream& out, const ExperimentResult& result) {
  const auto& c = result.config;
  out << "# " << kCsvSchemaVersion << " experiment=" << c.experiment << " p=" << format_double(c.p)
      << " samples=" << c.samples << " T=" << c.t_rule.describe() << " omega0=" << c.omega0_rule.describe()
      << " schedule=" << c.schedule << " master_seed=" << c.master_seed
      << " tol=" << format_double(c.tolerance) << " s_end=" << format_double(c.s_end)
      << " full_space_max=" << c.full_space_max;
  if (c.experiment == "fig3") {
    out << " kappa=" << format_double(c.kappa) << " c=" << format_double(c.density_c)
        << " eq5_eq6_convention=T1_s_kappa_over_n";
  }
  out << '\n';
  const auto& cols = csv_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
  out << '\n';
  const auto per_n = static_cast<std::size_t>(c.samples);
  for (std::size_t j = 0; j < result.aggregates.size(); ++j) {
    for (std::size_t k = 0; k < per_n && j * per_n + k < result.rows.size(); ++k) {
      write_row(out, result.rows[j * per_n + k]);
    }
    write_row(out, result.aggregates[j]);
  }
}

std::vector<BoundReportRow> run_bound_report(const BoundReportConfig& cfg) {
  if (cfg.n_list.empty()) throw DomainError("n_list must not be empty");
  const Schedule sched = builtin_schedule(cfg.schedule);
  std::vector<BoundReportRow> rows;
  for (int n : cfg.n_list) {
    BoundReportRow row;
    row.n = n;
    row.params = bounds::derive_constants(sched, cfg.t_rule(n), cfg.omega0_rule(n), n);
    row.report = bounds::leakage_upper_bound(row.params);
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_bound_csv(std::ostream& out, const BoundReportConfig& cfg,
                     const std::vector<BoundReportRow>& rows) {
  out << "# " << kCsvSchemaVersion << " experiment=bound-report T=" << cfg.t_rule.describe()
      << " omega0=" << cfg.omega0_rule.describe() << " schedule=" << cfg.schedule << '\n';
  out << "n,tau,a1,a2,a3,a4,leading,second,bound,convergence_ok,certified,approx_ratio\n";
  for (const auto& r : rows) {
    const auto& p = r.params;
    const auto& b = r.report;
    out << r.n << ',' << format_double(p.tau) << ',' << format_double(p.a1) << ',' << format_double(p.a2)
        << ',' << format_double(p.a3) << ',' << format_double(p.a4) << ',' << format_double(b.leading_term)
        << ',' << format_double(b.second_term) << ',' << format_double(b.truncated_bound) << ','
        << (b.convergence_ok ? "true" : "false") << ',' << (b.certified ? "true" : "false") << ','
        << format_double(b.approx_ratio) << '\n';
  }
}

namespace {

using nlohmann::json;

json vertex_set_json(VertexSet s) {
  return json{{"mask", s.mask}, {"size", s.size()}, {"vertices", s.vertices()}};
}

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

std::string run_single_json(const Graph& g, const SingleRunConfig& cfg, int indent) {
  json out;
  const int n = g.num_vertices();
  json edges = json::array();
  for (auto [i, j] : g.edges()) edges.push_back({i, j});
  out["graph"] = {{"n", n}, {"m", g.num_edges()}, {"edges", edges}};
  out["greedy"] = vertex_set_json(greedy_mis(g));
  try {
    out["mis"] = vertex_set_json(exact_mis(g));
  } catch (const std::exception& e) {
    out["mis"] = {{"error", e.what()}};
  }
  try {
    out["independent_set_count"] = count_independent_sets(g, cfg.walk_is_limit);
  } catch (const std::exception& e) {
    out["independent_set_count"] = nullptr;
  }

  const Schedule sched =
      cfg.schedule_file.empty() ? builtin_schedule(cfg.schedule) : read_schedule_file(cfg.schedule_file);
  const double omega0 = cfg.omega0 > 0.0 ? cfg.omega0 : static_cast<double>(n) * n;
  out["params"] = {{"T", cfg.t_total},   {"omega0", omega0},        {"schedule", sched.name()},
                   {"s_end", cfg.s_end}, {"tolerance", cfg.tolerance}};

  try {
    EvolveOptions opts;
    opts.tol = cfg.tolerance;
    opts.max_vertices = cfg.full_space_max;
    const auto ev = evolve_full(g, AnnealParams{cfg.t_total, omega0, sched}, cfg.s_end, opts);
    json sizes = json::array();
    for (const auto& [k, sp] : ev.sizes.by_size) {
      sizes.push_back({{"size", k},
                       {"unconditioned", sp.unconditioned},
                       {"conditioned", finite_or_null(sp.conditioned)}});
    }
    json evo = {{"p_is", ev.p_is},
                {"leakage", ev.leakage},
                {"size_probs", sizes},
                {"norm_drift", ev.norm_drift},
                {"steps_taken", ev.steps_taken},
                {"halving_change", ev.halving_change}};
    if (ev.sizes.conditioned_defined) {
      evo["expected_is_size"] = expected_is_size(ev.final_state, g);
      Engine eng(cfg.seed);
      evo["sampled_is_size"] = sample_is_size(ev.final_state, g, eng);
    } else {
      evo["expected_is_size"] = nullptr;
    }
    if (cfg.include_state) {
      json amps = json::array();
      for (const auto& a : ev.final_state) amps.push_back({a.real(), a.imag()});
      evo["final_state"] = amps;
    }
    out["evolution"] = evo;
  } catch (const std::exception& e) {
    out["evolution"] = {{"error", e.what()}};
  }

  try {
    const MedianGraph mg = MedianGraph::build(g, cfg.walk_is_limit);
    const double walk_t = cfg.walk_t > 0.0 ? cfg.walk_t : cfg.t_total;
    const WalkResult w = walk_evolve(mg, cfg.walk_omega, cfg.walk_delta, walk_t, cfg.s_end);
    json sizes = json::array();
    for (const auto& [k, prob] : w.size_probs) sizes.push_back({{"size", k}, {"probability", prob}});
    out["walk"] = {{"nodes", mg.num_nodes()},
                   {"edges", mg.num_edges()},
                   {"omega", cfg.walk_omega},
                   {"delta", cfg.walk_delta},
                   {"T", walk_t},
                   {"p2", w.p2},
                   {"p2_oracle", p2_perturbative_oracle(mg, cfg.walk_omega, walk_t, cfg.s_end)},
                   {"p2_eq5", p2_short_time(n, static_cast<long long>(g.num_edges()), cfg.walk_omega,
                                            walk_t, cfg.s_end)},
                   {"size_probs", sizes},
                   {"norm_drift", w.norm_drift}};
  } catch (const std::exception& e) {
    out["walk"] = {{"error", e.what()}};
  }

  if (n >= 1) {
    const auto bp = bounds::derive_constants(sched, cfg.t_total, omega0, n);
    const auto rep = bounds::leakage_upper_bound(bp);
    out["bounds"] = {{"tau", bp.tau},
                     {"intervals_l", bp.intervals_l},
                     {"a1", bp.a1},
                     {"a2", bp.a2},
                     {"a3", bp.a3},
                     {"a4", bp.a4},
                     {"leading_term", rep.leading_term},
                     {"second_term", rep.second_term},
                     {"truncated_bound", rep.truncated_bound},
                     {"tail_estimate", rep.tail_estimate},
                     {"convergence_ok", rep.convergence_ok},
                     {"certified", rep.certified},
                     {"asymptotic_value", rep.asymptotic_value},
                     {"approx_ratio", bounds::approx_adiabatic_ratio(sched, omega0)},
                     {"annotations", rep.annotations}};
  }
  return out.dump(indent);
}

}  // namespace isanneal
