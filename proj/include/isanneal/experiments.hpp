#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "isanneal/bounds.hpp"
#include "isanneal/dynamics.hpp"
#include "isanneal/graph.hpp"
#include "isanneal/median.hpp"

namespace isanneal {

/// coeff * n^exponent; used for the T(n) and omega0(n) rules.
struct PowerRule {
  double coeff = 1.0;
  double exponent = 0.0;

  double operator()(int n) const;
  std::string describe() const;
  /// "<coeff>", "<coeff>*n^<exp>", "n^<exp>", "<coeff>/n" or "<coeff>*n".
  static PowerRule parse(const std::string& text);
};

/// Parses "4,6,8", "4:12" (inclusive range) or "4:12:2".
std::vector<int> parse_int_list(const std::string& text);

inline constexpr const char* kCsvSchemaVersion = "isanneal-csv/1";

struct ExperimentConfig {
  std::string experiment = "fig4";
  std::vector<int> n_list{4, 5, 6, 7, 8, 9, 10, 11, 12};
  double p = 0.8;
  int samples = 100;
  PowerRule t_rule{100.0, 0.0};
  PowerRule omega0_rule{1.0, 2.0};
  std::string schedule = "fig4";
  std::uint64_t master_seed = 1;
  double tolerance = 1e-4;
  double s_end = 1.0;
  /// Vertex guard for full state-vector runs.
  int full_space_max = 14;
  /// Independent-set guard for median-graph walks.
  std::size_t walk_is_limit = std::size_t{1} << 20;
  /// Walk time constant of the closed-form size-2 curves (s = kappa / n).
  double kappa = 20.0;
  /// Edge-density constant c in m ~ c n^2 for the asymptotic size-2 curve.
  double density_c = 0.25;
  unsigned workers = 1;
  /// Fill the wall_time column. Off by default: timings break byte-identical reruns.
  bool record_time = false;

  static ExperimentConfig fig4_defaults();
  static ExperimentConfig fig3_defaults();

  /// Throws DomainError on empty n_list, samples < 1, p outside [0,1] or
  /// rules that evaluate nonpositive.
  void validate() const;
};

/// One CSV row. Unset optionals are written as empty fields.
struct ResultRow {
  std::string kind = "sample";  ///< "sample" or "aggregate"
  std::string experiment;
  int n = 0;
  std::optional<int> sample;
  std::optional<std::uint64_t> seed;
  std::optional<double> count;
  std::optional<double> m_edges;
  std::optional<double> p_is;
  std::optional<double> leakage;
  std::optional<double> expected_is_size;
  std::optional<double> sampled_is_size;
  std::optional<double> greedy_size;
  std::optional<double> mis_size;
  std::optional<double> p2_simulated;
  std::optional<double> p2_full;
  std::optional<double> p2_walk;
  std::optional<double> p2_eq5;
  std::optional<double> p2_eq6;
  std::optional<double> p2_oracle;
  std::optional<double> bound_leading;
  std::optional<double> bound_second;
  std::optional<double> bound;
  std::optional<bool> convergence_ok;
  std::optional<bool> certified;
  std::optional<double> norm_drift;
  std::optional<double> steps;
  // Standard errors, aggregate rows only.
  std::optional<double> p_is_se;
  std::optional<double> expected_is_size_se;
  std::optional<double> greedy_size_se;
  std::optional<double> mis_size_se;
  std::optional<double> p2_simulated_se;
  std::string ordering;
  std::string status = "ok";
  std::optional<double> wall_time;
};

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<ResultRow> rows;        ///< per (n, sample), ascending
  std::vector<ResultRow> aggregates;  ///< one per n
};

/// Large-IS experiment: ER(n, p) graphs, full state-vector anneal, greedy and
/// exact baselines. Per-sample failures (guards, non-convergence) land in the
/// row's status; the run continues.
ExperimentResult run_fig4(const ExperimentConfig& cfg);

/// Size-2 experiment: constant Omega, zero Delta. The simulated size-2
/// probability comes from the full space when n <= full_space_max, otherwise
/// from the median-graph walk; both are reported where feasible, next to the
/// closed-form short-time and asymptotic curves and the lattice oracle.
ExperimentResult run_fig3(const ExperimentConfig& cfg);

/// Header comment, column header and every sample row followed by the
/// aggregate rows, grouped by n.
void write_csv(std::ostream& out, const ExperimentResult& result);

/// Column names in emission order.
const std::vector<std::string>& csv_columns();

/// Checks probabilities in [0,1], greedy <= MIS and expected size <= MIS.
/// Throws std::logic_error naming the violated invariant.
void check_row_invariants(const ResultRow& row);

struct BoundReportConfig {
  std::vector<int> n_list{4, 8, 16, 32, 64, 128};
  PowerRule t_rule{1.0, 0.0};
  PowerRule omega0_rule{1.0, 2.0};
  std::string schedule = "fig4";
};

struct BoundReportRow {
  int n = 0;
  bounds::BoundParams params;
  bounds::LeakageBoundReport report;
};

std::vector<BoundReportRow> run_bound_report(const BoundReportConfig& cfg);

/// Columns: n,tau,a1,a2,a3,a4,leading,second,bound,convergence_ok,certified,approx_ratio.
void write_bound_csv(std::ostream& out, const BoundReportConfig& cfg,
                     const std::vector<BoundReportRow>& rows);

struct SingleRunConfig {
  double t_total = 100.0;
  double omega0 = 0.0;  ///< 0 means n^2
  std::string schedule = "fig4";
  std::string schedule_file;  ///< tabulated schedule; overrides `schedule`
  double s_end = 1.0;
  double tolerance = 1e-6;
  int full_space_max = 14;
  std::size_t walk_is_limit = std::size_t{1} << 20;
  double walk_omega = 1.0;
  double walk_delta = 0.0;
  double walk_t = 0.0;  ///< 0 means t_total
  std::uint64_t seed = 1;
  bool include_state = false;
};

/// Everything computed for one graph and one parameter set, as JSON text.
std::string run_single_json(const Graph& g, const SingleRunConfig& cfg, int indent = 2);

/// Formats a double in shortest round-trip form ("nan" and "inf" spelled out).
std::string format_double(double v);

}  // namespace isanneal
