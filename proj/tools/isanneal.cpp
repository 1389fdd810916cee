// Command-line front end: graph generation, the two batch experiments, bound
// reports and single-graph inspection.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "isanneal/errors.hpp"
#include "isanneal/experiments.hpp"
#include "isanneal/graph.hpp"
#include "isanneal/median.hpp"
#include "isanneal/rng.hpp"

namespace {

using namespace isanneal;

// Expands `--config FILE` into `--key=value` tokens placed right after the
// subcommand name, so flags given later on the command line win.
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  std::vector<std::string> out;
  std::vector<std::string> from_file;
  for (std::size_t i = 0; i < args.size(); ++i) {
    std::string path;
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
    } else {
      out.push_back(args[i]);
      continue;
    }
    std::ifstream in(path);
    if (!in) throw ParseError(0, "cannot open config file '" + path + "'");
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      const auto first = line.find_first_not_of(" \t\r");
      if (first == std::string::npos) continue;
      const auto eq = line.find('=');
      if (eq == std::string::npos) throw ParseError(lineno, "expected key = value in " + path);
      auto strip = [](std::string s) {
        const auto a = s.find_first_not_of(" \t\r");
        if (a == std::string::npos) return std::string();
        return s.substr(a, s.find_last_not_of(" \t\r") - a + 1);
      };
      const std::string key = strip(line.substr(0, eq));
      const std::string value = strip(line.substr(eq + 1));
      if (key.empty()) throw ParseError(lineno, "empty key in " + path);
      from_file.push_back("--" + key + "=" + value);
    }
  }
  if (from_file.empty()) return out;
  // out[0] is the program name, out[1] the subcommand (if any).
  const std::size_t at = out.size() >= 2 ? 2 : out.size();
  out.insert(out.begin() + static_cast<std::ptrdiff_t>(at), from_file.begin(), from_file.end());
  return out;
}

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty() && path != "-") {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw ResourceError("cannot open output file '" + path + "'");
    }
  }
  std::ostream& stream() { return file_ ? static_cast<std::ostream&>(*file_) : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

std::string error_type(const std::exception& e) {
  if (dynamic_cast<const ParseError*>(&e)) return "parse_error";
  if (dynamic_cast<const DomainError*>(&e)) return "domain_error";
  if (dynamic_cast<const DimensionError*>(&e)) return "dimension_error";
  if (dynamic_cast<const ResourceError*>(&e)) return "resource_error";
  if (dynamic_cast<const ConvergenceError*>(&e)) return "convergence_error";
  if (dynamic_cast<const std::logic_error*>(&e)) return "invariant_violation";
  return "error";
}

int report_error(const std::string& type, const std::string& message) {
  nlohmann::json j = {{"error", {{"type", type}, {"message", message}}}};
  std::cerr << j.dump() << '\n';
  return 1;
}

struct ExperimentFlags {
  std::string n_list;
  std::string t_rule;
  std::string omega0_rule;
  std::string output;
};

void add_experiment_options(CLI::App* sub, ExperimentConfig& cfg, ExperimentFlags& flags) {
  sub->add_option("--n-list", flags.n_list, "Vertex counts, e.g. 4:12 or 6,8,10");
  sub->add_option("--p", cfg.p, "Erdos-Renyi edge probability")->capture_default_str();
  sub->add_option("--samples", cfg.samples, "Graphs per vertex count")->capture_default_str();
  sub->add_option("--T", flags.t_rule, "Runtime rule, e.g. 100 or 20/n");
  sub->add_option("--omega0", flags.omega0_rule, "Blockade strength rule, e.g. n^2 or 100*n^2");
  sub->add_option("--schedule", cfg.schedule, "fig4, fig3 or constant:OMEGA,DELTA")->capture_default_str();
  sub->add_option("--master-seed", cfg.master_seed, "Master seed")->capture_default_str();
  sub->add_option("--tolerance", cfg.tolerance, "Step-halving tolerance")->capture_default_str();
  sub->add_option("--s-end", cfg.s_end, "Final scaled time in (0, 1]")->capture_default_str();
  sub->add_option("--full-space-max", cfg.full_space_max, "Largest n simulated in the full space")
      ->capture_default_str();
  sub->add_option("--walk-is-limit", cfg.walk_is_limit, "Largest independent-set count for walks")
      ->capture_default_str();
  sub->add_option("--kappa", cfg.kappa, "Hitting-time constant of the closed-form size-2 curves")
      ->capture_default_str();
  sub->add_option("--density-c", cfg.density_c, "Edge-density constant of the asymptotic curve")
      ->capture_default_str();
  sub->add_option("--workers", cfg.workers, "Worker threads (0 = all cores)")->capture_default_str();
  sub->add_flag("--record-time", cfg.record_time, "Fill the wall_time column");
  sub->add_option("-o,--output", flags.output, "Output CSV path (default stdout)");
}

void apply_flags(ExperimentConfig& cfg, const ExperimentFlags& flags) {
  if (!flags.n_list.empty()) cfg.n_list = parse_int_list(flags.n_list);
  if (!flags.t_rule.empty()) cfg.t_rule = PowerRule::parse(flags.t_rule);
  if (!flags.omega0_rule.empty()) cfg.omega0_rule = PowerRule::parse(flags.omega0_rule);
}

int run(int argc, char** argv) {
  CLI::App app{"Independent-set annealing simulator and experiment harness", "isanneal"};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");
  app.add_option("--config", "Key = value file; keys are long flag names, command-line flags override");

  // gen-graph
  auto* gen = app.add_subcommand("gen-graph", "Generate a seeded Erdos-Renyi graph");
  int gen_n = 5;
  double gen_p = 0.5;
  std::uint64_t gen_seed = 1;
  std::uint64_t gen_master = 0;
  int gen_sample = -1;
  std::string gen_out;
  std::string gen_median;
  gen->add_option("--n", gen_n, "Vertex count")->capture_default_str();
  gen->add_option("--p", gen_p, "Edge probability")->capture_default_str();
  gen->add_option("--seed", gen_seed, "Generator seed")->capture_default_str();
  gen->add_option("--master-seed", gen_master, "Derive the seed from this master seed")->capture_default_str();
  gen->add_option("--sample", gen_sample, "Sample index used with --master-seed");
  gen->add_option("-o,--output", gen_out, "Output path (default stdout)");
  gen->add_option("--median", gen_median, "Also write the median graph to this path");

  // fig4 / fig3
  auto* fig4 = app.add_subcommand("fig4", "Large-IS experiment: annealing versus greedy versus exact");
  ExperimentConfig fig4_cfg = ExperimentConfig::fig4_defaults();
  ExperimentFlags fig4_flags;
  add_experiment_options(fig4, fig4_cfg, fig4_flags);

  auto* fig3 = app.add_subcommand("fig3", "Size-2 experiment: constant drive, zero detuning");
  ExperimentConfig fig3_cfg = ExperimentConfig::fig3_defaults();
  ExperimentFlags fig3_flags;
  add_experiment_options(fig3, fig3_cfg, fig3_flags);

  // bound-report
  auto* bound = app.add_subcommand("bound-report", "Leakage bound constants and terms per n");
  BoundReportConfig bound_cfg;
  std::string bound_n, bound_t, bound_w, bound_out;
  bound->add_option("--n-list", bound_n, "Vertex counts");
  bound->add_option("--T", bound_t, "Runtime rule");
  bound->add_option("--omega0", bound_w, "Blockade strength rule");
  bound->add_option("--schedule", bound_cfg.schedule, "Schedule name")->capture_default_str();
  bound->add_option("-o,--output", bound_out, "Output CSV path (default stdout)");

  // single
  auto* single = app.add_subcommand("single", "Full report for one graph as JSON");
  SingleRunConfig single_cfg;
  std::string single_graph, single_out;
  int single_n = 0;
  double single_p = 0.5;
  std::uint64_t single_graph_seed = 1;
  int indent = 2;
  single->add_option("--graph", single_graph, "Graph file");
  single->add_option("--n", single_n, "Generate an ER graph with this many vertices instead");
  single->add_option("--p", single_p, "Edge probability for a generated graph")->capture_default_str();
  single->add_option("--graph-seed", single_graph_seed, "Seed for a generated graph")->capture_default_str();
  single->add_option("--T", single_cfg.t_total, "Runtime")->capture_default_str();
  single->add_option("--omega0", single_cfg.omega0, "Blockade strength (0 means n^2)")->capture_default_str();
  single->add_option("--schedule", single_cfg.schedule, "Built-in schedule")->capture_default_str();
  single->add_option("--schedule-file", single_cfg.schedule_file, "Tabulated schedule file");
  single->add_option("--s-end", single_cfg.s_end, "Final scaled time")->capture_default_str();
  single->add_option("--tolerance", single_cfg.tolerance, "Step-halving tolerance")->capture_default_str();
  single->add_option("--full-space-max", single_cfg.full_space_max, "Full-space vertex guard")
      ->capture_default_str();
  single->add_option("--walk-is-limit", single_cfg.walk_is_limit, "Walk independent-set guard")
      ->capture_default_str();
  single->add_option("--walk-omega", single_cfg.walk_omega, "Walk Rabi frequency")->capture_default_str();
  single->add_option("--walk-delta", single_cfg.walk_delta, "Walk detuning")->capture_default_str();
  single->add_option("--walk-T", single_cfg.walk_t, "Walk runtime (0 means --T)")->capture_default_str();
  single->add_option("--seed", single_cfg.seed, "Measurement sampling seed")->capture_default_str();
  single->add_flag("--include-state", single_cfg.include_state, "Emit final amplitudes");
  single->add_option("--indent", indent, "JSON indent (-1 for compact)")->capture_default_str();
  single->add_option("-o,--output", single_out, "Output path (default stdout)");

  std::vector<std::string> raw(argv, argv + argc);
  std::vector<std::string> args = expand_config(raw);
  std::vector<char*> cargs;
  for (auto& a : args) cargs.push_back(a.data());
  try {
    app.parse(static_cast<int>(cargs.size()), cargs.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report_error("usage_error", e.what());
  }

  if (*gen) {
    const std::uint64_t seed =
        gen_sample >= 0 ? derive_seed(gen_master, static_cast<std::uint64_t>(gen_n),
                                      static_cast<std::uint64_t>(gen_sample))
                        : gen_seed;
    const Graph g = erdos_renyi(gen_n, gen_p, seed);
    Output out(gen_out);
    out.stream() << "# erdos_renyi n=" << gen_n << " p=" << format_double(gen_p) << " seed=" << seed << '\n';
    write_graph(out.stream(), g);
    if (!gen_median.empty()) {
      Output med(gen_median);
      write_median_graph(med.stream(), MedianGraph::build(g));
    }
  } else if (*fig4 || *fig3) {
    ExperimentConfig& cfg = *fig4 ? fig4_cfg : fig3_cfg;
    apply_flags(cfg, *fig4 ? fig4_flags : fig3_flags);
    const ExperimentResult result = *fig4 ? run_fig4(cfg) : run_fig3(cfg);
    Output out(*fig4 ? fig4_flags.output : fig3_flags.output);
    write_csv(out.stream(), result);
  } else if (*bound) {
    if (!bound_n.empty()) bound_cfg.n_list = parse_int_list(bound_n);
    if (!bound_t.empty()) bound_cfg.t_rule = PowerRule::parse(bound_t);
    if (!bound_w.empty()) bound_cfg.omega0_rule = PowerRule::parse(bound_w);
    const auto rows = run_bound_report(bound_cfg);
    Output out(bound_out);
    write_bound_csv(out.stream(), bound_cfg, rows);
  } else if (*single) {
    if (single_graph.empty() == (single_n == 0)) {
      throw DomainError("give exactly one of --graph or --n");
    }
    const Graph g = single_graph.empty() ? erdos_renyi(single_n, single_p, single_graph_seed)
                                         : read_graph_file(single_graph);
    const std::string text = run_single_json(g, single_cfg, indent);
    Output out(single_out);
    out.stream() << text << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const std::exception& e) {
    return report_error(error_type(e), e.what());
  }
}
