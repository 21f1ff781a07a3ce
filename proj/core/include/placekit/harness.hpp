#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "placekit/hpo.hpp"
#include "placekit/mgo.hpp"
#include "placekit/optim.hpp"
#include "placekit/placer.hpp"
#include "placekit/sp.hpp"

namespace placekit {

enum class Formulation : int { sp = 0, mgo = 1, hpo = 2 };

const char* to_string(Formulation f);
Formulation formulation_from_string(const std::string& s);

struct HarnessConfig {
  std::string benchmark;            // .aux / .json path or synth:... spec
  Formulation placer = Formulation::mgo;
  Algo algo = Algo::ea;
  bool eval_gp_hpwl = false;
  std::optional<long> budget;       // default 10k MP / 200 GP
  std::optional<int> pop_size;      // EA/PSO default 50; ES formula default
  std::optional<int> n_macros;      // select_macros override
  int grid = 64;                    // MGO grid resolution
  std::vector<std::uint64_t> seeds = {0, 1, 2, 3, 4};
  double density = 1.0;             // target density for GP-stage placement
  std::string out_dir = ".";
  int workers = 1;
  bool trace_genotypes = false;
  double sigma0 = 0.5;              // ES initial step size
  int shuffle_m = 0;                // MGO shuffle operator width; 0 = default

  // Inner placer used for GP-HPWL evaluation of sp/mgo decodes.
  int gp_bins = 32;
  int gp_max_iters = 300;
  double gp_stop_overflow = 0.1;

  long effective_budget() const {
    return budget.value_or(eval_gp_hpwl ? 200 : 10000);
  }
  void validate() const;
};

struct TraceRecord {
  long index = 0;  // 1-based evaluation index
  std::string digest;
  double fitness = 0.0;
  double opt_time_s = 0.0;
  double eval_time_s = 0.0;
  std::string genotype_json;  // optional, behind trace_genotypes
  std::string config_json;    // decoded placer config for HPO runs
};

struct Trace {
  int schema_version = 1;
  std::string benchmark;
  Formulation placer = Formulation::mgo;
  Algo algo = Algo::ea;
  bool eval_gp_hpwl = false;
  std::uint64_t seed = 0;
  long budget = 0;
  std::vector<TraceRecord> records;
  std::vector<double> best_curve;
  double best_fitness = 0.0;
  std::string best_genotype_json;
  std::vector<double> final_x, final_y;  // placement of the best genotype
  double optimization_time_s = 0.0;
  double evaluation_time_s = 0.0;
  double total_time_s = 0.0;
  std::string config_json;  // harness config snapshot

  std::string to_json() const;
  std::string curve_csv() const;
  void write(const std::filesystem::path& dir, const std::string& stem) const;
};

Trace trace_from_json_file(const std::filesystem::path& path);

// Loads a benchmark by path suffix (.aux -> Bookshelf, .json -> JSON) or a
// synth:<macros>:<cells>:<nets>:<seed> spec. Applies the n_macros override.
Netlist load_benchmark(const HarnessConfig& config);

// HPWL over nets with >= 2 pins on macros/terminals, counting only those
// pins, plus a legality penalty when macros overlap.
double evaluate_mp_hpwl(const Placement& placement);

// Freezes the macros at their placed coordinates, re-places every other
// movable module with the inner placer, and returns total HPWL over all
// nets. Diverged runs report worst fitness.
struct GpEvaluation {
  double hpwl = 0.0;
  bool diverged = false;
};
GpEvaluation evaluate_gp_hpwl(const Placement& macro_placement,
                              const Netlist& netlist,
                              const PlacerConfig& config, std::uint64_t seed);

// Bundles the problem construction for one (netlist, config) pair: genotype
// space, mutation operator, and the fitness evaluator.
Problem build_problem(const Netlist& netlist, const HarnessConfig& config);

// Decode the best genotype back into a placement for rendering/auditing.
Placement decode_genotype(const Genotype& genotype, const Netlist& netlist,
                          const HarnessConfig& config, std::uint64_t seed);

// Runs config.seeds independent searches, persisting one trace (JSON + CSV +
// placement JSON) per seed into config.out_dir. Returns the traces.
std::vector<Trace> run_experiment(const HarnessConfig& config);
std::vector<Trace> run_experiment(const HarnessConfig& config,
                                  const Netlist& netlist);

// --- Summaries --------------------------------------------------------------

struct SummaryCell {
  int runs = 0;
  double mean = 0.0;
  double stddev = 0.0;
  int rank = 0;
};

struct SummaryTable {
  std::vector<std::string> benchmarks;
  std::vector<std::string> methods;  // "<placer>-<algo>"
  std::map<std::pair<std::string, std::string>, SummaryCell> cells;
  std::map<std::string, double> average_rank;

  std::string to_csv() const;
  std::string to_text() const;
};

SummaryTable summarize(const std::vector<Trace>& traces);

// --- Rendering ---------------------------------------------------------------

struct SvgOptions {
  bool draw_cells = false;
  bool draw_ids = true;
  double width_px = 800.0;
};

std::string render_svg(const Placement& placement, const SvgOptions& options);
void render_svg_file(const Placement& placement, const SvgOptions& options,
                     const std::filesystem::path& out);

}  // namespace placekit
