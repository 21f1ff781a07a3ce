#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "placekit/harness.hpp"

namespace placekit {

using nlohmann::ordered_json;

void HarnessConfig::validate() const {
  if (placer == Formulation::sp && algo != Algo::sa && algo != Algo::ea)
    throw ConfigError("sp supports only sa and ea (permutation search space)");
  if (effective_budget() < 1) throw ConfigError("budget must be >= 1");
  if (grid < 1) throw ConfigError("grid must be >= 1");
  if (workers < 1) throw ConfigError("workers must be >= 1");
  if (seeds.empty()) throw ConfigError("at least one seed is required");
  if (benchmark.empty()) throw ConfigError("benchmark is required");
  if (density <= 0.0) throw ConfigError("density must be > 0");
}

namespace {

std::string harness_config_json(const HarnessConfig& c) {
  ordered_json j;
  j["benchmark"] = c.benchmark;
  j["placer"] = to_string(c.placer);
  j["algo"] = to_string(c.algo);
  j["eval_gp_hpwl"] = c.eval_gp_hpwl;
  j["budget"] = c.effective_budget();
  if (c.pop_size) j["pop_size"] = *c.pop_size;
  if (c.n_macros) j["n_macros"] = *c.n_macros;
  j["grid"] = c.grid;
  j["density"] = c.density;
  j["workers"] = c.workers;
  j["sigma"] = c.sigma0;
  return j.dump();
}

std::string genotype_json(const Genotype& g) {
  ordered_json j;
  if (const auto* perm = std::get_if<SpGenotype>(&g)) {
    j["pi_plus"] = perm->pi_plus;
    j["pi_minus"] = perm->pi_minus;
  } else {
    j = std::get<BoxVector>(g);
  }
  return j.dump();
}

PlacerConfig gp_placer_config(const HarnessConfig& c) {
  PlacerConfig pc;
  pc.bins_x = pc.bins_y = c.gp_bins;
  pc.max_iters = c.gp_max_iters;
  pc.stop_overflow = c.gp_stop_overflow;
  pc.target_density = c.density;
  return pc;
}

}  // namespace

Netlist load_benchmark(const HarnessConfig& config) {
  const std::string& b = config.benchmark;
  Netlist netlist;
  if (b.rfind("synth:", 0) == 0) {
    // synth:<macros>:<cells>:<nets>:<seed>
    int macros = 0, cells = 0, nets = 0;
    long seed = 0;
    if (std::sscanf(b.c_str(), "synth:%d:%d:%d:%ld", &macros, &cells, &nets,
                    &seed) != 4)
      throw ConfigError("bad synthetic spec '" + b +
                        "', expected synth:<macros>:<cells>:<nets>:<seed>");
    netlist = generate_synthetic(macros, cells, nets, PinsPerNet{2, 6},
                                 Canvas{0, 0, 100, 100},
                                 static_cast<std::uint64_t>(seed));
  } else if (b.size() > 4 && b.substr(b.size() - 4) == ".aux") {
    netlist = parse_bookshelf(b);
  } else if (b.size() > 5 && b.substr(b.size() - 5) == ".json") {
    netlist = parse_json_file(b);
  } else {
    throw ConfigError("benchmark must be a .aux, .json, or synth:... spec: " + b);
  }
  if (config.n_macros)
    netlist.set_macro_ids(select_macros(netlist, *config.n_macros));
  if (netlist.macro_ids().empty())
    throw DataError("benchmark has no macros to place");
  return netlist;
}

double evaluate_mp_hpwl(const Placement& placement) {
  const Netlist& nl = *placement.netlist;
  double sum = 0.0;
  for (const Net& net : nl.nets()) {
    double min_x = 0.0, max_x = 0.0, min_y = 0.0, max_y = 0.0;
    int counted = 0;
    for (int pid : net.pins) {
      const Pin& p = nl.pin(pid);
      const Module& owner = nl.module(p.owner);
      if (!(owner.kind == ModuleKind::terminal || nl.is_macro(p.owner)))
        continue;
      const double px = placement.pin_x(pid);
      const double py = placement.pin_y(pid);
      if (counted == 0) {
        min_x = max_x = px;
        min_y = max_y = py;
      } else {
        min_x = std::min(min_x, px);
        max_x = std::max(max_x, px);
        min_y = std::min(min_y, py);
        max_y = std::max(max_y, py);
      }
      ++counted;
    }
    if (counted >= 2) sum += (max_x - min_x) + (max_y - min_y);
  }
  const double overlap = overlap_area(placement, nl.macro_ids());
  if (overlap > 0.0)
    sum += legality_penalty_scale(nl.canvas()) * overlap;
  return sum;
}

GpEvaluation evaluate_gp_hpwl(const Placement& macro_placement,
                              const Netlist& netlist,
                              const PlacerConfig& config, std::uint64_t seed) {
  std::vector<std::uint8_t> frozen(netlist.modules().size(), 0);
  for (int id : netlist.macro_ids()) frozen[id] = 1;
  const PlacerResult result =
      run_placement(netlist, macro_placement, config, frozen, seed);
  GpEvaluation out;
  if (result.report.status == PlacerStatus::diverged) {
    out.diverged = true;
    out.hpwl = legality_penalty_scale(netlist.canvas());
    return out;
  }
  out.hpwl = total_hpwl(result.placement);
  return out;
}

Problem build_problem(const Netlist& netlist, const HarnessConfig& config) {
  config.validate();
  Problem problem;
  problem.budget = config.effective_budget();
  const Canvas& canvas = netlist.canvas();
  const double worst = legality_penalty_scale(canvas);
  const int k = netlist.macro_count();
  const PlacerConfig gp_config = gp_placer_config(config);

  switch (config.placer) {
    case Formulation::sp: {
      problem.space = SpaceDesc::permutation(k);
      problem.mutation = MutationKind::inversion;
      if (config.eval_gp_hpwl) {
        problem.evaluate = [&netlist, gp_config, config](const Genotype& g) {
          const SpDecode d = decode_sp(std::get<SpGenotype>(g), netlist);
          if (!d.in_canvas)
            return evaluate_mp_hpwl(d.placement) +
                   legality_penalty_scale(netlist.canvas()) * d.exceed_area;
          return evaluate_gp_hpwl(d.placement, netlist, gp_config,
                                  config.seeds.front())
              .hpwl;
        };
      } else {
        problem.evaluate = [&netlist](const Genotype& g) {
          const SpDecode d = decode_sp(std::get<SpGenotype>(g), netlist);
          double fitness = evaluate_mp_hpwl(d.placement);
          if (!d.in_canvas)
            fitness += legality_penalty_scale(netlist.canvas()) * d.exceed_area;
          return fitness;
        };
      }
      break;
    }
    case Formulation::mgo: {
      std::vector<double> lo(2 * k), hi(2 * k);
      for (int i = 0; i < k; ++i) {
        lo[2 * i] = canvas.x;
        hi[2 * i] = canvas.x + canvas.width;
        lo[2 * i + 1] = canvas.y;
        hi[2 * i + 1] = canvas.y + canvas.height;
      }
      problem.space = SpaceDesc::box_of(std::move(lo), std::move(hi));
      problem.mutation = MutationKind::shuffle_pairs;
      problem.shuffle_m = config.shuffle_m;
      const int grid = config.grid;
      if (config.eval_gp_hpwl) {
        problem.evaluate = [&netlist, grid, worst, gp_config,
                            config](const Genotype& g) {
          const MgoDecode d = decode_mgo(
              MgoGenotype(std::get<BoxVector>(g), netlist.canvas()), netlist,
              grid);
          if (!d.feasible) return worst;
          return evaluate_gp_hpwl(d.placement, netlist, gp_config,
                                  config.seeds.front())
              .hpwl;
        };
      } else {
        problem.evaluate = [&netlist, grid, worst](const Genotype& g) {
          const MgoDecode d = decode_mgo(
              MgoGenotype(std::get<BoxVector>(g), netlist.canvas()), netlist,
              grid);
          if (!d.feasible) return worst;
          return evaluate_mp_hpwl(d.placement);
        };
      }
      break;
    }
    case Formulation::hpo: {
      problem.space = SpaceDesc::unit_box(HpoGenotype::kDim);
      problem.mutation = MutationKind::random_reset;
      const std::uint64_t seed = config.seeds.front();
      if (config.eval_gp_hpwl) {
        problem.evaluate = [&netlist, seed](const Genotype& g) {
          const HpoEvaluation e = evaluate_hpo(
              HpoGenotype(std::get<BoxVector>(g)), netlist,
              HpoScope::all_modules, seed);
          if (e.diverged) return legality_penalty_scale(netlist.canvas());
          const PlacerConfig pc = decode_hpo(HpoGenotype(std::get<BoxVector>(g)));
          return evaluate_gp_hpwl(e.placement, netlist, pc, seed).hpwl;
        };
      } else {
        problem.evaluate = [&netlist, seed](const Genotype& g) {
          const HpoEvaluation e = evaluate_hpo(
              HpoGenotype(std::get<BoxVector>(g)), netlist,
              HpoScope::all_modules, seed);
          if (e.diverged) return legality_penalty_scale(netlist.canvas());
          return evaluate_mp_hpwl(e.placement);
        };
      }
      break;
    }
  }
  return problem;
}

Placement decode_genotype(const Genotype& genotype, const Netlist& netlist,
                          const HarnessConfig& config, std::uint64_t seed) {
  switch (config.placer) {
    case Formulation::sp:
      return decode_sp(std::get<SpGenotype>(genotype), netlist).placement;
    case Formulation::mgo:
      return decode_mgo(
                 MgoGenotype(std::get<BoxVector>(genotype), netlist.canvas()),
                 netlist, config.grid)
          .placement;
    case Formulation::hpo:
      return evaluate_hpo(HpoGenotype(std::get<BoxVector>(genotype)), netlist,
                          HpoScope::all_modules, seed)
          .placement;
  }
  throw ConfigError("unknown formulation");
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Evaluates a batch with a fixed worker count; results land at their batch
// index so the outcome is identical for any worker count.
void evaluate_batch(const Problem& problem, const std::vector<Genotype>& batch,
                    int workers, std::vector<double>& fitness,
                    std::vector<double>& eval_time) {
  const std::size_t n = batch.size();
  fitness.assign(n, 0.0);
  eval_time.assign(n, 0.0);
  const int n_workers = std::max(1, std::min<int>(workers, static_cast<int>(n)));
  if (n_workers == 1) {
    for (std::size_t i = 0; i < n; ++i) {
      const auto t0 = Clock::now();
      fitness[i] = problem.evaluate(batch[i]);
      eval_time[i] = seconds_since(t0);
    }
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(n_workers);
  for (int w = 0; w < n_workers; ++w) {
    pool.emplace_back([&]() {
      for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
        const auto t0 = Clock::now();
        fitness[i] = problem.evaluate(batch[i]);
        eval_time[i] = seconds_since(t0);
      }
    });
  }
  for (std::thread& t : pool) t.join();
}

Trace run_one_seed(const HarnessConfig& config, const Netlist& netlist,
                   const Problem& problem, std::uint64_t seed) {
  OptimizerSettings settings;
  settings.seed = seed;
  settings.pop_size = config.pop_size;
  settings.sigma0 = config.sigma0;
  settings.shuffle_m = config.shuffle_m;
  std::unique_ptr<Optimizer> optimizer =
      make_optimizer(config.algo, problem, settings);

  Trace trace;
  trace.benchmark = config.benchmark;
  trace.placer = config.placer;
  trace.algo = config.algo;
  trace.eval_gp_hpwl = config.eval_gp_hpwl;
  trace.seed = seed;
  trace.budget = problem.budget;
  trace.config_json = harness_config_json(config);

  const auto run_start = Clock::now();
  std::vector<double> fitness, eval_time;
  long index = 0;
  double running_best = std::numeric_limits<double>::infinity();
  while (!optimizer->done()) {
    const auto ask_start = Clock::now();
    const std::vector<Genotype> batch = optimizer->ask();
    double opt_time = seconds_since(ask_start);

    evaluate_batch(problem, batch, config.workers, fitness, eval_time);

    const auto tell_start = Clock::now();
    optimizer->tell(batch, fitness);
    opt_time += seconds_since(tell_start);

    const double opt_share = opt_time / static_cast<double>(batch.size());
    for (std::size_t i = 0; i < batch.size(); ++i) {
      TraceRecord rec;
      rec.index = ++index;
      rec.digest = genotype_digest(batch[i]);
      rec.fitness = fitness[i];
      rec.opt_time_s = opt_share;
      rec.eval_time_s = eval_time[i];
      if (config.trace_genotypes) rec.genotype_json = genotype_json(batch[i]);
      if (config.placer == Formulation::hpo)
        rec.config_json =
            decode_hpo(HpoGenotype(std::get<BoxVector>(batch[i]))).to_json();
      trace.records.push_back(std::move(rec));
      running_best = std::min(running_best, fitness[i]);
      trace.best_curve.push_back(running_best);
      trace.evaluation_time_s += eval_time[i];
    }
    trace.optimization_time_s += opt_time;
  }
  trace.total_time_s = seconds_since(run_start);
  trace.best_fitness = optimizer->best().fitness;
  trace.best_genotype_json = genotype_json(optimizer->best().genotype);

  const Placement best_placement =
      decode_genotype(optimizer->best().genotype, netlist, config,
                      config.seeds.front());
  trace.final_x = best_placement.x;
  trace.final_y = best_placement.y;
  return trace;
}

}  // namespace

std::vector<Trace> run_experiment(const HarnessConfig& config,
                                  const Netlist& netlist) {
  config.validate();
  const Problem problem = build_problem(netlist, config);
  std::vector<Trace> traces;
  for (std::uint64_t seed : config.seeds) {
    Trace trace = run_one_seed(config, netlist, problem, seed);
    std::ostringstream stem;
    std::filesystem::path bench_path(config.benchmark);
    std::string bench_stem = bench_path.stem().string();
    for (char& ch : bench_stem)
      if (ch == ':' || ch == '/' || ch == '\\') ch = '-';
    stem << bench_stem << "_" << to_string(config.placer) << "_"
         << to_string(config.algo) << (config.eval_gp_hpwl ? "_gp" : "")
         << "_seed" << seed;
    trace.write(config.out_dir, stem.str());
    traces.push_back(std::move(trace));
  }
  return traces;
}

std::vector<Trace> run_experiment(const HarnessConfig& config) {
  const Netlist netlist = load_benchmark(config);
  return run_experiment(config, netlist);
}

}  // namespace placekit
