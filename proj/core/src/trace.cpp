#include <fstream>

#include <json.hpp>

#include "placekit/harness.hpp"

namespace placekit {

using nlohmann::json;
using nlohmann::ordered_json;

const char* to_string(Formulation f) {
  switch (f) {
    case Formulation::sp: return "sp";
    case Formulation::mgo: return "mgo";
    case Formulation::hpo: return "hpo";
  }
  return "?";
}

Formulation formulation_from_string(const std::string& s) {
  if (s == "sp") return Formulation::sp;
  if (s == "mgo") return Formulation::mgo;
  if (s == "hpo") return Formulation::hpo;
  throw ConfigError("unknown placer formulation '" + s + "'");
}

std::string Trace::to_json() const {
  ordered_json root;
  root["schema_version"] = schema_version;
  root["benchmark"] = benchmark;
  root["placer"] = to_string(placer);
  root["algo"] = to_string(algo);
  root["eval_gp_hpwl"] = eval_gp_hpwl;
  root["seed"] = seed;
  root["budget"] = budget;
  if (!config_json.empty()) root["config"] = json::parse(config_json);
  root["records"] = ordered_json::array();
  for (const TraceRecord& r : records) {
    ordered_json jr;
    jr["i"] = r.index;
    jr["digest"] = r.digest;
    jr["fitness"] = r.fitness;
    jr["opt_time_s"] = r.opt_time_s;
    jr["eval_time_s"] = r.eval_time_s;
    if (!r.genotype_json.empty()) jr["genotype"] = json::parse(r.genotype_json);
    if (!r.config_json.empty()) jr["placer_config"] = json::parse(r.config_json);
    root["records"].push_back(std::move(jr));
  }
  root["best_curve"] = best_curve;
  root["best_fitness"] = best_fitness;
  if (!best_genotype_json.empty())
    root["best_genotype"] = json::parse(best_genotype_json);
  root["final_placement"] = {{"x", final_x}, {"y", final_y}};
  root["timing"] = {{"optimization_s", optimization_time_s},
                    {"evaluation_s", evaluation_time_s},
                    {"total_s", total_time_s}};
  return root.dump(2);
}

std::string Trace::curve_csv() const {
  std::string out = "eval_index,best_fitness,opt_time_s,eval_time_s\n";
  char buf[128];
  for (std::size_t i = 0; i < records.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%ld,%.17g,%.6f,%.6f\n", records[i].index,
                  best_curve[i], records[i].opt_time_s,
                  records[i].eval_time_s);
    out += buf;
  }
  return out;
}

void Trace::write(const std::filesystem::path& dir,
                  const std::string& stem) const {
  std::filesystem::create_directories(dir);
  {
    std::ofstream f(dir / (stem + ".trace.json"));
    if (!f) throw DataError("cannot write trace to " + (dir / stem).string());
    f << to_json() << "\n";
  }
  {
    std::ofstream f(dir / (stem + ".curve.csv"));
    f << curve_csv();
  }
  {
    ordered_json jp;
    jp["benchmark"] = benchmark;
    jp["x"] = final_x;
    jp["y"] = final_y;
    std::ofstream f(dir / (stem + ".placement.json"));
    f << jp.dump(2) << "\n";
  }
}

Trace trace_from_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open trace " + path.string());
  json root;
  try {
    root = json::parse(in);
  } catch (const json::parse_error& e) {
    throw DataError(path.string() + ": invalid JSON: " + e.what());
  }
  Trace t;
  t.schema_version = root.value("schema_version", 1);
  t.benchmark = root.value("benchmark", "");
  t.placer = formulation_from_string(root.value("placer", "mgo"));
  t.algo = algo_from_string(root.value("algo", "ea"));
  t.eval_gp_hpwl = root.value("eval_gp_hpwl", false);
  t.seed = root.value("seed", 0ull);
  t.budget = root.value("budget", 0l);
  if (root.contains("best_curve"))
    t.best_curve = root["best_curve"].get<std::vector<double>>();
  t.best_fitness = root.value("best_fitness", 0.0);
  if (root.contains("final_placement")) {
    t.final_x = root["final_placement"].value("x", std::vector<double>{});
    t.final_y = root["final_placement"].value("y", std::vector<double>{});
  }
  if (root.contains("records")) {
    for (const json& jr : root["records"]) {
      TraceRecord r;
      r.index = jr.value("i", 0l);
      r.digest = jr.value("digest", "");
      r.fitness = jr.value("fitness", 0.0);
      r.opt_time_s = jr.value("opt_time_s", 0.0);
      r.eval_time_s = jr.value("eval_time_s", 0.0);
      t.records.push_back(std::move(r));
    }
  }
  if (root.contains("timing")) {
    t.optimization_time_s = root["timing"].value("optimization_s", 0.0);
    t.evaluation_time_s = root["timing"].value("evaluation_s", 0.0);
    t.total_time_s = root["timing"].value("total_s", 0.0);
  }
  return t;
}

}  // namespace placekit
