#include <algorithm>
#include <cmath>
#include <iomanip>
#include <set>
#include <sstream>

#include "placekit/harness.hpp"

namespace placekit {

SummaryTable summarize(const std::vector<Trace>& traces) {
  SummaryTable table;
  std::map<std::pair<std::string, std::string>, std::vector<double>> finals;
  std::set<std::string> benchmarks, methods;
  for (const Trace& t : traces) {
    const std::string method =
        std::string(to_string(t.placer)) + "-" + to_string(t.algo);
    benchmarks.insert(t.benchmark);
    methods.insert(method);
    finals[{t.benchmark, method}].push_back(t.best_fitness);
  }
  table.benchmarks.assign(benchmarks.begin(), benchmarks.end());
  table.methods.assign(methods.begin(), methods.end());

  for (const auto& [key, values] : finals) {
    SummaryCell cell;
    cell.runs = static_cast<int>(values.size());
    double sum = 0.0;
    for (double v : values) sum += v;
    cell.mean = sum / cell.runs;
    double ss = 0.0;
    for (double v : values) ss += (v - cell.mean) * (v - cell.mean);
    cell.stddev = cell.runs > 1 ? std::sqrt(ss / (cell.runs - 1)) : 0.0;
    table.cells[key] = cell;
  }

  // Per-benchmark rank by mean over the methods present; average over the
  // benchmarks where the method appears.
  std::map<std::string, std::pair<double, int>> rank_acc;
  for (const std::string& bench : table.benchmarks) {
    std::vector<std::pair<double, std::string>> present;
    for (const std::string& method : table.methods) {
      auto it = table.cells.find({bench, method});
      if (it != table.cells.end()) present.push_back({it->second.mean, method});
    }
    std::sort(present.begin(), present.end());
    for (std::size_t r = 0; r < present.size(); ++r) {
      table.cells[{bench, present[r].second}].rank = static_cast<int>(r + 1);
      auto& acc = rank_acc[present[r].second];
      acc.first += static_cast<double>(r + 1);
      acc.second += 1;
    }
  }
  for (const auto& [method, acc] : rank_acc)
    table.average_rank[method] = acc.first / acc.second;
  return table;
}

std::string SummaryTable::to_csv() const {
  std::ostringstream os;
  os << "benchmark,method,runs,mean,std,rank\n";
  for (const std::string& bench : benchmarks) {
    for (const std::string& method : methods) {
      auto it = cells.find({bench, method});
      if (it == cells.end()) {
        os << bench << "," << method << ",0,,,\n";
        continue;
      }
      const SummaryCell& c = it->second;
      os << bench << "," << method << "," << c.runs << "," << c.mean << ","
         << c.stddev << "," << c.rank << "\n";
    }
  }
  os << "\nmethod,average_rank\n";
  for (const std::string& method : methods) {
    auto it = average_rank.find(method);
    os << method << ",";
    if (it != average_rank.end()) os << it->second;
    os << "\n";
  }
  return os.str();
}

std::string SummaryTable::to_text() const {
  std::ostringstream os;
  std::size_t bench_w = 9;
  for (const std::string& b : benchmarks) bench_w = std::max(bench_w, b.size());

  os << std::left << std::setw(static_cast<int>(bench_w) + 2) << "benchmark";
  for (const std::string& m : methods)
    os << std::setw(24) << m;
  os << "\n";
  for (const std::string& bench : benchmarks) {
    os << std::setw(static_cast<int>(bench_w) + 2) << bench;
    for (const std::string& method : methods) {
      auto it = cells.find({bench, method});
      if (it == cells.end()) {
        os << std::setw(24) << "missing";
        continue;
      }
      std::ostringstream cell;
      cell << std::scientific << std::setprecision(3) << it->second.mean
           << " +- " << it->second.stddev << " (" << it->second.rank << ")";
      os << std::setw(24) << cell.str();
    }
    os << "\n";
  }
  os << std::setw(static_cast<int>(bench_w) + 2) << "avg rank";
  for (const std::string& method : methods) {
    auto it = average_rank.find(method);
    std::ostringstream cell;
    if (it != average_rank.end())
      cell << std::fixed << std::setprecision(2) << it->second;
    os << std::setw(24) << cell.str();
  }
  os << "\n";
  return os.str();
}

}  // namespace placekit
