#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>

#include <nlohmann/json.hpp>

#include "odirl/csv.hpp"
#include "odirl/experiment.hpp"

namespace odirl::harness {

namespace fs = std::filesystem;

namespace {

struct EvalPoint {
  int iteration;
  double gt_return;
  double success;
};

std::string run_method(const fs::path& dir) {
  std::ifstream is(dir / "config.json");
  if (!is) throw Error("aggregate: '" + dir.string() + "' has no config.json");
  nlohmann::json j = nlohmann::json::parse(is);
  return j.at("method").get<std::string>();
}

std::vector<EvalPoint> eval_points(const fs::path& dir) {
  const csv::Table t = csv::read_file((dir / "progress.csv").string());
  const int c_it = t.column("iteration");
  const int c_ret = t.column("gt_return");
  const int c_succ = t.column("success_rate");
  if (c_it < 0 || c_ret < 0 || c_succ < 0) {
    throw Error("aggregate: '" + dir.string() + "/progress.csv' is missing required columns");
  }
  std::vector<EvalPoint> out;
  for (const auto& row : t.rows) {
    if (row[c_ret].empty()) continue;
    out.push_back({static_cast<int>(csv::parse_double(row[c_it])), csv::parse_double(row[c_ret]),
                   row[c_succ].empty() ? 0.0 : csv::parse_double(row[c_succ])});
  }
  return out;
}

}  // namespace

std::vector<AggregateRow> aggregate(const std::vector<std::string>& run_dirs) {
  if (run_dirs.empty()) throw Error("aggregate: no run directories");
  std::map<std::string, std::vector<std::pair<std::string, std::vector<EvalPoint>>>> by_method;
  for (const auto& d : run_dirs) by_method[run_method(d)].emplace_back(d, eval_points(d));

  std::vector<AggregateRow> out;
  for (const auto& [method, runs] : by_method) {
    const auto& ref = runs.front().second;
    for (const auto& [dir, pts] : runs) {
      bool same = pts.size() == ref.size();
      for (std::size_t i = 0; same && i < pts.size(); ++i) same = pts[i].iteration == ref[i].iteration;
      if (!same) {
        throw Error("aggregate: evaluation grid of '" + dir + "' differs from '" + runs.front().first +
                    "' (method " + method + ")");
      }
    }
    for (std::size_t i = 0; i < ref.size(); ++i) {
      AggregateRow row;
      row.method = method;
      row.iteration = ref[i].iteration;
      row.min = row.max = ref[i].gt_return;
      double sum = 0.0, succ = 0.0;
      for (const auto& [dir, pts] : runs) {
        sum += pts[i].gt_return;
        succ += pts[i].success;
        row.min = std::min(row.min, pts[i].gt_return);
        row.max = std::max(row.max, pts[i].gt_return);
      }
      row.num_runs = static_cast<int>(runs.size());
      row.mean = sum / row.num_runs;
      row.success_mean = succ / row.num_runs;
      out.push_back(row);
    }
  }
  return out;
}

void write_aggregate_csv(const std::string& path, const std::vector<AggregateRow>& rows) {
  std::ofstream os(path);
  if (!os) throw Error("cannot open '" + path + "' for writing");
  os << "method,iteration,mean_return,min_return,max_return,mean_success_rate,num_runs\n";
  for (const auto& r : rows) {
    os << r.method << ',' << r.iteration << ',' << csv::format_double(r.mean) << ',' << csv::format_double(r.min)
       << ',' << csv::format_double(r.max) << ',' << csv::format_double(r.success_mean) << ',' << r.num_runs
       << '\n';
  }
}

}  // namespace odirl::harness
