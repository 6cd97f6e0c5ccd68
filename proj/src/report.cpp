#include "rlu/report.hpp"

#include <sstream>

#include <json.hpp>

namespace rlu {

using nlohmann::json;

void SolveReport::finalize() {
  const double count = systems.empty() ? 1.0 : static_cast<double>(systems.size());
  mean_analyze_ms = mean_scatter_ms = mean_factor_ms = mean_trisolve_ms = mean_refine_ms = 0.0;
  systems_solved = 0;
  for (const auto& r : systems) {
    mean_analyze_ms += r.analyze_ms;
    mean_scatter_ms += r.scatter_ms;
    mean_factor_ms += r.factor_ms;
    mean_trisolve_ms += r.trisolve_ms;
    mean_refine_ms += r.refine_ms;
    if (r.status == "ok") ++systems_solved;
  }
  mean_analyze_ms /= count;
  mean_scatter_ms /= count;
  mean_factor_ms /= count;
  mean_trisolve_ms /= count;
  mean_refine_ms /= count;
}

std::string report_to_json(const SolveReport& report) {
  json out;
  out["systems"] = json::array();
  for (const auto& r : report.systems) {
    out["systems"].push_back({{"k", r.k},
                              {"n", r.n},
                              {"nnz", r.nnz},
                              {"analyze_ms", r.analyze_ms},
                              {"scatter_ms", r.scatter_ms},
                              {"factor_ms", r.factor_ms},
                              {"trisolve_ms", r.trisolve_ms},
                              {"refine_ms", r.refine_ms},
                              {"refine_iters", r.refine_iters},
                              {"relres_direct", r.relres_direct},
                              {"relres_final", r.relres_final},
                              {"status", r.status}});
  }
  out["aggregate"] = {{"total_ms", report.total_ms},
                      {"mean_phase_ms",
                       {{"analyze", report.mean_analyze_ms},
                        {"scatter", report.mean_scatter_ms},
                        {"factor", report.mean_factor_ms},
                        {"trisolve", report.mean_trisolve_ms},
                        {"refine", report.mean_refine_ms}}},
                      {"systems_solved", report.systems_solved},
                      {"reanalysis_count", report.reanalysis_count}};
  return out.dump(2);
}

SolveReport report_from_json(const std::string& text) {
  json in;
  try {
    in = json::parse(text);
  } catch (const json::exception& e) {
    throw IoError(std::string("malformed report: ") + e.what());
  }
  SolveReport rep;
  try {
    for (const auto& jr : in.at("systems")) {
      SystemRecord r;
      r.k = jr.at("k").get<index_t>();
      r.n = jr.at("n").get<index_t>();
      r.nnz = jr.at("nnz").get<index_t>();
      r.analyze_ms = jr.at("analyze_ms").get<double>();
      r.scatter_ms = jr.at("scatter_ms").get<double>();
      r.factor_ms = jr.at("factor_ms").get<double>();
      r.trisolve_ms = jr.at("trisolve_ms").get<double>();
      r.refine_ms = jr.at("refine_ms").get<double>();
      r.refine_iters = jr.at("refine_iters").get<int>();
      r.relres_direct = jr.at("relres_direct").get<double>();
      r.relres_final = jr.at("relres_final").get<double>();
      r.status = jr.at("status").get<std::string>();
      rep.systems.push_back(std::move(r));
    }
    const auto& agg = in.at("aggregate");
    rep.total_ms = agg.at("total_ms").get<double>();
    const auto& mean = agg.at("mean_phase_ms");
    rep.mean_analyze_ms = mean.at("analyze").get<double>();
    rep.mean_scatter_ms = mean.at("scatter").get<double>();
    rep.mean_factor_ms = mean.at("factor").get<double>();
    rep.mean_trisolve_ms = mean.at("trisolve").get<double>();
    rep.mean_refine_ms = mean.at("refine").get<double>();
    rep.systems_solved = agg.at("systems_solved").get<index_t>();
    rep.reanalysis_count = agg.at("reanalysis_count").get<index_t>();
  } catch (const json::exception& e) {
    throw IoError(std::string("malformed report: ") + e.what());
  }
  return rep;
}

std::string report_to_csv(const SolveReport& report) {
  std::ostringstream out;
  out.precision(17);
  out << "k,n,nnz,analyze_ms,scatter_ms,factor_ms,trisolve_ms,refine_ms,refine_iters,"
         "relres_direct,relres_final,status\n";
  for (const auto& r : report.systems) {
    out << r.k << ',' << r.n << ',' << r.nnz << ',' << r.analyze_ms << ',' << r.scatter_ms << ','
        << r.factor_ms << ',' << r.trisolve_ms << ',' << r.refine_ms << ',' << r.refine_iters
        << ',' << r.relres_direct << ',' << r.relres_final << ',' << r.status << '\n';
  }
  out << "# total_ms," << report.total_ms << '\n';
  out << "# mean_analyze_ms," << report.mean_analyze_ms << '\n';
  out << "# mean_scatter_ms," << report.mean_scatter_ms << '\n';
  out << "# mean_factor_ms," << report.mean_factor_ms << '\n';
  out << "# mean_trisolve_ms," << report.mean_trisolve_ms << '\n';
  out << "# mean_refine_ms," << report.mean_refine_ms << '\n';
  out << "# systems_solved," << report.systems_solved << '\n';
  out << "# reanalysis_count," << report.reanalysis_count << '\n';
  return out.str();
}

}  // namespace rlu
