#include "serialize.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace kramers {

std::string csv_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json point_json(const Point& p, int dim) {
  if (dim == 1) return json::array({p[0]});
  return json::array({p[0], p[1]});
}

json verdict_json(const Verdict& v, int dim) {
  json w = json::array();
  for (const auto& p : v.witnesses) w.push_back(point_json(p, dim));
  return {{"value", v.value ? json(*v.value) : json(nullptr)}, {"detail", v.detail}, {"witnesses", w}};
}

json atlas_json(const LandscapeAtlas& atlas) {
  const int d = atlas.dim;
  json crit = json::array();
  for (std::size_t i = 0; i < atlas.interior_criticals.size(); ++i) {
    const auto& c = atlas.interior_criticals[i];
    json e = {{"id", i},
              {"location", point_json(c.location, d)},
              {"value", c.value},
              {"index", c.index},
              {"hessian_det", c.hessian_det}};
    if (d == 1) {
      e["eigenvalues"] = json::array({c.eigenvalues[0]});
    } else {
      e["eigenvalues"] = json::array({c.eigenvalues[0], c.eigenvalues[1]});
    }
    e["neg_eigenvalue"] = c.neg_eigenvalue ? json(*c.neg_eigenvalue) : json(nullptr);
    crit.push_back(e);
  }
  json bs = json::array();
  for (std::size_t i = 0; i < atlas.boundary_saddles.size(); ++i) {
    const auto& b = atlas.boundary_saddles[i];
    bs.push_back({{"id", i},
                  {"location", point_json(b.location, d)},
                  {"coordinate", b.coordinate},
                  {"value", b.value},
                  {"normal_derivative", b.normal_derivative},
                  {"tangential_hess_det", b.tangential_hess_det}});
  }
  json trace = json::array();
  for (const auto& t : atlas.boundary_trace)
    trace.push_back({{"location", point_json(t.location, d)},
                     {"coordinate", t.coordinate},
                     {"value", t.value},
                     {"normal_derivative", t.normal_derivative},
                     {"kind", t.is_minimum ? "minimum" : "maximum"}});
  json clauses = json::array();
  for (const auto& c : atlas.a0_report.clauses)
    clauses.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  return {{"dimension", d},
          {"interior_criticals", crit},
          {"boundary_saddles", bs},
          {"boundary_trace", trace},
          {"boundary_min", atlas.boundary_min},
          {"boundary_max", atlas.boundary_max},
          {"a0", {{"passed", atlas.a0_report.passed}, {"clauses", clauses}}}};
}

json saddles_json(const std::vector<SeparatingSaddle>& saddles, int dim) {
  json out = json::array();
  for (std::size_t i = 0; i < saddles.size(); ++i) {
    const auto& s = saddles[i];
    json e = {{"id", i},
              {"kind", s.kind == SeparatingSaddle::Kind::Interior ? "interior" : "boundary"},
              {"ref", s.ref},
              {"location", point_json(s.location, dim)},
              {"value", s.value}};
    if (s.merged_component_ids)
      e["merged_components"] = json::array({s.merged_component_ids->first, s.merged_component_ids->second});
    else
      e["merged_components"] = nullptr;
    out.push_back(e);
  }
  return out;
}

json jmap_json(const JMap& jmap) {
  json out = json::array();
  for (const auto& e : jmap.entries)
    out.push_back({{"minimum", e.minimum},
                   {"k", e.k},
                   {"l", e.l},
                   {"j", e.j},
                   {"component", e.component},
                   {"saddle_value", e.saddle_value},
                   {"depth", e.depth}});
  return out;
}

json report_json(const AssumptionReport& r, const Topology& topo) {
  const int d = topo.atlas().dim;
  auto flag = [](const Verdict& v) { return v.value ? json(*v.value) : json(nullptr); };
  json out = {{"a0", flag(r.a0)}, {"a1", flag(r.a1)}, {"a2", flag(r.a2)}, {"a3", flag(r.a3)}, {"a4", flag(r.a4)}};
  out["verdicts"] = {{"a0", verdict_json(r.a0, d)},
                     {"a1", verdict_json(r.a1, d)},
                     {"a2", verdict_json(r.a2, d)},
                     {"a3", verdict_json(r.a3, d)},
                     {"a4", verdict_json(r.a4, d)}};
  out["a1_margin"] = r.a1_margin;
  if (r.cmax) {
    const auto& c = topo.component(*r.cmax);
    int am = topo.argmin_of(*r.cmax);
    out["cmax"] = {{"component", *r.cmax},
                   {"level", c.level},
                   {"depth", topo.depth_of(*r.cmax)},
                   {"minima", c.contained_minima},
                   {"argmin", am},
                   {"argmin_location",
                    am >= 0 ? point_json(topo.atlas().interior_criticals[am].location, d) : json(nullptr)}};
  } else {
    out["cmax"] = nullptr;
  }
  out["boundary_contacts"] = r.boundary_contacts;
  out["cmax_min_is_global"] = r.cmax_min_is_global;
  out["global_min"] = r.global_min;
  out["boundary_min"] = r.boundary_min;
  return out;
}

json decomposition_json(const WellDecomposition& w) {
  const Topology& topo = *w.topology;
  const int d = topo.atlas().dim;
  json out = atlas_json(topo.atlas());
  out["resolution"] = topo.filtration().resolution;
  out["value_gap"] = topo.filtration().value_gap;
  out["tie_tolerance"] = topo.tie_tol();
  json heights = json::array();
  for (int m : topo.atlas().minima()) {
    ExitHeight e = topo.exit_height(m);
    heights.push_back({{"minimum", m}, {"value", e.value}, {"component", e.component}});
  }
  out["exit_heights"] = heights;
  json comps = json::array();
  for (int id : topo.first_level_components()) {
    const auto& c = topo.component(id);
    comps.push_back({{"component", id},
                     {"level", c.level},
                     {"depth", topo.depth_of(id)},
                     {"minima", c.contained_minima},
                     {"touches_boundary", c.touches_boundary}});
  }
  out["first_level_wells"] = comps;
  out["separating_saddles"] = saddles_json(w.saddles, d);
  out["jmap"] = jmap_json(w.jmap);
  out["report"] = report_json(w.report, topo);
  return out;
}

json weights_json(const std::vector<ExitWeight>& weights, int dim) {
  json out = json::array();
  for (const auto& w : weights)
    out.push_back({{"saddle", w.saddle},
                   {"location", point_json(w.location, dim)},
                   {"coordinate", w.coordinate},
                   {"a", w.a},
                   {"value", w.value},
                   {"normal_derivative", w.normal_derivative},
                   {"tangential_hess_det", w.tangential_hess_det}});
  return out;
}

json prediction_json(const ExitPrediction& p, int dim) {
  json rates = json::array();
  for (const auto& r : p.rates)
    rates.push_back({{"minimum", r.minimum},
                     {"k", r.k},
                     {"l", r.l},
                     {"S", r.S},
                     {"q", r.q},
                     {"meets_boundary", r.meets_boundary}});
  const auto& e = p.eigenvalue;
  return {{"h", p.h},
          {"weights", weights_json(p.weights, dim)},
          {"eigenvalue",
           {{"lambda", e.lambda},
            {"log_lambda", e.log_lambda},
            {"regime", regime_name(e.regime)},
            {"a1", e.a1},
            {"a2", e.a2},
            {"depth", e.depth}}},
          {"mean_exit_time", p.mean_exit_time},
          {"log_mean_exit_time", p.log_mean_exit_time},
          {"remainder_order", p.remainder_order},
          {"rates", rates}};
}

std::string weights_csv(const std::vector<ExitWeight>& weights, int dim) {
  std::ostringstream o;
  o << "z_coordinate,a_i,f_at_z,dnf,det_tangential_hess\n";
  for (const auto& w : weights)
    o << csv_number(dim == 1 ? w.location[0] : w.coordinate) << ',' << csv_number(w.a) << ',' << csv_number(w.value)
      << ',' << csv_number(w.normal_derivative) << ',' << csv_number(w.tangential_hess_det) << '\n';
  return o.str();
}

std::string histogram_csv(const ExitHistogram& h) {
  std::ostringstream o;
  o << "region,lo,hi,count,p,ci_low,ci_high\n";
  for (const auto& b : h.bins) {
    bool other = b.name == "elsewhere";
    o << b.name << ',' << (other ? "" : csv_number(b.lo)) << ',' << (other ? "" : csv_number(b.hi)) << ',' << b.count
      << ',' << csv_number(b.p) << ',' << csv_number(b.ci_low) << ',' << csv_number(b.ci_high) << '\n';
  }
  return o.str();
}

json histogram_json(const ExitHistogram& h) {
  json bins = json::array();
  for (const auto& b : h.bins) {
    json e = {{"name", b.name}, {"count", b.count}, {"p", b.p}, {"ci_low", b.ci_low}, {"ci_high", b.ci_high}};
    if (b.name != "elsewhere") {
      e["lo"] = b.lo;
      e["hi"] = b.hi;
    }
    bins.push_back(e);
  }
  return {{"n", h.n}, {"censored", h.censored}, {"bins", bins}};
}

json independence_json(const IndependenceReport& r) {
  return {{"n", r.n},
          {"mean_tau", r.mean_tau},
          {"ks", r.ks},
          {"ks_threshold", r.ks_threshold},
          {"dominant", r.dominant},
          {"correlation", r.correlation},
          {"correlation_threshold", r.correlation_threshold},
          {"p_value", r.p_value},
          {"passed", r.ks < r.ks_threshold && std::abs(r.correlation) < r.correlation_threshold}};
}

std::string records_csv(const SimResult& r, int dim) {
  std::ostringstream o;
  o << (dim == 1 ? "path_id,exit_time,exit_x,boundary_coordinate\n"
                 : "path_id,exit_time,exit_x,exit_y,boundary_coordinate\n");
  for (const auto& e : r.records) {
    if (e.censored) continue;
    o << e.path_id << ',' << csv_number(e.exit_time) << ',' << csv_number(e.exit_point[0]) << ',';
    if (dim == 2) o << csv_number(e.exit_point[1]) << ',';
    o << csv_number(e.boundary_coordinate) << '\n';
  }
  return o.str();
}

json spectrum_json(const DirichletSpectrum& s, const SpectralExit& e) {
  json out = {{"h", s.h},
              {"grid", s.n},
              {"a", s.a},
              {"b", s.b},
              {"eigenvalues", s.eigenvalues},
              {"lambda1", s.eigenvalues.empty() ? 0.0 : s.eigenvalues[0]},
              {"minus_h_log_lambda1", s.eigenvalues.empty() ? 0.0 : -s.h * std::log(s.eigenvalues[0])},
              {"gap_ratio", s.gap_ratio()},
              {"local_minima", s.local_minima},
              {"p_left", e.p_left},
              {"p_right", e.p_right},
              {"raw_left", e.raw_left},
              {"raw_right", e.raw_right}};
  out["lambda1_doubled_grid"] = s.lambda_doubled > 0.0 ? json(s.lambda_doubled) : json(nullptr);
  return out;
}

std::string spectrum_dump_csv(const DirichletSpectrum& s) {
  QsdDensity nu = qsd_density(s);
  std::ostringstream o;
  o << "x,u_h,nu_h\n";
  for (std::size_t i = 0; i < s.x.size(); ++i)
    o << csv_number(s.x[i]) << ',' << csv_number(s.u[i]) << ',' << csv_number(nu.density[i]) << '\n';
  return o.str();
}

json probabilities_json(const ExitProbabilities& p) {
  return {{"p_left", p.p_left}, {"p_right", p.p_right}, {"err_estimate", p.err_estimate}, {"log_shift", p.log_shift}};
}

}  // namespace kramers
