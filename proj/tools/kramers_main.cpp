#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "kramers/kramers.h"

namespace {

using nlohmann::json;

struct Model {
  kr_model* m = nullptr;
  ~Model() { kr_model_free(m); }
};

int report_error(int status) {
  std::cerr << "error: " << kr_last_error() << '\n';
  return status;
}

bool write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
    return true;
  }
  std::ofstream out(path);
  if (!out) {
    std::cerr << "error: cannot write '" << path << "'\n";
    return false;
  }
  out << text;
  if (!text.empty() && text.back() != '\n') out << '\n';
  return true;
}

bool ends_with(const std::string& s, const std::string& tail) {
  return s.size() >= tail.size() && s.compare(s.size() - tail.size(), tail.size(), tail) == 0;
}

using Call = int (*)(const kr_model*, const char*, char**);

// loads the model, runs one call and hands back the parsed result
int invoke(const std::string& config, Call call, const json& opts, json& result) {
  Model model;
  int st = kr_model_from_file(config.c_str(), &model.m);
  if (st != KR_OK) return report_error(st);
  char* text = nullptr;
  st = call(model.m, opts.dump().c_str(), &text);
  if (text) {
    result = json::parse(text);
    kr_free(text);
  }
  return st;
}

// a JSON field dumped to its own file, then dropped from the result
bool split_out(json& result, const char* key, const std::string& path) {
  if (!result.contains(key)) return true;
  bool ok = path.empty() || write_text(path, result[key].get<std::string>());
  result.erase(key);
  return ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exit-event analysis for overdamped Langevin dynamics on bounded domains"};
  app.set_help_flag("--help", "print this help and exit");
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kr_version()));

  std::string config, out;
  int resolution = 0;

  auto add_config = [&](CLI::App* sub) {
    sub->add_option("config", config, "JSON config file")->required();
    sub->add_option("--out", out, "output path, stdout when omitted");
    sub->add_option("--resolution", resolution, "topology grid resolution (0: default)");
  };

  auto* analyze = app.add_subcommand("analyze", "critical points, wells and assumption verdicts");
  add_config(analyze);

  double h = 0.0;
  std::string well, format = "json", sim_format = "json", cmp_format = "csv";
  auto* predict = app.add_subcommand("predict", "asymptotic exit weights, eigenvalue and mean exit time");
  add_config(predict);
  predict->add_option("--h", h, "temperature")->required();
  predict->add_option("--well", well, "restrict to one well: \"k,l\" label or component id");
  predict->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

  double dt = 0.0, burn = 5.0;
  long paths = 10000, seed = 1, max_steps = 10000000;
  int threads = 0;
  std::string start = "qsd", regions, records;
  bool no_bridge = false;
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo exit events");
  add_config(simulate);
  simulate->add_option("--h", h, "temperature")->required();
  simulate->add_option("--dt", dt, "time step (default h/100)");
  simulate->add_option("--format", sim_format, "json or csv histogram")->check(CLI::IsMember({"json", "csv"}));
  simulate->add_option("--paths", paths, "number of paths");
  simulate->add_option("--seed", seed, "random seed");
  simulate->add_option("--start", start, "\"x\", \"x,y\" or qsd");
  simulate->add_option("--burn", burn, "QSD burn-in time");
  simulate->add_option("--regions", regions, "\"name:lo..hi;...\" in boundary coordinates");
  simulate->add_option("--records", records, "per-path exit records CSV");
  simulate->add_option("--max-steps", max_steps, "steps before a path is censored");
  simulate->add_option("--threads", threads, "worker threads (capped by KRAMERS_THREADS)");
  simulate->add_flag("--no-bridge", no_bridge, "disable the Brownian-bridge crossing test");

  int grid = 0, k = 2;
  std::string dump;
  auto* spectrum = app.add_subcommand("spectrum", "Dirichlet eigenvalues and QSD on an interval");
  add_config(spectrum);
  spectrum->add_option("--h", h, "temperature")->required();
  spectrum->add_option("--grid", grid, "number of cells (default from config, else 2048)");
  spectrum->add_option("--k", k, "number of eigenvalues");
  spectrum->add_option("--dump", dump, "grid CSV with x, u_h, nu_h");

  std::string x = "qsd";
  auto* oracle = app.add_subcommand("oracle", "exact exit probabilities on an interval");
  add_config(oracle);
  oracle->add_option("--h", h, "temperature")->required();
  oracle->add_option("--x", x, "start point or qsd");
  oracle->add_option("--grid", grid, "spectral cells for the QSD start");

  std::string h_list;
  auto* compare = app.add_subcommand("compare", "predictions against measurements, as CSV");
  add_config(compare);
  compare->add_option("--h-list", h_list, "comma-separated temperatures")->required();
  compare->add_option("--paths", paths, "Monte Carlo paths per h (0 skips)");
  compare->add_option("--format", cmp_format, "csv or json")->check(CLI::IsMember({"json", "csv"}));
  compare->add_option("--seed", seed, "random seed");
  compare->add_option("--threads", threads, "worker threads");

  auto* catalog = app.add_subcommand("catalog", "list the built-in potentials");
  catalog->add_option("--out", out, "output path, stdout when omitted");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return KR_ERR_USAGE;
  }

  json opts = json::object();
  if (resolution > 0) opts["resolution"] = resolution;
  json result;
  int st = KR_OK;

  if (*catalog) {
    char* text = nullptr;
    st = kr_catalog(&text);
    if (st != KR_OK) return report_error(st);
    json j = json::parse(text);
    kr_free(text);
    return write_text(out, j.dump(2)) ? KR_OK : KR_ERR_USAGE;
  }

  if (*analyze) {
    st = invoke(config, kr_analyze, opts, result);
    if (result.is_null()) return st;
    if (!write_text(out, result.dump(2))) return KR_ERR_USAGE;
    if (st != KR_OK) std::cerr << "error: " << kr_last_error() << '\n';
    return st;
  }

  if (*predict) {
    opts["h"] = h;
    if (!well.empty()) opts["well"] = well;
    st = invoke(config, kr_predict, opts, result);
    if (st != KR_OK) return report_error(st);
    bool csv = format == "csv" || ends_with(out, ".csv");
    std::string text = csv ? result["csv"].get<std::string>() : std::string();
    result.erase("csv");
    return write_text(out, csv ? text : result.dump(2)) ? KR_OK : KR_ERR_USAGE;
  }

  if (*simulate) {
    opts["h"] = h;
    if (dt > 0.0) opts["dt"] = dt;
    opts["paths"] = paths;
    opts["seed"] = seed;
    opts["start"] = start;
    opts["burn"] = burn;
    opts["max_steps"] = max_steps;
    opts["threads"] = threads;
    opts["bridge"] = !no_bridge;
    if (!regions.empty()) opts["regions"] = regions;
    if (!records.empty()) opts["records"] = true;
    st = invoke(config, kr_simulate, opts, result);
    if (st != KR_OK) return report_error(st);
    if (!split_out(result, "records_csv", records)) return KR_ERR_USAGE;
    bool csv = sim_format == "csv" || ends_with(out, ".csv");
    std::string text = csv ? result["csv"].get<std::string>() : std::string();
    result.erase("csv");
    return write_text(out, csv ? text : result.dump(2)) ? KR_OK : KR_ERR_USAGE;
  }

  if (*spectrum) {
    opts["h"] = h;
    if (grid > 0) opts["grid"] = grid;
    opts["k"] = k;
    if (!dump.empty()) opts["dump"] = true;
    st = invoke(config, kr_spectrum, opts, result);
    if (st != KR_OK) return report_error(st);
    if (!split_out(result, "dump_csv", dump)) return KR_ERR_USAGE;
    return write_text(out, result.dump(2)) ? KR_OK : KR_ERR_USAGE;
  }

  if (*oracle) {
    opts["h"] = h;
    if (grid > 0) opts["grid"] = grid;
    opts["x"] = x;
    st = invoke(config, kr_oracle, opts, result);
    if (st != KR_OK) return report_error(st);
    return write_text(out, result.dump(2)) ? KR_OK : KR_ERR_USAGE;
  }

  if (*compare) {
    opts["h_list"] = h_list;
    opts["paths"] = paths;
    opts["seed"] = seed;
    opts["threads"] = threads;
    st = invoke(config, kr_compare, opts, result);
    if (st != KR_OK) return report_error(st);
    if (cmp_format == "json") {
      result.erase("csv");
      return write_text(out, result.dump(2)) ? KR_OK : KR_ERR_USAGE;
    }
    return write_text(out, result["csv"].get<std::string>()) ? KR_OK : KR_ERR_USAGE;
  }
  return KR_ERR_USAGE;
}
