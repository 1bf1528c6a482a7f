// qspec: command-line front end for the spectral analysis pipeline.

#include "qspec/pipeline.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>

namespace {

using namespace qspec;

struct Options {
  std::vector<std::string> sources;
  bool all = false;
  double tol = 1e-9;
  std::uint64_t seed = 20240601;
  std::size_t cap = 4096;
  std::string json_path;
  bool timings = false;
  bool quiet = false;
};

int run_batch(const Options& o, const std::set<Stage>& stages) {
  std::vector<std::string> sources = o.sources;
  if (o.all)
    for (const auto& e : catalog()) sources.push_back("builtin:" + e.name);
  if (sources.empty()) {
    std::cerr << "error: give a source (builtin:NAME or a coaction.json path) or --all\n";
    return kValidationFailure;
  }
  int code = kOk;
  json out = json::array();
  for (const auto& s : sources) {
    SystemConfig cfg;
    cfg.source = s;
    cfg.tol = o.tol;
    cfg.seed = o.seed;
    cfg.cap = o.cap;
    cfg.stages = stages;
    const RunReport r = run(cfg);
    if (!o.quiet) std::cout << r.text(o.timings) << (sources.size() > 1 ? "\n" : "");
    if (r.exit_code != kOk && o.quiet) std::cerr << s << ": " << r.error << "\n";
    code = std::max(code, r.exit_code);
    out.push_back(r.to_json());
  }
  if (!o.json_path.empty()) {
    std::ofstream f(o.json_path);
    if (!f) {
      std::cerr << "error: cannot write " << o.json_path << "\n";
      return std::max(code, static_cast<int>(kValidationFailure));
    }
    f << (out.size() == 1 ? out[0] : out).dump(2) << "\n";
  }
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral invariants of coactions of finite quantum groups"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--tol", o.tol, "numerical tolerance, in (0, 1e-3)")->capture_default_str();
  app.add_option("--seed", o.seed, "seed for randomized spot checks")->capture_default_str();
  app.add_option("--cap", o.cap, "maximum ambient_dim^2 of any operator space")->capture_default_str();
  app.add_option("--json", o.json_path, "write the JSON report here");
  app.add_flag("--timings", o.timings, "print stage timings (never written to JSON)");
  app.add_flag("-q,--quiet", o.quiet, "suppress the text report");

  int code = kOk;
  const auto pipeline = [&](const std::string& name, const std::string& help, std::set<Stage> stages) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("sources", o.sources, "builtin:NAME or path to coaction.json");
    sub->add_flag("--all", o.all, "run every catalog entry");
    sub->callback([&o, &code, stages] { code = run_batch(o, stages); });
  };
  pipeline("validate", "check Hopf and coaction axioms", {Stage::Validate});
  pipeline("crossed", "build the crossed product and check its structure", {Stage::Validate, Stage::Crossed});
  pipeline("spectra", "compute Sp, Γ and their strong variants", {Stage::Validate, Stage::Spectra});
  pipeline("verify", "full pipeline with theorem and closure checks",
           {Stage::Validate, Stage::Crossed, Stage::Spectra, Stage::Theorems, Stage::Closure});

  auto* cat = app.add_subcommand("catalog", "list built-in quantum groups and coactions");
  cat->callback([&] {
    json j;
    j["qgroups"] = builtin_quantum_group_names();
    json entries = json::array();
    for (const auto& e : catalog()) {
      entries.push_back({{"name", e.name}, {"qgroup", e.group}, {"classical", e.classical.has_value()}, {"description", e.description}});
      if (!o.quiet) std::cout << e.name << "  [" << e.group << "]  " << e.description << "\n";
    }
    j["coactions"] = entries;
    if (!o.json_path.empty()) std::ofstream(o.json_path) << j.dump(2) << "\n";
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kValidationFailure;
  }
  return code;
}
