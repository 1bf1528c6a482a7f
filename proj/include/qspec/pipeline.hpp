#pragma once

// Batch pipeline: load a system, run the requested stages in dependency order
// and assemble a deterministic report.

#include "qspec/io.hpp"

#include <chrono>
#include <functional>
#include <set>

namespace qspec {

enum class Stage { Validate, Crossed, Spectra, Theorems, Closure };

inline const char* to_string(Stage s) {
  switch (s) {
    case Stage::Validate: return "validate";
    case Stage::Crossed: return "crossed";
    case Stage::Spectra: return "spectra";
    case Stage::Theorems: return "theorems";
    case Stage::Closure: return "closure";
  }
  return "?";
}

enum ExitCode : int { kOk = 0, kValidationFailure = 1, kViolation = 2, kResourceCap = 3 };

struct SystemConfig {
  std::string source;  // "builtin:NAME" or a path to coaction.json
  double tol = 1e-9;
  std::uint64_t seed = 20240601;
  std::size_t cap = 4096;
  std::set<Stage> stages{Stage::Validate};
  std::string json_path;  // empty: no file written

  void validate() const {
    if (!(tol > 0.0 && tol < 1e-3)) throw ContractViolation("tolerance must lie in (0, 1e-3)");
    if (cap == 0) throw ContractViolation("dimension cap must be positive");
  }
  bool wants(Stage s) const { return stages.count(s) > 0; }
};

/// Resolves a source string: builtin catalog names, with or without the
/// "builtin:" prefix, or a path to a coaction.json file.
inline CoactionPtr load_system(const std::string& source) {
  if (source.rfind("builtin:", 0) == 0) return coaction_from_json(json(source));
  const std::filesystem::path p(source);
  if (std::filesystem::exists(p)) return coaction_from_json(io::read_file(p), p.parent_path());
  for (const auto& e : catalog())
    if (e.name == source) return e.build();
  std::string names;
  for (const auto& e : catalog()) names += (names.empty() ? "" : ", ") + e.name;
  throw ParseError(source, "no such file or builtin; builtins: " + names);
}

struct RunReport {
  SystemConfig config;
  std::string system, group;
  json validation, crossed, spectrum;
  std::optional<SpectrumReport> spectra;
  std::optional<CrossedStructureReport> structure;
  std::string error;  // first fatal error, if any
  int exit_code = kOk;
  std::vector<std::pair<std::string, double>> timings;  // seconds; not part of the JSON

  json to_json() const {
    json j;
    json stages = json::array();
    for (Stage s : config.stages) stages.push_back(to_string(s));
    j["config"] = {{"source", config.source}, {"tol", config.tol}, {"seed", config.seed}, {"cap", config.cap}, {"stages", stages}};
    j["system"] = system;
    j["qgroup"] = group;
    if (!validation.is_null()) j["validation"] = validation;
    if (!crossed.is_null()) j["crossed"] = crossed;
    if (!spectrum.is_null()) j["spectrum"] = spectrum;
    if (!error.empty()) j["error"] = error;
    j["exit_code"] = exit_code;
    return j;
  }

  std::string text(bool with_timings = false) const;
};

namespace detail {

inline json validation_section(const Coaction& c) {
  const auto& g = c.group();
  const auto& h = g.validation();
  json j;
  j["hopf"] = {{"homomorphism", io::residual(h.homomorphism)}, {"star", io::residual(h.star)},
               {"unital", io::residual(h.unital)},             {"coassociativity", io::residual(h.coassociativity)},
               {"counit", io::residual(h.counit)},             {"antipode", io::residual(h.antipode)}};
  int pw = 0;
  std::vector<int> dims;
  for (const auto& u : g.irreps()) {
    dims.push_back(u.d);
    pw += u.d * u.d;
  }
  j["irrep_dims"] = dims;
  j["peter_weyl"] = {{"sum_d_squared", pw}, {"dim", g.dim()}};
  j["coaction"] = validation_to_json(validate_coaction(c.algebra(), g, c.delta()));
  j["fixed_blocks"] = fixed_algebra(c).structure.block_sizes();
  return j;
}

}  // namespace detail

/// Runs the configured stages.  Failures are recorded in the report rather
/// than thrown, so a partial report is always available.
inline RunReport run(const SystemConfig& cfg) {
  RunReport r;
  r.config = cfg;
  Numerics n = numerics();
  n.tol = cfg.tol;
  n.seed = cfg.seed;
  n.dim_cap = cfg.cap;
  ScopedNumerics scope(n);
  reseed(cfg.seed);

  const auto timed = [&](const std::string& what, const std::function<void()>& f) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    r.timings.emplace_back(what, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  };

  try {
    cfg.validate();
    CoactionPtr c;
    timed("load", [&] { c = load_system(cfg.source); });
    r.system = c->name();
    r.group = c->group().name();
    timed("validate", [&] { r.validation = detail::validation_section(*c); });
    if (!r.validation["coaction"]["ok"].get<bool>()) {
      r.exit_code = kValidationFailure;
      r.error = "coaction failed validation";
      return r;
    }
    if (cfg.wants(Stage::Crossed) && !cfg.wants(Stage::Spectra)) {
      timed("crossed", [&] { r.structure = build_crossed(c).second; });
    }
    if (cfg.wants(Stage::Spectra) || cfg.wants(Stage::Theorems) || cfg.wants(Stage::Closure)) {
      timed("spectra", [&] { r.spectra = analyze_spectra(c); });
      r.structure = r.spectra->crossed;
      r.spectrum = spectrum_to_json(*r.spectra);
      if (!cfg.wants(Stage::Theorems)) r.spectrum.erase("theorem_flags");
      if (!cfg.wants(Stage::Closure)) r.spectrum.erase("closure_flags");
    }
    if (r.structure && (cfg.wants(Stage::Crossed) || cfg.wants(Stage::Theorems))) r.crossed = crossed_to_json(*r.structure);

    if (r.structure && !r.structure->ok) {
      r.exit_code = kViolation;
      r.error = "crossed product structure checks failed";
    }
    if (r.spectra) {
      const bool thm = r.spectra->theorem_flags.all();
      const bool clo = !cfg.wants(Stage::Closure) || r.spectra->closure_flags.all();
      if (!thm || !clo) {
        r.exit_code = kViolation;
        r.error = !thm ? "theorem flag violated" : "closure flag violated";
      }
    }
  } catch (const CapExceeded& e) {
    r.exit_code = kResourceCap;
    r.error = e.what();
  } catch (const InternalInconsistency& e) {
    r.exit_code = kViolation;
    r.error = e.what();
  } catch (const Error& e) {
    r.exit_code = kValidationFailure;
    r.error = e.what();
  }
  return r;
}

inline std::string RunReport::text(bool with_timings) const {
  std::ostringstream os;
  os << "system   " << (system.empty() ? config.source : system);
  if (!group.empty()) os << "  [" << group << "]";
  os << "\n";
  if (!validation.is_null()) {
    const auto& v = validation["coaction"];
    os << "validate " << (v["ok"].get<bool>() ? "ok" : "FAILED") << "  irreps " << validation["irrep_dims"].dump()
       << "  B^δ blocks " << validation["fixed_blocks"].dump() << "\n";
  }
  if (structure) {
    os << "crossed  dim " << structure->dim << "  blocks " << json(structure->block_sizes).dump() << "  labeling "
       << to_string(structure->labeling) << (structure->fallback_used ? " (fallback)" : "") << "  "
       << (structure->ok ? "ok" : "FAILED") << "\n";
  }
  if (spectra) {
    const auto& s = *spectra;
    os << "Sp       " << format_labels(s.sp) << "  strong " << format_labels(s.sp_strong) << "\n";
    os << "Γ        " << format_labels(s.gamma) << "  strong " << format_labels(s.gamma_strong) << "  corners "
       << s.corners.size() << "\n";
    const auto yn = [](bool b) { return b ? "yes" : "no"; };
    const auto& v = s.verdicts;
    os << "verdicts G-prime " << yn(v.g_prime) << ", G-simple " << yn(v.g_simple) << ", crossed prime "
       << yn(v.crossed_prime) << ", crossed simple " << yn(v.crossed_simple) << "\n";
    if (spectrum.contains("theorem_flags")) os << "theorems " << (s.theorem_flags.all() ? "all hold" : "VIOLATED") << "\n";
    if (spectrum.contains("closure_flags")) {
      os << "closure  " << (s.closure_flags.all() ? "all hold" : "VIOLATED") << "\n";
      for (const auto& w : s.closure_flags.violations) os << "  " << w << "\n";
    }
  }
  if (!error.empty()) os << "error    " << error << "\n";
  if (with_timings)
    for (const auto& [k, t] : timings) os << "time     " << k << " " << t << " s\n";
  os << "exit     " << exit_code << "\n";
  return os.str();
}

}  // namespace qspec
