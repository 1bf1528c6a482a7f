#pragma once

// JSON formats: qgroup.json, coaction.json and the report objects.
// Matrices are row-major arrays of rows, each entry an [re, im] pair; vectors
// are arrays of [re, im] pairs.

#include "qspec/catalog.hpp"
#include "qspec/spectra.hpp"

#include "json.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace qspec {

using json = nlohmann::ordered_json;

/// Malformed input: bad JSON syntax or a schema violation.  `where` is
/// "line L, column C" for syntax errors and a JSON pointer for schema errors.
class ParseError : public Error {
public:
  ParseError(const std::string& where, const std::string& what) : Error(where + ": " + what), where_(where) {}
  const std::string& where() const { return where_; }

private:
  std::string where_;
};

// ---------------------------------------------------------------------------
// numbers

namespace io {

inline json to_json(cplx z) {
  // normalize -0.0 so that output is byte-stable
  const auto clean = [](double x) { return x == 0.0 ? 0.0 : x; };
  return json::array({clean(z.real()), clean(z.imag())});
}

inline json to_json(const CVector& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(to_json(v(i)));
  return a;
}

inline json to_json(const CMatrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json r = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) r.push_back(to_json(m(i, j)));
    rows.push_back(std::move(r));
  }
  return rows;
}

inline json to_json(const LabelSet& s) { return json(std::vector<int>(s.begin(), s.end())); }

/// Rounded for reports: residuals below 1e-12 print as 0 so runs compare byte for byte.
inline json residual(double x) {
  if (!(x >= 1e-12)) return 0.0;
  std::ostringstream os;
  os.precision(2);
  os << std::scientific << x;
  return std::stod(os.str());
}

inline cplx scalar_from(const json& j, const std::string& at) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  throw ParseError(at, "expected a number or an [re, im] pair");
}

inline CVector vector_from(const json& j, const std::string& at, Eigen::Index expected = -1) {
  if (!j.is_array()) throw ParseError(at, "expected an array");
  if (expected >= 0 && static_cast<Eigen::Index>(j.size()) != expected)
    throw ParseError(at, "expected " + std::to_string(expected) + " entries, found " + std::to_string(j.size()));
  CVector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = scalar_from(j[i], at + "/" + std::to_string(i));
  return v;
}

inline CMatrix matrix_from(const json& j, const std::string& at, Eigen::Index rows, Eigen::Index cols) {
  if (!j.is_array()) throw ParseError(at, "expected an array of rows");
  if (static_cast<Eigen::Index>(j.size()) != rows)
    throw ParseError(at, "expected " + std::to_string(rows) + " rows, found " + std::to_string(j.size()));
  CMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) m.row(i) = vector_from(j[i], at + "/" + std::to_string(i), cols).transpose();
  return m;
}

inline const json& member(const json& j, const std::string& key, const std::string& at) {
  const std::string where = at.empty() ? "/" : at;
  if (!j.is_object()) throw ParseError(where, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw ParseError(where, "missing required field '" + key + "'");
  return *it;
}

inline std::vector<int> blocks_from(const json& j, const std::string& at) {
  if (!j.is_array() || j.empty()) throw ParseError(at, "expected a non-empty array of block sizes");
  std::vector<int> b;
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number_integer() || j[i].get<int>() < 1)
      throw ParseError(at + "/" + std::to_string(i), "block size must be a positive integer");
    b.push_back(j[i].get<int>());
  }
  return b;
}

/// Parses text, mapping syntax errors to "line L, column C".
inline json parse_text(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    // drop nlohmann's "[json.exception...] parse error at line L, column C: " prefix
    std::string msg = e.what();
    if (auto p = msg.find("syntax error"); p != std::string::npos) msg = msg.substr(p);
    throw ParseError(source + ": line " + std::to_string(line) + ", column " + std::to_string(col), msg);
  }
}

inline json read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string(), "cannot open file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_text(ss.str(), path.string());
}

}  // namespace io

// ---------------------------------------------------------------------------
// qgroup.json

inline json quantum_group_to_json(const FiniteQuantumGroup& g, bool with_irreps = true) {
  json j;
  j["name"] = g.name();
  j["blocks"] = g.algebra().blocks();
  j["comult"] = io::to_json(g.comult());
  j["counit"] = io::to_json(g.counit());
  j["antipode"] = io::to_json(g.antipode());
  if (with_irreps) {
    json irr = json::array();
    for (const auto& u : g.irreps()) {
      json e;
      e["label"] = u.label;
      e["dim"] = u.d;
      e["conjugate"] = g.conjugate_label(u.label);
      json entries = json::array();
      for (const auto& x : u.entries) entries.push_back(io::to_json(x));
      e["entries"] = std::move(entries);
      irr.push_back(std::move(e));
    }
    j["irreps"] = std::move(irr);
  }
  return j;
}

/// Accepts "builtin:NAME", a bare builtin name, or an inline qgroup object.
/// A present "irreps" array is checked against the computed classes by count
/// and dimensions.
inline QuantumGroupPtr quantum_group_from_json(const json& j, const std::string& at = "") {
  if (j.is_string()) {
    std::string name = j.get<std::string>();
    if (name.rfind("builtin:", 0) == 0) name = name.substr(8);
    try {
      return builtin_quantum_group(name);
    } catch (const ContractViolation&) {
      std::string names;
      for (const auto& n : builtin_quantum_group_names()) names += (names.empty() ? "" : ", ") + n;
      throw ParseError(at.empty() ? "/" : at, "unknown builtin quantum group '" + name + "'; available: " + names);
    }
  }
  if (j.is_object() && j.contains("builtin")) return quantum_group_from_json(j["builtin"], at + "/builtin");
  const std::vector<int> blocks = io::blocks_from(io::member(j, "blocks", at), at + "/blocks");
  const MultiMatrixAlgebra a(blocks);
  const Eigen::Index n = a.dim();
  const CMatrix comult = io::matrix_from(io::member(j, "comult", at), at + "/comult", n * n, n);
  const CVector counit = io::vector_from(io::member(j, "counit", at), at + "/counit", n);
  const CMatrix antipode = j.contains("antipode") ? io::matrix_from(j["antipode"], at + "/antipode", n, n)
                                                  : solve_antipode(a, comult, counit);
  const std::string name = j.contains("name") && j["name"].is_string() ? j["name"].get<std::string>() : "custom";
  auto g = FiniteQuantumGroup::create(name, a, comult, counit, antipode);
  if (j.contains("irreps")) {
    const json& irr = j["irreps"];
    if (!irr.is_array()) throw ParseError(at + "/irreps", "expected an array");
    std::vector<int> given, computed;
    for (std::size_t i = 0; i < irr.size(); ++i) given.push_back(io::member(irr[i], "dim", at + "/irreps/" + std::to_string(i)).get<int>());
    for (const auto& u : g->irreps()) computed.push_back(u.d);
    std::sort(given.begin(), given.end());
    std::sort(computed.begin(), computed.end());
    if (given != computed) throw ValidationError("precomputed irreps do not match the Peter–Weyl decomposition");
  }
  return g;
}

// ---------------------------------------------------------------------------
// coaction.json

inline json coaction_to_json(const Coaction& c) {
  json j;
  j["name"] = c.name();
  j["qgroup"] = "builtin:" + c.group().name();
  j["blocks"] = c.algebra().blocks();
  j["delta"] = io::to_json(c.delta());
  return j;
}

namespace io {

inline FiniteGroup group_from(const json& j, const std::string& at) {
  if (j.is_string()) {
    const std::string n = j.get<std::string>();
    if (n == "Z2") return cyclic_group(2);
    if (n == "Z3") return cyclic_group(3);
    if (n == "S3") return symmetric_group_3();
    if (n.size() > 1 && n[0] == 'Z') {
      try {
        return cyclic_group(std::stoi(n.substr(1)));
      } catch (const std::exception&) {
      }
    }
    throw ParseError(at, "unknown group '" + n + "' (use Zn, S3 or a multiplication table)");
  }
  const json& t = member(j, "table", at);
  FiniteGroup g;
  g.name = j.contains("name") ? j["name"].get<std::string>() : "G";
  for (std::size_t r = 0; r < t.size(); ++r) {
    std::vector<int> row;
    for (const auto& x : t[r]) {
      if (!x.is_number_integer()) throw ParseError(at + "/table/" + std::to_string(r), "entries must be integers");
      row.push_back(x.get<int>());
    }
    g.table.push_back(row);
  }
  try {
    g.validate();
  } catch (const Error& e) {
    throw ValidationError(std::string("group table: ") + e.what());
  }
  return g;
}

inline CoactionPtr classical_from(const json& j, const std::string& name, const std::string& at) {
  const FiniteGroup grp = group_from(member(j, "group", at), at + "/group");
  ClassicalAction act{grp, MultiMatrixAlgebra({1}), {}};
  if (j.contains("permutations")) {
    const json& p = j["permutations"];
    std::vector<std::vector<int>> perms;
    for (std::size_t g = 0; g < p.size(); ++g) {
      std::vector<int> row;
      for (const auto& x : p[g]) row.push_back(x.get<int>());
      if (!perms.empty() && row.size() != perms.front().size())
        throw ParseError(at + "/permutations/" + std::to_string(g), "all permutations must have the same length");
      perms.push_back(row);
    }
    if (static_cast<int>(perms.size()) != grp.order())
      throw ParseError(at + "/permutations", "need one permutation per group element");
    act = permutation_action(grp, perms);
  } else {
    act.algebra = MultiMatrixAlgebra(blocks_from(member(j, "blocks", at), at + "/blocks"));
    const json& us = member(j, "unitaries", at);
    if (!us.is_array() || static_cast<int>(us.size()) != grp.order())
      throw ParseError(at + "/unitaries", "need one unitary per group element");
    for (std::size_t g = 0; g < us.size(); ++g)
      act.unitaries.push_back(matrix_from(us[g], at + "/unitaries/" + std::to_string(g), act.algebra.rep_dim(), act.algebra.rep_dim()));
  }
  // reuse the builtin function algebra when the table matches it exactly
  QuantumGroupPtr g;
  if (grp.table == symmetric_group_3().table)
    g = builtin_quantum_group("C(S3)");
  else if (grp.order() <= 3 && grp.table == cyclic_group(grp.order()).table)
    g = builtin_quantum_group(grp.order() == 1 ? "C(1)" : "C(Z" + std::to_string(grp.order()) + ")");
  else
    g = function_algebra(grp);
  try {
    act.validate();
  } catch (const ContractViolation& e) {
    throw ValidationError(e.what());
  }
  return compile_classical(act, g, name);
}

}  // namespace io

/// Accepts "builtin:NAME" (catalog entry), or an object with either
/// {"qgroup", "blocks", "delta"} or {"classical": {...}}.
inline CoactionPtr coaction_from_json(const json& j, const std::filesystem::path& base = {}) {
  if (j.is_string()) {
    std::string name = j.get<std::string>();
    if (name.rfind("builtin:", 0) == 0) name = name.substr(8);
    try {
      return catalog_entry(name).build();
    } catch (const ContractViolation& e) {
      throw ParseError("/", e.what());
    }
  }
  const std::string name = j.contains("name") && j["name"].is_string() ? j["name"].get<std::string>() : "custom";
  if (j.is_object() && j.contains("builtin")) return coaction_from_json(j["builtin"], base);
  if (j.is_object() && j.contains("classical")) return io::classical_from(j["classical"], name, "/classical");
  const json& q = io::member(j, "qgroup", "");
  QuantumGroupPtr g;
  if (q.is_string() && q.get<std::string>().rfind("builtin:", 0) != 0 &&
      std::filesystem::exists(base / q.get<std::string>()))
    g = quantum_group_from_json(io::read_file(base / q.get<std::string>()));
  else
    g = quantum_group_from_json(q, "/qgroup");
  const MultiMatrixAlgebra b(io::blocks_from(io::member(j, "blocks", ""), "/blocks"));
  const CMatrix delta = io::matrix_from(io::member(j, "delta", ""), "/delta", static_cast<Eigen::Index>(b.dim()) * g->dim(), b.dim());
  return std::make_shared<const Coaction>(b, g, delta, name);
}

// ---------------------------------------------------------------------------
// reports

inline json validation_to_json(const CoactionValidation& v) {
  json j;
  j["homomorphism"] = io::residual(v.homomorphism);
  j["star"] = io::residual(v.star);
  j["unital"] = io::residual(v.unital);
  j["coassociativity"] = io::residual(v.coassociativity);
  j["density_rank"] = v.density_rank;
  j["density_expected"] = v.density_expected;
  j["ok"] = v.ok();
  return j;
}

inline json crossed_to_json(const CrossedStructureReport& r) {
  json j;
  j["labeling"] = to_string(r.labeling);
  j["labeling_fallback"] = r.fallback_used;
  j["dim"] = r.dim;
  j["blocks"] = r.block_sizes;
  j["compression_dims"] = r.compression_dims;
  j["regular_corep"] = {{"unitarity", io::residual(r.v_check.unitarity)},
                        {"corep", io::residual(r.v_check.corep)},
                        {"in_dual", io::residual(r.v_check.in_dual)}};
  json lemma = json::array();
  for (std::size_t a = 0; a < r.expectation_identity.size(); ++a) {
    const auto& l = r.expectation_identity[a];
    lemma.push_back({{"label", l.alpha},
                     {"lhs_dim", l.lhs_dim},
                     {"rhs_dim", l.rhs_dim},
                     {"distance", io::residual(l.distance)},
                     {"psi_membership", io::residual(l.psi_membership)},
                     {"column_form", io::residual(r.column_form[a])},
                     {"holds", l.holds}});
  }
  j["expectation_identity"] = std::move(lemma);
  j["ok"] = r.ok;
  return j;
}

inline json spectrum_to_json(const SpectrumReport& r) {
  json j;
  j["system"] = r.system;
  j["qgroup"] = r.group;
  j["labels"] = r.num_irreps;
  j["conjugates"] = r.conjugates;
  j["sp"] = io::to_json(r.sp);
  j["sp_strong"] = io::to_json(r.sp_strong);
  j["gamma"] = io::to_json(r.gamma);
  j["gamma_strong"] = io::to_json(r.gamma_strong);
  json crit = json::array();
  for (const auto& c : r.criteria)
    crit.push_back({{"label", c.alpha},
                    {"conjugate", c.conj},
                    {"s_product_dim", c.s_product_dim},
                    {"s_alpha_dim", c.s_alpha_dim},
                    {"b2_dim", c.b2_dim},
                    {"b2_product_dim", c.b2_product_dim},
                    {"fixed_dim", c.fixed_dim},
                    {"essential", c.essential_s},
                    {"strong", c.equal_s},
                    {"criteria_agree", c.agree()}});
  j["criteria"] = std::move(crit);
  j["fixed_blocks"] = r.fixed_blocks;
  json corners = json::array();
  for (const auto& c : r.corners)
    corners.push_back({{"rank_tuple", c.rank_tuple},
                       {"dim", c.dim},
                       {"sp", io::to_json(c.sp)},
                       {"sp_strong", io::to_json(c.sp_strong)},
                       {"labeling", to_string(c.labeling)}});
  j["corner_table"] = std::move(corners);
  const auto& v = r.verdicts;
  j["verdicts"] = {{"G_prime", v.g_prime},         {"G_simple", v.g_simple},         {"crossed_prime", v.crossed_prime},
                   {"crossed_simple", v.crossed_simple}, {"fixed_prime", v.fixed_prime}, {"fixed_simple", v.fixed_simple}};
  const auto& t = r.theorem_flags;
  j["theorem_flags"] = {{"iota_in_sp", t.iota_in_sp},
                        {"gamma_subset_sp", t.gamma_subset_sp},
                        {"strong_subsets", t.strong_subsets},
                        {"monotone", t.monotone},
                        {"sp_collapse", t.sp_collapse},
                        {"gamma_collapse", t.gamma_collapse},
                        {"primeness_equivalence", t.primeness},
                        {"simplicity_equivalence", t.simplicity},
                        {"fixed_prime_consequence", t.fixed_prime},
                        {"fixed_simple_consequence", t.fixed_simple},
                        {"corner_choice", t.corner_choice}};
  const auto& cl = r.closure_flags;
  j["closure_flags"] = {{"corners", cl.corners},
                        {"gamma", cl.gamma},
                        {"gamma_strong", cl.gamma_strong},
                        {"bookkeeping", cl.bookkeeping},
                        {"violations", cl.violations}};
  j["ok"] = r.ok();
  return j;
}

}  // namespace qspec
