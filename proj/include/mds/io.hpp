#pragma once

// JSON interchange: the system descriptor shared by all CLI commands, and
// serializers for every result type. Complex numbers travel as [re, im]
// pairs and twists as decimal strings.

#include <charconv>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "mds/coefficients.hpp"
#include "mds/momentlab.hpp"
#include "mds/series.hpp"
#include "mds/system.hpp"
#include "mds/variety.hpp"

namespace mds {

using json = nlohmann::json;

struct CoefficientSpec {
  enum class Type { Trivial, Character, HeckeGL2, Tau, Table };
  Type type = Type::Trivial;
  i64 q = 0, k = 0;
  std::map<i64, Complex> lambda;
  std::map<std::pair<i64, int>, Complex> values;
  friend bool operator==(const CoefficientSpec&, const CoefficientSpec&) = default;
};

struct SystemDescriptor {
  LaurentMonomialSystem system;
  std::vector<CoefficientSpec> coefficients;  // empty: all trivial
  SeriesPoint s;                              // may be empty for commands that do not evaluate
  std::vector<std::string> warnings;
  friend bool operator==(const SystemDescriptor& a, const SystemDescriptor& b) {
    return a.system == b.system && a.coefficients == b.coefficients && a.s == b.s;
  }
};

namespace detail {

[[noreturn]] inline void invalid(const std::string& path, const std::string& msg) {
  throw Error(ErrorKind::Validation, path + ": " + msg);
}

inline i64 parse_i64(const json& j, const std::string& path) {
  if (!j.is_number_integer()) invalid(path, "expected an integer");
  return j.get<i64>();
}

inline i64 parse_decimal(const json& j, const std::string& path) {
  if (j.is_number_integer()) return j.get<i64>();
  if (!j.is_string()) invalid(path, "expected a decimal string");
  const std::string& s = j.get_ref<const std::string&>();
  i64 v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec == std::errc::result_out_of_range) invalid(path, "value exceeds 2^63-1");
  if (ec != std::errc() || ptr != s.data() + s.size()) invalid(path, "not a decimal integer: \"" + s + "\"");
  return v;
}

inline Complex parse_complex(const json& j, const std::string& path) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  invalid(path, "expected a number or an [re, im] pair");
}

inline i64 parse_key_i64(const std::string& key, const std::string& path) {
  return parse_decimal(json(key), path);
}

inline CoefficientSpec parse_coefficient(const json& j, const std::string& path) {
  if (!j.is_object() || !j.contains("type") || !j["type"].is_string()) invalid(path, "expected {\"type\": ...}");
  const std::string type = j["type"];
  CoefficientSpec c;
  if (type == "trivial") {
    c.type = CoefficientSpec::Type::Trivial;
  } else if (type == "character") {
    c.type = CoefficientSpec::Type::Character;
    if (!j.contains("q")) invalid(path + ".q", "missing");
    if (!j.contains("k")) invalid(path + ".k", "missing");
    c.q = parse_i64(j["q"], path + ".q");
    c.k = parse_i64(j["k"], path + ".k");
    if (c.q < 3 || c.q % 2 == 0 || !is_prime(c.q)) invalid(path + ".q", "must be an odd prime");
  } else if (type == "hecke_gl2") {
    c.type = CoefficientSpec::Type::HeckeGL2;
    if (!j.contains("lambda") || !j["lambda"].is_object()) invalid(path + ".lambda", "expected an object prime -> value");
    for (const auto& [key, v] : j["lambda"].items()) {
      const std::string kp = path + ".lambda[\"" + key + "\"]";
      i64 p = parse_key_i64(key, kp);
      if (!is_prime(p)) invalid(kp, "key is not prime");
      c.lambda[p] = parse_complex(v, kp);
    }
  } else if (type == "tau") {
    c.type = CoefficientSpec::Type::Tau;
  } else if (type == "table") {
    c.type = CoefficientSpec::Type::Table;
    if (!j.contains("values") || !j["values"].is_object()) invalid(path + ".values", "expected an object \"p^e\" -> value");
    for (const auto& [key, v] : j["values"].items()) {
      const std::string kp = path + ".values[\"" + key + "\"]";
      auto caret = key.find('^');
      if (caret == std::string::npos) invalid(kp, "key must look like \"p^e\"");
      i64 p = parse_key_i64(key.substr(0, caret), kp);
      i64 e = parse_key_i64(key.substr(caret + 1), kp);
      if (!is_prime(p) || e < 1 || e > kMaxLocalExponent) invalid(kp, "key must be a prime power p^e with 1 <= e <= 64");
      c.values[{p, static_cast<int>(e)}] = parse_complex(v, kp);
    }
  } else {
    invalid(path + ".type", "unknown coefficient type \"" + type + "\"");
  }
  return c;
}

inline json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

}  // namespace detail

inline SystemDescriptor parse_descriptor(const json& j) {
  using detail::invalid;
  if (!j.is_object()) invalid("$", "descriptor must be a JSON object");
  static const std::set<std::string> known = {"t", "m", "A", "omega", "omega_prime", "coefficients", "s"};
  SystemDescriptor d;
  for (const auto& [key, _] : j.items())
    if (!known.count(key)) d.warnings.push_back("ignoring unknown field \"" + key + "\"");

  if (!j.contains("t")) invalid("t", "missing");
  const i64 t = detail::parse_i64(j["t"], "t");
  if (t < 0) invalid("t", "must be >= 0");
  const json A_json = j.value("A", json::array());
  if (!A_json.is_array()) invalid("A", "expected an array of integer rows");
  Matrix A;
  for (std::size_t i = 0; i < A_json.size(); ++i) {
    const std::string path = "A[" + std::to_string(i) + "]";
    const json& row = A_json[i];
    if (!row.is_array()) invalid(path, "expected an array of integers");
    if (static_cast<i64>(row.size()) != t)
      invalid(path, "expected " + std::to_string(t) + " entries, got " + std::to_string(row.size()));
    std::vector<i64> r;
    for (std::size_t c = 0; c < row.size(); ++c) r.push_back(detail::parse_i64(row[c], path + "[" + std::to_string(c) + "]"));
    A.push_back(std::move(r));
  }
  if (j.contains("m") && detail::parse_i64(j["m"], "m") != static_cast<i64>(A.size()))
    invalid("m", "does not match the number of rows of A (" + std::to_string(A.size()) + ")");

  auto twists = [&](const char* name) {
    std::vector<i64> out;
    if (!j.contains(name)) {
      if (!A.empty()) invalid(name, "missing");
      return out;
    }
    const json& arr = j[name];
    if (!arr.is_array()) invalid(name, "expected an array of decimal strings");
    if (arr.size() != A.size())
      invalid(name, "expected " + std::to_string(A.size()) + " entries, got " + std::to_string(arr.size()));
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string path = std::string(name) + "[" + std::to_string(i) + "]";
      i64 v = detail::parse_decimal(arr[i], path);
      if (v < 1) invalid(path, "twists must be positive");
      out.push_back(v);
    }
    return out;
  };
  auto w = twists("omega");
  auto wp = twists("omega_prime");
  d.system = LaurentMonomialSystem(static_cast<std::size_t>(t), std::move(A), std::move(w), std::move(wp));

  if (j.contains("coefficients")) {
    const json& cs = j["coefficients"];
    if (!cs.is_array()) invalid("coefficients", "expected an array of family records");
    if (static_cast<i64>(cs.size()) != t)
      invalid("coefficients", "expected " + std::to_string(t) + " families, got " + std::to_string(cs.size()));
    for (std::size_t k = 0; k < cs.size(); ++k)
      d.coefficients.push_back(detail::parse_coefficient(cs[k], "coefficients[" + std::to_string(k) + "]"));
  }
  if (j.contains("s")) {
    const json& s = j["s"];
    if (!s.is_array()) invalid("s", "expected an array of [re, im] pairs");
    if (static_cast<i64>(s.size()) != t) invalid("s", "expected " + std::to_string(t) + " entries, got " + std::to_string(s.size()));
    for (std::size_t k = 0; k < s.size(); ++k) d.s.push_back(detail::parse_complex(s[k], "s[" + std::to_string(k) + "]"));
  }
  return d;
}

inline json to_json(const CoefficientSpec& c) {
  switch (c.type) {
    case CoefficientSpec::Type::Trivial: return {{"type", "trivial"}};
    case CoefficientSpec::Type::Character: return {{"type", "character"}, {"q", c.q}, {"k", c.k}};
    case CoefficientSpec::Type::Tau: return {{"type", "tau"}};
    case CoefficientSpec::Type::HeckeGL2: {
      json lam = json::object();
      for (const auto& [p, v] : c.lambda) lam[std::to_string(p)] = detail::complex_json(v);
      return {{"type", "hecke_gl2"}, {"lambda", lam}};
    }
    case CoefficientSpec::Type::Table: {
      json vals = json::object();
      for (const auto& [pe, v] : c.values)
        vals[std::to_string(pe.first) + "^" + std::to_string(pe.second)] = detail::complex_json(v);
      return {{"type", "table"}, {"values", vals}};
    }
  }
  return {};
}

inline json to_json(const LaurentMonomialSystem& S) {
  json w = json::array(), wp = json::array();
  for (i64 v : S.omega()) w.push_back(std::to_string(v));
  for (i64 v : S.omega_prime()) wp.push_back(std::to_string(v));
  return {{"t", S.t()}, {"m", S.m()}, {"A", S.A()}, {"omega", w}, {"omega_prime", wp}};
}

inline json to_json(const SystemDescriptor& d) {
  json j = to_json(d.system);
  if (!d.coefficients.empty()) {
    json cs = json::array();
    for (const auto& c : d.coefficients) cs.push_back(to_json(c));
    j["coefficients"] = cs;
  }
  if (!d.s.empty()) {
    json s = json::array();
    for (auto z : d.s) s.push_back(detail::complex_json(z));
    j["s"] = s;
  }
  return j;
}

inline bool uses_tau(const SystemDescriptor& d) {
  for (const auto& c : d.coefficients)
    if (c.type == CoefficientSpec::Type::Tau) return true;
  return false;
}

/// Builds the coefficient tuple; a tau family gets a table covering n <= tau_cap.
inline CoefficientTuple build_coefficients(const SystemDescriptor& d, i64 tau_cap) {
  if (d.coefficients.empty()) return trivial_tuple(d.system.t());
  CoefficientTuple out;
  std::shared_ptr<const std::vector<i128>> tau;
  std::map<i64, std::shared_ptr<const CharacterTable>> tables;
  for (const auto& c : d.coefficients) {
    switch (c.type) {
      case CoefficientSpec::Type::Trivial: out.push_back(CoefficientFamily::trivial()); break;
      case CoefficientSpec::Type::Character: {
        auto& tbl = tables[c.q];
        if (!tbl) tbl = std::make_shared<const CharacterTable>(c.q);
        out.push_back(CoefficientFamily::character(tbl, c.k));
        break;
      }
      case CoefficientSpec::Type::HeckeGL2: out.push_back(CoefficientFamily::hecke_gl2(c.lambda)); break;
      case CoefficientSpec::Type::Tau:
        if (!tau) tau = std::make_shared<const std::vector<i128>>(ramanujan_tau_table(tau_cap));
        out.push_back(CoefficientFamily::tau(tau));
        break;
      case CoefficientSpec::Type::Table: out.push_back(CoefficientFamily::table(c.values)); break;
    }
  }
  return out;
}

inline json to_json(const RowOperation& op) {
  switch (op.kind) {
    case RowOperation::Kind::Swap: return {{"op", "swap"}, {"i", op.i}, {"j", op.j}};
    case RowOperation::Kind::Negate: return {{"op", "negate"}, {"i", op.i}};
    case RowOperation::Kind::Add: return {{"op", "add"}, {"i", op.i}, {"j", op.j}, {"b", op.b}};
  }
  return {};
}

inline json to_json(const Normalization& n) {
  json ops = json::array();
  for (const auto& op : n.ops) ops.push_back(to_json(op));
  return {{"system", to_json(n.system)},
          {"ops", ops},
          {"dropped_rows", n.dropped_rows},
          {"empty_variety", n.empty_variety}};
}

inline json to_json(const SupportReduction& r, i64 bound) {
  return {{"result", r.reducible ? "reducible" : "irreducible_within_bound"}, {"coeff_bound", bound}, {"basis", r.basis}};
}

inline json to_json(const IntegerPoint& x) { return x.coords; }

inline json to_json(const PropertySResult& r, i64 N) {
  json j = {{"N", N}, {"box_points", r.box_points}, {"recombinations_checked", r.recombinations_checked}};
  if (!r.witness) {
    j["result"] = "no_counterexample";
    return j;
  }
  json choice = json::object();
  for (const auto& [p, src] : r.witness->choice) choice[std::to_string(p)] = src == Source::X ? "x" : "y";
  j["result"] = "witness";
  j["witness"] = {{"x", to_json(r.witness->x)},
                  {"y", to_json(r.witness->y)},
                  {"choice", choice},
                  {"point", to_json(r.witness->point)}};
  return j;
}

inline json points_json(const std::vector<Point>& pts) { return pts; }

inline json to_json(const EvalReport& r) {
  return {{"direct", detail::complex_json(r.direct)},
          {"euler", detail::complex_json(r.euler)},
          {"abs_diff", r.abs_diff},
          {"direct_tail", r.direct_tail},
          {"euler_tail", r.euler_tail},
          {"wall_seconds", r.wall_seconds},
          {"formal", r.formal},
          {"params", {{"N", r.params.N}, {"P", r.params.P}, {"B", r.params.B}}}};
}

inline json to_json(const MomentExperiment& ex) {
  json rows = json::array();
  for (std::size_t k = 0; k < ex.moduli.size(); ++k)
    rows.push_back({{"q", ex.moduli[k]}, {"rhs", detail::complex_json(ex.rhs[k])}, {"error", ex.errors[k]}});
  json j = {{"lhs", detail::complex_json(ex.lhs)}, {"lhs_truncation", ex.lhs_truncation}, {"per_q", rows},
            {"warnings", ex.warnings}};
  if (ex.fitted) {
    j["fit"] = {{"eta", ex.eta},
                {"intercept", ex.intercept},
                {"eta_stderr", ex.eta_stderr},
                {"eta_band", {ex.eta - 2 * ex.eta_stderr, ex.eta + 2 * ex.eta_stderr}},
                {"residuals", ex.residuals}};
  } else {
    j["fit"] = nullptr;
  }
  return j;
}

inline std::string moment_csv(const MomentExperiment& ex) {
  std::string out = "q,error\n";
  char buf[64];
  for (std::size_t k = 0; k < ex.moduli.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%lld,%.17g\n", static_cast<long long>(ex.moduli[k]), ex.errors[k]);
    out += buf;
  }
  return out;
}

}  // namespace mds
