#pragma once

// JSON encodings of the library's values. Integers are written as JSON
// numbers when they fit in 64 bits and as decimal strings otherwise.

#include <json.hpp>

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "singfib/errors.hpp"
#include "singfib/exactlin.hpp"
#include "singfib/fpgroups.hpp"
#include "singfib/hhindex.hpp"
#include "singfib/linkcalc.hpp"
#include "singfib/sl2.hpp"

namespace singfib::io {

using json = nlohmann::ordered_json;

inline constexpr const char* kSchema = "singfib/1";

inline json integer_to_json(const Integer& x) {
  if (x >= std::numeric_limits<std::int64_t>::min() && x <= std::numeric_limits<std::int64_t>::max())
    return static_cast<std::int64_t>(x);
  return x.str();
}

inline Integer integer_from_json(const json& j, const std::string& what) {
  if (j.is_number_integer()) return j.is_number_unsigned() ? Integer(j.get<std::uint64_t>()) : Integer(j.get<std::int64_t>());
  if (j.is_string()) {
    const auto& s = j.get_ref<const std::string&>();
    const std::size_t start = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
    if (s.size() > start && s.find_first_not_of("0123456789", start) == std::string::npos) return Integer(s);
  }
  throw InputError(what + ": expected an integer, got " + j.dump());
}

inline std::int64_t int64_from_json(const json& j, const std::string& what) {
  const Integer x = integer_from_json(j, what);
  if (x < std::numeric_limits<std::int64_t>::min() || x > std::numeric_limits<std::int64_t>::max())
    throw InputError(what + ": integer out of range");
  return static_cast<std::int64_t>(x);
}

inline json integers_to_json(const std::vector<Integer>& xs) {
  json a = json::array();
  for (const auto& x : xs) a.push_back(integer_to_json(x));
  return a;
}

inline const json& require(const json& obj, const char* key, const std::string& what) {
  if (!obj.is_object() || !obj.contains(key)) throw InputError(what + ": missing field '" + key + "'");
  return obj.at(key);
}

inline void check_schema(const json& j) {
  if (j.is_object() && j.contains("schema") && j.at("schema") != kSchema)
    throw InputError("unsupported schema " + j.at("schema").dump() + ", expected \"" + kSchema + "\"");
}

inline json parse(const std::string& text, const std::string& source) {
  try {
    json j = json::parse(text);
    check_schema(j);
    return j;
  } catch (const json::parse_error& e) {
    throw InputError(source + ": malformed JSON: " + e.what());
  }
}

// ---- matrices and groups

inline json matrix_to_json(const IntegerMatrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(integer_to_json(m(i, j)));
    rows.push_back(row);
  }
  return rows;
}

// Nested rows, or a flat row-major array of square length.
inline IntegerMatrix square_matrix_from_json(const json& j, const std::string& what) {
  if (!j.is_array()) throw InputError(what + ": expected an array");
  if (j.empty()) return IntegerMatrix(0, 0);
  if (j.front().is_array()) {
    const std::size_t n = j.size();
    IntegerMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      if (!j[i].is_array() || j[i].size() != n) throw InputError(what + ": row " + std::to_string(i) + " has wrong length");
      for (std::size_t k = 0; k < n; ++k) m(i, k) = integer_from_json(j[i][k], what);
    }
    return m;
  }
  std::size_t n = 0;
  while (n * n < j.size()) ++n;
  if (n * n != j.size()) throw InputError(what + ": flat matrix of length " + std::to_string(j.size()) + " is not square");
  IntegerMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) m(i, k) = integer_from_json(j[i * n + k], what);
  return m;
}

inline json group_to_json(const AbelianGroup& g) {
  return json{{"free_rank", g.free_rank()}, {"torsion", integers_to_json(g.torsion())}, {"text", g.str()}};
}

// "free=2;torsion=2,4" (either part optional).
inline AbelianGroup parse_group_spec(const std::string& spec) {
  std::size_t free_rank = 0;
  std::vector<Integer> torsion;
  std::size_t pos = 0;
  while (pos <= spec.size()) {
    const std::size_t end = std::min(spec.find(';', pos), spec.size());
    const std::string part = spec.substr(pos, end - pos);
    pos = end + 1;
    if (part.empty()) continue;
    const auto eq = part.find('=');
    if (eq == std::string::npos) throw InputError("ambient group part '" + part + "' lacks '='");
    const std::string key = part.substr(0, eq), value = part.substr(eq + 1);
    if (key == "free") {
      const auto r = links::detail::parse_int(value);
      if (!r || *r < 0) throw InputError("free rank must be a nonnegative integer, got '" + value + "'");
      free_rank = static_cast<std::size_t>(*r);
    } else if (key == "torsion") {
      std::size_t p = 0;
      while (p <= value.size()) {
        const std::size_t e = std::min(value.find(',', p), value.size());
        const auto d = links::detail::parse_int(value.substr(p, e - p));
        if (!d) throw InputError("bad torsion coefficient in '" + value + "'");
        torsion.emplace_back(*d);
        p = e + 1;
      }
    } else {
      throw InputError("unknown ambient group key '" + key + "'");
    }
  }
  return AbelianGroup(free_rank, torsion);
}

// ---- SL(2,Z)

inline json sl2_to_json(const sl2::Sl2Element& g) {
  json a = json::array();
  for (const auto& x : g.entries()) a.push_back(integer_to_json(x));
  return a;
}

inline sl2::Sl2Element sl2_from_json(const json& j) {
  if (!j.is_array() || j.size() != 4) throw InputError("matrix must be [a,b,c,d]");
  return {integer_from_json(j[0], "a"), integer_from_json(j[1], "b"), integer_from_json(j[2], "c"),
          integer_from_json(j[3], "d")};
}

// ---- presentations and monodromy

inline fp::Word word_from_json(const json& j, const std::string& what) {
  if (!j.is_array()) throw InputError(what + ": a word is an array of signed generator indices");
  fp::Word w;
  for (const auto& x : j) {
    const auto v = int64_from_json(x, what);
    if (v == 0 || v > std::numeric_limits<int>::max() || v < -std::numeric_limits<int>::max())
      throw InputError(what + ": bad letter " + std::to_string(v));
    w.push_back(static_cast<int>(v));
  }
  return w;
}

inline json words_to_json(const std::vector<fp::Word>& ws) {
  json a = json::array();
  for (const auto& w : ws) a.push_back(w);
  return a;
}

inline std::vector<fp::Word> words_from_json(const json& j, const std::string& what) {
  if (!j.is_array()) throw InputError(what + ": expected an array of words");
  std::vector<fp::Word> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(word_from_json(j[i], what + "[" + std::to_string(i) + "]"));
  return out;
}

inline json presentation_to_json(const fp::Presentation& p) {
  return json{{"schema", kSchema}, {"generators", p.generators()}, {"relators", words_to_json(p.relators())}};
}

inline fp::Presentation presentation_from_json(const json& j) {
  check_schema(j);
  const auto& g = require(j, "generators", "presentation");
  if (!g.is_array()) throw InputError("presentation: generators must be an array of names");
  std::vector<std::string> gens;
  for (const auto& x : g) {
    if (!x.is_string()) throw InputError("presentation: generator names must be strings");
    gens.push_back(x.get<std::string>());
  }
  return fp::Presentation(std::move(gens), words_from_json(require(j, "relators", "presentation"), "relators"));
}

inline std::vector<std::int64_t> int64s_from_json(const json& j, const std::string& what) {
  if (!j.is_array()) throw InputError(what + ": expected an array of integers");
  std::vector<std::int64_t> out;
  for (const auto& x : j) out.push_back(int64_from_json(x, what));
  return out;
}

inline json monodromy_to_json(const fp::MonodromyData& d) {
  return json{{"schema", kSchema},
              {"N", d.N},
              {"phi_images", words_to_json(d.phi_images)},
              {"boundary_words", words_to_json(d.boundary_words)},
              {"spherical_exponents", d.spherical_exponents},
              {"annular_exponents", d.annular_exponents},
              {"f1_closed", d.f1_closed}};
}

inline fp::MonodromyData monodromy_from_json(const json& j) {
  check_schema(j);
  fp::MonodromyData d;
  const auto n = int64_from_json(require(j, "N", "monodromy"), "N");
  if (n < 0) throw InputError("monodromy: N must be nonnegative");
  d.N = static_cast<std::size_t>(n);
  d.phi_images = words_from_json(require(j, "phi_images", "monodromy"), "phi_images");
  d.boundary_words = words_from_json(require(j, "boundary_words", "monodromy"), "boundary_words");
  if (j.contains("spherical_exponents")) d.spherical_exponents = int64s_from_json(j["spherical_exponents"], "spherical_exponents");
  if (j.contains("annular_exponents")) d.annular_exponents = int64s_from_json(j["annular_exponents"], "annular_exponents");
  if (j.contains("f1_closed")) {
    if (!j["f1_closed"].is_boolean()) throw InputError("monodromy: f1_closed must be a boolean");
    d.f1_closed = j["f1_closed"].get<bool>();
  }
  d.validate();
  return d;
}

// ---- intersection forms

struct FormInput {
  std::int64_t b1 = 0;
  hh::IntersectionForm form;
};

// {"matrix": [[...]] | [...], "b1": 0} or a bare matrix.
inline FormInput form_from_json(const json& j) {
  check_schema(j);
  FormInput in;
  const json* m = &j;
  if (j.is_object()) {
    m = &require(j, "matrix", "form");
    if (j.contains("b1")) in.b1 = int64_from_json(j["b1"], "b1");
    if (in.b1 < 0) throw InputError("form: b1 must be nonnegative");
    if (j.contains("torsion") && !j["torsion"].empty())
      throw InputError("form: torsion in H^2 is not supported; give the form on H^2/Tor only");
  }
  in.form = hh::IntersectionForm(square_matrix_from_json(*m, "form matrix"));
  return in;
}

inline json form_to_json(const hh::IntersectionForm& f, std::int64_t b1) {
  return json{{"schema", kSchema}, {"b1", b1}, {"matrix", matrix_to_json(f.matrix())}};
}

// ---- links

inline json link_to_json(const links::FiberedLinkClass& k) {
  json j{{"name", k.name()}, {"mu", k.mu()}};
  j["lambda"] = k.lambda() ? json(*k.lambda()) : json(nullptr);
  j["rho"] = k.rho() ? json(*k.rho()) : json(nullptr);
  return j;
}

// Either an explicit {name, mu, lambda} or a built-in tag {name} (lambda
// optional, and null means unknown).
inline links::FiberedLinkClass link_from_json(const json& j) {
  if (j.is_string()) return links::builtin_link(j.get<std::string>());
  const auto& name = require(j, "name", "link");
  if (!name.is_string()) throw InputError("link: name must be a string");
  const std::string tag = name.get<std::string>();
  std::optional<std::int64_t> lambda;
  const bool has_lambda = j.contains("lambda") && !j["lambda"].is_null();
  if (has_lambda) lambda = int64_from_json(j["lambda"], tag + ".lambda");
  if (!j.contains("mu")) {
    auto k = links::builtin_link(tag, lambda);
    if (has_lambda && k.lambda() != lambda)
      throw InputError("link '" + tag + "': lambda " + std::to_string(*lambda) + " contradicts the built-in value");
    return k;
  }
  const auto mu = int64_from_json(j["mu"], tag + ".mu");
  if (!has_lambda) {
    if (j.contains("rho") && !j["rho"].is_null())
      return {tag, mu, mu - int64_from_json(j["rho"], tag + ".rho"), int64_from_json(j["rho"], tag + ".rho")};
    return links::FiberedLinkClass::with_unknown_lambda(tag, mu);
  }
  const std::int64_t rho = j.contains("rho") && !j["rho"].is_null() ? int64_from_json(j["rho"], tag + ".rho") : mu - *lambda;
  return {tag, mu, *lambda, rho};
}

inline links::LinkCollection collection_from_json(const json& j) {
  check_schema(j);
  const json* arr = &j;
  if (j.is_object()) arr = &require(j, "links", "collection");
  if (!arr->is_array()) throw InputError("collection: expected an array of links");
  links::LinkCollection c;
  for (const auto& e : *arr) {
    std::int64_t mult = 1;
    if (e.is_object() && e.contains("multiplicity")) mult = int64_from_json(e["multiplicity"], "multiplicity");
    c.add(link_from_json(e), mult);
  }
  return c;
}

inline json collection_to_json(const links::LinkCollection& c) {
  json a = json::array();
  for (const auto& e : c.entries()) {
    json j = link_to_json(e.link);
    j["multiplicity"] = e.multiplicity;
    a.push_back(j);
  }
  return json{{"schema", kSchema}, {"links", a}};
}

}  // namespace singfib::io
