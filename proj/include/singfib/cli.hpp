#pragma once

// The singfib command line: argument handling, text and JSON reports, the
// catalog of named examples and the self-check suite.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "singfib/errors.hpp"
#include "singfib/exactlin.hpp"
#include "singfib/fpgroups.hpp"
#include "singfib/hhindex.hpp"
#include "singfib/json_io.hpp"
#include "singfib/linkcalc.hpp"
#include "singfib/sl2.hpp"

namespace singfib::cli {

using io::json;

enum ExitCode : int { kOk = 0, kFailure = 1, kInputError = 2, kBudgetExceeded = 3, kMissingInvariant = 4 };

inline constexpr const char* kBudgetVariable = "SINGFIB_ENUM_BUDGET";

struct CatalogEntry {
  std::string name;
  std::string description;
  hh::ManifoldInvariants invariants;
  std::optional<fp::MonodromyData> monodromy;
  std::optional<links::LinkCollection> links;
  std::string provenance;
};

inline std::vector<CatalogEntry> catalog() {
  std::vector<CatalogEntry> out;
  auto add = [&](const std::string& tag, std::string provenance) {
    auto m = hh::builtin_manifold(tag);
    out.push_back({m.tag, m.description, m.invariants, std::nullopt, std::nullopt, std::move(provenance)});
    return &out.back();
  };
  auto* s4 = add("s4",
                 "Matsumoto's genus-one singular fibration S^4 -> S^2; Hirzebruch-Hopf forces (lambda, rho) = (1, 1), "
                 "mu(f) = 2; boundary twist exponents (1,-1,1), local link pretzel (2,-2,2)");
  s4->monodromy = fp::boundary_twist_data(1, -1, 1);
  s4->links = links::LinkCollection{{links::builtin_link("pretzel(2,-2,2)"), 1}};
  add("cp2", "CP^2: Omega is the set of odd squares; positive definite bounds lambda(f) <= 2, rho(f) >= 1");
  add("cp2bar", "CP^2 with reversed orientation: Omega is the set of negated odd squares");
  add("s2xs2", "S^2 x S^2: even form, Omega is 8Z within the window");
  add("k3", "K3 surface, form 2(-E8) + 3H: even, signature -16");
  add("m_s1xs3:1", "S^1 x S^3: mu(f) = e(M) = 0, a topological torus bundle when fibered over S^2");
  add("m_s1xs3:2", "#2 S^1 x S^3: b2 = 0 forces mu(f) = 2 - 2 b1 = -2 < 0, no singular fibration");
  for (const auto& e : out) {
    e.invariants.validate();
    if (e.monodromy) e.monodromy->validate();
  }
  return out;
}

namespace detail {

inline std::vector<std::int64_t> parse_list(const std::string& text, const std::string& what,
                                            std::optional<std::size_t> expected = std::nullopt) {
  std::vector<std::int64_t> out;
  std::size_t p = 0;
  while (p <= text.size()) {
    const std::size_t e = std::min(text.find(',', p), text.size());
    const auto v = links::detail::parse_int(links::detail::normalize_tag(text.substr(p, e - p)));
    if (!v) throw InputError(what + ": bad integer list '" + text + "'");
    out.push_back(*v);
    p = e + 1;
  }
  if (expected && out.size() != *expected)
    throw InputError(what + ": expected " + std::to_string(*expected) + " integers, got " + std::to_string(out.size()));
  return out;
}

inline std::string read_source(const std::string& path, std::istream& in) {
  if (path == "-") return std::string(std::istreambuf_iterator<char>(in), {});
  std::ifstream f(path);
  if (!f) throw InputError("cannot open '" + path + "'");
  return std::string(std::istreambuf_iterator<char>(f), {});
}

inline std::uint64_t enumeration_budget() {
  const char* v = std::getenv(kBudgetVariable);
  if (!v || !*v) return kDefaultEnumerationBudget;
  const auto n = links::detail::parse_int(v);
  if (!n || *n < 1) throw InputError(std::string(kBudgetVariable) + " must be a positive integer");
  return static_cast<std::uint64_t>(*n);
}

// Surface given as s2, t2, or a genus; returns its Euler characteristic.
inline std::int64_t surface_chi(const std::string& raw) {
  const std::string s = links::detail::normalize_tag(raw);
  if (s == "s2" || s == "sphere") return 2;
  if (s == "t2" || s == "torus") return 0;
  std::string g = s;
  if (g.rfind("genus", 0) == 0) g = g.substr(5);
  if (!g.empty() && (g[0] == ':' || g[0] == '=')) g = g.substr(1);
  const auto genus = links::detail::parse_int(g);
  if (!genus || *genus < 0) throw InputError("surface '" + raw + "': expected s2, t2, or a genus");
  return 2 - 2 * *genus;
}

inline std::string str(const Integer& x) { return x.str(); }

inline std::string join(const std::vector<Integer>& xs, const std::string& sep = ", ") {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? sep : "") + xs[i].str();
  return s;
}

inline std::string triple_str(const fp::Triple& k) {
  return "(" + std::to_string(k[0]) + "," + std::to_string(k[1]) + "," + std::to_string(k[2]) + ")";
}

inline json triple_json(const fp::Triple& k) { return json::array({k[0], k[1], k[2]}); }

inline json invariants_json(const hh::ManifoldInvariants& m) {
  json j{{"b1", m.b1}, {"b2", m.b2}, {"e", m.e}, {"sigma", m.sigma}};
  if (m.form) j["form"] = io::matrix_to_json(m.form->matrix());
  return j;
}

inline std::string invariants_str(const hh::ManifoldInvariants& m) {
  return "b1=" + std::to_string(m.b1) + " b2=" + std::to_string(m.b2) + " e=" + std::to_string(m.e) +
         " sigma=" + std::to_string(m.sigma);
}

// Pretzel annotation for triples whose fiber expands to a torus.
inline std::optional<std::string> gphi_note(const fp::Triple& k) {
  if (!fp::genus_zero_criterion(k) || !fp::torus_expandable(k)) return std::nullopt;
  fp::Triple s = k;
  std::sort(s.begin(), s.end());
  if (s == fp::Triple{-1, 1, 1}) return "Matsumoto / pretzel (2,-2,2)";
  // A permutation of (1,-1,n): n is the entry left after removing one opposite pair.
  std::int64_t n = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j)
      if (k[i] + k[j] == 0 && std::abs(k[i]) == 1) n = k[3 - i - j];
  return "pretzel (2,-2," + std::to_string(2 * n) + "), fiber expands to a torus";
}

struct Context {
  std::ostream& out;
  std::ostream& err;
  std::istream& in;
  bool json_output = false;

  void emit(const json& j, const std::string& text) const {
    if (json_output) out << j.dump(2) << "\n";
    else out << text;
  }
};

inline json envelope(const std::string& command) { return json{{"schema", io::kSchema}, {"command", command}}; }

// ---- index

struct ManifoldSource {
  std::string builtin;
  std::string form_file;
};

inline hh::ManifoldInvariants load_manifold(const ManifoldSource& src, std::istream& in, std::string& label) {
  if (!src.builtin.empty() && !src.form_file.empty()) throw InputError("give either --builtin or --form, not both");
  if (!src.builtin.empty()) {
    auto m = hh::builtin_manifold(links::detail::normalize_tag(src.builtin));
    label = m.tag + " (" + m.description + ")";
    return m.invariants;
  }
  if (!src.form_file.empty()) {
    auto f = io::form_from_json(io::parse(read_source(src.form_file, in), src.form_file));
    label = "form from " + src.form_file;
    return hh::ManifoldInvariants::from_form(f.b1, std::move(f.form));
  }
  throw InputError("give --builtin TAG or --form FILE");
}

inline int cmd_index(const Context& cx, const ManifoldSource& src, std::int64_t window, std::int64_t box) {
  std::string label;
  const auto inv = load_manifold(src, cx.in, label);
  const auto rep = hh::realizable_indices(inv, window, box, enumeration_budget());
  json j = envelope("index");
  j["manifold"] = {{"label", label}, {"invariants", invariants_json(inv)}};
  j["omega"] = {{"window", window},
                {"values", io::integers_to_json(rep.omega.values)},
                {"exhaustive", rep.omega.exhaustive},
                {"box_radius", rep.omega.box_radius},
                {"label", rep.omega.label()},
                {"vectors_examined", rep.omega.vectors_examined}};
  j["lambdas"] = io::integers_to_json(rep.lambdas);
  j["rhos"] = io::integers_to_json(rep.rhos);
  json pairs = json::array();
  std::ostringstream t;
  t << "manifold: " << label << "\n  " << invariants_str(inv) << "\n";
  t << "Omega in [-" << window << "," << window << "] (" << rep.omega.label() << "): {" << join(rep.omega.values) << "}\n";
  t << "lambda values: {" << join(rep.lambdas) << "}\n";
  t << "rho values: {" << join(rep.rhos) << "}\n";
  t << "realizable indices (" << rep.pairs.size() << "):\n";
  for (const auto& p : rep.pairs) {
    const auto c = hh::chern_squares(p, inv);
    const auto [il, ir] = p.plane_field_index();
    pairs.push_back({{"lambda", io::integer_to_json(p.lambda)},
                     {"rho", io::integer_to_json(p.rho)},
                     {"plane_field_index", json::array({io::integer_to_json(il), io::integer_to_json(ir)})},
                     {"mu", io::integer_to_json(p.mu())},
                     {"feasible", p.feasible()},
                     {"c1_sq", io::integer_to_json(c.c1_sq)},
                     {"c1_prime_sq", io::integer_to_json(c.c1_prime_sq)}});
    t << "  (lambda,rho) = (" << p.lambda << "," << p.rho << ")  index (-lambda,rho) = (" << il << "," << ir
      << ")  mu = " << p.mu() << (p.feasible() ? "" : "  infeasible (mu < 0)") << "  c1^2 = " << c.c1_sq
      << "  c1'^2 = " << c.c1_prime_sq << "\n";
  }
  j["pairs"] = pairs;
  cx.emit(j, t.str());
  return kOk;
}

// ---- obstruct

struct ObstructArgs {
  std::optional<std::int64_t> b1, b2, sigma;
  ManifoldSource source;
  std::string base, fiber;
};

inline int cmd_obstruct(const Context& cx, const ObstructArgs& a) {
  hh::ManifoldInvariants inv;
  std::string label;
  if (!a.source.builtin.empty() || !a.source.form_file.empty()) {
    inv = load_manifold(a.source, cx.in, label);
    if (a.b1 && *a.b1 != inv.b1)
      throw InputError("--b1 " + std::to_string(*a.b1) + " disagrees with the manifold's b1 = " + std::to_string(inv.b1));
    if (a.b2 && *a.b2 != inv.b2)
      throw InputError("--b2 " + std::to_string(*a.b2) + " disagrees with the manifold's b2 = " + std::to_string(inv.b2));
    if (a.sigma && *a.sigma != inv.sigma)
      throw InputError("--sigma " + std::to_string(*a.sigma) + " disagrees with the form's signature " +
                       std::to_string(inv.sigma));
  } else {
    if (!a.b1 || !a.b2) throw InputError("give --b1 and --b2, or a manifold via --builtin/--form");
    inv = hh::ManifoldInvariants::from_betti(*a.b1, *a.b2, a.sigma.value_or(0));
    label = "b1=" + std::to_string(*a.b1) + ", b2=" + std::to_string(*a.b2);
  }
  std::optional<std::int64_t> base_chi, fiber_chi;
  if (!a.base.empty()) base_chi = surface_chi(a.base);
  if (!a.fiber.empty()) fiber_chi = surface_chi(a.fiber);
  const auto verdicts = hh::obstruct(inv, base_chi, fiber_chi);

  json j = envelope("obstruct");
  j["manifold"] = {{"label", label}, {"invariants", invariants_json(inv)}};
  if (base_chi) j["base_chi"] = *base_chi;
  if (fiber_chi) j["fiber_chi"] = *fiber_chi;
  json vs = json::array();
  std::ostringstream t;
  t << "manifold: " << label << "  " << invariants_str(inv) << "\n";
  for (const auto& v : verdicts) {
    json jv{{"kind", hh::to_string(v.kind)}, {"statement", v.statement}};
    if (v.mu_witness) jv["mu_witness"] = *v.mu_witness;
    if (v.satisfied) jv["satisfied"] = *v.satisfied;
    if (v.lambda_max) jv["lambda_max"] = *v.lambda_max;
    if (v.rho_min) jv["rho_min"] = *v.rho_min;
    vs.push_back(jv);
    t << hh::to_string(v.kind) << ": " << v.statement;
    if (v.satisfied) t << (*v.satisfied ? " [declared base/fiber consistent]" : " [declared base/fiber violate this]");
    t << "\n";
  }
  j["verdicts"] = vs;
  cx.emit(j, t.str());
  return kOk;
}

// ---- gphi

inline int cmd_gphi(const Context& cx, const std::string& k_text, const std::string& monodromy_file,
                    std::size_t max_cosets) {
  if (k_text.empty() == monodromy_file.empty()) throw InputError("give exactly one of --k or --monodromy");
  fp::MonodromyData data;
  std::optional<fp::Triple> triple;
  if (!k_text.empty()) {
    const auto k = parse_list(k_text, "--k", 3);
    triple = fp::Triple{k[0], k[1], k[2]};
    data = fp::boundary_twist_data(k[0], k[1], k[2]);
  } else {
    data = io::monodromy_from_json(io::parse(read_source(monodromy_file, cx.in), monodromy_file));
  }
  const auto p = fp::build_g_phi(data);
  const auto v = fp::triviality(p, max_cosets);

  json j = envelope("gphi");
  j["presentation"] = io::presentation_to_json(p);
  j["presentation_text"] = p.str();
  j["abelianization"] = io::group_to_json(v.abelianization);
  j["verdict"] = fp::to_string(v.kind);
  j["witness"] = v.witness;
  if (v.enumeration)
    j["coset_enumeration"] = {{"completed", v.enumeration->completed},
                              {"index", v.enumeration->index},
                              {"cosets_defined", v.enumeration->cosets_defined},
                              {"max_cosets", max_cosets}};
  std::ostringstream t;
  t << "presentation: " << p.str() << "\n";
  t << "abelianization: " << v.abelianization.str() << "\n";
  if (v.enumeration)
    t << "coset enumeration: " << (v.enumeration->completed ? "completed" : "budget exhausted") << ", index "
      << v.enumeration->index << ", " << v.enumeration->cosets_defined << " cosets defined (budget " << max_cosets
      << ")\n";
  t << "verdict: " << fp::to_string(v.kind) << " (" << v.witness << ")\n";
  if (triple) {
    const Integer c = fp::criterion_value(*triple);
    j["exponents"] = triple_json(*triple);
    j["criterion"] = io::integer_to_json(c);
    j["criterion_holds"] = fp::genus_zero_criterion(*triple);
    const auto fam = fp::classify_family(*triple);
    j["family"] = fam ? json(fp::to_string(*fam)) : json(nullptr);
    t << "criterion k1k2 + k2k3 + k3k1 = " << c << (fp::genus_zero_criterion(*triple) ? " (|.| = 1)" : " (|.| != 1)")
      << "\n";
    if (fam) t << "family: " << fp::to_string(*fam) << "\n";
    if (const auto note = gphi_note(*triple)) {
      j["note"] = *note;
      t << "note: " << *note << "\n";
    }
  }
  cx.emit(j, t.str());
  return kOk;
}

// ---- enumerate

inline int cmd_enumerate(const Context& cx, std::int64_t bound, bool torus_only, bool verdicts, std::size_t max_cosets) {
  const auto e = fp::enumerate_genus_zero(bound);
  json j = envelope("enumerate");
  j["bound"] = bound;
  j["torus_expandable_only"] = torus_only;
  std::ostringstream t;
  t << "genus-zero solutions of |k1k2 + k2k3 + k3k1| = 1 with |k_i| <= " << bound;
  if (torus_only) t << ", torus-expandable only";
  t << "\n";
  auto keep = [&](const fp::Triple& k) { return !torus_only || fp::torus_expandable(k); };
  std::size_t total = 0;
  json families = json::array();
  for (auto f : fp::kGenusZeroFamilies) {
    json list = json::array();
    std::string line;
    for (const auto& k : e.by_family[static_cast<std::size_t>(f)])
      if (keep(k)) {
        list.push_back(triple_json(k));
        line += " " + triple_str(k);
      }
    total += list.size();
    t << "family " << fp::to_string(f) << ": " << list.size() << "\n";
    if (!list.empty()) t << " " << line << "\n";
    families.push_back({{"family", fp::to_string(f)}, {"count", list.size()}, {"solutions", list}});
  }
  json anomalies = json::array();
  std::vector<fp::Triple> kept;
  for (const auto& k : e.anomalies)
    if (keep(k)) kept.push_back(k);
  total += kept.size();
  t << "anomalies (criterion holds, no family): " << kept.size() << "\n";
  for (const auto& k : kept) {
    json a{{"exponents", triple_json(k)}};
    t << "  " << triple_str(k);
    if (verdicts) {
      const auto v = fp::triviality(fp::build_g_phi(fp::boundary_twist_data(k[0], k[1], k[2])), max_cosets);
      a["verdict"] = fp::to_string(v.kind);
      a["witness"] = v.witness;
      t << "  " << fp::to_string(v.kind) << " (" << v.witness << ")";
    }
    t << "\n";
    anomalies.push_back(a);
  }
  t << "total: " << total << "\n";
  j["families"] = families;
  j["anomalies"] = anomalies;
  j["total"] = total;
  cx.emit(j, t.str());
  return kOk;
}

// ---- unfold

inline links::LinkCollection load_collection(const std::string& path, std::istream& in) {
  return io::collection_from_json(io::parse(read_source(path, in), path));
}

inline json totals_json(const links::Totals& t) { return {{"mu", t.mu}, {"lambda", t.lambda}, {"rho", t.mu - t.lambda}}; }

inline int cmd_unfold(const Context& cx, const std::string& action, const std::string& file, const std::string& file2) {
  if (file == "-" && file2 == "-") throw InputError("only one collection can come from stdin");
  const auto a = load_collection(file, cx.in);
  json j = envelope("unfold");
  j["action"] = action;
  j["collection"] = io::collection_to_json(a)["links"];
  std::ostringstream t;
  const auto ta = links::totals(a);
  j["totals"] = totals_json(ta);
  if (action == "totals") {
    t << "totals: (mu, lambda) = (" << ta.mu << ", " << ta.lambda << "), rho = " << ta.mu - ta.lambda << "\n";
  } else if (action == "equiv") {
    const auto b = load_collection(file2, cx.in);
    const auto tb = links::totals(b);
    const bool eq = ta == tb;
    j["other"] = io::collection_to_json(b)["links"];
    j["other_totals"] = totals_json(tb);
    j["equivalent"] = eq;
    t << "first:  (mu, lambda) = (" << ta.mu << ", " << ta.lambda << ")\n";
    t << "second: (mu, lambda) = (" << tb.mu << ", " << tb.lambda << ")\n";
    t << (eq ? "equivalent: totals agree\n" : "not equivalent: totals differ\n");
  } else if (action == "hopf") {
    const auto h = links::hopf_unfoldable(ta);
    t << "totals: (mu, lambda) = (" << ta.mu << ", " << ta.lambda << ")\n";
    if (h) {
      j["hopf"] = {{"positive", h->positives}, {"negative", h->negatives}};
      t << "unfolds to " << h->positives << " x hopf+ and " << h->negatives << " x hopf-\n";
    } else {
      const std::string why = ta.lambda < 0 ? "lambda < 0" : "lambda > mu";
      j["hopf"] = nullptr;
      j["refusal"] = why;
      t << "no Hopf unfolding: " << why << " (need 0 <= lambda <= mu)\n";
    }
  } else {
    throw InputError("unknown unfold action '" + action + "'");
  }
  cx.emit(j, t.str());
  return kOk;
}

// ---- mcg

inline sl2::Sl2Element matrix_arg(const std::string& s) {
  const auto v = parse_list(s, "--matrix", 4);
  return {v[0], v[1], v[2], v[3]};
}

inline sl2::TorusCurve curve_arg(const std::string& s, const std::string& what) {
  const auto v = parse_list(s, what, 2);
  return {v[0], v[1]};
}

inline json tag_json(const sl2::ConjugacyTag& tag) {
  json j{{"type", sl2::to_string(tag.type)}, {"sign", tag.sign}, {"text", tag.str()},
         {"representative", io::sl2_to_json(tag.representative)}};
  if (tag.type == sl2::ConjugacyType::elliptic) {
    j["order"] = tag.order;
    j["rotation"] = tag.rotation;
  }
  if (tag.type == sl2::ConjugacyType::parabolic) j["shift"] = io::integer_to_json(tag.parabolic_shift);
  if (tag.type == sl2::ConjugacyType::hyperbolic) j["word"] = tag.word;
  return j;
}

inline void describe_element(const sl2::Sl2Element& g, json& j, std::ostream& t) {
  const auto ord = sl2::element_order(g);
  const auto tag = sl2::conjugacy_class(g);
  j["matrix"] = io::sl2_to_json(g);
  j["order"] = ord ? json(*ord) : json("infinite");
  j["conjugacy"] = tag_json(tag);
  j["abelianization"] = sl2::abelianization_image(g);
  t << "matrix: " << g.str() << "\n";
  t << "order: " << (ord ? std::to_string(*ord) : std::string("infinite")) << "\n";
  t << "conjugacy class: " << tag.str() << "\n";
  t << "image in Z/12: " << sl2::abelianization_image(g) << "\n";
}

struct McgArgs {
  std::string matrix, other;
  std::vector<std::string> twists;
  std::string c1, c2;
  std::int64_t k1 = 0, k2 = 0;
};

inline int cmd_mcg(const Context& cx, const std::string& action, const McgArgs& a) {
  json j = envelope("mcg");
  j["action"] = action;
  std::ostringstream t;
  if (action == "word") {
    std::vector<sl2::TwistLetter> letters;
    for (const auto& s : a.twists) {
      const auto v = parse_list(s, "--twist", 3);
      letters.push_back({sl2::TorusCurve(v[0], v[1]), v[2]});
    }
    const sl2::TwistWord w(letters);
    json jl = json::array();
    t << "word:";
    for (const auto& l : w.letters()) {
      jl.push_back({{"curve", json::array({l.curve.p(), l.curve.q()})}, {"exponent", l.exponent}});
      t << " T" << l.curve.str() << "^" << l.exponent;
    }
    if (w.empty()) t << " (empty)";
    t << "\n";
    j["word"] = jl;
    describe_element(sl2::evaluate_word(w), j, t);
  } else if (action == "order") {
    const auto g = matrix_arg(a.matrix);
    const auto ord = sl2::element_order(g);
    j["matrix"] = io::sl2_to_json(g);
    j["order"] = ord ? json(*ord) : json("infinite");
    t << (ord ? std::to_string(*ord) : std::string("infinite")) << "\n";
  } else if (action == "conj") {
    const auto g = matrix_arg(a.matrix);
    describe_element(g, j, t);
    if (!a.other.empty()) {
      const auto h = matrix_arg(a.other);
      const bool same = sl2::conjugacy_class(g) == sl2::conjugacy_class(h);
      j["other"] = io::sl2_to_json(h);
      j["conjugate"] = same;
      t << "conjugate to " << h.str() << ": " << (same ? "yes" : "no") << "\n";
    }
  } else if (action == "ishida") {
    const auto c1 = curve_arg(a.c1, "--c1"), c2 = curve_arg(a.c2, "--c2");
    const auto cls = sl2::ishida_class(c1, c2);
    j["c1"] = json::array({c1.p(), c1.q()});
    j["c2"] = json::array({c2.p(), c2.q()});
    j["intersection"] = std::abs(sl2::wedge(c1, c2));
    j["class"] = sl2::to_string(cls);
    t << "|c1 ^ c2| = " << std::abs(sl2::wedge(c1, c2)) << "\n" << sl2::to_string(cls) << "\n";
  } else if (action == "twotwist") {
    const auto c1 = curve_arg(a.c1, "--c1"), c2 = curve_arg(a.c2, "--c2");
    const auto r = sl2::two_twist_trivial(c1, a.k1, c2, a.k2);
    j["product"] = io::sl2_to_json(r.product);
    j["trivial"] = r.trivial;
    j["intersection"] = r.intersection;
    j["subgroup"] = sl2::to_string(r.subgroup);
    j["certificate"] = r.certificate;
    t << "T" << c1.str() << "^" << a.k1 << " T" << c2.str() << "^" << a.k2 << " = " << r.product.str() << "\n";
    t << (r.trivial ? "trivial" : "nontrivial") << ": " << r.certificate << "\n";
  } else if (action == "abelian") {
    const auto g = matrix_arg(a.matrix);
    j["matrix"] = io::sl2_to_json(g);
    j["image"] = sl2::abelianization_image(g);
    t << sl2::abelianization_image(g) << " (mod 12)\n";
  } else {
    throw InputError("unknown mcg action '" + action + "'");
  }
  cx.emit(j, t.str());
  return kOk;
}

// ---- dbeta / shell

inline int cmd_dbeta(const Context& cx, const std::string& ambient, const std::string& cls,
                     std::optional<std::int64_t> fiber_genus, const std::string& pair) {
  Integer d;
  json j = envelope("dbeta");
  std::ostringstream t;
  if (fiber_genus) {
    if (!ambient.empty() || !cls.empty()) throw InputError("--fiber-genus excludes --ambient/--class");
    d = links::fiber_d_beta(*fiber_genus);
    j["fiber_genus"] = *fiber_genus;
  } else {
    if (ambient.empty() || cls.empty()) throw InputError("give --ambient SPEC and --class COORDS, or --fiber-genus g");
    const auto g = io::parse_group_spec(ambient);
    std::vector<Integer> coords;
    for (auto x : parse_list(cls, "--class")) coords.emplace_back(x);
    const links::CohomologyClassIn3Manifold beta(g, coords);
    d = links::d_beta(beta);
    j["ambient"] = io::group_to_json(g);
    j["class"] = io::integers_to_json(coords);
  }
  j["d_beta"] = io::integer_to_json(d);
  t << "d_beta = " << d;
  if (d == 0) t << " (invariants in Z + Z)";
  t << "\n";
  if (!pair.empty()) {
    const auto p = parse_list(pair, "--pair", 2);
    const auto s = links::shell_reduction({p[0], p[1]}, d, d);
    j["shell"] = {{"pair", json::array({p[0], p[1]})},
                  {"invariant", json::array({io::integer_to_json(s.first), io::integer_to_json(s.second)})},
                  {"moduli", json::array({io::integer_to_json(s.d1), io::integer_to_json(s.d2)})}};
    t << "shell invariant (-lambda, rho) = (" << s.first << ", " << s.second << ") in Z/" << s.d1 << " x Z/" << s.d2
      << "\n";
  }
  cx.emit(j, t.str());
  return kOk;
}

inline int cmd_shell(const Context& cx, const std::string& pair, std::int64_t d1, std::int64_t d2) {
  const auto p = parse_list(pair, "--pair", 2);
  const auto s = links::shell_reduction({p[0], p[1]}, d1, d2);
  json j = envelope("shell");
  j["pair"] = json::array({p[0], p[1]});
  j["moduli"] = json::array({d1, d2});
  j["invariant"] = json::array({io::integer_to_json(s.first), io::integer_to_json(s.second)});
  std::ostringstream t;
  t << "(-lambda, rho) = (" << s.first << ", " << s.second << ")";
  auto mod = [](std::int64_t d) { return d == 0 ? std::string("Z") : "Z/" + std::to_string(d); };
  t << " in " << mod(d1) << " x " << mod(d2) << "\n";
  cx.emit(j, t.str());
  return kOk;
}

// ---- catalog

inline int cmd_catalog(const Context& cx) {
  const auto entries = catalog();
  json j = envelope("catalog");
  json list = json::array();
  std::ostringstream t;
  for (const auto& e : entries) {
    json je{{"name", e.name}, {"description", e.description}, {"invariants", invariants_json(e.invariants)},
            {"provenance", e.provenance}};
    t << e.name << ": " << e.description << "  [" << invariants_str(e.invariants) << "]\n    " << e.provenance << "\n";
    if (e.monodromy) {
      je["monodromy"] = io::monodromy_to_json(*e.monodromy);
      t << "    monodromy exponents:";
      for (auto k : e.monodromy->exponents()) t << " " << k;
      t << "\n";
    }
    if (e.links) {
      je["links"] = io::collection_to_json(*e.links)["links"];
      t << "    links:";
      for (const auto& l : e.links->entries())
        t << " " << l.multiplicity << "x" << l.link.name() << " (mu=" << l.link.mu() << ", lambda="
          << (l.link.lambda() ? std::to_string(*l.link.lambda()) : std::string("unknown")) << ")";
      t << "\n";
    }
    list.push_back(je);
  }
  j["entries"] = list;
  cx.emit(j, t.str());
  return kOk;
}

// ---- selfcheck

struct CheckResult {
  std::string name;
  bool pass;
};

inline std::vector<CheckResult> self_checks() {
  std::vector<CheckResult> out;
  auto run = [&](const std::string& name, const std::function<bool()>& f) {
    bool ok = false;
    try {
      ok = f();
    } catch (const std::exception&) {
      ok = false;
    }
    out.push_back({name, ok});
  };
  std::mt19937 rng(12345);
  auto rnd = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };

  run("catalog entries validate", [] { return !catalog().empty(); });
  run("smith form invariant under unimodular changes", [&] {
    for (int trial = 0; trial < 40; ++trial) {
      IntegerMatrix m(3, 3), u = IntegerMatrix::identity(3);
      for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t k = 0; k < 3; ++k) m(i, k) = rnd(-5, 5);
      for (int s = 0; s < 6; ++s) {
        const auto i = static_cast<std::size_t>(rnd(0, 2)), k = static_cast<std::size_t>(rnd(0, 2));
        if (i != k) u.add_row(i, k, rnd(-2, 2));
      }
      const auto a = smith_normal_form(m), b = smith_normal_form(u * m);
      if (a.invariant_factors != b.invariant_factors) return false;
    }
    return true;
  });
  run("SL(2,Z) abelianization is a homomorphism", [&] {
    const sl2::Sl2Element gens[] = {sl2::Sl2Element::R(), sl2::Sl2Element::L(), sl2::Sl2Element::S()};
    for (int trial = 0; trial < 60; ++trial) {
      sl2::Sl2Element x, y;
      for (int s = 0; s < 6; ++s) x = x * gens[rnd(0, 2)].pow(rnd(-2, 2));
      for (int s = 0; s < 6; ++s) y = y * gens[rnd(0, 2)].pow(rnd(-2, 2));
      if (sl2::abelianization_image(x * y) != (sl2::abelianization_image(x) + sl2::abelianization_image(y)) % 12)
        return false;
    }
    return true;
  });
  run("element orders match repeated multiplication", [&] {
    for (int trial = 0; trial < 60; ++trial) {
      sl2::Sl2Element g;
      for (int s = 0; s < 4; ++s) g = g * (rnd(0, 1) ? sl2::Sl2Element::S() : sl2::Sl2Element::R().pow(rnd(-2, 2)));
      const auto ord = sl2::element_order(g);
      sl2::Sl2Element p = g;
      int n = 1;
      while (!p.is_identity() && n <= 12) p = p * g, ++n;
      if (ord ? *ord != n : n <= 12) return false;
    }
    return true;
  });
  run("conjugacy tags are conjugation invariant", [&] {
    for (int trial = 0; trial < 40; ++trial) {
      sl2::Sl2Element g, h;
      for (int s = 0; s < 5; ++s) g = g * (rnd(0, 1) ? sl2::Sl2Element::L() : sl2::Sl2Element::R()).pow(rnd(-2, 2));
      for (int s = 0; s < 4; ++s) h = h * (rnd(0, 1) ? sl2::Sl2Element::S() : sl2::Sl2Element::R().pow(rnd(-3, 3)));
      if (!(sl2::conjugacy_class(g) == sl2::conjugacy_class(h * g * h.inverse()))) return false;
    }
    return true;
  });
  run("Omega values are congruent to sigma mod 8", [] {
    for (const auto& e : catalog()) {
      if (!e.invariants.form) continue;
      const auto w = hh::omega_window(*e.invariants.form, 48, 1);
      for (const auto& v : w.values)
        if (mod_floor(v - e.invariants.sigma, 8) != 0) return false;
    }
    return true;
  });
  run("S^4 realizes exactly (1,1)", [] {
    const auto r = hh::realizable_indices(hh::builtin_manifold("s4").invariants, 100);
    return r.pairs.size() == 1 && r.pairs[0] == hh::IndexPair{1, 1};
  });
  run("abelianized G(phi) is trivial iff the quadratic criterion holds", [] {
    for (int a = -3; a <= 3; ++a)
      for (int b = -3; b <= 3; ++b)
        for (int c = -3; c <= 3; ++c) {
          const auto p = fp::build_g_phi(fp::boundary_twist_data(a, b, c));
          if (p.abelianization().is_trivial() != fp::genus_zero_criterion({a, b, c})) return false;
        }
    return true;
  });
  run("mirror is an involution swapping Hopf witnesses", [] {
    for (std::int64_t mu = 0; mu <= 6; ++mu)
      for (std::int64_t l = -2; l <= mu + 2; ++l) {
        const links::FiberedLinkClass k("k", mu, l, mu - l);
        if (!(links::mirror(links::mirror(k)) == k)) return false;
        const links::LinkCollection c{{k, 1}};
        const auto h = links::hopf_unfoldable(c), hm = links::hopf_unfoldable(links::mirror(c));
        if (h.has_value() != hm.has_value()) return false;
        if (h && (h->positives != hm->negatives || h->negatives != hm->positives)) return false;
      }
    return true;
  });
  run("d_beta scales linearly", [&] {
    const AbelianGroup g(2, {4});
    for (int trial = 0; trial < 30; ++trial) {
      std::vector<Integer> v{rnd(-20, 20), rnd(-20, 20), rnd(0, 3)};
      if (v[0] == 0 && v[1] == 0) continue;
      const int k = rnd(1, 5);
      auto kv = v;
      for (auto& x : kv) x *= k;
      if (links::d_beta({g, kv}) != k * links::d_beta({g, v})) return false;
    }
    return true;
  });
  return out;
}

inline int cmd_selfcheck(const Context& cx) {
  const auto results = self_checks();
  json j = envelope("selfcheck");
  json list = json::array();
  std::ostringstream t;
  bool all = true;
  for (const auto& r : results) {
    list.push_back({{"check", r.name}, {"pass", r.pass}});
    t << (r.pass ? "ok   " : "FAIL ") << r.name << "\n";
    all = all && r.pass;
  }
  j["checks"] = list;
  j["pass"] = all;
  cx.emit(j, t.str());
  return all ? kOk : kFailure;
}

}  // namespace detail

/// Runs the command line; args exclude the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, std::istream& in = std::cin) {
  using namespace detail;
  CLI::App app{"singfib: invariants and obstructions for singular fibrations of 4-manifolds"};
  app.name("singfib");
  app.require_subcommand(1);
  app.footer(std::string("Exit codes: 0 ok, 1 self-check failure, 2 input error, 3 budget exceeded, 4 missing invariant.\n") +
             "Environment: " + kBudgetVariable + " overrides the enumeration budget for Omega boxes (default " +
             std::to_string(kDefaultEnumerationBudget) + " vectors).");
  bool json_output = false;
  app.add_flag("--json", json_output, "Machine-readable output (schema singfib/1)");

  std::function<int()> action;
  auto sub = [&](const char* name, const char* desc) {
    auto* s = app.add_subcommand(name, desc);
    s->fallthrough();
    return s;
  };

  // index
  ManifoldSource index_src;
  std::int64_t window = 100, box = 8;
  auto* index = sub("index", "Omega window and realizable indices (lambda, rho)");
  index->add_option("--builtin", index_src.builtin, "s4, cp2, cp2bar, s2xs2, k3, m_s1xs3:<m>");
  index->add_option("--form", index_src.form_file, "Form JSON file ('-' for stdin)");
  index->add_option("--window", window, "Window bound B for |S(w,w)|")->capture_default_str()->check(CLI::NonNegativeNumber);
  index->add_option("--box", box, "Box radius for indefinite forms")->capture_default_str()->check(CLI::NonNegativeNumber);
  index->callback([&] { action = [&] { return cmd_index({out, err, in, json_output}, index_src, window, box); }; });

  // obstruct
  ObstructArgs ob;
  auto* obstruct = sub("obstruct", "Obstructions to singular fibrations");
  obstruct->add_option("--b1", ob.b1, "First Betti number")->check(CLI::NonNegativeNumber);
  obstruct->add_option("--b2", ob.b2, "Second Betti number")->check(CLI::NonNegativeNumber);
  obstruct->add_option("--sigma", ob.sigma, "Signature (without a form)");
  obstruct->add_option("--builtin", ob.source.builtin, "Built-in manifold");
  obstruct->add_option("--form", ob.source.form_file, "Form JSON file");
  obstruct->add_option("--base", ob.base, "Base surface: s2, t2, or a genus");
  obstruct->add_option("--fiber", ob.fiber, "Generic fiber: s2, t2, or a genus");
  obstruct->callback([&] { action = [&] { return cmd_obstruct({out, err, in, json_output}, ob); }; });

  // gphi
  std::string k_text, monodromy_file;
  std::size_t max_cosets = fp::kDefaultMaxCosets;
  auto* gphi = sub("gphi", "Presentation of G(phi) and its triviality");
  gphi->add_option("--k", k_text, "Boundary twist exponents k1,k2,k3 (use --k=-1,1,1 for a leading minus)");
  gphi->add_option("--monodromy", monodromy_file, "Monodromy JSON file");
  gphi->add_option("--max-cosets", max_cosets, "Coset enumeration budget")->capture_default_str()->check(CLI::PositiveNumber);
  gphi->callback([&] { action = [&] { return cmd_gphi({out, err, in, json_output}, k_text, monodromy_file, max_cosets); }; });

  // enumerate
  std::int64_t bound = 0;
  bool torus_only = false, with_verdicts = false;
  auto* enumerate = sub("enumerate", "Genus-zero exponent triples by family");
  enumerate->add_option("--bound", bound, "Bound on |k_i|")->required()->check(CLI::PositiveNumber);
  enumerate->add_flag("--torus-expandable", torus_only, "Only triples of type (1,-1,n)");
  enumerate->add_flag("--verdicts", with_verdicts, "Run the triviality test on anomalies");
  enumerate->add_option("--max-cosets", max_cosets, "Coset enumeration budget for --verdicts")->check(CLI::PositiveNumber);
  enumerate->callback([&] {
    action = [&] { return cmd_enumerate({out, err, in, json_output}, bound, torus_only, with_verdicts, max_cosets); };
  });

  // unfold
  std::string unfold_file, unfold_file2;
  auto* unfold = sub("unfold", "Unfolding calculus on link collections");
  unfold->require_subcommand(1);
  auto* u_totals = unfold->add_subcommand("totals", "Total mu and lambda");
  u_totals->add_option("file", unfold_file, "Collection JSON ('-' for stdin)")->required();
  auto* u_equiv = unfold->add_subcommand("equiv", "Stable unfolding equivalence");
  u_equiv->add_option("file", unfold_file, "First collection")->required();
  u_equiv->add_option("file2", unfold_file2, "Second collection")->required();
  auto* u_hopf = unfold->add_subcommand("hopf", "Decomposition into Hopf links");
  u_hopf->add_option("file", unfold_file, "Collection JSON ('-' for stdin)")->required();
  for (auto* s : {u_totals, u_equiv, u_hopf}) {
    s->fallthrough();
    s->callback([&, s] {
      action = [&, s] { return cmd_unfold({out, err, in, json_output}, s->get_name(), unfold_file, unfold_file2); };
    });
  }

  // mcg
  McgArgs mcg_args;
  auto* mcg = sub("mcg", "Torus mapping classes in SL(2,Z)");
  mcg->require_subcommand(1);
  auto* m_word = mcg->add_subcommand("word", "Evaluate a word of Dehn twists");
  m_word->add_option("--twist", mcg_args.twists, "Twist p,q,k (repeatable, applied left to right)")->required();
  auto* m_order = mcg->add_subcommand("order", "Order of a matrix");
  auto* m_conj = mcg->add_subcommand("conj", "Conjugacy class");
  m_conj->add_option("--other", mcg_args.other, "Second matrix a,b,c,d to compare");
  auto* m_abelian = mcg->add_subcommand("abelian", "Image in the abelianization Z/12");
  for (auto* s : {m_order, m_conj, m_abelian}) s->add_option("--matrix", mcg_args.matrix, "Matrix a,b,c,d")->required();
  auto* m_ishida = mcg->add_subcommand("ishida", "Subgroup generated by two twists");
  auto* m_two = mcg->add_subcommand("twotwist", "Is T_c1^k1 T_c2^k2 the identity?");
  for (auto* s : {m_ishida, m_two}) {
    s->add_option("--c1", mcg_args.c1, "Curve p,q")->required();
    s->add_option("--c2", mcg_args.c2, "Curve p,q")->required();
  }
  m_two->add_option("--k1", mcg_args.k1, "Exponent of the first twist")->required();
  m_two->add_option("--k2", mcg_args.k2, "Exponent of the second twist")->required();
  for (auto* s : {m_word, m_order, m_conj, m_abelian, m_ishida, m_two}) {
    s->fallthrough();
    s->callback([&, s] { action = [&, s] { return cmd_mcg({out, err, in, json_output}, s->get_name(), mcg_args); }; });
  }

  // dbeta
  std::string ambient, class_coords, pair;
  std::optional<std::int64_t> fiber_genus;
  auto* dbeta = sub("dbeta", "d_beta of a class in H^2 of a 3-manifold");
  dbeta->add_option("--ambient", ambient, "Ambient group, e.g. \"free=2;torsion=2,4\"");
  dbeta->add_option("--class", class_coords, "Coordinates of beta");
  dbeta->add_option("--fiber-genus", fiber_genus, "Half Euler class of F x S^1 for a closed genus-g fiber");
  dbeta->add_option("--pair", pair, "Index lambda,rho to reduce modulo d_beta");
  dbeta->callback([&] {
    action = [&] { return cmd_dbeta({out, err, in, json_output}, ambient, class_coords, fiber_genus, pair); };
  });

  // shell
  std::int64_t d1 = 0, d2 = 0;
  auto* shell = sub("shell", "Reduce (-lambda, rho) modulo (d1, d2)");
  shell->add_option("--pair", pair, "Index lambda,rho")->required();
  shell->add_option("--d1", d1, "First modulus (0: none)")->check(CLI::NonNegativeNumber);
  shell->add_option("--d2", d2, "Second modulus (0: none)")->check(CLI::NonNegativeNumber);
  shell->callback([&] { action = [&] { return cmd_shell({out, err, in, json_output}, pair, d1, d2); }; });

  sub("catalog", "Built-in examples")->callback([&] { action = [&] { return cmd_catalog({out, err, in, json_output}); }; });
  sub("selfcheck", "Run the invariant suite")->callback([&] {
    action = [&] { return cmd_selfcheck({out, err, in, json_output}); };
  });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }

  try {
    return action();
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const BudgetExceeded& e) {
    err << "budget exceeded: " << e.what() << "\n";
    return kBudgetExceeded;
  } catch (const MissingInvariant& e) {
    err << "missing invariant: " << e.what() << "\n";
    return kMissingInvariant;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kFailure;
  }
}

}  // namespace singfib::cli
