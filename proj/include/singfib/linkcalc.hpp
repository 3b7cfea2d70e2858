#pragma once

// Invariant calculus of fibered links: (mu, lambda, rho) triples with
// mu = lambda + rho, multisets of links and their unfolding totals, Hopf
// unfoldability, mirror duality, and the shell invariants d_beta.

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "singfib/errors.hpp"
#include "singfib/exactlin.hpp"
#include "singfib/hhindex.hpp"

namespace singfib::links {

// Convention: lambda(hopf+) = 1, lambda(hopf-) = 0, hence lambda = mu for
// links of complex algebraic singularities. Swapping it exchanges lambda and
// rho everywhere (i.e. applies mirror()).
class FiberedLinkClass {
 public:
  FiberedLinkClass(std::string name, std::int64_t mu, std::int64_t lambda, std::int64_t rho)
      : name_(std::move(name)), mu_(mu), lambda_(lambda) {
    if (mu < 0) throw InputError("Milnor number of '" + name_ + "' must be nonnegative");
    if (mu != lambda + rho)
      throw InputError("'" + name_ + "': mu = " + std::to_string(mu) + " but lambda + rho = " + std::to_string(lambda + rho));
  }

  // A link whose Hopf invariant is not known (lambda and rho both unknown).
  static FiberedLinkClass with_unknown_lambda(std::string name, std::int64_t mu) {
    FiberedLinkClass k(std::move(name), mu, 0, mu);
    k.lambda_.reset();
    return k;
  }

  const std::string& name() const { return name_; }
  std::int64_t mu() const { return mu_; }
  std::optional<std::int64_t> lambda() const { return lambda_; }
  std::optional<std::int64_t> rho() const {
    if (!lambda_) return std::nullopt;
    return mu_ - *lambda_;
  }
  bool lambda_known() const { return lambda_.has_value(); }

  friend bool operator==(const FiberedLinkClass&, const FiberedLinkClass&) = default;

 private:
  friend FiberedLinkClass mirror(const FiberedLinkClass&);
  std::string name_;
  std::int64_t mu_;
  std::optional<std::int64_t> lambda_;
};

/// Mirror image: lambda and rho swap, mu is unchanged.
inline FiberedLinkClass mirror(const FiberedLinkClass& k) {
  FiberedLinkClass m = k;
  const std::string& n = k.name_;
  if (n.ends_with("+")) m.name_ = n.substr(0, n.size() - 1) + "-";
  else if (n.ends_with("-")) m.name_ = n.substr(0, n.size() - 1) + "+";
  else if (n == "figure8") m.name_ = n;  // amphichiral
  else if (n.starts_with("mirror(") && n.ends_with(")")) m.name_ = n.substr(7, n.size() - 8);
  else m.name_ = "mirror(" + n + ")";
  if (k.lambda_) m.lambda_ = k.mu_ - *k.lambda_;
  return m;
}

namespace detail {

inline std::string normalize_tag(std::string tag) {
  // Accept the Unicode minus sign and surrounding whitespace.
  const std::string minus = "\xE2\x88\x92";
  for (std::size_t p; (p = tag.find(minus)) != std::string::npos;) tag.replace(p, minus.size(), "-");
  std::string out;
  for (char c : tag)
    if (!std::isspace(static_cast<unsigned char>(c))) out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

inline std::optional<std::int64_t> parse_int(const std::string& s) {
  if (s.empty()) return std::nullopt;
  std::size_t used = 0;
  try {
    const long long v = std::stoll(s, &used);
    if (used != s.size()) return std::nullopt;
    return v;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

}  // namespace detail

/// hopf+, hopf-, trefoil+, trefoil-, figure8, pretzel(2,-2,2n), algebraic(mu).
/// pretzel links get an unknown lambda unless one is supplied.
inline FiberedLinkClass builtin_link(const std::string& raw_tag, std::optional<std::int64_t> lambda = std::nullopt) {
  const std::string tag = detail::normalize_tag(raw_tag);
  if (tag == "hopf+") return {"hopf+", 1, 1, 0};
  if (tag == "hopf-") return {"hopf-", 1, 0, 1};
  if (tag == "trefoil+") return {"trefoil+", 2, 2, 0};
  if (tag == "trefoil-") return {"trefoil-", 2, 0, 2};
  if (tag == "figure8") return {"figure8", 2, 1, 1};
  auto argument = [&](const std::string& head) -> std::optional<std::string> {
    if (tag.rfind(head + "(", 0) != 0 || tag.back() != ')') return std::nullopt;
    return tag.substr(head.size() + 1, tag.size() - head.size() - 2);
  };
  if (auto arg = argument("algebraic")) {
    const auto mu = detail::parse_int(*arg);
    if (!mu || *mu < 0) throw InputError("algebraic(mu) needs a nonnegative integer, got '" + *arg + "'");
    return {tag, *mu, *mu, 0};
  }
  if (auto arg = argument("pretzel")) {
    // pretzel(2,-2,2n) with an even last entry
    if (arg->rfind("2,-2,", 0) != 0) throw InputError("only pretzel(2,-2,2n) links are known, got '" + raw_tag + "'");
    const auto last = detail::parse_int(arg->substr(5));
    if (!last || *last % 2 != 0) throw InputError("pretzel(2,-2,2n) needs an even last entry, got '" + raw_tag + "'");
    if (lambda) return {tag, 2, *lambda, 2 - *lambda};
    return FiberedLinkClass::with_unknown_lambda(tag, 2);
  }
  throw InputError("unknown link tag '" + raw_tag + "'");
}

struct CollectionEntry {
  FiberedLinkClass link;
  std::int64_t multiplicity;
};

class LinkCollection {
 public:
  LinkCollection() = default;
  LinkCollection(std::initializer_list<CollectionEntry> entries) {
    for (const auto& e : entries) add(e.link, e.multiplicity);
  }

  void add(const FiberedLinkClass& link, std::int64_t multiplicity = 1) {
    if (multiplicity < 1) throw InputError("multiplicity of '" + link.name() + "' must be positive");
    for (auto& e : entries_)
      if (e.link == link) {
        e.multiplicity += multiplicity;
        return;
      }
    entries_.push_back({link, multiplicity});
  }

  const std::vector<CollectionEntry>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }

  friend LinkCollection operator+(LinkCollection a, const LinkCollection& b) {
    for (const auto& e : b.entries_) a.add(e.link, e.multiplicity);
    return a;
  }

 private:
  std::vector<CollectionEntry> entries_;
};

struct Totals {
  std::int64_t mu = 0;
  std::int64_t lambda = 0;
  friend bool operator==(const Totals&, const Totals&) = default;
};

/// Multiplicity-weighted total Milnor number and total Hopf invariant.
inline Totals totals(const LinkCollection& c) {
  Totals t;
  for (const auto& e : c.entries()) {
    if (!e.link.lambda_known())
      throw MissingInvariant("lambda of '" + e.link.name() + "' is unknown; supply it to use this link in totals");
    t.mu += e.multiplicity * e.link.mu();
    t.lambda += e.multiplicity * *e.link.lambda();
  }
  return t;
}

/// Stable unfolding equivalence: equal total mu and total lambda.
inline bool stably_equivalent(const LinkCollection& a, const LinkCollection& b) { return totals(a) == totals(b); }

struct HopfDecomposition {
  std::int64_t positives = 0;
  std::int64_t negatives = 0;
  friend bool operator==(const HopfDecomposition&, const HopfDecomposition&) = default;
};

/// Numbers of positive and negative Hopf links with the same totals, when
/// 0 <= lambda <= mu.
inline std::optional<HopfDecomposition> hopf_unfoldable(const Totals& t) {
  if (t.lambda < 0 || t.lambda > t.mu) return std::nullopt;
  return HopfDecomposition{t.lambda, t.mu - t.lambda};
}

inline std::optional<HopfDecomposition> hopf_unfoldable(const LinkCollection& c) { return hopf_unfoldable(totals(c)); }

inline LinkCollection hopf_collection(const HopfDecomposition& h) {
  LinkCollection c;
  if (h.positives > 0) c.add(builtin_link("hopf+"), h.positives);
  if (h.negatives > 0) c.add(builtin_link("hopf-"), h.negatives);
  return c;
}

inline LinkCollection mirror(const LinkCollection& c) {
  LinkCollection m;
  for (const auto& e : c.entries()) m.add(mirror(e.link), e.multiplicity);
  return m;
}

// A class beta in H^2 of a closed oriented 3-manifold.
struct CohomologyClassIn3Manifold {
  AbelianGroup ambient;
  std::vector<Integer> coords;

  CohomologyClassIn3Manifold(AbelianGroup g, std::vector<Integer> c) : ambient(std::move(g)), coords(std::move(c)) {
    if (coords.size() != ambient.coordinate_count())
      throw InputError("class has " + std::to_string(coords.size()) + " coordinates, ambient needs " +
                       std::to_string(ambient.coordinate_count()));
  }
};

/// Twice the divisibility of beta modulo torsion; 0 for torsion classes.
inline Integer d_beta(const CohomologyClassIn3Manifold& beta) {
  return 2 * divisibility(std::span<const Integer>(beta.coords), beta.ambient);
}

/// d_beta of half the Euler class of a trivial boundary fibration F x S^1 with
/// closed fiber of genus g: |chi(F)|.
inline Integer fiber_d_beta(std::int64_t genus) {
  if (genus < 0) throw InputError("genus must be nonnegative");
  // H^2(F x S^1) = Z^{2g} + Z, beta = (chi(F)/2) PD[S^1].
  std::vector<Integer> coords(static_cast<std::size_t>(2 * genus) + 1);
  coords.back() = 1 - genus;
  return d_beta({AbelianGroup::free(coords.size()), coords});
}

struct ShellInvariant {
  Integer first;   // -lambda mod d1 (or -lambda when d1 = 0)
  Integer second;  // rho mod d2 (or rho when d2 = 0)
  Integer d1, d2;
  friend bool operator==(const ShellInvariant&, const ShellInvariant&) = default;
};

/// Reduce the index (-lambda, rho) modulo (d1, d2); a zero modulus keeps the integer.
inline ShellInvariant shell_reduction(const hh::IndexPair& pair, const Integer& d1, const Integer& d2) {
  if (d1 < 0 || d2 < 0) throw InputError("moduli must be nonnegative");
  auto reduce = [](const Integer& x, const Integer& d) { return d == 0 ? x : mod_floor(x, d); };
  return {reduce(-pair.lambda, d1), reduce(pair.rho, d2), d1, d2};
}

inline std::int64_t fiber_chi(std::int64_t genus, std::int64_t boundary) {
  if (genus < 0 || boundary < 0) throw InputError("genus and boundary count must be nonnegative");
  return 2 - 2 * genus - boundary;
}

enum class ComplementComponent { disk, annulus, generic };

inline const char* to_string(ComplementComponent c) {
  switch (c) {
    case ComplementComponent::disk: return "disk";
    case ComplementComponent::annulus: return "annulus";
    case ComplementComponent::generic: return "generic";
  }
  return "?";
}

struct MinimalityCheck {
  bool pass = false;
  std::string reason;
};

/// Relative minimality of a critical point from the components of
/// F \ int(F_0): torus fibers forbid disks; genus >= 2 fibers forbid disks and annuli.
inline MinimalityCheck relatively_minimal(std::int64_t fiber_genus, std::span<const ComplementComponent> components) {
  if (fiber_genus < 1) throw InputError("relative minimality is defined for fibers of genus >= 1");
  const bool has_disk = std::find(components.begin(), components.end(), ComplementComponent::disk) != components.end();
  const bool has_annulus =
      std::find(components.begin(), components.end(), ComplementComponent::annulus) != components.end();
  if (has_disk) return {false, "complement has a disk component"};
  if (fiber_genus >= 2 && has_annulus) return {false, "complement has an annular component (genus >= 2 fiber)"};
  return {true, fiber_genus == 1 ? "no disk components" : "no disk or annular components"};
}

}  // namespace singfib::links
