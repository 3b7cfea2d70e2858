#pragma once

// Finitely presented groups attached to one-critical-point singular
// fibrations: the presentation G(phi) built from monodromy data, triviality
// by abelianization plus bounded Todd-Coxeter enumeration, and the
// genus-zero (three boundary twists) classification.

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "singfib/errors.hpp"
#include "singfib/exactlin.hpp"

namespace singfib::fp {

// Letters are signed 1-based generator indices: +i is generator i, -i its inverse.
using Word = std::vector<int>;

inline Word free_reduce(const Word& w) {
  Word out;
  out.reserve(w.size());
  for (int x : w) {
    if (x == 0) throw InputError("generator index 0 in word");
    if (!out.empty() && out.back() == -x) out.pop_back();
    else out.push_back(x);
  }
  return out;
}

inline Word inverse(const Word& w) {
  Word out(w.rbegin(), w.rend());
  for (int& x : out) x = -x;
  return out;
}

inline Word power(const Word& w, std::int64_t k) {
  const Word base = k < 0 ? inverse(w) : w;
  Word out;
  for (std::int64_t i = 0; i < std::abs(k); ++i) out.insert(out.end(), base.begin(), base.end());
  return free_reduce(out);
}

inline Word concat(std::initializer_list<Word> parts) {
  Word out;
  for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return free_reduce(out);
}

// Exponent sum of each generator.
inline std::vector<Integer> exponent_sums(const Word& w, std::size_t generator_count) {
  std::vector<Integer> v(generator_count);
  for (int x : w) v[static_cast<std::size_t>(std::abs(x)) - 1] += x > 0 ? 1 : -1;
  return v;
}

class Presentation {
 public:
  Presentation() = default;
  Presentation(std::vector<std::string> generators, std::vector<Word> relators)
      : generators_(std::move(generators)), relators_(std::move(relators)) {
    const int n = static_cast<int>(generators_.size());
    for (auto& r : relators_) {
      for (int x : r)
        if (x == 0 || std::abs(x) > n)
          throw InputError("relator letter " + std::to_string(x) + " out of range for " + std::to_string(n) +
                           " generators");
      r = free_reduce(r);
    }
  }

  const std::vector<std::string>& generators() const { return generators_; }
  const std::vector<Word>& relators() const { return relators_; }
  std::size_t generator_count() const { return generators_.size(); }

  // Relator exponent sums as rows; its cokernel is the abelianization.
  IntegerMatrix relation_matrix() const {
    IntegerMatrix m(relators_.size(), generators_.size());
    for (std::size_t i = 0; i < relators_.size(); ++i) {
      const auto row = exponent_sums(relators_[i], generators_.size());
      for (std::size_t j = 0; j < row.size(); ++j) m(i, j) = row[j];
    }
    return m;
  }

  AbelianGroup abelianization() const { return cokernel(relation_matrix()); }

  std::string word_str(const Word& w) const {
    if (w.empty()) return "1";
    std::string s;
    for (std::size_t i = 0; i < w.size();) {
      std::size_t j = i;
      while (j < w.size() && w[j] == w[i]) ++j;
      if (!s.empty()) s += ' ';
      s += generators_[static_cast<std::size_t>(std::abs(w[i])) - 1];
      const long e = static_cast<long>(j - i) * (w[i] > 0 ? 1 : -1);
      if (e != 1) s += "^" + std::to_string(e);
      i = j;
    }
    return s;
  }

  std::string str() const {
    std::string s = "< ";
    for (std::size_t i = 0; i < generators_.size(); ++i) s += (i ? ", " : "") + generators_[i];
    s += " | ";
    for (std::size_t i = 0; i < relators_.size(); ++i) s += (i ? ", " : "") + word_str(relators_[i]);
    return s + " >";
  }

 private:
  std::vector<std::string> generators_;
  std::vector<Word> relators_;
};

// Monodromy data of a single-critical-point fibration. Words in phi_images
// and boundary_words use the free generators a_1..a_N of pi_1(F_0) (indices 1..N).
struct MonodromyData {
  std::size_t N = 0;
  std::vector<Word> phi_images;
  std::vector<Word> boundary_words;
  std::vector<std::int64_t> spherical_exponents;
  // k_{n+1}..k_{n+2m}; entry j pairs with entry j+m.
  std::vector<std::int64_t> annular_exponents;
  // Complement of the local fiber consists of disks only; no longitude formula exists then.
  bool f1_closed = false;

  std::size_t r() const { return boundary_words.size(); }
  std::size_t n() const { return spherical_exponents.size(); }
  std::size_t m() const { return annular_exponents.size() / 2; }
  std::size_t twisted_count() const { return n() + annular_exponents.size(); }
  std::ptrdiff_t generic_count() const {
    return static_cast<std::ptrdiff_t>(r()) - static_cast<std::ptrdiff_t>(twisted_count());
  }

  std::vector<std::int64_t> exponents() const {
    std::vector<std::int64_t> k = spherical_exponents;
    k.insert(k.end(), annular_exponents.begin(), annular_exponents.end());
    return k;
  }

  void validate() const {
    if (f1_closed)
      throw InputError("monodromy data with closed F1 is not supported: no longitude formula is available");
    if (phi_images.size() != N)
      throw InputError("expected " + std::to_string(N) + " phi images, got " + std::to_string(phi_images.size()));
    auto check_word = [&](const Word& w, const std::string& what) {
      for (int x : w)
        if (x == 0 || static_cast<std::size_t>(std::abs(x)) > N)
          throw InputError(what + " uses letter " + std::to_string(x) + " outside a_1..a_" + std::to_string(N));
    };
    for (std::size_t i = 0; i < N; ++i) check_word(phi_images[i], "phi(a_" + std::to_string(i + 1) + ")");
    for (std::size_t i = 0; i < r(); ++i) check_word(boundary_words[i], "b_" + std::to_string(i + 1));
    if (annular_exponents.size() % 2 != 0) throw InputError("annular exponents must come in pairs");
    if (generic_count() < 0)
      throw InputError("n + 2m = " + std::to_string(twisted_count()) + " exceeds r = " + std::to_string(r()));
    const std::size_t pairs = m();
    for (std::size_t j = 0; j < pairs; ++j)
      if (annular_exponents[j] + annular_exponents[j + pairs] != 0)
        throw InputError("annular pair " + std::to_string(j + 1) + " has k_j + k_{j+m} = " +
                         std::to_string(annular_exponents[j] + annular_exponents[j + pairs]) + " != 0");
    IntegerMatrix phi_ab(N, N);
    for (std::size_t i = 0; i < N; ++i) {
      const auto row = exponent_sums(phi_images[i], N);
      for (std::size_t j = 0; j < N; ++j) phi_ab(i, j) = row[j];
    }
    if (abs_value(determinant(phi_ab)) != 1) throw InputError("phi does not induce an automorphism of H_1(F_0)");
  }
};

// b_i = a_i for i < r and b_r = (a_1 ... a_{r-1})^{-1}: boundary of a planar
// F_0 with r holes, N = r - 1.
inline std::vector<Word> planar_boundary_words(std::size_t r) {
  std::vector<Word> b;
  Word product;
  for (std::size_t i = 1; i < r; ++i) {
    b.push_back({static_cast<int>(i)});
    product.push_back(static_cast<int>(i));
  }
  if (r > 0) b.push_back(inverse(product));
  return b;
}

/// Three boundary twists on the pair of pants: phi acts trivially on
/// pi_1(F_0) (the twists live in a boundary collar), exponents k1, k2, k3.
inline MonodromyData boundary_twist_data(std::int64_t k1, std::int64_t k2, std::int64_t k3) {
  MonodromyData d;
  d.N = 2;
  d.phi_images = {{1}, {2}};
  d.boundary_words = planar_boundary_words(3);
  d.spherical_exponents = {k1, k2, k3};
  return d;
}

/// G(phi) = < t, a_1..a_N | t a_i t^-1 phi(a_i)^-1, t b_i^{k_i} (i <= n+2m), t if n+2m < r >.
inline Presentation build_g_phi(const MonodromyData& data) {
  data.validate();
  std::vector<std::string> gens{"t"};
  for (std::size_t i = 1; i <= data.N; ++i) gens.push_back("a" + std::to_string(i));
  auto shift = [](const Word& w) {
    Word s = w;
    for (int& x : s) x += x > 0 ? 1 : -1;
    return s;
  };
  const Word t{1};
  std::vector<Word> rels;
  for (std::size_t i = 0; i < data.N; ++i)
    rels.push_back(concat({t, Word{static_cast<int>(i) + 2}, inverse(t), inverse(shift(data.phi_images[i]))}));
  const auto k = data.exponents();
  for (std::size_t i = 0; i < k.size(); ++i) rels.push_back(concat({t, power(shift(data.boundary_words[i]), k[i])}));
  if (data.generic_count() > 0) rels.push_back(t);
  return Presentation(std::move(gens), std::move(rels));
}

struct CosetEnumeration {
  bool completed = false;
  std::size_t index = 0;            // live cosets when completed
  std::size_t cosets_defined = 0;   // total cosets ever defined
};

namespace detail {

// HLT coset enumeration of the trivial subgroup, with coincidence handling.
class CosetTable {
 public:
  CosetTable(std::size_t generator_count, std::size_t max_cosets)
      : cols_(2 * generator_count), max_cosets_(max_cosets) {
    new_row();
  }

  std::size_t column(int letter) const {
    return 2 * (static_cast<std::size_t>(std::abs(letter)) - 1) + (letter < 0 ? 1 : 0);
  }
  static std::size_t inverse_column(std::size_t c) { return c ^ 1; }

  bool alive(std::size_t c) const { return parent_[c] == c; }
  std::size_t size() const { return parent_.size(); }
  bool exhausted() const { return exhausted_; }

  std::size_t live_count() const {
    std::size_t n = 0;
    for (std::size_t c = 0; c < parent_.size(); ++c) n += alive(c);
    return n;
  }

  // Returns false once the budget is exhausted.
  bool define(std::size_t c, std::size_t col) {
    if (parent_.size() >= max_cosets_) {
      exhausted_ = true;
      return false;
    }
    const std::size_t d = new_row();
    table_[c][col] = static_cast<std::int64_t>(d);
    table_[d][inverse_column(col)] = static_cast<std::int64_t>(c);
    return true;
  }

  std::int64_t entry(std::size_t c, std::size_t col) const { return table_[c][col]; }

  // Scan relator w at coset c, defining cosets to complete the scan.
  bool scan_and_fill(std::size_t c, const std::vector<std::size_t>& w) {
    if (w.empty()) return true;
    std::size_t f = c, b = c;
    std::size_t i = 0, j = w.size();  // unscanned letters are w[i..j)
    for (;;) {
      while (i < j && table_[f][w[i]] >= 0) f = static_cast<std::size_t>(table_[f][w[i++]]);
      if (i == j) {
        if (f != b) coincidence(f, b);
        return true;
      }
      while (j > i && table_[b][inverse_column(w[j - 1])] >= 0)
        b = static_cast<std::size_t>(table_[b][inverse_column(w[--j])]);
      if (j == i) {
        coincidence(f, b);
        return true;
      }
      if (j == i + 1) {
        // Deduction closes the cycle.
        table_[f][w[i]] = static_cast<std::int64_t>(b);
        table_[b][inverse_column(w[i])] = static_cast<std::int64_t>(f);
        return true;
      }
      if (!define(f, w[i])) return false;
    }
  }

  std::size_t columns() const { return cols_; }

 private:
  std::size_t new_row() {
    table_.emplace_back(cols_, -1);
    parent_.push_back(parent_.size());
    return parent_.size() - 1;
  }

  std::size_t rep(std::size_t c) {
    std::size_t r = c;
    while (parent_[r] != r) r = parent_[r];
    while (parent_[c] != r) {
      const std::size_t next = parent_[c];
      parent_[c] = r;
      c = next;
    }
    return r;
  }

  void merge(std::size_t a, std::size_t b, std::vector<std::size_t>& queue) {
    const std::size_t ra = rep(a), rb = rep(b);
    if (ra == rb) return;
    const std::size_t lo = std::min(ra, rb), hi = std::max(ra, rb);
    parent_[hi] = lo;
    queue.push_back(hi);
  }

  void coincidence(std::size_t a, std::size_t b) {
    std::vector<std::size_t> queue;
    merge(a, b, queue);
    for (std::size_t q = 0; q < queue.size(); ++q) {
      const std::size_t e = queue[q];
      for (std::size_t x = 0; x < cols_; ++x) {
        if (table_[e][x] < 0) continue;
        const auto f = static_cast<std::size_t>(table_[e][x]);
        table_[f][inverse_column(x)] = -1;
        const std::size_t e1 = rep(e), f1 = rep(f);
        if (table_[e1][x] >= 0) {
          merge(f1, static_cast<std::size_t>(table_[e1][x]), queue);
        } else if (table_[f1][inverse_column(x)] >= 0) {
          merge(e1, static_cast<std::size_t>(table_[f1][inverse_column(x)]), queue);
        } else {
          table_[e1][x] = static_cast<std::int64_t>(f1);
          table_[f1][inverse_column(x)] = static_cast<std::int64_t>(e1);
        }
      }
    }
  }

  std::size_t cols_;
  std::size_t max_cosets_;
  bool exhausted_ = false;
  std::vector<std::vector<std::int64_t>> table_;
  std::vector<std::size_t> parent_;
};

inline Word cyclically_reduce(Word w) {
  w = free_reduce(w);
  std::size_t i = 0, j = w.size();
  while (j - i >= 2 && w[i] == -w[j - 1]) {
    ++i;
    --j;
  }
  return Word(w.begin() + static_cast<std::ptrdiff_t>(i), w.begin() + static_cast<std::ptrdiff_t>(j));
}

}  // namespace detail

inline constexpr std::size_t kDefaultMaxCosets = 100'000;

/// HLT enumeration of the cosets of the trivial subgroup; relators are
/// scanned in their stored order, after cyclic reduction.
inline CosetEnumeration todd_coxeter(const Presentation& p, std::size_t max_cosets = kDefaultMaxCosets) {
  if (max_cosets < 1) throw InputError("coset budget must be at least 1");
  detail::CosetTable table(p.generator_count(), max_cosets);
  std::vector<std::vector<std::size_t>> rels;
  for (const auto& r : p.relators()) {
    std::vector<std::size_t> cols;
    for (int x : detail::cyclically_reduce(r)) cols.push_back(table.column(x));
    if (!cols.empty()) rels.push_back(std::move(cols));
  }
  CosetEnumeration out;
  for (std::size_t c = 0; c < table.size(); ++c) {
    for (const auto& r : rels) {
      if (!table.alive(c)) break;
      if (!table.scan_and_fill(c, r)) {
        out.cosets_defined = table.size();
        return out;
      }
    }
    for (std::size_t x = 0; x < table.columns() && table.alive(c); ++x)
      if (table.entry(c, x) < 0 && !table.define(c, x)) {
        out.cosets_defined = table.size();
        return out;
      }
  }
  out.completed = true;
  out.index = table.live_count();
  out.cosets_defined = table.size();
  return out;
}

enum class Triviality { trivial, nontrivial, inconclusive };

inline const char* to_string(Triviality t) {
  switch (t) {
    case Triviality::trivial: return "Trivial";
    case Triviality::nontrivial: return "Nontrivial";
    case Triviality::inconclusive: return "Inconclusive";
  }
  return "?";
}

struct TrivialityVerdict {
  Triviality kind = Triviality::inconclusive;
  AbelianGroup abelianization;
  // Present when Todd-Coxeter ran.
  std::optional<CosetEnumeration> enumeration;
  std::string witness;
};

/// Abelianization first (a nontrivial cokernel is a proof), then coset
/// enumeration with a budget. Inconclusive is never promoted to a verdict.
inline TrivialityVerdict triviality(const Presentation& p, std::size_t max_cosets = kDefaultMaxCosets) {
  if (max_cosets < 1) throw InputError("coset budget must be at least 1");
  TrivialityVerdict v;
  v.abelianization = p.abelianization();
  if (!v.abelianization.is_trivial()) {
    v.kind = Triviality::nontrivial;
    v.witness = "abelianization " + v.abelianization.str();
    return v;
  }
  v.enumeration = todd_coxeter(p, max_cosets);
  if (!v.enumeration->completed) {
    v.kind = Triviality::inconclusive;
    v.witness = "abelianization trivial; coset budget " + std::to_string(max_cosets) + " exhausted";
  } else if (v.enumeration->index == 1) {
    v.kind = Triviality::trivial;
    v.witness = "coset enumeration completed with 1 coset";
  } else {
    v.kind = Triviality::nontrivial;
    v.witness = "perfect group of order " + std::to_string(v.enumeration->index) + " (completed coset table)";
  }
  return v;
}

using Triple = std::array<std::int64_t, 3>;

inline Integer criterion_value(const Triple& k) {
  const Integer a = k[0], b = k[1], c = k[2];
  return a * b + b * c + c * a;
}

/// |k1 k2 + k2 k3 + k3 k1| = 1.
inline bool genus_zero_criterion(const Triple& k) { return abs_value(criterion_value(k)) == 1; }

enum class GenusZeroFamily { pm_ones_zero, two_minus_one_three, minus_two_one_minus_three, one_minus_one_n };

inline constexpr std::array<GenusZeroFamily, 4> kGenusZeroFamilies{
    GenusZeroFamily::pm_ones_zero, GenusZeroFamily::two_minus_one_three, GenusZeroFamily::minus_two_one_minus_three,
    GenusZeroFamily::one_minus_one_n};

inline const char* to_string(GenusZeroFamily f) {
  switch (f) {
    case GenusZeroFamily::pm_ones_zero: return "(+-1,+-1,0)";
    case GenusZeroFamily::two_minus_one_three: return "(2,-1,3)";
    case GenusZeroFamily::minus_two_one_minus_three: return "(-2,1,-3)";
    case GenusZeroFamily::one_minus_one_n: return "(1,-1,n)";
  }
  return "?";
}

inline bool in_family(const Triple& k, GenusZeroFamily f) {
  Triple s = k;
  std::sort(s.begin(), s.end());
  switch (f) {
    case GenusZeroFamily::pm_ones_zero: {
      Triple a{std::abs(k[0]), std::abs(k[1]), std::abs(k[2])};
      std::sort(a.begin(), a.end());
      return a == Triple{0, 1, 1};
    }
    case GenusZeroFamily::two_minus_one_three: return s == Triple{-1, 2, 3};
    case GenusZeroFamily::minus_two_one_minus_three: return s == Triple{-3, -2, 1};
    case GenusZeroFamily::one_minus_one_n:
      return std::find(k.begin(), k.end(), 1) != k.end() && std::find(k.begin(), k.end(), -1) != k.end();
  }
  return false;
}

/// First family, in the listed order, containing a permutation of k.
inline std::optional<GenusZeroFamily> classify_family(const Triple& k) {
  for (auto f : kGenusZeroFamilies)
    if (in_family(k, f)) return f;
  return std::nullopt;
}

struct GenusZeroEnumeration {
  std::int64_t bound = 0;
  std::vector<Triple> solutions;
  std::array<std::vector<Triple>, 4> by_family;
  std::vector<Triple> anomalies;
};

/// Every (k1,k2,k3) with |k_i| <= bound satisfying the quadratic criterion,
/// sorted into the four families; unassignable solutions are anomalies.
inline GenusZeroEnumeration enumerate_genus_zero(std::int64_t bound) {
  if (bound < 1) throw InputError("bound must be at least 1");
  GenusZeroEnumeration out;
  out.bound = bound;
  for (std::int64_t a = -bound; a <= bound; ++a)
    for (std::int64_t b = -bound; b <= bound; ++b)
      for (std::int64_t c = -bound; c <= bound; ++c) {
        const Triple k{a, b, c};
        if (!genus_zero_criterion(k)) continue;
        out.solutions.push_back(k);
        if (auto f = classify_family(k)) out.by_family[static_cast<std::size_t>(*f)].push_back(k);
        else out.anomalies.push_back(k);
      }
  return out;
}

/// Some two coordinates are opposite, so two boundary circles can be capped
/// by an annulus and the fiber expands to a torus.
inline bool torus_expandable(const Triple& k) {
  if (!genus_zero_criterion(k)) throw InputError("torus expansion needs a triple satisfying the criterion");
  return k[0] + k[1] == 0 || k[1] + k[2] == 0 || k[0] + k[2] == 0;
}

/// H_1 of a closed genus-g surface with cones over the given curve classes:
/// Z^{2g} modulo their span.
inline AbelianGroup surface_presentation_h1(std::size_t genus, const std::vector<std::vector<Integer>>& curve_classes) {
  for (const auto& c : curve_classes)
    if (c.size() != 2 * genus)
      throw InputError("curve class of length " + std::to_string(c.size()) + ", expected " + std::to_string(2 * genus));
  return cokernel(IntegerMatrix::from_rows(curve_classes, 2 * genus));
}

}  // namespace singfib::fp
