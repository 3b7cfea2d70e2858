#pragma once

// Index of the plane field ker Df of a singular fibration: characteristic
// vectors and their squares, the Hirzebruch-Hopf realizability formulas,
// Chern squares, Euler-characteristic bookkeeping and the obstructions to
// singular fibring that follow from them.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "singfib/errors.hpp"
#include "singfib/exactlin.hpp"

namespace singfib::hh {

enum class Parity { even, odd };

class IntersectionForm {
 public:
  IntersectionForm() = default;  // rank 0

  explicit IntersectionForm(IntegerMatrix m) : matrix_(std::move(m)) {
    if (!matrix_.is_symmetric()) throw InputError("intersection form must be a symmetric square matrix");
    if (abs_value(determinant(matrix_)) != 1) throw InputError("intersection form must be unimodular (|det| = 1)");
    compute_inertia();
  }

  const IntegerMatrix& matrix() const { return matrix_; }
  std::size_t rank() const { return matrix_.rows(); }
  std::size_t positive_index() const { return positive_; }
  std::size_t negative_index() const { return rank() - positive_; }
  std::int64_t signature() const {
    return static_cast<std::int64_t>(positive_) - static_cast<std::int64_t>(negative_index());
  }
  Parity parity() const {
    for (std::size_t i = 0; i < rank(); ++i)
      if (matrix_(i, i) % 2 != 0) return Parity::odd;
    return Parity::even;
  }
  bool positive_definite() const { return rank() > 0 && positive_ == rank(); }
  bool negative_definite() const { return rank() > 0 && positive_ == 0; }
  bool definite() const { return positive_definite() || negative_definite(); }

  Integer evaluate(std::span<const std::int64_t> x, std::span<const std::int64_t> y) const {
    Integer s = 0;
    for (std::size_t i = 0; i < rank(); ++i) {
      if (x[i] == 0) continue;
      Integer row = 0;
      for (std::size_t j = 0; j < rank(); ++j)
        if (y[j] != 0) row += matrix_(i, j) * y[j];
      s += row * x[i];
    }
    return s;
  }
  Integer square(std::span<const std::int64_t> x) const { return evaluate(x, x); }

 private:
  // Congruence diagonalization over Q; all pivots are nonzero since the form
  // is nondegenerate.
  void compute_inertia() {
    const std::size_t n = rank();
    std::vector<std::vector<Rational>> a(n, std::vector<Rational>(n));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) a[i][j] = Rational(matrix_(i, j));
    auto swap_sym = [&](std::size_t i, std::size_t j) {
      std::swap(a[i], a[j]);
      for (auto& row : a) std::swap(row[i], row[j]);
    };
    for (std::size_t k = 0; k < n; ++k) {
      std::size_t p = k;
      while (p < n && a[p][p] == 0) ++p;
      if (p == n) {
        // Zero diagonal: x_i -> x_i + x_j makes a[i][i] = 2 a[i][j] != 0.
        std::size_t pi = n, pj = n;
        for (std::size_t i = k; i < n && pi == n; ++i)
          for (std::size_t j = k; j < n; ++j)
            if (i != j && a[i][j] != 0) {
              pi = i;
              pj = j;
              break;
            }
        if (pi == n) throw std::logic_error("degenerate block in a unimodular form");
        for (std::size_t c = 0; c < n; ++c) a[pi][c] += a[pj][c];
        for (std::size_t r = 0; r < n; ++r) a[r][pi] += a[r][pj];
        p = pi;
      }
      swap_sym(p, k);
      const Rational pivot = a[k][k];
      if (pivot > 0) ++positive_;
      for (std::size_t i = k + 1; i < n; ++i) {
        if (a[i][k] == 0) continue;
        const Rational f = a[i][k] / pivot;
        for (std::size_t j = k; j < n; ++j) a[i][j] -= f * a[k][j];
      }
      for (std::size_t i = k + 1; i < n; ++i) a[k][i] = 0;
      for (std::size_t i = k + 1; i < n; ++i)
        for (std::size_t j = k + 1; j < n; ++j) a[j][i] = a[i][j];
    }
  }

  IntegerMatrix matrix_;
  std::size_t positive_ = 0;
};

/// Orthogonal sum of forms (block diagonal).
inline IntersectionForm direct_sum(const std::vector<IntegerMatrix>& blocks) {
  std::size_t n = 0;
  for (const auto& b : blocks) n += b.rows();
  IntegerMatrix m(n, n);
  std::size_t off = 0;
  for (const auto& b : blocks) {
    for (std::size_t i = 0; i < b.rows(); ++i)
      for (std::size_t j = 0; j < b.cols(); ++j) m(off + i, off + j) = b(i, j);
    off += b.rows();
  }
  return IntersectionForm(std::move(m));
}

inline IntegerMatrix hyperbolic_plane() { return IntegerMatrix{{0, 1}, {1, 0}}; }

// Cartan matrix of E8 (positive definite, even, unimodular).
inline IntegerMatrix e8_lattice() {
  IntegerMatrix m(8, 8);
  for (std::size_t i = 0; i < 8; ++i) m(i, i) = 2;
  const std::pair<std::size_t, std::size_t> edges[] = {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 6}, {4, 7}};
  for (auto [i, j] : edges) m(i, j) = m(j, i) = -1;
  return m;
}

inline IntegerMatrix negated(IntegerMatrix m) {
  for (std::size_t i = 0; i < m.rows(); ++i) m.negate_row(i);
  return m;
}

/// A vector w0 with S(w0, x) = S(x, x) mod 2 for every x; characteristic
/// vectors are exactly w0 + 2H. Coordinates are 0 or 1.
inline std::vector<std::int64_t> characteristic_coset(const IntersectionForm& form) {
  const std::size_t n = form.rank();
  // Augmented system (S mod 2) w = diag(S) mod 2; S mod 2 is invertible.
  std::vector<std::vector<int>> a(n, std::vector<int>(n + 1));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) a[i][j] = static_cast<int>(mod_floor(form.matrix()(i, j), 2));
    a[i][n] = static_cast<int>(mod_floor(form.matrix()(i, i), 2));
  }
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t p = col;
    while (p < n && a[p][col] == 0) ++p;
    if (p == n) throw std::logic_error("form is singular mod 2");
    std::swap(a[p], a[col]);
    for (std::size_t i = 0; i < n; ++i)
      if (i != col && a[i][col])
        for (std::size_t j = col; j <= n; ++j) a[i][j] ^= a[col][j];
  }
  std::vector<std::int64_t> w(n);
  for (std::size_t i = 0; i < n; ++i) w[i] = a[i][n];
  return w;
}

struct OmegaWindow {
  std::vector<Integer> values;  // sorted
  Integer window = 0;
  // True when every characteristic square in [-window, window] is provably
  // included (definite forms, rank 0). Otherwise the result is the set of
  // squares of characteristic vectors with all |w_i| <= box_radius.
  bool exhaustive = true;
  std::int64_t box_radius = 0;
  std::uint64_t vectors_examined = 0;

  std::string label() const {
    return exhaustive ? std::string("exhaustive") : "window, box=" + std::to_string(box_radius);
  }
};

namespace detail {

// Connected components of the graph with an edge i-j whenever S(i,j) != 0.
inline std::vector<std::vector<std::size_t>> orthogonal_blocks(const IntegerMatrix& m) {
  const std::size_t n = m.rows();
  std::vector<int> comp(n, -1);
  std::vector<std::vector<std::size_t>> blocks;
  for (std::size_t s = 0; s < n; ++s) {
    if (comp[s] >= 0) continue;
    blocks.emplace_back();
    std::vector<std::size_t> stack{s};
    comp[s] = static_cast<int>(blocks.size() - 1);
    while (!stack.empty()) {
      const std::size_t i = stack.back();
      stack.pop_back();
      blocks.back().push_back(i);
      for (std::size_t j = 0; j < n; ++j)
        if (comp[j] < 0 && m(i, j) != 0) {
          comp[j] = comp[s];
          stack.push_back(j);
        }
    }
    std::sort(blocks.back().begin(), blocks.back().end());
  }
  return blocks;
}

inline IntegerMatrix submatrix(const IntegerMatrix& m, const std::vector<std::size_t>& idx) {
  IntegerMatrix s(idx.size(), idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i)
    for (std::size_t j = 0; j < idx.size(); ++j) s(i, j) = m(idx[i], idx[j]);
  return s;
}

inline std::int64_t ceil_half(std::int64_t x) { return x >= 0 ? (x + 1) / 2 : -((-x) / 2); }
inline std::int64_t floor_half(std::int64_t x) { return x >= 0 ? x / 2 : -((-x + 1) / 2); }

// Characteristic squares of one block with |w_i| <= radius[i].
inline std::set<Integer> block_squares(const IntersectionForm& block, const std::vector<std::int64_t>& radius,
                                       std::uint64_t budget, std::uint64_t& examined) {
  const auto w0 = characteristic_coset(block);
  const std::size_t n = block.rank();
  BoxRange::Point lo(n), hi(n);
  for (std::size_t i = 0; i < n; ++i) {
    // w_i = w0_i + 2 h_i within [-radius, radius]
    lo[i] = ceil_half(-radius[i] - w0[i]);
    hi[i] = floor_half(radius[i] - w0[i]);
  }
  BoxRange box(lo, hi, budget - std::min(budget, examined));
  std::set<Integer> out;
  std::vector<std::int64_t> w(n);
  for (const auto& h : box) {
    for (std::size_t i = 0; i < n; ++i) w[i] = w0[i] + 2 * h[i];
    out.insert(block.square(w));
  }
  examined += box.size();
  return out;
}

}  // namespace detail

/// Squares S(w,w) of characteristic vectors with |S(w,w)| <= window. Definite
/// forms are enumerated over a box that provably covers the window; for
/// indefinite forms the box |w_i| <= box_radius is a heuristic and labeled so.
inline OmegaWindow omega_window(const IntersectionForm& form, const Integer& window, std::int64_t box_radius = 8,
                                std::uint64_t budget = kDefaultEnumerationBudget) {
  if (window < 0) throw InputError("window must be nonnegative");
  if (box_radius < 0) throw InputError("box radius must be nonnegative");
  OmegaWindow out;
  out.window = window;
  if (form.rank() == 0) {
    out.values = {0};
    return out;
  }
  const bool definite = form.definite();
  out.exhaustive = definite;
  out.box_radius = definite ? 0 : box_radius;

  std::set<Integer> sums{0};
  for (const auto& idx : detail::orthogonal_blocks(form.matrix())) {
    const IntersectionForm block(detail::submatrix(form.matrix(), idx));
    std::vector<std::int64_t> radius(idx.size(), box_radius);
    if (definite) {
      // |w_i|^2 <= |S(w,w)| * |S^-1(i,i)| (Cauchy-Schwarz for the form).
      const auto inv = unimodular_inverse(block.matrix());
      for (std::size_t i = 0; i < idx.size(); ++i) {
        const Integer r = boost::multiprecision::sqrt(Integer(window * abs_value((*inv)(i, i))));
        radius[i] = static_cast<std::int64_t>(r);
        out.box_radius = std::max(out.box_radius, radius[i]);
      }
    }
    const auto values = detail::block_squares(block, radius, budget, out.vectors_examined);
    std::set<Integer> next;
    for (const auto& s : sums)
      for (const auto& v : values) {
        Integer t = s + v;
        // Definite: every block contributes with the same sign, so partial sums
        // outside the window never come back.
        if (definite && abs_value(t) > window) continue;
        next.insert(std::move(t));
      }
    sums = std::move(next);
  }
  for (const auto& s : sums)
    if (abs_value(s) <= window) out.values.push_back(s);
  return out;
}

struct ManifoldInvariants {
  std::int64_t b1 = 0;
  std::int64_t b2 = 0;
  std::int64_t e = 2;
  std::int64_t sigma = 0;
  std::optional<IntersectionForm> form;

  // Closed oriented 4-manifold: b0 = b4 = 1, b3 = b1.
  static ManifoldInvariants from_betti(std::int64_t b1, std::int64_t b2, std::int64_t sigma) {
    ManifoldInvariants m{b1, b2, 2 - 2 * b1 + b2, sigma, std::nullopt};
    m.validate();
    return m;
  }

  static ManifoldInvariants from_form(std::int64_t b1, IntersectionForm form) {
    const auto b2 = static_cast<std::int64_t>(form.rank());
    ManifoldInvariants m{b1, b2, 2 - 2 * b1 + b2, form.signature(), std::move(form)};
    m.validate();
    return m;
  }

  void validate() const {
    if (b1 < 0 || b2 < 0) throw InputError("Betti numbers must be nonnegative");
    if (e != 2 - 2 * b1 + b2)
      throw InputError("Euler characteristic " + std::to_string(e) + " != 2 - 2 b1 + b2 = " +
                       std::to_string(2 - 2 * b1 + b2));
    if (std::abs(sigma) > b2) throw InputError("|signature| exceeds b2");
    if ((b2 - sigma) % 2 != 0) throw InputError("b2 and signature must have the same parity");
    if (form) {
      if (static_cast<std::int64_t>(form->rank()) != b2) throw InputError("form rank differs from b2");
      if (form->signature() != sigma) throw InputError("form signature differs from sigma");
    }
  }
};

// Index of ker Df at the critical points, stored as (lambda, rho); the
// plane-field index in the usual convention is (-lambda, rho).
struct IndexPair {
  Integer lambda = 0;
  Integer rho = 0;

  Integer mu() const { return lambda + rho; }
  // Only pairs with lambda + rho >= 0 can be totals of Milnor numbers.
  bool feasible() const { return mu() >= 0; }
  std::pair<Integer, Integer> plane_field_index() const { return {-lambda, rho}; }

  friend bool operator==(const IndexPair&, const IndexPair&) = default;
  friend bool operator<(const IndexPair& x, const IndexPair& y) {
    return x.lambda != y.lambda ? x.lambda < y.lambda : x.rho < y.rho;
  }
};

struct IndexReport {
  OmegaWindow omega;
  std::vector<Integer> lambdas;  // one per alpha, in omega order
  std::vector<Integer> rhos;     // one per beta, in omega order
  std::vector<IndexPair> pairs;  // all (lambda, rho), lexicographic
};

namespace detail {

inline Integer exact_quarter(const Integer& x, const char* what) {
  if (x % 4 != 0) throw std::logic_error(std::string(what) + " is not divisible by 4: " + x.str());
  return x / 4;
}

}  // namespace detail

/// All (lambda, rho) with 4 lambda = 2e + 3 sigma - alpha and
/// 4 rho = 2e - 3 sigma + beta for alpha, beta in the Omega window.
inline IndexReport realizable_indices(const ManifoldInvariants& inv, const Integer& window, std::int64_t box_radius = 8,
                                      std::uint64_t budget = kDefaultEnumerationBudget) {
  inv.validate();
  if (inv.b2 > 0 && !inv.form) throw InputError("b2 > 0 requires an intersection form");
  IndexReport rep;
  rep.omega = omega_window(inv.form ? *inv.form : IntersectionForm(), window, box_radius, budget);
  const Integer e = inv.e, s = inv.sigma;
  for (const auto& a : rep.omega.values) rep.lambdas.push_back(detail::exact_quarter(2 * e + 3 * s - a, "2e + 3 sigma - alpha"));
  for (const auto& b : rep.omega.values) rep.rhos.push_back(detail::exact_quarter(2 * e - 3 * s + b, "2e - 3 sigma + beta"));
  for (const auto& l : rep.lambdas)
    for (const auto& r : rep.rhos) rep.pairs.push_back({l, r});
  std::sort(rep.pairs.begin(), rep.pairs.end());
  return rep;
}

struct ChernSquares {
  Integer c1_sq;        // c1(J)^2 = 2e + 3 sigma - 4 lambda
  Integer c1_prime_sq;  // c1(J')^2 = 4 rho - 2e + 3 sigma
};

inline ChernSquares chern_squares(const IndexPair& pair, const ManifoldInvariants& inv) {
  const Integer e = inv.e, s = inv.sigma;
  return {2 * e + 3 * s - 4 * pair.lambda, 4 * pair.rho - 2 * e + 3 * s};
}

struct EulerRelation {
  Integer mu;
  bool feasible = false;
  // mu = 0: all local links are unknots, no topological critical points.
  bool no_critical_points = false;
};

/// mu = e(M) - chi(N) chi(F), from e(M) = e(N) e(F) + mu(f).
inline EulerRelation euler_relation(std::int64_t e_M, std::int64_t chi_N, std::int64_t chi_F) {
  EulerRelation r;
  r.mu = Integer(e_M) - Integer(chi_N) * chi_F;
  r.feasible = r.mu >= 0;
  r.no_critical_points = r.mu == 0;
  return r;
}

/// Euler characteristic of the spine: chi(F) + mu.
inline std::int64_t spine_euler(std::int64_t chi_F, std::int64_t mu) {
  if (mu < 0) throw InputError("total Milnor number must be nonnegative");
  return chi_F + mu;
}

enum class VerdictKind {
  no_singular_fibration,
  base_or_fiber_torus,
  topological_torus_bundle,
  positive_definite_bounds,
  no_obstruction_found
};

inline const char* to_string(VerdictKind k) {
  switch (k) {
    case VerdictKind::no_singular_fibration: return "NoSingularFibration";
    case VerdictKind::base_or_fiber_torus: return "BaseOrFiberTorus";
    case VerdictKind::topological_torus_bundle: return "TopologicalTorusBundle";
    case VerdictKind::positive_definite_bounds: return "PositiveDefiniteBounds";
    case VerdictKind::no_obstruction_found: return "NoObstructionFound";
  }
  return "?";
}

struct Verdict {
  VerdictKind kind;
  std::string statement;
  std::optional<std::int64_t> mu_witness;
  // base_or_fiber_torus: whether the declared chi(N) chi(F) satisfies e(F)e(N) = 0.
  std::optional<bool> satisfied;
  std::optional<std::int64_t> lambda_max;
  std::optional<std::int64_t> rho_min;
};

/// Every applicable obstruction to a singular fibration M -> N with fiber F.
/// base_chi / fiber_chi are chi(N) and chi(F) when declared.
inline std::vector<Verdict> obstruct(const ManifoldInvariants& inv, std::optional<std::int64_t> base_chi = std::nullopt,
                                     std::optional<std::int64_t> fiber_chi = std::nullopt) {
  inv.validate();
  std::vector<Verdict> out;
  if (inv.b2 == 0 && inv.b1 >= 2) {
    const std::int64_t mu = 2 - 2 * inv.b1;
    out.push_back({VerdictKind::no_singular_fibration,
                   "b2 = 0 forces mu(f) = e(M) = 2 - 2 b1 = " + std::to_string(mu) + " < 0",
                   mu, std::nullopt, std::nullopt, std::nullopt});
  }
  if (inv.b2 == 0 && inv.b1 <= 1 && (base_chi || fiber_chi)) {
    Verdict v{VerdictKind::base_or_fiber_torus, "mu(f) = e(M) forces e(F) e(N) = 0: base or generic fiber is a torus",
              std::nullopt, std::nullopt, std::nullopt, std::nullopt};
    if (base_chi && fiber_chi) v.satisfied = (*base_chi) * (*fiber_chi) == 0;
    else if (base_chi && *base_chi != 0) v.statement += "; base is not a torus, so the generic fiber is a torus";
    else if (fiber_chi && *fiber_chi != 0) v.statement += "; fiber is not a torus, so the base is a torus";
    out.push_back(std::move(v));
  }
  if (inv.b1 == 1 && inv.b2 == 0 && base_chi && *base_chi == 2) {
    out.push_back({VerdictKind::topological_torus_bundle,
                   "mu(f) = 0: all local links are unknots, M is a topological torus bundle over S^2", 0,
                   std::nullopt, std::nullopt, std::nullopt});
  }
  if (inv.form && inv.form->positive_definite()) {
    const std::int64_t lmax = 1 - inv.b1 + inv.b2, rmin = 1 - inv.b1;
    out.push_back({VerdictKind::positive_definite_bounds,
                   "positive definite form: lambda(f) <= " + std::to_string(lmax) + " and rho(f) >= " +
                       std::to_string(rmin),
                   std::nullopt, std::nullopt, lmax, rmin});
  }
  if (out.empty())
    out.push_back({VerdictKind::no_obstruction_found, "no obstruction applies", std::nullopt, std::nullopt,
                   std::nullopt, std::nullopt});
  return out;
}

struct BuiltinManifold {
  std::string tag;
  std::string description;
  ManifoldInvariants invariants;
};

/// "s4", "cp2", "cp2bar", "s2xs2", "k3" (2(-E8) + 3H), "m_s1xs3:<m>" (connected sum of m copies of S1 x S3).
inline BuiltinManifold builtin_manifold(const std::string& tag) {
  if (tag == "s4") return {tag, "S^4", ManifoldInvariants::from_form(0, IntersectionForm())};
  if (tag == "cp2") return {tag, "CP^2", ManifoldInvariants::from_form(0, IntersectionForm(IntegerMatrix{{1}}))};
  if (tag == "cp2bar")
    return {tag, "CP^2 with reversed orientation", ManifoldInvariants::from_form(0, IntersectionForm(IntegerMatrix{{-1}}))};
  if (tag == "s2xs2") return {tag, "S^2 x S^2", ManifoldInvariants::from_form(0, IntersectionForm(hyperbolic_plane()))};
  if (tag == "k3") {
    const auto e8 = negated(e8_lattice());
    return {tag, "K3 surface", ManifoldInvariants::from_form(
                                   0, direct_sum({e8, e8, hyperbolic_plane(), hyperbolic_plane(), hyperbolic_plane()}))};
  }
  const std::string prefix = "m_s1xs3:";
  if (tag.rfind(prefix, 0) == 0) {
    std::size_t used = 0;
    long long m = -1;
    try {
      m = std::stoll(tag.substr(prefix.size()), &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != tag.size() - prefix.size() || m < 0) throw InputError("bad builtin tag '" + tag + "'");
    return {tag, "connected sum of " + std::to_string(m) + " copies of S^1 x S^3",
            ManifoldInvariants::from_form(m, IntersectionForm())};
  }
  throw InputError("unknown builtin '" + tag + "' (expected s4, cp2, cp2bar, s2xs2, k3, m_s1xs3:<m>)");
}

}  // namespace singfib::hh
