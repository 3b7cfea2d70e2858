#pragma once

// Mapping classes of the torus as elements of SL(2,Z): Dehn twist words,
// orders, conjugacy canonical forms, two-twist relations and the
// abelianization SL(2,Z) -> Z/12.
//
// Twist convention: T_c(x) = x + (x ^ c) c with x ^ c = x1*c2 - x2*c1, acting
// on column vectors. The opposite handedness is the inverse twist.

#include <array>
#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <stdexcept>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "singfib/errors.hpp"
#include "singfib/exactlin.hpp"

namespace singfib::sl2 {

class Sl2Element {
 public:
  Sl2Element() : a_(1), b_(0), c_(0), d_(1) {}
  Sl2Element(Integer a, Integer b, Integer c, Integer d)
      : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), d_(std::move(d)) {
    if (a_ * d_ - b_ * c_ != 1) throw InputError("matrix " + str() + " does not have determinant 1");
  }

  static Sl2Element identity() { return {}; }
  // R = [[1,1],[0,1]], L = [[1,0],[1,1]]; T and S name the usual generators.
  static Sl2Element R() { return {1, 1, 0, 1}; }
  static Sl2Element L() { return {1, 0, 1, 1}; }
  static Sl2Element S() { return {0, -1, 1, 0}; }

  const Integer& a() const { return a_; }
  const Integer& b() const { return b_; }
  const Integer& c() const { return c_; }
  const Integer& d() const { return d_; }

  Integer trace() const { return a_ + d_; }
  bool is_identity() const { return a_ == 1 && b_ == 0 && c_ == 0 && d_ == 1; }
  bool is_minus_identity() const { return a_ == -1 && b_ == 0 && c_ == 0 && d_ == -1; }

  Sl2Element inverse() const { return Sl2Element(d_, -b_, -c_, a_, Unchecked{}); }
  Sl2Element operator-() const { return Sl2Element(-a_, -b_, -c_, -d_, Unchecked{}); }

  friend Sl2Element operator*(const Sl2Element& x, const Sl2Element& y) {
    return Sl2Element(x.a_ * y.a_ + x.b_ * y.c_, x.a_ * y.b_ + x.b_ * y.d_, x.c_ * y.a_ + x.d_ * y.c_,
                      x.c_ * y.b_ + x.d_ * y.d_, Unchecked{});
  }
  friend bool operator==(const Sl2Element&, const Sl2Element&) = default;

  Sl2Element pow(std::int64_t n) const {
    Sl2Element base = n < 0 ? inverse() : *this;
    std::uint64_t e = n < 0 ? static_cast<std::uint64_t>(-(n + 1)) + 1 : static_cast<std::uint64_t>(n);
    Sl2Element acc;
    while (e) {
      if (e & 1) acc = acc * base;
      base = base * base;
      e >>= 1;
    }
    return acc;
  }

  // Row-major (a, b, c, d).
  std::array<Integer, 4> entries() const { return {a_, b_, c_, d_}; }

  std::string str() const {
    return "[[" + a_.str() + "," + b_.str() + "],[" + c_.str() + "," + d_.str() + "]]";
  }

 private:
  struct Unchecked {};
  Sl2Element(Integer a, Integer b, Integer c, Integer d, Unchecked)
      : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), d_(std::move(d)) {}

  Integer a_, b_, c_, d_;
};

// Primitive homology class of an essential simple closed curve, unoriented:
// stored with first nonzero coordinate positive.
class TorusCurve {
 public:
  TorusCurve(std::int64_t p, std::int64_t q) {
    if (std::gcd(p, q) != 1) throw InputError("curve (" + std::to_string(p) + "," + std::to_string(q) + ") is not primitive");
    if (p < 0 || (p == 0 && q < 0)) {
      p = -p;
      q = -q;
    }
    p_ = p;
    q_ = q;
  }
  std::int64_t p() const { return p_; }
  std::int64_t q() const { return q_; }
  friend bool operator==(const TorusCurve&, const TorusCurve&) = default;
  std::string str() const { return "(" + std::to_string(p_) + "," + std::to_string(q_) + ")"; }

 private:
  std::int64_t p_ = 1, q_ = 0;
};

/// Algebraic intersection number x ^ y = x1*y2 - x2*y1 (sign depends on the
/// representatives chosen for unoriented curves).
inline std::int64_t wedge(const TorusCurve& x, const TorusCurve& y) { return x.p() * y.q() - x.q() * y.p(); }

struct TwistLetter {
  TorusCurve curve;
  std::int64_t exponent;
  friend bool operator==(const TwistLetter&, const TwistLetter&) = default;
};

class TwistWord {
 public:
  TwistWord() = default;
  explicit TwistWord(std::vector<TwistLetter> letters) : letters_(std::move(letters)) { normalize(); }

  const std::vector<TwistLetter>& letters() const { return letters_; }
  bool empty() const { return letters_.empty(); }

 private:
  // Drop zero exponents and merge adjacent letters on the same curve.
  void normalize() {
    std::vector<TwistLetter> out;
    for (const auto& l : letters_) {
      if (l.exponent == 0) continue;
      if (!out.empty() && out.back().curve == l.curve) {
        out.back().exponent += l.exponent;
        if (out.back().exponent == 0) out.pop_back();
      } else {
        out.push_back(l);
      }
    }
    letters_ = std::move(out);
  }

  std::vector<TwistLetter> letters_;
};

/// Matrix of T_c^k: [[1 + k p q, -k p^2], [k q^2, 1 - k p q]].
inline Sl2Element twist_matrix(const TorusCurve& c, std::int64_t k) {
  const Integer p = c.p(), q = c.q(), kk = k;
  return Sl2Element(1 + kk * p * q, -kk * p * p, kk * q * q, 1 - kk * p * q);
}

/// Product of the letters' twist matrices, left to right.
inline Sl2Element evaluate_word(const TwistWord& w) {
  Sl2Element acc;
  for (const auto& l : w.letters()) acc = acc * twist_matrix(l.curve, l.exponent);
  return acc;
}

/// Multiplicative order; nullopt means infinite order.
inline std::optional<int> element_order(const Sl2Element& g) {
  if (g.is_identity()) return 1;
  if (g.is_minus_identity()) return 2;
  const Integer tr = g.trace();
  if (tr == 0) return 4;
  if (tr == 1) return 6;
  if (tr == -1) return 3;
  return std::nullopt;
}

enum class ConjugacyType { central, elliptic, parabolic, hyperbolic };

inline const char* to_string(ConjugacyType t) {
  switch (t) {
    case ConjugacyType::central: return "central";
    case ConjugacyType::elliptic: return "elliptic";
    case ConjugacyType::parabolic: return "parabolic";
    case ConjugacyType::hyperbolic: return "hyperbolic";
  }
  return "?";
}

// Canonical tag of a conjugacy class in SL(2,Z). Two elements are conjugate
// iff their tags compare equal.
//  central:    sign = +-1 (the element is sign * identity)
//  elliptic:   order and rotation = sign of the lower-left entry; representative
//              is the fixed matrix for that pair
//  parabolic:  sign and n != 0 with g conjugate to sign * [[1,n],[0,1]]
//  hyperbolic: sign and the lexicographically least rotation of the R/L word
//              of a nonnegative conjugate of sign * g
struct ConjugacyTag {
  ConjugacyType type = ConjugacyType::central;
  int sign = 1;
  int order = 0;
  int rotation = 0;
  Integer parabolic_shift = 0;
  std::string word;
  Sl2Element representative;

  friend bool operator==(const ConjugacyTag& x, const ConjugacyTag& y) {
    return x.type == y.type && x.sign == y.sign && x.order == y.order && x.rotation == y.rotation &&
           x.parabolic_shift == y.parabolic_shift && x.word == y.word;
  }

  std::string str() const {
    const std::string s = sign > 0 ? "+" : "-";
    switch (type) {
      case ConjugacyType::central: return "central " + s + "I";
      case ConjugacyType::elliptic:
        return "elliptic order " + std::to_string(order) + " rotation " + (rotation > 0 ? "+" : "-") +
               " rep " + representative.str();
      case ConjugacyType::parabolic: return "parabolic eps=" + s + "1 n=" + parabolic_shift.str();
      case ConjugacyType::hyperbolic: return "hyperbolic eps=" + s + "1 word " + word;
    }
    return "?";
  }
};

namespace detail {

// A fixed point (p + s*sqrt(D)) / q of a hyperbolic Moebius map, D > 0 not a square.
struct QuadraticPoint {
  Integer p, s, q, disc;

  int sign() const {
    // sign(p + s*sqrt(D)) * sign(q)
    int num;
    const int sp = p > 0 ? 1 : (p < 0 ? -1 : 0);
    const int ss = s > 0 ? 1 : (s < 0 ? -1 : 0);
    if (ss == 0) num = sp;
    else if (sp == 0 || sp == ss) num = ss;
    else num = (p * p > s * s * disc) ? sp : ss;
    return q > 0 ? num : -num;
  }

  Integer floor() const {
    Integer pp = p, ss = s, qq = q;
    if (qq < 0) {
      pp = -pp;
      ss = -ss;
      qq = -qq;
    }
    const Integer root = boost::multiprecision::sqrt(Integer(ss * ss * disc));  // floor of |s|*sqrt(D)
    const Integer k = ss >= 0 ? root : Integer(-root - 1);
    return floor_div(pp + k, qq);
  }
};

inline std::pair<QuadraticPoint, QuadraticPoint> fixed_points(const Sl2Element& g) {
  const Integer disc = g.trace() * g.trace() - 4;
  return {{g.a() - g.d(), 1, 2 * g.c(), disc}, {g.a() - g.d(), -1, 2 * g.c(), disc}};
}

inline bool nonnegative(const Sl2Element& g) { return g.a() >= 0 && g.b() >= 0 && g.c() >= 0 && g.d() >= 0; }

inline Sl2Element conjugate(const Sl2Element& h, const Sl2Element& g) { return h * g * h.inverse(); }

// Conjugate a hyperbolic element of positive trace to one with nonnegative
// entries: find h sending one fixed point into (0, inf) and the other into
// (-inf, 0), then fix the orientation with S if needed.
inline Sl2Element nonnegative_conjugate(Sl2Element g) {
  for (int guard = 0; guard < 100000; ++guard) {
    auto [x, y] = fixed_points(g);
    const int sx = x.sign(), sy = y.sign();
    if (sx * sy < 0) {
      if (nonnegative(g)) return g;
      g = conjugate(Sl2Element::S(), g);
      if (nonnegative(g)) return g;
      throw std::logic_error("separated fixed points without a nonnegative conjugate: " + g.str());
    }
    // Both fixed points on the same side of 0 (neither is rational).
    const bool x_larger = (x.q > 0);  // x - y = 2 sqrt(D) / q
    const QuadraticPoint& hi = x_larger ? x : y;
    const QuadraticPoint& lo = x_larger ? y : x;
    const Integer n = hi.floor();
    QuadraticPoint lo_shift = lo;
    lo_shift.p -= n * lo.q;
    if (lo_shift.sign() < 0) {
      // n lies strictly between the fixed points: translate it to 0.
      g = conjugate(Sl2Element(1, -n, 0, 1), g);
    } else {
      // Both in [n, n+1): translate, then invert t -> -1/t to spread them apart.
      g = conjugate(Sl2Element::S() * Sl2Element(1, -n, 0, 1), g);
    }
  }
  throw std::logic_error("nonnegative conjugate search did not terminate");
}

// R/L factorization of a nonnegative SL(2,Z) matrix.
inline std::string rl_word(Sl2Element g) {
  std::string w;
  while (!g.is_identity()) {
    if (g.a() >= g.c() && g.b() >= g.d()) {
      w += 'R';
      g = Sl2Element::R().inverse() * g;
    } else if (g.c() >= g.a() && g.d() >= g.b()) {
      w += 'L';
      g = Sl2Element::L().inverse() * g;
    } else {
      throw std::logic_error("matrix is not a positive word: " + g.str());
    }
  }
  return w;
}

inline std::string least_rotation(const std::string& w) {
  std::string best = w;
  for (std::size_t i = 1; i < w.size(); ++i) {
    std::string r = w.substr(i) + w.substr(0, i);
    if (r < best) best = std::move(r);
  }
  return best;
}

inline Sl2Element elliptic_representative(int order, int rotation) {
  switch (order) {
    case 4: return rotation > 0 ? Sl2Element(0, -1, 1, 0) : Sl2Element(0, 1, -1, 0);
    case 6: return rotation > 0 ? Sl2Element(1, -1, 1, 0) : Sl2Element(0, 1, -1, 1);
    case 3: return rotation > 0 ? Sl2Element(-1, -1, 1, 0) : Sl2Element(0, 1, -1, -1);
  }
  throw std::logic_error("not an elliptic order");
}

}  // namespace detail

inline ConjugacyTag conjugacy_class(const Sl2Element& g) {
  ConjugacyTag tag;
  const Integer tr = g.trace();
  if (g.is_identity() || g.is_minus_identity()) {
    tag.type = ConjugacyType::central;
    tag.sign = g.is_identity() ? 1 : -1;
    tag.representative = g;
    return tag;
  }
  if (abs_value(tr) < 2) {
    // c != 0 here, and its sign is the rotation direction at the fixed point.
    tag.type = ConjugacyType::elliptic;
    tag.order = *element_order(g);
    tag.rotation = g.c() > 0 ? 1 : -1;
    tag.representative = detail::elliptic_representative(tag.order, tag.rotation);
    return tag;
  }
  tag.sign = tr > 0 ? 1 : -1;
  const Sl2Element p = tag.sign > 0 ? g : -g;
  if (abs_value(tr) == 2) {
    // p - I = n * [[-xy, x^2], [-y^2, xy]] for a primitive (x, y).
    tag.type = ConjugacyType::parabolic;
    const Integer b = p.b(), c = p.c();
    const Integer n = gcd(gcd(b, c), p.a() - p.d());
    tag.parabolic_shift = (b > 0 || (b == 0 && c < 0)) ? n : Integer(-n);
    tag.representative = Sl2Element(tag.sign, tag.sign * tag.parabolic_shift, 0, tag.sign);
    return tag;
  }
  tag.type = ConjugacyType::hyperbolic;
  const Sl2Element positive = detail::nonnegative_conjugate(p);
  tag.word = detail::least_rotation(detail::rl_word(positive));
  Sl2Element rep;
  for (char ch : tag.word) rep = rep * (ch == 'R' ? Sl2Element::R() : Sl2Element::L());
  tag.representative = tag.sign > 0 ? rep : -rep;
  return tag;
}

enum class IshidaClass { isotopic, rank2_abelian_unreachable, free_rank2, full_sl2 };

inline const char* to_string(IshidaClass c) {
  switch (c) {
    case IshidaClass::isotopic: return "isotopic";
    case IshidaClass::rank2_abelian_unreachable: return "rank2_abelian_unreachable";
    case IshidaClass::free_rank2: return "free_rank2";
    case IshidaClass::full_sl2: return "full_sl2";
  }
  return "?";
}

/// Isomorphism type of the subgroup generated by the twists along c1 and c2,
/// read off the geometric intersection number |c1 ^ c2|. Disjoint
/// non-isotopic essential curves do not exist on the torus.
inline IshidaClass ishida_class(const TorusCurve& c1, const TorusCurve& c2) {
  const std::int64_t delta = std::abs(wedge(c1, c2));
  if (delta == 0) return IshidaClass::isotopic;
  if (delta == 1) return IshidaClass::full_sl2;
  return IshidaClass::free_rank2;
}

struct TwoTwistResult {
  bool trivial = false;
  std::int64_t intersection = 0;
  IshidaClass subgroup = IshidaClass::isotopic;
  std::string certificate;
  Sl2Element product;
};

/// Decides T_{c1}^{k1} T_{c2}^{k2} = 1 and explains the outcome.
inline TwoTwistResult two_twist_trivial(const TorusCurve& c1, std::int64_t k1, const TorusCurve& c2, std::int64_t k2) {
  TwoTwistResult r;
  r.product = twist_matrix(c1, k1) * twist_matrix(c2, k2);
  r.intersection = std::abs(wedge(c1, c2));
  r.subgroup = ishida_class(c1, c2);
  r.trivial = r.product.is_identity();
  if (r.trivial) {
    if (k1 == 0 && k2 == 0) {
      r.certificate = "both exponents are zero";
    } else {
      if (!(c1 == c2) || k1 + k2 != 0) throw std::logic_error("two-twist relation without c1 = c2, k1 + k2 = 0");
      r.certificate = "c1 = +-c2 and k1 + k2 = 0";
    }
    return r;
  }
  if (r.intersection == 0)
    r.certificate = "same curve, product is T^" + std::to_string(k1 + k2) + " != 1";
  else if (r.intersection == 1)
    r.certificate = "intersection 1: the twists act as opposite parabolics, product nontrivial unless k1 = k2 = 0";
  else
    r.certificate = "intersection " + std::to_string(r.intersection) + ": twists generate a free group, no relation";
  if (k1 == 0 || k2 == 0) r.certificate = "a single nonzero twist power is never trivial";
  return r;
}

/// Image of g in SL(2,Z)^ab = Z/12, where T = [[1,1],[0,1]] maps to 1 and
/// S = [[0,-1],[1,0]] maps to 9 (= -3).
inline int abelianization_image(const Sl2Element& g) {
  Integer image = 0;
  Integer a = g.a(), b = g.b(), c = g.c(), d = g.d();
  // g = T^n S g'' with |c| decreasing at each step.
  while (c != 0) {
    const Integer n = floor_div(a, c);
    a -= n * c;
    b -= n * d;
    image += n;
    // S^{-1} [[a,b],[c,d]] = [[c,d],[-a,-b]]
    Integer na = c, nb = d, nc = -a, nd = -b;
    a = std::move(na);
    b = std::move(nb);
    c = std::move(nc);
    d = std::move(nd);
    image += 9;
  }
  if (a == 1) image += b;  // T^b
  else image += 6 - b;     // -T^{-b}, and -I = S^2 maps to 18 = 6
  return static_cast<int>(mod_floor(image, 12));
}

}  // namespace singfib::sl2
