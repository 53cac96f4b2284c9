#pragma once

#include <algorithm>
#include <cstddef>
#include <future>
#include <numeric>
#include <string>
#include <vector>

#include "complexes.hpp"
#include "core.hpp"
#include "nsalg.hpp"
#include "tensor.hpp"

namespace nij {

inline constexpr std::size_t default_arity_cap = 4;

/// A_1 -> A_0 with mu_2 in its three mixed arities and mu_3 : A_0^3 -> A_1.
struct TwoTermAInf {
  std::size_t a0 = 0, a1 = 0;
  Matrix bdry;   // A_1 -> A_0
  Tensor3 m00;   // A_0 x A_0 -> A_0
  Tensor3 m01;   // A_0 x A_1 -> A_1
  Tensor3 m10;   // A_1 x A_0 -> A_1
  MultiMap mu3;  // A_0^3 -> A_1

  bool skeletal() const { return bdry.is_zero(); }
  bool strict() const { return mu3.is_zero(); }

  friend bool operator==(const TwoTermAInf& x, const TwoTermAInf& y) {
    return x.a0 == y.a0 && x.a1 == y.a1 && x.bdry == y.bdry && x.m00 == y.m00 && x.m01 == y.m01 &&
           x.m10 == y.m10 && x.mu3 == y.mu3;
  }
};

struct HomotopyNijOp {
  Matrix n0;    // A_0 -> A_0
  Matrix n1;    // A_1 -> A_1
  MultiMap n2;  // A_0^2 -> A_1

  friend bool operator==(const HomotopyNijOp& x, const HomotopyNijOp& y) {
    return x.n0 == y.n0 && x.n1 == y.n1 && x.n2 == y.n2;
  }
};

struct CrossedModule {
  NijAlgebra base;
  NijAlgebra top;
  Matrix phi;  // top -> base
  Bimodule actions;

  friend bool operator==(const CrossedModule& x, const CrossedModule& y) {
    return x.base.algebra.mu() == y.base.algebra.mu() && x.base.op == y.base.op &&
           x.top.algebra.mu() == y.top.algebra.mu() && x.top.op == y.top.op && x.phi == y.phi &&
           x.actions.left() == y.actions.left() && x.actions.right() == y.actions.right();
  }
};

/// Degree of each basis vector.
struct GradedSpace {
  std::vector<int> degrees;

  static GradedSpace from_blocks(int lo, const std::vector<std::size_t>& dims) {
    GradedSpace s;
    for (std::size_t b = 0; b < dims.size(); ++b) s.degrees.insert(s.degrees.end(), dims[b], lo + static_cast<int>(b));
    return s;
  }

  std::size_t dim() const { return degrees.size(); }
  int degree(std::size_t i) const { return degrees.at(i); }

  friend bool operator==(const GradedSpace& a, const GradedSpace& b) { return a.degrees == b.degrees; }
};

/// Truncated A-infinity algebra: ops[n-1] = mu_n, every op on the whole space.
struct GradedAInf {
  GradedSpace space;
  std::vector<MultiMap> ops;

  std::size_t dim() const { return space.dim(); }
  std::size_t n_max() const { return ops.size(); }
  const MultiMap* op(std::size_t n) const { return n >= 1 && n <= ops.size() ? &ops[n - 1] : nullptr; }

  friend bool operator==(const GradedAInf& a, const GradedAInf& b) { return a.space == b.space && a.ops == b.ops; }
};

/// Labeled operations eta_n([r]; -), r = 1..(n == 1 ? 1 : n + 1).
struct NSInfinity {
  GradedSpace space;
  std::vector<std::vector<MultiMap>> eta;

  std::size_t n_max() const { return eta.size(); }
  const MultiMap* op(std::size_t n, std::size_t r) const {
    if (n < 1 || n > eta.size() || r < 1 || r > eta[n - 1].size()) return nullptr;
    return &eta[n - 1][r - 1];
  }
};

/// nu_n on A (+) M with values in M; only components with exactly one argument in M may be nonzero.
struct AInfRepresentation {
  GradedSpace space;
  std::vector<MultiMap> ops;
};

namespace detail {

inline Vector bilinear(const Tensor3& t, const Vector& x, const Vector& y) {
  Vector out(t.dim2());
  for (std::size_t i = 0; i < t.dim0(); ++i) {
    if (is_zero(x[i])) continue;
    for (std::size_t j = 0; j < t.dim1(); ++j) {
      if (is_zero(y[j])) continue;
      Scalar s = x[i] * y[j];
      for (std::size_t k = 0; k < t.dim2(); ++k)
        if (!is_zero(t(i, j, k))) out[k] += s * t(i, j, k);
    }
  }
  return out;
}

inline void require_tensor(const Tensor3& t, std::size_t n0, std::size_t n1, std::size_t n2, const std::string& what) {
  if (t.dim0() != n0 || t.dim1() != n1 || t.dim2() != n2) throw StructureError(what + " has the wrong shape");
}

inline void require_multimap(const MultiMap& f, std::size_t arity, std::size_t d, std::size_t w, const std::string& what) {
  if (f.arity() != arity || f.source_dim() != d || f.target_dim() != w) throw StructureError(what + " has the wrong shape");
}

inline void check_two_term(const TwoTermAInf& t) {
  require_shape(t.bdry, t.a0, t.a1, "boundary map");
  require_tensor(t.m00, t.a0, t.a0, t.a0, "mu_2 on A_0 x A_0");
  require_tensor(t.m01, t.a0, t.a1, t.a1, "mu_2 on A_0 x A_1");
  require_tensor(t.m10, t.a1, t.a0, t.a1, "mu_2 on A_1 x A_0");
  require_multimap(t.mu3, 3, t.a0, t.a1, "mu_3");
}

inline void check_hn_shape(const TwoTermAInf& t, const HomotopyNijOp& h) {
  require_shape(h.n0, t.a0, t.a0, "N_0");
  require_shape(h.n1, t.a1, t.a1, "N_1");
  require_multimap(h.n2, 2, t.a0, t.a1, "N_2");
}

inline void check_cap(std::size_t k, std::size_t cap, const std::string& what) {
  if (k < 1 || k > cap) throw StructureError(what + " must lie in [1, " + std::to_string(cap) + "]");
}

/// All basis tuples of length k, ordered by degree vector, then index vector.
inline std::vector<std::vector<std::size_t>> homogeneous_tuples(const GradedSpace& s, std::size_t k) {
  const std::size_t d = s.dim();
  std::vector<std::vector<std::size_t>> out;
  const std::size_t count = ipow(d, k);
  out.reserve(count);
  for (std::size_t flat = 0; flat < count; ++flat) {
    std::vector<std::size_t> t(k);
    std::size_t rest = flat;
    for (std::size_t j = k; j-- > 0;) {
      t[j] = rest % d;
      rest /= d;
    }
    out.push_back(std::move(t));
  }
  auto degs = [&](const std::vector<std::size_t>& t) {
    std::vector<int> v;
    for (auto i : t) v.push_back(s.degree(i));
    return v;
  };
  std::stable_sort(out.begin(), out.end(), [&](const auto& a, const auto& b) { return degs(a) < degs(b); });
  return out;
}

inline std::size_t flat_index(const std::vector<std::size_t>& t, std::size_t from, std::size_t count, std::size_t d) {
  std::size_t idx = 0;
  for (std::size_t j = from; j < from + count; ++j) idx = idx * d + t[j];
  return idx;
}

inline long long degree_before(const GradedSpace& s, const std::vector<std::size_t>& t, std::size_t i) {
  long long total = 0;
  for (std::size_t j = 0; j < i; ++j) total += s.degree(t[j]);
  return total;
}

inline bool odd(long long e) { return ((e % 2) + 2) % 2 == 1; }

/// outer(t_0, ..., t_{i-1}, inner, t_{i+n}, ...), with t the basis tuple.
inline Vector with_inner(const MultiMap& outer, const std::vector<std::size_t>& t, std::size_t i, std::size_t n,
                         const Vector& inner) {
  const std::size_t d = outer.source_dim(), m = outer.arity();
  Vector out(outer.target_dim());
  std::size_t before = flat_index(t, 0, i, d);
  std::size_t after_count = m - i - 1;
  std::size_t after = flat_index(t, i + n, after_count, d);
  std::size_t tail = ipow(d, after_count);
  for (std::size_t c = 0; c < d; ++c) {
    if (is_zero(inner[c])) continue;
    std::size_t idx = (before * d + c) * tail + after;
    for (std::size_t k = 0; k < out.size(); ++k) {
      const Scalar& v = outer.at(idx, k);
      if (!is_zero(v)) out[k] += inner[c] * v;
    }
  }
  return out;
}

/// Checks that mu_n raises total degree by n - 2 on every nonzero component.
inline void check_degrees(const GradedSpace& s, const MultiMap& f, int shift, const std::string& what) {
  const std::size_t d = s.dim();
  require_multimap(f, f.arity(), d, f.target_dim(), what);
  for (std::size_t idx = 0; idx < ipow(d, f.arity()); ++idx) {
    auto t = f.source_tuple(idx);
    int deg = shift;
    for (auto i : t) deg += s.degree(i);
    for (std::size_t k = 0; k < f.target_dim(); ++k)
      if (!is_zero(f.at(idx, k)) && s.degree(k) != deg)
        throw StructureError(what + " has a component outside its degree");
  }
}

inline void check_graded(const GradedAInf& g, std::size_t cap) {
  if (g.ops.size() > cap) throw StructureError("arity cap exceeded");
  for (std::size_t n = 1; n <= g.ops.size(); ++n) {
    require_multimap(g.ops[n - 1], n, g.dim(), g.dim(), "mu_" + std::to_string(n));
    check_degrees(g.space, g.ops[n - 1], static_cast<int>(n) - 2, "mu_" + std::to_string(n));
  }
}

inline void check_degree_zero(const GradedSpace& s, const Matrix& n) {
  require_shape(n, s.dim(), s.dim(), "operator");
  for (std::size_t r = 0; r < s.dim(); ++r)
    for (std::size_t c = 0; c < s.dim(); ++c)
      if (!is_zero(n(r, c)) && s.degree(r) != s.degree(c)) throw StructureError("operator is not of degree 0");
}

/// f with y applied to the slots outside raw_mask.
inline MultiMap pre_on(const MultiMap& f, const Matrix& y, std::size_t raw_mask) {
  const std::size_t n = f.arity(), d = f.source_dim(), w = f.target_dim();
  SparseVec v = f.sparse();
  for (std::size_t t = 0; t < n; ++t)
    if (!(raw_mask & (std::size_t(1) << t))) v = cochain::pre(v, n, d, w, t, y);
  return MultiMap::from_sparse(n, d, w, v);
}

inline int popcount(std::size_t x) {
  int c = 0;
  for (; x; x &= x - 1) ++c;
  return c;
}

/// sum over raw sets S with |S| >= min_raw of (-1)^{|S|-1} N^{|S|-1+extra} mu(N on the complement of S).
inline MultiMap alternating_sum(const MultiMap& mu, const Matrix& n, int min_raw, int extra) {
  const std::size_t k = mu.arity(), d = mu.source_dim();
  MultiMap out(k, d, mu.target_dim());
  std::vector<Matrix> powers{Matrix::identity(d)};
  for (std::size_t j = 1; j <= k + 1; ++j) powers.push_back(powers.back() * n);
  for (std::size_t mask = 1; mask < (std::size_t(1) << k); ++mask) {
    int raw = popcount(mask);
    if (raw < min_raw) continue;
    MultiMap term = pre_post(pre_on(mu, n, mask), Matrix::identity(d), powers[raw - 1 + extra]);
    out = raw % 2 == 1 ? out + term : out - term;
  }
  return out;
}

template <class Body>
Report checked_by_arity(std::size_t k_max, Body body) {
  std::vector<std::future<Report>> parts;
  for (std::size_t k = 1; k <= k_max; ++k) parts.push_back(std::async(std::launch::async, body, k));
  Report r;
  for (auto& p : parts) r.merge(p.get());
  return r;
}

}  // namespace detail

/// The eight defining identities of a 2-term A-infinity algebra.
inline Report verify_two_term(const TwoTermAInf& t) {
  detail::check_two_term(t);
  const std::size_t a0 = t.a0, a1 = t.a1;
  using detail::bilinear;
  auto e0 = [a0](std::size_t i) { return unit_vector(a0, i); };
  auto e1 = [a1](std::size_t i) { return unit_vector(a1, i); };
  Report r;
  for (const char* law : {"boundary-left", "boundary-right", "boundary-balanced", "associator", "associator-aau",
                          "associator-aua", "associator-uaa", "mu3-closed"})
    r.add_law(law);
  for (std::size_t a = 0; a < a0; ++a)
    for (std::size_t u = 0; u < a1; ++u) {
      Vector du = t.bdry.column(u);
      r.check("boundary-left", {a, u}, t.bdry.apply(bilinear(t.m01, e0(a), e1(u))), bilinear(t.m00, e0(a), du));
      r.check("boundary-right", {u, a}, t.bdry.apply(bilinear(t.m10, e1(u), e0(a))), bilinear(t.m00, du, e0(a)));
    }
  for (std::size_t u = 0; u < a1; ++u)
    for (std::size_t v = 0; v < a1; ++v)
      r.check("boundary-balanced", {u, v}, bilinear(t.m01, t.bdry.column(u), e1(v)),
              bilinear(t.m10, e1(u), t.bdry.column(v)));
  for (std::size_t a = 0; a < a0; ++a)
    for (std::size_t b = 0; b < a0; ++b) {
      for (std::size_t c = 0; c < a0; ++c) {
        Vector assoc = vector_sub(bilinear(t.m00, bilinear(t.m00, e0(a), e0(b)), e0(c)),
                                  bilinear(t.m00, e0(a), bilinear(t.m00, e0(b), e0(c))));
        r.check("associator", {a, b, c}, t.bdry.apply(t.mu3.evaluate({e0(a), e0(b), e0(c)})), assoc);
      }
      for (std::size_t u = 0; u < a1; ++u) {
        Vector du = t.bdry.column(u);
        r.check("associator-aau", {a, b, u}, t.mu3.evaluate({e0(a), e0(b), du}),
                vector_sub(bilinear(t.m01, bilinear(t.m00, e0(a), e0(b)), e1(u)),
                           bilinear(t.m01, e0(a), bilinear(t.m01, e0(b), e1(u)))));
        r.check("associator-aua", {a, u, b}, t.mu3.evaluate({e0(a), du, e0(b)}),
                vector_sub(bilinear(t.m10, bilinear(t.m01, e0(a), e1(u)), e0(b)),
                           bilinear(t.m01, e0(a), bilinear(t.m10, e1(u), e0(b)))));
        r.check("associator-uaa", {u, a, b}, t.mu3.evaluate({du, e0(a), e0(b)}),
                vector_sub(bilinear(t.m10, bilinear(t.m10, e1(u), e0(a)), e0(b)),
                           bilinear(t.m10, e1(u), bilinear(t.m00, e0(a), e0(b)))));
      }
    }
  for (const auto& tup : detail::homogeneous_tuples(GradedSpace{std::vector<int>(a0, 0)}, 4)) {
    Vector a = e0(tup[0]), b = e0(tup[1]), c = e0(tup[2]), d = e0(tup[3]);
    Vector lhs = bilinear(t.m01, a, t.mu3.evaluate({b, c, d}));
    lhs = vector_sub(lhs, t.mu3.evaluate({bilinear(t.m00, a, b), c, d}));
    lhs = vector_add(lhs, t.mu3.evaluate({a, bilinear(t.m00, b, c), d}));
    lhs = vector_sub(lhs, t.mu3.evaluate({a, b, bilinear(t.m00, c, d)}));
    lhs = vector_add(lhs, bilinear(t.m10, t.mu3.evaluate({a, b, c}), d));
    r.check("mu3-closed", tup, lhs, Vector(a1));
  }
  return r;
}

/// The five identities of a homotopy Nijenhuis operator, together with those of the underlying algebra.
inline Report verify_homotopy_nij(const TwoTermAInf& t, const HomotopyNijOp& h) {
  Report r = verify_two_term(t);
  detail::check_hn_shape(t, h);
  using detail::bilinear;
  const std::size_t a0 = t.a0, a1 = t.a1;
  auto e0 = [a0](std::size_t i) { return unit_vector(a0, i); };
  auto e1 = [a1](std::size_t i) { return unit_vector(a1, i); };
  const Matrix &n0 = h.n0, &n1 = h.n1;
  auto n2 = [&](const Vector& x, const Vector& y) { return h.n2.evaluate({x, y}); };
  auto m00 = [&](const Vector& x, const Vector& y) { return bilinear(t.m00, x, y); };
  auto m01 = [&](const Vector& x, const Vector& y) { return bilinear(t.m01, x, y); };
  auto m10 = [&](const Vector& x, const Vector& y) { return bilinear(t.m10, x, y); };
  // [a, b]_N on A_0.
  auto bracket = [&](const Vector& x, const Vector& y) {
    return vector_sub(vector_add(m00(n0.apply(x), y), m00(x, n0.apply(y))), n0.apply(m00(x, y)));
  };
  for (const char* law : {"hn-chain", "hn-torsion", "hn-torsion-left", "hn-torsion-right", "hn-coherence"})
    r.add_law(law);
  Matrix lhs1 = t.bdry * n1, rhs1 = n0 * t.bdry;
  for (std::size_t u = 0; u < a1; ++u) r.check("hn-chain", {u}, lhs1.column(u), rhs1.column(u));
  for (std::size_t a = 0; a < a0; ++a) {
    for (std::size_t b = 0; b < a0; ++b)
      r.check("hn-torsion", {a, b}, vector_sub(n0.apply(bracket(e0(a), e0(b))), m00(n0.column(a), n0.column(b))),
              t.bdry.apply(n2(e0(a), e0(b))));
    for (std::size_t u = 0; u < a1; ++u) {
      Vector x = e0(a), v = e1(u), du = t.bdry.column(u);
      Vector inner = vector_sub(vector_add(m01(n0.apply(x), v), m01(x, n1.apply(v))), n1.apply(m01(x, v)));
      r.check("hn-torsion-left", {a, u}, vector_sub(n1.apply(inner), m01(n0.apply(x), n1.apply(v))), n2(x, du));
      inner = vector_sub(vector_add(m10(n1.apply(v), x), m10(v, n0.apply(x))), n1.apply(m10(v, x)));
      r.check("hn-torsion-right", {u, a}, vector_sub(n1.apply(inner), m10(n1.apply(v), n0.apply(x))), n2(du, x));
    }
  }
  Matrix n1sq = n1 * n1, n1cube = n1sq * n1;
  for (std::size_t a = 0; a < a0; ++a)
    for (std::size_t b = 0; b < a0; ++b)
      for (std::size_t c = 0; c < a0; ++c) {
        Vector x = e0(a), y = e0(b), z = e0(c);
        Vector nx = n0.apply(x), ny = n0.apply(y), nz = n0.apply(z);
        Vector lhs = vector_sub(m01(nx, n2(y, z)), m10(n2(x, y), nz));
        lhs = vector_sub(lhs, n2(bracket(x, y), z));
        lhs = vector_add(lhs, n2(x, bracket(y, z)));
        Vector hoch = vector_sub(m01(x, n2(y, z)), n2(m00(x, y), z));
        hoch = vector_add(hoch, n2(x, m00(y, z)));
        hoch = vector_sub(hoch, m10(n2(x, y), z));
        lhs = vector_sub(lhs, n1.apply(hoch));
        auto mu3 = [&](const Vector& p, const Vector& q, const Vector& s) { return t.mu3.evaluate({p, q, s}); };
        Vector rhs = mu3(nx, ny, nz);
        rhs = vector_sub(rhs, n1.apply(vector_add(vector_add(mu3(nx, ny, z), mu3(nx, y, nz)), mu3(x, ny, nz))));
        rhs = vector_add(rhs, n1sq.apply(vector_add(vector_add(mu3(nx, y, z), mu3(x, ny, z)), mu3(x, y, nz))));
        rhs = vector_sub(rhs, n1cube.apply(mu3(x, y, z)));
        r.check("hn-coherence", {a, b, c}, lhs, rhs);
      }
  return r;
}

/// Graded space A_0 (+) A_1 with mu_1 = boundary, mu_2, mu_3.
inline GradedAInf to_graded(const TwoTermAInf& t) {
  detail::check_two_term(t);
  const std::size_t a0 = t.a0, a1 = t.a1, d = a0 + a1;
  GradedAInf g{GradedSpace::from_blocks(0, {a0, a1}), {MultiMap(1, d, d), MultiMap(2, d, d), MultiMap(3, d, d)}};
  for (std::size_t u = 0; u < a1; ++u)
    for (std::size_t c = 0; c < a0; ++c) g.ops[0]({a0 + u}, c) = t.bdry(c, u);
  for (std::size_t i = 0; i < a0; ++i)
    for (std::size_t j = 0; j < a0; ++j)
      for (std::size_t k = 0; k < a0; ++k) g.ops[1]({i, j}, k) = t.m00(i, j, k);
  for (std::size_t i = 0; i < a0; ++i)
    for (std::size_t u = 0; u < a1; ++u)
      for (std::size_t k = 0; k < a1; ++k) {
        g.ops[1]({i, a0 + u}, a0 + k) = t.m01(i, u, k);
        g.ops[1]({a0 + u, i}, a0 + k) = t.m10(u, i, k);
      }
  for (std::size_t idx = 0; idx < ipow(a0, 3); ++idx) {
    auto tup = t.mu3.source_tuple(idx);
    for (std::size_t k = 0; k < a1; ++k) g.ops[2](tup, a0 + k) = t.mu3.at(idx, k);
  }
  return g;
}

/// N_0 (+) N_1 as a degree-0 map; only defined when N_2 = 0.
inline Matrix to_graded(const TwoTermAInf& t, const HomotopyNijOp& h) {
  detail::check_hn_shape(t, h);
  if (!h.n2.is_zero()) throw StructureError("a strict operator needs N_2 = 0");
  return direct_sum(h.n0, h.n1);
}

/// Every A-infinity identity of total arity k <= k_max on every homogeneous basis tuple.
inline Report verify_graded_ainf(const GradedAInf& g, std::size_t k_max = default_arity_cap,
                                 std::size_t cap = default_arity_cap) {
  detail::check_cap(k_max, cap, "k_max");
  detail::check_graded(g, cap);
  const std::size_t d = g.dim();
  Report r = detail::checked_by_arity(k_max, [&](std::size_t k) {
    Report part;
    for (const auto& t : detail::homogeneous_tuples(g.space, k)) {
      Vector total(d);
      for (std::size_t n = 1; n <= k; ++n) {
        const std::size_t m = k + 1 - n;
        const MultiMap *outer = g.op(m), *inner = g.op(n);
        if (!outer || !inner) continue;
        for (std::size_t i = 1; i <= m; ++i) {
          Vector in = inner->on_basis(detail::flat_index(t, i - 1, n, d));
          Vector term = detail::with_inner(*outer, t, i - 1, n, in);
          bool neg = detail::odd(static_cast<long long>(i * (n + 1)) +
                                 static_cast<long long>(n) * detail::degree_before(g.space, t, i - 1));
          total = neg ? vector_sub(total, term) : vector_add(total, term);
        }
      }
      part.check("a-infinity", t, total, Vector(d));
    }
    return part;
  });
  r.laws = {"a-infinity"};
  return r;
}

/// mu_n(N a_1, ..., N a_n) = N(sum over nonempty raw sets S of (-1)^{|S|-1} N^{|S|-1} mu_n(...)).
inline Report verify_strict_hn(const GradedAInf& g, const Matrix& n, std::size_t cap = default_arity_cap) {
  detail::check_graded(g, cap);
  detail::check_degree_zero(g.space, n);
  const std::size_t d = g.dim();
  Report r;
  r.add_law("strict-nijenhuis");
  for (std::size_t k = 1; k <= g.n_max(); ++k) {
    const MultiMap& mu = g.ops[k - 1];
    MultiMap lhs = detail::pre_on(mu, n, 0);
    MultiMap rhs = detail::alternating_sum(mu, n, 1, 1);
    for (std::size_t idx = 0; idx < ipow(d, k); ++idx) {
      Vector l = lhs.on_basis(idx), rr = rhs.on_basis(idx);
      if (l != rr) r.check("strict-nijenhuis", lhs.source_tuple(idx), l, rr);
    }
  }
  return r;
}

namespace detail {

inline void require_strict_hn(const GradedAInf& g, const Matrix& n) {
  Report r = verify_strict_hn(g, n);
  if (!r.ok()) throw StructureError("operator is not a strict homotopy Nijenhuis operator: " + r.summary());
}

}  // namespace detail

/// eta_n([r]) = mu_n(N a_1, .., a_r, .., N a_n) for r <= n, and the alternating N-power sum over
/// at least two raw slots for r = n + 1.
inline NSInfinity induced_nsinf(const GradedAInf& g, const Matrix& n) {
  detail::require_strict_hn(g, n);
  NSInfinity out{g.space, {}};
  for (std::size_t k = 1; k <= g.n_max(); ++k) {
    const MultiMap& mu = g.ops[k - 1];
    std::vector<MultiMap> comps;
    for (std::size_t r = 0; r < k; ++r) comps.push_back(detail::pre_on(mu, n, std::size_t(1) << r));
    if (k > 1) comps.push_back(detail::alternating_sum(mu, n, 2, 0));
    out.eta.push_back(std::move(comps));
  }
  return out;
}

/// mu_{n,N}: the sum of eta_n over all labels.
inline GradedAInf deformed_ainf(const GradedAInf& g, const Matrix& n) {
  detail::require_strict_hn(g, n);
  GradedAInf out{g.space, {}};
  for (const MultiMap& mu : g.ops) out.ops.push_back(detail::alternating_sum(mu, n, 1, 0));
  return out;
}

/// eta-bar_n = eta_n([1] + ... + [n+1]).
inline GradedAInf component_sums(const NSInfinity& ns) {
  GradedAInf out{ns.space, {}};
  for (const auto& comps : ns.eta) {
    MultiMap total = comps.front();
    for (std::size_t r = 1; r < comps.size(); ++r) total = total + comps[r];
    out.ops.push_back(total);
  }
  return out;
}

namespace detail {

inline void check_nsinf(const NSInfinity& ns, std::size_t cap) {
  if (ns.eta.size() > cap) throw StructureError("arity cap exceeded");
  for (std::size_t n = 1; n <= ns.eta.size(); ++n) {
    if (ns.eta[n - 1].size() != ns_labels(n)) throw StructureError("eta_" + std::to_string(n) + " has the wrong labels");
    for (const auto& f : ns.eta[n - 1]) {
      require_multimap(f, n, ns.space.dim(), ns.space.dim(), "eta_" + std::to_string(n));
      check_degrees(ns.space, f, static_cast<int>(n) - 2, "eta_" + std::to_string(n));
    }
  }
}

}  // namespace detail

/// (eta_m o_i eta_n)([r]; a_1, ..., a_k) on a basis tuple, with the Koszul sign of moving eta_n
/// past a_1, ..., a_{i-1}.
inline Vector nsinf_compose(const NSInfinity& ns, const std::vector<MultiMap>& totals, std::size_t m, std::size_t n,
                            std::size_t i, std::size_t r, const std::vector<std::size_t>& t) {
  const std::size_t d = ns.space.dim(), k = m + n - 1;
  const std::size_t sub = detail::flat_index(t, i - 1, n, d);
  Vector zero(d);
  auto outer = [&](std::size_t label, const Vector& inner) {
    const MultiMap* f = ns.op(m, label);
    return f ? detail::with_inner(*f, t, i - 1, n, inner) : zero;
  };
  auto inner_at = [&](std::size_t label) {
    const MultiMap* f = ns.op(n, label);
    return f ? f->on_basis(sub) : zero;
  };
  const Vector whole = totals[n - 1].on_basis(sub);
  Vector v;
  if (r <= i - 1)
    v = outer(r, whole);
  else if (r <= i + n - 1)
    v = outer(i, inner_at(r - i + 1));
  else if (r <= k)
    v = outer(r - n + 1, whole);
  else
    v = vector_add(outer(i, inner_at(n + 1)), outer(m + 1, whole));
  if (detail::odd(static_cast<long long>(n) * detail::degree_before(ns.space, t, i - 1))) v = vector_scale(-1, v);
  return v;
}

/// sum over m + n = k + 1 and i of (-1)^{i(n+1)} (eta_m o_i eta_n)([r]) = 0, for every k <= k_max
/// and every label r = 1..k+1.
inline Report verify_nsinf(const NSInfinity& ns, std::size_t k_max = default_arity_cap,
                           std::size_t cap = default_arity_cap) {
  detail::check_cap(k_max, cap, "k_max");
  detail::check_nsinf(ns, cap);
  const std::size_t d = ns.space.dim();
  const std::vector<MultiMap> totals = component_sums(ns).ops;
  Report r = detail::checked_by_arity(k_max, [&](std::size_t k) {
    Report part;
    for (const auto& t : detail::homogeneous_tuples(ns.space, k))
      for (std::size_t label = 1; label <= k + 1; ++label) {
        Vector total(d);
        for (std::size_t n = 1; n <= k; ++n) {
          const std::size_t m = k + 1 - n;
          if (m > ns.n_max() || n > ns.n_max()) continue;
          for (std::size_t i = 1; i <= m; ++i) {
            Vector term = nsinf_compose(ns, totals, m, n, i, label, t);
            total = detail::odd(static_cast<long long>(i * (n + 1))) ? vector_sub(total, term) : vector_add(total, term);
          }
        }
        std::vector<std::size_t> where{label};
        where.insert(where.end(), t.begin(), t.end());
        part.check("ns-infinity", where, total, Vector(d));
      }
    return part;
  });
  r.laws = {"ns-infinity"};
  return r;
}

/// nu_n = mu_n with one argument read in the copy M = A.
inline AInfRepresentation adjoint_representation(const GradedAInf& g) {
  const std::size_t d = g.dim();
  AInfRepresentation rep{g.space, {}};
  for (std::size_t n = 1; n <= g.n_max(); ++n) {
    MultiMap nu(n, 2 * d, d);
    const MultiMap& mu = g.ops[n - 1];
    for (std::size_t idx = 0; idx < ipow(d, n); ++idx) {
      auto t = mu.source_tuple(idx);
      for (std::size_t slot = 0; slot < n; ++slot) {
        auto s = t;
        s[slot] += d;
        for (std::size_t k = 0; k < d; ++k) nu(s, k) = mu.at(idx, k);
      }
    }
    rep.ops.push_back(std::move(nu));
  }
  return rep;
}

/// mu_n on A (+) M: mu_n on A-tuples, nu_n on tuples with exactly one M entry, verified.
inline GradedAInf ainf_semidirect(const GradedAInf& g, const AInfRepresentation& rep,
                                  std::size_t k_max = default_arity_cap) {
  detail::check_graded(g, default_arity_cap);
  if (rep.ops.size() > default_arity_cap) throw StructureError("arity cap exceeded");
  const std::size_t da = g.dim(), dm = rep.space.dim(), d = da + dm;
  GradedSpace space = g.space;
  space.degrees.insert(space.degrees.end(), rep.space.degrees.begin(), rep.space.degrees.end());
  GradedAInf out{space, {}};
  for (std::size_t n = 1; n <= std::max(g.n_max(), rep.ops.size()); ++n) {
    MultiMap op(n, d, d);
    if (const MultiMap* mu = g.op(n))
      for (std::size_t idx = 0; idx < ipow(da, n); ++idx) {
        auto t = mu->source_tuple(idx);
        for (std::size_t k = 0; k < da; ++k) op(t, k) = mu->at(idx, k);
      }
    if (n <= rep.ops.size()) {
      const MultiMap& nu = rep.ops[n - 1];
      detail::require_multimap(nu, n, d, dm, "nu_" + std::to_string(n));
      for (std::size_t idx = 0; idx < ipow(d, n); ++idx) {
        auto t = nu.source_tuple(idx);
        std::size_t in_m = std::count_if(t.begin(), t.end(), [da](std::size_t i) { return i >= da; });
        for (std::size_t k = 0; k < dm; ++k) {
          if (is_zero(nu.at(idx, k))) continue;
          if (in_m != 1) throw StructureError("nu_" + std::to_string(n) + " must take exactly one argument in M");
          op(t, da + k) = nu.at(idx, k);
        }
      }
    }
    out.ops.push_back(std::move(op));
  }
  detail::check_graded(out, default_arity_cap);
  Report base = verify_graded_ainf(g, k_max);
  if (!base.ok()) throw StructureError("base is not an A-infinity algebra: " + base.summary());
  Report r = verify_graded_ainf(out, k_max);
  if (!r.ok()) throw StructureError("invalid representation: " + r.summary());
  return out;
}

/// mu_n(R u_1, ..., R u_n) = sum_r R nu_n(R u_1, .., u_r, .., R u_n) on M-tuples, read through the
/// semidirect product.
inline Report verify_relative_rb(const GradedAInf& semi, std::size_t da, const Matrix& r_op) {
  const std::size_t d = semi.dim(), dm = d - da;
  require_shape(r_op, da, dm, "relative Rota-Baxter map");
  Matrix lift(d, d);
  for (std::size_t i = 0; i < da; ++i)
    for (std::size_t u = 0; u < dm; ++u) lift(i, da + u) = r_op(i, u);
  Report rep;
  rep.add_law("relative-rota-baxter");
  for (std::size_t n = 1; n <= semi.n_max(); ++n) {
    const MultiMap& mu = semi.ops[n - 1];
    MultiMap lhs = detail::pre_on(mu, lift, 0);
    MultiMap rhs(n, d, d);
    for (std::size_t slot = 0; slot < n; ++slot)
      rhs = rhs + pre_post(detail::pre_on(mu, lift, std::size_t(1) << slot), Matrix::identity(d), lift);
    auto in_base = [da](const Vector& v) { return Vector(v.begin(), v.begin() + da); };
    for (std::size_t idx = 0; idx < ipow(dm, n); ++idx) {
      std::vector<std::size_t> u(n), t(n);
      std::size_t rest = idx;
      for (std::size_t j = n; j-- > 0; rest /= dm) {
        u[j] = rest % dm;
        t[j] = da + u[j];
      }
      rep.check("relative-rota-baxter", u, in_base(lhs.on_basis(lhs.source_index(t))),
                in_base(rhs.on_basis(rhs.source_index(t))));
    }
  }
  return rep;
}

struct RbLift {
  Matrix lift;
  bool is_strict_hn = false;
  bool is_relative_rb = false;
  Report strict_hn;
  Report relative_rb;
};

/// R~(a, u) = (R u, 0) on the semidirect product, checked as a strict homotopy Nijenhuis operator and,
/// separately, R against the relative Rota-Baxter identities.
inline RbLift rb_lift(const GradedAInf& g, const AInfRepresentation& rep, const Matrix& r_op) {
  GradedAInf semi = ainf_semidirect(g, rep);
  const std::size_t da = g.dim(), d = semi.dim();
  require_shape(r_op, da, d - da, "relative Rota-Baxter map");
  RbLift out;
  out.lift = Matrix(d, d);
  for (std::size_t i = 0; i < da; ++i)
    for (std::size_t u = 0; u < d - da; ++u) out.lift(i, da + u) = r_op(i, u);
  out.strict_hn = verify_strict_hn(semi, out.lift);
  out.relative_rb = verify_relative_rb(semi, da, r_op);
  out.is_strict_hn = out.strict_hn.ok();
  out.is_relative_rb = out.relative_rb.ok();
  return out;
}

/// Nijenhuis algebra, Nijenhuis bimodule and degree-3 cocycle (mu_3, N_2) of a skeletal structure.
struct SkeletalData {
  NijAlgebra na;
  NijBimodule nb;
  MultiMap chi;     // A^3 -> M
  MultiMap f_part;  // A^2 -> M

  Vector to_vector() const {
    Vector v = chi.entries();
    v.insert(v.end(), f_part.entries().begin(), f_part.entries().end());
    return v;
  }
};

inline SkeletalData to_cocycle(const TwoTermAInf& t, const HomotopyNijOp& h) {
  detail::check_two_term(t);
  if (!t.skeletal()) throw StructureError("structure is not skeletal");
  require_ok(verify_homotopy_nij(t, h), "skeletal homotopy Nijenhuis algebra");
  SkeletalData s{{Algebra(t.m00), h.n0}, {Bimodule(t.m01, t.m10), h.n1}, t.mu3, h.n2};
  if (!all_zero(cone_reduced_matrix(s.na, s.nb, 3).apply(s.to_vector())))
    throw InternalError("(mu_3, N_2) is not a cocycle");
  return s;
}

inline std::pair<TwoTermAInf, HomotopyNijOp> from_cocycle(const SkeletalData& s) {
  require_nij_pair(s.na, s.nb);
  const std::size_t d = s.na.dim(), m = s.nb.dim();
  detail::require_multimap(s.chi, 3, d, m, "chi");
  detail::require_multimap(s.f_part, 2, d, m, "F");
  if (!all_zero(cone_reduced_matrix(s.na, s.nb, 3).apply(s.to_vector())))
    throw StructureError("(chi, F) is not a degree-3 cocycle");
  TwoTermAInf t{d, m, Matrix(d, m), s.na.algebra.mu(), s.nb.bimodule.left(), s.nb.bimodule.right(), s.chi};
  HomotopyNijOp h{s.na.op, s.nb.op, s.f_part};
  require_constructed(verify_homotopy_nij(t, h), "skeletal structure");
  return {t, h};
}

/// Product, phi-equivariance and Peiffer-type identities, plus the Nijenhuis data underneath.
inline Report verify_crossed(const CrossedModule& c) {
  const std::size_t d = c.base.dim(), d1 = c.top.dim();
  require_shape(c.phi, d, d1, "phi");
  detail::check_bimodule_over(c.base.algebra, c.actions);
  if (c.actions.dim() != d1) throw StructureError("actions must be on the top algebra");
  Report r = verify_nij_algebra(c.base);
  r.merge(verify_nij_algebra(c.top));
  r.merge(verify_nij_morphism(c.top, c.base, c.phi));
  r.merge(verify_nij_bimodule(c.base, {c.actions, c.top.op}));
  for (const char* law : {"crossed-left", "crossed-middle", "crossed-right", "phi-left", "phi-right",
                          "peiffer-left", "peiffer-right"})
    r.add_law(law);
  const Algebra& a = c.base.algebra;
  const Algebra& top = c.top.algebra;
  for (std::size_t x = 0; x < d; ++x) {
    Vector ex = unit_vector(d, x);
    for (std::size_t u = 0; u < d1; ++u) {
      Vector eu = unit_vector(d1, u);
      r.check("phi-left", {x, u}, c.phi.apply(c.actions.act_left(ex, eu)), a.multiply(ex, c.phi.column(u)));
      r.check("phi-right", {u, x}, c.phi.apply(c.actions.act_right(eu, ex)), a.multiply(c.phi.column(u), ex));
      for (std::size_t v = 0; v < d1; ++v) {
        Vector ev = unit_vector(d1, v);
        r.check("crossed-left", {x, u, v}, c.actions.act_left(ex, top.multiply(eu, ev)),
                top.multiply(c.actions.act_left(ex, eu), ev));
        r.check("crossed-middle", {u, x, v}, top.multiply(c.actions.act_right(eu, ex), ev),
                top.multiply(eu, c.actions.act_left(ex, ev)));
        r.check("crossed-right", {u, v, x}, c.actions.act_right(top.multiply(eu, ev), ex),
                top.multiply(eu, c.actions.act_right(ev, ex)));
      }
    }
  }
  for (std::size_t u = 0; u < d1; ++u)
    for (std::size_t v = 0; v < d1; ++v) {
      Vector eu = unit_vector(d1, u), ev = unit_vector(d1, v);
      Vector prod = top.multiply(eu, ev);
      r.check("peiffer-left", {u, v}, c.actions.act_left(c.phi.column(u), ev), prod);
      r.check("peiffer-right", {u, v}, prod, c.actions.act_right(eu, c.phi.column(v)));
    }
  return r;
}

/// u ._1 v = mu_2(boundary u, v), phi = boundary, actions = mu_2.
inline CrossedModule to_crossed(const TwoTermAInf& t, const HomotopyNijOp& h) {
  detail::check_two_term(t);
  detail::check_hn_shape(t, h);
  if (!t.strict() || !h.n2.is_zero()) throw StructureError("structure is not strict");
  require_ok(verify_homotopy_nij(t, h), "strict homotopy Nijenhuis algebra");
  const std::size_t a1 = t.a1;
  Tensor3 prod(a1, a1, a1);
  for (std::size_t u = 0; u < a1; ++u)
    for (std::size_t v = 0; v < a1; ++v) {
      Vector w = detail::bilinear(t.m01, t.bdry.column(u), unit_vector(a1, v));
      for (std::size_t k = 0; k < a1; ++k) prod(u, v, k) = w[k];
    }
  CrossedModule c{{Algebra(t.m00), h.n0}, {Algebra(prod), h.n1}, t.bdry, Bimodule(t.m01, t.m10)};
  require_constructed(verify_crossed(c), "crossed module");
  return c;
}

inline std::pair<TwoTermAInf, HomotopyNijOp> from_crossed(const CrossedModule& c) {
  require_ok(verify_crossed(c), "crossed module");
  const std::size_t d = c.base.dim(), d1 = c.top.dim();
  TwoTermAInf t{d, d1, c.phi, c.base.algebra.mu(), c.actions.left(), c.actions.right(), MultiMap(3, d, d1)};
  HomotopyNijOp h{c.base.op, c.top.op, MultiMap(2, d, d1)};
  require_constructed(verify_homotopy_nij(t, h), "strict structure");
  return {t, h};
}

/// Graded A-infinity algebra concentrated in degree 0 with mu_2 the product.
inline GradedAInf from_algebra(const Algebra& a) {
  const std::size_t d = a.dim();
  return {GradedSpace{std::vector<int>(d, 0)}, {MultiMap(1, d, d), MultiMap::from_tensor3(a.mu())}};
}

}  // namespace nij
