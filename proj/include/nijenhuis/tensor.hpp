#pragma once

#include <algorithm>
#include <cstddef>
#include <utility>
#include <vector>

#include "core.hpp"
#include "sign.hpp"

namespace nij {

inline std::size_t ipow(std::size_t base, std::size_t exp) {
  std::size_t r = 1;
  for (std::size_t i = 0; i < exp; ++i) r *= base;
  return r;
}

/// Sparse cochain vector: (flat index, value) pairs; flat index = I * w + k.
using SparseVec = std::vector<std::pair<std::size_t, Scalar>>;

/// Sorts by index, sums duplicates and drops zeros.
inline void compress(SparseVec& v) {
  std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::size_t out = 0;
  for (std::size_t i = 0; i < v.size();) {
    std::size_t idx = v[i].first;
    Scalar s = std::move(v[i].second);
    std::size_t j = i + 1;
    for (; j < v.size() && v[j].first == idx; ++j) s += v[j].second;
    if (!is_zero(s)) v[out++] = {idx, std::move(s)};
    i = j;
  }
  v.resize(out);
}

/// acc += s * x (uncompressed).
inline void axpy(SparseVec& acc, const Scalar& s, const SparseVec& x) {
  if (is_zero(s)) return;
  acc.reserve(acc.size() + x.size());
  for (const auto& [i, v] : x) acc.emplace_back(i, s * v);
}

inline SparseVec sparse_sum(std::vector<std::pair<Scalar, SparseVec>> terms) {
  SparseVec out;
  for (const auto& [s, x] : terms) axpy(out, s, x);
  compress(out);
  return out;
}

/// Multilinear map A^{(x) n} -> W as a dense coefficient tensor.
/// Entry (I, k) is the k-th coordinate of f(e_{i_1}, ..., e_{i_n}), with the flat source index
/// I = i_1 d^{n-1} + ... + i_n; the cochain vector stores it at position I * w + k.
class MultiMap {
 public:
  MultiMap() = default;
  MultiMap(std::size_t arity, std::size_t source_dim, std::size_t target_dim)
      : arity_(arity), d_(source_dim), w_(target_dim),
        entries_(ipow(source_dim, arity) * target_dim) {}

  static MultiMap from_vector(std::size_t arity, std::size_t d, std::size_t w, Vector v) {
    MultiMap f(arity, d, w);
    if (v.size() != f.entries_.size()) throw StructureError("cochain vector has wrong length");
    f.entries_ = std::move(v);
    return f;
  }

  static MultiMap from_sparse(std::size_t arity, std::size_t d, std::size_t w, const SparseVec& v) {
    MultiMap f(arity, d, w);
    for (const auto& [i, x] : v) f.entries_.at(i) += x;
    return f;
  }

  /// Arity-1 map from a matrix (column j = image of e_j).
  static MultiMap from_matrix(const Matrix& m) {
    MultiMap f(1, m.cols(), m.rows());
    for (std::size_t i = 0; i < m.cols(); ++i)
      for (std::size_t k = 0; k < m.rows(); ++k) f.at(i, k) = m(k, i);
    return f;
  }

  static MultiMap identity(std::size_t d) { return from_matrix(Matrix::identity(d)); }

  /// Arity-2 map from t(i, j, k).
  static MultiMap from_tensor3(const Tensor3& t) {
    if (t.dim0() != t.dim1()) throw StructureError("bilinear map needs equal source factors");
    MultiMap f(2, t.dim0(), t.dim2());
    for (std::size_t i = 0; i < t.dim0(); ++i)
      for (std::size_t j = 0; j < t.dim1(); ++j)
        for (std::size_t k = 0; k < t.dim2(); ++k) f.at(i * t.dim0() + j, k) = t(i, j, k);
    return f;
  }

  static MultiMap product(const Algebra& a) { return from_tensor3(a.mu()); }

  /// Arity-0 map, i.e. an element of W.
  static MultiMap element(std::size_t source_dim, const Vector& u) {
    MultiMap f(0, source_dim, u.size());
    f.entries_ = u;
    return f;
  }

  std::size_t arity() const { return arity_; }
  std::size_t source_dim() const { return d_; }
  std::size_t target_dim() const { return w_; }
  std::size_t source_size() const { return ipow(d_, arity_); }
  std::size_t size() const { return entries_.size(); }

  Scalar& at(std::size_t source_index, std::size_t k) { return entries_[source_index * w_ + k]; }
  const Scalar& at(std::size_t source_index, std::size_t k) const {
    return entries_[source_index * w_ + k];
  }

  std::size_t source_index(const std::vector<std::size_t>& tuple) const {
    if (tuple.size() != arity_) throw StructureError("basis tuple has wrong length");
    std::size_t I = 0;
    for (auto i : tuple) I = I * d_ + i;
    return I;
  }

  std::vector<std::size_t> source_tuple(std::size_t index) const {
    std::vector<std::size_t> t(arity_);
    for (std::size_t s = arity_; s-- > 0;) {
      t[s] = index % d_;
      index /= d_;
    }
    return t;
  }

  Scalar& operator()(const std::vector<std::size_t>& tuple, std::size_t k) {
    return at(source_index(tuple), k);
  }
  const Scalar& operator()(const std::vector<std::size_t>& tuple, std::size_t k) const {
    return at(source_index(tuple), k);
  }

  /// f(e_{i_1}, ..., e_{i_n}) as a vector of W.
  Vector on_basis(std::size_t source_index) const {
    return Vector(entries_.begin() + source_index * w_, entries_.begin() + (source_index + 1) * w_);
  }

  /// Multilinear evaluation on arbitrary vectors.
  Vector evaluate(const std::vector<Vector>& args) const {
    if (args.size() != arity_) throw StructureError("wrong number of arguments");
    for (const auto& a : args)
      if (a.size() != d_) throw StructureError("argument has wrong dimension");
    Vector out(w_);
    Scalar weight = 1;
    evaluate_rec(args, 0, 0, weight, out);
    return out;
  }

  const Vector& entries() const { return entries_; }

  SparseVec sparse() const {
    SparseVec v;
    for (std::size_t i = 0; i < entries_.size(); ++i)
      if (!nij::is_zero(entries_[i])) v.emplace_back(i, entries_[i]);
    return v;
  }

  bool is_zero() const { return all_zero(entries_); }

  Matrix to_matrix() const {
    if (arity_ != 1) throw StructureError("to_matrix needs arity 1");
    Matrix m(w_, d_);
    for (std::size_t i = 0; i < d_; ++i)
      for (std::size_t k = 0; k < w_; ++k) m(k, i) = at(i, k);
    return m;
  }

  Tensor3 to_tensor3() const {
    if (arity_ != 2) throw StructureError("to_tensor3 needs arity 2");
    Tensor3 t(d_, d_, w_);
    for (std::size_t i = 0; i < d_; ++i)
      for (std::size_t j = 0; j < d_; ++j)
        for (std::size_t k = 0; k < w_; ++k) t(i, j, k) = at(i * d_ + j, k);
    return t;
  }

  friend MultiMap operator+(MultiMap a, const MultiMap& b) {
    a.check_same(b);
    for (std::size_t i = 0; i < a.entries_.size(); ++i) a.entries_[i] += b.entries_[i];
    return a;
  }
  friend MultiMap operator-(MultiMap a, const MultiMap& b) {
    a.check_same(b);
    for (std::size_t i = 0; i < a.entries_.size(); ++i) a.entries_[i] -= b.entries_[i];
    return a;
  }
  friend MultiMap operator*(const Scalar& s, MultiMap a) {
    for (auto& x : a.entries_) x *= s;
    return a;
  }
  friend MultiMap operator-(MultiMap a) { return Scalar(-1) * std::move(a); }
  friend bool operator==(const MultiMap& a, const MultiMap& b) {
    return a.arity_ == b.arity_ && a.d_ == b.d_ && a.w_ == b.w_ && a.entries_ == b.entries_;
  }

 private:
  void check_same(const MultiMap& b) const {
    if (arity_ != b.arity_ || d_ != b.d_ || w_ != b.w_)
      throw StructureError("multilinear maps have different shapes");
  }

  void evaluate_rec(const std::vector<Vector>& args, std::size_t slot, std::size_t index,
                    const Scalar& weight, Vector& out) const {
    if (slot == arity_) {
      for (std::size_t k = 0; k < w_; ++k)
        if (!nij::is_zero(at(index, k))) out[k] += weight * at(index, k);
      return;
    }
    for (std::size_t i = 0; i < d_; ++i) {
      if (nij::is_zero(args[slot][i])) continue;
      evaluate_rec(args, slot + 1, index * d_ + i, weight * args[slot][i], out);
    }
  }

  std::size_t arity_ = 0;
  std::size_t d_ = 0;
  std::size_t w_ = 0;
  Vector entries_;
};

/// Elementary operations on sparse cochain vectors of shape (arity n, source dim d, target dim w).
namespace cochain {

/// Nonzeros of a map A^{gn} -> A grouped by target coordinate: by_target[l] = {(J, coeff)}.
using Grouped = std::vector<std::vector<std::pair<std::size_t, Scalar>>>;

inline Grouped group_by_target(const SparseVec& g, std::size_t target_dim) {
  Grouped out(target_dim);
  for (const auto& [idx, v] : g) out[idx % target_dim].emplace_back(idx / target_dim, v);
  return out;
}

inline Grouped group_tensor(const Tensor3& t) {
  Grouped out(t.dim2());
  for (std::size_t i = 0; i < t.dim0(); ++i)
    for (std::size_t j = 0; j < t.dim1(); ++j)
      for (std::size_t k = 0; k < t.dim2(); ++k)
        if (!is_zero(t(i, j, k))) out[k].emplace_back(i * t.dim1() + j, t(i, j, k));
  return out;
}

/// g(a) = Y a viewed as an arity-1 map.
inline Grouped group_matrix(const Matrix& y) {
  Grouped out(y.rows());
  for (std::size_t a = 0; a < y.cols(); ++a)
    for (std::size_t l = 0; l < y.rows(); ++l)
      if (!is_zero(y(l, a))) out[l].emplace_back(a, y(l, a));
  return out;
}

/// f(..., g(a_slot, ..., a_{slot+gn-1}), ...): arity n + gn - 1. slot is 0-based.
inline SparseVec insert(const SparseVec& f, std::size_t n, std::size_t d, std::size_t w,
                        std::size_t slot, const Grouped& g, std::size_t gn) {
  const std::size_t tail = ipow(d, n - 1 - slot);
  const std::size_t block = ipow(d, gn);
  SparseVec out;
  for (const auto& [idx, v] : f) {
    std::size_t I = idx / w, k = idx % w;
    std::size_t suffix = I % tail;
    std::size_t l = (I / tail) % d;
    std::size_t prefix = I / (tail * d);
    for (const auto& [J, c] : g[l]) {
      std::size_t O = ((prefix * block + J) * tail) + suffix;
      out.emplace_back(O * w + k, v * c);
    }
  }
  compress(out);
  return out;
}

/// f with Y applied to argument slot (0-based).
inline SparseVec pre(const SparseVec& f, std::size_t n, std::size_t d, std::size_t w,
                     std::size_t slot, const Matrix& y) {
  return insert(f, n, d, w, slot, group_matrix(y), 1);
}

/// X o f, X : W -> W'.
inline SparseVec post(const SparseVec& f, std::size_t w, const Matrix& x) {
  const std::size_t w2 = x.rows();
  SparseVec out;
  for (const auto& [idx, v] : f) {
    std::size_t I = idx / w, k = idx % w;
    for (std::size_t k2 = 0; k2 < w2; ++k2)
      if (!is_zero(x(k2, k))) out.emplace_back(I * w2 + k2, v * x(k2, k));
  }
  compress(out);
  return out;
}

/// a_1 |> f(a_2, ..., a_{n+1}) with left(i, u, v).
inline SparseVec left_act(const SparseVec& f, std::size_t n, std::size_t d, std::size_t w,
                          const Tensor3& left) {
  const std::size_t shift = ipow(d, n);
  SparseVec out;
  for (const auto& [idx, v] : f) {
    std::size_t I = idx / w, k = idx % w;
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t v2 = 0; v2 < w; ++v2)
        if (!is_zero(left(i, k, v2))) out.emplace_back((i * shift + I) * w + v2, v * left(i, k, v2));
  }
  compress(out);
  return out;
}

/// f(a_1, ..., a_n) <| a_{n+1} with right(u, i, v).
inline SparseVec right_act(const SparseVec& f, std::size_t d, std::size_t w, const Tensor3& right) {
  SparseVec out;
  for (const auto& [idx, v] : f) {
    std::size_t I = idx / w, k = idx % w;
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t v2 = 0; v2 < w; ++v2)
        if (!is_zero(right(k, i, v2)))
          out.emplace_back((I * d + i) * w + v2, v * right(k, i, v2));
  }
  compress(out);
  return out;
}

/// (f, g) -> p(f(a_1..a_m), g(a_{m+1}..)) for a bilinear p : W_f x W_g -> W.
inline SparseVec juxtapose(const SparseVec& f, std::size_t wf, const SparseVec& g, std::size_t n,
                           std::size_t d, std::size_t wg, const Tensor3& p) {
  const std::size_t shift = ipow(d, n);
  const std::size_t w = p.dim2();
  SparseVec out;
  for (const auto& [fi, fv] : f) {
    std::size_t I = fi / wf, k = fi % wf;
    for (const auto& [gi, gv] : g) {
      std::size_t J = gi / wg, l = gi % wg;
      for (std::size_t q = 0; q < w; ++q)
        if (!is_zero(p(k, l, q))) out.emplace_back((I * shift + J) * w + q, fv * gv * p(k, l, q));
    }
  }
  compress(out);
  return out;
}

/// Hochschild coboundary of an arity-n cochain with values in the bimodule b.
inline SparseVec hochschild(const SparseVec& f, std::size_t n, const Algebra& a, const Bimodule& b) {
  const std::size_t d = a.dim(), w = b.dim();
  Grouped mu = group_tensor(a.mu());
  SparseVec out = left_act(f, n, d, w, b.left());
  for (std::size_t i = 1; i <= n; ++i)
    axpy(out, sign::hochschild_inner(static_cast<int>(i)), insert(f, n, d, w, i - 1, mu, 2));
  axpy(out, sign::hochschild_last(static_cast<int>(n)), right_act(f, d, w, b.right()));
  compress(out);
  return out;
}

/// left(i,u,v) precomposed with N on the algebra argument.
inline Tensor3 left_with(const Tensor3& left, const Matrix& n) {
  Tensor3 t(left.dim0(), left.dim1(), left.dim2());
  for (std::size_t a = 0; a < left.dim0(); ++a)
    for (std::size_t l = 0; l < left.dim0(); ++l) {
      if (is_zero(n(l, a))) continue;
      for (std::size_t u = 0; u < left.dim1(); ++u)
        for (std::size_t v = 0; v < left.dim2(); ++v) t(a, u, v) += n(l, a) * left(l, u, v);
    }
  return t;
}

inline Tensor3 right_with(const Tensor3& right, const Matrix& n) {
  Tensor3 t(right.dim0(), right.dim1(), right.dim2());
  for (std::size_t a = 0; a < right.dim1(); ++a)
    for (std::size_t l = 0; l < right.dim1(); ++l) {
      if (is_zero(n(l, a))) continue;
      for (std::size_t u = 0; u < right.dim0(); ++u)
        for (std::size_t v = 0; v < right.dim2(); ++v) t(u, a, v) += n(l, a) * right(u, l, v);
    }
  return t;
}

/// d_{N,N_M} on an arity-n cochain A^n -> M.
inline SparseVec relative(const SparseVec& f, std::size_t n, const NijAlgebra& na,
                          const NijBimodule& nb) {
  const Algebra& a = na.algebra;
  const Bimodule& b = nb.bimodule;
  const std::size_t d = a.dim(), w = b.dim();
  Grouped mu_n = group_tensor(deform_product(a, na.op).mu());
  SparseVec out = left_act(f, n, d, w, left_with(b.left(), na.op));
  axpy(out, sign::relative_last(static_cast<int>(n)), right_act(f, d, w, right_with(b.right(), na.op)));
  for (std::size_t i = 1; i <= n; ++i)
    axpy(out, sign::hochschild_inner(static_cast<int>(i)), insert(f, n, d, w, i - 1, mu_n, 2));
  axpy(out, Scalar(-1), post(hochschild(f, n, a, b), w, nb.op));
  compress(out);
  return out;
}

/// partial^{N,N_M} = prod over slots t of (N on slot t - N_M after), expanded over raw subsets.
inline SparseVec partial(const SparseVec& f, std::size_t n, const NijAlgebra& na,
                         const NijBimodule& nb) {
  const std::size_t d = na.dim(), w = nb.dim();
  SparseVec g = f;
  for (std::size_t t = 0; t < n; ++t) {
    SparseVec next = pre(g, n, d, w, t, na.op);
    axpy(next, Scalar(-1), post(g, w, nb.op));
    compress(next);
    g = std::move(next);
  }
  return g;
}

/// i_g f: sum over insertion positions with sign (-1)^{(i-1)(n-1)}.
inline SparseVec contraction(const SparseVec& f, std::size_t m, const SparseVec& g, std::size_t n,
                             std::size_t d, std::size_t w) {
  Grouped gg = group_by_target(g, d);
  SparseVec out;
  for (std::size_t i = 1; i <= m; ++i)
    axpy(out, sign::contraction(static_cast<int>(i), static_cast<int>(n)),
         insert(f, m, d, w, i - 1, gg, n));
  compress(out);
  return out;
}

inline SparseVec cup(const SparseVec& f, std::size_t m, const SparseVec& g, std::size_t n,
                     const Algebra& a) {
  (void)m;
  const std::size_t d = a.dim();
  return juxtapose(f, d, g, n, d, d, a.mu());
}

inline SparseVec cup_bracket(const SparseVec& f, std::size_t m, const SparseVec& g, std::size_t n,
                             const Algebra& a) {
  SparseVec out = cup(f, m, g, n, a);
  axpy(out, Scalar(-sign::cup_swap(static_cast<int>(m), static_cast<int>(n))), cup(g, n, f, m, a));
  compress(out);
  return out;
}

/// [f,g]_FN = [f,g]_cup + (-1)^m i_{delta f} g - (-1)^{(m+1)n} i_{delta g} f.
inline SparseVec fn_bracket(const SparseVec& f, std::size_t m, const SparseVec& g, std::size_t n,
                            const Algebra& a) {
  const std::size_t d = a.dim();
  Bimodule adj = Bimodule::adjoint(a);
  SparseVec df = hochschild(f, m, a, adj);
  SparseVec dg = hochschild(g, n, a, adj);
  SparseVec out = cup_bracket(f, m, g, n, a);
  axpy(out, sign::fn_first(static_cast<int>(m)), contraction(g, n, df, m + 1, d, d));
  axpy(out, Scalar(-sign::fn_second(static_cast<int>(m), static_cast<int>(n))),
       contraction(f, m, dg, n + 1, d, d));
  compress(out);
  return out;
}

/// d_N on Hom(A^n, A): [N, f]_FN for n >= 1, and b -> N(b)a - aN(b) - N(ba - ab) on elements.
inline SparseVec operator_differential(const SparseVec& f, std::size_t n, const NijAlgebra& na) {
  const Algebra& a = na.algebra;
  const std::size_t d = a.dim();
  if (n == 0) {
    SparseVec out = left_act(f, 0, d, d, left_with(a.mu(), na.op));
    axpy(out, Scalar(-1), right_act(f, d, d, right_with(a.mu(), na.op)));
    SparseVec inner = left_act(f, 0, d, d, a.mu());
    axpy(inner, Scalar(-1), right_act(f, d, d, a.mu()));
    compress(inner);
    axpy(out, Scalar(-1), post(inner, d, na.op));
    compress(out);
    return out;
  }
  return fn_bracket(MultiMap::from_matrix(na.op).sparse(), 1, f, n, a);
}

}  // namespace cochain

namespace detail {

inline void require_same_source(const MultiMap& f, const MultiMap& g) {
  if (f.source_dim() != g.source_dim()) throw StructureError("maps have different source algebras");
}

inline void require_algebra_valued(const Algebra& a, const MultiMap& f) {
  if (f.source_dim() != a.dim() || f.target_dim() != a.dim())
    throw StructureError("map must be A^n -> A for this algebra");
}

}  // namespace detail

/// i_g f for f of arity m >= 1 and g : A^n -> A of arity n >= 1.
inline MultiMap contraction(const MultiMap& f, const MultiMap& g) {
  if (f.arity() == 0 || g.arity() == 0) throw StructureError("contraction needs arities >= 1");
  detail::require_same_source(f, g);
  if (g.target_dim() != f.source_dim()) throw StructureError("g's target must be f's source");
  const std::size_t m = f.arity(), n = g.arity(), d = f.source_dim();
  return MultiMap::from_sparse(m + n - 1, d, f.target_dim(),
                               cochain::contraction(f.sparse(), m, g.sparse(), n, d, f.target_dim()));
}

inline MultiMap cup_product(const Algebra& a, const MultiMap& f, const MultiMap& g) {
  detail::require_algebra_valued(a, f);
  detail::require_algebra_valued(a, g);
  return MultiMap::from_sparse(f.arity() + g.arity(), a.dim(), a.dim(),
                               cochain::cup(f.sparse(), f.arity(), g.sparse(), g.arity(), a));
}

inline MultiMap cup_bracket(const Algebra& a, const MultiMap& f, const MultiMap& g) {
  detail::require_algebra_valued(a, f);
  detail::require_algebra_valued(a, g);
  return MultiMap::from_sparse(
      f.arity() + g.arity(), a.dim(), a.dim(),
      cochain::cup_bracket(f.sparse(), f.arity(), g.sparse(), g.arity(), a));
}

inline MultiMap hochschild_delta(const Algebra& a, const Bimodule& b, const MultiMap& f) {
  if (f.source_dim() != a.dim() || f.target_dim() != b.dim() || b.algebra_dim() != a.dim())
    throw StructureError("cochain must be A^n -> M for the given bimodule");
  return MultiMap::from_sparse(f.arity() + 1, a.dim(), b.dim(),
                               cochain::hochschild(f.sparse(), f.arity(), a, b));
}

inline MultiMap hochschild_delta(const Algebra& a, const MultiMap& f) {
  return hochschild_delta(a, Bimodule::adjoint(a), f);
}

inline MultiMap fn_bracket(const Algebra& a, const MultiMap& f, const MultiMap& g) {
  if (f.arity() == 0 || g.arity() == 0) throw StructureError("FN bracket needs arities >= 1");
  detail::require_algebra_valued(a, f);
  detail::require_algebra_valued(a, g);
  return MultiMap::from_sparse(
      f.arity() + g.arity(), a.dim(), a.dim(),
      cochain::fn_bracket(f.sparse(), f.arity(), g.sparse(), g.arity(), a));
}

/// f with Y applied to every argument and X applied to the value.
inline MultiMap pre_post(const MultiMap& f, const Matrix& y, const Matrix& x) {
  const std::size_t n = f.arity(), d = f.source_dim(), w = f.target_dim();
  SparseVec v = f.sparse();
  for (std::size_t t = 0; t < n; ++t) v = cochain::pre(v, n, d, w, t, y);
  return MultiMap::from_sparse(n, d, x.rows(), cochain::post(v, w, x));
}

}  // namespace nij
