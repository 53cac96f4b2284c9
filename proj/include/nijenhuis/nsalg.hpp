#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "core.hpp"
#include "sign.hpp"
#include "tensor.hpp"

namespace nij {

/// Three bilinear products prec, succ, vee on a space of dimension d, each shaped like mu.
struct NSAlgebra {
  Tensor3 prec;
  Tensor3 succ;
  Tensor3 vee;

  std::size_t dim() const { return prec.dim0(); }

  Tensor3 total() const {
    const std::size_t d = dim();
    Tensor3 t(d, d, d);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j)
        for (std::size_t k = 0; k < d; ++k) t(i, j, k) = prec(i, j, k) + succ(i, j, k) + vee(i, j, k);
    return t;
  }
};

/// Number of labels [1], ..., [r] carried by an element of O_A(n).
inline std::size_t ns_labels(std::size_t n) { return n == 1 ? 1 : n + 1; }

/// Element of O_A(n): one arity-n map A^n -> A per label.
/// Labels are 1-based like the symbols [r]; components_[r - 1] is the value at [r].
/// The flat vector concatenates the components in label order.
class LabeledCochain {
 public:
  LabeledCochain() = default;
  LabeledCochain(std::size_t arity, std::size_t d) : arity_(arity), d_(d) {
    if (arity == 0) throw StructureError("labeled cochains have arity >= 1");
    components_.assign(ns_labels(arity), MultiMap(arity, d, d));
  }

  static LabeledCochain from_components(std::vector<MultiMap> comps) {
    if (comps.empty()) throw StructureError("labeled cochain needs components");
    LabeledCochain c(comps.front().arity(), comps.front().source_dim());
    if (comps.size() != c.labels()) throw StructureError("wrong number of labels for the arity");
    for (const auto& m : comps)
      if (m.arity() != c.arity_ || m.source_dim() != c.d_ || m.target_dim() != c.d_)
        throw StructureError("labeled cochain components must share shape A^n -> A");
    c.components_ = std::move(comps);
    return c;
  }

  static LabeledCochain from_vector(std::size_t arity, std::size_t d, const Vector& v) {
    LabeledCochain c(arity, d);
    const std::size_t block = c.component_size();
    if (v.size() != block * c.labels()) throw StructureError("labeled cochain vector has wrong length");
    for (std::size_t r = 0; r < c.labels(); ++r)
      c.components_[r] = MultiMap::from_vector(
          arity, d, d, Vector(v.begin() + r * block, v.begin() + (r + 1) * block));
    return c;
  }

  /// The element of O_A(2) encoding an NS triple.
  static LabeledCochain from_ns(const NSAlgebra& ns) {
    return from_components({MultiMap::from_tensor3(ns.prec), MultiMap::from_tensor3(ns.succ),
                            MultiMap::from_tensor3(ns.vee)});
  }

  std::size_t arity() const { return arity_; }
  std::size_t dim() const { return d_; }
  std::size_t labels() const { return components_.size(); }
  std::size_t component_size() const { return ipow(d_, arity_) * d_; }
  std::size_t size() const { return component_size() * labels(); }

  const MultiMap& component(std::size_t r) const { return components_.at(r - 1); }
  MultiMap& component(std::size_t r) { return components_.at(r - 1); }
  const std::vector<MultiMap>& components() const { return components_; }

  /// Evaluation at [1] + ... + [labels].
  MultiMap total() const {
    MultiMap t = components_.front();
    for (std::size_t r = 1; r < components_.size(); ++r) t = t + components_[r];
    return t;
  }

  Vector to_vector() const {
    Vector v;
    v.reserve(size());
    for (const auto& c : components_) v.insert(v.end(), c.entries().begin(), c.entries().end());
    return v;
  }

  bool is_zero() const {
    for (const auto& c : components_)
      if (!c.is_zero()) return false;
    return true;
  }

  friend LabeledCochain operator+(LabeledCochain a, const LabeledCochain& b) {
    a.check_same(b);
    for (std::size_t r = 0; r < a.components_.size(); ++r) a.components_[r] = a.components_[r] + b.components_[r];
    return a;
  }
  friend LabeledCochain operator-(LabeledCochain a, const LabeledCochain& b) {
    a.check_same(b);
    for (std::size_t r = 0; r < a.components_.size(); ++r) a.components_[r] = a.components_[r] - b.components_[r];
    return a;
  }
  friend LabeledCochain operator*(const Scalar& s, LabeledCochain a) {
    for (auto& c : a.components_) c = s * c;
    return a;
  }
  friend bool operator==(const LabeledCochain& a, const LabeledCochain& b) {
    return a.arity_ == b.arity_ && a.d_ == b.d_ && a.components_ == b.components_;
  }

 private:
  void check_same(const LabeledCochain& b) const {
    if (arity_ != b.arity_ || d_ != b.d_) throw StructureError("labeled cochains have different shapes");
  }

  std::size_t arity_ = 0;
  std::size_t d_ = 0;
  std::vector<MultiMap> components_;
};

/// Sparse kernels on labeled cochains: a vector of sparse components, label r at index r - 1.
namespace labeled {

using Components = std::vector<SparseVec>;

inline const SparseVec& label(const Components& f, std::size_t r) {
  static const SparseVec empty;
  return r >= 1 && r <= f.size() ? f[r - 1] : empty;
}

inline SparseVec total(const Components& f) {
  SparseVec out;
  for (const auto& c : f) axpy(out, Scalar(1), c);
  compress(out);
  return out;
}

/// f o_i g for f in O_A(m), g in O_A(n). A label beyond an operand's range contributes zero,
/// which is how the table degenerates when m or n is 1.
inline Components compose(const Components& f, std::size_t m, const Components& g, std::size_t n,
                          std::size_t i, std::size_t d) {
  const std::size_t k = m + n - 1;
  Components out(ns_labels(k));
  SparseVec gtot = total(g);
  auto ins = [&](const SparseVec& fc, const SparseVec& gc) {
    if (fc.empty() || gc.empty()) return SparseVec{};
    return cochain::insert(fc, m, d, d, i - 1, cochain::group_by_target(gc, d), n);
  };
  for (std::size_t r = 1; r <= out.size(); ++r) {
    SparseVec& o = out[r - 1];
    if (r <= i - 1) {
      o = ins(label(f, r), gtot);
    } else if (r <= i + n - 1) {
      o = ins(label(f, i), label(g, r - i + 1));
    } else if (r <= m + n - 1) {
      o = ins(label(f, r - n + 1), gtot);
    } else {
      o = ins(label(f, i), label(g, n + 1));
      axpy(o, Scalar(1), ins(label(f, m + 1), gtot));
      compress(o);
    }
  }
  return out;
}

inline void accumulate(Components& acc, const Scalar& s, const Components& x) {
  for (std::size_t r = 0; r < acc.size(); ++r) axpy(acc[r], s, x[r]);
}

inline Components bracket(const Components& f, std::size_t m, const Components& g, std::size_t n,
                          std::size_t d) {
  Components out(ns_labels(m + n - 1));
  for (std::size_t i = 1; i <= m; ++i)
    accumulate(out, sign::ns_inner(static_cast<int>(i), static_cast<int>(n)), compose(f, m, g, n, i, d));
  const int swap = sign::ns_swap(static_cast<int>(m), static_cast<int>(n));
  for (std::size_t i = 1; i <= n; ++i)
    accumulate(out, Scalar(-swap * sign::ns_inner(static_cast<int>(i), static_cast<int>(m))),
               compose(g, n, f, m, i, d));
  for (auto& c : out) compress(c);
  return out;
}

/// delta_pi on O_A(n), no Maurer-Cartan check.
inline Components differential(const Components& pi, const Components& f, std::size_t n,
                               std::size_t d) {
  Components out = bracket(pi, 2, f, n, d);
  const int s = sign::ns_differential(static_cast<int>(n));
  if (s < 0)
    for (auto& c : out)
      for (auto& e : c) e.second = -e.second;
  return out;
}

/// Theta_n on an arity-n cochain A^n -> A, values in O_A(n+1).
inline Components theta(const Algebra& a, const SparseVec& f, std::size_t n) {
  const std::size_t d = a.dim();
  Components out(n + 2);
  axpy(out[0], sign::theta_first(static_cast<int>(n)), cochain::left_act(f, n, d, d, a.mu()));
  out[n] = cochain::right_act(f, d, d, a.mu());
  cochain::Grouped mu = cochain::group_tensor(a.mu());
  for (std::size_t i = 1; i <= n; ++i)
    axpy(out[n + 1], sign::theta_inner(static_cast<int>(n), static_cast<int>(i)),
         cochain::insert(f, n, d, d, i - 1, mu, 2));
  compress(out[n + 1]);
  return out;
}

inline Components split(const Vector& v, std::size_t arity, std::size_t d) {
  const std::size_t block = ipow(d, arity) * d;
  Components out(v.size() / block);
  for (std::size_t i = 0; i < v.size(); ++i)
    if (!nij::is_zero(v[i])) out[i / block].emplace_back(i % block, v[i]);
  return out;
}

inline Components split(const LabeledCochain& c) {
  Components out;
  for (const auto& m : c.components()) out.push_back(m.sparse());
  return out;
}

inline LabeledCochain join(const Components& c, std::size_t arity, std::size_t d) {
  std::vector<MultiMap> comps;
  for (const auto& s : c) comps.push_back(MultiMap::from_sparse(arity, d, d, s));
  return LabeledCochain::from_components(std::move(comps));
}

}  // namespace labeled

/// The NS triple a.N(b), N(a).b, -N(a.b).
inline NSAlgebra induced_ns(const NijAlgebra& na) {
  const Algebra& a = na.algebra;
  const std::size_t d = a.dim();
  NSAlgebra ns{Tensor3(d, d, d), Tensor3(d, d, d), Tensor3(d, d, d)};
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      Vector ei = unit_vector(d, i), ej = unit_vector(d, j);
      Vector p = a.multiply(ei, na.op.column(j));
      Vector s = a.multiply(na.op.column(i), ej);
      Vector v = na.op.apply(a.multiply(ei, ej));
      for (std::size_t k = 0; k < d; ++k) {
        ns.prec(i, j, k) = p[k];
        ns.succ(i, j, k) = s[k];
        ns.vee(i, j, k) = -v[k];
      }
    }
  return ns;
}

/// The four NS identities on basis triples; notes "dendriform" when vee vanishes.
inline Report verify_ns(const NSAlgebra& ns) {
  const std::size_t d = ns.dim();
  auto shape_ok = [d](const Tensor3& t) { return t.dim0() == d && t.dim1() == d && t.dim2() == d; };
  if (!shape_ok(ns.prec) || !shape_ok(ns.succ) || !shape_ok(ns.vee))
    throw StructureError("NS products must all be d x d x d");
  Algebra prec(ns.prec), succ(ns.succ), vee(ns.vee), star(ns.total());
  Report r;
  for (const char* law : {"ns-1", "ns-2", "ns-3", "ns-4"}) r.add_law(law);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      for (std::size_t l = 0; l < d; ++l) {
        Vector a = unit_vector(d, i), b = unit_vector(d, j), c = unit_vector(d, l);
        r.check("ns-1", {i, j, l}, prec.multiply(prec.multiply(a, b), c),
                prec.multiply(a, star.multiply(b, c)));
        r.check("ns-2", {i, j, l}, prec.multiply(succ.multiply(a, b), c),
                succ.multiply(a, prec.multiply(b, c)));
        r.check("ns-3", {i, j, l}, succ.multiply(star.multiply(a, b), c),
                succ.multiply(a, succ.multiply(b, c)));
        r.check("ns-4", {i, j, l},
                vector_add(vee.multiply(star.multiply(a, b), c), prec.multiply(vee.multiply(a, b), c)),
                vector_add(succ.multiply(a, vee.multiply(b, c)), vee.multiply(a, star.multiply(b, c))));
      }
  bool dendriform = true;
  for (std::size_t i = 0; i < d && dendriform; ++i)
    for (std::size_t j = 0; j < d && dendriform; ++j)
      for (std::size_t k = 0; k < d; ++k)
        if (!nij::is_zero(ns.vee(i, j, k))) {
          dendriform = false;
          break;
        }
  if (dendriform) r.notes.push_back("dendriform");
  return r;
}

inline LabeledCochain partial_composition(const LabeledCochain& f, const LabeledCochain& g,
                                          std::size_t i) {
  if (f.dim() != g.dim()) throw StructureError("labeled cochains live on different spaces");
  if (i < 1 || i > f.arity()) throw StructureError("partial composition index out of range");
  return labeled::join(labeled::compose(labeled::split(f), f.arity(), labeled::split(g), g.arity(), i, f.dim()),
                       f.arity() + g.arity() - 1, f.dim());
}

inline LabeledCochain ns_bracket(const LabeledCochain& f, const LabeledCochain& g) {
  if (f.dim() != g.dim()) throw StructureError("labeled cochains live on different spaces");
  return labeled::join(labeled::bracket(labeled::split(f), f.arity(), labeled::split(g), g.arity(), f.dim()),
                       f.arity() + g.arity() - 1, f.dim());
}

inline bool is_maurer_cartan(const LabeledCochain& pi) {
  return pi.arity() == 2 && ns_bracket(pi, pi).is_zero();
}

inline LabeledCochain ns_differential(const LabeledCochain& pi, const LabeledCochain& f) {
  if (pi.arity() != 2) throw StructureError("delta_pi needs pi in O_A(2)");
  if (pi.dim() != f.dim()) throw StructureError("labeled cochains live on different spaces");
  if (!is_maurer_cartan(pi)) throw StructureError("pi is not a Maurer-Cartan element");
  return labeled::join(labeled::differential(labeled::split(pi), labeled::split(f), f.arity(), f.dim()),
                       f.arity() + 1, f.dim());
}

inline LabeledCochain theta_map(const NijAlgebra& na, const MultiMap& f) {
  detail::require_algebra_valued(na.algebra, f);
  if (f.arity() == 0) throw StructureError("Theta_n needs n >= 1");
  return labeled::join(labeled::theta(na.algebra, f.sparse(), f.arity()), f.arity() + 1, na.dim());
}

inline MultiMap psi_map(const NijAlgebra& na, const MultiMap& f) { return theta_map(na, f).total(); }

}  // namespace nij
