#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "linalg.hpp"
#include "report.hpp"
#include "sparse.hpp"

namespace nij {

/// Finite-dimensional algebra: e_i * e_j = sum_k mu(i, j, k) e_k.
class Algebra {
 public:
  Algebra() = default;
  explicit Algebra(Tensor3 mu) : mu_(std::move(mu)) {
    if (mu_.dim0() != mu_.dim1() || mu_.dim1() != mu_.dim2())
      throw StructureError("structure tensor must be d x d x d");
  }

  static Algebra zero(std::size_t d) { return Algebra(Tensor3(d, d, d)); }

  std::size_t dim() const { return mu_.dim0(); }
  const Tensor3& mu() const { return mu_; }
  const Scalar& c(std::size_t i, std::size_t j, std::size_t k) const { return mu_(i, j, k); }

  Vector multiply(const Vector& a, const Vector& b) const {
    const std::size_t d = dim();
    Vector out(d);
    for (std::size_t i = 0; i < d; ++i) {
      if (is_zero(a[i])) continue;
      for (std::size_t j = 0; j < d; ++j) {
        if (is_zero(b[j])) continue;
        Scalar ab = a[i] * b[j];
        for (std::size_t k = 0; k < d; ++k)
          if (!is_zero(mu_(i, j, k))) out[k] += ab * mu_(i, j, k);
      }
    }
    return out;
  }

  friend bool operator==(const Algebra& a, const Algebra& b) { return a.mu_ == b.mu_; }

 private:
  Tensor3 mu_;
};

/// A-bimodule of dimension m: left(i, u, v) for e_i |> f_u, right(u, i, v) for f_u <| e_i.
class Bimodule {
 public:
  Bimodule() = default;
  Bimodule(Tensor3 left, Tensor3 right) : left_(std::move(left)), right_(std::move(right)) {
    if (left_.dim1() != left_.dim2() || right_.dim0() != right_.dim2() ||
        left_.dim1() != right_.dim0() || left_.dim0() != right_.dim1())
      throw StructureError("bimodule action tensors have inconsistent shapes");
  }

  static Bimodule adjoint(const Algebra& a) { return Bimodule(a.mu(), a.mu()); }
  static Bimodule zero(std::size_t d, std::size_t m) {
    return Bimodule(Tensor3(d, m, m), Tensor3(m, d, m));
  }

  std::size_t algebra_dim() const { return left_.dim0(); }
  std::size_t dim() const { return left_.dim1(); }
  const Tensor3& left() const { return left_; }
  const Tensor3& right() const { return right_; }

  Vector act_left(const Vector& a, const Vector& u) const {
    Vector out(dim());
    for (std::size_t i = 0; i < algebra_dim(); ++i) {
      if (is_zero(a[i])) continue;
      for (std::size_t x = 0; x < dim(); ++x) {
        if (is_zero(u[x])) continue;
        Scalar s = a[i] * u[x];
        for (std::size_t v = 0; v < dim(); ++v)
          if (!is_zero(left_(i, x, v))) out[v] += s * left_(i, x, v);
      }
    }
    return out;
  }

  Vector act_right(const Vector& u, const Vector& a) const {
    Vector out(dim());
    for (std::size_t x = 0; x < dim(); ++x) {
      if (is_zero(u[x])) continue;
      for (std::size_t i = 0; i < algebra_dim(); ++i) {
        if (is_zero(a[i])) continue;
        Scalar s = u[x] * a[i];
        for (std::size_t v = 0; v < dim(); ++v)
          if (!is_zero(right_(x, i, v))) out[v] += s * right_(x, i, v);
      }
    }
    return out;
  }

  friend bool operator==(const Bimodule& a, const Bimodule& b) {
    return a.left_ == b.left_ && a.right_ == b.right_;
  }

 private:
  Tensor3 left_;
  Tensor3 right_;
};

struct NijAlgebra {
  Algebra algebra;
  Matrix op;
  std::size_t dim() const { return algebra.dim(); }
};

/// Nijenhuis bimodule; the Nijenhuis algebra it lives over is passed alongside.
struct NijBimodule {
  Bimodule bimodule;
  Matrix op;
  std::size_t dim() const { return bimodule.dim(); }
};

inline NijBimodule adjoint_bimodule(const NijAlgebra& na) {
  return {Bimodule::adjoint(na.algebra), na.op};
}

namespace detail {

inline void check_operator(const Matrix& n, std::size_t d, const std::string& what) {
  require_shape(n, d, d, what);
}

inline void check_bimodule_over(const Algebra& a, const Bimodule& b) {
  if (b.algebra_dim() != a.dim())
    throw StructureError("bimodule is over an algebra of dimension " +
                         std::to_string(b.algebra_dim()) + ", expected " +
                         std::to_string(a.dim()));
}

}  // namespace detail

inline Report verify_algebra(const Algebra& a) {
  Report r;
  r.add_law("associativity");
  const std::size_t d = a.dim();
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      for (std::size_t l = 0; l < d; ++l) {
        Vector ei = unit_vector(d, i), ej = unit_vector(d, j), el = unit_vector(d, l);
        r.check("associativity", {i, j, l}, a.multiply(a.multiply(ei, ej), el),
                a.multiply(ei, a.multiply(ej, el)));
      }
  return r;
}

/// N(a)N(b) = N(N(a)b + aN(b) - N(ab)) on basis pairs, without the associativity check.
inline Report verify_nijenhuis_identity(const Algebra& a, const Matrix& n) {
  detail::check_operator(n, a.dim(), "Nijenhuis operator");
  Report r;
  r.add_law("nijenhuis");
  const std::size_t d = a.dim();
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      Vector ei = unit_vector(d, i), ej = unit_vector(d, j);
      Vector ni = n.column(i), nj = n.column(j);
      Vector inner = vector_sub(vector_add(a.multiply(ni, ej), a.multiply(ei, nj)),
                                n.apply(a.multiply(ei, ej)));
      r.check("nijenhuis", {i, j}, a.multiply(ni, nj), n.apply(inner));
    }
  return r;
}

inline Report verify_nij_algebra(const NijAlgebra& na) {
  Report r = verify_algebra(na.algebra);
  r.merge(verify_nijenhuis_identity(na.algebra, na.op));
  return r;
}

/// The three bimodule identities (the algebra itself is not re-checked).
inline Report verify_bimodule_laws(const Algebra& a, const Bimodule& b) {
  detail::check_bimodule_over(a, b);
  Report r;
  for (const char* law : {"bimodule-left", "bimodule-middle", "bimodule-right"}) r.add_law(law);
  const std::size_t d = a.dim(), m = b.dim();
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      for (std::size_t x = 0; x < m; ++x) {
        Vector ei = unit_vector(d, i), ej = unit_vector(d, j), u = unit_vector(m, x);
        r.check("bimodule-left", {i, j, x}, b.act_left(a.multiply(ei, ej), u),
                b.act_left(ei, b.act_left(ej, u)));
        r.check("bimodule-middle", {i, x, j}, b.act_right(b.act_left(ei, u), ej),
                b.act_left(ei, b.act_right(u, ej)));
        r.check("bimodule-right", {x, i, j}, b.act_right(b.act_right(u, ei), ej),
                b.act_right(u, a.multiply(ei, ej)));
      }
  return r;
}

inline Report verify_bimodule(const Algebra& a, const Bimodule& b) {
  Report r = verify_algebra(a);
  r.merge(verify_bimodule_laws(a, b));
  return r;
}

/// The two mixed Nijenhuis identities linking N and N_M.
inline Report verify_nij_bimodule_laws(const NijAlgebra& na, const NijBimodule& nb) {
  const Algebra& a = na.algebra;
  const Bimodule& b = nb.bimodule;
  detail::check_bimodule_over(a, b);
  detail::check_operator(na.op, a.dim(), "Nijenhuis operator");
  detail::check_operator(nb.op, b.dim(), "bimodule operator");
  Report r;
  r.add_law("nij-bimodule-left");
  r.add_law("nij-bimodule-right");
  const Matrix& n = na.op;
  const Matrix& nm = nb.op;
  const std::size_t d = a.dim(), m = b.dim();
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t x = 0; x < m; ++x) {
      Vector ei = unit_vector(d, i), u = unit_vector(m, x);
      Vector na_ = n.column(i), nu = nm.column(x);
      Vector inner_l = vector_sub(vector_add(b.act_left(na_, u), b.act_left(ei, nu)),
                                  nm.apply(b.act_left(ei, u)));
      r.check("nij-bimodule-left", {i, x}, b.act_left(na_, nu), nm.apply(inner_l));
      Vector inner_r = vector_sub(vector_add(b.act_right(nu, ei), b.act_right(u, na_)),
                                  nm.apply(b.act_right(u, ei)));
      r.check("nij-bimodule-right", {x, i}, b.act_right(nu, na_), nm.apply(inner_r));
    }
  return r;
}

inline Report verify_nij_bimodule(const NijAlgebra& na, const NijBimodule& nb) {
  Report r = verify_nij_algebra(na);
  r.merge(verify_bimodule_laws(na.algebra, nb.bimodule));
  r.merge(verify_nij_bimodule_laws(na, nb));
  return r;
}

/// Admissibility of beta : M -> M for the bimodule b over (A, N).
inline Report verify_admissible(const NijAlgebra& na, const Bimodule& b, const Matrix& beta) {
  const Algebra& a = na.algebra;
  detail::check_bimodule_over(a, b);
  detail::check_operator(na.op, a.dim(), "Nijenhuis operator");
  detail::check_operator(beta, b.dim(), "admissible map");
  Report r;
  r.add_law("admissible-left");
  r.add_law("admissible-right");
  const Matrix& n = na.op;
  const Matrix beta2 = beta * beta;
  const std::size_t d = a.dim(), m = b.dim();
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t x = 0; x < m; ++x) {
      Vector ei = unit_vector(d, i), u = unit_vector(m, x);
      Vector ni = n.column(i), bu = beta.column(x), b2u = beta2.column(x);
      r.check("admissible-left", {i, x},
              vector_add(beta.apply(b.act_left(ni, u)), b.act_left(ei, b2u)),
              vector_add(b.act_left(ni, bu), beta.apply(b.act_left(ei, bu))));
      r.check("admissible-right", {x, i},
              vector_add(beta.apply(b.act_right(u, ni)), b.act_right(b2u, ei)),
              vector_add(b.act_right(bu, ni), beta.apply(b.act_right(bu, ei))));
    }
  return r;
}

/// phi : src -> dst is an algebra map intertwining the operators.
inline Report verify_nij_morphism(const NijAlgebra& src, const NijAlgebra& dst, const Matrix& phi) {
  require_shape(phi, dst.dim(), src.dim(), "morphism");
  detail::check_operator(src.op, src.dim(), "source operator");
  detail::check_operator(dst.op, dst.dim(), "target operator");
  Report r;
  r.add_law("morphism-product");
  r.add_law("morphism-operator");
  const std::size_t d = src.dim();
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      Vector ei = unit_vector(d, i), ej = unit_vector(d, j);
      r.check("morphism-product", {i, j}, phi.apply(src.algebra.multiply(ei, ej)),
              dst.algebra.multiply(phi.column(i), phi.column(j)));
    }
  Matrix lhs = dst.op * phi, rhs = phi * src.op;
  for (std::size_t i = 0; i < d; ++i)
    r.check("morphism-operator", {i}, lhs.column(i), rhs.column(i));
  return r;
}

inline void require_ok(const Report& r, const std::string& what) {
  if (!r.ok()) throw StructureError(what + " failed verification: " + r.summary());
}

inline void require_constructed(const Report& r, const std::string& what) {
  if (!r.ok()) throw InternalError(what + " produced an invalid structure: " + r.summary());
}

/// a *_N b = N(a)b + aN(b) - N(ab) for an arbitrary square N (no verification).
inline Algebra deform_product(const Algebra& a, const Matrix& n) {
  const std::size_t d = a.dim();
  Tensor3 t(d, d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      Vector ei = unit_vector(d, i), ej = unit_vector(d, j);
      Vector v = vector_sub(vector_add(a.multiply(n.column(i), ej), a.multiply(ei, n.column(j))),
                            n.apply(a.multiply(ei, ej)));
      for (std::size_t k = 0; k < d; ++k) t(i, j, k) = v[k];
    }
  return Algebra(std::move(t));
}

/// Deformed actions for arbitrary N, N_M (no verification).
inline Bimodule deform_actions(const Bimodule& b, const Matrix& n, const Matrix& nm) {
  const std::size_t d = b.algebra_dim(), m = b.dim();
  Tensor3 left(d, m, m), right(m, d, m);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t x = 0; x < m; ++x) {
      Vector ei = unit_vector(d, i), u = unit_vector(m, x);
      Vector l = vector_sub(vector_add(b.act_left(n.column(i), u), b.act_left(ei, nm.column(x))),
                            nm.apply(b.act_left(ei, u)));
      Vector r = vector_sub(vector_add(b.act_right(nm.column(x), ei), b.act_right(u, n.column(i))),
                            nm.apply(b.act_right(u, ei)));
      for (std::size_t v = 0; v < m; ++v) {
        left(i, x, v) = l[v];
        right(x, i, v) = r[v];
      }
    }
  return Bimodule(std::move(left), std::move(right));
}

/// (A, *_{N^k}); k = 0 uses N^0 = Id.
inline Algebra deformed_algebra(const NijAlgebra& na, unsigned k) {
  require_ok(verify_nij_algebra(na), "Nijenhuis algebra");
  Algebra out = deform_product(na.algebra, na.op.pow(k));
  require_constructed(verify_algebra(out), "deformed_algebra");
  return out;
}

inline Bimodule deformed_bimodule(const NijAlgebra& na, const NijBimodule& nb, unsigned k) {
  require_ok(verify_nij_bimodule(na, nb), "Nijenhuis bimodule");
  Bimodule out = deform_actions(nb.bimodule, na.op.pow(k), nb.op.pow(k));
  Algebra base = deform_product(na.algebra, na.op.pow(k));
  require_constructed(verify_bimodule(base, out), "deformed_bimodule");
  return out;
}

/// (a,u)(b,v) = (ab, a|>v + u<|b) on A + M; A occupies the first d coordinates.
inline Algebra semidirect_algebra(const Algebra& a, const Bimodule& b) {
  detail::check_bimodule_over(a, b);
  const std::size_t d = a.dim(), m = b.dim(), e = d + m;
  Tensor3 t(e, e, e);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      for (std::size_t k = 0; k < d; ++k) t(i, j, k) = a.c(i, j, k);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t x = 0; x < m; ++x)
      for (std::size_t v = 0; v < m; ++v) {
        t(i, d + x, d + v) = b.left()(i, x, v);
        t(d + x, i, d + v) = b.right()(x, i, v);
      }
  return Algebra(std::move(t));
}

inline Matrix direct_sum(const Matrix& x, const Matrix& y) {
  Matrix s(x.rows() + y.rows(), x.cols() + y.cols());
  for (std::size_t r = 0; r < x.rows(); ++r)
    for (std::size_t c = 0; c < x.cols(); ++c) s(r, c) = x(r, c);
  for (std::size_t r = 0; r < y.rows(); ++r)
    for (std::size_t c = 0; c < y.cols(); ++c) s(x.rows() + r, x.cols() + c) = y(r, c);
  return s;
}

/// Inclusion A -> A + M as a (d+m) x d matrix.
inline Matrix first_inclusion(std::size_t d, std::size_t m) {
  Matrix s(d + m, d);
  for (std::size_t i = 0; i < d; ++i) s(i, i) = 1;
  return s;
}

inline NijAlgebra semidirect(const NijAlgebra& na, const NijBimodule& nb) {
  require_ok(verify_nij_bimodule(na, nb), "Nijenhuis bimodule");
  NijAlgebra out{semidirect_algebra(na.algebra, nb.bimodule), direct_sum(na.op, nb.op)};
  require_constructed(verify_nij_algebra(out), "semidirect");
  require_constructed(verify_nij_morphism(na, out, first_inclusion(na.dim(), nb.dim())),
                      "semidirect inclusion");
  return out;
}

enum class LiftVariant { derivation, rota_baxter };

struct LiftResult {
  Matrix candidate;
  bool is_nijenhuis = false;
};

/// derivation: d : A -> M lifts to (a,u) -> (0, d(a)); rota_baxter: R : M -> A lifts to (a,u) -> (R(u), 0).
inline LiftResult lift_to_semidirect(const Algebra& a, const Bimodule& b, const Matrix& map,
                                     LiftVariant variant) {
  require_ok(verify_bimodule(a, b), "bimodule");
  const std::size_t d = a.dim(), m = b.dim();
  Matrix lift(d + m, d + m);
  if (variant == LiftVariant::derivation) {
    require_shape(map, m, d, "derivation-lift map A -> M");
    for (std::size_t r = 0; r < m; ++r)
      for (std::size_t c = 0; c < d; ++c) lift(d + r, c) = map(r, c);
  } else {
    require_shape(map, d, m, "rb-lift map M -> A");
    for (std::size_t r = 0; r < d; ++r)
      for (std::size_t c = 0; c < m; ++c) lift(r, d + c) = map(r, c);
  }
  Algebra e = semidirect_algebra(a, b);
  bool ok = verify_nijenhuis_identity(e, lift).ok();
  return {std::move(lift), ok};
}

/// R(u)R(v) = R(R(u)|>v + u<|R(v)) on basis pairs.
inline Report verify_relative_rota_baxter(const Algebra& a, const Bimodule& b, const Matrix& r) {
  detail::check_bimodule_over(a, b);
  require_shape(r, a.dim(), b.dim(), "relative Rota-Baxter map M -> A");
  Report rep;
  rep.add_law("relative-rota-baxter");
  const std::size_t m = b.dim();
  for (std::size_t x = 0; x < m; ++x)
    for (std::size_t y = 0; y < m; ++y) {
      Vector u = unit_vector(m, x), v = unit_vector(m, y);
      Vector ru = r.column(x), rv = r.column(y);
      rep.check("relative-rota-baxter", {x, y}, a.multiply(ru, rv),
                r.apply(vector_add(b.act_left(ru, v), b.act_right(u, rv))));
    }
  return rep;
}

/// (M*, |>*, <|*) with operator beta^T; beta must be admissible.
inline NijBimodule dual_nij_bimodule(const NijAlgebra& na, const Bimodule& b, const Matrix& beta) {
  require_ok(verify_bimodule(na.algebra, b), "bimodule");
  Report adm = verify_admissible(na, b, beta);
  require_ok(adm, "admissible map");
  const std::size_t d = b.algebra_dim(), m = b.dim();
  Tensor3 left(d, m, m), right(m, d, m);
  // (a |>* e^v)(e_u) = e^v(e_u <| a);  (e^v <|* a)(e_u) = e^v(a |> e_u).
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t v = 0; v < m; ++v)
      for (std::size_t u = 0; u < m; ++u) {
        left(i, v, u) = b.right()(u, i, v);
        right(v, i, u) = b.left()(i, u, v);
      }
  NijBimodule out{Bimodule(std::move(left), std::move(right)), beta.transpose()};
  require_constructed(verify_nij_bimodule(na, out), "dual_nij_bimodule");
  return out;
}

}  // namespace nij
