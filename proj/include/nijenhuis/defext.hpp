#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "complexes.hpp"
#include "core.hpp"
#include "tensor.hpp"

namespace nij {

/// Degree-2 element (chi, F) of the reduced cone: chi : A^2 -> M, F : A -> M.
struct Cocycle2 {
  MultiMap chi;
  MultiMap f_part;

  static Cocycle2 zero(std::size_t d, std::size_t m) { return {MultiMap(2, d, m), MultiMap(1, d, m)}; }

  /// Layout of cone-reduced degree 2: chi entries, then F entries.
  Vector to_vector() const {
    Vector v = chi.entries();
    v.insert(v.end(), f_part.entries().begin(), f_part.entries().end());
    return v;
  }

  static Cocycle2 from_vector(std::size_t d, std::size_t m, const Vector& v) {
    const std::size_t split = d * d * m;
    if (v.size() != split + d * m) throw StructureError("degree-2 cochain has wrong length");
    return {MultiMap::from_vector(2, d, m, Vector(v.begin(), v.begin() + split)),
            MultiMap::from_vector(1, d, m, Vector(v.begin() + split, v.end()))};
  }

  friend bool operator==(const Cocycle2& a, const Cocycle2& b) { return a.chi == b.chi && a.f_part == b.f_part; }
  friend Cocycle2 operator+(const Cocycle2& a, const Cocycle2& b) { return {a.chi + b.chi, a.f_part + b.f_part}; }
  friend Cocycle2 operator-(const Cocycle2& a, const Cocycle2& b) { return {a.chi - b.chi, a.f_part - b.f_part}; }
};

/// Abelian extension 0 -> M -> E -> A -> 0 of Nijenhuis algebras.
struct Extension {
  NijAlgebra total;
  Matrix incl;     // M -> E
  Matrix proj;     // E -> A
  Matrix section;  // A -> E
  NijAlgebra base;
  NijBimodule fiber;
};

struct AutoPair {
  Matrix beta;   // M -> M
  Matrix alpha;  // A -> A
};

namespace detail {

inline void check_cocycle_shape(const NijAlgebra& na, const NijBimodule& nb, const Cocycle2& z) {
  const std::size_t d = na.dim(), m = nb.dim();
  if (z.chi.arity() != 2 || z.chi.source_dim() != d || z.chi.target_dim() != m)
    throw StructureError("chi must be a bilinear map A x A -> M");
  if (z.f_part.arity() != 1 || z.f_part.source_dim() != d || z.f_part.target_dim() != m)
    throw StructureError("F must be a linear map A -> M");
}

/// g : A -> M as an m x d matrix, from a cone-reduced degree-1 vector.
inline Matrix degree_one_map(std::size_t d, std::size_t m, const Vector& v) {
  return MultiMap::from_vector(1, d, m, v).to_matrix();
}

/// Coordinates (a, u) of E = s(A) + i(M): the inverse of [s | i].
inline Matrix coordinates(const Extension& e) {
  const std::size_t d = e.base.dim(), m = e.fiber.dim();
  Matrix q(d + m, d + m);
  for (std::size_t r = 0; r < d + m; ++r) {
    for (std::size_t c = 0; c < d; ++c) q(r, c) = e.section(r, c);
    for (std::size_t c = 0; c < m; ++c) q(r, d + c) = e.incl(r, c);
  }
  auto inv = inverse(q);
  if (!inv) throw StructureError("section and inclusion do not span E");
  return *inv;
}

inline Matrix rows_of(const Matrix& x, std::size_t r0, std::size_t nr) {
  Matrix out(nr, x.cols());
  for (std::size_t r = 0; r < nr; ++r)
    for (std::size_t c = 0; c < x.cols(); ++c) out(r, c) = x(r0 + r, c);
  return out;
}

/// First-order truncations over k[t]/(t^2): value c0 + t c1.
struct Dual {
  Vector c0;
  Vector c1;
};

inline Dual dual_multiply(const Algebra& mu, const Tensor3& mu1, const Dual& x, const Dual& y) {
  Algebra m1(mu1);
  return {mu.multiply(x.c0, y.c0),
          vector_add(vector_add(mu.multiply(x.c0, y.c1), mu.multiply(x.c1, y.c0)), m1.multiply(x.c0, y.c0))};
}

inline Dual dual_apply(const Matrix& n, const Matrix& n1, const Dual& x) {
  return {n.apply(x.c0), vector_add(n.apply(x.c1), n1.apply(x.c0))};
}

inline Dual dual_sub(const Dual& a, const Dual& b) { return {vector_sub(a.c0, b.c0), vector_sub(a.c1, b.c1)}; }
inline Dual dual_add(const Dual& a, const Dual& b) { return {vector_add(a.c0, b.c0), vector_add(a.c1, b.c1)}; }

/// Associativity and the Nijenhuis identity of (mu + t mu1, N + t N1) modulo t^2.
inline Report truncated_laws(const NijAlgebra& na, const Tensor3& mu1, const Matrix& n1) {
  const std::size_t d = na.dim();
  const Algebra& mu = na.algebra;
  Report r;
  r.add_law("truncated-associativity");
  r.add_law("truncated-nijenhuis");
  auto basis = [d](std::size_t i) { return Dual{unit_vector(d, i), Vector(d)}; };
  auto mul = [&](const Dual& x, const Dual& y) { return dual_multiply(mu, mu1, x, y); };
  auto op = [&](const Dual& x) { return dual_apply(na.op, n1, x); };
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      Dual a = basis(i), b = basis(j);
      for (std::size_t l = 0; l < d; ++l) {
        Dual c = basis(l);
        Dual lhs = mul(mul(a, b), c), rhs = mul(a, mul(b, c));
        r.check("truncated-associativity", {i, j, l}, lhs.c1, rhs.c1);
      }
      Dual lhs = mul(op(a), op(b));
      Dual rhs = op(dual_sub(dual_add(mul(op(a), b), mul(a, op(b))), op(mul(a, b))));
      r.check("truncated-nijenhuis", {i, j}, lhs.c1, rhs.c1);
    }
  return r;
}

}  // namespace detail

/// Whether (mu1, N1) is a 2-cocycle of the adjoint reduced cone, cross-checked against the
/// first-order expansion of (mu + t mu1, N + t N1).
inline bool check_infinitesimal(const NijAlgebra& na, const MultiMap& mu1, const Matrix& n1) {
  NijBimodule adj = adjoint_bimodule(na);
  Cocycle2 z{mu1, MultiMap::from_matrix(n1)};
  detail::check_cocycle_shape(na, adj, z);
  require_ok(verify_nij_algebra(na), "Nijenhuis algebra");
  bool cocycle = all_zero(cone_reduced_matrix(na, adj, 2).apply(z.to_vector()));
  bool expanded = detail::truncated_laws(na, mu1.to_tensor3(), n1).ok();
  if (cocycle != expanded) throw InternalError("cocycle test and first-order expansion disagree");
  return cocycle;
}

/// Some phi1 : A -> A with (mu1, N1) - (mu1', N1') = delta_NAlg(phi1), re-verified as a
/// first-order isomorphism Id + t phi1.
inline std::optional<Matrix> deformation_equivalence(const NijAlgebra& na, const MultiMap& mu1, const Matrix& n1,
                                                     const MultiMap& mu1p, const Matrix& n1p) {
  if (!check_infinitesimal(na, mu1, n1) || !check_infinitesimal(na, mu1p, n1p))
    throw StructureError("deformation is not a 2-cocycle");
  const std::size_t d = na.dim();
  NijBimodule adj = adjoint_bimodule(na);
  Vector diff = vector_sub(Cocycle2{mu1, MultiMap::from_matrix(n1)}.to_vector(),
                           Cocycle2{mu1p, MultiMap::from_matrix(n1p)}.to_vector());
  auto g = solve(cone_reduced_matrix(na, adj, 1), diff);
  if (!g) return std::nullopt;
  Matrix phi1 = detail::degree_one_map(d, d, *g);
  // phi_t(mu_t(a, b)) = mu'_t(phi_t a, phi_t b) and N'_t phi_t = phi_t N_t, first order.
  Tensor3 t1 = mu1.to_tensor3(), t1p = mu1p.to_tensor3();
  Matrix id = Matrix::identity(d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      detail::Dual a{unit_vector(d, i), Vector(d)}, b{unit_vector(d, j), Vector(d)};
      detail::Dual lhs = detail::dual_apply(id, phi1, detail::dual_multiply(na.algebra, t1, a, b));
      detail::Dual rhs = detail::dual_multiply(na.algebra, t1p, detail::dual_apply(id, phi1, a),
                                               detail::dual_apply(id, phi1, b));
      if (lhs.c1 != rhs.c1) throw InternalError("solved phi1 is not a first-order algebra map");
    }
  if (n1p + na.op * phi1 != phi1 * na.op + n1)
    throw InternalError("solved phi1 does not intertwine the operators");
  return phi1;
}

/// The extension invariants: exactness at the ends, M an ideal with zero product, the maps
/// are Nijenhuis morphisms, and the induced actions are the fiber's.
inline Report verify_extension(const Extension& e) {
  const std::size_t d = e.base.dim(), m = e.fiber.dim();
  require_shape(e.incl, d + m, m, "inclusion");
  require_shape(e.proj, d, d + m, "projection");
  require_shape(e.section, d + m, d, "section");
  require_shape(e.total.op, d + m, d + m, "extension operator");
  if (e.total.dim() != d + m) throw StructureError("extension has the wrong dimension");
  Report r = verify_nij_algebra(e.total);
  for (const char* law : {"proj-incl", "proj-section", "fiber-product", "fiber-operator", "induced-left",
                          "induced-right"})
    r.add_law(law);
  Matrix pi = e.proj * e.incl, ps = e.proj * e.section;
  for (std::size_t c = 0; c < m; ++c) r.check("proj-incl", {c}, pi.column(c), Vector(d));
  for (std::size_t c = 0; c < d; ++c) r.check("proj-section", {c}, ps.column(c), unit_vector(d, c));
  r.merge(verify_nij_morphism(e.total, e.base, e.proj));
  const Algebra& E = e.total.algebra;
  const Matrix coords = detail::coordinates(e);
  auto fiber_part = [&](const Vector& x) {
    Vector c = coords.apply(x);
    Vector out(c.begin() + d, c.end());
    for (std::size_t i = 0; i < d; ++i)
      if (!nij::is_zero(c[i])) return Vector();  // not in M; forces a mismatch
    return out;
  };
  for (std::size_t u = 0; u < m; ++u) {
    Vector iu = e.incl.column(u);
    for (std::size_t v = 0; v < m; ++v) r.check("fiber-product", {u, v}, E.multiply(iu, e.incl.column(v)), Vector(d + m));
    r.check("fiber-operator", {u}, e.total.op.apply(iu), e.incl.apply(e.fiber.op.column(u)));
    for (std::size_t a = 0; a < d; ++a) {
      Vector sa = e.section.column(a);
      r.check("induced-left", {a, u}, fiber_part(E.multiply(sa, iu)),
              e.fiber.bimodule.act_left(unit_vector(d, a), unit_vector(m, u)));
      r.check("induced-right", {u, a}, fiber_part(E.multiply(iu, sa)),
              e.fiber.bimodule.act_right(unit_vector(m, u), unit_vector(d, a)));
    }
  }
  return r;
}

/// E = A (+) M with (a,u)(b,v) = (ab, a|>v + u<|b + chi(a,b)) and N_E(a,u) = (N a, N_M u + F a).
inline Extension extension_from_cocycle(const NijAlgebra& na, const NijBimodule& nb, const Cocycle2& z) {
  detail::check_cocycle_shape(na, nb, z);
  require_nij_pair(na, nb);
  const std::size_t d = na.dim(), m = nb.dim();
  if (!all_zero(cone_reduced_matrix(na, nb, 2).apply(z.to_vector())))
    throw StructureError("(chi, F) is not a 2-cocycle");
  NijAlgebra sd = semidirect(na, nb);
  Tensor3 mu = sd.algebra.mu();
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      for (std::size_t k = 0; k < m; ++k) mu(i, j, d + k) += z.chi(std::vector<std::size_t>{i, j}, k);
  Matrix ne = sd.op;
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t k = 0; k < m; ++k) ne(d + k, i) += z.f_part(std::vector<std::size_t>{i}, k);
  Matrix incl(d + m, m);
  for (std::size_t k = 0; k < m; ++k) incl(d + k, k) = 1;
  Matrix section = first_inclusion(d, m);
  Extension e{{Algebra(mu), ne}, incl, section.transpose(), section, na, nb};
  require_constructed(verify_extension(e), "extension");
  return e;
}

/// (chi, F) with chi(a,b) = s(a)s(b) - s(ab) and F(a) = N_E s(a) - s N(a), read in M.
inline Cocycle2 cocycle_from_extension(const Extension& e, const Matrix& s) {
  const std::size_t d = e.base.dim(), m = e.fiber.dim();
  require_shape(s, d + m, d, "section");
  if (!(e.proj * s == Matrix::identity(d))) throw StructureError("map is not a section of the projection");
  Extension with_s = e;
  with_s.section = s;
  const Matrix coords = detail::coordinates(with_s);
  auto in_fiber = [&](const Vector& x) {
    Vector c = coords.apply(x);
    for (std::size_t i = 0; i < d; ++i)
      if (!nij::is_zero(c[i])) throw InternalError("value does not lie in M");
    return Vector(c.begin() + d, c.end());
  };
  const Algebra& E = e.total.algebra;
  Cocycle2 z = Cocycle2::zero(d, m);
  for (std::size_t a = 0; a < d; ++a) {
    Vector sa = s.column(a);
    for (std::size_t b = 0; b < d; ++b) {
      Vector v = in_fiber(vector_sub(E.multiply(sa, s.column(b)),
                                     s.apply(e.base.algebra.multiply(unit_vector(d, a), unit_vector(d, b)))));
      for (std::size_t k = 0; k < m; ++k) z.chi(std::vector<std::size_t>{a, b}, k) = v[k];
    }
    Vector f = in_fiber(vector_sub(e.total.op.apply(sa), s.apply(e.base.op.column(a))));
    for (std::size_t k = 0; k < m; ++k) z.f_part(std::vector<std::size_t>{a}, k) = f[k];
  }
  if (!all_zero(cone_reduced_matrix(e.base, e.fiber, 2).apply(z.to_vector())))
    throw InternalError("extracted (chi, F) is not a cocycle");
  return z;
}

/// For cohomologous z, z' with z - z' = delta_NAlg(g): phi(a, u) = (a, u + g(a)) from the
/// extension of z to that of z', verified as a Nijenhuis isomorphism.
inline std::optional<Matrix> extension_isomorphism(const NijAlgebra& na, const NijBimodule& nb, const Cocycle2& z,
                                                   const Cocycle2& zp) {
  const std::size_t d = na.dim(), m = nb.dim();
  Extension e = extension_from_cocycle(na, nb, z), ep = extension_from_cocycle(na, nb, zp);
  auto g = solve(cone_reduced_matrix(na, nb, 1), vector_sub(z.to_vector(), zp.to_vector()));
  if (!g) return std::nullopt;
  Matrix gm = detail::degree_one_map(d, m, *g);
  Matrix phi = Matrix::identity(d + m);
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t k = 0; k < m; ++k) phi(d + k, a) = gm(k, a);
  require_constructed(verify_nij_morphism(e.total, ep.total, phi), "extension isomorphism");
  return phi;
}

/// beta in Aut(M, N_M) (invertible, commuting with N_M) and alpha in Aut(A, N).
inline Report verify_auto_pair(const Extension& e, const AutoPair& p) {
  const std::size_t d = e.base.dim(), m = e.fiber.dim();
  require_shape(p.beta, m, m, "beta");
  require_shape(p.alpha, d, d, "alpha");
  Report r = verify_nij_morphism(e.base, e.base, p.alpha);
  r.add_law("beta-operator");
  r.add_law("invertible");
  Matrix lhs = p.beta * e.fiber.op, rhs = e.fiber.op * p.beta;
  for (std::size_t c = 0; c < m; ++c) r.check("beta-operator", {c}, lhs.column(c), rhs.column(c));
  if (!inverse(p.beta)) r.violations.push_back({"invertible", {0}, {}, {}});
  if (!inverse(p.alpha)) r.violations.push_back({"invertible", {1}, {}, {}});
  return r;
}

/// beta(a |> u) = alpha(a) |> beta(u) and beta(u <| a) = beta(u) <| alpha(a).
inline Report verify_compatible(const Extension& e, const AutoPair& p) {
  const std::size_t d = e.base.dim(), m = e.fiber.dim();
  const Bimodule& b = e.fiber.bimodule;
  Report r;
  r.add_law("compatible-left");
  r.add_law("compatible-right");
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t u = 0; u < m; ++u) {
      Vector ea = unit_vector(d, a), eu = unit_vector(m, u);
      r.check("compatible-left", {a, u}, p.beta.apply(b.act_left(ea, eu)),
              b.act_left(p.alpha.column(a), p.beta.column(u)));
      r.check("compatible-right", {u, a}, p.beta.apply(b.act_right(eu, ea)),
              b.act_right(p.beta.column(u), p.alpha.column(a)));
    }
  return r;
}

struct WellsResult {
  bool compatible = false;
  Report compatibility;
  bool obstruction_trivial = false;
  std::optional<Matrix> lambda;
};

/// (chi_(beta,alpha), F_(beta,alpha)) - (chi, F) for the extension's own section.
inline Cocycle2 wells_cocycle(const Extension& e, const AutoPair& p) {
  auto alpha_inv = inverse(p.alpha);
  if (!alpha_inv) throw StructureError("alpha is not invertible");
  Cocycle2 z = cocycle_from_extension(e, e.section);
  Cocycle2 moved{pre_post(z.chi, *alpha_inv, p.beta), pre_post(z.f_part, *alpha_inv, p.beta)};
  return {moved.chi - z.chi, moved.f_part - z.f_part};
}

/// Compatibility, and when compatible a lambda : A -> M solving the inducibility equations,
/// found as lambda = g alpha from (chi_(beta,alpha), F_(beta,alpha)) - (chi, F) = delta_NAlg(g).
inline WellsResult wells_obstruction(const Extension& e, const AutoPair& p) {
  require_ok(verify_auto_pair(e, p), "automorphism pair");
  WellsResult w;
  w.compatibility = verify_compatible(e, p);
  w.compatible = w.compatibility.ok();
  if (!w.compatible) return w;
  const std::size_t d = e.base.dim(), m = e.fiber.dim();
  Cocycle2 diff = wells_cocycle(e, p);
  auto g = solve(cone_reduced_matrix(e.base, e.fiber, 1), diff.to_vector());
  w.obstruction_trivial = g.has_value();
  if (g) w.lambda = detail::degree_one_map(d, m, *g) * p.alpha;
  return w;
}

/// The two inducibility equations for a given lambda, checked on basis elements.
inline Report verify_lambda(const Extension& e, const AutoPair& p, const Matrix& lambda) {
  const std::size_t d = e.base.dim(), m = e.fiber.dim();
  require_shape(lambda, m, d, "lambda");
  Cocycle2 z = cocycle_from_extension(e, e.section);
  const Bimodule& b = e.fiber.bimodule;
  const Algebra& a = e.base.algebra;
  MultiMap chi_aa = pre_post(z.chi, p.alpha, Matrix::identity(m));
  MultiMap f_a = pre_post(z.f_part, p.alpha, Matrix::identity(m));
  Report r;
  r.add_law("lambda-product");
  r.add_law("lambda-operator");
  for (std::size_t i = 0; i < d; ++i) {
    Vector ei = unit_vector(d, i);
    for (std::size_t j = 0; j < d; ++j) {
      Vector ej = unit_vector(d, j);
      Vector lhs = vector_sub(p.beta.apply(z.chi.on_basis(i * d + j)), chi_aa.on_basis(i * d + j));
      Vector rhs = vector_sub(vector_add(b.act_left(p.alpha.column(i), lambda.column(j)),
                                         b.act_right(lambda.column(i), p.alpha.column(j))),
                              lambda.apply(a.multiply(ei, ej)));
      r.check("lambda-product", {i, j}, lhs, rhs);
    }
    Vector lhs = vector_sub(p.beta.apply(z.f_part.on_basis(i)), f_a.on_basis(i));
    Vector rhs = vector_sub(e.fiber.op.apply(lambda.column(i)), lambda.apply(e.base.op.column(i)));
    r.check("lambda-operator", {i}, lhs, rhs);
  }
  return r;
}

/// phi(s(a) + u) = s(alpha a) + beta(u) + lambda(a), verified as an automorphism preserving M.
inline Matrix induce_automorphism(const Extension& e, const AutoPair& p, const Matrix& lambda) {
  require_ok(verify_auto_pair(e, p), "automorphism pair");
  require_ok(verify_compatible(e, p), "compatibility");
  require_ok(verify_lambda(e, p, lambda), "lambda");
  const std::size_t d = e.base.dim(), m = e.fiber.dim();
  Matrix q(d + m, d + m), block(d + m, d + m);
  for (std::size_t r = 0; r < d + m; ++r) {
    for (std::size_t c = 0; c < d; ++c) q(r, c) = e.section(r, c);
    for (std::size_t c = 0; c < m; ++c) q(r, d + c) = e.incl(r, c);
  }
  for (std::size_t r = 0; r < d; ++r)
    for (std::size_t c = 0; c < d; ++c) block(r, c) = p.alpha(r, c);
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t c = 0; c < d; ++c) block(d + r, c) = lambda(r, c);
    for (std::size_t c = 0; c < m; ++c) block(d + r, d + c) = p.beta(r, c);
  }
  Matrix phi = q * block * detail::coordinates(e);
  require_constructed(verify_nij_morphism(e.total, e.total, phi), "induced automorphism");
  if (!inverse(phi)) throw InternalError("induced map is not invertible");
  return phi;
}

/// tau(phi) = (phi restricted to M, p phi s).
inline AutoPair restrict_automorphism(const Extension& e, const Matrix& phi, const Matrix& s) {
  const std::size_t d = e.base.dim(), m = e.fiber.dim();
  require_shape(phi, d + m, d + m, "automorphism");
  require_ok(verify_nij_morphism(e.total, e.total, phi), "automorphism");
  if (!inverse(phi)) throw StructureError("map is not invertible");
  if (!(e.proj * s == Matrix::identity(d))) throw StructureError("map is not a section of the projection");
  if (!(e.proj * phi * e.incl).is_zero()) throw StructureError("automorphism does not preserve M");
  Extension with_s = e;
  with_s.section = s;
  Matrix fiber_coords = detail::rows_of(detail::coordinates(with_s), d, m);
  return {fiber_coords * phi * e.incl, e.proj * phi * s};
}

inline AutoPair restrict_automorphism(const Extension& e, const Matrix& phi) {
  return restrict_automorphism(e, phi, e.section);
}

/// Basis of Z^1: maps g : A -> M with delta_Hoch g = 0 and partial g = 0.
inline std::vector<Matrix> z1_derivations(const NijAlgebra& na, const NijBimodule& nb) {
  require_nij_pair(na, nb);
  std::vector<Matrix> out;
  for (const auto& v : kernel_basis(cone_reduced_matrix(na, nb, 1)))
    out.push_back(detail::degree_one_map(na.dim(), nb.dim(), v));
  return out;
}

/// The map d-underline: s(a) + u -> s(a) + u + d(a).
inline Matrix underline(const Extension& e, const Matrix& dmap) {
  const std::size_t d = e.base.dim(), m = e.fiber.dim();
  return Matrix::identity(d + m) + e.incl * dmap * e.proj;
}

/// Basis of {X : phi = Id + X is an automorphism fixing M pointwise and inducing Id on A},
/// solved directly as a linear system in the entries of X.
inline std::vector<Matrix> fixing_automorphism_directions(const Extension& e) {
  const std::size_t d = e.base.dim(), m = e.fiber.dim(), n = d + m;
  const Algebra& E = e.total.algebra;
  const Matrix& ne = e.total.op;
  // Unknown X(r, c) at index r * n + c.
  std::vector<Triplet> t;
  std::size_t row = 0;
  auto x = [n](std::size_t r, std::size_t c) { return r * n + c; };
  // X i = 0.
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t u = 0; u < m; ++u, ++row)
      for (std::size_t c = 0; c < n; ++c)
        if (!nij::is_zero(e.incl(c, u))) t.push_back({row, x(r, c), e.incl(c, u)});
  // p X = 0.
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t c = 0; c < n; ++c, ++row)
      for (std::size_t r = 0; r < n; ++r)
        if (!nij::is_zero(e.proj(a, r))) t.push_back({row, x(r, c), e.proj(a, r)});
  // X(e_i e_j) - e_i X(e_j) - X(e_i) e_j = 0.
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k, ++row) {
        for (std::size_t l = 0; l < n; ++l) {
          if (!nij::is_zero(E.c(i, j, l))) t.push_back({row, x(k, l), E.c(i, j, l)});
          if (!nij::is_zero(E.c(i, l, k))) t.push_back({row, x(l, j), -E.c(i, l, k)});
          if (!nij::is_zero(E.c(l, j, k))) t.push_back({row, x(l, i), -E.c(l, j, k)});
        }
      }
  // N_E X - X N_E = 0.
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c, ++row)
      for (std::size_t l = 0; l < n; ++l) {
        if (!nij::is_zero(ne(r, l))) t.push_back({row, x(l, c), ne(r, l)});
        if (!nij::is_zero(ne(l, c))) t.push_back({row, x(r, l), -ne(l, c)});
      }
  SparseMatrix sys = SparseMatrix::from_triplets(row, n * n, std::move(t));
  std::vector<Matrix> out;
  for (const auto& v : kernel_basis(sys)) {
    Matrix xm(n, n);
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c) xm(r, c) = v[x(r, c)];
    out.push_back(xm);
  }
  return out;
}

}  // namespace nij
