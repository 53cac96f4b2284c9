#pragma once

#include <cstddef>
#include <future>
#include <optional>
#include <string>
#include <vector>

#include "core.hpp"
#include "nsalg.hpp"
#include "sign.hpp"
#include "sparse.hpp"
#include "tensor.hpp"

namespace nij {

enum class ComplexKind { hochschild, operator_, relative_operator, cone_full, cone_reduced, ns_shifted };

inline std::string kind_name(ComplexKind k) {
  switch (k) {
    case ComplexKind::hochschild: return "hochschild";
    case ComplexKind::operator_: return "operator";
    case ComplexKind::relative_operator: return "relative-operator";
    case ComplexKind::cone_full: return "cone-full";
    case ComplexKind::cone_reduced: return "cone-reduced";
    case ComplexKind::ns_shifted: return "ns-shifted";
  }
  throw InternalError("unknown complex kind");
}

inline ComplexKind parse_kind(const std::string& s) {
  for (auto k : {ComplexKind::hochschild, ComplexKind::operator_, ComplexKind::relative_operator,
                 ComplexKind::cone_full, ComplexKind::cone_reduced, ComplexKind::ns_shifted})
    if (kind_name(k) == s) return k;
  throw StructureError("unknown complex kind '" + s + "'");
}

inline constexpr std::size_t default_degree_cap = 4;

/// Spaces C^0..C^{n_max+1} and differentials D_n : C^n -> C^{n+1} for n = 0..n_max.
struct CochainComplex {
  ComplexKind kind = ComplexKind::hochschild;
  std::vector<std::size_t> dims;
  std::vector<SparseMatrix> diffs;

  std::size_t n_max() const { return diffs.size() - 1; }

  /// First n with D_{n+1} D_n != 0, if any.
  std::optional<std::size_t> square_defect() const {
    for (std::size_t n = 0; n + 1 < diffs.size(); ++n)
      if (!(diffs[n + 1] * diffs[n]).is_zero()) return n;
    return std::nullopt;
  }
};

namespace detail {

/// Matrix of a linear operation on sparse cochain vectors, one basis vector per column.
template <class Op>
SparseMatrix matrix_of(std::size_t rows, std::size_t cols, Op op) {
  std::vector<Triplet> t;
  for (std::size_t j = 0; j < cols; ++j)
    for (auto& [i, v] : op(SparseVec{{j, Scalar(1)}})) t.push_back({i, j, std::move(v)});
  return SparseMatrix::from_triplets(rows, cols, std::move(t));
}

inline void check_range(std::size_t n_max, std::size_t cap) {
  if (n_max < 1) throw StructureError("max degree must be at least 1");
  if (n_max > cap)
    throw StructureError("max degree " + std::to_string(n_max) + " exceeds the cap " + std::to_string(cap));
}

/// Builds D_0..D_{n_max} concurrently, one task per degree.
template <class Diff>
std::vector<SparseMatrix> per_degree(std::size_t n_max, Diff diff) {
  std::vector<std::future<SparseMatrix>> jobs;
  for (std::size_t n = 0; n <= n_max; ++n) jobs.push_back(std::async(std::launch::async, diff, n));
  std::vector<SparseMatrix> out;
  for (auto& j : jobs) out.push_back(j.get());
  return out;
}

}  // namespace detail

/// delta_Hoch : Hom(A^n, M) -> Hom(A^{n+1}, M).
inline SparseMatrix hochschild_matrix(const Algebra& a, const Bimodule& b, std::size_t n) {
  const std::size_t d = a.dim(), m = b.dim();
  return detail::matrix_of(ipow(d, n + 1) * m, ipow(d, n) * m,
                           [&](const SparseVec& f) { return cochain::hochschild(f, n, a, b); });
}

/// d_N on Hom(A^n, A), including the degree-0 map.
inline SparseMatrix operator_matrix(const NijAlgebra& na, std::size_t n) {
  const std::size_t d = na.dim();
  return detail::matrix_of(ipow(d, n + 2), ipow(d, n + 1),
                           [&](const SparseVec& f) { return cochain::operator_differential(f, n, na); });
}

/// d_{N,N_M} : Hom(A^n, M) -> Hom(A^{n+1}, M).
inline SparseMatrix relative_matrix(const NijAlgebra& na, const NijBimodule& nb, std::size_t n) {
  const std::size_t d = na.dim(), m = nb.dim();
  return detail::matrix_of(ipow(d, n + 1) * m, ipow(d, n) * m,
                           [&](const SparseVec& f) { return cochain::relative(f, n, na, nb); });
}

/// partial^{N,N_M} : Hom(A^n, M) -> Hom(A^n, M).
inline SparseMatrix partial_matrix(const NijAlgebra& na, const NijBimodule& nb, std::size_t n) {
  const std::size_t size = ipow(na.dim(), n) * nb.dim();
  return detail::matrix_of(size, size, [&](const SparseVec& f) { return cochain::partial(f, n, na, nb); });
}

/// delta_pi : O_A(n) -> O_A(n+1) for n >= 1, with the flat layout of LabeledCochain.
inline SparseMatrix ns_matrix(const LabeledCochain& pi, std::size_t n) {
  const std::size_t d = pi.dim();
  labeled::Components p = labeled::split(pi);
  const std::size_t src_block = ipow(d, n + 1), dst_block = ipow(d, n + 2);
  return detail::matrix_of(ns_labels(n + 1) * dst_block, ns_labels(n) * src_block, [&](const SparseVec& v) {
    labeled::Components f(ns_labels(n));
    f[v.front().first / src_block].emplace_back(v.front().first % src_block, v.front().second);
    labeled::Components img = labeled::differential(p, f, n, d);
    SparseVec out;
    for (std::size_t r = 0; r < img.size(); ++r)
      for (const auto& [i, x] : img[r]) out.emplace_back(r * dst_block + i, x);
    return out;
  });
}

inline CochainComplex hochschild_complex(const Algebra& a, const Bimodule& b, std::size_t n_max,
                                         std::size_t cap = default_degree_cap) {
  detail::check_range(n_max, cap);
  require_ok(verify_algebra(a), "algebra");
  require_ok(verify_bimodule(a, b), "bimodule");
  CochainComplex c{ComplexKind::hochschild, {}, {}};
  for (std::size_t n = 0; n <= n_max + 1; ++n) c.dims.push_back(ipow(a.dim(), n) * b.dim());
  c.diffs = detail::per_degree(n_max, [&](std::size_t n) { return hochschild_matrix(a, b, n); });
  return c;
}

inline CochainComplex operator_complex(const NijAlgebra& na, std::size_t n_max,
                                       std::size_t cap = default_degree_cap) {
  detail::check_range(n_max, cap);
  require_ok(verify_nij_algebra(na), "Nijenhuis algebra");
  CochainComplex c{ComplexKind::operator_, {}, {}};
  for (std::size_t n = 0; n <= n_max + 1; ++n) c.dims.push_back(ipow(na.dim(), n + 1));
  c.diffs = detail::per_degree(n_max, [&](std::size_t n) { return operator_matrix(na, n); });
  return c;
}

inline void require_nij_pair(const NijAlgebra& na, const NijBimodule& nb) {
  require_ok(verify_nij_algebra(na), "Nijenhuis algebra");
  require_ok(verify_nij_bimodule(na, nb), "Nijenhuis bimodule");
}

inline CochainComplex relative_complex(const NijAlgebra& na, const NijBimodule& nb, std::size_t n_max,
                                       std::size_t cap = default_degree_cap) {
  detail::check_range(n_max, cap);
  require_nij_pair(na, nb);
  CochainComplex c{ComplexKind::relative_operator, {}, {}};
  for (std::size_t n = 0; n <= n_max + 1; ++n) c.dims.push_back(ipow(na.dim(), n) * nb.dim());
  c.diffs = detail::per_degree(n_max, [&](std::size_t n) { return relative_matrix(na, nb, n); });
  return c;
}

namespace detail {

/// Cone differential on C^n_Hoch (+) C^{n-1}(N;N_M): [[delta, 0], [(-1)^n partial, d]].
/// For n = 0 the second summand is absent.
inline SparseMatrix cone_block(const NijAlgebra& na, const NijBimodule& nb, std::size_t n) {
  const std::size_t d = na.dim(), m = nb.dim();
  SparseMatrix delta = hochschild_matrix(na.algebra, nb.bimodule, n);
  SparseMatrix part = Scalar(sign::cone(static_cast<int>(n))) * partial_matrix(na, nb, n);
  if (n == 0) return block_matrix({ipow(d, 1) * m, m}, {m}, {{&delta}, {&part}});
  SparseMatrix rel = relative_matrix(na, nb, n - 1);
  return block_matrix({ipow(d, n + 1) * m, ipow(d, n) * m}, {ipow(d, n) * m, ipow(d, n - 1) * m},
                      {{&delta, nullptr}, {&part, &rel}});
}

inline std::size_t cone_dim(std::size_t d, std::size_t m, std::size_t n) {
  return ipow(d, n) * m + (n == 0 ? 0 : ipow(d, n - 1) * m);
}

}  // namespace detail

/// delta_NAlg in degree n; C^1 = Hom(A, M) and D_1(f) = (delta f, -partial f).
inline SparseMatrix cone_reduced_matrix(const NijAlgebra& na, const NijBimodule& nb, std::size_t n) {
  const std::size_t dm = na.dim() * nb.dim();
  if (n == 0) return SparseMatrix(dm, 0);
  if (n >= 2) return detail::cone_block(na, nb, n);
  SparseMatrix full = detail::cone_block(na, nb, 1);
  return sub_block(full, 0, full.rows(), 0, dm);
}

/// C^0 = M, C^n = Hom(A^n, M) (+) Hom(A^{n-1}, M).
inline CochainComplex cone_full_complex(const NijAlgebra& na, const NijBimodule& nb, std::size_t n_max,
                                        std::size_t cap = default_degree_cap) {
  detail::check_range(n_max, cap);
  require_nij_pair(na, nb);
  CochainComplex c{ComplexKind::cone_full, {}, {}};
  for (std::size_t n = 0; n <= n_max + 1; ++n) c.dims.push_back(detail::cone_dim(na.dim(), nb.dim(), n));
  c.diffs = detail::per_degree(n_max, [&](std::size_t n) { return detail::cone_block(na, nb, n); });
  return c;
}

/// C^0 = 0, C^1 = Hom(A, M), C^n as in the full cone for n >= 2; D_1(f) = (delta f, -partial f).
inline CochainComplex cone_reduced_complex(const NijAlgebra& na, const NijBimodule& nb, std::size_t n_max,
                                           std::size_t cap = default_degree_cap) {
  detail::check_range(n_max, cap);
  require_nij_pair(na, nb);
  const std::size_t d = na.dim(), m = nb.dim();
  CochainComplex c{ComplexKind::cone_reduced, {}, {}};
  c.dims.push_back(0);
  c.dims.push_back(d * m);
  for (std::size_t n = 2; n <= n_max + 1; ++n) c.dims.push_back(detail::cone_dim(d, m, n));
  c.diffs = detail::per_degree(n_max, [&](std::size_t n) { return cone_reduced_matrix(na, nb, n); });
  return c;
}

/// C^0 = 0, C^n = O_A(n) with delta_pi.
inline CochainComplex ns_shifted_complex(const NSAlgebra& ns, std::size_t n_max,
                                         std::size_t cap = default_degree_cap) {
  detail::check_range(n_max, cap);
  require_ok(verify_ns(ns), "NS-algebra");
  LabeledCochain pi = LabeledCochain::from_ns(ns);
  const std::size_t d = ns.dim();
  CochainComplex c{ComplexKind::ns_shifted, {}, {}};
  c.dims.push_back(0);
  for (std::size_t n = 1; n <= n_max + 1; ++n) c.dims.push_back(ns_labels(n) * ipow(d, n + 1));
  c.diffs = detail::per_degree(n_max, [&](std::size_t n) {
    if (n == 0) return SparseMatrix(d * d, 0);
    return ns_matrix(pi, n);
  });
  return c;
}

/// Structures a complex may need; which fields are read depends on the kind.
struct ComplexInput {
  NijAlgebra na;
  NijBimodule nb;
};

inline CochainComplex build_complex(ComplexKind kind, const ComplexInput& in, std::size_t n_max,
                                    std::size_t cap = default_degree_cap) {
  switch (kind) {
    case ComplexKind::hochschild: return hochschild_complex(in.na.algebra, in.nb.bimodule, n_max, cap);
    case ComplexKind::operator_: return operator_complex(in.na, n_max, cap);
    case ComplexKind::relative_operator: return relative_complex(in.na, in.nb, n_max, cap);
    case ComplexKind::cone_full: return cone_full_complex(in.na, in.nb, n_max, cap);
    case ComplexKind::cone_reduced: return cone_reduced_complex(in.na, in.nb, n_max, cap);
    case ComplexKind::ns_shifted: return ns_shifted_complex(induced_ns(in.na), n_max, cap);
  }
  throw InternalError("unknown complex kind");
}

struct DegreeCohomology {
  std::size_t degree = 0;
  std::size_t dim = 0;
  std::size_t rank = 0;
  std::size_t nullity = 0;
  std::size_t betti = 0;
};

struct CohomologyReport {
  ComplexKind kind = ComplexKind::hochschild;
  std::string fixture;
  std::vector<DegreeCohomology> degrees;

  std::size_t betti(std::size_t n) const { return degrees.at(n).betti; }
};

inline CohomologyReport cohomology(const CochainComplex& c, const std::string& fixture = "") {
  std::vector<std::future<std::size_t>> jobs;
  for (const auto& d : c.diffs) jobs.push_back(std::async(std::launch::async, [&d] { return rank(d); }));
  CohomologyReport r{c.kind, fixture, {}};
  std::size_t prev = 0;
  for (std::size_t n = 0; n < c.diffs.size(); ++n) {
    DegreeCohomology h;
    h.degree = n;
    h.dim = c.dims[n];
    h.rank = jobs[n].get();
    h.nullity = h.dim - h.rank;
    if (h.nullity < prev) throw InternalError("negative Betti number: complex is not a complex");
    h.betti = h.nullity - prev;
    r.degrees.push_back(h);
    prev = h.rank;
  }
  return r;
}

namespace detail {

inline void check_degree(const CochainComplex& c, std::size_t n, const Vector& v) {
  if (n >= c.diffs.size())
    throw StructureError("degree " + std::to_string(n) + " is beyond the built range");
  if (v.size() != c.dims[n])
    throw StructureError("cochain has length " + std::to_string(v.size()) + ", degree " + std::to_string(n) +
                         " needs " + std::to_string(c.dims[n]));
}

}  // namespace detail

inline bool is_cocycle(const CochainComplex& c, std::size_t n, const Vector& v) {
  detail::check_degree(c, n, v);
  return all_zero(c.diffs[n].apply(v));
}

/// Some w with D_{n-1} w = v, or none when v is a cocycle outside the image.
inline std::optional<Vector> coboundary_witness(const CochainComplex& c, std::size_t n, const Vector& v) {
  if (!is_cocycle(c, n, v)) throw StructureError("cochain is not a cocycle");
  if (n == 0) return all_zero(v) ? std::optional<Vector>(Vector{}) : std::nullopt;
  return solve(c.diffs[n - 1], v);
}

/// One node of the long exact sequence with the ranks of the maps into and out of it.
struct LesNode {
  std::string space;
  std::size_t degree = 0;
  std::size_t dim = 0;
  std::size_t rank_in = 0;
  std::size_t rank_out = 0;
  bool composite_zero = true;
  bool exact() const { return composite_zero && rank_in + rank_out == dim; }
};

struct LesReport {
  std::vector<LesNode> nodes;
  std::vector<std::string> notes;
  bool exact() const {
    for (const auto& n : nodes)
      if (!n.exact()) return false;
    return true;
  }
};

namespace detail {

/// Cohomology data of one degree: cocycle basis and coboundary matrix.
struct Homology {
  std::vector<Vector> cycles;
  SparseMatrix boundaries;
  std::size_t boundary_rank = 0;
  std::size_t dim() const { return cycles.size() - boundary_rank; }
};

inline Homology homology_at(const CochainComplex& c, std::size_t n) {
  Homology h;
  h.cycles = kernel_basis(c.diffs.at(n));
  h.boundaries = n == 0 ? SparseMatrix(c.dims[0], 0) : c.diffs[n - 1];
  h.boundary_rank = rank(h.boundaries);
  return h;
}

/// Rank of the map induced on cohomology by a chain-level map f from src to dst.
inline std::size_t induced_rank(const SparseMatrix& f, const Homology& src, const Homology& dst) {
  std::vector<Vector> images;
  for (const auto& z : src.cycles) images.push_back(f.apply(z));
  SparseMatrix img = SparseMatrix::from_columns(f.rows(), images);
  return rank(hstack(img, dst.boundaries)) - dst.boundary_rank;
}

/// Whether g o f vanishes on cohomology.
inline bool composite_vanishes(const SparseMatrix& g, const SparseMatrix& f, const Homology& src,
                               const Homology& dst) {
  return induced_rank(g * f, src, dst) == 0;
}

inline SparseMatrix embed_second(std::size_t first, std::size_t second) {
  std::vector<Triplet> t;
  for (std::size_t i = 0; i < second; ++i) t.push_back({first + i, i, Scalar(1)});
  return SparseMatrix::from_triplets(first + second, second, std::move(t));
}

inline SparseMatrix project_first(std::size_t first, std::size_t second) {
  std::vector<Triplet> t;
  for (std::size_t i = 0; i < first; ++i) t.push_back({i, i, Scalar(1)});
  return SparseMatrix::from_triplets(first, first + second, std::move(t));
}

}  // namespace detail

/// Exactness of ... -> H^{n-1}(N;N_M) -i-> H^n_cone -p-> H^n_Hoch -c-> H^n(N;N_M) -> ...
/// for n <= n_max - 1, with c the zig-zag connecting map (-1)^n partial.
inline LesReport les_report(const NijAlgebra& na, const NijBimodule& nb, std::size_t n_max,
                            std::size_t cap = default_degree_cap) {
  CochainComplex rel = relative_complex(na, nb, n_max, cap);
  CochainComplex cone = cone_full_complex(na, nb, n_max, cap);
  CochainComplex hoch = hochschild_complex(na.algebra, nb.bimodule, n_max, cap);
  const std::size_t d = na.dim(), m = nb.dim();
  LesReport report;
  report.notes.push_back("connecting map built by the zig-zag (chi, 0) -> (-1)^n partial(chi)");

  std::vector<detail::Homology> h_rel, h_cone, h_hoch;
  for (std::size_t n = 0; n <= n_max; ++n) {
    h_rel.push_back(detail::homology_at(rel, n));
    h_cone.push_back(detail::homology_at(cone, n));
    h_hoch.push_back(detail::homology_at(hoch, n));
  }
  auto incl = [&](std::size_t n) { return detail::embed_second(ipow(d, n) * m, ipow(d, n - 1) * m); };
  auto proj = [&](std::size_t n) {
    return detail::project_first(ipow(d, n) * m, n == 0 ? 0 : ipow(d, n - 1) * m);
  };
  auto conn = [&](std::size_t n) { return Scalar(sign::cone(static_cast<int>(n))) * partial_matrix(na, nb, n); };

  for (std::size_t n = 0; n + 1 <= n_max; ++n) {
    if (n >= 1) {
      // H^{n-1}(N;N_M): in from c_{n-1}, out to i_n.
      LesNode node{"relative", n - 1, h_rel[n - 1].dim()};
      SparseMatrix c_prev = conn(n - 1), i_n = incl(n);
      node.rank_in = detail::induced_rank(c_prev, h_hoch[n - 1], h_rel[n - 1]);
      node.rank_out = detail::induced_rank(i_n, h_rel[n - 1], h_cone[n]);
      node.composite_zero = detail::composite_vanishes(i_n, c_prev, h_hoch[n - 1], h_cone[n]);
      report.nodes.push_back(node);
    }
    {
      LesNode node{"cone", n, h_cone[n].dim()};
      SparseMatrix p_n = proj(n);
      node.rank_out = detail::induced_rank(p_n, h_cone[n], h_hoch[n]);
      if (n >= 1) {
        SparseMatrix i_n = incl(n);
        node.rank_in = detail::induced_rank(i_n, h_rel[n - 1], h_cone[n]);
        node.composite_zero = detail::composite_vanishes(p_n, i_n, h_rel[n - 1], h_hoch[n]);
      }
      report.nodes.push_back(node);
    }
    {
      LesNode node{"hochschild", n, h_hoch[n].dim()};
      SparseMatrix p_n = proj(n), c_n = conn(n);
      node.rank_in = detail::induced_rank(p_n, h_cone[n], h_hoch[n]);
      node.rank_out = detail::induced_rank(c_n, h_hoch[n], h_rel[n]);
      node.composite_zero = detail::composite_vanishes(c_n, p_n, h_cone[n], h_rel[n]);
      report.nodes.push_back(node);
    }
  }
  return report;
}

}  // namespace nij
