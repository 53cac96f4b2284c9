#include <catch_amalgamated.hpp>

#include "nijenhuis/complexes.hpp"
#include "constructions.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace nij;
using namespace testing_support;

namespace {

const std::vector<ComplexKind> all_kinds{ComplexKind::hochschild,   ComplexKind::operator_,
                                         ComplexKind::relative_operator, ComplexKind::cone_full,
                                         ComplexKind::cone_reduced, ComplexKind::ns_shifted};

ComplexInput input(const Fixture& fx) { return {fx.na, fx.nb}; }

}  // namespace

TEST_CASE("every builder squares to zero on every fixture") {
  for (const auto& fx : all_fixtures())
    for (auto kind : all_kinds) {
      std::size_t n_max = fx.na.dim() > 3 ? 2 : 3;
      CochainComplex c = build_complex(kind, input(fx), n_max);
      INFO(fx.name << " " << kind_name(kind));
      CHECK_FALSE(c.square_defect().has_value());
      CHECK(c.diffs.size() == n_max + 1);
      for (std::size_t n = 0; n <= n_max; ++n) {
        CHECK(c.diffs[n].cols() == c.dims[n]);
        CHECK(c.diffs[n].rows() == c.dims[n + 1]);
      }
    }
}

TEST_CASE("degree range is checked") {
  ComplexInput in{k2(), adjoint_bimodule(k2())};
  CHECK_THROWS_AS(build_complex(ComplexKind::hochschild, in, 0), StructureError);
  CHECK_THROWS_AS(build_complex(ComplexKind::hochschild, in, 5), StructureError);
  CHECK_NOTHROW(build_complex(ComplexKind::hochschild, in, 5, 5));
  CHECK(parse_kind("relative-operator") == ComplexKind::relative_operator);
  CHECK_THROWS_AS(parse_kind("bogus"), StructureError);
}

TEST_CASE("unverified structures are rejected") {
  Matrix swap(2, 2);
  swap(0, 1) = 1;
  swap(1, 0) = 1;
  NijAlgebra bad{k2_algebra(), swap};
  CHECK_THROWS_AS(operator_complex(bad, 2), StructureError);
  CHECK_THROWS_AS(relative_complex(bad, adjoint_bimodule(bad), 2), StructureError);
}

TEST_CASE("identity operator: zero differentials and full cohomology") {
  for (const Algebra& a : {k2_algebra(), t3_algebra()}) {
    CochainComplex c = operator_complex({a, Matrix::identity(a.dim())}, 3);
    for (const auto& dm : c.diffs) CHECK(dm.is_zero());
    CohomologyReport h = cohomology(c);
    for (std::size_t n = 1; n <= 3; ++n) CHECK(h.betti(n) == ipow(a.dim(), n + 1));
  }
}

TEST_CASE("operator complex of K2 with diag(1,0)") {
  CohomologyReport h = cohomology(operator_complex(k2(), 3));
  CHECK(h.betti(0) == 2);
  SparseMatrix d0 = oracle_matrix(0, 2, 2, [](const MultiMap& f) {
    NijAlgebra na = k2();
    return oracle::relative(na, adjoint_bimodule(na), f);
  });
  CHECK(rank(d0) == 0);
}

TEST_CASE("Hochschild cohomology of K2") {
  NijAlgebra na = k2();
  CochainComplex c = hochschild_complex(na.algebra, Bimodule::adjoint(na.algebra), 3);
  CohomologyReport h = cohomology(c);
  CHECK(h.betti(0) == 2);
  for (std::size_t n = 1; n <= 3; ++n) CHECK(h.betti(n) == 0);
  // Independent count from pointwise matrices.
  Bimodule adj = Bimodule::adjoint(na.algebra);
  std::vector<std::size_t> ranks;
  for (std::size_t n = 0; n <= 3; ++n)
    ranks.push_back(rank(oracle_matrix(n, 2, 2, [&](const MultiMap& f) {
      return oracle::hochschild(na.algebra, adj, f);
    })));
  CHECK(ipow(2, 1) - ranks[0] == 2);
  for (std::size_t n = 1; n <= 3; ++n) CHECK(ipow(2, n + 1) - ranks[n] - ranks[n - 1] == 0);
}

TEST_CASE("builders agree with the pointwise oracle") {
  for (const auto& na : {k2(), t3()}) {
    const std::size_t d = na.dim();
    NijBimodule nb = adjoint_bimodule(na);
    for (std::size_t n = 0; n <= 2; ++n) {
      INFO("degree " << n);
      CHECK(hochschild_matrix(na.algebra, nb.bimodule, n) ==
            oracle_matrix(n, d, d, [&](const MultiMap& f) { return oracle::hochschild(na.algebra, nb.bimodule, f); }));
      CHECK(relative_matrix(na, nb, n) ==
            oracle_matrix(n, d, d, [&](const MultiMap& f) { return oracle::relative(na, nb, f); }));
      CHECK(partial_matrix(na, nb, n) ==
            oracle_matrix(n, d, d, [&](const MultiMap& f) { return oracle::partial(na, nb, f); }));
      if (n >= 1)
        CHECK(operator_matrix(na, n) == oracle_matrix(n, d, d, [&](const MultiMap& f) {
                return oracle::fn_bracket(na.algebra, MultiMap::from_matrix(na.op), f);
              }));
    }
    LabeledCochain pi = LabeledCochain::from_ns(induced_ns(na));
    for (std::size_t n = 1; n <= 2; ++n) {
      std::vector<Vector> cols;
      const std::size_t size = ns_labels(n) * ipow(d, n + 1);
      for (std::size_t j = 0; j < size; ++j) {
        Vector e(size);
        e[j] = 1;
        LabeledCochain f = LabeledCochain::from_vector(n, d, e);
        Scalar s = n % 2 == 1 ? 1 : -1;
        cols.push_back((s * oracle::ns_bracket(pi, f)).to_vector());
      }
      CHECK(ns_matrix(pi, n) == SparseMatrix::from_columns(ns_labels(n + 1) * ipow(d, n + 2), cols));
    }
  }
}

TEST_CASE("cone-reduced blocks contain the Hochschild differentials") {
  NijAlgebra na = k2();
  NijBimodule nb = adjoint_bimodule(na);
  CochainComplex cone = cone_reduced_complex(na, nb, 3);
  CochainComplex hoch = hochschild_complex(na.algebra, nb.bimodule, 3);
  for (std::size_t n = 1; n <= 3; ++n) {
    const SparseMatrix& h = hoch.diffs[n];
    CHECK(sub_block(cone.diffs[n], 0, h.rows(), 0, h.cols()) == h);
  }
  CHECK(sub_block(cone.diffs[1], 8, 4, 0, 4) == Scalar(-1) * partial_matrix(na, nb, 1));
}

TEST_CASE("partial map examples") {
  NijAlgebra t = t3();
  NijBimodule tb = adjoint_bimodule(t);
  CHECK(MultiMap::from_sparse(1, 3, 3, cochain::partial(MultiMap::identity(3).sparse(), 1, t, tb)).is_zero());
  NijAlgebra k = k2();
  SparseVec u{{0, Scalar(3)}, {1, Scalar(-1)}};
  CHECK(cochain::partial(u, 0, k, adjoint_bimodule(k)) == u);
  MultiMap dmu = MultiMap::from_sparse(2, 2, 2, cochain::partial(MultiMap::product(k.algebra).sparse(), 2, k,
                                                                   adjoint_bimodule(k)));
  CHECK(dmu.is_zero());
}

TEST_CASE("partial is a chain map from Hochschild to the relative complex") {
  for (const auto& fx : all_fixtures())
    for (std::size_t n = 0; n <= (fx.na.dim() > 3 ? 2u : 3u); ++n) {
      INFO(fx.name << " degree " << n);
      CHECK(relative_matrix(fx.na, fx.nb, n) * partial_matrix(fx.na, fx.nb, n) ==
            partial_matrix(fx.na, fx.nb, n + 1) * hochschild_matrix(fx.na.algebra, fx.nb.bimodule, n));
    }
}

TEST_CASE("full and reduced cones agree from degree 3") {
  for (const auto& fx : all_fixtures()) {
    if (fx.na.dim() > 3) continue;
    CohomologyReport full = cohomology(cone_full_complex(fx.na, fx.nb, 3));
    CohomologyReport red = cohomology(cone_reduced_complex(fx.na, fx.nb, 3));
    CHECK(full.betti(3) == red.betti(3));
    for (const auto& h : full.degrees) CHECK(h.nullity >= (h.degree ? full.degrees[h.degree - 1].rank : 0));
  }
}

TEST_CASE("cocycles and coboundary witnesses") {
  std::mt19937 rng(41);
  NijAlgebra na = t3();
  CochainComplex c = cone_reduced_complex(na, adjoint_bimodule(na), 3);
  CHECK(is_cocycle(c, 2, Vector(c.dims[2])));
  CHECK(coboundary_witness(c, 2, Vector(c.dims[2])).has_value());
  for (std::size_t n = 1; n <= 3; ++n) {
    Vector w = random_vector(rng, c.dims[n - 1]);
    Vector v = c.diffs[n - 1].apply(w);
    CHECK(is_cocycle(c, n, v));
    auto witness = coboundary_witness(c, n, v);
    REQUIRE(witness.has_value());
    CHECK(c.diffs[n - 1].apply(*witness) == v);
  }
  Vector v;
  do v = random_vector(rng, c.dims[2]);
  while (all_zero(c.diffs[2].apply(v)));
  CHECK_FALSE(is_cocycle(c, 2, v));
  CHECK_THROWS_AS(coboundary_witness(c, 2, v), StructureError);
  CHECK_THROWS_AS(is_cocycle(c, 2, Vector(3)), StructureError);
}

TEST_CASE("nonzero classes have no witness") {
  bool found = false;
  for (const auto& fx : all_fixtures()) {
    if (fx.na.dim() > 3) continue;
    CochainComplex c = cone_reduced_complex(fx.na, fx.nb, 2);
    if (cohomology(c).betti(2) == 0) continue;
    for (const auto& z : kernel_basis(c.diffs[2]))
      if (!coboundary_witness(c, 2, z)) {
        found = true;
        break;
      }
  }
  CHECK(found);
}

TEST_CASE("long exact sequence") {
  NijAlgebra k = k2();
  CHECK(les_report(k, adjoint_bimodule(k), 3).exact());
  NijAlgebra id{t3_algebra(), Matrix::identity(3)};
  CHECK(les_report(id, adjoint_bimodule(id), 3).exact());
  NijBimodule zero{Bimodule::zero(2, 0), Matrix(0, 0)};
  LesReport z = les_report(k, zero, 3);
  CHECK(z.exact());
  for (const auto& node : z.nodes) CHECK(node.dim == 0);
  for (const auto& fx : all_fixtures()) {
    LesReport r = les_report(fx.na, fx.nb, fx.na.dim() > 3 ? 2 : 3);
    INFO(fx.name);
    CHECK(r.exact());
    CHECK_FALSE(r.nodes.empty());
  }
}
