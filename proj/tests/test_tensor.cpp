#include <catch_amalgamated.hpp>

#include "oracles.hpp"
#include "constructions.hpp"
#include "support.hpp"

using namespace nij;
using namespace testing_support;

namespace {

std::vector<NijAlgebra> small_fixtures() { return {k2(), t3()}; }

}  // namespace

TEST_CASE("contraction examples") {
  for (const auto& na : small_fixtures()) {
    const Algebra& a = na.algebra;
    MultiMap mu = MultiMap::product(a);
    CHECK(contraction(mu, mu).is_zero());
    MultiMap id = MultiMap::identity(a.dim());
    CHECK(contraction(id, mu) == mu);
    std::mt19937 rng(1);
    for (std::size_t m = 1; m <= 3; ++m) {
      MultiMap f = random_multimap(rng, m, a.dim(), a.dim());
      CHECK(contraction(f, id) == Scalar(static_cast<long>(m)) * f);
    }
  }
  CHECK_THROWS_AS(contraction(MultiMap(0, 2, 2), MultiMap::identity(2)), StructureError);
}

TEST_CASE("cup product examples") {
  Algebra t = t3_algebra();
  MultiMap id = MultiMap::identity(3), mu = MultiMap::product(t);
  CHECK(cup_product(t, id, id) == mu);
  MultiMap abc = cup_product(t, mu, id);
  for (const auto& tup : basis_tuples(3, 3)) {
    Vector expected(3);
    std::size_t deg = tup[0] + tup[1] + tup[2];
    if (deg < 3) expected[deg] = 1;
    CHECK(abc.on_basis(abc.source_index(tup)) == expected);
  }
  std::mt19937 rng(2);
  Algebra k = k2_algebra();
  for (int trial = 0; trial < 5; ++trial) {
    MultiMap f = random_multimap(rng, 1, 2, 2), g = random_multimap(rng, 2, 2, 2),
             h = random_multimap(rng, 1, 2, 2);
    CHECK(cup_product(k, cup_product(k, f, g), h) == cup_product(k, f, cup_product(k, g, h)));
  }
}

TEST_CASE("cup bracket examples") {
  std::mt19937 rng(3);
  Algebra k = k2_algebra();
  MultiMap f = random_multimap(rng, 2, 2, 2);
  CHECK(cup_bracket(k, f, f).is_zero());
  MultiMap id = MultiMap::identity(2), mu = MultiMap::product(k);
  CHECK(cup_bracket(k, id, id) == Scalar(2) * mu);
  CHECK(cup_bracket(k, mu, mu) == oracle::cup_bracket(k, mu, mu));
}

TEST_CASE("Hochschild coboundary examples") {
  for (const auto& na : small_fixtures()) {
    const Algebra& a = na.algebra;
    CHECK(hochschild_delta(a, MultiMap::identity(a.dim())) == MultiMap::product(a));
    CHECK(hochschild_delta(a, MultiMap::product(a)).is_zero());
  }
  MultiMap e1 = MultiMap::element(2, unit_vector(2, 0));
  CHECK(hochschild_delta(k2_algebra(), e1).is_zero());
}

TEST_CASE("Hochschild coboundary equals (-1)^{n-1} i_f mu - i_mu f in the adjoint case") {
  std::mt19937 rng(4);
  for (const auto& na : small_fixtures()) {
    const Algebra& a = na.algebra;
    MultiMap mu = MultiMap::product(a);
    for (std::size_t n = 1; n <= 3; ++n) {
      MultiMap f = random_multimap(rng, n, a.dim(), a.dim());
      Scalar s = (n % 2 == 1) ? 1 : -1;
      CHECK(hochschild_delta(a, f) == s * contraction(mu, f) - contraction(f, mu));
    }
  }
}

TEST_CASE("FN bracket examples") {
  NijAlgebra t = t3();
  MultiMap n = MultiMap::from_matrix(t.op);
  CHECK(fn_bracket(t.algebra, n, n).is_zero());
  std::mt19937 rng(5);
  for (const auto& fx : all_fixtures()) {
    const Algebra& a = fx.na.algebra;
    MultiMap id = MultiMap::identity(a.dim());
    for (std::size_t m = 1; m <= 2; ++m)
      CHECK(fn_bracket(a, id, random_multimap(rng, m, a.dim(), a.dim())).is_zero());
  }
  Matrix swap(2, 2);
  swap(0, 1) = 1;
  swap(1, 0) = 1;
  MultiMap s = MultiMap::from_matrix(swap);
  CHECK_FALSE(fn_bracket(k2_algebra(), s, s).is_zero());
}

TEST_CASE("FN bracket is graded antisymmetric") {
  std::mt19937 rng(6);
  for (const auto& na : small_fixtures()) {
    const Algebra& a = na.algebra;
    for (std::size_t m = 1; m <= 3; ++m)
      for (std::size_t n = 1; m + n <= 4; ++n) {
        MultiMap f = random_multimap(rng, m, a.dim(), a.dim());
        MultiMap g = random_multimap(rng, n, a.dim(), a.dim());
        Scalar s = ((m * n) % 2 == 0) ? -1 : 1;
        CHECK(fn_bracket(a, f, g) == s * fn_bracket(a, g, f));
      }
  }
}

TEST_CASE("FN bracket satisfies the graded Jacobi identity") {
  std::mt19937 rng(7);
  for (const auto& na : small_fixtures()) {
    const Algebra& a = na.algebra;
    const std::size_t d = a.dim();
    for (auto arities : std::vector<std::array<std::size_t, 3>>{{1, 1, 1}, {1, 1, 2}, {1, 2, 1}}) {
      MultiMap f = random_multimap(rng, arities[0], d, d);
      MultiMap g = random_multimap(rng, arities[1], d, d);
      MultiMap h = random_multimap(rng, arities[2], d, d);
      Scalar s = ((arities[0] * arities[1]) % 2 == 0) ? 1 : -1;
      CHECK(fn_bracket(a, f, fn_bracket(a, g, h)) ==
            fn_bracket(a, fn_bracket(a, f, g), h) + s * fn_bracket(a, g, fn_bracket(a, f, h)));
    }
  }
}

TEST_CASE("Maurer-Cartan equivalence on random candidate operators") {
  std::mt19937 rng(8);
  int nij_count = 0, other = 0;
  for (const auto& fx : all_fixtures()) {
    for (const Matrix& cand : candidate_operators(fx.na, rng, 24)) {
      MultiMap n = MultiMap::from_matrix(cand);
      bool mc = fn_bracket(fx.na.algebra, n, n).is_zero();
      bool nij = verify_nijenhuis_identity(fx.na.algebra, cand).ok();
      CHECK(mc == nij);
      (nij ? nij_count : other)++;
    }
  }
  CHECK(nij_count >= 20);
  CHECK(other >= 20);
}

TEST_CASE("tensor operations agree with the pointwise oracle") {
  std::mt19937 rng(9);
  for (const auto& na : small_fixtures()) {
    const Algebra& a = na.algebra;
    const std::size_t d = a.dim();
    Bimodule adj = Bimodule::adjoint(a);
    for (std::size_t m = 1; m <= 3; ++m)
      for (std::size_t n = 1; m + n - 1 <= 3; ++n) {
        MultiMap f = random_multimap(rng, m, d, d), g = random_multimap(rng, n, d, d);
        CHECK(contraction(f, g) == oracle::contraction(f, g));
        if (m + n <= 3) {
          CHECK(cup_product(a, f, g) == oracle::cup(a, f, g));
          CHECK(cup_bracket(a, f, g) == oracle::cup_bracket(a, f, g));
          CHECK(fn_bracket(a, f, g) == oracle::fn_bracket(a, f, g));
        }
      }
    for (std::size_t n = 0; n <= 3; ++n) {
      MultiMap f = random_multimap(rng, n, d, d);
      CHECK(hochschild_delta(a, adj, f) == oracle::hochschild(a, adj, f));
    }
  }
}

TEST_CASE("relative differential and partial map agree with the pointwise oracle") {
  std::mt19937 rng(10);
  for (const auto& fx : all_fixtures()) {
    const std::size_t d = fx.na.dim(), w = fx.nb.dim();
    for (std::size_t n = 0; n <= 3; ++n) {
      if (fx.na.dim() > 3 && n == 3) continue;
      MultiMap f = random_multimap(rng, n, d, w);
      MultiMap rel = MultiMap::from_sparse(n + 1, d, w, cochain::relative(f.sparse(), n, fx.na, fx.nb));
      CHECK(rel == oracle::relative(fx.na, fx.nb, f));
      MultiMap par = MultiMap::from_sparse(n, d, w, cochain::partial(f.sparse(), n, fx.na, fx.nb));
      CHECK(par == oracle::partial(fx.na, fx.nb, f));
    }
  }
}

TEST_CASE("relative differential squares to zero") {
  std::mt19937 rng(11);
  for (const auto& fx : all_fixtures()) {
    const std::size_t d = fx.na.dim(), w = fx.nb.dim();
    for (std::size_t n = 0; n <= 2; ++n) {
      SparseVec f = random_multimap(rng, n, d, w).sparse();
      SparseVec dd = cochain::relative(cochain::relative(f, n, fx.na, fx.nb), n + 1, fx.na, fx.nb);
      CHECK(dd.empty());
    }
  }
}

TEST_CASE("operator differential on the adjoint bimodule matches the relative differential") {
  std::mt19937 rng(12);
  for (const auto& fx : all_fixtures()) {
    const std::size_t d = fx.na.dim();
    NijBimodule adj = adjoint_bimodule(fx.na);
    for (std::size_t n = 0; n <= 2; ++n) {
      SparseVec f = random_multimap(rng, n, d, d).sparse();
      MultiMap op = MultiMap::from_sparse(n + 1, d, d, cochain::operator_differential(f, n, fx.na));
      MultiMap rel = MultiMap::from_sparse(n + 1, d, d, cochain::relative(f, n, fx.na, adj));
      INFO(fx.name << " arity " << n);
      CHECK(op == rel);
    }
  }
}
