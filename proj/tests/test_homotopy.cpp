#include <catch_amalgamated.hpp>

#include <random>

#include "nijenhuis/homotopy.hpp"
#include "constructions.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace nij;
using namespace testing_support;

namespace {

std::pair<GradedAInf, Matrix> graded_strict(const CrossedModule& c) {
  auto [t, h] = from_crossed(c);
  return {to_graded(t), to_graded(t, h)};
}

void require_same_violations(const Report& r, const std::vector<std::pair<std::vector<std::size_t>, Vector>>& expected) {
  REQUIRE(r.violations.size() == expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i) {
    CHECK(r.violations[i].tuple == expected[i].first);
    CHECK(r.violations[i].lhs == expected[i].second);
  }
}

}  // namespace

TEST_CASE("two-term algebra from an associative algebra") {
  for (const Algebra& a : {k2_algebra(), t3_algebra(), upper_triangular_algebra()}) {
    const std::size_t d = a.dim();
    TwoTermAInf t{d, d, Matrix(d, d), a.mu(), a.mu(), a.mu(), MultiMap(3, d, d)};
    Report r = verify_two_term(t);
    CHECK(r.ok());
    CHECK(r.laws.size() == 8);
    CHECK(verify_graded_ainf(to_graded(t)).ok());
  }
  TwoTermAInf bad{2, 2, Matrix(2, 2), k2_algebra().mu(), k2_algebra().mu(), k2_algebra().mu(), MultiMap(3, 2, 2)};
  bad.mu3({0, 0, 0}, 0) = 1;
  Report r = verify_two_term(bad);
  CHECK_FALSE(r.ok());
  CHECK_FALSE(verify_graded_ainf(to_graded(bad)).ok());
  CHECK_THROWS_AS(verify_two_term({2, 2, Matrix(2, 1), bad.m00, bad.m01, bad.m10, bad.mu3}), StructureError);
}

TEST_CASE("two-term identities agree with the graded A-infinity check") {
  std::mt19937 rng(101);
  int fail = 0;
  for (int trial = 0; trial < 12; ++trial) {
    const Algebra a = trial % 2 ? t3_algebra() : k2_algebra();
    const std::size_t d = a.dim();
    TwoTermAInf t{d, d, trial % 3 ? Matrix::identity(d) : Matrix(d, d), a.mu(), a.mu(), a.mu(), MultiMap(3, d, d)};
    if (trial % 4 == 1) t.mu3 = random_multimap(rng, 3, d, d, 1);
    if (trial % 4 == 2) t.m01(rng() % d, rng() % d, rng() % d) += 1;
    bool two = verify_two_term(t).ok();
    CHECK(two == verify_graded_ainf(to_graded(t)).ok());
    fail += !two;
  }
  CHECK(fail > 0);
}

TEST_CASE("graded A-infinity check matches the brute-force evaluator") {
  std::mt19937 rng(103);
  for (const auto& c : random_crossed(rng, 4)) {
    auto [g, n] = graded_strict(c);
    for (std::size_t idx = 0; idx < 3; ++idx) {
      std::vector<std::size_t> t;
      auto tup = g.ops[1].source_tuple(rng() % ipow(g.dim(), 2));
      int deg = g.space.degree(tup[0]) + g.space.degree(tup[1]);
      std::size_t k = 0;
      while (k < g.dim() && g.space.degree(k) != deg) ++k;
      if (k < g.dim()) g.ops[1](tup, k) += 1;
    }
    Report r = verify_graded_ainf(g, 4);
    std::vector<std::pair<std::vector<std::size_t>, Vector>> expected;
    for (std::size_t k = 1; k <= 4; ++k)
      for (const auto& t : detail::homogeneous_tuples(g.space, k)) {
        Vector v = oracle::ainf_residual(g, t);
        if (!all_zero(v)) expected.push_back({t, v});
      }
    CHECK_FALSE(expected.empty());
    require_same_violations(r, expected);
  }
}

TEST_CASE("homotopy Nijenhuis identities") {
  for (const auto& fx : all_fixtures()) {
    auto [t, h] = from_crossed(adjoint_crossed(fx.na));
    Report r = verify_homotopy_nij(t, h);
    CHECK(r.ok());
    CHECK(r.laws.size() == 13);
  }
  NijAlgebra na = k2();
  NijBimodule nb = adjoint_bimodule(na);
  std::mt19937 rng(107);
  SkeletalData s = skeletal_from(na, nb, random_z3(rng, na, nb));
  auto [t, h] = from_cocycle(s);
  CHECK(verify_homotopy_nij(t, h).ok());
  h.n2({0, 1}, 0) += 1;
  Report r = verify_homotopy_nij(t, h);
  REQUIRE_FALSE(r.ok());
  for (const auto& v : r.violations) CHECK(v.law == "hn-coherence");
}

TEST_CASE("homotopy coherence is the relative differential against partial") {
  std::mt19937 rng(109);
  for (const auto& fx : all_fixtures()) {
    const std::size_t d = fx.na.dim(), m = fx.nb.dim();
    MultiMap mu3 = random_multimap(rng, 3, d, m, 1);
    MultiMap n2 = random_multimap(rng, 2, d, m, 1);
    TwoTermAInf t{d, m, Matrix(d, m), fx.na.algebra.mu(), fx.nb.bimodule.left(), fx.nb.bimodule.right(), mu3};
    Report r = verify_homotopy_nij(t, {fx.na.op, fx.nb.op, n2});
    Vector lhs = relative_matrix(fx.na, fx.nb, 2).apply(n2.entries());
    Vector rhs = partial_matrix(fx.na, fx.nb, 3).apply(mu3.entries());
    MultiMap lm = MultiMap::from_vector(3, d, m, lhs), rm = MultiMap::from_vector(3, d, m, rhs);
    std::size_t expected = 0;
    for (std::size_t idx = 0; idx < ipow(d, 3); ++idx) expected += lm.on_basis(idx) != rm.on_basis(idx);
    std::size_t seen = 0;
    for (const auto& v : r.violations) {
      if (v.law != "hn-coherence") continue;
      ++seen;
      CHECK(v.lhs == lm.on_basis(lm.source_index(v.tuple)));
      CHECK(v.rhs == rm.on_basis(rm.source_index(v.tuple)));
    }
    CHECK(seen == expected);
    CHECK(expected > 0);
  }
}

TEST_CASE("skeletal structures are degree-3 cocycles") {
  std::mt19937 rng(113);
  NijAlgebra na = k2();
  NijBimodule nb = adjoint_bimodule(na);
  auto [t0, h0] = from_cocycle(skeletal_from(na, nb, Vector(cone_reduced_matrix(na, nb, 3).cols())));
  CHECK(t0.mu3.is_zero());
  CHECK(h0.n2.is_zero());
  int count = 0;
  for (const auto& fx : all_fixtures())
    for (int i = 0; i < 3; ++i, ++count) {
      SkeletalData s = skeletal_from(fx.na, fx.nb, random_z3(rng, fx.na, fx.nb));
      auto [t, h] = from_cocycle(s);
      CHECK(verify_homotopy_nij(t, h).ok());
      SkeletalData back = to_cocycle(t, h);
      CHECK(back.chi == s.chi);
      CHECK(back.f_part == s.f_part);
      CHECK(back.na.algebra.mu() == s.na.algebra.mu());
      CHECK(back.nb.bimodule.left() == s.nb.bimodule.left());
      CHECK(back.nb.op == s.nb.op);
      auto again = from_cocycle(back);
      CHECK(again.first == t);
      CHECK(again.second == h);
    }
  CHECK(count >= 10);
  SkeletalData bad = skeletal_from(na, nb, random_z3(rng, na, nb));
  std::size_t idx = 0;
  do bad.f_part(bad.f_part.source_tuple(idx++), 0) += 1;
  while (all_zero(cone_reduced_matrix(na, nb, 3).apply(bad.to_vector())));
  CHECK_THROWS_AS(from_cocycle(bad), StructureError);
  auto [ts, hs] = from_crossed(adjoint_crossed(na));
  CHECK_THROWS_AS(to_cocycle(ts, hs), StructureError);
}

TEST_CASE("crossed modules") {
  for (const auto& fx : all_fixtures()) {
    CrossedModule c = adjoint_crossed(fx.na);
    CHECK(verify_crossed(c).ok());
    auto [t, h] = from_crossed(c);
    CHECK(t.bdry == Matrix::identity(fx.na.dim()));
    CHECK(to_crossed(t, h) == c);
    for (unsigned k = 0; k <= 3; ++k) CHECK(verify_crossed(adjoint_crossed(power(fx.na, k))).ok());
  }
  // phi = 0 over a zero-product top algebra.
  NijAlgebra na = t3();
  NijBimodule nb = adjoint_bimodule(na);
  CrossedModule zero{na, {Algebra::zero(3), nb.op}, Matrix(3, 3), nb.bimodule};
  CHECK(verify_crossed(zero).ok());
  auto [t, h] = from_crossed(zero);
  CHECK(t.bdry.is_zero());
  CHECK(to_crossed(t, h) == zero);
  // Left multiplications by phi(u) on both sides.
  CrossedModule lm = adjoint_crossed(na);
  Matrix lx = shift_down(3);
  lm.base.op = lx;
  lm.top.op = lx;
  CHECK(verify_crossed(lm).ok());
  CrossedModule broken = adjoint_crossed(na);
  broken.phi = 2 * Matrix::identity(3);
  CHECK_FALSE(verify_crossed(broken).ok());
  CHECK_THROWS_AS(from_crossed(broken), StructureError);
}

TEST_CASE("strict correspondence roundtrips") {
  std::mt19937 rng(127);
  for (const auto& c : random_crossed(rng, 10)) {
    auto [t, h] = from_crossed(c);
    CHECK(t.strict());
    CHECK(h.n2.is_zero());
    CHECK(to_crossed(t, h) == c);
    auto again = from_crossed(to_crossed(t, h));
    CHECK(again.first == t);
    CHECK(again.second == h);
  }
  NijAlgebra na = k2();
  NijBimodule nb = adjoint_bimodule(na);
  std::mt19937 rng2(3);
  auto [t, h] = from_cocycle(skeletal_from(na, nb, random_z3(rng2, na, nb)));
  if (!t.strict() || !h.n2.is_zero()) CHECK_THROWS_AS(to_crossed(t, h), StructureError);
}

TEST_CASE("strict homotopy Nijenhuis operators") {
  std::mt19937 rng(131);
  for (const auto& c : random_crossed(rng, 6)) {
    auto [g, n] = graded_strict(c);
    CHECK(verify_graded_ainf(g).ok());
    CHECK(verify_strict_hn(g, n).ok());
    CHECK(verify_strict_hn(g, Matrix::identity(g.dim())).ok());
    for (unsigned k = 2; k <= 3; ++k) CHECK(verify_strict_hn(g, n.pow(k)).ok());
  }
  for (const auto& fx : all_fixtures()) {
    GradedAInf g = from_algebra(fx.na.algebra);
    CHECK(verify_strict_hn(g, fx.na.op).ok());
    Matrix swap = Matrix(fx.na.dim(), fx.na.dim());
    for (std::size_t i = 0; i < fx.na.dim(); ++i) swap(i, fx.na.dim() - 1 - i) = 1;
    CHECK(verify_strict_hn(g, swap).ok() == verify_nij_algebra({fx.na.algebra, swap}).ok());
  }
  GradedAInf g = graded_strict(adjoint_crossed(k2())).first;
  Matrix mixed(4, 4);
  mixed(0, 2) = 1;
  CHECK_THROWS_AS(verify_strict_hn(g, mixed), StructureError);
}

TEST_CASE("strict operators on structures with a nonzero mu_3") {
  std::mt19937 rng(137);
  int nonzero = 0;
  for (const auto& fx : all_fixtures()) {
    SkeletalData s = skeletal_from(fx.na, fx.nb, random_chi_only(rng, fx.na, fx.nb));
    auto [t, h] = from_cocycle(s);
    nonzero += !t.mu3.is_zero();
    GradedAInf g = to_graded(t);
    Matrix n = to_graded(t, h);
    CHECK(verify_graded_ainf(g).ok());
    REQUIRE(verify_strict_hn(g, n).ok());
    NSInfinity ns = induced_nsinf(g, n);
    CHECK(verify_nsinf(ns, 4).ok());
    CHECK(component_sums(ns) == deformed_ainf(g, n));
    CHECK(verify_graded_ainf(deformed_ainf(g, n)).ok());
  }
  CHECK(nonzero > 0);
}

TEST_CASE("induced NS-infinity algebras") {
  std::mt19937 rng(139);
  for (const auto& c : random_crossed(rng, 8)) {
    auto [g, n] = graded_strict(c);
    NSInfinity ns = induced_nsinf(g, n);
    CHECK(verify_nsinf(ns, 3).ok());
    GradedAInf sums = component_sums(ns);
    CHECK(verify_graded_ainf(sums, 4).ok());
    CHECK(sums == deformed_ainf(g, n));
  }
  CHECK_THROWS_AS(induced_nsinf(from_algebra(k2_algebra()), Matrix::identity(2) + shift_down(2)), StructureError);
}

TEST_CASE("NS-infinity check matches the brute-force evaluator") {
  std::mt19937 rng(149);
  for (const auto& c : random_crossed(rng, 3)) {
    auto [g, n] = graded_strict(c);
    NSInfinity ns = induced_nsinf(g, n);
    auto tup = ns.eta[1][2].source_tuple(rng() % ipow(g.dim(), 2));
    int deg = g.space.degree(tup[0]) + g.space.degree(tup[1]);
    for (std::size_t k = 0; k < g.dim(); ++k)
      if (g.space.degree(k) == deg) {
        ns.eta[1][2](tup, k) += 1;
        break;
      }
    Report r = verify_nsinf(ns, 3);
    std::vector<std::pair<std::vector<std::size_t>, Vector>> expected;
    for (std::size_t k = 1; k <= 3; ++k)
      for (const auto& t : detail::homogeneous_tuples(ns.space, k))
        for (std::size_t label = 1; label <= k + 1; ++label) {
          Vector v = oracle::nsinf_residual(ns, label, t);
          std::vector<std::size_t> where{label};
          where.insert(where.end(), t.begin(), t.end());
          if (!all_zero(v)) expected.push_back({where, v});
        }
    CHECK_FALSE(expected.empty());
    require_same_violations(r, expected);
  }
}

TEST_CASE("arity-0 NS-infinity algebras are NS-algebras") {
  for (const auto& fx : all_fixtures()) {
    GradedAInf g = from_algebra(fx.na.algebra);
    NSInfinity ns = induced_nsinf(g, fx.na.op);
    LabeledCochain expected = LabeledCochain::from_ns(induced_ns(fx.na));
    REQUIRE(ns.eta.size() == 2);
    for (std::size_t r = 1; r <= 3; ++r) CHECK(ns.eta[1][r - 1] == expected.component(r));
    CHECK(verify_nsinf(ns, 4).ok());
    CHECK(deformed_ainf(g, fx.na.op).ops[1] == MultiMap::from_tensor3(deformed_algebra(fx.na, 1).mu()));
  }
  GradedAInf g = from_algebra(t3_algebra());
  NSInfinity bad = induced_nsinf(g, shift_down(3));
  bad.eta[1][2]({1, 1}, 2) += 1;
  NSAlgebra nsb = induced_ns(t3());
  nsb.vee(1, 1, 2) += 1;
  CHECK(verify_nsinf(bad, 3).ok() == verify_ns(nsb).ok());
  CHECK_FALSE(verify_nsinf(bad, 3).ok());
}

TEST_CASE("identity operator") {
  auto [g, n] = graded_strict(adjoint_crossed(t3()));
  const std::size_t d = g.dim();
  NSInfinity ns = induced_nsinf(g, Matrix::identity(d));
  for (std::size_t r = 1; r <= 2; ++r) CHECK(ns.eta[1][r - 1] == g.ops[1]);
  CHECK(ns.eta[1][2] == Scalar(-1) * g.ops[1]);
  CHECK(verify_nsinf(ns, 3).ok());
  CHECK(deformed_ainf(g, Matrix::identity(d)) == g);
}

TEST_CASE("deforming twice by N is deforming by N squared") {
  std::mt19937 rng(151);
  for (const auto& c : random_crossed(rng, 6)) {
    auto [g, n] = graded_strict(c);
    GradedAInf once = deformed_ainf(g, n);
    CHECK(verify_strict_hn(once, n).ok());
    CHECK(deformed_ainf(once, n) == deformed_ainf(g, n.pow(2)));
    CHECK(deformed_ainf(deformed_ainf(once, n), n) == deformed_ainf(g, n.pow(3)));
  }
  for (const auto& fx : all_fixtures()) {
    GradedAInf g = from_algebra(fx.na.algebra);
    for (unsigned k = 1; k <= 3; ++k)
      CHECK(deformed_ainf(g, fx.na.op.pow(k)).ops[1] == MultiMap::from_tensor3(deformed_algebra(fx.na, k).mu()));
  }
}

TEST_CASE("semidirect products and Rota-Baxter lifts") {
  auto [g, n] = graded_strict(adjoint_crossed(t3()));
  AInfRepresentation adj = adjoint_representation(g);
  GradedAInf semi = ainf_semidirect(g, adj);
  CHECK(verify_graded_ainf(semi).ok());
  const std::size_t d = g.dim();
  RbLift zero = rb_lift(g, adj, Matrix(d, d));
  CHECK(zero.is_strict_hn);
  CHECK(zero.is_relative_rb);
  Matrix x2 = shift_down(3) * shift_down(3);
  RbLift sq = rb_lift(g, adj, direct_sum(x2, x2));
  CHECK(sq.is_relative_rb);
  CHECK(sq.is_strict_hn);
  RbLift id = rb_lift(g, adj, Matrix::identity(d));
  CHECK_FALSE(id.is_relative_rb);
  CHECK_FALSE(id.is_strict_hn);
  std::mt19937 rng(157);
  int yes = 0, no = 0;
  for (int t = 0; t < 30; ++t) {
    Matrix a = random_matrix(rng, 3, 3, 1), b = t % 3 ? a : random_matrix(rng, 3, 3, 1);
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j <= i; ++j) {
        if (t % 2) a(i, j) = 0;
        if (t % 2) b(i, j) = 0;
      }
    Matrix r = direct_sum(a, b), lift(2 * d, 2 * d);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t u = 0; u < d; ++u) lift(i, d + u) = r(i, u);
    const bool rb = verify_relative_rb(semi, d, r).ok();
    CHECK(verify_strict_hn(semi, lift).ok() == rb);
    (rb ? yes : no)++;
  }
  CHECK(yes > 0);
  CHECK(no > 0);
  GradedAInf a0 = from_algebra(t3_algebra());
  RbLift plain = rb_lift(a0, adjoint_representation(a0), x2);
  CHECK(plain.is_relative_rb);
  CHECK(plain.is_strict_hn);
  CHECK(plain.is_relative_rb == verify_relative_rota_baxter(t3_algebra(), adjoint_bimodule(t3()).bimodule, x2).ok());
  AInfRepresentation broken = adj;
  broken.ops[1]({d, d}, 0) = 1;
  CHECK_THROWS_AS(ainf_semidirect(g, broken), StructureError);
}

TEST_CASE("caps are enforced") {
  auto [g, n] = graded_strict(adjoint_crossed(k2()));
  CHECK_THROWS_AS(verify_graded_ainf(g, 5), StructureError);
  CHECK_THROWS_AS(verify_graded_ainf(g, 0), StructureError);
  CHECK(verify_graded_ainf(g, 5, 5).ok());
  GradedAInf wrong = g;
  wrong.ops[1]({0, 0}, 2) = 1;
  CHECK_THROWS_AS(verify_graded_ainf(wrong), StructureError);
}
