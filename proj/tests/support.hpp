#pragma once

#include <random>
#include <string>
#include <vector>

#include "nijenhuis/core.hpp"
#include "nijenhuis/tensor.hpp"

namespace testing_support {

using namespace nij;

inline Algebra k2_algebra() {
  Tensor3 t(2, 2, 2);
  t(0, 0, 0) = 1;
  t(1, 1, 1) = 1;
  return Algebra(t);
}

/// k[x]/(x^3) in the basis 1, x, x^2.
inline Algebra t3_algebra() {
  Tensor3 t(3, 3, 3);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; i + j < 3; ++j) t(i, j, i + j) = 1;
  return Algebra(t);
}

/// Upper triangular 2x2 matrices in the basis E11, E12, E22.
inline Algebra upper_triangular_algebra() {
  Tensor3 t(3, 3, 3);
  t(0, 0, 0) = 1;
  t(0, 1, 1) = 1;
  t(1, 2, 1) = 1;
  t(2, 2, 2) = 1;
  return Algebra(t);
}

inline Matrix diag(std::initializer_list<int> values) {
  Matrix m(values.size(), values.size());
  std::size_t i = 0;
  for (int v : values) {
    m(i, i) = v;
    ++i;
  }
  return m;
}

inline Matrix shift_down(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i + 1 < n; ++i) m(i + 1, i) = 1;
  return m;
}

inline NijAlgebra k2() { return {k2_algebra(), diag({1, 0})}; }
inline NijAlgebra t3() { return {t3_algebra(), shift_down(3)}; }

inline NijAlgebra k2_semidirect() {
  NijAlgebra base = k2();
  return semidirect(base, adjoint_bimodule(base));
}

/// Non-scalar Nijenhuis operators on UT3 with entries in {-1, 0, 1}, in enumeration order.
inline const std::vector<Matrix>& upper_triangular_operators() {
  static const std::vector<Matrix> found = [] {
    Algebra a = upper_triangular_algebra();
    std::vector<Matrix> found;
    for (int code = 0; code < 19683; ++code) {
      Matrix n(3, 3);
      int c = code;
      for (std::size_t r = 0; r < 3; ++r)
        for (std::size_t s = 0; s < 3; ++s) {
          n(r, s) = (c % 3) - 1;
          c /= 3;
        }
      bool scalar = true;
      for (std::size_t r = 0; r < 3; ++r)
        for (std::size_t s = 0; s < 3; ++s)
          if (n(r, s) != (r == s ? n(0, 0) : Scalar(0))) scalar = false;
      if (scalar) continue;
      if (verify_nijenhuis_identity(a, n).ok()) found.push_back(n);
    }
    return found;
  }();
  return found;
}

/// One of upper_triangular_operators(), picked by seed.
inline NijAlgebra random_upper_triangular(unsigned seed = 7) {
  const auto& found = upper_triangular_operators();
  std::mt19937 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, found.size() - 1);
  return {upper_triangular_algebra(), found[pick(rng)]};
}

struct Fixture {
  std::string name;
  NijAlgebra na;
  NijBimodule nb;
};

inline std::vector<Fixture> all_fixtures() {
  std::vector<Fixture> out;
  for (auto [name, na] : std::vector<std::pair<std::string, NijAlgebra>>{
           {"K2", k2()}, {"T3", t3()}, {"K2+adjoint", k2_semidirect()}, {"UT3-random", random_upper_triangular()}})
    out.push_back({name, na, adjoint_bimodule(na)});
  return out;
}

inline Scalar random_scalar(std::mt19937& rng, int range = 3) {
  std::uniform_int_distribution<int> num(-range, range);
  std::uniform_int_distribution<int> den(1, 2);
  Scalar q(num(rng), den(rng));
  q.canonicalize();
  return q;
}

inline Matrix random_matrix(std::mt19937& rng, std::size_t rows, std::size_t cols, int range = 3) {
  Matrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = random_scalar(rng, range);
  return m;
}

inline MultiMap random_multimap(std::mt19937& rng, std::size_t arity, std::size_t d, std::size_t w,
                                int range = 2) {
  MultiMap f(arity, d, w);
  Vector v(f.size());
  std::uniform_int_distribution<int> coin(0, 2);
  for (auto& x : v)
    if (coin(rng) != 0) x = random_scalar(rng, range);
  return MultiMap::from_vector(arity, d, w, v);
}

inline Vector random_vector(std::mt19937& rng, std::size_t n, int range = 3) {
  Vector v(n);
  for (auto& x : v) x = random_scalar(rng, range);
  return v;
}

/// All basis tuples of length n over {0..d-1}, leftmost slowest.
inline std::vector<std::vector<std::size_t>> basis_tuples(std::size_t n, std::size_t d) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> t(n, 0);
  while (true) {
    out.push_back(t);
    std::size_t s = n;
    while (s > 0) {
      --s;
      if (++t[s] < d) break;
      t[s] = 0;
      if (s == 0) return out;
    }
    if (n == 0) return out;
  }
}

inline std::vector<Vector> basis_args(const std::vector<std::size_t>& tuple, std::size_t d) {
  std::vector<Vector> args;
  for (auto i : tuple) args.push_back(unit_vector(d, i));
  return args;
}

}  // namespace testing_support
