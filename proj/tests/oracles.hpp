#pragma once

// Pointwise evaluators that recompute each defining formula on basis tuples directly from the
// structure constants. They share no code with the tensor/matrix implementations beyond
// MultiMap::evaluate and the algebra/bimodule products.

#include <vector>

#include "nijenhuis/defext.hpp"
#include "nijenhuis/homotopy.hpp"
#include "nijenhuis/nsalg.hpp"
#include "support.hpp"

namespace oracle {

using namespace nij;
using testing_support::basis_args;
using testing_support::basis_tuples;

inline int minus_one_pow(long long e) { return ((e % 2) + 2) % 2 == 0 ? 1 : -1; }

/// Builds a MultiMap of the given shape from a pointwise rule on basis arguments.
template <class Rule>
MultiMap tabulate(std::size_t arity, std::size_t d, std::size_t w, Rule rule) {
  MultiMap out(arity, d, w);
  for (const auto& t : basis_tuples(arity, d)) {
    Vector v = rule(basis_args(t, d));
    for (std::size_t k = 0; k < w; ++k) out(t, k) = v[k];
  }
  return out;
}

inline std::vector<Vector> slice(const std::vector<Vector>& a, std::size_t from, std::size_t count) {
  return std::vector<Vector>(a.begin() + from, a.begin() + from + count);
}

/// i_g f.
inline MultiMap contraction(const MultiMap& f, const MultiMap& g) {
  const std::size_t m = f.arity(), n = g.arity(), d = f.source_dim();
  return tabulate(m + n - 1, d, f.target_dim(), [&](const std::vector<Vector>& a) {
    Vector total(f.target_dim());
    for (std::size_t i = 1; i <= m; ++i) {
      std::vector<Vector> args = slice(a, 0, i - 1);
      args.push_back(g.evaluate(slice(a, i - 1, n)));
      auto rest = slice(a, i - 1 + n, m - i);
      args.insert(args.end(), rest.begin(), rest.end());
      Vector v = f.evaluate(args);
      int s = minus_one_pow(static_cast<long long>(i - 1) * (n - 1));
      for (std::size_t k = 0; k < v.size(); ++k) total[k] += s * v[k];
    }
    return total;
  });
}

inline MultiMap cup(const Algebra& alg, const MultiMap& f, const MultiMap& g) {
  const std::size_t m = f.arity(), n = g.arity(), d = alg.dim();
  return tabulate(m + n, d, d, [&](const std::vector<Vector>& a) {
    return alg.multiply(f.evaluate(slice(a, 0, m)), g.evaluate(slice(a, m, n)));
  });
}

inline MultiMap cup_bracket(const Algebra& alg, const MultiMap& f, const MultiMap& g) {
  const long long m = f.arity(), n = g.arity();
  return cup(alg, f, g) - Scalar(minus_one_pow(m * n)) * cup(alg, g, f);
}

inline MultiMap hochschild(const Algebra& alg, const Bimodule& b, const MultiMap& f) {
  const std::size_t n = f.arity(), d = alg.dim();
  return tabulate(n + 1, d, b.dim(), [&](const std::vector<Vector>& a) {
    Vector total = b.act_left(a[0], f.evaluate(slice(a, 1, n)));
    for (std::size_t i = 1; i <= n; ++i) {
      std::vector<Vector> args = slice(a, 0, i - 1);
      args.push_back(alg.multiply(a[i - 1], a[i]));
      auto rest = slice(a, i + 1, n - i);
      args.insert(args.end(), rest.begin(), rest.end());
      total = vector_add(total, vector_scale(minus_one_pow(i), f.evaluate(args)));
    }
    return vector_add(total, vector_scale(minus_one_pow(n + 1),
                                          b.act_right(f.evaluate(slice(a, 0, n)), a[n])));
  });
}

inline MultiMap fn_bracket(const Algebra& alg, const MultiMap& f, const MultiMap& g) {
  const long long m = f.arity(), n = g.arity();
  Bimodule adj = Bimodule::adjoint(alg);
  return oracle::cup_bracket(alg, f, g) +
         Scalar(minus_one_pow(m)) * oracle::contraction(g, hochschild(alg, adj, f)) -
         Scalar(minus_one_pow((m + 1) * n)) * oracle::contraction(f, hochschild(alg, adj, g));
}

/// d_{N,N_M} straight from its display, including the degree-0 case.
inline MultiMap relative(const NijAlgebra& na, const NijBimodule& nb, const MultiMap& f) {
  const Algebra& alg = na.algebra;
  const Bimodule& b = nb.bimodule;
  const Matrix& N = na.op;
  const Matrix& NM = nb.op;
  const std::size_t n = f.arity(), d = alg.dim();
  return tabulate(n + 1, d, b.dim(), [&](const std::vector<Vector>& a) {
    if (n == 0) {
      Vector u = f.evaluate({});
      Vector t = vector_sub(b.act_left(N.apply(a[0]), u), b.act_right(u, N.apply(a[0])));
      return vector_sub(t, NM.apply(vector_sub(b.act_left(a[0], u), b.act_right(u, a[0]))));
    }
    Vector total = b.act_left(N.apply(a[0]), f.evaluate(slice(a, 1, n)));
    total = vector_sub(total, vector_scale(minus_one_pow(n),
                                           b.act_right(f.evaluate(slice(a, 0, n)), N.apply(a[n]))));
    for (std::size_t i = 1; i <= n; ++i) {
      std::vector<Vector> args = slice(a, 0, i - 1);
      Vector x = a[i - 1], y = a[i];
      args.push_back(vector_sub(vector_add(alg.multiply(N.apply(x), y), alg.multiply(x, N.apply(y))),
                                N.apply(alg.multiply(x, y))));
      auto rest = slice(a, i + 1, n - i);
      args.insert(args.end(), rest.begin(), rest.end());
      total = vector_add(total, vector_scale(minus_one_pow(i), f.evaluate(args)));
    }
    Vector h = hochschild(alg, b, f).evaluate(a);
    return vector_sub(total, NM.apply(h));
  });
}

/// partial^{N,N_M}: sum over subsets S of raw slots of (-1)^{|S|} N_M^{|S|} f(...).
inline MultiMap partial(const NijAlgebra& na, const NijBimodule& nb, const MultiMap& f) {
  const std::size_t n = f.arity(), d = na.dim();
  return tabulate(n, d, nb.dim(), [&](const std::vector<Vector>& a) {
    Vector total(nb.dim());
    for (std::size_t mask = 0; mask < (std::size_t(1) << n); ++mask) {
      std::vector<Vector> args;
      int raw = 0;
      for (std::size_t t = 0; t < n; ++t) {
        if (mask & (std::size_t(1) << t)) {
          args.push_back(a[t]);
          ++raw;
        } else {
          args.push_back(na.op.apply(a[t]));
        }
      }
      Vector v = f.evaluate(args);
      for (int j = 0; j < raw; ++j) v = nb.op.apply(v);
      total = vector_add(total, vector_scale(minus_one_pow(raw), v));
    }
    return total;
  });
}

/// Value of a labeled cochain at label r (zero when the label does not exist).
inline Vector labeled_value(const LabeledCochain& f, std::size_t r, const std::vector<Vector>& a) {
  if (r < 1 || r > f.labels()) return Vector(f.dim());
  return f.component(r).evaluate(a);
}

inline Vector labeled_total(const LabeledCochain& f, const std::vector<Vector>& a) {
  return f.total().evaluate(a);
}

/// f o_i g straight from its five-case table.
inline LabeledCochain ns_compose(const LabeledCochain& f, const LabeledCochain& g, std::size_t i) {
  const std::size_t m = f.arity(), n = g.arity(), d = f.dim(), k = m + n - 1;
  std::vector<MultiMap> comps;
  for (std::size_t r = 1; r <= ns_labels(k); ++r)
    comps.push_back(tabulate(k, d, d, [&](const std::vector<Vector>& a) {
      auto with = [&](const Vector& inner) {
        std::vector<Vector> args = slice(a, 0, i - 1);
        args.push_back(inner);
        for (std::size_t t = i - 1 + n; t < k; ++t) args.push_back(a[t]);
        return args;
      };
      std::vector<Vector> middle = slice(a, i - 1, n);
      Vector gsum = labeled_total(g, middle);
      if (r <= i - 1) return labeled_value(f, r, with(gsum));
      if (r <= i + n - 1) return labeled_value(f, i, with(labeled_value(g, r - i + 1, middle)));
      if (r <= m + n - 1) return labeled_value(f, r - n + 1, with(gsum));
      return vector_add(labeled_value(f, i, with(labeled_value(g, n + 1, middle))),
                        labeled_value(f, m + 1, with(gsum)));
    }));
  return LabeledCochain::from_components(std::move(comps));
}

inline LabeledCochain ns_bracket(const LabeledCochain& f, const LabeledCochain& g) {
  const long long m = f.arity(), n = g.arity();
  LabeledCochain out(m + n - 1, f.dim());
  for (long long i = 1; i <= m; ++i)
    out = out + Scalar(minus_one_pow((i - 1) * (n - 1))) * ns_compose(f, g, i);
  for (long long i = 1; i <= n; ++i)
    out = out - Scalar(minus_one_pow((m - 1) * (n - 1) + (i - 1) * (m - 1))) * ns_compose(g, f, i);
  return out;
}

/// Theta_n with the well-typed reading f(a_1..a_n) a_{n+1} for label [n+1].
inline LabeledCochain theta(const Algebra& alg, const MultiMap& f) {
  const std::size_t n = f.arity(), d = alg.dim();
  Bimodule adj = Bimodule::adjoint(alg);
  std::vector<MultiMap> comps;
  for (std::size_t r = 1; r <= n + 2; ++r)
    comps.push_back(tabulate(n + 1, d, d, [&](const std::vector<Vector>& a) {
      if (r == 1) return vector_scale(minus_one_pow(n + 1), alg.multiply(a[0], f.evaluate(slice(a, 1, n))));
      if (r == n + 1) return alg.multiply(f.evaluate(slice(a, 0, n)), a[n]);
      Vector total(d);
      if (r == n + 2)
        for (std::size_t i = 1; i <= n; ++i) {
          std::vector<Vector> args = slice(a, 0, i - 1);
          args.push_back(alg.multiply(a[i - 1], a[i]));
          for (std::size_t t = i + 1; t <= n; ++t) args.push_back(a[t]);
          total = vector_add(total, vector_scale(minus_one_pow(n + i + 1), f.evaluate(args)));
        }
      return total;
    }));
  return LabeledCochain::from_components(std::move(comps));
}

/// Solves the two inducibility equations for lambda directly, entry by entry, given the
/// cocycle (chi, F) of the canonical section.
inline std::optional<Matrix> inducing_lambda(const NijAlgebra& na, const NijBimodule& nb, const Cocycle2& z,
                                             const AutoPair& p) {
  const std::size_t d = na.dim(), m = nb.dim();
  const Bimodule& b = nb.bimodule;
  auto residual = [&](const Matrix& lambda) {
    Vector out;
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) {
        Vector ei = unit_vector(d, i), ej = unit_vector(d, j);
        Vector v = vector_add(b.act_left(p.alpha.apply(ei), lambda.apply(ej)),
                              b.act_right(lambda.apply(ei), p.alpha.apply(ej)));
        v = vector_sub(v, lambda.apply(na.algebra.multiply(ei, ej)));
        out.insert(out.end(), v.begin(), v.end());
      }
    for (std::size_t i = 0; i < d; ++i) {
      Vector ei = unit_vector(d, i);
      Vector v = vector_sub(nb.op.apply(lambda.apply(ei)), lambda.apply(na.op.apply(ei)));
      out.insert(out.end(), v.begin(), v.end());
    }
    return out;
  };
  Vector target;
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      Vector ei = unit_vector(d, i), ej = unit_vector(d, j);
      Vector v = vector_sub(p.beta.apply(z.chi.evaluate({ei, ej})), z.chi.evaluate({p.alpha.apply(ei), p.alpha.apply(ej)}));
      target.insert(target.end(), v.begin(), v.end());
    }
  for (std::size_t i = 0; i < d; ++i) {
    Vector ei = unit_vector(d, i);
    Vector v = vector_sub(p.beta.apply(z.f_part.evaluate({ei})), z.f_part.evaluate({p.alpha.apply(ei)}));
    target.insert(target.end(), v.begin(), v.end());
  }
  std::vector<Vector> columns;
  for (std::size_t k = 0; k < m; ++k)
    for (std::size_t j = 0; j < d; ++j) {
      Matrix l(m, d);
      l(k, j) = 1;
      columns.push_back(residual(l));
    }
  auto x = solve(SparseMatrix::from_columns(target.size(), columns), target);
  if (!x) return std::nullopt;
  Matrix lambda(m, d);
  for (std::size_t k = 0; k < m; ++k)
    for (std::size_t j = 0; j < d; ++j) lambda(k, j) = (*x)[k * d + j];
  return lambda;
}

/// Koszul sign of carrying an operation of degree op_degree past the given elements, one at a time.
inline int koszul(int op_degree, const std::vector<int>& passed) {
  int s = 1;
  for (int deg : passed)
    if ((op_degree * deg) % 2 != 0) s = -s;
  return s;
}

inline std::vector<Vector> basis_of(const GradedSpace& space, const std::vector<std::size_t>& t) {
  std::vector<Vector> out;
  for (auto i : t) out.push_back(unit_vector(space.dim(), i));
  return out;
}

/// Left side of the A-infinity identity on a basis tuple, by dense evaluation.
inline Vector ainf_residual(const GradedAInf& g, const std::vector<std::size_t>& t) {
  const std::size_t k = t.size(), d = g.dim();
  std::vector<Vector> a = basis_of(g.space, t);
  Vector total(d);
  for (std::size_t m = 1; m <= g.n_max(); ++m)
    for (std::size_t n = 1; n <= g.n_max(); ++n) {
      if (m + n != k + 1) continue;
      for (std::size_t i = 1; i <= m; ++i) {
        std::vector<int> passed;
        for (std::size_t j = 0; j + 1 < i; ++j) passed.push_back(g.space.degree(t[j]));
        int sign = minus_one_pow(static_cast<long long>(i) * (n + 1)) * koszul(static_cast<int>(n) - 2, passed);
        std::vector<Vector> args = slice(a, 0, i - 1);
        args.push_back(g.ops[n - 1].evaluate(slice(a, i - 1, n)));
        auto rest = slice(a, i - 1 + n, k - (i - 1 + n));
        args.insert(args.end(), rest.begin(), rest.end());
        total = vector_add(total, vector_scale(sign, g.ops[m - 1].evaluate(args)));
      }
    }
  return total;
}

/// Left side of the NS-infinity identity at label r, straight from the five-case table.
inline Vector nsinf_residual(const NSInfinity& ns, std::size_t r, const std::vector<std::size_t>& t) {
  const std::size_t k = t.size(), d = ns.space.dim();
  std::vector<Vector> a = basis_of(ns.space, t);
  auto value = [&](std::size_t n, std::size_t label, const std::vector<Vector>& args) {
    const MultiMap* f = ns.op(n, label);
    return f ? f->evaluate(args) : Vector(d);
  };
  auto whole = [&](std::size_t n, const std::vector<Vector>& args) {
    Vector v(d);
    for (std::size_t label = 1; label <= ns_labels(n); ++label) v = vector_add(v, value(n, label, args));
    return v;
  };
  Vector total(d);
  for (std::size_t m = 1; m <= ns.n_max(); ++m)
    for (std::size_t n = 1; n <= ns.n_max(); ++n) {
      if (m + n != k + 1) continue;
      for (std::size_t i = 1; i <= m; ++i) {
        std::vector<Vector> middle = slice(a, i - 1, n);
        auto with = [&](const Vector& inner) {
          std::vector<Vector> args = slice(a, 0, i - 1);
          args.push_back(inner);
          auto rest = slice(a, i - 1 + n, k - (i - 1 + n));
          args.insert(args.end(), rest.begin(), rest.end());
          return args;
        };
        Vector v;
        if (r <= i - 1)
          v = value(m, r, with(whole(n, middle)));
        else if (r <= i + n - 1)
          v = value(m, i, with(value(n, r - i + 1, middle)));
        else if (r <= k)
          v = value(m, r - n + 1, with(whole(n, middle)));
        else
          v = vector_add(value(m, i, with(value(n, n + 1, middle))), value(m, m + 1, with(whole(n, middle))));
        std::vector<int> passed;
        for (std::size_t j = 0; j + 1 < i; ++j) passed.push_back(ns.space.degree(t[j]));
        int sign = minus_one_pow(static_cast<long long>(i) * (n + 1)) * koszul(static_cast<int>(n) - 2, passed);
        total = vector_add(total, vector_scale(sign, v));
      }
    }
  return total;
}

}  // namespace oracle
