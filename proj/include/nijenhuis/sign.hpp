#pragma once

// Every graded sign used by the engine, one function per displayed formula.

namespace nij::sign {

/// (-1)^e for any integer e.
constexpr int power(long long e) { return (e % 2 == 0) ? 1 : -1; }

/// Contraction i_g f, insertion at position i of an arity-n map: (-1)^{(i-1)(n-1)}.
constexpr int contraction(int i, int n) { return power(static_cast<long long>(i - 1) * (n - 1)); }

/// Cup bracket [f,g] = f cup g - (-1)^{mn} g cup f: returns (-1)^{mn}.
constexpr int cup_swap(int m, int n) { return power(static_cast<long long>(m) * n); }

/// FN bracket: (-1)^m in front of i_{delta f} g.
constexpr int fn_first(int m) { return power(m); }

/// FN bracket: (-1)^{(m+1)n} in front of i_{delta g} f (entered with a minus).
constexpr int fn_second(int m, int n) { return power(static_cast<long long>(m + 1) * n); }

/// Hochschild interior term i: (-1)^i.
constexpr int hochschild_inner(int i) { return power(i); }

/// Hochschild right action term of an arity-n cochain: (-1)^{n+1}.
constexpr int hochschild_last(int n) { return power(n + 1); }

/// d_{N,N_M} right action term: -(-1)^n.
constexpr int relative_last(int n) { return -power(n); }

/// Cone block (-1)^n partial in degree n.
constexpr int cone(int n) { return power(n); }

/// partial^{N,N_M}: (-1)^j N_M^j for j raw slots.
constexpr int partial_term(int j) { return power(j); }

/// NS bracket inner sum: (-1)^{(i-1)(n-1)}.
constexpr int ns_inner(int i, int n) { return power(static_cast<long long>(i - 1) * (n - 1)); }

/// NS bracket swap: (-1)^{(m-1)(n-1)}.
constexpr int ns_swap(int m, int n) { return power(static_cast<long long>(m - 1) * (n - 1)); }

/// delta_pi f = (-1)^{n-1} [[pi, f]].
constexpr int ns_differential(int n) { return power(n - 1); }

/// Theta_n, label [1]: (-1)^{n+1}.
constexpr int theta_first(int n) { return power(n + 1); }

/// Theta_n, label [n+2], interior term i: (-1)^{n+i+1}.
constexpr int theta_inner(int n, int i) { return power(n + i + 1); }

/// Psi_n = (-1)^{n+1} delta_Hoch.
constexpr int psi(int n) { return power(n + 1); }

/// A-infinity identity without the Koszul part: (-1)^{i(n+1)}.
constexpr int ainf_position(int i, int n) { return power(static_cast<long long>(i) * (n + 1)); }

/// Koszul part: (-1)^{n(|a_1|+...+|a_{i-1}|)}.
constexpr int koszul(int n, long long prefix_degree) {
  return power(static_cast<long long>(n) * prefix_degree);
}

/// Full A-infinity term sign (-1)^{i(n+1) + n(|a_1|+...+|a_{i-1}|)}.
constexpr int ainf(int i, int n, long long prefix_degree) {
  return ainf_position(i, n) * koszul(n, prefix_degree);
}

/// Strict homotopy Nijenhuis: (-1)^{j-1} N^{j-1} for j raw slots.
constexpr int strict_hn(int j) { return power(j - 1); }

}  // namespace nij::sign
