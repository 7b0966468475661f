#include "orbikit/cocycles.hpp"

#include <algorithm>
#include <numeric>

namespace orbikit {

namespace {

long long checked_mul(long long a, long long b) {
  long long r;
  if (__builtin_mul_overflow(a, b, &r)) throw Error("integer overflow in cocycle solver");
  return r;
}

long long floordiv(long long a, long long b) {
  long long q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

long long positive_mod(long long a, long long m) {
  long long r = a % m;
  return r < 0 ? r + m : r;
}

// Diagonalization of an integer matrix by unimodular row/column operations:
// u * a * v = d with d diagonal (no divisibility normalization; solving
// congruences only needs the diagonal form).
struct DiagonalForm {
  std::vector<std::vector<long long>> d;
  std::vector<std::vector<long long>> u;  // rows x rows
  std::vector<std::vector<long long>> v;  // cols x cols
};

DiagonalForm smith_diagonalize(std::vector<std::vector<long long>> a) {
  const int rows = static_cast<int>(a.size());
  const int cols = rows ? static_cast<int>(a[0].size()) : 0;
  DiagonalForm f;
  f.d = std::move(a);
  f.u.assign(rows, std::vector<long long>(rows, 0));
  f.v.assign(cols, std::vector<long long>(cols, 0));
  for (int i = 0; i < rows; ++i) f.u[i][i] = 1;
  for (int j = 0; j < cols; ++j) f.v[j][j] = 1;

  auto row_sub = [&](int dst, int src, long long q) {
    for (int j = 0; j < cols; ++j) f.d[dst][j] -= checked_mul(q, f.d[src][j]);
    for (int j = 0; j < rows; ++j) f.u[dst][j] -= checked_mul(q, f.u[src][j]);
  };
  auto col_sub = [&](int dst, int src, long long q) {
    for (int i = 0; i < rows; ++i) f.d[i][dst] -= checked_mul(q, f.d[i][src]);
    for (int i = 0; i < cols; ++i) f.v[i][dst] -= checked_mul(q, f.v[i][src]);
  };
  auto row_swap = [&](int x, int y) {
    std::swap(f.d[x], f.d[y]);
    std::swap(f.u[x], f.u[y]);
  };
  auto col_swap = [&](int x, int y) {
    for (int i = 0; i < rows; ++i) std::swap(f.d[i][x], f.d[i][y]);
    for (int i = 0; i < cols; ++i) std::swap(f.v[i][x], f.v[i][y]);
  };

  const int steps = std::min(rows, cols);
  for (int t = 0; t < steps; ++t) {
    while (true) {
      int pi = -1, pj = -1;
      long long best = 0;
      for (int i = t; i < rows; ++i)
        for (int j = t; j < cols; ++j) {
          long long v = std::llabs(f.d[i][j]);
          if (v != 0 && (pi < 0 || v < best)) {
            best = v;
            pi = i;
            pj = j;
          }
        }
      if (pi < 0) return f;  // rest is zero
      if (pi != t) row_swap(t, pi);
      if (pj != t) col_swap(t, pj);

      bool clean = true;
      for (int i = t + 1; i < rows; ++i) {
        if (f.d[i][t] != 0) {
          row_sub(i, t, floordiv(f.d[i][t], f.d[t][t]));
          if (f.d[i][t] != 0) clean = false;
        }
      }
      for (int j = t + 1; j < cols; ++j) {
        if (f.d[t][j] != 0) {
          col_sub(j, t, floordiv(f.d[t][j], f.d[t][t]));
          if (f.d[t][j] != 0) clean = false;
        }
      }
      if (clean) break;
    }
  }
  return f;
}

// Solve d * y == c (mod m) for a single congruence; returns y or nullopt.
std::optional<long long> solve_congruence(long long d, long long c, long long m) {
  d = positive_mod(d, m);
  c = positive_mod(c, m);
  long long g = std::gcd(d == 0 ? m : d, m);
  if (c % g != 0) return std::nullopt;
  if (d == 0) return 0;  // any value works; pick 0
  long long m2 = m / g;
  long long d2 = (d / g) % m2;
  long long c2 = (c / g) % m2;
  // modular inverse of d2 mod m2 by extended euclid
  long long a = d2, b = m2, x0 = 1, x1 = 0;
  while (b) {
    long long q = a / b;
    a -= q * b;
    std::swap(a, b);
    x0 -= q * x1;
    std::swap(x0, x1);
  }
  if (a != 1) return std::nullopt;  // cannot happen after gcd division
  long long inv = positive_mod(x0, m2);
  return positive_mod(checked_mul(c2, inv), m2);
}

}  // namespace

TwoCocycle TwoCocycle::trivial(int group_order) {
  TwoCocycle c;
  c.group_order = group_order;
  c.val.assign(group_order, std::vector<RootOfUnity>(group_order, RootOfUnity::one()));
  return c;
}

CocycleVerdict verify_cocycle(const FiniteGroup& g, const TwoCocycle& alpha) {
  CocycleVerdict verdict;
  const int n = g.order;
  if (alpha.group_order != n) throw Error("verify_cocycle: size mismatch");
  for (int x = 0; x < n; ++x) {
    if (!alpha(x, FiniteGroup::identity).is_one())
      verdict.violations.push_back({CocycleViolation::Kind::normalization, x, FiniteGroup::identity, 0});
    if (!alpha(FiniteGroup::identity, x).is_one())
      verdict.violations.push_back({CocycleViolation::Kind::normalization, FiniteGroup::identity, x, 0});
  }
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int z = 0; z < n; ++z) {
        RootOfUnity lhs = alpha(x, y) * alpha(g.mul(x, y), z);
        RootOfUnity rhs = alpha(x, g.mul(y, z)) * alpha(y, z);
        if (!(lhs == rhs))
          verdict.violations.push_back({CocycleViolation::Kind::identity, x, y, z});
      }
  verdict.ok = verdict.violations.empty();
  return verdict;
}

TwoCocycle coboundary(const FiniteGroup& g, const std::vector<RootOfUnity>& beta) {
  if (static_cast<int>(beta.size()) != g.order) throw Error("coboundary: size mismatch");
  if (!beta[FiniteGroup::identity].is_one()) throw Error("coboundary: beta(1) must be 1");
  TwoCocycle c = TwoCocycle::trivial(g.order);
  for (int x = 0; x < g.order; ++x)
    for (int y = 0; y < g.order; ++y)
      c(x, y) = beta[x] * beta[y] * beta[g.mul(x, y)].inverse();
  return c;
}

TwoCocycle cocycle_product(const TwoCocycle& a, const TwoCocycle& b) {
  if (a.group_order != b.group_order) throw Error("cocycle_product: size mismatch");
  TwoCocycle c = a;
  for (int x = 0; x < a.group_order; ++x)
    for (int y = 0; y < a.group_order; ++y) c(x, y) = a(x, y) * b(x, y);
  return c;
}

TwoCocycle cocycle_ratio(const TwoCocycle& a, const TwoCocycle& b) {
  if (a.group_order != b.group_order) throw Error("cocycle_ratio: size mismatch");
  TwoCocycle c = a;
  for (int x = 0; x < a.group_order; ++x)
    for (int y = 0; y < a.group_order; ++y) c(x, y) = a(x, y) * b(x, y).inverse();
  return c;
}

SubgroupGroup subgroup_as_group(const FiniteGroup& g, const Subgroup& h) {
  if (!is_subgroup_of(g, h)) throw Error("subgroup_as_group: not a subgroup");
  SubgroupGroup sg;
  sg.to_parent = h.members;  // sorted, identity (= 0) first
  const int m = h.order();
  std::vector<int> back(g.order, -1);
  for (int i = 0; i < m; ++i) back[h.members[i]] = i;
  std::vector<std::vector<int>> table(m, std::vector<int>(m));
  std::vector<std::string> labels(m);
  for (int i = 0; i < m; ++i) {
    labels[i] = g.labels[h.members[i]];
    for (int j = 0; j < m; ++j) table[i][j] = back[g.mul(h.members[i], h.members[j])];
  }
  sg.group = group_from_table(std::move(table), std::move(labels));
  return sg;
}

TwoCocycle restrict_cocycle(const TwoCocycle& alpha, const SubgroupGroup& sg) {
  const int m = sg.group.order;
  TwoCocycle c = TwoCocycle::trivial(m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) c(i, j) = alpha.val[sg.to_parent[i]][sg.to_parent[j]];
  return c;
}

CohomologyResult are_cohomologous(const FiniteGroup& g, const TwoCocycle& alpha1,
                                  const TwoCocycle& alpha2) {
  const int n = g.order;
  if (alpha1.group_order != n || alpha2.group_order != n)
    throw Error("are_cohomologous: size mismatch");
  TwoCocycle gamma = cocycle_ratio(alpha2, alpha1);

  long long m = 1;
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) m = std::lcm(m, gamma(x, y).order);
  const long long modulus = checked_mul(m, n);

  CohomologyResult result;
  result.modulus = modulus;
  if (n == 1) {
    result.beta = std::vector<RootOfUnity>{RootOfUnity::one()};
    return result;
  }

  // Unknowns: exponents of beta on non-identity elements (beta(1) = 1).
  // Equation per (g,h): e(g) + e(h) - e(gh) == exp(gamma(g,h)) (mod modulus).
  const int unknowns = n - 1;
  std::vector<std::vector<long long>> a;
  std::vector<long long> b;
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      std::vector<long long> row(unknowns, 0);
      auto add = [&](int elem, long long coeff) {
        if (elem != FiniteGroup::identity) row[elem - 1] += coeff;
      };
      add(x, 1);
      add(y, 1);
      add(g.mul(x, y), -1);
      a.push_back(std::move(row));
      b.push_back(checked_mul(gamma(x, y).exponent, modulus / gamma(x, y).order));
    }

  DiagonalForm f = smith_diagonalize(std::move(a));
  const int rows = static_cast<int>(f.d.size());
  std::vector<long long> c(rows, 0);
  for (int i = 0; i < rows; ++i) {
    long long acc = 0;
    for (int j = 0; j < rows; ++j)
      acc = positive_mod(acc + checked_mul(positive_mod(f.u[i][j], modulus), positive_mod(b[j], modulus)),
                         modulus);
    c[i] = acc;
  }

  std::vector<long long> y(unknowns, 0);
  for (int i = 0; i < rows; ++i) {
    long long d = i < unknowns ? f.d[i][i] : 0;
    auto sol = solve_congruence(d, c[i], modulus);
    if (!sol) return result;  // not cohomologous within mu_modulus
    if (i < unknowns) y[i] = *sol;
  }
  std::vector<long long> x(unknowns, 0);
  for (int i = 0; i < unknowns; ++i) {
    long long acc = 0;
    for (int j = 0; j < unknowns; ++j)
      acc = positive_mod(acc + checked_mul(positive_mod(f.v[i][j], modulus), y[j]), modulus);
    x[i] = acc;
  }

  std::vector<RootOfUnity> beta(n, RootOfUnity::one());
  for (int e = 1; e < n; ++e) beta[e] = RootOfUnity::make(modulus, x[e - 1]);

  // The certificate is only returned after an exact re-check.
  TwoCocycle candidate = cocycle_product(alpha1, coboundary(g, beta));
  if (!(candidate == alpha2)) return result;
  result.beta = std::move(beta);
  return result;
}

CocycleFamily CocycleFamily::trivial(int points, int group_order) {
  CocycleFamily f;
  f.points = points;
  f.group_order = group_order;
  f.slices.assign(points, TwoCocycle::trivial(group_order));
  return f;
}

bool CocycleFamily::is_trivial() const {
  for (const auto& s : slices)
    for (const auto& row : s.val)
      for (const auto& v : row)
        if (!v.is_one()) return false;
  return true;
}

FamilyVerdict verify_family(const FiniteGroup& g, const GroupAction& a,
                            const CocycleFamily& fam) {
  FamilyVerdict verdict;
  const int n = g.order;
  if (fam.group_order != n || fam.points != a.points ||
      static_cast<int>(fam.slices.size()) != a.points)
    throw Error("verify_family: size mismatch");
  for (int p = 0; p < fam.points; ++p) {
    for (int x = 0; x < n; ++x) {
      if (!fam.slice(p)(x, FiniteGroup::identity).is_one() ||
          !fam.slice(p)(FiniteGroup::identity, x).is_one())
        verdict.violations.push_back({p, x, 0, 0, true});
    }
  }
  for (int p = 0; p < fam.points; ++p)
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y)
        for (int z = 0; z < n; ++z) {
          int q = a.apply(p, g.inv(z));  // M = N . k^{-1}
          RootOfUnity lhs = fam.slice(p)(x, g.mul(y, z)) * fam.slice(p)(y, z);
          RootOfUnity rhs = fam.slice(q)(x, y) * fam.slice(p)(g.mul(x, y), z);
          if (!(lhs == rhs)) verdict.violations.push_back({p, x, y, z, false});
        }
  verdict.ok = verdict.violations.empty();
  return verdict;
}

}  // namespace orbikit
