#include "orbikit/groups.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace orbikit {

namespace {

void validate_table(const FiniteGroup& g) {
  const int n = g.order;
  if (n < 1 || static_cast<int>(g.table.size()) != n)
    throw Error("group table: wrong row count");
  for (const auto& row : g.table) {
    if (static_cast<int>(row.size()) != n) throw Error("group table: wrong column count");
    for (int v : row)
      if (v < 0 || v >= n) throw Error("group table: entry out of range");
  }
  for (int h = 0; h < n; ++h) {
    if (g.table[FiniteGroup::identity][h] != h || g.table[h][FiniteGroup::identity] != h)
      throw Error("group table: element 0 is not an identity");
  }
  for (int a = 0; a < n; ++a) {
    bool has_inverse = false;
    for (int b = 0; b < n; ++b)
      if (g.table[a][b] == FiniteGroup::identity && g.table[b][a] == FiniteGroup::identity)
        has_inverse = true;
    if (!has_inverse) throw Error("group table: missing inverse");
  }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        if (g.table[g.table[a][b]][c] != g.table[a][g.table[b][c]])
          throw Error("group table: associativity fails");
}

std::vector<int> compose(const std::vector<int>& p, const std::vector<int>& q) {
  // left-to-right: apply p, then q
  std::vector<int> r(p.size());
  for (std::size_t x = 0; x < p.size(); ++x) r[x] = q[p[x]];
  return r;
}

}  // namespace

bool Subgroup::contains(int g) const {
  return std::binary_search(members.begin(), members.end(), g);
}

FiniteGroup group_from_table(std::vector<std::vector<int>> table, std::vector<std::string> labels) {
  FiniteGroup g;
  g.order = static_cast<int>(table.size());
  g.table = std::move(table);
  if (labels.empty()) {
    for (int i = 0; i < g.order; ++i) labels.push_back("e" + std::to_string(i));
  }
  if (static_cast<int>(labels.size()) != g.order) throw Error("group labels: wrong count");
  g.labels = std::move(labels);
  g.inverse.assign(g.order, -1);
  validate_table(g);
  for (int a = 0; a < g.order; ++a)
    for (int b = 0; b < g.order; ++b)
      if (g.table[a][b] == FiniteGroup::identity) g.inverse[a] = b;
  return g;
}

FiniteGroup group_from_permutations(const std::vector<std::vector<int>>& generators,
                                    int order_cap) {
  std::size_t domain = 0;
  for (const auto& p : generators) domain = std::max(domain, p.size());
  if (domain == 0) domain = 1;
  for (const auto& p : generators) {
    if (p.size() != domain) throw Error("generators act on different domains");
    std::vector<bool> seen(domain, false);
    for (int v : p) {
      if (v < 0 || v >= static_cast<int>(domain) || seen[v])
        throw Error("generator is not a permutation");
      seen[v] = true;
    }
  }

  std::vector<int> id(domain);
  for (std::size_t i = 0; i < domain; ++i) id[i] = static_cast<int>(i);

  std::vector<std::vector<int>> elems{id};
  std::map<std::vector<int>, int> index{{id, 0}};
  for (std::size_t head = 0; head < elems.size(); ++head) {
    for (const auto& gen : generators) {
      auto next = compose(elems[head], gen);
      if (!index.contains(next)) {
        if (static_cast<int>(elems.size()) >= order_cap)
          throw ClosureTooLarge("permutation closure exceeds cap " + std::to_string(order_cap));
        index[next] = static_cast<int>(elems.size());
        elems.push_back(std::move(next));
      }
    }
  }

  const int n = static_cast<int>(elems.size());
  std::vector<std::vector<int>> table(n, std::vector<int>(n));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) table[a][b] = index.at(compose(elems[a], elems[b]));
  return group_from_table(std::move(table));
}

Subgroup make_subgroup(const FiniteGroup& g, std::vector<int> members) {
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  Subgroup h{std::move(members)};
  if (!is_subgroup_of(g, h)) throw Error("member set is not a subgroup");
  return h;
}

Subgroup trivial_subgroup() { return Subgroup{{FiniteGroup::identity}}; }

Subgroup full_subgroup(const FiniteGroup& g) {
  Subgroup h;
  for (int i = 0; i < g.order; ++i) h.members.push_back(i);
  return h;
}

Subgroup generated_subgroup(const FiniteGroup& g, const std::vector<int>& seed) {
  std::set<int> closure{FiniteGroup::identity};
  for (int s : seed) closure.insert(s);
  bool grew = true;
  while (grew) {
    grew = false;
    std::vector<int> cur(closure.begin(), closure.end());
    for (int a : cur)
      for (int b : cur) {
        if (closure.insert(g.mul(a, b)).second) grew = true;
        if (closure.insert(g.inv(a)).second) grew = true;
      }
  }
  return Subgroup{std::vector<int>(closure.begin(), closure.end())};
}

bool is_subgroup_of(const FiniteGroup& g, const Subgroup& h) {
  if (h.members.empty() || !h.contains(FiniteGroup::identity)) return false;
  for (int a : h.members) {
    if (a < 0 || a >= g.order) return false;
    if (!h.contains(g.inv(a))) return false;
    for (int b : h.members)
      if (!h.contains(g.mul(a, b))) return false;
  }
  return true;
}

Subgroup conjugate_subgroup(const FiniteGroup& g, const Subgroup& h, int by) {
  std::vector<int> members;
  for (int a : h.members) members.push_back(g.mul(g.mul(g.inv(by), a), by));
  std::sort(members.begin(), members.end());
  return Subgroup{std::move(members)};
}

Subgroup center(const FiniteGroup& g) {
  std::vector<int> members;
  for (int a = 0; a < g.order; ++a) {
    bool central = true;
    for (int b = 0; b < g.order && central; ++b)
      if (g.mul(a, b) != g.mul(b, a)) central = false;
    if (central) members.push_back(a);
  }
  return Subgroup{std::move(members)};
}

std::vector<Subgroup> all_subgroups(const FiniteGroup& g) {
  if (g.order > 24) throw GroupTooLarge("all_subgroups: |G| > 24");
  std::set<std::vector<int>> found;
  found.insert(trivial_subgroup().members);
  // Grow: extend every known subgroup by every outside element until stable.
  bool grew = true;
  while (grew) {
    grew = false;
    std::vector<std::vector<int>> cur(found.begin(), found.end());
    for (const auto& members : cur) {
      for (int x = 0; x < g.order; ++x) {
        if (std::binary_search(members.begin(), members.end(), x)) continue;
        auto seed = members;
        seed.push_back(x);
        auto ext = generated_subgroup(g, seed);
        if (found.insert(ext.members).second) grew = true;
      }
    }
  }
  std::vector<Subgroup> out;
  for (const auto& m : found) out.push_back(Subgroup{m});
  std::sort(out.begin(), out.end(), [](const Subgroup& a, const Subgroup& b) {
    if (a.order() != b.order()) return a.order() < b.order();
    return a.members < b.members;
  });
  return out;
}

std::vector<int> right_transversal(const FiniteGroup& g, const Subgroup& h) {
  if (!is_subgroup_of(g, h)) throw Error("right_transversal: not a subgroup");
  std::vector<int> coset_rep;  // smallest member of each coset, in index order
  std::vector<bool> seen(g.order, false);
  for (int x = 0; x < g.order; ++x) {
    if (seen[x]) continue;
    coset_rep.push_back(x);
    for (int a : h.members) seen[g.mul(a, x)] = true;  // coset H x
  }
  return coset_rep;
}

GroupAction make_action(const FiniteGroup& g, std::vector<std::vector<int>> act,
                        std::vector<std::string> point_labels) {
  GroupAction a;
  a.points = static_cast<int>(act.size());
  a.act = std::move(act);
  if (point_labels.empty())
    for (int s = 0; s < a.points; ++s) point_labels.push_back("M" + std::to_string(s));
  if (static_cast<int>(point_labels.size()) != a.points) throw Error("action labels: wrong count");
  a.point_labels = std::move(point_labels);
  for (const auto& row : a.act) {
    if (static_cast<int>(row.size()) != g.order) throw Error("action table: wrong width");
    for (int v : row)
      if (v < 0 || v >= a.points) throw Error("action table: point out of range");
  }
  for (int s = 0; s < a.points; ++s)
    if (a.act[s][FiniteGroup::identity] != s) throw Error("action table: identity moves a point");
  for (int s = 0; s < a.points; ++s)
    for (int x = 0; x < g.order; ++x)
      for (int y = 0; y < g.order; ++y)
        if (a.act[s][g.mul(x, y)] != a.act[a.act[s][x]][y])
          throw Error("action table: right-action law fails");
  return a;
}

GroupAction trivial_action(const FiniteGroup& g, int points) {
  std::vector<std::vector<int>> act(points, std::vector<int>(g.order));
  for (int s = 0; s < points; ++s)
    for (int x = 0; x < g.order; ++x) act[s][x] = s;
  return make_action(g, std::move(act));
}

OrbitStabilizer orbit_and_stabilizer(const FiniteGroup& g, const GroupAction& a, int point) {
  if (point < 0 || point >= a.points) throw Error("orbit_and_stabilizer: bad point");
  std::set<int> orbit;
  std::vector<int> stab;
  for (int x = 0; x < g.order; ++x) {
    orbit.insert(a.apply(point, x));
    if (a.apply(point, x) == point) stab.push_back(x);
  }
  return {std::vector<int>(orbit.begin(), orbit.end()), make_subgroup(g, std::move(stab))};
}

std::vector<std::vector<int>> orbits(const FiniteGroup& g, const GroupAction& a) {
  std::vector<std::vector<int>> out;
  std::vector<bool> seen(a.points, false);
  for (int s = 0; s < a.points; ++s) {
    if (seen[s]) continue;
    auto os = orbit_and_stabilizer(g, a, s);
    for (int p : os.orbit) seen[p] = true;
    out.push_back(std::move(os.orbit));
  }
  return out;
}

FiniteGroup cyclic_group(int n) {
  std::vector<std::vector<int>> table(n, std::vector<int>(n));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) table[a][b] = (a + b) % n;
  std::vector<std::string> labels;
  for (int i = 0; i < n; ++i) labels.push_back("g" + std::to_string(i));
  return group_from_table(std::move(table), std::move(labels));
}

FiniteGroup klein_four_group() {
  // indices: 0 = (0,0), 1 = (1,0), 2 = (0,1), 3 = (1,1)
  auto xor2 = [](int a, int b) { return a ^ b; };
  std::vector<std::vector<int>> table(4, std::vector<int>(4));
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) table[a][b] = xor2(a, b);
  return group_from_table(std::move(table), {"1", "a", "b", "ab"});
}

FiniteGroup dihedral_group(int n) {
  // element = r^i s^j  with index i + n*j;  s r s = r^{-1}
  const int order = 2 * n;
  auto idx = [n](int i, int j) { return ((i % n + n) % n) + n * (j & 1); };
  std::vector<std::vector<int>> table(order, std::vector<int>(order));
  for (int i1 = 0; i1 < n; ++i1)
    for (int j1 = 0; j1 < 2; ++j1)
      for (int i2 = 0; i2 < n; ++i2)
        for (int j2 = 0; j2 < 2; ++j2) {
          // (r^i1 s^j1)(r^i2 s^j2) = r^{i1 + (-1)^j1 i2} s^{j1+j2}
          int i = j1 ? i1 - i2 : i1 + i2;
          table[idx(i1, j1)][idx(i2, j2)] = idx(i, j1 ^ j2);
        }
  std::vector<std::string> labels(order);
  for (int i = 0; i < n; ++i) {
    labels[idx(i, 0)] = "r" + std::to_string(i);
    labels[idx(i, 1)] = "r" + std::to_string(i) + "s";
  }
  return group_from_table(std::move(table), std::move(labels));
}

FiniteGroup symmetric_group_s3() {
  return group_from_permutations({{1, 0, 2}, {0, 2, 1}});
}

}  // namespace orbikit
