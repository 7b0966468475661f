#include "orbikit/boson.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <functional>

namespace orbikit {

namespace {

// Depth lattice in half-units: untwisted 2, 4, 6, ...; twisted 1, 3, 5, ...
// Both sectors step by a whole unit.
constexpr int kStepHu = 2;
int min_depth(Sector sector) { return sector == Sector::twisted ? 1 : 2; }

// Generalized binomial C(x, j) for real x and integer j >= 0.
double binom_general(double x, int j) {
  double v = 1.0;
  for (int t = 0; t < j; ++t) v *= (x - t) / (t + 1);
  return v;
}

void enumerate_monomials(const FockWindow& w, BosonMonomial& current, int degree,
                         BosonLabel min_label, std::vector<BosonMonomial>& out) {
  out.push_back(current);
  for (int depth = min_label.depth_hu; degree + depth <= w.cutoff_hu;
       depth += kStepHu) {
    for (int color = (depth == min_label.depth_hu ? min_label.color : 0); color < w.rank;
         ++color) {
      current.push_back({depth, color});
      enumerate_monomials(w, current, degree + depth, {depth, color}, out);
      current.pop_back();
    }
  }
}

int monomial_degree(const BosonMonomial& m) {
  int d = 0;
  for (const auto& l : m) d += l.depth_hu;
  return d;
}

// Apply a_color(n) to a single monomial; results accumulate as
// (coefficient, monomial) into out. Creation beyond the cutoff contributes
// nothing (the caller tracks validity bounds).
void apply_mode(const FockWindow& w, int color, int n_hu, const BosonMonomial& mono,
                Complex coeff, std::vector<std::pair<Complex, BosonMonomial>>& out) {
  if (n_hu == 0) return;  // charge-zero: a(0) = 0
  if (n_hu < 0) {
    BosonLabel label{-n_hu, color};
    if (monomial_degree(mono) - n_hu > w.cutoff_hu) return;
    BosonMonomial next = mono;
    next.insert(std::upper_bound(next.begin(), next.end(), label), label);
    out.emplace_back(coeff, std::move(next));
    return;
  }
  BosonLabel label{n_hu, color};
  auto range = std::equal_range(mono.begin(), mono.end(), label);
  long long mult = range.second - range.first;
  if (mult == 0) return;
  BosonMonomial next = mono;
  next.erase(next.begin() + (range.first - mono.begin()));
  out.emplace_back(coeff * (static_cast<double>(n_hu) / 2.0) * static_cast<double>(mult),
                   std::move(next));
}

}  // namespace

FockWindow fock_window(int rank, int cutoff_hu, Sector sector) {
  if (rank < 1 || rank > 2) throw Error("fock_window: rank must be 1 or 2");
  if (cutoff_hu < 0) throw Error("fock_window: negative cutoff");
  if (sector == Sector::untwisted && cutoff_hu % 2 != 0)
    throw Error("fock_window: untwisted cutoff must be a whole degree");
  FockWindow w;
  w.rank = rank;
  w.cutoff_hu = cutoff_hu;
  w.sector = sector;

  BosonMonomial scratch;
  std::vector<BosonMonomial> all;
  enumerate_monomials(w, scratch, 0, {min_depth(sector), 0}, all);
  std::stable_sort(all.begin(), all.end(), [](const BosonMonomial& a, const BosonMonomial& b) {
    int da = monomial_degree(a), db = monomial_degree(b);
    if (da != db) return da < db;
    return a < b;
  });
  w.basis = std::move(all);
  w.graded_dims.assign(cutoff_hu + 1, 0);
  w.degree_start.assign(cutoff_hu + 2, 0);
  for (int i = 0; i < w.dim(); ++i) {
    int d = monomial_degree(w.basis[i]);
    w.degree_hu.push_back(d);
    w.graded_dims[d] += 1;
    w.index[w.basis[i]] = i;
  }
  int acc = 0;
  for (int d = 0; d <= cutoff_hu; ++d) {
    w.degree_start[d] = acc;
    acc += w.graded_dims[d];
  }
  w.degree_start[cutoff_hu + 1] = acc;
  return w;
}

long long partition_count(const FockWindow& w, int degree_hu) {
  // Independent path: count multisets of (depth, color) with the given total.
  std::function<long long(int, int, int)> count = [&](int remaining, int max_depth,
                                                      int max_color) -> long long {
    if (remaining == 0) return 1;
    long long total = 0;
    for (int depth = std::min(max_depth, remaining); depth >= min_depth(w.sector);
         depth -= kStepHu) {
      if ((depth - min_depth(w.sector)) % kStepHu != 0) continue;
      for (int color = (depth == max_depth ? max_color : w.rank - 1); color >= 0; --color)
        total += count(remaining - depth, depth, color);
    }
    return total;
  };
  if (degree_hu < 0 || degree_hu > w.cutoff_hu) return 0;
  return count(degree_hu, degree_hu, w.rank - 1);
}

ModeOp heisenberg_mode(const FockWindow& w, int color, int n_hu) {
  if (color < 0 || color >= w.rank) throw Error("heisenberg_mode: bad color");
  if (n_hu != 0 && std::abs(n_hu) % 2 != w.mode_parity())
    throw SectorMismatch("heisenberg_mode: mode " + std::to_string(n_hu) +
                         " off the sector lattice");
  ModeOp op;
  op.label = "a" + std::to_string(color + 1) + "(" + std::to_string(n_hu) + "/2)";
  op.n_hu = n_hu;
  op.shift_hu = -n_hu;
  op.valid_in_max_hu = w.cutoff_hu - std::max(0, -n_hu);
  op.matrix = Mat::Zero(w.dim(), w.dim());
  for (int j = 0; j < w.dim(); ++j) {
    std::vector<std::pair<Complex, BosonMonomial>> results;
    apply_mode(w, color, n_hu, w.basis[j], 1.0, results);
    for (auto& [c, mono] : results) {
      auto it = w.index.find(mono);
      if (it != w.index.end()) op.matrix(it->second, j) += c;
    }
  }
  return op;
}

ModeOp quadratic_mode(const FockWindow& w, int n_hu, int c1, int c2) {
  if (n_hu % 2 != 0)
    throw SectorMismatch("quadratic_mode: h-modes are integer in both sectors");
  if (c1 < 0 || c1 >= w.rank || c2 < 0 || c2 >= w.rank) throw Error("quadratic_mode: bad color");
  ModeOp op;
  op.label = "h(" + std::to_string(n_hu / 2) + ")";
  op.n_hu = n_hu;
  op.shift_hu = -n_hu;
  op.valid_in_max_hu = w.cutoff_hu - std::max(0, -n_hu);
  op.matrix = Mat::Zero(w.dim(), w.dim());

  const int par = w.mode_parity() == 0 ? 2 : 1;
  const int kmax = w.cutoff_hu + std::abs(n_hu) + par;
  for (int j = 0; j < w.dim(); ++j) {
    const BosonMonomial& mono = w.basis[j];
    for (int k = -kmax; k <= kmax; k += par) {
      if (w.mode_parity() == 1 && std::abs(k) % 2 != 1) continue;
      if (w.mode_parity() == 0 && k == 0) continue;
      int m = n_hu - k;
      if (m == 0 && w.mode_parity() == 0) continue;
      // term :a_{c1}(k) a_{c2}(m):, creation factor applied last
      int color_left = c1, color_right = c2, mode_left = k, mode_right = m;
      if (k > 0 && m < 0) {
        std::swap(color_left, color_right);
        std::swap(mode_left, mode_right);
      }
      std::vector<std::pair<Complex, BosonMonomial>> mid;
      apply_mode(w, color_right, mode_right, mono, Complex(0.5), mid);
      for (auto& [c, half] : mid) {
        std::vector<std::pair<Complex, BosonMonomial>> done;
        apply_mode(w, color_left, mode_left, half, c, done);
        for (auto& [cc, full] : done) {
          auto it = w.index.find(full);
          if (it != w.index.end()) op.matrix(it->second, j) += cc;
        }
      }
    }
  }
  if (w.sector == Sector::twisted && n_hu == 0 && c1 == c2)
    op.matrix += (1.0 / 16.0) * Mat::Identity(w.dim(), w.dim());
  return op;
}

ModeOp quadratic_mode_invariant(const FockWindow& w, int n_hu) {
  ModeOp op = quadratic_mode(w, n_hu, 0, 0);
  for (int c = 1; c < w.rank; ++c) op.matrix += quadratic_mode(w, n_hu, c, c).matrix;
  op.label = "H(" + std::to_string(n_hu / 2) + ")";
  return op;
}

ModeOp quartic_mode(const FockWindow& w, int n_hu) {
  if (w.rank != 1) throw Error("quartic_mode: rank-1 only");
  if (n_hu % 2 != 0)
    throw SectorMismatch("quartic_mode: modes of the quartic are integer in both sectors");
  ModeOp op;
  op.label = "J(" + std::to_string(n_hu / 2) + ")";
  op.n_hu = n_hu;
  op.shift_hu = -n_hu;
  op.valid_in_max_hu = w.cutoff_hu - std::max(0, -n_hu);
  op.matrix = Mat::Zero(w.dim(), w.dim());

  const int par = kStepHu;
  const int kmax = w.cutoff_hu + std::abs(n_hu) + 2;
  const int off = w.mode_parity();
  std::vector<int> lattice;
  for (int k = -kmax; k <= kmax; k += 1) {
    if (k == 0) continue;
    if (std::abs(k) % 2 != off % 2 && off == 1) continue;
    if (k % 2 != 0 && off == 0) continue;
    lattice.push_back(k);
  }
  (void)par;

  for (int j = 0; j < w.dim(); ++j) {
    for (int k1 : lattice)
      for (int k2 : lattice)
        for (int k3 : lattice) {
          int k4 = n_hu - k1 - k2 - k3;
          if (k4 == 0 || std::abs(k4) > kmax) continue;
          if (off == 1 && std::abs(k4) % 2 != 1) continue;
          if (off == 0 && k4 % 2 != 0) continue;
          // normal ordering: annihilators first, creators after
          std::vector<int> modes{k1, k2, k3, k4};
          std::sort(modes.begin(), modes.end(), std::greater<int>());
          std::vector<std::pair<Complex, BosonMonomial>> cur{{1.0, w.basis[j]}};
          bool dead = false;
          for (int mode : modes) {
            std::vector<std::pair<Complex, BosonMonomial>> next;
            for (auto& [c, m] : cur) apply_mode(w, 0, mode, m, c, next);
            cur = std::move(next);
            if (cur.empty()) {
              dead = true;
              break;
            }
          }
          if (dead) continue;
          for (auto& [c, m] : cur) {
            auto it = w.index.find(m);
            if (it != w.index.end()) op.matrix(it->second, j) += c;
          }
        }
  }
  return op;
}

Vec apply_checked(const FockWindow& w, const ModeOp& op, const Vec& v) {
  for (int i = 0; i < w.dim(); ++i)
    if (std::abs(v(i)) > 0 && w.degree_hu[i] > op.valid_in_max_hu)
      throw WindowTooSmall("apply_checked: input exceeds validity bound of " + op.label);
  return op.matrix * v;
}

Mat degree_projector(const FockWindow& w, int max_degree_hu) {
  Mat p = Mat::Zero(w.dim(), w.dim());
  for (int i = 0; i < w.dim(); ++i)
    if (w.degree_hu[i] <= max_degree_hu) p(i, i) = 1.0;
  return p;
}

Mat valid_columns(const FockWindow& w, const ModeOp& op) {
  Mat m = op.matrix;
  for (int j = 0; j < w.dim(); ++j)
    if (w.degree_hu[j] > op.valid_in_max_hu) m.col(j).setZero();
  return m;
}

VOAAutomorphism automorphism_action(const FockWindow& w, const Eigen::MatrixXd& o) {
  if (o.rows() != w.rank || o.cols() != w.rank)
    throw Error("automorphism_action: shape mismatch");
  if ((o.transpose() * o - Eigen::MatrixXd::Identity(w.rank, w.rank)).norm() > 1e-12)
    throw Error("automorphism_action: matrix is not orthogonal");
  VOAAutomorphism aut;
  aut.colors = o;
  Eigen::MatrixXd acc = o;
  aut.order = 1;
  while ((acc - Eigen::MatrixXd::Identity(w.rank, w.rank)).norm() > 1e-12) {
    acc = acc * o;
    ++aut.order;
    if (aut.order > 64) throw Error("automorphism_action: order too large");
  }

  aut.gamma = Mat::Zero(w.dim(), w.dim());
  for (int j = 0; j < w.dim(); ++j) {
    const BosonMonomial& mono = w.basis[j];
    // expand prod_parts (sum_c' O(c', c) a_{c'}(-depth)) over color choices
    std::vector<std::pair<Complex, BosonMonomial>> terms{{1.0, {}}};
    for (const BosonLabel& label : mono) {
      std::vector<std::pair<Complex, BosonMonomial>> next;
      for (const auto& [coeff, partial] : terms) {
        for (int c2 = 0; c2 < w.rank; ++c2) {
          double entry = o(c2, label.color);
          if (entry == 0.0) continue;
          BosonMonomial ext = partial;
          BosonLabel nl{label.depth_hu, c2};
          ext.insert(std::upper_bound(ext.begin(), ext.end(), nl), nl);
          next.emplace_back(coeff * entry, std::move(ext));
        }
      }
      terms = std::move(next);
    }
    for (const auto& [coeff, full] : terms) aut.gamma(w.index.at(full), j) += coeff;
  }
  return aut;
}

ModeFamily generator_modes(const FockWindow& w, int max_abs_n_hu) {
  ModeFamily fam;
  fam.max_abs_n_hu = max_abs_n_hu;
  const int par = kStepHu;
  const int start = w.mode_parity() == 1 ? 1 : 2;
  for (int c = 0; c < w.rank; ++c)
    for (int n = start; n <= max_abs_n_hu; n += par) {
      fam.a[{c, n}] = heisenberg_mode(w, c, n).matrix;
      fam.a[{c, -n}] = heisenberg_mode(w, c, -n).matrix;
    }
  return fam;
}

ModeFamily twist_family(const ModeFamily& fam, const Eigen::MatrixXd& g) {
  ModeFamily out;
  out.max_abs_n_hu = fam.max_abs_n_hu;
  for (const auto& [key, mat] : fam.a) {
    auto [color, n] = key;
    Mat twisted = Mat::Zero(mat.rows(), mat.cols());
    for (int c2 = 0; c2 < g.rows(); ++c2) {
      double entry = g(c2, color);
      if (entry == 0.0) continue;
      twisted += entry * fam.a.at({c2, n});
    }
    out.a[key] = std::move(twisted);
  }
  return out;
}

Intertwiner find_intertwiner(const FockWindow& w, const ModeFamily& m_modes,
                             const ModeFamily& n_modes, const Eigen::MatrixXd& g,
                             const ToleranceConfig& tol) {
  const int interior_hu = w.cutoff_hu - kStepHu;
  Intertwiner itw;
  itw.max_degree_hu = interior_hu;
  for (int i = 0; i < w.dim(); ++i)
    if (w.degree_hu[i] <= interior_hu) itw.interior.push_back(i);

  ModeFamily twisted = twist_family(m_modes, g);

  // Unknown phi is degree preserving: one square block per interior degree.
  std::vector<int> block_of_degree(w.cutoff_hu + 1, -1);
  std::vector<int> block_size, block_offset;
  int unknowns = 0;
  for (int d = 0; d <= interior_hu; ++d) {
    int sz = w.graded_dims[d];
    if (sz == 0) continue;
    block_of_degree[d] = static_cast<int>(block_size.size());
    block_offset.push_back(unknowns);
    block_size.push_back(sz);
    unknowns += sz * sz;
  }

  // Equations: phi_{dout} X[dout,din] = X'[dout,din] phi_{din} for every
  // generator mode and every valid interior (din, dout) pair.
  struct Coef {
    int row, col;
    Complex value;
  };
  std::vector<Coef> trips;
  int rows = 0;
  auto block_view = [&](const Mat& full, int dout, int din) {
    return full.block(w.degree_start[dout], w.degree_start[din], w.graded_dims[dout],
                      w.graded_dims[din]);
  };
  for (const auto& [key, xn] : n_modes.a) {
    auto [color, n_hu] = key;
    const Mat& xm = twisted.a.at(key);
    for (int din = 0; din <= interior_hu; ++din) {
      int dout = din - n_hu;
      if (dout < 0 || dout > interior_hu) continue;
      if (block_of_degree[din] < 0 || block_of_degree[dout] < 0) continue;
      const int bi = block_of_degree[din], bo = block_of_degree[dout];
      const int si = block_size[bi], so = block_size[bo];
      Mat xnb = block_view(xn, dout, din);
      Mat xmb = block_view(xm, dout, din);
      // rows indexed by (r, c) entry of the so x si result
      for (int r = 0; r < so; ++r)
        for (int c = 0; c < si; ++c) {
          int row = rows + r * si + c;
          // phi_out(r, t) * xn(t, c)
          for (int t = 0; t < so; ++t)
            if (xnb(t, c) != Complex(0.0))
              trips.push_back({row, block_offset[bo] + r * so + t, xnb(t, c)});
          // - xm(r, t) * phi_in(t, c)
          for (int t = 0; t < si; ++t)
            if (xmb(r, t) != Complex(0.0))
              trips.push_back({row, block_offset[bi] + t * si + c, -xmb(r, t)});
        }
      rows += so * si;
    }
  }

  Mat system = Mat::Zero(rows, unknowns);
  for (const auto& t : trips) system(t.row, t.col) += t.value;
  std::vector<Vec> null = kernel_basis(system, tol);
  if (null.empty()) throw NotStable("find_intertwiner: no solution at this window");

  const int idim = static_cast<int>(itw.interior.size());
  auto assemble = [&](const Vec& coords) {
    Mat phi = Mat::Zero(idim, idim);
    // interior indices are ordered by degree, so blocks are contiguous
    int at = 0;
    for (std::size_t b = 0; b < block_size.size(); ++b) {
      const int s = block_size[b];
      for (int r = 0; r < s; ++r)
        for (int c = 0; c < s; ++c) phi(at + r, at + c) = coords(block_offset[b] + r * s + c);
      at += s;
    }
    return phi;
  };
  auto invertible = [&](const Mat& phi) {
    Eigen::JacobiSVD<Mat> svd(phi);
    const auto& sv = svd.singularValues();
    return sv(sv.size() - 1) > tol.eps_rank * std::max(1.0, sv(0));
  };

  Mat phi;
  bool found = false;
  for (const Vec& v : null) {
    Mat cand = assemble(v);
    if (invertible(cand)) {
      phi = cand;
      found = true;
      break;
    }
  }
  if (!found) {
    Rng rng(0xf00dULL);
    for (int attempt = 0; attempt < 16 && !found; ++attempt) {
      Vec mix = Vec::Zero(unknowns);
      for (const Vec& v : null) mix += rng.normal_complex() * v;
      Mat cand = assemble(mix);
      if (invertible(cand)) {
        phi = cand;
        found = true;
      }
    }
  }
  if (!found) throw NotStable("find_intertwiner: solution space has no invertible element");

  // Scale so unitary solutions come out unitary, then fix the phase.
  phi *= std::sqrt(static_cast<double>(idim)) / phi.norm();
  for (int i = 0; i < idim; ++i)
    if (std::abs(phi(i, 0)) > 1e-8) {
      Complex phase = phi(i, 0) / std::abs(phi(i, 0));
      phi *= std::conj(phase);
      break;
    }

  // Residual over the constrained blocks.
  double worst = 0.0;
  for (const auto& [key, xn] : n_modes.a) {
    const Mat& xm = twisted.a.at(key);
    auto [color, n_hu] = key;
    for (int din = 0; din <= interior_hu; ++din) {
      int dout = din - n_hu;
      if (dout < 0 || dout > interior_hu) continue;
      if (block_of_degree[din] < 0 || block_of_degree[dout] < 0) continue;
      // interior vectors are a degree-sorted prefix of the window basis
      int oi = w.degree_start[din], oo = w.degree_start[dout];
      Mat lhs = phi.block(oo, oo, w.graded_dims[dout], w.graded_dims[dout]) *
                block_view(xn, dout, din);
      Mat rhs = block_view(xm, dout, din) *
                phi.block(oi, oi, w.graded_dims[din], w.graded_dims[din]);
      worst = std::max(worst, (lhs - rhs).norm());
    }
  }
  itw.residual = worst;
  itw.phi = std::move(phi);
  return itw;
}

std::vector<Mat> fixed_vectors(const FockWindow& w, const std::vector<Mat>& gammas,
                               const ToleranceConfig& tol) {
  std::vector<Mat> out;
  for (int d = 0; d <= w.cutoff_hu; ++d) {
    const int sz = w.graded_dims[d];
    if (sz == 0) {
      out.push_back(Mat::Zero(0, 0));
      continue;
    }
    Mat stacked(static_cast<int>(gammas.size()) * sz, sz);
    for (std::size_t t = 0; t < gammas.size(); ++t)
      stacked.block(static_cast<int>(t) * sz, 0, sz, sz) =
          gammas[t].block(w.degree_start[d], w.degree_start[d], sz, sz) -
          Mat::Identity(sz, sz);
    std::vector<Vec> null = kernel_basis(stacked, tol);
    Mat basis(sz, static_cast<int>(null.size()));
    for (int i = 0; i < static_cast<int>(null.size()); ++i) basis.col(i) = null[i];
    out.push_back(std::move(basis));
  }
  return out;
}

std::vector<WeakAssocSample> weak_assoc_samples(const FockWindow& w, int min_samples) {
  std::vector<WeakAssocSample> samples;
  const int ohu = w.mode_parity();  // r/T in half-units
  for (int i = 0; i < w.dim() && static_cast<int>(samples.size()) < 4 * min_samples; ++i) {
    int mu = 0;
    for (const BosonLabel& l : w.basis[i]) mu = std::max(mu, l.depth_hu);
    int deg = w.degree_hu[i];
    // l must dominate the annihilation bound: 2l + ohu > mu
    int l0 = (mu - ohu) / 2 + 1;
    if (l0 < 0) l0 = 0;
    for (int l = l0; l <= l0 + 1; ++l)
      for (int p = l; p <= l + 2; ++p) {
        int pi_hu = 2 * p + ohu;
        for (int dq = -1; dq <= 1; ++dq) {
          int kappa_hu = -pi_hu + 2 * dq;
          if (kappa_hu == 0) continue;
          if (kappa_hu < 0 && deg - kappa_hu > w.cutoff_hu) continue;  // creation room
          if (kappa_hu < 0 && deg - kappa_hu - pi_hu > w.cutoff_hu) continue;
          int q = (kappa_hu - ohu) / 2;
          if (2 * q + ohu != kappa_hu) continue;  // stay on the lattice
          samples.push_back({i, p, q, l, false});
        }
      }
    // a vacuum-mode sample now and then
    if (i % 3 == 0) samples.push_back({i, -1, -1, 0, true});
  }
  if (static_cast<int>(samples.size()) < min_samples)
    throw WindowTooSmall("weak_assoc_samples: window too small for the requested samples");
  return samples;
}

WeakAssocReport weak_assoc_check(const FockWindow& w,
                                 const std::vector<WeakAssocSample>& samples) {
  if (samples.empty()) throw WindowTooSmall("weak_assoc_check: no interior samples");
  WeakAssocReport report;
  const int ohu = w.mode_parity();
  const double rT = ohu / 2.0;

  for (const WeakAssocSample& s : samples) {
    const BosonMonomial& mono = w.basis[s.basis_index];
    const int deg = w.degree_hu[s.basis_index];
    Vec wvec = Vec::Zero(w.dim());
    wvec(s.basis_index) = 1.0;

    if (s.u_is_vacuum) {
      // Y(1, z) = id: both sides are delta_{p,-1} a(kappa) w.
      int kappa_hu = 2 * s.q + ohu;
      if (kappa_hu == 0) continue;
      ModeOp aq = heisenberg_mode(w, 0, kappa_hu);
      if (deg > aq.valid_in_max_hu) continue;
      Vec lhs = (s.p == -1) ? Vec(aq.matrix * wvec) : Vec(Vec::Zero(w.dim()));
      Vec rhs = (s.p == -1) ? Vec(aq.matrix * wvec) : Vec(Vec::Zero(w.dim()));
      report.max_residual = std::max(report.max_residual, (lhs - rhs).norm());
      ++report.samples_used;
      continue;
    }

    int mu = 0;
    for (const BosonLabel& l : mono) mu = std::max(mu, l.depth_hu);
    if (!(2 * s.l + ohu > mu)) throw WindowTooSmall("weak_assoc_check: l below the bound");
    if (s.p < s.l) throw WindowTooSmall("weak_assoc_check: composite sample (p < l)");

    const int pi_hu = 2 * s.p + ohu;
    const int kappa_hu = 2 * s.q + ohu;
    if (kappa_hu == 0) continue;

    ModeOp ap = heisenberg_mode(w, 0, pi_hu);
    ModeOp aq = heisenberg_mode(w, 0, kappa_hu);
    if (deg > aq.valid_in_max_hu) throw WindowTooSmall("weak_assoc_check: v-mode invalid");
    Vec mid = aq.matrix * wvec;
    // the intermediate lives at degree deg - kappa
    if (deg - kappa_hu > ap.valid_in_max_hu)
      throw WindowTooSmall("weak_assoc_check: u-mode invalid on the intermediate");
    Vec lhs = ap.matrix * mid;

    // v-side bound m: a_{q + s/T + n} w = 0 for all n > m.
    int m_bound = std::max(0, (mu - ohu) / 2 - s.q);
    Vec rhs = Vec::Zero(w.dim());
    for (int i = 0; i <= std::min(m_bound, s.p - s.l); ++i) {
      int j = s.l + i + 1 - s.p;  // composite index p-l-i+j = 1 (vacuum term)
      if (j < 0) continue;
      double coeff = binom_general(static_cast<double>(s.p - s.l), i) *
                     binom_general(static_cast<double>(s.l) + rT, j);
      // vacuum mode index q + (r+s)/T + l + i - j must be -1
      double mode = s.q + 2.0 * rT + s.l + i - j;
      if (std::abs(mode + 1.0) < 1e-12) rhs += coeff * wvec;
    }
    report.max_residual = std::max(report.max_residual, (lhs - rhs).norm());
    ++report.samples_used;
  }
  return report;
}

}  // namespace orbikit
