#pragma once

#include <map>
#include <string>
#include <vector>

#include "orbikit/groups.hpp"
#include "orbikit/numerics.hpp"

namespace orbikit {

enum class Sector { untwisted, twisted };

/// Creation label: color c (0-based, < rank) at depth n > 0. Depths are kept
/// in half-units so both sectors use exact integer arithmetic: untwisted
/// depths are even (1, 2, 3, ... weight units), twisted depths odd
/// (1/2, 3/2, ... weight units).
struct BosonLabel {
  int depth_hu = 0;
  int color = 0;
  auto operator<=>(const BosonLabel&) const = default;
};

/// Multiset of creation labels, sorted ascending; the empty monomial is the
/// vacuum.
using BosonMonomial = std::vector<BosonLabel>;

struct FockWindow {
  int rank = 1;
  int cutoff_hu = 0;
  Sector sector = Sector::untwisted;
  std::vector<BosonMonomial> basis;  // sorted by (degree, labels)
  std::map<BosonMonomial, int> index;
  std::vector<int> degree_hu;     // per basis vector
  std::vector<int> graded_dims;   // per half-unit degree 0..cutoff_hu
  std::vector<int> degree_start;  // first basis index of each degree

  int dim() const { return static_cast<int>(basis.size()); }
  int mode_parity() const { return sector == Sector::twisted ? 1 : 0; }
};

/// Degree-truncated charge-zero Fock space. Basis enumeration is
/// deterministic: by degree, then lexicographically in the sorted label
/// lists.
FockWindow fock_window(int rank, int cutoff_hu, Sector sector);

/// A window operator with its exact-validity bound: columns of inputs with
/// degree <= valid_in_max_hu are computed without touching truncated
/// degrees; higher columns hold the truncated projection and are excluded
/// from every identity check.
struct ModeOp {
  std::string label;
  int n_hu = 0;      // mode index in half-units
  int shift_hu = 0;  // output degree - input degree = -n_hu
  int valid_in_max_hu = 0;
  Mat matrix;
};

/// Generator mode a_c(n): creation appends a label, annihilation removes one
/// with coefficient n * multiplicity, a_c(0) = 0. Throws SectorMismatch when
/// n is not on the sector lattice.
ModeOp heisenberg_mode(const FockWindow& w, int color, int n_hu);

/// Quadratic mode h_{c1 c2}(n) = 1/2 sum_k :a_{c1}(k) a_{c2}(n-k): with
/// integer n. In the twisted sector the diagonal h_{cc}(0) carries the
/// normal-ordering constant 1/16.
ModeOp quadratic_mode(const FockWindow& w, int n_hu, int c1 = 0, int c2 = 0);

/// The rotation-invariant quadratic sum_c h_{cc}(n).
ModeOp quadratic_mode_invariant(const FockWindow& w, int n_hu);

/// Quartic mode of the weight-4 invariant (the second generator of the
/// rank-1 parity orbifold): sum over k1+k2+k3+k4 = n of
/// :a(k1) a(k2) a(k3) a(k4): with integer n. Rank 1 only.
ModeOp quartic_mode(const FockWindow& w, int n_hu);

/// Apply a mode to a vector, throwing WindowTooSmall when the vector has
/// support above the operator's validity bound.
Vec apply_checked(const FockWindow& w, const ModeOp& op, const Vec& v);

/// Projector onto degrees <= max_degree_hu.
Mat degree_projector(const FockWindow& w, int max_degree_hu);

/// Matrix restricted to the exactly-valid input columns (others zeroed).
Mat valid_columns(const FockWindow& w, const ModeOp& op);

struct VOAAutomorphism {
  Eigen::MatrixXd colors;  // orthogonal rank x rank
  int order = 1;
  Mat gamma;  // induced window operator
};

/// Induced action of an orthogonal color transformation of finite order.
VOAAutomorphism automorphism_action(const FockWindow& w, const Eigen::MatrixXd& o);

/// Generator modes a_c(n) for 0 < |n_hu| <= max_abs_n_hu on the sector
/// lattice, keyed by (color, n_hu).
struct ModeFamily {
  std::map<std::pair<int, int>, Mat> a;
  int max_abs_n_hu = 0;
};

ModeFamily generator_modes(const FockWindow& w, int max_abs_n_hu);

/// Modes of the twisted module M.g: a_c(n) -> sum_{c'} g(c',c) a_{c'}(n).
/// Pure linear recombination, no recomputation.
ModeFamily twist_family(const ModeFamily& fam, const Eigen::MatrixXd& g);

struct Intertwiner {
  Mat phi;                      // on the interior window, degree preserving
  std::vector<int> interior;    // window basis indices included
  int max_degree_hu = 0;
  double residual = 0.0;
};

/// Degree-preserving phi with phi . (N-mode) = (g-twisted M-mode) . phi on
/// the interior window (inputs and outputs of degree <= cutoff - 1).
/// Solutions are scaled so unitary intertwiners come out unitary, then phase
/// gauge-fixed. Throws NotStable when no invertible solution exists.
Intertwiner find_intertwiner(const FockWindow& w, const ModeFamily& m_modes,
                             const ModeFamily& n_modes, const Eigen::MatrixXd& g,
                             const ToleranceConfig& tol = {});

/// Per-degree orthonormal bases of the joint fixed space of the given window
/// operators (kernel of gamma_h - id, stacked over h).
std::vector<Mat> fixed_vectors(const FockWindow& w, const std::vector<Mat>& gammas,
                               const ToleranceConfig& tol = {});

struct WeakAssocSample {
  int basis_index = 0;
  int p = 0;  // integer part of the u-mode (actual mode p + r/T)
  int q = 0;  // integer part of the v-mode
  int l = 0;  // truncation exponent, annihilation bound <= l <= p
  bool u_is_vacuum = false;
};

struct WeakAssocReport {
  int samples_used = 0;
  double max_residual = 0.0;
};

/// Checks u_{p+r/T} v_{q+s/T} w against the iterate expansion
///   sum_{i,j} C(p-l, i) C(l+r/T, j) (u_{p-l-i+j} v)_{q+(r+s)/T+l+i-j} w
/// for u = v = a (or u the vacuum). Samples keep l <= p so only the
/// nonnegative products survive, and a_j a = delta_{j,1} vacuum closes the
/// sum. Throws WindowTooSmall when a sample leaves the window.
WeakAssocReport weak_assoc_check(const FockWindow& w,
                                 const std::vector<WeakAssocSample>& samples);

/// Deterministic interior sample list with at least min_samples entries.
std::vector<WeakAssocSample> weak_assoc_samples(const FockWindow& w, int min_samples);

/// Exact count of the sector's graded dimension at a degree, by independent
/// partition enumeration (test oracle, also used in reports).
long long partition_count(const FockWindow& w, int degree_hu);

}  // namespace orbikit
