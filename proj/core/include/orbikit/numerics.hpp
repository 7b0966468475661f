#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <utility>
#include <vector>

#include "orbikit/errors.hpp"

namespace orbikit {

using Complex = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

/// Exact root of unity exp(2*pi*i*k/N), stored gcd-reduced so that equal
/// values have equal representations and 1 is always (order=1, exponent=0).
struct RootOfUnity {
  long long order = 1;     // N >= 1
  long long exponent = 0;  // 0 <= k < N, gcd(k, N) = 1 unless k = 0

  static RootOfUnity one() { return {}; }
  static RootOfUnity make(long long order, long long exponent);

  RootOfUnity operator*(const RootOfUnity& rhs) const;
  RootOfUnity inverse() const;
  RootOfUnity pow(long long e) const;
  bool operator==(const RootOfUnity&) const = default;
  bool is_one() const { return exponent == 0; }

  Complex value() const;
};

/// exp(2*pi*i*(k mod N)/N)
Complex unity_value(long long order, long long exponent);

/// Nearest root of unity of order <= max_order within `tol`, if any.
/// Used when snapping numerically extracted cocycle scalars.
struct SnapResult {
  bool ok = false;
  RootOfUnity root;
};
SnapResult snap_to_root_of_unity(Complex z, long long max_order, double tol);

struct ToleranceConfig {
  double eps_rank = 1e-9;
  double eps_eig = 1e-9;
  double eps_residual = 1e-9;
};

/// Orthonormal basis of the numerical null space of m. Singular values below
/// eps_rank * max(1, sigma_max) are treated as zero.
std::vector<Vec> kernel_basis(const Mat& m, const ToleranceConfig& tol = {});

/// Numerical rank under the same thresholding as kernel_basis.
int numerical_rank(const Mat& m, const ToleranceConfig& tol = {});

/// Basis of { X : P_i X = X Q_i for all i }, orthonormal in the flattened
/// (Frobenius) inner product. P_i must be square of a common size p and Q_i
/// square of a common size q; solutions are p x q.
std::vector<Mat> hom_space(const std::vector<std::pair<Mat, Mat>>& pairs,
                           const ToleranceConfig& tol = {});

struct Eigenspace {
  Complex value;  // cluster representative (mean)
  Mat basis;      // orthonormal columns spanning the eigenspace
};

/// Eigenvalue clusters (within eps_eig) with orthonormal bases. Throws
/// DefectiveMatrix when the clustered eigenvector spans do not fill the
/// whole space.
std::vector<Eigenspace> eigenspaces(const Mat& m, const ToleranceConfig& tol = {});

/// Deterministic xorshift-based RNG used for every seeded draw in the kit.
/// Distribution code is written out explicitly so results do not depend on
/// the standard library implementation.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);
  std::uint64_t next_u64();
  double uniform();          // [0, 1)
  double normal();           // Box-Muller
  Complex normal_complex();  // independent N(0,1) parts
  Mat matrix(int rows, int cols);

 private:
  std::uint64_t state_[4];
};

}  // namespace orbikit
