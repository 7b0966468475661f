#include "orbikit/numerics.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace orbikit {

namespace {

long long positive_mod(long long a, long long m) {
  long long r = a % m;
  return r < 0 ? r + m : r;
}

}  // namespace

RootOfUnity RootOfUnity::make(long long order, long long exponent) {
  if (order < 1) throw Error("RootOfUnity: order must be positive");
  long long k = positive_mod(exponent, order);
  long long g = std::gcd(k, order);
  if (k == 0) return {1, 0};
  return {order / g, k / g};
}

RootOfUnity RootOfUnity::operator*(const RootOfUnity& rhs) const {
  long long l = std::lcm(order, rhs.order);
  long long k = exponent * (l / order) + rhs.exponent * (l / rhs.order);
  return make(l, k);
}

RootOfUnity RootOfUnity::inverse() const { return make(order, order - exponent); }

RootOfUnity RootOfUnity::pow(long long e) const {
  return make(order, positive_mod(e, order) * exponent);
}

Complex RootOfUnity::value() const { return unity_value(order, exponent); }

Complex unity_value(long long order, long long exponent) {
  if (order < 1) throw Error("unity_value: order must be positive");
  long long k = positive_mod(exponent, order);
  double theta = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(order);
  return {std::cos(theta), std::sin(theta)};
}

SnapResult snap_to_root_of_unity(Complex z, long long max_order, double tol) {
  if (std::abs(std::abs(z) - 1.0) > tol) return {};
  double theta = std::arg(z) / (2.0 * std::numbers::pi);  // in [-1/2, 1/2]
  for (long long n = 1; n <= max_order; ++n) {
    long long k = std::llround(theta * static_cast<double>(n));
    RootOfUnity r = RootOfUnity::make(n, k);
    if (std::abs(r.value() - z) <= tol) return {true, r};
  }
  return {};
}

std::vector<Vec> kernel_basis(const Mat& m, const ToleranceConfig& tol) {
  if (m.size() == 0) return {};
  Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  double cutoff = tol.eps_rank * std::max(1.0, sv.size() > 0 ? sv(0) : 0.0);
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > cutoff) ++rank;
  std::vector<Vec> basis;
  for (int i = rank; i < m.cols(); ++i) basis.push_back(svd.matrixV().col(i));
  return basis;
}

int numerical_rank(const Mat& m, const ToleranceConfig& tol) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Mat> svd(m);
  const auto& sv = svd.singularValues();
  double cutoff = tol.eps_rank * std::max(1.0, sv.size() > 0 ? sv(0) : 0.0);
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > cutoff) ++rank;
  return rank;
}

std::vector<Mat> hom_space(const std::vector<std::pair<Mat, Mat>>& pairs,
                           const ToleranceConfig& tol) {
  if (pairs.empty()) throw Error("hom_space: need at least one pair");
  const int p = static_cast<int>(pairs.front().first.rows());
  const int q = static_cast<int>(pairs.front().second.rows());
  for (const auto& [pm, qm] : pairs) {
    if (pm.rows() != p || pm.cols() != p || qm.rows() != q || qm.cols() != q)
      throw Error("hom_space: inconsistent matrix sizes");
  }
  const int n = p * q;
  std::vector<Vec> null;

  if (n <= 128) {
    // vec(P X - X Q) = (I_q kron P - Q^T kron I_p) vec(X), column-major vec.
    Mat system(static_cast<int>(pairs.size()) * n, n);
    for (int t = 0; t < static_cast<int>(pairs.size()); ++t) {
      const Mat& P = pairs[t].first;
      const Mat& Q = pairs[t].second;
      Mat block = Mat::Zero(n, n);
      for (int j = 0; j < q; ++j)
        block.block(j * p, j * p, p, p) = P;
      for (int j = 0; j < q; ++j)
        for (int i = 0; i < q; ++i)
          block.block(j * p, i * p, p, p) -= Q(i, j) * Mat::Identity(p, p);
      system.block(t * n, 0, n, n) = block;
    }
    null = kernel_basis(system, tol);
  } else {
    // Larger systems go through the Hermitian Gram matrix
    //   G = sum_t A_t^* A_t,  A_t = I kron P_t - Q_t^T kron I.
    // The kernels the kit meets here come from exact algebraic constraints,
    // so the spectral gap is O(||G||) and eigenvectors of the near-zero
    // cluster reproduce the null space to machine precision.
    Mat gram = Mat::Zero(n, n);
    for (const auto& [P, Q] : pairs) {
      Mat php = P.adjoint() * P;            // I kron P^*P
      Mat qqt = Q.conjugate() * Q.transpose();  // (Qbar Q^T) kron I
      Mat padj = P.adjoint();
      for (int j = 0; j < q; ++j) gram.block(j * p, j * p, p, p) += php;
      for (int i = 0; i < q; ++i)
        for (int j = 0; j < q; ++j) {
          auto blockref = gram.block(i * p, j * p, p, p);
          blockref -= Q(j, i) * padj;               // Q^T kron P^*
          blockref -= std::conj(Q(i, j)) * P;       // Qbar kron P
          if (qqt(i, j) != Complex(0.0)) blockref += qqt(i, j) * Mat::Identity(p, p);
        }
    }
    Eigen::SelfAdjointEigenSolver<Mat> es(gram);
    if (es.info() != Eigen::Success) throw Error("hom_space: eigensolver failed");
    double lmax = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
    double cutoff = std::max(tol.eps_rank * tol.eps_rank * lmax, 1e-12 * lmax);
    for (int i = 0; i < n; ++i)
      if (es.eigenvalues()(i) <= cutoff) null.push_back(es.eigenvectors().col(i));
  }

  std::vector<Mat> out;
  out.reserve(null.size());
  for (const Vec& v : null) {
    Mat x(p, q);
    for (int j = 0; j < q; ++j) x.col(j) = v.segment(j * p, p);
    out.push_back(std::move(x));
  }
  return out;
}

std::vector<Eigenspace> eigenspaces(const Mat& m, const ToleranceConfig& tol) {
  if (m.rows() != m.cols()) throw Error("eigenspaces: matrix must be square");
  const int n = static_cast<int>(m.rows());
  if (n == 0) return {};

  // Hermitian inputs get the stable self-adjoint path.
  bool hermitian = (m - m.adjoint()).norm() <= tol.eps_residual * std::max(1.0, m.norm());

  std::vector<std::pair<Complex, Vec>> pairs;
  if (hermitian) {
    Eigen::SelfAdjointEigenSolver<Mat> es(m);
    if (es.info() != Eigen::Success) throw DefectiveMatrix("eigenspaces: solver failed");
    for (int i = 0; i < n; ++i)
      pairs.emplace_back(Complex(es.eigenvalues()(i), 0.0), es.eigenvectors().col(i));
  } else {
    Eigen::ComplexEigenSolver<Mat> es(m);
    if (es.info() != Eigen::Success) throw DefectiveMatrix("eigenspaces: solver failed");
    for (int i = 0; i < n; ++i)
      pairs.emplace_back(es.eigenvalues()(i), es.eigenvectors().col(i));
  }

  double scale = std::max(1.0, m.norm());
  double cluster_eps = tol.eps_eig * scale;

  // Greedy clustering: sort by (re, im) then chain values within cluster_eps.
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](int a, int b) {
    if (pairs[a].first.real() != pairs[b].first.real())
      return pairs[a].first.real() < pairs[b].first.real();
    return pairs[a].first.imag() < pairs[b].first.imag();
  });
  std::vector<std::vector<int>> clusters;
  for (int i : idx) {
    bool placed = false;
    for (auto& c : clusters) {
      for (int j : c) {
        if (std::abs(pairs[i].first - pairs[j].first) <= cluster_eps) {
          c.push_back(i);
          placed = true;
          break;
        }
      }
      if (placed) break;
    }
    if (!placed) clusters.push_back({i});
  }

  std::vector<Eigenspace> out;
  int total = 0;
  for (const auto& c : clusters) {
    Mat vs(n, static_cast<int>(c.size()));
    Complex mean = 0.0;
    for (int t = 0; t < static_cast<int>(c.size()); ++t) {
      vs.col(t) = pairs[c[t]].second;
      mean += pairs[c[t]].first;
    }
    mean /= static_cast<double>(c.size());
    // Orthonormalize; defective matrices produce rank-deficient clusters.
    Eigen::JacobiSVD<Mat> svd(vs, Eigen::ComputeThinU);
    const auto& sv = svd.singularValues();
    double cutoff = tol.eps_rank * std::max(1.0, sv(0));
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
      if (sv(i) > cutoff) ++rank;
    Eigenspace es;
    es.value = mean;
    es.basis = svd.matrixU().leftCols(rank);
    total += rank;
    out.push_back(std::move(es));
  }
  if (total < n)
    throw DefectiveMatrix("eigenspaces: eigenvector count " + std::to_string(total) +
                          " below dimension " + std::to_string(n));
  std::sort(out.begin(), out.end(), [](const Eigenspace& a, const Eigenspace& b) {
    if (a.value.real() != b.value.real()) return a.value.real() < b.value.real();
    return a.value.imag() < b.value.imag();
  });
  return out;
}

Rng::Rng(std::uint64_t seed) {
  // splitmix64 expansion of the seed into xoshiro256** state
  std::uint64_t x = seed + 0x9e3779b97f4a7c15ULL;
  for (auto& s : state_) {
    std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    s = z ^ (z >> 31);
  }
}

std::uint64_t Rng::next_u64() {
  auto rotl = [](std::uint64_t v, int k) { return (v << k) | (v >> (64 - k)); };
  std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
  std::uint64_t t = state_[1] << 17;
  state_[2] ^= state_[0];
  state_[3] ^= state_[1];
  state_[1] ^= state_[2];
  state_[0] ^= state_[3];
  state_[2] ^= t;
  state_[3] = rotl(state_[3], 45);
  return result;
}

double Rng::uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

double Rng::normal() {
  double u1 = uniform();
  double u2 = uniform();
  while (u1 <= 1e-300) u1 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Complex Rng::normal_complex() {
  double re = normal();
  double im = normal();
  return {re, im};
}

Mat Rng::matrix(int rows, int cols) {
  Mat m(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) m(i, j) = normal_complex();
  return m;
}

}  // namespace orbikit
