#include "orbikit/assoc.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

namespace orbikit {

namespace {

Complex frobenius_inner(const Mat& a, const Mat& b) {
  return (a.adjoint() * b).trace();
}

double operator_scale(const std::vector<Mat>& mats) {
  double s = 1.0;
  for (const Mat& m : mats) s = std::max(s, m.norm());
  return s;
}

// Gauge: unit Frobenius norm, first nonzero entry of column 0 real positive.
Mat gauge_fix(Mat t) {
  t /= t.norm();
  for (int i = 0; i < t.rows(); ++i) {
    if (std::abs(t(i, 0)) > 1e-8) {
      Complex phase = t(i, 0) / std::abs(t(i, 0));
      t *= std::conj(phase);
      break;
    }
  }
  return t;
}

}  // namespace

Vec StructureAlgebra::multiply(const Vec& a, const Vec& b) const {
  Mat la = Mat::Zero(dim, dim);
  for (int i = 0; i < dim; ++i) la += a(i) * left[i];
  return la * b;
}

StructureAlgebra algebra_from_tensor(
    int dim, const std::vector<std::vector<std::vector<Complex>>>& c, Vec unit) {
  StructureAlgebra a;
  a.dim = dim;
  a.unit = std::move(unit);
  a.left.assign(dim, Mat::Zero(dim, dim));
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      for (int k = 0; k < dim; ++k) a.left[i](k, j) = c[i][j][k];
  return a;
}

StructureAlgebra group_algebra(const FiniteGroup& g) {
  StructureAlgebra a;
  a.dim = g.order;
  a.unit = Vec::Zero(g.order);
  a.unit(FiniteGroup::identity) = 1.0;
  a.left.assign(g.order, Mat::Zero(g.order, g.order));
  for (int i = 0; i < g.order; ++i)
    for (int j = 0; j < g.order; ++j) a.left[i](g.mul(i, j), j) = 1.0;
  return a;
}

AlgebraVerdict verify_algebra(const StructureAlgebra& a, const ToleranceConfig& tol) {
  AlgebraVerdict v;
  double scale = operator_scale(a.left);
  double worst = 0.0;
  for (int i = 0; i < a.dim; ++i)
    for (int j = 0; j < a.dim; ++j) {
      Mat expect = Mat::Zero(a.dim, a.dim);
      for (int k = 0; k < a.dim; ++k) expect += a.c(i, j, k) * a.left[k];
      worst = std::max(worst, (a.left[i] * a.left[j] - expect).norm());
    }
  Mat lunit = Mat::Zero(a.dim, a.dim);
  for (int i = 0; i < a.dim; ++i) lunit += a.unit(i) * a.left[i];
  worst = std::max(worst, (lunit - Mat::Identity(a.dim, a.dim)).norm());
  Mat runit(a.dim, a.dim);  // column j = b_j * unit
  for (int j = 0; j < a.dim; ++j) runit.col(j) = a.left[j] * a.unit;
  worst = std::max(worst, (runit - Mat::Identity(a.dim, a.dim)).norm());
  v.worst_residual = worst;
  v.ok = worst <= tol.eps_residual * scale * scale;
  if (!v.ok) v.detail = "associativity or unit law fails";
  return v;
}

double representation_residual(const StructureAlgebra& a, const Representation& rep) {
  double worst = 0.0;
  for (int i = 0; i < a.dim; ++i)
    for (int j = 0; j < a.dim; ++j) {
      Mat expect = Mat::Zero(rep.dim, rep.dim);
      for (int k = 0; k < a.dim; ++k) expect += a.c(i, j, k) * rep.rho[k];
      worst = std::max(worst, (rep.rho[i] * rep.rho[j] - expect).norm());
    }
  Mat unit = Mat::Zero(rep.dim, rep.dim);
  for (int i = 0; i < a.dim; ++i) unit += a.unit(i) * rep.rho[i];
  worst = std::max(worst, (unit - Mat::Identity(rep.dim, rep.dim)).norm());
  return worst;
}

bool verify_representation(const StructureAlgebra& a, const Representation& rep,
                           const ToleranceConfig& tol) {
  double scale = std::max(operator_scale(rep.rho), operator_scale(a.left));
  return representation_residual(a, rep) <= tol.eps_residual * scale * scale * 10;
}

Representation regular_rep(const StructureAlgebra& a) { return {a.dim, a.left}; }

bool is_semisimple(const StructureAlgebra& a, const ToleranceConfig& tol) {
  Mat gram(a.dim, a.dim);
  for (int i = 0; i < a.dim; ++i)
    for (int j = 0; j < a.dim; ++j) gram(i, j) = (a.left[i] * a.left[j]).trace();
  return numerical_rank(gram, tol) == a.dim;
}

int span_dimension(const std::vector<Mat>& mats, const ToleranceConfig& tol) {
  if (mats.empty()) return 0;
  const int n = static_cast<int>(mats.front().size());
  Mat stack(n, static_cast<int>(mats.size()));
  for (int j = 0; j < static_cast<int>(mats.size()); ++j)
    stack.col(j) = Eigen::Map<const Vec>(mats[j].data(), n);
  return numerical_rank(stack, tol);
}

WordSpan grow_word_span(const std::vector<Mat>& gens, int max_length,
                        const ToleranceConfig& tol) {
  if (gens.empty()) throw Error("grow_word_span: no generators");
  const int d = static_cast<int>(gens.front().rows());
  const int full = d * d;
  WordSpan ws;

  // Basis as flattened columns; level candidates projected in one batch so
  // the work runs through matrix products.
  Mat stack(full, full);
  int count = 0;
  {
    Mat eye = Mat::Identity(d, d);
    stack.col(count++) = Eigen::Map<const Vec>(eye.data(), full) / std::sqrt(double(d));
  }
  std::vector<Mat> frontier{Mat::Identity(d, d)};

  ws.stop_length = max_length;
  for (int len = 1; len <= max_length && count < full; ++len) {
    const int m = static_cast<int>(gens.size() * frontier.size());
    Mat cands(full, m);
    Eigen::VectorXd scales(m);
    int at = 0;
    for (const Mat& g : gens)
      for (const Mat& f : frontier) {
        Mat prod = g * f;
        scales(at) = std::max(1.0, prod.norm());
        cands.col(at++) = Eigen::Map<const Vec>(prod.data(), full);
      }
    auto basis = stack.leftCols(count);
    cands -= basis * (basis.adjoint() * cands).eval();
    cands -= basis * (basis.adjoint() * cands).eval();

    // The projected block has rank at most full - count; when the candidate
    // list is much longer, a seeded random mix of that width carries the
    // same span almost surely and keeps the eigenproblem small.
    const int remaining = full - count;
    double scale_cap = scales.maxCoeff();
    if (static_cast<int>(cands.cols()) > remaining + 64) {
      Rng mixer(0x5e15ULL + static_cast<std::uint64_t>(len));
      Mat g = mixer.matrix(static_cast<int>(cands.cols()), remaining + 32);
      cands = (cands * g).eval();
    }

    // Orthonormalize the level in one shot through the Gram spectrum.
    Mat gram = cands.adjoint() * cands;
    Eigen::SelfAdjointEigenSolver<Mat> es(gram);
    const double cut = std::pow(1e-8 * scale_cap, 2) * std::max<double>(1.0, m);
    std::vector<Mat> next;
    for (int i = static_cast<int>(gram.rows()) - 1; i >= 0 && count < full; --i) {
      if (es.eigenvalues()(i) <= cut) break;  // ascending order: rest is below
      Vec dir = cands * es.eigenvectors().col(i) / std::sqrt(es.eigenvalues()(i));
      stack.col(count++) = dir;
      next.push_back(Eigen::Map<const Mat>(stack.col(count - 1).data(), d, d));
    }
    if (count == full || next.empty()) {
      // full matrix algebra reached, or multiplicatively closed
      ws.saturated = true;
      ws.stop_length = len;
      break;
    }
    frontier = std::move(next);
  }
  ws.dimension = count;
  ws.basis.reserve(count);
  for (int i = 0; i < count; ++i)
    ws.basis.push_back(Eigen::Map<const Mat>(stack.col(i).data(), d, d));
  return ws;
}

namespace {

struct Block {
  Mat basis;              // carrier_dim x k, orthonormal columns
  std::vector<Mat> rho;   // restricted action, k x k
};

std::vector<Mat> commutant(const std::vector<Mat>& rho, const ToleranceConfig& tol) {
  std::vector<std::pair<Mat, Mat>> pairs;
  pairs.reserve(rho.size());
  for (const Mat& m : rho) pairs.emplace_back(m, m);
  return hom_space(pairs, tol);
}

// Splits one block along eigenspaces of random commutant elements until the
// commutant is scalar.  Appends irreducible blocks to `out`.
void split_block(Block blk, Rng& rng, const ToleranceConfig& tol,
                 std::vector<Block>& out, std::vector<std::uint64_t>& draw_log,
                 int depth) {
  if (depth > 64) throw PrecisionLoss("decompose: recursion too deep");
  const int k = static_cast<int>(blk.basis.cols());
  if (k == 0) return;
  std::vector<Mat> comm = commutant(blk.rho, tol);
  if (comm.empty()) throw PrecisionLoss("decompose: empty commutant (unit missing?)");
  if (comm.size() == 1) {
    out.push_back(std::move(blk));
    return;
  }

  double scale = operator_scale(blk.rho);
  const int attempts = 12;
  for (int attempt = 0; attempt < attempts; ++attempt) {
    std::uint64_t stamp = rng.next_u64();
    draw_log.push_back(stamp);
    Rng local(stamp);
    Mat x = Mat::Zero(k, k);
    for (const Mat& c : comm) x += local.normal_complex() * c;

    // Prefer the Hermitian symmetrization when it stays inside the commutant.
    Mat h = x + x.adjoint();
    Mat proj = Mat::Zero(k, k);
    for (const Mat& c : comm) proj += frobenius_inner(c, h) * c;
    bool hermitian_path = (proj - h).norm() <= 1e-8 * std::max(1.0, h.norm());
    Mat split_op = hermitian_path ? h : x;

    std::vector<Eigenspace> spaces;
    try {
      spaces = eigenspaces(split_op, tol);
    } catch (const DefectiveMatrix&) {
      continue;
    }
    if (spaces.size() < 2) continue;

    bool all_good = true;
    std::vector<Block> children;
    for (const auto& es : spaces) {
      Block child;
      child.basis = blk.basis * es.basis;
      child.rho.reserve(blk.rho.size());
      double invariance = 0.0;
      for (const Mat& m : blk.rho) {
        Mat restricted = es.basis.adjoint() * m * es.basis;
        invariance = std::max(invariance, (m * es.basis - es.basis * restricted).norm());
        child.rho.push_back(std::move(restricted));
      }
      if (invariance > 1e3 * tol.eps_residual * std::max(1.0, scale)) {
        all_good = false;
        break;
      }
      children.push_back(std::move(child));
    }
    if (!all_good) continue;
    for (auto& c : children) split_block(std::move(c), rng, tol, out, draw_log, depth + 1);
    return;
  }
  throw PrecisionLoss("decompose: could not split a reducible block");
}

}  // namespace

std::optional<Mat> module_iso(const Representation& rep1, const Representation& rep2,
                              const ToleranceConfig& tol, std::uint64_t seed) {
  if (rep1.rho.size() != rep2.rho.size()) throw Error("module_iso: basis size mismatch");
  if (rep1.dim != rep2.dim) return std::nullopt;
  std::vector<std::pair<Mat, Mat>> pairs;
  for (std::size_t i = 0; i < rep1.rho.size(); ++i) pairs.emplace_back(rep2.rho[i], rep1.rho[i]);
  std::vector<Mat> hom = hom_space(pairs, tol);
  if (hom.empty()) return std::nullopt;

  auto invertible = [&](const Mat& t) {
    Eigen::JacobiSVD<Mat> svd(t);
    const auto& sv = svd.singularValues();
    return sv(sv.size() - 1) > tol.eps_rank * std::max(1.0, sv(0));
  };
  for (const Mat& t : hom)
    if (invertible(t)) return gauge_fix(t);
  Rng rng(seed ^ 0x5eedf00dULL);
  for (int attempt = 0; attempt < 16; ++attempt) {
    Mat t = Mat::Zero(rep2.dim, rep1.dim);
    for (const Mat& h : hom) t += rng.normal_complex() * h;
    if (invertible(t)) return gauge_fix(t);
  }
  return std::nullopt;
}

Decomposition decompose(const StructureAlgebra& a, const Representation& rep,
                        std::uint64_t seed, const ToleranceConfig& tol) {
  if (static_cast<int>(rep.rho.size()) != a.dim) throw Error("decompose: size mismatch");
  if (!is_semisimple(a, tol)) throw Error("decompose: algebra is not semisimple");

  Decomposition dec;
  Rng rng(seed);

  Block root;
  root.basis = Mat::Identity(rep.dim, rep.dim);
  root.rho = rep.rho;
  std::vector<Block> blocks;
  split_block(std::move(root), rng, tol, blocks, dec.draw_log, 0);

  // Group irreducible blocks into isomorphism classes.
  struct Class {
    std::vector<int> members;
  };
  std::vector<Class> classes;
  std::vector<Mat> isos(blocks.size());  // iso from class representative into block
  for (int b = 0; b < static_cast<int>(blocks.size()); ++b) {
    Representation cand{static_cast<int>(blocks[b].basis.cols()), blocks[b].rho};
    bool placed = false;
    for (auto& cls : classes) {
      const Block& repr = blocks[cls.members.front()];
      if (repr.basis.cols() != blocks[b].basis.cols()) continue;
      Representation first{static_cast<int>(repr.basis.cols()), repr.rho};
      auto t = module_iso(first, cand, tol, seed ^ (0x9e37ULL * (b + 1)));
      if (t) {
        isos[b] = *t;
        cls.members.push_back(b);
        placed = true;
        break;
      }
    }
    if (!placed) {
      isos[b] = Mat::Identity(blocks[b].basis.cols(), blocks[b].basis.cols());
      classes.push_back({{b}});
    }
  }

  // Stable order: by irrep dimension, then by discovery.
  std::vector<int> order(classes.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::stable_sort(order.begin(), order.end(), [&](int x, int y) {
    return blocks[classes[x].members.front()].basis.cols() <
           blocks[classes[y].members.front()].basis.cols();
  });

  dec.assembled = Mat::Zero(rep.dim, rep.dim);
  int col = 0;
  for (int rank = 0; rank < static_cast<int>(order.size()); ++rank) {
    const Class& cls = classes[order[rank]];
    const Block& repr = blocks[cls.members.front()];
    const int w = static_cast<int>(repr.basis.cols());
    Component comp;
    comp.class_id = rank;
    comp.irrep = repr.rho;
    comp.multiplicity = static_cast<int>(cls.members.size());
    comp.embedding = Mat::Zero(rep.dim, w * comp.multiplicity);
    for (int t = 0; t < comp.multiplicity; ++t) {
      const Block& blk = blocks[cls.members[t]];
      comp.embedding.middleCols(t * w, w) = blk.basis * isos[cls.members[t]];
    }
    dec.assembled.middleCols(col, w * comp.multiplicity) = comp.embedding;
    col += w * comp.multiplicity;
    dec.components.push_back(std::move(comp));
  }
  if (col != rep.dim) throw PrecisionLoss("decompose: dimensions do not add up");

  // Reconstruction residual: rho(b_i) == E (blockdiag of irreps) E^{-1}.
  Eigen::PartialPivLU<Mat> lu(dec.assembled);
  double scale = operator_scale(rep.rho);
  double worst = 0.0;
  for (int i = 0; i < a.dim; ++i) {
    Mat block = Mat::Zero(rep.dim, rep.dim);
    int at = 0;
    for (const Component& comp : dec.components) {
      const int w = comp.irrep_dim();
      for (int t = 0; t < comp.multiplicity; ++t) {
        block.block(at, at, w, w) = comp.irrep[i];
        at += w;
      }
    }
    Mat rebuilt = dec.assembled * block * lu.inverse();
    worst = std::max(worst, (rebuilt - rep.rho[i]).norm());
  }
  dec.reconstruction_residual = worst;
  if (worst > 100 * tol.eps_residual * std::max(1.0, scale))
    throw PrecisionLoss("decompose: reconstruction residual " + std::to_string(worst));
  return dec;
}

Representation rep_of_group(const GroupRep& rep) {
  if (rep.empty()) throw Error("rep_of_group: empty");
  return {static_cast<int>(rep.front().rows()), rep};
}

std::vector<TensorCoverEntry> faithful_tensor_cover(const FiniteGroup& g, const GroupRep& rep,
                                                    std::uint64_t seed,
                                                    const ToleranceConfig& tol) {
  if (static_cast<int>(rep.size()) != g.order) throw Error("faithful_tensor_cover: size mismatch");
  const int d = static_cast<int>(rep.front().rows());
  for (int x = 1; x < g.order; ++x)
    if ((rep[x] - Mat::Identity(d, d)).norm() <= 1e-6 * std::max(1.0, std::sqrt(double(d))))
      throw NotFaithful("faithful_tensor_cover: element " + g.labels[x] + " acts as identity");

  StructureAlgebra cg = group_algebra(g);
  Decomposition reg = decompose(cg, regular_rep(cg), seed, tol);

  std::vector<TensorCoverEntry> out;
  for (const Component& comp : reg.components) {
    TensorCoverEntry e;
    e.class_id = comp.class_id;
    e.irrep_dim = comp.irrep_dim();
    e.character.reserve(g.order);
    for (int x = 0; x < g.order; ++x) e.character.push_back(comp.irrep[x].trace());
    e.power = -1;
    out.push_back(std::move(e));
  }

  std::vector<Complex> chi(g.order);
  for (int x = 0; x < g.order; ++x) chi[x] = rep[x].trace();

  int remaining = static_cast<int>(out.size());
  for (int n = 0; n <= 2 * g.order && remaining > 0; ++n) {
    for (auto& e : out) {
      if (e.power >= 0) continue;
      Complex acc = 0.0;
      for (int x = 0; x < g.order; ++x)
        acc += e.character[g.inv(x)] * std::pow(chi[x], n);
      double mult = (acc / static_cast<double>(g.order)).real();
      if (mult > 0.5) {
        e.power = n;
        --remaining;
      }
    }
  }
  if (remaining > 0)
    throw Error("faithful_tensor_cover: cover not reached (representation not faithful?)");
  return out;
}

}  // namespace orbikit
