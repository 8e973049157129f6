#pragma once

// Finite model of the co-invariant subspace spanned by the vectors
//   x_ij = sum_w conj((A_w)_ij) xi_w
// in Fock space, for tuples whose transfer map has spectral radius < 1.
// Labels (i,j) are row-major: index i*d + j.

#include "rowdil/algebra.hpp"
#include "rowdil/intertwine.hpp"
#include "rowdil/tuple.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace rowdil {

constexpr double kStrictMargin = 1e-10;

inline void require_strict(const RowContraction& t, const char* who) {
  double rho = spectral_radius(transfer_matrix(t).matrix);
  if (rho >= 1.0 - kStrictMargin)
    throw Error(ErrorKind::NotStrictlyContractive,
                std::string(who) + ": transfer spectral radius " + num(rho) + " is not below 1");
}

// G[(ij),(kl)] = sum_w conj((A_w)_ij) (A_w)_kl. The inner products are
// <x_a, x_b> = conj(G[a][b]) = G[b][a], see metric().
struct GramOperator {
  int d = 0;
  Mat G;
  Mat metric() const { return G.transpose(); }
};

inline Mat reshuffle(const Mat& m, int d) {
  Mat out(d * d, d * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l) out(i * d + j, k * d + l) = m(i * d + k, j * d + l);
  return out;
}

// Psi(G)[(ij),(kl)] = sum_p sum_{m,m'} conj(A_p)_im (A_p)_km' G[(mj),(m'l)]
inline Mat gram_step(const RowContraction& t, const Mat& g) {
  const int d = t.d();
  Mat out = Mat::Zero(d * d, d * d);
  for (const auto& a : t.matrices())
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k)
          for (int l = 0; l < d; ++l) {
            cplx s = 0;
            for (int m = 0; m < d; ++m)
              for (int mp = 0; mp < d; ++mp) s += std::conj(a(i, m)) * a(k, mp) * g(m * d + j, mp * d + l);
            out(i * d + j, k * d + l) += s;
          }
  return out;
}

inline Mat gram_seed(int d) {
  Mat e0 = Mat::Zero(d * d, d * d);
  for (int i = 0; i < d; ++i)
    for (int k = 0; k < d; ++k) e0(i * d + i, k * d + k) = 1.0;
  return e0;
}

// Summing conj(A_w) (x) A_w over all words is the resolvent of the transfer
// matrix; a reshuffle of its indices gives G.
inline GramOperator gram_solve(const RowContraction& t, const ToleranceConfig& cfg) {
  require_strict(t, "gram_solve");
  const int d = t.d();
  const Mat tm = transfer_matrix(t).matrix;
  Mat res = (Mat::Identity(d * d, d * d) - tm).partialPivLu().solve(Mat::Identity(d * d, d * d));
  GramOperator g{d, hermitian_part(reshuffle(res, d))};
  double drift = (g.G - gram_seed(d) - gram_step(t, g.G)).norm();
  if (drift > 1e-10 * std::max(1.0, g.G.norm()))
    throw Error(ErrorKind::Inconsistent, "Gram fixed-point residual " + num(drift));
  (void)cfg;
  return g;
}

struct CoinvariantModel {
  RowContraction tuple;
  GramOperator gram;
  std::vector<Mat> adjoint_action;  // L_k^* in x-coordinates, columns are images
  Mat ortho_basis;                  // d^2 x r, orthonormal for the Gram metric
  RowContraction compressed_tuple;  // r x r
};

// Orthonormal basis, in x-coordinates, of the span of the given columns.
inline Mat orthonormalize_in_metric(const Mat& h, const Mat& coords, double rtol) {
  Mat g = hermitian_part(coords.adjoint() * h * coords);
  Eigen::SelfAdjointEigenSolver<Mat> es(g);
  const auto& ev = es.eigenvalues();
  const double top = ev.size() ? std::max(ev.maxCoeff(), 0.0) : 0.0;
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    if (ev(i) > rtol * top) keep.push_back(i);
  Mat w(coords.cols(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t j = 0; j < keep.size(); ++j)
    w.col(static_cast<Eigen::Index>(j)) = es.eigenvectors().col(keep[j]) / std::sqrt(ev(keep[j]));
  return coords * w;
}

inline RowContraction compress_adjoint_action(const Mat& h, const std::vector<Mat>& action, const Mat& basis) {
  std::vector<Mat> mats;
  for (const auto& m : action) mats.push_back((basis.adjoint() * h * m * basis).adjoint());
  return RowContraction(std::move(mats));
}

inline CoinvariantModel coinvariant_model(const RowContraction& t, const ToleranceConfig& cfg) {
  CoinvariantModel model;
  model.tuple = t;
  model.gram = gram_solve(t, cfg);
  const int d = t.d();
  const Mat id = Mat::Identity(d, d);
  for (const auto& a : t.matrices()) model.adjoint_action.push_back(kron(a.adjoint(), id));
  const Mat h = model.gram.metric();
  model.ortho_basis = orthonormalize_in_metric(h, Mat::Identity(d * d, d * d), cfg.rank_rtol);
  model.compressed_tuple = compress_adjoint_action(h, model.adjoint_action, model.ortho_basis);
  return model;
}

// One representative per nonzero defect direction f: the span of
// v_m = sum_l conj(f_l) x_ml is invariant under the L_k^* (they act on it
// as the A_k^* do) and meets the vacuum, so its compression has pure rank 1.
inline std::vector<RowContraction> extract_pure_rank_one(const CoinvariantModel& model, const ToleranceConfig& cfg) {
  const auto& t = model.tuple;
  const int d = t.d();
  const Mat h = model.gram.metric();
  Eigen::SelfAdjointEigenSolver<Mat> es(t.defect());
  std::vector<RowContraction> out;
  for (Eigen::Index j = 0; j < d; ++j) {
    if (es.eigenvalues()(j) <= cfg.rank_rtol) continue;
    const Vec f = es.eigenvectors().col(j);
    Mat coords = Mat::Zero(d * d, d);
    for (int m = 0; m < d; ++m)
      for (int l = 0; l < d; ++l) coords(m * d + l, m) = std::conj(f(l));
    Mat basis = orthonormalize_in_metric(h, coords, cfg.rank_rtol);
    auto b = compress_adjoint_action(h, model.adjoint_action, basis);
    if (pure_rank(b, cfg) != 1)
      throw Error(ErrorKind::Inconsistent, "extracted representative does not have pure rank 1");
    out.push_back(std::move(b));
  }
  return out;
}

struct Reconstruction {
  Mat X;  // (sum_j d_j) x d
  std::vector<double> weights;
  std::vector<std::vector<Mat>> contributions;  // [j][i] = X_j^* B_ji X_j
  double residual = 0;
  double isometry_residual = 0;
};

inline Reconstruction cstar_convex_reconstruct(const RowContraction& t, const std::vector<RowContraction>& bs,
                                               const ToleranceConfig& cfg) {
  const int d = t.d();
  std::vector<Mat> ys;
  for (const auto& b : bs) {
    auto space = joint_intertwiners(t, b, IntertwinerMode::Adjoint, cfg);
    if (space.dim() > 1)
      throw Error(ErrorKind::NoIsometricSolution, "intertwiner space of dimension " + std::to_string(space.dim()));
    ys.push_back(space.dim() ? space.basis[0] : Mat::Zero(b.d(), d));
  }
  // sum_j w_j Y_j^* Y_j = I over w >= 0, as a real least-squares problem
  const auto s = static_cast<Eigen::Index>(ys.size());
  Eigen::MatrixXd lhs(2 * d * d, s);
  Eigen::VectorXd rhs(2 * d * d);
  const Vec vi = vec(Mat::Identity(d, d));
  rhs << vi.real(), vi.imag();
  for (Eigen::Index j = 0; j < s; ++j) {
    Vec g = vec(ys[static_cast<std::size_t>(j)].adjoint() * ys[static_cast<std::size_t>(j)]);
    lhs.col(j) << g.real(), g.imag();
  }
  Eigen::VectorXd w = lhs.completeOrthogonalDecomposition().solve(rhs);
  const double fit = (lhs * w - rhs).norm();
  if (fit > 1e-8 || (w.size() && w.minCoeff() < -1e-10))
    throw Error(ErrorKind::NoIsometricSolution, "Gram form of the block intertwiners does not resolve the identity");

  Reconstruction r;
  Eigen::Index rows = 0;
  for (const auto& b : bs) rows += b.d();
  r.X = Mat::Zero(rows, d);
  Eigen::Index at = 0;
  std::vector<Mat> sum(static_cast<std::size_t>(t.n()), Mat::Zero(d, d));
  for (std::size_t j = 0; j < bs.size(); ++j) {
    double wj = std::max(w(static_cast<Eigen::Index>(j)), 0.0);
    r.weights.push_back(wj);
    Mat xj = std::sqrt(wj) * ys[j];
    r.X.middleRows(at, bs[j].d()) = xj;
    at += bs[j].d();
    std::vector<Mat> parts;
    for (int i = 0; i < t.n(); ++i) {
      parts.push_back(xj.adjoint() * bs[j][i] * xj);
      sum[static_cast<std::size_t>(i)] += parts.back();
    }
    r.contributions.push_back(std::move(parts));
  }
  for (int i = 0; i < t.n(); ++i) r.residual = std::max(r.residual, (sum[static_cast<std::size_t>(i)] - t[i]).norm());
  r.isometry_residual = (r.X.adjoint() * r.X - Mat::Identity(d, d)).norm();
  return r;
}

// Ambient coordinates: index 0 is xi_e, index 1 + k d^2 + (i d + j) is L_k x_ij.
struct WanderingBasis {
  int n = 0;
  int d = 0;
  int gram_rank = 0;
  Mat gram_ambient;
  Mat x_coords;  // ambient x d^2: x_ij = delta_ij xi_e + sum_k sum_m conj(A_k)_im L_k x_mj
  Mat basis;     // ambient x dim W, orthonormal for gram_ambient
  int dim() const { return static_cast<int>(basis.cols()); }
};

inline WanderingBasis wandering_basis(const RowContraction& t, const ToleranceConfig& cfg) {
  auto g = gram_solve(t, cfg);
  const int n = t.n(), d = t.d(), dd = d * d;
  const Mat h = g.metric();
  WanderingBasis wb;
  wb.n = n;
  wb.d = d;
  wb.gram_rank = numerical_rank(h, cfg.rank_rtol);
  const Eigen::Index amb = 1 + static_cast<Eigen::Index>(n) * dd;
  wb.gram_ambient = Mat::Zero(amb, amb);
  wb.gram_ambient(0, 0) = 1.0;
  for (int k = 0; k < n; ++k) wb.gram_ambient.block(1 + k * dd, 1 + k * dd, dd, dd) = h;

  wb.x_coords = Mat::Zero(amb, dd);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      if (i == j) wb.x_coords(0, i * d + j) = 1.0;
      for (int k = 0; k < n; ++k)
        for (int m = 0; m < d; ++m) wb.x_coords(1 + k * dd + m * d + j, i * d + j) = std::conj(t[k](i, m));
    }

  // isometric coordinates for the ambient span
  Eigen::SelfAdjointEigenSolver<Mat> es(wb.gram_ambient);
  const auto& ev = es.eigenvalues();
  const double top = ev.maxCoeff();
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < amb; ++i)
    if (ev(i) > cfg.rank_rtol * top) keep.push_back(i);
  const auto r = static_cast<Eigen::Index>(keep.size());
  Mat q(amb, r);
  Eigen::VectorXd lam(r);
  for (Eigen::Index j = 0; j < r; ++j) {
    q.col(j) = es.eigenvectors().col(keep[static_cast<std::size_t>(j)]);
    lam(j) = ev(keep[static_cast<std::size_t>(j)]);
  }
  Mat y = lam.cwiseSqrt().asDiagonal() * q.adjoint() * wb.x_coords;
  Mat z = orth_complement(range_basis(y, cfg.rank_rtol), r);
  wb.basis = q * lam.cwiseSqrt().cwiseInverse().asDiagonal() * z;
  if (wb.dim() != 1 + (n - 1) * wb.gram_rank)
    throw Error(ErrorKind::Inconsistent, "wandering dimension " + std::to_string(wb.dim()) + " but Gram rank " +
                                             std::to_string(wb.gram_rank));
  return wb;
}

// Xi(k,l) = sum_w conj((A_w)_kl) B_w, the (k,l) block of the resolvent of
// sum_p conj(A_p) (x) B_p.
struct MixedCorrelation {
  int d_a = 0;
  int d_b = 0;
  Mat resolvent;
  Mat Xi(int k, int l) const { return resolvent.block(k * d_b, l * d_b, d_b, d_b); }
};

inline MixedCorrelation mixed_correlation(const RowContraction& a, const RowContraction& b, const ToleranceConfig& cfg) {
  if (a.n() != b.n()) throw Error(ErrorKind::DimensionMismatch, "tuples have different n");
  const int da = a.d(), db = b.d();
  Mat k = Mat::Zero(da * db, da * db);
  for (int p = 0; p < a.n(); ++p) k += kron(a[p].conjugate(), b[p]);
  double rho = spectral_radius(k);
  if (rho >= 1.0 - kStrictMargin)
    throw Error(ErrorKind::MixedNotConvergent, "mixed transfer spectral radius " + num(rho));
  MixedCorrelation mc{da, db, (Mat::Identity(da * db, da * db) - k).partialPivLu().solve(Mat::Identity(da * db, da * db))};
  // Xi(k,l) = delta_kl I + sum_p sum_m conj(A_p)_km B_p Xi(m,l)
  double drift = 0;
  for (int r = 0; r < da; ++r)
    for (int l = 0; l < da; ++l) {
      Mat rhs = (r == l ? 1.0 : 0.0) * Mat::Identity(db, db);
      for (int p = 0; p < a.n(); ++p)
        for (int m = 0; m < da; ++m) rhs += std::conj(a[p](r, m)) * b[p] * mc.Xi(m, l);
      drift = std::max(drift, (rhs - mc.Xi(r, l)).norm());
    }
  if (drift > 1e-10 * std::max(1.0, mc.resolvent.norm()))
    throw Error(ErrorKind::Inconsistent, "mixed correlation residual " + num(drift));
  (void)cfg;
  return mc;
}

// Phi_B of the element with ambient coordinates c:
//   gamma I + sum_k sum_ij beta^k_ij B_k Xi(i,j).
inline Mat evaluate_generator(const WanderingBasis& wb, const Vec& c, const RowContraction& b,
                              const MixedCorrelation& mc, double* scale = nullptr) {
  const int d = wb.d, dd = d * d;
  Mat out = c(0) * Mat::Identity(b.d(), b.d());
  double mag = std::abs(c(0));
  for (int k = 0; k < wb.n; ++k)
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        cplx beta = c(1 + k * dd + i * d + j);
        if (beta == cplx(0)) continue;
        Mat term = beta * b[k] * mc.Xi(i, j);
        out += term;
        mag += term.norm();
      }
  if (scale) *scale = mag;
  return out;
}

struct IdealTestResult {
  bool similar = false;
  double max_residual = 0;
  double tolerance = 0;
  bool outside_hypotheses = false;
  int generators = 0;
};

inline IdealTestResult similarity_test_ideal(const RowContraction& a, const RowContraction& b,
                                             const ToleranceConfig& cfg) {
  if (a.n() != b.n() || a.d() != b.d()) throw Error(ErrorKind::DimensionMismatch, "tuples differ in n or d");
  if (!burnside_irreducible(a.matrices(), a.d(), cfg.rank_rtol))
    throw Error(ErrorKind::NotIrreducible, "first tuple does not generate the full matrix algebra");
  require_strict(a, "similarity_test_ideal (first tuple)");
  require_strict(b, "similarity_test_ideal (second tuple)");
  IdealTestResult r;
  r.outside_hypotheses = a.norm() >= 1.0 - 1e-12 || b.norm() >= 1.0 - 1e-12;
  auto wb = wandering_basis(a, cfg);
  auto mc = mixed_correlation(a, b, cfg);
  double scale = 1.0;
  for (int z = 0; z < wb.dim(); ++z) {
    double mag = 0;
    Mat v = evaluate_generator(wb, wb.basis.col(z), b, mc, &mag);
    r.max_residual = std::max(r.max_residual, v.norm());
    scale = std::max(scale, mag);
  }
  r.generators = wb.dim();
  r.tolerance = 1e-7 * scale;
  r.similar = r.max_residual <= r.tolerance;
  return r;
}

struct GeneratorTable {
  std::vector<std::pair<Word, cplx>> coeffs;  // all words with |w| <= N
  std::vector<double> level_energy;           // E_m for m = 0..N
  double tail_bound = 0;
};

struct PolynomialGenerators {
  int N = 0;
  double epsilon = 0;
  std::vector<GeneratorTable> tables;
};

namespace detail {

// Rigorous tail: sum_{m > N} sqrt(E_m), with E_m = sum_k beta_k^T G_{m-1} conj(beta_k)
// computed exactly up to level M, and beyond that E_m <= |beta|^2 tr Phi^{m-1}(I)
// <= |beta|^2 d q^{floor((m-1)/K)} for q = |Phi^K(I)| < 1.
struct TailData {
  std::vector<std::vector<double>> energy;  // [generator][m], m = 0..M
  std::vector<double> remainder;            // bound for sum over m > M
};

inline TailData tail_data(const RowContraction& t, const WanderingBasis& wb, int M) {
  const int n = t.n(), d = t.d(), dd = d * d;
  Mat x = Mat::Identity(d, d);
  int K = 0;
  double q = 1.0;
  for (K = 1; K <= 100000; ++K) {
    x = phi_apply(t, x);
    q = op_norm(x);
    if (q <= 0.5) break;
  }
  if (q > 0.5) throw Error(ErrorKind::NoConvergence, "Phi^k(I) does not contract");

  TailData td;
  const Mat tm = transfer_matrix(t).matrix;
  Mat power = Mat::Identity(dd, dd);
  td.energy.assign(static_cast<std::size_t>(wb.dim()), std::vector<double>(static_cast<std::size_t>(M + 1), 0.0));
  for (int z = 0; z < wb.dim(); ++z) td.energy[z][0] = std::norm(wb.basis(0, z));
  for (int m = 1; m <= M; ++m) {
    Mat level = reshuffle(power, d);  // G_{m-1}
    for (int z = 0; z < wb.dim(); ++z) {
      double e = 0;
      for (int k = 0; k < n; ++k) {
        Vec beta = wb.basis.col(z).segment(1 + k * dd, dd);
        e += std::max(0.0, (beta.transpose() * level * beta.conjugate())(0, 0).real());
      }
      td.energy[z][m] = e;
    }
    power = power * tm;
  }
  for (int z = 0; z < wb.dim(); ++z) {
    double beta2 = wb.basis.col(z).tail(n * dd).squaredNorm();
    double sq = std::sqrt(q);
    // m > M means m - 1 >= M
    double rem = std::sqrt(beta2 * d) * K * std::pow(sq, std::floor(static_cast<double>(M) / K)) / (1.0 - sq);
    td.remainder.push_back(q == 0.0 ? 0.0 : rem);
  }
  return td;
}

inline double tail_after(const TailData& td, int z, int N) {
  double s = td.remainder[static_cast<std::size_t>(z)];
  const auto& e = td.energy[static_cast<std::size_t>(z)];
  for (std::size_t m = static_cast<std::size_t>(N) + 1; m < e.size(); ++m) s += std::sqrt(e[m]);
  return s;
}

}  // namespace detail

// N <= 0 selects the smallest N with every tail bound below (1 + n d^2)^{-1}.
inline PolynomialGenerators polynomial_generators(const RowContraction& t, int N, const ToleranceConfig& cfg) {
  auto wb = wandering_basis(t, cfg);
  const int n = t.n(), d = t.d(), dd = d * d;
  PolynomialGenerators pg;
  pg.epsilon = 1.0 / (1.0 + n * dd);

  int M = std::max(N, 0) + 200;
  auto td = detail::tail_data(t, wb, M);
  if (N <= 0) {
    N = 0;
    for (;; ++N) {
      bool ok = true;
      for (int z = 0; z < wb.dim() && ok; ++z) ok = detail::tail_after(td, z, N) < pg.epsilon;
      if (ok) break;
      if (N >= M - 1) throw Error(ErrorKind::NoConvergence, "tail bound does not reach epsilon");
    }
  }
  pg.N = N;
  if (std::pow(static_cast<double>(n), N) * (n > 1 ? 1.0 : N + 1.0) > 4e6) throw Error(ErrorKind::MalformedInput, "generator table too large");

  // word products by level, in lexicographic order
  std::vector<std::pair<Word, Mat>> level{{Word{}, Mat::Identity(d, d)}};
  std::vector<std::vector<std::pair<Word, Mat>>> levels{level};
  for (int m = 1; m < N; ++m) {
    std::vector<std::pair<Word, Mat>> next;
    for (int k = 1; k <= n; ++k)
      for (const auto& [w, a] : levels.back()) {
        Word v{k};
        v.insert(v.end(), w.begin(), w.end());
        next.emplace_back(v, t[k - 1] * a);
      }
    levels.push_back(std::move(next));
  }
  for (int z = 0; z < wb.dim(); ++z) {
    const Vec c = wb.basis.col(z);
    GeneratorTable tab;
    tab.coeffs.emplace_back(Word{}, c(0));
    for (int m = 1; m <= N; ++m)
      for (int k = 1; k <= n; ++k)
        for (const auto& [w, a] : levels[static_cast<std::size_t>(m - 1)]) {
          cplx s = 0;
          for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) s += c(1 + (k - 1) * dd + i * d + j) * std::conj(a(i, j));
          Word v{k};
          v.insert(v.end(), w.begin(), w.end());
          tab.coeffs.emplace_back(std::move(v), s);
        }
    for (int m = 0; m <= N; ++m) tab.level_energy.push_back(td.energy[static_cast<std::size_t>(z)][static_cast<std::size_t>(m)]);
    tab.tail_bound = detail::tail_after(td, z, N);
    pg.tables.push_back(std::move(tab));
  }
  return pg;
}

}  // namespace rowdil
