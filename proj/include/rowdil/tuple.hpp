#pragma once

#include "rowdil/error.hpp"
#include "rowdil/linalg.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace rowdil {

struct ToleranceConfig {
  double rank_rtol = 1e-8;
  double fix_atol = 1e-10;
  int max_doublings = 64;
  std::uint64_t seed = 0;

  void check() const {
    if (!(rank_rtol > 0) || !(fix_atol > 0) || max_doublings <= 0)
      throw Error(ErrorKind::MalformedInput, "tolerances must be strictly positive");
  }
};

// n matrices of a common size d. Shapes are checked on construction;
// contractivity is checked by validate() since equivalence tests also
// accept non-contractive tuples.
class RowContraction {
 public:
  RowContraction() = default;

  explicit RowContraction(std::vector<Mat> mats) : mats_(std::move(mats)) {
    if (mats_.empty()) throw Error(ErrorKind::DimensionMismatch, "empty tuple");
    const auto d = mats_.front().rows();
    if (d == 0) throw Error(ErrorKind::DimensionMismatch, "zero-dimensional space");
    for (const auto& m : mats_)
      if (m.rows() != d || m.cols() != d)
        throw Error(ErrorKind::DimensionMismatch, "matrices must all be d x d");
  }

  int n() const { return static_cast<int>(mats_.size()); }
  int d() const { return mats_.empty() ? 0 : static_cast<int>(mats_.front().rows()); }
  const Mat& operator[](int i) const { return mats_[static_cast<std::size_t>(i)]; }
  const std::vector<Mat>& matrices() const { return mats_; }

  // The row operator [A_1 ... A_n] : C^n (x) C^d -> C^d.
  Mat row() const {
    Mat r(d(), static_cast<Eigen::Index>(n()) * d());
    for (int i = 0; i < n(); ++i) r.middleCols(static_cast<Eigen::Index>(i) * d(), d()) = mats_[i];
    return r;
  }

  Mat sum_aa_star() const {
    Mat s = Mat::Zero(d(), d());
    for (const auto& a : mats_) s += a * a.adjoint();
    return hermitian_part(s);
  }

  Mat defect() const { return Mat::Identity(d(), d()) - sum_aa_star(); }

  double norm() const { return std::sqrt(std::max(0.0, op_norm(sum_aa_star()))); }

 private:
  std::vector<Mat> mats_;
};

using Word = std::vector<int>;  // letters in 1..n

inline Mat word_product(const RowContraction& t, const Word& w) {
  Mat p = Mat::Identity(t.d(), t.d());
  for (int letter : w) p = p * t[letter - 1];
  return p;
}

inline Word parse_word(const std::string& s) {
  Word w;
  for (char c : s) {
    if (c < '1' || c > '9') throw Error(ErrorKind::BadWord, "letter '" + std::string(1, c) + "'");
    w.push_back(c - '0');
  }
  return w;
}

inline std::string word_string(const Word& w) {
  std::string s;
  for (int letter : w) s += static_cast<char>('0' + letter);
  return s;
}

struct ValidationReport {
  bool is_contractive = false;
  bool is_cuntz = false;
  std::vector<double> defect_eigenvalues;  // descending
};

inline ValidationReport inspect(const RowContraction& t, const ToleranceConfig& cfg) {
  Eigen::SelfAdjointEigenSolver<Mat> es(t.defect(), Eigen::EigenvaluesOnly);
  ValidationReport r;
  const auto& ev = es.eigenvalues();
  for (Eigen::Index i = ev.size() - 1; i >= 0; --i) r.defect_eigenvalues.push_back(ev(i));
  r.is_contractive = ev.minCoeff() >= -cfg.rank_rtol;
  r.is_cuntz = ev.cwiseAbs().maxCoeff() <= cfg.rank_rtol;
  return r;
}

inline ValidationReport validate(const RowContraction& t, const ToleranceConfig& cfg) {
  auto r = inspect(t, cfg);
  if (!r.is_contractive)
    throw Error(ErrorKind::NotContractive,
                "largest eigenvalue of sum A_i A_i^* is " + num(1.0 - r.defect_eigenvalues.back()));
  return r;
}

inline Mat phi_apply(const RowContraction& t, const Mat& x) {
  if (x.rows() != t.d() || x.cols() != t.d())
    throw Error(ErrorKind::DimensionMismatch, "X must be d x d");
  Mat out = Mat::Zero(t.d(), t.d());
  for (const auto& a : t.matrices()) out += a * x * a.adjoint();
  return out;
}

struct TransferOperator {
  int dim = 0;  // d^2
  Mat matrix;   // acts on column-stacked vec(X)
};

inline TransferOperator transfer_matrix(const RowContraction& t) {
  const int d = t.d();
  TransferOperator op{d * d, Mat::Zero(d * d, d * d)};
  for (const auto& a : t.matrices()) op.matrix += kron(a.conjugate(), a);
  return op;
}

inline Mat phi_infinity(const RowContraction& t, const ToleranceConfig& cfg) {
  cfg.check();
  const int d = t.d();
  const Mat id = Mat::Identity(d, d);
  auto residual = [&](const Mat& x) { return (x - phi_apply(t, x)).norm(); };

  Mat x = id;
  double res = residual(x);
  if (res < cfg.fix_atol) return x;

  Mat p = transfer_matrix(t).matrix;
  const Vec vi = vec(id);
  for (int k = 0; k < cfg.max_doublings; ++k) {
    Mat next = hermitian_part(unvec(p * vi, d));
    if (!next.allFinite()) break;
    x = next;
    res = residual(x);
    if (res < cfg.fix_atol) return x;
    p = p * p;
  }
  if (res > 100 * cfg.fix_atol)
    throw Error(ErrorKind::NoConvergence,
                "residual " + num(res) + " after " + std::to_string(cfg.max_doublings) + " doublings");
  return x;
}

inline std::vector<Mat> fixed_point_space(const RowContraction& t, const ToleranceConfig& cfg) {
  const int d = t.d();
  Mat tm = transfer_matrix(t).matrix - Mat::Identity(d * d, d * d);
  Mat ns = nullspace(tm, cfg.rank_rtol, 1.0);
  std::vector<Mat> basis;
  for (Eigen::Index j = 0; j < ns.cols(); ++j) basis.push_back(unvec(ns.col(j), d));
  return basis;
}

inline int pure_rank(const RowContraction& t, const ToleranceConfig& cfg) {
  return numerical_rank(t.defect(), cfg.rank_rtol, 1.0);
}

inline bool is_unitary(const Mat& u, double tol) {
  return u.rows() == u.cols() && (u.adjoint() * u - Mat::Identity(u.rows(), u.cols())).norm() <= tol;
}

inline RowContraction gauge_transform(const RowContraction& t, const Mat& u) {
  if (u.rows() != t.n() || u.cols() != t.n())
    throw Error(ErrorKind::DimensionMismatch, "gauge matrix must be n x n");
  if (!is_unitary(u, 1e-10)) throw Error(ErrorKind::NotUnitary, "gauge matrix is not unitary");
  std::vector<Mat> out;
  for (int j = 0; j < t.n(); ++j) {
    Mat a = Mat::Zero(t.d(), t.d());
    for (int i = 0; i < t.n(); ++i) a += u(i, j) * t[i];
    out.push_back(a);
  }
  return RowContraction(std::move(out));
}

inline RowContraction make_atomic(const Word& u, cplx lambda, int n) {
  if (u.empty()) throw Error(ErrorKind::BadWord, "empty word");
  for (int letter : u)
    if (letter < 1 || letter > n)
      throw Error(ErrorKind::BadWord, "letter " + std::to_string(letter) + " outside 1.." + std::to_string(n));
  if (std::abs(std::abs(lambda) - 1.0) > 1e-10) throw Error(ErrorKind::NotUnit, "lambda must be unimodular");
  const int d = static_cast<int>(u.size());
  std::vector<Mat> mats(static_cast<std::size_t>(n), Mat::Zero(d, d));
  for (int k = 0; k + 1 < d; ++k) mats[u[k] - 1](k + 1, k) = 1.0;
  mats[u[d - 1] - 1](0, d - 1) += lambda;
  return RowContraction(std::move(mats));
}

inline RowContraction make_cuntz_state(const Vec& eta) {
  if (eta.size() == 0) throw Error(ErrorKind::DimensionMismatch, "empty state vector");
  if (std::abs(eta.norm() - 1.0) > 1e-10) throw Error(ErrorKind::NotUnit, "state vector must have norm 1");
  std::vector<Mat> mats;
  for (Eigen::Index i = 0; i < eta.size(); ++i) mats.push_back(Mat::Constant(1, 1, eta(i)));
  return RowContraction(std::move(mats));
}

inline Mat random_gaussian(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Mat m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) {
      double re = g(rng);
      double im = g(rng);
      m(i, j) = cplx(re, im);
    }
  return m;
}

inline Mat random_unitary(Eigen::Index dim, std::mt19937_64& rng) {
  Eigen::HouseholderQR<Mat> qr(random_gaussian(dim, dim, rng));
  Mat q = qr.householderQ();
  Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index i = 0; i < dim; ++i) {
    cplx p = r(i, i);
    if (std::abs(p) > 0) q.col(i) *= p / std::abs(p);
  }
  return q;
}

inline RowContraction random_contraction(int n, int d, double target_norm, std::uint64_t seed) {
  if (n < 1 || d < 1) throw Error(ErrorKind::DimensionMismatch, "n and d must be positive");
  if (!(target_norm > 0) || target_norm > 1)
    throw Error(ErrorKind::MalformedInput, "target norm must lie in (0, 1]");
  std::mt19937_64 rng(seed);
  std::vector<Mat> mats;
  for (int i = 0; i < n; ++i) mats.push_back(random_gaussian(d, d, rng));
  RowContraction raw(mats);
  double s = target_norm / raw.norm();
  for (auto& m : mats) m *= s;
  return RowContraction(std::move(mats));
}

inline RowContraction conjugate(const RowContraction& t, const Mat& s, const Mat& s_inv) {
  std::vector<Mat> out;
  for (const auto& a : t.matrices()) out.push_back(s * a * s_inv);
  return RowContraction(std::move(out));
}

inline RowContraction conjugate(const RowContraction& t, const Mat& s) {
  return conjugate(t, s, s.inverse());
}

inline RowContraction adjoint_tuple(const RowContraction& t) {
  std::vector<Mat> out;
  for (const auto& a : t.matrices()) out.push_back(a.adjoint());
  return RowContraction(std::move(out));
}

}  // namespace rowdil
