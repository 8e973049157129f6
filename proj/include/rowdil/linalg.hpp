#pragma once

// Dense complex helpers shared by every module. vec() stacks columns, so
// vec(A X B) = (B^T kron A) vec(X).

#include <Eigen/Dense>

#include <algorithm>
#include <complex>
#include <vector>

namespace rowdil {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

inline Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline Vec vec(const Mat& x) {
  return Eigen::Map<const Vec>(x.data(), x.size());
}

inline Mat unvec(const Vec& v, Eigen::Index rows) {
  Eigen::Index cols = rows == 0 ? 0 : v.size() / rows;
  return Eigen::Map<const Mat>(v.data(), rows, cols);
}

inline Eigen::VectorXd singular_values(const Mat& m) {
  if (m.size() == 0) return Eigen::VectorXd();
  return Eigen::BDCSVD<Mat>(m).singularValues();
}

inline double op_norm(const Mat& m) {
  auto s = singular_values(m);
  return s.size() ? s(0) : 0.0;
}

// Singular values at or below rtol * max(sigma_max, scale) count as zero.
// The scale floor keeps pure round-off from being ranked against itself,
// e.g. the defect of a Cuntz tuple is O(1e-16) everywhere.
inline double rank_cutoff(const Eigen::VectorXd& s, double rtol, double scale) {
  double top = s.size() ? s(0) : 0.0;
  return rtol * std::max(top, scale);
}

inline int numerical_rank(const Mat& m, double rtol, double scale = 0.0) {
  auto s = singular_values(m);
  double cut = rank_cutoff(s, rtol, scale);
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > cut) ++r;
  return r;
}

// Orthonormal basis of {x : m x = 0}.
inline Mat nullspace(const Mat& m, double rtol, double scale = 0.0) {
  const Eigen::Index cols = m.cols();
  if (m.rows() == 0) return Mat::Identity(cols, cols);
  Eigen::BDCSVD<Mat> svd(m, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  double cut = rank_cutoff(s, rtol, scale);
  Eigen::Index r = 0;
  while (r < s.size() && s(r) > cut) ++r;
  return svd.matrixV().rightCols(cols - r);
}

// Orthonormal basis of the column space of m.
inline Mat range_basis(const Mat& m, double rtol, double scale = 0.0) {
  if (m.cols() == 0) return Mat(m.rows(), 0);
  Eigen::BDCSVD<Mat> svd(m, Eigen::ComputeThinU);
  const auto& s = svd.singularValues();
  double cut = rank_cutoff(s, rtol, scale);
  Eigen::Index r = 0;
  while (r < s.size() && s(r) > cut) ++r;
  return svd.matrixU().leftCols(r);
}

inline Mat orth_complement(const Mat& q, Eigen::Index dim) {
  if (q.cols() == 0) return Mat::Identity(dim, dim);
  return nullspace(q.adjoint(), 1e-10, 1.0);
}

inline Mat projector(const Mat& q) { return q * q.adjoint(); }

inline Mat hermitian_part(const Mat& m) { return (m + m.adjoint()) / 2.0; }

inline Mat psd_sqrt(const Mat& h) {
  Eigen::SelfAdjointEigenSolver<Mat> es(hermitian_part(h));
  Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

inline double spectral_radius(const Mat& m) {
  if (m.size() == 0) return 0.0;
  Eigen::ComplexEigenSolver<Mat> es(m, false);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

inline double condition_number(const Mat& m) {
  auto s = singular_values(m);
  if (s.size() == 0) return 1.0;
  double lo = s(s.size() - 1);
  return lo > 0 ? s(0) / lo : std::numeric_limits<double>::infinity();
}

// Append to the orthonormal columns of q every candidate column whose
// component orthogonal to span(q) has norm above tol. Two passes of
// Gram-Schmidt per candidate.
inline Mat orth_extend(const Mat& q, const Mat& candidates, double tol) {
  std::vector<Vec> cols;
  for (Eigen::Index j = 0; j < q.cols(); ++j) cols.push_back(q.col(j));
  for (Eigen::Index j = 0; j < candidates.cols(); ++j) {
    Vec v = candidates.col(j);
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& c : cols) v -= c * c.dot(v);
    double nv = v.norm();
    if (nv > tol) cols.push_back(v / nv);
  }
  Mat out(q.rows(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) out.col(static_cast<Eigen::Index>(j)) = cols[j];
  return out;
}

}  // namespace rowdil
