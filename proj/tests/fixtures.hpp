#pragma once

// Example tuples shared by the unit tests and the acceptance binary.

#include "rowdil/tuple.hpp"

#include <cmath>

namespace fixtures {

using rowdil::cplx;
using rowdil::Mat;
using rowdil::RowContraction;

inline Mat m2(double a, double b, double c, double d) {
  Mat m(2, 2);
  m << a, b, c, d;
  return m;
}

inline Mat e(int d, int i, int j) {
  Mat m = Mat::Zero(d, d);
  m(i, j) = 1.0;
  return m;
}

// The worked 2x2 pair: A1 = [[0,1/2],[1/2,0]], A2 = diag(1/2,0).
inline RowContraction worked_pair() { return RowContraction({m2(0, 0.5, 0.5, 0), m2(0.5, 0, 0, 0)}); }

// Its two pure-rank-one representatives, given by their adjoints.
inline RowContraction rep_b() {
  return RowContraction({m2(0, 1, 0.25, 0).adjoint(), m2(0.5, 0, 0, 0).adjoint()});
}
inline RowContraction rep_c() {
  return RowContraction(
      {m2(0, 1 / std::sqrt(12.0), std::sqrt(3.0) / 2, 0).adjoint(), m2(0.5, 0, 0, 0).adjoint()});
}

// Similarity orbit of the worked pair through diag(1, 2t) at a = 0.
inline RowContraction orbit(double t) {
  return RowContraction({m2(0, 1 / (4 * t), t, 0), m2(0.5, 0, 0, 0)});
}

// Cuntz pair on C^3 whose fixed-point set is four-dimensional.
inline RowContraction fixed_point_pair() {
  const double s = 1 / std::sqrt(2.0), h = 1 / (2 * std::sqrt(2.0));
  Mat a1(3, 3), a2(3, 3);
  a1 << s, 0, 0, h, 0.5, h, 0, 0, s;
  a2 << s, 0, 0, -h, 0.5, -h, 0, 0, s;
  return RowContraction({a1, a2});
}

// Cuntz triple with a unique minimal co-invariant line.
inline RowContraction eigen_line_triple() {
  const double s = 1 / std::sqrt(2.0);
  Mat a1 = Mat::Zero(3, 3), a2 = Mat::Zero(3, 3), a3 = Mat::Zero(3, 3);
  a1.diagonal() << 1, s, s;
  a2(2, 0) = 0.5;
  a2(2, 1) = 0.5;
  a3(1, 0) = s;
  return RowContraction({a1, a2, a3});
}

// A = (diag(1,0), e21), irreducible and Cuntz; B is its diag(1,1/2) conjugate.
inline RowContraction sigma_pair() { return RowContraction({m2(1, 0, 0, 0), m2(0, 0, 1, 0)}); }
inline RowContraction sigma_pair_conjugate() { return RowContraction({m2(1, 0, 0, 0), m2(0, 0, 0.5, 0)}); }

// A1 = e1 e1^* / 2, A_i = e_i e1^* on C^n.
inline RowContraction rank_one_star(int n) {
  std::vector<Mat> mats;
  mats.push_back(0.5 * e(n, 0, 0));
  for (int i = 1; i < n; ++i) mats.push_back(e(n, i, 0));
  return RowContraction(mats);
}

inline RowContraction zero_tuple(int n, int d) {
  return RowContraction(std::vector<Mat>(static_cast<std::size_t>(n), Mat::Zero(d, d)));
}

inline RowContraction direct_sum(const RowContraction& a, const RowContraction& b) {
  std::vector<Mat> mats;
  for (int i = 0; i < a.n(); ++i) {
    Mat m = Mat::Zero(a.d() + b.d(), a.d() + b.d());
    m.topLeftCorner(a.d(), a.d()) = a[i];
    m.bottomRightCorner(b.d(), b.d()) = b[i];
    mats.push_back(m);
  }
  return RowContraction(mats);
}

inline double max_diff(const RowContraction& a, const RowContraction& b) {
  double r = 0;
  for (int i = 0; i < a.n(); ++i) r = std::max(r, (a[i] - b[i]).norm());
  return r;
}

}  // namespace fixtures
