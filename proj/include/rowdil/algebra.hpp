#pragma once

// Word closures and the Burnside test: a set of k x k matrices acts
// irreducibly iff the unital algebra it generates has dimension k^2.

#include "rowdil/linalg.hpp"

#include <vector>

namespace rowdil {

inline double generator_scale(const std::vector<Mat>& gens) {
  double s = 1.0;
  for (const auto& g : gens) s = std::max(s, op_norm(g));
  return s;
}

// Orthonormal basis of span{ g_w v : v in columns of start, all words w }.
inline Mat word_closure(const std::vector<Mat>& gens, const Mat& start, double rtol) {
  const Eigen::Index k = start.rows();
  const double tol = rtol * generator_scale(gens);
  Mat q = orth_extend(Mat(k, 0), start, tol);
  Mat frontier = q;
  for (Eigen::Index len = 0; len < k * k && frontier.cols() > 0; ++len) {
    Mat cand(k, frontier.cols() * static_cast<Eigen::Index>(gens.size()));
    for (std::size_t i = 0; i < gens.size(); ++i)
      cand.middleCols(static_cast<Eigen::Index>(i) * frontier.cols(), frontier.cols()) = gens[i] * frontier;
    Mat grown = orth_extend(q, cand, tol);
    if (grown.cols() == q.cols()) break;
    frontier = grown.rightCols(grown.cols() - q.cols());
    q = grown;
    if (q.cols() == k) break;
  }
  return q;
}

inline int algebra_dimension(const std::vector<Mat>& gens, Eigen::Index k, double rtol) {
  if (k == 0) return 0;
  const Mat id = Mat::Identity(k, k);
  std::vector<Mat> left;
  for (const auto& g : gens) left.push_back(kron(id, g));
  Vec start = vec(id) / std::sqrt(static_cast<double>(k));
  return static_cast<int>(word_closure(left, start, rtol).cols());
}

inline bool burnside_irreducible(const std::vector<Mat>& gens, Eigen::Index k, double rtol) {
  return algebra_dimension(gens, k, rtol) == k * k;
}

// q^* g q for each generator; q has orthonormal columns spanning an
// invariant subspace.
inline std::vector<Mat> restrict_to(const std::vector<Mat>& gens, const Mat& q) {
  std::vector<Mat> out;
  for (const auto& g : gens) out.push_back(q.adjoint() * g * q);
  return out;
}

inline std::vector<Mat> adjoints(const std::vector<Mat>& gens) {
  std::vector<Mat> out;
  for (const auto& g : gens) out.push_back(g.adjoint());
  return out;
}

}  // namespace rowdil
