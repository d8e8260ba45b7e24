#pragma once

// Finite Hessian blocks of the energy at the Hopf map.
//
// The second variation restricted to the span of matrix elements of the
// (n+1)-dimensional irrep decomposes into 2(n+1) x 2(n+1) blocks acting on
// V^(n) (x) p, p = span{theta1, theta2}.  Basis ordering is block-major:
// indices 0..n are the v_k (x) theta1 components, n+1..2n+1 the
// v_k (x) theta2 components.
//
// Closed forms verified by the eigensolves here:
//   vertical block  A :  spectrum {-1/2 (2kn - 2k^2 + n) : k=0..n} u {0 x(n+1)}
//   hessian block   L = 1/4 n(n+2) Id + A :
//                        spectrum {1/4 (n-2k)^2 : k} u {1/4 n(n+2) x(n+1)}
//   ward family (n=1): D + alpha L has spectrum {(3a+7)/4 x2, (a-1)/4 x2},
//                        so the minimum eigenvalue changes sign at alpha = 1.

#include <Eigen/Dense>
#include <algorithm>
#include <map>
#include <stdexcept>
#include <vector>

#include "fhsc/num.hpp"
#include "fhsc/su2.hpp"

namespace fhsc {

enum class BlockKind { Hessian, ABlock, Ward };

inline const char* to_string(BlockKind k) {
  switch (k) {
    case BlockKind::Hessian: return "hessian";
    case BlockKind::ABlock: return "a_block";
    case BlockKind::Ward: return "ward";
  }
  return "?";
}

struct HessianBlock {
  int n = 0;
  int size = 0;        // always 2(n+1)
  Mat matrix;          // operator in the block-major weight basis
  BlockKind kind = BlockKind::Hessian;
  double alpha = 0.0;  // meaningful only for Ward
};

namespace detail {

inline Mat two_by_two_blocks(const Mat& tl, const Mat& tr, const Mat& bl,
                             const Mat& br) {
  const int d = int(tl.rows());
  Mat m(2 * d, 2 * d);
  m.topLeftCorner(d, d) = tl;
  m.topRightCorner(d, d) = tr;
  m.bottomLeftCorner(d, d) = bl;
  m.bottomRightCorner(d, d) = br;
  return m;
}

}  // namespace detail

// vertical part of the second variation on V^(n) (x) p
inline HessianBlock a_block(int n) {
  Irrep r = build_irrep(n);
  HessianBlock b;
  b.n = n;
  b.size = 2 * (n + 1);
  b.kind = BlockKind::ABlock;
  b.matrix = detail::two_by_two_blocks(r.T2 * r.T2, -(r.T2 * r.T1),
                                       -(r.T1 * r.T2), r.T1 * r.T1);
  return b;
}

// full second-variation block: casimir eigenvalue plus the vertical part
inline HessianBlock hessian_block(int n) {
  HessianBlock b = a_block(n);
  b.kind = BlockKind::Hessian;
  b.matrix += casimir_eigenvalue(n) * Mat::Identity(b.size, b.size);
  return b;
}

// perturbed n = 1 block D + alpha L, assembled from the operator definition
inline HessianBlock ward_block(double alpha) {
  if (!(alpha >= 0.0))
    throw std::invalid_argument("ward_block: alpha must be nonnegative");
  Irrep r = build_irrep(1);
  HessianBlock b;
  b.n = 1;
  b.size = 4;
  b.kind = BlockKind::Ward;
  b.alpha = alpha;
  b.matrix = 0.75 * (1.0 + alpha) * Mat::Identity(4, 4) +
             detail::two_by_two_blocks(
                 alpha * r.T2 * r.T2, -2.0 * r.T3 - alpha * r.T2 * r.T1,
                 2.0 * r.T3 - alpha * r.T1 * r.T2, alpha * r.T1 * r.T1);
  return b;
}

// same operator written out entrywise: per weight k the (theta1, theta2)
// components couple through [[-a/4, -s_k i(1+a/4)], [s_k i(1+a/4), -a/4]]
// with s_0 = +1, s_1 = -1, shifted by 3(1+a)/4 on the diagonal
inline HessianBlock ward_block_literal(double alpha) {
  if (!(alpha >= 0.0))
    throw std::invalid_argument("ward_block_literal: alpha must be nonnegative");
  HessianBlock b;
  b.n = 1;
  b.size = 4;
  b.kind = BlockKind::Ward;
  b.alpha = alpha;
  b.matrix = Mat::Zero(4, 4);
  const complexd i(0, 1);
  const double shift = 0.75 * (1.0 + alpha);
  const complexd coupling = i * (1.0 + 0.25 * alpha);
  for (int k = 0; k <= 1; ++k) {
    const double sk = (k == 0) ? 1.0 : -1.0;
    const int r1 = k, r2 = 2 + k;  // theta1 / theta2 components of weight k
    b.matrix(r1, r1) = shift - 0.25 * alpha;
    b.matrix(r2, r2) = shift - 0.25 * alpha;
    b.matrix(r1, r2) = -sk * coupling;
    b.matrix(r2, r1) = sk * coupling;
  }
  return b;
}

// diagonal of the invariant inner product on V^(n) (x) p in block ordering
inline Eigen::VectorXd block_weights(int n) {
  Irrep r = build_irrep(n);
  Eigen::VectorXd w(2 * (n + 1));
  for (int c = 0; c < 2; ++c)
    for (int k = 0; k <= n; ++k) w[c * (n + 1) + k] = r.gram[k];
  return w;
}

// eigenvalues of M in the weighted inner product: conjugate by S = sqrt(W),
// demand hermiticity of the result, then a self-adjoint eigensolve
inline std::vector<double> weighted_spectrum(const Mat& M,
                                             const Eigen::VectorXd& w) {
  const int d = int(M.rows());
  Eigen::VectorXd s(d), si(d);
  for (int k = 0; k < d; ++k) {
    s[k] = std::sqrt(w[k]);
    si[k] = 1.0 / s[k];
  }
  Mat sym = s.asDiagonal() * M * si.asDiagonal();
  const double scale = std::max(1.0, sym.cwiseAbs().maxCoeff());
  const double defect = (sym - sym.adjoint()).cwiseAbs().maxCoeff();
  if (defect > 1e-12 * scale)
    throw std::invalid_argument(
        "weighted_spectrum: operator is not self-adjoint for the given weights");
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (sym + sym.adjoint()));
  if (es.info() != Eigen::Success)
    throw std::runtime_error("weighted_spectrum: eigensolver failed");
  std::vector<double> out(es.eigenvalues().data(), es.eigenvalues().data() + d);
  std::sort(out.begin(), out.end());
  return out;
}

// nonzero eigenvalue of the coupling block attached to weight index k
inline double a_block_eigenvalue(int n, int k) {
  return -0.5 * (2.0 * k * n - 2.0 * k * k + n);
}

// closed-form spectra, sorted ascending with multiplicity
inline std::vector<double> predicted_spectrum(BlockKind kind, int n,
                                              double alpha = 0.0) {
  std::vector<double> v;
  switch (kind) {
    case BlockKind::ABlock:
      for (int k = 0; k <= n; ++k) v.push_back(a_block_eigenvalue(n, k));
      v.insert(v.end(), size_t(n + 1), 0.0);
      break;
    case BlockKind::Hessian:
      for (int k = 0; k <= n; ++k) {
        double d = double(n - 2 * k);
        v.push_back(0.25 * d * d);
      }
      v.insert(v.end(), size_t(n + 1), casimir_eigenvalue(n));
      break;
    case BlockKind::Ward:
      v = {0.25 * (alpha - 1.0), 0.25 * (alpha - 1.0), 0.25 * (3.0 * alpha + 7.0),
           0.25 * (3.0 * alpha + 7.0)};
      break;
  }
  std::sort(v.begin(), v.end());
  return v;
}

struct SpectrumReport {
  int n = 0;
  BlockKind kind = BlockKind::Hessian;
  double alpha = 0.0;
  std::vector<double> eigenvalues;  // sorted ascending
  std::vector<double> predicted;    // sorted ascending
  double max_abs_deviation = 0.0;
};

inline SpectrumReport block_spectrum(const HessianBlock& b) {
  SpectrumReport rep;
  rep.n = b.n;
  rep.kind = b.kind;
  rep.alpha = b.alpha;
  rep.eigenvalues = weighted_spectrum(b.matrix, block_weights(b.n));
  rep.predicted = predicted_spectrum(b.kind, b.n, b.alpha);
  rep.max_abs_deviation = sorted_max_deviation(rep.eigenvalues, rep.predicted);
  return rep;
}

inline double min_eigenvalue(const HessianBlock& b) {
  return weighted_spectrum(b.matrix, block_weights(b.n)).front();
}

// locate the sign change of the minimum ward eigenvalue by bisection
inline double stability_threshold(double alpha_lo, double alpha_hi, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("stability_threshold: tol must be positive");
  double flo = min_eigenvalue(ward_block(alpha_lo));
  double fhi = min_eigenvalue(ward_block(alpha_hi));
  if (!(flo < 0.0 && fhi > 0.0))
    throw std::invalid_argument(
        "stability_threshold: bracket must satisfy f(lo) < 0 < f(hi)");
  while (alpha_hi - alpha_lo > tol) {
    double mid = 0.5 * (alpha_lo + alpha_hi);
    double fm = min_eigenvalue(ward_block(mid));
    if (fm < 0.0)
      alpha_lo = mid;
    else
      alpha_hi = mid;
  }
  return 0.5 * (alpha_lo + alpha_hi);
}

struct EigenvalueCluster {
  double value = 0.0;
  int multiplicity = 0;
};

struct MultiplicityReport {
  int n = 0;
  std::vector<EigenvalueCluster> clusters;  // sorted by value
  int total_dimension = 0;                  // must equal 2(n+1)^2
};

// spectrum of the full L^2 block on span{pi_kl} (x) p: each block eigenvalue
// is repeated once per matrix-element column index l = 0..n
inline MultiplicityReport l2_block_multiplicities(int n, double tol = 1e-8) {
  std::vector<std::pair<double, int>> raw;
  for (int k = 0; k <= n; ++k) {
    double d = double(n - 2 * k);
    raw.emplace_back(0.25 * d * d, n + 1);
  }
  raw.emplace_back(casimir_eigenvalue(n), (n + 1) * (n + 1));
  std::sort(raw.begin(), raw.end());
  MultiplicityReport rep;
  rep.n = n;
  for (const auto& [val, mult] : raw) {
    if (!rep.clusters.empty() && val - rep.clusters.back().value <= tol)
      rep.clusters.back().multiplicity += mult;
    else
      rep.clusters.push_back({val, mult});
    rep.total_dimension += mult;
  }
  return rep;
}

}  // namespace fhsc
