#pragma once

// Irreducible representations of su(2) in the weight basis.
//
// Lie algebra conventions (2x2 defining matrices):
//   theta1 = (i/2)[[0,1],[1,0]]
//   theta2 = (1/2)[[0,1],[-1,0]]
//   theta3 = (i/2)[[1,0],[0,-1]]
// so [theta_a, theta_b] = -eps_{abc} theta_c; in particular
// [theta2, theta1] = theta3.  The inner product on su(2) is scaled so that
// {theta1, theta2, theta3} is orthonormal ( <A,B> = -2 tr(AB) ).
//
// The (n+1)-dimensional irrep acts on the weight basis v_0..v_n:
//   H v_k = (n-2k) v_k,   X v_k = k(n-k+1) v_{k-1},   Y v_k = v_{k+1}
// (v_k = 0 outside 0..n), with skew generators
//   T1 = (i/2)(X+Y),  T2 = (1/2)(X-Y),  T3 = (i/2)H.
// The invariant hermitian form is diagonal: gram[0] = 1,
// gram[k] = gram[k-1] * k(n-k+1); every T_i is skew-hermitian for it.
//
// Group elements act either by the symmetric-power lift of the 2x2 matrix
// (rep_lift, the production path) or by exponentiating the algebra matrices
// (rep_exponential, kept as an independent cross-check).

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <stdexcept>

#include "fhsc/num.hpp"

namespace fhsc {

using complexd = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Mat2 = Eigen::Matrix2cd;

inline constexpr int kMaxWeight = 64;  // cap on the irrep label n

struct LieBasis {
  Mat2 theta1, theta2, theta3;
};

inline LieBasis lie_basis() {
  const complexd i(0, 1);
  LieBasis b;
  b.theta1 << 0.0, 0.5 * i, 0.5 * i, 0.0;
  b.theta2 << 0.0, 0.5, -0.5, 0.0;
  b.theta3 << 0.5 * i, 0.0, 0.0, -0.5 * i;
  return b;
}

struct Irrep {
  int n = 0;
  Mat X, Y, H;        // raising/lowering/weight matrices (real integer entries)
  Mat T1, T2, T3;     // skew generators
  Eigen::VectorXd gram;  // diagonal of the invariant hermitian form
};

// max |2(XY+YX) + H^2 - (n^2+2n) Id| evaluated in exact int64 arithmetic;
// this is -4(T1^2+T2^2+T3^2) - (n^2+2n) Id scaled to integer matrices.
inline int64_t exact_casimir_residual(int n) {
  const int d = n + 1;
  std::vector<int64_t> X(d * d, 0), Y(d * d, 0), H(d * d, 0);
  for (int k = 0; k <= n; ++k) {
    H[k * d + k] = n - 2 * k;
    if (k >= 1) X[(k - 1) * d + k] = int64_t(k) * (n - k + 1);
    if (k + 1 <= n) Y[(k + 1) * d + k] = 1;
  }
  auto mul = [d](const std::vector<int64_t>& A, const std::vector<int64_t>& B) {
    std::vector<int64_t> C(d * d, 0);
    for (int i = 0; i < d; ++i)
      for (int k = 0; k < d; ++k) {
        int64_t a = A[i * d + k];
        if (a == 0) continue;
        for (int j = 0; j < d; ++j) C[i * d + j] += a * B[k * d + j];
      }
    return C;
  };
  auto XY = mul(X, Y), YX = mul(Y, X), HH = mul(H, H);
  int64_t target = int64_t(n) * n + 2 * n, worst = 0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      int64_t v = 2 * (XY[i * d + j] + YX[i * d + j]) + HH[i * d + j] -
                  (i == j ? target : 0);
      worst = std::max(worst, std::abs(v));
    }
  return worst;
}

inline Irrep build_irrep(int n) {
  if (n < 0 || n > kMaxWeight)
    throw std::invalid_argument("build_irrep: n must lie in [0, 64]");
  const int d = n + 1;
  Irrep r;
  r.n = n;
  r.X = Mat::Zero(d, d);
  r.Y = Mat::Zero(d, d);
  r.H = Mat::Zero(d, d);
  for (int k = 0; k <= n; ++k) {
    r.H(k, k) = double(n - 2 * k);
    if (k >= 1) r.X(k - 1, k) = double(k) * double(n - k + 1);
    if (k + 1 <= n) r.Y(k + 1, k) = 1.0;
  }
  const complexd i(0, 1);
  r.T1 = 0.5 * i * (r.X + r.Y);
  r.T2 = 0.5 * (r.X - r.Y);
  r.T3 = 0.5 * i * r.H;
  r.gram = Eigen::VectorXd(d);
  r.gram[0] = 1.0;
  for (int k = 1; k <= n; ++k)
    r.gram[k] = r.gram[k - 1] * double(k) * double(n - k + 1);
#ifdef FHSC_EXACT_CHECKS
  if (exact_casimir_residual(n) != 0)
    throw std::logic_error("build_irrep: exact casimir identity violated");
#endif
  return r;
}

inline Mat casimir(const Irrep& r) {
  return -(r.T1 * r.T1 + r.T2 * r.T2 + r.T3 * r.T3);
}

inline double casimir_eigenvalue(int n) { return 0.25 * double(n) * double(n + 2); }

// --- group elements -------------------------------------------------------

inline double unitarity_defect(const Mat2& g) {
  return (g.adjoint() * g - Mat2::Identity()).cwiseAbs().maxCoeff();
}

inline bool is_special_unitary(const Mat2& g, double tol = 1e-12) {
  return unitarity_defect(g) <= tol && std::abs(g.determinant() - 1.0) <= tol;
}

// matrix of g on V^(n) in the weight basis (symmetric-power lift)
inline Mat rep_lift(const Irrep& r, const Mat2& g) {
  const int n = r.n, d = n + 1;
  const complexd a = g(0, 0), b = g(0, 1), c = g(1, 0), e = g(1, 1);
  Mat out = Mat::Zero(d, d);
  for (int k = 0; k <= n; ++k) {
    for (int j = 0; j <= n; ++j) {
      // coefficient of v_j in g.v_k:
      //   ((n-j)!/(n-k)!) sum_{p+q=j} C(n-k,p) C(k,q) a^{n-k-p} c^p b^{k-q} e^q
      complexd sum(0, 0);
      for (int p = std::max(0, j - k); p <= std::min(j, n - k); ++p) {
        const int q = j - p;
        complexd term(double(binomial(n - k, p)) * double(binomial(k, q)), 0);
        for (int t = 0; t < n - k - p; ++t) term *= a;
        for (int t = 0; t < p; ++t) term *= c;
        for (int t = 0; t < k - q; ++t) term *= b;
        for (int t = 0; t < q; ++t) term *= e;
        sum += term;
      }
      double ratio = 1.0;  // (n-j)!/(n-k)! as a running product
      if (j < k)
        for (int t = n - k + 1; t <= n - j; ++t) ratio *= double(t);
      else
        for (int t = n - j + 1; t <= n - k; ++t) ratio /= double(t);
      out(j, k) = ratio * sum;
    }
  }
  return out;
}

// pi_kl(g) = (g v_k, v_l) in the invariant form (linear in the first slot)
inline complexd matrix_element(const Irrep& r, int k, int l, const Mat2& g) {
  if (k < 0 || k > r.n || l < 0 || l > r.n)
    throw std::invalid_argument("matrix_element: weight index out of range");
  if (!is_special_unitary(g))
    throw std::invalid_argument("matrix_element: g is not special unitary within 1e-12");
  Mat lift = rep_lift(r, g);
  return r.gram[l] * lift(l, k);
}

// (g theta_i v_k, v_l): derivative of pi_kl along the left-invariant field i
inline complexd theta_matrix_element(const Irrep& r, int axis, int k, int l,
                                     const Mat& lift_of_g) {
  const Mat* T = axis == 1 ? &r.T1 : axis == 2 ? &r.T2 : &r.T3;
  complexd sum(0, 0);
  for (int j = 0; j <= r.n; ++j) {
    complexd tjk = (*T)(j, k);
    if (tjk != complexd(0, 0)) sum += tjk * lift_of_g(l, j);
  }
  return r.gram[l] * sum;
}

// coordinates of log(g) in the theta basis: g = exp(c1 theta1 + c2 theta2 + c3 theta3)
inline Eigen::Vector3d su2_log(const Mat2& g) {
  // write g = w Id + 2(v1 theta1 + v2 theta2 + v3 theta3); then
  // g = exp(t vhat . theta) with t = 2 atan2(|v|, w)
  double w = 0.5 * (g(0, 0) + g(1, 1)).real();
  double v1 = g(0, 1).imag();
  double v2 = g(0, 1).real();
  double v3 = g(0, 0).imag();
  double vn = std::sqrt(v1 * v1 + v2 * v2 + v3 * v3);
  double t = 2.0 * std::atan2(vn, w);
  if (vn < 1e-300) return Eigen::Vector3d::Zero();
  return Eigen::Vector3d(t * v1 / vn, t * v2 / vn, t * v3 / vn);
}

// exp(c1 T1 + c2 T2 + c3 T3) computed through the gram-unitary similarity
inline Mat rep_exp_algebra(const Irrep& r, const Eigen::Vector3d& c) {
  const int d = r.n + 1;
  Mat A = c[0] * r.T1 + c[1] * r.T2 + c[2] * r.T3;
  Eigen::VectorXd s(d), si(d);
  for (int k = 0; k < d; ++k) {
    s[k] = std::sqrt(r.gram[k]);
    si[k] = 1.0 / s[k];
  }
  Mat B = s.asDiagonal() * A * si.asDiagonal();  // skew-hermitian
  Mat M = complexd(0, -1) * B;                   // hermitian
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (M + M.adjoint()));
  if (es.info() != Eigen::Success)
    throw std::runtime_error("rep_exp_algebra: eigensolver failed");
  Mat phase = Mat::Zero(d, d);
  for (int k = 0; k < d; ++k)
    phase(k, k) = std::exp(complexd(0, es.eigenvalues()[k]));
  Mat expB = es.eigenvectors() * phase * es.eigenvectors().adjoint();
  return si.asDiagonal() * expB * s.asDiagonal();
}

// independent route for the group action: exponentiate log(g) in the irrep
inline Mat rep_exponential(const Irrep& r, const Mat2& g) {
  if (!is_special_unitary(g))
    throw std::invalid_argument("rep_exponential: g is not special unitary within 1e-12");
  return rep_exp_algebra(r, su2_log(g));
}

// exp(t theta_a) in the defining representation: theta_a^2 = -(1/4) Id
inline Mat2 exp2_theta(int axis, double t) {
  LieBasis b = lie_basis();
  const Mat2& th = axis == 1 ? b.theta1 : axis == 2 ? b.theta2 : b.theta3;
  return std::cos(0.5 * t) * Mat2::Identity() + 2.0 * std::sin(0.5 * t) * th;
}

}  // namespace fhsc
