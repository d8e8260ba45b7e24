#pragma once

// Reduced one-dimensional variational problem for equivariant profiles.
//
// The profile alpha(t) carries the reduced energy
//
//   E[alpha] = pi^2 int  2 a^2 a'^2 / (1+a^2)^4  +  a^4 / (2 (1+a^2)^2)  dt,
//
// whose Euler-Lagrange equation conserves
//
//   H(a, a') = a^2 a'^2 / (1+a^2)^4 - a^4 / (4 (1+a^2)^2).
//
// On the H = 0 level set the integrand collapses to pi^2 e^{-2t} along the
// exact decaying branch alpha_+(t) = (e^t - 1)^{-1/2}; gluing two mirror
// copies of that branch reproduces the closed-form total pi^2.

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "fhsc/num.hpp"

namespace fhsc {

inline double kinetic_coefficient(double a) {
  const double u = 1.0 + a * a;
  return 2.0 * a * a / (u * u * u * u);
}

inline double potential_term(double a) {
  const double u = 1.0 + a * a;
  return a * a * a * a / (2.0 * u * u);
}

inline double reduced_integrand(double a, double adot) {
  return kPi * kPi * (kinetic_coefficient(a) * adot * adot + potential_term(a));
}

inline double conserved_h(double a, double adot) {
  const double u = 1.0 + a * a;
  return a * a * adot * adot / (u * u * u * u) - a * a * a * a / (4.0 * u * u);
}

// acceleration solved from the Euler-Lagrange equation; singular at a = 0
inline double el_acceleration(double a, double adot) {
  if (std::abs(a) < 1e-9)
    throw std::runtime_error("el_acceleration: degenerate profile near alpha = 0");
  const double u = 1.0 + a * a;
  return 0.5 * a * u - (1.0 - 3.0 * a * a) * adot * adot / (a * u);
}

struct ProfilePoint {
  double alpha = 0.0;
  double alpha_dot = 0.0;
};

// branch +1: alpha_+(t) = (e^t - 1)^{-1/2} on t > 0, decaying to 0;
// branch -1: the mirror alpha_-(t) = -alpha_+(-t) on t < 0
inline ProfilePoint exact_profile(double t, int branch = +1) {
  if (branch != 1 && branch != -1)
    throw std::invalid_argument("exact_profile: branch must be +1 or -1");
  const double s = branch == 1 ? t : -t;
  if (!(s > 0.0))
    throw std::invalid_argument("exact_profile: branch domain violated");
  const double u = std::expm1(s);  // e^s - 1, accurate near s = 0
  const double a = 1.0 / std::sqrt(u);
  const double ad = -0.5 * (1.0 + u) / (u * std::sqrt(u));
  if (branch == 1) return {a, ad};
  return {-a, ad};  // d/dt [-alpha_+(-t)] = alpha_+'(-t)
}

// quadrature of the reduced integrand over sampled (t, alpha, alpha') data:
// composite Simpson on uniform grids (trapezoid for a leftover interval),
// trapezoid otherwise
inline double reduced_energy(const std::vector<double>& t,
                             const std::vector<double>& alpha,
                             const std::vector<double>& alpha_dot) {
  const size_t n = t.size();
  if (n < 2 || alpha.size() != n || alpha_dot.size() != n)
    throw std::invalid_argument("reduced_energy: need matching samples, at least 2");
  for (size_t i = 1; i < n; ++i)
    if (!(t[i] > t[i - 1]))
      throw std::invalid_argument("reduced_energy: times must increase strictly");
  std::vector<double> f(n);
  for (size_t i = 0; i < n; ++i) f[i] = reduced_integrand(alpha[i], alpha_dot[i]);
  const double h0 = t[1] - t[0];
  bool uniform = true;
  for (size_t i = 1; i + 1 < n; ++i)
    if (std::abs((t[i + 1] - t[i]) - h0) > 1e-12 * std::max(1.0, std::abs(h0))) {
      uniform = false;
      break;
    }
  long double acc = 0.0;
  size_t i = 0;
  if (uniform && n >= 3) {
    for (; i + 2 <= n - 1; i += 2)
      acc += (long double)(h0) / 3.0L * (f[i] + 4.0L * f[i + 1] + f[i + 2]);
  }
  for (; i + 1 <= n - 1; ++i)
    acc += 0.5L * (long double)(t[i + 1] - t[i]) * (f[i] + f[i + 1]);
  return double(acc);
}

struct OdeTrajectory {
  std::vector<double> t, alpha, alpha_dot;
  double h_drift = 0.0;  // max |H(t) - H(t0)| along the trajectory
};

// classical fixed-step RK4 for the Euler-Lagrange equation
inline OdeTrajectory integrate_el(double a0, double adot0, double t0, double t1,
                                  double h_step) {
  if (!(h_step > 0.0)) throw std::invalid_argument("integrate_el: need h_step > 0");
  if (!(t1 > t0)) throw std::invalid_argument("integrate_el: need t1 > t0");
  OdeTrajectory traj;
  double a = a0, v = adot0, t = t0;
  const double h_ref = conserved_h(a0, adot0);
  traj.t.push_back(t);
  traj.alpha.push_back(a);
  traj.alpha_dot.push_back(v);
  auto guard = [](double a_now) {
    if (!std::isfinite(a_now) || std::abs(a_now) > 1e8)
      throw std::runtime_error("integrate_el: profile blow-up");
  };
  while (t < t1 - 1e-15 * std::max(1.0, std::abs(t1))) {
    const double h = std::min(h_step, t1 - t);
    const double k1a = v, k1v = el_acceleration(a, v);
    const double k2a = v + 0.5 * h * k1v,
                 k2v = el_acceleration(a + 0.5 * h * k1a, v + 0.5 * h * k1v);
    const double k3a = v + 0.5 * h * k2v,
                 k3v = el_acceleration(a + 0.5 * h * k2a, v + 0.5 * h * k2v);
    const double k4a = v + h * k3v,
                 k4v = el_acceleration(a + h * k3a, v + h * k3v);
    a += h / 6.0 * (k1a + 2.0 * k2a + 2.0 * k3a + k4a);
    v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    t += h;
    guard(a);
    traj.t.push_back(t);
    traj.alpha.push_back(a);
    traj.alpha_dot.push_back(v);
    traj.h_drift = std::max(traj.h_drift, std::abs(conserved_h(a, v) - h_ref));
  }
  return traj;
}

// energy of the two-branch glued profile, sampled on [t1, t2] with n points
inline double glued_energy(double t1, double t2, int n) {
  if (!(t1 > 0.0 && t2 > t1)) throw std::invalid_argument("glued_energy: need 0 < t1 < t2");
  if (n < 2) throw std::invalid_argument("glued_energy: need at least 2 samples");
  std::vector<double> ts(n), as(n), ads(n);
  const double h = (t2 - t1) / (n - 1);
  for (int i = 0; i < n; ++i) {
    ts[i] = t1 + h * i;
    ProfilePoint p = exact_profile(ts[i], +1);
    as[i] = p.alpha;
    ads[i] = p.alpha_dot;
  }
  return 2.0 * reduced_energy(ts, as, ads);
}

}  // namespace fhsc
