#pragma once

// Kahler target geometries for discrete maps.
//
//   FlatTorus2    unit T^2, values (x, y) in [0,1),   omega = dx ^ dy
//   FlatTorus4    unit T^4, values in [0,1)^4,        omega = dx12 + dx34
//   SphereS2      unit round S^2 in R^3, values are unit 3-vectors,
//                 omega = area form:  omega_p(u, v) = (u x p) . v,
//                 J_p(u) = u x p  (so that omega(u,v) = h(J u, v))
//   ProductS2S2   two round spheres, values (p1, p2) as two unit 3-vectors,
//                 omega = omega_1 + omega_2
//
// Tangent vectors use the ambient representation (3-vectors per sphere
// factor, plain coordinates for tori); the metric h is the ambient dot
// product in every case.  J^2 = -Id and omega(.,.) = h(J., .) hold exactly.

#include <cmath>
#include <stdexcept>

namespace fhsc {

enum class TargetKind { FlatTorus2, FlatTorus4, SphereS2, ProductS2S2 };

inline const char* to_string(TargetKind k) {
  switch (k) {
    case TargetKind::FlatTorus2: return "flat_torus2";
    case TargetKind::FlatTorus4: return "flat_torus4";
    case TargetKind::SphereS2: return "sphere";
    case TargetKind::ProductS2S2: return "sphere_product";
  }
  return "?";
}

// numbers stored per vertex (point and tangent use the same layout)
inline int target_value_dim(TargetKind k) {
  switch (k) {
    case TargetKind::FlatTorus2: return 2;
    case TargetKind::FlatTorus4: return 4;
    case TargetKind::SphereS2: return 3;
    case TargetKind::ProductS2S2: return 6;
  }
  return 0;
}

// torus-valued components live on circles of period 1 and must be
// differentiated through the nearest lift; sphere components are plain
inline bool target_wraps(TargetKind k) {
  return k == TargetKind::FlatTorus2 || k == TargetKind::FlatTorus4;
}

namespace detail {

inline void cross3(const double* a, const double* b, double* out) {
  out[0] = a[1] * b[2] - a[2] * b[1];
  out[1] = a[2] * b[0] - a[0] * b[2];
  out[2] = a[0] * b[1] - a[1] * b[0];
}

inline double dot3(const double* a, const double* b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

}  // namespace detail

// metric h on tangent vectors (ambient dot product for every target)
inline double target_h(TargetKind k, const double* u, const double* v) {
  const int n = target_value_dim(k);
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += u[i] * v[i];
  return s;
}

// Kahler form at base point p
inline double target_omega(TargetKind k, const double* p, const double* u,
                           const double* v) {
  switch (k) {
    case TargetKind::FlatTorus2:
      return u[0] * v[1] - u[1] * v[0];
    case TargetKind::FlatTorus4:
      return u[0] * v[1] - u[1] * v[0] + u[2] * v[3] - u[3] * v[2];
    case TargetKind::SphereS2: {
      double c[3];
      detail::cross3(u, p, c);
      return detail::dot3(c, v);
    }
    case TargetKind::ProductS2S2: {
      double c[3];
      detail::cross3(u, p, c);
      double s = detail::dot3(c, v);
      detail::cross3(u + 3, p + 3, c);
      return s + detail::dot3(c, v + 3);
    }
  }
  return 0.0;
}

// complex structure at base point p: out = J_p(u)
inline void target_J(TargetKind k, const double* p, const double* u,
                     double* out) {
  switch (k) {
    case TargetKind::FlatTorus2:
      out[0] = -u[1];
      out[1] = u[0];
      return;
    case TargetKind::FlatTorus4:
      out[0] = -u[1];
      out[1] = u[0];
      out[2] = -u[3];
      out[3] = u[2];
      return;
    case TargetKind::SphereS2:
      detail::cross3(u, p, out);
      return;
    case TargetKind::ProductS2S2:
      detail::cross3(u, p, out);
      detail::cross3(u + 3, p + 3, out + 3);
      return;
  }
}

// orthogonal projection of an ambient vector onto the tangent space at p
inline void target_project(TargetKind k, const double* p, const double* u,
                           double* out) {
  switch (k) {
    case TargetKind::FlatTorus2:
    case TargetKind::FlatTorus4:
      for (int i = 0; i < target_value_dim(k); ++i) out[i] = u[i];
      return;
    case TargetKind::SphereS2: {
      double s = detail::dot3(u, p);
      for (int i = 0; i < 3; ++i) out[i] = u[i] - s * p[i];
      return;
    }
    case TargetKind::ProductS2S2: {
      double s1 = detail::dot3(u, p), s2 = detail::dot3(u + 3, p + 3);
      for (int i = 0; i < 3; ++i) {
        out[i] = u[i] - s1 * p[i];
        out[3 + i] = u[3 + i] - s2 * p[3 + i];
      }
      return;
    }
  }
}

namespace detail {

inline void sphere_exp(const double* p, const double* x, double* out) {
  double n = std::sqrt(dot3(x, x));
  if (n < 1e-300) {
    for (int i = 0; i < 3; ++i) out[i] = p[i];
    return;
  }
  double c = std::cos(n), s = std::sin(n) / n;
  for (int i = 0; i < 3; ++i) out[i] = c * p[i] + s * x[i];
}

inline double mod_unit(double x) {
  double y = x - std::floor(x);
  return (y >= 1.0) ? 0.0 : y;  // guard the floor rounding edge
}

}  // namespace detail

// geodesic exponential: out = exp_p(x)  (x a tangent vector at p)
inline void target_exp(TargetKind k, const double* p, const double* x,
                       double* out) {
  switch (k) {
    case TargetKind::FlatTorus2:
    case TargetKind::FlatTorus4:
      for (int i = 0; i < target_value_dim(k); ++i)
        out[i] = detail::mod_unit(p[i] + x[i]);
      return;
    case TargetKind::SphereS2:
      detail::sphere_exp(p, x, out);
      return;
    case TargetKind::ProductS2S2:
      detail::sphere_exp(p, x, out);
      detail::sphere_exp(p + 3, x + 3, out + 3);
      return;
  }
}

// renormalize a point representation in place (unit spheres, mod-1 tori)
inline void target_normalize(TargetKind k, double* p) {
  switch (k) {
    case TargetKind::FlatTorus2:
    case TargetKind::FlatTorus4:
      for (int i = 0; i < target_value_dim(k); ++i) p[i] = detail::mod_unit(p[i]);
      return;
    case TargetKind::SphereS2: {
      double n = std::sqrt(detail::dot3(p, p));
      for (int i = 0; i < 3; ++i) p[i] /= n;
      return;
    }
    case TargetKind::ProductS2S2: {
      double n1 = std::sqrt(detail::dot3(p, p));
      double n2 = std::sqrt(detail::dot3(p + 3, p + 3));
      for (int i = 0; i < 3; ++i) {
        p[i] /= n1;
        p[3 + i] /= n2;
      }
      return;
    }
  }
}

}  // namespace fhsc
