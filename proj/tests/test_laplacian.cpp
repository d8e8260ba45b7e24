#include <catch2/catch_amalgamated.hpp>
#include <algorithm>
#include <cmath>
#include <vector>

#include "fhsc/laplacian.hpp"
#include "fhsc/mesh.hpp"
#include "fhsc/num.hpp"

using fhsc::kPi;
using fhsc::Mesh;

namespace {

// eigenvalues of the function laplacian on the unit flat two-torus under the
// wide stencil: one value sigma(k1)^2 + sigma(k2)^2 per Fourier mode
std::vector<double> function_mode_eigenvalues(int n) {
  const double h = 1.0 / n;
  std::vector<double> sig(n);
  for (int k = 0; k < n; ++k)
    sig[k] = fhsc::stencil_symbol(2.0 * kPi * k / n, h);
  std::vector<double> lam;
  lam.reserve(size_t(n) * n);
  for (int k1 = 0; k1 < n; ++k1)
    for (int k2 = 0; k2 < n; ++k2)
      lam.push_back(sig[k1] * sig[k1] + sig[k2] * sig[k2]);
  std::sort(lam.begin(), lam.end());
  return lam;
}

}  // namespace

TEST_CASE("function laplacian on the flat two-torus matches the mode oracle") {
  Mesh t2 = Mesh::flat_torus(2, 8);
  auto spec = fhsc::laplacian_spectrum(t2, 0);
  auto oracle = function_mode_eigenvalues(8);
  const double scale = 1.0 + oracle.back();
  CHECK(fhsc::sorted_max_deviation(spec.laplacian, oracle) <= 1e-9 * scale);
  CHECK(fhsc::sorted_max_deviation(spec.delta_d, oracle) <= 1e-9 * scale);
  // nothing sits below functions, so the other half is identically zero
  for (double x : spec.d_delta) CHECK(std::abs(x) <= 1e-12 * scale);
}

TEST_CASE("top-degree spectrum mirrors the function spectrum") {
  Mesh t2 = Mesh::flat_torus(2, 8);
  auto p0 = fhsc::laplacian_spectrum(t2, 0);
  auto p2 = fhsc::laplacian_spectrum(t2, 2);
  const double scale = 1.0 + p0.laplacian.back();
  CHECK(fhsc::sorted_max_deviation(p2.laplacian, p0.laplacian) <= 1e-9 * scale);
  // d raises past the top degree, so its half vanishes there
  for (double x : p2.delta_d) CHECK(std::abs(x) <= 1e-12 * scale);
  CHECK(fhsc::sorted_max_deviation(p2.d_delta, p2.laplacian) <= 1e-9 * scale);
}

TEST_CASE("one-form spectra split into exact and coexact parts") {
  const int n = 8;
  Mesh t2 = Mesh::flat_torus(2, n);
  auto p1 = fhsc::laplacian_spectrum(t2, 1);
  auto modes = function_mode_eigenvalues(n);
  const double scale = 1.0 + modes.back();

  // the full operator doubles every function mode
  std::vector<double> doubled;
  for (double x : modes) {
    doubled.push_back(x);
    doubled.push_back(x);
  }
  CHECK(fhsc::sorted_max_deviation(p1.laplacian, doubled) <= 1e-9 * scale);

  // each nonzero mode contributes once to either half; zeros pad the rest
  std::vector<double> half;
  for (double x : modes)
    if (x > 1e-12) half.push_back(x);
  half.resize(p1.delta_d.size(), 0.0);
  std::sort(half.begin(), half.end());
  CHECK(fhsc::sorted_max_deviation(p1.delta_d, half) <= 1e-9 * scale);
  CHECK(fhsc::sorted_max_deviation(p1.d_delta, half) <= 1e-9 * scale);

  // and their union reproduces the full spectrum as a set
  std::vector<double> uni = p1.delta_d;
  uni.insert(uni.end(), p1.d_delta.begin(), p1.d_delta.end());
  auto match = fhsc::match_value_sets(uni, p1.laplacian, 1e-10);
  CHECK(match.equal(1e-9 * scale));
}

TEST_CASE("truncated solve returns the leading part of the full spectrum") {
  Mesh t2 = Mesh::flat_torus(2, 8);
  auto full = fhsc::laplacian_spectrum(t2, 0);
  auto head = fhsc::laplacian_spectrum(t2, 0, 10);
  REQUIRE(head.laplacian.size() == 10);
  for (int i = 0; i < 10; ++i) {
    CHECK(head.laplacian[i] == Catch::Approx(full.laplacian[i]).margin(1e-10));
    CHECK(head.delta_d[i] == Catch::Approx(full.delta_d[i]).margin(1e-10));
  }
}

TEST_CASE("iterative path matches the mode oracle on a larger grid") {
  Mesh big = Mesh::flat_torus(2, 72);  // 5184 unknowns: beyond the dense cap
  auto spec = fhsc::laplacian_spectrum(big, 0, 6);
  auto oracle = function_mode_eigenvalues(72);
  REQUIRE(spec.laplacian.size() == 6);
  for (int i = 0; i < 6; ++i) {
    INFO("i = " << i << " got " << spec.laplacian[i] << " want " << oracle[i]);
    CHECK(std::abs(spec.laplacian[i] - oracle[i]) <= 1e-6 * (1.0 + oracle[i]));
  }
}

TEST_CASE("resource and degree guards") {
  Mesh t4 = Mesh::flat_torus(4, 10);
  CHECK_THROWS_AS(fhsc::laplacian_spectrum(t4, 2), fhsc::resource_error);
  Mesh big = Mesh::flat_torus(2, 72);
  CHECK_THROWS_AS(fhsc::laplacian_spectrum(big, 0), fhsc::resource_error);
  Mesh t2 = Mesh::flat_torus(2, 8);
  CHECK_THROWS_AS(fhsc::laplacian_spectrum(t2, 3), std::invalid_argument);
  CHECK_THROWS_AS(fhsc::laplacian_spectrum(t2, -1), std::invalid_argument);
}
