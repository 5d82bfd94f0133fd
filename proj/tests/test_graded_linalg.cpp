#include <doctest.h>

#include <random>

#include "vectk/graded.hpp"

using namespace vectk;

namespace {

cmat random_complex(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  cmat m(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) m(r, c) = cxd(gauss(rng), gauss(rng));
  return m;
}

cmat random_hermitian(int n, std::mt19937_64& rng) {
  cmat m = random_complex(n, n, rng);
  return (m + m.adjoint()) / 2;
}

std::vector<double> hat_squared_spectrum(const cmat& a) {
  const odd_map h = hat(a);
  eig_result e = hermitian_eig(cmat(h.matrix * h.matrix));
  std::vector<double> out(e.values.data(), e.values.data() + e.values.size());
  return out;
}

}  // namespace

TEST_CASE("hat of the 1x1 zero matrix is the 2x2 zero odd map") {
  odd_map h = hat(cmat::Zero(1, 1));
  CHECK(h.space.dim_even == 1);
  CHECK(h.space.dim_odd == 1);
  CHECK(h.matrix.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("hat([[2]]) squares to eigenvalue 4 on both degrees") {
  cmat a(1, 1);
  a(0, 0) = 2;
  auto spec = hat_squared_spectrum(a);
  REQUIRE(spec.size() == 2);
  CHECK(spec[0] == doctest::Approx(4).epsilon(1e-12));
  CHECK(spec[1] == doctest::Approx(4).epsilon(1e-12));
}

TEST_CASE("hat(diag(0.1, 3)) has sigma(hat^2) = {0.01, 0.01, 9, 9}") {
  cmat a = cmat::Zero(2, 2);
  a(0, 0) = 0.1;
  a(1, 1) = 3.0;
  auto spec = hat_squared_spectrum(a);
  REQUIRE(spec.size() == 4);
  CHECK(spec[0] == doctest::Approx(0.01).epsilon(1e-10));
  CHECK(spec[1] == doctest::Approx(0.01).epsilon(1e-10));
  CHECK(spec[2] == doctest::Approx(9).epsilon(1e-10));
  CHECK(spec[3] == doctest::Approx(9).epsilon(1e-10));
}

TEST_CASE("hermitian_eig basics") {
  SUBCASE("identity") {
    eig_result e = hermitian_eig(cmat::Identity(3, 3));
    for (int i = 0; i < 3; ++i) CHECK(e.values[i] == doctest::Approx(1));
  }
  SUBCASE("pauli x has eigenvalues -1, 1") {
    cmat m(2, 2);
    m << 0, 1, 1, 0;
    eig_result e = hermitian_eig(m);
    CHECK(e.values[0] == doctest::Approx(-1));
    CHECK(e.values[1] == doctest::Approx(1));
  }
  SUBCASE("rejects a non-Hermitian matrix") {
    cmat m(2, 2);
    m << 0, 1, 0, 0;
    CHECK_THROWS_AS(hermitian_eig(m), error);
  }
  SUBCASE("reconstruction and orthonormality on random input") {
    std::mt19937_64 rng(7);
    for (int n : {2, 5, 8, 17, 32}) {
      cmat m = random_hermitian(n, rng);
      eig_result e = hermitian_eig(m);
      const cmat recon = e.vectors * e.values.asDiagonal() * e.vectors.adjoint();
      CHECK((recon - m).cwiseAbs().maxCoeff() < 1e-9);
      const cmat gram = e.vectors.adjoint() * e.vectors;
      CHECK((gram - cmat::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-9);
      for (int i = 1; i < n; ++i) CHECK(e.values[i] >= e.values[i - 1]);
    }
  }
}

TEST_CASE("low_spectrum") {
  SUBCASE("keeps the kernel pair of diag(0.1, 3) below mu = 1") {
    cmat a = cmat::Zero(2, 2);
    a(0, 0) = 0.1;
    a(1, 1) = 3.0;
    graded_subspace s = low_spectrum(hat(a), 1.0);
    CHECK(s.dim_even == 1);
    CHECK(s.dim_odd == 1);
    for (int i = 0; i < s.labels.size(); ++i) CHECK(s.labels[i] == doctest::Approx(0.01));
  }
  SUBCASE("empty truncation below the whole spectrum") {
    cmat a(1, 1);
    a(0, 0) = 2;
    graded_subspace s = low_spectrum(hat(a), 1.0);
    CHECK(s.total() == 0);
  }
  SUBCASE("kernel case: mu below the smallest nonzero eigenvalue keeps Ker A + Ker A*") {
    cmat a = cmat::Zero(2, 2);
    a(1, 1) = 2.0;  // kernel = span e0 on both sides
    graded_subspace s = low_spectrum(hat(a), 1.0);
    CHECK(s.dim_even == 1);
    CHECK(s.dim_odd == 1);
    for (int i = 0; i < s.labels.size(); ++i) CHECK(s.labels[i] == doctest::Approx(0).epsilon(1e-12));
    // the even basis vector spans Ker A
    CHECK(std::abs(s.basis(0, 0)) == doctest::Approx(1));
  }
  SUBCASE("cutoff on the spectrum is rejected") {
    cmat a(1, 1);
    a(0, 0) = 2;
    CHECK_THROWS_AS(low_spectrum(hat(a), 4.0), error);
  }
  SUBCASE("is h-invariant") {
    std::mt19937_64 rng(11);
    cmat a = random_complex(3, 4, rng);
    odd_map h = hat(a);
    graded_subspace s = low_spectrum(h, 1.0);
    if (s.total() > 0) {
      const cmat p = s.basis * s.basis.adjoint();
      const cmat leak = (cmat::Identity(7, 7) - p) * h.matrix * p;
      CHECK(op_norm(leak) < 1e-9);
    }
  }
}

TEST_CASE("select_gap") {
  SUBCASE("midpoint of (0, 4)") { CHECK(select_gap({{0, 4}}, 4) == doctest::Approx(2)); }
  SUBCASE("widest interval across two spectra, clipped at lambda_max") {
    CHECK(select_gap({{0.01, 9}, {0.02, 8}}, 5) == doctest::Approx(2.51));
  }
  SUBCASE("dense grid leaves no gap") {
    std::vector<double> dense;
    for (double x = 0; x <= 1e-3; x += 5e-8) dense.push_back(x);
    CHECK_THROWS_AS(select_gap({dense}, 1e-3, 1e-7), error);
  }
}

TEST_CASE("orthogonal_project") {
  std::mt19937_64 rng(3);
  cmat a = random_complex(3, 3, rng);
  odd_map h = hat(a);
  eig_result e = hermitian_eig(cmat(h.matrix * h.matrix));
  graded_subspace full = low_spectrum(h, e.values[e.values.size() - 1] + 1.0);

  SUBCASE("identity on itself") {
    const cmat p = orthogonal_project(full, full);
    CHECK((p - cmat::Identity(6, 6)).cwiseAbs().maxCoeff() < 1e-9);
  }
  SUBCASE("inclusion of a low part is an isometry") {
    // values come in degree pairs; cut between the first and second pair
    graded_subspace low = low_spectrum(h, (e.values[1] + e.values[2]) / 2);
    if (low.total() > 0 && low.total() < 6) {
      const cmat p = orthogonal_project(low, full);
      const cmat gram = p.adjoint() * p;
      CHECK((gram - cmat::Identity(low.total(), low.total())).cwiseAbs().maxCoeff() < 1e-9);
    }
  }
  SUBCASE("mismatched ambients are rejected") {
    graded_subspace other = full;
    other.ambient = graded_space{4, 3};
    CHECK_THROWS_AS(orthogonal_project(other, full), error);
  }
}

TEST_CASE("sigma(hat^2) equals sigma(A*A) union sigma(AA*) and index survives truncation") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 25; ++trial) {
    const int n0 = 1 + static_cast<int>(rng() % 6);
    const int n1 = 1 + static_cast<int>(rng() % 6);
    cmat a = random_complex(n1, n0, rng);

    auto hat_spec = hat_squared_spectrum(a);
    eig_result even = hermitian_eig(cmat(a.adjoint() * a));
    eig_result odd = hermitian_eig(cmat(a * a.adjoint()));
    std::vector<double> blocks;
    for (int i = 0; i < even.values.size(); ++i) blocks.push_back(even.values[i]);
    for (int i = 0; i < odd.values.size(); ++i) blocks.push_back(odd.values[i]);
    std::sort(blocks.begin(), blocks.end());
    REQUIRE(blocks.size() == hat_spec.size());
    for (size_t i = 0; i < blocks.size(); ++i)
      CHECK(std::abs(blocks[i] - hat_spec[i]) < 1e-9 * (1 + std::abs(blocks[i])));

    // nonzero parts of the two block spectra coincide
    std::vector<double> nz_even, nz_odd;
    for (int i = 0; i < even.values.size(); ++i)
      if (even.values[i] > 1e-9) nz_even.push_back(even.values[i]);
    for (int i = 0; i < odd.values.size(); ++i)
      if (odd.values[i] > 1e-9) nz_odd.push_back(odd.values[i]);
    REQUIRE(nz_even.size() == nz_odd.size());
    for (size_t i = 0; i < nz_even.size(); ++i)
      CHECK(std::abs(nz_even[i] - nz_odd[i]) < 1e-8 * (1 + nz_even[i]));

    // graded dimension difference of any admissible truncation
    const double top = hat_spec.back();
    for (double frac : {0.25, 0.75, 1.5}) {
      try {
        const double mu = select_gap({hat_spec}, std::max(top * frac, 0.1));
        graded_subspace s = low_spectrum(hat(a), mu);
        CHECK(s.dim_even - s.dim_odd == n0 - n1);
      } catch (const error&) {
        // no admissible gap at this ceiling; nothing to check
      }
    }
  }
}
