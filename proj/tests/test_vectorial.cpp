#include <doctest.h>

#include <numbers>
#include <random>

#include "vectk/bundle.hpp"
#include "vectk/complex.hpp"

using namespace vectk;

namespace {

cmat unitary_from_phase(double theta, int n) {
  return std::polar(1.0, theta) * cmat::Identity(n, n);
}

std::shared_ptr<const simplicial_complex> full_triangle() {
  return std::make_shared<simplicial_complex>(simplicial_complex::from_maximal(3, {{0, 1, 2}}));
}

std::shared_ptr<const simplicial_complex> point_space() {
  return std::make_shared<simplicial_complex>(simplicial_complex::from_maximal(1, {{0}}));
}

// rank-(1,1) bundle over the full triangle with h = 0 everywhere and scalar
// transitions realizing the given twist turn on the triangle
vectorial_bundle twisted_triangle_bundle(std::shared_ptr<const simplicial_complex> base,
                                         double turn) {
  vectorial_bundle vb = trivial_bundle(base, 1, 1);
  const double theta = 2 * std::numbers::pi * turn;
  for (auto& [sid, m] : vb.transitions[{0, 1}]) m = unitary_from_phase(theta, 2);
  for (auto& [sid, m] : vb.transitions[{1, 0}]) m = unitary_from_phase(-theta, 2);
  return vb;
}

bundle_maps identity_maps(const vectorial_bundle& vb) {
  bundle_maps f;
  for (const auto& [v, by_sample] : vb.fibers)
    for (const auto& [sid, fib] : by_sample)
      f[v][sid] = cmat::Identity(fib.total(), fib.total());
  return f;
}

cmat random_unitary(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  cmat m(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) m(r, c) = cxd(gauss(rng), gauss(rng));
  return Eigen::HouseholderQR<cmat>(m).householderQ();
}

// block-diagonal unitary respecting the grading
cmat random_graded_unitary(int r0, int r1, std::mt19937_64& rng) {
  cmat u = cmat::Zero(r0 + r1, r0 + r1);
  if (r0 > 0) u.topLeftCorner(r0, r0) = random_unitary(r0, rng);
  if (r1 > 0) u.bottomRightCorner(r1, r1) = random_unitary(r1, rng);
  return u;
}

}  // namespace

TEST_CASE("doteq_check") {
  tolerances tol;
  SUBCASE("equal maps agree on the whole spectrum") {
    cmat h(2, 2);
    h << 0, 2, 2, 0;
    auto r = doteq_check(cmat::Identity(2, 2), cmat::Identity(2, 2), h, tol);
    CHECK(r.pass);
    CHECK(r.mu_agree == kMuInfinite);
  }
  SUBCASE("disagreement above the low spectrum is allowed") {
    // h^2 has eigenvalues {0, 0, 4, 4}; perturb only the high eigenvectors
    cmat h = cmat::Zero(4, 4);
    h(1, 3) = 2;
    h(3, 1) = 2;
    cmat g = cmat::Identity(4, 4);
    g(1, 1) = -7;  //  acts on the eigenvalue-4 part only
    g(3, 3) = 5;
    auto r = doteq_check(cmat::Identity(4, 4), g, h, tol);
    CHECK(r.pass);
    CHECK(r.mu_agree == doctest::Approx(2.0));
  }
  SUBCASE("disagreement on a kernel vector fails with mu_agree = 0") {
    cmat h = cmat::Zero(4, 4);
    h(1, 3) = 2;
    h(3, 1) = 2;
    cmat g = cmat::Identity(4, 4);
    g(0, 0) = 1.0 + 1e-6;  // kernel direction
    auto r = doteq_check(cmat::Identity(4, 4), g, h, tol);
    CHECK_FALSE(r.pass);
    CHECK(r.mu_agree == 0.0);
  }
  SUBCASE("disagreement strictly below a gapped bottom cluster still passes") {
    cmat h(2, 2);
    h << 0, 2, 2, 0;  // h^2 = 4 I, no kernel
    cmat g = 3.0 * cmat::Identity(2, 2);
    auto r = doteq_check(cmat::Identity(2, 2), g, h, tol);
    CHECK(r.pass);
    CHECK(r.mu_agree == doctest::Approx(2.0));
  }
  SUBCASE("zero-dimensional fibers are vacuously equal") {
    auto r = doteq_check(cmat(0, 0), cmat(0, 0), cmat(0, 0), tol);
    CHECK(r.pass);
    CHECK(r.mu_agree == kMuInfinite);
  }
  SUBCASE("shape mismatches are rejected") {
    CHECK_THROWS_AS(doteq_check(cmat::Identity(2, 2), cmat::Identity(3, 3), cmat::Zero(2, 2), tol),
                    error);
  }
  SUBCASE("composability: agreement cutoffs meet at the minimum") {
    std::mt19937_64 rng(71);
    for (int trial = 0; trial < 10; ++trial) {
      cmat a = cmat::Zero(2, 2);
      a(0, 0) = 0.3;
      a(1, 1) = 2.0;
      cmat h = cmat::Zero(4, 4);
      h.topRightCorner(2, 2) = a.adjoint();
      h.bottomLeftCorner(2, 2) = a;
      // f agrees with g below 1, g agrees with k below 3
      cmat f = cmat::Identity(4, 4), g = cmat::Identity(4, 4), k = cmat::Identity(4, 4);
      std::normal_distribution<double> gauss;
      // disturb f vs g on the top cluster, g vs k nowhere
      f(1, 1) += gauss(rng);
      f(3, 3) += gauss(rng);
      auto fg = doteq_check(f, g, h, tol);
      auto gk = doteq_check(g, k, h, tol);
      auto fk = doteq_check(f, k, h, tol);
      CHECK(fg.pass);
      CHECK(gk.pass);
      CHECK(fk.pass);
      CHECK(fk.mu_agree >= std::min(fg.mu_agree, gk.mu_agree) - tol.eps_doteq);
    }
  }
}

TEST_CASE("verify_vectorial") {
  SUBCASE("a promoted ordinary bundle over a single patch passes strictly") {
    auto vb = trivial_bundle(point_space(), 2, 1);
    auto rep = verify_vectorial(vb);
    CHECK(rep.pass);
    CHECK(rep.min_mu_agree == kMuInfinite);
  }
  SUBCASE("a promoted bundle over a triangle passes") {
    auto vb = trivial_bundle(full_triangle(), 1, 1);
    CHECK(verify_vectorial(vb).pass);
  }
  SUBCASE("perturbing a transition on a kernel vector fails at that triple") {
    auto vb = trivial_bundle(full_triangle(), 1, 1);
    const int tri = vb.base->sample_id({0, 1, 2});
    vb.transitions[{0, 1}][tri](0, 0) += 2e-8;  // h = 0, so this is a kernel direction
    auto rep = verify_vectorial(vb, {});
    CHECK_FALSE(rep.pass);
    bool triple_failed = false;
    for (const auto& c : rep.conditions)
      if (c.kind == "triple" && !c.pass && c.sample == tri) triple_failed = true;
    CHECK(triple_failed);
  }
  SUBCASE("twisted bundles are routed to verify_twisted") {
    auto vb = twisted_triangle_bundle(full_triangle(), 0.5);
    u1_cochain c = zero_u1_cochain(*vb.base, 2);
    c.turns[0] = bigrat(1, 2);
    vb.twist = c;
    CHECK_THROWS_AS(verify_vectorial(vb), error);
  }
}

TEST_CASE("verify_twisted") {
  auto base = full_triangle();
  SUBCASE("the zero twist reduces to the plain verification") {
    auto vb = trivial_bundle(base, 1, 1);
    auto rep = verify_twisted(vb, zero_u1_cochain(*base, 2));
    CHECK(rep.pass);
  }
  SUBCASE("a bundle with a half-turn twist passes against it and fails against zero") {
    auto vb = twisted_triangle_bundle(base, 0.5);
    u1_cochain c = zero_u1_cochain(*base, 2);
    c.turns[0] = bigrat(1, 2);
    auto good = verify_twisted(vb, c);
    CHECK(good.pass);
    auto bad = verify_twisted(vb, zero_u1_cochain(*base, 2));
    CHECK_FALSE(bad.pass);
  }
  SUBCASE("a stored twist must match the checked cocycle") {
    auto vb = twisted_triangle_bundle(base, 0.5);
    u1_cochain c = zero_u1_cochain(*base, 2);
    c.turns[0] = bigrat(1, 2);
    vb.twist = c;
    CHECK(verify_twisted(vb, c).pass);
    CHECK_THROWS_AS(verify_twisted(vb, zero_u1_cochain(*base, 2)), error);
  }
}

TEST_CASE("verify_homomorphism") {
  auto base = full_triangle();
  auto vb = trivial_bundle(base, 1, 1);
  SUBCASE("identity maps form a homomorphism") {
    CHECK(verify_homomorphism(identity_maps(vb), vb, vb).pass);
  }
  SUBCASE("the zero map into the zero bundle is a homomorphism") {
    auto zero = zero_bundle(base);
    bundle_maps f;
    for (const auto& [v, by_sample] : vb.fibers)
      for (const auto& [sid, fib] : by_sample) f[v][sid] = cmat::Zero(0, fib.total());
    CHECK(verify_homomorphism(f, vb, zero).pass);
  }
  SUBCASE("an intertwining violation fails at that sample") {
    // give the target a nonzero h so f h != h' f for f = id
    auto vb2 = vb;
    const int tri = base->sample_id({0, 1, 2});
    cmat h(2, 2);
    h << 0, 1, 1, 0;
    vb2.fibers[0][tri].h = h;
    auto rep = verify_homomorphism(identity_maps(vb), vb, vb2);
    CHECK_FALSE(rep.pass);
    bool seen = false;
    for (const auto& c : rep.conditions)
      if (c.kind == "hom-intertwine" && !c.pass && c.sample == tri) seen = true;
    CHECK(seen);
  }
  SUBCASE("maps of the wrong degree fail") {
    auto f = identity_maps(vb);
    cmat odd = cmat::Zero(2, 2);
    odd(0, 1) = 1;
    odd(1, 0) = 1;
    f[0][base->sample_id({0})] = odd;
    auto rep = verify_homomorphism(f, vb, vb);
    CHECK_FALSE(rep.pass);
  }
  SUBCASE("different covers are rejected") {
    auto other = trivial_bundle(point_space(), 1, 1);
    CHECK_THROWS_AS(verify_homomorphism(identity_maps(vb), vb, other), error);
  }
}

TEST_CASE("verify_isomorphism") {
  auto base = full_triangle();
  auto vb = trivial_bundle(base, 1, 1);
  SUBCASE("identity both ways") {
    CHECK(verify_isomorphism(identity_maps(vb), identity_maps(vb), vb, vb).pass);
  }
  SUBCASE("a gauge transformation with its inverse") {
    std::mt19937_64 rng(13);
    bundle_maps u, u_inv;
    for (const auto& [v, by_sample] : vb.fibers)
      for (const auto& [sid, fib] : by_sample) {
        cmat g = random_graded_unitary(fib.r0, fib.r1, rng);
        u[v][sid] = g;
        u_inv[v][sid] = g.adjoint();
      }
    auto vb2 = gauge_transform(vb, u);
    auto rep = verify_isomorphism(u, u_inv, vb, vb2);
    CHECK(rep.pass);
  }
  SUBCASE("bundles with different kernel dimensions are not isomorphic") {
    auto small = trivial_bundle(base, 0, 0);
    bundle_maps down, up;
    for (const auto& [v, by_sample] : vb.fibers)
      for (const auto& [sid, fib] : by_sample) {
        down[v][sid] = cmat::Zero(0, 2);
        up[v][sid] = cmat::Zero(2, 0);
      }
    auto rep = verify_isomorphism(down, up, vb, small);
    CHECK_FALSE(rep.pass);
  }
}

TEST_CASE("direct_sum") {
  auto base = full_triangle();
  auto vb = trivial_bundle(base, 2, 1);
  SUBCASE("summing with the zero bundle changes nothing up to isomorphism") {
    auto sum = direct_sum(vb, zero_bundle(base));
    CHECK(verify_vectorial(sum).pass);
    CHECK(graded_index(sum) == graded_index(vb));
    CHECK(verify_isomorphism(identity_maps(vb), identity_maps(vb), sum, vb).pass);
  }
  SUBCASE("graded index is additive") {
    auto other = trivial_bundle(base, 1, 3);
    auto sum = direct_sum(vb, other);
    auto idx = graded_index(sum);
    REQUIRE(idx.size() == 1);
    CHECK(idx[0] == (2 - 1) + (1 - 3));
  }
  SUBCASE("a sum of verified twisted bundles verifies") {
    auto a = twisted_triangle_bundle(base, 0.5);
    auto b = twisted_triangle_bundle(base, 0.5);
    u1_cochain c = zero_u1_cochain(*base, 2);
    c.turns[0] = bigrat(1, 2);
    a.twist = c;
    b.twist = c;
    auto sum = direct_sum(a, b);
    CHECK(verify_twisted(sum, c).pass);
  }
  SUBCASE("different twists are rejected") {
    auto a = twisted_triangle_bundle(base, 0.5);
    u1_cochain c = zero_u1_cochain(*base, 2);
    c.turns[0] = bigrat(1, 2);
    a.twist = c;
    CHECK_THROWS_AS(direct_sum(a, trivial_bundle(base, 1, 1)), error);
  }
}

TEST_CASE("support") {
  auto base = full_triangle();
  SUBCASE("invertible h everywhere leaves the support empty") {
    auto vb = trivial_bundle(base, 1, 1);
    cmat h(2, 2);
    h << 0, 1, 1, 0;
    for (auto& [v, by_sample] : vb.fibers)
      for (auto& [sid, fib] : by_sample) fib.h = h;
    CHECK(support(vb, 1e-6).empty());
  }
  SUBCASE("a promoted bundle with h = 0 is supported everywhere") {
    auto vb = trivial_bundle(base, 1, 0);
    CHECK(static_cast<int>(support(vb, 1e-6).size()) == base->sample_count());
  }
  SUBCASE("zero-rank fibers are never in the support") {
    CHECK(support(zero_bundle(base), 1e-6).empty());
  }
}

TEST_CASE("graded_index") {
  SUBCASE("promoted bundle") {
    auto idx = graded_index(trivial_bundle(full_triangle(), 3, 1));
    REQUIRE(idx.size() == 1);
    CHECK(idx[0] == 2);
  }
  SUBCASE("per connected component") {
    auto two = std::make_shared<simplicial_complex>(
        simplicial_complex::from_maximal(5, {{0, 1, 2}, {3, 4}}));
    auto idx = graded_index(trivial_bundle(two, 1, 0));
    CHECK(idx == std::vector<int>{1, 1});
  }
  SUBCASE("patch disagreement is rejected") {
    auto vb = trivial_bundle(full_triangle(), 1, 0);
    auto& f = vb.fibers[2][vb.base->sample_id({2})];
    f.r0 = 2;
    f.h = cmat::Zero(2, 2);
    CHECK_THROWS_AS(graded_index(vb), error);
  }
}

TEST_CASE("gauge invariance of verification") {
  std::mt19937_64 rng(99);
  auto base = full_triangle();
  auto vb = twisted_triangle_bundle(base, 0.5);
  u1_cochain c = zero_u1_cochain(*base, 2);
  c.turns[0] = bigrat(1, 2);

  bundle_maps u;
  for (const auto& [v, by_sample] : vb.fibers)
    for (const auto& [sid, fib] : by_sample) u[v][sid] = random_graded_unitary(fib.r0, fib.r1, rng);
  auto vb2 = gauge_transform(vb, u);

  auto r1 = verify_twisted(vb, c);
  auto r2 = verify_twisted(vb2, c);
  CHECK(r1.pass == r2.pass);
  REQUIRE(r1.conditions.size() == r2.conditions.size());
  for (size_t i = 0; i < r1.conditions.size(); ++i) {
    CHECK(r1.conditions[i].pass == r2.conditions[i].pass);
    if (r1.conditions[i].mu_agree != kMuInfinite)
      CHECK(r1.conditions[i].mu_agree ==
            doctest::Approx(r2.conditions[i].mu_agree).epsilon(1e-6));
    else
      CHECK(r2.conditions[i].mu_agree == kMuInfinite);
  }
}
