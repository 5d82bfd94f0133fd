#include <doctest.h>

#include <numbers>
#include <random>

#include "vectk/kclass.hpp"
#include "vectk/scenario.hpp"

using namespace vectk;

namespace {

cmat random_complex(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  cmat m(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) m(r, c) = cxd(gauss(rng), gauss(rng));
  return m;
}

cmat random_unitary(int n, std::mt19937_64& rng) {
  return Eigen::HouseholderQR<cmat>(random_complex(n, n, rng)).householderQ();
}

// projector distance between the spans of two orthonormal bases
double span_distance(const cmat& a, const cmat& b) {
  return op_norm(a * a.adjoint() - b * b.adjoint());
}

}  // namespace

TEST_CASE("approximate_single") {
  SUBCASE("diag(0, 2) keeps the kernel pair with h = 0") {
    cmat a = cmat::Zero(2, 2);
    a(1, 1) = 2;
    auto r = approximate_single(a, 4.0);
    CHECK(r.space.dim_even == 1);
    CHECK(r.space.dim_odd == 1);
    CHECK(op_norm(r.h) < 1e-12);
    CHECK(r.mu == doctest::Approx(2.0));
  }
  SUBCASE("an invertible operator truncates to nothing below its spectrum") {
    cmat a(1, 1);
    a(0, 0) = 2;
    auto r = approximate_single(a, 1.0);
    CHECK(r.mu == doctest::Approx(0.5));
    CHECK(r.space.total() == 0);
  }
  SUBCASE("random rectangular operators keep the graded index") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 20; ++trial) {
      cmat a = random_complex(6, 4, rng);
      auto r = approximate_single(a, 2.0);
      CHECK(r.space.dim_even - r.space.dim_odd == 4 - 6);
      // sigma(h^2) is sigma(hat^2) below mu
      eig_result fiber = hermitian_eig(cmat(r.h * r.h));
      for (int i = 0; i < fiber.values.size(); ++i) CHECK(fiber.values[i] < r.mu);
    }
  }
  SUBCASE("conjugation equivariance") {
    std::mt19937_64 rng(5);
    cmat a = random_complex(3, 2, rng);
    cmat u = random_unitary(3, rng);
    cmat v = random_unitary(2, rng);
    auto plain = approximate_single(a, 2.0);
    auto moved = approximate_single(u * a * v.adjoint(), 2.0);
    CHECK(plain.space.total() == moved.space.total());
    cmat ghat = cmat::Zero(5, 5);
    ghat.topLeftCorner(2, 2) = v;
    ghat.bottomRightCorner(3, 3) = u;
    CHECK(span_distance(cmat(ghat * plain.space.basis), moved.space.basis) < 1e-9);
    // identical truncated spectra
    std::vector<double> l1(plain.space.labels.data(),
                           plain.space.labels.data() + plain.space.labels.size());
    std::vector<double> l2(moved.space.labels.data(),
                           moved.space.labels.data() + moved.space.labels.size());
    std::sort(l1.begin(), l1.end());
    std::sort(l2.begin(), l2.end());
    REQUIRE(l1.size() == l2.size());
    for (size_t i = 0; i < l1.size(); ++i) CHECK(l1[i] == doctest::Approx(l2[i]).epsilon(1e-9));
  }
}

TEST_CASE("approximate_family") {
  SUBCASE("a constant family yields identity transitions and full agreement") {
    auto base = std::make_shared<simplicial_complex>(circle_complex(4));
    std::mt19937_64 rng(7);
    fredholm_family f;
    f.base = base;
    f.n0 = 2;
    f.n1 = 2;
    cmat a = random_complex(2, 2, rng);
    a.col(0).setZero();  // one-dimensional kernel keeps the fibers nonempty
    for (int sid = 0; sid < base->sample_count(); ++sid) f.samples[sid] = a;
    auto res = approximate_family(f, 5.0);
    CHECK(res.verification.pass);
    CHECK(res.verification.min_mu_agree == kMuInfinite);
    int nonempty = 0;
    for (const auto& [key, by_sample] : res.bundle.transitions)
      for (const auto& [sid, m] : by_sample) {
        if (m.rows() == 0) continue;
        ++nonempty;
        CHECK((m - cmat::Identity(m.rows(), m.cols())).cwiseAbs().maxCoeff() < 1e-9);
      }
    CHECK(nonempty > 0);
  }
  SUBCASE("spectral flow over the circle") {
    scenario sc = builtin_scenario("flow-s1");
    auto res = approximate_family(*sc.family, sc.lambda_max);
    CHECK(res.verification.pass);
    const auto& k = *sc.base;
    // fibers near the zero carry the kernel pair, far patches are empty
    const int v0 = k.sample_id({0});
    CHECK(res.bundle.fiber(0, v0).r0 == 1);
    CHECK(res.bundle.fiber(0, v0).r1 == 1);
    const int far = k.sample_id({6});
    CHECK(res.bundle.fiber(6, far).total() == 0);
    CHECK(graded_index(res.bundle) == std::vector<int>{0});
    CHECK(support(res.bundle, 1e-6) == std::vector<int>{v0});
    CHECK(index_of_family(*sc.family) == std::vector<int>{0});
  }
  SUBCASE("missing samples are rejected") {
    auto base = std::make_shared<simplicial_complex>(circle_complex(3));
    fredholm_family f;
    f.base = base;
    f.n0 = 1;
    f.n1 = 1;
    f.samples[0] = cmat::Identity(1, 1);
    CHECK_THROWS_AS(approximate_family(f, 1.0), error);
  }
  SUBCASE("no usable gap raises no_gap") {
    auto base = std::make_shared<simplicial_complex>(
        simplicial_complex::from_maximal(1, {{0}}));
    fredholm_family f;
    f.base = base;
    f.n0 = 1;
    f.n1 = 1;
    cmat a(1, 1);
    a(0, 0) = 1.0;
    f.samples[0] = a;
    bool saw_no_gap = false;
    try {
      approximate_family(f, 1e-7);  // ceiling below everything, gap narrower than 2*gap_tol
    } catch (const error& e) {
      saw_no_gap = e.code() == errc::no_gap;
    }
    CHECK(saw_no_gap);
  }
  SUBCASE("cutoff independence on the flow scenario") {
    scenario sc = builtin_scenario("flow-s1");
    auto big = approximate_family(*sc.family, 1.5);
    auto small = approximate_family(*sc.family, 0.3);
    CHECK(big.verification.pass);
    CHECK(small.verification.pass);
    CHECK(graded_index(big.bundle) == graded_index(small.bundle));
    CHECK(support(big.bundle, 1e-6) == support(small.bundle, 1e-6));
    // the smaller low spectrum sits inside the larger one, pointwise
    for (const auto& [v, by_sample] : small.bundle.fibers)
      for (const auto& [sid, f_small] : by_sample) {
        if (f_small.total() == 0) continue;
        const local_fiber& f_big = big.bundle.fiber(v, sid);
        REQUIRE(f_big.total() >= f_small.total());
        const cmat& bs = *f_small.ambient;
        const cmat& bb = *f_big.ambient;
        CHECK(op_norm(bs - bb * (bb.adjoint() * bs)) < 1e-8);
      }
  }
  SUBCASE("the lipschitz diagnostic flags sampling jumps") {
    scenario sc = builtin_scenario("flow-s1");
    tolerances strict;
    strict.lipschitz_bound = 1e-9;
    auto res = approximate_family(*sc.family, 1.5, strict);
    CHECK_FALSE(res.spectra_jumps.empty());

    auto base = sc.base;
    fredholm_family constant;
    constant.base = base;
    constant.n0 = 1;
    constant.n1 = 1;
    cmat a(1, 1);
    a(0, 0) = 1;
    for (int sid = 0; sid < base->sample_count(); ++sid) constant.samples[sid] = a;
    auto quiet = approximate_family(constant, 2.0, strict);
    CHECK(quiet.spectra_jumps.empty());
  }
}

TEST_CASE("kernel_bundle_family") {
  SUBCASE("a trivial line over a point") {
    auto base = std::make_shared<simplicial_complex>(simplicial_complex::from_maximal(1, {{0}}));
    vectorial_bundle e;
    e.base = base;
    local_fiber f;
    f.r0 = 1;
    f.r1 = 0;
    f.h = cmat::Zero(1, 1);
    cmat basis = cmat::Zero(3, 1);
    basis(0, 0) = 1;  // span e0 inside C^2 (+) C^1
    f.ambient = basis;
    f.ambient_space = graded_space{2, 1};
    e.fibers[0][0] = f;
    e.verified = true;
    auto fam = kernel_bundle_family(e);
    CHECK(fam.n0 == 2);
    CHECK(fam.n1 == 1);
    const cmat& a = fam.samples.at(0);
    CHECK(op_norm(cmat(a * basis.topRows(2))) < 1e-12);       // kills the fiber
    CHECK(op_norm(cmat(a * a.adjoint() - cmat::Identity(1, 1))) < 1e-12);
  }
  SUBCASE("the bott family has spectra in {0, 1} and round-trips") {
    scenario sc = builtin_scenario("bott-s2");
    REQUIRE(sc.family.has_value());
    const auto& fam = *sc.family;
    CHECK(fam.n0 == 2);
    CHECK(fam.n1 == 1);
    for (const auto& [sid, a] : fam.samples) {
      eig_result even = hermitian_eig(cmat(a.adjoint() * a));
      for (int i = 0; i < even.values.size(); ++i) {
        const bool near0 = std::abs(even.values[i]) < 1e-10;
        const bool near1 = std::abs(even.values[i] - 1) < 1e-10;
        CHECK((near0 || near1));
      }
    }
    auto res = approximate_family(fam, 1.0);
    CHECK(res.verification.pass);
    CHECK(graded_index(res.bundle) == std::vector<int>{1});

    // the output is isomorphic to the input line bundle
    bundle_maps to_e, from_e;
    for (const auto& [v, by_sample] : res.bundle.fibers)
      for (const auto& [sid, f_out] : by_sample) {
        const local_fiber& f_in = sc.line_bundle->fiber(v, sid);
        to_e[v][sid] = f_in.ambient->adjoint() * *f_out.ambient;
        from_e[v][sid] = f_out.ambient->adjoint() * *f_in.ambient;
      }
    CHECK(verify_isomorphism(to_e, from_e, res.bundle, *sc.line_bundle).pass);
  }
  SUBCASE("sloppy input is rejected") {
    auto base = std::make_shared<simplicial_complex>(simplicial_complex::from_maximal(1, {{0}}));
    vectorial_bundle e;
    e.base = base;
    local_fiber f;
    f.r0 = 2;
    f.r1 = 0;
    f.h = cmat::Zero(2, 2);
    cmat basis = cmat::Zero(3, 2);
    basis(0, 0) = 1;
    basis(1, 1) = 1;  // fills all of C^2: complement dims 0 vs 1 cannot match
    f.ambient = basis;
    f.ambient_space = graded_space{2, 1};
    e.fibers[0][0] = f;
    CHECK_THROWS_AS(kernel_bundle_family(e), error);
  }
}

TEST_CASE("index_of_family agrees with the graded index of the truncation") {
  std::mt19937_64 rng(19);
  auto base = std::make_shared<simplicial_complex>(circle_complex(4));
  for (int trial = 0; trial < 10; ++trial) {
    const int n0 = 1 + static_cast<int>(rng() % 3);
    const int n1 = 1 + static_cast<int>(rng() % 3);
    cmat a0 = random_complex(n1, n0, rng);
    cmat a1 = random_complex(n1, n0, rng);
    fredholm_family f;
    f.base = base;
    f.n0 = n0;
    f.n1 = n1;
    for (int sid = 0; sid < base->sample_count(); ++sid) {
      const double t = static_cast<double>(sid) / base->sample_count();
      f.samples[sid] = a0 + 1e-3 * std::sin(2 * std::numbers::pi * t) * a1;
    }
    auto res = approximate_family(f, 6.0);
    CHECK(graded_index(res.bundle) == index_of_family(f));
  }
}

TEST_CASE("approximate_twisted_family") {
  SUBCASE("identity lifts reduce to the plain construction") {
    auto base = std::make_shared<simplicial_complex>(circle_complex(3));
    std::mt19937_64 rng(29);
    cmat a = random_complex(2, 2, rng);
    twisted_family t;
    t.base = base;
    t.lifts.rank = 2;
    for (int e = 0; e < base->count(1); ++e) t.lifts.unitaries[e] = cmat::Identity(2, 2);
    star_cover cover = make_star_cover(*base);
    fredholm_family plain;
    plain.base = base;
    plain.n0 = 2;
    plain.n1 = 2;
    for (int v = 0; v < base->vertex_count(); ++v)
      for (int sid : cover.patch_samples[v]) t.patches[v][sid] = a;
    for (int sid = 0; sid < base->sample_count(); ++sid) plain.samples[sid] = a;

    auto tw = approximate_twisted_family(t, 5.0);
    auto pl = approximate_family(plain, 5.0);
    CHECK(tw.verification.pass);
    for (const auto& q : tw.bundle.twist->turns) CHECK(q == 0);
    CHECK(graded_index(tw.bundle) == graded_index(pl.bundle));
    for (const auto& [v, by_sample] : pl.bundle.fibers)
      for (const auto& [sid, f] : by_sample) {
        CHECK(tw.bundle.fiber(v, sid).r0 == f.r0);
        CHECK(tw.bundle.fiber(v, sid).r1 == f.r1);
      }
  }
  SUBCASE("a coherently conjugated constant family is isomorphic to the constant one") {
    auto base = std::make_shared<simplicial_complex>(circle_complex(3));
    std::mt19937_64 rng(31);
    cmat a = random_complex(2, 2, rng);
    std::vector<cmat> g;
    for (int v = 0; v < 3; ++v) g.push_back(random_unitary(2, rng));

    twisted_family t;
    t.base = base;
    t.lifts.rank = 2;
    for (int e = 0; e < base->count(1); ++e) {
      const auto& edge = base->simplices(1)[e];
      t.lifts.unitaries[e] = g[edge[0]] * g[edge[1]].adjoint();
    }
    star_cover cover = make_star_cover(*base);
    for (int v = 0; v < 3; ++v)
      for (int sid : cover.patch_samples[v]) t.patches[v][sid] = g[v] * a * g[v].adjoint();

    auto tw = approximate_twisted_family(t, 5.0);
    CHECK(tw.verification.pass);
    for (const auto& q : tw.bundle.twist->turns) CHECK(q == 0);

    fredholm_family plain;
    plain.base = base;
    plain.n0 = 2;
    plain.n1 = 2;
    for (int sid = 0; sid < base->sample_count(); ++sid) plain.samples[sid] = a;
    auto pl = approximate_family(plain, 5.0);

    bundle_maps to_plain, from_plain;
    for (const auto& [v, by_sample] : tw.bundle.fibers)
      for (const auto& [sid, f_tw] : by_sample) {
        const local_fiber& f_pl = pl.bundle.fiber(v, sid);
        cmat ghat = cmat::Zero(4, 4);
        ghat.topLeftCorner(2, 2) = g[v];
        ghat.bottomRightCorner(2, 2) = g[v];
        to_plain[v][sid] = f_pl.ambient->adjoint() * ghat.adjoint() * *f_tw.ambient;
        from_plain[v][sid] = f_tw.ambient->adjoint() * ghat * *f_pl.ambient;
      }
    // the twisted bundle has twist 0, so it is comparable with the plain one
    vectorial_bundle tw_plainified = tw.bundle;
    tw_plainified.twist.reset();
    CHECK(verify_isomorphism(to_plain, from_plain, tw_plainified, pl.bundle).pass);
  }
  SUBCASE("the pauli scenario verifies against its own cocycle") {
    scenario sc = builtin_scenario("pauli-torsion");
    auto res = approximate_twisted_family(*sc.twisted, sc.lambda_max);
    CHECK(res.verification.pass);
    CHECK(graded_index(res.bundle) == std::vector<int>{0});
    CHECK(support(res.bundle, 1e-6) == sc.expected_support);
    // fibers are either full or empty, and the dip sample is full
    const int zero_sid = sc.expected_support.at(0);
    int full = 0;
    for (const auto& [v, by_sample] : res.bundle.fibers)
      for (const auto& [sid, f] : by_sample) {
        CHECK((f.total() == 0 || (f.r0 == 2 && f.r1 == 2)));
        if (f.total() > 0) ++full;
        if (sid == zero_sid) CHECK(f.r0 == 2);
      }
    CHECK(full > 0);
  }
  SUBCASE("incompatible sections are rejected") {
    scenario sc = builtin_scenario("pauli-torsion");
    twisted_family broken = *sc.twisted;
    // break compatibility at a shared sample of the first edge
    const auto& edge = sc.base->simplices(1)[0];
    const int sid = sc.base->sample_id(edge);
    broken.patches[edge[0]][sid] = 5.0 * cmat::Identity(2, 2);
    CHECK_THROWS_AS(approximate_twisted_family(broken, sc.lambda_max), error);
  }
}

TEST_CASE("builtin_scenario") {
  SUBCASE("point-operator produces the prescribed kernel pair") {
    scenario_params p;
    p.kernel_even = 1;
    p.kernel_odd = 2;
    scenario sc = builtin_scenario("point-operator", p);
    auto r = approximate_single(sc.family->samples.at(0), sc.lambda_max);
    CHECK(r.space.dim_even == 1);
    CHECK(r.space.dim_odd == 2);
    CHECK(op_norm(r.h) < 1e-9);
    CHECK(index_of_family(*sc.family) == sc.expected_index);
  }
  SUBCASE("unknown names are rejected") {
    CHECK_THROWS_AS(builtin_scenario("no-such-thing"), error);
  }
}
