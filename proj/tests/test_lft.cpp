#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "ballop/lft.hpp"
#include "test_util.hpp"

using namespace ballop;
using namespace ballop::testutil;

namespace {

CVec pt(std::initializer_list<Cplx> entries) {
    CVec v(static_cast<int>(entries.size()));
    int i = 0;
    for (Cplx e : entries) v(i++) = e;
    return v;
}

}  // namespace

TEST_CASE("construction enforces the denominator invariant") {
    CHECK_THROWS_AS(disk_map(1.0, 0.0, 1.0, 1.0), std::invalid_argument);  // |d| = ||C||
    CHECK_NOTHROW(disk_map(2.0, 1.0, 1.0, 2.0));
}

TEST_CASE("evaluation") {
    auto id2 = LinearFractionalMap::identity(2);
    CVec z = pt({Cplx(0.3, 0.0), Cplx(0.0, 0.4)});
    CHECK((id2.eval(z) - z).norm() < 1e-15);

    CMat a = CMat::Zero(2, 2);
    a(0, 0) = 1.0;
    a(1, 1) = 0.5;
    LinearFractionalMap remark(a, CVec::Zero(2), CVec::Zero(2), 1.0);
    CVec w = remark.eval(pt({Cplx(0.5, 0.0), Cplx(0.5, 0.0)}));
    CHECK(std::abs(w(0) - Cplx(0.5, 0.0)) < 1e-15);
    CHECK(std::abs(w(1) - Cplx(0.25, 0.0)) < 1e-15);

    auto m = disk_map(2.0, 1.0, 1.0, 2.0);
    CHECK(std::abs(m.eval(pt({Cplx(0.0, 0.0)}))(0) - Cplx(0.5, 0.0)) < 1e-15);
}

TEST_CASE("composition is the projective product") {
    std::mt19937_64 rng(42);
    for (int n : {1, 2, 3}) {
        auto phi = random_self_map(n, rng);
        auto rho = random_self_map(n, rng);
        auto comp = compose(phi, rho);
        for (int trial = 0; trial < 25; ++trial) {
            CVec z = random_interior(n, rng, 0.95);
            CHECK((comp.eval(z) - phi.eval(rho.eval(z))).norm() < 1e-12);
        }
        CHECK(approx_equal(compose(phi, LinearFractionalMap::identity(n)), phi));
    }
    // disk: the two halves of a hyperbolic automorphism cancel
    auto f = disk_map(2.0, 1.0, 1.0, 2.0);
    auto g = disk_map(2.0, -1.0, -1.0, 2.0);
    CHECK(is_identity_map(compose(f, g)));
}

TEST_CASE("krein adjoint") {
    // diagonal example: psi = (z1, z2/3) is its own Krein adjoint
    CMat a = CMat::Zero(2, 2);
    a(0, 0) = 1.0;
    a(1, 1) = 1.0 / 3.0;
    LinearFractionalMap psi(a, CVec::Zero(2), CVec::Zero(2), 1.0);
    CHECK(approx_equal(krein_adjoint(psi), psi));

    std::mt19937_64 rng(7);
    for (int n : {1, 2, 3}) {
        auto phi = random_self_map(n, rng);
        CHECK(approx_equal(krein_adjoint(krein_adjoint(phi)), phi));
        auto aut = random_automorphism(n, rng);
        CHECK(approx_equal(compose(krein_adjoint(aut), aut),
                           LinearFractionalMap::identity(n)));
    }
}

TEST_CASE("ball automorphisms") {
    std::mt19937_64 rng(3);
    for (int n : {1, 2, 3}) {
        CVec a = random_interior(n, rng, 0.8);
        auto phi = ball_automorphism(a);
        CHECK(phi.eval(CVec::Zero(n)).isApprox(a, 1e-12));
        CHECK(phi.eval(a).norm() < 1e-12);
        CHECK(is_identity_map(compose(phi, phi), 1e-10));
    }
    // a = 0 gives -identity
    auto neg = ball_automorphism(CVec::Zero(2));
    CHECK(neg.eval(CVec::Zero(2)).norm() < 1e-15);
    CHECK((neg.eval(pt({Cplx(0.2, 0.0), Cplx(0.0, 0.3)})) +
           pt({Cplx(0.2, 0.0), Cplx(0.0, 0.3)}))
              .norm() < 1e-15);
    // disk, a = 1/2
    auto half = ball_automorphism(pt({Cplx(0.5, 0.0)}));
    CHECK(std::abs(half.eval(pt({Cplx(0.5, 0.0)}))(0)) < 1e-15);
    CHECK(std::abs(half.eval(pt({Cplx(0.0, 0.0)}))(0) - Cplx(0.5, 0.0)) < 1e-15);
    CHECK_THROWS_AS(ball_automorphism(pt({Cplx(1.0, 0.0)})), std::invalid_argument);
}

TEST_CASE("unitary maps") {
    CHECK(is_identity_map(unitary_map(CMat::Identity(3, 3))));
    CMat swap = CMat::Zero(2, 2);
    swap(0, 1) = 1.0;
    swap(1, 0) = 1.0;
    auto u = unitary_map(swap);
    CVec w = u.eval(pt({Cplx(0.1, 0.0), Cplx(0.2, 0.0)}));
    CHECK(std::abs(w(0) - Cplx(0.2, 0.0)) < 1e-15);
    CHECK(std::abs(w(1) - Cplx(0.1, 0.0)) < 1e-15);
    CMat bad = CMat::Identity(2, 2) * 1.5;
    CHECK_THROWS_AS(unitary_map(bad), std::invalid_argument);
}

TEST_CASE("sup norm") {
    CHECK(sup_norm(disk_map(0.5, 0.0, 0.0, 1.0)) == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(sup_norm(disk_map(2.0, 1.0, 1.0, 2.0)) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(sup_norm(disk_map(Cplx(0.0, 1.0), 0.0, 0.0, 1.0)) ==
          doctest::Approx(1.0).epsilon(1e-9));
    // (z1, z2/2) on B_2 attains 1 at (1, 0)
    CMat a = CMat::Zero(2, 2);
    a(0, 0) = 1.0;
    a(1, 1) = 0.5;
    LinearFractionalMap remark(a, CVec::Zero(2), CVec::Zero(2), 1.0);
    CHECK(sup_norm(remark) == doctest::Approx(1.0).epsilon(1e-8));

    std::mt19937_64 rng(11);
    for (int n : {1, 2, 3}) {
        auto aut = random_automorphism(n, rng);
        CHECK(sup_norm(aut) == doctest::Approx(1.0).epsilon(1e-8));
        CHECK(is_self_map(aut));
        CHECK(is_automorphism(aut));
        auto strict = random_self_map(n, rng);
        CHECK(sup_norm(strict) < 1.0);
        CHECK_FALSE(is_automorphism(strict));
    }
}

TEST_CASE("angular derivative") {
    // rotation: quotient is identically 1
    CVec one = pt({Cplx(1.0, 0.0)});
    auto rot = disk_map(Cplx(0.6, 0.8), 0.0, 0.0, 1.0);
    auto ad = angular_derivative(rot, BoundaryPoint(one));
    CHECK(ad.finite);
    CHECK(ad.value == doctest::Approx(1.0).epsilon(1e-10));

    // hyperbolic automorphism: derivative 1/3 at the attracting point, 3 at
    // the repelling one (closed-form oracle phi'(z) = (1-a^2)/(1+az)^2)
    auto hyp = disk_map(1.0, 0.5, 0.5, 1.0);
    CHECK(angular_derivative(hyp, BoundaryPoint(one)).value ==
          doctest::Approx(1.0 / 3.0).epsilon(1e-9));
    CHECK(angular_derivative(hyp, BoundaryPoint(pt({Cplx(-1.0, 0.0)}))).value ==
          doctest::Approx(3.0).epsilon(1e-9));

    // strict contraction: no finite angular derivative
    CHECK_FALSE(angular_derivative(disk_map(0.5, 0.0, 0.0, 1.0), BoundaryPoint(one)).finite);

    // Julia-type positivity and radial-liminf cross-check on random data
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 10; ++trial) {
        int n = 1 + trial % 3;
        auto aut = random_automorphism(n, rng);
        BoundaryPoint zeta(random_boundary(n, rng));
        auto res = angular_derivative(aut, zeta);
        CHECK(res.finite);
        CHECK(res.value > 0.0);
        CHECK_FALSE(res.grid_disagrees);
    }
}

TEST_CASE("boundary images") {
    std::mt19937_64 rng(5);
    auto aut = random_automorphism(2, rng);
    BoundaryPoint zeta(random_boundary(2, rng));
    CHECK(boundary_image(aut, zeta).on_sphere);

    CHECK_FALSE(boundary_image(disk_map(0.5, 0.0, 0.0, 1.0),
                               BoundaryPoint(pt({Cplx(1.0, 0.0)})))
                    .on_sphere);

    CMat a = CMat::Zero(2, 2);
    a(0, 0) = 1.0;
    a(1, 1) = 0.5;
    LinearFractionalMap remark(a, CVec::Zero(2), CVec::Zero(2), 1.0);
    BoundaryImage img = boundary_image(remark, BoundaryPoint(pt({Cplx(1.0, 0.0), Cplx(0.0, 0.0)})));
    CHECK(img.on_sphere);
    CHECK((img.point - pt({Cplx(1.0, 0.0), Cplx(0.0, 0.0)})).norm() < 1e-12);
}

TEST_CASE("disk fixed point classification") {
    // hyperbolic automorphism: boundary pair, attracting point first
    auto hyp = disk_map(1.0, 0.5, 0.5, 1.0);
    auto cls = disk_fixed_points(hyp);
    CHECK(cls.kind == DiskMapKind::Hyperbolic);
    CHECK(std::abs(cls.points[0] - Cplx(1.0, 0.0)) < 1e-9);
    CHECK(std::abs(cls.points[1] + Cplx(1.0, 0.0)) < 1e-9);

    // z/(2-z): quadratic roots 0 and 1 -> hyperbolic with boundary point 1
    auto zb = disk_map(1.0, 0.0, -1.0, 2.0);
    auto cls2 = disk_fixed_points(zb);
    CHECK(cls2.kind == DiskMapKind::Hyperbolic);
    CHECK(std::abs(cls2.points[0] - Cplx(1.0, 0.0)) < 1e-9);
    CHECK(std::abs(cls2.points[1]) < 1e-9);

    // 1/(2-z): double fixed point at 1 -> parabolic
    auto par = disk_map(0.0, 1.0, -1.0, 2.0);
    auto cls3 = disk_fixed_points(par);
    CHECK(cls3.kind == DiskMapKind::Parabolic);
    CHECK(std::abs(cls3.points[0] - Cplx(1.0, 0.0)) < 1e-7);

    // rotation: interior fixed point only
    CHECK(disk_fixed_points(disk_map(Cplx(0.0, 1.0), 0.0, 0.0, 1.0)).kind ==
          DiskMapKind::InteriorOnly);

    // affine (z+1)/2: fixed points 1 and infinity
    auto aff = disk_map(0.5, 0.5, 0.0, 1.0);
    auto cls4 = disk_fixed_points(aff);
    CHECK(cls4.kind == DiskMapKind::Hyperbolic);
    CHECK(cls4.second_at_infinity);
    CHECK(std::abs(cls4.points[0] - Cplx(1.0, 0.0)) < 1e-9);

    CHECK_THROWS_AS(disk_fixed_points(LinearFractionalMap::identity(1)),
                    std::invalid_argument);
}

TEST_CASE("commuting maps") {
    CMat a1 = CMat::Zero(2, 2), a2 = CMat::Zero(2, 2);
    a1(0, 0) = 1.0;
    a1(1, 1) = 0.5;
    a2(0, 0) = 1.0;
    a2(1, 1) = 1.0 / 3.0;
    LinearFractionalMap phi(a1, CVec::Zero(2), CVec::Zero(2), 1.0);
    LinearFractionalMap psi(a2, CVec::Zero(2), CVec::Zero(2), 1.0);
    CHECK(commutes(phi, psi));
    CHECK(commutes(phi, phi));

    auto inv = ball_automorphism(pt({Cplx(0.5, 0.0)}));
    auto rot = disk_map(Cplx(0.0, 1.0), 0.0, 0.0, 1.0);
    CHECK_FALSE(commutes(inv, rot));
}

TEST_CASE("self-maps fixing zero with unit sup norm are linear") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 6; ++trial) {
        int n = 1 + trial % 3;
        auto u = unitary_map(random_unitary(n, rng));
        CHECK(is_automorphism(u));
        CHECK(u.eval(CVec::Zero(n)).norm() < 1e-14);
        // automorphism fixing the origin has vanishing B and C blocks
        CMat norm = u.normalized_projective();
        double offdiag = 0.0;
        for (int i = 0; i < n; ++i) {
            offdiag = std::max(offdiag, std::abs(norm(i, n)));
            offdiag = std::max(offdiag, std::abs(norm(n, i)));
        }
        CHECK(offdiag < 1e-12);
    }
}

TEST_CASE("phase normalization fixes the representative, not the map") {
    std::mt19937_64 rng(17);
    auto phi = random_self_map(2, rng);
    LinearFractionalMap scaled(phi.a() * std::polar(1.0, 2.1), phi.b() * std::polar(1.0, 2.1),
                               phi.c() * std::polar(1.0, -2.1), phi.d() * std::polar(1.0, 2.1));
    CHECK(approx_equal(phi, scaled));
    auto pn = scaled.phase_normalized();
    CHECK(pn.d().imag() == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(pn.d().real() > 0.0);
    CHECK(approx_equal(pn, phi));
}
