#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "ballop/adjointlab.hpp"
#include "ballop/spaces.hpp"
#include "test_util.hpp"

using namespace ballop;
using namespace ballop::testutil;

namespace {

PowerSeries one_plus_half_z1(int dim) {
    CVec coeffs = CVec::Zero(dim);
    coeffs(0) = 0.5;
    return PowerSeries::affine(coeffs, Cplx(1.0, 0.0), 1);
}

}  // namespace

TEST_CASE("auxiliary functions of classical maps") {
    auto sp = SpaceSpec::hardy(1);
    auto id = LinearFractionalMap::identity(1);
    AuxiliaryTriple aux_id = auxiliary_functions(sp, id);
    CHECK(approx_equal(aux_id.sigma, id));
    CVec z(1);
    z(0) = Cplx(0.3, 0.2);
    CHECK(std::abs(aux_id.g_eval(z) - Cplx(1.0, 0.0)) < 1e-14);
    CHECK(std::abs(aux_id.h_eval(z) - Cplx(1.0, 0.0)) < 1e-14);

    // (2z+1)/(z+2): sigma = (2z-1)/(-z+2), g = (-z+2)^{-1}, h = z+2
    auto phi = disk_map(2.0, 1.0, 1.0, 2.0);
    AuxiliaryTriple aux = auxiliary_functions(sp, phi);
    CHECK(approx_equal(aux.sigma, disk_map(2.0, -1.0, -1.0, 2.0)));
    CHECK(aux.g_bounded);
    // the triple is built from a projectively rescaled representative, so
    // compare the scale-invariant product g(z) h(z)
    for (double x : {-0.5, 0.0, 0.4}) {
        z(0) = x;
        Cplx want = (x + 2.0) / (2.0 - x);
        CHECK(std::abs(aux.g_eval(z) * aux.h_eval(z) - want) < 1e-12);
    }

    // diagonal map on B_2: sigma equals the map itself, g = h = 1
    CMat a = CMat::Zero(2, 2);
    a(0, 0) = 1.0;
    a(1, 1) = 1.0 / 3.0;
    LinearFractionalMap psi(a, CVec::Zero(2), CVec::Zero(2), 1.0);
    AuxiliaryTriple aux2 = auxiliary_functions(SpaceSpec::hardy(2), psi);
    CHECK(approx_equal(aux2.sigma, psi));
    CVec z2 = CVec::Zero(2);
    CHECK(std::abs(aux2.g_eval(z2) - Cplx(1.0, 0.0)) < 1e-14);
    CHECK(std::abs(aux2.h_eval(z2) - Cplx(1.0, 0.0)) < 1e-14);
}

TEST_CASE("adjoint factorization identity on kernels") {
    // identity map: residual vanishes
    auto sp = SpaceSpec::hardy(2);
    auto id = LinearFractionalMap::identity(2);
    std::mt19937_64 rng(1);
    for (int trial = 0; trial < 10; ++trial) {
        CVec z = random_interior(2, rng, 0.9);
        CVec w = random_interior(2, rng, 0.9);
        CHECK(adjoint_identity_residual(sp, id, z, w) < 1e-13);
    }

    // disk map, w = 0: both sides equal 2/(2-z)
    auto phi = disk_map(2.0, 1.0, 1.0, 2.0);
    AuxiliaryTriple aux = auxiliary_functions(SpaceSpec::hardy(1), phi);
    for (double x : {-0.7, 0.1, 0.6}) {
        CVec z(1), w0 = CVec::Zero(1);
        z(0) = x;
        Cplx lhs = aux.g_eval(z) * std::conj(aux.h_eval(w0)) *
                   std::exp(-std::log(Cplx(1.0, 0.0) - herm(aux.sigma.eval(z), w0)));
        CHECK(std::abs(lhs - 2.0 / (2.0 - x)) < 1e-12);
        CHECK(adjoint_identity_residual(SpaceSpec::hardy(1), aux, z, w0) < 1e-13);
    }

    // random certified self-maps across spaces and dimensions
    std::mt19937_64 rng2(2);
    for (int n : {1, 2, 3}) {
        for (const SpaceSpec& space :
             {SpaceSpec::hardy(n), SpaceSpec::bergman(n, 1.0), SpaceSpec::bergman(n, 2.5)}) {
            auto m = random_self_map(n, rng2);
            AuxiliaryTriple aux_m = auxiliary_functions(space, m);
            double worst = 0.0;
            for (int trial = 0; trial < 100; ++trial) {
                CVec z = random_interior(n, rng2, 0.95);
                CVec w = random_interior(n, rng2, 0.95);
                worst = std::max(worst, adjoint_identity_residual(space, aux_m, z, w));
            }
            CHECK(worst < 1e-10);
        }
    }
}

TEST_CASE("sigma of an automorphism inverts it") {
    std::mt19937_64 rng(3);
    for (int n : {1, 2, 3}) {
        auto aut = random_automorphism(n, rng);
        AuxiliaryTriple aux = auxiliary_functions(SpaceSpec::hardy(n), aut);
        CHECK(approx_equal(compose(aux.sigma, aux.phi), LinearFractionalMap::identity(n), 1e-9));
    }
}

TEST_CASE("determinant-normalized auxiliary identity") {
    auto sp = SpaceSpec::hardy(1);
    auto id = determinant_normalized(LinearFractionalMap::identity(1));
    CHECK(normalization_identity_residual(1.0, id, Cplx(0.5, 0.2)) < 1e-14);

    // (2z+1)/(z+2) rescaled to det 1: |c z + d|^2 at z = 0 is 4/3
    auto phi = determinant_normalized(disk_map(2.0, 1.0, 1.0, 2.0));
    CHECK(std::abs(std::norm(phi.d()) - 4.0 / 3.0) < 1e-12);
    CHECK(normalization_identity_residual(1.0, phi, Cplx(0.0, 0.0)) < 1e-12);

    // the literal t = 1 identity over boundary samples, random automorphisms
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> ang(0.0, 2.0 * 3.14159265358979);
    for (int trial = 0; trial < 10; ++trial) {
        auto aut = determinant_normalized(random_automorphism(1, rng));
        double worst = 0.0;
        for (int i = 0; i < 100; ++i)
            worst = std::max(worst,
                             normalization_identity_residual(1.0, aut, std::polar(1.0, ang(rng))));
        CHECK(worst < 1e-12);
    }

    // general t measured on an automorphism: the exponent-2t form still holds
    auto aut = determinant_normalized(ball_automorphism((CVec(1) << Cplx(0.4, 0.1)).finished()));
    double worst_t = 0.0;
    for (int i = 0; i < 64; ++i)
        worst_t = std::max(worst_t, normalization_identity_residual(
                                        3.5, aut, std::polar(1.0, 2.0 * 3.14159265 * i / 64)));
    CHECK(worst_t < 1e-10);

    CHECK_THROWS_AS(normalization_identity_residual(1.0, disk_map(2.0, 1.0, 1.0, 2.0), 0.0),
                    std::invalid_argument);
}

TEST_CASE("boundary derivative of the inverse from the auxiliary algebra") {
    // |(phi^{-1})'(zeta)| = 1/|a - c zeta|^2 for det-1 automorphisms,
    // cross-checked against the radial angular derivative
    auto phi = determinant_normalized(disk_map(2.0, 1.0, 1.0, 2.0));
    Cplx a = phi.a()(0, 0), c = std::conj(phi.c()(0));
    CVec one(1);
    one(0) = 1.0;
    double closed = 1.0 / std::norm(a - c * 1.0);
    auto inv_deriv = angular_derivative(phi.inverse(), BoundaryPoint(one));
    CHECK(inv_deriv.finite);
    CHECK(inv_deriv.value == doctest::Approx(closed).epsilon(1e-8));
}

TEST_CASE("inverse adjoint form residual decreases with the block order") {
    auto sp = SpaceSpec::hardy(1);
    auto inv = ball_automorphism((CVec(1) << Cplx(0.5, 0.0)).finished());
    double prev = 1e9;
    for (int d : {8, 12, 16}) {
        OperatorResidualReport rep = adjoint_inverse_form_residual(sp, inv, d);
        CHECK(rep.residual < prev * 1.5 + 1e-12);
        prev = rep.residual;
    }
    CHECK(prev < 1e-8);

    // unitary map: exact cancellation
    std::mt19937_64 rng(7);
    auto u = unitary_map(random_unitary(2, rng));
    OperatorResidualReport urep = adjoint_inverse_form_residual(SpaceSpec::hardy(2), u, 6);
    CHECK(urep.residual < 1e-12);

    CHECK_THROWS_AS(adjoint_inverse_form_residual(sp, disk_map(0.5, 0.0, 0.0, 1.0), 8),
                    std::invalid_argument);
}

TEST_CASE("kernel semi-commutator engine matches a matrix oracle at modest radius") {
    auto phi = ball_automorphism((CVec(1) << Cplx(0.5, 0.0)).finished());
    PowerSeries u = one_plus_half_z1(1);
    CVec one(1);
    one(0) = 1.0;
    for (const SpaceSpec& sp :
         {SpaceSpec::hardy(1), SpaceSpec::bergman(1, 1.0), SpaceSpec::bergman(1, 0.5)}) {
        for (double r : {0.3, 0.6}) {
            // oracle: truncated sections at a working order where the kernel
            // tail is negligible
            int w = 48;
            GradedOperator mphi = composition_matrix(sp, phi, w);
            GradedOperator tf = mixed_toeplitz_matrix(sp, u.truncated(w), u.truncated(w), w, w + 4);
            PowerSeries uc = compose_series(u.truncated(w), phi, w);
            GradedOperator tfp = mixed_toeplitz_matrix(sp, uc, uc, w, 2 * w, 1e-6);
            Eigen::MatrixXcd x = mphi.mat * tf.mat - tfp.mat * mphi.mat;
            const GradedBasis& basis = shared_basis(1, w);
            Eigen::VectorXcd vec = coefficient_vector_of_kernel(sp, one * r, basis).coeffs /
                                   std::sqrt(kernel_norm_sq(sp, one * r));
            double oracle = (x * vec).norm();
            double engine = kernel_semicommutator_value(sp, phi, u, u, BoundaryPoint(one), r);
            CHECK(engine == doctest::Approx(oracle).epsilon(1e-7));
        }
    }

    // B_2 Hardy against the same oracle
    CVec a2(2);
    a2 << Cplx(0.5, 0.0), Cplx(0.0, 0.0);
    auto phi2 = ball_automorphism(a2);
    PowerSeries u2 = one_plus_half_z1(2);
    CVec dir(2);
    dir << Cplx(0.6, 0.0), Cplx(0.0, 0.8);
    auto sp2 = SpaceSpec::hardy(2);
    int w = 22;
    GradedOperator mphi = composition_matrix(sp2, phi2, w);
    GradedOperator tf = mixed_toeplitz_matrix(sp2, u2.truncated(w), u2.truncated(w), w, w + 4);
    PowerSeries uc = compose_series(u2.truncated(w), phi2, w);
    GradedOperator tfp = mixed_toeplitz_matrix(sp2, uc, uc, w, 2 * w, 1e-6);
    Eigen::MatrixXcd x = mphi.mat * tf.mat - tfp.mat * mphi.mat;
    const GradedBasis& basis = shared_basis(2, w);
    double r = 0.4;
    Eigen::VectorXcd vec = coefficient_vector_of_kernel(sp2, dir * r, basis).coeffs /
                           std::sqrt(kernel_norm_sq(sp2, dir * r));
    double oracle = (x * vec).norm();
    double engine = kernel_semicommutator_value(sp2, phi2, u2, u2, BoundaryPoint(dir), r);
    CHECK(engine == doctest::Approx(oracle).epsilon(1e-7));
}

TEST_CASE("trivial symbol gives a vanishing semi-commutator") {
    auto sp = SpaceSpec::hardy(1);
    auto phi = ball_automorphism((CVec(1) << Cplx(0.5, 0.0)).finished());
    PowerSeries one = PowerSeries::constant(1, 0, Cplx(1.0, 0.0));
    CVec e1(1);
    e1(0) = 1.0;
    for (double r : {0.5, 0.9, 0.99})
        CHECK(kernel_semicommutator_value(sp, phi, one, one, BoundaryPoint(e1), r) < 1e-12);
}

TEST_CASE("semi-commutator factorization report") {
    auto sp = SpaceSpec::hardy(1);
    auto phi = ball_automorphism((CVec(1) << Cplx(0.5, 0.0)).finished());
    PowerSeries u = one_plus_half_z1(1);
    CVec e1(1);
    e1(0) = 1.0;
    SemiCommutatorReport rep =
        semicommutator_factorization_report(sp, phi, u, u, 12, BoundaryPoint(e1));
    CHECK(rep.factorization_residual < 1e-8);
    CHECK(rep.rudin_residual < 1e-12);
    CHECK(rep.kernel_samples.size() >= 8);
    CHECK(std::abs(rep.kernel_limit) < 1e-4);
    CHECK(rep.kernel_converged);
    // decay is monotone along the sampled radii
    for (std::size_t i = 1; i < rep.kernel_samples.size(); ++i)
        CHECK(rep.kernel_samples[i].value < rep.kernel_samples[i - 1].value);

    CHECK_THROWS_AS(semicommutator_factorization_report(sp, disk_map(0.5, 0.0, 0.0, 1.0), u, u,
                                                        8, BoundaryPoint(e1)),
                    std::invalid_argument);
}
