#include <doctest.h>

#include "robustcbf/matrix.hpp"
#include "support/oracles.hpp"

using namespace rcbf;
namespace rt = rcbf::testing;

namespace {

Matrix scaled_identity(std::size_t n, double s) { return Matrix::identity(n).scaled(s); }

double max_abs_diff(const Matrix& a, const Matrix& b) { return (a - b).max_abs(); }

} // namespace

TEST_SUITE("matrix_core") {

TEST_CASE("lyapunov solve recovers the closed form for scaled identities") {
    const auto gain = certify_spd(scaled_identity(4, 5.0));
    const auto weight = certify_spd(Matrix::identity(4));
    const Matrix p = solve_lyapunov(gain, weight);
    CHECK(max_abs_diff(p, scaled_identity(4, 0.1)) < 1e-12);

    const auto gain2 = certify_spd(Matrix::identity(2));
    const auto weight2 = certify_spd(scaled_identity(2, 2.0));
    CHECK(max_abs_diff(solve_lyapunov(gain2, weight2), Matrix::identity(2)) < 1e-12);
}

TEST_CASE("lyapunov residual stays below 1e-9 * ||H|| on random SPD inputs") {
    auto rng = rt::seeded_rng(42);
    for (int trial = 0; trial < 100; ++trial) {
        const Matrix lam = rt::random_spd(rng, 5);
        const auto gain = certify_spd(lam);
        const auto weight = certify_spd(Matrix::identity(5));
        const Matrix p = solve_lyapunov(gain, weight);
        const Matrix residual =
            lam.transpose() * p + p * lam - Matrix::identity(5);
        CHECK(spectral_norm(residual) <= 1e-9 * spectral_norm(Matrix::identity(5)));
        CHECK(p.max_asymmetry() < 1e-10);
        CHECK(symmetric_eigenvalues(p).front() > 0.0);
    }
}

TEST_CASE("lyapunov solve rejects bad inputs") {
    CHECK_THROWS_AS(certify_spd(Matrix{{1.0, 2.0}, {0.0, 1.0}}), NotSpdError);
    CHECK_THROWS_AS(certify_spd(Matrix{{-1.0, 0.0}, {0.0, 1.0}}), NotSpdError);
    const auto a = certify_spd(Matrix::identity(2));
    const auto b = certify_spd(Matrix::identity(3));
    CHECK_THROWS_AS(solve_lyapunov(a, b), DimensionError);
}

TEST_CASE("decay envelope constants") {
    const auto env = decay_envelope(certify_spd(scaled_identity(4, 5.0)),
                                    certify_spd(Matrix::identity(4)));
    CHECK(env.overshoot == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(env.rate == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(env.p_norm == doctest::Approx(0.1).epsilon(1e-12));

    const auto robot = decay_envelope(certify_spd(scaled_identity(3, 4.0)),
                                      certify_spd(scaled_identity(3, 8.0)));
    CHECK(robot.overshoot == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(robot.rate == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(robot.p_norm == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("decay envelope overshoot is at least one") {
    auto rng = rt::seeded_rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        const auto gain = certify_spd(rt::random_spd(rng, 4));
        const auto weight = certify_spd(rt::random_spd(rng, 4));
        CHECK(decay_envelope(gain, weight).overshoot >= 1.0);
    }
}

TEST_CASE("left pseudo-inverse of the bundled input maps") {
    Matrix g_unicycle(3, 2);
    g_unicycle(0, 0) = 1.0; // theta = 0
    g_unicycle(2, 1) = 1.0;
    const Matrix pinv = left_pseudo_inverse(g_unicycle);
    CHECK(max_abs_diff(pinv, Matrix{{1.0, 0.0, 0.0}, {0.0, 0.0, 1.0}}) < 1e-14);

    Matrix g_act(4, 1);
    g_act(3, 0) = 10.0; // 1 / J_m with J_m = 0.1
    const Matrix pinv_act = left_pseudo_inverse(g_act);
    CHECK(max_abs_diff(pinv_act, Matrix{{0.0, 0.0, 0.0, 0.1}}) < 1e-14);

    const double theta = 0.37;
    Matrix g_theta(3, 2);
    g_theta(0, 0) = std::cos(theta);
    g_theta(1, 0) = std::sin(theta);
    g_theta(2, 1) = 1.0;
    const Matrix pinv_theta = left_pseudo_inverse(g_theta);
    CHECK(max_abs_diff(pinv_theta, Matrix{{std::cos(theta), std::sin(theta), 0.0},
                                          {0.0, 0.0, 1.0}}) < 1e-12);
}

TEST_CASE("pseudo-inverse identity and projector idempotence on random inputs") {
    auto rng = rt::seeded_rng(11);
    int accepted = 0;
    while (accepted < 50) {
        Matrix g(4, 3);
        for (std::size_t r = 0; r < 4; ++r)
            for (std::size_t c = 0; c < 3; ++c) g(r, c) = rt::uniform(rng, -1.0, 1.0);
        const auto evs = symmetric_eigenvalues(g.transpose() * g);
        if (evs.front() < 0.05 * evs.back()) continue; // skip ill-conditioned draws
        ++accepted;
        const Matrix pinv = left_pseudo_inverse(g);
        CHECK(max_abs_diff(pinv * g, Matrix::identity(3)) < 1e-12);
        const Matrix proj = g * pinv;
        CHECK(max_abs_diff(proj * proj, proj) < 1e-10);
    }
}

TEST_CASE("pseudo-inverse rejects rank-deficient inputs") {
    Matrix g(3, 2);
    g(0, 0) = 1.0;
    g(0, 1) = 2.0;
    g(1, 0) = 2.0;
    g(1, 1) = 4.0;
    g(2, 0) = -1.0;
    g(2, 1) = -2.0; // second column = 2 * first
    CHECK_THROWS_AS(left_pseudo_inverse(g), RankError);
}

TEST_CASE("spectral norm and symmetric eigenvalues basics") {
    CHECK(spectral_norm(Matrix::identity(3)) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(min_eigenvalue_sym(Matrix::diagonal({4.0, 4.0, 4.0})) ==
          doctest::Approx(4.0).epsilon(1e-14));
    Matrix asym(2, 2);
    asym(0, 1) = 1.0;
    CHECK_THROWS_AS(min_eigenvalue_sym(asym), DimensionError);
}

TEST_CASE("spectral norm matches the power-iteration oracle") {
    auto rng = rt::seeded_rng(13);
    for (int trial = 0; trial < 40; ++trial) {
        Matrix m(4, 3);
        for (std::size_t r = 0; r < 4; ++r)
            for (std::size_t c = 0; c < 3; ++c) m(r, c) = rt::uniform(rng, -2.0, 2.0);
        CHECK(spectral_norm(m) ==
              doctest::Approx(rt::power_iteration_norm(m)).epsilon(1e-8));
    }
}

TEST_CASE("linear solver handles permuted systems and flags singular ones") {
    Matrix a{{0.0, 2.0}, {1.0, 0.0}};
    const Vector x = solve_linear(a, {4.0, 3.0});
    CHECK(x[0] == doctest::Approx(3.0));
    CHECK(x[1] == doctest::Approx(2.0));
    Matrix sing{{1.0, 1.0}, {2.0, 2.0}};
    CHECK_THROWS_AS(solve_linear(sing, {1.0, 1.0}), NumericError);
}

} // TEST_SUITE
