#include <doctest.h>

#include <cmath>

#include "robustcbf/estimator.hpp"
#include "robustcbf/plants.hpp"
#include "robustcbf/sim.hpp"
#include "support/oracles.hpp"

using namespace rcbf;
namespace rt = rcbf::testing;

namespace {

EstimatorConfig actuator_estimator() {
    EstimatorConfig cfg;
    cfg.gain = certify_spd(Matrix::identity(4).scaled(5.0));
    cfg.lyapunov_weight = certify_spd(Matrix::identity(4));
    cfg.uncertainty_bound = 0.9;
    cfg.rate_bound = 1.0;
    return cfg;
}

} // namespace

TEST_SUITE("estimator") {

TEST_CASE("initialization pins the estimate to zero") {
    const EstimatorConfig cfg = actuator_estimator();
    const Vector x0{0.0, 0.5, 0.0, -0.2};
    const EstimatorState state = init_estimator(cfg, x0, 0.0);
    CHECK(state.xi[0] == 0.0);
    CHECK(state.xi[1] == doctest::Approx(2.5).epsilon(1e-15));
    CHECK(state.xi[2] == 0.0);
    CHECK(state.xi[3] == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(norm2(estimate(state, cfg.gain.matrix, x0)) == 0.0);

    auto rng = rt::seeded_rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        EstimatorConfig rcfg;
        rcfg.gain = certify_spd(rt::random_spd(rng, 3));
        rcfg.lyapunov_weight = certify_spd(Matrix::identity(3));
        const Vector x = rt::random_vector(rng, 3, -2.0, 2.0);
        const EstimatorState s = init_estimator(rcfg, x, 0.0);
        CHECK(norm2(estimate(s, rcfg.gain.matrix, x)) == 0.0);
    }
    CHECK_THROWS_AS(init_estimator(cfg, Vector{1.0, 2.0}, 0.0), DimensionError);
}

TEST_CASE("estimate is gain * x - xi") {
    const Matrix gain = Matrix::identity(3).scaled(4.0);
    EstimatorState state;
    state.xi = {3.0, 0.0, 0.0};
    const Vector d = estimate(state, gain, {1.0, 0.0, 0.0});
    CHECK(d[0] == doctest::Approx(1.0));
    CHECK(d[1] == 0.0);
    CHECK(d[2] == 0.0);
}

TEST_CASE("observer derivative") {
    const Matrix gain = Matrix::identity(3).scaled(4.0);
    const Vector zero3(3, 0.0);
    CHECK(norm2(estimator_derivative(gain, zero3, Matrix(3, 2), {0.0, 0.0}, zero3)) == 0.0);

    // unicycle at theta = 0 with u = [1, 0]
    const UnicycleParams params;
    const NominalModel model = unicycle_model(params);
    const Vector x{0.0, 0.0, 0.0};
    const Vector xid =
        estimator_derivative(gain, model.drift(x), model.input_map(x), {1.0, 0.0}, zero3);
    CHECK(xid[0] == doctest::Approx(4.0));
    CHECK(xid[1] == 0.0);
    CHECK(xid[2] == 0.0);

    // actuator at its initial state with u = 0 and zero estimate
    const ActuatorParams ap;
    const Vector x0{0.0, 0.5, 0.0, -0.2};
    const Matrix gain4 = Matrix::identity(4).scaled(5.0);
    const Vector fhat = actuator_dynamics(ap, x0, 0.0, false);
    const Vector expected = gain4 * fhat;
    const NominalModel am = actuator_model(ap);
    const Vector got =
        estimator_derivative(gain4, am.drift(x0), am.input_map(x0), {0.0}, Vector(4, 0.0));
    CHECK(norm2(sub(got, expected)) < 1e-15);
}

TEST_CASE("error bound formula") {
    const ErrorEnvelope env = make_error_envelope(actuator_estimator());
    CHECK(error_bound(env, 0.0) == doctest::Approx(0.9).epsilon(1e-12));
    CHECK(error_bound(env, 100.0) == doctest::Approx(0.2).epsilon(1e-12));
    for (double t : {0.1, 0.5, 1.0, 2.0})
        CHECK(error_bound(env, t) ==
              doctest::Approx(0.7 * std::exp(-5.0 * t) + 0.2).epsilon(1e-12));

    EstimatorConfig robot;
    robot.gain = certify_spd(Matrix::identity(3).scaled(4.0));
    robot.lyapunov_weight = certify_spd(Matrix::identity(3).scaled(8.0));
    robot.uncertainty_bound = 1.5;
    robot.rate_bound = 0.5;
    const ErrorEnvelope renv = make_error_envelope(robot);
    for (double t : {0.0, 0.3, 1.0})
        CHECK(error_bound(renv, t) ==
              doctest::Approx(0.5 * std::exp(-4.0 * t) + 1.0).epsilon(1e-12));

    EstimatorConfig nodrit = actuator_estimator();
    nodrit.rate_bound = 0.0;
    const ErrorEnvelope env0 = make_error_envelope(nodrit);
    double prev = error_bound(env0, 0.0);
    CHECK(prev == doctest::Approx(0.9));
    for (double t : {0.5, 1.0, 3.0, 10.0}) {
        const double cur = error_bound(env0, t);
        CHECK(cur < prev);
        prev = cur;
    }
    CHECK(error_bound(env0, 50.0) < 1e-12);
    CHECK_THROWS_AS(error_bound(env, -0.1), Error);
}

TEST_CASE("output bound formula") {
    const ErrorEnvelope env = make_error_envelope(actuator_estimator());
    const double gain_norm = 5.0;
    CHECK(output_bound(env, gain_norm, 0.0) == 0.0);
    for (double t : {0.05, 0.2, 1.0})
        CHECK(output_bound(env, gain_norm, t) ==
              doctest::Approx(0.9 * (1.0 - std::exp(-5.0 * t))).epsilon(1e-12));
    CHECK(output_bound(env, gain_norm, 1e6) == doctest::Approx(0.9).epsilon(1e-12));
    double prev = -1.0;
    for (double t : {0.0, 0.1, 0.4, 2.0, 8.0}) {
        const double cur = output_bound(env, gain_norm, t);
        CHECK(cur >= prev);
        prev = cur;
    }
}

TEST_CASE("iss gains and the eISS certificate") {
    const auto gain = certify_spd(Matrix::identity(4).scaled(5.0));
    CHECK(iss_gains(gain, 1.0).decay == 1.25);
    CHECK(iss_gains(gain, 1.0).gain == doctest::Approx(0.1).epsilon(1e-15));
    CHECK(iss_gains(gain, 0.0).gain == 0.0);

    CHECK(eiss_certificate(0.9, 1.0, 0.1));
    CHECK_FALSE(eiss_certificate(0.0, 0.5, 1.0));
    CHECK(eiss_certificate(1.5, 0.5, 1.0));
}

TEST_CASE("constant disturbance converges along the closed form") {
    // xdot = c with f = 0, g = I, u = 0; the estimate follows (1 - e^{-lambda t}) c.
    const double lambda = 4.0;
    const Vector c{0.3, -0.2, 0.1};
    const Matrix gain = Matrix::identity(3).scaled(lambda);
    Vector z{0.1, -0.4, 0.2, 0.0, 0.0, 0.0};
    for (std::size_t i = 0; i < 3; ++i) z[3 + i] = lambda * z[i]; // xi = gain * x0
    const auto rhs = [&](double, const Vector& zz) {
        Vector out(6, 0.0);
        for (std::size_t i = 0; i < 3; ++i) {
            const double dhat = lambda * zz[i] - zz[3 + i];
            out[i] = c[i];
            out[3 + i] = lambda * (0.0 + dhat); // f + g u = 0
        }
        return out;
    };
    const double dt = 1e-3;
    double t = 0.0;
    for (int k = 0; k < 1000; ++k) {
        z = integrate_rk4(rhs, z, t, dt, 1);
        t += dt;
        const double factor = 1.0 - std::exp(-lambda * t);
        for (std::size_t i = 0; i < 3; ++i) {
            const double dhat = lambda * z[i] - z[3 + i];
            CHECK(std::abs(dhat - factor * c[i]) < 1e-8);
        }
    }
}

} // TEST_SUITE
