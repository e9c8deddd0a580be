#include <doctest.h>

#include <cmath>

#include "robustcbf/plants.hpp"
#include "robustcbf/sim.hpp"
#include "support/oracles.hpp"

using namespace rcbf;
namespace rt = rcbf::testing;

namespace {

SlipProfile bundled_slip() {
    SlipProfile slip;
    slip.ramp_time = 8.0;
    slip.slip_angle = {-0.35, 0.7, 0.15};
    slip.yaw_rate = {-0.7, 0.85, 0.2};
    slip.longitudinal = {-0.18, 0.8, 0.3};
    return slip;
}

} // namespace

TEST_SUITE("plants") {

TEST_CASE("zero slip collapses the actual unicycle onto the nominal one") {
    const SlipProfile none;
    auto rng = rt::seeded_rng(211);
    for (int trial = 0; trial < 50; ++trial) {
        const Vector x{rt::uniform(rng, -2.0, 2.0), rt::uniform(rng, -2.0, 2.0),
                       rt::uniform(rng, -3.0, 3.0)};
        const Vector u{rt::uniform(rng, -0.5, 0.5), rt::uniform(rng, -0.5, 0.5)};
        const double t = rt::uniform(rng, 0.0, 20.0);
        CHECK(norm2(sub(unicycle_actual(x, u, none, t), unicycle_nominal(x, u))) == 0.0);
    }
}

TEST_CASE("slip term at a fixed angle matches the hand computation") {
    SlipProfile slip;
    slip.slip_angle = {3.14159265358979323846 / 6.0, 1.0, 0.0}; // constant beta = pi/6
    const Vector delta = unicycle_slip_uncertainty({0.0, 0.0, 0.0}, {1.0, 0.0}, slip, 1.0);
    CHECK(delta[0] == doctest::Approx(std::cos(3.14159265358979323846 / 6.0) - 1.0).epsilon(1e-12));
    CHECK(delta[1] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(delta[2] == 0.0);
}

TEST_CASE("actual minus nominal equals the residual definition everywhere") {
    const SlipProfile slip = bundled_slip();
    const NominalModel model = unicycle_model(UnicycleParams{});
    auto rng = rt::seeded_rng(223);
    for (int trial = 0; trial < 100; ++trial) {
        const Vector x{rt::uniform(rng, -2.0, 2.0), rt::uniform(rng, -2.0, 2.0),
                       rt::uniform(rng, -1.5, 1.5)};
        const Vector u{rt::uniform(rng, -0.5, 0.5), rt::uniform(rng, -0.5, 0.5)};
        const double t = rt::uniform(rng, 0.0, 20.0);
        const Vector direct = unicycle_slip_uncertainty(x, u, slip, t);
        const Vector diff = sub(unicycle_actual(x, u, slip, t), unicycle_nominal(x, u));
        CHECK(norm2(sub(direct, diff)) < 1e-12);
    }
}

TEST_CASE("goal controller values and conventions") {
    UnicycleParams p;
    const Vector u = unicycle_goal_controller(p, {0.0, 0.0, 0.0});
    const double dist = std::hypot(1.0, 1.5);
    CHECK(u[0] == doctest::Approx(dist).epsilon(1e-12));
    CHECK(u[1] == doctest::Approx(1.2 * 1.5 / dist).epsilon(1e-12));

    const Vector at_goal = unicycle_goal_controller(p, {1.0, 1.5, 0.0});
    CHECK(at_goal[0] == 0.0);
    CHECK(at_goal[1] == 0.0);

    const Vector aligned = unicycle_goal_controller(p, {0.0, 1.5, 0.0});
    CHECK(aligned[1] == doctest::Approx(0.0).epsilon(1e-12));

    auto rng = rt::seeded_rng(227);
    for (int trial = 0; trial < 100; ++trial) {
        const Vector x{rt::uniform(rng, -5.0, 5.0), rt::uniform(rng, -5.0, 5.0),
                       rt::uniform(rng, -3.0, 3.0)};
        const Vector out = unicycle_goal_controller(p, x);
        CHECK(std::isfinite(out[0]));
        CHECK(std::isfinite(out[1]));
    }
}

TEST_CASE("edge barrier values, boundary, and uncertainty effect") {
    UnicycleParams p;
    const BarrierSpec spec = unicycle_edge_cbf(p);
    CHECK(spec.value({0.0, -1.0, 0.0}) == doctest::Approx(0.0));
    CHECK(spec.value({0.0, 0.0, 0.0}) == doctest::Approx(1.0));
    const Vector grad = spec.gradient({0.0, 0.0, 0.0});
    CHECK(grad[0] == 0.0);
    CHECK(grad[1] == 1.0);
    CHECK(grad[2] == doctest::Approx(0.1));

    const SlipProfile slip = bundled_slip();
    auto rng = rt::seeded_rng(229);
    for (int trial = 0; trial < 50; ++trial) {
        const Vector x{0.0, rt::uniform(rng, -1.0, 1.0), rt::uniform(rng, -1.4, 1.4)};
        const Vector u{rt::uniform(rng, -0.5, 0.5), rt::uniform(rng, -0.5, 0.5)};
        const double t = rt::uniform(rng, 0.0, 20.0);
        const double theta = x[2];
        const double gamma = theta + slip.beta(t);
        const double expected = u[0] * (std::sin(gamma) - std::sin(theta)) -
                                slip.d_xb(t) * std::sin(theta) +
                                slip.d_theta(t) * p.heading_weight * std::cos(theta);
        const double got = dot(spec.gradient(x), unicycle_slip_uncertainty(x, u, slip, t));
        CHECK(got == doctest::Approx(expected).epsilon(1e-10));
    }
}

TEST_CASE("actuator dynamics at the origin and under pure torque") {
    const ActuatorParams p;
    const Vector at_origin = actuator_dynamics(p, Vector(4, 0.0), 0.0, true);
    CHECK(at_origin[0] == 0.0);
    CHECK(at_origin[1] == doctest::Approx(0.1).epsilon(1e-14));
    CHECK(at_origin[2] == 0.0);
    CHECK(at_origin[3] == doctest::Approx(-0.2).epsilon(1e-14));

    const Vector nominal = actuator_dynamics(p, Vector(4, 0.0), 1.0, false);
    CHECK(nominal[3] == doctest::Approx(10.0).epsilon(1e-14));

    auto rng = rt::seeded_rng(233);
    for (int trial = 0; trial < 100; ++trial) {
        const Vector x = rt::random_vector(rng, 4, -1.0, 1.0);
        const double u = rt::uniform(rng, -1.962, 1.962);
        const Vector delta =
            sub(actuator_dynamics(p, x, u, true), actuator_dynamics(p, x, u, false));
        CHECK(delta[0] == 0.0);
        CHECK(delta[2] == 0.0);
    }
}

TEST_CASE("min-norm controller branches") {
    const ActuatorParams p;
    Vector x{0.0, 0.5, 0.0, 0.0};
    CHECK(actuator_clf_controller(p, x) == 0.0); // x4 at target

    CHECK(actuator_clf_controller(p, {0.0, 0.5, 0.0, -0.2}) ==
          doctest::Approx(0.1).epsilon(1e-12));

    // negative varsigma branch: x1 - x3 makes L_f V dominate
    const double kd = actuator_clf_controller(p, {-1.0, 0.0, 0.0, 0.1});
    CHECK(kd == 0.0);

    // continuity across the switch: tiny deviation yields a tiny input
    for (double dev : {1e-6, -1e-6})
        CHECK(std::abs(actuator_clf_controller(p, {0.0, 0.0, 0.0, dev})) < 1e-4);
}

TEST_CASE("actuator relative-degree structure") {
    const ActuatorParams p;
    const NominalModel model = actuator_model(p);
    const HocbfChain chain = actuator_hocbf_chain(p, LinearClassK{2.0}, LinearClassK{2.0});
    auto rng = rt::seeded_rng(239);
    for (int trial = 0; trial < 100; ++trial) {
        const Vector x = rt::random_vector(rng, 4, -1.0, 1.0);
        const Matrix g = model.input_map(x);
        const Vector lie_g_h = g.transpose() * chain.base.gradient(x);
        CHECK(norm2(lie_g_h) == 0.0); // input does not reach the first derivative
        const Vector lie_g_psi = g.transpose() * chain.grad_psi(x);
        CHECK(lie_g_psi[0] == doctest::Approx(-p.c_q / p.motor_inertia).epsilon(1e-12));
        // the disturbance reaches the first derivative through state 2 and 4
        const Vector drow = chain.disturbance_row(x);
        CHECK(drow[1] == 1.0);
        CHECK(drow[3] == 0.0);
    }
}

TEST_CASE("synthetic plant structure") {
    const SyntheticPlant plant = synthetic_socp_plant();
    auto rng = rt::seeded_rng(241);
    for (int trial = 0; trial < 100; ++trial) {
        const Vector x = rt::random_vector(rng, 2, -1.4, 1.4);
        const Matrix g = plant.model.input_map(x);
        CHECK(norm2(g.transpose() * plant.chain.base.gradient(x)) == 0.0);
        const Vector lie_g_psi = g.transpose() * plant.chain.grad_psi(x);
        CHECK(lie_g_psi[0] == doctest::Approx(-std::cos(x[1])).epsilon(1e-12));
    }
    CHECK_FALSE(plant.chain.jacobian_input_product_zero);
}

TEST_CASE("nominal second-order filter keeps the undisturbed synthetic plant safe") {
    ScenarioConfig cfg;
    cfg.plant = PlantKind::SyntheticSocp;
    cfg.filter = FilterKind::HocbfQp;
    cfg.uncertain_plant = false;
    cfg.synthetic.disturbance_amp = 0.0;
    cfg.duration = 5.0;
    cfg.control_rate = 100.0;
    cfg.substeps = 5;
    cfg.alpha1 = 1.0;
    cfg.alpha2 = 1.0;
    cfg.initial_state = {0.0, 0.3};
    cfg.estimator_gain = Matrix::identity(2).scaled(3.0);
    cfg.estimator_weight = Matrix::identity(2);
    const SimResult result = run_scenario(cfg);
    CHECK(result.metrics.min_h >= 0.0);
    CHECK(result.metrics.infeasible_steps == 0);
}

TEST_CASE("bundled slip profile honors the configured bounds along the robust run") {
    // sampled at 1 kHz with the analytic rate where available
    ScenarioConfig cfg;
    cfg.plant = PlantKind::Unicycle;
    cfg.filter = FilterKind::UeCbfQp;
    cfg.compensate_matched = true;
    cfg.duration = 20.0;
    cfg.control_rate = 50.0;
    cfg.substeps = 10;
    cfg.initial_state = {0.0, 0.0, 0.0};
    cfg.estimator_gain = Matrix::identity(3).scaled(4.0);
    cfg.estimator_weight = Matrix::identity(3).scaled(8.0);
    cfg.uncertainty_bound = 0.9;
    cfg.rate_bound = 0.5;
    cfg.unicycle.cbf_gain = 2.0;
    cfg.slip = bundled_slip();
    const SimResult result = run_scenario(cfg);
    REQUIRE_FALSE(result.metrics.aborted_infeasible);

    const SlipProfile slip = cfg.slip;
    double max_delta = 0.0;
    double max_rate = 0.0;
    const double fine = 1e-3;
    for (const TraceRecord& rec : result.trace.records) {
        for (int i = 0; i < 20; ++i) {
            const double t = rec.t + fine * i;
            max_delta = std::max(
                max_delta, norm2(unicycle_slip_uncertainty(rec.x, rec.u_applied, slip, t)));
            max_rate = std::max(max_rate, norm2(unicycle_slip_uncertainty_rate(
                                              rec.x, rec.u_applied, slip, t)));
        }
    }
    CHECK(max_delta <= cfg.uncertainty_bound);
    CHECK(max_rate <= cfg.rate_bound);
}

} // TEST_SUITE
