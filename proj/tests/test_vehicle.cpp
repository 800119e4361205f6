#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <vector>

#include "core/expm.hpp"
#include "core/scenario.hpp"
#include "core/vehicle.hpp"

using namespace fdi;

namespace {

// plain Taylor series, accurate here because ||A h|| < 0.3
Matrix expm_taylor(const Matrix& M, int terms = 30) {
    Matrix sum = Matrix::Identity(M.rows(), M.cols());
    Matrix pow = sum;
    double fact = 1.0;
    for (int j = 1; j <= terms; ++j) {
        pow = pow * M;
        fact *= j;
        sum += pow / fact;
    }
    return sum;
}

Matrix zoh_input_taylor(const Matrix& A, const Matrix& B, double h, int terms = 30) {
    // integral_0^h e^{A s} ds B = sum_j A^j h^{j+1} / (j+1)! B
    Matrix sum = h * Matrix::Identity(A.rows(), A.cols());
    Matrix pow = Matrix::Identity(A.rows(), A.cols());
    double fact = 1.0;
    double hp = h;
    for (int j = 1; j <= terms; ++j) {
        pow = pow * A;
        fact *= (j + 1);
        hp *= h;
        sum += pow * (hp / fact);
    }
    return sum * B;
}

ScenarioConfig quiet_scenario() {
    ScenarioConfig sc;
    sc.noise_enabled = false;
    sc.fault_magnitude = 0.0;
    sc.phi_amp = 0.0;
    sc.kappa_amp = 0.0;
    return sc;
}

}  // namespace

TEST_CASE("parameter validation") {
    BicycleParams p;
    CHECK_NOTHROW(validate(p));

    BicycleParams bad = p;
    bad.m = 0.0;
    CHECK_THROWS_AS(validate(bad), std::invalid_argument);
    bad = p;
    bad.h = -0.01;
    CHECK_THROWS_AS(validate(bad), std::invalid_argument);
    bad = p;
    bad.C_f = -1.0;
    CHECK_THROWS_AS(validate(bad), std::invalid_argument);
}

TEST_CASE("continuous-time matrices at 19 m/s") {
    BicycleParams p;
    ContinuousMatrices cm = continuous_matrices(p, 19.0);

    // stiffness sums: (C_f+C_r)/(v m) etc.
    CHECK(cm.A(0, 0) == doctest::Approx(-9.1228070175438596).epsilon(1e-14));
    CHECK(cm.A(0, 1) == doctest::Approx(-19.280701754385966).epsilon(1e-14));
    CHECK(cm.A(1, 0) == doctest::Approx(-0.16194331983805668).epsilon(1e-14));
    CHECK(cm.A(1, 1) == doctest::Approx(-11.566801619433198).epsilon(1e-14));
    CHECK(cm.A(2, 0) == -1.0);
    CHECK(cm.A(2, 3) == 19.0);
    CHECK(cm.A(3, 1) == -1.0);
    CHECK(cm.A.col(2).norm() == 0.0);  // lane error feeds nothing back

    CHECK(cm.B_u(0, 0) == doctest::Approx(-100.0).epsilon(1e-14));
    CHECK(cm.B_u(1, 0) == doctest::Approx(-75.0).epsilon(1e-14));
    CHECK((cm.B_f - cm.B_u).norm() == 0.0);  // actuator fault shares the channel
    CHECK(cm.B_d(0, 0) == 9.81);
    CHECK(cm.B_d(3, 1) == 19.0);
    CHECK(cm.B_d.row(1).norm() == 0.0);
    CHECK((cm.C - (Matrix(3, 4) << 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1).finished()).norm() ==
          0.0);

    SUBCASE("raw sign variant flips the dynamic block") {
        ContinuousMatrices raw = continuous_matrices(p, 19.0, MatrixSigns::as_printed);
        CHECK(raw.A(0, 0) == doctest::Approx(9.1228070175438596).epsilon(1e-14));
        CHECK(raw.A(0, 1) == doctest::Approx(0.2807017543859649).epsilon(1e-12));
        CHECK(raw.A(2, 3) == 19.0);  // kinematic rows unchanged
    }

    SUBCASE("standstill is rejected") {
        CHECK_THROWS_AS(continuous_matrices(p, 0.0), std::invalid_argument);
        CHECK_THROWS_AS(continuous_matrices(p, -5.0), std::invalid_argument);
    }
}

TEST_CASE("matrix exponential") {
    SUBCASE("identities") {
        CHECK((expm(Matrix::Zero(3, 3)) - Matrix::Identity(3, 3)).norm() == 0.0);
        Matrix D = Matrix::Zero(2, 2);
        D(0, 0) = 1.0;
        D(1, 1) = -2.0;
        Matrix E = expm(D);
        CHECK(E(0, 0) == doctest::Approx(std::exp(1.0)).epsilon(1e-14));
        CHECK(E(1, 1) == doctest::Approx(std::exp(-2.0)).epsilon(1e-14));
        CHECK(std::abs(E(0, 1)) + std::abs(E(1, 0)) == 0.0);
    }

    SUBCASE("series cross-check on the vehicle dynamics") {
        BicycleParams p;
        for (double v : {14.0, 19.0, 24.0}) {
            ContinuousMatrices cm = continuous_matrices(p, v);
            Matrix lhs = expm(cm.A * p.h);
            Matrix rhs = expm_taylor(cm.A * p.h);
            CHECK((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-12);
        }
    }

    SUBCASE("one-parameter group property") {
        BicycleParams p;
        for (double v : {14.0, 19.0, 24.0}) {
            ContinuousMatrices cm = continuous_matrices(p, v);
            Matrix half = expm(cm.A * p.h);
            Matrix full = expm(cm.A * (2.0 * p.h));
            CHECK((half * half - full).cwiseAbs().maxCoeff() <= 1e-10);
        }
    }
}

TEST_CASE("zero-order-hold discretization") {
    SUBCASE("integrator-free limit") {
        Matrix A = Matrix::Zero(3, 3);
        Matrix B = Matrix::Random(3, 2);
        Matrix Ad, Bd;
        zoh_discretize(A, B, 0.25, Ad, Bd);
        CHECK((Ad - Matrix::Identity(3, 3)).norm() == 0.0);
        CHECK((Bd - 0.25 * B).norm() <= 1e-15);
    }

    SUBCASE("scalar closed form") {
        Matrix A = Matrix::Constant(1, 1, -2.0);
        Matrix B = Matrix::Constant(1, 1, 3.0);
        Matrix Ad, Bd;
        zoh_discretize(A, B, 0.1, Ad, Bd);
        CHECK(Ad(0, 0) == doctest::Approx(std::exp(-0.2)).epsilon(1e-14));
        CHECK(Bd(0, 0) == doctest::Approx(3.0 * (1.0 - std::exp(-0.2)) / 2.0).epsilon(1e-13));
    }

    SUBCASE("vehicle channels against the series") {
        BicycleParams p;
        for (double v : {14.0, 19.0, 24.0}) {
            ContinuousMatrices cm = continuous_matrices(p, v);
            DiscreteMatrices dm = exact_discretize(cm, p.h);
            CHECK((dm.A - expm_taylor(cm.A * p.h)).cwiseAbs().maxCoeff() <= 1e-12);
            CHECK((dm.B_u - zoh_input_taylor(cm.A, cm.B_u, p.h)).cwiseAbs().maxCoeff() <=
                  1e-12);
            CHECK((dm.B_f - zoh_input_taylor(cm.A, cm.B_f, p.h)).cwiseAbs().maxCoeff() <=
                  1e-12);
            CHECK((dm.B_d - zoh_input_taylor(cm.A, cm.B_d, p.h)).cwiseAbs().maxCoeff() <=
                  1e-12);
        }
    }
}

TEST_CASE("steering controller") {
    PdGains g;  // 0.1 / 0.01 / 1.5

    CHECK(pd_controller(0.0, 0.0, 0.0, g, 0.01) == 0.0);
    CHECK(pd_controller(1.0, 0.0, 1.0, g, 0.01) == doctest::Approx(-0.1).epsilon(1e-15));
    CHECK(pd_controller(0.1, 0.0, 0.0, g, 0.01) == doctest::Approx(-0.11).epsilon(1e-13));
    CHECK(pd_controller(0.0, 1.0, 0.0, g, 0.01) == -0.5);   // 1.5 rad demand saturates
    CHECK(pd_controller(0.0, -1.0, 0.0, g, 0.01) == 0.5);

    CHECK_THROWS_AS(pd_controller(0.0, 0.0, 0.0, g, 0.0), std::invalid_argument);
    const double nan = std::nan("");
    CHECK_THROWS_AS(pd_controller(nan, 0.0, 0.0, g, 0.01), std::invalid_argument);
}

TEST_CASE("closed-loop scenario") {
    SUBCASE("nothing in, nothing out") {
        ScenarioConfig sc = quiet_scenario();
        sc.n_samples = 120;
        SimLog log = simulate(sc);
        REQUIRE(log.rows.size() == 120);
        for (const SimRow& row : log.rows) {
            CHECK(row.y_yawrate == 0.0);
            CHECK(row.y_lat == 0.0);
            CHECK(row.y_head == 0.0);
            CHECK(row.u == 0.0);
            CHECK(std::abs(row.r_lpv) <= 1e-12);
            CHECK(std::abs(row.r_lti) <= 1e-12);
        }
    }

    SUBCASE("log columns follow the schedule") {
        ScenarioConfig sc = quiet_scenario();
        sc.n_samples = 200;
        sc.fault_magnitude = 2e-3;
        sc.fault_start = 50;
        SimLog log = simulate(sc);
        for (const SimRow& row : log.rows) {
            CHECK(row.t == row.k * sc.params.h);
            CHECK(row.v_x ==
                  doctest::Approx(sc.v0 + sc.v_amp * std::sin(sc.v_omega * row.t))
                      .epsilon(1e-15));
            CHECK(row.f_true == ((row.k >= 50) ? 2e-3 : 0.0));
            CHECK(row.synth_time_s >= 0.0);
        }
    }

    SUBCASE("disturbances stay out of the varying-parameter residual") {
        ScenarioConfig sc;
        sc.noise_enabled = false;
        sc.fault_magnitude = 0.0;
        SimLog log = simulate(sc);

        double y_scale = 0.0, r_max = 0.0;
        for (const SimRow& row : log.rows)
            y_scale = std::max({y_scale, std::abs(row.y_yawrate), std::abs(row.y_lat),
                                std::abs(row.y_head)});
        for (size_t k = 50; k < log.rows.size(); ++k)
            r_max = std::max(r_max, std::abs(log.rows[k].r_lpv));
        REQUIRE(y_scale > 1e-3);
        CHECK(r_max <= 1e-6 * y_scale);
    }

    SUBCASE("noiseless fault estimate converges to one percent") {
        ScenarioConfig sc;
        sc.noise_enabled = false;
        SimLog log = simulate(sc);
        REQUIRE(log.rows.size() == 500);
        const double f = sc.fault_magnitude;
        for (size_t k = 450; k < log.rows.size(); ++k)
            CHECK(std::abs(log.rows[k].r_lpv - f) <= 0.01 * f);
        // lane keeping stays sane while faulted
        for (const SimRow& row : log.rows) {
            CHECK(std::abs(row.y_lat) < 0.5);
            CHECK(std::abs(row.u) <= 0.5);
        }
    }

    SUBCASE("frozen plant makes both filters coincide") {
        ScenarioConfig sc;
        sc.v_amp = 0.0;  // plant truly runs at the baseline velocity
        sc.lti_velocity = sc.v0;
        SimLog log = simulate(sc);
        for (const SimRow& row : log.rows) CHECK(row.r_lpv == row.r_lti);
    }

    SUBCASE("fault response is linear once disturbances are off") {
        ScenarioConfig big = quiet_scenario();
        big.fault_magnitude = 0.1 * std::numbers::pi / 180.0;
        ScenarioConfig small = big;
        small.fault_magnitude = big.fault_magnitude * 1e-4;

        SimLog lb = simulate(big);
        SimLog ls = simulate(small);
        REQUIRE(lb.rows.size() == ls.rows.size());
        double denom = 0.0;
        for (const SimRow& row : lb.rows) denom = std::max(denom, std::abs(row.r_lpv));
        REQUIRE(denom > 1e-4);
        for (size_t k = 0; k < lb.rows.size(); ++k)
            CHECK(std::abs(ls.rows[k].r_lpv * 1e4 - lb.rows[k].r_lpv) <= 1e-9 * denom);
        // and the scaled run still estimates its own fault to one percent
        for (size_t k = 450; k < ls.rows.size(); ++k)
            CHECK(std::abs(ls.rows[k].r_lpv - small.fault_magnitude) <=
                  0.01 * small.fault_magnitude);
    }

    SUBCASE("unstable sign variant trips the divergence guard") {
        ScenarioConfig sc;
        sc.signs = MatrixSigns::as_printed;
        CHECK_THROWS_AS(simulate(sc), DivergenceError);
    }

    SUBCASE("same seed, same run; different seed, different noise") {
        ScenarioConfig sc;
        sc.n_samples = 80;
        SimLog a = simulate(sc);
        SimLog b = simulate(sc);
        REQUIRE(a.rows.size() == b.rows.size());
        for (size_t k = 0; k < a.rows.size(); ++k) {
            CHECK(a.rows[k].y_lat == b.rows[k].y_lat);
            CHECK(a.rows[k].r_lpv == b.rows[k].r_lpv);
            CHECK(a.rows[k].u == b.rows[k].u);
        }

        ScenarioConfig other = sc;
        other.seed = 2;
        SimLog c = simulate(other);
        bool any_diff = false;
        for (size_t k = 0; k < a.rows.size(); ++k)
            any_diff = any_diff || (a.rows[k].y_lat != c.rows[k].y_lat);
        CHECK(any_diff);
    }

    SUBCASE("numerator cache leaves the residual stream untouched") {
        ScenarioConfig on;
        on.cache = true;
        ScenarioConfig off = on;
        off.cache = false;
        SimLog la = simulate(on);
        SimLog lb = simulate(off);
        REQUIRE(la.rows.size() == lb.rows.size());
        for (size_t k = 0; k < la.rows.size(); ++k) {
            CHECK(la.rows[k].r_lpv == lb.rows[k].r_lpv);
            CHECK(la.rows[k].r_lti == lb.rows[k].r_lti);
        }
    }

    SUBCASE("empty run") {
        ScenarioConfig sc;
        sc.n_samples = 0;
        CHECK(simulate(sc).rows.empty());
    }
}

TEST_CASE("isolability survey over the schedule") {
    ScenarioConfig sc;
    std::vector<WindowReport> reports = run_check(sc);
    REQUIRE(reports.size() == 100);
    for (const WindowReport& wr : reports) {
        CHECK(wr.window.size() == 4);
        CHECK(wr.report.rank_H == 26);
        CHECK(wr.report.rank_HF == 28);
        CHECK(wr.report.isolable);
    }

    SUBCASE("no fault channel, nothing to isolate") {
        ScenarioConfig off = sc;
        off.fault_channel = false;
        off.check_windows = 10;
        std::vector<WindowReport> none = run_check(off);
        REQUIRE(none.size() == 10);
        for (const WindowReport& wr : none) CHECK_FALSE(wr.report.isolable);
    }
}

TEST_CASE("benchmark aggregation") {
    ScenarioConfig sc;
    sc.n_samples = 60;
    sc.bench_repetitions = 2;
    BenchStats st = run_bench(sc, 2);
    CHECK(st.steps == 2 * (60 - 3));  // warm-up samples excluded
    CHECK(st.mean_s > 0.0);
    CHECK(st.median_s <= st.p99_s);
    CHECK(st.p99_s <= st.max_s);
    CHECK(st.threads >= 1);
    CHECK(st.threads <= 2);
}
