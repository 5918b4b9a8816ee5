#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "helpers.hpp"
#include "lurecert/lifting.hpp"

#include <complex>

using namespace lure;
using lure::test::random_stable_tf;

namespace {

// plant-side recording of (y, u) histories, the oracle for the lifted outputs
struct PlantLog {
    Eigen::MatrixXd x;
    Eigen::VectorXd y;
};

PlantLog simulate_plant(const lti::StateSpace& ss, const Eigen::VectorXd& u) {
    const int T = static_cast<int>(u.size());
    PlantLog log;
    log.x.resize(T + 1, ss.n());
    log.y.resize(T);
    Eigen::VectorXd x = Eigen::VectorXd::Zero(ss.n());
    for (int t = 0; t < T; ++t) {
        log.x.row(t) = x.transpose();
        log.y[t] = (ss.C * x)(0) + ss.D * u[t];
        x = ss.A * x + ss.B * u[t];
    }
    log.x.row(T) = x.transpose();
    return log;
}

}  // namespace

TEST_CASE("f_matrices") {
    SUBCASE("ell = 0 gives empty matrices") {
        auto [F, Fp] = lifting::f_matrices(0);
        CHECK(F.rows() == 0);
        CHECK(F.cols() == 1);
        CHECK(Fp.rows() == 0);
    }
    SUBCASE("ell = 1") {
        auto [F, Fp] = lifting::f_matrices(1);
        CHECK(F(0, 0) == 1.0);
        CHECK(F(0, 1) == 0.0);
        CHECK(Fp(0, 0) == 0.0);
        CHECK(Fp(0, 1) == 1.0);
    }
    SUBCASE("ell = 2") {
        auto [F, Fp] = lifting::f_matrices(2);
        Eigen::MatrixXd Fe(2, 3), Fpe(2, 3);
        Fe << 1, 0, 0, 0, 1, 0;
        Fpe << 0, 1, 0, 0, 0, 1;
        CHECK((F - Fe).norm() == 0.0);
        CHECK((Fp - Fpe).norm() == 0.0);
    }
    SUBCASE("index-shift identity on random sequences") {
        std::mt19937_64 rng(5);
        std::normal_distribution<double> g;
        for (int ell = 1; ell <= 5; ++ell) {
            auto [F, Fp] = lifting::f_matrices(ell);
            Eigen::VectorXd f(ell + 2);
            for (int i = 0; i < f.size(); ++i) f[i] = g(rng);
            // stacks at t and t+1 over the same scalar sequence
            const Eigen::VectorXd st = f.head(ell + 1);
            const Eigen::VectorXd st1 = f.tail(ell + 1);
            CHECK((F * st1 - Fp * st).norm() == 0.0);
        }
    }
}

TEST_CASE("build_lifted") {
    SUBCASE("ell = 0 reduces to the plant") {
        auto ss = lti::tf_to_ss(lti::tf_from_coeffs({1}, {1, -0.5}));
        auto ls = lifting::build_lifted(ss, 0);
        CHECK((ls.A - ss.A).norm() == 0.0);
        CHECK((ls.B - ss.B).norm() == 0.0);
        CHECK((ls.C.row(0) - ss.C).norm() == 0.0);
        CHECK(ls.C.row(1).norm() == 0.0);
        CHECK(ls.D[0] == ss.D);
        CHECK(ls.D[1] == 1.0);
    }
    SUBCASE("example-6 dimensions") {
        lti::StateSpace h;
        h.A.resize(2, 2);
        h.A << 0.5, 0, 1, 0;
        h.B.resize(2);
        h.B << 2, 0;
        h.C.resize(2);
        h.C << -0.91, -0.4186;
        h.D = -1.0;
        auto ls = lifting::build_lifted(h, 2);
        CHECK(ls.dim() == 4);
        CHECK(ls.C.rows() == 6);
    }
    SUBCASE("outputs reproduce the recorded plant history") {
        std::mt19937_64 rng(23);
        std::normal_distribution<double> g;
        for (int trial = 0; trial < 20; ++trial) {
            auto tf = random_stable_tf(rng, 4);
            auto ss = lti::tf_to_ss(tf);
            const int ell = 3, T = 20;
            auto ls = lifting::build_lifted(ss, ell);
            Eigen::VectorXd u(T);
            for (int t = 0; t < T; ++t) u[t] = g(rng);
            const auto plant = simulate_plant(ss, u);
            const auto sim = lifting::simulate_lifted(ls, Eigen::VectorXd::Zero(ls.dim()), u);
            for (int t = ell; t < T; ++t) {
                for (int r = 0; r <= ell; ++r) {
                    CHECK(sim.outputs(t, r) == doctest::Approx(plant.y[t - ell + r]).epsilon(0).scale(1).margin(1e-12));
                    CHECK(sim.outputs(t, ell + 1 + r) ==
                          doctest::Approx(u[t - ell + r]).margin(1e-12));
                }
            }
        }
    }
    SUBCASE("transfer-function identity with the delay stack") {
        std::mt19937_64 rng(31);
        auto tf = random_stable_tf(rng, 3);
        auto ss = lti::tf_to_ss(tf);
        const int ell = 2;
        auto ls = lifting::build_lifted(ss, ell);
        for (int k = 0; k < 32; ++k) {
            const auto z = std::polar(1.0, 2 * M_PI * (k + 0.25) / 32.0);
            const auto gz = lure::test::rational_eval(tf, z);
            for (int r = 0; r <= ell; ++r) {
                // row r is y_{t-(ell-r)}: transfer z^{-(ell-r)} G(z)
                const int lag = ell - r;
                const auto zlag = std::pow(z, -lag);
                Eigen::MatrixXcd zIA = z * Eigen::MatrixXcd::Identity(ls.dim(), ls.dim()) -
                                       ls.A.cast<std::complex<double>>();
                Eigen::VectorXcd sol = zIA.partialPivLu().solve(ls.B.cast<std::complex<double>>());
                const auto row_tf =
                    (ls.C.row(r).cast<std::complex<double>>() * sol)(0) + ls.D[r];
                CHECK(std::abs(row_tf - zlag * gz) <= 1e-9);
                const auto urow_tf =
                    (ls.C.row(ell + 1 + r).cast<std::complex<double>>() * sol)(0) +
                    ls.D[ell + 1 + r];
                CHECK(std::abs(urow_tf - zlag) <= 1e-9);
            }
        }
    }
}

TEST_CASE("simulate_lifted") {
    auto ss = lti::tf_to_ss(lti::tf_from_coeffs({1, 0.2}, {1, -0.4, 0.03}));
    auto ls = lifting::build_lifted(ss, 2);
    SUBCASE("zero input, zero state") {
        const auto sim = lifting::simulate_lifted(ls, Eigen::VectorXd::Zero(ls.dim()),
                                                  Eigen::VectorXd::Zero(10));
        CHECK(sim.states.norm() == 0.0);
        CHECK(sim.outputs.norm() == 0.0);
    }
    SUBCASE("dimension mismatch raises") {
        CHECK_THROWS_AS(
            lifting::simulate_lifted(ls, Eigen::VectorXd::Zero(2), Eigen::VectorXd::Zero(4)),
            lti::DimensionMismatch);
    }
}
