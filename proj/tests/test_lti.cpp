#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "helpers.hpp"
#include "lurecert/lti.hpp"

#include <complex>

using namespace lure;
using lure::test::random_stable_tf;
using lure::test::rational_eval;

TEST_CASE("tf_from_coeffs normalizes and validates") {
    SUBCASE("example-1 plant") {
        auto tf = lti::tf_from_coeffs({0.1, 0.0}, {1, -1.8, 0.81});
        CHECK(tf.den[0] == 1.0);
        CHECK(tf.num.size() == 2);
        CHECK(tf.degree() == 2);
    }
    SUBCASE("1/z") {
        auto tf = lti::tf_from_coeffs({1}, {1, 0});
        CHECK(tf.num == std::vector<double>{1.0});
        CHECK(tf.den == std::vector<double>({1.0, 0.0}));
    }
    SUBCASE("improper throws") {
        CHECK_THROWS_AS(lti::tf_from_coeffs({1, 0, 0}, {1, 0}), lti::ImproperTransferFunction);
    }
    SUBCASE("zero denominator throws") {
        CHECK_THROWS_AS(lti::tf_from_coeffs({1}, {0.0, 0.0}), lti::ZeroDenominator);
        CHECK_THROWS_AS(lti::tf_from_coeffs({1}, {}), lti::ZeroDenominator);
    }
    SUBCASE("leading denominator coefficient scaled out") {
        auto tf = lti::tf_from_coeffs({1, 0}, {2, 0, 1});
        CHECK(tf.den[0] == 1.0);
        CHECK(tf.num[0] == doctest::Approx(0.5));
    }
}

TEST_CASE("tf_to_ss canonical realization") {
    SUBCASE("1/z") {
        auto ss = lti::tf_to_ss(lti::tf_from_coeffs({1}, {1, 0}));
        REQUIRE(ss.n() == 1);
        CHECK(ss.A(0, 0) == 0.0);
        CHECK(ss.B[0] == 1.0);
        CHECK(ss.C[0] == 1.0);
        CHECK(ss.D == 0.0);
    }
    SUBCASE("frequency response matches the rational function") {
        std::mt19937_64 rng(11);
        for (int trial = 0; trial < 40; ++trial) {
            auto tf = random_stable_tf(rng, 5);
            auto ss = lti::tf_to_ss(tf);
            for (int k = 0; k < 64; ++k) {
                const auto z = std::polar(1.0, 2 * M_PI * k / 64.0);
                CHECK(std::abs(lti::eval(ss, z) - rational_eval(tf, z)) <= 1e-9);
            }
        }
    }
    SUBCASE("biproper transfer function keeps its feedthrough") {
        auto tf = lti::tf_from_coeffs({2, 1}, {1, 0.5});
        auto ss = lti::tf_to_ss(tf);
        CHECK(ss.D == doctest::Approx(2.0));
        const auto z = std::complex<double>(0.3, 0.7);
        CHECK(std::abs(lti::eval(ss, z) - rational_eval(tf, z)) < 1e-12);
    }
}

TEST_CASE("eval") {
    SUBCASE("1/z at 2") {
        auto tf = lti::tf_from_coeffs({1}, {1, 0});
        CHECK(lti::eval(tf, {2.0, 0.0}).real() == doctest::Approx(0.5));
    }
    SUBCASE("constant system") {
        lti::StateSpace ss;
        ss.A.resize(0, 0);
        ss.B.resize(0);
        ss.C.resize(0);
        ss.D = -1.0;
        CHECK(lti::eval(ss, {0.3, 0.4}).real() == doctest::Approx(-1.0));
    }
    SUBCASE("example-1 plant at z=1") {
        auto tf = lti::tf_from_coeffs({0.1, 0.0}, {1, -1.8, 0.81});
        CHECK(lti::eval(tf, {1.0, 0.0}).real() == doctest::Approx(10.0));
    }
    SUBCASE("pole raises") {
        auto tf = lti::tf_from_coeffs({1}, {1, -0.5});
        CHECK_THROWS_AS(lti::eval(tf, {0.5, 0.0}), lti::SingularAtZ);
        auto ss = lti::tf_to_ss(tf);
        CHECK_THROWS_AS(lti::eval(ss, {0.5, 0.0}), lti::SingularAtZ);
    }
}

TEST_CASE("is_schur") {
    lti::StateSpace ss;
    ss.B.resize(1);
    ss.C.resize(1);
    ss.B[0] = ss.C[0] = 1.0;
    SUBCASE("0.5 stable") {
        ss.A = Eigen::MatrixXd::Constant(1, 1, 0.5);
        CHECK(lti::is_schur(ss));
    }
    SUBCASE("1.0 not stable") {
        ss.A = Eigen::MatrixXd::Constant(1, 1, 1.0);
        CHECK_FALSE(lti::is_schur(ss));
    }
    SUBCASE("example-2 plant is stable, companion eigenvalues agree") {
        auto tf = lti::tf_from_coeffs({1, -1.95, 0.9, 0.05}, {1, -2.8, 3.5, -2.412, 0.7209});
        auto ss = lti::tf_to_ss(tf);
        CHECK(lti::is_schur(ss));
        // companion-matrix oracle on the denominator
        const int n = tf.degree();
        Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(n, n);
        for (int j = 0; j < n; ++j) comp(0, j) = -tf.den[static_cast<std::size_t>(j + 1)];
        for (int i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
        CHECK(lti::spectral_radius(comp) == doctest::Approx(lti::spectral_radius(ss.A)).epsilon(1e-9));
        CHECK(lti::spectral_radius(comp) < 1.0);
    }
}

TEST_CASE("loop_shift") {
    SUBCASE("alpha = 0 leaves the constant -1") {
        auto tf = lti::tf_from_coeffs({1}, {1, -0.25});
        auto h = lti::loop_shift(tf, 0.0);
        CHECK(h.D == doctest::Approx(-1.0));
        CHECK(h.C.norm() == 0.0);
    }
    SUBCASE("example-6 realization matches the published one") {
        auto g6 = lti::tf_from_coeffs({2, 0.92}, {1, -0.5, 0});
        auto h = lti::loop_shift(g6, 0.91);
        // reference realization with the same transfer function
        lti::StateSpace ref;
        ref.A.resize(2, 2);
        ref.A << 0.5, 0, 1, 0;
        ref.B.resize(2);
        ref.B << 2, 0;
        ref.C.resize(2);
        ref.C << -0.91, -0.4186;
        ref.D = -1.0;
        for (int k = 0; k < 64; ++k) {
            const auto z = std::polar(1.0, 2 * M_PI * (k + 0.5) / 64.0);
            CHECK(std::abs(lti::eval(h, z) - lti::eval(ref, z)) <= 1e-10);
        }
    }
    SUBCASE("identity -1 - alpha G on the unit circle") {
        std::mt19937_64 rng(17);
        for (int trial = 0; trial < 25; ++trial) {
            auto tf = random_stable_tf(rng, 5);
            std::uniform_real_distribution<double> a_dist(0.1, 5.0);
            const double alpha = a_dist(rng);
            auto h = lti::loop_shift(tf, alpha);
            for (int k = 0; k < 64; ++k) {
                const auto z = std::polar(1.0, 2 * M_PI * (k + 0.25) / 64.0);
                const auto want = -1.0 - alpha * rational_eval(tf, z);
                CHECK(std::abs(lti::eval(h, z) - want) <= 1e-10);
            }
        }
    }
}

TEST_CASE("plant files") {
    SUBCASE("coefficient form") {
        auto p = lti::parse_plant(R"({"num": [0.1, 0], "den": [1, -1.8, 0.81]})");
        REQUIRE(p.tf.has_value());
        CHECK(p.ss.n() == 2);
        CHECK_FALSE(p.fingerprint.empty());
        // fingerprint is stable across parses
        auto q = lti::parse_plant(R"({"num": [0.1, 0], "den": [1, -1.8, 0.81]})");
        CHECK(p.fingerprint == q.fingerprint);
    }
    SUBCASE("state-space form") {
        auto p = lti::parse_plant(
            R"({"ss": {"A": [[0.5, 0], [1, 0]], "B": [2, 0], "C": [1, 0.46], "D": 0}})");
        CHECK_FALSE(p.tf.has_value());
        CHECK(p.ss.n() == 2);
        CHECK(p.ss.A(0, 0) == 0.5);
        // shifting at 0.91 reproduces the published example-6 realization exactly
        auto h = lti::loop_shift(p.ss, 0.91);
        CHECK(h.C[0] == doctest::Approx(-0.91));
        CHECK(h.C[1] == doctest::Approx(-0.4186));
        CHECK(h.D == doctest::Approx(-1.0));
    }
    SUBCASE("different plants get different fingerprints") {
        auto p = lti::parse_plant(R"({"num": [1], "den": [1, 0]})");
        auto q = lti::parse_plant(R"({"num": [1], "den": [1, 0.5]})");
        CHECK(p.fingerprint != q.fingerprint);
    }
}
