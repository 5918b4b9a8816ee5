#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "lurecert/pwl.hpp"

#include <random>

using namespace lure;

TEST_CASE("MonotonePwl basics") {
    pwl::MonotonePwl f({-1.0, 0.5}, {1.0, 2.0, 0.5});
    SUBCASE("value is anchored at zero") {
        CHECK(f.value(0.0) == 0.0);
        CHECK(f.potential(0.0) == 0.0);
    }
    SUBCASE("piecewise slopes") {
        CHECK(f.slope_at(-2.0) == 1.0);
        CHECK(f.slope_at(0.0) == 2.0);
        CHECK(f.slope_at(1.0) == 0.5);
        CHECK(f.max_slope() == 2.0);
    }
    SUBCASE("hand-computed values") {
        // phi(x) = 2x on (-1, 0.5); phi(-1) = -2; phi(0.5) = 1
        CHECK(f.value(0.5) == doctest::Approx(1.0));
        CHECK(f.value(-1.0) == doctest::Approx(-2.0));
        CHECK(f.value(-2.0) == doctest::Approx(-3.0));
        CHECK(f.value(1.5) == doctest::Approx(1.5));
        // potential(0.5) = integral of 2x = 0.25
        CHECK(f.potential(0.5) == doctest::Approx(0.25));
        CHECK(f.potential(-1.0) == doctest::Approx(1.0));
    }
    SUBCASE("monotone and consistent with finite differences") {
        std::mt19937_64 rng(2);
        std::uniform_real_distribution<double> x_dist(-4.0, 4.0);
        for (int i = 0; i < 500; ++i) {
            const double a = x_dist(rng), b = x_dist(rng);
            CHECK((f.value(a) - f.value(b)) * (a - b) >= 0.0);
            const double h = 1e-7;
            const double fd = (f.potential(a + h) - f.potential(a - h)) / (2 * h);
            CHECK(fd == doctest::Approx(f.value(a)).epsilon(1e-5).scale(1.0));
        }
    }
}

TEST_CASE("loop_shift_transform") {
    std::mt19937_64 rng(4);
    const double alpha = 2.5;
    for (int trial = 0; trial < 50; ++trial) {
        auto phi = pwl::MonotonePwl::random(rng, 4, 0.05 * alpha, 0.95 * alpha, 2.0);
        auto phit = phi.loop_shift_transform(alpha);
        std::uniform_real_distribution<double> y_dist(-5.0, 5.0);
        for (int i = 0; i < 50; ++i) {
            const double y = y_dist(rng);
            const double ytil = phi.value(y) - alpha * y;
            const double util = -phi.value(y);
            CHECK(phit.value(ytil) == doctest::Approx(util).epsilon(1e-10).scale(1.0));
        }
        // transformed slopes are s/(alpha - s) >= 0
        for (double s : phit.slopes()) CHECK(s >= 0.0);
        CHECK(phit.value(0.0) == 0.0);
        CHECK(phit.potential(0.0) == 0.0);
    }
    SUBCASE("potential matches numeric quadrature of the transformed map") {
        auto phi = pwl::MonotonePwl::random(rng, 3, 0.2, 2.0, 1.5);
        auto phit = phi.loop_shift_transform(alpha);
        for (double x : {-3.0, -0.7, 0.4, 2.2}) {
            const int N = 20000;
            double acc = 0.0;
            for (int i = 0; i < N; ++i) {
                const double t = x * (i + 0.5) / N;
                acc += phit.value(t) * x / N;
            }
            CHECK(phit.potential(x) == doctest::Approx(acc).epsilon(1e-6).scale(1.0));
        }
    }
}
