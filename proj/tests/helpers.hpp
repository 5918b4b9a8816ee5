#pragma once

#include <Eigen/Dense>

#include <complex>
#include <random>
#include <vector>

#include "lurecert/lti.hpp"

namespace lure::test {

// polynomial with the given roots (real coefficients, conjugate pairs assumed)
inline std::vector<double> poly_from_roots(const std::vector<std::complex<double>>& roots) {
    std::vector<std::complex<double>> c{1.0};
    for (const auto& r : roots) {
        std::vector<std::complex<double>> next(c.size() + 1, 0.0);
        for (std::size_t i = 0; i < c.size(); ++i) {
            next[i] += c[i];
            next[i + 1] -= c[i] * r;
        }
        c = std::move(next);
    }
    std::vector<double> out(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) out[i] = c[i].real();
    return out;
}

// random Schur-stable transfer function of degree <= max_deg
inline lti::TransferFunction random_stable_tf(std::mt19937_64& rng, int max_deg,
                                              double pole_radius = 0.9) {
    std::uniform_int_distribution<int> deg_dist(1, max_deg);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const int n = deg_dist(rng);
    std::vector<std::complex<double>> poles;
    while (static_cast<int>(poles.size()) < n) {
        if (n - static_cast<int>(poles.size()) >= 2 && u(rng) < 0.5) {
            const double r = pole_radius * u(rng);
            const double th = 2 * M_PI * u(rng);
            poles.emplace_back(r * std::cos(th), r * std::sin(th));
            poles.emplace_back(r * std::cos(th), -r * std::sin(th));
        } else {
            poles.emplace_back(pole_radius * (2 * u(rng) - 1), 0.0);
        }
    }
    const auto den = poly_from_roots(poles);
    std::uniform_int_distribution<int> num_deg_dist(0, n);
    const int m = num_deg_dist(rng);
    std::vector<double> num(static_cast<std::size_t>(m) + 1);
    for (auto& c : num) c = 2 * u(rng) - 1;
    if (num[0] == 0.0) num[0] = 0.5;
    return lti::tf_from_coeffs(num, den);
}

inline std::complex<double> polyval(const std::vector<double>& c, std::complex<double> z) {
    std::complex<double> acc = 0.0;
    for (double ci : c) acc = acc * z + ci;
    return acc;
}

// direct rational evaluation, independent of lti::eval(StateSpace)
inline std::complex<double> rational_eval(const lti::TransferFunction& tf,
                                          std::complex<double> z) {
    return polyval(tf.num, z) / polyval(tf.den, z);
}

}  // namespace lure::test
