#include "lurecert/pwl.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lure::pwl {

MonotonePwl::MonotonePwl(std::vector<double> breaks, std::vector<double> slopes)
    : breaks_(std::move(breaks)), slopes_(std::move(slopes)) {
    if (slopes_.size() != breaks_.size() + 1)
        throw std::invalid_argument("slopes.size() must be breaks.size() + 1");
    if (!std::is_sorted(breaks_.begin(), breaks_.end()))
        throw std::invalid_argument("breakpoints must be sorted");
    for (double s : slopes_)
        if (s < 0.0) throw std::invalid_argument("slopes must be nonnegative");

    const int K = static_cast<int>(breaks_.size());
    value_at_break_.assign(breaks_.size(), 0.0);
    potential_at_break_.assign(breaks_.size(), 0.0);
    if (K == 0) return;

    const int j0 = segment_of(0.0);
    // anchor phi(0) = 0, integrate slopes outward from 0
    if (j0 < K) {
        value_at_break_[static_cast<std::size_t>(j0)] = slopes_[static_cast<std::size_t>(j0)] * breaks_[static_cast<std::size_t>(j0)];
        for (int i = j0 + 1; i < K; ++i)
            value_at_break_[static_cast<std::size_t>(i)] =
                value_at_break_[static_cast<std::size_t>(i - 1)] +
                slopes_[static_cast<std::size_t>(i)] * (breaks_[static_cast<std::size_t>(i)] - breaks_[static_cast<std::size_t>(i - 1)]);
    }
    if (j0 > 0) {
        value_at_break_[static_cast<std::size_t>(j0 - 1)] = slopes_[static_cast<std::size_t>(j0)] * breaks_[static_cast<std::size_t>(j0 - 1)];
        for (int i = j0 - 2; i >= 0; --i)
            value_at_break_[static_cast<std::size_t>(i)] =
                value_at_break_[static_cast<std::size_t>(i + 1)] -
                slopes_[static_cast<std::size_t>(i + 1)] * (breaks_[static_cast<std::size_t>(i + 1)] - breaks_[static_cast<std::size_t>(i)]);
    }
    // exact potential at breakpoints (piecewise quadratic, anchored at 0)
    auto seg_integral = [&](double a, double b, double phi_a, double s) {
        return phi_a * (b - a) + 0.5 * s * (b - a) * (b - a);
    };
    if (j0 < K) {
        potential_at_break_[static_cast<std::size_t>(j0)] =
            seg_integral(0.0, breaks_[static_cast<std::size_t>(j0)], 0.0, slopes_[static_cast<std::size_t>(j0)]);
        for (int i = j0 + 1; i < K; ++i)
            potential_at_break_[static_cast<std::size_t>(i)] =
                potential_at_break_[static_cast<std::size_t>(i - 1)] +
                seg_integral(breaks_[static_cast<std::size_t>(i - 1)], breaks_[static_cast<std::size_t>(i)],
                             value_at_break_[static_cast<std::size_t>(i - 1)], slopes_[static_cast<std::size_t>(i)]);
    }
    if (j0 > 0) {
        potential_at_break_[static_cast<std::size_t>(j0 - 1)] =
            -seg_integral(breaks_[static_cast<std::size_t>(j0 - 1)], 0.0,
                          value_at_break_[static_cast<std::size_t>(j0 - 1)], slopes_[static_cast<std::size_t>(j0)]);
        for (int i = j0 - 2; i >= 0; --i)
            potential_at_break_[static_cast<std::size_t>(i)] =
                potential_at_break_[static_cast<std::size_t>(i + 1)] -
                seg_integral(breaks_[static_cast<std::size_t>(i)], breaks_[static_cast<std::size_t>(i + 1)],
                             value_at_break_[static_cast<std::size_t>(i)], slopes_[static_cast<std::size_t>(i + 1)]);
    }
}

int MonotonePwl::segment_of(double x) const {
    return static_cast<int>(std::upper_bound(breaks_.begin(), breaks_.end(), x) - breaks_.begin());
}

double MonotonePwl::value(double x) const {
    const int K = static_cast<int>(breaks_.size());
    if (K == 0) return slopes_[0] * x;
    const int i = segment_of(x);
    if (i == 0) return value_at_break_[0] + slopes_[0] * (x - breaks_[0]);
    const std::size_t a = static_cast<std::size_t>(i - 1);
    // anchor from the segment's left endpoint unless x is left of zero's segment
    double phi = value_at_break_[a] + slopes_[static_cast<std::size_t>(i)] * (x - breaks_[a]);
    return phi;
}

double MonotonePwl::potential(double x) const {
    const int K = static_cast<int>(breaks_.size());
    if (K == 0) return 0.5 * slopes_[0] * x * x;
    const int i = segment_of(x);
    if (i == 0) {
        const double d = x - breaks_[0];
        return potential_at_break_[0] + value_at_break_[0] * d + 0.5 * slopes_[0] * d * d;
    }
    const std::size_t a = static_cast<std::size_t>(i - 1);
    const double d = x - breaks_[a];
    return potential_at_break_[a] + value_at_break_[a] * d +
           0.5 * slopes_[static_cast<std::size_t>(i)] * d * d;
}

double MonotonePwl::slope_at(double x) const {
    return slopes_[static_cast<std::size_t>(segment_of(x))];
}

double MonotonePwl::max_slope() const {
    return *std::max_element(slopes_.begin(), slopes_.end());
}

MonotonePwl MonotonePwl::random(std::mt19937_64& rng, int max_breaks, double slope_min,
                                double slope_max, double range) {
    std::uniform_int_distribution<int> nb_dist(0, max_breaks);
    std::uniform_real_distribution<double> b_dist(-range, range);
    std::uniform_real_distribution<double> s_dist(slope_min, slope_max);
    const int nb = nb_dist(rng);
    std::vector<double> b(static_cast<std::size_t>(nb));
    for (auto& v : b) v = b_dist(rng);
    std::sort(b.begin(), b.end());
    b.erase(std::unique(b.begin(), b.end()), b.end());
    std::vector<double> s(b.size() + 1);
    for (auto& v : s) v = s_dist(rng);
    return MonotonePwl(std::move(b), std::move(s));
}

MonotonePwl MonotonePwl::loop_shift_transform(double alpha) const {
    if (max_slope() >= alpha)
        throw std::invalid_argument("loop_shift_transform requires slopes < alpha");
    const int K = static_cast<int>(breaks_.size());
    // ytil = phi(y) - alpha*y is strictly decreasing, so breakpoint order flips
    std::vector<double> nb(static_cast<std::size_t>(K));
    for (int i = 0; i < K; ++i)
        nb[static_cast<std::size_t>(K - 1 - i)] =
            value_at_break_[static_cast<std::size_t>(i)] - alpha * breaks_[static_cast<std::size_t>(i)];
    std::vector<double> ns(static_cast<std::size_t>(K) + 1);
    for (int i = 0; i <= K; ++i)
        ns[static_cast<std::size_t>(K - i)] =
            slopes_[static_cast<std::size_t>(i)] / (alpha - slopes_[static_cast<std::size_t>(i)]);
    return MonotonePwl(std::move(nb), std::move(ns));
}

}  // namespace lure::pwl
