#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace lure::pwl {

/// Monotone (nondecreasing) continuous piecewise-linear function with
/// value 0 at 0, together with its exact piecewise-quadratic potential
/// (integral from 0). Segment i covers (breaks[i-1], breaks[i]) with
/// slope slopes[i]; slopes.size() == breaks.size() + 1.
class MonotonePwl {
   public:
    MonotonePwl(std::vector<double> breaks, std::vector<double> slopes);

    double value(double x) const;      // phi(x)
    double potential(double x) const;  // integral of phi from 0 to x
    double slope_at(double x) const;
    double max_slope() const;

    const std::vector<double>& breaks() const { return breaks_; }
    const std::vector<double>& slopes() const { return slopes_; }

    /// Random instance: up to max_breaks breakpoints in [-range, range],
    /// slopes uniform in [slope_min, slope_max].
    static MonotonePwl random(std::mt19937_64& rng, int max_breaks, double slope_min,
                              double slope_max, double range);

    /// The monotone nonlinearity of the shifted loop: for phi slope-restricted
    /// in (0, alpha), the map  ytil = phi(y) - alpha*y  ->  util = -phi(y)
    /// is nondecreasing piecewise-linear through the origin with slopes
    /// s/(alpha - s). Requires max_slope() < alpha.
    MonotonePwl loop_shift_transform(double alpha) const;

   private:
    int segment_of(double x) const;

    std::vector<double> breaks_;
    std::vector<double> slopes_;
    std::vector<double> value_at_break_;      // phi(breaks[i]) anchored at phi(0)=0
    std::vector<double> potential_at_break_;  // potential(breaks[i])
};

}  // namespace lure::pwl
