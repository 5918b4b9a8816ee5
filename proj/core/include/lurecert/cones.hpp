#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace lure::cones {

/// Multiplier (M, m) for the quadratic-plus-linear form u^T M y + m^T f.
///
/// Orientation used everywhere in this codebase: (M, m) is admissible iff
///   M * 1 >= 0 (row sums), M^T * 1 + m >= 0 (column sums plus m),
///   M_ij <= 0 for i != j.
/// Under these conditions u^T M y + m^T f >= 0 for every data set
/// (y_i, u_i, f_i) produced by a convex function through the origin.
struct Multiplier {
    Eigen::MatrixXd M;  // (ell+1) x (ell+1)
    Eigen::VectorXd m;  // ell+1
};

/// Data points (y_i, u_i, f_i), oldest-first when they come from a trajectory.
struct InterpData {
    Eigen::VectorXd y;
    Eigen::VectorXd u;
    Eigen::VectorXd f;
};

/// Nonnegative combination coefficients of the interpolation inequalities.
/// Lambda has zero diagonal (the i == j inequality is vacuous).
struct DualConeWitness {
    Eigen::MatrixXd Lambda;
    Eigen::VectorXd gamma;
    Eigen::VectorXd delta;

    /// Induced multiplier, in this codebase's orientation:
    ///   M = diag(Lambda^T 1) - Lambda^T + diag(gamma),
    ///   m = (Lambda - Lambda^T) 1 - gamma + delta.
    /// Satisfies M*1 = gamma and M^T*1 + m = delta exactly.
    Multiplier to_multiplier() const;

    static DualConeWitness random(std::mt19937_64& rng, int size);
};

bool check_interpolable(const InterpData& d, double tol);

bool is_doubly_hyperdominant(const Eigen::MatrixXd& M, double tol);

bool in_dual_cone(const Multiplier& mult, double tol);

/// Largest violation of the dual-cone conditions (<= tol iff in_dual_cone).
double dual_cone_violation(const Multiplier& mult);

double quad_linear_value(const Multiplier& mult, const InterpData& d);

/// One affine inequality  sum_ij C_ij M_ij + c^T m + rhs <= 0  on a
/// multiplier's entries, for consumption by the LMI assembly.
struct MultiplierConstraint {
    Eigen::MatrixXd M_coeff;
    Eigen::VectorXd m_coeff;
    double rhs = 0.0;
    std::string label;
};

/// The (ell+1) row-sum, (ell+1) column-sum-plus-m and ell(ell+1) sign
/// constraints defining the dual cone.
std::vector<MultiplierConstraint> dual_cone_constraints(int ell);

/// Exact samples from a random convex piecewise-quadratic function through
/// the origin; the result passes check_interpolable at 1e-12.
InterpData sample_interpolable(int ell, double slope_max, std::uint64_t rng_seed);

}  // namespace lure::cones
