#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <string>
#include <vector>

#include "lurecert/lmi.hpp"

namespace lure::sdp {

enum class SolveStatus { Feasible, Infeasible, Inaccurate, SolverError, TimeLimit };

const char* to_string(SolveStatus s);

struct Settings {
    double tol = 1e-8;        // residual acceptance tolerance
    double solver_tol = 1e-9; // interior-point feasibility/gap tolerance
    int max_iter = 50000;
    double time_limit = 0.0;  // seconds, 0 = unlimited
    bool verbose = false;
};

/// Reads LURE_CERT_SOLVER_TOL when set.
Settings default_settings();

struct ConeSpec {
    enum Kind { Zero, Nonneg, PsdTriangle } kind;
    int dim;  // side length for PsdTriangle, row count otherwise
};

/// Canonical conic feasibility form: find x with A x + s = b, s in K.
struct ConicProgram {
    int nvars = 0;
    Eigen::SparseMatrix<double> A;
    Eigen::VectorXd b;
    std::vector<ConeSpec> cones;
};

ConicProgram to_conic(const lmi::LmiProblem& p);

struct ConstraintResidual {
    std::string label;
    double value;  // max eigenvalue for PSD blocks, signed violation for linear
    bool is_psd;
};

struct ResidualReport {
    std::vector<ConstraintResidual> entries;
    double worst_psd = 0.0;       // most positive block eigenvalue
    double worst_linear = 0.0;    // most positive violation (abs for equalities)
    std::string worst_psd_label;
    std::string worst_linear_label;

    double worst() const { return std::max(worst_psd, worst_linear); }
    bool pass(double tol) const { return worst() <= tol; }
};

/// Independent re-evaluation of every constraint at the given values.
ResidualReport residuals(const lmi::LmiProblem& p, const lmi::Values& values);

struct Solution {
    SolveStatus status = SolveStatus::SolverError;
    lmi::Values values;          // present whenever the solver returned a point
    ResidualReport residuals;    // of that point
    int iterations = 0;
    double solver_r_prim = 0.0;
    double solver_r_dual = 0.0;
    std::string note;
};

/// Solve via the external interior-point backend, then verify residuals.
/// Status is Feasible only when the independently-checked residuals pass
/// settings.tol; a near-converged point whose residuals pass is accepted
/// (noted), everything else degrades conservatively.
Solution solve(const lmi::LmiProblem& p, const Settings& settings = default_settings());

}  // namespace lure::sdp
