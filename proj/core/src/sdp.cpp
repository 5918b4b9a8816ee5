#include "lurecert/sdp.hpp"

#include <Eigen/Eigenvalues>

#include <cstdlib>
#include <iostream>
#include <vector>

#include "lurecert/svec.hpp"

extern "C" {

struct LureClarabelResult {
    int32_t status;
    uint32_t iterations;
    double r_prim;
    double r_dual;
};

int32_t lure_clarabel_solve(size_t nvars, size_t nrows, size_t a_nnz, const size_t* a_colptr,
                            const size_t* a_rowval, const double* a_nzval, const double* b,
                            size_t ncones, const int32_t* cone_kind, const size_t* cone_dim,
                            double tol, uint32_t max_iter, double time_limit, int32_t verbose,
                            double* x_out, LureClarabelResult* result);

}  // extern "C"

namespace lure::sdp {

const char* to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::Feasible: return "Feasible";
        case SolveStatus::Infeasible: return "Infeasible";
        case SolveStatus::Inaccurate: return "Inaccurate";
        case SolveStatus::SolverError: return "SolverError";
        case SolveStatus::TimeLimit: return "TimeLimit";
    }
    return "?";
}

Settings default_settings() {
    Settings s;
    if (const char* env = std::getenv("LURE_CERT_SOLVER_TOL")) {
        const double v = std::atof(env);
        if (v > 0.0) {
            s.tol = v;
            s.solver_tol = std::min(s.solver_tol, 0.1 * v);
        }
    }
    return s;
}

ConicProgram to_conic(const lmi::LmiProblem& p) {
    const int n = p.vars.total();
    ConicProgram cp;
    cp.nvars = n;

    // Affine probing: column j of each constraint block is eval(e_j) - eval(0).
    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(n);

    int nrows = 0;
    std::vector<const lmi::LinearConstraint*> eqs, ineqs;
    for (const auto& c : p.linear)
        (c.kind == lmi::LinKind::EqZero ? eqs : ineqs).push_back(&c);
    nrows += static_cast<int>(eqs.size()) + static_cast<int>(ineqs.size());
    for (const auto& blk : p.psd_blocks) nrows += svec_len(blk.side);

    std::vector<Eigen::Triplet<double>> trips;
    cp.b = Eigen::VectorXd::Zero(nrows);
    cp.cones.clear();

    int row = 0;
    auto add_linear = [&](const std::vector<const lmi::LinearConstraint*>& cs) {
        for (const auto* c : cs) {
            const double c0 = c->eval(zero);
            cp.b[row] = -c0;
            Eigen::VectorXd probe = zero;
            for (int j = 0; j < n; ++j) {
                probe[j] = 1.0;
                const double aij = c->eval(probe) - c0;
                probe[j] = 0.0;
                if (aij != 0.0) trips.emplace_back(row, j, aij);
            }
            ++row;
        }
    };
    if (!eqs.empty()) {
        add_linear(eqs);
        cp.cones.push_back({ConeSpec::Zero, static_cast<int>(eqs.size())});
    }
    if (!ineqs.empty()) {
        add_linear(ineqs);
        cp.cones.push_back({ConeSpec::Nonneg, static_cast<int>(ineqs.size())});
    }
    for (const auto& blk : p.psd_blocks) {
        const int len = svec_len(blk.side);
        const Eigen::VectorXd v0 = svec(blk.eval(zero));
        cp.b.segment(row, len) = -v0;
        Eigen::VectorXd probe = zero;
        for (int j = 0; j < n; ++j) {
            probe[j] = 1.0;
            const Eigen::VectorXd col = svec(blk.eval(probe)) - v0;
            probe[j] = 0.0;
            for (int i = 0; i < len; ++i)
                if (col[i] != 0.0) trips.emplace_back(row + i, j, col[i]);
        }
        cp.cones.push_back({ConeSpec::PsdTriangle, blk.side});
        row += len;
    }

    cp.A.resize(nrows, n);
    cp.A.setFromTriplets(trips.begin(), trips.end());
    cp.A.makeCompressed();
    return cp;
}

ResidualReport residuals(const lmi::LmiProblem& p, const lmi::Values& values) {
    const Eigen::VectorXd x = p.vars.pack(values);
    ResidualReport rep;
    rep.worst_psd = -std::numeric_limits<double>::infinity();
    rep.worst_linear = -std::numeric_limits<double>::infinity();
    for (const auto& c : p.linear) {
        const double v = c.eval(x);
        const double viol = c.kind == lmi::LinKind::EqZero ? std::abs(v) : v;
        rep.entries.push_back({c.label, viol, false});
        if (viol > rep.worst_linear) {
            rep.worst_linear = viol;
            rep.worst_linear_label = c.label;
        }
    }
    for (const auto& blk : p.psd_blocks) {
        const Eigen::MatrixXd B = blk.eval(x);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (B + B.transpose()),
                                                          Eigen::EigenvaluesOnly);
        const double maxeig = es.eigenvalues().maxCoeff();
        rep.entries.push_back({blk.label, maxeig, true});
        if (maxeig > rep.worst_psd) {
            rep.worst_psd = maxeig;
            rep.worst_psd_label = blk.label;
        }
    }
    if (rep.entries.empty()) {
        rep.worst_psd = rep.worst_linear = 0.0;
    }
    if (!std::isfinite(rep.worst_psd)) rep.worst_psd = 0.0;
    if (!std::isfinite(rep.worst_linear)) rep.worst_linear = 0.0;
    return rep;
}

namespace {

enum FfiStatus {
    kSolved = 0,
    kAlmostSolved = 1,
    kPrimalInfeasible = 2,
    kAlmostPrimalInfeasible = 3,
    kDualInfeasible = 4,
    kAlmostDualInfeasible = 5,
    kMaxIterations = 6,
    kMaxTime = 7,
    kNumericalError = 8,
    kInsufficientProgress = 9,
};

}  // namespace

Solution solve(const lmi::LmiProblem& p, const Settings& settings) {
    Solution sol;
    if (p.vars.total() == 0 || (p.psd_blocks.empty() && p.linear.empty())) {
        // no constraints (or no variables with constant constraints): check directly
        const Eigen::VectorXd zero = Eigen::VectorXd::Zero(p.vars.total());
        sol.values = p.vars.unpack(zero);
        sol.residuals = residuals(p, sol.values);
        sol.status = sol.residuals.pass(settings.tol) ? SolveStatus::Feasible
                                                      : SolveStatus::Infeasible;
        return sol;
    }

    const ConicProgram cp = to_conic(p);
    std::vector<size_t> colptr(static_cast<std::size_t>(cp.nvars) + 1);
    std::vector<size_t> rowval(static_cast<std::size_t>(cp.A.nonZeros()));
    std::vector<double> nzval(static_cast<std::size_t>(cp.A.nonZeros()));
    for (int j = 0; j <= cp.nvars; ++j)
        colptr[static_cast<std::size_t>(j)] = static_cast<size_t>(cp.A.outerIndexPtr()[j]);
    for (Eigen::Index i = 0; i < cp.A.nonZeros(); ++i) {
        rowval[static_cast<std::size_t>(i)] = static_cast<size_t>(cp.A.innerIndexPtr()[i]);
        nzval[static_cast<std::size_t>(i)] = cp.A.valuePtr()[i];
    }
    std::vector<int32_t> kinds;
    std::vector<size_t> dims;
    for (const auto& c : cp.cones) {
        kinds.push_back(c.kind == ConeSpec::Zero ? 0 : c.kind == ConeSpec::Nonneg ? 1 : 2);
        dims.push_back(static_cast<size_t>(c.dim));
    }

    std::vector<double> x(static_cast<std::size_t>(cp.nvars), 0.0);
    LureClarabelResult res{};
    const int32_t rc = lure_clarabel_solve(
        static_cast<size_t>(cp.nvars), static_cast<size_t>(cp.A.rows()),
        static_cast<size_t>(cp.A.nonZeros()), colptr.data(), rowval.data(), nzval.data(),
        cp.b.data(), kinds.size(), kinds.data(), dims.data(), settings.solver_tol,
        static_cast<uint32_t>(settings.max_iter), settings.time_limit,
        settings.verbose ? 1 : 0, x.data(), &res);

    if (rc != 0) {
        sol.status = SolveStatus::SolverError;
        sol.note = "solver adapter failed (code " + std::to_string(rc) + ")";
        return sol;
    }
    sol.iterations = static_cast<int>(res.iterations);
    sol.solver_r_prim = res.r_prim;
    sol.solver_r_dual = res.r_dual;

    const Eigen::VectorXd xv = Eigen::Map<Eigen::VectorXd>(x.data(), cp.nvars);
    sol.values = p.vars.unpack(xv);
    sol.residuals = residuals(p, sol.values);
    const bool point_ok = sol.residuals.pass(settings.tol);

    switch (res.status) {
        case kSolved:
            sol.status = point_ok ? SolveStatus::Feasible : SolveStatus::Inaccurate;
            if (!point_ok) sol.note = "solver reported success but residuals fail";
            break;
        case kAlmostSolved:
            // a returned point with independently verified residuals is a
            // certificate no matter what the solver thinks of it
            sol.status = point_ok ? SolveStatus::Feasible : SolveStatus::Inaccurate;
            if (point_ok) sol.note = "accepted near-converged point on verified residuals";
            break;
        case kPrimalInfeasible:
            sol.status = SolveStatus::Infeasible;
            break;
        case kAlmostPrimalInfeasible:
        case kDualInfeasible:
        case kAlmostDualInfeasible:
        case kNumericalError:
        case kInsufficientProgress:
            sol.status = point_ok ? SolveStatus::Feasible : SolveStatus::Inaccurate;
            if (point_ok) sol.note = "accepted stalled point on verified residuals";
            break;
        case kMaxIterations:
            sol.status = point_ok ? SolveStatus::Feasible : SolveStatus::Inaccurate;
            break;
        case kMaxTime:
            sol.status = point_ok ? SolveStatus::Feasible : SolveStatus::TimeLimit;
            break;
        default:
            sol.status = SolveStatus::SolverError;
            break;
    }
    return sol;
}

}  // namespace lure::sdp
