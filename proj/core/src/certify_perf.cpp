#include <Eigen/Eigenvalues>

#include <cmath>
#include <complex>

#include "lurecert/certify.hpp"

namespace lure::certify {

namespace {

lmi::PerformancePlant shift_nonlinearity(const lmi::PerformancePlant& pp, double alpha) {
    // the loop shift rescales only the row the nonlinearity sees; the state
    // equations and the performance channel are untouched
    lmi::PerformancePlant out = pp;
    out.g = lti::loop_shift(pp.g, alpha);
    return out;
}

bool solve_accept(const lmi::LmiProblem& prob, const sdp::Settings& settings,
                  double accept_tol) {
    auto s = settings;
    s.tol = accept_tol;
    const auto sol = lure::sdp::solve(prob, s);
    return sol.status == sdp::SolveStatus::Feasible;
}

}  // namespace

bool l2_feasible(const lmi::PerformancePlant& pp, double gamma, const PerformanceOptions& opts) {
    if (opts.channel == lmi::NonlinChannel::Disabled) {
        const auto lp = lmi::build_lifted_performance(pp, 0);
        return solve_accept(lmi::assemble_l2(lp, gamma, lmi::NonlinChannel::Disabled),
                            opts.solver, opts.accept_tol);
    }
    const auto shifted = shift_nonlinearity(pp, opts.alpha);
    if (!lti::is_schur(shifted.g)) throw UnstablePlant("plant is not Schur stable");
    const auto lp = lmi::build_lifted_performance(shifted, opts.ell);
    return solve_accept(lmi::assemble_l2(lp, gamma, lmi::NonlinChannel::Active), opts.solver,
                        opts.accept_tol);
}

bool h2_feasible(const lmi::PerformancePlant& pp, double Sigma, double gamma,
                 const PerformanceOptions& opts) {
    if (opts.channel == lmi::NonlinChannel::Disabled) {
        const auto lp = lmi::build_lifted_performance(pp, 0);
        return solve_accept(lmi::assemble_h2(lp, Sigma, gamma, lmi::NonlinChannel::Disabled),
                            opts.solver, opts.accept_tol);
    }
    const auto shifted = shift_nonlinearity(pp, opts.alpha);
    if (!lti::is_schur(shifted.g)) throw UnstablePlant("plant is not Schur stable");
    const auto lp = lmi::build_lifted_performance(shifted, opts.ell);
    return solve_accept(lmi::assemble_h2(lp, Sigma, gamma, lmi::NonlinChannel::Active),
                        opts.solver, opts.accept_tol);
}

namespace {

double bisect_min(const std::function<bool(double)>& feasible, double lo, double hi,
                  double tol) {
    if (!feasible(hi)) throw NoFeasiblePoint("infeasible at the upper bracket");
    if (feasible(lo)) return lo;
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        (feasible(mid) ? hi : lo) = mid;
    }
    return hi;
}

}  // namespace

double minimize_gain(const lmi::PerformancePlant& pp, double lo, double hi, double tol,
                     const PerformanceOptions& opts) {
    return bisect_min([&](double g) { return l2_feasible(pp, g, opts); }, lo, hi, tol);
}

double minimize_h2(const lmi::PerformancePlant& pp, double Sigma, double lo, double hi,
                   double tol, const PerformanceOptions& opts) {
    if (Sigma == 0.0) return 0.0;
    return bisect_min([&](double g) { return h2_feasible(pp, Sigma, g, opts); }, lo, hi, tol);
}

double hinf_norm_grid(const lmi::PerformancePlant& pp, int grid_size) {
    auto gain = [&](double theta) {
        const std::complex<double> z = std::polar(1.0, theta);
        const int n = pp.g.n();
        Eigen::MatrixXcd zIA =
            z * Eigen::MatrixXcd::Identity(n, n) - pp.g.A.cast<std::complex<double>>();
        const Eigen::VectorXcd x = zIA.partialPivLu().solve(pp.Bw.cast<std::complex<double>>());
        return std::abs((pp.Cz.cast<std::complex<double>>() * x)(0) + pp.Dzw);
    };
    double best = 0.0, best_theta = 0.0;
    for (int k = 0; k < grid_size; ++k) {
        const double theta = 2.0 * M_PI * k / grid_size;
        const double g = gain(theta);
        if (g > best) {
            best = g;
            best_theta = theta;
        }
    }
    // golden-section refinement around the best grid bin
    const double h = 2.0 * M_PI / grid_size;
    double a = best_theta - h, b = best_theta + h;
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - gr * (b - a), d = a + gr * (b - a);
    double fc = gain(c), fd = gain(d);
    for (int it = 0; it < 60; ++it) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = gain(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = gain(d);
        }
    }
    return std::max(best, std::max(fc, fd));
}

double h2_norm_lyapunov(const lmi::PerformancePlant& pp, double Sigma) {
    const int n = pp.g.n();
    // Q - A' Q A = Cz' Cz via a dense Kronecker solve
    Eigen::MatrixXd K = Eigen::MatrixXd::Identity(n * n, n * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            K.block(i * n, j * n, n, n) -= pp.g.A(j, i) * pp.g.A.transpose();
    const Eigen::MatrixXd Czz = pp.Cz.transpose() * pp.Cz;
    Eigen::VectorXd rhs(Eigen::Map<const Eigen::VectorXd>(Czz.data(), n * n));
    Eigen::VectorXd q = K.partialPivLu().solve(rhs);
    const Eigen::MatrixXd Q = Eigen::Map<Eigen::MatrixXd>(q.data(), n, n);
    const double val = Sigma * ((pp.Bw.transpose() * Q * pp.Bw)(0) + pp.Dzw * pp.Dzw);
    return std::sqrt(std::max(0.0, val));
}

}  // namespace lure::certify
