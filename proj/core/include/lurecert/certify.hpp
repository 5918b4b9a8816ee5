#pragma once

#include <Eigen/Dense>

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "lurecert/cones.hpp"
#include "lurecert/lmi.hpp"
#include "lurecert/lti.hpp"
#include "lurecert/pwl.hpp"
#include "lurecert/sdp.hpp"

namespace lure::certify {

struct UnstablePlant : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NoFeasiblePoint : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct FingerprintMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct IllPosedLoop : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Slope-restricted nonlinearity for trajectory validation: piecewise
/// linear, slopes in (0, alpha), phi(0) = 0, saturating (slope 0) outside
/// |y| <= 1e6 so the function class stays bounded.
struct PwlNonlinearity {
    pwl::MonotonePwl phi;
    double alpha = 0.0;

    static PwlNonlinearity random(std::mt19937_64& rng, double alpha);
};

enum class Method { Lifting, Zf };

const char* to_string(Method m);

struct Certificate {
    Method method = Method::Lifting;
    double alpha = 0.0;
    int ell = 0;
    int n_b = 0, n_f = 0;              // zf only
    std::string plant_fingerprint;
    std::string stacking = "oldest-first";

    Eigen::MatrixXd P;
    Eigen::VectorXd p;                 // lifting; dimension ell
    cones::Multiplier M1, M2;          // lifting
    Eigen::VectorXd taps;              // zf: taps[i] = pi_{i - n_f}, s in [-n_f, n_b]

    double worst_psd_residual = 0.0;
    double worst_linear_residual = 0.0;
};

void save_certificate(const Certificate& cert, const std::string& path);
Certificate load_certificate(const std::string& path);
std::string certificate_to_json(const Certificate& cert);
Certificate certificate_from_json(const std::string& text);

struct CertifyOptions {
    sdp::Settings solver = sdp::default_settings();
    bool p_zero = false;       // force the linear Lyapunov term to zero
    bool balance = true;       // internal Gramian balancing (exactly equivalent)
    double accept_tol = 1e-7;  // residual acceptance for produced certificates
    double zf_eps_scale = 1e-7;
};

struct CertifyOutcome {
    sdp::SolveStatus status = sdp::SolveStatus::Infeasible;
    std::optional<Certificate> certificate;

    bool feasible() const { return certificate.has_value(); }
};

/// Feasibility of the lifting LMI (Theorem-1 system) at a given sector bound.
CertifyOutcome certify_alpha(const lti::Plant& plant, double alpha, int ell,
                             Method method = Method::Lifting,
                             const CertifyOptions& opts = {});

/// Zames-Falb baseline at given tap counts; the lifting dimension is
/// max(n_b, n_f).
CertifyOutcome certify_alpha_zf(const lti::Plant& plant, double alpha, int n_b,
                                int n_f, const CertifyOptions& opts = {});

struct BisectOptions {
    double lo = 1e-3;
    double hi = 1.0;
    double tol = 1e-4;
    double hi_cap_factor = 65536.0;  // bracket expansion cap: lo * factor
};

struct BisectResult {
    double value = 0.0;  // alpha*, rho* or gamma*
    Certificate certificate;
    int solve_count = 0;
};

/// Largest alpha (within tol) whose certification is feasible; doubles the
/// upper bracket until infeasible. Throws NoFeasiblePoint when lo fails.
BisectResult maximize_alpha(const lti::Plant& plant, int ell, Method method = Method::Lifting,
                            const BisectOptions& bopts = {}, const CertifyOptions& copts = {},
                            int n_b = 0, int n_f = 0);

/// Smallest certifiable exponential rate rho in (0, 1] at a fixed alpha.
BisectResult minimize_rate(const lti::Plant& plant, double alpha, int ell,
                           double tol = 1e-4, const CertifyOptions& copts = {});

struct TrajectoryOptions {
    int nonlinearities = 100;
    int initial_states = 10;
    int horizon = 200;
    std::uint64_t seed = 20260810;
    double x0_scale = 1.0;
};

struct ValidationItem {
    std::string name;
    bool pass;
    double value;     // measured residual / violation
    double tolerance;
};

struct ValidationReport {
    bool pass = true;
    std::vector<ValidationItem> items;
    std::string first_failure;

    void add(const std::string& name, double value, double tol);
};

/// Re-assembles the LMIs and checks residuals at `tol`; checks dual-cone
/// membership at `cone_tol`; runs trajectory validation (V non-increasing
/// and V >= ||xi||^2 for lifting, endpoint energy decrease for zf).
/// Trajectory violations are accepted up to tol * (1 + ||(xi,u)||^2).
ValidationReport validate_certificate(const lti::Plant& plant, const Certificate& cert,
                                      double tol, double cone_tol,
                                      const TrajectoryOptions& traj = {});

struct ClosedLoopTrace {
    Eigen::MatrixXd x;  // (T+1) x n
    Eigen::VectorXd y;  // T
    Eigen::VectorXd u;  // T, u = -phi(y)
};

/// Negative-feedback loop u = -phi(y). A direct-feedthrough loop
/// y = Cx + D u is resolved to 1e-12 by monotone bracketing.
ClosedLoopTrace simulate_closed_loop(const lti::StateSpace& g, const PwlNonlinearity& phi,
                                     const Eigen::VectorXd& x0, int T);

struct EnergyTrace {
    Eigen::VectorXd V;         // V_t for t = ell..T-1
    Eigen::VectorXd xi_norm2;  // ||xi_t||^2 (weighted when requested)
    int t0 = 0;                // = ell
};

/// Simulates the original loop, transforms to the shifted monotone pairs
/// (util = -phi(y), ytil = phi(y) - alpha*y, exact transformed potential),
/// and evaluates V_t = xi_t' P xi_t + p' F ftil-stack along the lifted state.
EnergyTrace lifted_trace(const Certificate& cert, const lti::Plant& plant, double alpha,
                         const PwlNonlinearity& phi, const Eigen::VectorXd& x0, int T);

/// Frequency-domain check Re{Pi(e^{j theta}) H(e^{j theta})} < 0 on a
/// uniform grid, H the shifted plant.
bool fdi_check(const Eigen::VectorXd& taps, int n_b, int n_f, const lti::StateSpace& shifted,
               int grid_size);

// ---- performance extensions -------------------------------------------

struct PerformanceOptions {
    double alpha = 1.0;   // sector bound for the nonlinearity channel
    int ell = 1;
    lmi::NonlinChannel channel = lmi::NonlinChannel::Active;
    sdp::Settings solver = sdp::default_settings();
    double accept_tol = 1e-7;
};

bool l2_feasible(const lmi::PerformancePlant& pp, double gamma, const PerformanceOptions& opts);
bool h2_feasible(const lmi::PerformancePlant& pp, double Sigma, double gamma,
                 const PerformanceOptions& opts);

/// Bisection for the smallest feasible gamma in [lo, hi].
double minimize_gain(const lmi::PerformancePlant& pp, double lo, double hi, double tol,
                     const PerformanceOptions& opts);
double minimize_h2(const lmi::PerformancePlant& pp, double Sigma, double lo, double hi,
                   double tol, const PerformanceOptions& opts);

/// Test oracles for the LTI channel (no nonlinearity).
double hinf_norm_grid(const lmi::PerformancePlant& pp, int grid_size = 8192);
double h2_norm_lyapunov(const lmi::PerformancePlant& pp, double Sigma);

}  // namespace lure::certify
