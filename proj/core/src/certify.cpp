#include "lurecert/certify.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>

#include "lurecert/lifting.hpp"
#include "lurecert/svec.hpp"

namespace lure::certify {

const char* to_string(Method m) { return m == Method::Lifting ? "lifting" : "zf"; }

PwlNonlinearity PwlNonlinearity::random(std::mt19937_64& rng, double alpha) {
    // slopes strictly inside (0, alpha); slope 0 outside |y| <= 1e6 keeps the
    // class bounded without affecting desk-scale trajectories
    std::uniform_int_distribution<int> nb_dist(0, 5);
    std::uniform_real_distribution<double> b_dist(-3.0, 3.0);
    std::uniform_real_distribution<double> s_dist(0.02 * alpha, 0.97 * alpha);
    const int nb = nb_dist(rng);
    std::vector<double> b(static_cast<std::size_t>(nb));
    for (auto& v : b) v = b_dist(rng);
    std::sort(b.begin(), b.end());
    b.erase(std::unique(b.begin(), b.end()), b.end());
    std::vector<double> s(b.size() + 1);
    for (auto& v : s) v = s_dist(rng);
    b.insert(b.begin(), -1e6);
    b.push_back(1e6);
    s.insert(s.begin(), 0.0);
    s.push_back(0.0);
    return PwlNonlinearity{pwl::MonotonePwl(std::move(b), std::move(s)), alpha};
}

namespace {

Eigen::MatrixXd kron(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
    Eigen::MatrixXd K(A.rows() * B.rows(), A.cols() * B.cols());
    for (Eigen::Index i = 0; i < A.rows(); ++i)
        for (Eigen::Index j = 0; j < A.cols(); ++j)
            K.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
    return K;
}

// X with X - M X M^T = C (M Schur)
Eigen::MatrixXd dlyap(const Eigen::MatrixXd& M, const Eigen::MatrixXd& C) {
    const Eigen::Index n = M.rows();
    const Eigen::MatrixXd K =
        Eigen::MatrixXd::Identity(n * n, n * n) - kron(M, M);
    Eigen::VectorXd c(Eigen::Map<const Eigen::VectorXd>(C.data(), n * n));
    Eigen::VectorXd x = K.partialPivLu().solve(c);
    return Eigen::Map<Eigen::MatrixXd>(x.data(), n, n);
}

// Gramian balancing transform x = T xhat for a Schur (A, B, C).
Eigen::MatrixXd balancing_transform(const lti::StateSpace& ss) {
    const int n = ss.n();
    if (n == 0) return Eigen::MatrixXd::Identity(0, 0);
    Eigen::MatrixXd Wc = dlyap(ss.A, ss.B * ss.B.transpose());
    Eigen::MatrixXd Wo = dlyap(ss.A.transpose(), ss.C.transpose() * ss.C);
    const double ridge = 1e-12 * (1.0 + Wc.trace() / n);
    Wc += ridge * Eigen::MatrixXd::Identity(n, n);
    Eigen::LLT<Eigen::MatrixXd> llt(Wc);
    if (llt.info() != Eigen::Success) return Eigen::MatrixXd::Identity(n, n);
    const Eigen::MatrixXd L = llt.matrixL();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(L.transpose() * Wo * L);
    if (es.info() != Eigen::Success) return Eigen::MatrixXd::Identity(n, n);
    Eigen::VectorXd lam = es.eigenvalues().cwiseMax(0.0);  // ascending
    const double floor_ = 1e-16 * (1.0 + lam.maxCoeff());
    Eigen::VectorXd scale(n);
    for (int i = 0; i < n; ++i) scale[i] = std::pow(std::max(lam[i], floor_), -0.25);
    return L * es.eigenvectors() * scale.asDiagonal();
}

struct BalancedSetup {
    lti::StateSpace shifted;    // balanced coordinates
    Eigen::MatrixXd T;          // plant-level transform, x = T xhat
    Eigen::MatrixXd weight;     // exact transform of the lifted identity
    Eigen::MatrixXd lift_T;     // blkdiag(T, I_ell)
};

BalancedSetup balanced_setup(const lti::StateSpace& shifted, int ell, bool balance) {
    BalancedSetup s;
    const int n = shifted.n();
    s.T = balance ? balancing_transform(shifted) : Eigen::MatrixXd::Identity(n, n);
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(s.T);
    s.shifted.A = lu.solve(shifted.A * s.T);
    s.shifted.B = lu.solve(shifted.B);
    s.shifted.C = shifted.C * s.T;
    s.shifted.D = shifted.D;
    const int nn = n + ell;
    s.weight = Eigen::MatrixXd::Identity(nn, nn);
    s.weight.topLeftCorner(n, n) = s.T.transpose() * s.T;
    s.lift_T = Eigen::MatrixXd::Identity(nn, nn);
    s.lift_T.topLeftCorner(n, n) = s.T;
    return s;
}

// Back-transform the lifted Lyapunov matrix to canonical coordinates.
Eigen::MatrixXd unbalance_P(const Eigen::MatrixXd& P_hat, const Eigen::MatrixXd& lift_T) {
    const Eigen::MatrixXd Ti = lift_T.partialPivLu().inverse();
    Eigen::MatrixXd P = Ti.transpose() * P_hat * Ti;
    return 0.5 * (P + P.transpose());
}

lmi::Values certificate_values(const Certificate& cert) {
    lmi::Values v;
    v["P"] = cert.P;
    if (cert.method == Method::Lifting) {
        if (cert.ell > 0) v["p"] = cert.p;
        v["M1"] = cert.M1.M;
        v["m1"] = cert.M1.m;
        v["M2"] = cert.M2.M;
        v["m2"] = cert.M2.m;
    } else {
        v["taps"] = cert.taps;
    }
    return v;
}

lmi::LmiProblem canonical_problem(const lti::Plant& plant, const Certificate& cert,
                                  double zf_eps) {
    const lti::StateSpace shifted = lti::loop_shift(plant.ss, cert.alpha);
    const auto ls = lifting::build_lifted(shifted, cert.ell);
    if (cert.method == Method::Lifting) return lmi::assemble_theorem1(ls);
    return lmi::assemble_zf(ls, cert.n_b, cert.n_f, zf_eps);
}

}  // namespace

CertifyOutcome certify_alpha(const lti::Plant& plant, double alpha, int ell, Method method,
                             const CertifyOptions& opts) {
    if (method == Method::Zf) return certify_alpha_zf(plant, alpha, ell, ell, opts);
    if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
    const lti::StateSpace shifted = lti::loop_shift(plant.ss, alpha);
    if (!lti::is_schur(shifted))
        throw UnstablePlant("shifted plant is not Schur stable");

    const auto setup = balanced_setup(shifted, ell, opts.balance);
    const auto ls = lifting::build_lifted(setup.shifted, ell);
    lmi::Theorem1Options topts;
    topts.p_zero = opts.p_zero;
    topts.state_weight = setup.weight;
    const auto prob = lmi::assemble_theorem1(ls, topts);
    const auto sol = lure::sdp::solve(prob, opts.solver);

    CertifyOutcome out;
    out.status = sol.status;
    if (sol.status != sdp::SolveStatus::Feasible) return out;

    Certificate cert;
    cert.method = Method::Lifting;
    cert.alpha = alpha;
    cert.ell = ell;
    cert.plant_fingerprint = plant.fingerprint;
    cert.P = unbalance_P(sol.values.at("P"), setup.lift_T);
    cert.p = ell > 0 ? Eigen::VectorXd(sol.values.at("p")) : Eigen::VectorXd(0);
    cert.M1 = {sol.values.at("M1"), sol.values.at("m1")};
    cert.M2 = {sol.values.at("M2"), sol.values.at("m2")};

    // the certificate must stand on its own in canonical coordinates
    const auto canon = canonical_problem(plant, cert, 0.0);
    const auto rep = sdp::residuals(canon, certificate_values(cert));
    if (!rep.pass(opts.accept_tol)) {
        out.status = sdp::SolveStatus::Inaccurate;
        return out;
    }
    cert.worst_psd_residual = rep.worst_psd;
    cert.worst_linear_residual = rep.worst_linear;
    out.certificate = std::move(cert);
    return out;
}

CertifyOutcome certify_alpha_zf(const lti::Plant& plant, double alpha, int n_b, int n_f,
                                const CertifyOptions& opts) {
    if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
    const lti::StateSpace shifted = lti::loop_shift(plant.ss, alpha);
    if (!lti::is_schur(shifted))
        throw UnstablePlant("shifted plant is not Schur stable");
    const int ell = std::max(n_b, n_f);
    const auto ls = lifting::build_lifted(shifted, ell);
    const double eps = opts.zf_eps_scale * (1.0 + ls.A.norm());
    const auto prob = lmi::assemble_zf(ls, n_b, n_f, eps);
    const auto sol = lure::sdp::solve(prob, opts.solver);

    CertifyOutcome out;
    out.status = sol.status;
    if (sol.status != sdp::SolveStatus::Feasible) return out;

    Certificate cert;
    cert.method = Method::Zf;
    cert.alpha = alpha;
    cert.ell = ell;
    cert.n_b = n_b;
    cert.n_f = n_f;
    cert.plant_fingerprint = plant.fingerprint;
    cert.P = sol.values.at("P");
    cert.taps = sol.values.at("taps");
    cert.worst_psd_residual = sol.residuals.worst_psd;
    cert.worst_linear_residual = sol.residuals.worst_linear;
    out.certificate = std::move(cert);
    return out;
}

namespace {

CertifyOutcome run_case(const lti::Plant& plant, double alpha, int ell, Method method,
                        int n_b, int n_f, const CertifyOptions& copts) {
    if (method == Method::Zf) return certify_alpha_zf(plant, alpha, n_b, n_f, copts);
    return certify_alpha(plant, alpha, ell, Method::Lifting, copts);
}

}  // namespace

BisectResult maximize_alpha(const lti::Plant& plant, int ell, Method method,
                            const BisectOptions& bopts, const CertifyOptions& copts,
                            int n_b, int n_f) {
    if (method == Method::Zf && n_b == 0 && n_f == 0) {
        n_b = ell;
        n_f = ell;
    }
    auto feasible = [&](double a) { return run_case(plant, a, ell, method, n_b, n_f, copts); };

    double lo = bopts.lo;
    auto lo_out = feasible(lo);
    if (!lo_out.feasible())
        throw NoFeasiblePoint("infeasible at the lower bracket alpha = " + std::to_string(lo));
    BisectResult res;
    res.certificate = *lo_out.certificate;
    res.solve_count = 1;

    double hi = std::max(bopts.hi, lo * 2.0);
    const double cap = bopts.lo * bopts.hi_cap_factor;
    while (true) {
        auto out = feasible(hi);
        ++res.solve_count;
        if (out.feasible()) {
            lo = hi;
            res.certificate = *out.certificate;
            if (hi >= cap) {  // give up expanding; report the cap
                res.value = lo;
                return res;
            }
            hi *= 2.0;
        } else {
            break;
        }
    }
    while (hi - lo > bopts.tol) {
        const double mid = 0.5 * (lo + hi);
        auto out = feasible(mid);
        ++res.solve_count;
        if (out.feasible()) {
            lo = mid;
            res.certificate = *out.certificate;
        } else {
            hi = mid;
        }
    }
    res.value = lo;
    return res;
}

BisectResult minimize_rate(const lti::Plant& plant, double alpha, int ell, double tol,
                           const CertifyOptions& copts) {
    const lti::StateSpace shifted = lti::loop_shift(plant.ss, alpha);
    if (!lti::is_schur(shifted))
        throw UnstablePlant("shifted plant is not Schur stable");

    auto feasible_at = [&](double rho) -> CertifyOutcome {
        const auto setup = balanced_setup(shifted, ell, copts.balance);
        const auto ls = lifting::build_lifted(setup.shifted, ell);
        lmi::Theorem1Options topts;
        topts.p_zero = copts.p_zero;
        topts.state_weight = setup.weight;
        const auto prob = lmi::assemble_rate(ls, rho, topts);
        const auto sol = lure::sdp::solve(prob, copts.solver);
        CertifyOutcome out;
        out.status = sol.status;
        if (sol.status != sdp::SolveStatus::Feasible) return out;
        Certificate cert;
        cert.method = Method::Lifting;
        cert.alpha = alpha;
        cert.ell = ell;
        cert.plant_fingerprint = plant.fingerprint;
        cert.P = unbalance_P(sol.values.at("P"), setup.lift_T);
        cert.p = ell > 0 ? Eigen::VectorXd(sol.values.at("p")) : Eigen::VectorXd(0);
        cert.M1 = {sol.values.at("M1"), sol.values.at("m1")};
        cert.M2 = {sol.values.at("M2"), sol.values.at("m2")};
        cert.worst_psd_residual = sol.residuals.worst_psd;
        cert.worst_linear_residual = sol.residuals.worst_linear;
        out.certificate = std::move(cert);
        return out;
    };

    auto hi_out = feasible_at(1.0);
    if (!hi_out.feasible())
        throw NoFeasiblePoint("rate certification infeasible at rho = 1");
    BisectResult res;
    res.certificate = *hi_out.certificate;
    res.solve_count = 1;
    double lo = 0.0, hi = 1.0;
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        auto out = feasible_at(mid);
        ++res.solve_count;
        if (out.feasible()) {
            hi = mid;
            res.certificate = *out.certificate;
        } else {
            lo = mid;
        }
    }
    res.value = hi;
    return res;
}

ClosedLoopTrace simulate_closed_loop(const lti::StateSpace& g, const PwlNonlinearity& phi,
                                     const Eigen::VectorXd& x0, int T) {
    if (x0.size() != g.n()) throw lti::DimensionMismatch("x0 does not match the plant");
    if (g.D < 0.0 && 1.0 + g.D * phi.phi.max_slope() <= 0.0)
        throw IllPosedLoop("algebraic loop residual is not strictly increasing");
    ClosedLoopTrace tr;
    tr.x.resize(T + 1, g.n());
    tr.y.resize(T);
    tr.u.resize(T);
    Eigen::VectorXd x = x0;
    for (int t = 0; t < T; ++t) {
        tr.x.row(t) = x.transpose();
        const double cx = (g.C * x)(0);
        double y;
        if (g.D == 0.0) {
            y = cx;
        } else {
            // solve y + D*phi(y) = cx by monotone bracketing
            auto gfun = [&](double yy) { return yy + g.D * phi.phi.value(yy) - cx; };
            double loy = cx, hiy = cx, step = 1.0 + std::abs(cx);
            while (gfun(loy) > 0.0) loy -= step, step *= 2.0;
            step = 1.0 + std::abs(cx);
            while (gfun(hiy) < 0.0) hiy += step, step *= 2.0;
            for (int it = 0; it < 200 && hiy - loy > 1e-12 * (1.0 + std::abs(hiy)); ++it) {
                const double mid = 0.5 * (loy + hiy);
                (gfun(mid) < 0.0 ? loy : hiy) = mid;
            }
            y = 0.5 * (loy + hiy);
        }
        const double u = -phi.phi.value(y);
        tr.y[t] = y;
        tr.u[t] = u;
        x = g.A * x + g.B * u;
    }
    tr.x.row(T) = x.transpose();
    return tr;
}

EnergyTrace lifted_trace(const Certificate& cert, const lti::Plant& plant, double alpha,
                         const PwlNonlinearity& phi, const Eigen::VectorXd& x0, int T) {
    const int ell = cert.ell;
    const int n = plant.ss.n();
    const auto tr = simulate_closed_loop(plant.ss, phi, x0, T);
    const auto phit = phi.phi.loop_shift_transform(alpha);

    Eigen::VectorXd util(T), ftil(T);
    for (int t = 0; t < T; ++t) {
        const double phiy = phi.phi.value(tr.y[t]);
        util[t] = -phiy;  // equals the plant input
        ftil[t] = phit.potential(phiy - alpha * tr.y[t]);
    }

    EnergyTrace et;
    et.t0 = ell;
    const int count = T - ell;
    et.V.resize(count);
    et.xi_norm2.resize(count);
    Eigen::VectorXd xi(n + ell);
    for (int t = ell; t < T; ++t) {
        xi.head(n) = tr.x.row(t - ell).transpose();
        for (int j = 0; j < ell; ++j) xi[n + j] = util[t - ell + j];
        double V = xi.dot(cert.P * xi);
        if (cert.method == Method::Lifting && ell > 0)
            for (int j = 0; j < ell; ++j) V += cert.p[j] * ftil[t - ell + j];
        et.V[t - ell] = V;
        et.xi_norm2[t - ell] = xi.squaredNorm();
    }
    return et;
}

bool fdi_check(const Eigen::VectorXd& taps, int n_b, int n_f, const lti::StateSpace& shifted,
               int grid_size) {
    using cd = std::complex<double>;
    for (int k = 0; k < grid_size; ++k) {
        const double theta = 2.0 * M_PI * k / grid_size;
        const cd z = std::polar(1.0, theta);
        cd pi_z = 0.0;
        for (int s = -n_f; s <= n_b; ++s)
            pi_z += taps[s + n_f] * std::pow(z, cd(-s, 0.0));
        const cd h = lti::eval(shifted, z);
        if ((pi_z * h).real() >= 0.0) return false;
    }
    return true;
}

void ValidationReport::add(const std::string& name, double value, double tol) {
    const bool ok = value <= tol;
    items.push_back({name, ok, value, tol});
    if (!ok && pass) {
        pass = false;
        first_failure = name;
    } else if (!ok) {
        pass = false;
    }
}

ValidationReport validate_certificate(const lti::Plant& plant, const Certificate& cert,
                                      double tol, double cone_tol,
                                      const TrajectoryOptions& traj) {
    if (cert.plant_fingerprint != plant.fingerprint)
        throw FingerprintMismatch("certificate does not match this plant");
    ValidationReport rep;

    const double zf_eps = 1e-12;  // validation re-checks the unshifted blocks
    const auto prob = canonical_problem(plant, cert, zf_eps);
    const auto res = sdp::residuals(prob, certificate_values(cert));
    for (const auto& e : res.entries)
        if (e.is_psd) rep.add("residual/" + e.label, e.value, tol);
    rep.add("residual/linear_worst", res.worst_linear, tol);

    if (cert.method == Method::Lifting) {
        rep.add("dual_cone/M1", cones::dual_cone_violation(cert.M1), cone_tol);
        rep.add("dual_cone/M2", cones::dual_cone_violation(cert.M2), cone_tol);
    } else {
        Eigen::VectorXd all_taps = cert.taps;
        double off_max = 0.0, sum = all_taps.sum();
        for (int i = 0; i < all_taps.size(); ++i)
            if (i != cert.n_f) off_max = std::max(off_max, all_taps[i]);
        rep.add("taps/off_origin_sign", off_max, tol);
        rep.add("taps/sum_nonneg", -sum, tol);
    }

    // trajectory validation on random slope-restricted nonlinearities
    std::mt19937_64 rng(traj.seed);
    std::normal_distribution<double> xdist(0.0, traj.x0_scale);
    double worst_decrease = -std::numeric_limits<double>::infinity();
    double worst_positivity = -std::numeric_limits<double>::infinity();
    double worst_endpoint = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < traj.nonlinearities; ++i) {
        const auto phi = PwlNonlinearity::random(rng, cert.alpha);
        for (int j = 0; j < traj.initial_states; ++j) {
            Eigen::VectorXd x0(plant.ss.n());
            for (int k = 0; k < x0.size(); ++k) x0[k] = xdist(rng);
            const auto et = lifted_trace(cert, plant, cert.alpha, phi, x0, traj.horizon);
            const auto scale = [&](int t) { return 1.0 + et.xi_norm2[t]; };
            if (cert.method == Method::Lifting) {
                for (int t = 0; t + 1 < et.V.size(); ++t)
                    worst_decrease =
                        std::max(worst_decrease, (et.V[t + 1] - et.V[t]) / scale(t));
                for (int t = 0; t < et.V.size(); ++t)
                    worst_positivity =
                        std::max(worst_positivity, (et.xi_norm2[t] - et.V[t]) / scale(t));
            } else {
                const int last = static_cast<int>(et.V.size()) - 1;
                if (last >= 0)
                    worst_endpoint = std::max(
                        worst_endpoint, (et.V[last] - et.V[0]) / (1.0 + et.xi_norm2[0]));
            }
        }
    }
    if (traj.nonlinearities > 0 && traj.initial_states > 0) {
        if (cert.method == Method::Lifting) {
            rep.add("trajectory/V_decrease", worst_decrease, tol);
            rep.add("trajectory/V_dominates_state", worst_positivity, tol);
        } else {
            rep.add("trajectory/endpoint_energy", worst_endpoint, tol);
        }
    }
    return rep;
}

}  // namespace lure::certify
