#include "lurecert/lifting.hpp"

#include <stdexcept>

namespace lure::lifting {

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> f_matrices(int ell) {
    Eigen::MatrixXd F = Eigen::MatrixXd::Zero(ell, ell + 1);
    Eigen::MatrixXd Fp = Eigen::MatrixXd::Zero(ell, ell + 1);
    F.leftCols(ell) = Eigen::MatrixXd::Identity(ell, ell);
    Fp.rightCols(ell) = Eigen::MatrixXd::Identity(ell, ell);
    return {F, Fp};
}

LiftedSystem build_lifted(const lti::StateSpace& ss, int ell) {
    if (ell < 0) throw std::invalid_argument("lifting dimension must be nonnegative");
    const int n = ss.n();
    const int nn = n + ell;
    LiftedSystem ls;
    ls.ell = ell;
    ls.n = n;

    ls.A = Eigen::MatrixXd::Zero(nn, nn);
    ls.B = Eigen::VectorXd::Zero(nn);
    ls.A.topLeftCorner(n, n) = ss.A;
    if (ell > 0) {
        ls.A.block(0, n, n, 1) = ss.B;                       // x_{t-ell+1} uses u_{t-ell}
        for (int i = 0; i + 1 < ell; ++i) ls.A(n + i, n + i + 1) = 1.0;  // history shift
        ls.B[nn - 1] = 1.0;                                  // append u_t
    } else {
        ls.B = ss.B;
    }

    const int k = ell + 1;
    ls.C = Eigen::MatrixXd::Zero(2 * k, nn);
    ls.D = Eigen::VectorXd::Zero(2 * k);
    // y rows, oldest first: y_{t-ell+r} = C x_{t-ell+r} + D u_{t-ell+r},
    // x_{t-ell+r} = A^r x_{t-ell} + sum_j A^{r-1-j} B u_{t-ell+j}
    Eigen::MatrixXd Ar = Eigen::MatrixXd::Identity(n, n);
    std::vector<Eigen::MatrixXd> powers(static_cast<std::size_t>(ell) + 1);
    for (int r = 0; r <= ell; ++r) {
        powers[static_cast<std::size_t>(r)] = Ar;
        Ar = ss.A * Ar;
    }
    for (int r = 0; r <= ell; ++r) {
        ls.C.block(r, 0, 1, n) = ss.C * powers[static_cast<std::size_t>(r)];
        for (int j = 0; j < r; ++j)
            ls.C(r, n + j) += (ss.C * powers[static_cast<std::size_t>(r - 1 - j)] * ss.B)(0);
        if (r < ell)
            ls.C(r, n + r) += ss.D;
        else
            ls.D[r] = ss.D;
    }
    // u rows, oldest first
    for (int r = 0; r <= ell; ++r) {
        if (r < ell)
            ls.C(k + r, n + r) = 1.0;
        else
            ls.D[k + r] = 1.0;
    }

    auto [F, Fp] = f_matrices(ell);
    ls.F = std::move(F);
    ls.Fplus = std::move(Fp);
    return ls;
}

SimResult simulate_lifted(const LiftedSystem& ls, const Eigen::VectorXd& xi0,
                          const Eigen::VectorXd& u) {
    if (xi0.size() != ls.dim())
        throw lti::DimensionMismatch("xi0 dimension does not match the lifted state");
    const int T = static_cast<int>(u.size());
    SimResult r;
    r.states.resize(T + 1, ls.dim());
    r.outputs.resize(T, 2 * ls.stack());
    Eigen::VectorXd xi = xi0;
    for (int t = 0; t < T; ++t) {
        r.states.row(t) = xi.transpose();
        r.outputs.row(t) = (ls.C * xi + ls.D * u[t]).transpose();
        xi = ls.A * xi + ls.B * u[t];
    }
    r.states.row(T) = xi.transpose();
    return r;
}

}  // namespace lure::lifting
