#pragma once

#include <Eigen/Dense>

#include <utility>

#include "lurecert/lti.hpp"

namespace lure::lifting {

/// State-space realization whose outputs stack the delayed plant signals
/// (y_{t-ell}, ..., y_t, u_{t-ell}, ..., u_t), oldest first, together with
/// the index-shift matrices F, Fplus acting on stacked function values.
///
/// Lifted state: xi_t = (x_{t-ell}, u_{t-ell}, ..., u_{t-1}), dimension
/// n + ell. All stacks in this codebase are oldest-first; F = [I | 0] and
/// Fplus = [0 | I] so that F * stack(t+1) = Fplus * stack(t).
struct LiftedSystem {
    Eigen::MatrixXd A;      // (n+ell) x (n+ell)
    Eigen::VectorXd B;      // n+ell
    Eigen::MatrixXd C;      // 2(ell+1) x (n+ell), rows: y-stack then u-stack
    Eigen::VectorXd D;      // 2(ell+1)
    Eigen::MatrixXd F;      // ell x (ell+1)
    Eigen::MatrixXd Fplus;  // ell x (ell+1)
    int ell = 0;
    int n = 0;

    int dim() const { return n + ell; }
    int stack() const { return ell + 1; }
};

LiftedSystem build_lifted(const lti::StateSpace& ss, int ell);

/// (F, Fplus) for a given lifting dimension; both are 0 x 1 when ell == 0.
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> f_matrices(int ell);

struct SimResult {
    Eigen::MatrixXd states;   // (T+1) x dim, row t = xi_t
    Eigen::MatrixXd outputs;  // T x 2(ell+1)
};

SimResult simulate_lifted(const LiftedSystem& ls, const Eigen::VectorXd& xi0,
                          const Eigen::VectorXd& u);

}  // namespace lure::lifting
