#include "lurecert/cones.hpp"

#include <limits>
#include <stdexcept>

#include "lurecert/lti.hpp"
#include "lurecert/pwl.hpp"

namespace lure::cones {

bool check_interpolable(const InterpData& d, double tol) {
    const auto k = d.y.size();
    if (d.u.size() != k || d.f.size() != k)
        throw lti::DimensionMismatch("interpolation data lengths differ");
    for (Eigen::Index i = 0; i < k; ++i) {
        if (d.f[i] < -tol) return false;
        if (d.u[i] * d.y[i] < d.f[i] - tol) return false;
        for (Eigen::Index j = 0; j < k; ++j)
            if (d.f[i] < d.f[j] + d.u[j] * (d.y[i] - d.y[j]) - tol) return false;
    }
    return true;
}

bool is_doubly_hyperdominant(const Eigen::MatrixXd& M, double tol) {
    const auto k = M.rows();
    if (M.cols() != k) throw lti::DimensionMismatch("matrix must be square");
    for (Eigen::Index i = 0; i < k; ++i)
        for (Eigen::Index j = 0; j < k; ++j)
            if (i != j && M(i, j) > tol) return false;
    if ((M.rowwise().sum().array() < -tol).any()) return false;
    if ((M.colwise().sum().array() < -tol).any()) return false;
    return true;
}

double dual_cone_violation(const Multiplier& mult) {
    const auto k = mult.M.rows();
    if (mult.M.cols() != k || mult.m.size() != k)
        throw lti::DimensionMismatch("multiplier dimensions are inconsistent");
    double worst = -std::numeric_limits<double>::infinity();
    worst = std::max(worst, -mult.M.rowwise().sum().minCoeff());
    worst = std::max(worst, -(mult.M.colwise().sum().transpose() + mult.m).minCoeff());
    for (Eigen::Index i = 0; i < k; ++i)
        for (Eigen::Index j = 0; j < k; ++j)
            if (i != j) worst = std::max(worst, mult.M(i, j));
    return worst;
}

bool in_dual_cone(const Multiplier& mult, double tol) {
    return dual_cone_violation(mult) <= tol;
}

double quad_linear_value(const Multiplier& mult, const InterpData& d) {
    const auto k = mult.M.rows();
    if (d.y.size() != k || d.u.size() != k || d.f.size() != k)
        throw lti::DimensionMismatch("data length does not match the multiplier");
    return d.u.dot(mult.M * d.y) + mult.m.dot(d.f);
}

std::vector<MultiplierConstraint> dual_cone_constraints(int ell) {
    const int k = ell + 1;
    std::vector<MultiplierConstraint> out;
    out.reserve(static_cast<std::size_t>(2 * k + k * ell));
    for (int i = 0; i < k; ++i) {  // -(row sum) <= 0
        MultiplierConstraint c;
        c.M_coeff = Eigen::MatrixXd::Zero(k, k);
        c.M_coeff.row(i).setConstant(-1.0);
        c.m_coeff = Eigen::VectorXd::Zero(k);
        c.label = "dual_cone_row_sum[" + std::to_string(i) + "]";
        out.push_back(std::move(c));
    }
    for (int j = 0; j < k; ++j) {  // -(col sum + m_j) <= 0
        MultiplierConstraint c;
        c.M_coeff = Eigen::MatrixXd::Zero(k, k);
        c.M_coeff.col(j).setConstant(-1.0);
        c.m_coeff = Eigen::VectorXd::Zero(k);
        c.m_coeff[j] = -1.0;
        c.label = "dual_cone_col_sum[" + std::to_string(j) + "]";
        out.push_back(std::move(c));
    }
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) {
            if (i == j) continue;
            MultiplierConstraint c;
            c.M_coeff = Eigen::MatrixXd::Zero(k, k);
            c.M_coeff(i, j) = 1.0;
            c.m_coeff = Eigen::VectorXd::Zero(k);
            c.label = "dual_cone_sign[" + std::to_string(i) + "," + std::to_string(j) + "]";
            out.push_back(std::move(c));
        }
    return out;
}

Multiplier DualConeWitness::to_multiplier() const {
    const auto k = Lambda.rows();
    const Eigen::VectorXd col_sums = Lambda.colwise().sum().transpose();  // Lambda^T 1
    Multiplier mult;
    mult.M = Eigen::MatrixXd(col_sums.asDiagonal());
    mult.M -= Lambda.transpose();
    mult.M += Eigen::MatrixXd(gamma.asDiagonal());
    mult.m = (Lambda - Lambda.transpose()) * Eigen::VectorXd::Ones(k) - gamma + delta;
    return mult;
}

DualConeWitness DualConeWitness::random(std::mt19937_64& rng, int size) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    DualConeWitness w;
    w.Lambda = Eigen::MatrixXd::Zero(size, size);
    for (int i = 0; i < size; ++i)
        for (int j = 0; j < size; ++j)
            if (i != j) w.Lambda(i, j) = u(rng);
    w.gamma = Eigen::VectorXd::Zero(size);
    w.delta = Eigen::VectorXd::Zero(size);
    for (int i = 0; i < size; ++i) w.gamma[i] = u(rng);
    for (int i = 0; i < size; ++i) w.delta[i] = u(rng);
    return w;
}

InterpData sample_interpolable(int ell, double slope_max, std::uint64_t rng_seed) {
    if (slope_max <= 0.0) throw std::invalid_argument("slope_max must be positive");
    std::mt19937_64 rng(rng_seed);
    auto f = pwl::MonotonePwl::random(rng, 4, 0.0, slope_max, 3.0);
    const int k = ell + 1;
    std::uniform_real_distribution<double> y_dist(-3.0, 3.0);
    InterpData d;
    d.y.resize(k);
    d.u.resize(k);
    d.f.resize(k);
    for (int i = 0; i < k; ++i) {
        d.y[i] = y_dist(rng);
        d.u[i] = f.value(d.y[i]);
        d.f[i] = f.potential(d.y[i]);
    }
    return d;
}

}  // namespace lure::cones
