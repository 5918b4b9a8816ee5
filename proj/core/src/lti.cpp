#include "lurecert/lti.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace lure::lti {

TransferFunction tf_from_coeffs(std::vector<double> num, std::vector<double> den) {
    // strip leading zeros
    auto strip = [](std::vector<double>& c) {
        std::size_t i = 0;
        while (i + 1 < c.size() && c[i] == 0.0) ++i;
        c.erase(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(i));
    };
    if (den.empty()) throw ZeroDenominator("denominator is empty");
    strip(den);
    if (den.size() == 1 && den[0] == 0.0) throw ZeroDenominator("denominator is zero");
    if (den[0] == 0.0) throw ZeroDenominator("denominator leading coefficient is zero");
    if (num.empty()) num = {0.0};
    strip(num);
    if (num.size() > den.size())
        throw ImproperTransferFunction("deg(num) > deg(den)");
    const double lead = den[0];
    for (auto& c : den) c /= lead;
    for (auto& c : num) c /= lead;
    return TransferFunction{std::move(num), std::move(den)};
}

StateSpace tf_to_ss(const TransferFunction& tf) {
    const int n = tf.degree();
    // pad numerator to length n+1
    Eigen::VectorXd num = Eigen::VectorXd::Zero(n + 1);
    const int off = n + 1 - static_cast<int>(tf.num.size());
    for (std::size_t i = 0; i < tf.num.size(); ++i) num[off + static_cast<int>(i)] = tf.num[i];

    StateSpace ss;
    ss.A = Eigen::MatrixXd::Zero(n, n);
    ss.B = Eigen::VectorXd::Zero(n);
    ss.C = Eigen::RowVectorXd::Zero(n);
    ss.D = num[0];  // nonzero only when deg(num) == deg(den)
    if (n == 0) return ss;

    for (int j = 0; j < n; ++j) ss.A(0, j) = -tf.den[static_cast<std::size_t>(j + 1)];
    for (int i = 1; i < n; ++i) ss.A(i, i - 1) = 1.0;
    ss.B[0] = 1.0;
    for (int j = 0; j < n; ++j)
        ss.C[j] = num[j + 1] - ss.D * tf.den[static_cast<std::size_t>(j + 1)];
    return ss;
}

namespace {

std::complex<double> polyval(const std::vector<double>& c, std::complex<double> z) {
    std::complex<double> acc = 0.0;
    for (double ci : c) acc = acc * z + ci;
    return acc;
}

constexpr double kPoleTol = 1e-12;

}  // namespace

std::complex<double> eval(const TransferFunction& tf, std::complex<double> z) {
    const auto den = polyval(tf.den, z);
    const double scale = std::pow(std::max(1.0, std::abs(z)), tf.degree());
    if (std::abs(den) < kPoleTol * (1.0 + scale))
        throw SingularAtZ("evaluation point is a pole");
    return polyval(tf.num, z) / den;
}

std::complex<double> eval(const StateSpace& ss, std::complex<double> z) {
    const int n = ss.n();
    if (n == 0) return {ss.D, 0.0};
    Eigen::VectorXcd eigs = ss.A.eigenvalues();
    for (int i = 0; i < n; ++i)
        if (std::abs(z - eigs[i]) < kPoleTol * (1.0 + std::abs(z)))
            throw SingularAtZ("evaluation point is an eigenvalue of A");
    Eigen::MatrixXcd zIA = z * Eigen::MatrixXcd::Identity(n, n) - ss.A.cast<std::complex<double>>();
    Eigen::VectorXcd x = zIA.partialPivLu().solve(ss.B.cast<std::complex<double>>());
    return (ss.C.cast<std::complex<double>>() * x)(0) + ss.D;
}

double spectral_radius(const Eigen::MatrixXd& A) {
    if (A.rows() == 0) return 0.0;
    return A.eigenvalues().cwiseAbs().maxCoeff();
}

bool is_schur(const StateSpace& ss, double tol) {
    return spectral_radius(ss.A) < 1.0 - tol;
}

StateSpace loop_shift(const StateSpace& g, double alpha) {
    StateSpace h = g;
    h.C = -alpha * g.C;
    h.D = -1.0 - alpha * g.D;
    return h;
}

StateSpace loop_shift(const TransferFunction& g, double alpha) {
    return loop_shift(tf_to_ss(g), alpha);
}

}  // namespace lure::lti
