#pragma once

#include <Eigen/Dense>

namespace lure {

/// Scaled upper-triangular vectorization: column-major upper triangle with
/// off-diagonal entries multiplied by sqrt(2), so that
/// trace(X Y) == svec(X) . svec(Y) for symmetric X, Y.
inline int svec_len(int d) { return d * (d + 1) / 2; }

inline Eigen::VectorXd svec(const Eigen::MatrixXd& X) {
    const int d = static_cast<int>(X.rows());
    const double r2 = std::sqrt(2.0);
    Eigen::VectorXd v(svec_len(d));
    int k = 0;
    for (int j = 0; j < d; ++j)
        for (int i = 0; i <= j; ++i) v[k++] = (i == j) ? X(i, j) : r2 * X(i, j);
    return v;
}

inline Eigen::MatrixXd smat(const Eigen::VectorXd& v, int d) {
    const double inv_r2 = 1.0 / std::sqrt(2.0);
    Eigen::MatrixXd X(d, d);
    int k = 0;
    for (int j = 0; j < d; ++j)
        for (int i = 0; i <= j; ++i) {
            const double x = (i == j) ? v[k] : inv_r2 * v[k];
            X(i, j) = x;
            X(j, i) = x;
            ++k;
        }
    return X;
}

}  // namespace lure
