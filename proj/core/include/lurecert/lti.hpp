#pragma once

#include <Eigen/Dense>

#include <complex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace lure::lti {

struct ImproperTransferFunction : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct ZeroDenominator : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct SingularAtZ : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DimensionMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Rational transfer function in z. Coefficients are stored in descending
/// powers; the denominator is normalized so den[0] == 1.
struct TransferFunction {
    std::vector<double> num;
    std::vector<double> den;

    int degree() const { return static_cast<int>(den.size()) - 1; }
};

TransferFunction tf_from_coeffs(std::vector<double> num, std::vector<double> den);

struct StateSpace {
    Eigen::MatrixXd A;     // n x n
    Eigen::VectorXd B;     // n
    Eigen::RowVectorXd C;  // 1 x n
    double D = 0.0;

    int n() const { return static_cast<int>(A.rows()); }
};

/// Controllable-canonical realization of a proper transfer function.
StateSpace tf_to_ss(const TransferFunction& tf);

std::complex<double> eval(const TransferFunction& tf, std::complex<double> z);
std::complex<double> eval(const StateSpace& ss, std::complex<double> z);

double spectral_radius(const Eigen::MatrixXd& A);

/// True iff the spectral radius of A is < 1 - tol.
bool is_schur(const StateSpace& ss, double tol = 1e-9);

/// Realization of -(1 + alpha*G): the output row is rescaled, the state
/// equations are untouched.
StateSpace loop_shift(const StateSpace& g, double alpha);
StateSpace loop_shift(const TransferFunction& g, double alpha);

/// A plant as loaded from a plant file: the realization every algorithm
/// works with, plus the coefficient form when one was given.
struct Plant {
    StateSpace ss;
    std::optional<TransferFunction> tf;
    std::string fingerprint;  // SHA-256 of the canonical plant serialization
};

Plant make_plant(const TransferFunction& tf);
Plant make_plant(const StateSpace& ss);

/// Plant JSON: {"num": [...], "den": [...]} (descending powers of z) or
/// {"ss": {"A": [[...]], "B": [...], "C": [...], "D": ...}} (row-major).
Plant load_plant(const std::string& path);
Plant parse_plant(const std::string& json_text);

}  // namespace lure::lti
