#pragma once

#include <Eigen/Dense>

#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lurecert/cones.hpp"
#include "lurecert/lifting.hpp"
#include "lurecert/lti.hpp"

namespace lure::lmi {

struct MissingVariable : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct InvalidRate : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Named values for the decision variables. Vectors are column matrices,
/// scalars 1x1.
using Values = std::map<std::string, Eigen::MatrixXd>;

enum class VarKind { SymMatrix, Matrix, Vector, Scalar };

struct VariableInfo {
    std::string name;
    VarKind kind;
    int dim;     // matrix side / vector length / 1
    int offset;  // position in the flat vector
    int size;    // svec length for SymMatrix, dim otherwise
};

/// Flat layout of the decision variables. Symmetric matrices are packed by
/// scaled upper-triangular vectorization so inner products are preserved.
class VariableSpace {
   public:
    int add_symmetric(const std::string& name, int d);
    int add_matrix(const std::string& name, int d);  // general d x d, row-major
    int add_vector(const std::string& name, int d);
    int add_scalar(const std::string& name);

    int total() const { return total_; }
    const std::vector<VariableInfo>& infos() const { return infos_; }
    const VariableInfo& info(const std::string& name) const;
    bool has(const std::string& name) const;

    Eigen::VectorXd pack(const Values& values) const;
    Values unpack(const Eigen::VectorXd& x) const;

    /// View of one variable inside a flat vector.
    Eigen::MatrixXd extract(const std::string& name, const Eigen::VectorXd& x) const;

   private:
    std::vector<VariableInfo> infos_;
    int total_ = 0;
};

/// Affine symmetric-matrix expression constrained <= 0 (negative
/// semidefinite).
struct PsdBlock {
    std::string label;
    int side = 0;
    std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> eval;
};

enum class LinKind { LeqZero, EqZero };

/// Affine scalar expression constrained <= 0 or == 0.
struct LinearConstraint {
    std::string label;
    LinKind kind = LinKind::LeqZero;
    std::function<double(const Eigen::VectorXd&)> eval;
};

struct LmiProblem {
    VariableSpace vars;
    std::vector<PsdBlock> psd_blocks;
    std::vector<LinearConstraint> linear;
};

struct Theorem1Options {
    bool p_zero = false;      // constrain the linear Lyapunov coefficients to 0
    double margin = 0.0;      // uniform strictness shift on the PSD blocks
    /// Weight W replacing the identity in the positivity block
    /// [W - P, 0; 0, 0]; used by the balancing transform in `certify`.
    /// Empty means the identity.
    Eigen::MatrixXd state_weight;
};

/// Theorem-1 feasibility system for the lifted system:
///   (i)   [A'PA - P, A'PB; B'PA, B'PB] + 1/2 [C D]'[0 M1'; M1 0][C D] <= 0
///   (ii)  (Fplus - F)' p + m1 <= 0
///   (iii) [W - P, 0; 0, 0]    + 1/2 [C D]'[0 M2'; M2 0][C D] <= 0
///   (iv)  -F' p + m2 <= 0
/// plus dual-cone constraints on both multipliers.
LmiProblem assemble_theorem1(const lifting::LiftedSystem& ls,
                             const Theorem1Options& opts = {});

/// Exponential-rate variant: -P becomes -rho^2 P in block (i) and (ii)
/// becomes (Fplus - rho^2 F)' p + m1 <= 0, so the full V telescopes at
/// rate rho^2. Throws InvalidRate unless 0 < rho <= 1.
LmiProblem assemble_rate(const lifting::LiftedSystem& ls, double rho,
                         const Theorem1Options& opts = {});

/// Zames-Falb FIR baseline. Taps pi_s for s in [-n_f, n_b]:
/// Pi(z) = sum_s pi_s z^{-s}; n_b causal taps pair u_t with y_{t-s},
/// n_f anticausal taps pair u_{t-s} with y_t. Constraints:
///   P >= eps*I,  [Lyapunov] + 1/2 [C D]'[0 N'; N 0][C D] <= -eps*I,
///   pi_s <= 0 (s != 0),  sum_s pi_s >= 0.
/// Requires ls.ell == max(n_b, n_f).
LmiProblem assemble_zf(const lifting::LiftedSystem& ls, int n_b, int n_f, double eps);

/// The windowed pairing matrix N for given taps (oldest-first stacks).
Eigen::MatrixXd zf_pairing_matrix(const Eigen::VectorXd& taps, int n_b, int n_f);

/// Plant with a scalar disturbance input w and scalar performance output z:
///   x+ = A x + B u + Bw w,   y = C x + D u,   z = Cz x + Dzu u + Dzw w.
struct PerformancePlant {
    lti::StateSpace g;
    Eigen::VectorXd Bw;
    Eigen::RowVectorXd Cz;
    double Dzu = 0.0;
    double Dzw = 0.0;
};

/// Lifted realization of a performance plant. With ell >= 1 the disturbance
/// history joins the state (the y-stack and z depend on it):
///   state (x_{t-ell}, u_{t-ell..t-1}, w_{t-ell..t-1}),  inputs (u_t, w_t).
struct LiftedPerformance {
    Eigen::MatrixXd A;   // nn x nn, nn = n + 2*ell
    Eigen::VectorXd Bu;  // nn
    Eigen::VectorXd Bw;  // nn
    Eigen::MatrixXd C;   // 2(ell+1) x nn (y-stack then u-stack)
    Eigen::VectorXd Du;  // 2(ell+1)
    Eigen::RowVectorXd z_x;  // z row over the state
    double z_u = 0.0;
    double z_w = 0.0;
    int ell = 0;
    int n = 0;

    int dim() const { return n + 2 * ell; }
    int stack() const { return ell + 1; }
};

LiftedPerformance build_lifted_performance(const PerformancePlant& pp, int ell);

/// Whether the nonlinearity channel takes part in a performance LMI. With
/// the channel disabled the problem is the plain LTI one (u = 0, no
/// multipliers) and positivity reduces to P >= 0, which is what the
/// telescoping argument needs when x0 = 0.
enum class NonlinChannel { Active, Disabled };

/// l2-gain dissipation system: Theorem-1 blocks extended by the disturbance
/// column with the supply gamma^2 w^2 - z^2 subtracted from block (i).
LmiProblem assemble_l2(const LiftedPerformance& pls, double gamma,
                       NonlinChannel channel = NonlinChannel::Active);

/// Stochastic (H2) variant: block (i) carries + z_det^2 and no w column,
/// the positivity block drops the ||x||^2 term, and
///   Sigma * (P Bw)'Bw-trace + Sigma * Dzw^2 <= gamma^2.
LmiProblem assemble_h2(const LiftedPerformance& pls, double Sigma, double gamma,
                       NonlinChannel channel = NonlinChannel::Active);

}  // namespace lure::lmi
