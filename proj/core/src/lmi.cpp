#include "lurecert/lmi.hpp"

#include <cmath>

#include "lurecert/svec.hpp"

namespace lure::lmi {

int VariableSpace::add_symmetric(const std::string& name, int d) {
    infos_.push_back({name, VarKind::SymMatrix, d, total_, svec_len(d)});
    total_ += svec_len(d);
    return static_cast<int>(infos_.size()) - 1;
}

int VariableSpace::add_matrix(const std::string& name, int d) {
    infos_.push_back({name, VarKind::Matrix, d, total_, d * d});
    total_ += d * d;
    return static_cast<int>(infos_.size()) - 1;
}

int VariableSpace::add_vector(const std::string& name, int d) {
    infos_.push_back({name, VarKind::Vector, d, total_, d});
    total_ += d;
    return static_cast<int>(infos_.size()) - 1;
}

int VariableSpace::add_scalar(const std::string& name) {
    infos_.push_back({name, VarKind::Scalar, 1, total_, 1});
    total_ += 1;
    return static_cast<int>(infos_.size()) - 1;
}

const VariableInfo& VariableSpace::info(const std::string& name) const {
    for (const auto& v : infos_)
        if (v.name == name) return v;
    throw MissingVariable("unknown variable: " + name);
}

bool VariableSpace::has(const std::string& name) const {
    for (const auto& v : infos_)
        if (v.name == name) return true;
    return false;
}

Eigen::VectorXd VariableSpace::pack(const Values& values) const {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(total_);
    for (const auto& v : infos_) {
        auto it = values.find(v.name);
        if (it == values.end()) throw MissingVariable("missing value for: " + v.name);
        const Eigen::MatrixXd& val = it->second;
        switch (v.kind) {
            case VarKind::SymMatrix: {
                if (val.rows() != v.dim || val.cols() != v.dim)
                    throw lti::DimensionMismatch("bad shape for " + v.name);
                const Eigen::MatrixXd sym = 0.5 * (val + val.transpose());
                x.segment(v.offset, v.size) = svec(sym);
                break;
            }
            case VarKind::Matrix: {
                if (val.rows() != v.dim || val.cols() != v.dim)
                    throw lti::DimensionMismatch("bad shape for " + v.name);
                for (int i = 0; i < v.dim; ++i)
                    for (int j = 0; j < v.dim; ++j)
                        x[v.offset + i * v.dim + j] = val(i, j);
                break;
            }
            case VarKind::Vector:
                if (val.size() != v.dim) throw lti::DimensionMismatch("bad shape for " + v.name);
                x.segment(v.offset, v.size) = Eigen::Map<const Eigen::VectorXd>(val.data(), v.dim);
                break;
            case VarKind::Scalar:
                x[v.offset] = val(0, 0);
                break;
        }
    }
    return x;
}

Values VariableSpace::unpack(const Eigen::VectorXd& x) const {
    Values out;
    for (const auto& v : infos_) out[v.name] = extract(v.name, x);
    return out;
}

Eigen::MatrixXd VariableSpace::extract(const std::string& name, const Eigen::VectorXd& x) const {
    const auto& v = info(name);
    switch (v.kind) {
        case VarKind::SymMatrix:
            return smat(x.segment(v.offset, v.size), v.dim);
        case VarKind::Matrix: {
            Eigen::MatrixXd M(v.dim, v.dim);
            for (int i = 0; i < v.dim; ++i)
                for (int j = 0; j < v.dim; ++j) M(i, j) = x[v.offset + i * v.dim + j];
            return M;
        }
        case VarKind::Vector:
            return x.segment(v.offset, v.size);
        case VarKind::Scalar:
            return Eigen::MatrixXd::Constant(1, 1, x[v.offset]);
    }
    throw MissingVariable(name);
}

namespace {

// General (non-symmetric) k x k matrix variable stored as a length-k^2
// vector, row-major.
Eigen::MatrixXd as_matrix(const Eigen::VectorXd& flat, int offset, int k) {
    Eigen::MatrixXd M(k, k);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) M(i, j) = flat[offset + i * k + j];
    return M;
}

// 1/2 [C D]' [0 M'; M 0] [C D] for output rows split into (y-stack, u-stack):
// the quadratic form u_stack' M y_stack.
Eigen::MatrixXd pairing_term(const Eigen::MatrixXd& outs, const Eigen::MatrixXd& M) {
    const int k = static_cast<int>(M.rows());
    const Eigen::MatrixXd Y = outs.topRows(k);
    const Eigen::MatrixXd U = outs.bottomRows(k);
    const Eigen::MatrixXd W = U.transpose() * M * Y;
    return 0.5 * (W + W.transpose());
}

void add_multiplier_vars(VariableSpace& vars, const std::string& tag, int k) {
    vars.add_matrix("M" + tag, k);
    vars.add_vector("m" + tag, k);
}

void add_dual_cone_constraints(LmiProblem& prob, const std::string& tag, int ell) {
    const int k = ell + 1;
    const auto& vars = prob.vars;
    const int moff = vars.info("M" + tag).offset;
    const int voff = vars.info("m" + tag).offset;
    for (const auto& c : cones::dual_cone_constraints(ell)) {
        LinearConstraint lc;
        lc.label = "M" + tag + "." + c.label;
        lc.kind = LinKind::LeqZero;
        const Eigen::MatrixXd Mc = c.M_coeff;
        const Eigen::VectorXd mc = c.m_coeff;
        const double rhs = c.rhs;
        lc.eval = [Mc, mc, rhs, moff, voff, k](const Eigen::VectorXd& x) {
            double acc = rhs;
            for (int i = 0; i < k; ++i)
                for (int j = 0; j < k; ++j) acc += Mc(i, j) * x[moff + i * k + j];
            for (int i = 0; i < k; ++i) acc += mc[i] * x[voff + i];
            return acc;
        };
        prob.linear.push_back(std::move(lc));
    }
}

}  // namespace

LmiProblem assemble_theorem1(const lifting::LiftedSystem& ls, const Theorem1Options& opts) {
    return assemble_rate(ls, 1.0, opts);
}

LmiProblem assemble_rate(const lifting::LiftedSystem& ls, double rho,
                         const Theorem1Options& opts) {
    if (!(rho > 0.0) || rho > 1.0) throw InvalidRate("rho must lie in (0, 1]");
    const int nn = ls.dim();
    const int ell = ls.ell;
    const int k = ls.stack();

    LmiProblem prob;
    prob.vars.add_symmetric("P", nn);
    if (ell > 0) prob.vars.add_vector("p", ell);
    add_multiplier_vars(prob.vars, "1", k);
    add_multiplier_vars(prob.vars, "2", k);

    const int m1_off = prob.vars.info("M1").offset;
    const int m2_off = prob.vars.info("M2").offset;
    const int v1_off = prob.vars.info("m1").offset;
    const int v2_off = prob.vars.info("m2").offset;

    const Eigen::MatrixXd AB =
        (Eigen::MatrixXd(nn, nn + 1) << ls.A, ls.B).finished();
    const Eigen::MatrixXd CD =
        (Eigen::MatrixXd(2 * k, nn + 1) << ls.C, ls.D).finished();
    const Eigen::MatrixXd W =
        opts.state_weight.size() ? opts.state_weight : Eigen::MatrixXd::Identity(nn, nn);
    if (W.rows() != nn || W.cols() != nn)
        throw lti::DimensionMismatch("state_weight must be dim x dim");
    const double rho2 = rho * rho;
    const double margin = opts.margin;
    const int P_off = prob.vars.info("P").offset;

    PsdBlock b1;
    b1.label = "dissipation";
    b1.side = nn + 1;
    b1.eval = [AB, CD, P_off, nn, m1_off, k, rho2, margin](const Eigen::VectorXd& x) {
        const Eigen::MatrixXd P = smat(x.segment(P_off, svec_len(nn)), nn);
        const Eigen::MatrixXd M1 = as_matrix(x, m1_off, k);
        Eigen::MatrixXd blk = AB.transpose() * P * AB;
        blk.topLeftCorner(nn, nn) -= rho2 * P;
        blk += pairing_term(CD, M1);
        blk += margin * Eigen::MatrixXd::Identity(nn + 1, nn + 1);
        return blk;
    };
    prob.psd_blocks.push_back(std::move(b1));

    PsdBlock b3;
    b3.label = "positivity";
    b3.side = nn + 1;
    b3.eval = [CD, W, P_off, nn, m2_off, k, margin](const Eigen::VectorXd& x) {
        const Eigen::MatrixXd P = smat(x.segment(P_off, svec_len(nn)), nn);
        const Eigen::MatrixXd M2 = as_matrix(x, m2_off, k);
        Eigen::MatrixXd blk = Eigen::MatrixXd::Zero(nn + 1, nn + 1);
        blk.topLeftCorner(nn, nn) = W - P;
        blk += pairing_term(CD, M2);
        blk += margin * Eigen::MatrixXd::Identity(nn + 1, nn + 1);
        return blk;
    };
    prob.psd_blocks.push_back(std::move(b3));

    // (ii) (Fplus - rho^2 F)' p + m1 <= 0 and (iv) -F' p + m2 <= 0
    const Eigen::MatrixXd G2 = (ls.Fplus - rho2 * ls.F).transpose();  // (ell+1) x ell
    const Eigen::MatrixXd G4 = -ls.F.transpose();
    const int pvec_off = ell > 0 ? prob.vars.info("p").offset : 0;
    for (int i = 0; i < k; ++i) {
        LinearConstraint c2;
        c2.label = "f_decrease[" + std::to_string(i) + "]";
        const Eigen::RowVectorXd row = ell > 0 ? Eigen::RowVectorXd(G2.row(i))
                                               : Eigen::RowVectorXd(0);
        c2.eval = [row, pvec_off, v1_off, i, ell, margin](const Eigen::VectorXd& x) {
            double acc = x[v1_off + i] + margin;
            for (int j = 0; j < ell; ++j) acc += row[j] * x[pvec_off + j];
            return acc;
        };
        prob.linear.push_back(std::move(c2));

        LinearConstraint c4;
        c4.label = "f_positivity[" + std::to_string(i) + "]";
        const Eigen::RowVectorXd row4 = ell > 0 ? Eigen::RowVectorXd(G4.row(i))
                                                : Eigen::RowVectorXd(0);
        c4.eval = [row4, pvec_off, v2_off, i, ell, margin](const Eigen::VectorXd& x) {
            double acc = x[v2_off + i] + margin;
            for (int j = 0; j < ell; ++j) acc += row4[j] * x[pvec_off + j];
            return acc;
        };
        prob.linear.push_back(std::move(c4));
    }

    add_dual_cone_constraints(prob, "1", ell);
    add_dual_cone_constraints(prob, "2", ell);

    if (opts.p_zero && ell > 0) {
        for (int j = 0; j < ell; ++j) {
            LinearConstraint c;
            c.label = "p_zero[" + std::to_string(j) + "]";
            c.kind = LinKind::EqZero;
            c.eval = [pvec_off, j](const Eigen::VectorXd& x) { return x[pvec_off + j]; };
            prob.linear.push_back(std::move(c));
        }
    }
    return prob;
}

Eigen::MatrixXd zf_pairing_matrix(const Eigen::VectorXd& taps, int n_b, int n_f) {
    const int ell = std::max(n_b, n_f);
    const int k = ell + 1;
    if (taps.size() != n_b + n_f + 1)
        throw lti::DimensionMismatch("tap vector length must be n_b + n_f + 1");
    Eigen::MatrixXd N = Eigen::MatrixXd::Zero(k, k);
    // taps[i] = pi_{i - n_f}; causal s >= 0 pairs u_t with y_{t-s},
    // anticausal s < 0 pairs u_{t-|s|} with y_t.
    for (int s = 0; s <= n_b; ++s) N(ell, ell - s) += taps[s + n_f];
    for (int s = 1; s <= n_f; ++s) N(ell - s, ell) += taps[n_f - s];
    return N;
}

LmiProblem assemble_zf(const lifting::LiftedSystem& ls, int n_b, int n_f, double eps) {
    if (ls.ell != std::max(n_b, n_f))
        throw lti::DimensionMismatch("lifted system must use ell = max(n_b, n_f)");
    if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
    const int nn = ls.dim();
    const int k = ls.stack();
    const int ntaps = n_b + n_f + 1;

    LmiProblem prob;
    prob.vars.add_symmetric("P", nn);
    prob.vars.add_vector("taps", ntaps);
    const int P_off = prob.vars.info("P").offset;
    const int t_off = prob.vars.info("taps").offset;

    const Eigen::MatrixXd AB =
        (Eigen::MatrixXd(nn, nn + 1) << ls.A, ls.B).finished();
    const Eigen::MatrixXd CD =
        (Eigen::MatrixXd(2 * k, nn + 1) << ls.C, ls.D).finished();

    PsdBlock bp;
    bp.label = "P_definite";
    bp.side = nn;
    bp.eval = [P_off, nn, eps](const Eigen::VectorXd& x) {
        const Eigen::MatrixXd P = smat(x.segment(P_off, svec_len(nn)), nn);
        return Eigen::MatrixXd(eps * Eigen::MatrixXd::Identity(nn, nn) - P);
    };
    prob.psd_blocks.push_back(std::move(bp));

    PsdBlock b1;
    b1.label = "zf_dissipation";
    b1.side = nn + 1;
    b1.eval = [AB, CD, P_off, nn, t_off, n_b, n_f, ntaps, eps](const Eigen::VectorXd& x) {
        const Eigen::MatrixXd P = smat(x.segment(P_off, svec_len(nn)), nn);
        const Eigen::VectorXd taps = x.segment(t_off, ntaps);
        const Eigen::MatrixXd N = zf_pairing_matrix(taps, n_b, n_f);
        Eigen::MatrixXd blk = AB.transpose() * P * AB;
        blk.topLeftCorner(nn, nn) -= P;
        blk += pairing_term(CD, N);
        blk += eps * Eigen::MatrixXd::Identity(nn + 1, nn + 1);
        return blk;
    };
    prob.psd_blocks.push_back(std::move(b1));

    for (int i = 0; i < ntaps; ++i) {
        if (i == n_f) continue;  // pi_0 is sign-free
        LinearConstraint c;
        c.label = "tap_sign[" + std::to_string(i - n_f) + "]";
        c.eval = [t_off, i](const Eigen::VectorXd& x) { return x[t_off + i]; };
        prob.linear.push_back(std::move(c));
    }
    LinearConstraint csum;
    csum.label = "tap_sum";
    csum.eval = [t_off, ntaps](const Eigen::VectorXd& x) {
        return -x.segment(t_off, ntaps).sum();
    };
    prob.linear.push_back(std::move(csum));
    return prob;
}

LiftedPerformance build_lifted_performance(const PerformancePlant& pp, int ell) {
    if (ell < 0) throw std::invalid_argument("lifting dimension must be nonnegative");
    const int n = pp.g.n();
    if (pp.Bw.size() != n || pp.Cz.size() != n)
        throw lti::DimensionMismatch("Bw / Cz must match the plant dimension");
    const int nn = n + 2 * ell;
    LiftedPerformance lp;
    lp.ell = ell;
    lp.n = n;
    lp.A = Eigen::MatrixXd::Zero(nn, nn);
    lp.Bu = Eigen::VectorXd::Zero(nn);
    lp.Bw = Eigen::VectorXd::Zero(nn);
    lp.A.topLeftCorner(n, n) = pp.g.A;
    const int uh = n;        // start of the u history
    const int wh = n + ell;  // start of the w history
    if (ell > 0) {
        lp.A.block(0, uh, n, 1) = pp.g.B;
        lp.A.block(0, wh, n, 1) = pp.Bw;
        for (int i = 0; i + 1 < ell; ++i) {
            lp.A(uh + i, uh + i + 1) = 1.0;
            lp.A(wh + i, wh + i + 1) = 1.0;
        }
        lp.Bu[uh + ell - 1] = 1.0;
        lp.Bw[wh + ell - 1] = 1.0;
    } else {
        lp.Bu = pp.g.B;
        lp.Bw = pp.Bw;
    }

    const int k = ell + 1;
    lp.C = Eigen::MatrixXd::Zero(2 * k, nn);
    lp.Du = Eigen::VectorXd::Zero(2 * k);
    std::vector<Eigen::MatrixXd> powers(static_cast<std::size_t>(ell) + 1);
    Eigen::MatrixXd Ar = Eigen::MatrixXd::Identity(n, n);
    for (int r = 0; r <= ell; ++r) {
        powers[static_cast<std::size_t>(r)] = Ar;
        Ar = pp.g.A * Ar;
    }
    for (int r = 0; r <= ell; ++r) {
        lp.C.block(r, 0, 1, n) = pp.g.C * powers[static_cast<std::size_t>(r)];
        for (int j = 0; j < r; ++j) {
            const Eigen::MatrixXd Aj = powers[static_cast<std::size_t>(r - 1 - j)];
            lp.C(r, uh + j) += (pp.g.C * Aj * pp.g.B)(0);
            lp.C(r, wh + j) += (pp.g.C * Aj * pp.Bw)(0);
        }
        if (r < ell)
            lp.C(r, uh + r) += pp.g.D;
        else
            lp.Du[r] = pp.g.D;
    }
    for (int r = 0; r <= ell; ++r) {
        if (r < ell)
            lp.C(k + r, uh + r) = 1.0;
        else
            lp.Du[k + r] = 1.0;
    }

    // z_t = Cz x_t + Dzu u_t + Dzw w_t with x_t propagated from x_{t-ell}
    lp.z_x = Eigen::RowVectorXd::Zero(nn);
    lp.z_x.head(n) = pp.Cz * powers[static_cast<std::size_t>(ell)];
    for (int j = 0; j < ell; ++j) {
        const Eigen::MatrixXd Aj = powers[static_cast<std::size_t>(ell - 1 - j)];
        lp.z_x[uh + j] += (pp.Cz * Aj * pp.g.B)(0);
        lp.z_x[wh + j] += (pp.Cz * Aj * pp.Bw)(0);
    }
    lp.z_u = pp.Dzu;
    lp.z_w = pp.Dzw;
    return lp;
}

namespace {

// Shared skeleton of the multiplier/potential constraints for the
// performance LMIs (same as Theorem 1 at rate 1).
void add_lifted_multiplier_constraints(LmiProblem& prob, int ell) {
    const int k = ell + 1;
    auto [F, Fp] = lifting::f_matrices(ell);
    const Eigen::MatrixXd G2 = (Fp - F).transpose();
    const Eigen::MatrixXd G4 = -F.transpose();
    const int pvec_off = ell > 0 ? prob.vars.info("p").offset : 0;
    const int v1_off = prob.vars.info("m1").offset;
    const int v2_off = prob.vars.info("m2").offset;
    for (int i = 0; i < k; ++i) {
        LinearConstraint c2;
        c2.label = "f_decrease[" + std::to_string(i) + "]";
        const Eigen::RowVectorXd row = ell > 0 ? Eigen::RowVectorXd(G2.row(i))
                                               : Eigen::RowVectorXd(0);
        c2.eval = [row, pvec_off, v1_off, i, ell](const Eigen::VectorXd& x) {
            double acc = x[v1_off + i];
            for (int j = 0; j < ell; ++j) acc += row[j] * x[pvec_off + j];
            return acc;
        };
        prob.linear.push_back(std::move(c2));
        LinearConstraint c4;
        c4.label = "f_positivity[" + std::to_string(i) + "]";
        const Eigen::RowVectorXd row4 = ell > 0 ? Eigen::RowVectorXd(G4.row(i))
                                                : Eigen::RowVectorXd(0);
        c4.eval = [row4, pvec_off, v2_off, i, ell](const Eigen::VectorXd& x) {
            double acc = x[v2_off + i];
            for (int j = 0; j < ell; ++j) acc += row4[j] * x[pvec_off + j];
            return acc;
        };
        prob.linear.push_back(std::move(c4));
    }
    add_dual_cone_constraints(prob, "1", ell);
    add_dual_cone_constraints(prob, "2", ell);
}

}  // namespace

LmiProblem assemble_l2(const LiftedPerformance& pls, double gamma, NonlinChannel channel) {
    if (!(gamma > 0.0)) throw std::invalid_argument("gamma must be positive");
    LmiProblem prob;

    if (channel == NonlinChannel::Disabled) {
        // Plain discrete bounded-real condition on the w -> z channel
        // (u identically zero): P >= 0 suffices for the telescoping with
        // x0 = 0, so the scale of P stays free.
        const int n = pls.n;
        prob.vars.add_symmetric("P", n);
        const int P_off = prob.vars.info("P").offset;
        const Eigen::MatrixXd A = pls.A.topLeftCorner(n, n);
        const Eigen::VectorXd Bw = pls.Bw.head(n);
        const Eigen::RowVectorXd Cz = pls.z_x.head(n);
        const double Dzw = pls.z_w;
        const double g2 = gamma * gamma;

        PsdBlock brl;
        brl.label = "bounded_real";
        brl.side = n + 1;
        brl.eval = [A, Bw, Cz, Dzw, g2, P_off, n](const Eigen::VectorXd& x) {
            const Eigen::MatrixXd P = smat(x.segment(P_off, svec_len(n)), n);
            Eigen::MatrixXd ABW(n, n + 1);
            ABW << A, Bw;
            Eigen::MatrixXd blk = ABW.transpose() * P * ABW;
            blk.topLeftCorner(n, n) -= P;
            Eigen::RowVectorXd z(n + 1);
            z << Cz, Dzw;
            blk += z.transpose() * z;
            blk(n, n) -= g2;
            return blk;
        };
        prob.psd_blocks.push_back(std::move(brl));

        PsdBlock pos;
        pos.label = "P_nonneg";
        pos.side = n;
        pos.eval = [P_off, n](const Eigen::VectorXd& x) {
            return Eigen::MatrixXd(-smat(x.segment(P_off, svec_len(n)), n));
        };
        prob.psd_blocks.push_back(std::move(pos));
        return prob;
    }

    const int nn = pls.dim();
    const int ell = pls.ell;
    const int k = pls.stack();
    prob.vars.add_symmetric("P", nn);
    if (ell > 0) prob.vars.add_vector("p", ell);
    add_multiplier_vars(prob.vars, "1", k);
    add_multiplier_vars(prob.vars, "2", k);
    const int P_off = prob.vars.info("P").offset;
    const int m1_off = prob.vars.info("M1").offset;
    const int m2_off = prob.vars.info("M2").offset;

    // block (i) over (xi, u, w)
    Eigen::MatrixXd ABW(nn, nn + 2);
    ABW << pls.A, pls.Bu, pls.Bw;
    Eigen::MatrixXd CDW(2 * k, nn + 2);
    CDW << pls.C, pls.Du, Eigen::VectorXd::Zero(2 * k);
    Eigen::RowVectorXd zrow(nn + 2);
    zrow << pls.z_x, pls.z_u, pls.z_w;
    const double g2 = gamma * gamma;

    PsdBlock b1;
    b1.label = "dissipation_l2";
    b1.side = nn + 2;
    b1.eval = [ABW, CDW, zrow, g2, P_off, nn, m1_off, k](const Eigen::VectorXd& x) {
        const Eigen::MatrixXd P = smat(x.segment(P_off, svec_len(nn)), nn);
        const Eigen::MatrixXd M1 = as_matrix(x, m1_off, k);
        Eigen::MatrixXd blk = ABW.transpose() * P * ABW;
        blk.topLeftCorner(nn, nn) -= P;
        blk += pairing_term(CDW, M1);
        blk += zrow.transpose() * zrow;
        blk(nn + 1, nn + 1) -= g2;
        return blk;
    };
    prob.psd_blocks.push_back(std::move(b1));

    // block (iii) over (xi, u), unchanged from Theorem 1
    Eigen::MatrixXd CD(2 * k, nn + 1);
    CD << pls.C, pls.Du;
    PsdBlock b3;
    b3.label = "positivity";
    b3.side = nn + 1;
    b3.eval = [CD, P_off, nn, m2_off, k](const Eigen::VectorXd& x) {
        const Eigen::MatrixXd P = smat(x.segment(P_off, svec_len(nn)), nn);
        const Eigen::MatrixXd M2 = as_matrix(x, m2_off, k);
        Eigen::MatrixXd blk = Eigen::MatrixXd::Zero(nn + 1, nn + 1);
        blk.topLeftCorner(nn, nn) = Eigen::MatrixXd::Identity(nn, nn) - P;
        blk += pairing_term(CD, M2);
        return blk;
    };
    prob.psd_blocks.push_back(std::move(b3));

    add_lifted_multiplier_constraints(prob, ell);
    return prob;
}

LmiProblem assemble_h2(const LiftedPerformance& pls, double Sigma, double gamma,
                       NonlinChannel channel) {
    if (Sigma < 0.0) throw std::invalid_argument("Sigma must be nonnegative");
    if (gamma < 0.0) throw std::invalid_argument("gamma must be nonnegative");
    LmiProblem prob;

    if (channel == NonlinChannel::Disabled) {
        const int n = pls.n;
        prob.vars.add_symmetric("P", n);
        const int P_off = prob.vars.info("P").offset;
        const Eigen::MatrixXd A = pls.A.topLeftCorner(n, n);
        const Eigen::VectorXd Bw = pls.Bw.head(n);
        const Eigen::RowVectorXd Cz = pls.z_x.head(n);
        const double rhs = gamma * gamma - Sigma * pls.z_w * pls.z_w;

        PsdBlock lyap;
        lyap.label = "h2_observability";
        lyap.side = n;
        lyap.eval = [A, Cz, P_off, n](const Eigen::VectorXd& x) {
            const Eigen::MatrixXd P = smat(x.segment(P_off, svec_len(n)), n);
            Eigen::MatrixXd blk = A.transpose() * P * A - P;
            blk += Cz.transpose() * Cz;
            return blk;
        };
        prob.psd_blocks.push_back(std::move(lyap));

        PsdBlock pos;
        pos.label = "P_nonneg";
        pos.side = n;
        pos.eval = [P_off, n](const Eigen::VectorXd& x) {
            return Eigen::MatrixXd(-smat(x.segment(P_off, svec_len(n)), n));
        };
        prob.psd_blocks.push_back(std::move(pos));

        LinearConstraint tr;
        tr.label = "h2_trace";
        tr.eval = [P_off, n, Bw, Sigma, rhs](const Eigen::VectorXd& x) {
            const Eigen::MatrixXd P = smat(x.segment(P_off, svec_len(n)), n);
            return Sigma * (Bw.transpose() * P * Bw)(0) - rhs;
        };
        prob.linear.push_back(std::move(tr));
        return prob;
    }

    const int nn = pls.dim();
    const int ell = pls.ell;
    const int k = pls.stack();
    prob.vars.add_symmetric("P", nn);
    if (ell > 0) prob.vars.add_vector("p", ell);
    add_multiplier_vars(prob.vars, "1", k);
    add_multiplier_vars(prob.vars, "2", k);
    const int P_off = prob.vars.info("P").offset;
    const int m1_off = prob.vars.info("M1").offset;
    const int m2_off = prob.vars.info("M2").offset;

    Eigen::MatrixXd AB(nn, nn + 1);
    AB << pls.A, pls.Bu;
    Eigen::MatrixXd CD(2 * k, nn + 1);
    CD << pls.C, pls.Du;
    Eigen::RowVectorXd zdet(nn + 1);
    zdet << pls.z_x, pls.z_u;

    PsdBlock b1;
    b1.label = "dissipation_h2";
    b1.side = nn + 1;
    b1.eval = [AB, CD, zdet, P_off, nn, m1_off, k](const Eigen::VectorXd& x) {
        const Eigen::MatrixXd P = smat(x.segment(P_off, svec_len(nn)), nn);
        const Eigen::MatrixXd M1 = as_matrix(x, m1_off, k);
        Eigen::MatrixXd blk = AB.transpose() * P * AB;
        blk.topLeftCorner(nn, nn) -= P;
        blk += pairing_term(CD, M1);
        blk += zdet.transpose() * zdet;
        return blk;
    };
    prob.psd_blocks.push_back(std::move(b1));

    // positivity without the ||x||^2 term: V >= 0 along trajectories
    PsdBlock b3;
    b3.label = "positivity_h2";
    b3.side = nn + 1;
    b3.eval = [CD, P_off, nn, m2_off, k](const Eigen::VectorXd& x) {
        const Eigen::MatrixXd P = smat(x.segment(P_off, svec_len(nn)), nn);
        const Eigen::MatrixXd M2 = as_matrix(x, m2_off, k);
        Eigen::MatrixXd blk = Eigen::MatrixXd::Zero(nn + 1, nn + 1);
        blk.topLeftCorner(nn, nn) = -P;
        blk += pairing_term(CD, M2);
        return blk;
    };
    prob.psd_blocks.push_back(std::move(b3));

    add_lifted_multiplier_constraints(prob, ell);

    const Eigen::VectorXd Bw = pls.Bw;
    const double rhs = gamma * gamma - Sigma * pls.z_w * pls.z_w;
    LinearConstraint tr;
    tr.label = "h2_trace";
    tr.eval = [P_off, nn, Bw, Sigma, rhs](const Eigen::VectorXd& x) {
        const Eigen::MatrixXd P = smat(x.segment(P_off, svec_len(nn)), nn);
        return Sigma * (Bw.transpose() * P * Bw)(0) - rhs;
    };
    prob.linear.push_back(std::move(tr));
    return prob;
}

}  // namespace lure::lmi
