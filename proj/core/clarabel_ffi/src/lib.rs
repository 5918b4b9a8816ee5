//! Minimal C ABI around the Clarabel interior-point solver.
//!
//! Solves the feasibility-form conic program
//!     find x  s.t.  A x + s = b,  s in K
//! with zero objective. K is a product of Zero, Nonnegative and scaled
//! PSD-triangle cones, listed in row order of A.
//!
//! PSD cones use Clarabel's svec convention: upper triangle stacked
//! column-major with off-diagonal entries scaled by sqrt(2).

use clarabel::algebra::CscMatrix;
use clarabel::solver::{
    DefaultSettingsBuilder, DefaultSolver, IPSolver, SolverStatus, SupportedConeT,
};
use std::slice;

pub const CONE_ZERO: i32 = 0;
pub const CONE_NONNEG: i32 = 1;
pub const CONE_PSD_TRIANGLE: i32 = 2;

pub const STATUS_SOLVED: i32 = 0;
pub const STATUS_ALMOST_SOLVED: i32 = 1;
pub const STATUS_PRIMAL_INFEASIBLE: i32 = 2;
pub const STATUS_ALMOST_PRIMAL_INFEASIBLE: i32 = 3;
pub const STATUS_DUAL_INFEASIBLE: i32 = 4;
pub const STATUS_ALMOST_DUAL_INFEASIBLE: i32 = 5;
pub const STATUS_MAX_ITERATIONS: i32 = 6;
pub const STATUS_MAX_TIME: i32 = 7;
pub const STATUS_NUMERICAL_ERROR: i32 = 8;
pub const STATUS_INSUFFICIENT_PROGRESS: i32 = 9;
pub const STATUS_OTHER: i32 = 10;

#[repr(C)]
pub struct LureClarabelResult {
    pub status: i32,
    pub iterations: u32,
    pub r_prim: f64,
    pub r_dual: f64,
}

fn map_status(s: SolverStatus) -> i32 {
    match s {
        SolverStatus::Solved => STATUS_SOLVED,
        SolverStatus::AlmostSolved => STATUS_ALMOST_SOLVED,
        SolverStatus::PrimalInfeasible => STATUS_PRIMAL_INFEASIBLE,
        SolverStatus::AlmostPrimalInfeasible => STATUS_ALMOST_PRIMAL_INFEASIBLE,
        SolverStatus::DualInfeasible => STATUS_DUAL_INFEASIBLE,
        SolverStatus::AlmostDualInfeasible => STATUS_ALMOST_DUAL_INFEASIBLE,
        SolverStatus::MaxIterations => STATUS_MAX_ITERATIONS,
        SolverStatus::MaxTime => STATUS_MAX_TIME,
        SolverStatus::NumericalError => STATUS_NUMERICAL_ERROR,
        SolverStatus::InsufficientProgress => STATUS_INSUFFICIENT_PROGRESS,
        _ => STATUS_OTHER,
    }
}

/// Returns 0 on success (result/x_out populated), nonzero on invalid input
/// or internal solver panic.
///
/// # Safety
/// All pointers must reference buffers of the documented lengths.
#[no_mangle]
pub unsafe extern "C" fn lure_clarabel_solve(
    nvars: usize,
    nrows: usize,
    a_nnz: usize,
    a_colptr: *const usize, // len nvars + 1
    a_rowval: *const usize, // len a_nnz
    a_nzval: *const f64,    // len a_nnz
    b: *const f64,          // len nrows
    ncones: usize,
    cone_kind: *const i32,  // len ncones
    cone_dim: *const usize, // len ncones (side length for PSD)
    tol: f64,
    max_iter: u32,
    time_limit: f64, // seconds; <= 0 means unlimited
    verbose: i32,
    x_out: *mut f64, // len nvars
    result: *mut LureClarabelResult,
) -> i32 {
    let run = std::panic::catch_unwind(|| -> Result<(), i32> {
        let colptr = slice::from_raw_parts(a_colptr, nvars + 1).to_vec();
        let rowval = slice::from_raw_parts(a_rowval, a_nnz).to_vec();
        let nzval = slice::from_raw_parts(a_nzval, a_nnz).to_vec();
        let bvec = slice::from_raw_parts(b, nrows).to_vec();
        let kinds = slice::from_raw_parts(cone_kind, ncones);
        let dims = slice::from_raw_parts(cone_dim, ncones);

        let mut cones: Vec<SupportedConeT<f64>> = Vec::with_capacity(ncones);
        for i in 0..ncones {
            match kinds[i] {
                CONE_ZERO => cones.push(SupportedConeT::ZeroConeT(dims[i])),
                CONE_NONNEG => cones.push(SupportedConeT::NonnegativeConeT(dims[i])),
                CONE_PSD_TRIANGLE => cones.push(SupportedConeT::PSDTriangleConeT(dims[i])),
                _ => return Err(2),
            }
        }

        let a = CscMatrix::new(nrows, nvars, colptr, rowval, nzval);
        let p = CscMatrix::<f64>::zeros((nvars, nvars));
        let q = vec![0.0; nvars];

        let mut builder = DefaultSettingsBuilder::default();
        builder
            .verbose(verbose != 0)
            .max_iter(max_iter)
            .tol_feas(tol)
            .tol_gap_abs(tol)
            .tol_gap_rel(tol);
        if time_limit > 0.0 {
            builder.time_limit(time_limit);
        }
        let settings = builder.build().map_err(|_| 3)?;

        let mut solver =
            DefaultSolver::new(&p, &q, &a, &bvec, &cones, settings).map_err(|_| 4)?;
        solver.solve();

        let sol = &solver.solution;
        let out = slice::from_raw_parts_mut(x_out, nvars);
        for (o, v) in out.iter_mut().zip(sol.x.iter()) {
            *o = *v;
        }
        (*result).status = map_status(sol.status);
        (*result).iterations = sol.iterations;
        (*result).r_prim = sol.r_prim;
        (*result).r_dual = sol.r_dual;
        Ok(())
    });
    match run {
        Ok(Ok(())) => 0,
        Ok(Err(code)) => code,
        Err(_) => 1,
    }
}
