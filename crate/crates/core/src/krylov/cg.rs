use std::time::Instant;

use num_complex::Complex64;

use super::{axpy, check_problem, precondition, require_hpd, true_residual, LinearOperator, Method, Preconditioner, Solution, SolveOptions, SolveReport};
use crate::dense::{dot, vec_norm};
use crate::error::{Error, Result};

/// Preconditioned conjugate gradients for Hermitian positive definite `A`.
///
/// The recurrence residual drives the loop; once it passes the tolerance the
/// true residual is checked, and the iteration continues from the true
/// residual if it does not pass as well.
pub fn cg(
    a: &dyn LinearOperator,
    m: Option<&dyn Preconditioner>,
    b: &[Complex64],
    opts: &SolveOptions,
) -> Result<Solution> {
    check_problem(a, m, b)?;
    require_hpd(m, Method::Cg)?;
    let start = Instant::now();
    let n = b.len();
    let maxit = opts.max_iterations(n);
    let bnorm = vec_norm(b);
    let mut x = vec![Complex64::new(0.0, 0.0); n];
    let mut report = SolveReport {
        method: Method::Cg,
        preconditioner: if m.is_some() { "preconditioned" } else { "none" }.to_string(),
        n,
        m: None,
        iterations: 0,
        residual_history: Vec::new(),
        converged: false,
        final_relres: 0.0,
        true_relres: 0.0,
        seconds: 0.0,
    };
    if bnorm == 0.0 {
        report.converged = true;
        return Ok(Solution { x, report });
    }

    let mut r = b.to_vec();
    let mut p: Vec<Complex64> = Vec::new();
    let mut rho_old = 0.0;
    let mut relres = 1.0;

    for it in 1..=maxit {
        let z = precondition(m, &r)?;
        let rho = dot(&r, &z).re;
        if it == 1 || p.is_empty() {
            p = z;
        } else {
            let beta = rho / rho_old;
            for (pi, zi) in p.iter_mut().zip(&z) {
                *pi = zi + *pi * beta;
            }
        }
        rho_old = rho;

        let q = a.apply(&p);
        let curvature = dot(&p, &q).re;
        if curvature <= 0.0 {
            return Err(Error::Indefinite { iteration: it, curvature });
        }
        let alpha = rho / curvature;
        axpy(alpha.into(), &p, &mut x);
        axpy((-alpha).into(), &q, &mut r);
        relres = vec_norm(&r) / bnorm;
        report.iterations = it;
        report.residual_history.push(relres);

        if relres < opts.tol {
            let r_true = true_residual(a, b, &x);
            relres = vec_norm(&r_true) / bnorm;
            if relres < opts.tol {
                report.converged = true;
                break;
            }
            // restart the recurrence from the true residual
            r = r_true;
            p.clear();
        }
    }

    if !report.converged {
        relres = vec_norm(&true_residual(a, b, &x)) / bnorm;
    }
    report.final_relres = relres;
    report.true_relres = relres;
    report.seconds = start.elapsed().as_secs_f64();
    Ok(Solution { x, report })
}
