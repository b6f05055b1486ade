use std::time::Instant;

use num_complex::Complex64;

use super::{axpy, check_problem, precondition, require_hpd, true_residual, LinearOperator, Method, Preconditioner, Solution, SolveOptions, SolveReport};
use crate::dense::{dot, vec_norm};
use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Preconditioned MINRES for Hermitian (possibly indefinite) `A` and
/// Hermitian positive definite `M`.
///
/// Lanczos runs in the `M^{-1}` inner product; the Lanczos coefficients are
/// real, so the rotations are the usual real Givens rotations. Besides `x`
/// the loop carries `A w_k`, which yields the unpreconditioned residual
/// `b - A x` by recurrence. The sign convention starts from `cs = -1, sn = 0`.
pub fn minres(
    a: &dyn LinearOperator,
    m: Option<&dyn Preconditioner>,
    b: &[Complex64],
    opts: &SolveOptions,
) -> Result<Solution> {
    check_problem(a, m, b)?;
    require_hpd(m, Method::Minres)?;
    let start = Instant::now();
    let n = b.len();
    let maxit = opts.max_iterations(n);
    let bnorm = vec_norm(b);
    let mut x = vec![ZERO; n];
    let mut report = SolveReport {
        method: Method::Minres,
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
    let mut r1 = b.to_vec();
    let mut r2 = b.to_vec();
    let mut y = precondition(m, &r1)?;
    let beta1_sq = dot(&r1, &y).re;
    if beta1_sq <= 0.0 {
        return Err(Error::NotPositiveDefinite(format!("<b, M^-1 b> = {beta1_sq:e}")));
    }
    let beta1 = beta1_sq.sqrt();
    let breakdown = 1e-14 * beta1;

    let mut oldb = 0.0;
    let mut beta = beta1;
    let mut dbar = 0.0;
    let mut epsln = 0.0;
    let mut phibar = beta1;
    let mut cs = -1.0;
    let mut sn = 0.0;
    let mut w = vec![ZERO; n];
    let mut w2 = vec![ZERO; n];
    let mut aw = vec![ZERO; n];
    let mut aw2 = vec![ZERO; n];
    let mut relres = 1.0;

    for it in 1..=maxit {
        let s = 1.0 / beta;
        let v: Vec<Complex64> = y.iter().map(|yi| yi * s).collect();
        let av = a.apply(&v);
        y = av.clone();
        if it >= 2 {
            axpy((-beta / oldb).into(), &r1, &mut y);
        }
        let alfa = dot(&v, &y).re;
        axpy((-alfa / beta).into(), &r2, &mut y);
        r1 = std::mem::replace(&mut r2, y);
        y = precondition(m, &r2)?;
        oldb = beta;
        let beta_sq = dot(&r2, &y).re;
        if beta_sq < 0.0 {
            return Err(Error::NotPositiveDefinite(format!("negative Lanczos norm {beta_sq:e} at iteration {it}")));
        }
        beta = beta_sq.sqrt();

        let oldeps = epsln;
        let delta = cs * dbar + sn * alfa;
        let gbar = sn * dbar - cs * alfa;
        epsln = sn * beta;
        dbar = -cs * beta;
        let gamma = gbar.hypot(beta).max(f64::EPSILON);
        cs = gbar / gamma;
        sn = beta / gamma;
        let phi = cs * phibar;
        phibar *= sn;

        // w_k = (v - oldeps w_{k-2} - delta w_{k-1}) / gamma, and the same for A w
        let w1 = std::mem::replace(&mut w2, std::mem::take(&mut w));
        let aw1 = std::mem::replace(&mut aw2, std::mem::take(&mut aw));
        let inv = 1.0 / gamma;
        w = v.iter().zip(&w1).zip(&w2).map(|((vi, a1), a2)| (vi - a1 * oldeps - a2 * delta) * inv).collect();
        aw = av.iter().zip(&aw1).zip(&aw2).map(|((vi, a1), a2)| (vi - a1 * oldeps - a2 * delta) * inv).collect();

        axpy(phi.into(), &w, &mut x);
        axpy((-phi).into(), &aw, &mut r);
        relres = vec_norm(&r) / bnorm;
        report.iterations = it;
        report.residual_history.push(relres);

        let exhausted = beta < breakdown;
        if relres < opts.tol || exhausted {
            let r_true = true_residual(a, b, &x);
            relres = vec_norm(&r_true) / bnorm;
            if relres < opts.tol {
                report.converged = true;
                break;
            }
            if exhausted {
                break;
            }
            r = r_true;
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
