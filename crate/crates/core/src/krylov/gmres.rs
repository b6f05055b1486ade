use std::time::Instant;

use num_complex::Complex64;

use super::{check_problem, precondition, true_residual, LinearOperator, Method, Preconditioner, Solution, SolveOptions, SolveReport};
use crate::dense::{dot, vec_norm};
use crate::error::Result;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Complex Givens rotation `[c s; -conj(s) c]` with real `c` mapping
/// `(a, b)` to `(r, 0)`.
fn givens(a: Complex64, b: Complex64) -> (f64, Complex64, Complex64) {
    let (na, nb) = (a.norm(), b.norm());
    if nb == 0.0 {
        return (1.0, ZERO, a);
    }
    if na == 0.0 {
        return (0.0, b.conj() / nb, nb.into());
    }
    let t = na.hypot(nb);
    let phase = a / na;
    (na / t, phase * b.conj() / t, phase * t)
}

/// Full (unrestarted) GMRES with modified Gram-Schmidt Arnoldi and left
/// preconditioning. Stops when `||M^{-1}(b - A x)|| / ||M^{-1} b||` drops below
/// the tolerance; a zero subdiagonal entry ends the run as a lucky breakdown.
pub fn gmres(
    a: &dyn LinearOperator,
    m: Option<&dyn Preconditioner>,
    b: &[Complex64],
    opts: &SolveOptions,
) -> Result<Solution> {
    check_problem(a, m, b)?;
    let start = Instant::now();
    let n = b.len();
    let maxit = opts.max_iterations(n).min(n);
    let bnorm = vec_norm(b);
    let mut report = SolveReport {
        method: Method::Gmres,
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
    let mut x = vec![ZERO; n];
    let r0 = precondition(m, b)?;
    let beta = vec_norm(&r0);
    if bnorm == 0.0 || beta == 0.0 {
        report.converged = true;
        return Ok(Solution { x, report });
    }

    let mut basis: Vec<Vec<Complex64>> = vec![r0.iter().map(|v| v / beta).collect()];
    // hessenberg[j] holds column j (length j + 2) after rotation
    let mut hessenberg: Vec<Vec<Complex64>> = Vec::new();
    let mut rotations: Vec<(f64, Complex64)> = Vec::new();
    let mut g = vec![Complex64::new(beta, 0.0)];

    let solve_x = |hess: &[Vec<Complex64>], g: &[Complex64], basis: &[Vec<Complex64>]| -> Vec<Complex64> {
        let k = hess.len();
        let mut y = vec![ZERO; k];
        for i in (0..k).rev() {
            let mut s = g[i];
            for j in (i + 1)..k {
                s -= hess[j][i] * y[j];
            }
            y[i] = s / hess[i][i];
        }
        let mut x = vec![ZERO; basis[0].len()];
        for (yj, vj) in y.iter().zip(basis) {
            for (xi, vi) in x.iter_mut().zip(vj) {
                *xi += yj * vi;
            }
        }
        x
    };

    let mut pre_relres = 1.0;
    for j in 0..maxit {
        let mut w = precondition(m, &a.apply(&basis[j]))?;
        let mut col = Vec::with_capacity(j + 2);
        for v in &basis {
            let h = dot(v, &w);
            for (wi, vi) in w.iter_mut().zip(v) {
                *wi -= h * vi;
            }
            col.push(h);
        }
        let hnext = vec_norm(&w);
        col.push(hnext.into());

        for (i, &(c, s)) in rotations.iter().enumerate() {
            let (hi, hi1) = (col[i], col[i + 1]);
            col[i] = hi * c + s * hi1;
            col[i + 1] = -s.conj() * hi + hi1 * c;
        }
        let (c, s, rr) = givens(col[j], col[j + 1]);
        col[j] = rr;
        col[j + 1] = ZERO;
        rotations.push((c, s));
        let gj = g[j];
        g[j] = gj * c;
        g.push(-s.conj() * gj);
        hessenberg.push(col);

        let estimate = g[j + 1].norm() / beta;
        report.iterations = j + 1;
        report.residual_history.push(estimate);

        let lucky = hnext <= 1e-14 * beta.max(hessenberg[j][j].norm());
        let last = j + 1 == maxit;
        if estimate < opts.tol || lucky || last {
            x = solve_x(&hessenberg, &g, &basis);
            let r = true_residual(a, b, &x);
            pre_relres = vec_norm(&precondition(m, &r)?) / beta;
            if pre_relres < opts.tol {
                report.converged = true;
                break;
            }
            if lucky || last {
                break;
            }
        }
        basis.push(w.iter().map(|v| v / hnext).collect());
    }

    report.final_relres = pre_relres;
    report.true_relres = vec_norm(&true_residual(a, b, &x)) / bnorm;
    report.seconds = start.elapsed().as_secs_f64();
    Ok(Solution { x, report })
}
