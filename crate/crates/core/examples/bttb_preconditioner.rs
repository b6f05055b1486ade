// A BTTB matrix, its optimal BCCB preconditioner and MINRES on exp(A).
//
// $ cargo run --release --example bttb_preconditioner
use circprec::bttb::{builtin_bttb_function, optimal_bccb_preconditioner, BttbMatrix};
use circprec::krylov::{minres, SolveOptions};
use circprec::matfunc::{hermitian_eig, ScalarFunction};
use num_complex::Complex64;

fn main() -> circprec::Result<()> {
    let (n, m) = (16, 16);
    let a = BttbMatrix::from_function(&builtin_bttb_function(), n, m)?;
    let c = optimal_bccb_preconditioner(&a);
    println!("({n},{m}): c(A) hermitian {}, first entry {:.5}", c.is_hermitian(), c.first_column()[0]);

    let exp_a = hermitian_eig(&a.to_dense())?.apply_function(&ScalarFunction::Exp)?;
    let m_abs = c.apply_function(&ScalarFunction::Exp)?.abs();
    let b = vec![Complex64::new(1.0, 0.0); n * m];
    let opts = SolveOptions::default();
    let plain = minres(&exp_a, None, &b, &opts)?.report.iterations;
    let pre = minres(&exp_a, Some(&m_abs), &b, &opts)?.report.iterations;
    println!("minres: {plain} iterations without, {pre} with |exp c(A)|");
    Ok(())
}
