// CG, MINRES and GMRES on h(A) x = ones, with and without circulant
// preconditioners.
//
// $ cargo run --release --example krylov_solvers
use circprec::circulant::{strang_preconditioner, superoptimal_preconditioner};
use circprec::krylov::{cg, gmres, minres, Preconditioner, SolveOptions};
use circprec::matfunc::{hermitian_eig, ScalarFunction};
use circprec::toeplitz::{builtin_wiener_function, ToeplitzMatrix};
use num_complex::Complex64;

fn main() -> circprec::Result<()> {
    let n = 256;
    let a = ToeplitzMatrix::from_function(&builtin_wiener_function(), n)?;
    let eig = hermitian_eig(&a.to_dense())?;
    let t = superoptimal_preconditioner(&a)?;
    let s = strang_preconditioner(&a);
    let b = vec![Complex64::new(1.0, 0.0); n];
    let opts = SolveOptions::default();

    let exp_a = eig.apply_function(&ScalarFunction::Exp)?;
    let abs_t = t.apply_function(&ScalarFunction::Exp)?.abs();
    let abs_s = s.apply_function(&ScalarFunction::Exp)?.abs();
    for (name, m) in [("none", None), ("|exp T|", Some(&abs_t as &dyn Preconditioner)), ("|exp S|", Some(&abs_s))] {
        let r = cg(&exp_a, m, &b, &opts)?.report;
        println!("cg     exp  {name:>8}: {:>4} iterations, relres {:.2e}", r.iterations, r.true_relres);
    }

    // cos(A) is indefinite: MINRES with |cos T|, GMRES with cos T
    let cos_a = eig.apply_function(&ScalarFunction::Cos)?;
    let cos_t = t.apply_function(&ScalarFunction::Cos)?;
    let r = minres(&cos_a, None, &b, &opts)?.report;
    println!("minres cos      none: {:>4} iterations", r.iterations);
    let r = minres(&cos_a, Some(&cos_t.abs()), &b, &opts)?.report;
    println!("minres cos   |cos T|: {:>4} iterations", r.iterations);
    let r = gmres(&cos_a, Some(&cos_t), &b, &opts)?.report;
    println!("gmres  cos     cos T: {:>4} iterations", r.iterations);
    Ok(())
}
