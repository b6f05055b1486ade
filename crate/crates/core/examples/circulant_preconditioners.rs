// Strang, optimal and superoptimal circulants of a Toeplitz matrix, and
// their absolute values.
//
// $ cargo run --example circulant_preconditioners
use circprec::circulant::{optimal_preconditioner, strang_preconditioner, superoptimal_preconditioner};
use circprec::matfunc::ScalarFunction;
use circprec::toeplitz::{builtin_wiener_function, ToeplitzMatrix};

fn main() -> circprec::Result<()> {
    let a = ToeplitzMatrix::from_function(&builtin_wiener_function(), 64)?;
    let preconditioners = [
        ("strang", strang_preconditioner(&a)),
        ("optimal", optimal_preconditioner(&a)),
        ("superoptimal", superoptimal_preconditioner(&a)?),
    ];
    for (name, c) in &preconditioners {
        let eigs: Vec<f64> = c.eigenvalues().iter().map(|e| e.re).collect();
        let (lo, hi) = eigs.iter().fold((f64::MAX, f64::MIN), |(l, h), &e| (l.min(e), h.max(e)));
        println!("{name:>12}: hermitian {} hpd {} eigenvalues in [{lo:.4}, {hi:.4}]", c.is_hermitian(), c.is_hpd());
    }

    // |cos(S)| is positive definite even though cos(S) is not
    let cos_s = preconditioners[0].1.apply_function(&ScalarFunction::Cos)?;
    println!("cos(S) hpd: {}, |cos(S)| hpd: {}", cos_s.is_hpd(), cos_s.abs().is_hpd());
    Ok(())
}
