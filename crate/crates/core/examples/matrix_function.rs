// Dense matrix functions through the Hermitian eigendecomposition, and the
// truncated Taylor series with its remainder bound.
//
// $ cargo run --example matrix_function
use circprec::matfunc::{hermitian_eig, matrix_function, taylor_matrix_function, ScalarFunction};
use circprec::toeplitz::{builtin_wiener_function, ToeplitzMatrix};

fn main() -> circprec::Result<()> {
    let a = ToeplitzMatrix::from_function(&builtin_wiener_function(), 128)?.to_dense();
    let eig = hermitian_eig(&a)?;
    println!(
        "eigenvalues in [{:.4}, {:.4}], residual {:.1e}, orthogonality {:.1e}",
        eig.values[0],
        eig.values[127],
        eig.residual(a.matrix()),
        eig.orthogonality_defect()
    );

    let exp_a = matrix_function(&a, &ScalarFunction::Exp)?;
    for terms in [10, 20, 30, 40] {
        let (approx, bound) = taylor_matrix_function(&a, &ScalarFunction::Exp, terms)?;
        let err = approx.matrix().sub(exp_a.matrix())?.norm2_estimate(100);
        println!("{terms:>2} terms: ||error||_2 {err:.2e} <= remainder bound {bound:.2e}");
    }
    Ok(())
}
