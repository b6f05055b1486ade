// The built-in symbol, its Toeplitz matrices and the fast product.
//
// $ cargo run --example toeplitz_matvec
use circprec::toeplitz::{builtin_wiener_function, coefficients_from_quadrature, write_coefficients_csv, ToeplitzMatrix};
use num_complex::Complex64;

fn main() -> circprec::Result<()> {
    let f = builtin_wiener_function();
    let bounds = f.bounds().expect("estimated on construction");
    println!("a_0 = {}, a_1 = {:.6}, f in [{:.4}, {:.4}]", f.coefficient(0), f.coefficient(1), bounds.min, bounds.max);

    let n = 300;
    let a = ToeplitzMatrix::from_function(&f, n)?;
    let x: Vec<Complex64> = (0..n).map(|i| Complex64::new((i as f64).sin(), 0.5)).collect();
    let fast = a.matvec(&x)?;
    let dense = a.to_dense().matvec(&x)?;
    let err = fast.iter().zip(&dense).map(|(p, q)| (p - q).norm()).fold(0.0, f64::max);
    println!("n={n}: fast vs dense product differ by {err:.1e}");
    println!("||A||_2 ~ {:.4} (bounded by f_max)", a.norm2_estimate(100));

    // coefficients of a user function by quadrature
    let g = coefficients_from_quadrature(|x| 3.0 + 2.0 * x.cos(), 4, 64)?;
    println!("quadrature: a_0 = {:.3}, a_1 = {:.3}", g.coefficient(0), g.coefficient(1));

    write_coefficients_csv(&f, 3, std::io::stdout().lock())
}
