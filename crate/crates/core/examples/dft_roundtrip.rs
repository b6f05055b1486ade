// Forward and inverse DFT, one and two levels.
//
// $ cargo run --example dft_roundtrip
use circprec::dft;
use num_complex::Complex64;

fn main() {
    let x: Vec<Complex64> = [0.0, 1.0, 0.0, 0.0].iter().map(|&v| v.into()).collect();
    let y = dft::forward(&x);
    println!("F [0,1,0,0] = {y:?}"); // [1, -i, -1, i]

    // lengths that are not powers of two use the direct transform
    let z: Vec<Complex64> = (0..6).map(|k| Complex64::new(k as f64, -1.0)).collect();
    let back = dft::inverse(&dft::forward(&z));
    let err = z.iter().zip(&back).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    println!("n=6 roundtrip error {err:.1e}");

    // 3 x 4 grid, inner index fastest
    let mut grid = vec![Complex64::new(0.0, 0.0); 12];
    grid[0] = 1.0.into();
    dft::forward2_in_place(&mut grid, 3, 4);
    println!("2D transform of a delta is flat: {}", grid.iter().all(|v| (v - 1.0).norm() < 1e-15));
}
