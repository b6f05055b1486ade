//! Discrete Fourier transforms in one and two dimensions.
//!
//! Convention used throughout the crate:
//!
//! ```text
//! forward:  y_k = sum_j x_j exp(-2 pi i j k / n)
//! inverse:  x_j = (1/n) sum_k y_k exp(+2 pi i j k / n)
//! ```
//!
//! so the unitary Fourier matrix is `U_n = F / sqrt(n)` and a circulant matrix
//! with first column `c` satisfies `C = U_n^* diag(F c) U_n`.
//!
//! Power-of-two lengths go through an iterative radix-2 transform; every other
//! length falls back to the direct O(n^2) sum.

use std::f64::consts::PI;

use num_complex::Complex64;

/// Unnormalized forward transform.
pub fn forward(x: &[Complex64]) -> Vec<Complex64> {
    let mut y = x.to_vec();
    forward_in_place(&mut y);
    y
}

/// Inverse transform, including the `1/n` factor.
pub fn inverse(y: &[Complex64]) -> Vec<Complex64> {
    let mut x = y.to_vec();
    inverse_in_place(&mut x);
    x
}

pub fn forward_in_place(data: &mut [Complex64]) {
    transform(data, -1.0);
}

pub fn inverse_in_place(data: &mut [Complex64]) {
    transform(data, 1.0);
    let scale = 1.0 / data.len().max(1) as f64;
    for v in data.iter_mut() {
        *v *= scale;
    }
}

fn transform(data: &mut [Complex64], sign: f64) {
    let n = data.len();
    if n <= 1 {
        return;
    }
    if n.is_power_of_two() {
        radix2(data, sign);
    } else {
        direct(data, sign);
    }
}

fn direct(data: &mut [Complex64], sign: f64) {
    let n = data.len();
    let roots: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(1.0, sign * 2.0 * PI * k as f64 / n as f64))
        .collect();
    let out: Vec<Complex64> = (0..n)
        .map(|k| {
            data.iter()
                .enumerate()
                .fold(Complex64::new(0.0, 0.0), |acc, (j, &x)| acc + x * roots[(j * k) % n])
        })
        .collect();
    data.copy_from_slice(&out);
}

fn radix2(data: &mut [Complex64], sign: f64) {
    let n = data.len();
    let bits = n.trailing_zeros();

    for i in 0..n {
        let j = i.reverse_bits() >> (usize::BITS - bits);
        if j > i {
            data.swap(i, j);
        }
    }

    // Twiddles are evaluated directly rather than by repeated multiplication
    // so that the error does not grow with n.
    let half = n / 2;
    let twiddles: Vec<Complex64> = (0..half)
        .map(|k| Complex64::from_polar(1.0, sign * 2.0 * PI * k as f64 / n as f64))
        .collect();

    let mut len = 2;
    while len <= n {
        let step = n / len;
        let half_len = len / 2;
        for start in (0..n).step_by(len) {
            for k in 0..half_len {
                let w = twiddles[k * step];
                let a = data[start + k];
                let b = data[start + k + half_len] * w;
                data[start + k] = a + b;
                data[start + k + half_len] = a - b;
            }
        }
        len <<= 1;
    }
}

/// Forward 2D transform of a `rows x cols` array stored row-major
/// (column index fastest).
pub fn forward2(data: &[Complex64], rows: usize, cols: usize) -> Vec<Complex64> {
    let mut out = data.to_vec();
    forward2_in_place(&mut out, rows, cols);
    out
}

pub fn inverse2(data: &[Complex64], rows: usize, cols: usize) -> Vec<Complex64> {
    let mut out = data.to_vec();
    inverse2_in_place(&mut out, rows, cols);
    out
}

pub fn forward2_in_place(data: &mut [Complex64], rows: usize, cols: usize) {
    apply2(data, rows, cols, forward_in_place);
}

pub fn inverse2_in_place(data: &mut [Complex64], rows: usize, cols: usize) {
    apply2(data, rows, cols, inverse_in_place);
}

fn apply2(data: &mut [Complex64], rows: usize, cols: usize, f: fn(&mut [Complex64])) {
    assert_eq!(data.len(), rows * cols, "2D transform: buffer is not rows x cols");
    for row in data.chunks_exact_mut(cols) {
        f(row);
    }
    let mut column = vec![Complex64::new(0.0, 0.0); rows];
    for c in 0..cols {
        for r in 0..rows {
            column[r] = data[r * cols + c];
        }
        f(&mut column);
        for r in 0..rows {
            data[r * cols + c] = column[r];
        }
    }
}

/// Smallest power of two that is `>= n` (and at least 1).
pub fn next_pow2(n: usize) -> usize {
    n.max(1).next_power_of_two()
}
