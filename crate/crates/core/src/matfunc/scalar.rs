use std::f64::consts::FRAC_PI_2;
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Analytic scalar function `h(z) = sum_k a_k z^k`, applied to matrices
/// through their spectra.
#[derive(Debug, Clone, PartialEq)]
pub enum ScalarFunction {
    Identity,
    Exp,
    Cos,
    Sinh,
    /// Polynomial with real coefficients in ascending degree.
    Polynomial(Vec<f64>),
    /// Truncated Taylor series with a declared radius of convergence;
    /// evaluation at `|z| >= radius` is rejected.
    Taylor { coeffs: Vec<f64>, radius: f64 },
}

impl fmt::Display for ScalarFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Identity => f.write_str("identity"),
            Self::Exp => f.write_str("exp"),
            Self::Cos => f.write_str("cos"),
            Self::Sinh => f.write_str("sinh"),
            Self::Polynomial(c) if c.as_slice() == [1.0, 1.0, 1.0, 1.0] => f.write_str("cubic"),
            Self::Polynomial(c) => write!(f, "poly{c:?}"),
            Self::Taylor { .. } => f.write_str("taylor"),
        }
    }
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|j| j as f64).product()
}

/// Coefficients of the `order`-th derivative of `sum_j c_j z^j`.
fn derivative_coeffs(coeffs: &[f64], order: usize) -> Vec<f64> {
    coeffs
        .iter()
        .enumerate()
        .skip(order)
        .map(|(j, &c)| c * ((j - order + 1)..=j).map(|t| t as f64).product::<f64>())
        .collect()
}

fn horner<T>(coeffs: &[f64], z: T) -> T
where
    T: Copy + std::ops::Mul<Output = T> + std::ops::Add<f64, Output = T> + From<f64>,
{
    coeffs.iter().rev().fold(T::from(0.0), |acc, &c| acc * z + c)
}

impl ScalarFunction {
    /// `z^3 + z^2 + z + 1`.
    pub fn cubic() -> Self {
        Self::Polynomial(vec![1.0, 1.0, 1.0, 1.0])
    }

    pub fn radius(&self) -> f64 {
        match self {
            Self::Taylor { radius, .. } => *radius,
            _ => f64::INFINITY,
        }
    }

    fn check_domain(&self, z: Complex64) -> Result<()> {
        let r = self.radius();
        if !(z.norm() < r) {
            return Err(Error::OutsideDomain { function: self.to_string(), value: z, radius: r });
        }
        Ok(())
    }

    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        self.check_domain(z)?;
        Ok(match self {
            Self::Identity => z,
            Self::Exp => z.exp(),
            Self::Cos => z.cos(),
            Self::Sinh => z.sinh(),
            Self::Polynomial(c) | Self::Taylor { coeffs: c, .. } => horner(c, z),
        })
    }

    pub fn eval_real(&self, x: f64) -> Result<f64> {
        self.check_domain(x.into())?;
        Ok(match self {
            Self::Identity => x,
            Self::Exp => x.exp(),
            Self::Cos => x.cos(),
            Self::Sinh => x.sinh(),
            Self::Polynomial(c) | Self::Taylor { coeffs: c, .. } => horner(c, x),
        })
    }

    /// Taylor coefficient `a_k = h^(k)(0) / k!`.
    pub fn taylor_coefficient(&self, k: usize) -> f64 {
        match self {
            Self::Identity => f64::from(u8::from(k == 1)),
            Self::Exp => 1.0 / factorial(k),
            Self::Cos if k % 2 == 0 => (if k % 4 == 0 { 1.0 } else { -1.0 }) / factorial(k),
            Self::Sinh if k % 2 == 1 => 1.0 / factorial(k),
            Self::Cos | Self::Sinh => 0.0,
            Self::Polynomial(c) | Self::Taylor { coeffs: c, .. } => c.get(k).copied().unwrap_or(0.0),
        }
    }

    /// `h^(order)(x)` for real `x`.
    pub fn derivative(&self, order: usize, x: f64) -> f64 {
        match self {
            Self::Identity => match order {
                0 => x,
                1 => 1.0,
                _ => 0.0,
            },
            Self::Exp => x.exp(),
            Self::Cos => (x + order as f64 * FRAC_PI_2).cos(),
            Self::Sinh if order % 2 == 0 => x.sinh(),
            Self::Sinh => x.cosh(),
            Self::Polynomial(c) | Self::Taylor { coeffs: c, .. } => horner(&derivative_coeffs(c, order), x),
        }
    }

    /// Upper bound on `max |h^(order)(s)|` over `s` between `0` and `x`.
    ///
    /// Exact for the built-in transcendental functions; polynomial and Taylor
    /// variants use the coefficient-magnitude majorant evaluated at `|x|`.
    pub fn derivative_bound_on_segment(&self, order: usize, x: f64) -> f64 {
        let (lo, hi) = if x < 0.0 { (x, 0.0) } else { (0.0, x) };
        match self {
            Self::Identity => match order {
                0 => x.abs(),
                1 => 1.0,
                _ => 0.0,
            },
            Self::Exp => hi.exp(),
            Self::Cos => {
                // |cos(s + order*pi/2)| reaches 1 iff the shifted segment holds a multiple of pi
                let shift = order as f64 * FRAC_PI_2;
                let first = ((lo + shift) / std::f64::consts::PI).ceil();
                let last = ((hi + shift) / std::f64::consts::PI).floor();
                if first <= last {
                    1.0
                } else {
                    self.derivative(order, lo).abs().max(self.derivative(order, hi).abs())
                }
            }
            Self::Sinh => self.derivative(order, x.abs()).abs(),
            Self::Polynomial(c) | Self::Taylor { coeffs: c, .. } => {
                let abs: Vec<f64> = derivative_coeffs(c, order).iter().map(|v| v.abs()).collect();
                horner(&abs, x.abs())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cubic_values() {
        let h = ScalarFunction::cubic();
        assert_eq!(h.eval_real(1.0).unwrap(), 4.0);
        assert_eq!(h.eval_real(2.0).unwrap(), 15.0);
        assert_eq!(h.derivative(1, 2.0), 3.0 * 4.0 + 2.0 * 2.0 + 1.0);
        assert_eq!(h.derivative(3, 0.7), 6.0);
        assert_eq!(h.derivative(4, 0.7), 0.0);
        assert_eq!(h.to_string(), "cubic");
    }

    #[test]
    fn taylor_radius_is_enforced() {
        // 1/(1-z) truncated
        let h = ScalarFunction::Taylor { coeffs: vec![1.0; 20], radius: 1.0 };
        assert!(h.eval_real(0.5).is_ok());
        let err = h.eval_real(1.0).unwrap_err();
        assert!(matches!(err, Error::OutsideDomain { .. }));
        assert!(h.eval(Complex64::new(0.0, -1.5)).is_err());
    }

    #[test]
    fn taylor_coefficients_of_entire_functions() {
        assert_eq!(ScalarFunction::Exp.taylor_coefficient(3), 1.0 / 6.0);
        assert_eq!(ScalarFunction::Cos.taylor_coefficient(2), -0.5);
        assert_eq!(ScalarFunction::Cos.taylor_coefficient(4), 1.0 / 24.0);
        assert_eq!(ScalarFunction::Cos.taylor_coefficient(3), 0.0);
        assert_eq!(ScalarFunction::Sinh.taylor_coefficient(3), 1.0 / 6.0);
        assert_eq!(ScalarFunction::Sinh.taylor_coefficient(2), 0.0);
    }

    #[test]
    fn derivative_bounds_dominate_samples() {
        let fs = [
            ScalarFunction::Exp,
            ScalarFunction::Cos,
            ScalarFunction::Sinh,
            ScalarFunction::cubic(),
            ScalarFunction::Identity,
        ];
        for h in &fs {
            for order in 0..6 {
                for &x in &[-3.3, -0.4, 0.0, 0.2, 1.7, 5.0] {
                    let bound = h.derivative_bound_on_segment(order, x);
                    for t in 0..=200 {
                        let s = x * t as f64 / 200.0;
                        assert!(h.derivative(order, s).abs() <= bound * (1.0 + 1e-12) + 1e-15, "{h} {order} {x}");
                    }
                }
            }
        }
    }

    #[test]
    fn cos_derivatives() {
        let x = 0.3;
        assert!((ScalarFunction::Cos.derivative(1, x) + x.sin()).abs() < 1e-15);
        assert!((ScalarFunction::Cos.derivative(2, x) + x.cos()).abs() < 1e-15);
    }
}
