use num_complex::Complex64;
use std::ops::{Add, Mul, Neg, Sub};

/// Dense complex-coefficient polynomial in one variable; `coeffs[j]` holds the
/// coefficient of z^j. The zero polynomial is the empty coefficient list and
/// has no degree; every other value keeps a nonzero leading coefficient.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexPoly {
    coeffs: Vec<Complex64>,
}

impl ComplexPoly {
    /// Builds a polynomial, trimming trailing (high-degree) zero coefficients.
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        while coeffs.last().is_some_and(|c| *c == Complex64::ZERO) {
            coeffs.pop();
        }
        ComplexPoly { coeffs }
    }

    pub fn zero() -> Self {
        ComplexPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: Complex64) -> Self {
        Self::new(vec![c])
    }

    /// c · z^deg
    pub fn monomial(c: Complex64, deg: usize) -> Self {
        let mut coeffs = vec![Complex64::ZERO; deg + 1];
        coeffs[deg] = c;
        Self::new(coeffs)
    }

    /// a0 + a1·z
    pub fn linear(a0: Complex64, a1: Complex64) -> Self {
        Self::new(vec![a0, a1])
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Coefficient of z^j (zero beyond the degree).
    pub fn coeff(&self, j: usize) -> Complex64 {
        self.coeffs.get(j).copied().unwrap_or(Complex64::ZERO)
    }

    /// None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Horner evaluation.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::ZERO;
        for &c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    /// Term-by-term evaluation (independent of `eval`; used as a cross-check route).
    pub fn eval_terms(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::ZERO;
        let mut zj = Complex64::ONE;
        for &c in &self.coeffs {
            acc += c * zj;
            zj *= z;
        }
        acc
    }

    pub fn derivative(&self) -> ComplexPoly {
        if self.coeffs.len() <= 1 {
            return ComplexPoly::zero();
        }
        ComplexPoly::new(
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(i, &c)| c * (i + 1) as f64)
                .collect(),
        )
    }

    pub fn scale(&self, s: Complex64) -> ComplexPoly {
        ComplexPoly::new(self.coeffs.iter().map(|&c| c * s).collect())
    }

    /// Snaps coefficients with |c| < rel · max|c| to exact zero and re-trims.
    /// Used to make cancellation-born zeros (and hence degrees) exact.
    pub fn snap_small_to_zero(self, rel: f64) -> ComplexPoly {
        let max = self.coeffs.iter().map(|c| c.norm()).fold(0.0f64, f64::max);
        if max == 0.0 {
            return ComplexPoly::zero();
        }
        ComplexPoly::new(
            self.coeffs
                .into_iter()
                .map(|c| {
                    if c.norm() < rel * max {
                        Complex64::ZERO
                    } else {
                        c
                    }
                })
                .collect(),
        )
    }
}

impl Add for &ComplexPoly {
    type Output = ComplexPoly;
    fn add(self, rhs: &ComplexPoly) -> ComplexPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        ComplexPoly::new((0..n).map(|j| self.coeff(j) + rhs.coeff(j)).collect())
    }
}

impl Sub for &ComplexPoly {
    type Output = ComplexPoly;
    fn sub(self, rhs: &ComplexPoly) -> ComplexPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        ComplexPoly::new((0..n).map(|j| self.coeff(j) - rhs.coeff(j)).collect())
    }
}

impl Mul for &ComplexPoly {
    type Output = ComplexPoly;
    fn mul(self, rhs: &ComplexPoly) -> ComplexPoly {
        if self.is_zero() || rhs.is_zero() {
            return ComplexPoly::zero();
        }
        let mut out = vec![Complex64::ZERO; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        ComplexPoly::new(out)
    }
}

impl Neg for &ComplexPoly {
    type Output = ComplexPoly;
    fn neg(self) -> ComplexPoly {
        self.scale(-Complex64::ONE)
    }
}
