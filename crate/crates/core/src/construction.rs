use crate::error::{Error, Result};
use crate::poly::ComplexPoly;
use num_complex::Complex64;

/// Largest order for which the dense expanded coefficients are built.
/// The binomial coefficients of (z+a)^(n-1) grow like 2^n; beyond this cap the
/// expansion is numerically useless, while the factored evaluator stays exact.
pub const MAX_EXPANDED_ORDER: u32 = 512;

/// Relative threshold for snapping cancellation-born coefficients to exact zero.
const SNAP_REL: f64 = 1e-9;

/// Parameters of the two-polynomial family: order n and a unit-modulus center a.
/// a = 1 is the standard construction.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConstructionParams {
    pub n: u32,
    pub a: Complex64,
}

impl ConstructionParams {
    pub fn new(n: u32, a: Complex64) -> Result<Self> {
        if n < 4 {
            return Err(Error::InvalidArgument(format!(
                "the construction requires n >= 4, got n = {n}"
            )));
        }
        if (a.norm() - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidArgument(format!(
                "the perturbation center must have unit modulus, got |a| = {}",
                a.norm()
            )));
        }
        Ok(ConstructionParams { n, a })
    }

    pub fn standard(n: u32) -> Result<Self> {
        Self::new(n, Complex64::ONE)
    }

    /// a = e^(i t)
    pub fn with_arg(n: u32, t: f64) -> Result<Self> {
        Self::new(n, Complex64::from_polar(1.0, t))
    }
}

/// Factored evaluator for the family
///   S(z) = i z^n,   T(z) = i (z+a)^(n-1) (z - (n-1)a),
/// valid at every order (no expanded coefficients involved). Since
/// p = S + T and q = S - T, the map p(z) + conj(q(z)) collapses to
/// 2·Re S(z) + 2i·Im T(z) for any unit a — an algebraic identity used as the
/// well-conditioned evaluation route.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FactoredFamily {
    pub n: u32,
    pub a: Complex64,
}

impl FactoredFamily {
    pub fn new(params: &ConstructionParams) -> Self {
        FactoredFamily {
            n: params.n,
            a: params.a,
        }
    }

    pub fn standard(n: u32) -> Result<Self> {
        Ok(Self::new(&ConstructionParams::standard(n)?))
    }

    pub fn s(&self, z: Complex64) -> Complex64 {
        Complex64::I * z.powi(self.n as i32)
    }

    pub fn t(&self, z: Complex64) -> Complex64 {
        let nm1 = (self.n - 1) as f64;
        Complex64::I * (z + self.a).powi(self.n as i32 - 1) * (z - self.a * nm1)
    }

    pub fn im_t(&self, z: Complex64) -> f64 {
        self.t(z).im
    }

    /// S'(z) = i n z^(n-1)
    pub fn s_prime(&self, z: Complex64) -> Complex64 {
        Complex64::I * (self.n as f64) * z.powi(self.n as i32 - 1)
    }

    /// T'(z) = i n (z+a)^(n-2) (z - (n-2)a)
    pub fn t_prime(&self, z: Complex64) -> Complex64 {
        let nm2 = (self.n - 2) as f64;
        Complex64::I * (self.n as f64) * (z + self.a).powi(self.n as i32 - 2) * (z - self.a * nm2)
    }

    pub fn p_prime(&self, z: Complex64) -> Complex64 {
        self.s_prime(z) + self.t_prime(z)
    }

    pub fn q_prime(&self, z: Complex64) -> Complex64 {
        self.s_prime(z) - self.t_prime(z)
    }

    /// p(z) + conj(q(z)) = 2·Re S(z) + 2i·Im T(z)
    pub fn eval(&self, z: Complex64) -> Complex64 {
        Complex64::new(2.0 * self.s(z).re, 2.0 * self.im_t(z))
    }

    /// Re S(z) = -Im(z^n) as a (sign, ln|value|) pair, computed from the
    /// polar split |z|^n · (z/|z|)^n so it never overflows: the power of the
    /// unit phase stays near the unit circle and the magnitude lives in log
    /// space. Zero is reported as (0.0, -∞). Exact on the real axis.
    pub fn re_s_signlog(&self, z: Complex64) -> (f64, f64) {
        let r = z.norm();
        if r == 0.0 {
            return (0.0, f64::NEG_INFINITY);
        }
        let u = (z / r).powi(self.n as i32);
        let m = -u.im;
        if m == 0.0 {
            return (0.0, f64::NEG_INFINITY);
        }
        (m.signum(), f64::from(self.n) * r.ln() + m.abs().ln())
    }

    /// Im T(z) = Re((z+a)^(n-1) (z-(n-1)a)) as a (sign, ln|value|) pair,
    /// overflow-safe by the same polar split. Exact when both factors are
    /// real, which covers the real axis at a = 1.
    pub fn im_t_signlog(&self, z: Complex64) -> (f64, f64) {
        let w1 = z + self.a;
        let w2 = z - self.a * f64::from(self.n - 1);
        let (r1, r2) = (w1.norm(), w2.norm());
        if r1 == 0.0 || r2 == 0.0 {
            return (0.0, f64::NEG_INFINITY);
        }
        let u = (w1 / r1).powi(self.n as i32 - 1) * (w2 / r2);
        if u.re == 0.0 {
            return (0.0, f64::NEG_INFINITY);
        }
        (
            u.re.signum(),
            f64::from(self.n - 1) * r1.ln() + r2.ln() + u.re.abs().ln(),
        )
    }

    /// |f(z)| = hypot(2·Re S, 2·Im T) combined in log scale: exact 0 at exact
    /// zeros of both components, +∞ when the true magnitude exceeds the f64
    /// range, and equal to the direct evaluation in between.
    pub fn eval_norm_robust(&self, z: Complex64) -> f64 {
        let (_, l1) = self.re_s_signlog(z);
        let (_, l2) = self.im_t_signlog(z);
        let m = l1.max(l2);
        if m == f64::NEG_INFINITY {
            return 0.0;
        }
        let h = (l1 - m).exp().hypot((l2 - m).exp());
        2.0 * (m + h.ln()).exp()
    }

    /// Sign information of det J_f = |p'|² - |q'|² = 4·Re(S'(z)·conj(T'(z))).
    /// Returns (sign, cosine) where cosine = det / (4|S'||T'|) ∈ [-1, 1] is a
    /// scale-free degeneracy measure: exactly 0.0 when a factor of S'·conj(T')
    /// vanishes, tiny when the two derivative directions are nearly
    /// orthogonal. Never overflows.
    pub fn det_signlog(&self, z: Complex64) -> (f64, f64) {
        let w1 = z + self.a;
        let w2 = z - self.a * f64::from(self.n - 2);
        let (r0, r1, r2) = (z.norm(), w1.norm(), w2.norm());
        if r0 == 0.0 || r1 == 0.0 || r2 == 0.0 {
            return (0.0, 0.0);
        }
        let u = (z / r0).powi(self.n as i32 - 1)
            * ((w1 / r1).powi(self.n as i32 - 2) * (w2 / r2)).conj();
        (u.re.signum(), u.re)
    }
}

/// The harmonic map f(z) = p(z) + conj(q(z)) with analytic part p and
/// coanalytic part q, deg p > deg q. Maps built by `build_standard` /
/// `build_perturbed` also carry the factored family; evaluation prefers the
/// factored route because it is exact in structure and better conditioned.
#[derive(Clone, Debug, PartialEq)]
pub struct HarmonicMap {
    analytic: ComplexPoly,
    coanalytic: ComplexPoly,
    analytic_prime: ComplexPoly,
    coanalytic_prime: ComplexPoly,
    factors: Option<FactoredFamily>,
}

/// Real 2x2 Jacobian of (x, y) -> (Re f, Im f) together with its determinant,
/// det = |p'(z)|^2 - |q'(z)|^2.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jacobian {
    pub du_dx: f64,
    pub du_dy: f64,
    pub dv_dx: f64,
    pub dv_dy: f64,
    pub det: f64,
}

impl HarmonicMap {
    /// Wraps an arbitrary (p, q) pair; requires deg p > deg q so the winding
    /// number of f on a large contour equals deg p.
    pub fn new(analytic: ComplexPoly, coanalytic: ComplexPoly) -> Result<Self> {
        let dp = analytic.degree().ok_or_else(|| {
            Error::InvalidArgument("the analytic part must not be the zero polynomial".into())
        })?;
        let dq = coanalytic.degree();
        if dq.is_some_and(|dq| dq >= dp) {
            return Err(Error::InvalidArgument(format!(
                "the analytic degree must dominate: deg p = {dp}, deg q = {:?}",
                dq
            )));
        }
        let analytic_prime = analytic.derivative();
        let coanalytic_prime = coanalytic.derivative();
        Ok(HarmonicMap {
            analytic,
            coanalytic,
            analytic_prime,
            coanalytic_prime,
            factors: None,
        })
    }

    fn with_factors(mut self, fam: FactoredFamily) -> Self {
        self.factors = Some(fam);
        self
    }

    pub fn analytic(&self) -> &ComplexPoly {
        &self.analytic
    }

    pub fn coanalytic(&self) -> &ComplexPoly {
        &self.coanalytic
    }

    pub fn factors(&self) -> Option<&FactoredFamily> {
        self.factors.as_ref()
    }

    /// deg p — the analytic degree that the argument principle sees.
    pub fn degree(&self) -> usize {
        self.analytic.degree().expect("analytic part is nonzero")
    }

    /// f(z) = p(z) + conj(q(z)), via the factored family when present.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        match &self.factors {
            Some(fam) => fam.eval(z),
            None => self.eval_expanded(z),
        }
    }

    /// Horner on the dense coefficients — the expansion-route evaluation, kept
    /// available as an independent cross-check of the factored route.
    pub fn eval_expanded(&self, z: Complex64) -> Complex64 {
        self.analytic.eval(z) + self.coanalytic.eval(z).conj()
    }

    /// (p'(z), q'(z))
    pub fn derivatives(&self, z: Complex64) -> (Complex64, Complex64) {
        match &self.factors {
            Some(fam) => (fam.p_prime(z), fam.q_prime(z)),
            None => (self.analytic_prime.eval(z), self.coanalytic_prime.eval(z)),
        }
    }

    /// Real Jacobian from the Wirtinger derivatives: with fz = p'(z) and
    /// fzb = conj(q'(z)),
    ///   u_x = Re(fz + fzb),  v_x = Im(fz + fzb),
    ///   v_y = Re(fz - fzb),  u_y = -Im(fz - fzb),
    /// and det = |p'|^2 - |q'|^2 = du_dx·dv_dy - du_dy·dv_dx.
    ///
    /// With the factored family present, fz + fzb = 2 Re S' + 2i Im T' and
    /// fz - fzb = 2i Im S' + 2 Re T' are assembled from S' and T' directly:
    /// adding p' and conj(q') instead would cancel their shared T' (or S')
    /// part in floating point and destroy the row of the smaller factor —
    /// near the origin |Re S'| ~ n|z|^(n-1) sits far below the f64 noise of
    /// |T'|-sized additions.
    pub fn jacobian(&self, z: Complex64) -> Jacobian {
        let (du_dx, du_dy, dv_dx, dv_dy) = match &self.factors {
            Some(fam) => {
                let ds = fam.s_prime(z);
                let dt = fam.t_prime(z);
                (2.0 * ds.re, -2.0 * ds.im, 2.0 * dt.im, 2.0 * dt.re)
            }
            None => {
                let (dp, dq) = self.derivatives(z);
                let sum = dp + dq.conj();
                let dif = dp - dq.conj();
                (sum.re, -dif.im, sum.im, dif.re)
            }
        };
        Jacobian {
            du_dx,
            du_dy,
            dv_dx,
            dv_dy,
            det: du_dx * dv_dy - du_dy * dv_dx,
        }
    }
}

/// (z + a)^m by iterated convolution.
fn shifted_power(a: Complex64, m: u32) -> ComplexPoly {
    let base = ComplexPoly::linear(a, Complex64::ONE);
    let mut acc = ComplexPoly::constant(Complex64::ONE);
    for _ in 0..m {
        acc = &acc * &base;
    }
    acc
}

/// Snaps the single coefficient at position `j` to exact zero when it is
/// negligible against the largest coefficient.  Only that slot is touched:
/// genuine small coefficients elsewhere (notably the leading term, which stays
/// O(1) while interior coefficients grow like 2^n) must survive.
fn snap_coefficient(poly: ComplexPoly, j: usize, rel: f64) -> ComplexPoly {
    let max = poly.coeffs().iter().map(|c| c.norm()).fold(0.0, f64::max);
    let mut coeffs = poly.coeffs().to_vec();
    if j < coeffs.len() && coeffs[j].norm() < rel * max {
        coeffs[j] = Complex64::new(0.0, 0.0);
        ComplexPoly::new(coeffs)
    } else {
        poly
    }
}

/// Builds p = S + T and q = S - T for S = i z^n, T = i (z+a)^(n-1) (z-(n-1)a).
/// The z^n and z^(n-1) coefficients of T force deg p = n and deg q = n-2;
/// the cancelled coefficients are snapped to exact zero so the degrees are
/// bookkept exactly.
pub fn build_perturbed(params: &ConstructionParams) -> Result<HarmonicMap> {
    // Re-validate: the struct is constructible by hand.
    let params = ConstructionParams::new(params.n, params.a)?;
    let n = params.n;
    if n > MAX_EXPANDED_ORDER {
        return Err(Error::InvalidArgument(format!(
            "dense expansion is capped at n <= {MAX_EXPANDED_ORDER} (coefficients grow like 2^n); \
             use FactoredFamily for larger orders"
        )));
    }
    let a = params.a;
    let s = ComplexPoly::monomial(Complex64::I, n as usize);
    let last = ComplexPoly::linear(-a * ((n - 1) as f64), Complex64::ONE);
    let t = (&shifted_power(a, n - 1) * &last).scale(Complex64::I);
    // Only the z^(n-1) coefficient cancels exactly (to roundoff); snap that
    // one slot so the degrees bookkeep exactly, and leave every other
    // coefficient untouched.
    let p = snap_coefficient(&s + &t, n as usize - 1, SNAP_REL);
    let q = snap_coefficient(&s - &t, n as usize - 1, SNAP_REL);
    if p.degree() != Some(n as usize) || q.degree() != Some(n as usize - 2) {
        return Err(Error::StructuralViolation {
            n,
            k: 0,
            segment: "construction".into(),
            detail: format!(
                "expected deg p = {} and deg q = {}, got {:?} and {:?}",
                n,
                n - 2,
                p.degree(),
                q.degree()
            ),
        });
    }
    Ok(HarmonicMap::new(p, q)?.with_factors(FactoredFamily::new(&params)))
}

/// The a = 1 member of the family.
pub fn build_standard(n: u32) -> Result<HarmonicMap> {
    build_perturbed(&ConstructionParams::standard(n)?)
}
