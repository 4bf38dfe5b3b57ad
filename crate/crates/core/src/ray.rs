use crate::construction::FactoredFamily;
use crate::error::{Error, Result};
use crate::planar::Zero;
use crate::valence::{kmax_margin, margin_sine_numerator};
use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::PI;

/// Bisection stops when the bracket width drops below this.
pub const BISECTION_TOL: f64 = 1e-13;
/// Pole-adjacent samples start this fraction of the segment length inward.
const POLE_OFFSET_REL: f64 = 1e-10;
/// Sign-sampling offset doublings allowed before declaring a violation.
const MAX_OFFSET_DOUBLINGS: u32 = 20;

fn cot(x: f64) -> f64 {
    1.0 / x.tan()
}

/// One ray of the 2n-ray zero set of Re(iz^n): angle α = πk/n, 1 <= k <= n-1.
///
/// Intersections of the curve Im T = 0 with this ray biject with roots of the
/// single-variable transverse function
///   value(θ) = tan((n-1)θ) + (n-1)·cot θ - n·cot α
/// on (0, α), where θ is the angle of r·e^(iα) + 1; all roots are bracketed in
/// closed form by the poles and critical angles below.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Ray {
    n: u32,
    k: u32,
}

/// Per-ray analysis record: bracket structure, roots, and the root count.
#[derive(Clone, Debug, PartialEq)]
pub struct RayProfile {
    pub n: u32,
    pub k: u32,
    /// Ray angle α = πk/n.
    pub alpha: f64,
    /// Poles of the transverse function inside (0, α): (j-1/2)π/(n-1).
    pub poles: Vec<f64>,
    /// First critical-angle family (j-1/2)π/n, j = 1..=k.
    pub critical_angles_primary: Vec<f64>,
    /// Second critical-angle family (j-1/2)π/(n-2), j = 1..=k_crit.
    pub critical_angles_secondary: Vec<f64>,
    /// Limit of the transverse function at α (f64::INFINITY marker at k = n/2).
    pub boundary_value: f64,
    /// Root angles, strictly increasing, strictly inside (0, α).
    pub roots_theta: Vec<f64>,
    /// Root radii r = sin θ / sin(α - θ), matching roots_theta.
    pub roots_r: Vec<f64>,
    /// Number of intersections carried by this ray.
    pub root_count: u32,
}

impl Ray {
    pub fn new(n: u32, k: u32) -> Result<Self> {
        if n < 4 {
            return Err(Error::InvalidArgument(format!(
                "ray analysis requires n >= 4, got n = {n}"
            )));
        }
        if k < 1 || k > n - 1 {
            return Err(Error::InvalidArgument(format!(
                "ray index must satisfy 1 <= k <= n-1, got k = {k} for n = {n}"
            )));
        }
        Ok(Ray { n, k })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// Ray angle α = πk/n.
    pub fn alpha(&self) -> f64 {
        PI * f64::from(self.k) / f64::from(self.n)
    }

    /// The transverse function at θ ∈ (0, α).
    pub fn value(&self, theta: f64) -> Result<f64> {
        if !(theta > 0.0 && theta < self.alpha()) {
            return Err(Error::InvalidArgument(format!(
                "theta must lie strictly inside (0, {}), got {theta}",
                self.alpha()
            )));
        }
        Ok(self.value_unchecked(theta))
    }

    fn value_unchecked(&self, theta: f64) -> f64 {
        let nf = f64::from(self.n);
        ((nf - 1.0) * theta).tan() + (nf - 1.0) * cot(theta) - nf * cot(self.alpha())
    }

    /// Derivative of the transverse function:
    ///   (n-1)·(1/cos²((n-1)θ) - 1/sin²θ).
    pub fn slope(&self, theta: f64) -> f64 {
        let nf = f64::from(self.n);
        let c = ((nf - 1.0) * theta).cos();
        let s = theta.sin();
        (nf - 1.0) * (1.0 / (c * c) - 1.0 / (s * s))
    }

    /// Number of poles inside (0, α): the largest j with (j-1/2)/(n-1) < k/n,
    /// which is k for k < n/2 and k-1 for k >= n/2.
    pub fn pole_count(&self) -> u32 {
        if 2 * self.k < self.n {
            self.k
        } else {
            self.k - 1
        }
    }

    /// Pole angles (j-1/2)π/(n-1), j = 1..=pole_count, all strictly inside (0, α).
    pub fn pole_angles(&self) -> Vec<f64> {
        let nf = f64::from(self.n);
        (1..=self.pole_count())
            .map(|j| (f64::from(j) - 0.5) * PI / (nf - 1.0))
            .collect()
    }

    /// Number of second-family critical angles inside (0, α):
    /// k for k < n/4, k-1 for n/4 <= k < 3n/4, k-2 for k >= 3n/4.
    pub fn secondary_count(&self) -> u32 {
        if 4 * self.k < self.n {
            self.k
        } else if 4 * self.k < 3 * self.n {
            self.k - 1
        } else {
            self.k - 2
        }
    }

    /// Critical angles of the transverse function, where cos((n-1)θ) = ±sin θ:
    /// family one at (j-1/2)π/n (j = 1..=k) and family two at (j-1/2)π/(n-2)
    /// (j = 1..=secondary_count), all strictly inside (0, α).
    pub fn critical_points(&self) -> (Vec<f64>, Vec<f64>) {
        let nf = f64::from(self.n);
        let fam1 = (1..=self.k)
            .map(|j| (f64::from(j) - 0.5) * PI / nf)
            .collect();
        let fam2 = (1..=self.secondary_count())
            .map(|j| (f64::from(j) - 0.5) * PI / (nf - 2.0))
            .collect();
        (fam1, fam2)
    }

    /// Limit of the transverse function at the ray angle: -2/sin(2πk/n),
    /// negative for k < n/2, positive for k > n/2, and +∞ (marker) at k = n/2.
    pub fn boundary_value(&self) -> f64 {
        if 2 * self.k == self.n {
            return f64::INFINITY;
        }
        let nf = f64::from(self.n);
        -2.0 / (2.0 * PI * f64::from(self.k) / nf).sin()
    }

    /// Radius on the ray for transverse angle θ: r = sin θ / sin(α - θ),
    /// the closed-form inverse of θ(r) = arg(r·e^(iα) + 1); strictly increasing,
    /// r → 0 as θ → 0⁺ and r → ∞ as θ → α⁻.
    pub fn theta_to_r(&self, theta: f64) -> Result<f64> {
        let alpha = self.alpha();
        if !(theta > 0.0 && theta < alpha) {
            return Err(Error::InvalidArgument(format!(
                "theta must lie strictly inside (0, {alpha}), got {theta}"
            )));
        }
        Ok(theta.sin() / (alpha - theta).sin())
    }

    /// Certified root count and locations; see `count_ray`.
    pub fn profile(&self) -> Result<RayProfile> {
        count_ray_impl(*self)
    }
}

/// Free-function mirror of `Ray::value`.
pub fn ray_value(theta: f64, n: u32, k: u32) -> Result<f64> {
    Ray::new(n, k)?.value(theta)
}

/// Free-function mirror of `Ray::slope` (domain-checked like `ray_value`).
pub fn ray_slope(theta: f64, n: u32, k: u32) -> Result<f64> {
    let ray = Ray::new(n, k)?;
    ray.value(theta)?;
    Ok(ray.slope(theta))
}

pub fn pole_angles(n: u32, k: u32) -> Result<Vec<f64>> {
    Ok(Ray::new(n, k)?.pole_angles())
}

pub fn critical_points(n: u32, k: u32) -> Result<(Vec<f64>, Vec<f64>)> {
    Ok(Ray::new(n, k)?.critical_points())
}

pub fn boundary_value(n: u32, k: u32) -> Result<f64> {
    Ok(Ray::new(n, k)?.boundary_value())
}

pub fn theta_to_r(theta: f64, n: u32, k: u32) -> Result<f64> {
    Ray::new(n, k)?.theta_to_r(theta)
}

struct Violation<'a> {
    ray: Ray,
    segment: &'a str,
}

impl Violation<'_> {
    fn err(&self, detail: String) -> Error {
        Error::StructuralViolation {
            n: self.ray.n,
            k: self.ray.k,
            segment: self.segment.to_string(),
            detail,
        }
    }
}

/// Samples the transverse value just inside an endpoint whose asymptotic sign
/// is known (+∞ left of a pole and at 0⁺, -∞ right of a pole, sign of the
/// boundary value near α). The offset starts at POLE_OFFSET_REL × segment
/// length and doubles until the sampled sign matches; mismatch after
/// MAX_OFFSET_DOUBLINGS is a structural violation.
fn sample_expected_sign(
    ray: Ray,
    endpoint: f64,
    inward: f64,
    seg_len: f64,
    expect_positive: bool,
    ctx: &Violation,
) -> Result<(f64, f64)> {
    let mut off = POLE_OFFSET_REL * seg_len;
    for _ in 0..=MAX_OFFSET_DOUBLINGS {
        let theta = endpoint + inward * off;
        let v = ray.value_unchecked(theta);
        if v.is_finite() && ((v > 0.0) == expect_positive) && v != 0.0 {
            return Ok((theta, v));
        }
        off *= 2.0;
    }
    Err(ctx.err(format!(
        "sample near θ = {endpoint} never took the expected {} sign",
        if expect_positive {
            "positive"
        } else {
            "negative"
        }
    )))
}

/// Bisection on a bracket with opposite, already-verified end signs, refined
/// to width BISECTION_TOL, then one Newton polish step when the local slope
/// is steep enough to improve on the bracket midpoint.
fn bisect_root(ray: Ray, mut lo: f64, mut hi: f64, v_lo: f64) -> f64 {
    let left_negative = v_lo < 0.0;
    while hi - lo > BISECTION_TOL {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if (ray.value_unchecked(mid) < 0.0) == left_negative {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut root = 0.5 * (lo + hi);
    let d = ray.slope(root);
    if d.abs() > 1.0 {
        let polished = root - ray.value_unchecked(root) / d;
        if polished > lo - BISECTION_TOL && polished < hi + BISECTION_TOL {
            root = polished;
        }
    }
    root
}

fn count_ray_impl(ray: Ray) -> Result<RayProfile> {
    let n = ray.n;
    let k = ray.k;
    let alpha = ray.alpha();
    let poles = ray.pole_angles();
    let (fam1, fam2) = ray.critical_points();
    let bv = ray.boundary_value();

    // The deciding critical angle θ* = (k-1/2)π/(n-2) exists in the last
    // segment exactly when k < n/4; every other critical angle must carry a
    // strictly positive value for the bracket structure to be exact, and this
    // positivity is what certifies "exactly one root per sign change" below:
    // an extra pair of roots inside any segment would force a nonpositive
    // interior critical value.
    let deciding = if 4 * k < n {
        fam2.last().copied()
    } else {
        None
    };

    let ctx = Violation {
        ray,
        segment: "critical values",
    };
    for (j, &theta) in fam1.iter().enumerate() {
        let v = ray.value_unchecked(theta);
        if v <= 0.0 || v.is_nan() {
            return Err(ctx.err(format!(
                "first-family critical value at j = {} (θ = {theta}) is {v}, expected > 0",
                j + 1
            )));
        }
    }
    let fam2_checked = if deciding.is_some() {
        &fam2[..fam2.len() - 1]
    } else {
        &fam2[..]
    };
    for (j, &theta) in fam2_checked.iter().enumerate() {
        let v = ray.value_unchecked(theta);
        if v <= 0.0 || v.is_nan() {
            return Err(ctx.err(format!(
                "second-family critical value at j = {} (θ = {theta}) is {v}, expected > 0",
                j + 1
            )));
        }
    }

    // Decide the 0-vs-2 extra roots in the last segment (k < n/4 only) from
    // the sign of the count margin — the closed form of the transverse value
    // at θ* — cross-checked against direct evaluation, with a sine-form
    // recheck when the margin is too small to trust in floating point.
    let two_extra = match deciding {
        None => false,
        Some(theta_star) => {
            let v = ray.value_unchecked(theta_star);
            let margin = kmax_margin(n, k)?;
            if v.abs() > 1e-6 && margin.abs() > 1e-6 && (v > 0.0) != (margin > 0.0) {
                return Err(ctx.err(format!(
                    "deciding critical value {v} at θ* = {theta_star} disagrees in sign \
                     with the count margin {margin}"
                )));
            }
            if margin.abs() <= 1e-9 {
                let s = margin_sine_numerator(n, k);
                if s == 0.0 {
                    return Err(ctx.err(format!(
                        "deciding critical value at θ* = {theta_star} is exactly zero; \
                         the root structure is ambiguous"
                    )));
                }
                s > 0.0
            } else {
                margin > 0.0
            }
        }
    };

    let mut roots = Vec::new();

    // Segment (0, first pole): the function tends to +∞ at both ends and all
    // interior critical values were certified positive, so it has no roots;
    // the endpoint signs are still sampled as part of the certificate.
    {
        let ctx = Violation {
            ray,
            segment: "pre-first-pole",
        };
        let first = poles[0];
        sample_expected_sign(ray, 0.0, 1.0, first, true, &ctx)?;
        sample_expected_sign(ray, first, -1.0, first, true, &ctx)?;
    }

    // Each inter-pole segment carries exactly one root: -∞ on the right of a
    // pole, +∞ on the left of the next, positive interior critical values.
    for w in poles.windows(2) {
        let (left, right) = (w[0], w[1]);
        let ctx = Violation {
            ray,
            segment: "inter-pole",
        };
        let len = right - left;
        let (lo, v_lo) = sample_expected_sign(ray, left, 1.0, len, false, &ctx)?;
        let (hi, _) = sample_expected_sign(ray, right, -1.0, len, true, &ctx)?;
        roots.push(bisect_root(ray, lo, hi, v_lo));
    }

    // Last segment (rightmost pole, α).
    {
        let last_pole = *poles.last().expect("k >= 1 guarantees a pole");
        let len = alpha - last_pole;
        if 2 * k >= n {
            // Boundary value positive (or the +∞ marker at k = n/2): the
            // function climbs from -∞ through exactly one root.
            let ctx = Violation {
                ray,
                segment: "last (boundary-positive)",
            };
            let (lo, v_lo) = sample_expected_sign(ray, last_pole, 1.0, len, false, &ctx)?;
            let (hi, _) = sample_expected_sign(ray, alpha, -1.0, len, true, &ctx)?;
            roots.push(bisect_root(ray, lo, hi, v_lo));
        } else if two_extra {
            // -∞ → positive θ* → negative boundary: two roots bracketed by θ*.
            let theta_star = deciding.expect("two_extra implies a deciding angle");
            let ctx = Violation {
                ray,
                segment: "last (two extras)",
            };
            let (lo, v_lo) = sample_expected_sign(ray, last_pole, 1.0, len, false, &ctx)?;
            roots.push(bisect_root(ray, lo, theta_star, v_lo));
            let (hi, _) = sample_expected_sign(ray, alpha, -1.0, len, false, &ctx)?;
            let v_star = ray.value_unchecked(theta_star);
            roots.push(bisect_root(ray, theta_star, hi, v_star));
        } else {
            // Negative boundary value and no positive interior critical value:
            // the segment stays below zero after leaving -∞ — no roots. The
            // endpoint samples are still part of the certificate.
            let ctx = Violation {
                ray,
                segment: "last (rootless)",
            };
            sample_expected_sign(ray, last_pole, 1.0, len, false, &ctx)?;
            sample_expected_sign(ray, alpha, -1.0, len, false, &ctx)?;
        }
    }

    // Defensive invariants: expected count, ordering, residuals.
    let expected = if 2 * k >= n {
        k - 1
    } else if two_extra {
        k + 1
    } else {
        k - 1
    };
    if roots.len() as u32 != expected {
        return Err(Error::StructuralViolation {
            n,
            k,
            segment: "root inventory".into(),
            detail: format!(
                "collected {} roots, structure demands {expected}",
                roots.len()
            ),
        });
    }
    for w in roots.windows(2) {
        if w[0] >= w[1] {
            return Err(Error::StructuralViolation {
                n,
                k,
                segment: "root inventory".into(),
                detail: format!("roots out of order: {} >= {}", w[0], w[1]),
            });
        }
    }
    for &root in &roots {
        // Slope-normalized residual: |value| / (1 + |slope|) estimates the
        // angular distance to the true root, which bisection + polish leaves
        // far below this tolerance even where the slope is enormous.
        let v = ray.value_unchecked(root);
        if v.abs() >= 1e-9 * (1.0 + ray.slope(root).abs()) {
            return Err(Error::StructuralViolation {
                n,
                k,
                segment: "root inventory".into(),
                detail: format!("residual {v:.3e} at θ = {root} exceeds tolerance"),
            });
        }
    }

    let roots_r = roots
        .iter()
        .map(|&t| ray.theta_to_r(t))
        .collect::<Result<Vec<_>>>()?;
    Ok(RayProfile {
        n,
        k,
        alpha,
        poles,
        critical_angles_primary: fam1,
        critical_angles_secondary: fam2,
        boundary_value: bv,
        root_count: roots.len() as u32,
        roots_theta: roots,
        roots_r,
    })
}

/// Certified root count and locations for ray k: one bisection per closed-form
/// bracket, with every endpoint sign and interior critical value checked.
/// Any deviation from the certified structure raises a structural violation.
pub fn count_ray(n: u32, k: u32) -> Result<RayProfile> {
    Ray::new(n, k)?.profile()
}

/// Intersection counts on the two real-axis rays.
///
/// On the positive axis Im T(r) = (r+1)^(n-1)·(r-(n-1)) has the single root
/// r = n-1, so N₀ = 1. On the negative axis Im T(-(1+h)) = (-1)^n·h^(n-1)·(n+h)
/// has the root h = 0 (z = -1) with multiplicity n-1, so the
/// degeneracy-weighted count is n-1. Both facts are confirmed numerically from
/// the factored form before returning: a dense sign scan must find exactly one
/// positive-axis crossing, bracketing n-1, and the log-log slope of |Im T|
/// approaching -1 must recover the multiplicity. Overflow-safe sign/log
/// evaluation keeps the confirmation valid at every order.
pub fn special_ray_counts(n: u32) -> Result<(u64, u64)> {
    if n < 4 {
        return Err(Error::InvalidArgument(format!(
            "ray analysis requires n >= 4, got n = {n}"
        )));
    }
    let fam = FactoredFamily::standard(n)?;
    let violation = |k: u32, segment: &str, detail: String| Error::StructuralViolation {
        n,
        k,
        segment: segment.into(),
        detail,
    };
    // Positive axis: exactly one sign change, and it brackets r = n-1.
    let samples = 4096;
    let r_hi = 2.0 * f64::from(n);
    let mut crossings = 0u32;
    let mut bracket = None;
    let mut prev: Option<(f64, f64)> = None;
    for i in 1..=samples {
        let r = r_hi * f64::from(i) / f64::from(samples);
        let (sign, _) = fam.im_t_signlog(Complex64::new(r, 0.0));
        if sign == 0.0 {
            continue;
        }
        if let Some((prev_r, prev_sign)) = prev {
            if sign != prev_sign {
                crossings += 1;
                bracket = Some((prev_r, r));
            }
        }
        prev = Some((r, sign));
    }
    if crossings != 1 {
        return Err(violation(
            0,
            "positive real axis",
            format!("expected one sign change of Im T, found {crossings}"),
        ));
    }
    let (lo, hi) = bracket.expect("crossings == 1 guarantees a bracket");
    let nm1 = f64::from(n) - 1.0;
    if !(lo <= nm1 && nm1 <= hi) {
        return Err(violation(
            0,
            "positive real axis",
            format!("the sign change sits in [{lo}, {hi}], which misses r = n-1 = {nm1}"),
        ));
    }
    // Negative axis: sign parity (-1)^n just past -1, and multiplicity n-1
    // from the slope of ln|Im T(-(1+h))| against ln h.
    let parity = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
    let mut log_mags = [0.0f64; 2];
    let offsets = [1e-2f64, 1e-3];
    for (slot, &h) in offsets.iter().enumerate() {
        let (sign, log_mag) = fam.im_t_signlog(Complex64::new(-(1.0 + h), 0.0));
        if sign != parity {
            return Err(violation(
                n,
                "negative real axis",
                format!("Im T at h = {h} has sign {sign}, expected {parity}"),
            ));
        }
        log_mags[slot] = log_mag;
    }
    let slope = (log_mags[0] - log_mags[1]) / (offsets[0] / offsets[1]).ln();
    if (slope - nm1).abs() > 0.01 {
        return Err(violation(
            n,
            "negative real axis",
            format!("log-log slope {slope} does not match the ({nm1})-fold vanishing"),
        ));
    }
    Ok((1, u64::from(n) - 1))
}

/// Degeneracy-weighted total over all 2n rays:
///   N₀ + N_n + 2·Σ_{k=1}^{n-1} N_k,
/// using the mirror symmetry between rays k and -k. Per-ray work fans out to
/// the global worker pool; the sum is merged deterministically.
pub fn total_from_rays(n: u32) -> Result<u64> {
    let (n0, nn) = special_ray_counts(n)?;
    let counts: Result<Vec<u64>> = (1..n)
        .into_par_iter()
        .map(|k| count_ray(n, k).map(|p| u64::from(p.root_count)))
        .collect();
    Ok(n0 + nn + 2 * counts?.iter().sum::<u64>())
}

/// All planar zeros of the standard construction, from the ray decomposition:
/// every ray root r·e^(iπk/n) plus its mirror conjugate, the simple zero at
/// r = n-1 on the positive axis, and the (n-1)-fold degenerate zero at z = -1.
/// Sorted by (re, im); the multiplicity-weighted cardinality equals
/// `total_from_rays(n)`.
pub fn ray_zero_locations(n: u32) -> Result<Vec<Zero>> {
    let fam = FactoredFamily::standard(n)?;
    let profiles: Result<Vec<RayProfile>> =
        (1..n).into_par_iter().map(|k| count_ray(n, k)).collect();
    let mut zeros = Vec::new();
    for profile in profiles? {
        let angle = profile.alpha;
        for &r in &profile.roots_r {
            for a in [angle, -angle] {
                let z = Complex64::from_polar(r, a);
                zeros.push(classify_zero(&fam, z, 1));
            }
        }
    }
    zeros.push(classify_zero(
        &fam,
        Complex64::new(f64::from(n) - 1.0, 0.0),
        1,
    ));
    zeros.push(classify_zero(&fam, Complex64::new(-1.0, 0.0), n - 1));
    zeros.sort_by(|a, b| {
        (a.location.re, a.location.im)
            .partial_cmp(&(b.location.re, b.location.im))
            .expect("zero coordinates are finite")
    });
    let weighted: u64 = zeros.iter().map(|z| u64::from(z.multiplicity)).sum();
    let expected = total_from_rays(n)?;
    if weighted != expected {
        return Err(Error::Mismatch {
            detail: format!("ray zero list carries weight {weighted}, ray totals give {expected}"),
        });
    }
    Ok(zeros)
}

fn classify_zero(fam: &FactoredFamily, z: Complex64, multiplicity: u32) -> Zero {
    // The scale-free cosine det/(4|S'||T'|) decides orientation without
    // overflow: index +1 where det > 0 (sense-preserving), -1 where det < 0,
    // 0 on the degenerate set (exactly 0.0 at z = -1, where T' vanishes).
    let (sign, cosine) = fam.det_signlog(z);
    let index = if cosine.abs() < 1e-9 {
        0
    } else if sign > 0.0 {
        1
    } else {
        -1
    };
    Zero {
        location: z,
        index,
        residual: fam.eval_norm_robust(z),
        multiplicity,
    }
}

/// Binding second-family critical value, with the quantities the positivity
/// proof runs on. For k' = min(secondary_count, k-1) and θ = (k'-1/2)π/(n-2):
///   margin = value(θ) = (n-2)·cot θ - n·cot(πk/n),
/// claimed strictly positive for every 2 <= k <= n-1; `sine_numerator` is the
/// numerator of the equivalent sine form (same sign), and
/// `threshold_constant` = n(2n-1)/(4(n-1)) is the constant the proof compares
/// against.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CriticalValueMargin {
    pub n: u32,
    pub k: u32,
    pub k_prime: u32,
    pub theta: f64,
    pub margin: f64,
    pub sine_numerator: f64,
    pub threshold_constant: f64,
}

/// Numerator of the sine form of (n-2)·cot θ₁ - n·cot θ₂ at
/// θ₁ = (k'-1/2)π/(n-2), θ₂ = πk/n:
///   (n-1)·sin(θ₂-θ₁) - sin(θ₁+θ₂).
/// Shares its sign with the critical value (both denominator sines positive).
pub fn sine_numerator(n: u32, k: u32, k_prime: u32) -> f64 {
    let nf = f64::from(n);
    let theta1 = (f64::from(k_prime) - 0.5) * PI / (nf - 2.0);
    let theta2 = PI * f64::from(k) / nf;
    (nf - 1.0) * (theta2 - theta1).sin() - (theta1 + theta2).sin()
}

/// n(2n-1)/(4(n-1)), the comparison constant of the positivity proof.
pub fn threshold_constant(n: u32) -> f64 {
    let nf = f64::from(n);
    nf * (2.0 * nf - 1.0) / (4.0 * (nf - 1.0))
}

pub fn critical_value_margin(n: u32, k: u32) -> Result<CriticalValueMargin> {
    let ray = Ray::new(n, k)?;
    if k < 2 {
        return Err(Error::InvalidArgument(format!(
            "the binding critical value needs k >= 2, got k = {k}"
        )));
    }
    let k_prime = ray.secondary_count().min(k - 1);
    let nf = f64::from(n);
    let theta = (f64::from(k_prime) - 0.5) * PI / (nf - 2.0);
    // At second-family angles tan((n-1)θ) = -cot θ, so the transverse value
    // collapses to (n-2)·cot θ - n·cot α — the well-conditioned form used here.
    let margin = (nf - 2.0) * cot(theta) - nf * cot(ray.alpha());
    Ok(CriticalValueMargin {
        n,
        k,
        k_prime,
        theta,
        margin,
        sine_numerator: sine_numerator(n, k, k_prime),
        threshold_constant: threshold_constant(n),
    })
}

/// Residual of the cotangent identity
///   (n-2)·cot θ₁ - n·cot θ₂ = ((n-1)·sin(θ₂-θ₁) - sin(θ₁+θ₂)) / (sin θ₁ · sin θ₂)
/// (left minus right); used as a property-test target.
pub fn cot_identity_residual(theta1: f64, theta2: f64, n: u32) -> Result<f64> {
    if !(theta1 > 0.0 && theta1 < PI && theta2 > 0.0 && theta2 < PI) {
        return Err(Error::InvalidArgument(format!(
            "both angles must lie strictly inside (0, π), got {theta1}, {theta2}"
        )));
    }
    let nf = f64::from(n);
    let lhs = (nf - 2.0) * cot(theta1) - nf * cot(theta2);
    let rhs = ((nf - 1.0) * (theta2 - theta1).sin() - (theta1 + theta2).sin())
        / (theta1.sin() * theta2.sin());
    Ok(lhs - rhs)
}
