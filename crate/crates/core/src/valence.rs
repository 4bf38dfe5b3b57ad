use crate::error::{Error, Result};
use std::f64::consts::PI;

/// Below this magnitude a margin's double-precision sign is not trusted and
/// the sine-form recheck decides (the count is an integer claim; borderline
/// signs must be certified).
const MARGIN_CERTIFY_BELOW: f64 = 1e-9;

fn cot(x: f64) -> f64 {
    1.0 / x.tan()
}

fn check_n(n: u32) -> Result<()> {
    if n < 4 {
        return Err(Error::InvalidArgument(format!(
            "the count formula requires n >= 4, got n = {n}"
        )));
    }
    Ok(())
}

/// The k-th count margin
///   (n-2)·cot((2k-1)π/(2n-4)) - n·cot(πk/n),
/// whose sign decides whether ray k carries two extra intersections.
/// Defined for 1 <= k <= floor(n/2).
pub fn kmax_margin(n: u32, k: u32) -> Result<f64> {
    check_n(n)?;
    if k < 1 || 2 * k > n {
        return Err(Error::InvalidArgument(format!(
            "margin index k must satisfy 1 <= k <= n/2, got k = {k} for n = {n}"
        )));
    }
    let nf = f64::from(n);
    let kf = f64::from(k);
    let theta1 = (2.0 * kf - 1.0) * PI / (2.0 * nf - 4.0);
    let theta2 = PI * kf / nf;
    Ok((nf - 2.0) * cot(theta1) - nf * cot(theta2))
}

/// Sine-form numerator of the same margin:
///   (n-1)·sin((n-4k)π/(2n(n-2))) - sin((k-1/2)π/(n-2) + πk/n).
/// Equal to margin · sin θ₁ · sin θ₂ with both sines positive on the valid
/// range, so the signs agree; the additive form has no cot blow-up and serves
/// as the certification route for near-zero margins.
pub fn margin_sine_numerator(n: u32, k: u32) -> f64 {
    let nf = f64::from(n);
    let kf = f64::from(k);
    let lhs = (nf - 1.0) * ((nf - 4.0 * kf) * PI / (2.0 * nf * (nf - 2.0))).sin();
    let rhs = ((kf - 0.5) * PI / (nf - 2.0) + PI * kf / nf).sin();
    lhs - rhs
}

/// Margin sign with certification: the double-precision cot-form sign is used
/// directly unless the value is within `MARGIN_CERTIFY_BELOW` of zero, in
/// which case the sine-form decides. Returns (is_positive, is_exactly_zero).
fn certified_sign(n: u32, k: u32, margin: f64) -> (bool, bool) {
    if margin.abs() >= MARGIN_CERTIFY_BELOW {
        return (margin > 0.0, false);
    }
    let s = margin_sine_numerator(n, k);
    if s == 0.0 {
        // A tie between "counts" and "doesn't count": treated as not positive
        // and flagged in the result.
        (false, true)
    } else {
        (s > 0.0, false)
    }
}

/// The margin sequence for one n together with the decided k_max.
///
/// k_max is the number of leading strictly-positive margins, cross-checked
/// against the largest k with a positive margin; the two readings coincide for
/// every n checked (the positives form a prefix), and a mismatch raises a
/// structural-violation error rather than picking one silently.
#[derive(Clone, Debug, PartialEq)]
pub struct KmaxResult {
    pub n: u32,
    pub k_max: u32,
    /// Entry k-1 holds the margin for k, 1 <= k <= floor(n/2).
    pub margins: Vec<f64>,
    /// k values whose margin is exactly zero (flagged, treated as not positive).
    pub zero_margins: Vec<u32>,
}

pub fn k_max(n: u32) -> Result<KmaxResult> {
    check_n(n)?;
    let half = n / 2;
    let mut margins = Vec::with_capacity(half as usize);
    let mut zero_margins = Vec::new();
    let mut leading_positives = 0u32;
    let mut prefix_open = true;
    let mut last_positive = 0u32;
    for k in 1..=half {
        let m = kmax_margin(n, k)?;
        margins.push(m);
        let (positive, exactly_zero) = certified_sign(n, k, m);
        if exactly_zero {
            zero_margins.push(k);
        }
        if positive {
            last_positive = k;
            if prefix_open {
                leading_positives += 1;
            }
        } else {
            prefix_open = false;
        }
    }
    if leading_positives != last_positive {
        return Err(Error::StructuralViolation {
            n,
            k: last_positive,
            segment: "margin sequence".into(),
            detail: format!(
                "positive margins are not a prefix: {leading_positives} leading positives \
                 but k = {last_positive} is positive"
            ),
        });
    }
    Ok(KmaxResult {
        n,
        k_max: leading_positives,
        margins,
        zero_margins,
    })
}

/// The count report: closed-form prediction, baseline, and (when a numerical
/// route has run) the independently verified total.
#[derive(Clone, Debug, PartialEq)]
pub struct ValenceReport {
    pub n: u32,
    pub k_max: u32,
    /// n² - 2n + 2 + 4·k_max
    pub predicted: u64,
    /// n² - 2n + 2
    pub baseline: u64,
    pub verified: Option<u64>,
    pub agree: bool,
}

pub fn predict_count(n: u32) -> Result<ValenceReport> {
    let km = k_max(n)?;
    let n64 = u64::from(n);
    let baseline = n64 * n64 - 2 * n64 + 2;
    Ok(ValenceReport {
        n,
        k_max: km.k_max,
        predicted: baseline + 4 * u64::from(km.k_max),
        baseline,
        verified: None,
        agree: false,
    })
}

/// The unique solution of X = cos X, by Newton iteration on g(X) = X - cos X
/// from the deterministic seed 0.75 (g' = 1 + sin X > 0 on [0, 1], so the root
/// is unique and the iteration is safe); falls back to bisection on [0, 1] if
/// Newton ever leaves the bracket.
pub fn solve_cos_fixed_point() -> f64 {
    let mut x: f64 = 0.75;
    for _ in 0..100 {
        let g = x - x.cos();
        if g.abs() < 1e-15 {
            return x;
        }
        let gp = 1.0 + x.sin();
        let next = x - g / gp;
        if !(0.0..=1.0).contains(&next) {
            return cos_fixed_point_bisection();
        }
        x = next;
    }
    debug_assert!((x - x.cos()).abs() < 1e-14, "fixed-point Newton stalled");
    x
}

/// Independent bisection solver for X = cos X on [0, 1]; the two solvers
/// agreeing is one of the library's self-checks.
pub fn cos_fixed_point_bisection() -> f64 {
    let mut lo: f64 = 0.0; // g(0) = -1 < 0
    let mut hi: f64 = 1.0; // g(1) = 1 - cos 1 > 0
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        if mid - mid.cos() < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// 1/4 - X/(2π) ≈ 0.13237 — the linear growth rate of k_max(n).
pub fn asymptotic_slope() -> f64 {
    0.25 - solve_cos_fixed_point() / (2.0 * PI)
}

/// Leading term of the margin's large-n expansion in γ = k/n:
///   π/2 - 2πγ - sin(2πγ),
/// positive exactly when γ < 1/4 - X/(2π).
pub fn gamma_leading_term(gamma: f64) -> Result<f64> {
    if !(gamma > 0.0 && gamma < 0.25) {
        return Err(Error::InvalidArgument(format!(
            "gamma must lie in (0, 1/4), got {gamma}"
        )));
    }
    Ok(PI / 2.0 - 2.0 * PI * gamma - (2.0 * PI * gamma).sin())
}
