use crate::construction::HarmonicMap;
use crate::error::{Error, Result};
use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::{FRAC_PI_2, PI, TAU};

/// Newton iteration budget per grid start.
pub const NEWTON_MAX_ITERS: u32 = 60;
/// Step halvings allowed before a Newton step is declared non-improving.
pub const NEWTON_MAX_HALVINGS: u32 = 8;
/// Recursion depth for adaptive argument tracking along contours.
const WINDING_MAX_DEPTH: u32 = 48;

/// A planar zero of the harmonic map: location, Poincaré index (+1
/// sense-preserving, -1 sense-reversing, 0 degenerate Jacobian), the
/// evaluation residual |f(location)|, and a multiplicity annotation
/// (1 for simple zeros, the analytic multiplicity for annotated
/// degenerate points).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Zero {
    pub location: Complex64,
    pub index: i32,
    pub residual: f64,
    pub multiplicity: u32,
}

/// Axis-aligned square search region with a grid of Newton starts.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SearchRegion {
    pub center: Complex64,
    pub half_width: f64,
    /// Newton starts per unit length along each axis.
    pub grid_density: f64,
}

impl SearchRegion {
    pub fn new(center: Complex64, half_width: f64, grid_density: f64) -> Result<Self> {
        if !(center.re.is_finite() && center.im.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "search center must be finite, got {center}"
            )));
        }
        if !(half_width > 0.0 && half_width.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "search half-width must be positive and finite, got {half_width}"
            )));
        }
        if !(grid_density > 0.0 && grid_density.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "grid density must be positive and finite, got {grid_density}"
            )));
        }
        Ok(SearchRegion {
            center,
            half_width,
            grid_density,
        })
    }

    /// Default region for order n: center 0, half-width 1.5·(n-1), 8 starts
    /// per unit. All zeros of the standard and perturbed constructions lie
    /// well inside; the winding check re-validates that at runtime.
    pub fn standard(n: u32) -> SearchRegion {
        SearchRegion {
            center: Complex64::new(0.0, 0.0),
            half_width: 1.5 * (f64::from(n) - 1.0),
            grid_density: 8.0,
        }
    }

    pub fn contains(&self, z: Complex64) -> bool {
        (z.re - self.center.re).abs() <= self.half_width
            && (z.im - self.center.im).abs() <= self.half_width
    }
}

/// Caller-supplied analysis of a degenerate zero: where it is, the
/// multiplicity it carries in the weighted count, and its signed
/// argument-principle contribution. The finder cannot derive these
/// numerically (the Jacobian vanishes there), so they are trusted inputs,
/// verified only insofar as f must actually vanish at the location.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DegenerateAnnotation {
    pub location: Complex64,
    pub multiplicity: u32,
    /// Signed contribution to the argument-principle sum.
    pub index_contribution: i32,
}

impl DegenerateAnnotation {
    /// The z = -1 degenerate point of the standard construction: the ray
    /// polynomial vanishes there to order n-1, and the local model
    /// (±Im w, -Re(w^(n-1))) winds once for even n and not at all for odd n.
    pub fn standard_center(n: u32) -> DegenerateAnnotation {
        DegenerateAnnotation {
            location: Complex64::new(-1.0, 0.0),
            multiplicity: n - 1,
            index_contribution: if n.is_multiple_of(2) { 1 } else { 0 },
        }
    }
}

fn residual_scale(z: Complex64, degree: usize) -> f64 {
    (1.0 + z.norm()).powi(degree as i32)
}

/// Evaluates f and rejects contour points where |f| is too small to track the
/// argument. Guarded contours (the region boundary and the public circle mode)
/// use the polynomial-scaled safety threshold and ask the caller to move the
/// contour; the index-certification circle keeps only the exact-zero guard,
/// because near-degenerate zeros legitimately drive |f| many orders below the
/// global scale while the factored evaluation stays accurate in relative
/// terms.
fn eval_on_contour(f: &HarmonicMap, z: Complex64, guarded: bool) -> Result<Complex64> {
    let v = f.eval(z);
    let floor = if guarded {
        1e-9 * residual_scale(z, f.degree())
    } else {
        0.0
    };
    if v.norm() <= floor {
        return Err(Error::BoundaryZero {
            location: z,
            magnitude: v.norm(),
        });
    }
    Ok(v)
}

/// Argument change of f along the path between two endpoints, each given as
/// a (parameter, value) pair with the value already computed. Subdivides
/// until each increment is < π/2, which pins the branch of the argument.
fn arg_change_segment(
    f: &HarmonicMap,
    path: &dyn Fn(f64) -> Complex64,
    start: (f64, Complex64),
    end: (f64, Complex64),
    depth: u32,
    guarded: bool,
) -> Result<f64> {
    let ((t0, v0), (t1, v1)) = (start, end);
    let d = (v1 / v0).arg();
    if d.abs() < FRAC_PI_2 {
        return Ok(d);
    }
    if depth == 0 {
        return Err(Error::Mismatch {
            detail: format!(
                "argument tracking could not resolve the contour between t = {t0} and t = {t1} \
                 (increment {d}); the path may pass too close to a zero"
            ),
        });
    }
    let tm = 0.5 * (t0 + t1);
    let vm = eval_on_contour(f, path(tm), guarded)?;
    Ok(
        arg_change_segment(f, path, (t0, v0), (tm, vm), depth - 1, guarded)?
            + arg_change_segment(f, path, (tm, vm), (t1, v1), depth - 1, guarded)?,
    )
}

/// Total argument change of f along the closed path (parameterized over
/// [0, 1] with path(0) = path(1)), divided by 2π and checked to be an
/// integer to 1e-6.
fn winding_along(
    f: &HarmonicMap,
    path: &dyn Fn(f64) -> Complex64,
    initial_samples: u32,
    guarded: bool,
) -> Result<i64> {
    let mut total = 0.0;
    let mut t_prev = 0.0;
    let mut v_prev = eval_on_contour(f, path(0.0), guarded)?;
    for j in 1..=initial_samples {
        let t = f64::from(j) / f64::from(initial_samples);
        let v = eval_on_contour(f, path(t), guarded)?;
        total += arg_change_segment(
            f,
            path,
            (t_prev, v_prev),
            (t, v),
            WINDING_MAX_DEPTH,
            guarded,
        )?;
        t_prev = t;
        v_prev = v;
    }
    let turns = total / TAU;
    let rounded = turns.round();
    if (turns - rounded).abs() > 1e-6 {
        return Err(Error::Mismatch {
            detail: format!("winding total {turns} is not close to an integer"),
        });
    }
    Ok(rounded as i64)
}

/// Winding number of f along the positively-oriented boundary square of the
/// region: the total change of arg f divided by 2π, computed by adaptive
/// sampling. Errors if f comes within 1e-9·(1+|z|)^deg of zero on the
/// boundary (the caller should perturb the region size).
pub fn winding_number(f: &HarmonicMap, region: &SearchRegion) -> Result<i64> {
    let c = region.center;
    let h = region.half_width;
    let corners = [
        c + Complex64::new(h, -h),
        c + Complex64::new(h, h),
        c + Complex64::new(-h, h),
        c + Complex64::new(-h, -h),
    ];
    let path = move |t: f64| -> Complex64 {
        let s = (t.rem_euclid(1.0)) * 4.0;
        let edge = (s.floor() as usize).min(3);
        let local = s - edge as f64;
        let a = corners[edge];
        let b = corners[(edge + 1) % 4];
        a + (b - a) * local
    };
    let samples = (16 * f.degree() as u32).max(64);
    // Round up to a multiple of 4 so the square's corners are sample points.
    let samples = samples.div_ceil(4) * 4;
    winding_along(f, &path, samples, true)
}

/// Winding number of f along the positively-oriented circle |z - center| = r:
/// the slow per-zero index certification mode.
pub fn winding_on_circle(f: &HarmonicMap, center: Complex64, radius: f64) -> Result<i64> {
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "circle radius must be positive and finite, got {radius}"
        )));
    }
    let path = move |t: f64| center + Complex64::from_polar(radius, TAU * t);
    let samples = (16 * f.degree() as u32).max(64);
    winding_along(f, &path, samples, true)
}

/// Index certification for a converged zero whose Jacobian determinant is too
/// small (relative to |p'|²) to trust its sign: the local winding on a circle
/// of radius 1e-4 is the arbiter. The circle runs unguarded — near-degenerate
/// zeros pull |f| far below the global polynomial scale at isolated contour
/// points, yet the factored evaluation keeps the argument trackable — so only
/// exact zeros or an unresolvable argument step abort, and both report as 0
/// (not certifiable as a simple zero).
fn certify_index_by_winding(f: &HarmonicMap, z: Complex64) -> i32 {
    let radius = 1e-4;
    let path = move |t: f64| z + Complex64::from_polar(radius, TAU * t);
    let samples = (16 * f.degree() as u32).max(64);
    match winding_along(f, &path, samples, false) {
        Ok(w @ (-1 | 1)) => w as i32,
        Ok(_) | Err(_) => 0,
    }
}

/// The full (undamped) Newton displacement -J⁻¹·f(z), or None when the
/// Jacobian is singular or the solve overflows.
fn newton_displacement(f: &HarmonicMap, z: Complex64, fv: Complex64) -> Option<Complex64> {
    let jac = f.jacobian(z);
    if jac.det == 0.0 || !jac.det.is_finite() {
        return None;
    }
    let (u, v) = (fv.re, fv.im);
    let dx = (v * jac.du_dy - u * jac.dv_dy) / jac.det;
    let dy = (u * jac.dv_dx - v * jac.du_dx) / jac.det;
    let step = Complex64::new(dx, dy);
    (step.re.is_finite() && step.im.is_finite()).then_some(step)
}

/// One damped Newton step from z: solves the real 2x2 system J·δ = -f(z) and
/// halves δ (up to NEWTON_MAX_HALVINGS times) until |f| strictly decreases.
/// Returns None when no improving step exists.
fn damped_step(
    f: &HarmonicMap,
    z: Complex64,
    fv: Complex64,
    fnorm: f64,
) -> Option<(Complex64, Complex64, f64)> {
    let mut step = newton_displacement(f, z, fv)?;
    for _ in 0..=NEWTON_MAX_HALVINGS {
        let z2 = z + step;
        let f2 = f.eval(z2);
        let n2 = f2.norm();
        if n2 < fnorm {
            return Some((z2, f2, n2));
        }
        step *= 0.5;
    }
    None
}

/// Newton iteration from one grid start. Returns the converged location and
/// its residual, or None when the start diverges, stalls, converges outside
/// the region, or fails to reach the residual target.
fn newton_from(
    f: &HarmonicMap,
    start: Complex64,
    region: &SearchRegion,
) -> Option<(Complex64, f64)> {
    let degree = f.degree();
    let escape = 4.0 * region.half_width;
    let mut z = start;
    let mut fv = f.eval(z);
    let mut fnorm = fv.norm();
    if !fnorm.is_finite() {
        return None;
    }
    for _ in 0..NEWTON_MAX_ITERS {
        if fnorm < 1e-11 * residual_scale(z, degree) {
            break;
        }
        let (z2, f2, n2) = damped_step(f, z, fv, fnorm)?;
        z = z2;
        fv = f2;
        fnorm = n2;
        if (z - region.center).norm() > escape {
            return None;
        }
    }
    if fnorm >= 1e-11 * residual_scale(z, degree) {
        return None;
    }
    // Contraction polish. The residual gate alone cannot pin a location: when
    // one component of f is orders of magnitude flatter than the other, |f|
    // dips below the scaled target along a whole sliver of the flat
    // component's zero curve. Full Newton steps keep their direction accurate
    // there (each component is evaluated to its own scale), so following them
    // while they contract slides a sliver stall into the actual zero; the
    // steps stop contracting at the local noise floor.
    let mut prev_len = f64::INFINITY;
    for _ in 0..(3 * degree as u32 + 20) {
        let Some(step) = newton_displacement(f, z, fv) else {
            break;
        };
        let len = step.norm();
        if len >= prev_len || len > 0.05 * (1.0 + z.norm()) {
            break;
        }
        z += step;
        fv = f.eval(z);
        fnorm = fv.norm();
        prev_len = len;
        if (z - region.center).norm() > escape {
            return None;
        }
    }
    // Position certificate: the remaining Newton displacement bounds the
    // distance to the zero Newton is tracking. Candidates that cannot be
    // pinned to a point — residual-gate stalls along a degenerate valley,
    // where the displacement stays macroscopic — are not zeros and are
    // dropped (an annotated degenerate point is reported from its annotation,
    // not from stray candidates).
    let certified = match newton_displacement(f, z, fv) {
        Some(step) => step.norm() <= 1e-9 * (1.0 + z.norm()),
        None => fnorm == 0.0,
    };
    (certified && region.contains(z)).then_some((z, fnorm))
}

fn merge_radius(z: Complex64) -> f64 {
    1e-7 * (1.0 + z.norm())
}

/// Absorption radius around an annotated degenerate point: converged
/// candidates inside it are accounted to the annotation rather than reported
/// as distinct zeros. The radius sits between the polish drift basin of the
/// degenerate point (below) and the closest genuine zero at ~2·sin(π/(2·deg))
/// from it (above).
fn absorption_radius(degree: usize, ann: &DegenerateAnnotation) -> f64 {
    0.35 * (PI / degree as f64).sin() * (1.0 + ann.location.norm())
}

/// Finds all zeros of f inside the region by multi-start damped Newton
/// iteration over the grid, then certifies completeness with the argument
/// principle:
///   (# index +1) - (# index -1) + Σ annotation contributions = winding = deg p.
///
/// Returned zeros are sorted by (Re, Im); annotated degenerate points are
/// appended as index-0 entries carrying their analytic multiplicity. Errors:
/// winding mismatch before the search starts; an index-0 zero with no
/// covering annotation; a signed-sum deficit (suggesting a denser grid); an
/// annotation whose location is not actually a zero.
pub fn find_zeros(
    f: &HarmonicMap,
    region: &SearchRegion,
    annotations: &[DegenerateAnnotation],
) -> Result<Vec<Zero>> {
    let degree = f.degree();
    let winding = winding_number(f, region)?;
    if winding != degree as i64 {
        return Err(Error::WindingMismatch {
            expected: degree as i64,
            got: winding,
        });
    }

    // Newton from every grid node, in parallel; order-preserving collect
    // keeps the candidate list deterministic.
    let side = (2.0 * region.half_width * region.grid_density).ceil() as u32 + 1;
    let step = 2.0 * region.half_width / f64::from(side - 1);
    let origin = region.center - Complex64::new(region.half_width, region.half_width);
    let mut candidates: Vec<(Complex64, f64)> = (0..side * side)
        .into_par_iter()
        .filter_map(|idx| {
            let (i, j) = (idx % side, idx / side);
            let start = origin + Complex64::new(f64::from(i) * step, f64::from(j) * step);
            newton_from(f, start, region)
        })
        .collect();

    // Sign-change-guided refinement. A zero is a crossing of the u = 0 and
    // v = 0 curves, and its Newton basin shrinks with the local zero spacing
    // while the base pitch stays fixed, so mid-cell zeros start falling
    // through the grid as the degree grows. Cells where both components
    // change sign within one cell of each other are exactly the crossing
    // neighbourhoods; an 8×8 subdivision of those cells seeds every basin
    // down to 1/8 of the base pitch at a cost proportional to the number of
    // crossings, not to the region area.
    let values: Vec<Complex64> = (0..side * side)
        .into_par_iter()
        .map(|idx| {
            let (i, j) = (idx % side, idx / side);
            f.eval(origin + Complex64::new(f64::from(i) * step, f64::from(j) * step))
        })
        .collect();
    let cells = (side - 1) as usize;
    let sign_mix = |comp: fn(&Complex64) -> f64, i: usize, j: usize| {
        let corners = [
            comp(&values[j * side as usize + i]),
            comp(&values[j * side as usize + i + 1]),
            comp(&values[(j + 1) * side as usize + i]),
            comp(&values[(j + 1) * side as usize + i + 1]),
        ];
        let min = corners.iter().cloned().fold(f64::INFINITY, f64::min);
        let max = corners.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        min <= 0.0 && max >= 0.0
    };
    let mix_u: Vec<bool> = (0..cells * cells)
        .map(|c| sign_mix(|v| v.re, c % cells, c / cells))
        .collect();
    let mix_v: Vec<bool> = (0..cells * cells)
        .map(|c| sign_mix(|v| v.im, c % cells, c / cells))
        .collect();
    let near = |flags: &[bool], i: usize, j: usize| {
        (i.saturating_sub(1)..=(i + 1).min(cells - 1))
            .any(|a| (j.saturating_sub(1)..=(j + 1).min(cells - 1)).any(|b| flags[b * cells + a]))
    };
    const REFINE: u32 = 8;
    let sub_starts: Vec<Complex64> = (0..cells * cells)
        .filter(|&c| {
            let (i, j) = (c % cells, c / cells);
            (mix_u[c] && near(&mix_v, i, j)) || (mix_v[c] && near(&mix_u, i, j))
        })
        .flat_map(|c| {
            let (i, j) = (c % cells, c / cells);
            (0..=REFINE).flat_map(move |a| {
                (0..=REFINE).map(move |b| {
                    origin
                        + Complex64::new(
                            (i as f64 + f64::from(a) / f64::from(REFINE)) * step,
                            (j as f64 + f64::from(b) / f64::from(REFINE)) * step,
                        )
                })
            })
        })
        .collect();
    candidates.extend(
        sub_starts
            .into_par_iter()
            .filter_map(|start| newton_from(f, start, region))
            .collect::<Vec<_>>(),
    );

    // Zeros of polynomial maps cluster at small scales around the region
    // center, where a fixed-pitch grid cannot seed basins thinner than its
    // spacing; geometric rings of extra starts cover those scales down to
    // 1e-3 of the local unit.
    let ring_angles = (16 * degree as u32).max(64);
    let ring_floor = 1e-3 * (1.0 + region.center.norm());
    let rings: Vec<Complex64> = std::iter::successors(Some(0.5 * region.half_width), |r| {
        (r * 0.5 > ring_floor).then_some(r * 0.5)
    })
    .flat_map(|r| {
        (0..ring_angles).map(move |a| {
            let theta = TAU * f64::from(a) / f64::from(ring_angles);
            Complex64::from_polar(r, theta)
        })
    })
    .collect();
    candidates.extend(
        rings
            .into_par_iter()
            .filter_map(|offset| newton_from(f, region.center + offset, region))
            .collect::<Vec<_>>(),
    );

    // Annotated degenerate points are accumulation features: the flat
    // component's zero set folds into petals around them, and the genuine
    // zeros in the surrounding shell live in basins far thinner than the
    // grid pitch. Rings just outside each absorption shell seed them.
    for ann in annotations {
        let base = absorption_radius(degree, ann);
        let shell: Vec<Complex64> = std::iter::successors(Some(1.05 * base), |r| {
            (r * 1.3 < 8.0 * base).then_some(r * 1.3)
        })
        .flat_map(|r| {
            (0..ring_angles).map(move |a| {
                let theta = TAU * f64::from(a) / f64::from(ring_angles);
                ann.location + Complex64::from_polar(r, theta)
            })
        })
        .collect();
        candidates.extend(
            shell
                .into_par_iter()
                .filter_map(|start| newton_from(f, start, region))
                .collect::<Vec<_>>(),
        );
    }

    // Deterministic merge: sort by (Re, Im), then cluster within the
    // |z|-scaled radius, keeping each cluster's smallest-residual member.
    candidates.sort_by(|a, b| a.0.re.total_cmp(&b.0.re).then(a.0.im.total_cmp(&b.0.im)));
    let mut merged: Vec<(Complex64, f64)> = Vec::new();
    for (z, res) in candidates {
        let radius = merge_radius(z);
        let mut absorbed = false;
        for slot in merged.iter_mut().rev() {
            if z.re - slot.0.re > radius {
                break;
            }
            if (z - slot.0).norm() <= radius.max(merge_radius(slot.0)) {
                if res < slot.1 {
                    *slot = (z, res);
                }
                absorbed = true;
                break;
            }
        }
        if !absorbed {
            merged.push((z, res));
        }
    }

    // Classify; candidates inside an annotation's absorption radius belong
    // to that degenerate point and are not distinct zeros.
    let mut zeros: Vec<Zero> = Vec::new();
    for (z, res) in merged {
        if annotations
            .iter()
            .any(|ann| (z - ann.location).norm() <= absorption_radius(degree, ann))
        {
            continue;
        }
        // Index from the Jacobian determinant sign where the determinant is
        // large enough (relative to |p'|²) for its f64 sign to be meaningful.
        // Below that the expanded determinant may be smaller than its own
        // evaluation noise — zeros near the origin have |p'| ≈ |q'| with a
        // gap scaling like |z|^(n-1) — so an arbiter decides: the factored
        // determinant's scale-free cosine when the map carries its factored
        // form (exactly 0 at a structural degeneracy, order one at a simple
        // zero, accurate at any order), the local winding otherwise.
        let jac = f.jacobian(z);
        let (dp, _) = f.derivatives(z);
        let index = if jac.det.abs() >= 1e-9 * dp.norm_sqr() {
            if jac.det > 0.0 {
                1
            } else {
                -1
            }
        } else if let Some(fam) = f.factors() {
            let (sign, cosine) = fam.det_signlog(z);
            if cosine.abs() >= 1e-9 {
                sign as i32
            } else {
                0
            }
        } else {
            certify_index_by_winding(f, z)
        };
        if index == 0 {
            return Err(Error::DegenerateUnexplained {
                location: z,
                det_ratio: jac.det / dp.norm_sqr(),
            });
        }
        zeros.push(Zero {
            location: z,
            index,
            residual: res,
            multiplicity: 1,
        });
    }

    // Append the annotated degenerate points, verifying that f does vanish
    // at each annotated location.
    for ann in annotations {
        let v = f.eval(ann.location).norm();
        if v >= 1e-8 * residual_scale(ann.location, degree) {
            return Err(Error::Mismatch {
                detail: format!(
                    "annotated degenerate point {} is not a zero: |f| = {v:.3e}",
                    ann.location
                ),
            });
        }
        zeros.push(Zero {
            location: ann.location,
            index: 0,
            residual: v,
            multiplicity: ann.multiplicity,
        });
    }

    // Argument principle: found indices plus analytic contributions must
    // account for the full boundary winding.
    let signed_sum: i64 = zeros.iter().map(|z| i64::from(z.index)).sum::<i64>()
        + annotations
            .iter()
            .map(|a| i64::from(a.index_contribution))
            .sum::<i64>();
    if signed_sum != winding {
        return Err(Error::CompletenessFailure {
            expected: winding,
            got: signed_sum,
            detail: format!(
                "signed index sum {signed_sum} does not account for the boundary winding \
                 {winding}; a denser start grid may be needed (current density {})",
                region.grid_density
            ),
        });
    }

    zeros.sort_by(|a, b| {
        a.location
            .re
            .total_cmp(&b.location.re)
            .then(a.location.im.total_cmp(&b.location.im))
    });
    Ok(zeros)
}

/// Runs both counting routes on the standard construction of order n — the
/// ray decomposition and the planar Newton search — and glues them into a
/// ValenceReport: equal multiplicity-weighted totals, pointwise location
/// agreement within 1e-6, and the closed-form prediction comparison.
pub fn cross_validate(n: u32) -> Result<crate::valence::ValenceReport> {
    use crate::construction::build_standard;
    use crate::ray::{ray_zero_locations, total_from_rays};
    use crate::valence::predict_count;

    let mut report = predict_count(n)?;
    let ray_total = total_from_rays(n)?;
    let ray_zeros = ray_zero_locations(n)?;

    let map = build_standard(n)?;
    let region = SearchRegion::standard(n);
    let annotations = [DegenerateAnnotation::standard_center(n)];
    let planar_zeros = find_zeros(&map, &region, &annotations)?;

    let planar_total: u64 = planar_zeros.iter().map(|z| u64::from(z.multiplicity)).sum();
    if planar_total != ray_total {
        return Err(Error::Mismatch {
            detail: format!(
                "planar weighted total {planar_total} disagrees with ray total {ray_total} \
                 at n = {n}"
            ),
        });
    }
    if planar_zeros.len() != ray_zeros.len() {
        return Err(Error::Mismatch {
            detail: format!(
                "distinct zero counts differ at n = {n}: planar {} vs rays {}; \
                 unmatched: {}",
                planar_zeros.len(),
                ray_zeros.len(),
                symmetric_difference(&planar_zeros, &ray_zeros)
            ),
        });
    }
    // Pair each planar zero with its nearest unused ray zero. Sort order is
    // not reliable here: zeros on a coordinate axis land at re = ±1e-17 from
    // either route and shuffle within the (re, im) ordering.
    let mut used = vec![false; ray_zeros.len()];
    for p in &planar_zeros {
        let mate = ray_zeros
            .iter()
            .enumerate()
            .filter(|(i, r)| !used[*i] && (p.location - r.location).norm() <= 1e-6)
            .min_by(|(_, a), (_, b)| {
                (p.location - a.location)
                    .norm()
                    .total_cmp(&(p.location - b.location).norm())
            });
        match mate {
            Some((i, r)) if r.multiplicity == p.multiplicity && r.index == p.index => {
                used[i] = true;
            }
            Some((_, r)) => {
                return Err(Error::Mismatch {
                    detail: format!(
                        "zero records disagree at n = {n}: planar ({}, index {}, x{}) vs \
                         ray ({}, index {}, x{})",
                        p.location, p.index, p.multiplicity, r.location, r.index, r.multiplicity
                    ),
                });
            }
            None => {
                return Err(Error::Mismatch {
                    detail: format!(
                        "planar zero ({}, index {}, x{}) has no ray counterpart within 1e-6 \
                         at n = {n}",
                        p.location, p.index, p.multiplicity
                    ),
                });
            }
        }
    }

    report.verified = Some(planar_total);
    report.agree = planar_total == report.predicted;
    Ok(report)
}

/// Locations present in one list but missing from the other at 1e-6
/// tolerance, rendered for error messages (capped at 8 per side).
fn symmetric_difference(a: &[Zero], b: &[Zero]) -> String {
    let unmatched = |xs: &[Zero], ys: &[Zero]| -> Vec<String> {
        xs.iter()
            .filter(|x| !ys.iter().any(|y| (x.location - y.location).norm() <= 1e-6))
            .take(8)
            .map(|x| format!("{}", x.location))
            .collect()
    };
    let only_a = unmatched(a, b);
    let only_b = unmatched(b, a);
    format!("first-only {:?}, second-only {:?}", only_a, only_b)
}
