//! Acceptance gate: every release criterion, one test each, run serially so
//! the stated runtime budgets are measured cleanly. Each test prints a single
//! `ACCEPTANCE <id>: PASS/FAIL — detail` line (visible with --nocapture, and
//! always visible on failure) and then asserts.
//!
//! Criteria that cannot be met as stated are implemented faithfully and left
//! failing, with the analysis in the printed detail — they are not weakened.

use hv_core::{
    asymptotic_slope, build_perturbed, build_standard, cot_identity_residual, count_ray,
    critical_value_margin, cross_validate, find_zeros, k_max, predict_count, ray_value,
    solve_cos_fixed_point, total_from_rays, Complex64, ConstructionParams, DegenerateAnnotation,
    FactoredFamily, SearchRegion,
};
use std::f64::consts::PI;
use std::sync::{Mutex, MutexGuard, PoisonError};
use std::time::{Duration, Instant};

static GATE: Mutex<()> = Mutex::new(());

fn serial() -> MutexGuard<'static, ()> {
    GATE.lock().unwrap_or_else(PoisonError::into_inner)
}

fn report(id: u32, pass: bool, detail: &str) {
    println!(
        "ACCEPTANCE {id}: {} — {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
}

/// SplitMix64; fixed seeds keep the random clauses deterministic run to run.
struct SplitMix64(u64);

impl SplitMix64 {
    fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    fn in_range(&mut self, lo: f64, hi: f64) -> f64 {
        let u = (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64;
        lo + u * (hi - lo)
    }

    fn below(&mut self, n: u32) -> u32 {
        (self.next_u64() % u64::from(n)) as u32
    }
}

// ---------------------------------------------------------------------------
// 1. Count table vs the published reference values, n = 4..35, under 1 s.
// ---------------------------------------------------------------------------

#[test]
fn acceptance_1_published_count_table() {
    let _gate = serial();
    const PUBLISHED: [u64; 32] = [
        10, 17, 26, 37, 54, 69, 86, 105, 126, 149, 174, 201, 234, 265, 298, 333, 370, 409, 450,
        497, 542, 589, 638, 689, 742, 797, 854, 917, 978, 1041, 1106, 1173,
    ];
    let t0 = Instant::now();
    let out = std::process::Command::new(env!("CARGO_BIN_EXE_hv"))
        .args(["table", "--n-from", "4", "--n-to", "35"])
        .output()
        .expect("failed to run hv");
    let elapsed = t0.elapsed();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let counts: Vec<u64> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(2).unwrap().parse().unwrap())
        .collect();
    assert_eq!(counts.len(), 32);

    let mismatches: Vec<String> = (0u32..32)
        .filter(|&i| counts[i as usize] != PUBLISHED[i as usize])
        .map(|i| {
            format!(
                "n={}: computed {} vs published {}",
                i + 4,
                counts[i as usize],
                PUBLISHED[i as usize]
            )
        })
        .collect();
    let in_time = elapsed < Duration::from_secs(1);
    let pass = mismatches.is_empty() && in_time;
    report(
        1,
        pass,
        &format!(
            "32 rows in {elapsed:.2?}; {}",
            if mismatches.is_empty() {
                "all counts match the published values".to_string()
            } else {
                format!(
                    "{} rows differ from the published values [{}] — the computed counts are \
                     the certified ones (each is cross-checked per-ray and, for small n, by an \
                     independent planar search; see the verify command), so the published \
                     figures at these four orders appear to be in error",
                    mismatches.len(),
                    mismatches.join("; ")
                )
            }
        ),
    );
    assert!(in_time, "table run took {elapsed:.2?}, budget is 1 s");
    assert!(
        mismatches.is_empty(),
        "published-value mismatches: {}",
        mismatches.join("; ")
    );
}

// ---------------------------------------------------------------------------
// 2. Closed-form count equals the ray-decomposition total, n = 4..60, < 30 s.
// ---------------------------------------------------------------------------

#[test]
fn acceptance_2_formula_matches_ray_totals() {
    let _gate = serial();
    let t0 = Instant::now();
    let mut checked = 0u32;
    for n in 4..=60 {
        let predicted = predict_count(n).unwrap().predicted;
        let from_rays = total_from_rays(n).unwrap();
        assert_eq!(
            predicted, from_rays,
            "closed form and ray total disagree at n = {n}"
        );
        checked += 1;
    }
    let elapsed = t0.elapsed();
    let in_time = elapsed < Duration::from_secs(30);
    report(
        2,
        in_time,
        &format!("{checked} orders, exact integer agreement, {elapsed:.2?}"),
    );
    assert!(in_time, "sweep took {elapsed:.2?}, budget is 30 s");
}

// ---------------------------------------------------------------------------
// 3. Planar search agrees with the ray decomposition pointwise, < 5 min.
// ---------------------------------------------------------------------------

#[test]
fn acceptance_3_planar_ray_cross_validation() {
    let _gate = serial();
    let t0 = Instant::now();
    let mut lines = Vec::new();
    for n in [4u32, 6, 8, 10, 12, 16] {
        let r =
            cross_validate(n).unwrap_or_else(|e| panic!("cross-validation failed at n = {n}: {e}"));
        assert!(r.agree, "weighted totals disagree at n = {n}");
        assert_eq!(r.verified, Some(r.predicted), "n = {n}");
        lines.push(format!("n={n}:{}", r.predicted));
    }
    let elapsed = t0.elapsed();
    let in_time = elapsed < Duration::from_secs(300);
    report(
        3,
        in_time,
        &format!(
            "weighted counts and zero locations agree ({}) in {elapsed:.2?}",
            lines.join(" ")
        ),
    );
    assert!(
        in_time,
        "cross-validation took {elapsed:.2?}, budget is 5 min"
    );
}

// ---------------------------------------------------------------------------
// 4. Perturbed construction at n = 12, a = e^(i/10): 128 simple zeros, < 2 min.
// ---------------------------------------------------------------------------

#[test]
fn acceptance_4_perturbed_family_zero_census() {
    let _gate = serial();
    let t0 = Instant::now();
    let map = build_perturbed(&ConstructionParams::with_arg(12, 0.1).unwrap()).unwrap();
    let zeros = find_zeros(&map, &SearchRegion::standard(12), &[]).unwrap();
    let elapsed = t0.elapsed();

    assert_eq!(zeros.len(), 128, "expected exactly 128 distinct zeros");
    assert!(
        zeros.iter().all(|z| z.multiplicity == 1),
        "every zero must be simple"
    );
    assert!(
        zeros.iter().all(|z| z.index == 1 || z.index == -1),
        "every zero must be nondegenerate (index ±1)"
    );
    let sum: i64 = zeros.iter().map(|z| i64::from(z.index)).sum();
    assert_eq!(sum, 12, "signed index sum must equal the analytic degree");
    for (i, a) in zeros.iter().enumerate() {
        for b in &zeros[i + 1..] {
            assert!(
                (a.location - b.location).norm() > 1e-7,
                "zeros not distinct: {} vs {}",
                a.location,
                b.location
            );
        }
    }
    let in_time = elapsed < Duration::from_secs(120);
    report(
        4,
        in_time,
        &format!("128 distinct simple zeros, signed index sum 12, {elapsed:.2?}"),
    );
    assert!(
        in_time,
        "perturbed census took {elapsed:.2?}, budget is 2 min"
    );
}

// ---------------------------------------------------------------------------
// 5. Fixed point of cosine and the asymptotic slope constant.
// ---------------------------------------------------------------------------

#[test]
fn acceptance_5_fixed_point_and_slope() {
    let _gate = serial();
    let x = solve_cos_fixed_point();
    let gap = (x - 0.73908513321516).abs();
    let slope5 = format!("{:.5}", asymptotic_slope());
    let pass = gap <= 1e-13 && slope5 == "0.13237";
    report(
        5,
        pass,
        &format!("fixed point {x:.14} (|Δ| = {gap:.1e}), slope rounds to {slope5}"),
    );
    assert!(gap <= 1e-13);
    assert_eq!(slope5, "0.13237");
}

// ---------------------------------------------------------------------------
// 6. k_max stays within 3 of slope·n at n = 100, 500, 1000, 5000.
// ---------------------------------------------------------------------------

#[test]
fn acceptance_6_kmax_asymptotic_band() {
    let _gate = serial();
    let slope = asymptotic_slope();
    let mut rows = Vec::new();
    for n in [100u32, 500, 1000, 5000] {
        let kmax = k_max(n).unwrap().k_max;
        let deviation = f64::from(kmax) - slope * f64::from(n);
        assert!(
            deviation.abs() <= 3.0,
            "n = {n}: k_max = {kmax} deviates from slope·n by {deviation:.3}"
        );
        rows.push(format!("n={n}:Δ={deviation:+.3}"));
    }
    report(
        6,
        true,
        &format!("deviations within ±3 ({})", rows.join(" ")),
    );
}

// ---------------------------------------------------------------------------
// 7. Transverse-function analysis: margins, critical values, the cotangent
//    identity, and the boundary limit.
// ---------------------------------------------------------------------------

#[test]
fn acceptance_7_transverse_function_analysis() {
    let _gate = serial();

    // (a) The binding critical-value margin is positive for every admissible
    // pair up to order 60.
    let mut margin_min = f64::INFINITY;
    for n in 4..=60u32 {
        for k in 2..n {
            let m = critical_value_margin(n, k).unwrap();
            assert!(
                m.margin > 0.0,
                "critical-value margin not positive at n = {n}, k = {k}: {}",
                m.margin
            );
            margin_min = margin_min.min(m.margin);
        }
    }

    // (b) First-family critical values are positive by direct evaluation.
    let mut fam1_min = f64::INFINITY;
    for n in 4..=60u32 {
        for k in 1..n {
            for j in 1..=k {
                let theta = (f64::from(j) - 0.5) * PI / f64::from(n);
                let v = ray_value(theta, n, k).unwrap();
                assert!(
                    v > 0.0,
                    "first-family critical value at n = {n}, k = {k}, j = {j} is {v}"
                );
                fam1_min = fam1_min.min(v);
            }
        }
    }

    // (c) Cotangent-identity residual stays below 1e-10 over 1000 random
    // samples. Angles are drawn from [π/120, π − π/120], the range the
    // analysis evaluates the identity on for orders up to 60 (critical and
    // ray angles sit at least π/116 from the interval ends).
    let mut rng = SplitMix64(0x5eed_c0de);
    let mut residual_max: f64 = 0.0;
    for _ in 0..1000 {
        let n = 4 + rng.below(57);
        let t1 = rng.in_range(PI / 120.0, PI - PI / 120.0);
        let t2 = rng.in_range(PI / 120.0, PI - PI / 120.0);
        let res = cot_identity_residual(t1, t2, n).unwrap().abs();
        assert!(
            res < 1e-10,
            "cotangent identity residual {res:.3e} at n = {n}, θ₁ = {t1}, θ₂ = {t2}"
        );
        residual_max = residual_max.max(res);
    }

    // (d) Boundary limit: the transverse value sampled at α − 1e−8 must match
    // -2/sin(2πk/n) within 1e−5. Implemented exactly as stated; the check is
    // not attainable at this offset. The function's slope at the boundary
    // grows like (n−1)/cos²(πk/n), so near k ≈ n/2 the first-order gap
    // h·|A′(α)| at h = 1e−8 alone exceeds the 1e−5 tolerance (n = 60,
    // k = 29: ≈ 8e−4). The limit itself is correct: the same sweep at
    // h = 1e−10 sits inside the tolerance for every pair, and the gap
    // shrinks linearly with h. Left failing rather than loosened.
    let mut worst_gap = 0.0f64;
    let mut worst_pair = (0u32, 0u32);
    let mut failures = 0u32;
    let mut h10_max = 0.0f64;
    for n in 4..=60u32 {
        for k in 1..n {
            if 2 * k == n {
                continue; // the limit is infinite there by design
            }
            let alpha = PI * f64::from(k) / f64::from(n);
            let expected = -2.0 / (2.0 * PI * f64::from(k) / f64::from(n)).sin();
            let gap8 = (ray_value(alpha - 1e-8, n, k).unwrap() - expected).abs();
            if gap8 > 1e-5 {
                failures += 1;
            }
            if gap8 > worst_gap {
                worst_gap = gap8;
                worst_pair = (n, k);
            }
            let gap10 = (ray_value(alpha - 1e-10, n, k).unwrap() - expected).abs();
            h10_max = h10_max.max(gap10);
        }
    }
    let boundary_pass = failures == 0;

    report(
        7,
        boundary_pass,
        &format!(
            "margins > 0 (min {margin_min:.3e}); first-family values > 0 (min {fam1_min:.3e}); \
             identity residual ≤ {residual_max:.1e} over 1000 samples; boundary limit at \
             offset 1e-8: {failures} of the (n, k) pairs exceed 1e-5 (worst {worst_gap:.1e} \
             at n = {}, k = {}), while offset 1e-10 meets it everywhere (max gap {h10_max:.1e}) \
             — the sampled offset is too coarse for the steep boundary approach near k ≈ n/2, \
             not a defect in the limit",
            worst_pair.0, worst_pair.1
        ),
    );
    assert!(
        boundary_pass,
        "boundary-limit check at offset 1e-8 failed for {failures} pairs \
         (worst gap {worst_gap:.1e} at n = {}, k = {}); the same check at offset 1e-10 \
         passes everywhere (max gap {h10_max:.1e})",
        worst_pair.0, worst_pair.1
    );
}

// ---------------------------------------------------------------------------
// 8. Bracket structure and conjugate symmetry.
// ---------------------------------------------------------------------------

#[test]
fn acceptance_8_bracket_and_symmetry_structure() {
    let _gate = serial();
    let t0 = Instant::now();

    // Every inter-pole segment carries exactly one root; the segment before
    // the first pole carries none.
    let mut segments_checked = 0u64;
    for n in 4..=60u32 {
        for k in 1..n {
            let p = count_ray(n, k).unwrap();
            let before_first = p.roots_theta.iter().filter(|&&t| t < p.poles[0]).count();
            assert_eq!(
                before_first, 0,
                "n = {n}, k = {k}: roots before the first pole"
            );
            for w in p.poles.windows(2) {
                let inside = p
                    .roots_theta
                    .iter()
                    .filter(|&&t| t > w[0] && t < w[1])
                    .count();
                assert_eq!(
                    inside, 1,
                    "n = {n}, k = {k}: inter-pole segment ({}, {}) holds {inside} roots",
                    w[0], w[1]
                );
                segments_checked += 1;
            }
        }
    }

    // Mirror symmetry: with W = (z+a)^(n-1)(z-(n-1)a) real-coefficient and
    // T = iW, Im T(conj z) = Re(conj W) = Re W = Im T(z), so the level set
    // {Im T = 0} is symmetric across the real axis and the ray at -k carries
    // the same count as the ray at k.
    let mut rng = SplitMix64(0xd1ce_5eed);
    let mut sym_checked = 0u64;
    for n in 4..=60u32 {
        let fam = FactoredFamily::standard(n).unwrap();
        let k = 1 + rng.below(n - 1);
        let alpha = PI * f64::from(k) / f64::from(n);
        for _ in 0..100 {
            let r = rng.in_range(1e-3, 3.0);
            let up = fam.im_t(Complex64::from_polar(r, alpha));
            let down = fam.im_t(Complex64::from_polar(r, -alpha));
            let scale = up.abs().max(down.abs()).max(1e-300);
            assert!(
                (up - down).abs() <= 1e-12 * scale,
                "conjugate symmetry broken at n = {n}, k = {k}, r = {r}"
            );
            sym_checked += 1;
        }
    }

    let elapsed = t0.elapsed();
    report(
        8,
        true,
        &format!(
            "{segments_checked} inter-pole segments with exactly one root each, none before \
             the first pole; mirror symmetry of Im T exact at {sym_checked} sampled radii; \
             {elapsed:.2?}"
        ),
    );
}

// ---------------------------------------------------------------------------
// 9. Argument principle: boundary winding and index sums.
// ---------------------------------------------------------------------------

#[test]
fn acceptance_9_argument_principle() {
    let _gate = serial();
    let t0 = Instant::now();
    use hv_core::winding_number;

    for n in 4..=16u32 {
        let region = SearchRegion::standard(n);

        let standard = build_standard(n).unwrap();
        assert_eq!(
            winding_number(&standard, &region).unwrap(),
            i64::from(n),
            "standard boundary winding at n = {n}"
        );
        let ann = DegenerateAnnotation::standard_center(n);
        let zeros = find_zeros(&standard, &region, &[ann]).unwrap();
        let sum: i64 = zeros.iter().map(|z| i64::from(z.index)).sum::<i64>()
            + i64::from(ann.index_contribution);
        assert_eq!(sum, i64::from(n), "standard index sum at n = {n}");

        let perturbed = build_perturbed(&ConstructionParams::with_arg(n, 0.1).unwrap()).unwrap();
        assert_eq!(
            winding_number(&perturbed, &region).unwrap(),
            i64::from(n),
            "perturbed boundary winding at n = {n}"
        );
        let zeros = find_zeros(&perturbed, &region, &[]).unwrap();
        let sum: i64 = zeros.iter().map(|z| i64::from(z.index)).sum();
        assert_eq!(sum, i64::from(n), "perturbed index sum at n = {n}");
    }

    let elapsed = t0.elapsed();
    report(
        9,
        true,
        &format!(
            "winding = n and index sum = n for n = 4..16, standard and perturbed; {elapsed:.2?}"
        ),
    );
}
