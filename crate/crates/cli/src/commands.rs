//! Implementations of the six subcommands. Each returns the full stdout (and
//! optional stderr) produced by the run plus its exit code; hard failures come
//! back as `Failure` with the exit-code convention:
//!   0 success · 1 verification mismatch · 2 usage/precondition · 3 structural
//!   violation.

use crate::contour::{zero_contour, Segment};
use crate::output::{envelope, fmt_f64, json_f64, json_i64, json_u64, Csv};
use crate::Format;
use hv_core::{
    asymptotic_slope, build_perturbed, find_zeros, k_max, predict_count, ray_zero_locations,
    solve_cos_fixed_point, total_from_rays, Complex64, ConstructionParams, FactoredFamily,
    SearchRegion, Zero,
};
use serde_json::{Map, Value};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

pub struct Output {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Output {
    fn stdout(text: String) -> Output {
        Output {
            stdout: text,
            stderr: String::new(),
            code: 0,
        }
    }
}

pub struct Failure {
    pub code: i32,
    pub message: String,
}

pub type CmdResult = Result<Output, Failure>;

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

/// Library errors keep their own severity: bad arguments are usage errors,
/// a broken certification is structural, and everything else (mismatches,
/// winding/completeness failures, boundary zeros) is a verification failure.
fn from_core(err: hv_core::Error) -> Failure {
    let code = match &err {
        hv_core::Error::InvalidArgument(_) => 2,
        hv_core::Error::StructuralViolation { .. } => 3,
        _ => 1,
    };
    Failure {
        code,
        message: err.to_string(),
    }
}

fn require_order(n: u32) -> Result<(), Failure> {
    if n < 4 {
        return Err(usage(format!(
            "n must be at least 4 (got {n}): the closed-form count \
             n^2 - 2n + 2 + 4*k_max(n) is established only for orders n >= 4"
        )));
    }
    Ok(())
}

fn require_range(n_from: u32, n_to: u32) -> Result<(), Failure> {
    require_order(n_from)?;
    if n_from > n_to {
        return Err(usage(format!(
            "empty range: --n-from {n_from} exceeds --n-to {n_to}"
        )));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// predict
// ---------------------------------------------------------------------------

pub fn predict(n: u32, format: Format) -> CmdResult {
    require_order(n)?;
    let report = predict_count(n).map_err(from_core)?;
    match format {
        Format::Csv => Ok(Output::stdout(format!(
            "n={} count={} kmax={} baseline={}\n",
            report.n, report.predicted, report.k_max, report.baseline
        ))),
        Format::Json => {
            let mut params = Map::new();
            params.insert("n".into(), json_u64(n.into()));
            let mut payload = Map::new();
            payload.insert("n".into(), json_u64(report.n.into()));
            payload.insert("count".into(), json_u64(report.predicted));
            payload.insert("kmax".into(), json_u64(report.k_max.into()));
            payload.insert("baseline".into(), json_u64(report.baseline));
            Ok(Output::stdout(envelope(
                "predict",
                params,
                Value::Object(payload),
            )))
        }
    }
}

// ---------------------------------------------------------------------------
// table
// ---------------------------------------------------------------------------

pub fn table(n_from: u32, n_to: u32, format: Format) -> CmdResult {
    require_range(n_from, n_to)?;
    let mut rows = Vec::new();
    for n in n_from..=n_to {
        let report = predict_count(n).map_err(from_core)?;
        rows.push((n, report.k_max, report.predicted));
    }
    match format {
        Format::Csv => {
            let mut csv = Csv::new(&["n", "kmax", "count"]);
            for (n, kmax, count) in rows {
                csv.row([n.to_string(), kmax.to_string(), count.to_string()]);
            }
            Ok(Output::stdout(csv.finish()))
        }
        Format::Json => {
            let mut params = Map::new();
            params.insert("n_from".into(), json_u64(n_from.into()));
            params.insert("n_to".into(), json_u64(n_to.into()));
            let payload = rows
                .into_iter()
                .map(|(n, kmax, count)| {
                    let mut row = Map::new();
                    row.insert("n".into(), json_u64(n.into()));
                    row.insert("kmax".into(), json_u64(kmax.into()));
                    row.insert("count".into(), json_u64(count));
                    Value::Object(row)
                })
                .collect();
            Ok(Output::stdout(envelope(
                "table",
                params,
                Value::Array(payload),
            )))
        }
    }
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

pub fn verify(n_from: u32, n_to: u32, planar: bool, force: bool, format: Format) -> CmdResult {
    require_range(n_from, n_to)?;
    if planar && n_to > 24 && !force {
        return Err(usage(format!(
            "--planar is limited to n <= 24 (the grid search over {n_to} would be very slow); \
             pass --force to run it anyway"
        )));
    }
    struct Row {
        n: u32,
        predicted: u64,
        ray_total: u64,
        agree: bool,
        planar_total: Option<u64>,
    }
    let mut rows = Vec::new();
    let mut all_agree = true;
    for n in n_from..=n_to {
        let report = predict_count(n).map_err(from_core)?;
        let ray_total = total_from_rays(n).map_err(from_core)?;
        let planar_total = if planar {
            // The full cross-validation also matches zero locations pointwise;
            // any disagreement surfaces as a mismatch (exit 1).
            let validated = hv_core::cross_validate(n).map_err(from_core)?;
            validated.verified
        } else {
            None
        };
        let agree =
            report.predicted == ray_total && planar_total.is_none_or(|p| p == report.predicted);
        all_agree &= agree;
        rows.push(Row {
            n,
            predicted: report.predicted,
            ray_total,
            agree,
            planar_total,
        });
    }
    let code = i32::from(!all_agree);
    match format {
        Format::Csv => {
            let header: &[&str] = if planar {
                &["n", "predicted", "ray_total", "agree", "planar_total"]
            } else {
                &["n", "predicted", "ray_total", "agree"]
            };
            let mut csv = Csv::new(header);
            for r in rows {
                let mut fields = vec![
                    r.n.to_string(),
                    r.predicted.to_string(),
                    r.ray_total.to_string(),
                    r.agree.to_string(),
                ];
                if let Some(p) = r.planar_total {
                    fields.push(p.to_string());
                }
                csv.row(fields);
            }
            Ok(Output {
                stdout: csv.finish(),
                stderr: String::new(),
                code,
            })
        }
        Format::Json => {
            let mut params = Map::new();
            params.insert("n_from".into(), json_u64(n_from.into()));
            params.insert("n_to".into(), json_u64(n_to.into()));
            params.insert("planar".into(), Value::Bool(planar));
            params.insert("force".into(), Value::Bool(force));
            let payload = rows
                .into_iter()
                .map(|r| {
                    let mut row = Map::new();
                    row.insert("n".into(), json_u64(r.n.into()));
                    row.insert("predicted".into(), json_u64(r.predicted));
                    row.insert("ray_total".into(), json_u64(r.ray_total));
                    row.insert("agree".into(), Value::Bool(r.agree));
                    if let Some(p) = r.planar_total {
                        row.insert("planar_total".into(), json_u64(p));
                    }
                    Value::Object(row)
                })
                .collect();
            Ok(Output {
                stdout: envelope("verify", params, Value::Array(payload)),
                stderr: String::new(),
                code,
            })
        }
    }
}

// ---------------------------------------------------------------------------
// zeros
// ---------------------------------------------------------------------------

pub fn zeros(n: u32, perturb_arg: f64, format: Format, out: Option<&Path>) -> CmdResult {
    require_order(n)?;
    if !perturb_arg.is_finite() {
        return Err(usage(format!(
            "--perturb-arg must be a finite real number, got {perturb_arg}"
        )));
    }
    let list: Vec<Zero> = if perturb_arg == 0.0 {
        ray_zero_locations(n).map_err(from_core)?
    } else {
        let params = ConstructionParams::with_arg(n, perturb_arg).map_err(from_core)?;
        let map = build_perturbed(&params).map_err(from_core)?;
        find_zeros(&map, &SearchRegion::standard(n), &[]).map_err(from_core)?
    };
    let text = match format {
        Format::Csv => {
            let mut csv = Csv::new(&["re", "im", "index", "multiplicity", "residual"]);
            for z in &list {
                csv.row([
                    fmt_f64(z.location.re),
                    fmt_f64(z.location.im),
                    z.index.to_string(),
                    z.multiplicity.to_string(),
                    fmt_f64(z.residual),
                ]);
            }
            csv.finish()
        }
        Format::Json => {
            let mut params = Map::new();
            params.insert("n".into(), json_u64(n.into()));
            params.insert("perturb_arg".into(), json_f64(perturb_arg));
            let payload = list
                .iter()
                .map(|z| {
                    let mut row = Map::new();
                    row.insert("re".into(), json_f64(z.location.re));
                    row.insert("im".into(), json_f64(z.location.im));
                    row.insert("index".into(), json_i64(z.index.into()));
                    row.insert("multiplicity".into(), json_u64(z.multiplicity.into()));
                    row.insert("residual".into(), json_f64(z.residual));
                    Value::Object(row)
                })
                .collect();
            envelope("zeros", params, Value::Array(payload))
        }
    };
    match out {
        None => Ok(Output::stdout(text)),
        Some(path) => {
            std::fs::write(path, &text)
                .map_err(|e| usage(format!("cannot write {}: {e}", path.display())))?;
            Ok(Output::stdout(format!(
                "wrote {} ({} zeros)\n",
                path.display(),
                list.len()
            )))
        }
    }
}

// ---------------------------------------------------------------------------
// plot-data
// ---------------------------------------------------------------------------

pub fn plot_data(
    n: u32,
    perturb_arg: f64,
    window: Option<f64>,
    resolution: u32,
    out_dir: &Path,
    format: Format,
) -> CmdResult {
    require_order(n)?;
    if resolution < 16 {
        return Err(usage(format!(
            "--resolution must be at least 16 grid nodes per side, got {resolution}"
        )));
    }
    let half_width = window.unwrap_or(f64::from(n) + 1.0);
    if !(half_width > 0.0 && half_width.is_finite()) {
        return Err(usage(format!(
            "--window must be a positive finite half-width, got {half_width}"
        )));
    }
    if !perturb_arg.is_finite() {
        return Err(usage(format!(
            "--perturb-arg must be a finite real number, got {perturb_arg}"
        )));
    }
    let params = ConstructionParams::with_arg(n, perturb_arg).map_err(from_core)?;
    let fam = FactoredFamily::new(&params);

    // The 2 Re S = 0 locus: 2n rays from the origin at angles πk/n, clipped to
    // the square window.
    let rays: Vec<Segment> = (0..2 * n)
        .map(|k| {
            let angle = std::f64::consts::PI * f64::from(k) / f64::from(n);
            let (s, c) = angle.sin_cos();
            let scale = half_width / c.abs().max(s.abs());
            Segment {
                x1: 0.0,
                y1: 0.0,
                x2: scale * c,
                y2: scale * s,
            }
        })
        .collect();

    // The Im T = 0 level set via marching squares on the sign/log field.
    let field = |x: f64, y: f64| fam.im_t_signlog(Complex64::new(x, y));
    let level = zero_contour(field, half_width, resolution);

    std::fs::create_dir_all(out_dir)
        .map_err(|e| usage(format!("cannot create {}: {e}", out_dir.display())))?;
    let ext = match format {
        Format::Csv => "csv",
        Format::Json => "json",
    };
    let rays_path = out_dir.join(format!("rays.{ext}"));
    let contour_path = out_dir.join(format!("imT_contour.{ext}"));

    let render = |name: &str, segments: &[Segment], path: &PathBuf| -> Result<(), Failure> {
        let text = match format {
            Format::Csv => {
                let mut csv = Csv::new(&["x1", "y1", "x2", "y2"]);
                for s in segments {
                    csv.row([fmt_f64(s.x1), fmt_f64(s.y1), fmt_f64(s.x2), fmt_f64(s.y2)]);
                }
                csv.finish()
            }
            Format::Json => {
                let mut parameters = Map::new();
                parameters.insert("n".into(), json_u64(n.into()));
                parameters.insert("perturb_arg".into(), json_f64(perturb_arg));
                parameters.insert("window".into(), json_f64(half_width));
                parameters.insert("resolution".into(), json_u64(resolution.into()));
                parameters.insert("file".into(), Value::String(name.into()));
                let payload = segments
                    .iter()
                    .map(|s| {
                        let mut row = Map::new();
                        row.insert("x1".into(), json_f64(s.x1));
                        row.insert("y1".into(), json_f64(s.y1));
                        row.insert("x2".into(), json_f64(s.x2));
                        row.insert("y2".into(), json_f64(s.y2));
                        Value::Object(row)
                    })
                    .collect();
                envelope("plot-data", parameters, Value::Array(payload))
            }
        };
        std::fs::write(path, text)
            .map_err(|e| usage(format!("cannot write {}: {e}", path.display())))
    };
    render("rays", &rays, &rays_path)?;
    render("imT_contour", &level, &contour_path)?;

    let mut stdout = String::new();
    let _ = writeln!(
        stdout,
        "wrote {} ({} segments)",
        rays_path.display(),
        rays.len()
    );
    let _ = writeln!(
        stdout,
        "wrote {} ({} segments)",
        contour_path.display(),
        level.len()
    );
    Ok(Output::stdout(stdout))
}

// ---------------------------------------------------------------------------
// asymptote
// ---------------------------------------------------------------------------

pub fn asymptote(n_list: Option<Vec<u32>>, format: Format) -> CmdResult {
    let list = n_list.unwrap_or_else(|| vec![100, 500, 1000, 5000]);
    if list.is_empty() {
        return Err(usage("--n-list must contain at least one order"));
    }
    for &n in &list {
        require_order(n)?;
    }
    let x = solve_cos_fixed_point();
    let slope = asymptotic_slope();
    let stderr = format!("X = {x:.14}\n");
    struct Row {
        n: u32,
        kmax: u32,
        over_n: f64,
        deviation: f64,
    }
    let mut rows = Vec::new();
    for &n in &list {
        let kmax = k_max(n).map_err(from_core)?.k_max;
        rows.push(Row {
            n,
            kmax,
            over_n: f64::from(kmax) / f64::from(n),
            deviation: f64::from(kmax) - slope * f64::from(n),
        });
    }
    let stdout = match format {
        Format::Csv => {
            let mut csv = Csv::new(&["n", "kmax", "kmax_over_n", "slope", "deviation"]);
            for r in rows {
                csv.row([
                    r.n.to_string(),
                    r.kmax.to_string(),
                    fmt_f64(r.over_n),
                    fmt_f64(slope),
                    fmt_f64(r.deviation),
                ]);
            }
            csv.finish()
        }
        Format::Json => {
            let mut params = Map::new();
            params.insert(
                "n_list".into(),
                Value::Array(list.iter().map(|&n| json_u64(n.into())).collect()),
            );
            let payload = rows
                .into_iter()
                .map(|r| {
                    let mut row = Map::new();
                    row.insert("n".into(), json_u64(r.n.into()));
                    row.insert("kmax".into(), json_u64(r.kmax.into()));
                    row.insert("kmax_over_n".into(), json_f64(r.over_n));
                    row.insert("slope".into(), json_f64(slope));
                    row.insert("deviation".into(), json_f64(r.deviation));
                    Value::Object(row)
                })
                .collect();
            envelope("asymptote", params, Value::Array(payload))
        }
    };
    Ok(Output {
        stdout,
        stderr,
        code: 0,
    })
}
