//! CSV and JSON formats.
//!
//! All floating-point output goes through one formatter printing nine
//! significant digits in scientific notation, locale-independent, so
//! repeated runs with the same seed produce byte-identical files.
//!
//! Formats:
//! - trajectory CSV: header `t,x,y,z`, SI units, one observation per row;
//! - logo CSV: header `t,visible,lx,ly,lz`, `visible` 0 or 1, unit logo
//!   direction (all zeros when not visible);
//! - contour CSV: header `t,radius_px,u1,v1,u2,v2,...` with a
//!   variable-length pixel list per row;
//! - spin-estimate JSON, ground-truth JSON, and the experiment report
//!   JSON, all hand-emitted with the same number formatting.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::eval::{ExperimentReport, TrajectoryRecord};
use crate::linalg::Vec3;
use crate::logo_spin::{ContourFrame, ContourPixel, LogoObservation};
use crate::magnus_fit::SpinEstimate;
use crate::physics::{BallObservation, BallState, BounceEvent, Trajectory};

/// Nine significant digits, scientific notation. Negative zero is
/// normalized so equal values always serialize identically.
pub fn fmt_float(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.8e}")
}

fn parse_float(field: &str, line: usize, what: &str) -> Result<f64> {
    field.trim().parse::<f64>().map_err(|_| Error::Csv {
        line,
        message: format!("cannot parse {what} from `{field}`"),
    })
}

/// Serializes a trajectory as `t,x,y,z` CSV.
pub fn trajectory_to_csv(traj: &Trajectory) -> String {
    let mut out = String::from("t,x,y,z\n");
    for o in traj.observations() {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            fmt_float(o.t),
            fmt_float(o.position.x),
            fmt_float(o.position.y),
            fmt_float(o.position.z)
        );
    }
    out
}

/// Parses `t,x,y,z` CSV; errors carry 1-based line numbers.
pub fn trajectory_from_csv(text: &str) -> Result<Trajectory> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header.trim() == "t,x,y,z" => {}
        Some((_, header)) => {
            return Err(Error::Csv { line: 1, message: format!("expected header `t,x,y,z`, got `{header}`") })
        }
        None => return Err(Error::Csv { line: 1, message: "empty file".into() }),
    }
    let mut observations = Vec::new();
    let mut prev_t: Option<f64> = None;
    for (idx, row) in lines {
        let line = idx + 1;
        if row.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = row.split(',').collect();
        if fields.len() != 4 {
            return Err(Error::Csv { line, message: format!("expected 4 fields, got {}", fields.len()) });
        }
        let t = parse_float(fields[0], line, "t")?;
        let x = parse_float(fields[1], line, "x")?;
        let y = parse_float(fields[2], line, "y")?;
        let z = parse_float(fields[3], line, "z")?;
        if let Some(p) = prev_t {
            if t <= p {
                return Err(Error::Csv {
                    line,
                    message: format!("timestamps must strictly increase ({p} then {t})"),
                });
            }
        }
        prev_t = Some(t);
        observations.push(BallObservation { t, position: Vec3::new(x, y, z) });
    }
    Trajectory::new(observations)
}

/// Serializes logo observations as `t,visible,lx,ly,lz` CSV.
pub fn logo_to_csv(observations: &[LogoObservation]) -> String {
    let mut out = String::from("t,visible,lx,ly,lz\n");
    for o in observations {
        let d = if o.visible { o.direction } else { Vec3::ZERO };
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            fmt_float(o.t),
            u8::from(o.visible),
            fmt_float(d.x),
            fmt_float(d.y),
            fmt_float(d.z)
        );
    }
    out
}

/// Parses `t,visible,lx,ly,lz` CSV. Visible directions are checked to be
/// close to unit length (1e-6, the slack of the 9-digit format) and
/// renormalized.
pub fn logo_from_csv(text: &str) -> Result<Vec<LogoObservation>> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header.trim() == "t,visible,lx,ly,lz" => {}
        Some((_, header)) => {
            return Err(Error::Csv {
                line: 1,
                message: format!("expected header `t,visible,lx,ly,lz`, got `{header}`"),
            })
        }
        None => return Err(Error::Csv { line: 1, message: "empty file".into() }),
    }
    let mut out = Vec::new();
    for (idx, row) in lines {
        let line = idx + 1;
        if row.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = row.split(',').collect();
        if fields.len() != 5 {
            return Err(Error::Csv { line, message: format!("expected 5 fields, got {}", fields.len()) });
        }
        let t = parse_float(fields[0], line, "t")?;
        let visible = match fields[1].trim() {
            "0" => false,
            "1" => true,
            v => return Err(Error::Csv { line, message: format!("visible must be 0 or 1, got `{v}`") }),
        };
        let d = Vec3::new(
            parse_float(fields[2], line, "lx")?,
            parse_float(fields[3], line, "ly")?,
            parse_float(fields[4], line, "lz")?,
        );
        let direction = if visible {
            if (d.norm() - 1.0).abs() > 1e-6 {
                return Err(Error::Csv {
                    line,
                    message: format!("visible logo direction must be unit length, |d| = {}", d.norm()),
                });
            }
            d.normalized()
        } else {
            Vec3::ZERO
        };
        out.push(LogoObservation { t, direction, visible });
    }
    Ok(out)
}

/// Parses contour CSV: `t,radius_px,u1,v1,u2,v2,...` with any number of
/// (u, v) pairs per row (possibly none for frames without a logo).
pub fn contours_from_csv(text: &str) -> Result<Vec<ContourFrame>> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header.trim().starts_with("t,radius_px") => {}
        Some((_, header)) => {
            return Err(Error::Csv {
                line: 1,
                message: format!("expected header `t,radius_px,u1,v1,...`, got `{header}`"),
            })
        }
        None => return Err(Error::Csv { line: 1, message: "empty file".into() }),
    }
    let mut out = Vec::new();
    for (idx, row) in lines {
        let line = idx + 1;
        if row.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = row.split(',').collect();
        if fields.len() < 2 {
            return Err(Error::Csv { line, message: "row needs at least t and radius_px".into() });
        }
        if !(fields.len() - 2).is_multiple_of(2) {
            return Err(Error::Csv { line, message: "contour pixels must come in (u, v) pairs".into() });
        }
        let t = parse_float(fields[0], line, "t")?;
        let radius_px = parse_float(fields[1], line, "radius_px")?;
        let mut pixels = Vec::with_capacity((fields.len() - 2) / 2);
        for pair in fields[2..].chunks(2) {
            pixels.push(ContourPixel {
                u: parse_float(pair[0], line, "u")?,
                v: parse_float(pair[1], line, "v")?,
            });
        }
        out.push(ContourFrame { t, radius_px, pixels });
    }
    Ok(out)
}

/// Serializes contour frames in the contour CSV format.
pub fn contours_to_csv(frames: &[ContourFrame]) -> String {
    let mut out = String::from("t,radius_px,u1,v1,u2,v2,...\n");
    for f in frames {
        let _ = write!(out, "{},{}", fmt_float(f.t), fmt_float(f.radius_px));
        for p in &f.pixels {
            let _ = write!(out, ",{},{}", fmt_float(p.u), fmt_float(p.v));
        }
        out.push('\n');
    }
    out
}

fn json_escape(s: &str) -> String {
    s.chars()
        .flat_map(|c| match c {
            '"' => "\\\"".chars().collect::<Vec<_>>(),
            '\\' => "\\\\".chars().collect(),
            '\n' => "\\n".chars().collect(),
            c if (c as u32) < 0x20 => format!("\\u{:04x}", c as u32).chars().collect(),
            c => vec![c],
        })
        .collect()
}

fn json_vec3(v: Vec3) -> String {
    format!("[{},{},{}]", fmt_float(v.x), fmt_float(v.y), fmt_float(v.z))
}

/// Spin-estimate JSON: the shared output schema of `fit-spin` and
/// `logo-spin`.
pub fn spin_estimate_to_json(est: &SpinEstimate) -> String {
    format!(
        "{{\"omega\":{},\"rms_residual\":{},\"condition_number\":{},\"n_points\":{},\"method\":\"{}\",\"low_confidence\":{}}}",
        json_vec3(est.omega.omega),
        fmt_float(est.rms_residual),
        fmt_float(est.condition_number),
        est.n_points,
        est.method.tag(),
        est.low_confidence,
    )
}

/// Machine-readable error JSON printed by the CLI on estimation failures.
pub fn error_to_json(err: &Error) -> String {
    format!("{{\"error\":\"{}\",\"message\":\"{}\"}}", err.tag(), json_escape(&err.to_string()))
}

/// Ground-truth JSON written next to simulated trajectories.
pub fn ground_truth_to_json(omega: Vec3, initial: &BallState, bounce: &BounceEvent) -> String {
    format!(
        "{{\"omega\":{},\"initial\":{{\"t\":{},\"position\":{},\"velocity\":{}}},\"bounce\":{{\"time\":{},\"position\":{}}}}}",
        json_vec3(omega),
        fmt_float(initial.t),
        json_vec3(initial.position),
        json_vec3(initial.velocity),
        fmt_float(bounce.time),
        json_vec3(bounce.position),
    )
}

fn record_to_json(r: &TrajectoryRecord) -> String {
    let mut s = format!(
        "{{\"setting\":\"{}\",\"index\":{},\"seed\":{},\"omega_true\":{}",
        json_escape(&r.setting),
        r.index,
        r.seed,
        json_vec3(r.omega_true)
    );
    match r.omega_estimate {
        Some(o) => s.push_str(&format!(",\"omega_estimate\":{}", json_vec3(o))),
        None => s.push_str(",\"omega_estimate\":null"),
    }
    if r.bounce_true.time.is_finite() {
        s.push_str(&format!(
            ",\"bounce_true\":{{\"time\":{},\"position\":{}}}",
            fmt_float(r.bounce_true.time),
            json_vec3(r.bounce_true.position)
        ));
    } else {
        s.push_str(",\"bounce_true\":null");
    }
    for (key, value) in [("fitted_error_mm", r.fitted_error_mm), ("nospin_error_mm", r.nospin_error_mm)] {
        match value {
            Some(v) => s.push_str(&format!(",\"{key}\":{}", fmt_float(v))),
            None => s.push_str(&format!(",\"{key}\":null")),
        }
    }
    match &r.exclusion {
        Some(tag) => s.push_str(&format!(",\"exclusion\":\"{}\"", json_escape(tag))),
        None => s.push_str(",\"exclusion\":null"),
    }
    s.push('}');
    s
}

/// Full experiment report as JSON: per-trajectory records plus both
/// aggregate tables.
pub fn report_to_json(report: &ExperimentReport) -> String {
    let records: Vec<String> = report.records.iter().map(record_to_json).collect();
    let bounce_rows: Vec<String> = report
        .bounce
        .rows
        .iter()
        .map(|r| {
            format!(
                "{{\"setting\":\"{}\",\"fitted_mean_mm\":{},\"fitted_std_mm\":{},\"nospin_mean_mm\":{},\"nospin_std_mm\":{},\"n\":{},\"excluded\":{}}}",
                json_escape(&r.setting),
                fmt_float(r.fitted_mean_mm),
                fmt_float(r.fitted_std_mm),
                fmt_float(r.nospin_mean_mm),
                fmt_float(r.nospin_std_mm),
                r.n,
                r.excluded
            )
        })
        .collect();
    let cluster_rows: Vec<String> = report
        .cluster
        .per_setting
        .iter()
        .map(|s| {
            format!(
                "{{\"setting\":\"{}\",\"accuracy\":{},\"n\":{}}}",
                json_escape(&s.name),
                fmt_float(s.accuracy),
                s.n
            )
        })
        .collect();
    let centers: Vec<String> = report
        .cluster
        .centers
        .iter()
        .map(|(name, c)| format!("{{\"setting\":\"{}\",\"center\":{}}}", json_escape(name), json_vec3(*c)))
        .collect();
    format!(
        "{{\"records\":[{}],\"bounce\":[{}],\"cluster\":{{\"per_setting\":[{}],\"total_accuracy\":{},\"centers\":[{}],\"degenerate\":{}}}}}",
        records.join(","),
        bounce_rows.join(","),
        cluster_rows.join(","),
        fmt_float(report.cluster.total_accuracy),
        centers.join(","),
        report.cluster.degenerate
    )
}

/// Bounce table as CSV.
pub fn bounce_to_csv(b: &crate::eval::BounceBenchmark) -> String {
    let mut out = String::from("setting,fitted_mean_mm,fitted_std_mm,nospin_mean_mm,nospin_std_mm,n,excluded\n");
    for r in &b.rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            r.setting,
            fmt_float(r.fitted_mean_mm),
            fmt_float(r.fitted_std_mm),
            fmt_float(r.nospin_mean_mm),
            fmt_float(r.nospin_std_mm),
            r.n,
            r.excluded
        );
    }
    out
}

/// Clustering table as CSV, with a final `total` row.
pub fn cluster_to_csv(c: &crate::eval::ClusterReport) -> String {
    let mut out = String::from("setting,accuracy,n\n");
    let mut n_total = 0usize;
    for s in &c.per_setting {
        let _ = writeln!(out, "{},{},{}", s.name, fmt_float(s.accuracy), s.n);
        n_total += s.n;
    }
    let _ = writeln!(out, "total,{},{}", fmt_float(c.total_accuracy), n_total);
    out
}
