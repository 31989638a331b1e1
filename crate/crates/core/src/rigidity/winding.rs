use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{find_translate, translate_phases, CertificateStatus, CompactSet, TranslateOptions};
use crate::error::{Error, Result};
use crate::precision::HpReal;
use crate::series::{tail_bound, truncation_for, DirichletSeries, Truncation};
use crate::twist::TwistVector;

const MAX_DEPTH: u32 = 20;

/// Winding number of `func − v` around the circle `|s − center| = radius`,
/// by argument accumulation with subdivision until each step turns by less
/// than `π/2`.
pub fn winding_number<F>(func: F, center: Complex64, radius: f64, v: Complex64, samples: usize, accuracy: f64) -> Result<i64>
where
    F: Fn(Complex64) -> Complex64,
{
    let n = samples.max(8);
    let at = |theta: f64| func(center + Complex64::from_polar(radius, theta)) - v;
    let mut total = 0.0;
    let mut min_abs = f64::INFINITY;
    let mut prev = at(0.0);
    min_abs = min_abs.min(prev.norm());
    for i in 1..=n {
        let (a, b) = (TAU * (i - 1) as f64 / n as f64, TAU * i as f64 / n as f64);
        let next = if i == n { at(0.0) } else { at(b) };
        total += arc(&at, a, b, prev, next, 0, &mut min_abs)?;
        prev = next;
    }
    if min_abs <= 4.0 * accuracy {
        return Err(Error::NearZeroOnContour { min_abs });
    }
    Ok((total / TAU).round() as i64)
}

fn arc<F: Fn(f64) -> Complex64>(at: &F, a: f64, b: f64, wa: Complex64, wb: Complex64, depth: u32, min_abs: &mut f64) -> Result<f64> {
    *min_abs = min_abs.min(wb.norm());
    let step = (wb / wa).arg();
    if step.abs() < PI / 2.0 {
        return Ok(step);
    }
    if depth >= MAX_DEPTH {
        return Err(Error::NearZeroOnContour {
            min_abs: min_abs.min(wa.norm()),
        });
    }
    let mid = (a + b) / 2.0;
    let wm = at(mid);
    Ok(arc(at, a, mid, wa, wm, depth + 1, min_abs)? + arc(at, mid, b, wm, wb, depth + 1, min_abs)?)
}

/// Winding of `F(s) − v` using a truncation accurate to `accuracy` on the
/// circle.
pub fn winding_number_of(series: &DirichletSeries, center: Complex64, radius: f64, v: Complex64, samples: usize, accuracy: f64) -> Result<i64> {
    let sigma = center.re - radius;
    if !(sigma > series.threshold()) {
        return Err(Error::BelowThreshold {
            sigma,
            threshold: series.threshold(),
        });
    }
    let (m, _) = truncation_for(series, sigma, accuracy)?;
    let t = Truncation::new(series, m)?;
    winding_number(|s| t.eval(s), center, radius, v, samples, accuracy)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProbeStatus {
    Certified,
    Unattained,
    Failed,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ProbeReport {
    pub probe: [f64; 2],
    /// `"forward"`: attained by the target, certified for the source;
    /// `"reverse"`: roles swapped.
    pub direction: String,
    pub status: ProbeStatus,
    pub s_j: Option<[f64; 2]>,
    pub radius: Option<f64>,
    /// Certified lower bound for `min_{|s−s_j|=r} |f(s) − v|`.
    pub eta: Option<f64>,
    pub tau: Option<HpReal>,
    pub sup_error: Option<f64>,
    pub winding: Option<i64>,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ValueSetReport {
    pub probes: Vec<ProbeReport>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ValueSetOptions {
    pub radii: Vec<f64>,
    /// Search grid points per axis over `V`.
    pub grid: usize,
    pub contour_samples: usize,
    pub translate: TranslateOptions,
}

impl Default for ValueSetOptions {
    fn default() -> Self {
        ValueSetOptions {
            radii: vec![0.1, 0.05, 0.2, 0.025],
            grid: 41,
            contour_samples: 256,
            translate: TranslateOptions::default(),
        }
    }
}

fn report(probe: Complex64, direction: &str, status: ProbeStatus, detail: impl Into<String>) -> ProbeReport {
    ProbeReport {
        probe: [probe.re, probe.im],
        direction: direction.into(),
        status,
        s_j: None,
        radius: None,
        eta: None,
        tau: None,
        sup_error: None,
        winding: None,
        detail: detail.into(),
    }
}

/// A point of `v` where `t` (accurate to `tail`) takes the value `v`.
fn locate(t: &Truncation, v: Complex64, set: &CompactSet, grid: usize) -> Option<Complex64> {
    let (s0, s1, t0, t1) = set.bounds();
    let g = grid.max(3);
    let mut starts: Vec<(f64, Complex64)> = Vec::new();
    for i in 0..g {
        for k in 0..g {
            let s = Complex64::new(
                s0 + (s1 - s0) * i as f64 / (g - 1) as f64,
                t0 + (t1 - t0) * k as f64 / (g - 1) as f64,
            );
            starts.push(((t.eval(s) - v).norm(), s));
        }
    }
    starts.sort_by(|a, b| a.0.total_cmp(&b.0));
    for &(_, mut s) in starts.iter().take(8) {
        for _ in 0..60 {
            let d = t.derivative(s);
            if d.norm() == 0.0 {
                break;
            }
            let step = (t.eval(s) - v) / d;
            s -= step;
            if step.norm() < 1e-14 * s.norm().max(1.0) {
                break;
            }
        }
        let inside = s.re >= s0 && s.re <= s1 && s.im >= t0 && s.im <= t1;
        if inside && (t.eval(s) - v).norm() < 1e-9 {
            return Some(s);
        }
    }
    None
}

fn is_constant(t: &Truncation) -> Option<Complex64> {
    let mut c = Complex64::new(0.0, 0.0);
    for (&l, &a) in t.lambdas.iter().zip(&t.coeffs) {
        if a.norm() == 0.0 {
            continue;
        }
        if l != 0.0 {
            return None;
        }
        c += a;
    }
    Some(c)
}

/// Certify that `v`, attained by `target` in `set`, is attained by
/// `source(· + iτ)` on a disk around the attainment point.
fn certify(
    source: &DirichletSeries,
    target: &DirichletSeries,
    set: &CompactSet,
    v: Complex64,
    y: &TwistVector,
    direction: &str,
    opts: &ValueSetOptions,
) -> Result<ProbeReport> {
    let (s0, s1, t0, t1) = set.bounds();
    let (m, tail) = truncation_for(target, s0, 1e-10).or_else(|_| {
        let m = target.len().min(target.coefficients().available());
        Ok::<_, Error>((m, tail_bound(target, m, s0)))
    })?;
    let tt = Truncation::new(target, m)?;
    if let Some(c) = is_constant(&tt) {
        let status = if (c - v).norm() <= tail { ProbeStatus::Certified } else { ProbeStatus::Unattained };
        return Ok(report(v, direction, status, "constant series"));
    }
    let Some(sj) = locate(&tt, v, set, opts.grid) else {
        return Ok(report(v, direction, ProbeStatus::Unattained, "no attainment point found in the set"));
    };
    let mut out = report(v, direction, ProbeStatus::Failed, "");
    out.s_j = Some([sj.re, sj.im]);
    for &r in &opts.radii {
        let fits = sj.re - r >= s0 && sj.re + r <= s1 && sj.im - r >= t0 && sj.im + r <= t1;
        if !fits || !(sj.re - r > target.threshold()) || !(sj.re - r > source.threshold()) {
            continue;
        }
        let n = opts.contour_samples.max(16);
        let lip = tt.lipschitz(sj.re - r);
        let arc_step = TAU * r / n as f64;
        let min_on_circle = (0..n)
            .map(|i| (tt.eval(sj + Complex64::from_polar(r, TAU * i as f64 / n as f64)) - v).norm())
            .fold(f64::INFINITY, f64::min);
        let eta = min_on_circle - lip * arc_step / 2.0 - tail_bound(target, m, sj.re - r);
        if !(eta > 0.0) {
            continue;
        }
        let w_target = match winding_number(|s| tt.eval(s), sj, r, v, n, tail.max(1e-15)) {
            Ok(w) => w,
            Err(_) => continue,
        };
        if w_target < 1 {
            continue;
        }
        let disk = CompactSet::disk(sj, r)?;
        let cert = find_translate(
            std::slice::from_ref(source),
            std::slice::from_ref(target),
            std::slice::from_ref(&disk),
            eta * 0.95,
            Some(y),
            &opts.translate,
        );
        let cert = match cert {
            Ok(c) => c,
            Err(e) => {
                out.detail = format!("radius {r}: {e}");
                continue;
            }
        };
        out.radius = Some(r);
        out.eta = Some(eta);
        out.tau = Some(cert.tau.clone());
        out.sup_error = Some(cert.report.max_total);
        if cert.status != CertificateStatus::Verified {
            out.detail = format!("radius {r}: translate error {} not below eta {eta}", cert.report.max_total);
            continue;
        }
        // winding of the translated source around the same circle
        let ms = cert.budget.m.max(m).min(source.len());
        let ts = Truncation::new(source, ms)?;
        let phases = translate_phases(source.exponents(), ms, &cert.tau, 0)?;
        let shifted = Truncation {
            lambdas: ts.lambdas.clone(),
            coeffs: ts.coeffs.iter().zip(&phases).map(|(a, p)| a * p).collect(),
        };
        let acc = tail_bound(source, ms, sj.re - r).max(1e-15);
        match winding_number(|s| shifted.eval(s), sj, r, v, n, acc) {
            Ok(w) if w >= 1 => {
                out.winding = Some(w);
                out.status = ProbeStatus::Certified;
                out.detail = format!("target winding {w_target}");
                return Ok(out);
            }
            Ok(w) => {
                out.winding = Some(w);
                out.detail = format!("radius {r}: translated winding {w}");
            }
            Err(e) => out.detail = format!("radius {r}: {e}"),
        }
    }
    if out.detail.is_empty() {
        out.detail = "no radius with a positive boundary minimum".into();
    }
    Ok(out)
}

/// For each probe: if `f` attains it in `set`, certify it for `F`; if `F`
/// attains it, certify it for `f` (roles swapped, twist `−Y`).
pub fn value_set_check(
    source: &DirichletSeries,
    target: &DirichletSeries,
    set: &CompactSet,
    probes: &[Complex64],
    twist: Option<&TwistVector>,
    opts: &ValueSetOptions,
) -> Result<ValueSetReport> {
    set.validate()?;
    let y = match twist {
        Some(y) => y.clone(),
        None => super::common_twist(
            std::slice::from_ref(source),
            std::slice::from_ref(target),
            opts.translate.detect_limit,
            &opts.translate.detect,
        )?,
    };
    let back = y.neg();
    let mut out = Vec::with_capacity(2 * probes.len());
    for &v in probes {
        out.push(certify(source, target, set, v, &y, "forward", opts)?);
        out.push(certify(target, source, set, v, &back, "reverse", opts)?);
    }
    Ok(ValueSetReport { probes: out })
}
