//! Report rendering: versioned JSON envelopes, fixed-column CSV and plain
//! text. Column layouts are documented in `FORMAT.md`.

use crate::config::RunConfig;
use crate::delsarte::{kl_center_density, levenshtein_center_density, DelsarteBound};
use crate::error::{invalid, Result};
use crate::harmonic::ball_volume;
use crate::suites::SuiteSummary;
use crate::turan::TuranEstimate;
use crate::wiener::{Bound, BoundReport, LowerMethod, RealLineCounterexample, UpperMethod};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt::Write;

pub const SCHEMA_VERSION: &str = "1";

/// Current UTC time in RFC 3339 form; the only nondeterministic field.
pub fn timestamp() -> String {
    chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true)
}

#[derive(Debug, Serialize)]
struct Envelope<'a, T: Serialize> {
    schema: &'static str,
    command: &'a str,
    timestamp: String,
    config: &'a RunConfig,
    #[serde(flatten)]
    result: &'a T,
}

/// Pretty JSON `{schema, command, timestamp, config, ...result}`.
pub fn to_json<T: Serialize>(command: &str, config: &RunConfig, result: &T) -> Result<String> {
    let env = Envelope { schema: SCHEMA_VERSION, command, timestamp: timestamp(), config, result };
    serde_json::to_string_pretty(&env).map_err(|e| invalid(format!("json: {e}")))
}

/// CSV and text renderings of a command result.
pub trait Render {
    fn csv(&self) -> Result<String>;
    fn text(&self) -> String;
}

fn write_csv<R: Serialize>(rows: &[R]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| invalid(format!("csv: {e}")))?;
    }
    let bytes = w.into_inner().map_err(|e| invalid(format!("csv: {e}")))?;
    String::from_utf8(bytes).map_err(|e| invalid(format!("csv: {e}")))
}

fn join_params(params: &BTreeMap<String, f64>) -> String {
    params.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(";")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DomainDescriptor {
    pub shape: String,
    pub delta: f64,
    pub dim: usize,
}

/// JSON body of `pdw wiener`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WienerBody {
    pub domain: DomainDescriptor,
    pub lower: Bound<LowerMethod>,
    pub upper: Bound<UpperMethod>,
    pub residuals: BTreeMap<String, f64>,
    pub certified: bool,
}

impl From<&BoundReport> for WienerBody {
    fn from(r: &BoundReport) -> Self {
        WienerBody {
            domain: DomainDescriptor {
                shape: r.domain.label().into(),
                delta: r.domain.enclosing_halfwidth(),
                dim: r.dim,
            },
            lower: r.lower.clone(),
            upper: r.upper.clone(),
            residuals: r.residuals.clone(),
            certified: r.certified,
        }
    }
}

#[derive(Serialize)]
struct WienerRow<'a> {
    shape: &'a str,
    delta: f64,
    dim: usize,
    side: &'static str,
    value: f64,
    method: &'static str,
    params: String,
}

impl Render for WienerBody {
    fn csv(&self) -> Result<String> {
        let d = &self.domain;
        let row = |side, value, method, params: &BTreeMap<String, f64>| WienerRow {
            shape: &d.shape,
            delta: d.delta,
            dim: d.dim,
            side,
            value,
            method,
            params: join_params(params),
        };
        write_csv(&[
            row("lower", self.lower.value, self.lower.method.as_str(), &self.lower.params),
            row("upper", self.upper.value, self.upper.method.as_str(), &self.upper.params),
        ])
    }

    fn text(&self) -> String {
        let d = &self.domain;
        format!(
            "W_{}({} {}): {:.10} ({}) <= W <= {:.10} ({})\n",
            d.dim,
            d.shape,
            d.delta,
            self.lower.value,
            self.lower.method.as_str(),
            self.upper.value,
            self.upper.method.as_str()
        )
    }
}

#[derive(Serialize)]
struct TuranRow {
    delta: f64,
    dim: usize,
    lower: f64,
    upper: f64,
    upper_method: String,
    grid_size: usize,
    freq_bound: usize,
    checked_freq: usize,
    min_residual: f64,
    constraints: usize,
    certified: bool,
}

impl Render for TuranEstimate {
    fn csv(&self) -> Result<String> {
        write_csv(&[TuranRow {
            delta: self.delta,
            dim: self.dim,
            lower: self.lower,
            upper: self.upper,
            upper_method: self.upper_method.clone(),
            grid_size: self.grid_size,
            freq_bound: self.freq_bound,
            checked_freq: self.checked_freq,
            min_residual: self.min_residual,
            constraints: self.constraints,
            certified: self.certified,
        }])
    }

    fn text(&self) -> String {
        format!(
            "a([-{d},{d}]^{n}): {lo:.10} <= a <= {up:.10} ({m})\nM = {g}, N = {f}, audited to {c}, min residual {r:e}, certified: {cert}\n",
            d = self.delta,
            n = self.dim,
            lo = self.lower,
            up = self.upper,
            m = self.upper_method,
            g = self.grid_size,
            f = self.freq_bound,
            c = self.checked_freq,
            r = self.min_residual,
            cert = self.certified
        )
    }
}

/// JSON body of `pdw delsarte`: the bound plus density context.
#[derive(Debug, Clone, Serialize)]
pub struct DelsarteBody {
    #[serde(flatten)]
    pub bound: DelsarteBound,
    /// `|Bⁿ| · value`, comparable with the center densities below.
    pub density_bound: f64,
    pub levenshtein_center_density: f64,
    pub kl_center_density: f64,
}

impl DelsarteBody {
    pub fn new(bound: DelsarteBound) -> Result<Self> {
        let n = bound.dim;
        let density_bound = ball_volume(n, 0.5 * bound.radius) * bound.value;
        Ok(DelsarteBody {
            density_bound,
            levenshtein_center_density: levenshtein_center_density(n)?,
            kl_center_density: kl_center_density(n),
            bound,
        })
    }
}

#[derive(Serialize)]
struct DelsarteRow {
    dim: usize,
    radius: f64,
    value: f64,
    basis_size: usize,
    grid_size: usize,
    r_max: f64,
    fourier_min: f64,
    spatial_max: f64,
    tail_envelope: f64,
    certified: bool,
    density_bound: f64,
    levenshtein: f64,
    kl: f64,
}

impl Render for DelsarteBody {
    fn csv(&self) -> Result<String> {
        let b = &self.bound;
        write_csv(&[DelsarteRow {
            dim: b.dim,
            radius: b.radius,
            value: b.value,
            basis_size: b.basis_size,
            grid_size: b.grid_size,
            r_max: b.r_max,
            fourier_min: b.residuals.fourier_min,
            spatial_max: b.residuals.spatial_max,
            tail_envelope: b.residuals.tail_envelope,
            certified: b.certified,
            density_bound: self.density_bound,
            levenshtein: self.levenshtein_center_density,
            kl: self.kl_center_density,
        }])
    }

    fn text(&self) -> String {
        let b = &self.bound;
        format!(
            "A({r}B^{n}) <= {v:.10} (K = {k}, G = {g}, certified: {c})\nresiduals: fourier min {fm:e}, spatial max {sm:e}, tail {t:e}\ncenter density <= {db:.6}; Levenshtein {l:.6}; KL envelope {kl:.6}\n",
            r = b.radius,
            n = b.dim,
            v = b.value,
            k = b.basis_size,
            g = b.grid_size,
            c = b.certified,
            fm = b.residuals.fourier_min,
            sm = b.residuals.spatial_max,
            t = b.residuals.tail_envelope,
            db = self.density_bound,
            l = self.levenshtein_center_density,
            kl = self.kl_center_density
        )
    }
}

#[derive(Serialize)]
struct SuiteRow<'a> {
    suite: &'a str,
    samples: usize,
    passed: usize,
    failed: usize,
    worst: f64,
}

impl Render for SuiteSummary {
    fn csv(&self) -> Result<String> {
        write_csv(&[SuiteRow {
            suite: &self.suite,
            samples: self.samples,
            passed: self.passed,
            failed: self.failed,
            worst: self.worst,
        }])
    }

    fn text(&self) -> String {
        let mut s = format!(
            "{}: {}/{} passed, worst normalized statistic {:.12}\n",
            self.suite, self.passed, self.samples, self.worst
        );
        for f in &self.failures {
            let _ = write!(s, "sample {}: {}\n{}", f.index, f.detail, f.function);
        }
        s
    }
}

/// JSON body of `pdw demo-realline`.
#[derive(Debug, Clone, Serialize)]
pub struct DemoBody {
    pub rows: Vec<RealLineCounterexample>,
    /// Last ratio over first ratio.
    pub growth: f64,
}

impl DemoBody {
    pub fn new(rows: Vec<RealLineCounterexample>) -> Self {
        let growth = match (rows.first(), rows.last()) {
            (Some(a), Some(b)) => b.ratio / a.ratio,
            _ => 1.0,
        };
        DemoBody { rows, growth }
    }
}

impl Render for DemoBody {
    fn csv(&self) -> Result<String> {
        write_csv(&self.rows)
    }

    fn text(&self) -> String {
        let mut s = String::from("radius      full        cell        ratio\n");
        for r in &self.rows {
            let _ = writeln!(s, "{:<11} {:<11.6} {:<11.6} {:.6}", r.radius, r.full_norm_sq, r.cell_norm_sq, r.ratio);
        }
        let _ = writeln!(s, "growth {:.4}", self.growth);
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wiener::cube_wiener_sandwich;

    #[test]
    fn wiener_csv_has_two_rows() {
        let r = cube_wiener_sandwich(3, 2, 0.33).unwrap();
        let csv = WienerBody::from(&r).csv().unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "shape,delta,dim,side,value,method,params");
        assert_eq!(lines.len(), 3);
        assert!(lines[1].starts_with("cube,0.3333333333333333,2,lower,3.9204"));
        assert!(lines[2].contains("hlawka"));
    }

    #[test]
    fn json_envelope() {
        let r = cube_wiener_sandwich(3, 1, 0.33).unwrap();
        let json = to_json("wiener", &RunConfig::default(), &WienerBody::from(&r)).unwrap();
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v["schema"], "1");
        assert_eq!(v["domain"]["shape"], "cube");
        assert_eq!(v["lower"]["method"], "theorem3-formula");
        assert!(v["timestamp"].is_string());
    }
}
