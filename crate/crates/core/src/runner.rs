//! Scenario files, batch execution and artifact output.

use std::fs;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::characteristics::{
    characteristics_report, funnel_paths, maximum_principle_check, oleinik_report, paths_csv,
};
use crate::coupling::CoefficientField;
use crate::error::{Error, Result};
use crate::flux::FluxModel;
use crate::fronttrack::{sample_initial_data, FrontTrackingRun};
use crate::functional::{
    corollary_bound_report, l1_identity_report, limit_study, theorem31_on_field, theorem51_check,
    weighted_identity_report,
};
use crate::profile::Profile;
use crate::scalar::{self, parse_scalar, Rational, Scalar};

/// A number written as an integer, a float, or a string such as `"1/3"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Number {
    Int(i64),
    Float(f64),
    Text(String),
}

impl Number {
    pub fn to_scalar<S: Scalar>(&self, path: &str) -> Result<S> {
        let bad = |what: String| Error::config(path, format!("cannot read `{what}` as a finite number"));
        match self {
            Number::Int(n) => Ok(S::from_i64(*n)),
            Number::Float(x) if !x.is_finite() => Err(bad(x.to_string())),
            // the shortest decimal form keeps `0.1` equal to 1/10 in exact mode
            Number::Float(x) => Ok(parse_scalar(&x.to_string()).unwrap_or_else(|| S::from_f64(*x))),
            Number::Text(s) => parse_scalar(s).ok_or_else(|| bad(s.clone())),
        }
    }
}

impl From<f64> for Number {
    fn from(x: f64) -> Self {
        Number::Float(x)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    #[default]
    Float,
    Rational,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Check {
    L1Identity,
    WeightedIdentity,
    CorollaryBound,
    Theorem31,
    LimitStudy,
    Theorem51,
    Oleinik,
    MaxPrinciple,
    Characteristics,
}

impl Check {
    pub fn as_str(self) -> &'static str {
        match self {
            Check::L1Identity => "l1_identity",
            Check::WeightedIdentity => "weighted_identity",
            Check::CorollaryBound => "corollary_bound",
            Check::Theorem31 => "theorem31",
            Check::LimitStudy => "limit_study",
            Check::Theorem51 => "theorem51",
            Check::Oleinik => "oleinik",
            Check::MaxPrinciple => "max_principle",
            Check::Characteristics => "characteristics",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FluxSpec {
    pub name: String,
    #[serde(default)]
    pub params: Vec<f64>,
    pub interval: [f64; 2],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Generator {
    /// `amplitude * sin(π (x - a) / (b - a))`, a single hump on the support.
    Sin,
    /// Bell centred on the support with standard deviation `(b - a) / 6`.
    Gaussian,
    /// Ramp from 0 at `a` to `amplitude` at `b`.
    Linear,
}

/// Initial datum: either a literal step function or a sampled generator.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DataSpec {
    pub left: Option<Number>,
    pub breakpoints: Option<Vec<(Number, Number)>>,
    pub generator: Option<Generator>,
    pub support: Option<[f64; 2]>,
    pub n_cells: Option<usize>,
    pub amplitude: Option<f64>,
    pub offset: Option<f64>,
}

impl DataSpec {
    pub fn literal(left: impl Into<Number>, breakpoints: Vec<(f64, f64)>) -> Self {
        DataSpec {
            left: Some(left.into()),
            breakpoints: Some(breakpoints.into_iter().map(|(x, v)| (x.into(), v.into())).collect()),
            ..Default::default()
        }
    }

    fn validate(&self, path: &str) -> Result<()> {
        match (&self.left, &self.generator) {
            (Some(_), Some(_)) => Err(Error::config(path, "give either `left`/`breakpoints` or `generator`, not both")),
            (None, None) => Err(Error::config(path, "missing `left` (literal data) or `generator`")),
            (Some(_), None) => {
                for key in [self.support.is_some(), self.n_cells.is_some(), self.amplitude.is_some()] {
                    if key {
                        return Err(Error::config(path, "`support`, `n_cells`, `amplitude` only apply to generators"));
                    }
                }
                Ok(())
            }
            (None, Some(_)) => {
                let Some([a, b]) = self.support else {
                    return Err(Error::config(format!("{path}.support"), "generator needs a support [a, b]"));
                };
                if !(a < b) {
                    return Err(Error::config(format!("{path}.support"), "support must satisfy a < b"));
                }
                match self.n_cells {
                    Some(n) if n >= 1 => Ok(()),
                    _ => Err(Error::config(format!("{path}.n_cells"), "generator needs n_cells >= 1")),
                }
            }
        }
    }

    pub fn profile<S: Scalar>(&self, path: &str) -> Result<Profile<S>> {
        self.validate(path)?;
        if let Some(g) = self.generator {
            let [a, b] = self.support.expect("validated");
            let amp = self.amplitude.unwrap_or(1.0);
            let off = self.offset.unwrap_or(0.0);
            let f = move |x: f64| {
                let r = (x - a) / (b - a);
                off + amp
                    * match g {
                        Generator::Sin => (std::f64::consts::PI * r).sin(),
                        Generator::Gaussian => (-18.0 * (r - 0.5) * (r - 0.5)).exp(),
                        Generator::Linear => r,
                    }
            };
            return sample_initial_data(f, (a, b), self.n_cells.expect("validated"));
        }
        let left: S = self.left.as_ref().expect("validated").to_scalar(&format!("{path}.left"))?;
        let mut steps = Vec::new();
        for (i, (x, v)) in self.breakpoints.iter().flatten().enumerate() {
            let p = format!("{path}.breakpoints[{i}]");
            steps.push((x.to_scalar::<S>(&p)?, v.to_scalar::<S>(&p)?));
        }
        if steps.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(Error::config(format!("{path}.breakpoints"), "positions must be strictly increasing"));
        }
        Profile::from_steps(left, steps).map_err(|e| Error::config(path, e.to_string()))
    }
}

fn zero() -> Number {
    Number::Int(0)
}

fn default_tolerance() -> f64 {
    1e-8
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    #[serde(default)]
    pub name: String,
    pub flux: FluxSpec,
    pub u1: DataSpec,
    pub u2: DataSpec,
    /// Fan resolutions; the first one drives the single-run checks.
    pub h: Vec<Number>,
    #[serde(default = "zero")]
    pub m: Number,
    #[serde(default = "zero")]
    pub s: Number,
    pub t: Number,
    pub checks: Vec<Check>,
    #[serde(default)]
    pub mode: Mode,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    #[serde(default)]
    pub out: Option<PathBuf>,
    /// `[ξ0, ζ0]` for the maximum principle; chosen from ψ(s) when absent.
    #[serde(default)]
    pub funnel: Option<[Number; 2]>,
    /// Starting points of the characteristics check.
    #[serde(default)]
    pub anchors: Vec<Number>,
}

impl Scenario {
    pub fn from_toml(text: &str) -> Result<Self> {
        let sc: Scenario = toml::from_str(text).map_err(|e| {
            let message = e.message().to_string();
            let path = e
                .span()
                .map(|r| field_name_near(text, r.start))
                .unwrap_or_else(|| "scenario".to_string());
            Error::config(path, message)
        })?;
        sc.validate()?;
        Ok(sc)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_toml(&fs::read_to_string(path)?)
    }

    pub fn flux_model(&self) -> Result<FluxModel> {
        let [lo, hi] = self.flux.interval;
        if !(lo < hi) {
            return Err(Error::config("flux.interval", "interval must satisfy lo < hi"));
        }
        let flux = FluxModel::by_name(&self.flux.name, &self.flux.params, (lo, hi))
            .map_err(|e| Error::config("flux.name", e.to_string()))?;
        flux.ensure_strictly_convex()
            .map_err(|e| Error::config("flux", e.to_string()))?;
        Ok(flux)
    }

    pub fn validate(&self) -> Result<()> {
        let flux = self.flux_model()?;
        if self.mode == Mode::Rational && !flux.is_polynomial() {
            return Err(Error::config("mode", "rational mode needs a polynomial flux"));
        }
        if self.h.is_empty() {
            return Err(Error::config("h", "at least one fan resolution is required"));
        }
        let mut hs = Vec::new();
        for (i, h) in self.h.iter().enumerate() {
            let v: f64 = h.to_scalar(&format!("h[{i}]"))?;
            if !(v > 0.0) {
                return Err(Error::config(format!("h[{i}]"), format!("fan resolution must be positive, got {v}")));
            }
            hs.push(v);
        }
        if self.checks.contains(&Check::LimitStudy) && hs.windows(2).any(|w| w[0] <= w[1]) {
            return Err(Error::config("h", "limit_study needs a strictly decreasing h list"));
        }
        let m: f64 = self.m.to_scalar("m")?;
        if !(m >= 0.0) {
            return Err(Error::config("m", format!("weight parameter must be nonnegative, got {m}")));
        }
        let s: f64 = self.s.to_scalar("s")?;
        let t: f64 = self.t.to_scalar("t")?;
        if !(s >= 0.0) {
            return Err(Error::config("s", "start time must be nonnegative"));
        }
        if !(t > s) {
            return Err(Error::config("t", format!("end time must exceed s = {s}, got {t}")));
        }
        if self.checks.is_empty() {
            return Err(Error::config("checks", "no checks requested"));
        }
        if !(self.tolerance > 0.0) {
            return Err(Error::config("tolerance", "tolerance must be positive"));
        }
        self.u1.validate("u1")?;
        self.u2.validate("u2")?;
        if let Some(f) = &self.funnel {
            let a: f64 = f[0].to_scalar("funnel[0]")?;
            let b: f64 = f[1].to_scalar("funnel[1]")?;
            if a > b {
                return Err(Error::config("funnel", "funnel endpoints must satisfy xi0 <= zeta0"));
            }
        }
        for (i, a) in self.anchors.iter().enumerate() {
            a.to_scalar::<f64>(&format!("anchors[{i}]"))?;
        }
        Ok(())
    }
}

/// Best-effort `key` name for the TOML line containing byte `offset`.
fn field_name_near(text: &str, offset: usize) -> String {
    let line_start = text[..offset.min(text.len())].rfind('\n').map_or(0, |i| i + 1);
    let line = text[line_start..].lines().next().unwrap_or("");
    let key = line.split('=').next().unwrap_or("").trim();
    let table = text[..line_start]
        .lines()
        .rev()
        .find_map(|l| l.trim().strip_prefix('[').and_then(|r| r.strip_suffix(']')).map(str::to_string));
    match (table, key.is_empty() || key.starts_with('[')) {
        (Some(t), false) => format!("{t}.{key}"),
        (None, false) => key.to_string(),
        (Some(t), true) => t,
        (None, true) => "scenario".to_string(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub check: Check,
    pub passed: bool,
    pub file: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunOutcome {
    pub name: String,
    pub mode: Mode,
    pub passed: bool,
    pub checks: Vec<CheckOutcome>,
    pub files: Vec<PathBuf>,
}

impl RunOutcome {
    pub fn exit_code(&self) -> i32 {
        if self.passed {
            0
        } else {
            1
        }
    }
}

/// Writes through a temporary sibling and a rename.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir)?;
    }
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    fs::write(&tmp, contents)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

/// Runs every requested check and writes the artifacts under `out`
/// (the scenario's own `out` when `None`, else `./out`).
pub fn run_scenario(sc: &Scenario, out: Option<&Path>) -> Result<RunOutcome> {
    sc.validate()?;
    let dir = out
        .map(Path::to_path_buf)
        .or_else(|| sc.out.clone())
        .unwrap_or_else(|| PathBuf::from("out"));
    match sc.mode {
        Mode::Float => run_in::<f64>(sc, &dir),
        Mode::Rational => run_in::<Rational>(sc, &dir),
    }
}

struct Writer {
    dir: PathBuf,
    files: Vec<PathBuf>,
}

impl Writer {
    fn put(&mut self, name: &str, contents: &str) -> Result<PathBuf> {
        let path = self.dir.join(name);
        write_atomic(&path, contents)?;
        self.files.push(path.clone());
        Ok(path)
    }
}

fn run_in<S: Scalar>(sc: &Scenario, dir: &Path) -> Result<RunOutcome> {
    let flux = sc.flux_model()?;
    let u1: Profile<S> = sc.u1.profile("u1")?;
    let u2: Profile<S> = sc.u2.profile("u2")?;
    let hs = sc
        .h
        .iter()
        .enumerate()
        .map(|(i, h)| h.to_scalar::<S>(&format!("h[{i}]")))
        .collect::<Result<Vec<S>>>()?;
    let m: S = sc.m.to_scalar("m")?;
    let s: S = sc.s.to_scalar("s")?;
    let t: S = sc.t.to_scalar("t")?;
    let tol = sc.tolerance;

    let build = |h: &S| -> Result<(FrontTrackingRun<S>, FrontTrackingRun<S>)> {
        let r1 = FrontTrackingRun::track(flux.clone(), u1.clone(), h.clone(), t.clone())?;
        let r2 = FrontTrackingRun::track(flux.clone(), u2.clone(), h.clone(), t.clone())?;
        Ok((r1, r2))
    };
    let (r1, r2) = build(&hs[0])?;
    let field = CoefficientField::from_runs(&r1, &r2, &s, &t)?;

    let mut w = Writer {
        dir: dir.to_path_buf(),
        files: Vec::new(),
    };
    w.put("wave_u1.csv", &r1.wave_csv())?;
    w.put("wave_u2.csv", &r2.wave_csv())?;
    w.put("jumps.csv", &field.jump_csv(&m)?)?;

    let mut checks = sc.checks.clone();
    checks.sort();
    checks.dedup();
    let mut outcomes = Vec::new();
    let mut paths = Vec::new();
    for check in checks {
        let (json, passed) = match check {
            Check::L1Identity => {
                let r = l1_identity_report(&field, &s, &t, tol)?;
                (to_json(&r), r.passed)
            }
            Check::WeightedIdentity => {
                let r = weighted_identity_report(&field, &m, &s, &t, tol)?;
                (to_json(&r), r.passed)
            }
            Check::CorollaryBound => {
                let r = corollary_bound_report(&field, &m, &s, &t, tol)?;
                (to_json(&r), r.passed)
            }
            Check::Theorem31 => {
                let mut rows = vec![theorem31_on_field(&field, &r1, &r2, &s, &t, tol)?];
                for h in &hs[1..] {
                    let (a, b) = build(h)?;
                    let f = CoefficientField::from_runs(&a, &b, &s, &t)?;
                    rows.push(theorem31_on_field(&f, &a, &b, &s, &t, tol)?);
                }
                let passed = rows.iter().all(|r| r.passed);
                (to_json(&serde_json::json!({ "rows": rows, "passed": passed })), passed)
            }
            Check::LimitStudy => {
                let r = limit_study(build, &hs, &m, &s, &t, tol)?;
                w.put("limit_study.csv", &r.csv())?;
                (to_json(&r), r.passed)
            }
            Check::Theorem51 => {
                let r = theorem51_check(&field, &m, &s, &t, tol)?;
                let passed = r.holds && r.rs_free_intervals_hold;
                (to_json(&r), passed)
            }
            Check::Oleinik => {
                let lo = s.clone() + (t.clone() - s.clone()) * S::from_ratio(1, 20);
                let r = oleinik_report(&field, Some((&r1, &r2)), (&lo, &t))?;
                (to_json(&r), r.passed)
            }
            Check::MaxPrinciple => {
                let funnel = match &sc.funnel {
                    Some([a, b]) => Some((a.to_scalar::<S>("funnel[0]")?, b.to_scalar::<S>("funnel[1]")?)),
                    None => auto_funnel(&field)?,
                };
                match funnel {
                    Some((a, b)) => {
                        let r = maximum_principle_check(&field, &a, &b, &t, tol)?;
                        paths.extend(
                            funnel_paths(&field, &a, &b, &t)
                                .into_iter()
                                .map(|(id, p)| (format!("funnel_{id}"), p)),
                        );
                        (to_json(&r), r.passed)
                    }
                    None => (
                        to_json(&serde_json::json!({
                            "skipped": "psi(s) has no positive piece",
                            "passed": true
                        })),
                        true,
                    ),
                }
            }
            Check::Characteristics => {
                let anchors = if sc.anchors.is_empty() {
                    default_anchors(&field)?
                } else {
                    sc.anchors
                        .iter()
                        .enumerate()
                        .map(|(i, a)| a.to_scalar::<S>(&format!("anchors[{i}]")))
                        .collect::<Result<Vec<S>>>()?
                };
                let (r, p) = characteristics_report(&field, &anchors)?;
                paths.extend(p);
                (to_json(&r), r.passed)
            }
        };
        let file = w.put(&format!("report_{}.json", check.as_str()), &json)?;
        outcomes.push(CheckOutcome { check, passed, file });
    }
    if !paths.is_empty() {
        w.put("paths.csv", &paths_csv(&paths))?;
    }
    let passed = outcomes.iter().all(|o| o.passed);
    let mut outcome = RunOutcome {
        name: sc.name.clone(),
        mode: sc.mode,
        passed,
        checks: outcomes,
        files: Vec::new(),
    };
    let summary_path = w.dir.join("summary.json");
    outcome.files = w.files.clone();
    outcome.files.push(summary_path.clone());
    write_atomic(&summary_path, &to_json(&outcome))?;
    Ok(outcome)
}

/// Nonnegative stretch of ψ(start) around its largest positive piece, shrunk
/// by an eighth of its width on each side.
pub fn auto_funnel<S: Scalar>(field: &CoefficientField<S>) -> Result<Option<(S, S)>> {
    let psi = field.psi(field.start())?;
    let pieces: Vec<_> = psi.pieces().collect();
    let Some(best) = (0..pieces.len())
        .filter(|&i| pieces[i].value > S::zero())
        .max_by(|&i, &j| scalar::cmp(&pieces[i].value, &pieces[j].value))
    else {
        return Ok(None);
    };
    let (mut lo, mut hi) = (best, best);
    while lo > 0 && pieces[lo - 1].value >= S::zero() {
        lo -= 1;
    }
    while hi + 1 < pieces.len() && pieces[hi + 1].value >= S::zero() {
        hi += 1;
    }
    let bps = psi.breakpoints();
    let one = S::one();
    let a = pieces[lo]
        .left
        .clone()
        .unwrap_or_else(|| bps.first().cloned().unwrap_or_else(S::zero) - one.clone());
    let b = pieces[hi]
        .right
        .clone()
        .unwrap_or_else(|| bps.last().cloned().unwrap_or_else(S::zero) + one.clone());
    let margin = (b.clone() - a.clone()) * S::from_ratio(1, 8);
    Ok(Some((a + margin.clone(), b - margin)))
}

/// Five points spread over the jump range of the field at its start.
pub fn default_anchors<S: Scalar>(field: &CoefficientField<S>) -> Result<Vec<S>> {
    let t0 = field.start();
    let xs = field.phase_at(t0)?.positions(t0);
    let lo = xs.first().cloned().unwrap_or_else(S::zero) - S::one();
    let hi = xs.last().cloned().unwrap_or_else(S::zero) + S::one();
    Ok((0..5)
        .map(|k| lo.clone() + (hi.clone() - lo.clone()) * S::from_ratio(2 * k + 1, 10))
        .collect())
}

/// Random Burgers data: shared far values (so ψ has compact support), 2 to 4
/// breakpoints per profile on a 1/16 grid in [-2, 2], states on a 1/4 grid
/// in [-2, 2]. With `shocks_only` every jump is a down-jump.
pub fn random_pair<S: Scalar>(rng: &mut impl Rng, shocks_only: bool) -> Result<(Profile<S>, Profile<S>)> {
    let state = |k: i64| S::from_ratio(k, 4);
    let (far_l, far_r) = if shocks_only {
        (rng.gen_range(2..=8), rng.gen_range(-8..=-2))
    } else {
        (rng.gen_range(-8..=8), rng.gen_range(-8..=8))
    };
    let mut taken: Vec<i64> = Vec::new();
    let mut one = |rng: &mut dyn rand::RngCore| -> Result<Profile<S>> {
        let n = rng.gen_range(2..=4usize);
        let mut xs: Vec<i64> = Vec::new();
        while xs.len() < n {
            let x = rng.gen_range(-32..=32);
            if !xs.contains(&x) && !taken.contains(&x) {
                xs.push(x);
            }
        }
        xs.sort_unstable();
        taken.extend(&xs);
        let mut vals: Vec<i64> = Vec::with_capacity(n);
        if shocks_only {
            let mut inner: Vec<i64> = Vec::new();
            while inner.len() < n - 1 {
                let v = rng.gen_range(far_r + 1..far_l);
                if !inner.contains(&v) {
                    inner.push(v);
                }
            }
            inner.sort_unstable_by(|a, b| b.cmp(a));
            vals.extend(inner);
        } else {
            let mut prev = far_l;
            for _ in 0..n - 1 {
                let mut v = rng.gen_range(-8..=8);
                while v == prev {
                    v = rng.gen_range(-8..=8);
                }
                vals.push(v);
                prev = v;
            }
        }
        vals.push(far_r);
        let steps = xs.iter().zip(&vals).map(|(&x, &v)| (S::from_ratio(x, 16), state(v)));
        Profile::from_steps(state(far_l), steps)
    };
    let u1 = one(rng)?;
    let u2 = one(rng)?;
    Ok((u1, u2))
}

/// Random pair tracked to `t` with resolution `h`; redraws on degenerate
/// (coincident) front geometry.
pub fn random_runs<S: Scalar>(
    rng: &mut impl Rng,
    shocks_only: bool,
    h: &S,
    t: &S,
) -> Result<(FrontTrackingRun<S>, FrontTrackingRun<S>, CoefficientField<S>)> {
    let flux = FluxModel::burgers((-2.5, 2.5));
    let mut last = None;
    for _ in 0..32 {
        let (u1, u2) = random_pair::<S>(rng, shocks_only)?;
        let r1 = FrontTrackingRun::track(flux.clone(), u1, h.clone(), t.clone())?;
        let r2 = FrontTrackingRun::track(flux.clone(), u2, h.clone(), t.clone())?;
        match CoefficientField::from_runs(&r1, &r2, &S::zero(), t) {
            Ok(field) => return Ok((r1, r2, field)),
            Err(e @ Error::CoincidentFronts { .. }) => last = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(last.expect("at least one attempt"))
}

/// Per-scenario generator: stream `index` of the ChaCha generator seeded by `seed`.
pub fn suite_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteEntry {
    pub index: usize,
    pub initial_fronts: usize,
    pub l1_identity: bool,
    pub weighted_identity: bool,
    pub oleinik: bool,
    pub theorem31: bool,
    pub passed: bool,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteSummary {
    pub n: usize,
    pub seed: u64,
    pub h: f64,
    pub t: f64,
    pub m: f64,
    pub passes: usize,
    pub failures: usize,
    pub entries: Vec<SuiteEntry>,
}

impl SuiteSummary {
    pub fn to_json(&self) -> String {
        to_json(self)
    }
}

/// `n` random Burgers pairs (h = 1/4, t = 2, m = 1) through the L1 and
/// weighted identities, the Oleinik check and the front-tracking bound.
pub fn run_random_suite(n: usize, seed: u64) -> Result<SuiteSummary> {
    run_random_suite_with(n, seed, default_tolerance())
}

pub fn run_random_suite_with(n: usize, seed: u64, tol: f64) -> Result<SuiteSummary> {
    if n == 0 {
        return Err(Error::config("n", "suite size must be at least 1"));
    }
    let (h, t, m) = (0.25, 2.0, 1.0);
    let entries: Vec<SuiteEntry> = (0..n)
        .into_par_iter()
        .map(|i| suite_entry(i, seed, h, t, m, tol))
        .collect();
    let passes = entries.iter().filter(|e| e.passed).count();
    Ok(SuiteSummary {
        n,
        seed,
        h,
        t,
        m,
        passes,
        failures: n - passes,
        entries,
    })
}

fn suite_entry(index: usize, seed: u64, h: f64, t: f64, m: f64, tol: f64) -> SuiteEntry {
    let mut entry = SuiteEntry {
        index,
        initial_fronts: 0,
        l1_identity: false,
        weighted_identity: false,
        oleinik: false,
        theorem31: false,
        passed: false,
        error: None,
    };
    let mut rng = suite_rng(seed, index);
    let outcome = (|| -> Result<()> {
        let (r1, r2, field) = random_runs(&mut rng, false, &h, &t)?;
        entry.initial_fronts = r1.initial().jump_count() + r2.initial().jump_count();
        entry.l1_identity = l1_identity_report(&field, &0.0, &t, tol)?.passed;
        entry.weighted_identity = weighted_identity_report(&field, &m, &0.0, &t, tol)?.passed;
        entry.oleinik = oleinik_report(&field, Some((&r1, &r2)), (&0.1, &t))?.passed;
        entry.theorem31 = theorem31_on_field(&field, &r1, &r2, &0.0, &t, tol)?.passed;
        Ok(())
    })();
    if let Err(e) = outcome {
        entry.error = Some(e.to_string());
    }
    entry.passed = entry.error.is_none()
        && entry.l1_identity
        && entry.weighted_identity
        && entry.oleinik
        && entry.theorem31;
    entry
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
        name = "constants"
        h = [0.1]
        t = 1
        checks = ["l1_identity"]

        [flux]
        name = "burgers"
        interval = [-2, 2]

        [u1]
        left = 0.5

        [u2]
        left = 0.5
    "#;

    #[test]
    fn parses_and_validates() {
        let sc = Scenario::from_toml(MINIMAL).unwrap();
        assert_eq!(sc.checks, vec![Check::L1Identity]);
        assert_eq!(sc.mode, Mode::Float);

        let bad = MINIMAL.replace("h = [0.1]", "h = [0.1, -0.5]");
        match Scenario::from_toml(&bad) {
            Err(Error::Config { path, .. }) => assert_eq!(path, "h[1]"),
            other => panic!("expected config error, got {other:?}"),
        }
        let bad = MINIMAL.replace("t = 1", "t = 0");
        assert!(matches!(Scenario::from_toml(&bad), Err(Error::Config { path, .. }) if path == "t"));
        let bad = MINIMAL.replace("\"burgers\"", "\"cubic\"");
        assert!(matches!(Scenario::from_toml(&bad), Err(Error::Config { path, .. }) if path == "flux.name"));
        let bad = MINIMAL.replace("checks = [\"l1_identity\"]", "checks = [\"nonsense\"]");
        assert!(matches!(Scenario::from_toml(&bad), Err(Error::Config { path, .. }) if path == "checks"));
    }

    #[test]
    fn exact_numbers_from_decimals() {
        let q: Rational = Number::Float(0.1).to_scalar("x").unwrap();
        assert_eq!(q, Rational::from_ratio(1, 10));
        let q: Rational = Number::Text("2/3".into()).to_scalar("x").unwrap();
        assert_eq!(q, Rational::from_ratio(2, 3));
    }

    #[test]
    fn random_pairs_share_far_field() {
        let mut rng = suite_rng(7, 0);
        for shocks_only in [false, true] {
            let (u1, u2) = random_pair::<f64>(&mut rng, shocks_only).unwrap();
            assert_eq!(u1.far_left(), u2.far_left());
            assert_eq!(u1.far_right(), u2.far_right());
            assert!(u1.jump_count() + u2.jump_count() <= 8);
            if shocks_only {
                assert!(u1.jumps().chain(u2.jumps()).all(|(_, d)| d < 0.0));
            }
        }
    }

    #[test]
    fn suite_rejects_zero() {
        assert!(run_random_suite(0, 1).is_err());
    }
}
