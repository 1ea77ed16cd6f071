//! Generalized characteristics of a piecewise-constant coefficient field.
//!
//! Paths are polylines computed from the field geometry: inside a piece they
//! move at the constant value of `a`, on a jump line they either cross, ride
//! the line, or stop when no admissible direction exists. Nothing is
//! integrated numerically.

use std::fmt::Write as _;

use serde::Serialize;

use crate::coupling::{CoefficientField, FieldPhase, JumpKind, CLASSIFY_TOL};
use crate::error::{Error, Result};
use crate::fronttrack::{FrontKind, FrontTrackingRun};
use crate::scalar::{self, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Forward,
    BackwardMinimal,
    BackwardMaximal,
}

/// Which of several equivalent forward options to record.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TieBreak {
    Left,
    Right,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CharacteristicPath<S> {
    pub anchor: (S, S),
    pub direction: Direction,
    /// `(t, x)` in tracing order (decreasing `t` for backward paths).
    pub vertices: Vec<(S, S)>,
    pub speeds: Vec<S>,
    /// Whether segment `i` rides a jump line.
    pub riding: Vec<bool>,
}

impl<S: Scalar> CharacteristicPath<S> {
    pub fn end(&self) -> &(S, S) {
        self.vertices.last().expect("anchor vertex")
    }

    /// Position at `t`, or `None` outside the traced time range.
    pub fn position_at(&self, t: &S) -> Option<S> {
        for (i, w) in self.vertices.windows(2).enumerate() {
            let (lo, hi) = if w[0].0 <= w[1].0 { (&w[0], &w[1]) } else { (&w[1], &w[0]) };
            if *t >= lo.0 && *t <= hi.0 {
                return Some(w[0].1.clone() + self.speeds[i].clone() * (t.clone() - w[0].0.clone()));
            }
        }
        let (t0, x0) = &self.vertices[0];
        (t == t0).then(|| x0.clone())
    }

    pub fn times(&self) -> Vec<S> {
        self.vertices.iter().map(|v| v.0.clone()).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Move {
    Piece(usize),
    Ride(usize),
}

fn point_tol<S: Scalar>(x: &S) -> f64 {
    1e-10 * (1.0 + x.to_f64().abs())
}

fn le<S: Scalar>(a: &S, b: &S) -> bool {
    if S::EXACT {
        a <= b
    } else {
        a.to_f64() <= b.to_f64() + CLASSIFY_TOL * (1.0 + a.to_f64().abs().max(b.to_f64().abs()))
    }
}

fn same<S: Scalar>(a: &S, b: &S) -> bool {
    le(a, b) && le(b, a)
}

/// Lines of `phase` passing through `x` at `t`, as an index range.
fn group_at<S: Scalar>(phase: &FieldPhase<S>, x: &S, t: &S) -> Option<(usize, usize)> {
    let tol = point_tol(x);
    let hits: Vec<usize> = phase
        .lines
        .iter()
        .enumerate()
        .filter(|(_, l)| (l.position(t) - x.clone()).negligible(tol))
        .map(|(i, _)| i)
        .collect();
    Some((*hits.first()?, *hits.last()?))
}

fn piece_containing<S: Scalar>(phase: &FieldPhase<S>, x: &S, t: &S) -> usize {
    phase.lines.iter().take_while(|l| l.position(t) < *x).count()
}

/// Admissible `(move, speed)` options at `(x, t)` in spatial order. `dir` is
/// `1` forward in time and `-1` backward.
fn options<S: Scalar>(phase: &FieldPhase<S>, x: &S, t: &S, dir: i64) -> Vec<(Move, S)> {
    let Some((j, j2)) = group_at(phase, x, t) else {
        let k = piece_containing(phase, x, t);
        return vec![(Move::Piece(k), phase.a[k].clone())];
    };
    let d = S::from_i64(dir);
    let mut out = Vec::new();
    for k in j..=j2 + 1 {
        let v = phase.a[k].clone();
        let dv = d.clone() * v.clone();
        let lower_ok = k == j || le(&(d.clone() * phase.lines[k - 1].speed.clone()), &dv);
        let upper_ok = k == j2 + 1 || le(&dv, &(d.clone() * phase.lines[k].speed.clone()));
        if lower_ok && upper_ok {
            out.push((Move::Piece(k), v));
        }
        if k <= j2 {
            let lam = &phase.lines[k].speed;
            let (am, ap) = (&phase.a[k], &phase.a[k + 1]);
            let ok = if dir > 0 {
                le(ap, lam) && le(lam, am)
            } else {
                le(&scalar::min(am, ap), lam) && le(lam, &scalar::max(am, ap))
            };
            if ok {
                out.push((Move::Ride(k), lam.clone()));
            }
        }
    }
    out
}

struct Tracer<'a, S> {
    field: &'a CoefficientField<S>,
}

impl<'a, S: Scalar> Tracer<'a, S> {
    fn phase_for(&self, t: &S, dir: i64) -> Option<&'a FieldPhase<S>> {
        let phases = self.field.phases();
        if dir > 0 {
            if *t >= *self.field.end() {
                return None;
            }
            let k = phases.partition_point(|p| p.start <= *t);
            phases.get(k.checked_sub(1)?)
        } else {
            if *t <= *self.field.start() {
                return None;
            }
            let k = phases.partition_point(|p| p.start < *t);
            phases.get(k.checked_sub(1)?)
        }
    }

    /// Traces until `t_stop`; returns the path and the error that halted it, if any.
    fn trace(
        &self,
        x0: &S,
        t0: &S,
        t_stop: &S,
        direction: Direction,
        tie: TieBreak,
    ) -> (CharacteristicPath<S>, Option<Error>) {
        let dir: i64 = if direction == Direction::Forward { 1 } else { -1 };
        let mut path = CharacteristicPath {
            anchor: (x0.clone(), t0.clone()),
            direction,
            vertices: vec![(t0.clone(), x0.clone())],
            speeds: Vec::new(),
            riding: Vec::new(),
        };
        let (mut x, mut t) = (x0.clone(), t0.clone());
        let done = |t: &S| if dir > 0 { *t >= *t_stop } else { *t <= *t_stop };
        let mut guard = 0usize;
        while !done(&t) {
            guard += 1;
            if guard > 1_000_000 {
                let err = Error::InvariantViolated {
                    time: t.to_f64(),
                    what: "characteristic tracer made no progress".into(),
                };
                return (path, Some(err));
            }
            let Some(phase) = self.phase_for(&t, dir) else { break };
            let opts = options(phase, &x, &t, dir);
            let chosen = match direction {
                Direction::Forward => {
                    let Some(first) = opts.first() else {
                        return (path, Some(Error::NoCharacteristic { x: x.to_f64(), t: t.to_f64() }));
                    };
                    if opts.iter().any(|(_, v)| !same(v, &first.1)) {
                        return (path, Some(Error::NonUniqueCharacteristic { x: x.to_f64(), t: t.to_f64() }));
                    }
                    match tie {
                        TieBreak::Left => first.clone(),
                        TieBreak::Right => opts.last().expect("nonempty").clone(),
                    }
                }
                Direction::BackwardMinimal => match opts.iter().fold(None, |best: Option<&(Move, S)>, o| match best {
                    Some(b) if b.1 >= o.1 => Some(b),
                    _ => Some(o),
                }) {
                    Some(o) => o.clone(),
                    None => return (path, Some(Error::NoCharacteristic { x: x.to_f64(), t: t.to_f64() })),
                },
                Direction::BackwardMaximal => match opts.iter().fold(None, |best: Option<&(Move, S)>, o| match best {
                    Some(b) if b.1 < o.1 => Some(b),
                    _ => Some(o),
                }) {
                    Some(o) => o.clone(),
                    None => return (path, Some(Error::NoCharacteristic { x: x.to_f64(), t: t.to_f64() })),
                },
            };

            let limit = if dir > 0 {
                scalar::min(&phase.end, t_stop)
            } else {
                scalar::max(&phase.start, t_stop)
            };
            let (mv, v) = chosen;
            let (t_new, x_new) = match mv {
                Move::Ride(i) => (limit.clone(), phase.lines[i].position(&limit)),
                Move::Piece(k) => self.advance_in_piece(phase, k, &x, &t, &v, &limit, dir),
            };
            path.vertices.push((t_new.clone(), x_new.clone()));
            path.speeds.push(v);
            path.riding.push(matches!(mv, Move::Ride(_)));
            x = x_new;
            t = t_new;
        }
        // merge consecutive collinear segments produced by phase boundaries
        (compress(path), None)
    }

    #[allow(clippy::too_many_arguments)]
    fn advance_in_piece(
        &self,
        phase: &FieldPhase<S>,
        k: usize,
        x: &S,
        t: &S,
        v: &S,
        limit: &S,
        dir: i64,
    ) -> (S, S) {
        let tol = point_tol(x);
        let mut best: Option<(S, usize)> = None;
        let mut consider = |line: usize, tau: S| {
            if tau > S::zero() && best.as_ref().is_none_or(|(b, _)| tau < *b) {
                best = Some((tau, line));
            }
        };
        // left neighbour line k-1, right neighbour line k
        if k > 0 {
            let l = &phase.lines[k - 1];
            let gap = x.clone() - l.position(t);
            let closing = if dir > 0 { l.speed.clone() - v.clone() } else { v.clone() - l.speed.clone() };
            if closing > S::zero() && !gap.negligible(tol) {
                consider(k - 1, gap / closing);
            }
        }
        if k < phase.lines.len() {
            let l = &phase.lines[k];
            let gap = l.position(t) - x.clone();
            let closing = if dir > 0 { v.clone() - l.speed.clone() } else { l.speed.clone() - v.clone() };
            if closing > S::zero() && !gap.negligible(tol) {
                consider(k, gap / closing);
            }
        }
        let span = if dir > 0 { limit.clone() - t.clone() } else { t.clone() - limit.clone() };
        match best {
            Some((tau, line)) if tau < span => {
                let t_new = if dir > 0 { t.clone() + tau } else { t.clone() - tau };
                let x_new = phase.lines[line].position(&t_new);
                (t_new, x_new)
            }
            _ => {
                let dt = limit.clone() - t.clone();
                (limit.clone(), x.clone() + v.clone() * dt)
            }
        }
    }
}

fn compress<S: Scalar>(path: CharacteristicPath<S>) -> CharacteristicPath<S> {
    let mut out = CharacteristicPath {
        anchor: path.anchor,
        direction: path.direction,
        vertices: vec![path.vertices[0].clone()],
        speeds: Vec::new(),
        riding: Vec::new(),
    };
    for i in 0..path.speeds.len() {
        let next = path.vertices[i + 1].clone();
        let extend = matches!(
            (out.speeds.last(), out.riding.last()),
            (Some(v), Some(r)) if *v == path.speeds[i] && *r == path.riding[i]
        );
        if extend {
            *out.vertices.last_mut().expect("vertex") = next;
        } else {
            out.vertices.push(next);
            out.speeds.push(path.speeds[i].clone());
            out.riding.push(path.riding[i]);
        }
    }
    // drop segments of zero (or rounding-noise) duration
    let mut clean = CharacteristicPath {
        anchor: out.anchor.clone(),
        direction: out.direction,
        vertices: vec![out.vertices[0].clone()],
        speeds: Vec::new(),
        riding: Vec::new(),
    };
    for i in 0..out.speeds.len() {
        let dt = out.vertices[i + 1].0.clone() - clean.vertices.last().expect("vertex").0.clone();
        let tol = 1e-12 * (1.0 + out.vertices[i + 1].0.to_f64().abs());
        if !dt.negligible(tol) {
            clean.vertices.push(out.vertices[i + 1].clone());
            clean.speeds.push(out.speeds[i].clone());
            clean.riding.push(out.riding[i]);
        } else if clean.vertices.len() > 1 {
            // keep the exact endpoint so the path still reaches its stop time
            *clean.vertices.last_mut().expect("vertex") = out.vertices[i + 1].clone();
        }
    }
    clean
}

/// Unique forward characteristic from `(x0, t0)` up to `t_end`.
pub fn forward_characteristic<S: Scalar>(
    field: &CoefficientField<S>,
    x0: &S,
    t0: &S,
    t_end: &S,
) -> Result<CharacteristicPath<S>> {
    forward_with(field, x0, t0, t_end, TieBreak::Left)
}

pub fn forward_with<S: Scalar>(
    field: &CoefficientField<S>,
    x0: &S,
    t0: &S,
    t_end: &S,
    tie: TieBreak,
) -> Result<CharacteristicPath<S>> {
    check_span(field, t0, t_end)?;
    let (path, err) = Tracer { field }.trace(x0, t0, t_end, Direction::Forward, tie);
    match err {
        Some(e) => Err(e),
        None => Ok(path),
    }
}

/// Minimal (`maximal = false`) or maximal backward characteristic from
/// `(x0, t0)` down to the start of the field.
pub fn backward_characteristic<S: Scalar>(
    field: &CoefficientField<S>,
    x0: &S,
    t0: &S,
    maximal: bool,
) -> Result<CharacteristicPath<S>> {
    let start = field.start().clone();
    check_span(field, &start, t0)?;
    let direction = if maximal {
        Direction::BackwardMaximal
    } else {
        Direction::BackwardMinimal
    };
    let (path, err) = Tracer { field }.trace(x0, t0, &start, direction, TieBreak::Left);
    match err {
        Some(e) => Err(e),
        None => Ok(path),
    }
}

fn check_span<S: Scalar>(field: &CoefficientField<S>, a: &S, b: &S) -> Result<()> {
    if a < field.start() || b > field.end() || a > b {
        return Err(Error::OutsideHorizon {
            t: b.to_f64(),
            start: field.start().to_f64(),
            end: field.end().to_f64(),
        });
    }
    Ok(())
}

/// `a(x-, t)` and `a(x+, t)` for `t` strictly inside a phase.
pub fn traces<S: Scalar>(field: &CoefficientField<S>, x: &S, t: &S) -> Result<(S, S)> {
    let phase = field.phase_at(t)?;
    match group_at(phase, x, t) {
        Some((j, j2)) => Ok((phase.a[j].clone(), phase.a[j2 + 1].clone())),
        None => {
            let k = piece_containing(phase, x, t);
            Ok((phase.a[k].clone(), phase.a[k].clone()))
        }
    }
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct PathAudit {
    /// Segments whose speed differs from the one-sided trace they should follow.
    pub non_genuine_segments: usize,
    /// Segments violating `a+ <= y' <= a-`.
    pub sandwich_violations: usize,
    pub max_speed_error: f64,
}

/// Checks every segment against an independent trace query at its midpoint.
pub fn audit_path<S: Scalar>(field: &CoefficientField<S>, path: &CharacteristicPath<S>) -> Result<PathAudit> {
    let mut audit = PathAudit {
        non_genuine_segments: 0,
        sandwich_violations: 0,
        max_speed_error: 0.0,
    };
    for (i, w) in path.vertices.windows(2).enumerate() {
        let tm = (w[0].0.clone() + w[1].0.clone()) * S::half();
        let xm = (w[0].1.clone() + w[1].1.clone()) * S::half();
        let (am, ap) = traces(field, &xm, &tm)?;
        let v = &path.speeds[i];
        if !(le(&ap, v) && le(v, &am)) {
            audit.sandwich_violations += 1;
        }
        let expected = match path.direction {
            Direction::BackwardMinimal => Some(am),
            Direction::BackwardMaximal => Some(ap),
            Direction::Forward => None,
        };
        if let Some(e) = expected {
            let err = (e - v.clone()).abs();
            audit.max_speed_error = audit.max_speed_error.max(err.to_f64());
            let genuine = if S::EXACT { err.is_zero() } else { err.to_f64() <= 1e-12 };
            if !genuine {
                audit.non_genuine_segments += 1;
            }
        }
    }
    Ok(audit)
}

/// Polylines as `path_id,t,x` rows.
pub fn paths_csv<S: Scalar>(paths: &[(String, CharacteristicPath<S>)]) -> String {
    let mut out = String::from("path_id,t,x\n");
    for (id, path) in paths {
        for (t, x) in &path.vertices {
            let _ = writeln!(out, "{},{},{}", id, t.to_f64(), x.to_f64());
        }
    }
    out
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct OleinikViolation {
    pub t: f64,
    pub x: f64,
    pub a_minus: f64,
    pub a_plus: f64,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct OleinikReport {
    pub t_window: (f64, f64),
    pub jumps_checked: usize,
    /// Jumps with `a+ > a-` not explained by a fan member.
    pub violations: Vec<OleinikViolation>,
    /// Fan-member jumps with `0 < a+ - a- <= sup f'' h`.
    pub fan_jumps_tolerated: usize,
    pub max_fan_increase: f64,
    pub c_one: Option<f64>,
    pub c_two: Option<f64>,
    /// `sup f'' (C1 + C2) / 2`.
    pub e_constant: Option<f64>,
    pub passed: bool,
}

/// Checks `a+ <= a-` at the jumps of `field` over `t_window` and, given the
/// runs, measures the one-sided slope constant of their fans.
pub fn oleinik_report<S: Scalar>(
    field: &CoefficientField<S>,
    runs: Option<(&FrontTrackingRun<S>, &FrontTrackingRun<S>)>,
    t_window: (&S, &S),
) -> Result<OleinikReport> {
    let (lo, hi) = t_window;
    if *lo <= S::zero() || lo > hi {
        return Err(Error::config("t_window", "window must satisfy 0 < lo <= hi"));
    }
    let fan_allow = runs.map(|(r, _)| r.flux().sup_second_derivative() * r.h().to_f64());
    let mut report = OleinikReport {
        t_window: (lo.to_f64(), hi.to_f64()),
        jumps_checked: 0,
        violations: Vec::new(),
        fan_jumps_tolerated: 0,
        max_fan_increase: 0.0,
        c_one: None,
        c_two: None,
        e_constant: None,
        passed: true,
    };
    for phase in field.phases() {
        if phase.end <= *lo || phase.start >= *hi {
            continue;
        }
        let tm = (scalar::max(&phase.start, lo) + scalar::min(&phase.end, hi)) * S::half();
        for (jump, x) in phase.jumps().into_iter().zip(phase.positions(&tm)) {
            report.jumps_checked += 1;
            let rise = jump.a_plus.clone() - jump.a_minus.clone();
            if le(&rise, &S::zero()) {
                continue;
            }
            let excused = match (jump.front_kind, fan_allow) {
                (Some(FrontKind::FanMember), Some(allow)) => rise.to_f64() <= allow * (1.0 + 1e-12),
                _ => false,
            };
            if excused {
                report.fan_jumps_tolerated += 1;
                report.max_fan_increase = report.max_fan_increase.max(rise.to_f64());
            } else {
                report.violations.push(OleinikViolation {
                    t: tm.to_f64(),
                    x: x.to_f64(),
                    a_minus: jump.a_minus.to_f64(),
                    a_plus: jump.a_plus.to_f64(),
                });
            }
        }
    }
    if let Some((r1, r2)) = runs {
        let c1 = fan_slope_constant(r1, lo, hi)?;
        let c2 = fan_slope_constant(r2, lo, hi)?;
        report.c_one = Some(c1);
        report.c_two = Some(c2);
        report.e_constant = Some(r1.flux().sup_second_derivative() * (c1 + c2) / 2.0);
    }
    report.passed = report.violations.is_empty();
    Ok(report)
}

/// `max t (u2 - u0) / 2 / (x2 - x1)` over adjacent fan members
/// `(u0 -> u1)`, `(u1 -> u2)`, sampled at phase midpoints inside the window.
pub fn fan_slope_constant<S: Scalar>(run: &FrontTrackingRun<S>, lo: &S, hi: &S) -> Result<f64> {
    let mut c: f64 = 0.0;
    let mut times: Vec<S> = vec![lo.clone(), hi.clone()];
    let phases = run.phases();
    for (k, p) in phases.iter().enumerate() {
        let end = phases.get(k + 1).map_or_else(|| run.horizon().clone(), |q| q.start.clone());
        let (a, b) = (scalar::max(&p.start, lo), scalar::min(&end, hi));
        if a < b {
            times.push((a + b) * S::half());
        }
    }
    for t in times {
        let fronts = run.fronts_at(&t)?;
        for w in fronts.windows(2) {
            let (f1, f2) = (run.front(w[0].0), run.front(w[1].0));
            if f1.kind != FrontKind::FanMember || f2.kind != FrontKind::FanMember {
                continue;
            }
            let dx = w[1].1.clone() - w[0].1.clone();
            if dx <= S::zero() {
                continue;
            }
            let du = (f2.right.clone() - f1.left.clone()) * S::half();
            c = c.max((t.clone() * du / dx).to_f64());
        }
    }
    Ok(c)
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct ConservationSample {
    pub t: f64,
    pub integral_now: f64,
    pub integral_at_feet: f64,
    pub error: f64,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct MaxPrincipleReport {
    pub xi0: f64,
    pub zeta0: f64,
    pub t0: f64,
    pub t_end: f64,
    pub initially_nonnegative: bool,
    pub mesh_points: usize,
    pub violations: usize,
    pub first_violation: Option<(f64, f64)>,
    pub min_psi: f64,
    /// Time from which the coefficient assumptions fail inside the funnel
    /// (rarefaction shock, or a non-unique forward path); not checked beyond.
    pub hypothesis_failed_at: Option<f64>,
    pub conservation: Vec<ConservationSample>,
    pub max_conservation_error: f64,
    pub passed: bool,
}

/// Funnel test: `ψ = u2 - u1 >= 0` between the forward characteristics from
/// `ξ0`, `ζ0`, plus conservation of `∫ψ` between genuine backward paths.
pub fn maximum_principle_check<S: Scalar>(
    field: &CoefficientField<S>,
    xi0: &S,
    zeta0: &S,
    t_end: &S,
    tol: f64,
) -> Result<MaxPrincipleReport> {
    let t0 = field.start().clone();
    check_span(field, &t0, t_end)?;
    if xi0 > zeta0 {
        return Err(Error::config("interval", "funnel endpoints must satisfy xi0 <= zeta0"));
    }
    let mut report = MaxPrincipleReport {
        xi0: xi0.to_f64(),
        zeta0: zeta0.to_f64(),
        t0: t0.to_f64(),
        t_end: t_end.to_f64(),
        initially_nonnegative: true,
        mesh_points: 0,
        violations: 0,
        first_violation: None,
        min_psi: f64::INFINITY,
        hypothesis_failed_at: None,
        conservation: Vec::new(),
        max_conservation_error: 0.0,
        passed: true,
    };
    let psi0 = field.psi(&t0)?;
    if min_on(&psi0, xi0, zeta0, true).is_some_and(|v| v < S::zero()) {
        report.initially_nonnegative = false;
        report.passed = false;
        return Ok(report);
    }

    let tracer = Tracer { field };
    let (xi, e1) = tracer.trace(xi0, &t0, t_end, Direction::Forward, TieBreak::Left);
    let (zeta, e2) = tracer.trace(zeta0, &t0, t_end, Direction::Forward, TieBreak::Left);
    let mut stop = t_end.clone();
    for (path, err) in [(&xi, &e1), (&zeta, &e2)] {
        if err.is_some() {
            stop = scalar::min(&stop, &path.end().0);
        }
    }

    // mesh: phase boundaries, 50 uniform times, path vertices, midpoints
    let mut mesh: Vec<S> = Vec::new();
    for p in field.phases() {
        mesh.push(p.start.clone());
        mesh.push(p.end.clone());
    }
    for i in 0..=50 {
        mesh.push(t0.clone() + (t_end.clone() - t0.clone()) * S::from_ratio(i, 50));
    }
    mesh.extend(xi.times());
    mesh.extend(zeta.times());
    mesh.retain(|t| *t >= t0 && *t <= stop);
    mesh.sort_by(scalar::cmp);
    mesh.dedup();
    let mids: Vec<S> = mesh
        .windows(2)
        .map(|w| (w[0].clone() + w[1].clone()) * S::half())
        .collect();
    mesh.extend(mids);
    mesh.sort_by(scalar::cmp);

    let mut failed: Option<S> = (stop < *t_end).then(|| stop.clone());
    for t in &mesh {
        if failed.as_ref().is_some_and(|f| t >= f) {
            break;
        }
        let (Some(a), Some(b)) = (xi.position_at(t), zeta.position_at(t)) else {
            continue;
        };
        // an RS jump strictly inside the funnel breaks the one-sided bound on a
        let phase = field.phase_at(t)?;
        let rs_inside = phase
            .jumps()
            .iter()
            .zip(phase.positions(t))
            .any(|(j, x)| j.kind == JumpKind::RarefactionShock && x > a && x < b);
        if rs_inside {
            failed = Some(t.clone());
            break;
        }
        report.mesh_points += 1;
        let psi = field.psi(t)?;
        if let Some(v) = min_on(&psi, &a, &b, false) {
            report.min_psi = report.min_psi.min(v.to_f64());
            let bad = if S::EXACT { v < S::zero() } else { v.to_f64() < -tol };
            if bad {
                report.violations += 1;
                report.first_violation.get_or_insert((t.to_f64(), a.to_f64()));
            }
        }
    }
    report.hypothesis_failed_at = failed.as_ref().map(Scalar::to_f64);

    // conservation between a maximal path from the left third and a minimal one from the right third
    let candidates: Vec<&S> = mesh
        .iter()
        .filter(|t| **t > t0 && failed.as_ref().is_none_or(|f| *t < f))
        .collect();
    let step = (candidates.len() / 10).max(1);
    for t in candidates.into_iter().step_by(step) {
        let (Some(a), Some(b)) = (xi.position_at(t), zeta.position_at(t)) else {
            continue;
        };
        if a >= b {
            continue;
        }
        let third = (b.clone() - a.clone()) / S::from_i64(3);
        let y = a.clone() + third.clone();
        let z = b - third;
        let Ok(left) = backward_characteristic(field, &y, t, true) else { continue };
        let Ok(right) = backward_characteristic(field, &z, t, false) else { continue };
        let now = field.psi(t)?.integral_over(&y, &z);
        let merged = path_order_broken(&left, &right);
        let feet = if merged {
            S::zero()
        } else {
            psi0.integral_over(&left.end().1, &right.end().1)
        };
        let err = (now.clone() - feet.clone()).abs();
        report.max_conservation_error = report.max_conservation_error.max(err.to_f64());
        let ok = if S::EXACT { err.is_zero() } else { err.to_f64() <= 1e-10 * (1.0 + now.to_f64().abs()) };
        report.passed &= ok;
        report.conservation.push(ConservationSample {
            t: t.to_f64(),
            integral_now: now.to_f64(),
            integral_at_feet: feet.to_f64(),
            error: err.to_f64(),
        });
    }
    if report.min_psi == f64::INFINITY {
        report.min_psi = 0.0;
    }
    report.passed &= report.violations == 0;
    Ok(report)
}

/// Forward paths from the funnel endpoints, cut where tracing stops.
pub fn funnel_paths<S: Scalar>(
    field: &CoefficientField<S>,
    xi0: &S,
    zeta0: &S,
    t_end: &S,
) -> Vec<(String, CharacteristicPath<S>)> {
    let tracer = Tracer { field };
    let start = field.start().clone();
    [("xi", xi0), ("zeta", zeta0)]
        .into_iter()
        .map(|(id, x)| (id.to_string(), tracer.trace(x, &start, t_end, Direction::Forward, TieBreak::Left).0))
        .collect()
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct AnchorRecord {
    pub x0: f64,
    pub t0: f64,
    /// Why forward tracing stopped early, if it did.
    pub halted: Option<String>,
    /// Largest distance between the left- and right-preferring forward traces.
    pub tie_break_gap: f64,
    pub foot_minimal: Option<f64>,
    pub foot_maximal: Option<f64>,
    pub non_genuine_segments: usize,
    /// Backward segments that ride a rarefaction shock (outside the theory).
    pub rs_contacts: usize,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct CharacteristicsReport {
    pub anchors: Vec<AnchorRecord>,
    pub max_tie_break_gap: f64,
    pub order_preserved: bool,
    pub non_genuine_segments: usize,
    pub passed: bool,
}

/// Forward paths from each anchor at the field start, both tie-breaks,
/// followed by the extremal backward paths from their endpoints.
pub fn characteristics_report<S: Scalar>(
    field: &CoefficientField<S>,
    anchors: &[S],
) -> Result<(CharacteristicsReport, Vec<(String, CharacteristicPath<S>)>)> {
    let (t0, t1) = (field.start().clone(), field.end().clone());
    let mut records = Vec::with_capacity(anchors.len());
    let mut paths = Vec::new();
    let mut forward: Vec<CharacteristicPath<S>> = Vec::new();
    for (i, x0) in anchors.iter().enumerate() {
        let mut rec = AnchorRecord {
            x0: x0.to_f64(),
            t0: t0.to_f64(),
            halted: None,
            tie_break_gap: 0.0,
            foot_minimal: None,
            foot_maximal: None,
            non_genuine_segments: 0,
            rs_contacts: 0,
        };
        let left = forward_with(field, x0, &t0, &t1, TieBreak::Left);
        let right = forward_with(field, x0, &t0, &t1, TieBreak::Right);
        let (left, right) = match (left, right) {
            (Ok(l), Ok(r)) => (l, r),
            (Err(e), _) | (_, Err(e)) => {
                rec.halted = Some(e.to_string());
                records.push(rec);
                continue;
            }
        };
        for t in left.times().iter().chain(right.times().iter()) {
            if let (Some(a), Some(b)) = (left.position_at(t), right.position_at(t)) {
                rec.tie_break_gap = rec.tie_break_gap.max((a - b).abs().to_f64());
            }
        }
        let end_x = left.end().1.clone();
        for maximal in [false, true] {
            let back = backward_characteristic(field, &end_x, &t1, maximal)?;
            let audit = audit_path(field, &back)?;
            if audit.sandwich_violations > 0 {
                rec.rs_contacts += audit.sandwich_violations;
            } else {
                rec.non_genuine_segments += audit.non_genuine_segments;
            }
            let foot = back.end().1.to_f64();
            let tag = if maximal {
                rec.foot_maximal = Some(foot);
                "max"
            } else {
                rec.foot_minimal = Some(foot);
                "min"
            };
            paths.push((format!("a{i}_back_{tag}"), back));
        }
        paths.push((format!("a{i}_fwd"), left.clone()));
        forward.push(left);
        records.push(rec);
    }
    let mut order_preserved = true;
    forward.sort_by(|p, q| scalar::cmp(&p.anchor.0, &q.anchor.0));
    for w in forward.windows(2) {
        for t in w[0].times().iter().chain(w[1].times().iter()) {
            if let (Some(a), Some(b)) = (w[0].position_at(t), w[1].position_at(t)) {
                order_preserved &= le(&a, &b);
            }
        }
    }
    let max_gap = records.iter().map(|r| r.tie_break_gap).fold(0.0, f64::max);
    let non_genuine = records.iter().map(|r| r.non_genuine_segments).sum();
    let report = CharacteristicsReport {
        passed: order_preserved && max_gap <= 1e-12 && non_genuine == 0,
        anchors: records,
        max_tie_break_gap: max_gap,
        order_preserved,
        non_genuine_segments: non_genuine,
    };
    Ok((report, paths))
}

/// True when the left path reaches or passes the right one at some vertex time.
fn path_order_broken<S: Scalar>(left: &CharacteristicPath<S>, right: &CharacteristicPath<S>) -> bool {
    left.times()
        .iter()
        .chain(right.times().iter())
        .any(|t| match (left.position_at(t), right.position_at(t)) {
            (Some(a), Some(b)) => a >= b,
            _ => false,
        })
}

/// Minimum of `p` over `(a, b)`, or `[a, b]` when `closed`. In the open case
/// a piece counts only if it overlaps the interval by more than rounding
/// noise, so paths locked onto a jump of `p` do not see the far side.
fn min_on<S: Scalar>(p: &crate::profile::Profile<S>, a: &S, b: &S, closed: bool) -> Option<S> {
    if a > b || (!closed && a == b) {
        return None;
    }
    let eps = if S::EXACT {
        S::zero()
    } else {
        S::from_f64(1e-9 * (1.0 + a.to_f64().abs().max(b.to_f64().abs())))
    };
    let mut best: Option<S> = None;
    for piece in p.pieces() {
        let inside = if closed {
            piece.right.as_ref().is_none_or(|r| r > a) && piece.left.as_ref().is_none_or(|l| l <= b)
        } else {
            let lo = piece.left.as_ref().map_or(a.clone(), |l| scalar::max(l, a));
            let hi = piece.right.as_ref().map_or(b.clone(), |r| scalar::min(r, b));
            hi - lo > eps
        };
        if inside {
            best = Some(match best {
                Some(v) => scalar::min(&v, &piece.value),
                None => piece.value,
            });
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn lax_field() -> CoefficientField<f64> {
        CoefficientField::from_lines(vec![0.5, -0.5], vec![(0.0, 0.0)], 0.0, 4.0).unwrap()
    }

    #[test]
    fn forward_locks_onto_lax_jump() {
        let f = lax_field();
        let p = forward_characteristic(&f, &-1.0, &0.0, &4.0).unwrap();
        assert_eq!(p.vertices, vec![(0.0, -1.0), (2.0, 0.0), (4.0, 0.0)]);
        assert_eq!(p.riding, vec![false, true]);
    }

    #[test]
    fn forward_in_constant_field() {
        let f = CoefficientField::from_lines(vec![0.3], vec![], 0.0, 2.0).unwrap();
        let p = forward_characteristic(&f, &1.0, &0.5, &2.0).unwrap();
        assert_eq!(p.end(), &(2.0, 1.0 + 0.3 * 1.5));
    }

    #[test]
    fn forward_crosses_slow_undercompressive_jump() {
        let f = CoefficientField::from_lines(vec![2.5, 1.5], vec![(0.0, 1.0)], 0.0, 2.0).unwrap();
        let p = forward_characteristic(&f, &-1.0, &0.0, &2.0).unwrap();
        let (t1, x1) = &p.vertices[1];
        assert!((t1 - 2.0 / 3.0).abs() < 1e-15 && (x1 - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(p.speeds, vec![2.5, 1.5]);
    }

    #[test]
    fn backward_extremal_paths() {
        let f = lax_field();
        let min = backward_characteristic(&f, &0.0, &1.0, false).unwrap();
        let max = backward_characteristic(&f, &0.0, &1.0, true).unwrap();
        assert_eq!(min.end(), &(0.0, -0.5));
        assert_eq!(max.end(), &(0.0, 0.5));
        for p in [&min, &max] {
            let audit = audit_path(&f, p).unwrap();
            assert_eq!(audit.non_genuine_segments, 0);
            assert_eq!(audit.sandwich_violations, 0);
        }
        let flat = CoefficientField::from_lines(vec![0.2], vec![], 0.0, 1.0).unwrap();
        let a = backward_characteristic(&flat, &0.0, &1.0, false).unwrap();
        let b = backward_characteristic(&flat, &0.0, &1.0, true).unwrap();
        assert_eq!(a, CharacteristicPath { direction: Direction::BackwardMinimal, ..b });
    }

    #[test]
    fn rarefaction_shock_is_rejected_and_flagged() {
        let f = CoefficientField::from_lines(vec![-0.5, 0.5], vec![(0.0, 0.0)], 0.0, 1.0).unwrap();
        assert!(matches!(
            forward_characteristic(&f, &0.0, &0.0, &1.0),
            Err(Error::NonUniqueCharacteristic { .. })
        ));
        let rep = oleinik_report(&f, None, (&0.25, &1.0)).unwrap();
        assert_eq!(rep.violations.len(), 1);
        assert!(!rep.passed);
        assert!(oleinik_report(&lax_field(), None, (&0.25, &1.0)).unwrap().passed);
    }

    #[test]
    fn exact_backward_genuineness() {
        let r = |n, d| Rational::from_ratio(n, d);
        let f = CoefficientField::from_lines(
            vec![r(1, 1), r(1, 3), r(-1, 2)],
            vec![(r(-1, 1), r(1, 2)), (r(1, 1), r(-1, 4))],
            r(0, 1),
            r(2, 1),
        )
        .unwrap();
        for maximal in [false, true] {
            let p = backward_characteristic(&f, &r(1, 7), &r(2, 1), maximal).unwrap();
            let audit = audit_path(&f, &p).unwrap();
            assert_eq!(audit.non_genuine_segments, 0);
            assert_eq!(audit.max_speed_error, 0.0);
        }
    }
}
