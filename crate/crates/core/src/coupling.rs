//! The averaged coefficient `a = (f(u2) - f(u1)) / (u2 - u1)` of two front
//! tracking runs, its jump classification and the weight built on it.
//!
//! The field is stored as a list of phases. Inside a phase the ordered set of
//! jump lines is fixed, every line moves at constant speed and `a`, `u1`, `u2`
//! are constant on the pieces between lines. Phases end at interaction times
//! of either run and at the instants where a front of one run crosses a front
//! of the other.

use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::flux::{secant_speed, FluxModel};
use crate::fronttrack::{FrontKind, FrontTrackingRun, MEET_TOL};
use crate::profile::Profile;
use crate::scalar::{self, Scalar};

/// Speeds closer than this snap to equality when classifying jumps.
pub const CLASSIFY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum JumpKind {
    #[serde(rename = "lax")]
    Lax,
    #[serde(rename = "slow_undercompressive")]
    SlowUndercompressive,
    #[serde(rename = "fast_undercompressive")]
    FastUndercompressive,
    #[serde(rename = "rarefaction_shock")]
    RarefactionShock,
}

impl JumpKind {
    pub fn as_str(self) -> &'static str {
        match self {
            JumpKind::Lax => "lax",
            JumpKind::SlowUndercompressive => "slow_undercompressive",
            JumpKind::FastUndercompressive => "fast_undercompressive",
            JumpKind::RarefactionShock => "rarefaction_shock",
        }
    }

    pub fn is_undercompressive(self) -> bool {
        matches!(self, JumpKind::SlowUndercompressive | JumpKind::FastUndercompressive)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Partition {
    #[serde(rename = "I")]
    I,
    #[serde(rename = "II")]
    II,
}

impl Partition {
    pub fn as_str(self) -> &'static str {
        match self {
            Partition::I => "I",
            Partition::II => "II",
        }
    }
}

/// Four-way classification of a jump of `a` moving at `lambda`. Ties within
/// `tol` go to the undercompressive classes.
pub fn classify<S: Scalar>(a_minus: &S, a_plus: &S, lambda: &S, tol: f64) -> JumpKind {
    let dm = scalar::snapped_sign(&(a_minus.clone() - lambda.clone()), tol);
    let dp = scalar::snapped_sign(&(a_plus.clone() - lambda.clone()), tol);
    match (dm, dp) {
        (1, -1) => JumpKind::Lax,
        (-1, 1) => JumpKind::RarefactionShock,
        (m, p) if m >= 0 && p >= 0 => JumpKind::SlowUndercompressive,
        _ => JumpKind::FastUndercompressive,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JumpOrigin {
    /// Front `front` of run `partition`.
    Front {
        partition: Partition,
        front: usize,
        kind: FrontKind,
    },
    /// Hand-built line with no underlying solution.
    Given,
}

#[derive(Debug, Clone, PartialEq)]
pub struct JumpLine<S> {
    pub x_ref: S,
    pub t_ref: S,
    pub speed: S,
    pub origin: JumpOrigin,
    /// Signed strength `u(x+) - u(x-)` of the owning solution.
    pub b_jump: S,
}

impl<S: Scalar> JumpLine<S> {
    pub fn position(&self, t: &S) -> S {
        self.x_ref.clone() + self.speed.clone() * (t.clone() - self.t_ref.clone())
    }

    pub fn partition(&self) -> Option<Partition> {
        match self.origin {
            JumpOrigin::Front { partition, .. } => Some(partition),
            JumpOrigin::Given => None,
        }
    }

    pub fn front_kind(&self) -> Option<FrontKind> {
        match self.origin {
            JumpOrigin::Front { kind, .. } => Some(kind),
            JumpOrigin::Given => None,
        }
    }
}

/// Interaction-free slab `[start, end]` of the field.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldPhase<S> {
    pub start: S,
    pub end: S,
    pub lines: Vec<JumpLine<S>>,
    /// `a` on the `lines.len() + 1` pieces.
    pub a: Vec<S>,
    /// `(u1, u2)` on the pieces, absent for hand-built fields.
    pub states: Option<(Vec<S>, Vec<S>)>,
}

/// Per-phase view of one jump; everything here is constant in time.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhaseJump<S> {
    pub index: usize,
    pub lambda: S,
    pub a_minus: S,
    pub a_plus: S,
    pub kind: JumpKind,
    pub partition: Option<Partition>,
    pub front_kind: Option<FrontKind>,
    pub b_jump: S,
    pub kappa_minus: Option<S>,
    pub kappa_plus: Option<S>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassifiedJump<S> {
    pub x: S,
    pub t: S,
    #[serde(flatten)]
    pub jump: PhaseJump<S>,
}

impl<S: Scalar> FieldPhase<S> {
    pub fn duration(&self) -> S {
        self.end.clone() - self.start.clone()
    }

    pub fn midpoint(&self) -> S {
        (self.start.clone() + self.end.clone()) * S::half()
    }

    pub fn kappa(&self) -> Option<Vec<S>> {
        self.states.as_ref().map(|(u1, u2)| {
            u1.iter()
                .zip(u2)
                .map(|(a, b)| b.clone() - a.clone())
                .collect()
        })
    }

    pub fn positions(&self, t: &S) -> Vec<S> {
        self.lines.iter().map(|l| l.position(t)).collect()
    }

    /// Sum of `|b|` over all lines.
    pub fn tv_b(&self) -> S {
        self.lines
            .iter()
            .fold(S::zero(), |acc, l| acc + l.b_jump.abs())
    }

    pub fn tv_a(&self) -> S {
        self.a
            .windows(2)
            .fold(S::zero(), |acc, w| acc + (w[1].clone() - w[0].clone()).abs())
    }

    pub fn jumps(&self) -> Vec<PhaseJump<S>> {
        let kappa = self.kappa();
        self.lines
            .iter()
            .enumerate()
            .map(|(i, line)| PhaseJump {
                index: i,
                lambda: line.speed.clone(),
                a_minus: self.a[i].clone(),
                a_plus: self.a[i + 1].clone(),
                kind: classify(&self.a[i], &self.a[i + 1], &line.speed, CLASSIFY_TOL),
                partition: line.partition(),
                front_kind: line.front_kind(),
                b_jump: line.b_jump.clone(),
                kappa_minus: kappa.as_ref().map(|k| k[i].clone()),
                kappa_plus: kappa.as_ref().map(|k| k[i + 1].clone()),
            })
            .collect()
    }

    /// Weight on each piece for parameter `m`; `κ = 0` takes the `κ <= 0` branch.
    pub fn weight(&self, m: &S) -> Result<Vec<S>> {
        let kappa = self.kappa().ok_or(Error::MissingFieldData("solution state"))?;
        let mut v1_tot = S::zero();
        let mut v2_tot = S::zero();
        for line in &self.lines {
            match line.partition() {
                Some(Partition::I) => v1_tot = v1_tot + line.b_jump.abs(),
                Some(Partition::II) => v2_tot = v2_tot + line.b_jump.abs(),
                None => return Err(Error::MissingFieldData("jump partition")),
            }
        }
        let mut w = Vec::with_capacity(self.a.len());
        let (mut v1, mut v2) = (S::zero(), S::zero());
        for (k, kap) in kappa.iter().enumerate() {
            if k > 0 {
                let line = &self.lines[k - 1];
                match line.partition() {
                    Some(Partition::I) => v1 = v1 + line.b_jump.abs(),
                    _ => v2 = v2 + line.b_jump.abs(),
                }
            }
            let value = if *kap > S::zero() {
                m.clone() + v1_tot.clone() - v1.clone() + v2.clone()
            } else {
                m.clone() + v1.clone() + v2_tot.clone() - v2.clone()
            };
            w.push(value);
        }
        Ok(w)
    }

    /// Profile built from per-piece `values` at time `t` inside the phase.
    /// Lines sharing a position (a fan at its birth, a crossing instant)
    /// collapse onto one breakpoint.
    pub fn profile_of(&self, values: &[S], t: &S) -> Result<Profile<S>> {
        let mut xs = self.positions(t);
        for i in 1..xs.len() {
            if xs[i] < xs[i - 1] {
                xs[i] = xs[i - 1].clone();
            }
        }
        Profile::from_steps(values[0].clone(), xs.into_iter().zip(values[1..].iter().cloned()))
    }
}

#[derive(Debug, Clone)]
pub struct CoefficientField<S> {
    flux: Option<FluxModel>,
    phases: Vec<FieldPhase<S>>,
}

impl<S: Scalar> CoefficientField<S> {
    /// Couples two runs on `[s, t]`.
    pub fn from_runs(run1: &FrontTrackingRun<S>, run2: &FrontTrackingRun<S>, s: &S, t: &S) -> Result<Self> {
        if !(s < t) {
            return Err(Error::config("t", format!("horizon end {t} must exceed start {s}")));
        }
        for run in [run1, run2] {
            if *t > *run.horizon() {
                return Err(Error::OutsideHorizon {
                    t: t.to_f64(),
                    start: 0.0,
                    end: run.horizon().to_f64(),
                });
            }
        }
        let mut cuts: Vec<S> = vec![s.clone(), t.clone()];
        for run in [run1, run2] {
            cuts.extend(run.event_times().into_iter().filter(|e| e > s && e < t));
        }
        cuts.sort_by(scalar::cmp);
        cuts.dedup();

        let flux = run1.flux().clone();
        let mut phases = Vec::new();
        for w in cuts.windows(2) {
            let (ta, tb) = (&w[0], &w[1]);
            let lines1 = run_lines(run1, ta, Partition::I)?;
            let lines2 = run_lines(run2, ta, Partition::II)?;

            let mut sub: Vec<S> = vec![ta.clone(), tb.clone()];
            for l1 in &lines1 {
                for l2 in &lines2 {
                    if l1.speed == l2.speed {
                        continue;
                    }
                    let p1 = l1.position(&S::zero());
                    let p2 = l2.position(&S::zero());
                    let tc = (p2 - p1) / (l1.speed.clone() - l2.speed.clone());
                    if tc > *ta && tc < *tb {
                        sub.push(tc);
                    }
                }
            }
            sub.sort_by(scalar::cmp);
            sub.dedup();
            for v in sub.windows(2) {
                phases.push(merge_phase(
                    &flux,
                    run1.initial().far_left(),
                    run2.initial().far_left(),
                    &lines1,
                    &lines2,
                    &v[0],
                    &v[1],
                )?);
            }
        }
        Ok(Self {
            flux: Some(flux),
            phases,
        })
    }

    /// Single-phase field with piece values `a` and lines `(x at t_start, speed)`.
    pub fn from_lines(a: Vec<S>, lines: Vec<(S, S)>, t_start: S, t_end: S) -> Result<Self> {
        if a.len() != lines.len() + 1 {
            return Err(Error::InvalidProfile(format!(
                "{} coefficient values for {} lines",
                a.len(),
                lines.len()
            )));
        }
        let lines: Vec<JumpLine<S>> = lines
            .into_iter()
            .zip(a.windows(2))
            .map(|((x, speed), pair)| JumpLine {
                x_ref: x,
                t_ref: t_start.clone(),
                speed,
                origin: JumpOrigin::Given,
                b_jump: pair[1].clone() - pair[0].clone(),
            })
            .collect();
        let phase = FieldPhase {
            start: t_start,
            end: t_end,
            lines,
            a,
            states: None,
        };
        for t in [&phase.start, &phase.end] {
            if phase.positions(t).windows(2).any(|w| w[0] > w[1]) {
                return Err(Error::InvalidProfile("jump lines cross inside the slab".into()));
            }
        }
        Ok(Self {
            flux: None,
            phases: vec![phase],
        })
    }

    pub fn flux(&self) -> Option<&FluxModel> {
        self.flux.as_ref()
    }

    pub fn phases(&self) -> &[FieldPhase<S>] {
        &self.phases
    }

    pub fn start(&self) -> &S {
        &self.phases[0].start
    }

    pub fn end(&self) -> &S {
        &self.phases.last().expect("nonempty").end
    }

    /// Phase containing `t`; at a boundary the later phase wins except at the end.
    pub fn phase_index(&self, t: &S) -> Result<usize> {
        if *t < *self.start() || *t > *self.end() {
            return Err(Error::OutsideHorizon {
                t: t.to_f64(),
                start: self.start().to_f64(),
                end: self.end().to_f64(),
            });
        }
        let k = self.phases.partition_point(|p| p.start <= *t);
        Ok(k.saturating_sub(1))
    }

    pub fn phase_at(&self, t: &S) -> Result<&FieldPhase<S>> {
        Ok(&self.phases[self.phase_index(t)?])
    }

    /// Snapshot of `a` with its classified jumps.
    pub fn build_coefficient(&self, t: &S) -> Result<(Profile<S>, Vec<ClassifiedJump<S>>)> {
        let phase = self.phase_at(t)?;
        let profile = phase.profile_of(&phase.a, t)?;
        let xs = phase.positions(t);
        let jumps = phase
            .jumps()
            .into_iter()
            .zip(xs)
            .map(|(jump, x)| ClassifiedJump { x, t: t.clone(), jump })
            .collect();
        Ok((profile, jumps))
    }

    pub fn build_weight(&self, m: &S, t: &S) -> Result<Profile<S>> {
        let phase = self.phase_at(t)?;
        phase.profile_of(&phase.weight(m)?, t)
    }

    /// `ψ = u2 - u1` at `t`.
    pub fn psi(&self, t: &S) -> Result<Profile<S>> {
        let phase = self.phase_at(t)?;
        let kappa = phase.kappa().ok_or(Error::MissingFieldData("solution state"))?;
        phase.profile_of(&kappa, t)
    }

    /// Classified-jump table sampled at each phase midpoint.
    pub fn jump_csv(&self, m: &S) -> Result<String> {
        let mut out = String::from("t,x,kind,partition,lambda,a_minus,a_plus,b_jump,w_minus,w_plus\n");
        for phase in &self.phases {
            let t = phase.midpoint();
            let w = phase.weight(m).ok();
            for (jump, x) in phase.jumps().into_iter().zip(phase.positions(&t)) {
                let (wm, wp) = match &w {
                    Some(w) => (w[jump.index].to_f64().to_string(), w[jump.index + 1].to_f64().to_string()),
                    None => (String::new(), String::new()),
                };
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{},{},{},{},{}",
                    t.to_f64(),
                    x.to_f64(),
                    jump.kind.as_str(),
                    jump.partition.map_or("", Partition::as_str),
                    jump.lambda.to_f64(),
                    jump.a_minus.to_f64(),
                    jump.a_plus.to_f64(),
                    jump.b_jump.to_f64(),
                    wm,
                    wp
                );
            }
        }
        Ok(out)
    }
}

fn run_lines<S: Scalar>(run: &FrontTrackingRun<S>, t: &S, partition: Partition) -> Result<Vec<JumpLine<S>>> {
    Ok(run
        .phase_at(t)?
        .fronts
        .iter()
        .map(|&id| {
            let f = run.front(id);
            JumpLine {
                x_ref: f.x_birth.clone(),
                t_ref: f.t_birth.clone(),
                speed: f.speed.clone(),
                origin: JumpOrigin::Front {
                    partition,
                    front: id,
                    kind: f.kind,
                },
                b_jump: f.strength(),
            }
        })
        .collect())
}

fn same_line<S: Scalar>(a: &JumpLine<S>, b: &JumpLine<S>, t: &S) -> bool {
    let dv = a.speed.clone() - b.speed.clone();
    let (xa, xb) = (a.position(t), b.position(t));
    let scale = 1.0 + xa.to_f64().abs();
    dv.negligible(MEET_TOL) && (xa - xb).negligible(MEET_TOL * scale)
}

fn merge_phase<S: Scalar>(
    flux: &FluxModel,
    u1_left: &S,
    u2_left: &S,
    lines1: &[JumpLine<S>],
    lines2: &[JumpLine<S>],
    ta: &S,
    tb: &S,
) -> Result<FieldPhase<S>> {
    let mid = (ta.clone() + tb.clone()) * S::half();
    let mut lines = Vec::with_capacity(lines1.len() + lines2.len());
    let (mut i, mut j) = (0, 0);
    while i < lines1.len() || j < lines2.len() {
        let take1 = match (lines1.get(i), lines2.get(j)) {
            (Some(a), Some(b)) => {
                if same_line(a, b, &mid) {
                    return Err(Error::CoincidentFronts {
                        x: a.position(&mid).to_f64(),
                        t: mid.to_f64(),
                    });
                }
                a.position(&mid) <= b.position(&mid)
            }
            (Some(_), None) => true,
            _ => false,
        };
        if take1 {
            lines.push(lines1[i].clone());
            i += 1;
        } else {
            lines.push(lines2[j].clone());
            j += 1;
        }
    }

    let (mut u1, mut u2) = (u1_left.clone(), u2_left.clone());
    let mut s1 = vec![u1.clone()];
    let mut s2 = vec![u2.clone()];
    for line in &lines {
        match line.partition() {
            Some(Partition::I) => u1 = u1 + line.b_jump.clone(),
            _ => u2 = u2 + line.b_jump.clone(),
        }
        s1.push(u1.clone());
        s2.push(u2.clone());
    }
    let a = s1.iter().zip(&s2).map(|(x, y)| secant_speed(flux, x, y)).collect();
    Ok(FieldPhase {
        start: ta.clone(),
        end: tb.clone(),
        lines,
        a,
        states: Some((s1, s2)),
    })
}

/// Whether a jump satisfies the partition sign table
/// `sgn(a± - λ) = ±sgn κ∓` (`+` for `J_I`, `-` for `J_II`). A sign snapped to
/// zero is accepted against an opposite value smaller than `1e-6`.
pub fn sign_table_holds<S: Scalar>(jump: &PhaseJump<S>) -> bool {
    let (Some(partition), Some(km), Some(kp)) = (jump.partition, &jump.kappa_minus, &jump.kappa_plus) else {
        return true;
    };
    let flip: i8 = match partition {
        Partition::I => 1,
        Partition::II => -1,
    };
    let dm = jump.a_minus.clone() - jump.lambda.clone();
    let dp = jump.a_plus.clone() - jump.lambda.clone();
    agree(&dm, &(S::from_i64(flip as i64) * kp.clone())) && agree(&dp, &(S::from_i64(flip as i64) * km.clone()))
}

fn agree<S: Scalar>(x: &S, y: &S) -> bool {
    let sx = scalar::snapped_sign(x, CLASSIFY_TOL);
    let sy = scalar::snapped_sign(y, 0.0);
    if sx == sy {
        return true;
    }
    if S::EXACT {
        return false;
    }
    (sx == 0 && y.to_f64().abs() < 1e-6) || (sy == 0 && x.to_f64().abs() < 1e-6)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn burgers() -> FluxModel {
        FluxModel::burgers((-4.0, 4.0))
    }

    fn field(u1: Profile<f64>, u2: Profile<f64>, t: f64) -> CoefficientField<f64> {
        let r1 = FrontTrackingRun::track(burgers(), u1, 0.25, t).unwrap();
        let r2 = FrontTrackingRun::track(burgers(), u2, 0.25, t).unwrap();
        CoefficientField::from_runs(&r1, &r2, &0.0, &t).unwrap()
    }

    fn step(l: f64, r: f64) -> Profile<f64> {
        Profile::from_steps(l, [(0.0, r)]).unwrap()
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify(&0.5, &-0.5, &0.0, CLASSIFY_TOL), JumpKind::Lax);
        assert_eq!(classify(&2.5, &1.5, &1.0, CLASSIFY_TOL), JumpKind::SlowUndercompressive);
        assert_eq!(classify(&-0.5, &0.5, &0.0, CLASSIFY_TOL), JumpKind::RarefactionShock);
        assert_eq!(classify(&-0.5, &-1.5, &0.0, CLASSIFY_TOL), JumpKind::FastUndercompressive);
        // boundary ties go undercompressive
        assert_eq!(classify(&1.0, &0.5, &1.0, CLASSIFY_TOL), JumpKind::FastUndercompressive);
        assert_eq!(classify(&(1.0 + 1e-12), &2.0, &1.0, CLASSIFY_TOL), JumpKind::SlowUndercompressive);
    }

    #[test]
    fn lax_example() {
        let f = field(step(1.0, -1.0), Profile::constant(0.0), 1.0);
        let (a, jumps) = f.build_coefficient(&0.5).unwrap();
        assert_eq!(a.values(), &[0.5, -0.5]);
        let j = &jumps[0].jump;
        assert_eq!(j.kind, JumpKind::Lax);
        assert_eq!(j.partition, Some(Partition::I));
        assert_eq!(j.b_jump, -2.0);
        assert!(sign_table_holds(j));
    }

    #[test]
    fn slow_undercompressive_example_and_weight() {
        let f = field(step(2.0, 0.0), Profile::constant(3.0), 1.0);
        let (_, jumps) = f.build_coefficient(&0.5).unwrap();
        let j = &jumps[0].jump;
        assert_eq!((j.a_minus, j.a_plus, j.lambda), (2.5, 1.5, 1.0));
        assert_eq!(j.kind, JumpKind::SlowUndercompressive);
        assert_eq!((j.kappa_minus, j.kappa_plus), (Some(1.0), Some(3.0)));
        assert!(sign_table_holds(j));

        let w = f.build_weight(&1.0, &0.5).unwrap();
        assert_eq!(w.values(), &[3.0, 1.0]);
    }

    #[test]
    fn equal_constants_give_flat_field() {
        let f = field(Profile::constant(0.7), Profile::constant(0.7), 1.0);
        let (a, jumps) = f.build_coefficient(&0.5).unwrap();
        assert!(jumps.is_empty());
        assert_eq!(a, Profile::constant(0.7));
        assert_eq!(f.build_weight(&2.0, &0.5).unwrap(), Profile::constant(2.0));
    }

    #[test]
    fn crossing_fronts_split_phases() {
        // shock (2|0) at x = -1 moves at 1 and crosses the standing shock (1|-1) at 0 at t = 1
        let u1 = Profile::from_steps(2.0, [(-1.0, 0.0)]).unwrap();
        let u2 = Profile::from_steps(1.0, [(0.0, -1.0)]).unwrap();
        let f = field(u1, u2, 2.0);
        assert_eq!(f.phases().len(), 2);
        assert_eq!(f.phases()[0].end, 1.0);
        for phase in f.phases() {
            for jump in phase.jumps() {
                assert!(sign_table_holds(&jump));
            }
        }
    }

    #[test]
    fn coincident_fronts_rejected() {
        let r1 = FrontTrackingRun::track(burgers(), step(1.0, 0.0), 0.25, 1.0).unwrap();
        let r2 = FrontTrackingRun::track(burgers(), step(1.0, 0.0), 0.25, 1.0).unwrap();
        let err = CoefficientField::from_runs(&r1, &r2, &0.0, &1.0).unwrap_err();
        assert!(matches!(err, Error::CoincidentFronts { .. }));
        assert!(err.to_string().contains("1e-9"));
    }

    #[test]
    fn weight_bounds_rational() {
        let r = |n, d| Rational::from_ratio(n, d);
        let u1 = Profile::from_steps(r(0, 1), vec![(r(-1, 1), r(1, 1)), (r(1, 2), r(-1, 1)), (r(2, 1), r(0, 1))]).unwrap();
        let u2 = Profile::from_steps(r(0, 1), vec![(r(-3, 4), r(3, 2)), (r(1, 1), r(0, 1))]).unwrap();
        let t = r(2, 1);
        let r1 = FrontTrackingRun::track(burgers(), u1, r(1, 4), t.clone()).unwrap();
        let r2 = FrontTrackingRun::track(burgers(), u2, r(1, 4), t.clone()).unwrap();
        let f = CoefficientField::from_runs(&r1, &r2, &r(0, 1), &t).unwrap();
        let m = r(1, 1);
        for phase in f.phases() {
            let w = phase.weight(&m).unwrap();
            let top = m.clone() + phase.tv_b();
            assert!(w.iter().all(|v| *v >= m && *v <= top));
            for jump in phase.jumps() {
                assert!(sign_table_holds(&jump));
                let x = (jump.a_minus.clone() - jump.lambda.clone()).abs()
                    * jump.kappa_minus.clone().unwrap().abs();
                if x == r(0, 1) {
                    continue;
                }
                let (wm, wp) = (&w[jump.index], &w[jump.index + 1]);
                let b = jump.b_jump.abs();
                let tv = phase.tv_b();
                let two_m = r(2, 1) * m.clone();
                match jump.kind {
                    JumpKind::Lax => assert_eq!(wm.clone() + wp.clone(), two_m + tv - b),
                    JumpKind::RarefactionShock => assert_eq!(wm.clone() + wp.clone(), two_m + tv + b),
                    JumpKind::SlowUndercompressive => assert_eq!(wp.clone() - wm.clone(), -b),
                    JumpKind::FastUndercompressive => assert_eq!(wm.clone() - wp.clone(), -b),
                }
            }
        }
    }
}
