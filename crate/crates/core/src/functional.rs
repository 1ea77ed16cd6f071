//! Term-by-term evaluation of the L1 and weighted L1 balance laws for
//! `ψ = u2 - u1` transported by the averaged coefficient.
//!
//! Everything is piecewise constant in time between phase boundaries, so each
//! integrated term is an exact sum of `rate × duration`. Norms are measured on
//! a window that contains every jump of the slab, with the flux through the
//! window edges accounted for, which makes the bookkeeping work for data that
//! is not compactly supported as well.

use serde::Serialize;

use crate::coupling::{sign_table_holds, CoefficientField, FieldPhase, JumpKind, Partition};
use crate::error::{Error, Result};
use crate::fronttrack::FrontTrackingRun;
use crate::profile::mu_psi_atom;
use crate::scalar::{self, Scalar};

/// Relative agreement required of the two one-sided jump relations.
pub const TRACE_TOL: f64 = 1e-10;

fn within<S: Scalar>(x: &S, tol: f64) -> bool {
    if S::EXACT {
        x.is_zero()
    } else {
        x.to_f64().abs() <= tol
    }
}

fn at_most<S: Scalar>(x: &S, tol: f64) -> bool {
    if S::EXACT {
        *x <= S::zero()
    } else {
        x.to_f64() <= tol
    }
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct IntervalRecord {
    pub start: f64,
    pub end: f64,
    /// Measured `d/dt` of the norm from the jump traces.
    pub norm_rate: f64,
    pub lax_rate: f64,
    pub slow_fast_rate: f64,
    pub rs_rate: f64,
    pub residual: f64,
    pub window_residual: f64,
    pub tv_b: f64,
    pub lax_jumps: usize,
    pub undercompressive_jumps: usize,
    pub rs_jumps: usize,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct EventRecord {
    pub time: f64,
    pub norm_jump: f64,
}

/// Ledger of one identity over `[s, t]`.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct FunctionalReport {
    pub check: String,
    pub s: f64,
    pub t: f64,
    pub m: Option<f64>,
    pub exact: bool,
    pub tolerance: f64,
    pub norm_start: Option<f64>,
    pub norm_end: Option<f64>,
    /// `∫ d/dt‖ψ‖ + Σ event jumps`, equal to `norm_end - norm_start` when both exist.
    pub net_change: f64,
    pub lax_term: f64,
    pub slow_fast_term: f64,
    /// Integrated rarefaction-shock term (both factors).
    pub rs_term: f64,
    /// Part of `rs_term` carried by the `|b|` factor.
    pub rs_strength_term: f64,
    pub residual: f64,
    pub max_event_jump: f64,
    pub trace_mismatches: usize,
    pub combination_failures: usize,
    pub sign_table_failures: usize,
    pub sign_lemma_failures: usize,
    /// Intervals or events where the norm grew beyond tolerance.
    pub increases: usize,
    pub rs_jump_count: usize,
    pub passed: bool,
    pub intervals: Vec<IntervalRecord>,
    pub events: Vec<EventRecord>,
}

/// Exact per-slab quantities, kept in the working scalar.
#[derive(Debug, Clone)]
struct SlabEval<S> {
    start: S,
    end: S,
    direct: S,
    lax: S,
    uc: S,
    rs_main: S,
    rs_strength: S,
    window_residual: S,
    tv_b: S,
    tv_a: S,
    tv_psi: S,
    sup_rs_b: S,
    sup_rs_da: S,
    counts: [usize; 3],
    trace_mismatches: usize,
    combination_failures: usize,
    sign_table_failures: usize,
    sign_lemma_failures: usize,
    lax51: S,
    prod1: S,
    prod2: S,
    rs_defect: S,
}

struct Slab<'a, S> {
    phase: &'a FieldPhase<S>,
    start: S,
    end: S,
}

fn slabs<'a, S: Scalar>(field: &'a CoefficientField<S>, s: &S, t: &S) -> Result<Vec<Slab<'a, S>>> {
    if s > t || s < field.start() || t > field.end() {
        return Err(Error::OutsideHorizon {
            t: t.to_f64(),
            start: field.start().to_f64(),
            end: field.end().to_f64(),
        });
    }
    Ok(field
        .phases()
        .iter()
        .filter(|p| p.end > *s && p.start < *t)
        .map(|p| Slab {
            phase: p,
            start: scalar::max(&p.start, s),
            end: scalar::min(&p.end, t),
        })
        .collect())
}

/// Positions at `t`, clamped nondecreasing.
fn clamped_positions<S: Scalar>(phase: &FieldPhase<S>, t: &S) -> Vec<S> {
    let mut xs = phase.positions(t);
    for i in 1..xs.len() {
        if xs[i] < xs[i - 1] {
            xs[i] = xs[i - 1].clone();
        }
    }
    xs
}

fn window_integral<S: Scalar>(xs: &[S], values: &[S], lo: &S, hi: &S) -> S {
    let mut total = S::zero();
    let mut left = lo.clone();
    for (k, v) in values.iter().enumerate() {
        let mut right = xs.get(k).cloned().unwrap_or_else(|| hi.clone());
        right = scalar::min(&scalar::max(&right, &left), hi);
        total = total + v.clone() * (right.clone() - left.clone());
        left = right;
    }
    total
}

fn window_of<S: Scalar>(lists: &[&[S]]) -> (S, S) {
    let mut lo: Option<S> = None;
    let mut hi: Option<S> = None;
    for xs in lists {
        if let (Some(a), Some(b)) = (xs.first(), xs.last()) {
            lo = Some(lo.map_or(a.clone(), |l| scalar::min(&l, a)));
            hi = Some(hi.map_or(b.clone(), |h| scalar::max(&h, b)));
        }
    }
    let lo = lo.unwrap_or_else(S::zero) - S::one();
    let hi = hi.unwrap_or_else(S::zero) + S::one();
    (lo, hi)
}

/// `|ψ| w` on each piece (`w ≡ 1` without `m`).
fn density<S: Scalar>(phase: &FieldPhase<S>, m: Option<&S>) -> Result<(Vec<S>, Vec<S>, Vec<S>)> {
    let kappa = phase.kappa().ok_or(Error::MissingFieldData("solution state"))?;
    let w = match m {
        Some(m) => phase.weight(m)?,
        None => vec![S::one(); kappa.len()],
    };
    let g = kappa.iter().zip(&w).map(|(k, w)| k.abs() * w.clone()).collect();
    Ok((kappa, w, g))
}

fn evaluate<S: Scalar>(slab: &Slab<'_, S>, m: Option<&S>) -> Result<SlabEval<S>> {
    let phase = slab.phase;
    let (psi, w, g) = density(phase, m)?;
    let two = S::from_i64(2);
    let tv_b = phase.tv_b();
    let tv_a = phase.tv_a();
    let base = m.map(|m| two.clone() * m.clone());

    let mut e = SlabEval {
        start: slab.start.clone(),
        end: slab.end.clone(),
        direct: S::zero(),
        lax: S::zero(),
        uc: S::zero(),
        rs_main: S::zero(),
        rs_strength: S::zero(),
        window_residual: S::zero(),
        tv_b: tv_b.clone(),
        tv_a: tv_a.clone(),
        tv_psi: psi
            .windows(2)
            .fold(S::zero(), |acc, p| acc + (p[1].clone() - p[0].clone()).abs()),
        sup_rs_b: S::zero(),
        sup_rs_da: S::zero(),
        counts: [0; 3],
        trace_mismatches: 0,
        combination_failures: 0,
        sign_table_failures: 0,
        sign_lemma_failures: 0,
        lax51: S::zero(),
        prod1: S::zero(),
        prod2: S::zero(),
        rs_defect: S::zero(),
    };

    for jump in phase.jumps() {
        let i = jump.index;
        let lam = &jump.lambda;
        let dm = jump.a_minus.clone() - lam.clone();
        let dp = jump.a_plus.clone() - lam.clone();
        let (pm, pp) = (&psi[i], &psi[i + 1]);
        let (wm, wp) = (&w[i], &w[i + 1]);
        let b = jump.b_jump.abs();

        e.direct = e.direct + (-dm.clone()) * pm.abs() * wm.clone() + dp.clone() * pp.abs() * wp.clone();

        let left_flux = dm.clone() * pm.clone();
        let right_flux = dp.clone() * pp.clone();
        let scale = 1.0 + left_flux.to_f64().abs().max(right_flux.to_f64().abs());
        if !within(&(left_flux.clone() - right_flux.clone()), TRACE_TOL * scale) {
            e.trace_mismatches += 1;
        }
        if !sign_table_holds(&jump) {
            e.sign_table_failures += 1;
        }
        let x = dm.abs() * pm.abs();
        let x_live = !within(&x, 1e-12);

        match jump.kind {
            JumpKind::Lax | JumpKind::RarefactionShock => {
                if pm.clone() * pp.clone() > S::zero() && !within(pm, 1e-12) && !within(pp, 1e-12) {
                    e.sign_lemma_failures += 1;
                }
            }
            _ => {
                let sl = scalar::snapped_sign(&left_flux, 1e-12);
                let sr = scalar::snapped_sign(&right_flux, 1e-12);
                if sl * sr < 0 {
                    e.sign_lemma_failures += 1;
                }
            }
        }

        let (lax_f, uc_f, rs_main_f, rs_b_f) = match &base {
            Some(two_m) => (
                two_m.clone() + tv_b.clone() - b.clone(),
                b.clone(),
                two_m.clone() + tv_b.clone(),
                b.clone(),
            ),
            None => (two.clone(), S::zero(), two.clone(), S::zero()),
        };
        match jump.kind {
            JumpKind::Lax => {
                e.counts[0] += 1;
                e.lax = e.lax + lax_f.clone() * x.clone();
            }
            JumpKind::SlowUndercompressive | JumpKind::FastUndercompressive => {
                e.counts[1] += 1;
                e.uc = e.uc + uc_f * x.clone();
            }
            JumpKind::RarefactionShock => {
                e.counts[2] += 1;
                e.rs_main = e.rs_main + rs_main_f * x.clone();
                e.rs_strength = e.rs_strength + rs_b_f * x.clone();
                e.sup_rs_b = scalar::max(&e.sup_rs_b, &b);
                e.sup_rs_da = scalar::max(&e.sup_rs_da, &(jump.a_plus.clone() - jump.a_minus.clone()).abs());
            }
        }

        if let Some(two_m) = &base {
            // closed forms of the weight trace combinations
            if x_live {
                let (lhs, rhs) = match jump.kind {
                    JumpKind::Lax => (wm.clone() + wp.clone(), two_m.clone() + tv_b.clone() - b.clone()),
                    JumpKind::RarefactionShock => (wm.clone() + wp.clone(), two_m.clone() + tv_b.clone() + b.clone()),
                    JumpKind::SlowUndercompressive => (wp.clone() - wm.clone(), -b.clone()),
                    JumpKind::FastUndercompressive => (wm.clone() - wp.clone(), -b.clone()),
                };
                let scale = 1.0 + rhs.to_f64().abs();
                if !within(&(lhs - rhs), TRACE_TOL * scale) {
                    e.combination_failures += 1;
                }
            }
            if jump.kind == JumpKind::Lax {
                e.lax51 = e.lax51 + (two_m.clone() + tv_a.clone()) * x.clone();
            }
            if jump.kind == JumpKind::RarefactionShock {
                e.rs_defect = e.rs_defect + (two_m.clone() + tv_b.clone()) * x.clone();
            }
            match jump.partition {
                Some(Partition::I) => e.prod1 = e.prod1 + mu_psi_atom(&jump.a_minus, lam, pm, &b),
                Some(Partition::II) => e.prod2 = e.prod2 + mu_psi_atom(lam, &jump.a_minus, pm, &b),
                None => {}
            }
        }
    }

    // window bookkeeping: N(end) - N(start) - boundary flux = direct rate × duration
    let xa = clamped_positions(phase, &slab.start);
    let xb = clamped_positions(phase, &slab.end);
    let (lo, hi) = window_of(&[&xa, &xb]);
    let na = window_integral(&xa, &g, &lo, &hi);
    let nb = window_integral(&xb, &g, &lo, &hi);
    let last = phase.a.len() - 1;
    let boundary = phase.a[0].clone() * g[0].clone() - phase.a[last].clone() * g[last].clone();
    let dt = slab.end.clone() - slab.start.clone();
    e.window_residual = (nb - na - boundary * dt.clone() - e.direct.clone() * dt).abs();
    Ok(e)
}

/// Jump of the (windowed) norm across the boundary between two slabs.
fn event_jump<S: Scalar>(before: &Slab<'_, S>, after: &Slab<'_, S>, m: Option<&S>) -> Result<S> {
    let tau = &after.start;
    let xa = clamped_positions(before.phase, tau);
    let xb = clamped_positions(after.phase, tau);
    let (lo, hi) = window_of(&[&xa, &xb]);
    let (_, _, ga) = density(before.phase, m)?;
    let (_, _, gb) = density(after.phase, m)?;
    Ok(window_integral(&xb, &gb, &lo, &hi) - window_integral(&xa, &ga, &lo, &hi))
}

fn global_norm<S: Scalar>(field: &CoefficientField<S>, t: &S, m: Option<&S>) -> Result<Option<S>> {
    let psi = field.psi(t)?;
    if !psi.is_compactly_supported() {
        return Ok(None);
    }
    Ok(Some(match m {
        Some(m) => psi.weighted_l1_norm(&field.build_weight(m, t)?)?,
        None => psi.l1_norm()?,
    }))
}

/// Everything the reports are assembled from.
struct Ledger<S> {
    evals: Vec<SlabEval<S>>,
    events: Vec<(S, S)>,
    norm_start: Option<S>,
    norm_end: Option<S>,
    scale: f64,
}

fn ledger<S: Scalar>(field: &CoefficientField<S>, m: Option<&S>, s: &S, t: &S) -> Result<Ledger<S>> {
    let slabs = slabs(field, s, t)?;
    let evals = slabs.iter().map(|sl| evaluate(sl, m)).collect::<Result<Vec<_>>>()?;
    let mut events = Vec::new();
    for pair in slabs.windows(2) {
        events.push((pair[1].start.clone(), event_jump(&pair[0], &pair[1], m)?));
    }
    let norm_start = global_norm(field, s, m)?;
    let norm_end = global_norm(field, t, m)?;
    let scale = match &norm_start {
        Some(n) => n.to_f64(),
        None => match slabs.first() {
            Some(sl) => {
                let xs = clamped_positions(sl.phase, &sl.start);
                let (lo, hi) = window_of(&[&xs]);
                let (_, _, g) = density(sl.phase, m)?;
                window_integral(&xs, &g, &lo, &hi).to_f64()
            }
            None => 0.0,
        },
    };
    Ok(Ledger {
        evals,
        events,
        norm_start,
        norm_end,
        scale,
    })
}

impl<S: Scalar> SlabEval<S> {
    fn dt(&self) -> S {
        self.end.clone() - self.start.clone()
    }

    fn predicted(&self) -> S {
        -self.lax.clone() - self.uc.clone() + self.rs_main.clone() + self.rs_strength.clone()
    }
}

fn sum<S: Scalar>(evals: &[SlabEval<S>], f: impl Fn(&SlabEval<S>) -> S) -> S {
    evals.iter().fold(S::zero(), |acc, e| acc + f(e) * e.dt())
}

fn identity_report<S: Scalar>(
    check: &str,
    field: &CoefficientField<S>,
    m: Option<&S>,
    s: &S,
    t: &S,
    tol: f64,
) -> Result<FunctionalReport> {
    let led = ledger(field, m, s, t)?;
    let abs_tol = tol * (1.0 + led.scale);
    let mut passed = true;
    let mut increases = 0;
    let mut residual_max = 0.0_f64;
    let mut intervals = Vec::with_capacity(led.evals.len());

    for e in &led.evals {
        let residual = ((e.direct.clone() - e.predicted()) * e.dt()).abs();
        passed &= within(&residual, abs_tol) && within(&e.window_residual, abs_tol);
        if !at_most(&(e.direct.clone() * e.dt()), abs_tol) {
            increases += 1;
        }
        residual_max = residual_max.max(residual.to_f64());
        intervals.push(IntervalRecord {
            start: e.start.to_f64(),
            end: e.end.to_f64(),
            norm_rate: e.direct.to_f64(),
            lax_rate: e.lax.to_f64(),
            slow_fast_rate: e.uc.to_f64(),
            rs_rate: (e.rs_main.clone() + e.rs_strength.clone()).to_f64(),
            residual: residual.to_f64(),
            window_residual: e.window_residual.to_f64(),
            tv_b: e.tv_b.to_f64(),
            lax_jumps: e.counts[0],
            undercompressive_jumps: e.counts[1],
            rs_jumps: e.counts[2],
        });
    }

    let mut max_event_jump = 0.0_f64;
    let mut events = Vec::with_capacity(led.events.len());
    for (time, jump) in &led.events {
        let ok = if m.is_some() {
            at_most(jump, abs_tol)
        } else {
            within(jump, abs_tol)
        };
        passed &= ok;
        if !at_most(jump, abs_tol) {
            increases += 1;
        }
        max_event_jump = max_event_jump.max(jump.to_f64());
        events.push(EventRecord {
            time: time.to_f64(),
            norm_jump: jump.to_f64(),
        });
    }

    let net = sum(&led.evals, |e| e.direct.clone())
        + led.events.iter().fold(S::zero(), |acc, (_, j)| acc + j.clone());
    if let (Some(a), Some(b)) = (&led.norm_start, &led.norm_end) {
        passed &= within(&(b.clone() - a.clone() - net.clone()), abs_tol);
    }
    let trace_mismatches = led.evals.iter().map(|e| e.trace_mismatches).sum();
    let combination_failures = led.evals.iter().map(|e| e.combination_failures).sum();
    let sign_table_failures = led.evals.iter().map(|e| e.sign_table_failures).sum();
    let sign_lemma_failures = led.evals.iter().map(|e| e.sign_lemma_failures).sum();
    passed &= trace_mismatches == 0 && combination_failures == 0 && sign_table_failures == 0 && sign_lemma_failures == 0;

    Ok(FunctionalReport {
        check: check.to_string(),
        s: s.to_f64(),
        t: t.to_f64(),
        m: m.map(Scalar::to_f64),
        exact: S::EXACT,
        tolerance: if S::EXACT { 0.0 } else { abs_tol },
        norm_start: led.norm_start.as_ref().map(Scalar::to_f64),
        norm_end: led.norm_end.as_ref().map(Scalar::to_f64),
        net_change: net.to_f64(),
        lax_term: sum(&led.evals, |e| e.lax.clone()).to_f64(),
        slow_fast_term: sum(&led.evals, |e| e.uc.clone()).to_f64(),
        rs_term: sum(&led.evals, |e| e.rs_main.clone() + e.rs_strength.clone()).to_f64(),
        rs_strength_term: sum(&led.evals, |e| e.rs_strength.clone()).to_f64(),
        residual: residual_max,
        max_event_jump,
        trace_mismatches,
        combination_failures,
        sign_table_failures,
        sign_lemma_failures,
        increases,
        rs_jump_count: led.evals.iter().map(|e| e.counts[2]).sum(),
        passed,
        intervals,
        events,
    })
}

/// Plain L1 balance: `d/dt‖ψ‖₁ = -Σ_Lax 2|a₋-λ||ψ₋| + Σ_RS 2|a₋-λ||ψ₋|`.
pub fn l1_identity_report<S: Scalar>(field: &CoefficientField<S>, s: &S, t: &S, tol: f64) -> Result<FunctionalReport> {
    identity_report("l1_identity", field, None, s, t, tol)
}

/// Weighted balance with the weight of parameter `m`.
pub fn weighted_identity_report<S: Scalar>(
    field: &CoefficientField<S>,
    m: &S,
    s: &S,
    t: &S,
    tol: f64,
) -> Result<FunctionalReport> {
    if *m < S::zero() {
        return Err(Error::config("m", format!("weight parameter must be nonnegative, got {m}")));
    }
    identity_report("weighted_identity", field, Some(m), s, t, tol)
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct CorollaryReport {
    pub s: f64,
    pub t: f64,
    pub m: f64,
    pub weighted_change: f64,
    pub weighted_bound: f64,
    pub weighted_slack: f64,
    pub l1_change: f64,
    pub l1_bound: f64,
    pub l1_slack: f64,
    pub sup_rs_strength: f64,
    /// `sup |a₊ - a₋|` over rarefaction-shock jumps.
    pub sup_rs_speed_jump: f64,
    pub integrated_tv_psi: f64,
    pub tv_b: f64,
    pub passed: bool,
}

/// `‖ψ(t)‖_w ≤ ‖ψ(s)‖_w + (2m + TV b) sup_RS|b| ∫TV ψ` and its `m → ∞` form.
pub fn corollary_bound_report<S: Scalar>(
    field: &CoefficientField<S>,
    m: &S,
    s: &S,
    t: &S,
    tol: f64,
) -> Result<CorollaryReport> {
    let weighted = ledger(field, Some(m), s, t)?;
    let plain = ledger(field, None, s, t)?;
    let net = |led: &Ledger<S>| {
        sum(&led.evals, |e| e.direct.clone()) + led.events.iter().fold(S::zero(), |acc, (_, j)| acc + j.clone())
    };
    let sup_b = weighted
        .evals
        .iter()
        .fold(S::zero(), |acc, e| scalar::max(&acc, &e.sup_rs_b));
    let sup_da = weighted
        .evals
        .iter()
        .fold(S::zero(), |acc, e| scalar::max(&acc, &e.sup_rs_da));
    let tv_b = weighted
        .evals
        .iter()
        .fold(S::zero(), |acc, e| scalar::max(&acc, &e.tv_b));
    let int_tv_psi = sum(&weighted.evals, |e| e.tv_psi.clone());
    let two = S::from_i64(2);
    let wb = (two.clone() * m.clone() + tv_b.clone()) * sup_b.clone() * int_tv_psi.clone();
    let lb = two * sup_b.clone() * int_tv_psi.clone();
    let (wc, lc) = (net(&weighted), net(&plain));
    let w_slack = wb.clone() - wc.clone();
    let l_slack = lb.clone() - lc.clone();
    let passed = at_most(&(-w_slack.clone()), tol * (1.0 + weighted.scale))
        && at_most(&(-l_slack.clone()), tol * (1.0 + plain.scale));
    Ok(CorollaryReport {
        s: s.to_f64(),
        t: t.to_f64(),
        m: m.to_f64(),
        weighted_change: wc.to_f64(),
        weighted_bound: wb.to_f64(),
        weighted_slack: w_slack.to_f64(),
        l1_change: lc.to_f64(),
        l1_bound: lb.to_f64(),
        l1_slack: l_slack.to_f64(),
        sup_rs_strength: sup_b.to_f64(),
        sup_rs_speed_jump: sup_da.to_f64(),
        integrated_tv_psi: int_tv_psi.to_f64(),
        tv_b: tv_b.to_f64(),
        passed,
    })
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct Theorem31Report {
    pub s: f64,
    pub t: f64,
    pub h: f64,
    pub l1_change: f64,
    pub lax_term: f64,
    /// Integrated rarefaction-shock contribution to the L1 balance.
    pub rs_contribution: f64,
    /// `2 h (t - s) sup|f''| (TV u1(0) + TV u2(0))`.
    pub bound: f64,
    /// `rs_contribution / bound`.
    pub ratio: f64,
    pub passed: bool,
}

/// `‖ψ(t)‖₁ + ∫Σ_Lax 2(a₋-λ)|ψ₋| ≤ ‖ψ(s)‖₁ + 2h(t-s)‖f''‖∞ ΣTV(u(0))`.
pub fn theorem31_bound_report<S: Scalar>(
    run1: &FrontTrackingRun<S>,
    run2: &FrontTrackingRun<S>,
    s: &S,
    t: &S,
    tol: f64,
) -> Result<Theorem31Report> {
    let field = CoefficientField::from_runs(run1, run2, s, t)?;
    theorem31_on_field(&field, run1, run2, s, t, tol)
}

pub fn theorem31_on_field<S: Scalar>(
    field: &CoefficientField<S>,
    run1: &FrontTrackingRun<S>,
    run2: &FrontTrackingRun<S>,
    s: &S,
    t: &S,
    tol: f64,
) -> Result<Theorem31Report> {
    let led = ledger(field, None, s, t)?;
    let change = sum(&led.evals, |e| e.direct.clone())
        + led.events.iter().fold(S::zero(), |acc, (_, j)| acc + j.clone());
    let lax = sum(&led.evals, |e| e.lax.clone());
    let rs = sum(&led.evals, |e| e.rs_main.clone());
    let f2 = run1.flux().sup_second_derivative();
    let tv0 = run1.initial().total_variation(None).to_f64() + run2.initial().total_variation(None).to_f64();
    let bound = 2.0 * run1.h().to_f64() * (t.to_f64() - s.to_f64()) * f2 * tv0;
    let abs_tol = tol * (1.0 + led.scale);
    let lhs = (change + lax.clone()).to_f64();
    let passed = lhs <= bound + abs_tol && rs.to_f64() <= bound + abs_tol;
    Ok(Theorem31Report {
        s: s.to_f64(),
        t: t.to_f64(),
        h: run1.h().to_f64(),
        l1_change: lhs - lax.to_f64(),
        lax_term: lax.to_f64(),
        rs_contribution: rs.to_f64(),
        bound,
        ratio: if bound > 0.0 { rs.to_f64() / bound } else { 0.0 },
        passed,
    })
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct LimitRow {
    pub h: f64,
    pub norm_start: Option<f64>,
    pub norm_end: Option<f64>,
    pub net_change: f64,
    pub lax_term: f64,
    pub slow_fast_term: f64,
    pub rs_term: f64,
    /// `net_change + lax + slow_fast <= rs`.
    pub balance_holds: bool,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct LimitStudy {
    pub m: f64,
    pub rows: Vec<LimitRow>,
    /// Each RS term at most twice the previous one.
    pub rs_controlled: bool,
    pub rs_decreasing: bool,
    pub passed: bool,
}

impl LimitStudy {
    pub fn csv(&self) -> String {
        let mut out = String::from("h,norm_start,norm_end,net_change,lax_term,slow_fast_term,rs_term\n");
        let opt = |v: Option<f64>| v.map_or(String::new(), |x| x.to_string());
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                r.h,
                opt(r.norm_start),
                opt(r.norm_end),
                r.net_change,
                r.lax_term,
                r.slow_fast_term,
                r.rs_term
            ));
        }
        out
    }
}

/// Runs the weighted balance for each `h` (in decreasing order) using runs
/// produced by `build`.
pub fn limit_study<S: Scalar>(
    build: impl Fn(&S) -> Result<(FrontTrackingRun<S>, FrontTrackingRun<S>)>,
    h_list: &[S],
    m: &S,
    s: &S,
    t: &S,
    tol: f64,
) -> Result<LimitStudy> {
    if h_list.windows(2).any(|w| w[0] <= w[1]) {
        return Err(Error::config("h", "h list must be strictly decreasing"));
    }
    let mut rows = Vec::with_capacity(h_list.len());
    for h in h_list {
        let (r1, r2) = build(h)?;
        let field = CoefficientField::from_runs(&r1, &r2, s, t)?;
        let rep = weighted_identity_report(&field, m, s, t, tol)?;
        let slack = rep.tolerance.max(tol * (1.0 + rep.norm_start.unwrap_or(0.0)));
        rows.push(LimitRow {
            h: h.to_f64(),
            norm_start: rep.norm_start,
            norm_end: rep.norm_end,
            net_change: rep.net_change,
            lax_term: rep.lax_term,
            slow_fast_term: rep.slow_fast_term,
            rs_term: rep.rs_term,
            balance_holds: rep.passed && rep.net_change + rep.lax_term + rep.slow_fast_term <= rep.rs_term + slack,
        });
    }
    let rs_controlled = rows.windows(2).all(|w| w[1].rs_term <= 2.0 * w[0].rs_term + tol);
    let rs_decreasing = rows.windows(2).all(|w| w[1].rs_term <= w[0].rs_term + tol);
    let passed = rs_controlled && rows.iter().all(|r| r.balance_holds);
    Ok(LimitStudy {
        m: m.to_f64(),
        rows,
        rs_controlled,
        rs_decreasing,
        passed,
    })
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct Theorem51Interval {
    pub start: f64,
    pub end: f64,
    pub lhs_rate: f64,
    pub rs_defect_rate: f64,
    pub rs_jumps: usize,
    pub holds_strict: bool,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct Theorem51Report {
    pub s: f64,
    pub t: f64,
    pub m: f64,
    pub norm_start: Option<f64>,
    pub norm_end: Option<f64>,
    pub net_change: f64,
    /// `∫Σ_Lax (2m + TV a)|a₋-λ||ψ₋|`.
    pub lax_term: f64,
    pub product_i: f64,
    pub product_ii: f64,
    /// `net_change + lax_term + product_i + product_ii`.
    pub lhs_minus_rhs: f64,
    /// `∫Σ_RS (2m + TV b)|a₋-λ||ψ₋|`, the rarefaction-shock excess at finite `h`.
    pub rs_defect: f64,
    pub max_tv_a: f64,
    pub max_tv_b: f64,
    pub holds: bool,
    pub holds_strict: bool,
    /// Strict inequality on every interval free of rarefaction shocks.
    pub rs_free_intervals_hold: bool,
    pub intervals: Vec<Theorem51Interval>,
}

/// Assembles the weighted estimate with the nonconservative products.
pub fn theorem51_check<S: Scalar>(field: &CoefficientField<S>, m: &S, s: &S, t: &S, tol: f64) -> Result<Theorem51Report> {
    let led = ledger(field, Some(m), s, t)?;
    let abs_tol = tol * (1.0 + led.scale);
    let events = led.events.iter().fold(S::zero(), |acc, (_, j)| acc + j.clone());
    let change = sum(&led.evals, |e| e.direct.clone()) + events;
    let lax = sum(&led.evals, |e| e.lax51.clone());
    let p1 = sum(&led.evals, |e| e.prod1.clone());
    let p2 = sum(&led.evals, |e| e.prod2.clone());
    let defect = sum(&led.evals, |e| e.rs_defect.clone());
    let total = change.clone() + lax.clone() + p1.clone() + p2.clone();

    let mut intervals = Vec::with_capacity(led.evals.len());
    let mut rs_free_ok = true;
    for e in &led.evals {
        let rate = e.direct.clone() + e.lax51.clone() + e.prod1.clone() + e.prod2.clone();
        let strict = at_most(&(rate.clone() * e.dt()), abs_tol);
        if e.counts[2] == 0 {
            rs_free_ok &= strict;
        }
        intervals.push(Theorem51Interval {
            start: e.start.to_f64(),
            end: e.end.to_f64(),
            lhs_rate: rate.to_f64(),
            rs_defect_rate: e.rs_defect.to_f64(),
            rs_jumps: e.counts[2],
            holds_strict: strict,
        });
    }
    let max_of = |f: &dyn Fn(&SlabEval<S>) -> f64| led.evals.iter().map(f).fold(0.0, f64::max);
    Ok(Theorem51Report {
        s: s.to_f64(),
        t: t.to_f64(),
        m: m.to_f64(),
        norm_start: led.norm_start.as_ref().map(Scalar::to_f64),
        norm_end: led.norm_end.as_ref().map(Scalar::to_f64),
        net_change: change.to_f64(),
        lax_term: lax.to_f64(),
        product_i: p1.to_f64(),
        product_ii: p2.to_f64(),
        lhs_minus_rhs: total.to_f64(),
        rs_defect: defect.to_f64(),
        max_tv_a: max_of(&|e| e.tv_a.to_f64()),
        max_tv_b: max_of(&|e| e.tv_b.to_f64()),
        holds: at_most(&(total.clone() - defect), abs_tol),
        holds_strict: at_most(&total, abs_tol),
        rs_free_intervals_hold: rs_free_ok,
        intervals,
    })
}
