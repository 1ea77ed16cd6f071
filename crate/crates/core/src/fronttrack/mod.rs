//! Polygonal front tracking: every discontinuity travels at its
//! Rankine-Hugoniot speed, rarefactions are split into fans of strength at
//! most `h`, and collisions are processed in time order from a priority queue.

mod riemann;

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::fmt::Write as _;

pub use riemann::{sample_initial_data, solve_riemann, FrontKind, Wave};

use crate::error::{Error, Result};
use crate::flux::FluxModel;
use crate::profile::Profile;
use crate::scalar::{self, Scalar};

/// Relative distance under which two fronts count as meeting (float mode).
pub const MEET_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct Front<S> {
    pub id: usize,
    pub x_birth: S,
    pub t_birth: S,
    pub speed: S,
    pub left: S,
    pub right: S,
    pub kind: FrontKind,
    pub t_death: Option<S>,
}

impl<S: Scalar> Front<S> {
    pub fn position(&self, t: &S) -> S {
        self.x_birth.clone() + self.speed.clone() * (t.clone() - self.t_birth.clone())
    }

    pub fn strength(&self) -> S {
        self.right.clone() - self.left.clone()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Event<S> {
    pub time: S,
    pub x: S,
    pub incoming: Vec<usize>,
    pub outgoing: Vec<usize>,
}

/// Ordered set of live fronts, valid from `start` until the next phase.
#[derive(Debug, Clone, PartialEq)]
pub struct Phase<S> {
    pub start: S,
    pub fronts: Vec<usize>,
}

#[derive(Debug, Clone)]
struct Candidate<S> {
    time: S,
    x: S,
    left: usize,
    right: usize,
}

impl<S: Scalar> PartialEq for Candidate<S> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl<S: Scalar> Eq for Candidate<S> {}

impl<S: Scalar> PartialOrd for Candidate<S> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<S: Scalar> Ord for Candidate<S> {
    // reversed: BinaryHeap is a max-heap, we want earliest time, then leftmost
    fn cmp(&self, other: &Self) -> Ordering {
        scalar::cmp(&other.time, &self.time)
            .then_with(|| scalar::cmp(&other.x, &self.x))
            .then_with(|| other.left.cmp(&self.left))
    }
}

#[derive(Debug, Clone)]
pub struct FrontTrackingRun<S> {
    flux: FluxModel,
    h: S,
    initial: Profile<S>,
    fronts: Vec<Front<S>>,
    events: Vec<Event<S>>,
    phases: Vec<Phase<S>>,
    alive: Vec<usize>,
    queue: BinaryHeap<Candidate<S>>,
    horizon: S,
}

fn close<S: Scalar>(a: &S, b: &S) -> bool {
    let d = a.clone() - b.clone();
    let scale = 1.0 + a.to_f64().abs().max(b.to_f64().abs());
    d.negligible(MEET_TOL * scale)
}

impl<S: Scalar> FrontTrackingRun<S> {
    pub fn new(flux: FluxModel, initial: Profile<S>, h: S) -> Result<Self> {
        if !(h > S::zero()) {
            return Err(Error::config("h", format!("fan resolution must be positive, got {h}")));
        }
        let mut run = Self {
            flux,
            h,
            initial: initial.clone(),
            fronts: Vec::new(),
            events: Vec::new(),
            phases: Vec::new(),
            alive: Vec::new(),
            queue: BinaryHeap::new(),
            horizon: S::zero(),
        };
        for (x, _) in initial.jumps() {
            let ul = initial.left_limit(&x).clone();
            let ur = initial.value_at(&x).clone();
            for wave in solve_riemann(&run.flux, &ul, &ur, &run.h) {
                let id = run.spawn(wave, x.clone(), S::zero());
                run.alive.push(id);
            }
        }
        run.phases.push(Phase {
            start: S::zero(),
            fronts: run.alive.clone(),
        });
        for i in 1..run.alive.len() {
            run.schedule(run.alive[i - 1], run.alive[i], &S::zero())?;
        }
        Ok(run)
    }

    /// Builds and evolves in one call.
    pub fn track(flux: FluxModel, initial: Profile<S>, h: S, t_end: S) -> Result<Self> {
        let mut run = Self::new(flux, initial, h)?;
        run.evolve(t_end)?;
        Ok(run)
    }

    fn spawn(&mut self, wave: Wave<S>, x: S, t: S) -> usize {
        let id = self.fronts.len();
        self.fronts.push(Front {
            id,
            x_birth: x,
            t_birth: t,
            speed: wave.speed,
            left: wave.left,
            right: wave.right,
            kind: wave.kind,
            t_death: None,
        });
        id
    }

    fn schedule(&mut self, left: usize, right: usize, now: &S) -> Result<()> {
        let (l, r) = (&self.fronts[left], &self.fronts[right]);
        if !(l.speed > r.speed) {
            return Ok(());
        }
        let (xl, xr) = (l.position(now), r.position(now));
        let mut gap = xr.clone() - xl.clone();
        if gap < S::zero() {
            if !close(&xl, &xr) {
                let rate = l.speed.clone() - r.speed.clone();
                return Err(Error::TimeInconsistency {
                    collision: (now.clone() + gap / rate).to_f64(),
                    now: now.to_f64(),
                });
            }
            gap = S::zero();
        }
        let time = now.clone() + gap / (l.speed.clone() - r.speed.clone());
        let x = l.position(&time);
        self.queue.push(Candidate { time, x, left, right });
        Ok(())
    }

    /// Processes every collision up to and including `t_end`.
    pub fn evolve(&mut self, t_end: S) -> Result<()> {
        if t_end < self.horizon {
            return Err(Error::OutsideHorizon {
                t: t_end.to_f64(),
                start: 0.0,
                end: self.horizon.to_f64(),
            });
        }
        let mut now = self.horizon.clone();
        while let Some(top) = self.queue.peek() {
            if top.time > t_end {
                break;
            }
            let cand = self.queue.pop().expect("peeked");
            let Some(i) = self.alive.iter().position(|&id| id == cand.left) else {
                continue;
            };
            if self.alive.get(i + 1) != Some(&cand.right) {
                continue;
            }
            if cand.time < now {
                if !close(&cand.time, &now) {
                    return Err(Error::TimeInconsistency {
                        collision: cand.time.to_f64(),
                        now: now.to_f64(),
                    });
                }
            } else {
                now = cand.time.clone();
            }
            self.interact(i, &now)?;
        }
        self.horizon = t_end;
        Ok(())
    }

    fn interact(&mut self, i: usize, t: &S) -> Result<()> {
        let x = self.fronts[self.alive[i]].position(t);
        let (mut lo, mut hi) = (i, i + 1);
        while lo > 0 && self.meets(self.alive[lo - 1], t, &x) {
            lo -= 1;
        }
        while hi + 1 < self.alive.len() && self.meets(self.alive[hi + 1], t, &x) {
            hi += 1;
        }
        let incoming: Vec<usize> = self.alive[lo..=hi].to_vec();
        let ul = self.fronts[incoming[0]].left.clone();
        let ur = self.fronts[*incoming.last().expect("two fronts")].right.clone();
        let waves = solve_riemann(&self.flux, &ul, &ur, &self.h);

        if waves.len() >= incoming.len() {
            return Err(Error::InvariantViolated {
                time: t.to_f64(),
                what: format!("{} fronts in, {} out", incoming.len(), waves.len()),
            });
        }
        for id in &incoming {
            self.fronts[*id].t_death = Some(t.clone());
        }
        let outgoing: Vec<usize> = waves
            .into_iter()
            .map(|w| self.spawn(w, x.clone(), t.clone()))
            .collect();
        self.alive.splice(lo..=hi, outgoing.iter().copied());
        self.events.push(Event {
            time: t.clone(),
            x,
            incoming,
            outgoing: outgoing.clone(),
        });
        self.phases.push(Phase {
            start: t.clone(),
            fronts: self.alive.clone(),
        });

        let first = lo;
        let last = lo + outgoing.len(); // index just past the new fronts
        if first > 0 && first < self.alive.len() {
            self.schedule(self.alive[first - 1], self.alive[first], t)?;
        }
        if !outgoing.is_empty() && last < self.alive.len() {
            self.schedule(self.alive[last - 1], self.alive[last], t)?;
        }
        Ok(())
    }

    fn meets(&self, id: usize, t: &S, x: &S) -> bool {
        close(&self.fronts[id].position(t), x)
    }

    pub fn flux(&self) -> &FluxModel {
        &self.flux
    }

    pub fn h(&self) -> &S {
        &self.h
    }

    pub fn initial(&self) -> &Profile<S> {
        &self.initial
    }

    pub fn fronts(&self) -> &[Front<S>] {
        &self.fronts
    }

    pub fn front(&self, id: usize) -> &Front<S> {
        &self.fronts[id]
    }

    pub fn events(&self) -> &[Event<S>] {
        &self.events
    }

    pub fn phases(&self) -> &[Phase<S>] {
        &self.phases
    }

    pub fn horizon(&self) -> &S {
        &self.horizon
    }

    pub fn event_times(&self) -> Vec<S> {
        let mut times: Vec<S> = self.events.iter().map(|e| e.time.clone()).collect();
        times.dedup();
        times
    }

    fn check_time(&self, t: &S) -> Result<()> {
        if *t < S::zero() || *t > self.horizon {
            return Err(Error::OutsideHorizon {
                t: t.to_f64(),
                start: 0.0,
                end: self.horizon.to_f64(),
            });
        }
        Ok(())
    }

    /// Phase in force at `t` (post-interaction at event times).
    pub fn phase_at(&self, t: &S) -> Result<&Phase<S>> {
        self.check_time(t)?;
        let k = self.phases.partition_point(|p| p.start <= *t);
        Ok(&self.phases[k.saturating_sub(1)])
    }

    /// Live fronts at `t`, left to right, with their positions. Positions are
    /// clamped to be nondecreasing so rounding never reorders the chain.
    pub fn fronts_at(&self, t: &S) -> Result<Vec<(usize, S)>> {
        let phase = self.phase_at(t)?;
        let mut out: Vec<(usize, S)> = Vec::with_capacity(phase.fronts.len());
        for &id in &phase.fronts {
            let mut x = self.fronts[id].position(t);
            if let Some((_, prev)) = out.last() {
                if x < *prev {
                    x = prev.clone();
                }
            }
            out.push((id, x));
        }
        Ok(out)
    }

    pub fn sample(&self, t: &S) -> Result<Profile<S>> {
        let steps: Vec<(S, S)> = self
            .fronts_at(t)?
            .into_iter()
            .map(|(id, x)| (x, self.fronts[id].right.clone()))
            .collect();
        Profile::from_steps(self.initial.far_left().clone(), steps)
    }

    /// `max |f'|` over the range of states the run ever takes.
    pub fn max_speed(&self) -> f64 {
        let values = self.initial.values();
        let lo = values.iter().map(Scalar::to_f64).fold(f64::INFINITY, f64::min);
        let hi = values.iter().map(Scalar::to_f64).fold(f64::NEG_INFINITY, f64::max);
        self.flux.max_abs_speed(lo, hi)
    }

    /// Wave diagram, one row per front segment.
    pub fn wave_csv(&self) -> String {
        let mut out = String::from("id,t_start,x_start,t_end,x_end,left,right,kind\n");
        for f in &self.fronts {
            let t_end = f.t_death.clone().unwrap_or_else(|| self.horizon.clone());
            let x_end = f.position(&t_end);
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{}",
                f.id,
                f.t_birth.to_f64(),
                f.x_birth.to_f64(),
                t_end.to_f64(),
                x_end.to_f64(),
                f.left.to_f64(),
                f.right.to_f64(),
                f.kind.as_str()
            );
        }
        out
    }
}
