//! Right-continuous piecewise-constant functions of `x`.
//!
//! A [`Profile`] is the snapshot type for solutions, coefficients, weights and
//! strength functions. Norms and total variations are computed exactly from
//! the pieces, so in rational mode they carry no rounding at all.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::flux::{secant_speed, FluxModel};
use crate::scalar::{self, Scalar};

#[derive(Debug, Clone, PartialEq)]
pub struct Profile<S> {
    breakpoints: Vec<S>,
    values: Vec<S>,
}

/// One constant piece `(left, right)`; `None` stands for `-inf` / `+inf`.
#[derive(Debug, Clone, PartialEq)]
pub struct Piece<S> {
    pub left: Option<S>,
    pub right: Option<S>,
    pub value: S,
}

impl<S: Scalar> Profile<S> {
    /// Validating constructor: strictly increasing breakpoints, one more value
    /// than breakpoints, no zero-strength jumps.
    pub fn new(breakpoints: Vec<S>, values: Vec<S>) -> Result<Self> {
        if values.len() != breakpoints.len() + 1 {
            return Err(Error::InvalidProfile(format!(
                "{} values for {} breakpoints",
                values.len(),
                breakpoints.len()
            )));
        }
        if let Some(i) = breakpoints.windows(2).position(|w| w[0] >= w[1]) {
            return Err(Error::InvalidProfile(format!(
                "breakpoints not strictly increasing at index {}",
                i + 1
            )));
        }
        if let Some(i) = values.windows(2).position(|w| w[0] == w[1]) {
            return Err(Error::InvalidProfile(format!(
                "zero-strength jump at breakpoint {}",
                breakpoints[i]
            )));
        }
        Ok(Self { breakpoints, values })
    }

    pub fn constant(value: S) -> Self {
        Self {
            breakpoints: Vec::new(),
            values: vec![value],
        }
    }

    /// Builds from a leading value and `(x, value right of x)` pairs, merging
    /// equal neighbours and coincident breakpoints (the later value wins).
    pub fn from_steps(left: S, steps: impl IntoIterator<Item = (S, S)>) -> Result<Self> {
        let mut breakpoints: Vec<S> = Vec::new();
        let mut values = vec![left];
        for (x, v) in steps {
            if let Some(last) = breakpoints.last() {
                if x < *last {
                    return Err(Error::InvalidProfile(format!("breakpoint {x} out of order")));
                }
                if x == *last {
                    breakpoints.pop();
                    values.pop();
                }
            }
            if *values.last().expect("nonempty") != v {
                breakpoints.push(x);
                values.push(v);
            }
        }
        Ok(Self { breakpoints, values })
    }

    pub fn breakpoints(&self) -> &[S] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[S] {
        &self.values
    }

    pub fn far_left(&self) -> &S {
        &self.values[0]
    }

    pub fn far_right(&self) -> &S {
        self.values.last().expect("nonempty")
    }

    pub fn jump_count(&self) -> usize {
        self.breakpoints.len()
    }

    /// Index of the piece containing `x` (right-continuous).
    fn piece_index(&self, x: &S) -> usize {
        self.breakpoints.partition_point(|b| b <= x)
    }

    pub fn value_at(&self, x: &S) -> &S {
        &self.values[self.piece_index(x)]
    }

    pub fn left_limit(&self, x: &S) -> &S {
        &self.values[self.breakpoints.partition_point(|b| b < x)]
    }

    pub fn pieces(&self) -> impl Iterator<Item = Piece<S>> + '_ {
        self.values.iter().enumerate().map(move |(i, v)| Piece {
            left: i.checked_sub(1).map(|j| self.breakpoints[j].clone()),
            right: self.breakpoints.get(i).cloned(),
            value: v.clone(),
        })
    }

    /// Signed jumps `value(x+) - value(x-)` at each breakpoint.
    pub fn jumps(&self) -> impl Iterator<Item = (S, S)> + '_ {
        self.breakpoints
            .iter()
            .enumerate()
            .map(move |(i, x)| (x.clone(), self.values[i + 1].clone() - self.values[i].clone()))
    }

    /// Sum of `|jump|` over breakpoints in `(a, b]`, or the whole line.
    pub fn total_variation(&self, window: Option<(&S, &S)>) -> S {
        self.jumps()
            .filter(|(x, _)| window.is_none_or(|(a, b)| x > a && x <= b))
            .fold(S::zero(), |acc, (_, j)| acc + j.abs())
    }

    pub fn is_compactly_supported(&self) -> bool {
        self.far_left().is_zero() && self.far_right().is_zero()
    }

    fn require_compact(&self) -> Result<()> {
        if self.is_compactly_supported() {
            Ok(())
        } else {
            Err(Error::NotCompactlySupported {
                left: self.far_left().to_f64(),
                right: self.far_right().to_f64(),
            })
        }
    }

    /// `∫ |p| dx`.
    pub fn l1_norm(&self) -> Result<S> {
        self.require_compact()?;
        Ok(self.integrate_bounded(|v| v.abs()))
    }

    /// `∫ |p| w dx`, split at the union of both breakpoint sets.
    pub fn weighted_l1_norm(&self, weight: &Profile<S>) -> Result<S> {
        self.require_compact()?;
        if let Some(bad) = weight.values.iter().find(|w| **w < S::zero()) {
            return Err(Error::NegativeWeight(bad.to_f64()));
        }
        let product = self.zip_with(weight, |p, w| p.abs() * w.clone());
        Ok(product.integrate_bounded(|v| v.clone()))
    }

    /// `(∫ |p|^2)^(1/2)`; the integral is exact, the root is taken in `f64`.
    pub fn l2_norm(&self) -> Result<f64> {
        self.require_compact()?;
        Ok(self.integrate_bounded(|v| v.clone() * v.clone()).to_f64().sqrt())
    }

    pub fn sup_norm(&self) -> S {
        self.values
            .iter()
            .map(|v| v.abs())
            .fold(S::zero(), |m, v| scalar::max(&m, &v))
    }

    /// Integral of `g(value)` over the bounded pieces; the caller guarantees
    /// `g` vanishes on the unbounded ones.
    fn integrate_bounded(&self, g: impl Fn(&S) -> S) -> S {
        let mut total = S::zero();
        for (i, w) in self.breakpoints.windows(2).enumerate() {
            total = total + g(&self.values[i + 1]) * (w[1].clone() - w[0].clone());
        }
        total
    }

    /// Integral of `p` over `[a, b]` (any far-field values allowed).
    pub fn integral_over(&self, a: &S, b: &S) -> S {
        if a >= b {
            return S::zero();
        }
        let mut total = S::zero();
        let mut cursor = a.clone();
        let start = self.piece_index(a);
        for i in start..self.values.len() {
            let end = match self.breakpoints.get(i) {
                Some(x) if x < b => x.clone(),
                _ => b.clone(),
            };
            total = total + self.values[i].clone() * (end.clone() - cursor.clone());
            if end == *b {
                break;
            }
            cursor = end;
        }
        total
    }

    /// Pointwise combination on the merged breakpoint set.
    pub fn zip_with(&self, other: &Profile<S>, f: impl Fn(&S, &S) -> S) -> Profile<S> {
        let mut merged: Vec<S> = Vec::with_capacity(self.breakpoints.len() + other.breakpoints.len());
        let (mut i, mut j) = (0, 0);
        while i < self.breakpoints.len() || j < other.breakpoints.len() {
            let take_left = match (self.breakpoints.get(i), other.breakpoints.get(j)) {
                (Some(a), Some(b)) => a <= b,
                (Some(_), None) => true,
                _ => false,
            };
            let x = if take_left {
                let x = self.breakpoints[i].clone();
                if other.breakpoints.get(j) == Some(&x) {
                    j += 1;
                }
                i += 1;
                x
            } else {
                j += 1;
                other.breakpoints[j - 1].clone()
            };
            merged.push(x);
        }
        let left = f(self.far_left(), other.far_left());
        let steps: Vec<(S, S)> = merged
            .into_iter()
            .map(|x| {
                let v = f(self.value_at(&x), other.value_at(&x));
                (x, v)
            })
            .collect();
        Profile::from_steps(left, steps).expect("merged breakpoints are ordered")
    }

    pub fn map(&self, f: impl Fn(&S) -> S) -> Profile<S> {
        let left = f(self.far_left());
        let steps: Vec<(S, S)> = self
            .breakpoints
            .iter()
            .zip(&self.values[1..])
            .map(|(x, v)| (x.clone(), f(v)))
            .collect();
        Profile::from_steps(left, steps).expect("same breakpoints")
    }

    pub fn variation(&self) -> VariationFunction<S> {
        VariationFunction::new(self.clone())
    }

    pub fn to_export(&self) -> ProfileExport {
        ProfileExport {
            breakpoints: self.breakpoints.iter().map(Scalar::to_f64).collect(),
            values: self.values.iter().map(Scalar::to_f64).collect(),
        }
    }
}

/// Plotting-friendly JSON form of a profile.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct ProfileExport {
    pub breakpoints: Vec<f64>,
    pub values: Vec<f64>,
}

/// `x ↦ TV(base) over (-inf, x]`, optionally with a continuous component
/// sampled at increasing points (used only to approximate limits).
#[derive(Debug, Clone, PartialEq)]
pub struct VariationFunction<S> {
    base: Profile<S>,
    continuous: Vec<(S, S)>,
}

impl<S: Scalar> VariationFunction<S> {
    pub fn new(base: Profile<S>) -> Self {
        Self {
            base,
            continuous: Vec::new(),
        }
    }

    /// Adds a continuous nondecreasing part given by samples `(x_i, V_c(x_i))`,
    /// linearly interpolated, constant outside the sampled range.
    pub fn with_continuous_part(mut self, samples: Vec<(S, S)>) -> Result<Self> {
        if samples.windows(2).any(|w| w[0].0 >= w[1].0 || w[0].1 > w[1].1) {
            return Err(Error::InvalidProfile(
                "continuous variation samples must increase in x and be nondecreasing".into(),
            ));
        }
        self.continuous = samples;
        Ok(self)
    }

    pub fn base(&self) -> &Profile<S> {
        &self.base
    }

    fn continuous_at(&self, x: &S) -> S {
        let c = &self.continuous;
        if c.is_empty() {
            return S::zero();
        }
        let origin = c[0].1.clone();
        if *x <= c[0].0 {
            return S::zero();
        }
        for w in c.windows(2) {
            if *x <= w[1].0 {
                let frac = (x.clone() - w[0].0.clone()) / (w[1].0.clone() - w[0].0.clone());
                return w[0].1.clone() + frac * (w[1].1.clone() - w[0].1.clone()) - origin;
            }
        }
        c.last().expect("nonempty").1.clone() - origin
    }

    pub fn cumulative(&self, x: &S) -> S {
        let jumps = self
            .base
            .jumps()
            .take_while(|(b, _)| b <= x)
            .fold(S::zero(), |acc, (_, j)| acc + j.abs());
        jumps + self.continuous_at(x)
    }

    pub fn total(&self) -> S {
        let cont = match (self.continuous.first(), self.continuous.last()) {
            (Some(a), Some(b)) => b.1.clone() - a.1.clone(),
            _ => S::zero(),
        };
        self.base.total_variation(None) + cont
    }
}

/// Closed set over which a measure is evaluated.
#[derive(Debug, Clone, PartialEq)]
pub enum MeasureSet<S> {
    Point(S),
    Interval(S, S),
}

impl<S: Scalar> MeasureSet<S> {
    fn bounds(&self) -> (&S, &S) {
        match self {
            MeasureSet::Point(x) => (x, x),
            MeasureSet::Interval(a, b) => (a, b),
        }
    }
}

/// Measure of `set` under `(a(u, v) - f'(u)) (v - u) dw`, with the jump atoms
/// evaluated by averaging the two one-sided traces.
pub fn nonconservative_product<S: Scalar>(
    flux: &FluxModel,
    u: &Profile<S>,
    v: &Profile<S>,
    w: &VariationFunction<S>,
    set: &MeasureSet<S>,
) -> S {
    let (lo, hi) = set.bounds();
    let mut total = S::zero();

    for (x, jump) in w.base.jumps() {
        if x < *lo || x > *hi {
            continue;
        }
        let (um, up) = (u.left_limit(&x).clone(), u.value_at(&x).clone());
        let (vm, vp) = (v.left_limit(&x).clone(), v.value_at(&x).clone());
        let centre = secant_speed(flux, &um, &up);
        let right = (secant_speed(flux, &up, &vp) - centre.clone()) * (vp - up.clone());
        let left = (secant_speed(flux, &um, &vm) - centre) * (vm - um.clone());
        total = total + S::half() * (right + left) * jump.abs();
    }

    // Stieltjes part against the continuous component (midpoint rule).
    let integrand = |x: &S| {
        let (ux, vx) = (u.value_at(x).clone(), v.value_at(x).clone());
        (secant_speed(flux, &ux, &vx) - flux.derivative(&ux)) * (vx - ux)
    };
    for seg in w.continuous.windows(2) {
        let a = scalar::max(&seg[0].0, lo);
        let b = scalar::min(&seg[1].0, hi);
        if a >= b {
            continue;
        }
        let dv = w.continuous_at(&b) - w.continuous_at(&a);
        let mid = (a + b) * S::half();
        total = total + integrand(&mid) * dv;
    }
    total
}

/// Atom of `(a - f'(u)) ψ dV` at a jump of `u` of size `jump_size` moving at `lambda`.
pub fn mu_psi_atom<S: Scalar>(a_minus: &S, lambda: &S, psi_minus: &S, jump_size: &S) -> S {
    (a_minus.clone() - lambda.clone()) * psi_minus.clone() * jump_size.clone()
}
