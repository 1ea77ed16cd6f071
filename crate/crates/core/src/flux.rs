//! Strictly convex flux functions and the speeds derived from them.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Below this state separation the secant is replaced by `f'` at the midpoint.
pub const EPS_STATE: f64 = 1e-12;

type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone)]
pub struct CustomFlux {
    pub name: String,
    pub value: RealFn,
    pub derivative: RealFn,
    pub second_derivative: RealFn,
}

#[derive(Clone)]
pub enum FluxKind {
    /// `u^2 / 2`
    Burgers,
    /// `u^4 + eps u^2 / 2`
    Quartic { eps: f64 },
    /// `exp(u)`
    Exp,
    Custom(CustomFlux),
}

/// A convex flux with a declared working interval and bounds on `f''` there.
#[derive(Clone)]
pub struct FluxModel {
    kind: FluxKind,
    interval: (f64, f64),
    f2_bounds: (f64, f64),
}

impl fmt::Debug for FluxModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FluxModel")
            .field("name", &self.name())
            .field("interval", &self.interval)
            .field("f2_bounds", &self.f2_bounds)
            .finish()
    }
}

impl FluxModel {
    pub fn burgers(interval: (f64, f64)) -> Self {
        Self {
            kind: FluxKind::Burgers,
            interval,
            f2_bounds: (1.0, 1.0),
        }
    }

    pub fn quartic(eps: f64, interval: (f64, f64)) -> Self {
        let (lo, hi) = interval;
        let min_sq = if lo <= 0.0 && hi >= 0.0 {
            0.0
        } else {
            lo.abs().min(hi.abs()).powi(2)
        };
        let max_sq = lo.abs().max(hi.abs()).powi(2);
        Self {
            kind: FluxKind::Quartic { eps },
            interval,
            f2_bounds: (12.0 * min_sq + eps, 12.0 * max_sq + eps),
        }
    }

    pub fn exp(interval: (f64, f64)) -> Self {
        Self {
            kind: FluxKind::Exp,
            interval,
            f2_bounds: (interval.0.exp(), interval.1.exp()),
        }
    }

    /// User flux. `f2_bounds` is the declared `[inf f'', sup f'']` on `interval`.
    pub fn custom(
        name: impl Into<String>,
        value: impl Fn(f64) -> f64 + Send + Sync + 'static,
        derivative: impl Fn(f64) -> f64 + Send + Sync + 'static,
        second_derivative: impl Fn(f64) -> f64 + Send + Sync + 'static,
        interval: (f64, f64),
        f2_bounds: (f64, f64),
    ) -> Self {
        Self {
            kind: FluxKind::Custom(CustomFlux {
                name: name.into(),
                value: Arc::new(value),
                derivative: Arc::new(derivative),
                second_derivative: Arc::new(second_derivative),
            }),
            interval,
            f2_bounds,
        }
    }

    /// Library lookup used by scenario files.
    pub fn by_name(name: &str, params: &[f64], interval: (f64, f64)) -> Result<Self> {
        match name {
            "burgers" => Ok(Self::burgers(interval)),
            "quartic" => Ok(Self::quartic(params.first().copied().unwrap_or(0.0), interval)),
            "exp" => Ok(Self::exp(interval)),
            other => Err(Error::UnknownFlux(other.to_string())),
        }
    }

    pub fn name(&self) -> &str {
        match &self.kind {
            FluxKind::Burgers => "burgers",
            FluxKind::Quartic { .. } => "quartic",
            FluxKind::Exp => "exp",
            FluxKind::Custom(c) => &c.name,
        }
    }

    pub fn kind(&self) -> &FluxKind {
        &self.kind
    }

    pub fn working_interval(&self) -> (f64, f64) {
        self.interval
    }

    pub fn second_derivative_bounds(&self) -> (f64, f64) {
        self.f2_bounds
    }

    /// `c0` with `f'' >= c0` on the working interval.
    pub fn convexity_modulus(&self) -> f64 {
        self.f2_bounds.0
    }

    /// `sup |f''|` on the working interval.
    pub fn sup_second_derivative(&self) -> f64 {
        self.f2_bounds.1.abs().max(self.f2_bounds.0.abs())
    }

    /// Polynomial fluxes keep rational data rational.
    pub fn is_polynomial(&self) -> bool {
        matches!(self.kind, FluxKind::Burgers | FluxKind::Quartic { .. })
    }

    pub fn ensure_strictly_convex(&self) -> Result<()> {
        let modulus = self.convexity_modulus();
        if modulus > 0.0 {
            Ok(())
        } else {
            Err(Error::NotStrictlyConvex {
                lo: self.interval.0,
                hi: self.interval.1,
                modulus,
            })
        }
    }

    pub fn value<S: Scalar>(&self, u: &S) -> S {
        match &self.kind {
            FluxKind::Burgers => u.clone() * u.clone() * S::half(),
            FluxKind::Quartic { eps } => {
                let sq = u.clone() * u.clone();
                sq.clone() * sq.clone() + S::from_f64(*eps) * S::half() * sq
            }
            FluxKind::Exp => u.map_f64(f64::exp),
            FluxKind::Custom(c) => u.map_f64(|x| (c.value)(x)),
        }
    }

    pub fn derivative<S: Scalar>(&self, u: &S) -> S {
        match &self.kind {
            FluxKind::Burgers => u.clone(),
            FluxKind::Quartic { eps } => {
                S::from_i64(4) * u.clone() * u.clone() * u.clone() + S::from_f64(*eps) * u.clone()
            }
            FluxKind::Exp => u.map_f64(f64::exp),
            FluxKind::Custom(c) => u.map_f64(|x| (c.derivative)(x)),
        }
    }

    pub fn second_derivative(&self, u: f64) -> f64 {
        match &self.kind {
            FluxKind::Burgers => 1.0,
            FluxKind::Quartic { eps } => 12.0 * u * u + eps,
            FluxKind::Exp => u.exp(),
            FluxKind::Custom(c) => (c.second_derivative)(u),
        }
    }

    /// Spot-checks the declared `f''` bounds and the `f`/`f'` consistency on
    /// `samples` evenly spaced probes. Returns the first failing probe.
    pub fn spot_check(&self, samples: usize) -> std::result::Result<(), String> {
        let (lo, hi) = self.interval;
        let (f2_lo, f2_hi) = self.f2_bounds;
        for i in 0..=samples {
            let u = lo + (hi - lo) * i as f64 / samples.max(1) as f64;
            let f2 = self.second_derivative(u);
            if f2 < f2_lo * (1.0 - 1e-12) - 1e-12 || f2 > f2_hi * (1.0 + 1e-12) + 1e-12 {
                return Err(format!("f''({u}) = {f2} outside declared [{f2_lo}, {f2_hi}]"));
            }
            let step = 1e-5 * (1.0 + u.abs());
            let fd = (self.value(&(u + step)) - self.value(&(u - step))) / (2.0 * step);
            let exact: f64 = self.derivative(&u);
            if (fd - exact).abs() > 1e-6 * exact.abs().max(1.0) {
                return Err(format!("f'({u}) = {exact} but central difference gives {fd}"));
            }
        }
        Ok(())
    }

    /// `max |f'|` over the state range `[lo, hi]` (convexity puts it at an end).
    pub fn max_abs_speed(&self, lo: f64, hi: f64) -> f64 {
        let a: f64 = self.derivative(&lo);
        let b: f64 = self.derivative(&hi);
        a.abs().max(b.abs())
    }
}

/// Averaged speed `(f(v) - f(u)) / (v - u)`, continuous across `u = v`.
pub fn secant_speed<S: Scalar>(flux: &FluxModel, u: &S, v: &S) -> S {
    let du = v.clone() - u.clone();
    if du.negligible(EPS_STATE) {
        let mid = (u.clone() + v.clone()) * S::half();
        flux.derivative(&mid)
    } else {
        (flux.value(v) - flux.value(u)) / du
    }
}

/// Shock speed of a front joining `u_left` to `u_right`.
pub fn rankine_hugoniot_speed<S: Scalar>(flux: &FluxModel, u_left: &S, u_right: &S) -> Result<S> {
    if u_left == u_right {
        return Err(Error::EqualStates(u_left.to_f64()));
    }
    Ok(secant_speed(flux, u_left, u_right))
}
