use serde::Serialize;

use crate::error::{Error, Result};
use crate::flux::{secant_speed, FluxModel};
use crate::profile::Profile;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FrontKind {
    Shock,
    FanMember,
}

impl FrontKind {
    pub fn as_str(self) -> &'static str {
        match self {
            FrontKind::Shock => "shock",
            FrontKind::FanMember => "fan_member",
        }
    }
}

/// Outgoing wave of a Riemann problem, before it is placed in the x-t plane.
#[derive(Debug, Clone, PartialEq)]
pub struct Wave<S> {
    pub left: S,
    pub right: S,
    pub speed: S,
    pub kind: FrontKind,
}

/// Riemann solver for a convex flux: a single shock for a down-jump, a fan of
/// `ceil((ur - ul) / h)` equal-increment fronts for an up-jump.
pub fn solve_riemann<S: Scalar>(flux: &FluxModel, ul: &S, ur: &S, h: &S) -> Vec<Wave<S>> {
    debug_assert!(*h > S::zero());
    if ul == ur {
        return Vec::new();
    }
    if ul > ur {
        return vec![Wave {
            left: ul.clone(),
            right: ur.clone(),
            speed: secant_speed(flux, ul, ur),
            kind: FrontKind::Shock,
        }];
    }
    let span = ur.clone() - ul.clone();
    let n = (span.clone() / h.clone()).ceil_usize().max(1);
    let step = span / S::from_i64(n as i64);
    let mut waves = Vec::with_capacity(n);
    let mut left = ul.clone();
    for k in 1..=n {
        let right = if k == n {
            ur.clone()
        } else {
            ul.clone() + step.clone() * S::from_i64(k as i64)
        };
        waves.push(Wave {
            speed: secant_speed(flux, &left, &right),
            left,
            right: right.clone(),
            kind: FrontKind::FanMember,
        });
        left = right;
    }
    waves
}

/// Midpoint sampling of `g` on `n_cells` equal cells of `support`, with the
/// boundary values `g(a)`, `g(b)` continued outside. Values within 1e-12 of
/// zero are snapped to zero so data vanishing at the ends stays compact.
pub fn sample_initial_data<S: Scalar>(
    g: impl Fn(f64) -> f64,
    support: (f64, f64),
    n_cells: usize,
) -> Result<Profile<S>> {
    if n_cells == 0 {
        return Err(Error::InvalidProfile("n_cells must be at least 1".into()));
    }
    let (a, b) = support;
    if !(a < b) {
        return Err(Error::InvalidProfile(format!("empty support [{a}, {b}]")));
    }
    let snap = |v: f64| if v.abs() < 1e-12 { 0.0 } else { v };
    let width = (b - a) / n_cells as f64;
    let (sa, sb) = (S::from_f64(a), S::from_f64(b));
    let cell = (sb.clone() - sa.clone()) / S::from_i64(n_cells as i64);
    let mut steps = Vec::with_capacity(n_cells + 1);
    for k in 0..n_cells {
        let mid = a + (k as f64 + 0.5) * width;
        steps.push((
            sa.clone() + cell.clone() * S::from_i64(k as i64),
            S::from_f64(snap(g(mid))),
        ));
    }
    steps.push((sb, S::from_f64(snap(g(b)))));
    Profile::from_steps(S::from_f64(snap(g(a))), steps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn burgers() -> FluxModel {
        FluxModel::burgers((-4.0, 4.0))
    }

    #[test]
    fn shock_and_fan() {
        let shock = solve_riemann(&burgers(), &1.0, &0.0, &0.1);
        assert_eq!(shock.len(), 1);
        assert_eq!(shock[0].speed, 0.5);
        assert_eq!(shock[0].kind, FrontKind::Shock);

        let fan = solve_riemann(&burgers(), &0.0, &1.0, &0.5);
        assert_eq!(fan.len(), 2);
        assert_eq!((fan[0].left, fan[0].right, fan[0].speed), (0.0, 0.5, 0.25));
        assert_eq!((fan[1].left, fan[1].right, fan[1].speed), (0.5, 1.0, 0.75));
        assert!(solve_riemann(&burgers(), &0.3, &0.3, &0.1).is_empty());
    }

    #[test]
    fn fan_members_respect_h_and_ordering() {
        let h = Rational::from_ratio(1, 3);
        let fan = solve_riemann(&burgers(), &Rational::from_ratio(-1, 1), &Rational::from_ratio(1, 1), &h);
        assert_eq!(fan.len(), 6);
        for w in fan.windows(2) {
            assert!(w[0].speed < w[1].speed);
            assert_eq!(w[0].right, w[1].left);
        }
        for wave in &fan {
            assert!(wave.right.clone() - wave.left.clone() <= h);
        }
    }

    #[test]
    fn sampling_examples() {
        let c: Profile<f64> = sample_initial_data(|_| 2.0, (0.0, 1.0), 10).unwrap();
        assert_eq!(c, Profile::constant(2.0));

        let lin: Profile<f64> = sample_initial_data(|x| x, (0.0, 1.0), 2).unwrap();
        assert_eq!(lin.breakpoints(), &[0.0, 0.5, 1.0]);
        assert_eq!(lin.values(), &[0.0, 0.25, 0.75, 1.0]);

        let coarse: Profile<f64> = sample_initial_data(f64::sin, (0.0, std::f64::consts::PI), 100).unwrap();
        let fine: Profile<f64> = sample_initial_data(f64::sin, (0.0, std::f64::consts::PI), 1000).unwrap();
        let (tv_c, tv_f) = (coarse.total_variation(None), fine.total_variation(None));
        assert!(tv_c <= 2.0 && tv_f <= 2.0);
        assert!(tv_c < tv_f && 2.0 - tv_f < 1e-5);
        assert!(coarse.is_compactly_supported());
        assert!(sample_initial_data::<f64>(|x| x, (0.0, 1.0), 0).is_err());
    }
}
