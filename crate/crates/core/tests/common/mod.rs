#![allow(dead_code)]

use wavefront::runner::{random_runs, suite_rng};
use wavefront::{CoefficientField, FrontTrackingRun, Profile, Rational, Scalar};

pub const SUITE_SEED: u64 = 20_241_017;

pub type Triple<S> = (FrontTrackingRun<S>, FrontTrackingRun<S>, CoefficientField<S>);

/// The seeded random Burgers suite (h = 1/4, t = 2) in floating point.
pub fn float_suite(n: usize, shocks_only: bool) -> Vec<Triple<f64>> {
    (0..n)
        .map(|i| {
            let mut rng = suite_rng(SUITE_SEED + shocks_only as u64, i);
            random_runs(&mut rng, shocks_only, &0.25, &2.0).expect("suite scenario")
        })
        .collect()
}

pub fn rational_suite(n: usize) -> Vec<Triple<Rational>> {
    let h = Rational::from_ratio(1, 4);
    let t = Rational::from_ratio(2, 1);
    (0..n)
        .map(|i| {
            let mut rng = suite_rng(SUITE_SEED + 7, i);
            random_runs(&mut rng, false, &h, &t).expect("suite scenario")
        })
        .collect()
}

/// Godunov finite volumes for Burgers on `[lo, hi]` with constant extension,
/// started from exact cell averages of `u0`.
pub struct Godunov {
    pub lo: f64,
    pub dx: f64,
    pub cells: Vec<f64>,
    pub time: f64,
}

fn burgers_flux(u: f64) -> f64 {
    0.5 * u * u
}

/// Exact Riemann flux at the interface for a convex flux with minimum at 0.
fn godunov_flux(ul: f64, ur: f64) -> f64 {
    burgers_flux(ul.max(0.0)).max(burgers_flux(ur.min(0.0)))
}

impl Godunov {
    pub fn new(u0: &Profile<f64>, lo: f64, hi: f64, dx: f64) -> Self {
        let n = ((hi - lo) / dx).round() as usize;
        let cells = (0..n)
            .map(|i| {
                let a = lo + i as f64 * dx;
                u0.integral_over(&a, &(a + dx)) / dx
            })
            .collect();
        Godunov { lo, dx, cells, time: 0.0 }
    }

    pub fn advance_to(&mut self, t: f64) {
        let n = self.cells.len();
        let mut flux = vec![0.0; n + 1];
        while self.time < t {
            let smax = self.cells.iter().fold(0.0_f64, |m, u| m.max(u.abs())).max(1e-12);
            let dt = (0.9 * self.dx / smax).min(t - self.time);
            let (first, last) = (self.cells[0], self.cells[n - 1]);
            for i in 0..=n {
                let ul = if i == 0 { first } else { self.cells[i - 1] };
                let ur = if i == n { last } else { self.cells[i] };
                flux[i] = godunov_flux(ul, ur);
            }
            let r = dt / self.dx;
            for i in 0..n {
                self.cells[i] -= r * (flux[i + 1] - flux[i]);
            }
            self.time += dt;
        }
    }

    /// `∫ |p - u_h|` over the grid, exact for the step function `p`.
    pub fn l1_distance(&self, p: &Profile<f64>) -> f64 {
        let bps = p.breakpoints();
        let mut total = 0.0;
        let mut k = 0;
        for (i, &c) in self.cells.iter().enumerate() {
            let a = self.lo + i as f64 * self.dx;
            let b = a + self.dx;
            while k < bps.len() && bps[k] <= a {
                k += 1;
            }
            let mut x = a;
            let mut j = k;
            while j < bps.len() && bps[j] < b {
                total += (p.value_at(&x) - c).abs() * (bps[j] - x);
                x = bps[j];
                j += 1;
            }
            total += (p.value_at(&x) - c).abs() * (b - x);
        }
        total
    }
}
