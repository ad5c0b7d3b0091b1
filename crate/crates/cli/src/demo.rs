//! Synthetic smart-grid day.
//!
//! Atoms, one state per minute:
//!
//! - `a`: fuzzy availability of the appliance, from the request-to-activation
//!   delay `A_i` against its monthly mean `M_i` and variance `σ_i²`;
//! - `d`: new metering data available (every 15 minutes);
//! - `c`: operational control signal sent, usually a minute or two after `d`;
//! - `s`: appliance connected (0 during outages);
//! - `p`: energy consumption is moderate (fuzzy).

use std::f64::consts::TAU;

use ftl_core::Trace;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

pub const ATOMS: [&str; 5] = ["a", "d", "c", "s", "p"];

const METERING_PERIOD: usize = 15;

/// Degree of "availability is high" for a delay deviation `delta = A − M`.
pub fn availability(delta: f64, variance: f64) -> f64 {
    if delta < -1.5 * variance {
        return 0.0;
    }
    ((delta + 1.5 * variance) / variance).clamp(0.0, 1.0)
}

/// One simulated day of `minutes` states (finite trace).
pub fn generate(minutes: usize, seed: u64) -> Trace {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let day = 1440.0;
    let mut states = Vec::with_capacity(minutes);
    let mut outage_left = 0usize;
    let mut control_due: Option<usize> = None;

    for i in 0..minutes {
        let phase = TAU * (i as f64 % day) / day;
        let load = 0.5 - 0.5 * (phase - 0.75 * TAU).cos();
        let mean = 2.0 + 1.5 * load;
        let variance = 0.2 + 0.3 * load;
        let spike = if rng.random_bool(0.01) { rng.random_range(1.0..4.0) } else { 0.0 };
        let actual = Normal::new(mean, variance.sqrt()).expect("positive sd").sample(&mut rng) - spike;
        let a = availability(actual - mean, variance);

        let d = i % METERING_PERIOD == 0;
        if d && rng.random_bool(0.95) {
            control_due = Some(i + rng.random_range(0..=2));
        }
        let c = control_due == Some(i);
        if c {
            control_due = None;
        }

        if outage_left == 0 && rng.random_bool(0.002) {
            outage_left = rng.random_range(1..=10);
        }
        let s = outage_left == 0;
        outage_left = outage_left.saturating_sub(1);

        let consumption = 0.4 + 0.4 * load + Normal::new(0.0, 0.1).expect("sd").sample(&mut rng);
        let p = ((0.9 - consumption) / 0.5).clamp(0.0, 1.0);

        states.push(vec![a, f64::from(u8::from(d)), f64::from(u8::from(c)), f64::from(u8::from(s)), p]);
    }
    Trace::new(ATOMS.iter().map(|a| a.to_string()).collect(), states, None).expect("valid demo trace")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn availability_boundaries() {
        let var = 0.4;
        assert_eq!(availability(-1.5 * var, var), 0.0);
        assert_eq!(availability(-2.0 * var, var), 0.0);
        assert_eq!(availability(-0.5 * var, var), 1.0);
        assert_eq!(availability(3.0, var), 1.0);
        assert!((availability(-var, var) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn deterministic_and_well_formed() {
        let t = generate(200, 3);
        assert_eq!(t, generate(200, 3));
        assert_ne!(t, generate(200, 4));
        assert_eq!(t.len(), 200);
        for (i, s) in t.states().iter().enumerate() {
            assert_eq!(s[1].value() == 1.0, i % METERING_PERIOD == 0);
            assert!(s[1..4].iter().all(|d| d.is_crisp()));
        }
    }
}
