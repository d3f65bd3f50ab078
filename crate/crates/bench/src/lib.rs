//! Fixtures shared by the benchmarks.

use grprep_core::dist::Distribution;
use grprep_core::quantum::{Gate, Statevector};

/// Standard normal on `[-5, 5]`.
pub fn normal() -> Distribution {
    Distribution::gaussian(0.0, 1.0).expect("valid parameters")
}

/// Two-component mixture, whose CDF is costlier than a single Gaussian.
pub fn mixture() -> Distribution {
    Distribution::mixture(&[(0.3, -2.0, 0.7), (0.7, 1.5, 1.2)], -6.0, 6.0)
        .expect("valid parameters")
}

/// Multiplexed rotation on the last of `k + 1` qubits with `2^k` angles.
pub fn multiplexed(k: usize) -> Gate {
    Gate::MultiplexedRy {
        target: k,
        controls: (0..k).collect(),
        angles: (0..1usize << k)
            .map(|c| 0.1 + 0.37 * c as f64 % 1.5)
            .collect(),
    }
}

/// Deterministic dense state with nonzero phases everywhere.
pub fn spread_state(n: usize) -> Statevector {
    let mut s = Statevector::uniform(n).expect("valid register");
    for g in [
        Gate::Ry {
            target: 0,
            angle: 0.4,
        },
        Gate::Qft,
    ] {
        s = grprep_core::quantum::apply_gate(&s, &g).expect("valid gate");
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_are_valid() {
        assert!((spread_state(4).norm_sqr() - 1.0).abs() < 1e-12);
        multiplexed(3).validate(4).unwrap();
        assert!(mixture().cdf_available() && normal().cdf_available());
    }
}
