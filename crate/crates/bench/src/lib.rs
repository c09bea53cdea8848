//! Fixed scenarios shared by the benchmarks.

use macfcs_core::{GaussianSystem, SourceTriple, Topology};

/// Unit-distance triangle with unit power limits.
pub fn unit_topology() -> Topology {
    Topology::equilateral(1.0, 1.0).expect("valid topology")
}

/// Sources close together, both far from the destination.
pub fn clustered_topology() -> Topology {
    Topology::triangle(0.3, 1.5, 1.5, 1.0).expect("valid topology")
}

pub fn unit_triple() -> SourceTriple {
    SourceTriple::new(0.5, 0.5, 0.5).expect("valid triple")
}

/// `n` outputs, each a dense pseudo-random mix of `n` latents.
pub fn dense_system(n: usize) -> GaussianSystem {
    let mut sys = GaussianSystem::new(n);
    let mut state = 0x2545_f491_4f6c_dd1d_u64;
    for i in 0..n {
        let row = (0..n)
            .map(|_| {
                state ^= state << 13;
                state ^= state >> 7;
                state ^= state << 17;
                (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
            })
            .collect();
        sys.add(&format!("V{i}"), row).expect("fresh name");
    }
    sys
}
