//! Resonances, free-constant counts and the meromorphic classification.

use kowalewski::lie::Curvature;
use kowalewski::painleve::{classify, MeromorphicClass, RatioParams, SpectrumOptions};

/// Number of grid points classified as Kowalewski.
pub fn run_example() -> usize {
    let opts = SpectrumOptions::default();
    let mut kowalewski = 0;
    for (m, a1, a3) in [
        (0.5, 1.0, 0.0),
        (0.5, 1.0, 0.5),
        (0.7, 1.0, 0.2),
        (2.0, 1.0, 0.0),
        (0.0, 1.0, 0.0),
        (1.0, 1.0, 0.3),
        (0.4, 0.0, 1.0),
        (0.4, 0.0, 0.0),
    ] {
        let p = RatioParams::new(m, 1.0, a1, a3, Curvature::Flat).unwrap();
        let c = classify(&p, &opts).unwrap();
        println!("m={m:<4} a1={a1:<3} a3={a3:<4} -> {}", c.class);
        if let Some(s) = &c.spectrum {
            for b in &s.branches {
                println!(
                    "    {}  resonances {:<14} free constants {}",
                    b.label(),
                    b.resonance_list(),
                    b.free_constants
                );
            }
        }
        if c.class == MeromorphicClass::Kowalewski {
            kowalewski += 1;
        }
    }
    kowalewski
}

fn main() {
    run_example();
}
