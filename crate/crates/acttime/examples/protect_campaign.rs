//! Apply the desynchronization countermeasure to fresh campaigns and
//! compare unprotected and protected summaries. With the delays added,
//! the three activations become statistically indistinguishable.
//!
//! Run with: cargo run --example protect_campaign

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use acttime::activation::ActivationKind;
use acttime::countermeasure::{protect_trace, DelayDistribution};
use acttime::profile::paper_profiles;
use acttime::trace::{capture_trace, InputSampler};

fn main() -> acttime::Result<()> {
    let sampler = InputSampler::Uniform { lo: -2.0, hi: 2.0 };
    let dist = DelayDistribution::table2_regime();
    println!("delay profile: mean {} s, variance {} s^2\n", dist.mean, dist.variance);
    println!(
        "{:<10} {:>12} {:>12} {:>12} {:>12}",
        "function", "base mean", "prot mean", "prot min", "prot max"
    );
    for kind in ActivationKind::ALL {
        let base = capture_trace(&paper_profiles()[&kind], 2000, sampler, 11)?;
        let mut rng = ChaCha12Rng::seed_from_u64(12);
        let protected = protect_trace(&base, &dist, 12, &mut rng)?;
        let b = base.stats();
        let p = protected.stats();
        println!(
            "{:<10} {:>12.4} {:>12.4} {:>12.4} {:>12.4}",
            kind,
            b.mean() * 1e3,
            p.mean() * 1e3,
            p.min() * 1e3,
            p.max() * 1e3
        );
    }
    println!("\n(times in ms; protected means cluster together near the delay mean)");
    Ok(())
}
