//! Fixed-vs-random leakage assessment: for each activation, compare a
//! fixed-input population against a random-input population with
//! Welch's t-test, without and with the countermeasure. |t| > 4.5
//! indicates data-dependent timing leakage.
//!
//! Run with: cargo run --example tvla_assessment

use acttime::activation::ActivationKind;
use acttime::countermeasure::DelayDistribution;
use acttime::leakage::{TvlaCampaign, TVLA_THRESHOLD};
use acttime::profile::paper_profiles;

fn main() -> acttime::Result<()> {
    println!("threshold |t| = {TVLA_THRESHOLD}, 5000 timings per set\n");
    for kind in ActivationKind::ALL {
        let profile = &paper_profiles()[&kind];
        let mut campaign = TvlaCampaign::new(profile);
        let (unprotected, fixed) = campaign.run(42)?;
        campaign.countermeasure = Some(DelayDistribution::paper_calibrated());
        campaign.fixed_input = Some(fixed);
        let (protected, _) = campaign.run(42)?;
        println!("{kind} (fixed input {fixed:+.3}):");
        println!("  unprotected  t = {:>10.2}  leaks = {}", unprotected.t_statistic, unprotected.leaks);
        println!("  protected    t = {:>10.2}  leaks = {}", protected.t_statistic, protected.leaks);
    }
    Ok(())
}
