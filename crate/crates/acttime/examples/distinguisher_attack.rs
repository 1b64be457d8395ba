//! The attack the countermeasure must defeat: classify which
//! activation function a victim uses from a handful of timing
//! queries, by nearest expected mean. Near-perfect without the
//! countermeasure, near chance with it.
//!
//! Run with: cargo run --example distinguisher_attack

use acttime::activation::ActivationKind;
use acttime::countermeasure::DelayDistribution;
use acttime::leakage::accuracy_sweep;
use acttime::profile::paper_profiles;

fn main() -> acttime::Result<()> {
    let candidates: Vec<_> = ActivationKind::ALL.iter().map(|k| &paper_profiles()[k]).collect();
    let dist = DelayDistribution::paper_calibrated();

    for (label, countermeasure) in [("unprotected", None), ("protected", Some(&dist))] {
        let table = accuracy_sweep(&candidates, countermeasure, 10, 1000, 5)?;
        println!(
            "{label}: overall accuracy {:.1}% (10 queries/trial, 1000 trials/function)",
            table.overall_accuracy * 100.0
        );
        for (truth, row) in &table.confusion {
            let counts: Vec<String> =
                row.iter().map(|(pred, n)| format!("{pred} {n}")).collect();
            println!("  truth {truth:<8} -> {}", counts.join(", "));
        }
        println!();
    }
    println!("(three-way chance level is 33.3%)");
    Ok(())
}
