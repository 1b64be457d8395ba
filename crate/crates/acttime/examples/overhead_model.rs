//! Deployment cost of the countermeasure for a fully-connected layer:
//! the VGG-19 tail scenario (fan-in 4096) with the published
//! multiply/add costs and activation time ranges.
//!
//! Run with: cargo run --example overhead_model

use acttime::overhead::{
    overhead_report, NetworkCostModel, PAPER_PROTECTED_ACTIVATION, PAPER_UNPROTECTED_ACTIVATION,
};

fn main() -> acttime::Result<()> {
    let model = NetworkCostModel::vgg19_scenario();
    let report = overhead_report(&model, PAPER_UNPROTECTED_ACTIVATION, PAPER_PROTECTED_ACTIVATION)?;
    for layer in &report.layers {
        println!("layer {} ({} activation):", layer.layer_index, layer.activation);
        println!(
            "  per neuron: {:.5}-{:.5} s baseline, {:.5}-{:.5} s protected",
            layer.neuron_baseline.min,
            layer.neuron_baseline.max,
            layer.neuron_protected.min,
            layer.neuron_protected.max
        );
        println!(
            "  overhead: {:.2}%-{:.2}% endpoint-wise, {:.2}%-{:.2}% across extremes",
            layer.overhead_pct.min,
            layer.overhead_pct.max,
            layer.overhead_span_pct.min,
            layer.overhead_span_pct.max
        );
    }
    println!("\n{}", report.note);
    Ok(())
}
