//! Measure real activation-function timings on this host with the
//! monotonic clock. Modern desktop CPUs evaluate these functions far
//! below typical clock resolution, which is why the toolkit simulates
//! timings from calibrated profiles instead; this example shows the
//! raw measurement and its resolution warning.
//!
//! Run with: cargo run --release --example host_measurement

use acttime::activation::ActivationKind;
use acttime::host::measure_host_time;

fn main() -> acttime::Result<()> {
    for kind in ActivationKind::ALL {
        for x in [-1.0, 0.0, 1.0] {
            let m = measure_host_time(kind, x, 1000)?;
            println!(
                "{kind:<8} x = {x:+.1}: {:.3e} s per call{}",
                m.seconds,
                if m.resolution_warning { "  (below clock resolution)" } else { "" }
            );
        }
    }
    Ok(())
}
