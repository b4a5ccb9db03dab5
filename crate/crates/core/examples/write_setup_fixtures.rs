//! Regenerates `fixtures/setups/vertex_XX.json` from the analytic plate solver.
//!
//! Usage: cargo run -p exclusivity-core --example write_setup_fixtures -- [DIR]

use exclusivity_core::fixtures::table_vectors;
use exclusivity_core::photonics::preparation_setup;
use serde_json::json;
use std::path::PathBuf;

/// Snaps solver noise (e.g. 22.499999999999996) to nine decimals.
fn round_angle(deg: f64) -> f64 {
    let r = (deg * 1e9).round() / 1e9;
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/setups"));
    std::fs::create_dir_all(&dir)?;
    for (k, v) in table_vectors().to_complex64().iter().enumerate() {
        let target = [v[0], v[1], v[2], v[3]];
        let mut setup = serde_json::to_value(preparation_setup(&target)?)?;
        for e in setup["elements"].as_array_mut().into_iter().flatten() {
            if let Some(deg) = e["deg"].as_f64() {
                e["deg"] = json!(round_angle(deg));
            }
        }
        let path = dir.join(format!("vertex_{:02}.json", k + 1));
        std::fs::write(&path, serde_json::to_string_pretty(&setup)? + "\n")?;
        println!("{}", path.display());
    }
    Ok(())
}
