//! Runs one experiment at reduced resolution and lists its manifest.

use radial_born::harness::{run_experiment, ExperimentConfig, Overrides, Settings};

fn main() -> radial_born::Result<()> {
    let id = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(3);
    let settings = Settings::from_env(&Overrides { terms: Some(80), pieces: Some(500), ..Overrides::default() })?;
    let out = std::env::temp_dir().join("radial-born-experiments");
    let config = ExperimentConfig::new(id, &settings, &out)?;
    let manifest = run_experiment(&config, None)?;
    println!("experiment {id} ({}) in {}", config.title, config.out_dir.display());
    for f in &manifest.files {
        println!("  {}  {}", &f.sha256[..12], f.name);
    }
    for n in manifest.notes.iter().chain(&manifest.failures) {
        println!("  {n}");
    }
    Ok(())
}
