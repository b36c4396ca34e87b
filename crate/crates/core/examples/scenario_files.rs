// Scenario configurations run through the library, as the CLI does.

use std::error::Error;

use bloch_poincare::scenario::{emit, parse_batch, run, run_batch, summary, Format, Overrides, OutputSpec, ScenarioConfig};

const EVOLVE: &str = r#"{
    "kind": "evolve",
    "parameters": {
        "initial": [[1, 0], [0, 0]],
        "target": [[0.7071067811865476, 0], [0.7071067811865476, 0]],
        "energy": 1.0,
        "samples": 5
    }
}"#;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let cfg = ScenarioConfig::parse(EVOLVE, None, &Overrides::default())?;
    let out = run(&cfg)?;
    println!("{}", summary(&out));
    let csv = emit(&out, &OutputSpec { path: None, format: Format::Csv })?.unwrap_or_default();
    print!("{csv}");

    let batch = format!(
        r#"{{"scenarios": [{EVOLVE}, {{"kind": "optimize_coherence", "parameters": {{"jxx": 3, "jyy": 1, "jxy": [1, 0]}}}}]}}"#
    );
    let cfgs = parse_batch(&batch, &Overrides::default())?;
    for result in run_batch(&cfgs) {
        println!("{}", summary(&result?));
    }

    let dir = std::env::temp_dir().join(format!("bloch-poincare-example-{}", std::process::id()));
    std::fs::create_dir_all(&dir)?;
    let path = dir.join("rotation.json");
    let cfg = ScenarioConfig::parse(
        r#"{"parameters": {"jxx": 3, "jyy": 1, "jxy": [1, 0]}}"#,
        Some(bloch_poincare::scenario::Kind::OptimizeCoherence),
        &Overrides { output: Some(path.clone()), ..Overrides::default() },
    )?;
    emit(&run(&cfg)?, &cfg.output)?;
    println!("wrote {} ({} bytes)", path.display(), std::fs::metadata(&path)?.len());
    std::fs::remove_dir_all(&dir)?;
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
