//! A tiny experiment grid: every prior kind at two textual overlaps,
//! written to CSV and SVG under the system temp directory.

use mpdhp::eval::{run_grid, svg, ExperimentGrid};
use mpdhp::prior::PriorKind;

fn main() -> mpdhp::Result<()> {
    let grid = ExperimentGrid {
        priors: PriorKind::ALL.to_vec(),
        textual_overlap: vec![0.0, 1.0],
        n_samples: vec![300],
        n_events: 500,
        replications: 2,
        seed: 5,
        ..ExperimentGrid::default()
    };
    let result = run_grid(&grid, 1)?;
    for a in &result.aggregates {
        println!(
            "{:>5} overlap {}: NMI {:.3} ± {:.3}",
            a.prior.as_str(),
            a.textual_overlap,
            a.mean_nmi,
            a.stderr_nmi
        );
    }
    let dir = std::env::temp_dir().join("mpdhp-grid-example");
    result.write_csv(&dir)?;
    let series: Vec<svg::Series> = PriorKind::ALL
        .iter()
        .map(|&k| svg::Series {
            name: k.as_str().to_uppercase(),
            points: result
                .series(k)
                .iter()
                .map(|a| (a.textual_overlap, a.mean_nmi, a.stderr_nmi))
                .collect(),
        })
        .collect();
    std::fs::write(dir.join("nmi.svg"), svg::line_chart("NMI", "textual overlap", "NMI", &series))?;
    println!("tables and chart in {}", dir.display());
    Ok(())
}
