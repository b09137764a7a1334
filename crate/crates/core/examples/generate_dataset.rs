//! Generates a small labelled stream and reports the overlaps it hit.

use mpdhp::synth::{generate_dataset, GenerationSpec};

fn main() -> mpdhp::Result<()> {
    let spec = GenerationSpec {
        n_clusters: 3,
        n_events: 1000,
        textual_overlap: 0.3,
        temporal_overlap: 0.5,
        seed: 11,
        ..GenerationSpec::default()
    };
    let data = generate_dataset(&spec)?;
    let m = data.manifest();
    println!("{} events, label counts {:?}", m.n_events, m.label_counts);
    println!(
        "temporal overlap {:.3} (asked {}), textual overlap {:.3} (asked {})",
        m.achieved_temporal_overlap, spec.temporal_overlap, m.achieved_textual_overlap, spec.textual_overlap
    );
    println!("spectral radius of the generating tensor {:.6}", m.spectral_radius);
    for e in data.dataset.events.iter().take(5) {
        println!("t = {:8.3} h  cluster {:?}  {} tokens", e.time, e.label, e.tokens.len());
    }
    Ok(())
}
