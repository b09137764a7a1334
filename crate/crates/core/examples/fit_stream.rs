//! Streams a generated dataset through the clusterer and scores each
//! prior kind against the true labels.

use mpdhp::eval::nmi;
use mpdhp::prior::PriorKind;
use mpdhp::smc::{Smc, SmcConfig};
use mpdhp::synth::{generate_dataset, GenerationSpec};

fn main() -> mpdhp::Result<()> {
    let spec = GenerationSpec {
        n_events: 1000,
        textual_overlap: 0.4,
        seed: 3,
        ..GenerationSpec::default()
    };
    let data = generate_dataset(&spec)?;
    let labels = data.labels();
    for kind in PriorKind::ALL {
        let config = SmcConfig {
            n_samples: 500,
            ..SmcConfig::new(spec.vocab_size).with_prior(kind).with_seed(1)
        };
        let mut smc = Smc::new(config)?;
        for e in &data.dataset.events {
            smc.process(e.time, &e.counts()?)?;
        }
        let best = &smc.particles()[smc.best_particle()];
        let pred: Vec<u64> = best.assignments().iter().map(|c| c.0).collect();
        println!(
            "{:>5}: NMI {:.3}, {} clusters opened, {} active at the end",
            kind.as_str(),
            nmi(&labels, &pred)?,
            best.clusters_opened(),
            best.active().len()
        );
    }
    Ok(())
}
