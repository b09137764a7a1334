//! Allocation probabilities of the four prior kinds for the same cluster
//! statistics.

use mpdhp::prior::{allocation_prior, PriorConfig, PriorKind};

fn main() -> mpdhp::Result<()> {
    // one dominant, one weak and one silent cluster
    let stats = [4.0, 0.5, 0.0];
    for kind in PriorKind::ALL {
        let p = allocation_prior(&PriorConfig::new(kind), &stats)?;
        let cells: Vec<String> = p.iter().map(|x| format!("{x:.4}")).collect();
        println!("{:>5}: [{}]  (last entry opens a cluster)", kind.as_str(), cells.join(", "));
    }
    for r in [0.0, 0.5, 1.0, 2.0] {
        let config = PriorConfig { r, ..PriorConfig::new(PriorKind::Mpdhp) };
        let p = allocation_prior(&config, &stats)?;
        println!("r = {r}: {:.4?}", p);
    }
    Ok(())
}
