//! Simulates a two-cluster Hawkes process by thinning and checks the
//! event count against the branching identity and the rescaled gaps
//! against a unit exponential.

use mpdhp::eval::ks_exponential;
use mpdhp::hawkes::{rescaled_gaps, simulate, ClusterId, InfluenceTensor, SimulationConfig};
use mpdhp::kernel::KernelBasis;

fn main() -> mpdhp::Result<()> {
    let basis = KernelBasis::synthetic();
    let mut tensor = InfluenceTensor::from_nested(
        vec![ClusterId(0), ClusterId(1)],
        vec![
            vec![vec![0.3, 0.1, 0.0], vec![0.0, 0.2, 0.2]],
            vec![vec![0.1, 0.0, 0.1], vec![0.2, 0.2, 0.0]],
        ],
    )?;
    let rho = tensor.spectral_radius();
    tensor.scale(0.5 / rho);
    let mu = 0.5;
    let horizon = 2000.0;
    let config = SimulationConfig {
        immigrant_rates: vec![mu, mu],
        max_events: usize::MAX,
        max_time: Some(horizon),
        seed: 7,
    };
    let history = simulate(&tensor, &basis, &config)?;
    let expected = 2.0 * mu * horizon / (1.0 - 0.5);
    println!("{} events, branching identity predicts {expected:.0}", history.len());

    let gaps = rescaled_gaps(&tensor, &basis, &config.immigrant_rates, &history)?;
    println!("KS p-value of the rescaled gaps against Exp(1): {:.3}", ks_exponential(&gaps));
    Ok(())
}
