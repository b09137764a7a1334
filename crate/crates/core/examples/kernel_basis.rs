//! Prints the synthetic kernel basis on a coarse grid, with the cumulative
//! mass each bump has accrued.

use mpdhp::kernel::KernelBasis;

fn main() -> mpdhp::Result<()> {
    let basis = KernelBasis::synthetic();
    println!("horizon {} h, {} components", basis.horizon(), basis.len());
    println!("{:>6} {:>30} {:>30}", "lag", "density", "mass since 0");
    for step in 0..=14 {
        let dt = step as f64;
        let fmt = |v: Vec<f64>| v.iter().map(|x| format!("{x:9.5}")).collect::<Vec<_>>().join(" ");
        println!(
            "{dt:>6.1} {:>30} {:>30}",
            fmt(basis.kernel_value(dt)?),
            fmt(basis.kernel_integral(0.0, dt)?)
        );
    }
    println!("saturated mass {:?}", basis.saturated_mass());
    Ok(())
}
