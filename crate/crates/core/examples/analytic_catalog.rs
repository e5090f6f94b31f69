//! Closed-form dimensions of every curve family, as exact fractions.

use spiraldim::catalog::{
    dim_chirp, dim_conjecture_mn, dim_degenerate_nn, dim_elliptical, dim_power_spiral, dims_slowfast, parse_rational,
    DimensionEstimate,
};

fn show(name: &str, d: &DimensionEstimate) {
    let exact = d.value_exact.map(|r| r.to_string()).unwrap_or_default();
    println!("{name:<32} {exact:>8} = {:.7}  [{}]", d.value, d.method);
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for (n, k) in [(1, 0), (1, 1), (3, 2), (3, 11), (11, 2), (11, 11)] {
        show(&format!("(n,n) focus n={n} k={k}"), &dim_degenerate_nn(n, k)?);
    }
    show("(m,n) focus m=3 n=1 k=1", &dim_conjecture_mn(3, 1, 1)?);
    show("power spiral alpha=1/2", &dim_power_spiral(parse_rational("1/2")?)?);
    show("chirp alpha=1/2 beta=1", &dim_chirp(parse_rational("0.5")?, parse_rational("1")?)?);
    show("elliptical p0=1/2 q0=1", &dim_elliptical(parse_rational("1/2")?, parse_rational("1")?)?);
    for (n, k) in [(1, 1), (1, 2), (2, 3)] {
        let d = dims_slowfast(n, k)?;
        println!(
            "slow-fast n={n} k={k}: orbit {}, chirp {}, levels ~ l^-{}, gaps ~ l^-{}",
            d.dim_orbit, d.updim_chirp, d.level_exp, d.gap_exp
        );
    }
    if let Err(e) = dim_degenerate_nn(2, 1) {
        println!("n = 2 rejected: {e}");
    }
    Ok(())
}
