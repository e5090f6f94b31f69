//! Box-count a sampled point cloud: a CSV file given on the command line, or
//! a power spiral sampled densely enough for the smallest box size.

use spiraldim::boxcount::{count_boxes_median, fit_dimension, geometric_eps, sample_adaptive, CountSeries, GridOptions, PointCloud};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (lo, hi) = (1e-3, 1e-1);
    let cloud = match std::env::args().nth(1) {
        Some(path) => PointCloud::read_csv(std::fs::File::open(path)?)?,
        None => {
            // r = phi^-1/2, followed until the turns are closer than lo
            let curve = |phi: f64| {
                let r = phi.powf(-0.5);
                [r * phi.cos(), r * phi.sin()]
            };
            sample_adaptive(curve, (1.0, 1.0 / (lo * lo)), lo, 1 << 26)?
        }
    };
    let opts = GridOptions::default();
    let series = CountSeries::from_counts(geometric_eps(lo, hi, 12), |e| Ok(count_boxes_median(&cloud, e, &opts)? as u64))?;
    series.write_csv(std::io::stdout())?;
    let fit = fit_dimension(&series, (lo, hi))?;
    // the spiral's exact value is 4/3
    eprintln!("{} points in {}D: dimension {:.4} +- {:.4}", cloud.len(), cloud.dim(), fit.value, fit.uncertainty.unwrap_or(0.0));
    Ok(())
}
