// Spectra of |h(T)|^{-1} h(A) and the number of eigenvalues away from +-1.
// Writes CSV and SVG files to a temporary directory.
//
// $ cargo run --release --example spectrum_clusters
use circprec::experiment::{format_cluster_reports, ExperimentConfig, Runner};

fn main() -> circprec::Result<()> {
    let runner = Runner::new();
    let dir = std::env::temp_dir().join("circprec_spectrum");
    for func in ["exp", "cos"] {
        let config = ExperimentConfig::from_map(
            &[("func", func), ("precond", "superoptimal-abs"), ("n", "64,128,256")]
                .iter()
                .map(|(k, v)| (k.to_string(), v.to_string()))
                .collect(),
        )?;
        let reports = runner.spectrum(&config)?;
        print!("{}", format_cluster_reports(&reports));
        circprec::spectrum::write_reports(&reports, &dir)?;
    }
    println!("plots in {}", dir.display());
    Ok(())
}
