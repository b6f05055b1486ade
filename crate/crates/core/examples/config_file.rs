// Experiments from a key = value configuration, as read by `circprec --config`.
//
// $ cargo run --release --example config_file
use circprec::experiment::{format_reports, parse_config_file, ExperimentConfig, Runner};

const CONFIG: &str = "
# cubic polynomial with Strang's preconditioner
func = cubic
precond = strang-abs
method = cg
n = 128, 256
tol = 1e-7
";

fn main() -> circprec::Result<()> {
    let mut map = parse_config_file(CONFIG)?;
    let config = ExperimentConfig::from_map(&map)?;
    print!("{}", format_reports(&Runner::new().solve(&config)?));

    // invalid combinations are rejected before any work
    map.insert("func".into(), "cos".into());
    match ExperimentConfig::from_map(&map) {
        Ok(_) => unreachable!("cg with cos is rejected"),
        Err(e) => println!("rejected: {e}"),
    }
    Ok(())
}
