// Iteration counts for one of the five tables.
//
// $ cargo run --release --example reproduce_table -- 4 128 256
use circprec::experiment::{format_reports, table_layout, Runner};
use circprec::krylov::SolveOptions;

fn main() -> circprec::Result<()> {
    let mut args = std::env::args().skip(1);
    let id: u8 = args.next().map(|s| s.parse().expect("table id 1-5")).unwrap_or(4);
    let wanted: Vec<usize> = args.map(|s| s.parse().expect("order n")).collect();
    let layout = table_layout(id)?;
    let sizes: Vec<_> =
        layout.sizes.iter().copied().filter(|(n, _)| wanted.is_empty() || wanted.contains(n)).collect();
    let reports = Runner::new().table(id, Some(&sizes), &SolveOptions::default())?;
    print!("{}", format_reports(&reports));
    Ok(())
}
