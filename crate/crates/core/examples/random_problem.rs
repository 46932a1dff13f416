//! Prints a reproducible random torus problem as a problem file.
//!
//! Usage: `cargo run --example random_problem -- <rank> <weights> <seed>`

use knx::group::GroupKind;
use knx::io::ProblemFile;
use knx::oracle::random_problem;

fn main() -> knx::Result<()> {
    let args: Vec<u64> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let (rank, count, seed) = match args[..] {
        [r, c, s] => (r as usize, c as usize, s),
        _ => (2, 4, 7),
    };
    let problem = random_problem(rank, count, seed)?;
    let file = ProblemFile::from_problem(&problem, GroupKind::Torus { rank });
    println!("{}", file.render());
    Ok(())
}
