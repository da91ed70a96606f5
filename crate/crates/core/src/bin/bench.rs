//! Writes the benchmark families as `.smt2` files plus a verdict manifest.

use std::path::PathBuf;

use clap::Parser;
use idl_smt::testkit::{write_suite, Family};

#[derive(Parser)]
#[command(name = "idl-smt-bench")]
struct Args {
    /// Output directory.
    #[arg(long, default_value = "bench")]
    out: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Largest size of each family.
    #[arg(long, default_value_t = 200)]
    max: usize,
}

fn main() {
    let args = Args::parse();
    let mut families = Vec::new();
    let mut n = 3;
    while n <= args.max {
        families.push(Family::NegativeCycleChain(n));
        families.push(Family::DiamondGrid(n));
        families.push(Family::WindowScheduling(n.min(24), 1 + n.min(24) / 4));
        n *= 2;
    }
    families.dedup();
    match write_suite(&args.out, &families, args.seed) {
        Ok(manifest) => print!("{manifest}"),
        Err(e) => {
            eprintln!("idl-smt-bench: {e}");
            std::process::exit(1);
        }
    }
}
