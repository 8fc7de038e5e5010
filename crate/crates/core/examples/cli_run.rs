//! Drives the command-line front end in-process and prints its CSV.

use ofdma_varalloc::cli::run_cli;

fn main() {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run_cli(
        ["ofdma-sim", "sweep", "--axis", "users", "--values", "8,12,16", "--metric", "jain", "--slots", "50"],
        &mut out,
        &mut err,
    );
    print!("{}", String::from_utf8_lossy(&out));
    eprint!("{}", String::from_utf8_lossy(&err));
    println!("exit code {code}");
}
