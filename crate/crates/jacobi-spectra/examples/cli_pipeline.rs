//! Drive the command-line front end in-process: write a spec, run two
//! subcommands and read the JSON rows back.

use clap::Parser;
use jacobi_spectra::cli::{execute, RunConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = tempfile::tempdir()?;
    let one = dir.path().join("b0_one.json");
    std::fs::write(&one, r#"{"a": [], "b": [1.0]}"#)?;
    let b03 = dir.path().join("b03.json");
    std::fs::write(&b03, r#"{"a": [0.5], "b": [0.3]}"#)?;
    let (one, b03) = (one.to_str().unwrap(), b03.to_str().unwrap());

    for args in [
        vec!["jacobi-spectra", "spectrum", "--spec", one, "--radius", "0.99", "--oracle", "400"],
        vec!["jacobi-spectra", "scatter", "roundtrip", "--spec", b03, "--tol", "1e-6", "--format", "json"],
    ] {
        let cfg = RunConfig::try_parse_from(&args)?;
        let (table, status) = execute(&cfg)?;
        let command: Vec<&str> = args[1..].iter().copied().take_while(|a| !a.starts_with("--")).collect();
        println!("{}: {status:?}", command.join(" "));
        print!("{}", table.to_json());
    }
    Ok(())
}
