use std::process::ExitCode;

use clap::Parser;

use gsp4_serre::cli::{execute, Args};

fn main() -> ExitCode {
    let args = Args::parse();
    match execute(&args) {
        Ok((out, code)) => {
            print!("{out}");
            if !out.ends_with('\n') {
                println!();
            }
            ExitCode::from(code as u8)
        }
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
