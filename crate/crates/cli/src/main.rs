//! `regtopos`: command-line front end.
//!
//! Exit status: 0 when the command succeeds or the checked property holds,
//! 1 when the property fails or a verdict is negative, 2 on invalid input.

mod algebra;
mod sites;

use std::error::Error;
use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::Value;

pub type Fail = Box<dyn Error>;

/// Result of one command: human text, machine form and verdict.
pub struct Outcome {
    pub text: String,
    pub json: Value,
    pub ok: bool,
}

impl Outcome {
    pub fn new(text: impl Into<String>, json: Value, ok: bool) -> Self {
        Outcome { text: text.into(), json, ok }
    }

    pub fn done(text: impl Into<String>, json: Value) -> Self {
        Outcome::new(text, json, true)
    }
}

#[derive(Parser)]
#[command(name = "regtopos", version, about = "Regular rings, characteristic sets and finite-site topologies")]
struct Cli {
    /// Machine-readable JSON output.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Irreducible polynomials over Z/p.
    #[command(subcommand)]
    Irr(algebra::IrrCmd),
    /// Finite fields.
    #[command(subcommand)]
    Field(algebra::FieldCmd),
    /// Finite regular rings.
    #[command(subcommand)]
    Ring(algebra::RingCmd),
    /// Presented regular rings: characteristic and type sets.
    #[command(subcommand)]
    Pres(algebra::PresCmd),
    /// Finite sites and Grothendieck topologies.
    #[command(subcommand)]
    Site(sites::SiteCmd),
    /// Truncations of the site of finite regular rings.
    #[command(subcommand)]
    Fieldsite(sites::FieldsiteCmd),
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Irr(c) => algebra::irr(c),
        Command::Field(c) => algebra::field(c),
        Command::Ring(c) => algebra::ring(c),
        Command::Pres(c) => algebra::pres(c),
        Command::Site(c) => sites::site(c),
        Command::Fieldsite(c) => sites::fieldsite(c),
    };
    match result {
        Ok(out) => {
            let body = if cli.json {
                serde_json::to_string_pretty(&out.json).expect("JSON values serialize")
            } else {
                out.text
            };
            // a closed pipe downstream is not our failure
            let _ = writeln!(std::io::stdout(), "{body}");
            ExitCode::from(if out.ok { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
