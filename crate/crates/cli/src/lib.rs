//! Front end shared by the `pro_sphwv` and `obl_sphwv` programs.
//!
//! Every invocation names seven mandatory flags (`-max_memory`, `-prec`,
//! `-verbose`, `-c`, `-m`, `-n`, `-w`) followed by flags specific to the
//! work requested. Computed quantities are cached under `./data/`.

pub mod args;
pub mod run;

pub use args::{parse_invocation, ArgType, Grid, Invocation, ParseError, Work};
pub use run::{exit, run, RunError};

use spheroidal::SpheroidalKind;

/// Parse `std::env::args`, run in the current directory and return the
/// process exit code.
pub fn main_for(kind: SpheroidalKind) -> i32 {
    let argv: Vec<String> = std::env::args().skip(1).collect();
    let inv = match parse_invocation(kind, &argv) {
        Ok(inv) => inv,
        Err(e) => {
            eprintln!("error: {e}");
            return exit::PARSE;
        }
    };
    let stdout = std::io::stdout();
    let mut out = std::io::BufWriter::new(stdout.lock());
    let mut diag = std::io::stderr();
    match run(&inv, std::path::Path::new("."), &mut out, &mut diag) {
        Ok(()) => exit::OK,
        Err(e) => {
            drop(out);
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
