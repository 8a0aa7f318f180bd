//! Drive the same engine as the `gkz` binary from a problem document.

use gkz::cli::{self, Command, Format, Options};

const PROBLEM: &str = r#"{
  "matrix": [[1, 1, 1, 1], [0, 1, 2, 3]],
  "beta": ["1/2", "1/3"],
  "weight": [1, 2, 5, 1],
  "window": {"weight_hi": "6"}
}"#;

fn main() -> Result<(), gkz::error::GkzError> {
    let problem = cli::parse_problem(PROBLEM)?;
    for command in [Command::Triangulate, Command::Cone, Command::Verify] {
        let out = cli::run(command, Some(&problem), &Options::default())?;
        println!("== {} (passed {})", command.name(), out.passed);
        print!("{}", cli::render(&out.report, Format::Text));
    }
    Ok(())
}
