//! Running the full check suite on a fixture config and printing the text
//! report. Pass a config path to use another experiment.

use carflow::config::parse_config;
use carflow::report::{emit_report, Format};
use carflow::suite::{run_suite, SuiteOptions};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/halfplane.json").into());
    let experiment = parse_config(&std::fs::read_to_string(&path)?)?.build()?;
    let report = run_suite(&experiment, SuiteOptions { timings: true });
    print!("{}", String::from_utf8(emit_report(&report, Format::Text))?);
    std::process::exit(report.exit_code());
}
