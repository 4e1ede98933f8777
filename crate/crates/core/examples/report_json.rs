//! Run a full analysis and round-trip the report through JSON.

use lightlike::analysis::{analyze, Options};
use lightlike::report::Report;
use lightlike::scenario::{bundled, Scenario};

fn main() -> lightlike::Result<()> {
    let scn = Scenario::parse(bundled::COSCREEN_COSYMPLECTIC)?;
    let report = analyze(
        &scn,
        &Options {
            samples: Some(3),
            ..Options::default()
        },
    )?;
    let json = report.to_json();
    let back = Report::from_json(&json)?;
    assert_eq!(back, report);
    println!("{} bytes of JSON, schema {}", json.len(), back.schema);
    println!("{}", back.to_text());
    Ok(())
}
