//! Compare the bundled worked examples with their closed-form values.

use lightlike::reproduce::{reproduce, EXAMPLES};

fn main() -> lightlike::Result<()> {
    for id in EXAMPLES {
        let r = reproduce(id)?;
        println!("{}", r.to_text());
    }
    Ok(())
}
