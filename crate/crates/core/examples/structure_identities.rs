//! Verify the almost contact identities of the built-in model spaces.

use lightlike::ambient::{sample_box, AmbientStructure};

fn main() -> lightlike::Result<()> {
    let spaces = [
        ("cosymplectic R^13_4", AmbientStructure::cosymplectic(6, 4)?),
        ("sasakian R^13", AmbientStructure::sasakian(6, 0)?),
        ("sasakian R^13_4", AmbientStructure::sasakian(6, 4)?),
    ];
    for (name, space) in spaces {
        let pts = sample_box(&vec![(-1.0, 1.0); space.dim()], 50, 7);
        let r = space.check_structure(&pts, 7, 1e-9)?;
        println!("{name}: mu = {}, passed = {}", r.mu, r.passed());
        for (k, v) in &r.residuals {
            println!("  {k:<22} {v:.2e}");
        }
    }
    Ok(())
}
