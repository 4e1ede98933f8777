//! Classify a bundled 3-lightlike submanifold and print its certificates.

use lightlike::analysis::{analyze_point, Options};
use lightlike::scenario::{bundled, Scenario};

fn main() -> lightlike::Result<()> {
    let scn = Scenario::parse(bundled::MINIMAL_ASCREEN)?;
    let p = scn.samples.resolve(None, None)[0].clone();
    let c = analyze_point(&scn, &p, &Options::default())?;
    let q = &c.qgcr;
    println!(
        "radical rank {}, screen {}, screen transversal {}",
        c.r, c.s, c.w
    );
    println!(
        "invariant radical {:?}, anti-invariant {:?}",
        q.invariant_rad, q.anti_rad
    );
    println!("invariant screen {:?}", q.invariant_screen);
    println!(
        "null into screen {:?}, transversal into screen {:?}",
        q.null_to_screen, q.transversal_to_screen
    );
    for s in &c.ascreen.sigma {
        println!("sigma on radical field {} = {:.12}", s.index, s.sigma);
    }
    println!(
        "xi = sum a E + sum b N with a = {:?}, b = {:?}",
        c.xi.a, c.xi.b
    );
    for (k, v) in c.verdicts() {
        if !k.contains('.') {
            println!("  {k:<24} {v}");
        }
    }
    Ok(())
}
