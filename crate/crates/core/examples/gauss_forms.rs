//! Second fundamental form and Gauss-Weingarten residuals of a cylinder.

use lightlike::scenario::{bundled, Scenario};
use lightlike::submanifold::{FramePoint, SecondFundamental};

fn main() -> lightlike::Result<()> {
    let scn = Scenario::parse(bundled::CYLINDER)?;
    let fp = FramePoint::new(&scn.space, &scn.immersion, &[0.5, 0.0], &scn.tolerances)?;
    let (sf, residuals) = SecondFundamental::compute(&fp);
    println!("screen frame: {:?}", fp.frame.screen);
    println!("normal: {:?}", fp.frame.transversal[0]);
    for k in 0..sf.t() {
        for l in 0..sf.t() {
            println!("h(X{k}, X{l}) = {:+.12}", sf.hs[0][k][l]);
        }
    }
    for (name, v) in &residuals.residuals {
        println!("  {name:<40} {v:.2e}");
    }
    Ok(())
}
