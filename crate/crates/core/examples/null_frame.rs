//! Radical, screen and null transversal vectors of a degenerate plane in
//! R^4 with signature (-, -, +, +).

use lightlike::linalg::{null_transversal_frame, radical, signed_orthonormalize, Mat};

fn main() -> lightlike::Result<()> {
    let d = [-1.0, -1.0, 1.0, 1.0];
    let g = Mat::from_fn(4, 4, |i, j| if i == j { d[i] } else { 0.0 });
    let id = Mat::from_fn(4, 4, |i, j| if i == j { 1.0 } else { 0.0 });
    // a null direction and a spacelike one orthogonal to it
    let span = vec![vec![1.0, 0.0, 1.0, 0.0], vec![0.0, 0.0, 0.0, 2.0]];
    let rad = radical(&span, &g, 1e-9)?;
    println!("radical: {:?}", rad.vectors);
    let screen = signed_orthonormalize(&span[1..], &g, 1e-9)?;
    println!(
        "screen: {:?} with signs {:?}",
        screen.vectors, screen.signatures
    );
    // complement of the radical in the normal space
    let transversal = vec![vec![0.0, 1.0, 0.0, 0.0]];
    let null = null_transversal_frame(&rad, &span, &transversal, &g, &id, 1e-9)?;
    let n = &null.vectors[0];
    println!("null transversal: {n:?}");
    println!(
        "g(N, E) = {}, g(N, N) = {}",
        g.form(n, &rad.vectors[0]),
        g.form(n, n)
    );
    Ok(())
}
