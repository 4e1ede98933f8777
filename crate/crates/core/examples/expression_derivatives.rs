//! Parse a coordinate expression and read off its exact gradient and Hessian.

use lightlike::expr::{eval_jet2, parse};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let vars: Vec<String> = ["u", "v"].iter().map(|s| s.to_string()).collect();
    let f = parse("sinh(u) * cos(v) + (u^2 + v^2)^(1/2)", &vars)?;
    let p = [0.4, -1.3];
    let j = eval_jet2(&f, &p)?;
    println!("f{p:?} = {:.12}", j.value);
    println!("grad     = {:?}", j.grad);
    for i in 0..2 {
        println!(
            "hess[{i}]  = [{:.12}, {:.12}]",
            j.hess_at(i, 0),
            j.hess_at(i, 1)
        );
    }
    match parse("sqrt(u - 3)", &vars)?.value(&p) {
        Ok(v) => println!("unexpected value {v}"),
        Err(e) => println!("domain error: {e}"),
    }
    Ok(())
}
