//! Randomized check of the frame linear algebra against exact rational
//! arithmetic on integer instances.

use lightlike::linalg::{
    kernel, membership_residual, null_transversal_frame, radical, signed_orthonormalize, span_rank,
    Mat,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const TOL: f64 = 1e-9;
pub const FRAME_TOL: f64 = 1e-10;

#[derive(Debug, Default)]
pub struct Summary {
    pub instances: usize,
    pub with_radical: usize,
    pub failures: Vec<String>,
}

/// Exact rank of an integer matrix.
pub fn exact_rank(rows: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|r| {
            r.iter()
                .map(|&x| BigRational::from_integer(BigInt::from(x)))
                .collect()
        })
        .collect();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        for i in rank + 1..m.len() {
            if m[i][c].is_zero() {
                continue;
            }
            let f = &m[i][c] / &m[rank][c];
            for j in c..cols {
                let d = &f * &m[rank][j];
                m[i][j] -= d;
            }
        }
        rank += 1;
    }
    rank
}

/// Number of negative pivots of a symmetric integer matrix of full rank,
/// which by Sylvester's law is its negative inertia. Pivots are taken on the
/// diagonal when possible and from a 2x2 congruence otherwise.
pub fn exact_negative_inertia(g: &[Vec<i64>]) -> Option<usize> {
    let n = g.len();
    let mut m: Vec<Vec<BigRational>> = g
        .iter()
        .map(|r| {
            r.iter()
                .map(|&x| BigRational::from_integer(BigInt::from(x)))
                .collect()
        })
        .collect();
    let mut neg = 0;
    let mut alive: Vec<usize> = (0..n).collect();
    while !alive.is_empty() {
        if let Some(&p) = alive.iter().find(|&&i| !m[i][i].is_zero()) {
            if m[p][p].is_negative() {
                neg += 1;
            }
            alive.retain(|&i| i != p);
            for &i in &alive {
                let f = &m[i][p] / &m[p][p];
                for &j in &alive {
                    let d = &f * &m[p][j];
                    m[i][j] -= d;
                }
            }
            continue;
        }
        // all remaining diagonal entries vanish: replace e_a by e_a + e_b
        let (a, b) = alive
            .iter()
            .flat_map(|&a| alive.iter().map(move |&b| (a, b)))
            .find(|&(a, b)| a != b && !m[a][b].is_zero())?;
        for j in 0..n {
            let d = m[b][j].clone();
            m[a][j] += d;
        }
        for i in 0..n {
            let d = m[i][b].clone();
            m[i][a] += d;
        }
    }
    Some(neg)
}

fn int_gram(vs: &[Vec<i64>], metric: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = metric.len();
    vs.iter()
        .map(|u| {
            vs.iter()
                .map(|v| {
                    (0..n)
                        .flat_map(|i| (0..n).map(move |j| (i, j)))
                        .map(|(i, j)| u[i] * metric[i][j] * v[j])
                        .sum()
                })
                .collect()
        })
        .collect()
}

fn to_f64(m: &[Vec<i64>]) -> Vec<Vec<f64>> {
    m.iter()
        .map(|r| r.iter().map(|&x| x as f64).collect())
        .collect()
}

struct Instance {
    metric: Vec<Vec<i64>>,
    vectors: Vec<Vec<i64>>,
}

/// Integer metric `Pᵀ D P` with `P` unit upper triangular, and `k`
/// independent vectors built from null and non-null pieces of the diagonal
/// model so that degenerate spans are common.
fn instance(rng: &mut ChaCha8Rng) -> Instance {
    let n = rng.gen_range(2..=7);
    let neg = rng.gen_range(0..=n / 2 + 1).min(n);
    let d: Vec<i64> = (0..n).map(|i| if i < neg { -1 } else { 1 }).collect();
    let mut p = vec![vec![0i64; n]; n];
    for i in 0..n {
        p[i][i] = 1;
        for j in i + 1..n {
            p[i][j] = rng.gen_range(-1..=1);
        }
    }
    let metric: Vec<Vec<i64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).map(|k| p[k][i] * d[k] * p[k][j]).sum())
                .collect()
        })
        .collect();
    // inverse of a unit upper triangular integer matrix
    let mut pinv = vec![vec![0i64; n]; n];
    for c in 0..n {
        for i in (0..n).rev() {
            let rhs = i64::from(i == c);
            let s: i64 = (i + 1..n).map(|j| p[i][j] * pinv[j][c]).sum();
            pinv[i][c] = rhs - s;
        }
    }
    loop {
        let k = rng.gen_range(1..=n);
        let mut ys: Vec<Vec<i64>> = Vec::with_capacity(k);
        for _ in 0..k {
            let mut y = vec![0i64; n];
            let a = rng.gen_range(0..n);
            y[a] = rng.gen_range(1..=2);
            if rng.gen_bool(0.7) {
                let b = rng.gen_range(0..n);
                if b != a {
                    y[b] += if rng.gen_bool(0.5) { y[a] } else { -y[a] };
                }
            }
            ys.push(y);
        }
        for i in 0..k {
            for j in 0..i {
                let c = rng.gen_range(-1..=1);
                let yj = ys[j].clone();
                for (a, b) in ys[i].iter_mut().zip(&yj) {
                    *a += c * b;
                }
            }
        }
        let vectors: Vec<Vec<i64>> = ys
            .iter()
            .map(|y| {
                (0..n)
                    .map(|i| (0..n).map(|j| pinv[i][j] * y[j]).sum())
                    .collect()
            })
            .collect();
        if exact_rank(&vectors) == k {
            return Instance { metric, vectors };
        }
    }
}

fn scaled(v: f64, a: &[f64], b: &[f64]) -> f64 {
    let na = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.abs() / (1.0 + na * nb)
}

fn check(inst: &Instance, s: &mut Summary, tag: &str) {
    let n = inst.metric.len();
    let k = inst.vectors.len();
    let g = Mat::from_rows(&to_f64(&inst.metric));
    let vs = to_f64(&inst.vectors);
    let mut fail = |msg: String| s.failures.push(format!("{tag}: {msg}"));

    let gram = int_gram(&inst.vectors, &inst.metric);
    let r_exact = k - exact_rank(&gram);
    let rad = match radical(&vs, &g, TOL) {
        Ok(r) => r,
        Err(e) => return fail(format!("radical failed: {e}")),
    };
    if rad.len() != r_exact {
        return fail(format!(
            "radical rank {} but exact kernel dimension {r_exact}",
            rad.len()
        ));
    }
    let again = radical(&vs, &g, TOL).expect("first call succeeded");
    if again != rad {
        fail("radical is not deterministic".into());
    }
    for e in &rad.vectors {
        for v in &vs {
            let p = g.form(e, v);
            if scaled(p, e, v) >= 10.0 * TOL {
                fail(format!("radical vector pairs to {p:e} with the span"));
            }
        }
        if membership_residual(e, &vs, TOL) > 1e-10 {
            fail("radical vector leaves the span".into());
        }
    }
    if span_rank(&rad.vectors, TOL) != rad.len() {
        fail("radical vectors are dependent".into());
    }

    if rad.is_empty() {
        let on = match signed_orthonormalize(&vs, &g, TOL) {
            Ok(o) => o,
            Err(e) => {
                return fail(format!(
                    "orthonormalization failed on a nondegenerate span: {e}"
                ))
            }
        };
        for (i, u) in on.vectors.iter().enumerate() {
            for (j, w) in on.vectors.iter().enumerate() {
                let want = if i == j {
                    f64::from(on.signatures[i])
                } else {
                    0.0
                };
                let got = g.form(u, w);
                if (got - want).abs() > FRAME_TOL {
                    fail(format!("g(u{i}, u{j}) = {got}, expected {want}"));
                }
            }
        }
        let mut both = vs.clone();
        both.extend(on.vectors.iter().cloned());
        if span_rank(&both, TOL) != k {
            fail("orthonormalization changed the span".into());
        }
        let neg = on.signatures.iter().filter(|&&e| e < 0).count();
        if exact_negative_inertia(&gram) != Some(neg) {
            fail(format!(
                "{neg} negative signs disagree with the exact inertia"
            ));
        }
        if signed_orthonormalize(&vs, &g, TOL).ok().as_ref() != Some(&on) {
            fail("orthonormalization is not deterministic".into());
        }
        return;
    }

    s.with_radical += 1;
    // screen: tangent vectors completing the radical, as a complement
    let mut acc = rad.vectors.clone();
    let mut screen = Vec::new();
    for v in &vs {
        let mut t = acc.clone();
        t.push(v.clone());
        if span_rank(&t, TOL) == t.len() {
            acc = t;
            screen.push(v.clone());
        }
    }
    // normal space and a screen transversal complement of the radical in it
    let rows: Vec<Vec<f64>> = vs.iter().map(|v| g.mul_vec(v)).collect();
    let (normal, _) = kernel(&Mat::from_rows(&rows), TOL);
    let mut acc = rad.vectors.clone();
    let mut st = Vec::new();
    for v in &normal {
        let mut t = acc.clone();
        t.push(v.clone());
        if span_rank(&t, TOL) == t.len() {
            acc = t;
            st.push(v.clone());
        }
    }
    if normal.len() != n - k || st.len() + rad.len() != n - k {
        return fail("normal space has the wrong dimension".into());
    }
    let id = Mat::from_fn(n, n, |i, j| if i == j { 1.0 } else { 0.0 });
    let nt = match null_transversal_frame(&rad, &vs, &st, &g, &id, TOL) {
        Ok(f) => f,
        Err(e) => return fail(format!("null transversal failed: {e}")),
    };
    for (i, ni) in nt.vectors.iter().enumerate() {
        for (j, ej) in rad.vectors.iter().enumerate() {
            let want = if i == j { 1.0 } else { 0.0 };
            let got = g.form(ni, ej);
            if (got - want).abs() > FRAME_TOL {
                fail(format!("g(N{i}, E{j}) = {got}"));
            }
        }
        for (j, nj) in nt.vectors.iter().enumerate() {
            let got = g.form(ni, nj);
            if got.abs() > FRAME_TOL {
                fail(format!("g(N{i}, N{j}) = {got}"));
            }
        }
        for x in screen.iter().chain(&st) {
            let got = g.form(ni, x);
            if scaled(got, ni, x) > FRAME_TOL {
                fail(format!(
                    "N{i} pairs to {got:e} with the screen or its transversal"
                ));
            }
        }
    }
}

/// Run `count` seeded instances.
pub fn run(count: usize, seed: u64) -> Summary {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut s = Summary::default();
    for i in 0..count {
        let inst = instance(&mut rng);
        check(&inst, &mut s, &format!("instance {i}"));
        s.instances += 1;
    }
    s
}
