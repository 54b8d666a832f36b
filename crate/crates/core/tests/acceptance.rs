//! Acceptance suite: one line per criterion, non-zero exit if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use hexsquish::algebra::{LeadVar, Poly};
use hexsquish::checks::{self, CheckName, CheckParams};
use hexsquish::diagrams::{enumerate_diagrams, z_poly, WeightScheme};
use hexsquish::mesh::{perfect_matchings, BoxDims, HexMesh, PropellerMap};
use hexsquish::overlay::{enumerate_two_factors, DEFAULT_DIAGRAM_LIMIT};
use hexsquish::squish::SignRule;
use hexsquish::Result;

fn dims(a: u32, b: u32, c: u32) -> BoxDims {
    BoxDims::new(a, b, c).unwrap()
}

/// Box product `prod (i+j+k-1)/(i+j+k-2)`, evaluated as a rational in u128.
fn box_product_oracle(a: u32, b: u32, c: u32) -> u128 {
    let (mut num, mut den) = (1u128, 1u128);
    for i in 1..=a {
        for j in 1..=b {
            for k in 1..=c {
                num *= (i + j + k - 1) as u128;
                den *= (i + j + k - 2) as u128;
                let g = gcd(num, den);
                num /= g;
                den /= g;
            }
        }
    }
    assert_eq!(den, 1);
    num
}

fn gcd(a: u128, b: u128) -> u128 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Plane partition counts from `n PP(n) = sum_k PP(n-k) sigma_2(k)`.
fn plane_partition_oracle(n: usize) -> Vec<i64> {
    let sigma2 = |k: usize| (1..=k).filter(|d| k.is_multiple_of(*d)).map(|d| (d * d) as i64).sum::<i64>();
    let mut pp = vec![1i64];
    for m in 1..=n {
        let s: i64 = (1..=m).map(|k| pp[m - k] * sigma2(k)).sum();
        pp.push(s / m as i64);
    }
    pp
}

fn run(params: &CheckParams, name: CheckName) -> Result<Option<String>> {
    let r = checks::run_check(name, params)?;
    Ok(r.witness.map(|w| format!("{} [{}]: {w}", r.name, r.size)))
}

fn run_all(items: &[(CheckName, CheckParams)]) -> Result<Option<String>> {
    for (name, p) in items {
        if let Some(w) = run(p, *name)? {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

fn c1_counting() -> Result<Option<String>> {
    let h = HexMesh::new(dims(2, 2, 2));
    let all: Vec<usize> = (0..h.edge_count()).collect();
    let n = perfect_matchings(&h, &all).len();
    if n != 20 {
        return Ok(Some(format!("H(2,2,2) has {n} perfect matchings")));
    }
    let tf = enumerate_two_factors(&HexMesh::new(dims(1, 1, 1)), DEFAULT_DIAGRAM_LIMIT)?.len();
    if tf != 3 {
        return Ok(Some(format!("H(1,1,1) has {tf} 2-factors")));
    }
    let count = enumerate_diagrams(dims(4, 4, 4)).count() as u128;
    let oracle = box_product_oracle(4, 4, 4);
    if count != oracle || oracle != 232_848 {
        return Ok(Some(format!("(4,4,4): {count} diagrams, product {oracle}")));
    }
    Ok(None)
}

fn c2_split() -> Result<Option<String>> {
    let (w, details) = checks::check_split(dims(2, 2, 2), DEFAULT_DIAGRAM_LIMIT)?;
    if w.is_none() && details["sum_two_pow_loops"] != 400 {
        return Ok(Some(format!("sum of 2^loops = {}", details["sum_two_pow_loops"])));
    }
    Ok(w)
}

fn c3_parity() -> Result<Option<String>> {
    run(&CheckParams::new(dims(3, 3, 2), 0), CheckName::Parity)
}

fn c4_minus_one() -> Result<Option<String>> {
    let bases = [dims(1, 1, 1), dims(2, 1, 1), dims(2, 2, 1), dims(2, 2, 2)];
    for b in bases {
        let (w, details) = checks::check_minus_one(b, DEFAULT_DIAGRAM_LIMIT)?;
        if let Some(w) = w {
            return Ok(Some(format!("base {b}: {w}")));
        }
        if b == dims(1, 1, 1) {
            let mut values: Vec<String> =
                details["lemma_values"].as_array().unwrap().iter().map(|v| v.as_str().unwrap().to_string()).collect();
            values.sort();
            if values != ["-1", "-1", "-2"] || details["aggregate"] != "-4" {
                return Ok(Some(format!("base (1,1,1): values {values:?}, aggregate {}", details["aggregate"])));
            }
        }
    }
    if PropellerMap::for_base(dims(1, 1, 1)).is_err() || SignRule::candidates().is_empty() {
        return Ok(Some("propeller structure unavailable".into()));
    }
    run(&CheckParams::new(dims(1, 1, 1), 0), CheckName::Matrices)
}

fn c5_pullback() -> Result<Option<String>> {
    let mut items = Vec::new();
    for b in [dims(1, 1, 1), dims(2, 2, 1)] {
        items.push((CheckName::Pullback, CheckParams::new(b, 0)));
        items.push((CheckName::Consistency, CheckParams::new(b, 0)));
    }
    run_all(&items)
}

fn c6_theorem() -> Result<Option<String>> {
    for b in [dims(1, 1, 1), dims(2, 1, 1), dims(2, 2, 1), dims(2, 2, 2)] {
        let (lhs, rhs) = checks::theorem_sides(b);
        if lhs != rhs {
            return Ok(Some(format!("base {b}: {lhs} != {rhs}")));
        }
        if b == dims(1, 1, 1) {
            let oracle = Poly::from_terms(LeadVar::P, [(1, [0, 0, 0, 0]), (-2, [1, 0, 0, 0]), (1, [2, 0, 0, 0])]);
            if lhs != oracle {
                return Ok(Some(format!("(1,1,1): {lhs} is not (1-p)^2")));
            }
        }
    }
    Ok(None)
}

fn c7_eq1() -> Result<Option<String>> {
    let oracle = plane_partition_oracle(6);
    if oracle != [1, 1, 3, 6, 13, 24, 48] {
        return Ok(Some(format!("oracle gives {oracle:?}")));
    }
    let z = z_poly(dims(6, 6, 6), WeightScheme::Monochromatic, Some(6));
    let got: Vec<i64> = (0..=6).map(|n| i64::try_from(z.coeff(&[n, 0, 0, 0])).unwrap()).collect();
    if got != oracle {
        return Ok(Some(format!("Z(6,6,6) coefficients {got:?}")));
    }
    run(&CheckParams::new(dims(6, 6, 6), 6), CheckName::Eq1)
}

fn c8_eq2() -> Result<Option<String>> {
    run(&CheckParams::new(dims(4, 4, 4), 4), CheckName::Eq2)
}

fn c9_eq3() -> Result<Option<String>> {
    run(&CheckParams::new(dims(1, 1, 1), 10), CheckName::Eq3)
}

fn c10_cross() -> Result<Option<String>> {
    run_all(&[
        (CheckName::Cross, CheckParams::new(dims(3, 3, 3), 0)),
        (CheckName::Cross, CheckParams::new(dims(4, 4, 2), 0)),
    ])
}

type Criterion = (&'static str, Duration, fn() -> Result<Option<String>>);

fn main() -> ExitCode {
    let secs = Duration::from_secs;
    let criteria: [Criterion; 10] = [
        ("counting", secs(10), c1_counting),
        ("splitting lemma", secs(10), c2_split),
        ("parity lemma", secs(60), c3_parity),
        ("sign-weighting lemma", secs(120), c4_minus_one),
        ("pullback and consistency", secs(120), c5_pullback),
        ("main theorem", secs(60), c6_theorem),
        ("monochromatic series", secs(60), c7_eq1),
        ("coloured series", secs(120), c8_eq2),
        ("specialized series", secs(10), c9_eq3),
        ("cross-method", secs(120), c10_cross),
    ];
    let mut failed = 0;
    for (n, (name, bound, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = f();
        let elapsed = start.elapsed();
        let problem = match outcome {
            Ok(None) if elapsed <= *bound => None,
            Ok(None) => Some(format!("took {:.2}s, bound {}s", elapsed.as_secs_f64(), bound.as_secs())),
            Ok(Some(w)) => Some(w),
            Err(e) => Some(format!("error: {e}")),
        };
        let status = if problem.is_none() { "PASS" } else { "FAIL" };
        println!("criterion {:>2} {status} {name} ({:.2}s)", n + 1, elapsed.as_secs_f64());
        if let Some(p) = problem {
            println!("    {p}");
            failed += 1;
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
