#![allow(dead_code)]

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use pifinite::space::SpaceExpr;
use pifinite::{ExactRational, FiniteGroup, Prime};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn prime(p: u64) -> Prime {
    Prime::new(p).unwrap()
}

pub fn rat(n: i64, d: i64) -> ExactRational {
    ExactRational::from(BigRational::new(BigInt::from(n), BigInt::from(d)))
}

const GROUPS: &[&str] = &[
    "C1", "C2", "C3", "C4", "C5", "C6", "S3", "D8", "D6", "D10", "C2 x C2", "C2 x S3", "C2 wr C2", "S4", "C3 x C3",
    "C2 x C2 x C2", "(C2 x C2) wr C2",
];

fn abelian(r: &mut ChaCha8Rng) -> String {
    let n = r.gen_range(1..=2);
    (0..n)
        .map(|_| format!("C{}", [1, 2, 3, 4, 5, 6, 8, 9].choose(r).unwrap()))
        .collect::<Vec<_>>()
        .join(" x ")
}

fn leaf(r: &mut ChaCha8Rng) -> String {
    match r.gen_range(0..10) {
        0 => r.gen_range(0..=3).to_string(),
        1 => "pt".to_string(),
        2..=5 => format!("B({})", GROUPS.choose(r).unwrap()),
        _ => format!("B^{}({})", r.gen_range(0..=3), abelian(r)),
    }
}

/// A random expression in the CLI grammar; `depth` bounds the nesting.
pub fn random_expr(r: &mut ChaCha8Rng, depth: u32) -> String {
    if depth == 0 || r.gen_bool(0.35) {
        return leaf(r);
    }
    let a = random_expr(r, depth - 1);
    let b = random_expr(r, depth - 1);
    match r.gen_range(0..3) {
        0 => format!("{a} + {b}"),
        1 => format!("({a}) * ({b})"),
        _ => format!("{a} * {b}"),
    }
}

fn pow(base: &BigRational, e: i64) -> BigRational {
    let b = if e < 0 { base.recip() } else { base.clone() };
    let mut acc = BigRational::one();
    for _ in 0..e.unsigned_abs() {
        acc *= &b;
    }
    acc
}

/// `C(n, k)` for `n >= -1`, with `C(-1, k) = (-1)^k`.
pub fn binom(n: i64, k: i64) -> BigInt {
    if n == -1 {
        return if k % 2 == 0 { BigInt::one() } else { -BigInt::one() };
    }
    if k < 0 || k > n {
        return BigInt::zero();
    }
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

pub fn p_power(p: u64, e: i64) -> ExactRational {
    ExactRational::from(pow(&BigRational::from_integer(BigInt::from(p)), e))
}

fn is_p_power(mut m: u64, p: u64) -> bool {
    while m % p == 0 {
        m /= p;
    }
    m == 1
}

fn naive_order(g: &FiniteGroup, x: u32) -> u64 {
    let mut y = x;
    let mut k = 1;
    while y != g.identity() {
        y = g.mul(y, x);
        k += 1;
    }
    k
}

/// Ordered n-tuples of pairwise commuting p-elements, by direct enumeration.
pub fn naive_tuple_count(g: &FiniteGroup, p: u64, n: usize) -> u64 {
    let ps: Vec<u32> = (0..g.order() as u32).filter(|&x| is_p_power(naive_order(g, x), p)).collect();
    fn go(g: &FiniteGroup, ps: &[u32], chosen: &mut Vec<u32>, left: usize) -> u64 {
        if left == 0 {
            return 1;
        }
        let mut total = 0;
        for &x in ps {
            if chosen.iter().all(|&y| g.mul(x, y) == g.mul(y, x)) {
                chosen.push(x);
                total += go(g, ps, chosen, left - 1);
                chosen.pop();
            }
        }
        total
    }
    go(g, &ps, &mut Vec::new(), n)
}

/// `|X|_n` computed without the library's evaluator: tuple enumeration for
/// classifying spaces and the binomial formula for EM spaces.
pub fn oracle_height(x: &SpaceExpr, p: u64, n: u32) -> ExactRational {
    match x {
        SpaceExpr::Empty => ExactRational::zero(),
        SpaceExpr::FinSet(k) => ExactRational::from(*k),
        SpaceExpr::Classifying(g) => {
            let count = if n == 0 { 1 } else { naive_tuple_count(g, p, n as usize) };
            rat(count as i64, g.order() as i64)
        }
        SpaceExpr::EilenbergMacLane(a, k) => {
            let mut ap = BigUint::one();
            let mut rest = BigUint::one();
            for &f in a.factors() {
                let mut f = f;
                while f % p == 0 {
                    f /= p;
                    ap *= p;
                }
                rest *= f;
            }
            let k = *k as i64;
            let e_p = binom(n as i64 - 1, k);
            let e_rest: i64 = if k % 2 == 0 { 1 } else { -1 };
            let e_p: i64 = e_p.try_into().unwrap();
            let ap = BigRational::from_integer(BigInt::from(ap));
            let rest = BigRational::from_integer(BigInt::from(rest));
            ExactRational::from(pow(&ap, e_p) * pow(&rest, e_rest))
        }
        SpaceExpr::Disjoint(parts) => parts.iter().map(|y| oracle_height(y, p, n)).sum(),
        SpaceExpr::Product(parts) => parts.iter().map(|y| oracle_height(y, p, n)).product(),
    }
}

/// p-adic valuation of a nonzero rational by repeated division.
pub fn naive_vp(x: &ExactRational, p: u64) -> i64 {
    let r: BigRational = BigRational::new(x.numer().clone(), x.denom().clone());
    assert!(!r.is_zero());
    let p = BigInt::from(p);
    let count = |mut m: BigInt| {
        let mut k = 0;
        m = m.abs();
        while (&m % &p).is_zero() {
            m /= &p;
            k += 1;
        }
        k
    };
    count(r.numer().clone()) - count(r.denom().clone())
}

/// `(a - a^p) / p` on rationals.
pub fn naive_delta(a: &ExactRational, p: u64) -> ExactRational {
    let r = BigRational::new(a.numer().clone(), a.denom().clone());
    let v = (r.clone() - pow(&r, p as i64)) / BigRational::from_integer(BigInt::from(p));
    ExactRational::from(v)
}

/// Random rational `p^v u / w` with `u`, `w` prime to `p`.
pub fn random_p_integral(r: &mut ChaCha8Rng, p: u64, v: u32) -> ExactRational {
    let unit = |r: &mut ChaCha8Rng| loop {
        let m: i64 = r.gen_range(1..=10_000);
        if m % p as i64 != 0 {
            return m;
        }
    };
    let sign = if r.gen_bool(0.5) { 1 } else { -1 };
    let num = BigInt::from(sign * unit(r)) * BigInt::from(p).pow(v);
    let den = BigInt::from(unit(r));
    ExactRational::from(BigRational::new(num, den))
}

/// The permutation group generated by `gens` (each a permutation of `0..m`),
/// as a Cayley table with the identity at index 0.
pub fn permutation_group(gens: &[Vec<usize>]) -> FiniteGroup {
    let m = gens[0].len();
    let id: Vec<usize> = (0..m).collect();
    let compose = |a: &Vec<usize>, b: &Vec<usize>| -> Vec<usize> { (0..m).map(|i| a[b[i]]).collect() };
    let mut elems = vec![id];
    let mut i = 0;
    while i < elems.len() {
        for g in gens {
            let h = compose(&elems[i], g);
            if !elems.contains(&h) {
                elems.push(h);
            }
        }
        i += 1;
    }
    let n = elems.len();
    let index = |x: &Vec<usize>| elems.iter().position(|y| y == x).unwrap() as u32;
    let mut table = Vec::with_capacity(n * n);
    for a in &elems {
        for b in &elems {
            table.push(index(&compose(a, b)));
        }
    }
    FiniteGroup::from_table(n, table, 0).unwrap()
}
