//! Divisor sums with congruence conditions, the `(8/·)` character,
//! brute-force representation counts and convolution sums.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::series::{AnalyticSeries, Config, QSeries, Rat};

/// Arithmetic functions on positive integers, extended by zero to every
/// other rational argument.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DivisorFn {
    /// `σ(n)`, the sum of divisors.
    Sigma,
    /// `σ*(n)`, the sum of divisors `d` with `n/d` odd.
    SigmaStar,
    /// `d_{j,k}(n)`, the number of divisors `d ≡ j (mod k)`.
    DCong { j: u32, k: u32 },
    /// `d*_{j,k}(n)`, as `DCong` restricted to `n/d` odd.
    DCongStar { j: u32, k: u32 },
    /// `d_{1,3} − d_{2,3}`.
    Delta,
    /// `d*_{1,3} − d*_{2,3}`.
    DeltaStar,
    /// `d*_{1,6} + d*_{2,6} − d*_{4,6} − d*_{5,6}`.
    EpsilonStar,
    /// `Σ_{d|n} (n/d)·(8/d)`.
    Char8NOverD,
    /// `Σ_{d|n} d·(8/d)`.
    Char8D,
}

fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

impl DivisorFn {
    /// Value at a positive integer.
    pub fn at(self, n: u64) -> i64 {
        if n == 0 {
            return 0;
        }
        let ds = divisors(n);
        let cong = |j: u32, k: u32, star: bool| {
            ds.iter()
                .filter(|&&d| d % k as u64 == j as u64 % k as u64 && (!star || (n / d) % 2 == 1))
                .count() as i64
        };
        match self {
            DivisorFn::Sigma => ds.iter().sum::<u64>() as i64,
            DivisorFn::SigmaStar => ds.iter().filter(|&&d| (n / d) % 2 == 1).sum::<u64>() as i64,
            DivisorFn::DCong { j, k } => cong(j, k, false),
            DivisorFn::DCongStar { j, k } => cong(j, k, true),
            DivisorFn::Delta => cong(1, 3, false) - cong(2, 3, false),
            DivisorFn::DeltaStar => cong(1, 3, true) - cong(2, 3, true),
            DivisorFn::EpsilonStar => {
                cong(1, 6, true) + cong(2, 6, true) - cong(4, 6, true) - cong(5, 6, true)
            }
            DivisorFn::Char8NOverD => ds.iter().map(|&d| (n / d) as i64 * char8(d)).sum(),
            DivisorFn::Char8D => ds.iter().map(|&d| d as i64 * char8(d)).sum(),
        }
    }

    /// Value at a rational argument; zero unless it is a positive integer.
    pub fn eval(self, x: Rat) -> i64 {
        if x.is_integer() && x > Rat::zero() {
            self.at(x.to_integer() as u64)
        } else {
            0
        }
    }
}

/// `σ(n/d)`, zero when `d ∤ n`.
pub fn sigma_over(n: i64, d: i64) -> i64 {
    DivisorFn::Sigma.eval(Rat::new(n, d))
}

/// The character `(8/m)`.
pub fn char8(m: u64) -> i64 {
    match m % 8 {
        1 | 7 => 1,
        3 | 5 => -1,
        _ => 0,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shape {
    /// `c·x²`.
    Square,
    /// `c·x(x+1)/2`.
    Triangular,
    /// `c·(x² + xy + y²)`, two variables.
    Hex,
}

/// Positive-definite form as a sum of independent blocks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QFormSpec {
    pub terms: Vec<(u64, Shape)>,
}

impl QFormSpec {
    pub fn new(terms: Vec<(u64, Shape)>) -> Self {
        assert!(!terms.is_empty(), "a form needs at least one term");
        assert!(terms.iter().all(|&(c, _)| c > 0), "coefficients are positive");
        QFormSpec { terms }
    }

    pub fn squares(coeffs: &[u64]) -> Self {
        Self::new(coeffs.iter().map(|&c| (c, Shape::Square)).collect())
    }
}

fn isqrt(v: u64) -> u64 {
    num_integer::Roots::sqrt(&v)
}

/// Values `(value, multiplicity)` of one block not exceeding `max`, by
/// enumerating its variables.
fn block_values(c: u64, shape: Shape, max: u64) -> Vec<(u64, u64)> {
    let mut hist = vec![0u64; max as usize + 1];
    let lim = max / c;
    match shape {
        Shape::Square => {
            let b = isqrt(lim) as i64;
            for x in -b..=b {
                hist[(c * (x * x) as u64) as usize] += 1;
            }
        }
        Shape::Triangular => {
            // t_x = t_{−x−1}; both branches are counted
            let b = isqrt(2 * lim) as i64 + 1;
            for x in -b - 1..=b {
                let t = x * (x + 1) / 2;
                if t as u64 <= lim {
                    hist[(c * t as u64) as usize] += 1;
                }
            }
        }
        Shape::Hex => {
            let b = 2 * isqrt(lim) as i64 + 2;
            for x in -b..=b {
                for y in -b..=b {
                    let v = (x * x + x * y + y * y) as u64;
                    if v <= lim {
                        hist[(c * v) as usize] += 1;
                    }
                }
            }
        }
    }
    hist.into_iter()
        .enumerate()
        .filter(|&(_, m)| m > 0)
        .map(|(v, m)| (v as u64, m))
        .collect()
}

/// Number of solutions of `c·shape(vars) = v` in one block, solved exactly.
fn block_solutions(c: u64, shape: Shape, v: u64) -> u64 {
    if !v.is_multiple_of(c) {
        return 0;
    }
    let v = v / c;
    let is_square = |x: u64| {
        let r = isqrt(x);
        r * r == x
    };
    match shape {
        Shape::Square => {
            if !is_square(v) {
                0
            } else if v == 0 {
                1
            } else {
                2
            }
        }
        Shape::Triangular => {
            if is_square(8 * v + 1) {
                2
            } else {
                0
            }
        }
        Shape::Hex => {
            // y² + xy + (x² − v) = 0 has discriminant 4v − 3x²
            let b = 2 * isqrt(v) as i64 + 1;
            let mut count = 0;
            for x in -b..=b {
                let disc = 4 * v as i64 - 3 * x * x;
                if disc < 0 || !is_square(disc as u64) {
                    continue;
                }
                let s = isqrt(disc as u64) as i64;
                if (s - x) % 2 == 0 {
                    count += if s == 0 { 1 } else { 2 };
                }
            }
            count
        }
    }
}

/// Representation count of `n`: enumerate every block but the last, then
/// solve the last exactly.
pub fn rep_count(form: &QFormSpec, n: u64) -> u64 {
    let (last, rest) = form.terms.split_last().expect("nonempty form");
    let tables: Vec<Vec<(u64, u64)>> = rest
        .iter()
        .map(|&(c, s)| block_values(c, s, n))
        .collect();
    fn walk(tables: &[Vec<(u64, u64)>], last: (u64, Shape), rem: u64, mult: u64) -> u64 {
        match tables.split_first() {
            None => mult * block_solutions(last.0, last.1, rem),
            Some((head, tail)) => head
                .iter()
                .take_while(|&&(v, _)| v <= rem)
                .map(|&(v, m)| walk(tail, last, rem - v, mult * m))
                .sum(),
        }
    }
    walk(&tables, *last, n, 1)
}

/// Representation counts for `0..=max`, by enumerating every tuple.
pub fn rep_count_table(form: &QFormSpec, max: u64) -> Vec<u64> {
    let tables: Vec<Vec<(u64, u64)>> = form
        .terms
        .iter()
        .map(|&(c, s)| block_values(c, s, max))
        .collect();
    let mut out = vec![0u64; max as usize + 1];
    fn walk(tables: &[Vec<(u64, u64)>], total: u64, mult: u64, max: u64, out: &mut [u64]) {
        match tables.split_first() {
            None => out[total as usize] += mult,
            Some((head, tail)) => {
                for &(v, m) in head {
                    if total + v > max {
                        break;
                    }
                    walk(tail, total + v, mult * m, max, out);
                }
            }
        }
    }
    walk(&tables, 0, 1, max, &mut out);
    out
}

/// `Σ_{k=1}^{n−1} f(k)·g(n−k)`.
pub fn conv_sum(f: DivisorFn, g: DivisorFn, n: u64) -> i64 {
    (1..n).map(|k| f.at(k) * g.at(n - k)).sum()
}

/// `Σ_{k,l ≥ 1, 2k+l = n} f(k)·g(l)`.
pub fn weighted_conv_sum(f: DivisorFn, g: DivisorFn, n: u64) -> i64 {
    (1..)
        .take_while(|&k| 2 * k < n)
        .map(|k| f.at(k) * g.at(n - 2 * k))
        .sum()
}

/// `3·Σ_{k=0}^{n} δ(3k+1)·δ(3(n−k)+1)`.
pub fn farkas_sum(n: u64) -> i64 {
    3 * (0..=n)
        .map(|k| DivisorFn::Delta.at(3 * k + 1) * DivisorFn::Delta.at(3 * (n - k) + 1))
        .sum::<i64>()
}

/// `Σ_{n ≥ start} f(n)·q^{e(n)}` for all `n` with `e(n) < t`; `e` must be
/// strictly increasing.
pub fn seq_to_series<F, E>(cfg: &Config, start: i64, f: F, e: E, t: Rat) -> Result<AnalyticSeries, crate::SeriesError>
where
    F: Fn(i64) -> i64,
    E: Fn(i64) -> Rat,
{
    let field = cfg.field();
    let mut terms = Vec::new();
    let mut n = start;
    loop {
        let x = e(n);
        if x >= t {
            break;
        }
        let v = f(n);
        if v != 0 {
            terms.push((cfg.on_grid(x)?, field.from_i64(v)));
        }
        n += 1;
    }
    Ok(AnalyticSeries::new(0, QSeries::from_terms(cfg, t, terms)))
}

/// Exponent map `n ↦ (a·n + b)/c`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Indexing {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl Indexing {
    pub const IDENTITY: Indexing = Indexing { a: 1, b: 0, c: 1 };

    pub fn at(self, n: i64) -> Rat {
        Rat::new(self.a * n + self.b, self.c)
    }
}

/// A representation theorem: the form, the closed formula for its count,
/// and the exponent its count carries in the generating theta product.
#[derive(Debug, Clone)]
pub struct FormTheorem {
    pub name: &'static str,
    pub display: &'static str,
    pub form: QFormSpec,
    pub formula: fn(i64) -> i64,
    /// First `n` the formula covers.
    pub start: i64,
    /// Default range end (inclusive).
    pub max: i64,
    pub indexing: Indexing,
}

fn a8(n: i64) -> i64 {
    DivisorFn::Char8NOverD.eval(Rat::from_integer(n))
}

fn b8(n: i64) -> i64 {
    DivisorFn::Char8D.eval(Rat::from_integer(n))
}

fn sig(n: i64) -> i64 {
    sigma_over(n, 1)
}

fn sign_pow(n: i64) -> i64 {
    if n % 2 == 0 {
        1
    } else {
        -1
    }
}

/// The thirteen representation theorems plus their closed formulas.
pub fn form_theorems() -> Vec<FormTheorem> {
    use Shape::{Hex, Square as Sq, Triangular as Tr};
    let half = |a, b| Indexing { a, b, c: 2 };
    vec![
        FormTheorem {
            name: "s4",
            display: "x^2+y^2+z^2+w^2",
            form: QFormSpec::squares(&[1, 1, 1, 1]),
            formula: |n| 8 * sig(n) - 32 * sigma_over(n, 4),
            start: 1,
            max: 500,
            indexing: Indexing::IDENTITY,
        },
        FormTheorem {
            name: "t4",
            display: "t_x+t_y+t_z+t_w",
            form: QFormSpec::new(vec![(1, Tr); 4]),
            formula: |n| 16 * sig(2 * n + 1),
            start: 0,
            max: 300,
            indexing: Indexing { a: 2, b: 1, c: 1 },
        },
        FormTheorem {
            name: "s2",
            display: "x^2+xy+y^2+z^2+zw+w^2",
            form: QFormSpec::new(vec![(1, Hex), (1, Hex)]),
            formula: |n| 12 * sig(n) - 36 * sigma_over(n, 3),
            start: 1,
            max: 500,
            indexing: Indexing::IDENTITY,
        },
        FormTheorem {
            name: "s1133",
            display: "x^2+y^2+3z^2+3w^2",
            form: QFormSpec::squares(&[1, 1, 3, 3]),
            formula: |n| {
                4 * sign_pow(n - 1)
                    * (sig(n) - 4 * sigma_over(n, 2) - 3 * sigma_over(n, 3)
                        + 12 * sigma_over(n, 6))
            },
            start: 1,
            max: 500,
            indexing: Indexing::IDENTITY,
        },
        FormTheorem {
            name: "s12",
            display: "x^2+xy+y^2+2z^2+2zw+2w^2",
            form: QFormSpec::new(vec![(1, Hex), (2, Hex)]),
            formula: |n| {
                6 * sig(n) - 12 * sigma_over(n, 2) + 18 * sigma_over(n, 3) - 36 * sigma_over(n, 6)
            },
            start: 1,
            max: 500,
            indexing: Indexing::IDENTITY,
        },
        FormTheorem {
            name: "s1122",
            display: "x^2+y^2+2z^2+2w^2",
            form: QFormSpec::squares(&[1, 1, 2, 2]),
            formula: |n| {
                4 * sig(n) - 4 * sigma_over(n, 2) + 8 * sigma_over(n, 4) - 32 * sigma_over(n, 8)
            },
            start: 1,
            max: 300,
            indexing: Indexing::IDENTITY,
        },
        FormTheorem {
            name: "m1244",
            display: "x^2+2y^2+4t_z+4t_w",
            form: QFormSpec::new(vec![(1, Sq), (2, Sq), (4, Tr), (4, Tr)]),
            formula: |n| 4 * a8(n + 1),
            start: 0,
            max: 300,
            indexing: Indexing { a: 1, b: 1, c: 1 },
        },
        FormTheorem {
            name: "m1144",
            display: "x^2+y^2+4t_z+4t_w",
            form: QFormSpec::new(vec![(1, Sq), (1, Sq), (4, Tr), (4, Tr)]),
            formula: |n| {
                let m = n + 1;
                4 * (sig(m) + sigma_over(m, 2) - 10 * sigma_over(m, 4) + 8 * sigma_over(m, 8))
            },
            start: 0,
            max: 300,
            indexing: Indexing { a: 1, b: 1, c: 1 },
        },
        FormTheorem {
            name: "m1224",
            display: "x^2+2y^2+2z^2+4t_w",
            form: QFormSpec::new(vec![(1, Sq), (2, Sq), (2, Sq), (4, Tr)]),
            formula: |n| 2 * a8(2 * n + 1),
            start: 0,
            max: 300,
            indexing: half(2, 1),
        },
        FormTheorem {
            name: "s1112",
            display: "x^2+y^2+z^2+2w^2",
            form: QFormSpec::squares(&[1, 1, 1, 2]),
            formula: |n| 8 * a8(n) - 2 * b8(n),
            start: 1,
            max: 300,
            indexing: Indexing::IDENTITY,
        },
        FormTheorem {
            name: "s1222",
            display: "x^2+2y^2+2z^2+2w^2",
            form: QFormSpec::squares(&[1, 2, 2, 2]),
            formula: |n| 4 * a8(n) - 2 * b8(n),
            start: 1,
            max: 300,
            indexing: Indexing::IDENTITY,
        },
        FormTheorem {
            name: "m1114",
            display: "x^2+y^2+z^2+4t_w",
            form: QFormSpec::new(vec![(1, Sq), (1, Sq), (1, Sq), (4, Tr)]),
            formula: |n| 4 * a8(2 * n + 1) - 2 * b8(2 * n + 1),
            start: 0,
            max: 300,
            indexing: half(2, 1),
        },
        FormTheorem {
            name: "m1444",
            display: "x^2+4t_y+4t_z+4t_w",
            form: QFormSpec::new(vec![(1, Sq), (4, Tr), (4, Tr), (4, Tr)]),
            formula: |n| 2 * a8(2 * n + 3) - 2 * b8(2 * n + 3),
            start: 0,
            max: 300,
            indexing: half(2, 3),
        },
    ]
}

pub fn form_theorem(name: &str) -> Option<FormTheorem> {
    form_theorems().into_iter().find(|f| f.name == name)
}

/// A convolution theorem: an enumerated sum against its divisor formula.
#[derive(Debug, Clone)]
pub struct ConvTheorem {
    pub name: &'static str,
    pub display: &'static str,
    pub sum: fn(u64) -> i64,
    pub formula: fn(i64) -> i64,
    pub start: i64,
    pub max: i64,
}

pub fn conv_theorems() -> Vec<ConvTheorem> {
    use DivisorFn::{DeltaStar as D, EpsilonStar as Ep};
    use crate::arith::sigma_over as s;
    vec![
        ConvTheorem {
            name: "conv_delta_delta",
            display: "sum d*(k)d*(n-k) = s(n/2)-2s(n/3)+s(n/6)",
            sum: |n| conv_sum(D, D, n),
            formula: |n| s(n, 2) - 2 * s(n, 3) + s(n, 6),
            start: 2,
            max: 300,
        },
        ConvTheorem {
            name: "conv_eps_eps",
            display: "sum e*(k)e*(n-k) = s(n/2)+2s(n/3)-11s(n/6)+8s(n/12)",
            sum: |n| conv_sum(Ep, Ep, n),
            formula: |n| s(n, 2) + 2 * s(n, 3) - 11 * s(n, 6) + 8 * s(n, 12),
            start: 2,
            max: 300,
        },
        ConvTheorem {
            name: "conv_delta_eps",
            display: "sum d*(k)e*(n-k) = s(n/2)-2s(n/4)-s(n/6)+2s(n/12)",
            sum: |n| conv_sum(D, Ep, n),
            formula: |n| s(n, 2) - 2 * s(n, 4) - s(n, 6) + 2 * s(n, 12),
            start: 2,
            max: 300,
        },
        ConvTheorem {
            name: "conv_weighted_delta_delta",
            display: "sum_{2k+l=n} d*(k)d*(l) = s(n/3)-s(n/4)-s(n/6)+s(n/12)",
            sum: |n| weighted_conv_sum(D, D, n),
            formula: |n| s(n, 3) - s(n, 4) - s(n, 6) + s(n, 12),
            start: 3,
            max: 300,
        },
        ConvTheorem {
            name: "conv_weighted_delta_eps",
            display: "sum_{2k+l=n} d*(k)e*(l) = s(n/3)+s(n/4)-5s(n/6)+3s(n/12)",
            sum: |n| weighted_conv_sum(D, Ep, n),
            formula: |n| s(n, 3) + s(n, 4) - 5 * s(n, 6) + 3 * s(n, 12),
            start: 3,
            max: 300,
        },
        ConvTheorem {
            name: "farkas_remark",
            display: "s(3n+2) = 3 sum_{k=0}^{n} d(3k+1)d(3(n-k)+1)",
            sum: farkas_sum,
            formula: |n| s(3 * n + 2, 1),
            start: 0,
            max: 100,
        },
    ]
}

pub fn conv_theorem(name: &str) -> Option<ConvTheorem> {
    conv_theorems().into_iter().find(|c| c.name == name)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rat {
        Rat::new(n, d)
    }

    #[test]
    fn divisor_examples() {
        assert_eq!(DivisorFn::Sigma.eval(r(6, 1)), 12);
        assert_eq!(DivisorFn::DCong { j: 1, k: 3 }.eval(r(7, 1)), 2);
        assert_eq!(DivisorFn::Sigma.eval(r(5, 2)), 0);
        assert_eq!(DivisorFn::Sigma.eval(r(-4, 1)), 0);
        assert_eq!(DivisorFn::DeltaStar.at(1), 1);
        assert_eq!(DivisorFn::EpsilonStar.at(1), 1);
        assert_eq!(char8(7), 1);
        assert_eq!(char8(3), -1);
        assert_eq!(char8(6), 0);
    }

    #[test]
    fn starred_variants_drop_the_half() {
        for n in 1..=3000u64 {
            let nr = Rat::from_integer(n as i64);
            let half = nr / Rat::from_integer(2);
            assert_eq!(
                DivisorFn::SigmaStar.at(n),
                DivisorFn::Sigma.eval(nr) - DivisorFn::Sigma.eval(half)
            );
            for (j, k) in [(1, 3), (2, 3), (1, 6), (2, 6), (4, 6), (5, 6)] {
                assert_eq!(
                    DivisorFn::DCongStar { j, k }.at(n),
                    DivisorFn::DCong { j, k }.eval(nr) - DivisorFn::DCong { j, k }.eval(half)
                );
            }
        }
    }

    #[test]
    fn char8_is_multiplicative_on_odds() {
        for a in (1..200u64).step_by(2) {
            for b in (1..50u64).step_by(2) {
                assert_eq!(char8(a * b), char8(a) * char8(b));
            }
        }
    }

    #[test]
    fn spot_counts() {
        let get = |name: &str, n| rep_count(&form_theorem(name).unwrap().form, n);
        assert_eq!(get("s4", 1), 8);
        assert_eq!(get("t4", 0), 16);
        assert_eq!(get("t4", 1), 64);
        assert_eq!(get("m1444", 0), 8);
        assert_eq!(get("m1144", 0), 4);
        assert_eq!(get("m1224", 0), 2);
        assert_eq!(get("s2", 1), 12);
    }

    #[test]
    fn enumeration_paths_agree() {
        for f in form_theorems() {
            let table = rep_count_table(&f.form, 60);
            for n in 0..=60 {
                assert_eq!(table[n as usize], rep_count(&f.form, n), "{} at {n}", f.name);
            }
        }
    }

    #[test]
    fn permuting_equal_terms_is_invisible() {
        let a = QFormSpec::new(vec![(1, Shape::Square), (4, Shape::Triangular), (2, Shape::Square)]);
        let b = QFormSpec::new(vec![(4, Shape::Triangular), (2, Shape::Square), (1, Shape::Square)]);
        assert_eq!(rep_count_table(&a, 80), rep_count_table(&b, 80));
    }

    #[test]
    fn hex_counts_match_divisor_formula() {
        let hex = QFormSpec::new(vec![(1, Shape::Hex)]);
        let table = rep_count_table(&hex, 500);
        for n in 1..=500u64 {
            let expect = 6 * (DivisorFn::DCong { j: 1, k: 3 }.at(n) - DivisorFn::DCong { j: 2, k: 3 }.at(n));
            assert_eq!(table[n as usize] as i64, expect);
            if n <= 100 {
                assert_eq!(rep_count(&hex, n) as i64, expect);
            }
        }
    }

    #[test]
    fn small_range_theorems() {
        for f in form_theorems() {
            let table = rep_count_table(&f.form, 40);
            for n in f.start..=40 {
                assert_eq!(table[n as usize] as i64, (f.formula)(n), "{} at {n}", f.name);
            }
        }
        for c in conv_theorems() {
            for n in c.start..=40 {
                assert_eq!((c.sum)(n as u64), (c.formula)(n), "{} at {n}", c.name);
            }
        }
    }

    #[test]
    fn convolution_examples() {
        use DivisorFn::{DeltaStar, EpsilonStar};
        assert_eq!(conv_sum(DeltaStar, DeltaStar, 2), 1);
        assert_eq!(conv_sum(DeltaStar, EpsilonStar, 3), 0);
        assert_eq!(weighted_conv_sum(DeltaStar, DeltaStar, 3), 1);
    }

    #[test]
    fn printed_delta_eps_form_disagrees_at_six() {
        let printed = |n: i64| {
            if n % 2 == 1 {
                0
            } else {
                sigma_over(n, 1) - 2 * sigma_over(n, 2) - sigma_over(n, 3) + 12 * sigma_over(n, 6)
            }
        };
        let sum = conv_sum(DivisorFn::DeltaStar, DivisorFn::EpsilonStar, 6);
        assert_eq!(sum, 3);
        assert_eq!(printed(6), 13);
        assert_eq!(printed(2), conv_sum(DivisorFn::DeltaStar, DivisorFn::EpsilonStar, 2));
    }

    #[test]
    fn seq_series_examples() {
        let cfg = Config::default();
        let s4 = form_theorem("s4").unwrap();
        let s = seq_to_series(&cfg, 0, |n| rep_count(&s4.form, n as u64) as i64, |n| r(n, 1), r(3, 1)).unwrap();
        let vals: Vec<_> = s.body().terms().map(|(e, c)| (e, c.as_rational().unwrap())).collect();
        assert_eq!(vals.len(), 3);
        assert_eq!(vals[1].1, num_rational::BigRational::from_integer(8.into()));
        assert_eq!(vals[2].1, num_rational::BigRational::from_integer(24.into()));
        let z = seq_to_series(&cfg, 0, |_| 0, |n| r(n, 1), r(3, 1)).unwrap();
        assert!(z.is_zero());
        let t4 = form_theorem("t4").unwrap();
        let s = seq_to_series(&cfg, 0, |n| rep_count(&t4.form, n as u64) as i64, |n| t4.indexing.at(n), r(4, 1)).unwrap();
        assert_eq!(s.coeff_at(r(1, 1)).unwrap(), cfg.field().from_i64(16));
        assert_eq!(s.coeff_at(r(3, 1)).unwrap(), cfg.field().from_i64(64));
    }
}
