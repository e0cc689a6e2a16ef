//! Generators for theta constants with characteristics, their z-jets,
//! Dedekind eta and eta quotients, and the hexagonal lattice sum `a(q)`.

use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Roots;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::series::{ceil_rat, AnalyticSeries, Config, QSeries, Rat, SeriesError};

/// Largest z-derivative exposed by [`theta_series`].
pub const MAX_Z_ORDER: u32 = 3;
/// Largest jet order.
pub const MAX_JET_ORDER: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GenError {
    #[error("characteristic [{eps},{eps_prime}] with tau multiplier {tau_mult} is not supported: {reason}")]
    UnsupportedCharacteristic {
        eps: Rat,
        eps_prime: Rat,
        tau_mult: Rat,
        reason: &'static str,
    },
    #[error("z-derivative order {0} exceeds the supported maximum")]
    UnsupportedZOrder(u32),
    #[error("jet order {0} exceeds the supported maximum")]
    UnsupportedJetOrder(usize),
    #[error("tau multiplier must be positive, got {0}")]
    NonPositiveTauMult(Rat),
    #[error("an eta quotient needs at least one factor")]
    EmptyEtaQuotient,
    #[error(transparent)]
    Series(#[from] SeriesError),
}

impl From<crate::cyclotomic::CycloError> for GenError {
    fn from(e: crate::cyclotomic::CycloError) -> Self {
        GenError::Series(e.into())
    }
}

/// `θ^(m)[ε,ε'](0, kτ)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ThetaSpec {
    pub eps: Rat,
    pub eps_prime: Rat,
    pub tau_mult: Rat,
    pub z_order: u32,
}

impl ThetaSpec {
    pub fn new(eps: Rat, eps_prime: Rat, tau_mult: Rat, z_order: u32) -> Self {
        ThetaSpec {
            eps,
            eps_prime,
            tau_mult,
            z_order,
        }
    }

    /// Characteristic given as integer pairs, `τ` multiplier `k`, no derivative.
    pub fn of(eps: (i64, i64), eps_prime: (i64, i64), k: (i64, i64)) -> Self {
        Self::new(
            Rat::new(eps.0, eps.1),
            Rat::new(eps_prime.0, eps_prime.1),
            Rat::new(k.0, k.1),
            0,
        )
    }

    pub fn derivative(self, m: u32) -> Self {
        ThetaSpec { z_order: m, ..self }
    }

    fn unsupported(&self, reason: &'static str) -> GenError {
        GenError::UnsupportedCharacteristic {
            eps: self.eps,
            eps_prime: self.eps_prime,
            tau_mult: self.tau_mult,
            reason,
        }
    }
}

impl fmt::Display for ThetaSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "theta[{},{}]", self.eps, self.eps_prime)?;
        for _ in 0..self.z_order {
            f.write_str("'")?;
        }
        write!(f, "({}t)", self.tau_mult)
    }
}

fn check_tau_mult(k: Rat) -> Result<(), GenError> {
    if k <= Rat::zero() {
        Err(GenError::NonPositiveTauMult(k))
    } else {
        Ok(())
    }
}

fn big(x: Rat) -> BigRational {
    BigRational::new(BigInt::from(*x.numer()), BigInt::from(*x.denom()))
}

/// Integer `N ≥ 0` with `N² ≥ x` for rational `x`.
fn sqrt_bound(x: Rat) -> i64 {
    let c = ceil_rat(x).max(0);
    let r = (c as u64).sqrt() as i64;
    r + 1
}

/// Raw terms `(grid numerator, coefficient)` of the z-Taylor coefficient of
/// order `m` (without the `1/m!` and with π stripped), exponent below `t`.
fn theta_terms(
    cfg: &Config,
    spec: &ThetaSpec,
    m: u32,
    t: Rat,
    with_factorial: bool,
) -> Result<Vec<(i64, crate::CycloNum)>, GenError> {
    check_tau_mult(spec.tau_mult)?;
    if *spec.eps.denom() > 2 {
        return Err(spec.unsupported("the denominator of eps must be 1 or 2"));
    }
    let field = cfg.field();
    let half = Rat::new(1, 2);
    let k = spec.tau_mult;
    // k·a²/2 < t  ⇔  a² < 2t/k
    let bound = sqrt_bound(t * Rat::from_integer(2) / k);
    let shift = spec.eps * half;
    let two_i = if m > 0 {
        field.imag_unit()?.scale_i64(2)
    } else {
        field.one()
    };
    let two_i_pow = two_i.pow(m as i64)?;
    let mut factorial = BigInt::one();
    if with_factorial {
        for j in 2..=m {
            factorial *= BigInt::from(j);
        }
    }
    let mut out = Vec::new();
    let lo = -bound - 2 - shift.to_integer().abs();
    let hi = bound + 2 + shift.to_integer().abs();
    for n in lo..=hi {
        let a = Rat::from_integer(n) + shift;
        let e = k * a * a * half;
        if e >= t {
            continue;
        }
        let grid_n = cfg
            .on_grid(e)
            .map_err(|_| spec.unsupported("exponent leaves the grid"))?;
        let phase = a * spec.eps_prime * half;
        let root = field
            .turn(*phase.numer(), *phase.denom())
            .ok_or_else(|| spec.unsupported("phase is not a root of unity in the field"))?;
        if m > 0 && a.is_zero() {
            continue;
        }
        let mut weight = big(a).pow(m as i32);
        if with_factorial {
            weight /= BigRational::from_integer(factorial.clone());
        }
        let c = (&root * &two_i_pow).scale(&weight);
        out.push((grid_n, c));
    }
    Ok(out)
}

/// `θ^(m)[ε,ε'](0,kτ)` by direct summation of the defining series, exact below `t`.
pub fn theta_series(cfg: &Config, spec: &ThetaSpec, t: Rat) -> Result<AnalyticSeries, GenError> {
    if spec.z_order > MAX_Z_ORDER {
        return Err(GenError::UnsupportedZOrder(spec.z_order));
    }
    let terms = theta_terms(cfg, spec, spec.z_order, t, false)?;
    Ok(AnalyticSeries::new(
        spec.z_order as i32,
        QSeries::from_terms(cfg, t, terms),
    ))
}

/// `θ[ε,ε'](0,kτ)` through the Jacobi triple product, exact below `t`.
/// Requires `0 ≤ ε ≤ 1`.
pub fn theta_triple_product(
    cfg: &Config,
    eps: Rat,
    eps_prime: Rat,
    tau_mult: Rat,
    t: Rat,
) -> Result<AnalyticSeries, GenError> {
    let spec = ThetaSpec::new(eps, eps_prime, tau_mult, 0);
    check_tau_mult(tau_mult)?;
    if eps < Rat::zero() || eps > Rat::one() || *eps.denom() > 2 {
        return Err(spec.unsupported("the product form needs eps in [0,1] with denominator 1 or 2"));
    }
    let field = cfg.field();
    let half = Rat::new(1, 2);
    let k = tau_mult;
    let turn = |x: Rat| {
        field
            .turn(*x.numer(), *x.denom())
            .ok_or_else(|| spec.unsupported("phase is not a root of unity in the field"))
    };
    let grid = |e: Rat| {
        cfg.on_grid(e)
            .map_err(|_| spec.unsupported("exponent leaves the grid"))
    };
    let lead = k * eps * eps / Rat::from_integer(8);
    let prefactor = turn(eps * eps_prime / Rat::from_integer(4))?;
    let plus = turn(eps_prime * half)?;
    let minus = turn(-eps_prime * half)?;
    let body_t = t - lead;
    let mut body = QSeries::from_terms(cfg, body_t, [(0, field.one())]);
    let neg_one = field.from_i64(-1);
    let mut n = 1i64;
    loop {
        let nn = Rat::from_integer(n);
        let e1 = k * nn;
        let e2 = k * (Rat::from_integer(2 * n - 1) + eps) * half;
        let e3 = k * (Rat::from_integer(2 * n - 1) - eps) * half;
        if e1 >= body_t && e2 >= body_t && e3 >= body_t {
            break;
        }
        for (e, c) in [(e1, &neg_one), (e2, &plus), (e3, &minus)] {
            if e >= body_t {
                continue;
            }
            let dn = grid(e)?;
            if dn == 0 {
                let scale = &field.one() + c;
                body = body.scale(&scale)?;
            } else {
                body.mul_binomial(c, dn);
            }
        }
        n += 1;
    }
    let body = body.scale(&prefactor)?.shift(lead)?;
    Ok(AnalyticSeries::new(0, body))
}

/// `η(kτ)` by the pentagonal number theorem, exact below `t`.
pub fn eta_series(cfg: &Config, k: Rat, t: Rat) -> Result<AnalyticSeries, GenError> {
    check_tau_mult(k)?;
    let lead = k / Rat::from_integer(24);
    let body = pentagonal_body(cfg, k, t - lead)?;
    Ok(AnalyticSeries::new(0, body.shift(lead)?))
}

/// `Π_{n≥1} (1 − q^{kn})` as `Σ_j (−1)^j q^{k·j(3j−1)/2}`, exact below `t`.
fn pentagonal_body(cfg: &Config, k: Rat, t: Rat) -> Result<QSeries, GenError> {
    let field = cfg.field();
    let mut terms = Vec::new();
    let mut j = 0i64;
    loop {
        let mut any = false;
        let signs: &[i64] = if j == 0 { &[0] } else { &[j, -j] };
        for &s in signs {
            let e = k * Rat::from_integer(s * (3 * s - 1) / 2);
            if e < t {
                any = true;
                let sign = if s % 2 == 0 { 1 } else { -1 };
                terms.push((cfg.on_grid(e)?, field.from_i64(sign)));
            }
        }
        if !any {
            break;
        }
        j += 1;
    }
    Ok(QSeries::from_terms(cfg, t, terms))
}

/// `η(kτ) = q^{k/24} Π (1 − q^{kn})` by multiplying out the product; the
/// independent oracle for [`eta_series`].
pub fn eta_product(cfg: &Config, k: Rat, t: Rat) -> Result<AnalyticSeries, GenError> {
    check_tau_mult(k)?;
    let lead = k / Rat::from_integer(24);
    let body_t = t - lead;
    let field = cfg.field();
    let mut body = QSeries::from_terms(cfg, body_t, [(0, field.one())]);
    let neg_one = field.from_i64(-1);
    let mut n = 1i64;
    while k * Rat::from_integer(n) < body_t {
        body.mul_binomial(&neg_one, cfg.on_grid(k * Rat::from_integer(n))?);
        n += 1;
    }
    Ok(AnalyticSeries::new(0, body.shift(lead)?))
}

/// `Π η(k_i τ)^{e_i}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EtaQuotientSpec {
    pub factors: Vec<(Rat, i64)>,
}

impl EtaQuotientSpec {
    pub fn new(factors: Vec<(Rat, i64)>) -> Self {
        EtaQuotientSpec { factors }
    }

    /// Factors given as `(k, exponent)` with integer `k`.
    pub fn of(factors: &[(i64, i64)]) -> Self {
        Self::new(
            factors
                .iter()
                .map(|&(k, e)| (Rat::from_integer(k), e))
                .collect(),
        )
    }

    /// Exponent of the leading `q` power, `Σ e·k/24`.
    pub fn leading_exponent(&self) -> Rat {
        self.factors
            .iter()
            .fold(Rat::zero(), |acc, &(k, e)| acc + k * Rat::from_integer(e))
            / Rat::from_integer(24)
    }
}

/// Eta quotient exact below `t`. Each factor is used in the normalized form
/// `Π(1 − q^{kn})`, so powers and inverses lose no validity.
pub fn eta_quotient(cfg: &Config, spec: &EtaQuotientSpec, t: Rat) -> Result<AnalyticSeries, GenError> {
    if spec.factors.is_empty() {
        return Err(GenError::EmptyEtaQuotient);
    }
    let lead = spec.leading_exponent();
    let body_t = t - lead;
    let mut acc = AnalyticSeries::one(cfg, body_t);
    for &(k, e) in &spec.factors {
        check_tau_mult(k)?;
        if e == 0 {
            continue;
        }
        let p = AnalyticSeries::new(0, pentagonal_body(cfg, k, body_t)?);
        acc = acc.mul(&p.pow(e)?)?;
    }
    Ok(acc.shift(lead)?)
}

/// Truncated z-Taylor expansion: entry `m` is the coefficient of `z^m`.
#[derive(Debug, Clone, PartialEq)]
pub struct Jet {
    entries: Vec<AnalyticSeries>,
}

impl Jet {
    pub fn new(entries: Vec<AnalyticSeries>) -> Self {
        assert!(!entries.is_empty(), "a jet has at least one entry");
        Jet { entries }
    }

    /// Constant jet `s + 0·z + …` with the given order.
    pub fn constant(s: AnalyticSeries, order: usize) -> Self {
        let zero = AnalyticSeries::zero(&s.config(), s.valid_to());
        let mut entries = alloc::vec![zero; order + 1];
        entries[0] = s;
        Jet { entries }
    }

    /// Highest z-power carried.
    pub fn order(&self) -> usize {
        self.entries.len() - 1
    }

    pub fn entry(&self, m: usize) -> &AnalyticSeries {
        &self.entries[m]
    }

    pub fn entries(&self) -> &[AnalyticSeries] {
        &self.entries
    }

    fn truncated(&self, order: usize) -> &[AnalyticSeries] {
        &self.entries[..=order.min(self.order())]
    }

    pub fn add(&self, other: &Jet) -> Result<Jet, GenError> {
        let j = self.order().min(other.order());
        let entries = self
            .truncated(j)
            .iter()
            .zip(other.truncated(j))
            .map(|(a, b)| a.add(b))
            .collect::<Result<_, _>>()?;
        Ok(Jet { entries })
    }

    pub fn sub(&self, other: &Jet) -> Result<Jet, GenError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Jet {
        Jet {
            entries: self.entries.iter().map(AnalyticSeries::neg).collect(),
        }
    }

    /// Cauchy product in `z`, truncated to the shorter jet.
    pub fn mul(&self, other: &Jet) -> Result<Jet, GenError> {
        let j = self.order().min(other.order());
        let mut entries = Vec::with_capacity(j + 1);
        for m in 0..=j {
            let mut acc: Option<AnalyticSeries> = None;
            for i in 0..=m {
                let p = self.entries[i].mul(&other.entries[m - i])?;
                acc = Some(match acc {
                    None => p,
                    Some(a) => a.add(&p)?,
                });
            }
            entries.push(acc.expect("m ≥ 0 has at least one term"));
        }
        Ok(Jet { entries })
    }

    /// Multiplies every entry by a z-independent series.
    pub fn scale(&self, s: &AnalyticSeries) -> Result<Jet, GenError> {
        let entries = self
            .entries
            .iter()
            .map(|e| e.mul(s))
            .collect::<Result<_, _>>()?;
        Ok(Jet { entries })
    }

    /// Quotient; entry 0 of the divisor must have a leading term.
    pub fn div(&self, other: &Jet) -> Result<Jet, GenError> {
        let j = self.order().min(other.order());
        let inv0 = other.entries[0].invert()?;
        let mut inv: Vec<AnalyticSeries> = Vec::with_capacity(j + 1);
        inv.push(inv0.clone());
        for m in 1..=j {
            let mut acc: Option<AnalyticSeries> = None;
            for i in 1..=m {
                let p = other.entries[i].mul(&inv[m - i])?;
                acc = Some(match acc {
                    None => p,
                    Some(a) => a.add(&p)?,
                });
            }
            let sum = acc.expect("m ≥ 1 has at least one term");
            inv.push(sum.mul(&inv0)?.neg());
        }
        self.mul(&Jet { entries: inv })
    }

    /// `d/dz`; the result is one order shorter.
    pub fn z_derivative(&self) -> Jet {
        if self.order() == 0 {
            return self.clone();
        }
        let entries = (1..=self.order())
            .map(|m| self.entries[m].scale_ratio(m as i64, 1))
            .collect();
        Jet { entries }
    }

    pub fn truncate(&self, t: Rat) -> Jet {
        Jet {
            entries: self.entries.iter().map(|e| e.truncate(t)).collect(),
        }
    }

    pub fn valid_to(&self) -> Rat {
        self.entries
            .iter()
            .map(AnalyticSeries::valid_to)
            .min()
            .expect("nonempty")
    }
}

/// z-jet of `θ[ε,ε'](z, kτ)` to order `j`: entry `m` is `θ^(m)/m!`, with π-power `m`.
pub fn theta_jet(
    cfg: &Config,
    eps: Rat,
    eps_prime: Rat,
    tau_mult: Rat,
    j: usize,
    t: Rat,
) -> Result<Jet, GenError> {
    if j > MAX_JET_ORDER {
        return Err(GenError::UnsupportedJetOrder(j));
    }
    let spec = ThetaSpec::new(eps, eps_prime, tau_mult, 0);
    let entries = (0..=j as u32)
        .map(|m| {
            let terms = theta_terms(cfg, &spec, m, t, true)?;
            Ok(AnalyticSeries::new(m as i32, QSeries::from_terms(cfg, t, terms)))
        })
        .collect::<Result<_, GenError>>()?;
    Ok(Jet { entries })
}

/// `a(q) = Σ_{m,n∈Z} q^{m²+mn+n²}`, exact below `t`.
pub fn a_series(cfg: &Config, t: Rat) -> AnalyticSeries {
    let field = cfg.field();
    // m²+mn+n² ≥ (3/4)·max(|m|,|n|)², so |m|,|n| ≤ 2√t covers every term below t
    let bound = 2 * sqrt_bound(t);
    let mut counts: alloc::collections::BTreeMap<i64, i64> = Default::default();
    for m in -bound..=bound {
        for n in -bound..=bound {
            let v = m * m + m * n + n * n;
            if Rat::from_integer(v) < t {
                *counts.entry(v).or_insert(0) += 1;
            }
        }
    }
    let e = cfg.grid() as i64;
    AnalyticSeries::new(
        0,
        QSeries::from_terms(
            cfg,
            t,
            counts.into_iter().map(|(v, c)| (v * e, field.from_i64(c))),
        ),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::EqReport;

    fn r(n: i64, d: i64) -> Rat {
        Rat::new(n, d)
    }

    fn cfg() -> Config {
        Config::default()
    }

    fn coeff_int(s: &AnalyticSeries, e: Rat) -> Option<i64> {
        let c = s.coeff_at(e).unwrap().as_rational()?;
        assert!(c.is_integer());
        i64::try_from(c.to_integer()).ok()
    }

    #[test]
    fn theta00_examples() {
        let c = cfg();
        let th = theta_series(&c, &ThetaSpec::of((0, 1), (0, 1), (1, 1)), r(3, 1)).unwrap();
        let terms: Vec<(Rat, i64)> = th
            .body()
            .terms()
            .map(|(e, v)| (e, i64::try_from(v.as_rational().unwrap().to_integer()).unwrap()))
            .collect();
        assert_eq!(terms, [(r(0, 1), 1), (r(1, 2), 2), (r(2, 1), 2)]);
        let th = theta_series(&c, &ThetaSpec::of((0, 1), (0, 1), (1, 1)), r(5, 1)).unwrap();
        assert_eq!(coeff_int(&th, r(9, 2)), Some(2));
    }

    #[test]
    fn theta11_vanishes_and_derivative_matches_eta_cubed() {
        let c = cfg();
        let s = ThetaSpec::of((1, 1), (1, 1), (1, 1));
        assert!(theta_series(&c, &s, r(30, 1)).unwrap().is_zero());
        let d = theta_series(&c, &s.derivative(1), r(30, 1)).unwrap();
        assert_eq!(d.pi_power(), 1);
        let expect = [(0, -2), (1, 6), (3, -10), (6, 14), (10, -18)];
        for (n, v) in expect {
            assert_eq!(coeff_int(&d, r(1, 8) + r(n, 1)), Some(v), "n = {n}");
        }
        // −2π·η(τ)³
        let eta3 = eta_series(&c, r(1, 1), r(30, 1)).unwrap().pow(3).unwrap();
        let rhs = eta3.scale(&c.field().from_i64(-2), 1).unwrap();
        let t = rhs.valid_to().min(d.valid_to());
        assert!(d.eq_upto(&rhs, t).unwrap().is_equal());
    }

    #[test]
    fn unsupported_inputs() {
        let c = cfg();
        let bad = ThetaSpec::of((1, 3), (0, 1), (1, 1));
        assert!(matches!(
            theta_series(&c, &bad, r(5, 1)),
            Err(GenError::UnsupportedCharacteristic { .. })
        ));
        let bad_phase = ThetaSpec::of((1, 1), (1, 5), (1, 1));
        assert!(matches!(
            theta_series(&c, &bad_phase, r(5, 1)),
            Err(GenError::UnsupportedCharacteristic { .. })
        ));
        let deep = ThetaSpec::of((0, 1), (0, 1), (1, 1)).derivative(4);
        assert_eq!(theta_series(&c, &deep, r(5, 1)), Err(GenError::UnsupportedZOrder(4)));
        assert!(theta_jet(&c, r(0, 1), r(0, 1), r(1, 1), 5, r(5, 1)).is_err());
    }

    const CHARS: [((i64, i64), (i64, i64)); 12] = [
        ((0, 1), (0, 1)),
        ((1, 1), (0, 1)),
        ((0, 1), (1, 1)),
        ((1, 1), (1, 1)),
        ((1, 1), (1, 2)),
        ((0, 1), (1, 2)),
        ((1, 1), (1, 3)),
        ((1, 1), (2, 3)),
        ((1, 1), (1, 4)),
        ((1, 1), (3, 4)),
        ((0, 1), (1, 4)),
        ((0, 1), (3, 4)),
    ];

    #[test]
    fn triple_product_matches_definition() {
        let c = cfg();
        for (e, ep) in CHARS {
            for k in [(1, 1), (2, 1), (3, 2)] {
                let s = ThetaSpec::of(e, ep, k);
                let def = theta_series(&c, &s, r(12, 1)).unwrap();
                let prod = theta_triple_product(&c, s.eps, s.eps_prime, s.tau_mult, r(12, 1)).unwrap();
                assert_eq!(def.eq_upto(&prod, r(12, 1)).unwrap(), EqReport::Equal, "{s}");
            }
        }
    }

    #[test]
    fn eta_examples() {
        let c = cfg();
        let eta = eta_series(&c, r(1, 1), r(10, 1)).unwrap();
        let lead = r(1, 24);
        for (e, v) in [(0, 1), (1, -1), (2, -1), (3, 0), (5, 1), (7, 1)] {
            assert_eq!(coeff_int(&eta, lead + r(e, 1)), Some(v));
        }
        let raw = eta_product(&c, r(1, 1), r(10, 1)).unwrap();
        assert!(eta.eq_upto(&raw, r(10, 1)).unwrap().is_equal());
        let q = EtaQuotientSpec::of(&[(2, 3), (1, -2), (4, -1)]);
        assert_eq!(q.leading_exponent(), r(0, 1));
        let q = EtaQuotientSpec::of(&[(1, 2), (4, 1), (8, -3)]);
        assert_eq!(q.leading_exponent(), r(-3, 4));
        let s = eta_quotient(&c, &q, r(5, 1)).unwrap();
        assert_eq!(s.ord(), r(-3, 4));
        assert_eq!(s.valid_to(), r(5, 1));
        let three_halves = eta_series(&c, r(3, 2), r(5, 1)).unwrap();
        assert_eq!(three_halves.ord(), r(1, 16));
        assert_eq!(eta_quotient(&c, &EtaQuotientSpec::new(Vec::new()), r(1, 1)), Err(GenError::EmptyEtaQuotient));
    }

    #[test]
    fn eta_quotient_matches_direct_products() {
        let c = cfg();
        let t = r(8, 1);
        let q = eta_quotient(&c, &EtaQuotientSpec::of(&[(4, 1), (1, -1)]), t).unwrap();
        let direct = eta_series(&c, r(4, 1), r(12, 1))
            .unwrap()
            .div(&eta_series(&c, r(1, 1), r(12, 1)).unwrap())
            .unwrap();
        assert!(q.eq_upto(&direct, t).unwrap().is_equal());
    }

    #[test]
    fn jet_basics() {
        let c = cfg();
        let t = r(10, 1);
        let jet = theta_jet(&c, r(0, 1), r(0, 1), r(1, 1), 4, t).unwrap();
        assert_eq!(jet.order(), 4);
        let th = theta_series(&c, &ThetaSpec::of((0, 1), (0, 1), (1, 1)), t).unwrap();
        assert_eq!(jet.entry(0), &th);
        assert!(jet.entry(1).is_zero());
        assert!(jet.entry(3).is_zero());
        for m in 0..=4 {
            assert!(jet.entry(m).is_zero() || jet.entry(m).pi_power() == m as i32);
        }
        let odd = theta_jet(&c, r(1, 1), r(1, 1), r(1, 1), 4, t).unwrap();
        assert!(odd.entry(0).is_zero() && odd.entry(2).is_zero() && odd.entry(4).is_zero());
        // entry 1 of a jet is θ'
        let d = theta_series(&c, &ThetaSpec::of((1, 1), (1, 1), (1, 1)).derivative(1), t).unwrap();
        assert_eq!(odd.entry(1), &d);
        // (jet / jet) = 1
        let j = theta_jet(&c, r(1, 1), r(1, 3), r(1, 1), 4, t).unwrap();
        let one = j.div(&j).unwrap();
        let vt = one.valid_to();
        assert!(one
            .entry(0)
            .eq_upto(&AnalyticSeries::one(&c, vt), vt)
            .unwrap()
            .is_equal());
        for m in 1..=4 {
            assert!(one.entry(m).truncate(vt).is_zero());
        }
    }

    #[test]
    fn a_series_matches_divisor_formula() {
        let c = cfg();
        let a = a_series(&c, r(201, 1));
        assert_eq!(coeff_int(&a, r(0, 1)), Some(1));
        assert_eq!(coeff_int(&a, r(1, 1)), Some(6));
        for n in 1..=200i64 {
            let d13 = (1..=n).filter(|d| n % d == 0 && d % 3 == 1).count() as i64;
            let d23 = (1..=n).filter(|d| n % d == 0 && d % 3 == 2).count() as i64;
            assert_eq!(coeff_int(&a, r(n, 1)), Some(6 * (d13 - d23)), "n = {n}");
        }
    }
}
