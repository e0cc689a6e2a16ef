//! Truncated sparse series in `u = q^(1/E)` with cyclotomic coefficients.
//!
//! A [`QSeries`] knows the exponent bound `valid_to` below which every
//! coefficient is exact; every operation propagates that bound
//! conservatively instead of silently truncating. [`AnalyticSeries`] adds an
//! integer power of `π` so that the transcendental prefactors of theta
//! derivatives stay symbolic.

use alloc::collections::btree_map::Entry;
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::{max, min};

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::Zero;

use crate::cyclotomic::{CycloError, CycloField, CycloNum, DEFAULT_ORDER};

/// Small exact rational used for exponents, orders and characteristics.
pub type Rat = Ratio<i64>;

/// Default exponent denominator: the least grid holding `1/24` and `1/16`.
pub const DEFAULT_GRID: u32 = 48;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SeriesError {
    #[error("exponent {exponent} is not on the 1/{grid} grid")]
    OffGrid { exponent: Rat, grid: u32 },
    #[error("grid mismatch: 1/{0} vs 1/{1}")]
    GridMismatch(u32, u32),
    #[error("coefficient ring mismatch: Q(zeta_{0}) vs Q(zeta_{1})")]
    RingMismatch(u32, u32),
    #[error("cannot combine pi^{0} and pi^{1} terms")]
    PiPowerMismatch(i32, i32),
    #[error("series has no leading term below its validity bound {0}")]
    ZeroLeading(Rat),
    #[error("exponent {requested} is beyond the validity bound {valid_to}")]
    BeyondValidity { requested: Rat, valid_to: Rat },
    #[error("tau multiplier must be positive, got {0}")]
    NonPositiveScale(Rat),
    #[error(transparent)]
    Cyclo(#[from] CycloError),
}

/// Grid and coefficient field shared by every series of one computation.
#[derive(Clone, Debug)]
pub struct Config {
    grid: u32,
    field: Arc<CycloField>,
}

impl Config {
    pub fn new(grid: u32, ring: u32) -> Result<Self, SeriesError> {
        if grid == 0 {
            return Err(SeriesError::OffGrid {
                exponent: Rat::zero(),
                grid,
            });
        }
        Ok(Config {
            grid,
            field: CycloField::new(ring)?,
        })
    }

    pub fn with_field(grid: u32, field: Arc<CycloField>) -> Self {
        assert!(grid > 0);
        Config { grid, field }
    }

    pub fn grid(&self) -> u32 {
        self.grid
    }

    pub fn ring(&self) -> u32 {
        self.field.order()
    }

    pub fn field(&self) -> &Arc<CycloField> {
        &self.field
    }

    /// Grid numerator of an exponent, if it lies on the grid.
    pub fn on_grid(&self, e: Rat) -> Result<i64, SeriesError> {
        let scaled = e * Rat::from_integer(self.grid as i64);
        if scaled.is_integer() {
            Ok(scaled.to_integer())
        } else {
            Err(SeriesError::OffGrid {
                exponent: e,
                grid: self.grid,
            })
        }
    }
}

impl Default for Config {
    fn default() -> Self {
        Config::new(DEFAULT_GRID, DEFAULT_ORDER).expect("default configuration is valid")
    }
}

/// Smallest integer `>= x`.
pub(crate) fn ceil_rat(x: Rat) -> i64 {
    x.ceil().to_integer()
}

fn rat_to_big(x: Rat) -> BigRational {
    BigRational::new(BigInt::from(*x.numer()), BigInt::from(*x.denom()))
}

/// Truncated series `Σ c_n u^n`, `u = q^(1/E)`, exact for exponents below `valid_to`.
#[derive(Clone, Debug)]
pub struct QSeries {
    grid: u32,
    field: Arc<CycloField>,
    valid_to: Rat,
    terms: BTreeMap<i64, CycloNum>,
}

impl PartialEq for QSeries {
    fn eq(&self, other: &Self) -> bool {
        self.grid == other.grid
            && self.field.order() == other.field.order()
            && self.valid_to == other.valid_to
            && self.terms == other.terms
    }
}

impl QSeries {
    pub fn zero(cfg: &Config, valid_to: Rat) -> Self {
        QSeries {
            grid: cfg.grid,
            field: Arc::clone(&cfg.field),
            valid_to,
            terms: BTreeMap::new(),
        }
    }

    /// Builds a series from grid numerators; zero coefficients and terms at
    /// or beyond `valid_to` are dropped, repeated exponents are summed.
    pub fn from_terms<I>(cfg: &Config, valid_to: Rat, terms: I) -> Self
    where
        I: IntoIterator<Item = (i64, CycloNum)>,
    {
        let mut s = QSeries::zero(cfg, valid_to);
        let limit = s.limit();
        for (n, c) in terms {
            if n < limit {
                s.accumulate(n, c);
            }
        }
        s.terms.retain(|_, c| !c.is_zero());
        s
    }

    fn config(&self) -> Config {
        Config::with_field(self.grid, Arc::clone(&self.field))
    }

    fn accumulate(&mut self, n: i64, c: CycloNum) {
        match self.terms.entry(n) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let sum = o.get() + &c;
                *o.get_mut() = sum;
            }
        }
    }

    /// Exclusive upper bound on stored grid numerators.
    fn limit(&self) -> i64 {
        ceil_rat(self.valid_to * Rat::from_integer(self.grid as i64))
    }

    pub fn grid(&self) -> u32 {
        self.grid
    }

    pub fn ring(&self) -> u32 {
        self.field.order()
    }

    pub fn field(&self) -> &Arc<CycloField> {
        &self.field
    }

    pub fn valid_to(&self) -> Rat {
        self.valid_to
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Stored terms as (exponent in q-units, coefficient), ascending.
    pub fn terms(&self) -> impl Iterator<Item = (Rat, &CycloNum)> + '_ {
        let e = self.grid as i64;
        self.terms.iter().map(move |(&n, c)| (Rat::new(n, e), c))
    }

    /// Stored terms keyed by grid numerator.
    pub fn raw_terms(&self) -> &BTreeMap<i64, CycloNum> {
        &self.terms
    }

    pub fn leading(&self) -> Option<(Rat, &CycloNum)> {
        self.terms().next()
    }

    /// Least stored exponent; `valid_to` for a series that is zero to its bound.
    pub fn ord(&self) -> Rat {
        self.leading().map_or(self.valid_to, |(e, _)| e)
    }

    pub fn truncate(&self, t: Rat) -> Self {
        let mut out = self.clone();
        out.valid_to = min(self.valid_to, t);
        let limit = out.limit();
        out.terms.retain(|&n, _| n < limit);
        out
    }

    fn check(&self, other: &Self) -> Result<(), SeriesError> {
        if self.grid != other.grid {
            return Err(SeriesError::GridMismatch(self.grid, other.grid));
        }
        if self.field.order() != other.field.order() {
            return Err(SeriesError::RingMismatch(
                self.field.order(),
                other.field.order(),
            ));
        }
        Ok(())
    }

    fn combine(&self, other: &Self, negate: bool) -> Result<Self, SeriesError> {
        self.check(other)?;
        let mut out = self.truncate(other.valid_to);
        let limit = out.limit();
        for (&n, c) in other.terms.range(..limit) {
            out.accumulate(n, if negate { -c } else { c.clone() });
        }
        out.terms.retain(|_, c| !c.is_zero());
        Ok(out)
    }

    pub fn add(&self, other: &Self) -> Result<Self, SeriesError> {
        self.combine(other, false)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, SeriesError> {
        self.combine(other, true)
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = -&*c;
        }
        out
    }

    pub fn scale(&self, c: &CycloNum) -> Result<Self, SeriesError> {
        if c.order() != self.field.order() {
            return Err(SeriesError::RingMismatch(self.field.order(), c.order()));
        }
        let mut out = self.clone();
        if c.is_zero() {
            out.terms.clear();
            return Ok(out);
        }
        for v in out.terms.values_mut() {
            *v = &*v * c;
        }
        Ok(out)
    }

    /// Product; valid to `min(V_f + ord g, V_g + ord f)`.
    pub fn mul(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check(other)?;
        let valid_to = min(self.valid_to + other.ord(), other.valid_to + self.ord());
        let mut out = QSeries::zero(&self.config(), valid_to);
        let limit = out.limit();
        let Some((&g_min, _)) = other.terms.iter().next() else {
            return Ok(out);
        };
        for (&a, ca) in &self.terms {
            if a + g_min >= limit {
                break;
            }
            for (&b, cb) in &other.terms {
                if a + b >= limit {
                    break;
                }
                out.accumulate(a + b, ca * cb);
            }
        }
        out.terms.retain(|_, c| !c.is_zero());
        Ok(out)
    }

    /// Multiplicative inverse; valid to `V_f - 2·ord f`.
    pub fn invert(&self) -> Result<Self, SeriesError> {
        let Some((&lead_n, lead_c)) = self.terms.iter().next() else {
            return Err(SeriesError::ZeroLeading(self.valid_to));
        };
        let e = Rat::from_integer(self.grid as i64);
        let lead = Rat::new(lead_n, self.grid as i64);
        let valid_to = self.valid_to - lead - lead;
        let g_limit = ceil_rat(valid_to * e);
        // g has exponents -lead_n + d for d in 0..span
        let span = usize::try_from(g_limit + lead_n).unwrap_or(0);
        let inv_lead = lead_c.inv()?;
        let neg_inv_lead = -&inv_lead;
        let offsets: Vec<(usize, &CycloNum)> = self
            .terms
            .iter()
            .skip(1)
            .map(|(&n, c)| ((n - lead_n) as usize, c))
            .collect();
        let mut g: Vec<Option<CycloNum>> = vec![None; span];
        if span > 0 {
            g[0] = Some(inv_lead);
        }
        for d in 1..span {
            let mut acc: Option<CycloNum> = None;
            for &(k, fk) in &offsets {
                if k > d {
                    break;
                }
                if let Some(gv) = &g[d - k] {
                    let p = fk * gv;
                    acc = Some(match acc {
                        None => p,
                        Some(a) => &a + &p,
                    });
                }
            }
            if let Some(a) = acc {
                if !a.is_zero() {
                    g[d] = Some(&a * &neg_inv_lead);
                }
            }
        }
        let terms = g
            .into_iter()
            .enumerate()
            .filter_map(|(d, c)| c.map(|c| (d as i64 - lead_n, c)));
        Ok(QSeries::from_terms(&self.config(), valid_to, terms))
    }

    /// `τ ↦ kτ`: every exponent (and the bound) is multiplied by `k`.
    pub fn rescale_tau(&self, k: Rat) -> Result<Self, SeriesError> {
        if k <= Rat::zero() {
            return Err(SeriesError::NonPositiveScale(k));
        }
        let mut terms = BTreeMap::new();
        for (&n, c) in &self.terms {
            let m = k * Rat::from_integer(n);
            if !m.is_integer() {
                return Err(SeriesError::OffGrid {
                    exponent: m / Rat::from_integer(self.grid as i64),
                    grid: self.grid,
                });
            }
            terms.insert(m.to_integer(), c.clone());
        }
        Ok(QSeries {
            grid: self.grid,
            field: Arc::clone(&self.field),
            valid_to: self.valid_to * k,
            terms,
        })
    }

    /// Multiplication by `q^e`.
    pub fn shift(&self, e: Rat) -> Result<Self, SeriesError> {
        let dn = self.config().on_grid(e)?;
        Ok(QSeries {
            grid: self.grid,
            field: Arc::clone(&self.field),
            valid_to: self.valid_to + e,
            terms: self.terms.iter().map(|(&n, c)| (n + dn, c.clone())).collect(),
        })
    }

    /// The operator `q·d/dq`: `q^e ↦ e·q^e`.
    pub fn euler_derivative(&self) -> Self {
        let mut out = self.clone();
        let e = self.grid as i64;
        for (&n, c) in out.terms.iter_mut() {
            *c = c.scale(&rat_to_big(Rat::new(n, e)));
        }
        out.terms.retain(|_, c| !c.is_zero());
        out
    }

    /// Coefficient at exponent `e` (zero when absent or off the grid).
    pub fn coeff_at(&self, e: Rat) -> Result<CycloNum, SeriesError> {
        if e >= self.valid_to {
            return Err(SeriesError::BeyondValidity {
                requested: e,
                valid_to: self.valid_to,
            });
        }
        Ok(match self.config().on_grid(e) {
            Ok(n) => self
                .terms
                .get(&n)
                .cloned()
                .unwrap_or_else(|| self.field.zero()),
            Err(_) => self.field.zero(),
        })
    }

    /// In-place multiplication by the binomial `1 + c·q^e`, with `e > 0`.
    pub(crate) fn mul_binomial(&mut self, c: &CycloNum, dn: i64) {
        debug_assert!(dn > 0);
        let limit = self.limit();
        let shifted: Vec<(i64, CycloNum)> = self
            .terms
            .range(..limit - dn)
            .map(|(&n, v)| (n + dn, v * c))
            .collect();
        for (n, v) in shifted {
            self.accumulate(n, v);
        }
        self.terms.retain(|_, c| !c.is_zero());
    }
}

/// `π^pi_power · body`.
#[derive(Clone, Debug, PartialEq)]
pub struct AnalyticSeries {
    pi_power: i32,
    body: QSeries,
}

/// Result of comparing two series below an order.
#[derive(Clone, Debug, PartialEq)]
pub enum EqReport {
    Equal,
    Differs {
        exponent: Rat,
        lhs: CycloNum,
        rhs: CycloNum,
        /// Power of π multiplying both coefficients.
        pi_power: i32,
    },
}

impl EqReport {
    pub fn is_equal(&self) -> bool {
        matches!(self, EqReport::Equal)
    }
}

/// Renders `c·π^p` exactly.
pub fn render_coefficient(c: &CycloNum, pi_power: i32) -> String {
    if c.is_zero() || pi_power == 0 {
        c.render()
    } else if pi_power == 1 {
        format!("{}*pi", c.render())
    } else {
        format!("{}*pi^{}", c.render(), pi_power)
    }
}

impl AnalyticSeries {
    pub fn new(pi_power: i32, body: QSeries) -> Self {
        let pi_power = if body.is_zero() { 0 } else { pi_power };
        AnalyticSeries { pi_power, body }
    }

    pub fn zero(cfg: &Config, valid_to: Rat) -> Self {
        Self::new(0, QSeries::zero(cfg, valid_to))
    }

    /// `π^p · c · q^e`, exact below `valid_to`.
    pub fn monomial(
        cfg: &Config,
        pi_power: i32,
        c: CycloNum,
        e: Rat,
        valid_to: Rat,
    ) -> Result<Self, SeriesError> {
        let n = cfg.on_grid(e)?;
        if c.order() != cfg.ring() {
            return Err(SeriesError::RingMismatch(cfg.ring(), c.order()));
        }
        Ok(Self::new(
            pi_power,
            QSeries::from_terms(cfg, valid_to, [(n, c)]),
        ))
    }

    pub fn constant(cfg: &Config, c: CycloNum, valid_to: Rat) -> Self {
        Self::monomial(cfg, 0, c, Rat::zero(), valid_to).expect("zero exponent is on every grid")
    }

    pub fn one(cfg: &Config, valid_to: Rat) -> Self {
        Self::constant(cfg, cfg.field().one(), valid_to)
    }

    pub fn pi_power(&self) -> i32 {
        self.pi_power
    }

    pub fn body(&self) -> &QSeries {
        &self.body
    }

    pub fn into_body(self) -> QSeries {
        self.body
    }

    pub fn valid_to(&self) -> Rat {
        self.body.valid_to
    }

    pub fn is_zero(&self) -> bool {
        self.body.is_zero()
    }

    pub fn ord(&self) -> Rat {
        self.body.ord()
    }

    pub fn config(&self) -> Config {
        self.body.config()
    }

    pub fn truncate(&self, t: Rat) -> Self {
        Self::new(self.pi_power, self.body.truncate(t))
    }

    fn combine(&self, other: &Self, negate: bool) -> Result<Self, SeriesError> {
        let pi = if self.is_zero() {
            other.pi_power
        } else if other.is_zero() || self.pi_power == other.pi_power {
            self.pi_power
        } else {
            self.body.check(&other.body)?;
            return Err(SeriesError::PiPowerMismatch(
                self.pi_power,
                other.pi_power,
            ));
        };
        let body = self.body.combine(&other.body, negate)?;
        Ok(Self::new(pi, body))
    }

    pub fn add(&self, other: &Self) -> Result<Self, SeriesError> {
        self.combine(other, false)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, SeriesError> {
        self.combine(other, true)
    }

    pub fn neg(&self) -> Self {
        Self::new(self.pi_power, self.body.neg())
    }

    pub fn mul(&self, other: &Self) -> Result<Self, SeriesError> {
        let body = self.body.mul(&other.body)?;
        Ok(Self::new(self.pi_power + other.pi_power, body))
    }

    /// Multiplication by the scalar `c·π^pi`.
    pub fn scale(&self, c: &CycloNum, pi: i32) -> Result<Self, SeriesError> {
        Ok(Self::new(self.pi_power + pi, self.body.scale(c)?))
    }

    pub fn scale_ratio(&self, numer: i64, denom: i64) -> Self {
        let c = self.body.field.from_ratio(numer, denom);
        self.scale(&c, 0).expect("same field")
    }

    pub fn invert(&self) -> Result<Self, SeriesError> {
        Ok(Self::new(-self.pi_power, self.body.invert()?))
    }

    pub fn div(&self, other: &Self) -> Result<Self, SeriesError> {
        self.mul(&other.invert()?)
    }

    pub fn pow(&self, exp: i64) -> Result<Self, SeriesError> {
        let mut base = if exp < 0 { self.invert()? } else { self.clone() };
        let mut e = exp.unsigned_abs();
        let mut acc = Self::one(&self.config(), max(base.valid_to(), Rat::zero()));
        if e == 0 {
            // x^0 = 1 wherever x is known
            return Ok(Self::one(&self.config(), self.valid_to() - self.ord()));
        }
        let mut first = true;
        while e > 0 {
            if e & 1 == 1 {
                acc = if first { base.clone() } else { acc.mul(&base)? };
                first = false;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    pub fn rescale_tau(&self, k: Rat) -> Result<Self, SeriesError> {
        Ok(Self::new(self.pi_power, self.body.rescale_tau(k)?))
    }

    pub fn shift(&self, e: Rat) -> Result<Self, SeriesError> {
        Ok(Self::new(self.pi_power, self.body.shift(e)?))
    }

    /// `d/dτ` with `q = exp(2πiτ)`: `q^e ↦ 2πi·e·q^e`.
    pub fn tau_derivative(&self) -> Result<Self, SeriesError> {
        let two_i = self.body.field.imag_unit()?.scale_i64(2);
        let body = self.body.euler_derivative().scale(&two_i)?;
        Ok(Self::new(self.pi_power + 1, body))
    }

    /// Logarithmic derivative `(d/dτ f)/f`.
    pub fn tau_dlog(&self) -> Result<Self, SeriesError> {
        if self.is_zero() {
            return Err(SeriesError::ZeroLeading(self.valid_to()));
        }
        // the π-power of f cancels against the inverse
        let derivative = self.body.euler_derivative();
        let two_i = self.body.field.imag_unit()?.scale_i64(2);
        let ratio = derivative.scale(&two_i)?.mul(&self.body.invert()?)?;
        Ok(Self::new(1, ratio))
    }

    pub fn coeff_at(&self, e: Rat) -> Result<CycloNum, SeriesError> {
        self.body.coeff_at(e)
    }

    /// Compares all coefficients with exponent below `t`.
    pub fn eq_upto(&self, other: &Self, t: Rat) -> Result<EqReport, SeriesError> {
        self.body.check(&other.body)?;
        let bound = min(self.valid_to(), other.valid_to());
        if t > bound {
            return Err(SeriesError::BeyondValidity {
                requested: t,
                valid_to: bound,
            });
        }
        let lhs = self.body.truncate(t);
        let rhs = other.body.truncate(t);
        let pi = match (lhs.is_zero(), rhs.is_zero()) {
            (true, true) => return Ok(EqReport::Equal),
            (true, false) => other.pi_power,
            (false, true) => self.pi_power,
            (false, false) => {
                if self.pi_power != other.pi_power {
                    return Err(SeriesError::PiPowerMismatch(
                        self.pi_power,
                        other.pi_power,
                    ));
                }
                self.pi_power
            }
        };
        let zero = self.body.field.zero();
        let mut keys: Vec<i64> = lhs.terms.keys().chain(rhs.terms.keys()).copied().collect();
        keys.sort_unstable();
        keys.dedup();
        for n in keys {
            let a = lhs.terms.get(&n).unwrap_or(&zero);
            let b = rhs.terms.get(&n).unwrap_or(&zero);
            if a != b {
                return Ok(EqReport::Differs {
                    exponent: Rat::new(n, self.body.grid as i64),
                    lhs: a.clone(),
                    rhs: b.clone(),
                    pi_power: pi,
                });
            }
        }
        Ok(EqReport::Equal)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;
    use proptest::prelude::*;

    fn cfg() -> Config {
        Config::default()
    }

    fn r(n: i64, d: i64) -> Rat {
        Rat::new(n, d)
    }

    fn int_series(cfg: &Config, valid_to: Rat, terms: &[(i64, i64)]) -> AnalyticSeries {
        let f = cfg.field();
        AnalyticSeries::new(
            0,
            QSeries::from_terms(cfg, valid_to, terms.iter().map(|&(n, c)| (n, f.from_i64(c)))),
        )
    }

    #[test]
    fn monomial_examples() {
        let c = cfg();
        let f = c.field();
        let one = AnalyticSeries::monomial(&c, 0, f.one(), Rat::zero(), r(10, 1)).unwrap();
        assert_eq!(one.coeff_at(Rat::zero()).unwrap(), f.one());
        let lead = AnalyticSeries::monomial(&c, 1, f.from_i64(-2), r(1, 8), r(10, 1)).unwrap();
        assert_eq!(lead.pi_power(), 1);
        assert_eq!(lead.ord(), r(1, 8));
        let neg = AnalyticSeries::monomial(&c, 0, f.one(), r(-3, 4), r(10, 1)).unwrap();
        assert_eq!(neg.ord(), r(-3, 4));
        let zero = AnalyticSeries::monomial(&c, 3, f.zero(), r(1, 2), r(10, 1)).unwrap();
        assert!(zero.is_zero());
        assert_eq!(zero.pi_power(), 0);
        assert!(matches!(
            AnalyticSeries::monomial(&c, 0, f.one(), r(1, 96), r(10, 1)),
            Err(SeriesError::OffGrid { .. })
        ));
    }

    #[test]
    fn product_of_binomials() {
        let c = cfg();
        let a = int_series(&c, r(10, 1), &[(0, 1), (1, 1)]);
        let b = int_series(&c, r(10, 1), &[(0, 1), (1, -1)]);
        let p = a.mul(&b).unwrap();
        assert_eq!(p, int_series(&c, r(10, 1), &[(0, 1), (2, -1)]));
    }

    #[test]
    fn add_zero_takes_min_validity() {
        let c = cfg();
        let f = int_series(&c, r(10, 1), &[(0, 3), (48, 1)]);
        let z = AnalyticSeries::zero(&c, r(5, 1));
        let s = f.add(&z).unwrap();
        assert_eq!(s.valid_to(), r(5, 1));
        assert_eq!(s.body().len(), 2);
    }

    #[test]
    fn mismatches_are_errors() {
        let c = cfg();
        let c24 = Config::new(24, 48).unwrap();
        let c96 = Config::new(48, 96).unwrap();
        let a = AnalyticSeries::one(&c, r(5, 1));
        assert_eq!(
            a.add(&AnalyticSeries::one(&c24, r(5, 1))),
            Err(SeriesError::GridMismatch(48, 24))
        );
        assert_eq!(
            a.mul(&AnalyticSeries::one(&c96, r(5, 1))),
            Err(SeriesError::RingMismatch(48, 96))
        );
        let pi = AnalyticSeries::monomial(&c, 1, c.field().one(), Rat::zero(), r(5, 1)).unwrap();
        assert_eq!(a.add(&pi), Err(SeriesError::PiPowerMismatch(0, 1)));
        assert_eq!(
            a.coeff_at(r(5, 1)),
            Err(SeriesError::BeyondValidity {
                requested: r(5, 1),
                valid_to: r(5, 1)
            })
        );
    }

    #[test]
    fn validity_of_products_and_zero() {
        let c = cfg();
        let f = int_series(&c, r(10, 1), &[(24, 1)]); // q^(1/2), valid to 10
        let g = int_series(&c, r(6, 1), &[(48, 2)]); // 2q, valid to 6
        let p = f.mul(&g).unwrap();
        assert_eq!(p.valid_to(), min(r(10, 1) + r(1, 1), r(6, 1) + r(1, 2)));
        let z = AnalyticSeries::zero(&c, r(4, 1));
        let pz = f.mul(&z).unwrap();
        assert!(pz.is_zero());
        assert_eq!(pz.valid_to(), r(4, 1) + r(1, 2));
    }

    #[test]
    fn geometric_inverse() {
        let c = cfg();
        let f = int_series(&c, r(3, 1), &[(0, 1), (48, -1)]);
        let g = f.invert().unwrap();
        assert_eq!(g, int_series(&c, r(3, 1), &[(0, 1), (48, 1), (96, 1)]));
        assert!(matches!(
            AnalyticSeries::zero(&c, r(3, 1)).invert(),
            Err(SeriesError::ZeroLeading(_))
        ));
    }

    #[test]
    fn inverse_with_negative_leading_exponent() {
        let c = cfg();
        let f = int_series(&c, r(5, 1), &[(-36, 2), (12, 1)]);
        let g = f.invert().unwrap();
        assert_eq!(g.ord(), r(3, 4));
        assert_eq!(g.valid_to(), r(5, 1) + r(3, 2));
        let one = f.mul(&g).unwrap();
        let expect = AnalyticSeries::one(&c, one.valid_to());
        assert!(one.eq_upto(&expect, one.valid_to()).unwrap().is_equal());
    }

    #[test]
    fn rescale_examples() {
        let c = cfg();
        let eta_lead = int_series(&c, r(5, 1), &[(2, 1)]);
        let k = eta_lead.rescale_tau(r(3, 2)).unwrap();
        assert_eq!(k.ord(), r(1, 16));
        assert_eq!(k.valid_to(), r(15, 2));
        assert_eq!(eta_lead.rescale_tau(Rat::one()).unwrap(), eta_lead);
        let one = AnalyticSeries::one(&c, r(5, 1));
        assert_eq!(one.rescale_tau(r(7, 3)).unwrap().ord(), Rat::zero());
        assert!(matches!(
            int_series(&c, r(5, 1), &[(1, 1)]).rescale_tau(r(1, 2)),
            Err(SeriesError::OffGrid { .. })
        ));
        assert!(eta_lead.rescale_tau(r(-1, 1)).is_err());
    }

    #[test]
    fn dlog_of_monomial() {
        let c = cfg();
        let f = c.field();
        let m = AnalyticSeries::monomial(&c, 0, f.from_i64(5), r(3, 8), r(10, 1)).unwrap();
        let d = m.tau_dlog().unwrap();
        assert_eq!(d.pi_power(), 1);
        let two_i_e = f.imag_unit().unwrap().scale(&BigRational::new(3.into(), 4.into()));
        let expect = AnalyticSeries::monomial(&c, 1, two_i_e, Rat::zero(), d.valid_to()).unwrap();
        assert_eq!(d, expect);
    }

    #[test]
    fn eq_upto_reports_first_divergence() {
        let c = cfg();
        let a = int_series(&c, r(5, 1), &[(0, 1), (48, 2), (96, 3)]);
        let b = int_series(&c, r(5, 1), &[(0, 1), (48, 2), (96, 4)]);
        assert!(a.eq_upto(&a, r(5, 1)).unwrap().is_equal());
        assert!(a.eq_upto(&b, r(2, 1)).unwrap().is_equal());
        match a.eq_upto(&b, r(5, 1)).unwrap() {
            EqReport::Differs {
                exponent, lhs, rhs, ..
            } => {
                assert_eq!(exponent, r(2, 1));
                assert_eq!(lhs, c.field().from_i64(3));
                assert_eq!(rhs, c.field().from_i64(4));
            }
            EqReport::Equal => panic!("expected a divergence"),
        }
        assert!(a.eq_upto(&b, r(6, 1)).is_err());
        let z = AnalyticSeries::zero(&c, r(5, 1));
        assert_eq!(z.coeff_at(r(1, 3)).unwrap(), c.field().zero());
    }

    fn arb_series() -> impl Strategy<Value = AnalyticSeries> {
        (
            proptest::collection::btree_map(0i64..200, -5i64..=5, 1..8),
            -24i64..48,
        )
            .prop_map(|(terms, shift)| {
                let c = Config::default();
                let t: Vec<(i64, i64)> = terms.into_iter().map(|(n, v)| (n + shift, v)).collect();
                int_series(&c, r(6, 1), &t)
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        #[test]
        fn mul_commutes_and_associates(a in arb_series(), b in arb_series(), c in arb_series()) {
            prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
            let l = a.mul(&b).unwrap().mul(&c).unwrap();
            let r = a.mul(&b.mul(&c).unwrap()).unwrap();
            let t = min(l.valid_to(), r.valid_to());
            prop_assert!(l.eq_upto(&r, t).unwrap().is_equal());
        }

        #[test]
        fn inverse_roundtrip(a in arb_series()) {
            prop_assume!(!a.is_zero());
            let g = a.invert().unwrap();
            let one = a.mul(&g).unwrap();
            let t = one.valid_to();
            let expect = AnalyticSeries::one(&Config::default(), t);
            prop_assert!(one.eq_upto(&expect, t).unwrap().is_equal());
            let back = g.invert().unwrap();
            let t2 = min(back.valid_to(), a.valid_to());
            prop_assert!(back.eq_upto(&a, t2).unwrap().is_equal());
        }

        #[test]
        fn dlog_is_additive(a in arb_series(), b in arb_series()) {
            prop_assume!(!a.is_zero() && !b.is_zero());
            let lhs = a.mul(&b).unwrap().tau_dlog().unwrap();
            let rhs = a.tau_dlog().unwrap().add(&b.tau_dlog().unwrap()).unwrap();
            let t = min(lhs.valid_to(), rhs.valid_to());
            prop_assert!(lhs.eq_upto(&rhs, t).unwrap().is_equal());
        }

        #[test]
        fn validity_is_sound(a in arb_series(), b in arb_series()) {
            // extending the inputs never changes a reported coefficient
            let c = Config::default();
            let extend = |s: &AnalyticSeries| {
                let terms = s.body().raw_terms().iter().map(|(&n, v)| (n, v.clone()));
                AnalyticSeries::new(0, QSeries::from_terms(&c, r(12, 1), terms))
            };
            let short = a.mul(&b).unwrap();
            let long = extend(&a).mul(&extend(&b)).unwrap();
            prop_assert!(short.eq_upto(&long, short.valid_to()).unwrap().is_equal());
            if !a.is_zero() {
                let si = a.invert().unwrap();
                let li = extend(&a).invert().unwrap();
                prop_assert!(si.eq_upto(&li, si.valid_to()).unwrap().is_equal());
            }
        }
    }
}
