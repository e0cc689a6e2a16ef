//! Registry of identities as executable pairs of series, and the verifier.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_integer::Integer;
use num_traits::{One, Zero};

use crate::arith::{self, conv_theorem, form_theorem, rep_count_table, DivisorFn};
use crate::cyclotomic::CycloNum;
use crate::series::{
    ceil_rat, render_coefficient, AnalyticSeries, Config, EqReport, Rat, SeriesError,
    DEFAULT_GRID,
};
use crate::thetagen::{
    a_series, eta_quotient, theta_jet, theta_series, EtaQuotientSpec, GenError, Jet, ThetaSpec,
};
use crate::cyclotomic::DEFAULT_ORDER;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum IdentityError {
    #[error("unknown identity `{0}`")]
    UnknownIdentity(String),
    #[error("fk_cusp_series supports the odd primes 3, 5, 7, 11 and 13, got {0}")]
    UnsupportedK(u32),
    #[error("`{name}` stays valid only to {reached} after repeated headroom increases; order {order} was requested")]
    InsufficientValidity {
        name: String,
        order: Rat,
        reached: Rat,
    },
    #[error(transparent)]
    Gen(#[from] GenError),
}

impl From<SeriesError> for IdentityError {
    fn from(e: SeriesError) -> Self {
        IdentityError::Gen(GenError::Series(e))
    }
}

impl From<crate::cyclotomic::CycloError> for IdentityError {
    fn from(e: crate::cyclotomic::CycloError) -> Self {
        IdentityError::Gen(e.into())
    }
}

type R<T> = Result<T, IdentityError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IdentityKind {
    Series,
    Sequence,
    Jet,
}

impl IdentityKind {
    pub fn as_str(self) -> &'static str {
        match self {
            IdentityKind::Series => "series",
            IdentityKind::Sequence => "sequence",
            IdentityKind::Jet => "jet",
        }
    }
}

/// One equation to check: `lhs = rhs` below the requested order.
#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    /// Distinguishes comparisons within one case, e.g. `z^2` or a characteristic.
    pub label: Option<String>,
    pub lhs: AnalyticSeries,
    pub rhs: AnalyticSeries,
}

impl Comparison {
    pub fn new(lhs: AnalyticSeries, rhs: AnalyticSeries) -> Self {
        Comparison {
            label: None,
            lhs,
            rhs,
        }
    }

    pub fn labeled(label: impl Into<String>, lhs: AnalyticSeries, rhs: AnalyticSeries) -> Self {
        Comparison {
            label: Some(label.into()),
            lhs,
            rhs,
        }
    }

    pub fn valid_to(&self) -> Rat {
        self.lhs.valid_to().min(self.rhs.valid_to())
    }
}

/// Builds the comparisons of a case at a working order (requested order plus headroom).
pub type Builder = Arc<dyn Fn(&Config, Rat) -> R<Vec<Comparison>> + Send + Sync>;

#[derive(Clone)]
pub struct IdentityCase {
    pub name: String,
    pub statement: String,
    pub kind: IdentityKind,
    pub default_order: Rat,
    pub grid: u32,
    pub ring: u32,
    /// Initial extra order used when building, to absorb validity lost to division.
    pub headroom: Rat,
    /// Both sides in expression syntax, when they are expressible.
    pub expressions: Option<(String, String)>,
    builder: Builder,
}

impl fmt::Debug for IdentityCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("IdentityCase")
            .field("name", &self.name)
            .field("kind", &self.kind)
            .field("default_order", &self.default_order)
            .finish_non_exhaustive()
    }
}

impl IdentityCase {
    pub fn new(
        name: impl Into<String>,
        statement: impl Into<String>,
        kind: IdentityKind,
        default_order: Rat,
        builder: Builder,
    ) -> Self {
        IdentityCase {
            name: name.into(),
            statement: statement.into(),
            kind,
            default_order,
            grid: DEFAULT_GRID,
            ring: DEFAULT_ORDER,
            headroom: if kind == IdentityKind::Sequence {
                Rat::zero()
            } else {
                Rat::from_integer(2)
            },
            expressions: None,
            builder,
        }
    }

    pub fn with_expressions(mut self, lhs: &str, rhs: &str) -> Self {
        self.expressions = Some((lhs.to_string(), rhs.to_string()));
        self
    }

    pub fn config(&self) -> R<Config> {
        Ok(Config::new(self.grid, self.ring)?)
    }

    /// Runs the builder at exactly `working_order`.
    pub fn build(&self, cfg: &Config, working_order: Rat) -> R<Vec<Comparison>> {
        (self.builder)(cfg, working_order)
    }

    /// Builds with enough headroom that every comparison is valid to `order`.
    pub fn build_valid(&self, order: Rat) -> R<Vec<Comparison>> {
        let cfg = self.config()?;
        let mut headroom = self.headroom;
        let mut reached = Rat::zero();
        for _ in 0..4 {
            let comps = self.build(&cfg, order + headroom)?;
            reached = comps
                .iter()
                .map(Comparison::valid_to)
                .min()
                .unwrap_or(order + headroom);
            if reached >= order {
                return Ok(comps);
            }
            headroom += order - reached + Rat::one();
        }
        Err(IdentityError::InsufficientValidity {
            name: self.name.clone(),
            order,
            reached,
        })
    }
}

/// Where two sides first disagree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Failure {
    pub label: Option<String>,
    pub exponent: Rat,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyReport {
    pub name: String,
    pub order: Rat,
    pub pass: bool,
    pub failure: Option<Failure>,
}

/// Verifies a case below exactly `order`.
pub fn verify_case(case: &IdentityCase, order: Rat) -> R<VerifyReport> {
    let comps = case.build_valid(order)?;
    for c in &comps {
        match c.lhs.eq_upto(&c.rhs, order)? {
            EqReport::Equal => {}
            EqReport::Differs {
                exponent,
                lhs,
                rhs,
                pi_power,
            } => {
                return Ok(VerifyReport {
                    name: case.name.clone(),
                    order,
                    pass: false,
                    failure: Some(Failure {
                        label: c.label.clone(),
                        exponent,
                        lhs: render_coefficient(&lhs, pi_power),
                        rhs: render_coefficient(&rhs, pi_power),
                    }),
                });
            }
        }
    }
    Ok(VerifyReport {
        name: case.name.clone(),
        order,
        pass: true,
        failure: None,
    })
}

/// Order actually checked for a case: the larger of the request and the default.
pub fn effective_order(case: &IdentityCase, order: Option<Rat>) -> Rat {
    match order {
        Some(t) if t > case.default_order => t,
        _ => case.default_order,
    }
}

pub fn find(name: &str) -> R<IdentityCase> {
    registry()
        .into_iter()
        .find(|c| c.name == name)
        .ok_or_else(|| IdentityError::UnknownIdentity(name.to_string()))
}

/// Verifies a registry entry at `max(order, default)`.
pub fn verify(name: &str, order: Option<Rat>) -> R<VerifyReport> {
    let case = find(name)?;
    verify_case(&case, effective_order(&case, order))
}

/// Verifies every registry entry in registry order.
pub fn verify_all(order: Option<Rat>) -> Vec<R<VerifyReport>> {
    registry()
        .iter()
        .map(|c| verify_case(c, effective_order(c, order)))
        .collect()
}

fn r(n: i64, d: i64) -> Rat {
    Rat::new(n, d)
}

fn int(n: i64) -> Rat {
    Rat::from_integer(n)
}

/// Shared helpers for builders: a configuration and a working order.
struct Ctx<'a> {
    cfg: &'a Config,
    t: Rat,
}

impl Ctx<'_> {
    fn theta(&self, eps: i64, ep: Rat, k: Rat, m: u32) -> R<AnalyticSeries> {
        Ok(theta_series(self.cfg, &ThetaSpec::new(int(eps), ep, k, m), self.t)?)
    }

    fn th(&self, eps: i64, ep: Rat, k: i64) -> R<AnalyticSeries> {
        self.theta(eps, ep, int(k), 0)
    }

    /// `θ'/θ` at `kτ`.
    fn l(&self, eps: i64, ep: Rat, k: Rat) -> R<AnalyticSeries> {
        Ok(self.theta(eps, ep, k, 1)?.div(&self.theta(eps, ep, k, 0)?)?)
    }

    /// `θ''/θ`.
    fn r2(&self, eps: i64, ep: Rat) -> R<AnalyticSeries> {
        Ok(self.theta(eps, ep, int(1), 2)?.div(&self.theta(eps, ep, int(1), 0)?)?)
    }

    /// `θ'''[1,1]/θ'[1,1]`.
    fn t3(&self) -> R<AnalyticSeries> {
        Ok(self
            .theta(1, int(1), int(1), 3)?
            .div(&self.theta(1, int(1), int(1), 1)?)?)
    }

    fn eta(&self, factors: &[(Rat, i64)]) -> R<AnalyticSeries> {
        Ok(eta_quotient(self.cfg, &EtaQuotientSpec::new(factors.to_vec()), self.t)?)
    }

    fn jet(&self, eps: i64, ep: Rat) -> R<Jet> {
        Ok(theta_jet(self.cfg, int(eps), ep, int(1), 4, self.t)?)
    }

    fn num(&self, n: i64, d: i64) -> CycloNum {
        self.cfg.field().from_ratio(n, d)
    }

    fn i(&self) -> R<CycloNum> {
        Ok(self.cfg.field().imag_unit()?)
    }

    fn sqrt2(&self) -> R<CycloNum> {
        Ok(self.cfg.field().sqrt2()?)
    }

    fn sqrt3(&self) -> R<CycloNum> {
        Ok(self.cfg.field().sqrt3()?)
    }

    /// `c·π^p·s`.
    fn sc(&self, s: &AnalyticSeries, c: &CycloNum, p: i32) -> R<AnalyticSeries> {
        Ok(s.scale(c, p)?)
    }

    fn seq(&self, start: i64, f: impl Fn(i64) -> i64, e: impl Fn(i64) -> Rat) -> R<AnalyticSeries> {
        Ok(arith::seq_to_series(self.cfg, start, f, e, self.t)?)
    }

    fn one(&self) -> AnalyticSeries {
        AnalyticSeries::one(self.cfg, self.t)
    }
}

fn prod(fs: &[&AnalyticSeries]) -> R<AnalyticSeries> {
    let (first, rest) = fs.split_first().expect("nonempty product");
    let mut acc = (*first).clone();
    for f in rest {
        acc = acc.mul(f)?;
    }
    Ok(acc)
}

fn sum(fs: &[&AnalyticSeries]) -> R<AnalyticSeries> {
    let (first, rest) = fs.split_first().expect("nonempty sum");
    let mut acc = (*first).clone();
    for f in rest {
        acc = acc.add(f)?;
    }
    Ok(acc)
}

type BuildFn = fn(&Ctx) -> R<Vec<Comparison>>;

fn builder(f: BuildFn) -> Builder {
    Arc::new(move |cfg: &Config, t: Rat| f(&Ctx { cfg, t }))
}

fn series_case(name: &str, statement: &str, f: BuildFn) -> IdentityCase {
    IdentityCase::new(name, statement, IdentityKind::Series, int(30), builder(f))
}

fn one(lhs: AnalyticSeries, rhs: AnalyticSeries) -> R<Vec<Comparison>> {
    Ok(vec![Comparison::new(lhs, rhs)])
}

/// `d/dτ log Q = −(1/(2πi·c)) Σ (θ'/θ)²` written as `lhs = rhs`.
fn cusp(c: &Ctx, eta: &[(Rat, i64)], chars: &[(i64, Rat)], den: i64) -> R<Vec<Comparison>> {
    let lhs = c.eta(eta)?.tau_dlog()?;
    let mut squares = Vec::new();
    for &(e, ep) in chars {
        squares.push(c.l(e, ep, int(1))?.pow(2)?);
    }
    let total = sum(&squares.iter().collect::<Vec<_>>())?;
    // −1/(2πi·den) = i/(2π·den)
    let coeff = c.i()?.scale(&num_rational::BigRational::new(1.into(), (2 * den).into()));
    one(lhs, c.sc(&total, &coeff, -1)?)
}

fn e1(k: i64, e: i64) -> (Rat, i64) {
    (int(k), e)
}

/// `4πi·d/dτ log Q`.
fn four_pi_i_dlog(c: &Ctx, q: &AnalyticSeries) -> R<AnalyticSeries> {
    let four_i = c.i()?.scale_i64(4);
    c.sc(&q.tau_dlog()?, &four_i, 1)
}

/// `θ''[1,1/2]/θ + 2θ''/θ[χ] ± 4 (θ'/θ[1,1/2])(θ'/θ[χ]) + 2(θ'/θ[χ])² = θ'''[1,1]/θ'[1,1]`.
fn second_deriv(c: &Ctx, eps: i64, ep: Rat, sign: i64) -> R<Vec<Comparison>> {
    let half = r(1, 2);
    let l_half = c.l(1, half, int(1))?;
    let l = c.l(eps, ep, int(1))?;
    let lhs = sum(&[
        &c.r2(1, half)?,
        &c.r2(eps, ep)?.scale_ratio(2, 1),
        &l_half.mul(&l)?.scale_ratio(4 * sign, 1),
        &l.pow(2)?.scale_ratio(2, 1),
    ])?;
    one(lhs, c.t3()?)
}

fn quarter_deriv(c: &Ctx, eps: i64, ep: Rat, sign: i64) -> R<Vec<Comparison>> {
    // θ'/θ[eps,ep] = −π·B(4τ)·(√2·θ[0,0](2τ) ∓ B(4τ)), B = θ[eps xor 1... ] per family
    let b = if eps == 1 { c.th(0, int(0), 4)? } else { c.th(1, int(0), 4)? };
    let inner = c
        .sc(&c.th(0, int(0), 2)?, &c.sqrt2()?, 0)?
        .add(&b.scale_ratio(sign, 1))?;
    let rhs = c.sc(&b.mul(&inner)?, &c.num(-1, 1), 1)?;
    one(c.l(eps, ep, int(1))?, rhs)
}

fn third_denominator(c: &Ctx) -> R<AnalyticSeries> {
    prod(&[
        &c.th(1, int(0), 1)?,
        &c.th(1, r(1, 3), 1)?,
        &c.th(1, r(2, 3), 1)?.pow(3)?,
    ])
}

/// Sequence entry for a representation theorem: enumerated count vs closed formula.
fn form_sequence_case(name: &'static str, form: &'static str) -> IdentityCase {
    let f = form_theorem(form).expect("registered form");
    let statement = format!(
        "#{{{} = n}} matches its divisor formula for {} <= n <= {}",
        f.display, f.start, f.max
    );
    let build: Builder = Arc::new(move |cfg: &Config, t: Rat| {
        let f = form_theorem(form).expect("registered form");
        let max = (ceil_rat(t) - 1).max(0);
        let table = rep_count_table(&f.form, max as u64);
        let c = Ctx { cfg, t };
        let lhs = c.seq(f.start, |n| table[n as usize] as i64, int)?;
        let rhs = c.seq(f.start, f.formula, int)?;
        one(lhs, rhs)
    });
    IdentityCase::new(name, statement, IdentityKind::Sequence, int(f.max + 1), build)
}

/// Series entry: a theta/eta product against `c0 + Σ ±formula(n)·q^{e(n)}`.
fn form_series_case(
    name: &'static str,
    form: &'static str,
    product: &'static str,
    signed: bool,
    lhs: BuildProduct,
) -> IdentityCase {
    let f = form_theorem(form).expect("registered form");
    let statement = format!(
        "{} = {}sum formula(n) q^{{({}n+{})/{}}}, n >= {}",
        product,
        if f.start == 1 { "1 + " } else { "" },
        f.indexing.a,
        f.indexing.b,
        f.indexing.c,
        f.start
    );
    let build: Builder = Arc::new(move |cfg: &Config, t: Rat| {
        let f = form_theorem(form).expect("registered form");
        let c = Ctx { cfg, t };
        let body = c.seq(
            f.start,
            |n| {
                let v = (f.formula)(n);
                if signed && n % 2 == 1 {
                    -v
                } else {
                    v
                }
            },
            |n| f.indexing.at(n),
        )?;
        let rhs = if f.start == 1 { body.add(&c.one())? } else { body };
        one(lhs(&c)?, rhs)
    });
    IdentityCase::new(name, statement, IdentityKind::Series, int(30), build)
}

type BuildProduct = fn(&Ctx) -> R<AnalyticSeries>;

fn conv_case(name: &'static str) -> IdentityCase {
    let t = conv_theorem(name).expect("registered convolution");
    let statement = format!("{}, {} <= n <= {}", t.display, t.start, t.max);
    let build: Builder = Arc::new(move |cfg: &Config, order: Rat| {
        let t = conv_theorem(name).expect("registered convolution");
        let c = Ctx { cfg, t: order };
        let lhs = c.seq(t.start, |n| (t.sum)(n as u64), int)?;
        let rhs = c.seq(t.start, t.formula, int)?;
        one(lhs, rhs)
    });
    IdentityCase::new(name, statement, IdentityKind::Sequence, int(t.max + 1), build)
}

fn jet_case(name: &str, statement: &str, f: BuildFn) -> IdentityCase {
    IdentityCase::new(name, statement, IdentityKind::Jet, int(20), builder(f))
}

fn jet_comparisons(label: &str, lhs: &Jet, rhs: &Jet) -> Vec<Comparison> {
    let j = lhs.order().min(rhs.order());
    (0..=j)
        .map(|m| {
            Comparison::labeled(
                format!("{label}z^{m}"),
                lhs.entry(m).clone(),
                rhs.entry(m).clone(),
            )
        })
        .collect()
}

/// The fixed registry, in a stable order.
pub fn registry() -> Vec<IdentityCase> {
    let third = r(1, 3);
    let _ = third;
    let mut v: Vec<IdentityCase> = Vec::new();

    v.push(
        series_case(
            "jacobi_derivative",
            "θ'[1,1](τ) = −π θ[0,0](τ) θ[1,0](τ) θ[0,1](τ)",
            |c| {
                let rhs = prod(&[&c.th(0, int(0), 1)?, &c.th(1, int(0), 1)?, &c.th(0, int(1), 1)?])?;
                one(c.theta(1, int(1), int(1), 1)?, c.sc(&rhs, &c.num(-1, 1), 1)?)
            },
        )
        .with_expressions(
            "theta[1,1]'(1t)",
            "-pi*theta[0,0](1t)*theta[1,0](1t)*theta[0,1](1t)",
        ),
    );

    // first derivative formulas
    v.push(
        series_case(
            "deriv_1_half",
            "θ'[1,1/2](τ) = −π θ²[0,0](2τ) θ[1,1/2](τ)",
            |c| {
                let rhs = c.th(0, int(0), 2)?.pow(2)?.mul(&c.th(1, r(1, 2), 1)?)?;
                one(c.theta(1, r(1, 2), int(1), 1)?, c.sc(&rhs, &c.num(-1, 1), 1)?)
            },
        )
        .with_expressions(
            "theta[1,1/2]'(1t)",
            "-pi*theta[0,0](2t)^2*theta[1,1/2](1t)",
        ),
    );
    v.push(
        series_case(
            "deriv_0_half",
            "θ'[0,1/2](τ) = −π θ²[1,0](2τ) θ[0,1/2](τ)",
            |c| {
                let rhs = c.th(1, int(0), 2)?.pow(2)?.mul(&c.th(0, r(1, 2), 1)?)?;
                one(c.theta(0, r(1, 2), int(1), 1)?, c.sc(&rhs, &c.num(-1, 1), 1)?)
            },
        )
        .with_expressions(
            "theta[0,1/2]'(1t)",
            "-pi*theta[1,0](2t)^2*theta[0,1/2](1t)",
        ),
    );
    v.push(
        series_case(
            "deriv_1_third",
            "θ'/θ[1,1/3] = θ'[1,1] (θ⁴[1,1/3] − 3θ⁴[1,2/3]) / (6 θ[1,0] θ[1,1/3] θ³[1,2/3])",
            |c| {
                let num = c
                    .th(1, r(1, 3), 1)?
                    .pow(4)?
                    .sub(&c.th(1, r(2, 3), 1)?.pow(4)?.scale_ratio(3, 1))?;
                let rhs = c
                    .theta(1, int(1), int(1), 1)?
                    .mul(&num)?
                    .div(&third_denominator(c)?)?
                    .scale_ratio(1, 6);
                one(c.l(1, r(1, 3), int(1))?, rhs)
            },
        )
        .with_expressions(
            "theta[1,1/3]'(1t)/theta[1,1/3](1t)",
            "theta[1,1]'(1t)*(theta[1,1/3](1t)^4-3*theta[1,2/3](1t)^4)/(6*theta[1,0](1t)*theta[1,1/3](1t)*theta[1,2/3](1t)^3)",
        ),
    );
    v.push(
        series_case(
            "deriv_2_thirds",
            "θ'/θ[1,2/3] = θ'[1,1] θ⁴[1,1/3] / (3 θ[1,0] θ[1,1/3] θ³[1,2/3])",
            |c| {
                let rhs = c
                    .theta(1, int(1), int(1), 1)?
                    .mul(&c.th(1, r(1, 3), 1)?.pow(4)?)?
                    .div(&third_denominator(c)?)?
                    .scale_ratio(1, 3);
                one(c.l(1, r(2, 3), int(1))?, rhs)
            },
        )
        .with_expressions(
            "theta[1,2/3]'(1t)/theta[1,2/3](1t)",
            "theta[1,1]'(1t)*theta[1,1/3](1t)^4/(3*theta[1,0](1t)*theta[1,1/3](1t)*theta[1,2/3](1t)^3)",
        ),
    );
    v.push(
        series_case(
            "deriv_1_quarter",
            "θ'/θ[1,1/4] = −π θ[0,0](4τ) (√2 θ[0,0](2τ) − θ[0,0](4τ))",
            |c| quarter_deriv(c, 1, r(1, 4), -1),
        )
        .with_expressions(
            "theta[1,1/4]'(1t)/theta[1,1/4](1t)",
            "-pi*theta[0,0](4t)*(sqrt2*theta[0,0](2t)-theta[0,0](4t))",
        ),
    );
    v.push(
        series_case(
            "deriv_3_quarters",
            "θ'/θ[1,3/4] = −π θ[0,0](4τ) (√2 θ[0,0](2τ) + θ[0,0](4τ))",
            |c| quarter_deriv(c, 1, r(3, 4), 1),
        )
        .with_expressions(
            "theta[1,3/4]'(1t)/theta[1,3/4](1t)",
            "-pi*theta[0,0](4t)*(sqrt2*theta[0,0](2t)+theta[0,0](4t))",
        ),
    );
    v.push(
        series_case(
            "deriv_0_quarter",
            "θ'/θ[0,1/4] = −π θ[1,0](4τ) (√2 θ[0,0](2τ) − θ[1,0](4τ))",
            |c| quarter_deriv(c, 0, r(1, 4), -1),
        )
        .with_expressions(
            "theta[0,1/4]'(1t)/theta[0,1/4](1t)",
            "-pi*theta[1,0](4t)*(sqrt2*theta[0,0](2t)-theta[1,0](4t))",
        ),
    );
    v.push(
        series_case(
            "deriv_0_3quarters",
            "θ'/θ[0,3/4] = −π θ[1,0](4τ) (√2 θ[0,0](2τ) + θ[1,0](4τ))",
            |c| quarter_deriv(c, 0, r(3, 4), 1),
        )
        .with_expressions(
            "theta[0,3/4]'(1t)/theta[0,3/4](1t)",
            "-pi*theta[1,0](4t)*(sqrt2*theta[0,0](2t)+theta[1,0](4t))",
        ),
    );

    // level 4
    v.push(
        series_case(
            "cusp_gamma4_1half",
            "d/dτ log(η(4τ)/η(τ)) + (1/(4πi)) (θ'/θ[1,1/2])² = 0",
            |c| cusp(c, &[e1(4, 1), e1(1, -1)], &[(1, r(1, 2))], 2),
        )
        .with_expressions(
            "Dlog(eta(4t)/eta(1t))",
            "i*(theta[1,1/2]'(1t)/theta[1,1/2](1t))^2/(4*pi)",
        ),
    );
    v.push(form_sequence_case("four_squares", "s4"));
    v.push(form_series_case("four_squares_series", "s4", "θ⁴[0,0](2τ)", false, |c| {
        Ok(c.th(0, int(0), 2)?.pow(4)?)
    }));
    v.push(
        series_case(
            "cusp_gamma4_0half",
            "d/dτ log(η³(2τ)/(η²(τ)η(4τ))) + (1/(4πi)) (θ'/θ[0,1/2])² = 0",
            |c| cusp(c, &[e1(2, 3), e1(1, -2), e1(4, -1)], &[(0, r(1, 2))], 2),
        )
        .with_expressions(
            "Dlog(eta(2t)^3/(eta(1t)^2*eta(4t)))",
            "i*(theta[0,1/2]'(1t)/theta[0,1/2](1t))^2/(4*pi)",
        ),
    );
    v.push(form_sequence_case("four_triangular", "t4"));
    v.push(form_series_case("four_triangular_series", "t4", "θ⁴[1,0](2τ)", false, |c| {
        Ok(c.th(1, int(0), 2)?.pow(4)?)
    }));

    // level 6
    v.push(
        series_case(
            "prop_1_third_expansion",
            "θ'/θ[1,1/3] = −(π/√3) a(q)",
            |c| {
                let coeff = c.sqrt3()?.scale(&num_rational::BigRational::new((-1).into(), 3.into()));
                one(c.l(1, r(1, 3), int(1))?, c.sc(&a_series(c.cfg, c.t), &coeff, 1)?)
            },
        ),
    );
    v.push(series_case(
        "prop_2_thirds_expansion",
        "θ'/θ[1,2/3] = −√3π (1 + 2 Σ (d_{1,6}(n)+d_{2,6}(n)−d_{4,6}(n)−d_{5,6}(n)) qⁿ)",
        |c| {
            let d = |j| DivisorFn::DCong { j, k: 6 };
            let body = c.seq(
                1,
                |n| {
                    let n = n as u64;
                    2 * (d(1).at(n) + d(2).at(n) - d(4).at(n) - d(5).at(n))
                },
                int,
            )?;
            let s = body.add(&c.one())?;
            let coeff = -&c.sqrt3()?;
            one(c.l(1, r(2, 3), int(1))?, c.sc(&s, &coeff, 1)?)
        },
    ));
    v.push(series_case(
        "prop_0_third_expansion",
        "θ'/θ[0,1/3] = −2√3π Σ δ*(n) q^{n/2}",
        |c| {
            let s = c.seq(1, |n| DivisorFn::DeltaStar.at(n as u64), |n| r(n, 2))?;
            let coeff = c.sqrt3()?.scale_i64(-2);
            one(c.l(0, r(1, 3), int(1))?, c.sc(&s, &coeff, 1)?)
        },
    ));
    v.push(series_case(
        "prop_0_2thirds_expansion",
        "θ'/θ[0,2/3] = −2√3π Σ ε*(n) q^{n/2}",
        |c| {
            let s = c.seq(1, |n| DivisorFn::EpsilonStar.at(n as u64), |n| r(n, 2))?;
            let coeff = c.sqrt3()?.scale_i64(-2);
            one(c.l(0, r(2, 3), int(1))?, c.sc(&s, &coeff, 1)?)
        },
    ));
    v.push(
        series_case(
            "prop_halving_thirds",
            "θ'/θ[1,1/3](τ) − θ'/θ[1,2/3](τ) = −2 θ'/θ[1,1/3](2τ)",
            |c| {
                let lhs = c.l(1, r(1, 3), int(1))?.sub(&c.l(1, r(2, 3), int(1))?)?;
                one(lhs, c.l(1, r(1, 3), int(2))?.scale_ratio(-2, 1))
            },
        )
        .with_expressions(
            "theta[1,1/3]'(1t)/theta[1,1/3](1t)-theta[1,2/3]'(1t)/theta[1,2/3](1t)",
            "-2*theta[1,1/3]'(2t)/theta[1,1/3](2t)",
        ),
    );
    v.push(
        series_case(
            "prop_halving_0_third",
            "θ'/θ[0,1/3](τ) = θ'/θ[1,1/3](τ/2) − θ'/θ[1,1/3](τ)",
            |c| {
                let rhs = c.l(1, r(1, 3), r(1, 2))?.sub(&c.l(1, r(1, 3), int(1))?)?;
                one(c.l(0, r(1, 3), int(1))?, rhs)
            },
        )
        .with_expressions(
            "theta[0,1/3]'(1t)/theta[0,1/3](1t)",
            "theta[1,1/3]'(1/2t)/theta[1,1/3](1/2t)-theta[1,1/3]'(1t)/theta[1,1/3](1t)",
        ),
    );
    v.push(
        series_case(
            "prop_halving_0_2thirds",
            "θ'/θ[0,2/3](τ) = θ'/θ[1,2/3](τ/2) − θ'/θ[1,2/3](τ)",
            |c| {
                let rhs = c.l(1, r(2, 3), r(1, 2))?.sub(&c.l(1, r(2, 3), int(1))?)?;
                one(c.l(0, r(2, 3), int(1))?, rhs)
            },
        )
        .with_expressions(
            "theta[0,2/3]'(1t)/theta[0,2/3](1t)",
            "theta[1,2/3]'(1/2t)/theta[1,2/3](1/2t)-theta[1,2/3]'(1t)/theta[1,2/3](1t)",
        ),
    );
    v.push(
        series_case(
            "cusp_gamma6_1third",
            "d/dτ log(η(3τ)/η(τ)) + (1/(2πi)) (θ'/θ[1,1/3])² = 0",
            |c| cusp(c, &[e1(3, 1), e1(1, -1)], &[(1, r(1, 3))], 1),
        )
        .with_expressions(
            "Dlog(eta(3t)/eta(1t))",
            "i*(theta[1,1/3]'(1t)/theta[1,1/3](1t))^2/(2*pi)",
        ),
    );
    v.push(
        series_case(
            "rel_thm_1_third",
            "3 θ''/θ[1,1/3] + 6 (θ'/θ[1,1/3])² = θ'''[1,1]/θ'[1,1]",
            |c| {
                let l = c.l(1, r(1, 3), int(1))?;
                let lhs = c
                    .r2(1, r(1, 3))?
                    .scale_ratio(3, 1)
                    .add(&l.pow(2)?.scale_ratio(6, 1))?;
                one(lhs, c.t3()?)
            },
        )
        .with_expressions(
            "3*theta[1,1/3]''(1t)/theta[1,1/3](1t)+6*(theta[1,1/3]'(1t)/theta[1,1/3](1t))^2",
            "theta[1,1]'''(1t)/theta[1,1]'(1t)",
        ),
    );
    v.push(form_sequence_case("hex2", "s2"));
    v.push(form_series_case("hex2_series", "s2", "a(q)²", false, |c| {
        Ok(a_series(c.cfg, c.t).pow(2)?)
    }));
    v.push(form_sequence_case("s1133", "s1133"));
    v.push(form_series_case(
        "s1133_series",
        "s1133",
        "(η²(τ)η²(3τ)/(η(2τ)η(6τ)))² with (−1)ⁿ signs",
        true,
        |c| Ok(c.eta(&[e1(1, 2), e1(3, 2), e1(2, -1), e1(6, -1)])?.pow(2)?),
    ));
    v.push(
        series_case(
            "rel_1133_1",
            "θ''/θ[1,1/3] + 2θ''/θ[1,2/3] − 4 (θ'/θ[1,1/3])(θ'/θ[1,2/3]) + 2 (θ'/θ[1,2/3])² = θ'''[1,1]/θ'[1,1]",
            |c| {
                let l1 = c.l(1, r(1, 3), int(1))?;
                let l2 = c.l(1, r(2, 3), int(1))?;
                let lhs = sum(&[
                    &c.r2(1, r(1, 3))?,
                    &c.r2(1, r(2, 3))?.scale_ratio(2, 1),
                    &l1.mul(&l2)?.scale_ratio(-4, 1),
                    &l2.pow(2)?.scale_ratio(2, 1),
                ])?;
                one(lhs, c.t3()?)
            },
        )
        .with_expressions(
            "theta[1,1/3]''(1t)/theta[1,1/3](1t)+2*theta[1,2/3]''(1t)/theta[1,2/3](1t)-4*(theta[1,1/3]'(1t)/theta[1,1/3](1t))*(theta[1,2/3]'(1t)/theta[1,2/3](1t))+2*(theta[1,2/3]'(1t)/theta[1,2/3](1t))^2",
            "theta[1,1]'''(1t)/theta[1,1]'(1t)",
        ),
    );
    v.push(
        series_case(
            "rel_1133_2",
            "4πi d/dτ log(θ[1,1/3] θ²[1,2/3] / θ'[1,1]) = −(2/3) θ'[1,1]² θ²[1,1/3] / (θ²[1,0] θ²[1,2/3])",
            |c| {
                let d1 = c.theta(1, int(1), int(1), 1)?;
                let q = c.th(1, r(1, 3), 1)?.mul(&c.th(1, r(2, 3), 1)?.pow(2)?)?.div(&d1)?;
                let num = d1.pow(2)?.mul(&c.th(1, r(1, 3), 1)?.pow(2)?)?;
                let den = c.th(1, int(0), 1)?.pow(2)?.mul(&c.th(1, r(2, 3), 1)?.pow(2)?)?;
                one(four_pi_i_dlog(c, &q)?, num.div(&den)?.scale_ratio(-2, 3))
            },
        )
        .with_expressions(
            "4*pi*i*Dlog(theta[1,1/3](1t)*theta[1,2/3](1t)^2/theta[1,1]'(1t))",
            "-2/3*theta[1,1]'(1t)^2*theta[1,1/3](1t)^2/(theta[1,0](1t)^2*theta[1,2/3](1t)^2)",
        ),
    );
    v.push(jet_case(
        "jet_two_theta_sum",
        "θ²[1,2/3] θ²[1,0](z) + θ²[1,0] θ[1,2/3](z) θ[1,4/3](z) = θ²[1,1/3] θ²[1,1](z) as z-jets to z⁴",
        |c| {
            let j10 = c.jet(1, int(0))?;
            let j23 = c.jet(1, r(2, 3))?;
            let j43 = c.jet(1, r(4, 3))?;
            let j11 = c.jet(1, int(1))?;
            let lhs = j10
                .mul(&j10)?
                .scale(&c.th(1, r(2, 3), 1)?.pow(2)?)?
                .add(&j23.mul(&j43)?.scale(&c.th(1, int(0), 1)?.pow(2)?)?)?;
            let rhs = j11.mul(&j11)?.scale(&c.th(1, r(1, 3), 1)?.pow(2)?)?;
            Ok(jet_comparisons("", &lhs, &rhs))
        },
    ));
    v.push(
        series_case(
            "cusp_gamma6_2thirds",
            "d/dτ log(η⁴(6τ)/(η³(τ)η(3τ))) + (1/(2πi)) (θ'/θ[1,2/3])² = 0",
            |c| cusp(c, &[e1(6, 4), e1(1, -3), e1(3, -1)], &[(1, r(2, 3))], 1),
        )
        .with_expressions(
            "Dlog(eta(6t)^4/(eta(1t)^3*eta(3t)))",
            "i*(theta[1,2/3]'(1t)/theta[1,2/3](1t))^2/(2*pi)",
        ),
    );
    v.push(form_sequence_case("s12_hex", "s12"));
    v.push(form_series_case("s12_hex_series", "s12", "a(q) a(q²)", false, |c| {
        let a = a_series(c.cfg, c.t);
        Ok(a.mul(&a.rescale_tau(int(2))?)?)
    }));
    v.push(
        series_case(
            "product_third_tau_2tau",
            "(θ'/θ[1,1/3])(τ) (θ'/θ[1,1/3])(2τ) = πi d/dτ log(η(τ)η(3τ)/(η(2τ)η(6τ)))",
            |c| {
                let lhs = c.l(1, r(1, 3), int(1))?.mul(&c.l(1, r(1, 3), int(2))?)?;
                let q = c.eta(&[e1(1, 1), e1(3, 1), e1(2, -1), e1(6, -1)])?;
                one(lhs, c.sc(&q.tau_dlog()?, &c.i()?, 1)?)
            },
        )
        .with_expressions(
            "(theta[1,1/3]'(1t)/theta[1,1/3](1t))*(theta[1,1/3]'(2t)/theta[1,1/3](2t))",
            "pi*i*Dlog(eta(1t)*eta(3t)/(eta(2t)*eta(6t)))",
        ),
    );
    v.push(
        series_case(
            "cusp_gamma6_0third",
            "d/dτ log(η⁴(3τ/2)/(η³(τ)η(3τ))) + (1/(2πi)) (θ'/θ[0,1/3])² = 0",
            |c| cusp(c, &[(r(3, 2), 4), e1(1, -3), e1(3, -1)], &[(0, r(1, 3))], 1),
        )
        .with_expressions(
            "Dlog(eta(3/2t)^4/(eta(1t)^3*eta(3t)))",
            "i*(theta[0,1/3]'(1t)/theta[0,1/3](1t))^2/(2*pi)",
        ),
    );
    v.push(
        series_case(
            "cusp_gamma6_0_2thirds",
            "d/dτ log(η¹¹(3τ)/(η³(τ)η⁴(3τ/2)η⁴(6τ))) + (1/(2πi)) (θ'/θ[0,2/3])² = 0",
            |c| {
                cusp(
                    c,
                    &[e1(3, 11), e1(1, -3), (r(3, 2), -4), e1(6, -4)],
                    &[(0, r(2, 3))],
                    1,
                )
            },
        )
        .with_expressions(
            "Dlog(eta(3t)^11/(eta(1t)^3*eta(3/2t)^4*eta(6t)^4))",
            "i*(theta[0,2/3]'(1t)/theta[0,2/3](1t))^2/(2*pi)",
        ),
    );
    v.push(conv_case("conv_delta_delta"));
    v.push(conv_case("conv_eps_eps"));
    v.push(conv_case("conv_delta_eps"));
    v.push(
        series_case(
            "delta_eps_log_derivative",
            "(θ'/θ[0,1/3]) (θ'/θ[0,2/3]) = −2πi d/dτ log(η(3τ)η³(2τ)/(η³(τ)η(6τ)))",
            |c| {
                let lhs = c.l(0, r(1, 3), int(1))?.mul(&c.l(0, r(2, 3), int(1))?)?;
                let q = c.eta(&[e1(3, 1), e1(2, 3), e1(1, -3), e1(6, -1)])?;
                let coeff = c.i()?.scale_i64(-2);
                one(lhs, c.sc(&q.tau_dlog()?, &coeff, 1)?)
            },
        )
        .with_expressions(
            "(theta[0,1/3]'(1t)/theta[0,1/3](1t))*(theta[0,2/3]'(1t)/theta[0,2/3](1t))",
            "-2*pi*i*Dlog(eta(3t)*eta(2t)^3/(eta(1t)^3*eta(6t)))",
        ),
    );
    v.push(conv_case("conv_weighted_delta_delta"));
    v.push(conv_case("conv_weighted_delta_eps"));
    v.push(conv_case("farkas_remark"));

    // level 8
    v.push(
        series_case(
            "cusp_gamma8_1quarters",
            "d/dτ log(η³(8τ)/(η²(τ)η(4τ))) + (1/(4πi)) ((θ'/θ[1,1/4])² + (θ'/θ[1,3/4])²) = 0",
            |c| cusp(c, &[e1(8, 3), e1(1, -2), e1(4, -1)], &[(1, r(1, 4)), (1, r(3, 4))], 2),
        )
        .with_expressions(
            "Dlog(eta(8t)^3/(eta(1t)^2*eta(4t)))",
            "i*((theta[1,1/4]'(1t)/theta[1,1/4](1t))^2+(theta[1,3/4]'(1t)/theta[1,3/4](1t))^2)/(4*pi)",
        ),
    );
    v.push(
        series_case(
            "cusp_gamma8_0quarters",
            "d/dτ log(η⁸(4τ)/(η²(τ)η³(2τ)η³(8τ))) + (1/(4πi)) ((θ'/θ[0,1/4])² + (θ'/θ[0,3/4])²) = 0",
            |c| {
                cusp(
                    c,
                    &[e1(4, 8), e1(1, -2), e1(2, -3), e1(8, -3)],
                    &[(0, r(1, 4)), (0, r(3, 4))],
                    2,
                )
            },
        )
        .with_expressions(
            "Dlog(eta(4t)^8/(eta(1t)^2*eta(2t)^3*eta(8t)^3))",
            "i*((theta[0,1/4]'(1t)/theta[0,1/4](1t))^2+(theta[0,3/4]'(1t)/theta[0,3/4](1t))^2)/(4*pi)",
        ),
    );
    let rel = |name: &str, eps: i64, ep: (i64, i64), sign: &str| {
        let ch = format!("[{},{}/{}]", eps, ep.0, ep.1);
        let l = format!("(theta{ch}'(1t)/theta{ch}(1t))");
        let lh = "(theta[1,1/2]'(1t)/theta[1,1/2](1t))";
        let lhs = format!(
            "theta[1,1/2]''(1t)/theta[1,1/2](1t)+2*theta{ch}''(1t)/theta{ch}(1t){sign}4*{lh}*{l}+2*{l}^2"
        );
        (
            name.to_string(),
            format!("θ''/θ[1,1/2] + 2θ''/θ{ch} {sign} 4 (θ'/θ[1,1/2])(θ'/θ{ch}) + 2 (θ'/θ{ch})² = θ'''[1,1]/θ'[1,1]"),
            lhs,
        )
    };
    let rels: [((String, String, String), BuildFn); 4] = [
        (rel("rel_second_deriv_1_14", 1, (1, 4), "+"), |c| second_deriv(c, 1, r(1, 4), 1)),
        (rel("rel_second_deriv_1_34", 1, (3, 4), "-"), |c| second_deriv(c, 1, r(3, 4), -1)),
        (rel("rel_second_deriv_0_14", 0, (1, 4), "+"), |c| second_deriv(c, 0, r(1, 4), 1)),
        (rel("rel_second_deriv_0_34", 0, (3, 4), "-"), |c| second_deriv(c, 0, r(3, 4), -1)),
    ];
    for ((name, statement, lhs), f) in rels {
        v.push(
            series_case(&name, &statement, f)
                .with_expressions(&lhs, "theta[1,1]'''(1t)/theta[1,1]'(1t)"),
        );
    }
    v.push(
        series_case(
            "log_deriv_1122",
            "4πi d/dτ log(η²(τ)η(4τ)/(η(2τ)η²(8τ))) = 4π² θ²[0,0](2τ) θ²[0,0](4τ)",
            |c| {
                let q = c.eta(&[e1(1, 2), e1(4, 1), e1(2, -1), e1(8, -2)])?;
                let rhs = c.th(0, int(0), 2)?.pow(2)?.mul(&c.th(0, int(0), 4)?.pow(2)?)?;
                one(four_pi_i_dlog(c, &q)?, c.sc(&rhs, &c.num(4, 1), 2)?)
            },
        )
        .with_expressions(
            "4*pi*i*Dlog(eta(1t)^2*eta(4t)/(eta(2t)*eta(8t)^2))",
            "4*pi^2*theta[0,0](2t)^2*theta[0,0](4t)^2",
        ),
    );
    v.push(
        series_case(
            "log_deriv_1144",
            "4πi d/dτ log(η²(τ)η(2τ)η²(8τ)/η⁵(4τ)) = 4π² θ²[0,0](2τ) θ²[1,0](4τ)",
            |c| {
                let q = c.eta(&[e1(1, 2), e1(2, 1), e1(8, 2), e1(4, -5)])?;
                let rhs = c.th(0, int(0), 2)?.pow(2)?.mul(&c.th(1, int(0), 4)?.pow(2)?)?;
                one(four_pi_i_dlog(c, &q)?, c.sc(&rhs, &c.num(4, 1), 2)?)
            },
        )
        .with_expressions(
            "4*pi*i*Dlog(eta(1t)^2*eta(2t)*eta(8t)^2/eta(4t)^5)",
            "4*pi^2*theta[0,0](2t)^2*theta[1,0](4t)^2",
        ),
    );
    v.push(jet_case(
        "jet_dlog_square",
        "(θ'/θ)²(z) = θ''/θ(z) − d²/dz² log θ(z) as z-jets, for [0,0], [1,0], [0,1], [1,1/2], [0,1/2], [1,1/3], [1,1/4], [0,3/4]",
        |c| {
            let chars: [(i64, Rat); 8] = [
                (0, int(0)),
                (1, int(0)),
                (0, int(1)),
                (1, r(1, 2)),
                (0, r(1, 2)),
                (1, r(1, 3)),
                (1, r(1, 4)),
                (0, r(3, 4)),
            ];
            let mut out = Vec::new();
            for (e, ep) in chars {
                let th = c.jet(e, ep)?;
                let d1 = th.z_derivative();
                let l = d1.div(&th)?;
                let lhs = l.mul(&l)?;
                let rhs = d1.z_derivative().div(&th)?.sub(&l.z_derivative())?;
                out.extend(jet_comparisons(&format!("[{e},{ep}] "), &lhs, &rhs));
            }
            Ok(out)
        },
    ));
    let forms8: [(&'static str, &'static str, &'static str, BuildProduct); 8] = [
        ("s1122", "s1122", "θ²[0,0](2τ) θ²[0,0](4τ)", |c| {
            Ok(c.th(0, int(0), 2)?.pow(2)?.mul(&c.th(0, int(0), 4)?.pow(2)?)?)
        }),
        ("m_1244", "m1244", "θ[0,0](2τ) θ[0,0](4τ) θ²[1,0](4τ)", |c| {
            prod(&[&c.th(0, int(0), 2)?, &c.th(0, int(0), 4)?, &c.th(1, int(0), 4)?.pow(2)?])
        }),
        ("m_1144", "m1144", "θ²[0,0](2τ) θ²[1,0](4τ)", |c| {
            Ok(c.th(0, int(0), 2)?.pow(2)?.mul(&c.th(1, int(0), 4)?.pow(2)?)?)
        }),
        ("m_1224", "m1224", "θ[0,0](2τ) θ²[0,0](4τ) θ[1,0](4τ)", |c| {
            prod(&[&c.th(0, int(0), 2)?, &c.th(0, int(0), 4)?.pow(2)?, &c.th(1, int(0), 4)?])
        }),
        ("s1112", "s1112", "θ³[0,0](2τ) θ[0,0](4τ)", |c| {
            Ok(c.th(0, int(0), 2)?.pow(3)?.mul(&c.th(0, int(0), 4)?)?)
        }),
        ("s1222", "s1222", "θ[0,0](2τ) θ³[0,0](4τ)", |c| {
            Ok(c.th(0, int(0), 2)?.mul(&c.th(0, int(0), 4)?.pow(3)?)?)
        }),
        ("m_1114", "m1114", "θ³[0,0](2τ) θ[1,0](4τ)", |c| {
            Ok(c.th(0, int(0), 2)?.pow(3)?.mul(&c.th(1, int(0), 4)?)?)
        }),
        ("m_1444", "m1444", "θ[0,0](2τ) θ³[1,0](4τ)", |c| {
            Ok(c.th(0, int(0), 2)?.mul(&c.th(1, int(0), 4)?.pow(3)?)?)
        }),
    ];
    for (name, form, product, f) in forms8 {
        v.push(form_sequence_case(name, form));
        let series_name: &'static str = Box::leak(format!("{name}_series").into_boxed_str());
        v.push(form_series_case(series_name, form, product, false, f));
    }

    // structural identities
    v.push(
        series_case(
            "farkas_kra_lemma_1",
            "θ²[0,0](τ) = θ²[0,0](2τ) + θ²[1,0](2τ)",
            |c| {
                let rhs = c.th(0, int(0), 2)?.pow(2)?.add(&c.th(1, int(0), 2)?.pow(2)?)?;
                one(c.th(0, int(0), 1)?.pow(2)?, rhs)
            },
        )
        .with_expressions(
            "theta[0,0](1t)^2",
            "theta[0,0](2t)^2+theta[1,0](2t)^2",
        ),
    );
    v.push(
        series_case(
            "farkas_kra_lemma_2",
            "θ²[1,0](τ) = 2 θ[0,0](2τ) θ[1,0](2τ)",
            |c| {
                let rhs = c.th(0, int(0), 2)?.mul(&c.th(1, int(0), 2)?)?.scale_ratio(2, 1);
                one(c.th(1, int(0), 1)?.pow(2)?, rhs)
            },
        )
        .with_expressions("theta[1,0](1t)^2", "2*theta[0,0](2t)*theta[1,0](2t)"),
    );
    let mut heat = IdentityCase::new(
        "heat_equation",
        "θ''[ε,ε'](τ) = 4πi ∂/∂τ θ[ε,ε'](τ) for [0,0], [1,0], [0,1], [1,1/2], [1,1/3]",
        IdentityKind::Jet,
        int(30),
        builder(|c| {
            let chars: [(i64, Rat); 5] = [
                (0, int(0)),
                (1, int(0)),
                (0, int(1)),
                (1, r(1, 2)),
                (1, r(1, 3)),
            ];
            let four_i = c.i()?.scale_i64(4);
            let mut out = Vec::new();
            for (e, ep) in chars {
                let jet = theta_jet(c.cfg, int(e), ep, int(1), 2, c.t)?;
                let lhs = jet.entry(2).scale_ratio(2, 1);
                let rhs = c.sc(&jet.entry(0).tau_derivative()?, &four_i, 1)?;
                out.push(Comparison::labeled(format!("[{e},{ep}]"), lhs, rhs));
            }
            Ok(out)
        }),
    );
    heat.headroom = Rat::zero();
    v.push(heat);
    v
}

/// Odd primes accepted by [`fk_cusp_series`].
pub const FK_PRIMES: [u32; 5] = [3, 5, 7, 11, 13];

/// Configuration used for the level-`k` expression: `E = 24`, `M = lcm(4k, 24)`.
pub fn fk_config(k: u32) -> R<Config> {
    if !FK_PRIMES.contains(&k) {
        return Err(IdentityError::UnsupportedK(k));
    }
    Ok(Config::new(24, (4 * k).lcm(&24))?)
}

fn fk_build(cfg: &Config, k: u32, t: Rat) -> R<AnalyticSeries> {
    let c = Ctx { cfg, t };
    let ki = k as i64;
    let dlog = c.eta(&[e1(ki, 1), e1(1, -1)])?.tau_dlog()?;
    let mut total: Option<AnalyticSeries> = None;
    for l in 0..=(ki - 3) / 2 {
        let sq = c.l(1, r(1 + 2 * l, ki), int(1))?.pow(2)?;
        total = Some(match total {
            None => sq,
            Some(acc) => acc.add(&sq)?,
        });
    }
    let total = total.expect("k ≥ 3 gives at least one term");
    // 1/(2πi(k−2)) = −i/(2π(k−2))
    let coeff = c
        .i()?
        .scale(&num_rational::BigRational::new((-1).into(), (2 * (ki - 2)).into()));
    Ok(dlog.add(&c.sc(&total, &coeff, -1)?)?)
}

/// `d/dτ log(η(kτ)/η(τ)) + (1/(2πi(k−2))) Σ_{l=0}^{(k−3)/2} (θ'/θ[1,(1+2l)/k])²`,
/// exact below `t`.
pub fn fk_cusp_series(k: u32, t: Rat) -> R<AnalyticSeries> {
    let cfg = fk_config(k)?;
    let mut headroom = Rat::from_integer(2);
    for _ in 0..4 {
        let s = fk_build(&cfg, k, t + headroom)?;
        if s.valid_to() >= t {
            return Ok(s.truncate(t));
        }
        headroom += t - s.valid_to() + Rat::one();
    }
    Err(IdentityError::InsufficientValidity {
        name: format!("fk_cusp_series({k})"),
        order: t,
        reached: Rat::zero(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_names_are_unique() {
        let reg = registry();
        let mut names: Vec<&str> = reg.iter().map(|c| c.name.as_str()).collect();
        let n = names.len();
        names.sort_unstable();
        names.dedup();
        assert_eq!(names.len(), n);
    }

    #[test]
    fn unknown_name() {
        assert_eq!(
            verify("no_such_identity", None),
            Err(IdentityError::UnknownIdentity("no_such_identity".into()))
        );
    }

    #[test]
    fn jacobi_at_thirty() {
        let rep = verify("jacobi_derivative", Some(int(30))).unwrap();
        assert!(rep.pass);
        assert_eq!(rep.order, int(30));
    }

    #[test]
    fn order_is_at_least_default() {
        let case = find("four_squares").unwrap();
        assert_eq!(effective_order(&case, Some(int(10))), int(501));
        assert_eq!(effective_order(&case, Some(int(600))), int(600));
        assert_eq!(effective_order(&case, None), int(501));
    }

    #[test]
    fn fk_rejects_other_k() {
        assert_eq!(fk_cusp_series(9, int(5)), Err(IdentityError::UnsupportedK(9)));
        assert_eq!(fk_config(3).unwrap().ring(), 24);
        assert_eq!(fk_config(13).unwrap().ring(), 312);
    }

    #[test]
    fn fk_three_vanishes() {
        assert!(fk_cusp_series(3, int(10)).unwrap().is_zero());
    }
}
