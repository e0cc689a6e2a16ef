//! Exact arithmetic in the cyclotomic field `Q(ζ_M)`.
//!
//! Elements are stored in the power basis `1, ζ, …, ζ^(φ(M)-1)` of
//! `Q[x]/Φ_M(x)`, always reduced, so structural equality is field equality.
//! Internally the coordinates share one positive denominator; the integer
//! numerators and the denominator are coprime as a whole.
//!
//! `M` must be even so that `-1 = ζ^(M/2)` lies on the root table; the
//! default working field is `Q(ζ_48)`, which contains `i`, `√2`, `√3` and
//! every phase `exp(πi·r)` with `r ∈ (1/24)Z`.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Default cyclotomic order used by the verification registry.
pub const DEFAULT_ORDER: u32 = 48;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CycloError {
    #[error("cyclotomic orders differ: {0} vs {1}")]
    OrderMismatch(u32, u32),
    #[error("division by zero")]
    DivisionByZero,
    #[error("Q(zeta_{order}) does not contain {what}")]
    UnsupportedOrder { order: u32, what: &'static str },
    #[error("expected {expected} power-basis coordinates, got {got}")]
    BadLength { expected: usize, got: usize },
}

/// Polynomial with integer coefficients, lowest degree first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// `x^d - 1`.
    pub fn x_pow_minus_one(d: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); d + 1];
        coeffs[0] = -BigInt::one();
        coeffs[d] = BigInt::one();
        Self::new(coeffs)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::new(Vec::new());
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    /// Exact quotient by a monic divisor; `None` if the remainder is nonzero.
    pub fn div_exact_monic(&self, divisor: &Self) -> Option<Self> {
        let dd = divisor.degree()?;
        assert!(divisor.coeffs[dd].is_one(), "divisor must be monic");
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return if self.is_zero() { Some(self.clone()) } else { None };
        }
        let mut quot = vec![BigInt::zero(); rem.len() - dd];
        for k in (dd..rem.len()).rev() {
            let t = core::mem::take(&mut rem[k]);
            if t.is_zero() {
                continue;
            }
            for (i, c) in divisor.coeffs[..dd].iter().enumerate() {
                if !c.is_zero() {
                    rem[k - dd + i] -= &t * c;
                }
            }
            quot[k - dd] = t;
        }
        if rem.iter().all(Zero::is_zero) {
            Some(Self::new(quot))
        } else {
            None
        }
    }

    /// Horner evaluation at a field element.
    pub fn eval(&self, x: &CycloNum) -> CycloNum {
        let field = x.field();
        let mut acc = field.zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + &field.from_bigint(c.clone());
        }
        acc
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let show_mag = k == 0 || !mag.is_one();
            if show_mag {
                write!(f, "{mag}")?;
            }
            match k {
                0 => {}
                1 => f.write_str("x")?,
                _ => write!(f, "x^{k}")?,
            }
        }
        Ok(())
    }
}

pub fn mobius(mut n: u64) -> i8 {
    assert!(n >= 1);
    let mut sign = 1i8;
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

pub fn totient(n: u64) -> u64 {
    assert!(n >= 1);
    let mut result = n;
    let mut m = n;
    let mut p = 2u64;
    while p * p <= m {
        if m.is_multiple_of(p) {
            while m.is_multiple_of(p) {
                m /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result
}

/// The cyclotomic polynomial `Φ_M = Π_{d|M} (x^d - 1)^{μ(M/d)}`.
pub fn cyclo_poly(m: u32) -> IntPolynomial {
    assert!(m >= 1, "cyclotomic order must be positive");
    let m = m as u64;
    let mut num = IntPolynomial::from_i64(&[1]);
    let mut den = IntPolynomial::from_i64(&[1]);
    for d in 1..=m {
        if !m.is_multiple_of(d) {
            continue;
        }
        match mobius(m / d) {
            1 => num = num.mul(&IntPolynomial::x_pow_minus_one(d as usize)),
            -1 => den = den.mul(&IntPolynomial::x_pow_minus_one(d as usize)),
            _ => {}
        }
    }
    num.div_exact_monic(&den)
        .expect("Möbius product of x^d - 1 divides exactly")
}

/// The field `Q(ζ_M)` with its reduction data and a table of reduced powers of `ζ`.
#[derive(Debug)]
pub struct CycloField {
    order: u32,
    degree: usize,
    modulus: IntPolynomial,
    // nonzero coefficients of Φ_M below the leading term
    tail: Vec<(usize, BigInt)>,
    roots: Vec<Vec<BigInt>>,
}

impl CycloField {
    pub fn new(order: u32) -> Result<Arc<Self>, CycloError> {
        if order == 0 || !order.is_multiple_of(2) {
            return Err(CycloError::UnsupportedOrder {
                order,
                what: "-1 (order must be positive and even)",
            });
        }
        let modulus = cyclo_poly(order);
        let degree = modulus.degree().expect("nonzero");
        let tail: Vec<(usize, BigInt)> = modulus.coeffs()[..degree]
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (i, c.clone()))
            .collect();
        let mut field = CycloField {
            order,
            degree,
            modulus,
            tail,
            roots: Vec::with_capacity(order as usize),
        };
        let mut power = vec![BigInt::zero(); degree];
        power[0] = BigInt::one();
        for _ in 0..order {
            field.roots.push(power.clone());
            let mut next = vec![BigInt::zero(); degree + 1];
            for (i, c) in power.iter().enumerate() {
                next[i + 1] = c.clone();
            }
            field.reduce(&mut next);
            power = next;
        }
        Ok(Arc::new(field))
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// `φ(M)`, the dimension over `Q`.
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn modulus(&self) -> &IntPolynomial {
        &self.modulus
    }

    fn reduce(&self, v: &mut Vec<BigInt>) {
        let d = self.degree;
        for k in (d..v.len()).rev() {
            let t = core::mem::take(&mut v[k]);
            if t.is_zero() {
                continue;
            }
            for (i, c) in &self.tail {
                v[k - d + i] -= &t * c;
            }
        }
        v.truncate(d);
        v.resize(d, BigInt::zero());
    }

    fn element(self: &Arc<Self>, num: Vec<BigInt>, den: BigInt) -> CycloNum {
        let mut x = CycloNum {
            field: Arc::clone(self),
            num,
            den,
        };
        x.normalize();
        x
    }

    pub fn zero(self: &Arc<Self>) -> CycloNum {
        CycloNum {
            field: Arc::clone(self),
            num: vec![BigInt::zero(); self.degree],
            den: BigInt::one(),
        }
    }

    pub fn one(self: &Arc<Self>) -> CycloNum {
        self.from_i64(1)
    }

    pub fn from_i64(self: &Arc<Self>, c: i64) -> CycloNum {
        self.from_bigint(BigInt::from(c))
    }

    pub fn from_bigint(self: &Arc<Self>, c: BigInt) -> CycloNum {
        let mut num = vec![BigInt::zero(); self.degree];
        num[0] = c;
        CycloNum {
            field: Arc::clone(self),
            num,
            den: BigInt::one(),
        }
    }

    pub fn from_rational(self: &Arc<Self>, r: &BigRational) -> CycloNum {
        let mut num = vec![BigInt::zero(); self.degree];
        num[0] = r.numer().clone();
        self.element(num, r.denom().clone())
    }

    pub fn from_ratio(self: &Arc<Self>, numer: i64, denom: i64) -> CycloNum {
        self.from_rational(&BigRational::new(numer.into(), denom.into()))
    }

    /// Element with the given power-basis coordinates.
    pub fn from_coords(self: &Arc<Self>, coords: &[BigRational]) -> Result<CycloNum, CycloError> {
        if coords.len() != self.degree {
            return Err(CycloError::BadLength {
                expected: self.degree,
                got: coords.len(),
            });
        }
        let den = coords
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let num = coords
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect();
        Ok(self.element(num, den))
    }

    /// `ζ_M^k`; `k` is reduced modulo `M`.
    pub fn root(self: &Arc<Self>, k: i64) -> CycloNum {
        let idx = k.rem_euclid(self.order as i64) as usize;
        CycloNum {
            field: Arc::clone(self),
            num: self.roots[idx].clone(),
            den: BigInt::one(),
        }
    }

    /// `exp(2πi·t)` for a turn fraction `t`, when `M·t` is an integer.
    pub fn turn(self: &Arc<Self>, numer: i64, denom: i64) -> Option<CycloNum> {
        let scaled = numer as i128 * self.order as i128;
        if scaled % denom as i128 != 0 {
            return None;
        }
        Some(self.root((scaled / denom as i128) as i64))
    }

    pub fn imag_unit(self: &Arc<Self>) -> Result<CycloNum, CycloError> {
        if !self.order.is_multiple_of(4) {
            return Err(CycloError::UnsupportedOrder {
                order: self.order,
                what: "i",
            });
        }
        Ok(self.root((self.order / 4) as i64))
    }

    pub fn sqrt2(self: &Arc<Self>) -> Result<CycloNum, CycloError> {
        if !self.order.is_multiple_of(8) {
            return Err(CycloError::UnsupportedOrder {
                order: self.order,
                what: "sqrt(2)",
            });
        }
        let k = (self.order / 8) as i64;
        Ok(&self.root(k) + &self.root(-k))
    }

    pub fn sqrt3(self: &Arc<Self>) -> Result<CycloNum, CycloError> {
        if !self.order.is_multiple_of(12) {
            return Err(CycloError::UnsupportedOrder {
                order: self.order,
                what: "sqrt(3)",
            });
        }
        let k = (self.order / 12) as i64;
        Ok(&self.root(k) + &self.root(-k))
    }
}

/// Convenience: `ζ_M^k` in a freshly built field of order `M`.
pub fn make_root(order: u32, k: i64) -> Result<CycloNum, CycloError> {
    Ok(CycloField::new(order)?.root(k))
}

/// An element of `Q(ζ_M)` in reduced power-basis form.
#[derive(Clone)]
pub struct CycloNum {
    field: Arc<CycloField>,
    num: Vec<BigInt>,
    den: BigInt,
}

impl PartialEq for CycloNum {
    fn eq(&self, other: &Self) -> bool {
        self.field.order == other.field.order && self.den == other.den && self.num == other.num
    }
}

impl Eq for CycloNum {}

fn content_gcd(num: &[BigInt], den: &BigInt) -> BigInt {
    let mut g = den.clone();
    for c in num {
        if g.is_one() {
            break;
        }
        if !c.is_zero() {
            g = g.gcd(c);
        }
    }
    g
}

impl CycloNum {
    fn normalize(&mut self) {
        if self.num.iter().all(Zero::is_zero) {
            self.den = BigInt::one();
            return;
        }
        if self.den.is_negative() {
            self.den = -&self.den;
            for c in &mut self.num {
                *c = -&*c;
            }
        }
        if self.den.is_one() {
            return;
        }
        let g = content_gcd(&self.num, &self.den);
        if !g.is_one() {
            self.den /= &g;
            for c in &mut self.num {
                *c /= &g;
            }
        }
    }

    pub fn field(&self) -> &Arc<CycloField> {
        &self.field
    }

    pub fn order(&self) -> u32 {
        self.field.order
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num[0].is_one() && self.num[1..].iter().all(Zero::is_zero)
    }

    fn is_rational(&self) -> bool {
        self.num[1..].iter().all(Zero::is_zero)
    }

    /// Power-basis coordinates, each in lowest terms.
    pub fn coords(&self) -> Vec<BigRational> {
        self.num
            .iter()
            .map(|c| BigRational::new(c.clone(), self.den.clone()))
            .collect()
    }

    /// The rational value, when every coordinate above index 0 vanishes.
    pub fn as_rational(&self) -> Option<BigRational> {
        self.is_rational()
            .then(|| BigRational::new(self.num[0].clone(), self.den.clone()))
    }

    fn check(&self, other: &Self) -> Result<(), CycloError> {
        if self.field.order != other.field.order {
            Err(CycloError::OrderMismatch(self.field.order, other.field.order))
        } else {
            Ok(())
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, CycloError> {
        self.check(other)?;
        Ok(self.add_unchecked(other, false))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, CycloError> {
        self.check(other)?;
        Ok(self.add_unchecked(other, true))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, CycloError> {
        self.check(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub fn try_div(&self, other: &Self) -> Result<Self, CycloError> {
        self.check(other)?;
        Ok(self.mul_unchecked(&other.inv()?))
    }

    fn add_unchecked(&self, other: &Self, negate: bool) -> Self {
        let (num, den) = if self.den == other.den {
            let num = self
                .num
                .iter()
                .zip(&other.num)
                .map(|(a, b)| if negate { a - b } else { a + b })
                .collect();
            (num, self.den.clone())
        } else {
            let num = self
                .num
                .iter()
                .zip(&other.num)
                .map(|(a, b)| {
                    let (x, y) = (a * &other.den, b * &self.den);
                    if negate {
                        x - y
                    } else {
                        x + y
                    }
                })
                .collect();
            (num, &self.den * &other.den)
        };
        let mut out = CycloNum {
            field: Arc::clone(&self.field),
            num,
            den,
        };
        out.normalize();
        out
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return self.field.zero();
        }
        let num = if self.is_rational() {
            let s = &self.num[0];
            other.num.iter().map(|c| c * s).collect()
        } else if other.is_rational() {
            let s = &other.num[0];
            self.num.iter().map(|c| c * s).collect()
        } else {
            let d = self.field.degree;
            let mut prod = vec![BigInt::zero(); 2 * d - 1];
            for (i, a) in self.num.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                for (j, b) in other.num.iter().enumerate() {
                    if !b.is_zero() {
                        prod[i + j] += a * b;
                    }
                }
            }
            self.field.reduce(&mut prod);
            prod
        };
        let mut out = CycloNum {
            field: Arc::clone(&self.field),
            num,
            den: &self.den * &other.den,
        };
        out.normalize();
        out
    }

    /// Multiply by a rational scalar.
    pub fn scale(&self, r: &BigRational) -> Self {
        let mut out = CycloNum {
            field: Arc::clone(&self.field),
            num: self.num.iter().map(|c| c * r.numer()).collect(),
            den: &self.den * r.denom(),
        };
        out.normalize();
        out
    }

    pub fn scale_i64(&self, k: i64) -> Self {
        self.scale(&BigRational::from_integer(k.into()))
    }

    /// Multiplicative inverse via the extended Euclidean algorithm over `Q[x]`.
    pub fn inv(&self) -> Result<Self, CycloError> {
        if self.is_zero() {
            return Err(CycloError::DivisionByZero);
        }
        if self.is_rational() {
            let r = BigRational::new(self.den.clone(), self.num[0].clone());
            return Ok(self.field.from_rational(&r));
        }
        let to_q = |v: &[BigInt]| -> Vec<BigRational> {
            v.iter()
                .map(|c| BigRational::from_integer(c.clone()))
                .collect()
        };
        // invariant: s_k · a ≡ r_k (mod Φ)
        let mut r0 = qpoly::trim(to_q(self.field.modulus.coeffs()));
        let mut r1 = qpoly::trim(to_q(&self.num));
        let mut s0: Vec<BigRational> = Vec::new();
        let mut s1: Vec<BigRational> = vec![BigRational::one()];
        while r1.len() > 1 {
            let (q, r) = qpoly::divmod(&r0, &r1);
            let s2 = qpoly::sub(&s0, &qpoly::mul(&q, &s1));
            r0 = core::mem::replace(&mut r1, r);
            s0 = core::mem::replace(&mut s1, s2);
        }
        let c = r1
            .first()
            .cloned()
            .expect("Φ_M is irreducible, so gcd(a, Φ_M) is a nonzero constant");
        let s: Vec<BigRational> = s1.iter().map(|x| x / &c).collect();
        // a has denominator den, so a^{-1} = den · (numerator polynomial)^{-1}
        let den = BigRational::from_integer(self.den.clone());
        let mut acc = self.field.zero();
        for (k, coef) in s.iter().enumerate() {
            if coef.is_zero() {
                continue;
            }
            acc = &acc + &self.field.root(k as i64).scale(&(coef * &den));
        }
        Ok(acc)
    }

    pub fn pow(&self, exp: i64) -> Result<Self, CycloError> {
        let mut base = if exp < 0 { self.inv()? } else { self.clone() };
        let mut e = exp.unsigned_abs();
        let mut acc = self.field.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        Ok(acc)
    }

    /// Complex conjugation `ζ ↦ ζ^{-1}`.
    pub fn conj(&self) -> Self {
        let mut acc = self.field.zero();
        for (k, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let term = self.field.root(-(k as i64));
            acc = &acc + &term.scale(&BigRational::new(c.clone(), self.den.clone()));
        }
        acc
    }

    /// Exact textual form: a rational when possible, otherwise the
    /// coordinate tuple `zetaM(c0, c1, …)`.
    pub fn render(&self) -> String {
        match self.as_rational() {
            Some(r) => format!("{r}"),
            None => {
                let parts: Vec<String> = self.coords().iter().map(|c| format!("{c}")).collect();
                format!("zeta{}({})", self.field.order, parts.join(", "))
            }
        }
    }
}

impl fmt::Display for CycloNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl fmt::Debug for CycloNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycloNum[{}]", self.render())
    }
}

// The operator impls panic on mismatched orders; callers that cannot
// guarantee a common field use the `try_*` methods.
impl<'a> Add<&'a CycloNum> for &'a CycloNum {
    type Output = CycloNum;
    fn add(self, rhs: &'a CycloNum) -> CycloNum {
        self.try_add(rhs).expect("cyclotomic order mismatch")
    }
}

impl<'a> Sub<&'a CycloNum> for &'a CycloNum {
    type Output = CycloNum;
    fn sub(self, rhs: &'a CycloNum) -> CycloNum {
        self.try_sub(rhs).expect("cyclotomic order mismatch")
    }
}

impl<'a> Mul<&'a CycloNum> for &'a CycloNum {
    type Output = CycloNum;
    fn mul(self, rhs: &'a CycloNum) -> CycloNum {
        self.try_mul(rhs).expect("cyclotomic order mismatch")
    }
}

impl Neg for &CycloNum {
    type Output = CycloNum;
    fn neg(self) -> CycloNum {
        CycloNum {
            field: Arc::clone(&self.field),
            num: self.num.iter().map(|c| -c).collect(),
            den: self.den.clone(),
        }
    }
}

impl Neg for CycloNum {
    type Output = CycloNum;
    fn neg(self) -> CycloNum {
        -&self
    }
}

/// Dense polynomials over `Q`, used only by the inverse.
mod qpoly {
    use alloc::vec;
    use alloc::vec::Vec;
    use num_rational::BigRational;
    use num_traits::Zero;

    pub fn trim(mut v: Vec<BigRational>) -> Vec<BigRational> {
        while v.last().is_some_and(Zero::is_zero) {
            v.pop();
        }
        v
    }

    pub fn sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
        let n = a.len().max(b.len());
        let mut out = vec![BigRational::zero(); n];
        for (i, x) in a.iter().enumerate() {
            out[i] += x;
        }
        for (i, x) in b.iter().enumerate() {
            out[i] -= x;
        }
        trim(out)
    }

    pub fn mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        trim(out)
    }

    pub fn divmod(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
        let db = b.len() - 1;
        let lead = &b[db];
        let mut rem = a.to_vec();
        if rem.len() <= db {
            return (Vec::new(), trim(rem));
        }
        let mut quot = vec![BigRational::zero(); rem.len() - db];
        for k in (db..rem.len()).rev() {
            let t = &rem[k] / lead;
            if t.is_zero() {
                continue;
            }
            for (i, c) in b.iter().enumerate() {
                let delta = &t * c;
                rem[k - db + i] -= delta;
            }
            quot[k - db] = t;
        }
        rem.truncate(db);
        (trim(quot), trim(rem))
    }
}
