//! Exact arithmetic in cyclotomic fields `Q(zeta_n)`.
//!
//! Elements are dense rational coefficient vectors over the power basis
//! `1, zeta, ..., zeta^(phi(n)-1)`. Powers at or above `phi(n)` are folded back
//! with a reduction table derived from the n-th cyclotomic polynomial.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Coefficients of the n-th cyclotomic polynomial, lowest degree first.
pub fn cyclotomic_polynomial(n: u32) -> Vec<i64> {
    assert!(n >= 1);
    // x^n - 1
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in 1..n {
        if n % d == 0 {
            num = div_monic(&num, &cyclotomic_polynomial(d));
        }
    }
    num
}

fn div_monic(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let nd = rem.len() - 1;
    let mut quot = vec![0i64; nd - dd + 1];
    for k in (0..=nd - dd).rev() {
        let c = rem[k + dd];
        quot[k] = c;
        for (j, &b) in den.iter().enumerate() {
            rem[k + j] -= c * b;
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    quot
}

pub fn euler_phi(n: u32) -> u32 {
    (1..=n).filter(|&k| k.gcd(&n) == 1).count() as u32
}

/// Shared, read-only description of `Q(zeta_n)`.
#[derive(Debug)]
pub struct FieldContext {
    order: u32,
    dim: usize,
    /// `powers[k]` is `zeta^k` for `k < order`, expressed in the power basis.
    powers: Vec<Vec<i64>>,
}

impl FieldContext {
    pub fn new(order: u32) -> Result<Arc<FieldContext>> {
        if order == 0 {
            return Err(Error::ZeroFieldOrder);
        }
        let poly = cyclotomic_polynomial(order);
        let dim = poly.len() - 1;
        let mut powers = Vec::with_capacity(order as usize);
        let mut cur = vec![0i64; dim];
        cur[0] = 1;
        for _ in 0..order {
            powers.push(cur.clone());
            // multiply by x, then fold x^dim = -(poly[0] + ... + poly[dim-1] x^(dim-1))
            let top = cur[dim - 1];
            let mut next = vec![0i64; dim];
            next[1..dim].copy_from_slice(&cur[..(dim - 1)]);
            for j in 0..dim {
                next[j] -= top * poly[j];
            }
            cur = next;
        }
        Ok(Arc::new(FieldContext { order, dim, powers }))
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// `phi(order)`, the number of basis coefficients.
    pub fn basis_dim(&self) -> usize {
        self.dim
    }

    /// `zeta^k` reduced into the power basis.
    pub fn reduced_power(&self, k: u64) -> &[i64] {
        &self.powers[(k % self.order as u64) as usize]
    }

    pub fn zero(self: &Arc<Self>) -> CyclotomicNumber {
        CyclotomicNumber {
            ctx: Arc::clone(self),
            coeffs: vec![BigRational::zero(); self.dim],
        }
    }

    pub fn one(self: &Arc<Self>) -> CyclotomicNumber {
        self.rational(BigRational::one())
    }

    pub fn rational(self: &Arc<Self>, r: BigRational) -> CyclotomicNumber {
        let mut z = self.zero();
        z.coeffs[0] = r;
        z
    }

    pub fn integer(self: &Arc<Self>, v: i64) -> CyclotomicNumber {
        self.rational(BigRational::from_integer(BigInt::from(v)))
    }

    /// `zeta^k`.
    pub fn root_power(self: &Arc<Self>, k: u64) -> CyclotomicNumber {
        let coeffs = self
            .reduced_power(k)
            .iter()
            .map(|&c| BigRational::from_integer(BigInt::from(c)))
            .collect();
        CyclotomicNumber {
            ctx: Arc::clone(self),
            coeffs,
        }
    }

    /// Build an element from explicit basis coefficients.
    pub fn from_coeffs(self: &Arc<Self>, coeffs: Vec<BigRational>) -> CyclotomicNumber {
        assert_eq!(coeffs.len(), self.dim, "coefficient count must equal phi(n)");
        CyclotomicNumber {
            ctx: Arc::clone(self),
            coeffs,
        }
    }
}

/// An exact element of `Q(zeta_n)`.
#[derive(Clone)]
pub struct CyclotomicNumber {
    ctx: Arc<FieldContext>,
    coeffs: Vec<BigRational>,
}

impl CyclotomicNumber {
    pub fn context(&self) -> &Arc<FieldContext> {
        &self.ctx
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Zero::is_zero)
    }

    /// The value as a rational, if it has no irrational part.
    pub fn as_rational(&self) -> Option<&BigRational> {
        if self.coeffs[1..].iter().all(Zero::is_zero) {
            Some(&self.coeffs[0])
        } else {
            None
        }
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.ctx, &other.ctx) || self.ctx.order == other.ctx.order {
            Ok(())
        } else {
            Err(Error::MixedFields(self.ctx.order, other.ctx.order))
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        Ok(self.with_coeffs(coeffs))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a - b)
            .collect();
        Ok(self.with_coeffs(coeffs))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let dim = self.ctx.dim;
        let mut acc = vec![BigRational::zero(); dim];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let prod = a * b;
                for (slot, &c) in acc.iter_mut().zip(self.ctx.reduced_power((i + j) as u64)) {
                    if c != 0 {
                        *slot += &prod * BigInt::from(c);
                    }
                }
            }
        }
        Ok(self.with_coeffs(acc))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        self.checked_mul(&other.inverse()?)
    }

    pub fn neg(&self) -> Self {
        self.with_coeffs(self.coeffs.iter().map(|c| -c).collect())
    }

    /// Multiplicative inverse, by solving `a * x = 1` as a rational linear system.
    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let dim = self.ctx.dim;
        // Column j of the multiplication matrix is a * zeta^j.
        let mut m: Vec<Vec<BigRational>> = vec![vec![BigRational::zero(); dim + 1]; dim];
        for j in 0..dim {
            let col = self.checked_mul(&self.ctx.root_power(j as u64))?;
            for (i, c) in col.coeffs.into_iter().enumerate() {
                m[i][j] = c;
            }
        }
        m[0][dim] = BigRational::one();
        for col in 0..dim {
            let pivot = (col..dim)
                .find(|&r| !m[r][col].is_zero())
                .ok_or(Error::DivisionByZero)?;
            m.swap(col, pivot);
            let inv = m[col][col].recip();
            for k in col..=dim {
                m[col][k] = &m[col][k] * &inv;
            }
            for r in 0..dim {
                if r != col && !m[r][col].is_zero() {
                    let f = m[r][col].clone();
                    for k in col..=dim {
                        let t = &f * &m[col][k];
                        m[r][k] -= t;
                    }
                }
            }
        }
        Ok(self.with_coeffs(m.into_iter().map(|row| row[dim].clone()).collect()))
    }

    /// Complex conjugation, `zeta -> zeta^(n-1)`.
    pub fn conjugate(&self) -> Self {
        let n = self.ctx.order as u64;
        let mut acc = vec![BigRational::zero(); self.ctx.dim];
        for (j, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let k = (n - (j as u64 % n)) % n;
            for (slot, &c) in acc.iter_mut().zip(self.ctx.reduced_power(k)) {
                if c != 0 {
                    *slot += a * BigInt::from(c);
                }
            }
        }
        self.with_coeffs(acc)
    }

    /// Numeric embedding at `zeta = exp(2 pi i / n)`, as `(re, im)`.
    pub fn to_complex(&self) -> (f64, f64) {
        let n = self.ctx.order as f64;
        let mut re = 0.0;
        let mut im = 0.0;
        for (j, c) in self.coeffs.iter().enumerate() {
            let v = rational_to_f64(c);
            let theta = 2.0 * std::f64::consts::PI * j as f64 / n;
            re += v * theta.cos();
            im += v * theta.sin();
        }
        (re, im)
    }

    fn with_coeffs(&self, coeffs: Vec<BigRational>) -> Self {
        CyclotomicNumber {
            ctx: Arc::clone(&self.ctx),
            coeffs,
        }
    }
}

fn rational_to_f64(r: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

impl PartialEq for CyclotomicNumber {
    fn eq(&self, other: &Self) -> bool {
        self.ctx.order == other.ctx.order && self.coeffs == other.coeffs
    }
}

impl Eq for CyclotomicNumber {}

impl Hash for CyclotomicNumber {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.ctx.order.hash(state);
        self.coeffs.hash(state);
    }
}

// Operator sugar. These panic on mixed fields; use the `checked_*` forms
// when operands come from untrusted input.
macro_rules! binop {
    ($tr:ident, $m:ident, $checked:ident) => {
        impl std::ops::$tr<&CyclotomicNumber> for &CyclotomicNumber {
            type Output = CyclotomicNumber;
            fn $m(self, rhs: &CyclotomicNumber) -> CyclotomicNumber {
                self.$checked(rhs).expect("cyclotomic operands from different fields")
            }
        }
    };
}
binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);

impl std::ops::Neg for &CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn neg(self) -> CyclotomicNumber {
        CyclotomicNumber::neg(self)
    }
}

fn fmt_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for CyclotomicNumber {
    /// Shortest token when one matches (`-1`, `w2`, `-i`, `3/2`), else the
    /// canonical `a+b*z^1+...` sum over the power basis.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(r) = self.as_rational() {
            return f.write_str(&fmt_rational(r));
        }
        let n = self.ctx.order;
        let named: [(&str, u32, u32); 3] = [("w", 3, 1), ("w2", 3, 2), ("i", 4, 1)];
        for (name, div, mult) in named {
            if n % div == 0 {
                let root = self.ctx.root_power((n / div * mult) as u64);
                if *self == root {
                    return f.write_str(name);
                }
                if *self == root.neg() {
                    return write!(f, "-{name}");
                }
            }
        }
        let mut first = true;
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if neg {
                f.write_str("-")?;
            } else if !first {
                f.write_str("+")?;
            }
            first = false;
            if j == 0 {
                f.write_str(&fmt_rational(&mag))?;
            } else if mag.is_one() {
                write!(f, "z^{j}")?;
            } else {
                write!(f, "{}*z^{j}", fmt_rational(&mag))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for CyclotomicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (n={})", self, self.ctx.order)
    }
}

/// Parse a component token: a signed sum of terms, each a rational, a named
/// root (`i`, `w`, `w2`), `z` / `z^k`, or `rational*root`.
pub fn parse_component(token: &str, ctx: &Arc<FieldContext>) -> Result<CyclotomicNumber> {
    let tok = token.trim();
    if tok.is_empty() || tok.contains(char::is_whitespace) {
        return Err(Error::UnknownToken(token.to_string()));
    }
    let bad = || Error::UnknownToken(token.to_string());
    // Split into signed terms at top-level +/-; a sign right after '^' or '/' belongs to the number.
    let bytes = tok.as_bytes();
    let mut terms: Vec<(bool, &str)> = Vec::new();
    let mut start = 0;
    let mut neg = false;
    let mut i = 0;
    if bytes[0] == b'+' || bytes[0] == b'-' {
        neg = bytes[0] == b'-';
        start = 1;
        i = 1;
    }
    while i < bytes.len() {
        if (bytes[i] == b'+' || bytes[i] == b'-') && i > start && bytes[i - 1] != b'^' {
            terms.push((neg, &tok[start..i]));
            neg = bytes[i] == b'-';
            start = i + 1;
        }
        i += 1;
    }
    terms.push((neg, &tok[start..]));

    let mut acc = ctx.zero();
    for (neg, term) in terms {
        if term.is_empty() {
            return Err(bad());
        }
        let (coef, atom) = match term.split_once('*') {
            Some((c, a)) => (Some(parse_rational(c).ok_or_else(bad)?), Some(a)),
            None => match parse_rational(term) {
                Some(r) => (Some(r), None),
                None => (None, Some(term)),
            },
        };
        let mut value = match atom {
            None => ctx.one(),
            Some(a) => parse_root(a, token, ctx)?,
        };
        if let Some(c) = coef {
            value = value.checked_mul(&ctx.rational(c))?;
        }
        if neg {
            value = value.neg();
        }
        acc = acc.checked_add(&value)?;
    }
    Ok(acc)
}

fn parse_rational(s: &str) -> Option<BigRational> {
    let (p, q) = match s.split_once('/') {
        Some((p, q)) => (p, q),
        None => (s, "1"),
    };
    let digits = |t: &str| !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit());
    if !digits(p) || !digits(q) {
        return None;
    }
    let q: BigInt = q.parse().ok()?;
    if q.is_zero() {
        return None;
    }
    Some(BigRational::new(p.parse().ok()?, q))
}

fn parse_root(atom: &str, token: &str, ctx: &Arc<FieldContext>) -> Result<CyclotomicNumber> {
    let n = ctx.order();
    let missing = || Error::MissingRoot {
        token: token.to_string(),
        order: n,
    };
    match atom {
        "w" | "w2" => {
            if n % 3 != 0 {
                return Err(missing());
            }
            let k = if atom == "w" { n / 3 } else { 2 * n / 3 };
            Ok(ctx.root_power(k as u64))
        }
        "i" => {
            if n % 4 != 0 {
                return Err(missing());
            }
            Ok(ctx.root_power((n / 4) as u64))
        }
        "z" => Ok(ctx.root_power(1)),
        _ => {
            let k = atom
                .strip_prefix("z^")
                .and_then(|k| k.parse::<u64>().ok())
                .ok_or_else(|| Error::UnknownToken(token.to_string()))?;
            Ok(ctx.root_power(k))
        }
    }
}

/// Smallest field order able to hold every token: `w` needs 3, `i` needs 4.
/// Tokens using the generic `z` root cannot be inferred and yield an error.
pub fn infer_field_order<S: AsRef<str>>(tokens: &[S]) -> Result<u32> {
    let mut order = 1u32;
    for t in tokens {
        let t = t.as_ref();
        if t.contains('z') {
            return Err(Error::UnknownToken(format!(
                "{t} (generic root needs a declared field order)"
            )));
        }
        if t.contains('w') {
            order = order.lcm(&3);
        }
        if t.contains('i') {
            order = order.lcm(&4);
        }
    }
    Ok(order)
}
