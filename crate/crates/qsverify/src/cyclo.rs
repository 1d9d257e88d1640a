//! Exact arithmetic in cyclotomic fields.
//!
//! An element of Q(ζ_n) is stored as the remainder of a rational polynomial
//! modulo the n-th cyclotomic polynomial, evaluated at ζ_n = exp(2πi/n).

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Exact rational scalar (always in lowest terms, positive denominator).
pub type Rational = BigRational;

/// Errors raised by cyclotomic arithmetic and parsing.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CycloError {
    #[error("conductor must be positive")]
    ZeroConductor,
    #[error("Galois exponent {k} is not coprime to conductor {n}")]
    NotCoprime { k: i64, n: u32 },
    #[error("value {0} is not rational")]
    NotRational(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot parse value at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

/// Cached data for one conductor: Φ_n and the reductions of x^k, 0 ≤ k < n.
struct FieldData {
    phi: usize,
    xpow: Vec<Vec<i64>>,
}

fn field(n: u32) -> Arc<FieldData> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<FieldData>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(f) = cache.lock().expect("cyclotomic cache poisoned").get(&n) {
        return f.clone();
    }
    let poly = cyclotomic_poly(n);
    let phi = poly.len() - 1;
    let mut xpow = Vec::with_capacity(n as usize);
    let mut cur = vec![0i64; phi];
    if phi > 0 {
        cur[0] = 1;
    }
    for _ in 0..n {
        xpow.push(cur.clone());
        // multiply by x and reduce by the monic Φ_n
        let top = cur[phi - 1];
        for i in (1..phi).rev() {
            cur[i] = cur[i - 1];
        }
        cur[0] = 0;
        if top != 0 {
            for (i, c) in cur.iter_mut().enumerate() {
                *c = c
                    .checked_sub(top.checked_mul(poly[i]).expect("overflow in x^k mod Φ_n"))
                    .expect("overflow in x^k mod Φ_n");
            }
        }
    }
    let data = Arc::new(FieldData { phi, xpow });
    cache
        .lock()
        .expect("cyclotomic cache poisoned")
        .insert(n, data.clone());
    data
}

/// Integer coefficients (low degree first) of the n-th cyclotomic polynomial.
pub fn cyclotomic_poly(n: u32) -> Vec<i64> {
    assert!(n > 0, "cyclotomic polynomial of conductor 0");
    // x^n - 1 divided by Φ_d for every proper divisor d
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in divisors(n).into_iter().filter(|&d| d < n) {
        let den = cyclotomic_poly(d);
        num = poly_div_exact(&num, &den);
    }
    num
}

fn poly_div_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dl = den.len() - 1;
    let ql = num.len() - dl;
    let mut q = vec![0i64; ql];
    for i in (0..ql).rev() {
        let c = rem[i + dl];
        q[i] = c;
        if c != 0 {
            for (j, d) in den.iter().enumerate() {
                rem[i + j] -= c * d;
            }
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    q
}

/// Positive divisors of `n` in ascending order.
pub fn divisors(n: u32) -> Vec<u32> {
    (1..=n).filter(|d| n.is_multiple_of(*d)).collect()
}

/// Euler's totient.
pub fn euler_phi(n: u32) -> u32 {
    (1..=n).filter(|k| k.gcd(&n) == 1).count() as u32
}

fn lcm(a: u32, b: u32) -> u32 {
    a.lcm(&b)
}

/// An exact element of a cyclotomic field.
#[derive(Clone, Debug)]
pub struct Cyclotomic {
    n: u32,
    c: Vec<Rational>,
}

impl Cyclotomic {
    /// Builds Σ q·ζ_n^e from arbitrary integer exponents.
    pub fn new(n: u32, terms: &[(i64, Rational)]) -> Result<Self, CycloError> {
        if n == 0 {
            return Err(CycloError::ZeroConductor);
        }
        let f = field(n);
        let mut c = vec![Rational::zero(); f.phi];
        for (e, q) in terms {
            let k = e.rem_euclid(n as i64) as usize;
            add_scaled(&mut c, q, &f.xpow[k]);
        }
        Ok(Cyclotomic { n, c })
    }

    pub fn zero() -> Self {
        Cyclotomic { n: 1, c: vec![Rational::zero()] }
    }

    pub fn one() -> Self {
        Self::from_rational(Rational::one())
    }

    pub fn from_rational(q: Rational) -> Self {
        Cyclotomic { n: 1, c: vec![q] }
    }

    pub fn from_int(v: i64) -> Self {
        Self::from_rational(Rational::from_integer(BigInt::from(v)))
    }

    /// ζ_n^k.
    pub fn root(n: u32, k: i64) -> Result<Self, CycloError> {
        Self::new(n, &[(k, Rational::one())])
    }

    /// Current (not necessarily minimal) conductor.
    pub fn conductor(&self) -> u32 {
        self.n
    }

    /// Power-basis coefficients at the current conductor.
    pub fn coeffs(&self) -> &[Rational] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(Zero::is_zero)
    }

    pub fn is_rational(&self) -> bool {
        self.c.iter().skip(1).all(Zero::is_zero)
    }

    pub fn to_rational(&self) -> Result<Rational, CycloError> {
        if self.is_rational() {
            Ok(self.c[0].clone())
        } else {
            Err(CycloError::NotRational(self.to_string()))
        }
    }

    /// True when the value lies in Z[ζ_n], i.e. all power-basis coefficients are integers.
    pub fn is_integral(&self) -> bool {
        self.c.iter().all(|q| q.is_integer())
    }

    /// Coefficients re-expressed at conductor `m`, a multiple of the current one.
    fn at(&self, m: u32) -> Vec<Rational> {
        if m == self.n {
            return self.c.clone();
        }
        debug_assert_eq!(m % self.n, 0);
        let step = (m / self.n) as usize;
        let f = field(m);
        let mut out = vec![Rational::zero(); f.phi];
        for (e, q) in self.c.iter().enumerate() {
            if !q.is_zero() {
                add_scaled(&mut out, q, &f.xpow[(e * step) % m as usize]);
            }
        }
        out
    }

    /// Embeds the value at conductor `m`; `m` must be a multiple of the conductor.
    pub fn promote(&self, m: u32) -> Self {
        Cyclotomic { n: m, c: self.at(m) }
    }

    /// Multiplies by a rational scalar.
    pub fn scale(&self, q: &Rational) -> Self {
        if q.is_zero() {
            return Self::zero();
        }
        Cyclotomic { n: self.n, c: self.c.iter().map(|x| x * q).collect() }
    }

    /// Applies ζ ↦ ζ^k.
    pub fn galois(&self, k: i64) -> Result<Self, CycloError> {
        let n = self.n;
        if (k.rem_euclid(n as i64) as u32).gcd(&n) != 1 && n > 1 {
            return Err(CycloError::NotCoprime { k, n });
        }
        let terms: Vec<(i64, Rational)> = self
            .c
            .iter()
            .enumerate()
            .filter(|(_, q)| !q.is_zero())
            .map(|(e, q)| (e as i64 * k, q.clone()))
            .collect();
        Self::new(n, &terms)
    }

    /// Complex conjugation ζ ↦ ζ^{-1}.
    pub fn conj(&self) -> Self {
        self.galois(-1).expect("-1 is a unit modulo every conductor")
    }

    /// Non-negative integer power.
    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Multiplicative inverse: the product of the other Galois conjugates over the norm.
    pub fn inv(&self) -> Result<Self, CycloError> {
        if self.is_zero() {
            return Err(CycloError::DivisionByZero);
        }
        let n = self.n;
        let mut others = Self::one();
        for k in 2..n.max(2) {
            if k.gcd(&n) == 1 {
                others = &others * &self.galois(k as i64)?;
            }
        }
        let norm = (self * &others).to_rational()?;
        Ok(others.scale(&norm.recip()))
    }

    /// Re-expresses the value at the smallest conductor containing it.
    pub fn reduce_conductor(&self) -> Self {
        if self.n == 1 {
            return self.clone();
        }
        for d in divisors(self.n) {
            if d == self.n {
                break;
            }
            if let Some(c) = self.descend(d) {
                return Cyclotomic { n: d, c };
            }
        }
        self.clone()
    }

    /// Coefficients at conductor `d` (a divisor of the conductor) if the value lies in Q(ζ_d).
    fn descend(&self, d: u32) -> Option<Vec<Rational>> {
        let n = self.n;
        // quick Galois test: fixed by every k ≡ 1 (mod d) that is a unit mod n
        for k in (1..n).step_by(d as usize).skip(1) {
            if k.gcd(&n) == 1 && self.galois(k as i64).ok()? != *self {
                return None;
            }
        }
        let fd = field(d);
        let fnn = field(n);
        let step = (n / d) as usize;
        // columns: images of ζ_d^j, j < φ(d)
        let cols: Vec<&Vec<i64>> = (0..fd.phi).map(|j| &fnn.xpow[(j * step) % n as usize]).collect();
        solve_embedding(&cols, &self.c)
    }

    /// Value at ζ_n = exp(2πi/n).
    pub fn to_complex(&self) -> Complex64 {
        self.embedding(1)
    }

    /// Value under the embedding ζ_n ↦ exp(2πik/n).
    pub fn embedding(&self, k: i64) -> Complex64 {
        let n = self.n as f64;
        self.c
            .iter()
            .enumerate()
            .filter(|(_, q)| !q.is_zero())
            .map(|(e, q)| {
                let ang = 2.0 * std::f64::consts::PI * (k as f64) * (e as f64) / n;
                Complex64::from_polar(rat_to_f64(q), ang)
            })
            .sum()
    }

    /// Values under every embedding of Q(ζ_n) into C.
    pub fn embeddings(&self) -> Vec<Complex64> {
        let n = self.n;
        (1..=n.max(1))
            .filter(|k| k.gcd(&n) == 1)
            .map(|k| self.embedding(k as i64))
            .collect()
    }
}

fn rat_to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or_else(|| {
        q.numer().to_f64().unwrap_or(f64::NAN) / q.denom().to_f64().unwrap_or(f64::NAN)
    })
}

fn add_scaled(acc: &mut [Rational], q: &Rational, v: &[i64]) {
    for (a, &t) in acc.iter_mut().zip(v) {
        if t != 0 {
            *a += q * Rational::from_integer(BigInt::from(t));
        }
    }
}

/// Solves Σ_j x_j·cols[j] = target over Q; None if inconsistent.
fn solve_embedding(cols: &[&Vec<i64>], target: &[Rational]) -> Option<Vec<Rational>> {
    let rows = target.len();
    let k = cols.len();
    let mut m: Vec<Vec<Rational>> = (0..rows)
        .map(|i| {
            let mut r: Vec<Rational> = cols.iter().map(|c| Rational::from_integer(BigInt::from(c[i]))).collect();
            r.push(target[i].clone());
            r
        })
        .collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..k {
        let Some(p) = (row..rows).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let inv = m[row][col].recip();
        for x in m[row].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != row && !m[i][col].is_zero() {
                let f = m[i][col].clone();
                #[allow(clippy::needless_range_loop)] // rows i and `row` are both indexed
                for j in col..=k {
                    let t = &m[row][j] * &f;
                    m[i][j] -= t;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    if m[row..].iter().any(|r| !r[k].is_zero()) {
        return None;
    }
    let mut x = vec![Rational::zero(); k];
    for (i, &col) in pivots.iter().enumerate() {
        x[col] = m[i][k].clone();
    }
    Some(x)
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        if self.n == other.n {
            return self.c == other.c;
        }
        let l = lcm(self.n, other.n);
        self.at(l) == other.at(l)
    }
}

impl Eq for Cyclotomic {}

impl Add for &Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: &Cyclotomic) -> Cyclotomic {
        let l = lcm(self.n, rhs.n);
        let mut a = self.at(l);
        if rhs.n == l {
            for (x, y) in a.iter_mut().zip(&rhs.c) {
                *x += y;
            }
        } else {
            for (x, y) in a.iter_mut().zip(rhs.at(l)) {
                *x += y;
            }
        }
        Cyclotomic { n: l, c: a }
    }
}

impl Neg for &Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        Cyclotomic { n: self.n, c: self.c.iter().map(|x| -x).collect() }
    }
}

impl Sub for &Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, rhs: &Cyclotomic) -> Cyclotomic {
        self + &(-rhs)
    }
}

impl Mul for &Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: &Cyclotomic) -> Cyclotomic {
        if self.n == 1 {
            return rhs.scale(&self.c[0]);
        }
        if rhs.n == 1 {
            return self.scale(&rhs.c[0]);
        }
        let l = lcm(self.n, rhs.n);
        let f = field(l);
        let a = self.at(l);
        let b = rhs.at(l);
        let mut raw = vec![Rational::zero(); 2 * f.phi - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    raw[i + j] += x * y;
                }
            }
        }
        let mut out: Vec<Rational> = raw[..f.phi].to_vec();
        for (j, q) in raw.iter().enumerate().skip(f.phi) {
            if !q.is_zero() {
                add_scaled(&mut out, q, &f.xpow[j % l as usize]);
            }
        }
        Cyclotomic { n: l, c: out }
    }
}

impl AddAssign<&Cyclotomic> for Cyclotomic {
    fn add_assign(&mut self, rhs: &Cyclotomic) {
        if self.n == rhs.n {
            for (x, y) in self.c.iter_mut().zip(&rhs.c) {
                *x += y;
            }
        } else {
            *self = &*self + rhs;
        }
    }
}

macro_rules! owned_binop {
    ($tr:ident, $f:ident) => {
        impl $tr for Cyclotomic {
            type Output = Cyclotomic;
            fn $f(self, rhs: Cyclotomic) -> Cyclotomic {
                (&self).$f(&rhs)
            }
        }
        impl $tr<&Cyclotomic> for Cyclotomic {
            type Output = Cyclotomic;
            fn $f(self, rhs: &Cyclotomic) -> Cyclotomic {
                (&self).$f(rhs)
            }
        }
    };
}
owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

impl Neg for Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        -&self
    }
}

impl std::iter::Sum for Cyclotomic {
    fn sum<I: Iterator<Item = Cyclotomic>>(iter: I) -> Self {
        iter.fold(Cyclotomic::zero(), |mut a, b| {
            a += &b;
            a
        })
    }
}

impl From<i64> for Cyclotomic {
    fn from(v: i64) -> Self {
        Cyclotomic::from_int(v)
    }
}

impl From<Rational> for Cyclotomic {
    fn from(q: Rational) -> Self {
        Cyclotomic::from_rational(q)
    }
}

/// Canonical text form: reduced conductor, ascending exponents.
impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = self.reduce_conductor();
        let mut parts: Vec<String> = Vec::new();
        for (e, q) in r.c.iter().enumerate() {
            if q.is_zero() {
                continue;
            }
            let s = if e == 0 {
                q.to_string()
            } else {
                let root = if e == 1 { format!("E({})", r.n) } else { format!("E({})^{}", r.n, e) };
                if q.is_one() {
                    root
                } else if *q == -Rational::one() {
                    format!("-{root}")
                } else {
                    format!("{q}*{root}")
                }
            };
            parts.push(s);
        }
        if parts.is_empty() {
            return f.write_str("0");
        }
        let mut out = String::new();
        for (i, p) in parts.iter().enumerate() {
            if i > 0 && !p.starts_with('-') {
                out.push('+');
            }
            out.push_str(p);
        }
        f.write_str(&out)
    }
}

impl FromStr for Cyclotomic {
    type Err = CycloError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut p = Parser { s: s.as_bytes(), pos: 0 };
        let v = p.expr()?;
        p.skip_ws();
        if p.pos != p.s.len() {
            return Err(p.err("trailing input"));
        }
        Ok(v)
    }
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> CycloError {
        CycloError::Parse { pos: self.pos, msg: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn expect(&mut self, b: u8) -> Result<(), CycloError> {
        if self.peek() == Some(b) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(&format!("expected '{}'", b as char)))
        }
    }

    fn int(&mut self) -> Result<BigInt, CycloError> {
        self.skip_ws();
        let start = self.pos;
        if matches!(self.s.get(self.pos), Some(b'-')) {
            self.pos += 1;
        }
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let txt = std::str::from_utf8(&self.s[start..self.pos]).expect("ascii digits");
        txt.parse::<BigInt>().map_err(|_| {
            self.pos = start;
            self.err("expected integer")
        })
    }

    fn small_int(&mut self) -> Result<i64, CycloError> {
        let v = self.int()?;
        v.to_i64().ok_or_else(|| self.err("integer out of range"))
    }

    fn expr(&mut self) -> Result<Cyclotomic, CycloError> {
        // a leading unary minus is accepted in addition to the binary forms
        let mut acc = if self.peek() == Some(b'-') {
            self.pos += 1;
            -self.term()?
        } else {
            self.term()?
        };
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = acc + self.term()?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = acc - self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Cyclotomic, CycloError> {
        let mut acc = self.factor()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            acc = acc * self.factor()?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Cyclotomic, CycloError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                self.expect(b')')?;
                Ok(v)
            }
            Some(b'E') => {
                self.pos += 1;
                self.expect(b'(')?;
                let n = self.small_int()?;
                self.expect(b')')?;
                if n <= 0 || n > u32::MAX as i64 {
                    return Err(self.err("conductor must be positive"));
                }
                let k = if self.peek() == Some(b'^') {
                    self.pos += 1;
                    self.small_int()?
                } else {
                    1
                };
                Cyclotomic::root(n as u32, k)
            }
            Some(c) if c.is_ascii_digit() => {
                let num = self.int()?;
                if self.s.get(self.pos) == Some(&b'/') {
                    self.pos += 1;
                    let den = self.int()?;
                    if den.is_zero() || den.is_negative() {
                        return Err(self.err("denominator must be positive"));
                    }
                    Ok(Cyclotomic::from_rational(Rational::new(num, den)))
                } else {
                    Ok(Cyclotomic::from_rational(Rational::from_integer(num)))
                }
            }
            _ => Err(self.err("expected a value")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    fn c(s: &str) -> Cyclotomic {
        s.parse().unwrap()
    }

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(cyclotomic_poly(1), vec![-1, 1]);
        assert_eq!(cyclotomic_poly(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic_poly(12), vec![1, 0, -1, 0, 1]);
        assert_eq!(cyclotomic_poly(105).iter().map(|x| x.abs()).max(), Some(2));
    }

    #[test]
    fn inverses() {
        assert_eq!(c("E(3)").inv().unwrap(), c("E(3)^2"));
        assert_eq!(c("2").inv().unwrap(), Cyclotomic::from_rational(q(1, 2)));
        // golden ratio: b5 * (1 + b5) = 1 with b5 = (-1 + sqrt 5)/2
        let b5 = c("E(5)+E(5)^4");
        assert_eq!(b5.inv().unwrap(), &b5 + &Cyclotomic::one());
        assert_eq!(Cyclotomic::zero().inv(), Err(CycloError::DivisionByZero));
    }

    #[test]
    fn make_reduces_modulo_phi() {
        let one = Rational::one();
        assert!(Cyclotomic::new(4, &[(1, one.clone()), (3, one.clone())]).unwrap().is_zero());
        let z6 = Cyclotomic::new(6, &[(2, one.clone())]).unwrap();
        assert_eq!(z6.coeffs(), &[-one.clone(), one.clone()]);
        assert_eq!(Cyclotomic::new(0, &[]), Err(CycloError::ZeroConductor));
    }

    #[test]
    fn quadratic_integer_of_conductor_seven() {
        let a = c("E(7)+E(7)^2+E(7)^4");
        for z in a.embeddings() {
            assert!((z.re + 0.5).abs() < 1e-9);
            assert!((z.im.abs() - 7f64.sqrt() / 2.0).abs() < 1e-9);
        }
        assert_eq!(&a + &a.conj(), Cyclotomic::from_int(-1));
        assert_eq!(a.conj(), c("E(7)^3+E(7)^5+E(7)^6"));
        // (1 + sqrt(-7))/2 times its conjugate is 2
        let b = &a + &Cyclotomic::one();
        assert_eq!(&b * &b.conj(), Cyclotomic::from_int(2));
    }

    #[test]
    fn field_operations_at_mixed_conductors() {
        assert_eq!(c("E(5)") * c("E(5)^4"), Cyclotomic::one());
        assert_eq!(c("E(5)+E(5)^4") + c("E(5)^2+E(5)^3"), Cyclotomic::from_int(-1));
        assert_eq!(c("E(5)+E(5)^4").galois(2).unwrap(), c("E(5)^2+E(5)^3"));
        assert!(matches!(c("E(5)").galois(5), Err(CycloError::NotCoprime { .. })));
        assert_eq!(c("E(3)") * c("E(4)"), c("E(12)^7"));
    }

    #[test]
    fn galois_orbits_on_sqrt_minus_seven() {
        let a = c("E(7)+E(7)^2+E(7)^4");
        let orbit: Vec<Cyclotomic> = (1..7).map(|k| a.galois(k).unwrap()).collect();
        let distinct: Vec<String> = {
            let mut v: Vec<String> = orbit.iter().map(|x| x.to_string()).collect();
            v.sort();
            v.dedup();
            v
        };
        assert_eq!(distinct.len(), 2);
    }

    #[test]
    fn rational_guard() {
        assert_eq!(Cyclotomic::zero().to_rational().unwrap(), Rational::zero());
        assert_eq!(c("E(3)+E(3)^2+1").to_rational().unwrap(), Rational::zero());
        assert!(c("E(5)").to_rational().is_err());
    }

    #[test]
    fn conductor_reduction() {
        let v = c("E(6)^2-E(6)").reduce_conductor();
        assert_eq!(v.conductor(), 1);
        assert_eq!(v, Cyclotomic::from_int(-1));
        assert_eq!(c("E(12)^4").reduce_conductor().conductor(), 3);
        let w = c("E(5)+E(5)^4").promote(15);
        assert_eq!(w.conductor(), 15);
        let r = w.reduce_conductor();
        assert_eq!(r.conductor(), 5);
        assert!((r.to_complex() - w.to_complex()).norm() < 1e-9);
        assert_eq!(c("E(8)-E(8)^3").reduce_conductor().conductor(), 8);
        assert_eq!(c("E(6)").reduce_conductor().to_string(), "1+E(3)");
    }

    #[test]
    fn canonical_text() {
        for s in [
            "0",
            "-3",
            "1/2",
            "-E(5)^2-E(5)^3",
            "1+E(5)^2+E(5)^3",
            "-E(8)+E(8)^3",
            "E(7)+E(7)^2+E(7)^4",
            "1/2*E(5)",
            "-2*E(7)",
            "-1-2*E(3)",
        ] {
            assert_eq!(c(s).to_string(), s);
        }
        assert_eq!(c("E(4)^2").to_string(), "-1");
        assert_eq!(c("2*(E(3)+1/2)").to_string(), "1+2*E(3)");
        assert_eq!(c("E(5)+E(5)^2+E(5)^3+E(5)^4").to_string(), "-1");
    }

    #[test]
    fn parse_errors() {
        assert!("E(0)".parse::<Cyclotomic>().is_err());
        assert!("1/0".parse::<Cyclotomic>().is_err());
        assert!("1+".parse::<Cyclotomic>().is_err());
        assert!("E(5".parse::<Cyclotomic>().is_err());
        assert!("3 x".parse::<Cyclotomic>().is_err());
        assert_eq!(c("1/2").to_rational().unwrap(), q(1, 2));
    }
}
