//! Exact polynomial arithmetic.
//!
//! [`IntPoly2`] is the ring Z[X1, X2] that foam evaluations land in, and
//! [`LaurentQ`] is Z[q, q^-1], used for graded dimensions and the Jones
//! polynomial. Both keep their terms in a `BTreeMap` with zero coefficients
//! removed, so equality is structural and rendering is deterministic.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("polynomial is not divisible by (X1 - X2)^{0}")]
    NonExactDivision(i64),
    #[error("cannot parse polynomial {text:?} at byte {pos}")]
    Parse { text: String, pos: usize },
}

fn add_term<K: Ord>(terms: &mut BTreeMap<K, BigInt>, key: K, c: BigInt) {
    if c.is_zero() {
        return;
    }
    use std::collections::btree_map::Entry;
    match terms.entry(key) {
        Entry::Vacant(e) => {
            e.insert(c);
        }
        Entry::Occupied(mut e) => {
            *e.get_mut() += c;
            if e.get().is_zero() {
                e.remove();
            }
        }
    }
}

/// A polynomial in Z[X1, X2], keyed by the exponent pair `(a, b)` of `X1^a X2^b`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPoly2 {
    terms: BTreeMap<(u32, u32), BigInt>,
}

impl IntPoly2 {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::monomial(c, 0, 0)
    }

    pub fn monomial(c: impl Into<BigInt>, a: u32, b: u32) -> Self {
        let mut terms = BTreeMap::new();
        add_term(&mut terms, (a, b), c.into());
        Self { terms }
    }

    pub fn x1() -> Self {
        Self::monomial(1, 1, 0)
    }

    pub fn x2() -> Self {
        Self::monomial(1, 0, 1)
    }

    /// X1 + X2.
    pub fn e1() -> Self {
        Self::x1() + Self::x2()
    }

    /// X1 * X2.
    pub fn e2() -> Self {
        Self::monomial(1, 1, 1)
    }

    /// X1 - X2.
    pub fn difference() -> Self {
        Self::x1() - Self::x2()
    }

    pub fn from_terms<I, C>(iter: I) -> Self
    where
        I: IntoIterator<Item = ((u32, u32), C)>,
        C: Into<BigInt>,
    {
        let mut terms = BTreeMap::new();
        for (k, c) in iter {
            add_term(&mut terms, k, c.into());
        }
        Self { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &BigInt)> {
        self.terms.iter()
    }

    pub fn coeff(&self, a: u32, b: u32) -> BigInt {
        self.terms.get(&(a, b)).cloned().unwrap_or_default()
    }

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

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(k, v)| (*k, v * c)).collect(),
        }
    }

    /// The polynomial with X1 and X2 exchanged.
    pub fn swap_variables(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(&(a, b), v)| ((b, a), v.clone())).collect(),
        }
    }

    pub fn is_symmetric(&self) -> bool {
        self.terms
            .iter()
            .all(|(&(a, b), v)| self.terms.get(&(b, a)) == Some(v))
    }

    /// Evaluate at X1 = x1, X2 = x2.
    pub fn eval(&self, x1: &BigInt, x2: &BigInt) -> BigInt {
        self.terms
            .iter()
            .map(|(&(a, b), c)| c * x1.pow(a) * x2.pow(b))
            .sum()
    }

    /// Exact division by `(X1 - X2)^k`; negative `k` multiplies instead.
    pub fn divide_by_difference_power(&self, k: i64) -> Result<Self, PolyError> {
        if k < 0 {
            let e = u32::try_from(-k).expect("exponent fits in u32");
            return Ok(self * &Self::difference().pow(e));
        }
        let mut p = self.clone();
        for _ in 0..k {
            p = p.divide_by_difference().ok_or(PolyError::NonExactDivision(k))?;
        }
        Ok(p)
    }

    // Synthetic division by (X1 - X2), viewing p as a polynomial in X1 over Z[X2].
    fn divide_by_difference(&self) -> Option<Self> {
        if self.is_zero() {
            return Some(Self::zero());
        }
        let deg = self.terms.keys().map(|&(a, _)| a).max().unwrap_or(0) as usize;
        let mut rows: Vec<BTreeMap<u32, BigInt>> = vec![BTreeMap::new(); deg + 1];
        for (&(a, b), c) in &self.terms {
            rows[a as usize].insert(b, c.clone());
        }
        // b_{i-1} = a_i + X2 * b_i, remainder a_0 + X2 * b_0
        let shift = |row: &BTreeMap<u32, BigInt>| -> BTreeMap<u32, BigInt> {
            row.iter().map(|(e, c)| (e + 1, c.clone())).collect()
        };
        let mut quotient: Vec<BTreeMap<u32, BigInt>> = vec![BTreeMap::new(); deg];
        let mut carry: BTreeMap<u32, BigInt> = BTreeMap::new();
        for i in (1..=deg).rev() {
            let mut row = rows[i].clone();
            for (e, c) in shift(&carry) {
                add_term(&mut row, e, c);
            }
            quotient[i - 1] = row.clone();
            carry = row;
        }
        let mut rem = rows[0].clone();
        for (e, c) in shift(&carry) {
            add_term(&mut rem, e, c);
        }
        if !rem.is_empty() {
            return None;
        }
        let mut out = BTreeMap::new();
        for (a, row) in quotient.into_iter().enumerate() {
            for (b, c) in row {
                add_term(&mut out, (a as u32, b), c);
            }
        }
        Some(Self { terms: out })
    }
}

impl Add for &IntPoly2 {
    type Output = IntPoly2;
    fn add(self, rhs: &IntPoly2) -> IntPoly2 {
        let mut terms = self.terms.clone();
        for (k, c) in &rhs.terms {
            add_term(&mut terms, *k, c.clone());
        }
        IntPoly2 { terms }
    }
}

impl Sub for &IntPoly2 {
    type Output = IntPoly2;
    fn sub(self, rhs: &IntPoly2) -> IntPoly2 {
        let mut terms = self.terms.clone();
        for (k, c) in &rhs.terms {
            add_term(&mut terms, *k, -c);
        }
        IntPoly2 { terms }
    }
}

impl Mul for &IntPoly2 {
    type Output = IntPoly2;
    fn mul(self, rhs: &IntPoly2) -> IntPoly2 {
        let mut terms = BTreeMap::new();
        for (&(a, b), c) in &self.terms {
            for (&(d, e), f) in &rhs.terms {
                add_term(&mut terms, (a + d, b + e), c * f);
            }
        }
        IntPoly2 { terms }
    }
}

impl Neg for &IntPoly2 {
    type Output = IntPoly2;
    fn neg(self) -> IntPoly2 {
        IntPoly2 {
            terms: self.terms.iter().map(|(k, v)| (*k, -v)).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($t:ty, $($tr:ident $m:ident),*) => {$(
        impl $tr for $t {
            type Output = $t;
            fn $m(self, rhs: $t) -> $t {
                (&self).$m(&rhs)
            }
        }
    )*};
}
forward_owned!(IntPoly2, Add add, Sub sub, Mul mul);

impl Neg for IntPoly2 {
    type Output = IntPoly2;
    fn neg(self) -> IntPoly2 {
        -&self
    }
}

impl std::iter::Sum for IntPoly2 {
    fn sum<I: Iterator<Item = IntPoly2>>(iter: I) -> Self {
        iter.fold(IntPoly2::zero(), |acc, p| &acc + &p)
    }
}

// Writes "c*m" style terms joined by " + " / " - ".
fn write_terms<'a, I>(f: &mut fmt::Formatter<'_>, terms: I) -> fmt::Result
where
    I: Iterator<Item = (String, &'a BigInt)>,
{
    let mut first = true;
    for (mono, c) in terms {
        let abs = c.abs();
        if first {
            if c.is_negative() {
                f.write_str("-")?;
            }
        } else {
            f.write_str(if c.is_negative() { " - " } else { " + " })?;
        }
        first = false;
        match (mono.is_empty(), abs.is_one()) {
            (true, _) => write!(f, "{abs}")?,
            (false, true) => f.write_str(&mono)?,
            (false, false) => write!(f, "{abs}*{mono}")?,
        }
    }
    if first {
        f.write_str("0")?;
    }
    Ok(())
}

fn power(var: &str, e: i64) -> String {
    match e {
        0 => String::new(),
        1 => var.to_string(),
        _ => format!("{var}^{e}"),
    }
}

impl fmt::Display for IntPoly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.terms.iter().rev().map(|(&(a, b), c)| {
            let parts: Vec<String> = [power("X1", a as i64), power("X2", b as i64)]
                .into_iter()
                .filter(|s| !s.is_empty())
                .collect();
            (parts.join("*"), c)
        });
        write_terms(f, terms)
    }
}

/// A Laurent polynomial in q with integer coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct LaurentQ {
    terms: BTreeMap<i32, BigInt>,
}

impl LaurentQ {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(1, 0)
    }

    pub fn monomial(c: impl Into<BigInt>, e: i32) -> Self {
        let mut terms = BTreeMap::new();
        add_term(&mut terms, e, c.into());
        Self { terms }
    }

    /// q + q^-1, the graded dimension of a circle.
    pub fn circle() -> Self {
        Self::monomial(1, 1) + Self::monomial(1, -1)
    }

    pub fn from_terms<I, C>(iter: I) -> Self
    where
        I: IntoIterator<Item = (i32, C)>,
        C: Into<BigInt>,
    {
        let mut terms = BTreeMap::new();
        for (e, c) in iter {
            add_term(&mut terms, e, c.into());
        }
        Self { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&i32, &BigInt)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: i32) -> BigInt {
        self.terms.get(&e).cloned().unwrap_or_default()
    }

    pub fn add_monomial(&mut self, c: impl Into<BigInt>, e: i32) {
        add_term(&mut self.terms, e, c.into());
    }

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

    /// Multiply by q^k.
    pub fn shift(&self, k: i32) -> Self {
        Self {
            terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect(),
        }
    }

    /// Substitute q -> q^-1.
    pub fn invert_variable(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(e, c)| (-e, c.clone())).collect(),
        }
    }
}

impl Add for &LaurentQ {
    type Output = LaurentQ;
    fn add(self, rhs: &LaurentQ) -> LaurentQ {
        let mut terms = self.terms.clone();
        for (k, c) in &rhs.terms {
            add_term(&mut terms, *k, c.clone());
        }
        LaurentQ { terms }
    }
}

impl Sub for &LaurentQ {
    type Output = LaurentQ;
    fn sub(self, rhs: &LaurentQ) -> LaurentQ {
        let mut terms = self.terms.clone();
        for (k, c) in &rhs.terms {
            add_term(&mut terms, *k, -c);
        }
        LaurentQ { terms }
    }
}

impl Mul for &LaurentQ {
    type Output = LaurentQ;
    fn mul(self, rhs: &LaurentQ) -> LaurentQ {
        let mut terms = BTreeMap::new();
        for (a, c) in &self.terms {
            for (b, d) in &rhs.terms {
                add_term(&mut terms, a + b, c * d);
            }
        }
        LaurentQ { terms }
    }
}

impl Neg for &LaurentQ {
    type Output = LaurentQ;
    fn neg(self) -> LaurentQ {
        LaurentQ {
            terms: self.terms.iter().map(|(k, v)| (*k, -v)).collect(),
        }
    }
}

forward_owned!(LaurentQ, Add add, Sub sub, Mul mul);

impl std::iter::Sum for LaurentQ {
    fn sum<I: Iterator<Item = LaurentQ>>(iter: I) -> Self {
        iter.fold(LaurentQ::zero(), |acc, p| &acc + &p)
    }
}

impl std::iter::Product for LaurentQ {
    fn product<I: Iterator<Item = LaurentQ>>(iter: I) -> Self {
        iter.fold(LaurentQ::one(), |acc, p| &acc * &p)
    }
}

impl fmt::Display for LaurentQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self
            .terms
            .iter()
            .rev()
            .map(|(&e, c)| (power("q", e as i64), c));
        write_terms(f, terms)
    }
}

// Parsing: a sum of terms `c`, `c*m`, `m` where m is a product of `var^e` factors.

struct Lexer<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn err(&self) -> PolyError {
        PolyError::Parse {
            text: self.text.to_string(),
            pos: self.pos,
        }
    }

    fn skip_ws(&mut self) {
        while self.rest().starts_with(char::is_whitespace) {
            self.pos += self.rest().chars().next().map_or(0, char::len_utf8);
        }
    }

    fn rest(&self) -> &'a str {
        &self.text[self.pos..]
    }

    fn eat(&mut self, s: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(s) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    fn integer(&mut self) -> Option<BigInt> {
        self.skip_ws();
        let digits = self.rest().bytes().take_while(u8::is_ascii_digit).count();
        if digits == 0 {
            return None;
        }
        let n = self.rest()[..digits].parse().ok();
        self.pos += digits;
        n
    }

    fn signed_exponent(&mut self) -> Result<i64, PolyError> {
        let neg = self.eat("-");
        let n = self.integer().ok_or_else(|| self.err())?;
        let n: i64 = n.try_into().map_err(|_| self.err())?;
        Ok(if neg { -n } else { n })
    }

    /// Parses a signed sum; `factor` consumes one variable power and returns its key delta.
    fn sum<K, F>(&mut self, unit: K, mut factor: F) -> Result<Vec<(K, BigInt)>, PolyError>
    where
        K: Clone,
        F: FnMut(&mut Self, K) -> Result<Option<K>, PolyError>,
    {
        let mut out = Vec::new();
        self.skip_ws();
        if self.rest().is_empty() {
            return Err(self.err());
        }
        let mut first = true;
        loop {
            self.skip_ws();
            if self.rest().is_empty() {
                break;
            }
            let sign = if self.eat("+") {
                BigInt::one()
            } else if self.eat("-") {
                -BigInt::one()
            } else if first {
                BigInt::one()
            } else {
                return Err(self.err());
            };
            first = false;
            let coeff = self.integer();
            let mut key = unit.clone();
            let mut saw_factor = false;
            if coeff.is_none() || self.eat("*") {
                loop {
                    match factor(self, key.clone())? {
                        Some(k) => {
                            key = k;
                            saw_factor = true;
                        }
                        None => return Err(self.err()),
                    }
                    if !self.eat("*") {
                        break;
                    }
                }
            }
            if coeff.is_none() && !saw_factor {
                return Err(self.err());
            }
            out.push((key, sign * coeff.unwrap_or_else(BigInt::one)));
        }
        Ok(out)
    }
}

impl FromStr for IntPoly2 {
    type Err = PolyError;

    fn from_str(s: &str) -> Result<Self, PolyError> {
        let mut lx = Lexer { text: s, pos: 0 };
        let terms = lx.sum((0u32, 0u32), |lx, (a, b)| {
            let idx = if lx.eat("X1") {
                0
            } else if lx.eat("X2") {
                1
            } else {
                return Ok(None);
            };
            let e = if lx.eat("^") { lx.signed_exponent()? } else { 1 };
            let e = u32::try_from(e).map_err(|_| lx.err())?;
            Ok(Some(if idx == 0 { (a + e, b) } else { (a, b + e) }))
        })?;
        Ok(Self::from_terms(terms))
    }
}

impl FromStr for LaurentQ {
    type Err = PolyError;

    fn from_str(s: &str) -> Result<Self, PolyError> {
        let mut lx = Lexer { text: s, pos: 0 };
        let terms = lx.sum(0i32, |lx, e0| {
            if !lx.eat("q") {
                return Ok(None);
            }
            let e = if lx.eat("^") { lx.signed_exponent()? } else { 1 };
            let e = i32::try_from(e).map_err(|_| lx.err())?;
            Ok(Some(e0 + e))
        })?;
        Ok(Self::from_terms(terms))
    }
}

macro_rules! text_serde {
    ($t:ty) => {
        impl Serialize for $t {
            fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                s.collect_str(self)
            }
        }

        impl<'de> Deserialize<'de> for $t {
            fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
                let text = String::deserialize(d)?;
                text.parse().map_err(serde::de::Error::custom)
            }
        }
    };
}
text_serde!(IntPoly2);
text_serde!(LaurentQ);
