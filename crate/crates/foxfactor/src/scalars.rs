//! Exact scalars: the rationals and prime fields GF(p).

use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FieldSpec {
    Rationals,
    Prime(u64),
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl FieldSpec {
    pub fn prime(p: u64) -> Result<Self> {
        if is_prime(p) {
            Ok(FieldSpec::Prime(p))
        } else {
            Err(Error::Invalid(format!("{p} is not prime")))
        }
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            FieldSpec::Rationals => 0,
            FieldSpec::Prime(p) => *p,
        }
    }

    /// Number of elements, `None` for the rationals.
    pub fn size(&self) -> Option<u64> {
        match self {
            FieldSpec::Rationals => None,
            FieldSpec::Prime(p) => Some(*p),
        }
    }

    pub fn zero(&self) -> FieldElem {
        self.from_i64(0)
    }

    pub fn one(&self) -> FieldElem {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> FieldElem {
        match self {
            FieldSpec::Rationals => FieldElem::Q(BigRational::from_integer(BigInt::from(v))),
            FieldSpec::Prime(p) => FieldElem::Fp(v.rem_euclid(*p as i64) as u64, *p),
        }
    }

    /// Residue `v` for prime fields; the integer `v` for the rationals.
    pub fn from_u64(&self, v: u64) -> FieldElem {
        match self {
            FieldSpec::Rationals => FieldElem::Q(BigRational::from_integer(BigInt::from(v))),
            FieldSpec::Prime(p) => FieldElem::Fp(v % p, *p),
        }
    }

    pub fn from_bigint(&self, v: &BigInt) -> FieldElem {
        match self {
            FieldSpec::Rationals => FieldElem::Q(BigRational::from_integer(v.clone())),
            FieldSpec::Prime(p) => {
                let r = v.mod_floor(&BigInt::from(*p));
                FieldElem::Fp(r.to_u64().unwrap_or(0), *p)
            }
        }
    }

    /// All elements of a prime field, in residue order.
    pub fn elements(&self) -> Option<Vec<FieldElem>> {
        self.size()
            .map(|p| (0..p).map(|v| self.from_u64(v)).collect())
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "Q"),
            FieldSpec::Prime(p) => write!(f, "GF({p})"),
        }
    }
}

impl FromStr for FieldSpec {
    type Err = Error;

    /// Accepts `Q`, `GF(p)` and the command-line spelling `gf:p`.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("q") {
            return Ok(FieldSpec::Rationals);
        }
        let lower = t.to_ascii_lowercase();
        let digits = if let Some(rest) = lower.strip_prefix("gf:") {
            rest
        } else if let Some(rest) = lower.strip_prefix("gf(").and_then(|r| r.strip_suffix(')')) {
            rest
        } else {
            return Err(Error::Invalid(format!("unknown field '{s}'")));
        };
        let p: u64 = digits
            .trim()
            .parse()
            .map_err(|_| Error::Invalid(format!("bad modulus in '{s}'")))?;
        FieldSpec::prime(p)
    }
}

impl Serialize for FieldSpec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for FieldSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A scalar tagged with its field. Residues are kept in `[0, p)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FieldElem {
    Q(BigRational),
    Fp(u64, u64),
}

fn mismatch(a: &FieldElem, b: &FieldElem) -> ! {
    panic!("field mismatch: {} vs {}", a.field(), b.field())
}

fn inv_mod(a: u64, p: u64) -> u64 {
    // p is prime, so a^(p-2) works; extended Euclid is faster for large p.
    let (mut t, mut nt) = (0i128, 1i128);
    let (mut r, mut nr) = (p as i128, a as i128);
    while nr != 0 {
        let q = r / nr;
        (t, nt) = (nt, t - q * nt);
        (r, nr) = (nr, r - q * nr);
    }
    t.rem_euclid(p as i128) as u64
}

impl FieldElem {
    pub fn field(&self) -> FieldSpec {
        match self {
            FieldElem::Q(_) => FieldSpec::Rationals,
            FieldElem::Fp(_, p) => FieldSpec::Prime(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            FieldElem::Q(q) => q.is_zero(),
            FieldElem::Fp(v, _) => *v == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            FieldElem::Q(q) => q.is_one(),
            FieldElem::Fp(v, _) => *v == 1,
        }
    }

    pub fn inv(&self) -> Result<FieldElem> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(match self {
            FieldElem::Q(q) => FieldElem::Q(q.recip()),
            FieldElem::Fp(v, p) => FieldElem::Fp(inv_mod(*v, *p), *p),
        })
    }

    pub fn div(&self, other: &FieldElem) -> Result<FieldElem> {
        Ok(self * &other.inv()?)
    }

    /// True when the printed form starts with a minus sign.
    pub fn is_negative(&self) -> bool {
        match self {
            FieldElem::Q(q) => q.is_negative(),
            FieldElem::Fp(..) => false,
        }
    }

    pub fn parse(text: &str, field: FieldSpec) -> Result<FieldElem> {
        let t = text.trim();
        let (num, den) = match t.split_once('/') {
            Some((n, d)) => (n.trim(), Some(d.trim())),
            None => (t, None),
        };
        let parse_int = |s: &str, offset: usize| -> Result<BigInt> {
            let body = s.strip_prefix(['-', '+']).unwrap_or(s);
            if body.is_empty() || !body.bytes().all(|b| b.is_ascii_digit()) {
                return Err(Error::parse(offset, format!("malformed integer '{s}'")));
            }
            s.parse::<BigInt>()
                .map_err(|_| Error::parse(offset, format!("malformed integer '{s}'")))
        };
        let n = parse_int(num, 0)?;
        let d = match den {
            Some(d) => parse_int(d, num.len() + 1)?,
            None => BigInt::one(),
        };
        match field {
            FieldSpec::Rationals => {
                if d.is_zero() {
                    return Err(Error::DivisionByZero);
                }
                Ok(FieldElem::Q(BigRational::new(n, d)))
            }
            FieldSpec::Prime(p) => {
                let dd = field.from_bigint(&d);
                if dd.is_zero() {
                    return Err(Error::NonInvertibleDenominator(p));
                }
                Ok(&field.from_bigint(&n) * &dd.inv()?)
            }
        }
    }

    /// Integer value when the scalar is an integer of the rationals or a residue.
    pub fn to_i64(&self) -> Option<i64> {
        match self {
            FieldElem::Q(q) if q.is_integer() => q.to_integer().to_i64(),
            FieldElem::Q(_) => None,
            FieldElem::Fp(v, _) => Some(*v as i64),
        }
    }

    pub fn pow(&self, mut e: u64) -> FieldElem {
        let mut base = self.clone();
        let mut acc = self.field().one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldElem::Q(q) => {
                if q.is_integer() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
            FieldElem::Fp(v, _) => write!(f, "{v}"),
        }
    }
}

impl Ord for FieldElem {
    fn cmp(&self, o: &Self) -> std::cmp::Ordering {
        match (self, o) {
            (FieldElem::Q(a), FieldElem::Q(b)) => a.cmp(b),
            (FieldElem::Fp(a, p), FieldElem::Fp(b, q)) => (p, a).cmp(&(q, b)),
            (FieldElem::Q(_), _) => std::cmp::Ordering::Less,
            _ => std::cmp::Ordering::Greater,
        }
    }
}

impl PartialOrd for FieldElem {
    fn partial_cmp(&self, o: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(o))
    }
}

impl Serialize for FieldElem {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl Add for &FieldElem {
    type Output = FieldElem;
    fn add(self, o: &FieldElem) -> FieldElem {
        match (self, o) {
            (FieldElem::Q(a), FieldElem::Q(b)) => FieldElem::Q(a + b),
            (FieldElem::Fp(a, p), FieldElem::Fp(b, q)) if p == q => FieldElem::Fp((a + b) % p, *p),
            _ => mismatch(self, o),
        }
    }
}

impl Sub for &FieldElem {
    type Output = FieldElem;
    fn sub(self, o: &FieldElem) -> FieldElem {
        match (self, o) {
            (FieldElem::Q(a), FieldElem::Q(b)) => FieldElem::Q(a - b),
            (FieldElem::Fp(a, p), FieldElem::Fp(b, q)) if p == q => {
                FieldElem::Fp((a + p - b) % p, *p)
            }
            _ => mismatch(self, o),
        }
    }
}

impl Mul for &FieldElem {
    type Output = FieldElem;
    fn mul(self, o: &FieldElem) -> FieldElem {
        match (self, o) {
            (FieldElem::Q(a), FieldElem::Q(b)) => FieldElem::Q(a * b),
            (FieldElem::Fp(a, p), FieldElem::Fp(b, q)) if p == q => {
                FieldElem::Fp(((*a as u128 * *b as u128) % *p as u128) as u64, *p)
            }
            _ => mismatch(self, o),
        }
    }
}

impl Neg for &FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        match self {
            FieldElem::Q(a) => FieldElem::Q(-a),
            FieldElem::Fp(a, p) => FieldElem::Fp((p - a) % p, *p),
        }
    }
}

macro_rules! owned_ops {
    ($tr:ident, $m:ident) => {
        impl $tr for FieldElem {
            type Output = FieldElem;
            fn $m(self, o: FieldElem) -> FieldElem {
                (&self).$m(&o)
            }
        }
        impl $tr<&FieldElem> for FieldElem {
            type Output = FieldElem;
            fn $m(self, o: &FieldElem) -> FieldElem {
                (&self).$m(o)
            }
        }
    };
}
owned_ops!(Add, add);
owned_ops!(Sub, sub);
owned_ops!(Mul, mul);

impl Neg for FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        -&self
    }
}

impl AddAssign<&FieldElem> for FieldElem {
    fn add_assign(&mut self, o: &FieldElem) {
        *self = &*self + o;
    }
}

impl SubAssign<&FieldElem> for FieldElem {
    fn sub_assign(&mut self, o: &FieldElem) {
        *self = &*self - o;
    }
}

impl MulAssign<&FieldElem> for FieldElem {
    fn mul_assign(&mut self, o: &FieldElem) {
        *self = &*self * o;
    }
}

pub fn scalar_invert(a: &FieldElem) -> Result<FieldElem> {
    a.inv()
}

pub fn scalar_parse(text: &str, field: FieldSpec) -> Result<FieldElem> {
    FieldElem::parse(text, field)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const Q: FieldSpec = FieldSpec::Rationals;
    const F5: FieldSpec = FieldSpec::Prime(5);

    #[test]
    fn inverts() {
        assert_eq!(scalar_invert(&Q.one()).unwrap(), Q.one());
        assert_eq!(scalar_invert(&F5.from_i64(2)).unwrap(), F5.from_i64(3));
        let a = scalar_parse("3/2", Q).unwrap();
        assert_eq!(scalar_invert(&a).unwrap(), scalar_parse("2/3", Q).unwrap());
        assert_eq!(scalar_invert(&F5.zero()), Err(Error::DivisionByZero));
    }

    #[test]
    fn parses() {
        assert_eq!(scalar_parse("3/2", Q).unwrap().to_string(), "3/2");
        assert_eq!(scalar_parse("6/4", Q).unwrap().to_string(), "3/2");
        assert_eq!(scalar_parse("7", F5).unwrap(), F5.from_i64(2));
        assert_eq!(scalar_parse("-1", F5).unwrap(), F5.from_i64(4));
        assert_eq!(
            scalar_parse("1/5", F5),
            Err(Error::NonInvertibleDenominator(5))
        );
        assert!(matches!(scalar_parse("1/x", Q), Err(Error::Parse { .. })));
        assert!(matches!(scalar_parse("", Q), Err(Error::Parse { .. })));
        assert_eq!(scalar_parse("1/3", F5).unwrap(), F5.from_i64(2));
    }

    #[test]
    fn field_spec_text() {
        assert_eq!("Q".parse::<FieldSpec>().unwrap(), Q);
        assert_eq!("gf:7".parse::<FieldSpec>().unwrap(), FieldSpec::Prime(7));
        assert_eq!("GF(5)".parse::<FieldSpec>().unwrap(), F5);
        assert!("gf:6".parse::<FieldSpec>().is_err());
        assert_eq!(F5.to_string(), "GF(5)");
        assert_eq!(serde_json::to_string(&F5).unwrap(), "\"GF(5)\"");
    }

    fn elem(field: FieldSpec) -> impl Strategy<Value = FieldElem> {
        (-20i64..20, 1i64..9).prop_map(move |(n, d)| {
            let d = match field {
                FieldSpec::Prime(p) if (d as u64).is_multiple_of(p) => 1,
                _ => d,
            };
            field.from_i64(n).div(&field.from_i64(d)).unwrap()
        })
    }

    fn check_axioms(a: FieldElem, b: FieldElem, c: FieldElem) {
        assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        assert_eq!(&(&a - &b) + &b, a);
        if !a.is_zero() {
            assert!((&a * &a.inv().unwrap()).is_one());
            assert_eq!(a.inv().unwrap().inv().unwrap(), a);
        }
    }

    proptest! {
        #[test]
        fn rational_axioms(a in elem(Q), b in elem(Q), c in elem(Q)) {
            check_axioms(a, b, c);
        }

        #[test]
        fn prime_axioms(a in elem(F5), b in elem(F5), c in elem(F5)) {
            check_axioms(a, b, c);
        }

        #[test]
        fn large_prime_axioms(x in 0u64..1_000_003, y in 0u64..1_000_003, z in 0u64..1_000_003) {
            let f = FieldSpec::Prime(1_000_003);
            check_axioms(f.from_u64(x), f.from_u64(y), f.from_u64(z));
        }
    }
}
