//! Multi-precision reals used wherever double precision runs out: generator
//! values, exponents realized at caller precision, and phase reduction of
//! `λ·τ` for large translates.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::fmt;

use astro_float::{BigFloat, Consts, Radix, RoundingMode, Sign};
use num_bigint::{BigInt, BigUint, Sign as BigSign};
use num_traits::{ToPrimitive, Zero};
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

/// Default working precision in bits.
pub const DEFAULT_BITS: usize = 128;

const RM: RoundingMode = RoundingMode::ToEven;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("constant cache"));
}

fn with_consts<R>(f: impl FnOnce(&mut Consts) -> R) -> R {
    CONSTS.with(|cc| f(&mut cc.borrow_mut()))
}

/// Round a requested precision up to whole 64-bit words, the granularity
/// astro-float works in.
pub fn word_bits(bits: usize) -> usize {
    bits.max(64).div_ceil(64) * 64
}

/// A real number carried at an explicit binary precision.
#[derive(Clone)]
pub struct HpReal {
    value: BigFloat,
    bits: usize,
}

impl HpReal {
    pub fn from_f64(x: f64, bits: usize) -> Self {
        let bits = word_bits(bits);
        HpReal {
            value: BigFloat::from_f64(x, bits),
            bits,
        }
    }

    pub fn from_i64(x: i64, bits: usize) -> Self {
        let bits = word_bits(bits);
        HpReal {
            value: BigFloat::from_i64(x, bits),
            bits,
        }
    }

    pub fn zero(bits: usize) -> Self {
        Self::from_f64(0.0, bits)
    }

    pub fn from_bigint(x: &BigInt, bits: usize) -> Self {
        let bits = word_bits(bits);
        let (sign, digits) = x.to_u64_digits();
        if digits.is_empty() {
            return Self::zero(bits);
        }
        let len = digits.len();
        let top = digits[len - 1];
        let lz = top.leading_zeros() as usize;
        // normalize so the most significant bit of the top word is set
        let m = BigUint::from_slice(
            &digits
                .iter()
                .flat_map(|d| [(*d & 0xffff_ffff) as u32, (*d >> 32) as u32])
                .collect::<Vec<_>>(),
        ) << lz;
        let words: Vec<u64> = m.to_u64_digits();
        let exp = (len * 64 - lz) as i32;
        let s = if sign == BigSign::Minus { Sign::Neg } else { Sign::Pos };
        let mut v = BigFloat::from_words(&words, s, exp);
        v.set_precision(bits.max(words.len() * 64), RM).ok();
        let mut out = HpReal { value: v, bits };
        out.value.set_precision(bits, RM).ok();
        out.bits = bits;
        out
    }

    pub fn pi(bits: usize) -> Self {
        let bits = word_bits(bits);
        HpReal {
            value: with_consts(|cc| cc.pi(bits, RM)),
            bits,
        }
    }

    pub fn two_pi(bits: usize) -> Self {
        let p = Self::pi(bits + 64);
        p.mul(&HpReal::from_f64(2.0, bits + 64)).with_bits(bits)
    }

    /// Parse a decimal literal such as `"-12.5e3"`.
    pub fn parse(s: &str, bits: usize) -> Option<Self> {
        let bits = word_bits(bits);
        let trimmed = s.trim();
        if trimmed.is_empty() {
            return None;
        }
        let ok = trimmed
            .chars()
            .all(|c| c.is_ascii_digit() || matches!(c, '.' | 'e' | 'E' | '+' | '-'));
        if !ok {
            return None;
        }
        let v = with_consts(|cc| BigFloat::parse(trimmed, Radix::Dec, bits, RM, cc));
        if v.is_nan() || v.is_inf() {
            return None;
        }
        Some(HpReal { value: v, bits })
    }

    pub fn bits(&self) -> usize {
        self.bits
    }

    pub fn with_bits(&self, bits: usize) -> Self {
        let bits = word_bits(bits);
        let mut v = self.value.clone();
        v.set_precision(bits, RM).ok();
        HpReal { value: v, bits }
    }

    fn prec(&self, other: &Self) -> usize {
        self.bits.max(other.bits)
    }

    pub fn add(&self, other: &Self) -> Self {
        let p = self.prec(other);
        HpReal {
            value: self.value.add(&other.value, p, RM),
            bits: p,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let p = self.prec(other);
        HpReal {
            value: self.value.sub(&other.value, p, RM),
            bits: p,
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let p = self.prec(other);
        HpReal {
            value: self.value.mul(&other.value, p, RM),
            bits: p,
        }
    }

    pub fn div(&self, other: &Self) -> Self {
        let p = self.prec(other);
        HpReal {
            value: self.value.div(&other.value, p, RM),
            bits: p,
        }
    }

    pub fn mul_f64(&self, x: f64) -> Self {
        self.mul(&HpReal::from_f64(x, self.bits))
    }

    pub fn add_f64(&self, x: f64) -> Self {
        self.add(&HpReal::from_f64(x, self.bits))
    }

    pub fn neg(&self) -> Self {
        HpReal {
            value: self.value.neg(),
            bits: self.bits,
        }
    }

    pub fn abs(&self) -> Self {
        HpReal {
            value: self.value.abs(),
            bits: self.bits,
        }
    }

    pub fn ln(&self) -> Self {
        let p = self.bits;
        HpReal {
            value: with_consts(|cc| self.value.ln(p, RM, cc)),
            bits: p,
        }
    }

    pub fn exp(&self) -> Self {
        let p = self.bits;
        HpReal {
            value: with_consts(|cc| self.value.exp(p, RM, cc)),
            bits: p,
        }
    }

    pub fn sqrt(&self) -> Self {
        let p = self.bits;
        HpReal {
            value: self.value.sqrt(p, RM),
            bits: p,
        }
    }

    pub fn powi(&self, n: usize) -> Self {
        HpReal {
            value: self.value.powi(n, self.bits, RM),
            bits: self.bits,
        }
    }

    pub fn floor(&self) -> Self {
        HpReal {
            value: self.value.floor(),
            bits: self.bits,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        !(self.value.is_nan() || self.value.is_inf())
    }

    pub fn is_negative(&self) -> bool {
        self.value.is_negative()
    }

    /// Fractional part in `[0, 1)`, also for negative values.
    pub fn frac(&self) -> Self {
        let f = self.sub(&self.floor());
        f
    }

    /// `self mod 1` reduced to `[0, 1)` and returned in double precision.
    pub fn frac_f64(&self) -> f64 {
        let f = self.frac().to_f64();
        if f >= 1.0 {
            0.0
        } else {
            f
        }
    }

    /// Distance to the nearest integer, `‖x‖`.
    pub fn dist_to_int(&self) -> f64 {
        let f = self.frac_f64();
        f.min(1.0 - f)
    }

    /// Signed offset to the nearest integer, in `[-1/2, 1/2)`.
    pub fn centered_frac(&self) -> f64 {
        let f = self.frac_f64();
        if f >= 0.5 {
            f - 1.0
        } else {
            f
        }
    }

    /// Base-2 exponent: `|x| ∈ [2^(e-1), 2^e)`. Zero reports 0.
    pub fn exponent(&self) -> i64 {
        if self.value.is_zero() {
            return 0;
        }
        self.value.exponent().map(|e| e as i64).unwrap_or(0)
    }

    pub fn to_f64(&self) -> f64 {
        let Some((m, _n, s, e, _)) = self.value.as_raw_parts() else {
            return if self.value.is_inf_pos() {
                f64::INFINITY
            } else if self.value.is_inf_neg() {
                f64::NEG_INFINITY
            } else {
                f64::NAN
            };
        };
        if m.is_empty() || m.iter().all(|w| *w == 0) {
            return 0.0;
        }
        let top = m[m.len() - 1];
        let next = if m.len() > 1 { m[m.len() - 2] } else { 0 };
        // top word carries the leading bit; fold the next word in for rounding
        let v = (top as f64) + (next as f64) * 2f64.powi(-64);
        let v = ldexp(v, e as i64 - 64);
        if s == Sign::Neg {
            -v
        } else {
            v
        }
    }

    /// Round to the nearest integer.
    pub fn round_to_bigint(&self) -> BigInt {
        let half = HpReal::from_f64(0.5, self.bits);
        let fl = self.add(&half).floor();
        let Some((m, _n, s, e, _)) = fl.value.as_raw_parts() else {
            return BigInt::zero();
        };
        if e <= 0 || m.iter().all(|w| *w == 0) {
            return BigInt::zero();
        }
        let p = (m.len() * 64) as i64;
        let mag = BigUint::from_slice(
            &m.iter()
                .flat_map(|d| [(*d & 0xffff_ffff) as u32, (*d >> 32) as u32])
                .collect::<Vec<_>>(),
        );
        let shift = p - e as i64;
        let mag = if shift >= 0 {
            mag >> (shift as usize)
        } else {
            mag << ((-shift) as usize)
        };
        let sign = if s == Sign::Neg { BigSign::Minus } else { BigSign::Plus };
        BigInt::from_biguint(sign, mag)
    }

    /// Decimal rendering with enough digits to round-trip at this precision.
    pub fn to_decimal(&self) -> String {
        if self.value.is_zero() {
            return "0".to_string();
        }
        let s = with_consts(|cc| self.value.format(Radix::Dec, RM, cc)).unwrap_or_default();
        trim_decimal(&s, self.bits)
    }
}

fn ldexp(x: f64, e: i64) -> f64 {
    let mut x = x;
    let mut e = e;
    while e > 1000 {
        x *= 2f64.powi(1000);
        e -= 1000;
    }
    while e < -1000 {
        x *= 2f64.powi(-1000);
        e += 1000;
    }
    x * 2f64.powi(e as i32)
}

/// astro-float prints every mantissa digit; keep `bits·log10(2) + 2` of them.
fn trim_decimal(s: &str, bits: usize) -> String {
    let keep = (bits as f64 * std::f64::consts::LOG10_2).ceil() as usize + 2;
    let (mant, exp) = match s.find('e') {
        Some(i) => (&s[..i], &s[i..]),
        None => (s, ""),
    };
    let (neg, mant) = match mant.strip_prefix('-') {
        Some(m) => (true, m),
        None => (false, mant),
    };
    let mut digits = 0;
    let mut out = String::new();
    for c in mant.chars() {
        if c.is_ascii_digit() {
            if digits >= keep {
                break;
            }
            digits += 1;
        }
        out.push(c);
    }
    if out.contains('.') {
        while out.ends_with('0') {
            out.pop();
        }
        if out.ends_with('.') {
            out.pop();
        }
    }
    let exp = match exp {
        "e+0" | "e-0" | "e0" => "",
        other => other,
    };
    format!("{}{}{}", if neg { "-" } else { "" }, out, exp)
}

impl fmt::Debug for HpReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HpReal({})", self.to_decimal())
    }
}

impl fmt::Display for HpReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_decimal())
    }
}

impl PartialEq for HpReal {
    fn eq(&self, other: &Self) -> bool {
        self.partial_cmp(other) == Some(Ordering::Equal)
    }
}

impl PartialOrd for HpReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.value.cmp(&other.value).map(|c| c.cmp(&0))
    }
}

impl From<f64> for HpReal {
    fn from(x: f64) -> Self {
        HpReal::from_f64(x, DEFAULT_BITS)
    }
}

impl Serialize for HpReal {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_decimal())
    }
}

impl<'de> Deserialize<'de> for HpReal {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Num(f64),
            Text(String),
        }
        match Repr::deserialize(deserializer)? {
            Repr::Num(x) => Ok(HpReal::from_f64(x, DEFAULT_BITS.max(256))),
            Repr::Text(s) => {
                let bits = (s.len() as f64 * 3.33) as usize + 64;
                HpReal::parse(&s, bits.max(DEFAULT_BITS))
                    .ok_or_else(|| de::Error::custom(format!("invalid real literal {s:?}")))
            }
        }
    }
}

/// Convenience: `HpReal` → `i64` when it fits.
pub fn to_i64(x: &HpReal) -> Option<i64> {
    x.round_to_bigint().to_i64()
}
