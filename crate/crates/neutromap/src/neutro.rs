//! Exact arithmetic over `a + bI` with `I * I = I`, plus dense matrices of such values.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Index, Mul, Neg, Sub};
use std::str::FromStr;

use num::{BigInt, BigRational, One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rational(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses an exact rational from `"3"`, `"-3/4"`, `"0.125"` or `"1.5e-2"`.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let bad = || Error::Parse {
        what: "rational",
        input: text.to_string(),
    };
    let t = text.trim();
    if t.is_empty() {
        return Err(bad());
    }
    if let Some((n, d)) = t.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(n, d));
    }
    let (mantissa, exp) = match t.find(['e', 'E']) {
        Some(p) => (&t[..p], t[p + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (t, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (whole, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if whole.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    if !whole.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let all: BigInt = format!("0{whole}{frac}").parse().map_err(|_| bad())?;
    let scale = exp - frac.len() as i32;
    let ten = BigInt::from(10);
    let mut value = Rational::from_integer(all);
    if scale >= 0 {
        value *= Rational::from_integer(num::pow(ten, scale as usize));
    } else {
        value /= Rational::from_integer(num::pow(ten, (-scale) as usize));
    }
    Ok(if negative { -value } else { value })
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NeutroValue {
    real: Rational,
    indet: Rational,
}

impl NeutroValue {
    pub fn new(real: Rational, indet: Rational) -> Self {
        NeutroValue { real, indet }
    }

    pub fn crisp(real: Rational) -> Self {
        NeutroValue::new(real, Rational::zero())
    }

    pub fn from_ints(real: i64, indet: i64) -> Self {
        NeutroValue::new(rational(real), rational(indet))
    }

    pub fn int(real: i64) -> Self {
        NeutroValue::from_ints(real, 0)
    }

    /// The pure indeterminate `I`.
    pub fn i() -> Self {
        NeutroValue::from_ints(0, 1)
    }

    /// Exact binary value of a float; NaN and infinities map to `None`.
    pub fn from_f64(x: f64) -> Option<Self> {
        Rational::from_float(x).map(NeutroValue::crisp)
    }

    pub fn real(&self) -> &Rational {
        &self.real
    }

    pub fn indet(&self) -> &Rational {
        &self.indet
    }

    pub fn is_crisp(&self) -> bool {
        self.indet.is_zero()
    }

    /// `|a| + |b|`; an `I` edge weighs 1.
    pub fn magnitude(&self) -> Rational {
        self.real.abs() + self.indet.abs()
    }

    pub fn scale(&self, k: &Rational) -> Self {
        NeutroValue::new(&self.real * k, &self.indet * k)
    }

    /// Drops the indeterminate part.
    pub fn degrade(&self) -> Self {
        NeutroValue::crisp(self.real.clone())
    }

    pub fn to_f64(&self) -> f64 {
        use num::ToPrimitive;
        self.real.to_f64().unwrap_or(f64::NAN)
    }

    pub fn threshold_state(&self) -> StateSymbol {
        self.threshold_at(&Rational::zero())
    }

    /// Real part against `k` decides; a tie goes to IND only when the indeterminate part is positive.
    pub fn threshold_at(&self, k: &Rational) -> StateSymbol {
        match self.real.cmp(k) {
            std::cmp::Ordering::Greater => StateSymbol::On,
            std::cmp::Ordering::Less => StateSymbol::Off,
            std::cmp::Ordering::Equal if self.indet.is_positive() => StateSymbol::Ind,
            std::cmp::Ordering::Equal => StateSymbol::Off,
        }
    }

    pub fn sign_reduce(&self) -> EdgeSymbol {
        if self.real.is_positive() {
            EdgeSymbol::Positive
        } else if self.real.is_negative() {
            EdgeSymbol::Negative
        } else if !self.indet.is_zero() {
            EdgeSymbol::Indeterminate
        } else {
            EdgeSymbol::Zero
        }
    }
}

impl Zero for NeutroValue {
    fn zero() -> Self {
        NeutroValue::new(Rational::zero(), Rational::zero())
    }

    fn is_zero(&self) -> bool {
        self.real.is_zero() && self.indet.is_zero()
    }
}

impl One for NeutroValue {
    fn one() -> Self {
        NeutroValue::int(1)
    }
}

impl Default for NeutroValue {
    fn default() -> Self {
        NeutroValue::zero()
    }
}

impl From<i64> for NeutroValue {
    fn from(n: i64) -> Self {
        NeutroValue::int(n)
    }
}

impl From<Rational> for NeutroValue {
    fn from(r: Rational) -> Self {
        NeutroValue::crisp(r)
    }
}

impl Add<&NeutroValue> for &NeutroValue {
    type Output = NeutroValue;
    fn add(self, rhs: &NeutroValue) -> NeutroValue {
        NeutroValue::new(&self.real + &rhs.real, &self.indet + &rhs.indet)
    }
}

impl Sub<&NeutroValue> for &NeutroValue {
    type Output = NeutroValue;
    fn sub(self, rhs: &NeutroValue) -> NeutroValue {
        NeutroValue::new(&self.real - &rhs.real, &self.indet - &rhs.indet)
    }
}

impl Mul<&NeutroValue> for &NeutroValue {
    type Output = NeutroValue;
    fn mul(self, rhs: &NeutroValue) -> NeutroValue {
        let real = &self.real * &rhs.real;
        let indet = &self.real * &rhs.indet + &self.indet * &rhs.real + &self.indet * &rhs.indet;
        NeutroValue::new(real, indet)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr<NeutroValue> for NeutroValue {
            type Output = NeutroValue;
            fn $method(self, rhs: NeutroValue) -> NeutroValue {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&NeutroValue> for NeutroValue {
            type Output = NeutroValue;
            fn $method(self, rhs: &NeutroValue) -> NeutroValue {
                (&self).$method(rhs)
            }
        }
        impl $tr<NeutroValue> for &NeutroValue {
            type Output = NeutroValue;
            fn $method(self, rhs: NeutroValue) -> NeutroValue {
                self.$method(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for NeutroValue {
    type Output = NeutroValue;
    fn neg(self) -> NeutroValue {
        NeutroValue::new(-self.real, -self.indet)
    }
}

impl Neg for &NeutroValue {
    type Output = NeutroValue;
    fn neg(self) -> NeutroValue {
        NeutroValue::new(-&self.real, -&self.indet)
    }
}

impl AddAssign<&NeutroValue> for NeutroValue {
    fn add_assign(&mut self, rhs: &NeutroValue) {
        self.real += &rhs.real;
        self.indet += &rhs.indet;
    }
}

impl AddAssign for NeutroValue {
    fn add_assign(&mut self, rhs: NeutroValue) {
        *self += &rhs;
    }
}

impl Sum for NeutroValue {
    fn sum<It: Iterator<Item = NeutroValue>>(iter: It) -> Self {
        iter.fold(NeutroValue::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a NeutroValue> for NeutroValue {
    fn sum<It: Iterator<Item = &'a NeutroValue>>(iter: It) -> Self {
        iter.fold(NeutroValue::zero(), |mut acc, x| {
            acc += x;
            acc
        })
    }
}

impl fmt::Display for NeutroValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let coeff = |c: &Rational| -> String {
            if c.is_one() {
                String::new()
            } else {
                c.to_string()
            }
        };
        match (self.real.is_zero(), self.indet.is_zero()) {
            (_, true) => write!(f, "{}", self.real),
            (true, false) if self.indet == -Rational::one() => write!(f, "-I"),
            (true, false) => write!(f, "{}I", coeff(&self.indet)),
            (false, false) => {
                let sign = if self.indet.is_negative() { '-' } else { '+' };
                write!(f, "{}{}{}I", self.real, sign, coeff(&self.indet.abs()))
            }
        }
    }
}

impl FromStr for NeutroValue {
    type Err = Error;

    /// Accepts sums of real and `I` terms in any order: `"2-4I"`, `"-I+2"`, `"1/2I"`, `"0.5"`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse {
            what: "neutrosophic value",
            input: s.to_string(),
        };
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(bad());
        }
        let mut terms = Vec::new();
        let mut start = 0;
        let bytes = compact.as_bytes();
        for (i, &b) in bytes.iter().enumerate() {
            let after_exp = i > 0 && matches!(bytes[i - 1], b'e' | b'E');
            if (b == b'+' || b == b'-') && i > start && !after_exp {
                terms.push(&compact[start..i]);
                start = i;
            }
        }
        terms.push(&compact[start..]);

        let mut value = NeutroValue::zero();
        for term in terms {
            let (body, is_indet) = match term.strip_suffix(['I', 'i']) {
                Some(b) => (b.strip_suffix('*').unwrap_or(b), true),
                None => (term, false),
            };
            let coeff = match body {
                "" | "+" => Rational::one(),
                "-" => -Rational::one(),
                other => parse_rational(other).map_err(|_| bad())?,
            };
            if is_indet {
                value.indet += coeff;
            } else {
                if body.is_empty() || body == "+" || body == "-" {
                    return Err(bad());
                }
                value.real += coeff;
            }
        }
        Ok(value)
    }
}

/// State of a concept after thresholding.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StateSymbol {
    Off,
    On,
    Ind,
}

impl StateSymbol {
    pub fn value(self) -> NeutroValue {
        match self {
            StateSymbol::Off => NeutroValue::zero(),
            StateSymbol::On => NeutroValue::one(),
            StateSymbol::Ind => NeutroValue::i(),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            StateSymbol::Off => "0",
            StateSymbol::On => "1",
            StateSymbol::Ind => "I",
        }
    }
}

impl fmt::Display for StateSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for StateSymbol {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "0" => Ok(StateSymbol::Off),
            "1" => Ok(StateSymbol::On),
            "I" | "i" => Ok(StateSymbol::Ind),
            other => Err(Error::Parse {
                what: "state symbol",
                input: other.to_string(),
            }),
        }
    }
}

/// Edge of a simple map.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EdgeSymbol {
    Negative,
    Zero,
    Positive,
    Indeterminate,
}

impl EdgeSymbol {
    pub fn value(self) -> NeutroValue {
        match self {
            EdgeSymbol::Negative => NeutroValue::int(-1),
            EdgeSymbol::Zero => NeutroValue::zero(),
            EdgeSymbol::Positive => NeutroValue::int(1),
            EdgeSymbol::Indeterminate => NeutroValue::i(),
        }
    }

    pub fn of(v: &NeutroValue) -> Option<EdgeSymbol> {
        [
            EdgeSymbol::Negative,
            EdgeSymbol::Zero,
            EdgeSymbol::Positive,
            EdgeSymbol::Indeterminate,
        ]
        .into_iter()
        .find(|e| &e.value() == v)
    }
}

impl fmt::Display for EdgeSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}

/// Row-major dense matrix over [`NeutroValue`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NeutroMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<NeutroValue>,
}

impl NeutroMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        NeutroMatrix {
            rows,
            cols,
            entries: vec![NeutroValue::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        NeutroMatrix::from_fn(n, n, |i, j| {
            if i == j {
                NeutroValue::one()
            } else {
                NeutroValue::zero()
            }
        })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> NeutroValue) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        NeutroMatrix { rows, cols, entries }
    }

    pub fn from_rows(rows: Vec<Vec<NeutroValue>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * cols);
        for (r, row) in rows.into_iter().enumerate() {
            if row.len() != cols {
                return Err(Error::RaggedMatrix {
                    row: r,
                    expected: cols,
                    found: row.len(),
                });
            }
            entries.extend(row);
        }
        Ok(NeutroMatrix { rows: n, cols, entries })
    }

    pub fn from_int_rows<R: AsRef<[i64]>>(rows: &[R]) -> Result<Self> {
        NeutroMatrix::from_rows(
            rows.iter()
                .map(|r| r.as_ref().iter().map(|&x| NeutroValue::int(x)).collect())
                .collect(),
        )
    }

    /// Each cell parsed with the value grammar, e.g. `[["0", "I"], ["-1", "1+I"]]`.
    pub fn parse_rows<R: AsRef<[&'static str]>>(rows: &[R]) -> Result<Self> {
        let parsed = rows
            .iter()
            .map(|r| r.as_ref().iter().map(|c| c.parse()).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        NeutroMatrix::from_rows(parsed)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, i: usize, j: usize) -> &NeutroValue {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: NeutroValue) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[NeutroValue] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> &[NeutroValue] {
        &self.entries
    }

    pub fn to_rows(&self) -> Vec<Vec<NeutroValue>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_crisp(&self) -> bool {
        self.entries.iter().all(NeutroValue::is_crisp)
    }

    pub fn map(&self, f: impl Fn(&NeutroValue) -> NeutroValue) -> Self {
        NeutroMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        NeutroMatrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn add(&self, other: &NeutroMatrix) -> Result<Self> {
        if self.shape() != other.shape() {
            return Err(self.mismatch("add", other));
        }
        Ok(NeutroMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn mul(&self, other: &NeutroMatrix) -> Result<Self> {
        if self.cols != other.rows {
            return Err(self.mismatch("mul", other));
        }
        let mut out = NeutroMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.entries[i * other.cols + j] += &(a * b);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Row vector times matrix.
    pub fn vec_mul(&self, v: &[NeutroValue]) -> Result<Vec<NeutroValue>> {
        if v.len() != self.rows {
            return Err(Error::DimensionMismatch {
                op: "vec_mul",
                left_rows: 1,
                left_cols: v.len(),
                right_rows: self.rows,
                right_cols: self.cols,
            });
        }
        let mut out = vec![NeutroValue::zero(); self.cols];
        for (i, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (o, w) in out.iter_mut().zip(self.row(i)) {
                if !w.is_zero() {
                    *o += &(x * w);
                }
            }
        }
        Ok(out)
    }

    fn mismatch(&self, op: &'static str, other: &NeutroMatrix) -> Error {
        Error::DimensionMismatch {
            op,
            left_rows: self.rows,
            left_cols: self.cols,
            right_rows: other.rows,
            right_cols: other.cols,
        }
    }
}

impl Index<(usize, usize)> for NeutroMatrix {
    type Output = NeutroValue;
    fn index(&self, (i, j): (usize, usize)) -> &NeutroValue {
        self.get(i, j)
    }
}

impl fmt::Display for NeutroMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<String> = self.entries.iter().map(ToString::to_string).collect();
        let width = cells.iter().map(String::len).max().unwrap_or(1);
        for i in 0..self.rows {
            let line: Vec<String> = (0..self.cols)
                .map(|j| format!("{:>width$}", cells[i * self.cols + j]))
                .collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}
