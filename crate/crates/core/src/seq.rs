//! Real sequences with a finite prefix and an eventually periodic tail.
//!
//! A [`FinTailSeq`] stores the first `k` entries explicitly and describes the
//! remainder by a [`Tail`]: all zeros, a constant `v, v, v, ...`, or an
//! alternating `v, -v, v, ...` that starts right after the prefix. This is
//! enough to pair finitely supported elements of `l1` or `c0` exactly with
//! `(1, 1, 1, ...)` and `(-1, 1, -1, ...)`, and with each other.

use std::fmt;
use std::str::FromStr;

use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::spaces::NormKind;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Tail<T> {
    Zero,
    Const(T),
    Alt(T),
}

impl<T: Scalar> Tail<T> {
    pub fn magnitude(&self) -> T {
        match *self {
            Tail::Zero => T::zero(),
            Tail::Const(v) | Tail::Alt(v) => v.abs(),
        }
    }

    fn normalized(self) -> Self {
        match self {
            Tail::Const(v) | Tail::Alt(v) if v == T::zero() => Tail::Zero,
            t => t,
        }
    }

    /// Value of the `k`-th tail entry (0-based, counted from the end of the prefix).
    fn at(&self, k: usize) -> T {
        match *self {
            Tail::Zero => T::zero(),
            Tail::Const(v) => v,
            Tail::Alt(v) => {
                if k.is_multiple_of(2) {
                    v
                } else {
                    -v
                }
            }
        }
    }

    fn scale(self, a: T) -> Self {
        match self {
            Tail::Zero => Tail::Zero,
            Tail::Const(v) => Tail::Const(v * a),
            Tail::Alt(v) => Tail::Alt(v * a),
        }
        .normalized()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FinTailSeq<T> {
    prefix: Vec<T>,
    tail: Tail<T>,
}

impl<T: Scalar> FinTailSeq<T> {
    pub fn new(prefix: Vec<T>, tail: Tail<T>) -> Self {
        Self {
            prefix,
            tail: tail.normalized(),
        }
    }

    /// Finitely supported sequence (zero tail).
    pub fn finite(prefix: Vec<T>) -> Self {
        Self::new(prefix, Tail::Zero)
    }

    pub fn zeros(len: usize) -> Self {
        Self::finite(vec![T::zero(); len])
    }

    /// The unit sequence with a one at 0-based position `index`.
    pub fn unit(index: usize) -> Self {
        let mut prefix = vec![T::zero(); index + 1];
        prefix[index] = T::one();
        Self::finite(prefix)
    }

    /// `(1, 1, 1, ...)`.
    pub fn ones() -> Self {
        Self::new(Vec::new(), Tail::Const(T::one()))
    }

    /// `(-1, 1, -1, 1, ...)`.
    pub fn alternating() -> Self {
        Self::new(Vec::new(), Tail::Alt(-T::one()))
    }

    pub fn prefix(&self) -> &[T] {
        &self.prefix
    }

    pub fn tail(&self) -> Tail<T> {
        self.tail
    }

    pub fn prefix_len(&self) -> usize {
        self.prefix.len()
    }

    pub fn is_finitely_supported(&self) -> bool {
        self.tail == Tail::Zero
    }

    pub fn get(&self, i: usize) -> T {
        match self.prefix.get(i) {
            Some(&v) => v,
            None => self.tail.at(i - self.prefix.len()),
        }
    }

    /// Same sequence with the prefix materialized to at least `len` entries.
    pub fn extended(&self, len: usize) -> Self {
        if len <= self.prefix.len() {
            return self.clone();
        }
        let extra = len - self.prefix.len();
        let mut prefix = self.prefix.clone();
        prefix.extend((0..extra).map(|k| self.tail.at(k)));
        let tail = match self.tail {
            Tail::Alt(v) if extra % 2 == 1 => Tail::Alt(-v),
            t => t,
        };
        Self { prefix, tail }
    }

    /// Drops trailing prefix entries that coincide with the tail pattern.
    pub fn trimmed(&self) -> Self {
        let mut out = self.clone();
        while let Some(&last) = out.prefix.last() {
            let (matches, next_tail) = match out.tail {
                Tail::Zero => (last == T::zero(), Tail::Zero),
                Tail::Const(v) => (last == v, Tail::Const(v)),
                Tail::Alt(v) => (last == -v, Tail::Alt(-v)),
            };
            if !matches {
                break;
            }
            out.prefix.pop();
            out.tail = next_tail;
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(-T::one())
    }

    pub fn scale(&self, a: T) -> Self {
        Self {
            prefix: self.prefix.iter().map(|&v| v * a).collect(),
            tail: self.tail.scale(a),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let len = self.prefix.len().max(other.prefix.len());
        let a = self.extended(len);
        let b = other.extended(len);
        let tail = match (a.tail, b.tail) {
            (Tail::Zero, t) | (t, Tail::Zero) => t,
            (Tail::Const(u), Tail::Const(v)) => Tail::Const(u + v),
            (Tail::Alt(u), Tail::Alt(v)) => Tail::Alt(u + v),
            _ => {
                return Err(Error::UnrepresentableTail(
                    "sum of constant and alternating tails",
                ))
            }
        };
        let prefix = a
            .prefix
            .iter()
            .zip(&b.prefix)
            .map(|(&u, &v)| u + v)
            .collect();
        Ok(Self::new(prefix, tail))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    /// Exact bilinear pairing `sum_i a_i b_i`; at least one side must be finitely supported.
    pub fn pair(&self, other: &Self) -> Result<T> {
        let (finite, rest) = if self.tail == Tail::Zero {
            (self, other)
        } else if other.tail == Tail::Zero {
            (other, self)
        } else {
            return Err(Error::NonSummable);
        };
        Ok(finite
            .prefix
            .iter()
            .enumerate()
            .map(|(i, &v)| v * rest.get(i))
            .sum())
    }

    pub fn norm(&self, kind: NormKind) -> Result<T> {
        match kind {
            NormKind::LInf => Ok(self
                .prefix
                .iter()
                .fold(self.tail.magnitude(), |m, v| m.max(v.abs()))),
            NormKind::L1 => {
                if self.tail != Tail::Zero {
                    return Err(Error::InfiniteNorm("l1 norm of a non-vanishing tail"));
                }
                Ok(self.prefix.iter().map(|v| v.abs()).sum())
            }
            NormKind::L2 => {
                if self.tail != Tail::Zero {
                    return Err(Error::InfiniteNorm("l2 norm of a non-vanishing tail"));
                }
                Ok(self.prefix.iter().map(|&v| v * v).sum::<T>().sqrt())
            }
        }
    }

    /// Sum of all entries; defined for finitely supported sequences.
    pub fn total(&self) -> Result<T> {
        if self.tail != Tail::Zero {
            return Err(Error::NotFinitelySupported);
        }
        Ok(self.prefix.iter().copied().sum())
    }

    /// Tail sums `tau_j = sum_{i >= j} x_i` for `j = 0..=len`; the last entry is zero.
    pub fn tail_sums(&self) -> Result<Vec<T>> {
        if self.tail != Tail::Zero {
            return Err(Error::NotFinitelySupported);
        }
        let n = self.prefix.len();
        let mut tau = vec![T::zero(); n + 1];
        for j in (0..n).rev() {
            tau[j] = tau[j + 1] + self.prefix[j];
        }
        Ok(tau)
    }

    /// Index of the first entry where the two sequences differ by more than `tol`
    /// (tails included), or `None` when they agree everywhere.
    pub fn first_difference(&self, other: &Self, tol: T) -> Result<Option<usize>> {
        let diff = self.sub(other)?;
        if let Some(i) = diff.prefix.iter().position(|v| v.abs() > tol) {
            return Ok(Some(i));
        }
        if diff.tail.magnitude() > tol {
            return Ok(Some(diff.prefix.len()));
        }
        Ok(None)
    }
}

impl<T: Scalar> fmt::Display for FinTailSeq<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "prefix=[")?;
        for (i, v) in self.prefix.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "];tail=")?;
        match self.tail {
            Tail::Zero => write!(f, "zero"),
            Tail::Const(v) => write!(f, "const:{v}"),
            Tail::Alt(v) => write!(f, "alt:{v}"),
        }
    }
}

fn parse_num<T: Scalar>(s: &str) -> Result<T> {
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("invalid number `{}`", s.trim())))?;
    T::from_f64(v).ok_or_else(|| Error::Parse(format!("number `{v}` not representable")))
}

impl<T: Scalar> FromStr for FinTailSeq<T> {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (prefix_part, tail_part) = s
            .split_once(';')
            .ok_or_else(|| Error::Parse(format!("expected `prefix=[..];tail=..`, got `{s}`")))?;
        let inner = prefix_part
            .trim()
            .strip_prefix("prefix=[")
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| Error::Parse(format!("malformed prefix `{prefix_part}`")))?;
        let prefix = if inner.trim().is_empty() {
            Vec::new()
        } else {
            inner
                .split(',')
                .map(parse_num)
                .collect::<Result<Vec<T>>>()?
        };
        let tail_spec = tail_part
            .trim()
            .strip_prefix("tail=")
            .ok_or_else(|| Error::Parse(format!("malformed tail `{tail_part}`")))?;
        let tail = match tail_spec.split_once(':') {
            None if tail_spec == "zero" => Tail::Zero,
            Some(("const", v)) => Tail::Const(parse_num(v)?),
            Some(("alt", v)) => Tail::Alt(parse_num(v)?),
            _ => return Err(Error::Parse(format!("unknown tail `{tail_spec}`"))),
        };
        Ok(Self::new(prefix, tail))
    }
}

impl<T: Scalar> Serialize for FinTailSeq<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        if self.tail == Tail::Zero {
            serializer.collect_seq(self.prefix.iter().map(|v| v.as_f64()))
        } else {
            serializer.collect_str(self)
        }
    }
}

impl<'de, T: Scalar> Deserialize<'de> for FinTailSeq<T> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct SeqVisitor<T>(std::marker::PhantomData<T>);

        impl<'de, T: Scalar> Visitor<'de> for SeqVisitor<T> {
            type Value = FinTailSeq<T>;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an array of numbers or a `prefix=[..];tail=..` string")
            }

            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Self::Value, E> {
                v.parse().map_err(E::custom)
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<Self::Value, E> {
                Ok(FinTailSeq::finite(vec![T::lit(v)]))
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Self::Value, E> {
                self.visit_f64(v as f64)
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Self::Value, E> {
                self.visit_f64(v as f64)
            }

            fn visit_seq<A: de::SeqAccess<'de>>(
                self,
                mut seq: A,
            ) -> std::result::Result<Self::Value, A::Error> {
                let mut prefix = Vec::new();
                while let Some(v) = seq.next_element::<f64>()? {
                    prefix.push(T::lit(v));
                }
                Ok(FinTailSeq::finite(prefix))
            }
        }

        deserializer.deserialize_any(SeqVisitor(std::marker::PhantomData))
    }
}
