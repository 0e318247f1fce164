//! Finite abelian groups, their elements and element sets.
//!
//! Three ambient spaces are supported: the cyclic group `Z_n`, the product
//! `Z_q^d`, and the integer interval `[n]` viewed inside `Z`. The interval is
//! not closed under addition; translates may leave it and callers that care
//! about membership check it themselves.
//!
//! Interval elements are stored 0-based (`0..n`). The set-file codec shifts
//! them to the 1-based `{1, ..., n}` convention on the way out and back.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{parameter, structural, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GroupDescriptor {
    Cyclic { n: u64 },
    Product { q: u64, d: u32 },
    IntegerInterval { n: u64 },
}

impl GroupDescriptor {
    pub fn cyclic(n: u64) -> Result<Self> {
        if n == 0 {
            return Err(parameter("cyclic group order must be at least 1"));
        }
        Ok(GroupDescriptor::Cyclic { n })
    }

    pub fn product(q: u64, d: u32) -> Result<Self> {
        if q < 2 || d < 1 {
            return Err(parameter(format!(
                "product group needs q >= 2 and d >= 1, got q={q}, d={d}"
            )));
        }
        match q.checked_pow(d) {
            Some(order) if order < (1 << 62) => Ok(GroupDescriptor::Product { q, d }),
            _ => Err(parameter(format!("product group {q}^{d} is too large"))),
        }
    }

    pub fn interval(n: u64) -> Result<Self> {
        if n == 0 {
            return Err(parameter("interval bound must be at least 1"));
        }
        Ok(GroupDescriptor::IntegerInterval { n })
    }

    /// Number of elements of the ambient set.
    pub fn order(&self) -> u64 {
        match *self {
            GroupDescriptor::Cyclic { n } | GroupDescriptor::IntegerInterval { n } => n,
            GroupDescriptor::Product { q, d } => q.pow(d),
        }
    }

    /// Coordinate count of an element.
    pub fn dim(&self) -> usize {
        match *self {
            GroupDescriptor::Product { d, .. } => d as usize,
            _ => 1,
        }
    }

    /// True for the genuine groups (everything except the integer interval).
    pub fn is_group(&self) -> bool {
        !matches!(self, GroupDescriptor::IntegerInterval { .. })
    }

    pub fn identity(&self) -> Elem {
        Elem(vec![0; self.dim()])
    }

    /// Checks that `e` is a member of the ambient set.
    pub fn validate(&self, e: &Elem) -> Result<()> {
        if e.0.len() != self.dim() {
            return Err(structural(format!(
                "element {e} has {} coordinates, {self} needs {}",
                e.0.len(),
                self.dim()
            )));
        }
        let bound = match *self {
            GroupDescriptor::Cyclic { n } | GroupDescriptor::IntegerInterval { n } => n,
            GroupDescriptor::Product { q, .. } => q,
        };
        if let Some(c) = e.0.iter().find(|&&c| c >= bound) {
            return Err(structural(format!("coordinate {c} of {e} out of range for {self}")));
        }
        Ok(())
    }

    fn check_dim(&self, a: &Elem, b: &Elem) -> Result<()> {
        if a.0.len() != self.dim() || b.0.len() != self.dim() {
            return Err(structural(format!("dimension mismatch: {a} and {b} in {self}")));
        }
        Ok(())
    }

    /// The group operation. Interval addition is plain integer addition.
    pub fn add(&self, a: &Elem, b: &Elem) -> Result<Elem> {
        self.check_dim(a, b)?;
        let coords = match *self {
            GroupDescriptor::Cyclic { n } => vec![add_mod(a.0[0], b.0[0], n)],
            GroupDescriptor::Product { q, .. } => a.0.iter().zip(&b.0).map(|(&x, &y)| add_mod(x, y, q)).collect(),
            GroupDescriptor::IntegerInterval { .. } => {
                let s = a.0[0]
                    .checked_add(b.0[0])
                    .ok_or_else(|| structural("integer overflow in interval addition"))?;
                vec![s]
            }
        };
        Ok(Elem(coords))
    }

    /// Additive inverse; only defined for genuine groups.
    pub fn neg(&self, a: &Elem) -> Result<Elem> {
        let coords = match *self {
            GroupDescriptor::Cyclic { n } => vec![(n - a.0[0] % n) % n],
            GroupDescriptor::Product { q, .. } => a.0.iter().map(|&x| (q - x % q) % q).collect(),
            GroupDescriptor::IntegerInterval { .. } => {
                return Err(structural("negation is not defined on the integer interval"))
            }
        };
        Ok(Elem(coords))
    }

    /// Mixed-radix integer key of an element; order-compatible with `Elem`'s order.
    pub fn encode(&self, e: &Elem) -> u64 {
        match *self {
            GroupDescriptor::Product { q, .. } => e.0.iter().fold(0, |acc, &c| acc * q + c),
            _ => e.0[0],
        }
    }

    pub fn decode(&self, mut key: u64) -> Elem {
        match *self {
            GroupDescriptor::Product { q, d } => {
                let mut coords = vec![0; d as usize];
                for c in coords.iter_mut().rev() {
                    *c = key % q;
                    key /= q;
                }
                Elem(coords)
            }
            _ => Elem(vec![key]),
        }
    }

    /// All elements of a genuine group, in canonical (key) order.
    pub fn elements(&self) -> impl Iterator<Item = Elem> + '_ {
        (0..self.order()).map(move |k| self.decode(k))
    }

    pub(crate) fn key_ops(&self) -> KeyOps {
        match *self {
            GroupDescriptor::Cyclic { n } => KeyOps::Cyclic(n),
            GroupDescriptor::Product { q, d } => KeyOps::Product { q, d },
            GroupDescriptor::IntegerInterval { .. } => KeyOps::Integer,
        }
    }
}

fn add_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 + b as u128) % m as u128) as u64
}

impl fmt::Display for GroupDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            GroupDescriptor::Cyclic { n } => write!(f, "cyclic:{n}"),
            GroupDescriptor::Product { q, d } => write!(f, "product:{q}^{d}"),
            GroupDescriptor::IntegerInterval { n } => write!(f, "interval:{n}"),
        }
    }
}

impl FromStr for GroupDescriptor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (kind, rest) = s
            .trim()
            .split_once(':')
            .ok_or_else(|| parameter(format!("malformed group descriptor {s:?}")))?;
        let num = |t: &str| -> Result<u64> {
            t.trim()
                .parse::<u64>()
                .map_err(|_| parameter(format!("malformed number {t:?} in group descriptor")))
        };
        match kind.trim() {
            "cyclic" => GroupDescriptor::cyclic(num(rest)?),
            "interval" => GroupDescriptor::interval(num(rest)?),
            "product" => {
                let (q, d) = rest
                    .split_once('^')
                    .ok_or_else(|| parameter(format!("product descriptor needs q^d, got {rest:?}")))?;
                let d = u32::try_from(num(d)?).map_err(|_| parameter("product dimension too large"))?;
                GroupDescriptor::product(num(q)?, d)
            }
            other => Err(parameter(format!("unknown group kind {other:?}"))),
        }
    }
}

impl Serialize for GroupDescriptor {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// A group element as a vector of residues (one coordinate for `Z_n` and `Z`).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Elem(pub Vec<u64>);

impl Elem {
    pub fn scalar(v: u64) -> Self {
        Elem(vec![v])
    }

    pub fn coords(&self) -> &[u64] {
        &self.0
    }
}

impl From<u64> for Elem {
    fn from(v: u64) -> Self {
        Elem::scalar(v)
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let [v] = self.0.as_slice() {
            return write!(f, "{v}");
        }
        f.write_str("(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

impl Serialize for Elem {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self.0.as_slice() {
            [v] => s.serialize_u64(*v),
            coords => coords.serialize(s),
        }
    }
}

/// A sorted, duplicate-free set of elements of one ambient group.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GSet {
    group: GroupDescriptor,
    elems: Vec<Elem>,
}

impl GSet {
    /// Validates, sorts and deduplicates.
    pub fn new(group: GroupDescriptor, mut elems: Vec<Elem>) -> Result<Self> {
        for e in &elems {
            group.validate(e)?;
        }
        elems.sort_unstable();
        elems.dedup();
        Ok(GSet { group, elems })
    }

    /// Builds an interval set from 0-based values.
    pub fn from_values(group: GroupDescriptor, values: impl IntoIterator<Item = u64>) -> Result<Self> {
        GSet::new(group, values.into_iter().map(Elem::scalar).collect())
    }

    /// Builds a set from mixed-radix keys.
    pub fn from_keys(group: GroupDescriptor, keys: impl IntoIterator<Item = u64>) -> Result<Self> {
        GSet::new(group, keys.into_iter().map(|k| group.decode(k)).collect())
    }

    /// Skips validation; `elems` must already be sorted, unique and valid.
    pub(crate) fn from_sorted_unchecked(group: GroupDescriptor, elems: Vec<Elem>) -> Self {
        debug_assert!(elems.windows(2).all(|w| w[0] < w[1]));
        GSet { group, elems }
    }

    pub fn group(&self) -> GroupDescriptor {
        self.group
    }

    pub fn elems(&self) -> &[Elem] {
        &self.elems
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn contains(&self, e: &Elem) -> bool {
        self.elems.binary_search(e).is_ok()
    }

    pub fn keys(&self) -> Vec<u64> {
        self.elems.iter().map(|e| self.group.encode(e)).collect()
    }

    /// Scalar values (interval and cyclic sets).
    pub fn values(&self) -> Vec<u64> {
        self.elems.iter().map(|e| e.0[0]).collect()
    }
}

impl fmt::Display for GSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, e) in self.elems.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str("}")
    }
}

/// `X + k`. For the interval the result lives in `Z` and may leave `[n]`; its
/// descriptor is widened to hold it.
pub fn translate(group: GroupDescriptor, x: &GSet, k: &Elem) -> Result<GSet> {
    let elems = x.elems.iter().map(|e| group.add(e, k)).collect::<Result<Vec<_>>>()?;
    let target = match group {
        GroupDescriptor::IntegerInterval { n } => {
            let top = elems.iter().map(|e| e.0[0] + 1).max().unwrap_or(0);
            GroupDescriptor::IntegerInterval { n: n.max(top) }
        }
        g => g,
    };
    GSet::new(target, elems)
}

/// Arithmetic on mixed-radix keys, used by the enumeration hot loops.
#[derive(Debug, Clone, Copy)]
pub(crate) enum KeyOps {
    Cyclic(u64),
    Product { q: u64, d: u32 },
    Integer,
}

impl KeyOps {
    #[inline]
    pub(crate) fn add(self, a: u64, b: u64) -> u64 {
        match self {
            KeyOps::Cyclic(n) => add_mod(a, b, n),
            KeyOps::Integer => a + b,
            KeyOps::Product { q, d } => {
                let (mut a, mut b, mut out, mut place) = (a, b, 0, 1);
                for _ in 0..d {
                    out += ((a % q + b % q) % q) * place;
                    a /= q;
                    b /= q;
                    place *= q;
                }
                out
            }
        }
    }

    /// `a - b`; for `Integer` the caller guarantees `a >= b`.
    #[inline]
    pub(crate) fn sub(self, a: u64, b: u64) -> u64 {
        match self {
            KeyOps::Cyclic(n) => (a % n + n - b % n) % n,
            KeyOps::Integer => a - b,
            KeyOps::Product { q, d } => {
                let (mut a, mut b, mut out, mut place) = (a, b, 0, 1);
                for _ in 0..d {
                    out += ((a % q + q - b % q) % q) * place;
                    a /= q;
                    b /= q;
                    place *= q;
                }
                out
            }
        }
    }
}
