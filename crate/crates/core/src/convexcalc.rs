//! Fenchel calculus on rectangular lattices: conjugates, biconjugate envelopes,
//! the `@`-transform, shifts, partial episums and coincidence sets.
//!
//! A lattice over `E x E*` has an even number of axes; the first half holds
//! the `x` coordinates and the second half the `x*` coordinates. All suprema
//! are exhaustive over the nodes, and ties go to the node with the smallest
//! row-major index (equivalently the lexicographically smallest multi-index).

use std::fmt::Write as _;

use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::dot;
use crate::scalar::Scalar;
use crate::spaces::PairedPoint;

const MAX_DIM: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub min: f64,
    pub max: f64,
    pub step: f64,
}

impl Axis {
    pub fn new(min: f64, max: f64, step: f64) -> Result<Self> {
        let axis = Self { min, max, step };
        axis.validate()?;
        Ok(axis)
    }

    /// `count` equally spaced nodes on `[-radius, radius]`.
    pub fn symmetric(radius: f64, count: usize) -> Result<Self> {
        if count < 2 {
            return Err(Error::InvalidGrid(
                "symmetric axis needs at least two nodes".into(),
            ));
        }
        Self::new(-radius, radius, 2.0 * radius / (count - 1) as f64)
    }

    fn validate(&self) -> Result<()> {
        if !(self.min.is_finite() && self.max.is_finite() && self.step.is_finite()) {
            return Err(Error::InvalidGrid("axis bounds must be finite".into()));
        }
        if self.step <= 0.0 {
            return Err(Error::InvalidGrid(format!(
                "step {} must be positive",
                self.step
            )));
        }
        if self.max < self.min {
            return Err(Error::InvalidGrid(format!(
                "max {} below min {}",
                self.max, self.min
            )));
        }
        let span = (self.max - self.min) / self.step;
        if (span - span.round()).abs() > 1e-9 * span.max(1.0) {
            return Err(Error::InvalidGrid(format!(
                "step {} does not divide [{}, {}]",
                self.step, self.min, self.max
            )));
        }
        Ok(())
    }

    pub fn count(&self) -> usize {
        ((self.max - self.min) / self.step).round() as usize + 1
    }

    pub fn coord(&self, i: usize) -> f64 {
        self.min + i as f64 * self.step
    }

    /// Index of the node equal to `v` up to a tiny fraction of the step.
    pub fn index_of(&self, v: f64) -> Option<usize> {
        let t = (v - self.min) / self.step;
        let r = t.round();
        if (t - r).abs() <= 1e-9 && r >= 0.0 && (r as usize) < self.count() {
            Some(r as usize)
        } else {
            None
        }
    }
}

/// Rectangular lattice of dimension 1 to 4, enumerated in row-major order
/// (last axis fastest).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Lattice {
    axes: Vec<Axis>,
}

impl Lattice {
    pub fn new(axes: Vec<Axis>) -> Result<Self> {
        if axes.is_empty() || axes.len() > MAX_DIM {
            return Err(Error::InvalidGrid(format!(
                "lattice dimension {} outside 1..={MAX_DIM}",
                axes.len()
            )));
        }
        for a in &axes {
            a.validate()?;
        }
        Ok(Self { axes })
    }

    /// The same axis repeated `dim` times.
    pub fn cube(axis: Axis, dim: usize) -> Result<Self> {
        Self::new(vec![axis; dim])
    }

    pub fn axes(&self) -> &[Axis] {
        &self.axes
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    pub fn shape(&self) -> Vec<usize> {
        self.axes.iter().map(Axis::count).collect()
    }

    pub fn size(&self) -> usize {
        self.axes.iter().map(Axis::count).product()
    }

    pub fn max_step(&self) -> f64 {
        self.axes.iter().map(|a| a.step).fold(0.0, f64::max)
    }

    pub fn multi_index(&self, mut flat: usize) -> Vec<usize> {
        let mut idx = vec![0; self.dim()];
        for (k, a) in self.axes.iter().enumerate().rev() {
            let n = a.count();
            idx[k] = flat % n;
            flat /= n;
        }
        idx
    }

    pub fn flat_index(&self, idx: &[usize]) -> usize {
        self.axes
            .iter()
            .zip(idx)
            .fold(0, |acc, (a, &i)| acc * a.count() + i)
    }

    pub fn node<T: Scalar>(&self, flat: usize) -> Vec<T> {
        self.multi_index(flat)
            .iter()
            .zip(&self.axes)
            .map(|(&i, a)| T::lit(a.coord(i)))
            .collect()
    }

    /// Flat index of the node at `coords`, if `coords` is a node.
    pub fn locate<T: Scalar>(&self, coords: &[T]) -> Option<usize> {
        if coords.len() != self.dim() {
            return None;
        }
        let idx: Option<Vec<usize>> = self
            .axes
            .iter()
            .zip(coords)
            .map(|(a, v)| a.index_of(v.as_f64()))
            .collect();
        idx.map(|i| self.flat_index(&i))
    }

    /// All node coordinates, `dim` consecutive entries per node.
    fn all_coords<T: Scalar>(&self) -> Vec<T> {
        let mut out = Vec::with_capacity(self.size() * self.dim());
        for flat in 0..self.size() {
            out.extend(self.node::<T>(flat));
        }
        out
    }

    pub fn is_paired(&self) -> bool {
        self.dim().is_multiple_of(2)
    }

    fn require_paired(&self) -> Result<usize> {
        if self.is_paired() {
            Ok(self.dim() / 2)
        } else {
            Err(Error::InvalidGrid(format!(
                "a lattice over E x E* needs an even dimension, got {}",
                self.dim()
            )))
        }
    }
}

/// Extended-real function on a lattice: finite values or `+inf`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction<T> {
    lattice: Lattice,
    values: Vec<T>,
}

impl<T: Scalar> GridFunction<T> {
    pub fn new(lattice: Lattice, values: Vec<T>) -> Result<Self> {
        if values.len() != lattice.size() {
            return Err(Error::DimensionMismatch {
                expected: lattice.size(),
                found: values.len(),
            });
        }
        if let Some(i) = values.iter().position(|v| v.is_nan()) {
            return Err(Error::InvalidArgument(format!("NaN value at node {i}")));
        }
        if let Some(i) = values.iter().position(|v| *v == T::neg_infinity()) {
            return Err(Error::NegativeInfinity(i));
        }
        if !values.iter().any(|v| v.is_finite()) {
            return Err(Error::Improper);
        }
        Ok(Self { lattice, values })
    }

    pub fn from_fn(lattice: Lattice, mut f: impl FnMut(&[T]) -> T) -> Result<Self> {
        let values = (0..lattice.size())
            .map(|i| f(&lattice.node::<T>(i)))
            .collect();
        Self::new(lattice, values)
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn value(&self, flat: usize) -> T {
        self.values[flat]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn node(&self, flat: usize) -> Vec<T> {
        self.lattice.node(flat)
    }

    /// Value at the node `coords`, if it is one.
    pub fn at(&self, coords: &[T]) -> Option<T> {
        self.lattice.locate(coords).map(|i| self.values[i])
    }

    /// Smallest value and the first node attaining it.
    pub fn argmin(&self) -> (usize, T) {
        let mut best = (0, T::infinity());
        for (i, &v) in self.values.iter().enumerate() {
            if v < best.1 {
                best = (i, v);
            }
        }
        best
    }

    /// Multilinear interpolation; `+inf` outside the lattice or whenever a
    /// corner with nonzero weight is infinite.
    pub fn interpolate(&self, coords: &[T]) -> T {
        let d = self.lattice.dim();
        if coords.len() != d {
            return T::infinity();
        }
        let mut base = vec![0usize; d];
        let mut frac = vec![T::zero(); d];
        for (k, (a, &c)) in self.lattice.axes.iter().zip(coords).enumerate() {
            let n = a.count();
            let t = (c.as_f64() - a.min) / a.step;
            if t < -1e-9 || t > (n - 1) as f64 + 1e-9 {
                return T::infinity();
            }
            let r = t.round();
            if (t - r).abs() <= 1e-9 {
                base[k] = r as usize;
                frac[k] = T::zero();
            } else {
                let fl = t.floor() as usize;
                base[k] = fl.min(n - 1);
                frac[k] = T::lit(t - fl as f64);
            }
        }
        let mut total = T::zero();
        for corner in 0..(1usize << d) {
            let mut w = T::one();
            let mut idx = base.clone();
            for k in 0..d {
                if corner >> k & 1 == 1 {
                    w = w * frac[k];
                    idx[k] += 1;
                } else {
                    w = w * (T::one() - frac[k]);
                }
            }
            if w == T::zero() {
                continue;
            }
            let v = self.values[self.lattice.flat_index(&idx)];
            if !v.is_finite() {
                return T::infinity();
            }
            total = total + w * v;
        }
        total
    }

    /// Largest difference quotient between neighbouring finite nodes.
    pub fn lipschitz_estimate(&self) -> T {
        let mut best = T::zero();
        let shape = self.lattice.shape();
        for flat in 0..self.len() {
            let idx = self.lattice.multi_index(flat);
            for k in 0..shape.len() {
                if idx[k] + 1 >= shape[k] {
                    continue;
                }
                let mut next = idx.clone();
                next[k] += 1;
                let (u, v) = (
                    self.values[flat],
                    self.values[self.lattice.flat_index(&next)],
                );
                if u.is_finite() && v.is_finite() {
                    best = best.max((v - u).abs() / T::lit(self.lattice.axes[k].step));
                }
            }
        }
        best
    }

    /// CSV with one row per node: coordinates then value, `inf` for `+inf`.
    pub fn to_csv(&self) -> String {
        let d = self.lattice.dim();
        let mut out = String::new();
        let header: Vec<String> = (1..=d).map(|k| format!("x{k}")).collect();
        let _ = writeln!(out, "{},value", header.join(","));
        for flat in 0..self.len() {
            let coords: Vec<String> = self
                .node(flat)
                .iter()
                .map(|c| format!("{}", c.as_f64()))
                .collect();
            let _ = writeln!(
                out,
                "{},{}",
                coords.join(","),
                ExtReal(self.values[flat].as_f64())
            );
        }
        out
    }
}

/// Extended real serialized as a number or the string `inf`.
#[derive(Debug, Clone, Copy, PartialEq)]
struct ExtReal(f64);

impl std::fmt::Display for ExtReal {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.0 == f64::INFINITY {
            f.write_str("inf")
        } else if self.0 == f64::NEG_INFINITY {
            f.write_str("-inf")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

impl Serialize for ExtReal {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.0.is_finite() {
            s.serialize_f64(self.0)
        } else {
            s.serialize_str(&self.to_string())
        }
    }
}

impl<'de> Deserialize<'de> for ExtReal {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = ExtReal;
            fn expecting(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
                f.write_str("a number or \"inf\"")
            }
            fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<ExtReal, E> {
                Ok(ExtReal(v))
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<ExtReal, E> {
                Ok(ExtReal(v as f64))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<ExtReal, E> {
                Ok(ExtReal(v as f64))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<ExtReal, E> {
                match v.trim().to_ascii_lowercase().as_str() {
                    "inf" | "+inf" | "infinity" | "+infinity" => Ok(ExtReal(f64::INFINITY)),
                    "-inf" | "-infinity" => Ok(ExtReal(f64::NEG_INFINITY)),
                    other => Err(E::custom(format!("unrecognized value {other:?}"))),
                }
            }
        }
        d.deserialize_any(V)
    }
}

#[derive(Serialize, Deserialize)]
struct GridFunctionDoc {
    axes: Vec<Axis>,
    values: Vec<ExtReal>,
}

impl<T: Scalar> Serialize for GridFunction<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GridFunctionDoc {
            axes: self.lattice.axes.clone(),
            values: self.values.iter().map(|v| ExtReal(v.as_f64())).collect(),
        }
        .serialize(s)
    }
}

impl<'de, T: Scalar> Deserialize<'de> for GridFunction<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let doc = GridFunctionDoc::deserialize(d)?;
        let lattice = Lattice::new(doc.axes).map_err(de::Error::custom)?;
        let values = doc.values.into_iter().map(|v| T::lit(v.0)).collect();
        GridFunction::new(lattice, values).map_err(de::Error::custom)
    }
}

/// `sup_i [<p_i, y> - v_i]` over finite nodes, first maximizer on ties.
fn sup_affine<T: Scalar>(coords: &[T], values: &[T], d: usize, y: &[T]) -> (T, usize) {
    let mut best = T::neg_infinity();
    let mut arg = 0;
    for (i, &v) in values.iter().enumerate() {
        if !v.is_finite() {
            continue;
        }
        let val = dot(&coords[i * d..(i + 1) * d], y) - v;
        if val > best {
            best = val;
            arg = i;
        }
    }
    (best, arg)
}

fn same_dim(a: &Lattice, b: &Lattice) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::GridMismatch(format!(
            "dimensions {} and {} differ",
            a.dim(),
            b.dim()
        )));
    }
    Ok(())
}

/// `f*(y) = max_x [<x, y> - f(x)]` for every node `y` of `dual`.
pub fn conjugate<T: Scalar>(f: &GridFunction<T>, dual: &Lattice) -> Result<GridFunction<T>> {
    same_dim(&f.lattice, dual)?;
    let d = dual.dim();
    let coords = f.lattice.all_coords::<T>();
    let values = (0..dual.size())
        .map(|j| sup_affine(&coords, &f.values, d, &dual.node::<T>(j)).0)
        .collect();
    GridFunction::new(dual.clone(), values)
}

/// Dual lattice wide enough to hold every neighbour difference quotient of
/// `h`, with half the primal step (capped at 16385 nodes on a line and 129
/// per axis otherwise).
pub fn slope_lattice<T: Scalar>(h: &GridFunction<T>) -> Result<Lattice> {
    let lat = &h.lattice;
    let shape = lat.shape();
    let mut lo = vec![f64::INFINITY; lat.dim()];
    let mut hi = vec![f64::NEG_INFINITY; lat.dim()];
    for flat in 0..h.len() {
        let idx = lat.multi_index(flat);
        for k in 0..lat.dim() {
            if idx[k] + 1 >= shape[k] {
                continue;
            }
            let mut next = idx.clone();
            next[k] += 1;
            let (u, v) = (h.values[flat], h.values[lat.flat_index(&next)]);
            if u.is_finite() && v.is_finite() {
                let s = (v - u).as_f64() / lat.axes[k].step;
                lo[k] = lo[k].min(s);
                hi[k] = hi[k].max(s);
            }
        }
    }
    let cap = if lat.dim() == 1 { 16385 } else { 129 };
    let axes = (0..lat.dim())
        .map(|k| {
            let (a, b) = if lo[k] <= hi[k] {
                (lo[k], hi[k])
            } else {
                (0.0, 0.0)
            };
            let target = lat.axes[k].step / 2.0;
            let count = (((b - a) / target).ceil() as usize + 1).clamp(1, cap);
            let step = if count > 1 {
                (b - a) / (count - 1) as f64
            } else {
                1.0
            };
            Axis::new(a, a + step * (count - 1) as f64, step)
        })
        .collect::<Result<Vec<_>>>()?;
    Lattice::new(axes)
}

/// `h**` restricted to the primal lattice, conjugating through `dual`.
///
/// For any dual lattice the result satisfies `f <= h` and `f* = h*` on
/// `dual` exactly (up to rounding).
pub fn biconjugate_envelope_on<T: Scalar>(
    h: &GridFunction<T>,
    dual: &Lattice,
) -> Result<GridFunction<T>> {
    let hstar = conjugate(h, dual)?;
    conjugate(&hstar, &h.lattice)
}

/// `h**` with the dual lattice chosen by [`slope_lattice`].
pub fn biconjugate_envelope<T: Scalar>(h: &GridFunction<T>) -> Result<GridFunction<T>> {
    let dual = slope_lattice(h)?;
    biconjugate_envelope_on(h, &dual)
}

/// Swaps the `x` and `x*` halves of a paired coordinate vector, i.e. applies `L`.
fn swap_halves<T: Scalar>(v: &[T]) -> Vec<T> {
    let n = v.len() / 2;
    let mut out = v[n..].to_vec();
    out.extend_from_slice(&v[..n]);
    out
}

/// `q_L` of a paired coordinate vector.
pub fn q_coords<T: Scalar>(v: &[T]) -> T {
    let n = v.len() / 2;
    dot(&v[..n], &v[n..])
}

/// `f^@(a) = max_b [<b, L a> - f(b)]` on the lattice of `f`.
pub fn at_transform<T: Scalar>(f: &GridFunction<T>) -> Result<GridFunction<T>> {
    f.lattice.require_paired()?;
    let d = f.lattice.dim();
    let coords = f.lattice.all_coords::<T>();
    let values = (0..f.len())
        .map(|j| {
            let la = swap_halves(&coords[j * d..(j + 1) * d]);
            sup_affine(&coords, &f.values, d, &la).0
        })
        .collect();
    GridFunction::new(f.lattice.clone(), values)
}

/// `f_c(b) = f(b + c) - <b, L c> - q_L(c)`, interpolating `f` off the nodes.
pub fn shift_by<T: Scalar>(f: &GridFunction<T>, c: &PairedPoint<T>) -> Result<GridFunction<T>> {
    let n = f.lattice.require_paired()?;
    let cc = c.coords();
    if cc.len() != 2 * n {
        return Err(Error::DimensionMismatch {
            expected: 2 * n,
            found: cc.len(),
        });
    }
    let lc = swap_halves(&cc);
    let qc = q_coords(&cc);
    GridFunction::from_fn(f.lattice.clone(), |b| {
        let moved: Vec<T> = b.iter().zip(&cc).map(|(&u, &v)| u + v).collect();
        let v = f.interpolate(&moved);
        if v.is_finite() {
            v - dot(b, &lc) - qc
        } else {
            v
        }
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EpisumAxis {
    /// Inf-convolution in the `x` block.
    First,
    /// Inf-convolution in the `x*` block.
    Second,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Episum<T> {
    pub function: GridFunction<T>,
    /// Whether the infimum at each node is attained strictly inside the
    /// feasible translate window, i.e. not cut off by the lattice boundary.
    pub attained: Vec<bool>,
    /// Minimizing translate `eta` at each node (flat index on the lattice).
    pub argmin: Vec<Option<usize>>,
}

/// Partial episum: for `Second`, `(f (+)_2 g)(x, y) = min_eta [f(x, y - eta) + g(x, eta)]`
/// with `eta` ranging over lattice nodes; `First` convolves the `x` block.
pub fn episum<T: Scalar>(
    f: &GridFunction<T>,
    g: &GridFunction<T>,
    axis: EpisumAxis,
) -> Result<Episum<T>> {
    if f.lattice != g.lattice {
        return Err(Error::GridMismatch(
            "episum operands need the same lattice".into(),
        ));
    }
    let lat = &f.lattice;
    let n = lat.require_paired()?;
    let block: Vec<usize> = match axis {
        EpisumAxis::First => (0..n).collect(),
        EpisumAxis::Second => (n..2 * n).collect(),
    };
    let shape = lat.shape();
    let zero: Vec<usize> = block
        .iter()
        .map(|&k| {
            lat.axes[k].index_of(0.0).ok_or_else(|| {
                Error::GridMismatch(format!("axis {} does not contain the node 0", k + 1))
            })
        })
        .collect::<Result<_>>()?;

    let mut values = Vec::with_capacity(lat.size());
    let mut attained = Vec::with_capacity(lat.size());
    let mut argmin = Vec::with_capacity(lat.size());
    for flat in 0..lat.size() {
        let idx = lat.multi_index(flat);
        let ranges: Vec<(usize, usize)> = block
            .iter()
            .zip(&zero)
            .map(|(&k, &z)| {
                let count = shape[k];
                let top = idx[k] + z;
                (top.saturating_sub(count - 1), top.min(count - 1))
            })
            .collect();
        let mut eta: Vec<usize> = ranges.iter().map(|r| r.0).collect();
        let mut best = T::infinity();
        let mut best_eta: Option<Vec<usize>> = None;
        loop {
            let mut fi = idx.clone();
            let mut gi = idx.clone();
            for ((&k, &z), &e) in block.iter().zip(&zero).zip(&eta) {
                fi[k] = idx[k] + z - e;
                gi[k] = e;
            }
            let v = f.values[lat.flat_index(&fi)] + g.values[lat.flat_index(&gi)];
            if v < best {
                best = v;
                best_eta = Some(eta.clone());
            }
            if !advance(&mut eta, &ranges) {
                break;
            }
        }
        let inside = best_eta
            .as_ref()
            .is_some_and(|e| e.iter().zip(&ranges).all(|(&v, r)| r.0 < v && v < r.1));
        let arg = best_eta.map(|e| {
            let mut gi = idx.clone();
            for (&k, &v) in block.iter().zip(&e) {
                gi[k] = v;
            }
            lat.flat_index(&gi)
        });
        values.push(best);
        attained.push(inside);
        argmin.push(arg);
    }
    Ok(Episum {
        function: GridFunction::new(lat.clone(), values)?,
        attained,
        argmin,
    })
}

/// Odometer step over a box of indices, last entry fastest.
fn advance(idx: &mut [usize], ranges: &[(usize, usize)]) -> bool {
    for k in (0..idx.len()).rev() {
        if idx[k] < ranges[k].1 {
            idx[k] += 1;
            return true;
        }
        idx[k] = ranges[k].0;
    }
    false
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoincidenceSet<T> {
    pub indices: Vec<usize>,
    pub points: Vec<Vec<T>>,
    pub tol: T,
}

impl<T: Scalar> CoincidenceSet<T> {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Smallest `q_L(a - b)` over pairs of points (zero for fewer than two).
    pub fn min_pairwise_q(&self) -> T {
        let mut worst = T::zero();
        for (i, a) in self.points.iter().enumerate() {
            for b in &self.points[i + 1..] {
                let diff: Vec<T> = a.iter().zip(b).map(|(&u, &v)| u - v).collect();
                worst = worst.min(q_coords(&diff));
            }
        }
        worst
    }
}

/// Nodes where `f - q_L <= tol`. Fails if `f` dips below `q_L - tol` anywhere.
pub fn coincidence_set<T: Scalar>(f: &GridFunction<T>, tol: T) -> Result<CoincidenceSet<T>> {
    f.lattice.require_paired()?;
    let mut indices = Vec::new();
    let mut points = Vec::new();
    for flat in 0..f.len() {
        let v = f.values[flat];
        if !v.is_finite() {
            continue;
        }
        let node = f.node(flat);
        let gap = v - q_coords(&node);
        if gap < -tol {
            return Err(Error::DominationViolated {
                node: flat,
                amount: (-gap).as_f64(),
            });
        }
        if gap <= tol {
            indices.push(flat);
            points.push(node);
        }
    }
    Ok(CoincidenceSet {
        indices,
        points,
        tol,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct DualHit<T> {
    pub index: usize,
    pub node: Vec<T>,
    /// `p*` at the returned node.
    pub value: T,
}

/// Looks for a dual node `x*` with `p*(x*) <= tol`, given a minorant `s <= p`
/// with `s(0) > 0`. Returns the first node minimizing `p*`.
pub fn rslem_search<T: Scalar>(
    p: &GridFunction<T>,
    s: &GridFunction<T>,
    dual: &Lattice,
    tol: T,
) -> Result<DualHit<T>> {
    if p.lattice != s.lattice {
        return Err(Error::GridMismatch("p and s need the same lattice".into()));
    }
    let origin = vec![T::zero(); p.lattice.dim()];
    let zero = p
        .lattice
        .locate(&origin)
        .ok_or_else(|| Error::InvalidGrid("the lattice must contain the origin".into()))?;
    // also rejects NaN
    if s.values[zero].partial_cmp(&T::zero()) != Some(std::cmp::Ordering::Greater) {
        return Err(Error::Hypothesis(format!(
            "s(0) = {} must be positive",
            s.values[zero]
        )));
    }
    let slack = T::lit(crate::scalar::TOL_EXACT);
    if let Some(i) = (0..p.len()).find(|&i| s.values[i] > p.values[i] + slack) {
        return Err(Error::Hypothesis(format!("s exceeds p at node {i}")));
    }
    let pstar = conjugate(p, dual)?;
    let (index, value) = pstar.argmin();
    if value <= tol {
        Ok(DualHit {
            index,
            node: dual.node(index),
            value,
        })
    } else {
        Err(Error::SearchFailed(format!(
            "min p* over the dual lattice is {value}"
        )))
    }
}
