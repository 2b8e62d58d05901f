//! Paired spaces `E x E*`, the duality pairing, the canonical map `L` and the
//! quadratic forms `q_L`, `r_L` together with their dual-level analogues.
//!
//! Coordinates of every slot are stored as [`FinTailSeq`]. A Euclidean space
//! `R^n` uses finitely supported sequences of length exactly `n`; a sequence
//! space (`c0 x l1`, `l1 x l_inf`) accepts any finite prefix and the tails
//! supported by [`FinTailSeq`].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::seq::FinTailSeq;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NormKind {
    L1,
    L2,
    LInf,
}

impl NormKind {
    pub fn dual(self) -> Self {
        match self {
            NormKind::L1 => NormKind::LInf,
            NormKind::L2 => NormKind::L2,
            NormKind::LInf => NormKind::L1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpaceKind {
    Euclidean(usize),
    Sequence,
}

/// The space `E` (with its norm) underlying a pair `E x E*`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairedSpace {
    pub kind: SpaceKind,
    /// Norm on `E`; `E*` carries the dual norm and `E**` this one again.
    pub norm: NormKind,
}

impl PairedSpace {
    pub fn euclidean(dim: usize) -> Self {
        Self::euclidean_with(dim, NormKind::L2)
    }

    pub fn euclidean_with(dim: usize, norm: NormKind) -> Self {
        Self {
            kind: SpaceKind::Euclidean(dim),
            norm,
        }
    }

    /// `E = c0` with the sup norm, so `E* = l1` and `E** = l_inf`.
    pub fn c0() -> Self {
        Self {
            kind: SpaceKind::Sequence,
            norm: NormKind::LInf,
        }
    }

    /// `E = l1`, so `E* = l_inf`.
    pub fn l1() -> Self {
        Self {
            kind: SpaceKind::Sequence,
            norm: NormKind::L1,
        }
    }

    pub fn dual_norm(&self) -> NormKind {
        self.norm.dual()
    }

    /// The space whose elements are `(y*, y**)`, viewed as a primal pair.
    pub fn dual_pair(&self) -> Self {
        Self {
            kind: self.kind,
            norm: self.norm.dual(),
        }
    }

    pub fn dim(&self) -> Option<usize> {
        match self.kind {
            SpaceKind::Euclidean(n) => Some(n),
            SpaceKind::Sequence => None,
        }
    }

    pub fn check<T: Scalar>(&self, v: &FinTailSeq<T>) -> Result<()> {
        if let SpaceKind::Euclidean(n) = self.kind {
            if !v.is_finitely_supported() {
                return Err(Error::NotFinitelySupported);
            }
            if v.prefix_len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: v.prefix_len(),
                });
            }
        }
        Ok(())
    }

    fn same_as(&self, other: &Self) -> Result<()> {
        if self.kind != other.kind {
            let (e, f) = (self.dim().unwrap_or(0), other.dim().unwrap_or(0));
            return Err(Error::DimensionMismatch {
                expected: e,
                found: f,
            });
        }
        Ok(())
    }
}

/// An element `b = (x, x*)` of `E x E*`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct PairedPoint<T: Scalar> {
    pub x: FinTailSeq<T>,
    pub xstar: FinTailSeq<T>,
    pub space: PairedSpace,
}

/// An element `c* = (y*, y**)` of `E* x E**`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct DualPoint<T: Scalar> {
    pub ystar: FinTailSeq<T>,
    pub ystarstar: FinTailSeq<T>,
    pub space: PairedSpace,
}

fn sq<T: Scalar>(v: T) -> T {
    v * v
}

impl<T: Scalar> PairedPoint<T> {
    pub fn new(space: PairedSpace, x: FinTailSeq<T>, xstar: FinTailSeq<T>) -> Result<Self> {
        space.check(&x)?;
        space.check(&xstar)?;
        Ok(Self { x, xstar, space })
    }

    /// Point of `R^n x R^n` with Euclidean norms.
    pub fn euclidean(x: &[T], xstar: &[T]) -> Result<Self> {
        Self::new(
            PairedSpace::euclidean(x.len()),
            FinTailSeq::finite(x.to_vec()),
            FinTailSeq::finite(xstar.to_vec()),
        )
    }

    /// Point of `R x R`.
    pub fn scalar(x: T, xstar: T) -> Self {
        Self::euclidean(&[x], &[xstar]).expect("one-dimensional point")
    }

    pub fn zero(space: PairedSpace) -> Self {
        let n = space.dim().unwrap_or(0);
        Self {
            x: FinTailSeq::zeros(n),
            xstar: FinTailSeq::zeros(n),
            space,
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.space.same_as(&other.space)?;
        Ok(Self {
            x: self.x.add(&other.x)?,
            xstar: self.xstar.add(&other.xstar)?,
            space: self.space,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.space.same_as(&other.space)?;
        Ok(Self {
            x: self.x.sub(&other.x)?,
            xstar: self.xstar.sub(&other.xstar)?,
            space: self.space,
        })
    }

    pub fn scale(&self, a: T) -> Self {
        Self {
            x: self.x.scale(a),
            xstar: self.xstar.scale(a),
            space: self.space,
        }
    }

    /// `q_L(x, x*) = <x, x*>`.
    pub fn q_l(&self) -> Result<T> {
        self.x.pair(&self.xstar)
    }

    /// `sqrt(|x|^2 + |x*|^2)` with the dual norm on the second slot.
    pub fn norm(&self) -> Result<T> {
        Ok(self.norm_sq()?.sqrt())
    }

    pub fn norm_sq(&self) -> Result<T> {
        Ok(sq(self.x.norm(self.space.norm)?) + sq(self.xstar.norm(self.space.dual_norm())?))
    }

    /// `r_L = 1/2 |b|^2 + q_L(b)`.
    pub fn r_l(&self) -> Result<T> {
        Ok(T::half() * self.norm_sq()? + self.q_l()?)
    }

    /// Coordinates `(x_1..x_n, x*_1..x*_n)` of a Euclidean point.
    pub fn coords(&self) -> Vec<T> {
        let mut v = self.x.prefix().to_vec();
        v.extend_from_slice(self.xstar.prefix());
        v
    }
}

impl<T: Scalar> DualPoint<T> {
    pub fn new(space: PairedSpace, ystar: FinTailSeq<T>, ystarstar: FinTailSeq<T>) -> Result<Self> {
        space.check(&ystar)?;
        if space.dim().is_some() {
            space.check(&ystarstar)?;
        }
        Ok(Self {
            ystar,
            ystarstar,
            space,
        })
    }

    pub fn euclidean(ystar: &[T], ystarstar: &[T]) -> Result<Self> {
        Self::new(
            PairedSpace::euclidean(ystar.len()),
            FinTailSeq::finite(ystar.to_vec()),
            FinTailSeq::finite(ystarstar.to_vec()),
        )
    }

    pub fn scalar(ystar: T, ystarstar: T) -> Self {
        Self::euclidean(&[ystar], &[ystarstar]).expect("one-dimensional point")
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.space.same_as(&other.space)?;
        Ok(Self {
            ystar: self.ystar.add(&other.ystar)?,
            ystarstar: self.ystarstar.add(&other.ystarstar)?,
            space: self.space,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(-T::one()))
    }

    pub fn scale(&self, a: T) -> Self {
        Self {
            ystar: self.ystar.scale(a),
            ystarstar: self.ystarstar.scale(a),
            space: self.space,
        }
    }

    /// `q_L~(y*, y**) = <y*, y**>`.
    pub fn q_lt(&self) -> Result<T> {
        self.ystar.pair(&self.ystarstar)
    }

    pub fn norm_sq(&self) -> Result<T> {
        Ok(sq(self.ystar.norm(self.space.dual_norm())?)
            + sq(self.ystarstar.norm(self.space.norm)?))
    }

    pub fn norm(&self) -> Result<T> {
        Ok(self.norm_sq()?.sqrt())
    }

    pub fn r_lt(&self) -> Result<T> {
        Ok(T::half() * self.norm_sq()? + self.q_lt()?)
    }

    /// Reads `(y*, y**)` as a point of `E* x E**` treated as a primal pair.
    pub fn as_primal(&self) -> PairedPoint<T> {
        PairedPoint {
            x: self.ystar.clone(),
            xstar: self.ystarstar.clone(),
            space: self.space.dual_pair(),
        }
    }
}

/// `<(x, x*), (y*, y**)> = <x, y*> + <x*, y**>`.
pub fn pairing<T: Scalar>(b: &PairedPoint<T>, cstar: &DualPoint<T>) -> Result<T> {
    b.space.same_as(&cstar.space)?;
    if let Some(n) = b.space.dim() {
        for v in [&cstar.ystar, &cstar.ystarstar] {
            if v.prefix_len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: v.prefix_len(),
                });
            }
        }
    }
    Ok(b.x.pair(&cstar.ystar)? + b.xstar.pair(&cstar.ystarstar)?)
}

/// Returns `(q_L(b), r_L(b))`.
pub fn bilinear<T: Scalar>(b: &PairedPoint<T>) -> Result<(T, T)> {
    let q = b.q_l()?;
    Ok((q, T::half() * b.norm_sq()? + q))
}

/// The canonical map `L(x, x*) = (x*, x^)`.
pub fn apply_l<T: Scalar>(b: &PairedPoint<T>) -> DualPoint<T> {
    DualPoint {
        ystar: b.xstar.clone(),
        ystarstar: b.x.clone(),
        space: b.space,
    }
}

/// Returns `(q_L~(c*), r_L~(c*))`.
pub fn dual_bilinear<T: Scalar>(cstar: &DualPoint<T>) -> Result<(T, T)> {
    let q = cstar.q_lt()?;
    Ok((q, T::half() * cstar.norm_sq()? + q))
}

pub fn seq_norm<T: Scalar>(v: &FinTailSeq<T>, kind: NormKind) -> Result<T> {
    v.norm(kind)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::{random_paired, rng};

    #[test]
    fn scalar_examples() {
        let b = PairedPoint::scalar(1.0, 2.0);
        let c = DualPoint::scalar(3.0, 4.0);
        assert_eq!(pairing(&b, &c).unwrap(), 11.0);
        assert_eq!(bilinear(&b).unwrap(), (2.0, 4.5));
        assert_eq!(dual_bilinear(&c).unwrap(), (12.0, 24.5));
        let zero = PairedPoint::zero(PairedSpace::euclidean(1));
        assert_eq!(pairing(&zero, &c).unwrap(), 0.0);
    }

    #[test]
    fn canonical_map_swaps_slots() {
        let b = PairedPoint::euclidean(&[1.0, 0.0], &[0.0, 1.0]).unwrap();
        let lb = apply_l(&b);
        assert_eq!(lb.ystar.prefix(), &[0.0, 1.0]);
        assert_eq!(lb.ystarstar.prefix(), &[1.0, 0.0]);
        // q_L~(Lb) = q_L(b)
        assert_eq!(lb.q_lt().unwrap(), b.q_l().unwrap());
    }

    #[test]
    fn sequence_embedding_keeps_zero_tail() {
        let b = PairedPoint::new(
            PairedSpace::c0(),
            FinTailSeq::finite(vec![1.0, -1.0]),
            FinTailSeq::finite(vec![1.0, 1.0]),
        )
        .unwrap();
        let lb = apply_l(&b);
        assert!(lb.ystarstar.is_finitely_supported());
        assert_eq!(lb.ystarstar, b.x);
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let b = PairedPoint::euclidean(&[1.0, 2.0], &[0.0, 0.0]).unwrap();
        let c = DualPoint::scalar(1.0, 1.0);
        assert!(pairing(&b, &c).is_err());
        assert!(PairedPoint::euclidean(&[1.0], &[1.0, 2.0]).is_err());
    }

    #[test]
    fn non_summable_tails_are_rejected() {
        let b = PairedPoint {
            x: FinTailSeq::<f64>::ones(),
            xstar: FinTailSeq::zeros(1),
            space: PairedSpace::c0(),
        };
        let c = DualPoint {
            ystar: FinTailSeq::alternating(),
            ystarstar: FinTailSeq::zeros(1),
            space: PairedSpace::c0(),
        };
        assert_eq!(pairing(&b, &c), Err(Error::NonSummable));
    }

    #[test]
    fn euclidean_gauge_is_half_square_of_sum() {
        let mut r = rng(11);
        for _ in 0..100 {
            let b = random_paired::<f64>(&mut r, 4, 3.0);
            let direct = b.r_l().unwrap();
            let sum: f64 =
                b.x.prefix()
                    .iter()
                    .zip(b.xstar.prefix())
                    .map(|(a, c)| (a + c) * (a + c))
                    .sum();
            assert!((direct - 0.5 * sum).abs() <= 1e-12 * (1.0 + sum));
        }
    }

    #[test]
    fn product_norm_uses_dual_norm_on_second_slot() {
        let b = PairedPoint::new(
            PairedSpace::c0(),
            FinTailSeq::finite(vec![3.0, -1.0]),
            FinTailSeq::finite(vec![1.0, -2.0]),
        )
        .unwrap();
        // |x|_inf = 3, |x*|_1 = 3
        assert!((b.norm().unwrap() - 18f64.sqrt()).abs() < 1e-15);
    }
}
