//! Concrete sequence-space operators with exact algebra on finitely supported
//! inputs: the tail operator, the skew operator on the zero-sum subspace `K`
//! of `c0`, and the telescoping operator `l1 -> l_inf` with its quadratic
//! functional `k(x*) = <x*, e**>^2`.
//!
//! Indices are 0-based in code; `e^1` is `FinTailSeq::unit(0)`.

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::DenseMatrix;
use crate::sampling::{random_vec, LabRng};
use crate::scalar::Scalar;
use crate::seq::{FinTailSeq, Tail};
use crate::spaces::{PairedPoint, PairedSpace};

fn require_finite<T: Scalar>(v: &FinTailSeq<T>) -> Result<()> {
    if v.is_finitely_supported() {
        Ok(())
    } else {
        Err(Error::NotFinitelySupported)
    }
}

/// Tail operator `(T x)_n = sum_{k >= n} x_k`.
pub fn tail_op<T: Scalar>(xstar: &FinTailSeq<T>) -> Result<FinTailSeq<T>> {
    let mut tau = xstar.tail_sums()?;
    tau.pop();
    Ok(FinTailSeq::finite(tau))
}

/// Matrix of the tail operator on the first `n` coordinates.
pub fn tail_matrix<T: Scalar>(n: usize) -> DenseMatrix<T> {
    DenseMatrix::from_fn(n, n, |i, j| if j >= i { T::one() } else { T::zero() })
}

/// Bidiagonal matrix `x_j - x_{j+1}` of the pullback of the tail operator.
pub fn tail_pullback_matrix<T: Scalar>(n: usize) -> DenseMatrix<T> {
    DenseMatrix::from_fn(n, n, |i, j| {
        if j == i {
            T::one()
        } else if j == i + 1 {
            -T::one()
        } else {
            T::zero()
        }
    })
}

/// A finitely supported element of `K = {x in c0 : sum x_i = 0}` together with
/// its tail sums `t(x)_j = sum_{k >= j} x_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct SkewDomainElement<T: Scalar> {
    x: FinTailSeq<T>,
    t: Vec<T>,
}

impl<T: Scalar> SkewDomainElement<T> {
    pub fn new(x: FinTailSeq<T>) -> Result<Self> {
        require_finite(&x)?;
        let t = x.tail_sums()?;
        let scale = x.prefix().iter().fold(T::one(), |m, v| m.max(v.abs()));
        if t[0].abs() > T::lit(1e-12) * scale {
            return Err(Error::NotInDomain(format!(
                "entries sum to {} instead of 0",
                t[0]
            )));
        }
        Ok(Self { x, t })
    }

    /// Random element with support in the first `n >= 2` coordinates: a
    /// random vector shifted to zero mean, with the last entry closing the sum.
    pub fn random(rng: &mut LabRng, n: usize, scale: f64) -> Self {
        let n = n.max(2);
        let mut v: Vec<T> = random_vec(rng, n, scale);
        let mean = v.iter().copied().sum::<T>() / T::lit(n as f64);
        for e in v.iter_mut() {
            *e = *e - mean;
        }
        let head: T = v[..n - 1].iter().copied().sum();
        v[n - 1] = -head;
        Self::new(FinTailSeq::finite(v)).expect("zero-sum construction")
    }

    /// `e^{j} - e^{j+1}` (0-based `j`).
    pub fn difference(j: usize) -> Self {
        let mut v = vec![T::zero(); j + 2];
        v[j] = T::one();
        v[j + 1] = -T::one();
        Self::new(FinTailSeq::finite(v)).expect("zero-sum construction")
    }

    pub fn x(&self) -> &FinTailSeq<T> {
        &self.x
    }

    /// Tail sums `t_0, ..., t_len` (the last one is zero).
    pub fn t(&self) -> &[T] {
        &self.t
    }

    pub fn first(&self) -> T {
        self.x.get(0)
    }
}

/// Skew operator `(S x)_j = -t(x)_j - t(x)_{j+1}` on `K`.
pub fn skew_apply<T: Scalar>(x: &SkewDomainElement<T>) -> FinTailSeq<T> {
    let n = x.x.prefix_len();
    let out = (0..n).map(|j| -x.t[j] - x.t[j + 1]).collect();
    FinTailSeq::finite(out)
}

/// Matrix of the skew operator: `-1` on the diagonal, `-2` above it.
pub fn skew_matrix<T: Scalar>(n: usize) -> DenseMatrix<T> {
    DenseMatrix::from_fn(n, n, |i, j| match j.cmp(&i) {
        std::cmp::Ordering::Equal => -T::one(),
        std::cmp::Ordering::Greater => T::lit(-2.0),
        std::cmp::Ordering::Less => T::zero(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundSample<T> {
    /// `r_L` of the shifted graph point.
    pub r_l: T,
    /// Closed-form lower estimate of `r_l`.
    pub lower: T,
}

impl<T: Scalar> BoundSample<T> {
    pub fn slack(&self) -> T {
        self.r_l - self.lower
    }
}

/// `r_L((x, Sx) - (e^1, 0))` in `c0 x l1`, with the chain
/// `1/2 (x_1 - 1)^2 + 2 x_1^2 - x_1 = 5/2 (x_1 - 2/5)^2 + 1/10`.
pub fn skew_bound<T: Scalar>(x: &SkewDomainElement<T>) -> Result<BoundSample<T>> {
    let shifted = PairedPoint {
        x: x.x.sub(&FinTailSeq::unit(0))?,
        xstar: skew_apply(x),
        space: PairedSpace::c0(),
    };
    let x1 = x.first();
    let lower = T::half() * (x1 - T::one()).powi(2) + T::lit(2.0) * x1 * x1 - x1;
    Ok(BoundSample {
        r_l: shifted.r_l()?,
        lower,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TnotmaxReport<T> {
    pub samples: usize,
    /// Largest `|<x, Sx>|`.
    pub skew: T,
    /// Largest `|<Sx, w**>|` with `w** = (-1, 1, -1, ...)`.
    pub alternating: T,
    /// Largest `|<Sx - 0, x - w**>|`.
    pub pairing: T,
}

impl<T: Scalar> TnotmaxReport<T> {
    /// Whether `(0, w**)` is monotonically related to every sample within `tol`.
    pub fn related(&self, tol: T) -> bool {
        self.pairing <= tol
    }
}

/// Checks that `(0, w**)` pairs to zero against `(Sx, x)` for each sample.
pub fn tnotmax_witness<T: Scalar>(samples: &[SkewDomainElement<T>]) -> Result<TnotmaxReport<T>> {
    let omega = FinTailSeq::alternating();
    let mut report = TnotmaxReport {
        samples: samples.len(),
        skew: T::zero(),
        alternating: T::zero(),
        pairing: T::zero(),
    };
    for x in samples {
        let sx = skew_apply(x);
        let skew = sx.pair(&x.x)?;
        let alt = sx.pair(&omega)?;
        let pairing = sx.pair(&x.x.sub(&omega)?)?;
        report.skew = report.skew.max(skew.abs());
        report.alternating = report.alternating.max(alt.abs());
        report.pairing = report.pairing.max(pairing.abs());
    }
    Ok(report)
}

/// A linear map `T: E* -> E**` with `<x*, T x*> = <x*, e**>^2`, where `e**`
/// lies outside the canonical image of `E`.
pub trait BsConstruction<T: Scalar> {
    fn apply(&self, xstar: &FinTailSeq<T>) -> Result<FinTailSeq<T>>;

    fn estarstar(&self) -> FinTailSeq<T> {
        FinTailSeq::ones()
    }

    fn k(&self, xstar: &FinTailSeq<T>) -> Result<T> {
        let s = xstar.pair(&self.estarstar())?;
        Ok(s * s)
    }
}

/// The telescoping rule `(T x*)_j = tau_j + tau_{j+1}`, `tau_j = sum_{i >= j} x*_i`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Telescoping;

impl<T: Scalar> BsConstruction<T> for Telescoping {
    fn apply(&self, xstar: &FinTailSeq<T>) -> Result<FinTailSeq<T>> {
        let tau = xstar.tail_sums()?;
        let out = (0..xstar.prefix_len())
            .map(|j| tau[j] + tau[j + 1])
            .collect();
        Ok(FinTailSeq::finite(out))
    }
}

pub fn bs_apply<T: Scalar>(xstar: &FinTailSeq<T>) -> Result<FinTailSeq<T>> {
    Telescoping.apply(xstar)
}

/// Matrix of the telescoping rule: `1` on the diagonal, `2` above it.
pub fn bs_matrix<T: Scalar>(n: usize) -> DenseMatrix<T> {
    DenseMatrix::from_fn(n, n, |i, j| match j.cmp(&i) {
        std::cmp::Ordering::Equal => T::one(),
        std::cmp::Ordering::Greater => T::lit(2.0),
        std::cmp::Ordering::Less => T::zero(),
    })
}

/// Matrix of the pullback of the telescoping rule: rows `1, -2, 2, -2, ...`.
pub fn bs_pullback_matrix<T: Scalar>(n: usize) -> DenseMatrix<T> {
    DenseMatrix::from_fn(n, n, |i, j| {
        if j < i {
            T::zero()
        } else if j == i {
            T::one()
        } else if (j - i) % 2 == 1 {
            T::lit(-2.0)
        } else {
            T::lit(2.0)
        }
    })
}

/// `r_L((x*, T x*) - (0, e**))` in `l1 x l_inf`, with the closed form
/// `1/4 + 1/4 (2 <x*, e**> - 1)^2`.
pub fn bs_bound<T: Scalar>(xstar: &FinTailSeq<T>) -> Result<BoundSample<T>> {
    let image = bs_apply(xstar)?;
    let shifted = PairedPoint {
        x: xstar.clone(),
        xstar: image.sub(&FinTailSeq::ones())?,
        space: PairedSpace::l1(),
    };
    let s = xstar.total()?;
    let q = T::lit(0.25);
    Ok(BoundSample {
        r_l: shifted.r_l()?,
        lower: q + q * (T::lit(2.0) * s - T::one()).powi(2),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound = "")]
pub struct BsTheta<T: Scalar> {
    /// `Some(mu)` when `2<y*, e**> e** - T y* + y** = 2 mu e**`.
    pub mu: Option<T>,
    /// Supremum over `x*` supported in the first `truncation` coordinates,
    /// or a lower bound at radius `truncation` when that supremum is infinite.
    pub theta: T,
    /// Whether `theta` is the exact truncated supremum.
    pub exact: bool,
    pub maximizer: Option<FinTailSeq<T>>,
    pub truncation: usize,
}

/// `theta_S(y*, y**) = sup_{x*} [<y*, T x*> + <x*, y**> - k(x*)]` for the
/// pullback `S` of a construction, truncated to `x*` in `R^n`.
pub fn bs_theta_with<T: Scalar, C: BsConstruction<T>>(
    rule: &C,
    ystar: &FinTailSeq<T>,
    ystarstar: &FinTailSeq<T>,
    n: usize,
) -> Result<BsTheta<T>> {
    require_finite(ystar)?;
    if n == 0 {
        return Err(Error::InvalidArgument(
            "truncation must be at least 1".into(),
        ));
    }
    let e = rule.estarstar();
    let a: Vec<T> = (0..n).map(|i| e.get(i)).collect();
    let c = (0..n)
        .map(|i| {
            let ui = FinTailSeq::unit(i);
            Ok(ystar.pair(&rule.apply(&ui)?)? + ystarstar.get(i))
        })
        .collect::<Result<Vec<T>>>()?;

    let shift = e.scale(T::lit(2.0) * ystar.pair(&e)?);
    let w = shift
        .sub(&rule.apply(ystar)?)
        .and_then(|v| v.add(ystarstar));
    let mu = w
        .ok()
        .and_then(|w| along_e(&w, &e))
        .map(|beta| T::half() * beta);

    // cT x - (aT x)^2: finite iff c is parallel to a
    let aa: T = a.iter().map(|&v| v * v).sum();
    let beta = a.iter().zip(&c).map(|(&u, &v)| u * v).sum::<T>() / aa;
    let perp: Vec<T> = c.iter().zip(&a).map(|(&v, &u)| v - beta * u).collect();
    let perp_norm = perp.iter().map(|&v| v * v).sum::<T>().sqrt();
    let scale = c.iter().fold(T::one(), |m, v| m.max(v.abs()));
    let pivot = a
        .iter()
        .position(|v| *v != T::zero())
        .ok_or(Error::Unsupported("e** vanishes on the truncation".into()))?;
    let mut x = vec![T::zero(); n];
    x[pivot] = T::half() * beta / a[pivot];
    let exact = perp_norm <= T::lit(1e-12) * scale;
    if !exact {
        let radius = T::lit(n as f64);
        for (xi, &p) in x.iter_mut().zip(&perp) {
            *xi = *xi + radius * p / perp_norm;
        }
    }
    let at: T = a.iter().zip(&x).map(|(&u, &v)| u * v).sum();
    let theta = c.iter().zip(&x).map(|(&u, &v)| u * v).sum::<T>() - at * at;
    Ok(BsTheta {
        mu,
        theta,
        exact,
        maximizer: Some(FinTailSeq::finite(x).trimmed()),
        truncation: n,
    })
}

/// Coefficient `beta` with `w = beta e`, if one exists (within rounding).
fn along_e<T: Scalar>(w: &FinTailSeq<T>, e: &FinTailSeq<T>) -> Option<T> {
    let len = w.prefix_len().max(e.prefix_len()) + 2;
    let beta = match (w.tail(), e.tail()) {
        (Tail::Zero, _) => T::zero(),
        (Tail::Const(v), Tail::Const(u)) | (Tail::Alt(v), Tail::Alt(u)) => v / u,
        _ => return None,
    };
    let scale = (0..len).fold(T::one(), |m, i| m.max(w.get(i).abs()));
    (0..len)
        .all(|i| (w.get(i) - beta * e.get(i)).abs() <= T::lit(1e-12) * scale)
        .then_some(beta)
}

pub fn bs_theta<T: Scalar>(
    ystar: &FinTailSeq<T>,
    ystarstar: &FinTailSeq<T>,
    n: usize,
) -> Result<BsTheta<T>> {
    bs_theta_with(&Telescoping, ystar, ystarstar, n)
}

/// Lower bounds `<l y*, y**> + <y*, l y**> - theta_S(l y*, l y**)` for the
/// dual `@`-transform at `y* = e^1`, `y** = T y* - 2 e**`.
pub fn bs_theta_divergence<T: Scalar>(lambdas: &[T]) -> Result<Vec<T>> {
    let ystar = FinTailSeq::unit(0);
    let ystarstar = bs_apply(&ystar)?.sub(&FinTailSeq::ones().scale(T::lit(2.0)))?;
    let base = ystar.pair(&ystarstar)?;
    lambdas
        .iter()
        .map(|&l| {
            let th = bs_theta(&ystar.scale(l), &ystarstar.scale(l), 1)?;
            Ok(T::lit(2.0) * l * base - th.theta)
        })
        .collect()
}

/// `k*(2 mu e**) = sup_{x*} [<x*, 2 mu e**> - <x*, e**>^2]`, attained at `x* = mu e^1`.
pub fn k_conjugate<T: Scalar>(mu: T) -> T {
    let xstar = FinTailSeq::unit(0).scale(mu);
    let z = FinTailSeq::ones().scale(T::lit(2.0) * mu);
    let k = Telescoping.k(&xstar).expect("finite input");
    xstar.pair(&z).expect("finite input") - k
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound = "")]
pub struct OffAxis<T: Scalar> {
    /// `None` when `z**` is a multiple of `e**`, so `k*(z**)` is finite.
    pub direction: Option<FinTailSeq<T>>,
    /// `<l d, z**> - k(l d)` for each scale `l`.
    pub values: Vec<T>,
}

impl<T: Scalar> OffAxis<T> {
    pub fn in_domain(&self) -> bool {
        self.direction.is_none()
    }
}

/// Scans `k*(z**)` along a direction `d` with `<d, e**> = 0` and `<d, z**> > 0`.
pub fn k_conjugate_offaxis<T: Scalar>(
    zstarstar: &FinTailSeq<T>,
    lambdas: &[T],
) -> Result<OffAxis<T>> {
    let e = FinTailSeq::ones();
    if let Some(beta) = along_e(zstarstar, &e) {
        let mu = T::half() * beta;
        return Ok(OffAxis {
            direction: None,
            values: lambdas.iter().map(|_| k_conjugate(mu)).collect(),
        });
    }
    let len = zstarstar.prefix_len() + 2;
    let j = (0..len - 1)
        .find(|&i| zstarstar.get(i) != zstarstar.get(i + 1))
        .ok_or_else(|| Error::Unsupported("no separating direction found".into()))?;
    let mut d = vec![T::zero(); j + 2];
    let sign = if zstarstar.get(j) > zstarstar.get(j + 1) {
        T::one()
    } else {
        -T::one()
    };
    d[j] = sign;
    d[j + 1] = -sign;
    let d = FinTailSeq::finite(d);
    let values = lambdas
        .iter()
        .map(|&l| {
            let x = d.scale(l);
            Ok(x.pair(zstarstar)? - Telescoping.k(&x)?)
        })
        .collect::<Result<Vec<T>>>()?;
    Ok(OffAxis {
        direction: Some(d),
        values,
    })
}

/// Random finitely supported sequence with `n` entries in `[-scale, scale]`.
pub fn random_finite<T: Scalar>(rng: &mut LabRng, n: usize, scale: f64) -> FinTailSeq<T> {
    FinTailSeq::finite(random_vec(rng, n, scale))
}

/// Random `(y*, y**)` with `2 <y*, e**> e** - T y* + y** = 2 mu e**`.
pub fn random_theta_member<T: Scalar>(
    rng: &mut LabRng,
    n: usize,
    scale: f64,
) -> (FinTailSeq<T>, FinTailSeq<T>, T) {
    let ystar = random_finite::<T>(rng, n, scale);
    let mu = T::lit(rng.gen_range(-scale..=scale));
    let s = ystar.total().expect("finite");
    let ystarstar = bs_apply(&ystar)
        .expect("finite")
        .add(&FinTailSeq::ones().scale(T::lit(2.0) * (mu - s)))
        .expect("constant tail");
    (ystar, ystarstar, mu)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::rng;

    fn seq(v: &[f64]) -> FinTailSeq<f64> {
        FinTailSeq::finite(v.to_vec())
    }

    #[test]
    fn tail_operator_examples() {
        assert_eq!(tail_op(&seq(&[1.0])).unwrap(), seq(&[1.0]));
        assert_eq!(tail_op(&seq(&[0.0, 1.0])).unwrap(), seq(&[1.0, 1.0]));
        let x = seq(&[1.0, -1.0]);
        let tx = tail_op(&x).unwrap();
        assert_eq!(tx, seq(&[0.0, -1.0]));
        assert_eq!(x.pair(&tx).unwrap(), 1.0);
        assert_eq!(
            tail_op(&FinTailSeq::<f64>::ones()),
            Err(Error::NotFinitelySupported)
        );
    }

    #[test]
    fn skew_examples() {
        for j in 0..5 {
            let x = SkewDomainElement::<f64>::difference(j);
            let mut expected = vec![0.0; j + 2];
            expected[j] = 1.0;
            expected[j + 1] = 1.0;
            assert_eq!(skew_apply(&x), seq(&expected));
        }
        assert!(SkewDomainElement::new(seq(&[1.0, 0.5])).is_err());
        assert!(SkewDomainElement::new(FinTailSeq::<f64>::ones()).is_err());
    }

    #[test]
    fn skew_matches_matrix() {
        let mut r = rng(5);
        let m = skew_matrix::<f64>(12);
        for _ in 0..20 {
            let x = SkewDomainElement::<f64>::random(&mut r, 12, 2.0);
            let mx = m.mul_vec(x.x().prefix());
            for (a, b) in skew_apply(&x).prefix().iter().zip(&mx) {
                assert!((a - b).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn skew_bound_examples() {
        let b = skew_bound(&SkewDomainElement::<f64>::difference(0)).unwrap();
        assert_eq!(b.r_l, 1.5);
        assert_eq!(b.lower, 1.0);
        let x = SkewDomainElement::new(seq(&[0.4, -0.4])).unwrap();
        let b = skew_bound(&x).unwrap();
        assert!((b.lower - 0.1).abs() < 1e-15);
        assert!(b.r_l >= b.lower);
        let min = (0..=100)
            .map(|i| {
                let x1 = i as f64 / 100.0;
                0.5 * (x1 - 1.0f64).powi(2) + 2.0 * x1 * x1 - x1
            })
            .fold(f64::INFINITY, f64::min);
        assert!((min - 0.1).abs() < 1e-15);
    }

    #[test]
    fn tnotmax_examples() {
        let samples = vec![
            SkewDomainElement::<f64>::difference(0),
            SkewDomainElement::new(seq(&[0.0, 1.0, 0.0, -1.0])).unwrap(),
        ];
        let rep = tnotmax_witness(&samples).unwrap();
        assert_eq!(rep.pairing, 0.0);
        assert!(rep.related(1e-12));
    }

    #[test]
    fn telescoping_examples() {
        assert_eq!(bs_apply(&seq(&[1.0])).unwrap(), seq(&[1.0]));
        let x = seq(&[1.0, 1.0]);
        let tx = bs_apply(&x).unwrap();
        assert_eq!(tx, seq(&[3.0, 1.0]));
        assert_eq!(x.pair(&tx).unwrap(), 4.0);
        let m = bs_matrix::<f64>(2);
        assert_eq!(m.mul_vec(&[1.0, 1.0]), vec![3.0, 1.0]);
    }

    #[test]
    fn pullback_matrices_invert_forward_rules() {
        let n = 9;
        let t = tail_matrix::<f64>(n);
        let s = tail_pullback_matrix::<f64>(n);
        let b = bs_matrix::<f64>(n);
        let p = bs_pullback_matrix::<f64>(n);
        for i in 0..n {
            let e: Vec<f64> = (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect();
            assert_eq!(s.mul_vec(&t.mul_vec(&e)), e);
            assert_eq!(p.mul_vec(&b.mul_vec(&e)), e);
        }
    }

    #[test]
    fn bs_bound_examples() {
        let b = bs_bound(&seq(&[])).unwrap();
        assert_eq!((b.r_l, b.lower), (0.5, 0.5));
        let b = bs_bound(&seq(&[1.0])).unwrap();
        assert_eq!((b.r_l, b.lower), (1.0, 0.5));
        let b = bs_bound(&seq(&[0.25, 0.25])).unwrap();
        assert_eq!(b.lower, 0.25);
    }

    #[test]
    fn theta_examples() {
        let e1 = FinTailSeq::<f64>::unit(0);
        let yss = bs_apply(&e1)
            .unwrap()
            .sub(&FinTailSeq::ones().scale(2.0))
            .unwrap();
        let th = bs_theta(&e1, &yss, 8).unwrap();
        assert_eq!(th.mu, Some(0.0));
        assert_eq!(th.theta, 0.0);

        let th = bs_theta(&seq(&[]), &FinTailSeq::ones().scale(2.0), 8).unwrap();
        assert_eq!(th.mu, Some(1.0));
        assert_eq!(th.theta, 1.0);
        assert_eq!(th.maximizer, Some(e1.clone()));

        let a = bs_theta(&seq(&[]), &e1, 4).unwrap();
        let b = bs_theta(&seq(&[]), &e1, 40).unwrap();
        assert_eq!(a.mu, None);
        assert!(!a.exact && b.theta > a.theta && b.theta > 30.0);
    }

    #[test]
    fn theta_members_attain_mu_squared() {
        let mut r = rng(17);
        for _ in 0..20 {
            let (ys, yss, mu) = random_theta_member::<f64>(&mut r, 6, 2.0);
            for n in 1..10 {
                let th = bs_theta(&ys, &yss, n).unwrap();
                assert!(th.exact);
                assert!((th.mu.unwrap() - mu).abs() < 1e-12);
                assert!((th.theta - mu * mu).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn divergence_bounds() {
        let v = bs_theta_divergence(&[-1.0, -10.0, 0.0]).unwrap();
        assert_eq!(v, vec![2.0, 20.0, 0.0]);
    }

    #[test]
    fn k_conjugate_values() {
        assert_eq!(k_conjugate(0.0), 0.0);
        assert_eq!(k_conjugate(3.0), 9.0);
        let off = k_conjugate_offaxis(&FinTailSeq::<f64>::unit(0), &[1.0, 10.0, 100.0]).unwrap();
        assert!(!off.in_domain());
        assert_eq!(off.values, vec![1.0, 10.0, 100.0]);
        let on = k_conjugate_offaxis(&FinTailSeq::<f64>::ones().scale(4.0), &[1.0]).unwrap();
        assert!(on.in_domain());
        assert_eq!(on.values, vec![4.0]);
    }
}
