//! Operator graphs in `E x E*`: finite clouds, linear maps, the named
//! sequence rules and pullbacks through `L`, with monotonicity checks,
//! Fitzpatrick-type suprema and extension membership.
//!
//! Every non-cloud representation exposes a linear parametrization of its
//! graph, `u -> (P u, D u)` for `u in R^p`. Along it, both Fitzpatrick
//! suprema become `sup_u [g^T u - u^T Q u]` with `Q_ij = <P_i, D_j>`, which is
//! solved in closed form by [`concave_quadratic_sup`].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gallery::{self, SkewDomainElement};
use crate::linalg::{concave_quadratic_sup, DenseMatrix, QuadStatus};
use crate::scalar::{Scalar, TOL_EXACT};
use crate::seq::FinTailSeq;
use crate::spaces::{apply_l, DualPoint, NormKind, PairedPoint, PairedSpace, SpaceKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SeqRule {
    /// Tail operator `l1 -> l_inf`.
    Tail,
    /// Skew operator on the zero-sum subspace of `c0`, into `l1`.
    SkewQ,
    /// Telescoping operator `l1 -> l_inf`.
    BsTele,
}

impl SeqRule {
    pub fn name(self) -> &'static str {
        match self {
            SeqRule::Tail => "tail",
            SeqRule::SkewQ => "skewq",
            SeqRule::BsTele => "bstele",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "tail" => Some(SeqRule::Tail),
            "skewq" => Some(SeqRule::SkewQ),
            "bstele" => Some(SeqRule::BsTele),
            _ => None,
        }
    }

    /// The space `E x E*` holding the graph.
    pub fn space(self) -> PairedSpace {
        match self {
            SeqRule::Tail | SeqRule::BsTele => PairedSpace::l1(),
            SeqRule::SkewQ => PairedSpace::c0(),
        }
    }

    /// Image of `x`; `None` when `x` is outside the domain.
    pub fn apply<T: Scalar>(self, x: &FinTailSeq<T>) -> Result<Option<FinTailSeq<T>>> {
        match self {
            SeqRule::Tail => gallery::tail_op(x).map(Some),
            SeqRule::BsTele => gallery::bs_apply(x).map(Some),
            SeqRule::SkewQ => match SkewDomainElement::new(x.clone()) {
                Ok(k) => Ok(Some(gallery::skew_apply(&k))),
                Err(Error::NotInDomain(_)) | Err(Error::NotFinitelySupported) => Ok(None),
                Err(e) => Err(e),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Repr<T: Scalar> {
    Cloud(Vec<PairedPoint<T>>),
    /// `x* = M x` on all of `R^n`.
    Linear(DenseMatrix<T>),
    SeqRule(SeqRule),
    /// `G(S) = L^{-1} G(inner)`, with `inner` acting from `E*` to `E**`.
    PullbackL(Box<OperatorGraph<T>>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct OperatorGraph<T: Scalar> {
    repr: Repr<T>,
    space: PairedSpace,
}

/// Truncation and search budget for suprema over unbounded graphs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Budget {
    /// Radius used for lower-bound witnesses along directions of unbounded ascent.
    pub radius: f64,
    /// Nodes per axis of sample lattices (grid-based routines).
    pub nodes: usize,
    /// Number of sequence coordinates kept for sequence rules.
    pub truncation: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Self {
            radius: 8.0,
            nodes: 17,
            truncation: 64,
        }
    }
}

impl Budget {
    pub fn with_truncation(truncation: usize) -> Self {
        Self {
            truncation,
            ..Self::default()
        }
    }
}

/// Value of a Fitzpatrick-type supremum: always a certified lower bound,
/// and the supremum itself when `exact`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound = "")]
pub struct FitzValue<T: Scalar> {
    pub value: T,
    pub exact: bool,
    pub attained_at: Option<PairedPoint<T>>,
    pub truncation: Option<usize>,
}

/// Linear parametrization `u -> (sum u_j P_j, sum u_j D_j)` of a graph.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphParam<T: Scalar> {
    pub p: Vec<FinTailSeq<T>>,
    pub d: Vec<FinTailSeq<T>>,
    /// Whether the span is the whole graph rather than a truncation.
    pub complete: bool,
}

impl<T: Scalar> GraphParam<T> {
    pub fn len(&self) -> usize {
        self.p.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p.is_empty()
    }

    /// `Q_ij = <P_i, D_j>`, so that `q_L(Pu, Du) = u^T Q u`.
    pub fn gram(&self) -> Result<DenseMatrix<T>> {
        let n = self.len();
        let mut q = DenseMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                q.set(i, j, self.p[i].pair(&self.d[j])?);
            }
        }
        Ok(q)
    }

    pub fn point(&self, u: &[T], space: PairedSpace) -> Result<PairedPoint<T>> {
        let mut x = FinTailSeq::zeros(0);
        let mut xs = FinTailSeq::zeros(0);
        for ((&c, p), d) in u.iter().zip(&self.p).zip(&self.d) {
            x = x.add(&p.scale(c))?;
            xs = xs.add(&d.scale(c))?;
        }
        if let Some(n) = space.dim() {
            x = x.extended(n);
            xs = xs.extended(n);
        }
        Ok(PairedPoint {
            x: x.trimmed_to(space),
            xstar: xs.trimmed_to(space),
            space,
        })
    }

    fn swapped(self) -> Self {
        Self {
            p: self.d,
            d: self.p,
            complete: self.complete,
        }
    }
}

trait TrimTo {
    fn trimmed_to(&self, space: PairedSpace) -> Self;
}

impl<T: Scalar> TrimTo for FinTailSeq<T> {
    fn trimmed_to(&self, space: PairedSpace) -> Self {
        match space.kind {
            SpaceKind::Euclidean(_) => self.clone(),
            SpaceKind::Sequence => self.trimmed(),
        }
    }
}

fn columns<T: Scalar>(m: &DenseMatrix<T>) -> Vec<FinTailSeq<T>> {
    (0..m.cols())
        .map(|j| FinTailSeq::finite((0..m.rows()).map(|i| m.get(i, j)).collect()))
        .collect()
}

fn units<T: Scalar>(n: usize) -> Vec<FinTailSeq<T>> {
    (0..n)
        .map(|j| {
            let mut v = vec![T::zero(); n];
            v[j] = T::one();
            FinTailSeq::finite(v)
        })
        .collect()
}

impl<T: Scalar> OperatorGraph<T> {
    pub fn cloud(points: Vec<PairedPoint<T>>) -> Result<Self> {
        let first = points.first().ok_or(Error::EmptyGraph)?;
        let space = first.space;
        for p in &points {
            if p.space != space {
                return Err(Error::DimensionMismatch {
                    expected: space.dim().unwrap_or(0),
                    found: p.space.dim().unwrap_or(0),
                });
            }
        }
        Ok(Self {
            repr: Repr::Cloud(points),
            space,
        })
    }

    /// Linear map on `R^n` with Euclidean norms.
    pub fn linear(matrix: DenseMatrix<T>) -> Result<Self> {
        Self::linear_with_norm(matrix, NormKind::L2)
    }

    pub fn linear_with_norm(matrix: DenseMatrix<T>, norm: NormKind) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch {
                expected: matrix.rows(),
                found: matrix.cols(),
            });
        }
        let space = PairedSpace::euclidean_with(matrix.rows(), norm);
        Ok(Self {
            repr: Repr::Linear(matrix),
            space,
        })
    }

    pub fn seq_rule(rule: SeqRule) -> Self {
        Self {
            repr: Repr::SeqRule(rule),
            space: rule.space(),
        }
    }

    /// Built-in operators addressable by name.
    pub fn builtin(name: &str) -> Option<Self> {
        SeqRule::from_name(name).map(Self::seq_rule)
    }

    pub fn repr(&self) -> &Repr<T> {
        &self.repr
    }

    pub fn space(&self) -> PairedSpace {
        self.space
    }

    /// Graph parametrization; `None` for clouds.
    pub fn param(&self, budget: &Budget) -> Option<GraphParam<T>> {
        match &self.repr {
            Repr::Cloud(_) => None,
            Repr::Linear(m) => Some(GraphParam {
                p: units(m.rows()),
                d: columns(m),
                complete: true,
            }),
            Repr::SeqRule(rule) => {
                let n = budget.truncation.max(2);
                let (p, d) = match rule {
                    SeqRule::Tail | SeqRule::BsTele => {
                        let p: Vec<FinTailSeq<T>> = (0..n).map(FinTailSeq::unit).collect();
                        let d = p
                            .iter()
                            .map(|e| rule.apply(e).ok().flatten().expect("finite input"))
                            .collect();
                        (p, d)
                    }
                    SeqRule::SkewQ => (0..n - 1)
                        .map(|j| {
                            let k = SkewDomainElement::difference(j);
                            let image = gallery::skew_apply(&k);
                            (k.x().clone(), image)
                        })
                        .unzip(),
                };
                Some(GraphParam {
                    p,
                    d,
                    complete: false,
                })
            }
            Repr::PullbackL(inner) => inner.param(budget).map(GraphParam::swapped),
        }
    }

    /// Whether `b` lies on the graph (entrywise within `tol`).
    pub fn contains(&self, b: &PairedPoint<T>, tol: T) -> Result<bool> {
        let close = |u: &FinTailSeq<T>, v: &FinTailSeq<T>| -> Result<bool> {
            Ok(u.first_difference(v, tol)?.is_none())
        };
        match &self.repr {
            Repr::Cloud(points) => {
                for p in points {
                    if close(&p.x, &b.x)? && close(&p.xstar, &b.xstar)? {
                        return Ok(true);
                    }
                }
                Ok(false)
            }
            Repr::Linear(m) => {
                if !b.x.is_finitely_supported() || b.x.prefix_len() != m.cols() {
                    return Ok(false);
                }
                let image = FinTailSeq::finite(m.mul_vec(b.x.prefix()));
                close(&image, &b.xstar)
            }
            Repr::SeqRule(rule) => match rule.apply(&b.x) {
                Ok(Some(image)) => close(&image, &b.xstar),
                Ok(None) | Err(Error::NotFinitelySupported) => Ok(false),
                Err(e) => Err(e),
            },
            Repr::PullbackL(inner) => {
                let image = inner.image_of(&b.xstar, tol)?;
                match image {
                    None => Ok(false),
                    Some(y) => {
                        if !y.is_finitely_supported() {
                            return Err(Error::OutsideCanonicalImage {
                                coordinate: y.trimmed().prefix_len(),
                            });
                        }
                        close(&y, &b.x)
                    }
                }
            }
        }
    }

    /// Some element of `S(x)`, if `x` is in the domain.
    fn image_of(&self, x: &FinTailSeq<T>, tol: T) -> Result<Option<FinTailSeq<T>>> {
        match &self.repr {
            Repr::Cloud(points) => {
                for p in points {
                    if p.x.first_difference(x, tol)?.is_none() {
                        return Ok(Some(p.xstar.clone()));
                    }
                }
                Ok(None)
            }
            Repr::Linear(m) => {
                if !x.is_finitely_supported() || x.prefix_len() > m.cols() {
                    return Ok(None);
                }
                Ok(Some(FinTailSeq::finite(
                    m.mul_vec(x.extended(m.cols()).prefix()),
                )))
            }
            Repr::SeqRule(rule) => match rule.apply(x) {
                Err(Error::NotFinitelySupported) => Ok(None),
                r => r,
            },
            Repr::PullbackL(_) => Err(Error::Unsupported(
                "image of a pullback is not single-valued in general".into(),
            )),
        }
    }
}

/// Result of [`monotone_check`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MonotoneVerdict<T> {
    pub monotone: bool,
    /// `Some(true)` when maximality follows (monotone linear map with full domain).
    pub maximal: Option<bool>,
    /// Smallest `q_L(a - b)` over pairs, or the smallest eigenvalue of the
    /// symmetric part for parametrized graphs.
    pub worst: T,
    /// Truncation the verdict refers to, for sequence rules.
    pub truncation: Option<usize>,
}

/// Monotonicity of the graph: pairwise for clouds, via the symmetric part of
/// the Gram matrix otherwise (on the truncation for sequence rules).
pub fn monotone_check<T: Scalar>(
    s: &OperatorGraph<T>,
    tol: T,
    budget: &Budget,
) -> Result<MonotoneVerdict<T>> {
    if let Repr::Cloud(points) = &s.repr {
        let mut worst = T::zero();
        for (i, a) in points.iter().enumerate() {
            for b in &points[i + 1..] {
                worst = worst.min(a.sub(b)?.q_l()?);
            }
        }
        return Ok(MonotoneVerdict {
            monotone: worst >= -tol,
            maximal: None,
            worst,
            truncation: None,
        });
    }
    let param = s.param(budget).expect("non-cloud graphs are parametrized");
    let worst = param.gram()?.min_symmetric_eigenvalue();
    let monotone = worst >= -tol;
    let full_linear = match &s.repr {
        Repr::Linear(_) => true,
        Repr::PullbackL(inner) => matches!(inner.repr, Repr::Linear(_)),
        _ => false,
    };
    Ok(MonotoneVerdict {
        monotone,
        maximal: (full_linear && monotone).then_some(true),
        worst,
        truncation: (!param.complete).then_some(budget.truncation),
    })
}

fn cloud_sup<T: Scalar>(
    points: &[PairedPoint<T>],
    mut objective: impl FnMut(&PairedPoint<T>) -> Result<T>,
) -> Result<FitzValue<T>> {
    let mut best: Option<(T, &PairedPoint<T>)> = None;
    for p in points {
        let v = objective(p)?;
        if best.is_none_or(|(b, _)| v > b) {
            best = Some((v, p));
        }
    }
    let (value, at) = best.ok_or(Error::EmptyGraph)?;
    Ok(FitzValue {
        value,
        exact: true,
        attained_at: Some(at.clone()),
        truncation: None,
    })
}

fn param_sup<T: Scalar>(
    s: &OperatorGraph<T>,
    budget: &Budget,
    linear_term: impl Fn(&FinTailSeq<T>, &FinTailSeq<T>) -> Result<T>,
) -> Result<FitzValue<T>> {
    let param = s.param(budget).expect("non-cloud graphs are parametrized");
    let g = param
        .p
        .iter()
        .zip(&param.d)
        .map(|(p, d)| linear_term(p, d))
        .collect::<Result<Vec<T>>>()?;
    let q = param.gram()?;
    let sup = concave_quadratic_sup(&q, &g, T::lit(budget.radius));
    Ok(FitzValue {
        value: sup.value,
        exact: param.complete && sup.status == QuadStatus::Exact,
        attained_at: Some(param.point(&sup.arg, s.space)?),
        truncation: (!param.complete).then_some(param.len()),
    })
}

/// `phi_S(x, x*) = sup_{(s, s*) in G(S)} [<s, x*> + <x, s*> - <s, s*>]`.
pub fn fitz_phi<T: Scalar>(
    s: &OperatorGraph<T>,
    b: &PairedPoint<T>,
    budget: &Budget,
) -> Result<FitzValue<T>> {
    match &s.repr {
        Repr::Cloud(points) => cloud_sup(points, |a| {
            Ok(a.x.pair(&b.xstar)? + b.x.pair(&a.xstar)? - a.q_l()?)
        }),
        _ => param_sup(s, budget, |p, d| Ok(p.pair(&b.xstar)? + b.x.pair(d)?)),
    }
}

/// `theta_S(y*, y**) = sup_{(s, s*) in G(S)} [<s, y*> + <s*, y**> - <s, s*>]`.
pub fn fitz_theta<T: Scalar>(
    s: &OperatorGraph<T>,
    cstar: &DualPoint<T>,
    budget: &Budget,
) -> Result<FitzValue<T>> {
    match &s.repr {
        Repr::Cloud(points) => cloud_sup(points, |a| {
            Ok(a.x.pair(&cstar.ystar)? + a.xstar.pair(&cstar.ystarstar)? - a.q_l()?)
        }),
        Repr::PullbackL(inner) if inner.repr == Repr::SeqRule(SeqRule::BsTele) => {
            let th = gallery::bs_theta(&cstar.ystar, &cstar.ystarstar, budget.truncation)?;
            let attained_at = match &th.maximizer {
                Some(xs) => Some(PairedPoint {
                    x: gallery::bs_apply(xs)?,
                    xstar: xs.clone(),
                    space: s.space,
                }),
                None => None,
            };
            Ok(FitzValue {
                value: th.theta,
                // the supremum over all of G(S) is attained at a finitely supported point
                exact: th.mu.is_some() && th.exact,
                attained_at,
                truncation: Some(th.truncation),
            })
        }
        _ => param_sup(s, budget, |p, d| {
            Ok(p.pair(&cstar.ystar)? + d.pair(&cstar.ystarstar)?)
        }),
    }
}

/// `S = G^{-1} L^{-1} G(T)`: `(x, x*)` is on the graph iff `T x* = x^`.
pub fn pullback_via_l<T: Scalar>(inner: OperatorGraph<T>) -> OperatorGraph<T> {
    let space = PairedSpace {
        kind: inner.space.kind,
        norm: inner.space.norm.dual(),
    };
    OperatorGraph {
        repr: Repr::PullbackL(Box::new(inner)),
        space,
    }
}

/// Graph of `S + T`: `(y, u* + v*)` for `(y, u*)` on `S` and `(y, v*)` on `T`.
pub fn op_sum<T: Scalar>(s: &OperatorGraph<T>, t: &OperatorGraph<T>) -> Result<OperatorGraph<T>> {
    if s.space.kind != t.space.kind {
        return Err(Error::DimensionMismatch {
            expected: s.space.dim().unwrap_or(0),
            found: t.space.dim().unwrap_or(0),
        });
    }
    let tol = T::lit(TOL_EXACT);
    match (&s.repr, &t.repr) {
        (Repr::Linear(a), Repr::Linear(b)) => {
            let mut out = OperatorGraph::linear_with_norm(a.add(b)?, s.space.norm)?;
            out.space = s.space;
            Ok(out)
        }
        (Repr::Cloud(a), Repr::Cloud(b)) => {
            let mut points = Vec::new();
            for p in a {
                for q in b {
                    if p.x.first_difference(&q.x, tol)?.is_none() {
                        points.push(PairedPoint {
                            x: p.x.clone(),
                            xstar: p.xstar.add(&q.xstar)?,
                            space: s.space,
                        });
                    }
                }
            }
            OperatorGraph::cloud(points)
        }
        (Repr::Cloud(a), Repr::Linear(_)) | (Repr::Linear(_), Repr::Cloud(a)) => {
            let lin = if matches!(s.repr, Repr::Linear(_)) {
                s
            } else {
                t
            };
            let points = a
                .iter()
                .map(|p| {
                    let image = lin.image_of(&p.x, tol)?.ok_or(Error::EmptyGraph)?;
                    Ok(PairedPoint {
                        x: p.x.clone(),
                        xstar: p.xstar.add(&image)?,
                        space: p.space,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            OperatorGraph::cloud(points)
        }
        _ => Err(Error::Unsupported(
            "sums are defined for clouds and linear maps".into(),
        )),
    }
}

/// Graph of `S^{-1}`: slots swapped.
pub fn op_inverse<T: Scalar>(s: &OperatorGraph<T>) -> Result<OperatorGraph<T>> {
    match &s.repr {
        Repr::Cloud(points) => {
            let space = PairedSpace {
                kind: s.space.kind,
                norm: s.space.norm.dual(),
            };
            OperatorGraph::cloud(
                points
                    .iter()
                    .map(|p| PairedPoint {
                        x: p.xstar.clone(),
                        xstar: p.x.clone(),
                        space,
                    })
                    .collect(),
            )
        }
        Repr::Linear(m) => OperatorGraph::linear_with_norm(m.inverse()?, s.space.norm.dual()),
        _ => Err(Error::Unsupported(
            "inverses are defined for clouds and linear maps".into(),
        )),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MembershipVerdict {
    Member,
    NonMember,
    /// The lower bound is below `q_L~ + tol` but is not known to be the supremum.
    Indeterminate,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound = "")]
pub struct Membership<T: Scalar> {
    pub verdict: MembershipVerdict,
    pub theta: FitzValue<T>,
    pub q_tilde: T,
}

impl<T: Scalar> Membership<T> {
    /// `theta_S(c*) - q_L~(c*)` as far as it is known (a lower bound unless exact).
    pub fn gap(&self) -> T {
        self.theta.value - self.q_tilde
    }
}

/// Whether `c*` lies on the graph of the Fitzpatrick extension, i.e.
/// `theta_S(c*) = q_L~(c*)` within `tol`.
pub fn fitz_ext_membership<T: Scalar>(
    s: &OperatorGraph<T>,
    cstar: &DualPoint<T>,
    tol: T,
    budget: &Budget,
) -> Result<Membership<T>> {
    let theta = fitz_theta(s, cstar, budget)?;
    let q_tilde = cstar.q_lt()?;
    let verdict = if theta.value > q_tilde + tol {
        MembershipVerdict::NonMember
    } else if theta.exact && theta.value >= q_tilde - tol {
        MembershipVerdict::Member
    } else if theta.exact {
        MembershipVerdict::NonMember
    } else {
        MembershipVerdict::Indeterminate
    };
    Ok(Membership {
        verdict,
        theta,
        q_tilde,
    })
}

/// Gossez-extension read of [`fitz_ext_membership`]: `(x**, x*)` is taken in
/// the swapped order of `E** x E*`.
pub fn gossez_membership<T: Scalar>(
    s: &OperatorGraph<T>,
    xstarstar: &FinTailSeq<T>,
    xstar: &FinTailSeq<T>,
    tol: T,
    budget: &Budget,
) -> Result<Membership<T>> {
    let cstar = DualPoint {
        ystar: xstar.clone(),
        ystarstar: xstarstar.clone(),
        space: s.space,
    };
    fitz_ext_membership(s, &cstar, tol, budget)
}

/// Minimizes `r_L((x, Mx) - c)` over `x in R^n` with Euclidean norms by solving
/// `(I + M) x = y + y*`. Returns the graph point and `r_L` of its offset.
pub fn minty_min<T: Scalar>(m: &DenseMatrix<T>, c: &PairedPoint<T>) -> Result<(PairedPoint<T>, T)> {
    let n = m.rows();
    if !m.is_square() || c.space != PairedSpace::euclidean(n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: c.space.dim().unwrap_or(0),
        });
    }
    let mut a = m.clone();
    for i in 0..n {
        a.set(i, i, a.get(i, i) + T::one());
    }
    let rhs: Vec<T> =
        c.x.prefix()
            .iter()
            .zip(c.xstar.prefix())
            .map(|(&u, &v)| u + v)
            .collect();
    let x = a.solve(&rhs)?;
    let witness = PairedPoint::euclidean(&x, &m.mul_vec(&x))?;
    let value = witness.sub(c)?.r_l()?;
    Ok((witness, value))
}

/// `theta_S(L b)`, equal to `phi_S(b)`.
pub fn theta_at_l<T: Scalar>(
    s: &OperatorGraph<T>,
    b: &PairedPoint<T>,
    budget: &Budget,
) -> Result<FitzValue<T>> {
    fitz_theta(s, &apply_l(b), budget)
}

/// JSON description of an operator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "repr", rename_all = "lowercase", deny_unknown_fields)]
pub enum OperatorSpec {
    Cloud {
        points: Vec<PointSpec>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        norm: Option<NormKind>,
    },
    Linear {
        matrix: Vec<Vec<f64>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        norm: Option<NormKind>,
    },
    Seqrule {
        rule: SeqRule,
    },
    Pullback {
        inner: Box<OperatorSpec>,
    },
}

/// A point as `[x, xstar]` or `{"x": .., "xstar": ..}`; each slot is a number,
/// an array, or a sequence in canonical text form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PointSpec {
    Pair(FinTailSeq<f64>, FinTailSeq<f64>),
    Named {
        x: FinTailSeq<f64>,
        xstar: FinTailSeq<f64>,
    },
}

impl PointSpec {
    fn slots(&self) -> (&FinTailSeq<f64>, &FinTailSeq<f64>) {
        match self {
            PointSpec::Pair(x, xs) | PointSpec::Named { x, xstar: xs } => (x, xs),
        }
    }
}

fn convert<T: Scalar>(v: &FinTailSeq<f64>) -> FinTailSeq<T> {
    use crate::seq::Tail;
    let tail = match v.tail() {
        Tail::Zero => Tail::Zero,
        Tail::Const(c) => Tail::Const(T::lit(c)),
        Tail::Alt(c) => Tail::Alt(T::lit(c)),
    };
    FinTailSeq::new(v.prefix().iter().map(|&c| T::lit(c)).collect(), tail)
}

impl OperatorSpec {
    pub fn build<T: Scalar>(&self) -> Result<OperatorGraph<T>> {
        match self {
            OperatorSpec::Cloud { points, norm } => {
                let finite = points.iter().all(|p| {
                    let (x, xs) = p.slots();
                    x.is_finitely_supported()
                        && xs.is_finitely_supported()
                        && x.prefix_len() == xs.prefix_len()
                });
                let n = points.first().map_or(0, |p| p.slots().0.prefix_len());
                let space = match (finite, norm) {
                    (true, Some(k)) => PairedSpace::euclidean_with(n, *k),
                    (true, None) => PairedSpace::euclidean(n),
                    (false, Some(NormKind::L1)) => PairedSpace::l1(),
                    (false, _) => PairedSpace::c0(),
                };
                let pts = points
                    .iter()
                    .map(|p| {
                        let (x, xs) = p.slots();
                        PairedPoint::new(space, convert(x), convert(xs))
                    })
                    .collect::<Result<Vec<_>>>()?;
                OperatorGraph::cloud(pts)
            }
            OperatorSpec::Linear { matrix, norm } => {
                let rows: Vec<Vec<T>> = matrix
                    .iter()
                    .map(|r| r.iter().map(|&v| T::lit(v)).collect())
                    .collect();
                OperatorGraph::linear_with_norm(
                    DenseMatrix::from_rows(&rows)?,
                    norm.unwrap_or(NormKind::L2),
                )
            }
            OperatorSpec::Seqrule { rule } => Ok(OperatorGraph::seq_rule(*rule)),
            OperatorSpec::Pullback { inner } => Ok(pullback_via_l(inner.build()?)),
        }
    }
}

impl<T: Scalar> OperatorGraph<T> {
    pub fn to_spec(&self) -> OperatorSpec {
        let back = |v: &FinTailSeq<T>| convert::<f64>(&map_seq(v));
        match &self.repr {
            Repr::Cloud(points) => OperatorSpec::Cloud {
                points: points
                    .iter()
                    .map(|p| PointSpec::Pair(back(&p.x), back(&p.xstar)))
                    .collect(),
                norm: Some(self.space.norm),
            },
            Repr::Linear(m) => OperatorSpec::Linear {
                matrix: m
                    .to_rows()
                    .into_iter()
                    .map(|r| r.into_iter().map(Scalar::as_f64).collect())
                    .collect(),
                norm: Some(self.space.norm),
            },
            Repr::SeqRule(rule) => OperatorSpec::Seqrule { rule: *rule },
            Repr::PullbackL(inner) => OperatorSpec::Pullback {
                inner: Box::new(inner.to_spec()),
            },
        }
    }
}

fn map_seq<T: Scalar>(v: &FinTailSeq<T>) -> FinTailSeq<f64> {
    use crate::seq::Tail;
    let tail = match v.tail() {
        Tail::Zero => Tail::Zero,
        Tail::Const(c) => Tail::Const(c.as_f64()),
        Tail::Alt(c) => Tail::Alt(c.as_f64()),
    };
    FinTailSeq::new(v.prefix().iter().map(|c| c.as_f64()).collect(), tail)
}
