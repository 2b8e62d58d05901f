//! Quasidensity probes: numerical minimization of `r_L(A - c)` with
//! certificates, the constructive primal iteration on grid functions, the
//! type (NI) inequality and the dual condition `f* >= q_L~`.

use std::thread;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::convexcalc::{conjugate, q_coords, slope_lattice, GridFunction, Lattice};
use crate::error::{Error, Result};
use crate::linalg::{dot, DenseMatrix};
use crate::operators::{fitz_theta, minty_min, Budget, OperatorGraph, Repr, SeqRule};
use crate::sampling::rng;
use crate::scalar::{Scalar, TOL_EXACT};
use crate::seq::FinTailSeq;
use crate::spaces::{DualPoint, NormKind, PairedPoint, PairedSpace, SpaceKind};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict<T> {
    QuasidenseEvidence,
    NotQuasidense(T),
    Indeterminate,
}

/// A certified lower bound on `inf r_L(A - c)` and where it comes from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LowerBound<T> {
    pub value: T,
    pub provenance: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceEntry<T> {
    pub stage: String,
    pub value: T,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct Certificate<T: Scalar> {
    pub probe: PairedPoint<T>,
    /// Upper bound on `inf r_L(A - c)`, attained at `witness`.
    pub inf_estimate: T,
    pub witness: PairedPoint<T>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lower_bound: Option<LowerBound<T>>,
    pub verdict: Verdict<T>,
    pub trace: Vec<TraceEntry<T>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProbeBudget {
    pub truncation: usize,
    /// Subgradient iterations per start.
    pub iterations: usize,
    /// Random starts in addition to `u = 0`.
    pub restarts: usize,
    pub seed: u64,
    /// Box radius for the descent variables.
    pub radius: f64,
    pub tol: f64,
}

impl Default for ProbeBudget {
    fn default() -> Self {
        Self {
            truncation: 64,
            iterations: 200,
            restarts: 8,
            seed: 0,
            radius: 1e6,
            tol: crate::scalar::TOL_OPT,
        }
    }
}

impl ProbeBudget {
    fn graph_budget(&self) -> Budget {
        Budget::with_truncation(self.truncation)
    }
}

fn verdict_for<T: Scalar>(inf: T, lb: &Option<LowerBound<T>>, tol: T) -> Verdict<T> {
    if inf <= tol {
        Verdict::QuasidenseEvidence
    } else {
        match lb {
            Some(b) if b.value > tol => Verdict::NotQuasidense(b.value),
            _ => Verdict::Indeterminate,
        }
    }
}

fn close<T: Scalar>(a: &FinTailSeq<T>, b: &FinTailSeq<T>) -> bool {
    matches!(a.first_difference(b, T::lit(TOL_EXACT)), Ok(None))
}

/// Closed-form lower bounds for the gallery operators at their distinguished probes.
fn gallery_bound<T: Scalar>(a: &OperatorGraph<T>, c: &PairedPoint<T>) -> Option<LowerBound<T>> {
    match a.repr() {
        Repr::SeqRule(SeqRule::SkewQ)
            if close(&c.x, &FinTailSeq::unit(0)) && close(&c.xstar, &FinTailSeq::zeros(0)) =>
        {
            Some(LowerBound {
                value: T::lit(0.1),
                provenance: "skew_bound".into(),
            })
        }
        Repr::SeqRule(SeqRule::BsTele)
            if close(&c.x, &FinTailSeq::zeros(0)) && close(&c.xstar, &FinTailSeq::ones()) =>
        {
            Some(LowerBound {
                value: T::lit(0.25),
                provenance: "bs_bound".into(),
            })
        }
        _ => None,
    }
}

/// Estimates `inf_{a in A} r_L(a - c)` and issues a certificate.
///
/// Clouds are scanned exactly. Complete parametrizations in Euclidean `L2`
/// spaces are solved exactly (`r_L = ½‖x + x*‖²` there); everything else runs
/// projected subgradient descent from `u = 0` and `restarts` random starts.
pub fn probe<T: Scalar>(
    a: &OperatorGraph<T>,
    c: &PairedPoint<T>,
    budget: &ProbeBudget,
) -> Result<Certificate<T>> {
    let space = a.space();
    if c.space.kind != space.kind {
        return Err(Error::DimensionMismatch {
            expected: space.dim().unwrap_or(0),
            found: c.space.dim().unwrap_or(0),
        });
    }
    let tol = T::lit(budget.tol);
    let mut trace = Vec::new();
    let (inf, witness, exact) = match a.repr() {
        Repr::Cloud(points) => {
            let mut best: Option<(T, &PairedPoint<T>)> = None;
            for p in points {
                let v = p.sub(c)?.r_l()?;
                if best.is_none_or(|(b, _)| v < b) {
                    best = Some((v, p));
                }
            }
            let (v, w) = best.ok_or(Error::EmptyGraph)?;
            trace.push(TraceEntry {
                stage: format!("scan {} points", points.len()),
                value: v,
            });
            (v, w.clone(), true)
        }
        _ => {
            let param = a.param(&budget.graph_budget()).ok_or(Error::EmptyGraph)?;
            let euclid_l2 =
                matches!(space.kind, SpaceKind::Euclidean(_)) && space.norm == NormKind::L2;
            if euclid_l2 && param.complete {
                let (w, v) = euclidean_min(a, &param, c)?;
                trace.push(TraceEntry {
                    stage: "closed form".into(),
                    value: v,
                });
                (v, w, true)
            } else {
                let (v, w) = descend(&param, c, space, budget, &mut trace)?;
                (v, w, false)
            }
        }
    };
    let lower_bound = if exact {
        Some(LowerBound {
            value: inf,
            provenance: "exact_min".into(),
        })
    } else {
        gallery_bound(a, c)
    };
    let verdict = verdict_for(inf, &lower_bound, tol);
    Ok(Certificate {
        probe: c.clone(),
        inf_estimate: inf,
        witness,
        lower_bound,
        verdict,
        trace,
    })
}

/// Runs [`probe`] on each point, in parallel, keeping input order.
pub fn probe_batch<T: Scalar>(
    a: &OperatorGraph<T>,
    cs: &[PairedPoint<T>],
    budget: &ProbeBudget,
) -> Vec<Result<Certificate<T>>> {
    let workers = thread::available_parallelism()
        .map_or(1, |n| n.get())
        .min(cs.len().max(1));
    let chunk = cs.len().div_ceil(workers).max(1);
    thread::scope(|s| {
        let handles: Vec<_> = cs
            .chunks(chunk)
            .map(|part| {
                s.spawn(move || part.iter().map(|c| probe(a, c, budget)).collect::<Vec<_>>())
            })
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("probe worker panicked"))
            .collect()
    })
}

fn euclidean_min<T: Scalar>(
    a: &OperatorGraph<T>,
    param: &crate::operators::GraphParam<T>,
    c: &PairedPoint<T>,
) -> Result<(PairedPoint<T>, T)> {
    if let Repr::Linear(m) = a.repr() {
        match minty_min(m, c) {
            Err(Error::Singular) => {}
            r => return r,
        }
    }
    let n = a.space().dim().unwrap_or(0);
    let sum = DenseMatrix::from_fn(n, param.len(), |i, j| param.p[j].get(i) + param.d[j].get(i));
    let target: Vec<T> = (0..n).map(|i| c.x.get(i) + c.xstar.get(i)).collect();
    let u = sum.least_squares(&target);
    let w = param.point(&u, a.space())?;
    let v = w.sub(c)?.r_l()?;
    Ok((w, v))
}

/// `½‖v‖²` and a subgradient on the first `m` coordinates.
fn half_sq<T: Scalar>(v: &FinTailSeq<T>, kind: NormKind, m: usize) -> Result<(T, Vec<T>)> {
    let n = v.norm(kind)?;
    let mut g = vec![T::zero(); m];
    match kind {
        NormKind::L2 => g.iter_mut().enumerate().for_each(|(i, gi)| *gi = v.get(i)),
        NormKind::L1 => g
            .iter_mut()
            .enumerate()
            .for_each(|(i, gi)| *gi = n * sign(v.get(i))),
        NormKind::LInf => {
            if let Some(k) = (0..m).find(|&i| v.get(i).abs() == n && n > T::zero()) {
                g[k] = n * sign(v.get(k));
            }
        }
    }
    Ok((n * n * T::half(), g))
}

fn sign<T: Scalar>(t: T) -> T {
    if t > T::zero() {
        T::one()
    } else if t < T::zero() {
        -T::one()
    } else {
        T::zero()
    }
}

struct Affine<'a, T: Scalar> {
    p: Vec<Vec<T>>,
    d: Vec<Vec<T>>,
    c: &'a PairedPoint<T>,
    space: PairedSpace,
    m: usize,
}

impl<T: Scalar> Affine<'_, T> {
    fn offsets(&self, u: &[T]) -> Result<(FinTailSeq<T>, FinTailSeq<T>)> {
        let mut x = vec![T::zero(); self.m];
        let mut xs = vec![T::zero(); self.m];
        for (j, &uj) in u.iter().enumerate() {
            for i in 0..self.m {
                x[i] = x[i] + uj * self.p[j][i];
                xs[i] = xs[i] + uj * self.d[j][i];
            }
        }
        Ok((
            FinTailSeq::finite(x).sub(&self.c.x)?,
            FinTailSeq::finite(xs).sub(&self.c.xstar)?,
        ))
    }

    fn eval(&self, u: &[T]) -> Result<(T, Vec<T>)> {
        let (x, xs) = self.offsets(u)?;
        let (hx, mut gx) = half_sq(&x, self.space.norm, self.m)?;
        let (hxs, mut gxs) = half_sq(&xs, self.space.dual_norm(), self.m)?;
        for i in 0..self.m {
            gx[i] = gx[i] + xs.get(i);
            gxs[i] = gxs[i] + x.get(i);
        }
        let value = hx + hxs + x.pair(&xs)?;
        let grad = (0..u.len())
            .map(|j| dot(&self.p[j], &gx) + dot(&self.d[j], &gxs))
            .collect();
        Ok((value, grad))
    }
}

fn descend<T: Scalar>(
    param: &crate::operators::GraphParam<T>,
    c: &PairedPoint<T>,
    space: PairedSpace,
    budget: &ProbeBudget,
    trace: &mut Vec<TraceEntry<T>>,
) -> Result<(T, PairedPoint<T>)> {
    let m = param
        .p
        .iter()
        .chain(&param.d)
        .map(FinTailSeq::prefix_len)
        .chain([c.x.prefix_len(), c.xstar.prefix_len()])
        .max()
        .unwrap_or(0);
    let col = |v: &FinTailSeq<T>| (0..m).map(|i| v.get(i)).collect::<Vec<T>>();
    let f = Affine {
        p: param.p.iter().map(col).collect(),
        d: param.d.iter().map(col).collect(),
        c,
        space,
        m,
    };
    let radius = T::lit(budget.radius);
    let start_scale = c.norm().map_or(1.0, |n| n.as_f64()).max(1.0);
    let mut gen = rng(budget.seed);
    let mut best_u = vec![T::zero(); param.len()];
    let mut best = f.eval(&best_u)?.0;
    for start in 0..=budget.restarts {
        let mut u: Vec<T> = if start == 0 {
            vec![T::zero(); param.len()]
        } else {
            (0..param.len())
                .map(|_| T::lit(gen.gen_range(-start_scale..=start_scale)))
                .collect()
        };
        let (v0, _) = f.eval(&u)?;
        let mut run_best = v0;
        let mut run_u = u.clone();
        let delta0 = v0.max(T::lit(1e-3)) * T::half();
        for k in 0..budget.iterations {
            let (v, g) = f.eval(&u)?;
            if v < run_best {
                run_best = v;
                run_u.clone_from(&u);
            }
            let gg = dot(&g, &g);
            if gg <= T::zero() || !gg.is_finite() {
                break;
            }
            let target = (run_best - delta0 / T::lit((k + 1) as f64)).max(T::zero());
            let step = (v - target) / gg;
            for (ui, gi) in u.iter_mut().zip(&g) {
                *ui = (*ui - step * *gi).max(-radius).min(radius);
            }
        }
        let (v, _) = f.eval(&u)?;
        if v < run_best {
            run_best = v;
            run_u = u;
        }
        trace.push(TraceEntry {
            stage: format!("start {start}"),
            value: run_best,
        });
        if run_best < best {
            best = run_best;
            best_u = run_u;
        }
    }
    Ok((best, param.point(&best_u, space)?))
}

/// Summable tolerance schedule `eps_1 >= eps_2 >= ... > 0` with `sum <= eps`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct EpsSchedule<T: Scalar> {
    pub eps: T,
    /// Explicit leading terms; `None` means `eps_n = eps / 2^n`.
    terms: Option<Vec<T>>,
}

impl<T: Scalar> EpsSchedule<T> {
    pub fn geometric(eps: T) -> Result<Self> {
        if !(eps > T::zero() && eps < T::one()) {
            return Err(Error::InvalidArgument(format!(
                "eps must lie in (0, 1), got {eps}"
            )));
        }
        Ok(Self { eps, terms: None })
    }

    /// A finite schedule; iteration stops once the terms run out.
    pub fn from_terms(eps: T, terms: Vec<T>) -> Result<Self> {
        let ok = terms.first().is_some_and(|&t| t <= T::one())
            && terms.iter().all(|&t| t > T::zero())
            && terms.windows(2).all(|w| w[1] <= w[0])
            && terms.iter().copied().sum::<T>() <= eps;
        if !ok {
            return Err(Error::InvalidArgument(
                "terms must be positive, nonincreasing, start at most 1 and sum to at most eps"
                    .into(),
            ));
        }
        Ok(Self {
            eps,
            terms: Some(terms),
        })
    }

    /// `eps_n` for `n >= 1`.
    pub fn term(&self, n: usize) -> Option<T> {
        match &self.terms {
            None => Some(self.eps / T::lit(2f64.powi(n as i32))),
            Some(t) => t.get(n.checked_sub(1)?).copied(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound = "")]
pub struct PrimalStep<T: Scalar> {
    pub level: usize,
    /// `eps_{n+1}^2`, the target of the inner solve.
    pub target: T,
    /// `(f - q_L)(c_{n+1}) + r_L(c_{n+1} - c_n)`.
    pub achieved: T,
    pub point: PairedPoint<T>,
    pub step_norm: T,
    /// `sqrt(10) eps_n`, for `n >= 1`.
    pub step_bound: Option<T>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound = "")]
pub struct PrimalIterate<T: Scalar> {
    pub a_eps: PairedPoint<T>,
    /// `r_L(a_eps - c)`.
    pub r_l: T,
    /// `(17 + 8M) eps`.
    pub bound: T,
    /// Largest `‖b - c‖` over nodes with `(f - q_L)(b) + r_L(b - c) <= 1`.
    pub m: T,
    /// `(f - q_L)(a_eps)`.
    pub gap: T,
    pub steps: Vec<PrimalStep<T>>,
}

impl<T: Scalar> PrimalIterate<T> {
    pub fn steps_within_bound(&self, slack: T) -> bool {
        self.steps
            .iter()
            .all(|s| s.step_bound.is_none_or(|b| s.step_norm <= b + slack))
    }
}

fn node_point<T: Scalar>(node: &[T]) -> PairedPoint<T> {
    let n = node.len() / 2;
    PairedPoint::euclidean(&node[..n], &node[n..]).expect("halves have equal length")
}

fn coords_of<T: Scalar>(c: &PairedPoint<T>, n: usize) -> Result<Vec<T>> {
    if c.space.dim() != Some(n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: c.space.dim().unwrap_or(0),
        });
    }
    Ok(c.coords())
}

fn r_coords<T: Scalar>(v: &[T]) -> T {
    dot(v, v) * T::half() + q_coords(v)
}

/// Constructive iteration behind the primal condition, on a grid function
/// `f >= q_L` over `R^n x R^n` with Euclidean norms.
///
/// Each level picks the node `c_{n+1}` minimizing
/// `(f - q_L)(g) + r_L(g - c_n)` and fails if the minimum exceeds
/// `eps_{n+1}^2`. Iteration stops when the iterate is stationary, the
/// schedule runs out, or after `max_levels` levels.
pub fn primal_iterate<T: Scalar>(
    f: &GridFunction<T>,
    c: &PairedPoint<T>,
    sched: &EpsSchedule<T>,
    max_levels: usize,
    tol: T,
) -> Result<PrimalIterate<T>> {
    let lattice = f.lattice();
    if !lattice.is_paired() {
        return Err(Error::InvalidGrid(
            "primal_iterate needs a paired lattice".into(),
        ));
    }
    let d = lattice.dim();
    let nodes: Vec<Vec<T>> = (0..f.len()).map(|i| f.node(i)).collect();
    let mut gaps = Vec::with_capacity(f.len());
    for (i, node) in nodes.iter().enumerate() {
        let gap = f.value(i) - q_coords(node);
        if gap < -tol {
            return Err(Error::DominationViolated {
                node: i,
                amount: (-gap).as_f64(),
            });
        }
        gaps.push(gap.max(T::zero()));
    }
    let c0 = coords_of(c, d / 2)?;
    let diff = |g: &[T], h: &[T]| g.iter().zip(h).map(|(&a, &b)| a - b).collect::<Vec<T>>();

    let mut m = T::zero();
    for (node, &gap) in nodes.iter().zip(&gaps) {
        let b = diff(node, &c0);
        if gap.is_finite() && gap + r_coords(&b) <= T::one() {
            m = m.max(dot(&b, &b).sqrt());
        }
    }

    let mut current = c0.clone();
    let mut steps = Vec::new();
    let mut last = None;
    for level in 0..max_levels {
        let Some(eps_next) = sched.term(level + 1) else {
            break;
        };
        let target = eps_next * eps_next;
        // ties go to the shortest step, then to the lowest index
        let mut best: Option<(T, T, usize)> = None;
        for (i, (node, &gap)) in nodes.iter().zip(&gaps).enumerate() {
            if !gap.is_finite() {
                continue;
            }
            let b = diff(node, &current);
            let v = gap + r_coords(&b);
            let len = dot(&b, &b);
            if best.is_none_or(|(bv, bl, _)| v < bv || (v == bv && len < bl)) {
                best = Some((v, len, i));
            }
        }
        let (achieved, _, idx) = best.ok_or(Error::Improper)?;
        if achieved > target {
            return Err(Error::InnerSolveFailed {
                level,
                target: target.as_f64(),
                best: achieved.as_f64(),
            });
        }
        let step = diff(&nodes[idx], &current);
        let step_norm = dot(&step, &step).sqrt();
        let step_bound = (level >= 1)
            .then(|| sched.term(level).map(|e| T::lit(10f64.sqrt()) * e))
            .flatten();
        steps.push(PrimalStep {
            level,
            target,
            achieved,
            point: node_point(&nodes[idx]),
            step_norm,
            step_bound,
        });
        current.clone_from(&nodes[idx]);
        let stationary = last == Some(idx);
        last = Some(idx);
        if stationary {
            break;
        }
    }
    let Some(idx) = last else {
        return Err(Error::InvalidArgument("the schedule has no terms".into()));
    };
    let a = node_point(&nodes[idx]);
    let r_l = r_coords(&diff(&nodes[idx], &c0));
    Ok(PrimalIterate {
        a_eps: a,
        r_l,
        bound: (T::lit(17.0) + T::lit(8.0) * m) * sched.eps,
        m,
        gap: gaps[idx],
        steps,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound = "")]
pub struct NiReport<T: Scalar> {
    /// Smallest `q_L~(La - c*)` found; `-radius`-scale values stand in for `-inf`.
    pub value: T,
    /// Whether `q_L~(L(A) - c*)` is known to be unbounded below.
    pub unbounded: bool,
    pub witness: Option<PairedPoint<T>>,
    pub pass: bool,
}

/// Type (NI) inequality at `c*`: `inf_{a in A} q_L~(La - c*) <= tol`.
///
/// Uses `inf q_L~(L(A) - c*) = q_L~(c*) - theta_A(c*)`.
pub fn ni_check<T: Scalar>(
    a: &OperatorGraph<T>,
    cstar: &DualPoint<T>,
    tol: T,
    budget: &Budget,
) -> Result<NiReport<T>> {
    let theta = fitz_theta(a, cstar, budget)?;
    let value = cstar.q_lt()? - theta.value;
    let complete = a.param(budget).is_none_or(|p| p.complete);
    let unbounded = !theta.exact && complete;
    Ok(NiReport {
        value,
        unbounded,
        witness: theta.attained_at,
        pass: unbounded || value <= tol,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound = "")]
pub struct DualCheck<T: Scalar> {
    /// `min (f* - q_L~)` over finite nodes of the dual lattice.
    pub min_gap: T,
    pub at: Vec<T>,
    pub pass: bool,
}

/// Conjugates `f` on `dual` (default: its slope lattice) and reports the
/// smallest value of `f* - q_L~`.
pub fn dual_condition_check<T: Scalar>(
    f: &GridFunction<T>,
    dual: Option<&Lattice>,
    tol: T,
) -> Result<DualCheck<T>> {
    if !f.lattice().is_paired() {
        return Err(Error::InvalidGrid(
            "the dual condition needs a paired lattice".into(),
        ));
    }
    let owned;
    let dual = match dual {
        Some(l) => l,
        None => {
            owned = slope_lattice(f)?;
            &owned
        }
    };
    let fs = conjugate(f, dual)?;
    let mut min_gap = T::infinity();
    let mut at = Vec::new();
    for i in 0..fs.len() {
        let v = fs.value(i);
        if !v.is_finite() {
            continue;
        }
        let node = fs.node(i);
        let gap = v - q_coords(&node);
        if gap < min_gap {
            min_gap = gap;
            at = node;
        }
    }
    Ok(DualCheck {
        min_gap,
        at,
        pass: min_gap >= -tol,
    })
}
