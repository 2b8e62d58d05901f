use std::thread;

use clap::ValueEnum;
use quasidense::gallery::{self, SkewDomainElement};
use quasidense::quasidensity::{
    dual_condition_check, ni_check, primal_iterate, probe, ProbeBudget, Verdict,
};
use quasidense::sampling::{
    random_dual, random_monotone_matrix, random_paired, random_paired_in, rng, LabRng,
};
use quasidense::{
    apply_l, at_transform, biconjugate_envelope, coincidence_set, conjugate, episum,
    fitz_ext_membership, fitz_phi, fitz_theta, minty_min, monotone_check, pairing, pullback_via_l,
    shift_by, Axis, Budget, DenseMatrix, DualPoint, EpisumAxis, EpsSchedule, FinTailSeq,
    GridFunction, Lattice, MembershipVerdict, NormKind, OperatorGraph, PairedPoint, PairedSpace,
    SeqRule, TOL_SUM,
};
use rand::Rng;

use crate::config::RunConfig;
use crate::report::{MinSlack, Row, Worst};
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Identities,
    Conjugates,
    Episums,
    Fitzpatrick,
    Quasidensity,
    Gallery,
    All,
}

impl Suite {
    const PARTS: [Suite; 6] = [
        Suite::Identities,
        Suite::Conjugates,
        Suite::Episums,
        Suite::Fitzpatrick,
        Suite::Quasidensity,
        Suite::Gallery,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Identities => "identities",
            Suite::Conjugates => "conjugates",
            Suite::Episums => "episums",
            Suite::Fitzpatrick => "fitzpatrick",
            Suite::Quasidensity => "quasidensity",
            Suite::Gallery => "gallery",
            Suite::All => "all",
        }
    }
}

type Rows = Result<Vec<Row>, CliError>;

/// Runs a suite; `all` fans the parts out over threads and concatenates in order.
pub fn run(suite: Suite, cfg: &RunConfig) -> Rows {
    match suite {
        Suite::Identities => identities(cfg),
        Suite::Conjugates => conjugates(cfg),
        Suite::Episums => episums(cfg),
        Suite::Fitzpatrick => fitzpatrick(cfg),
        Suite::Quasidensity => quasidensity(cfg),
        Suite::Gallery => gallery_suite(cfg),
        Suite::All => thread::scope(|s| {
            let handles: Vec<_> = Suite::PARTS
                .iter()
                .map(|&part| s.spawn(move || run(part, cfg)))
                .collect();
            let mut rows = Vec::new();
            for h in handles {
                rows.extend(h.join().expect("suite worker panicked")?);
            }
            Ok(rows)
        }),
    }
}

fn rng_for(cfg: &RunConfig, salt: u64) -> LabRng {
    rng(cfg.seed ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

pub fn identities(cfg: &RunConfig) -> Rows {
    let tol = cfg.tol_exact;
    let mut rows = Vec::new();
    let samples = 10_000;
    for (label, space) in [
        ("R^4 l2", PairedSpace::euclidean(4)),
        ("R^4 l1", PairedSpace::euclidean_with(4, NormKind::L1)),
        ("R^4 linf", PairedSpace::euclidean_with(4, NormKind::LInf)),
        ("c0 N=16", PairedSpace::c0()),
    ] {
        let mut g = rng_for(cfg, 1);
        let (mut rl2, mut qd2, mut lsym, mut lnorm) = (
            Worst::default(),
            Worst::default(),
            Worst::default(),
            Worst::default(),
        );
        let (mut rl3, mut bb1, mut rllem) = (
            MinSlack::default(),
            MinSlack::default(),
            MinSlack::default(),
        );
        for _ in 0..samples {
            let b = random_paired_in::<f64>(&mut g, space, 16, 1.0);
            let c = random_paired_in::<f64>(&mut g, space, 16, 1.0);
            let bs = apply_l(&random_paired_in::<f64>(&mut g, space, 16, 1.0));
            let lc = apply_l(&c);
            rl2.see(b.sub(&c)?.q_l()? - (b.q_l()? + c.q_l()? - pairing(&b, &lc)?));
            qd2.see(bs.add(&lc)?.q_lt()? - bs.q_lt()? - pairing(&c, &bs)? - c.q_l()?);
            lsym.see(pairing(&b, &lc)? - pairing(&c, &apply_l(&b))?);
            lnorm.see(lc.norm()? - c.norm()?);
            let r = b.r_l()?;
            rl3.see(r.min(b.norm_sq()? - r));
            bb1.see(b.r_l()? + bs.r_lt()? - apply_l(&b).add(&bs)?.q_lt()?);
            rllem.see(b.r_l()? + 2.0 * b.norm()? * c.norm()? + c.r_l()? - b.add(&c)?.r_l()?);
        }
        rows.push(Row::new(
            format!("q_L(b-c) expansion, {label}"),
            "RL2",
            rl2.0,
            tol,
        ));
        rows.push(Row::slack(
            format!("0 <= r_L <= |b|^2, {label}"),
            "RL3",
            rl3.0,
            tol,
        ));
        rows.push(Row::new(
            format!("q_L~(c*+Lc) expansion, {label}"),
            "QD2",
            qd2.0,
            tol,
        ));
        rows.push(Row::slack(
            format!("q_L~(Lb+b*) <= r_L(b)+r_L~(b*), {label}"),
            "BB1",
            bb1.0,
            tol,
        ));
        rows.push(Row::slack(
            format!("r_L(b+d) triangle bound, {label}"),
            "RLlem",
            rllem.0,
            tol,
        ));
        rows.push(Row::new(
            format!("<a,Lb> = <b,La>, {label}"),
            "Ldef",
            lsym.0,
            tol,
        ));
        rows.push(Row::new(
            format!("|Ld| = |d|, {label}"),
            "Ldef",
            lnorm.0,
            tol,
        ));
    }

    let mut g = rng_for(cfg, 2);
    let mut closed = Worst::default();
    for _ in 0..samples {
        let v: [f64; 4] = std::array::from_fn(|_| g.gen_range(-3.0..=3.0));
        let d = PairedPoint::scalar(v[0] - v[2], v[1] - v[3]);
        closed.see(d.r_l()? - 0.5 * (v[0] + v[1] - v[2] - v[3]).powi(2));
    }
    rows.push(Row::new("r_L closed form on R", "QDneNI", closed.0, tol));
    let mut l2 = Worst::default();
    for _ in 0..100 {
        let b = random_paired::<f64>(&mut g, 5, 2.0);
        let s: f64 =
            b.x.prefix()
                .iter()
                .zip(b.xstar.prefix())
                .map(|(a, c)| (a + c) * (a + c))
                .sum();
        l2.see(b.r_l()? - 0.5 * s);
    }
    rows.push(Row::new("r_L = 1/2 |x + x*|^2 in l2", "RL1", l2.0, tol));
    Ok(rows)
}

fn line(min: f64, max: f64, step: f64) -> Result<Lattice, CliError> {
    Ok(Lattice::new(vec![Axis::new(min, max, step)?])?)
}

/// Quadratics `a x^2 + b x` on 129 nodes of `[-2, 2]` with a few raised nodes.
pub fn bumped_family(g: &mut LabRng, count: usize) -> Result<Vec<GridFunction<f64>>, CliError> {
    let lat = line(-2.0, 2.0, 1.0 / 32.0)?;
    (0..count)
        .map(|_| {
            let a = g.gen_range(0.5..=2.0);
            let b = g.gen_range(-1.0..=1.0);
            let mut h = GridFunction::from_fn(lat.clone(), |v: &[f64]| a * v[0] * v[0] + b * v[0])?;
            let mut values = h.values().to_vec();
            for _ in 0..g.gen_range(1..=3) {
                let i = g.gen_range(1..values.len() - 1);
                values[i] += g.gen_range(0.05..=1.0);
            }
            h = GridFunction::new(lat.clone(), values)?;
            Ok(h)
        })
        .collect()
}

pub fn conjugates(cfg: &RunConfig) -> Rows {
    let mut rows = Vec::new();
    let h = 1.0 / 64.0;
    let f = GridFunction::from_fn(line(-4.0, 4.0, h)?, |v: &[f64]| 0.5 * v[0] * v[0])?;
    let dual = line(-2.0, 2.0, h)?;
    let fs = conjugate(&f, &dual)?;
    let mut err = Worst::default();
    for i in 0..fs.len() {
        let y = fs.node(i)[0];
        err.see(fs.value(i) - 0.5 * y * y);
    }
    let bound = f.lipschitz_estimate() * h;
    rows.push(Row::new(
        "(x^2/2)* = y^2/2 on [-2,2]",
        "FSTAR",
        err.0,
        bound,
    ));
    let mut fy = MinSlack::default();
    for i in 0..f.len() {
        for j in 0..fs.len() {
            fy.see(f.value(i) + fs.value(j) - f.node(i)[0] * fs.node(j)[0]);
        }
    }
    rows.push(Row::slack(
        "Fenchel-Young f + f* >= <x,y>",
        "FSTAR",
        fy.0,
        TOL_SUM,
    ));

    let lat = line(-1.0, 1.0, 0.125)?;
    let ind = GridFunction::from_fn(
        lat.clone(),
        |v: &[f64]| if v[0] == 0.0 { 0.0 } else { f64::INFINITY },
    )?;
    let is = conjugate(&ind, &lat)?;
    rows.push(Row::new(
        "indicator of {0} has zero conjugate",
        "FSTAR",
        is.values().iter().fold(0.0, |m: f64, v| m.max(v.abs())),
        cfg.tol_exact,
    ));

    let mut g = rng_for(cfg, 3);
    let mut order = MinSlack::default();
    for _ in 0..50 {
        let lower: Vec<f64> = (0..lat.size()).map(|_| g.gen_range(-1.0..=1.0)).collect();
        let upper: Vec<f64> = lower.iter().map(|v| v + g.gen_range(0.0..=1.0)).collect();
        let lo = conjugate(&GridFunction::new(lat.clone(), lower)?, &lat)?;
        let up = conjugate(&GridFunction::new(lat.clone(), upper)?, &lat)?;
        for (a, b) in lo.values().iter().zip(up.values()) {
            order.see(a - b);
        }
    }
    rows.push(Row::slack(
        "f <= g implies f* >= g*",
        "FSTAR",
        order.0,
        cfg.tol_exact,
    ));

    let mut below = MinSlack::default();
    let mut conj = Worst::default();
    let mut worst_ratio = 0.0f64;
    for h in bumped_family(&mut g, 20)? {
        let env = biconjugate_envelope(&h)?;
        for (e, v) in env.values().iter().zip(h.values()) {
            below.see(v - e);
        }
        let dual = quasidense::convexcalc::slope_lattice(&h)?;
        let hs = conjugate(&h, &dual)?;
        let es = conjugate(&env, &dual)?;
        let bound = h.lipschitz_estimate() * h.lattice().max_step();
        for (a, b) in hs.values().iter().zip(es.values()) {
            conj.see(a - b);
            worst_ratio = worst_ratio.max((a - b).abs() / bound);
        }
    }
    rows.push(Row::slack(
        "h** <= h on bumped quadratics",
        "HKF2thm",
        below.0,
        cfg.tol_exact,
    ));
    rows.push(Row::new(
        "|(h**)* - h*| relative to L*step",
        "HKF2thm",
        worst_ratio,
        1.0,
    ));

    // (f_c* - q~)(b*) = (f* - q~)(b* + Lc) where b* + Lc lies in dom phi_Id* = diagonal
    let fid = phi_id(Lattice::cube(Axis::new(-4.0, 4.0, 0.125)?, 2)?)?;
    let c = PairedPoint::scalar(1.0, 0.0);
    let dual = Lattice::cube(Axis::new(-2.0, 2.0, 0.125)?, 2)?;
    let fcs = conjugate(&shift_by(&fid, &c)?, &dual)?;
    let fs = conjugate(&fid, &dual)?;
    let mut fclem = Worst::default();
    let mut compared = 0;
    for i in 0..dual.size() {
        let v = dual.node::<f64>(i);
        let w = [v[0] + c.xstar.get(0), v[1] + c.x.get(0)];
        if let (true, Some(j)) = (w[0] == w[1], dual.locate(&w)) {
            fclem.see(fcs.value(i) - v[0] * v[1] - (fs.value(j) - w[0] * w[1]));
            compared += 1;
        }
    }
    rows.push(Row::new(
        format!("(f_c)* - q~ = (f* - q~)(. + Lc), phi_Id, c = (1,0), {compared} nodes"),
        "FClem",
        if compared > 0 { fclem.0 } else { f64::INFINITY },
        TOL_SUM,
    ));

    let lat = line(-2.0, 2.0, 1.0 / 32.0)?;
    let mut vals: Vec<f64> = (0..lat.size())
        .map(|i| 0.5 * lat.node::<f64>(i)[0].powi(2))
        .collect();
    vals[70] += 1.0;
    let bumped = GridFunction::new(lat.clone(), vals)?;
    let env = biconjugate_envelope(&bumped)?;
    let x = lat.node::<f64>(70)[0];
    let step = 1.0 / 32.0;
    rows.push(Row::new(
        "envelope removes a raised node",
        "HKFthm",
        (env.value(70) - 0.5 * x * x).abs(),
        0.5 * step * step + cfg.tol_exact,
    ));
    Ok(rows)
}

fn phi_id(lat: Lattice) -> Result<GridFunction<f64>, CliError> {
    Ok(GridFunction::from_fn(lat, |v: &[f64]| {
        (v[0] + v[1]).powi(2) / 4.0
    })?)
}

/// Desk check of the sum theorem for `f = g = phi_Id` on a paired 2-D lattice.
pub fn sum_theorem(lat: &Lattice, tol_exact: f64) -> Rows {
    if lat.dim() != 2 {
        return Err(CliError::Config(format!(
            "sum-theorem needs a 2-D grid, got {} axes",
            lat.dim()
        )));
    }
    let step = lat.max_step();
    let f = phi_id(lat.clone())?;
    let sum = episum(&f, &f, EpisumAxis::Second)?;
    let mut err = Worst::default();
    for i in 0..sum.function.len() {
        let v = sum.function.node(i);
        err.see(sum.function.value(i) - (2.0 * v[0] + v[1]).powi(2) / 8.0);
    }
    let mut rows = vec![Row::new(
        "phi_Id (+)_2 phi_Id = (2y+y*)^2/8",
        "DD1",
        err.0,
        step * step / 8.0 + tol_exact,
    )];

    let at = at_transform(&sum.function)?;
    let coinc = coincidence_set(&at, TOL_SUM)?;
    let ax = lat.axes();
    let radius = ax[0]
        .max
        .abs()
        .min(ax[0].min.abs())
        .min(ax[1].max.abs())
        .min(ax[1].min.abs());
    let graph: Vec<[f64; 2]> = (0..ax[0].count())
        .map(|i| ax[0].coord(i))
        .filter(|t| ax[1].index_of(2.0 * t).is_some())
        .map(|t| [t, 2.0 * t])
        .collect();
    let near =
        |p: &[f64], q: &[f64]| (p[0] - q[0]).abs().max((p[1] - q[1]).abs()) <= step * (1.0 + 1e-9);
    let on_edge = |p: &[f64]| p.iter().zip(ax).any(|(v, a)| *v == a.min || *v == a.max);
    let (edge, interior): (Vec<&Vec<f64>>, Vec<&Vec<f64>>) =
        coinc.points.iter().partition(|p| on_edge(p));
    let stray = interior
        .iter()
        .filter(|p| !graph.iter().any(|q| near(p, q)))
        .count();
    // the box cuts the graph off at |x*| = R: edge nodes follow (a, clamp(2a))
    let clipped = |p: &[f64]| {
        let t = p[0];
        let c = (2.0 * t).clamp(ax[1].min, ax[1].max);
        near(p, &[t, c])
    };
    let edge_stray = edge.iter().filter(|p| !clipped(p)).count();
    let inner: Vec<&[f64; 2]> = graph
        .iter()
        .filter(|q| q[0].abs() <= radius / 2.0)
        .collect();
    let missing = inner
        .iter()
        .filter(|q| !coinc.points.iter().any(|p| near(p, &q[..])))
        .count();
    rows.push(Row::new(
        "interior coinc[(f (+)_2 g)^@] within one step of graph(2 Id)",
        "Dthm",
        stray as f64,
        0.0,
    ));
    rows.push(Row::new(
        "edge coinc[(f (+)_2 g)^@] on the box-clipped graph",
        "Dthm",
        edge_stray as f64,
        0.0,
    ));
    rows.push(Row::new(
        "graph(2 Id) nodes with |a| <= R/2 found in the coincidence set",
        "Dthm",
        missing as f64,
        0.0,
    ));
    let mut val = Worst::default();
    for q in &inner {
        let v = at.at(&q[..]).unwrap_or(f64::INFINITY);
        val.see(v - 2.0 * q[0] * q[0]);
    }
    rows.push(Row::new(
        "(f (+)_2 g)^@(a, 2a) = 2a^2",
        "Dthm",
        val.0,
        TOL_SUM,
    ));
    Ok(rows)
}

pub fn episums(cfg: &RunConfig) -> Rows {
    let tol = cfg.tol_exact;
    let lat = Lattice::cube(Axis::new(-2.0, 2.0, 0.125)?, 2)?;
    let f = phi_id(lat.clone())?;
    let ind = GridFunction::from_fn(
        lat.clone(),
        |v: &[f64]| if v[1] == 0.0 { 0.0 } else { f64::INFINITY },
    )?;
    let same = episum(&f, &ind, EpisumAxis::Second)?;
    let mut err = Worst::default();
    for (a, b) in same.function.values().iter().zip(f.values()) {
        err.see(a - b);
    }
    let mut rows = vec![Row::new("f (+)_2 indicator{x* = 0} = f", "DD1", err.0, tol)];

    // (f (+)_2 g)* = f* (+)_1 g* on the domain {u = 2v} of the left side
    let sum = episum(&f, &f, EpisumAxis::Second)?;
    let left = conjugate(&sum.function, &lat)?;
    let fs = conjugate(&f, &lat)?;
    let right = episum(&fs, &fs, EpisumAxis::First)?;
    let mut dev = Worst::default();
    let mut exact = true;
    for i in 0..lat.size() {
        let v = lat.node::<f64>(i);
        if v[0] == 2.0 * v[1] && v[1].abs() <= 1.0 {
            dev.see(left.value(i) - right.function.value(i));
            dev.see(left.value(i) - 2.0 * v[1] * v[1]);
            exact &= right.attained[i];
        }
    }
    rows.push(Row::new(
        "(f (+)_2 g)* = f* (+)_1 g* on u = 2v",
        "SZlem",
        dev.0,
        TOL_SUM,
    ));
    rows.push(Row::flag("f* (+)_1 g* attained on u = 2v", "SZlem", exact));

    let lat = match &cfg.grid {
        Some(g) if g.0.len() == 2 => g.lattice()?,
        _ => Lattice::cube(Axis::new(-4.0, 4.0, 0.125)?, 2)?,
    };
    rows.extend(sum_theorem(&lat, tol)?);
    Ok(rows)
}

fn linear(m: DenseMatrix<f64>) -> Result<OperatorGraph<f64>, CliError> {
    Ok(OperatorGraph::linear(m)?)
}

fn bstele_space() -> PairedSpace {
    pullback_via_l(OperatorGraph::<f64>::seq_rule(SeqRule::BsTele)).space()
}

pub fn fitzpatrick(cfg: &RunConfig) -> Rows {
    let tol = cfg.tol_exact;
    let budget = Budget::with_truncation(cfg.truncation);
    let mut g = rng_for(cfg, 4);
    let mut rows = Vec::new();

    let (mut ph3, mut th2) = (Worst::default(), Worst::default());
    let mut monotone = true;
    for _ in 0..20 {
        let m = random_monotone_matrix::<f64>(&mut g, 2, 1.0);
        let pts = (0..20)
            .map(|_| {
                let x = quasidense::sampling::random_vec::<f64>(&mut g, 2, 2.0);
                PairedPoint::euclidean(&x, &m.mul_vec(&x))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let cloud = OperatorGraph::cloud(pts.clone())?;
        monotone &= monotone_check(&cloud, tol, &budget)?.monotone;
        for a in &pts {
            let phi = fitz_phi(&cloud, a, &budget)?.value;
            ph3.see(phi - a.q_l()?);
            th2.see(fitz_theta(&cloud, &apply_l(a), &budget)?.value - phi);
        }
    }
    rows.push(Row::flag(
        "clouds on monotone linear graphs are monotone",
        "QLMON",
        monotone,
    ));
    rows.push(Row::new(
        "phi_S = q_L on a monotone cloud",
        "PH3",
        ph3.0,
        tol,
    ));
    rows.push(Row::new(
        "theta_S(La) = phi_S(a) on clouds",
        "TH2",
        th2.0,
        tol,
    ));

    let id = linear(DenseMatrix::identity(1))?;
    let mut ph5 = Worst::default();
    for _ in 0..200 {
        let b = random_paired::<f64>(&mut g, 1, 3.0);
        let (x, xs) = (b.x.get(0), b.xstar.get(0));
        ph5.see(fitz_phi(&id, &b, &budget)?.value - (x + xs).powi(2) / 4.0);
    }
    rows.push(Row::new("phi_Id = (x+x*)^2/4", "PH5", ph5.0, TOL_SUM));

    let (mut maximal, mut thm, mut ext1) = (true, MinSlack::default(), true);
    for k in 0..20 {
        let n = 1 + k % 4;
        let m = random_monotone_matrix::<f64>(&mut g, n, 1.0);
        let s = linear(m.clone())?;
        maximal &= monotone_check(&s, tol, &budget)?.maximal == Some(true);
        for _ in 0..20 {
            let c = random_dual::<f64>(&mut g, n, 2.0);
            thm.see(fitz_theta(&s, &c, &budget)?.value - c.q_lt()?);
            let x = quasidense::sampling::random_vec::<f64>(&mut g, n, 2.0);
            let a = PairedPoint::euclidean(&x, &m.mul_vec(&x))?;
            let mem = fitz_ext_membership(&s, &apply_l(&a), TOL_SUM, &budget)?;
            ext1 &= mem.verdict == MembershipVerdict::Member;
        }
    }
    rows.push(Row::flag(
        "monotone full-domain linear maps flagged maximal",
        "FOLKLORE",
        maximal,
    ));
    rows.push(Row::slack(
        "theta_S >= q_L~ for monotone linear S",
        "THthm",
        thm.0,
        TOL_SUM,
    ));
    rows.push(Row::flag(
        "L(a) is an extension member for a in G(S)",
        "EXT1",
        ext1,
    ));

    let off = fitz_ext_membership(&id, &DualPoint::scalar(1.0, 0.0), TOL_SUM, &budget)?;
    rows.push(Row::new(
        "Id: ((1),(0)) is a non-member with gap 1/4",
        "THCRIT",
        if off.verdict == MembershipVerdict::NonMember {
            (off.gap() - 0.25).abs()
        } else {
            f64::INFINITY
        },
        TOL_SUM,
    ));

    let s = pullback_via_l(OperatorGraph::<f64>::seq_rule(SeqRule::BsTele));
    let mut members = true;
    for _ in 0..100 {
        let xs = gallery::random_finite::<f64>(&mut g, 8, 1.0);
        let a = PairedPoint {
            x: gallery::bs_apply(&xs)?,
            xstar: xs,
            space: bstele_space(),
        };
        members &= s.contains(&a, tol)?;
        members &= fitz_ext_membership(&s, &apply_l(&a), TOL_SUM, &budget)?.verdict
            == MembershipVerdict::Member;
    }
    let e1 = FinTailSeq::unit(0);
    let c = DualPoint {
        ystar: e1.clone(),
        ystarstar: gallery::bs_apply(&e1)?,
        space: bstele_space(),
    };
    members &= fitz_ext_membership(&s, &c, TOL_SUM, &budget)?.verdict == MembershipVerdict::Member;
    rows.push(Row::flag(
        "telescoping pullback: L(G(S)) and (e1, Te1) are members",
        "SPECTthm",
        members,
    ));
    Ok(rows)
}

pub fn quasidensity(cfg: &RunConfig) -> Rows {
    let tol_opt = cfg.tol_opt;
    let budget = Budget::with_truncation(cfg.truncation);
    let pb = ProbeBudget {
        truncation: cfg.truncation,
        seed: cfg.seed,
        tol: tol_opt,
        ..ProbeBudget::default()
    };
    let mut g = rng_for(cfg, 5);
    let mut rows = Vec::new();

    let anti = OperatorGraph::cloud(
        (-64..=64)
            .map(|k| PairedPoint::scalar(k as f64 / 16.0, -k as f64 / 16.0))
            .collect(),
    )?;
    let cert = probe(&anti, &PairedPoint::scalar(1.0, 0.0), &pb)?;
    rows.push(Row::new(
        "antidiagonal cloud: inf r_L(A - (1,0)) = 1/2",
        "QDneNI",
        (cert.inf_estimate - 0.5).abs(),
        TOL_SUM,
    ));
    rows.push(Row::flag(
        "antidiagonal cloud: not quasidense",
        "QDneNI",
        matches!(cert.verdict, Verdict::NotQuasidense(_)),
    ));

    let (mut minty, mut evidence, mut ni) = (Worst::default(), true, true);
    for k in 0..20 {
        let n = 1 + k % 8;
        let m = random_monotone_matrix::<f64>(&mut g, n, 1.0);
        let s = linear(m.clone())?;
        for _ in 0..20 {
            let c = random_paired::<f64>(&mut g, n, 2.0);
            minty.see(minty_min(&m, &c)?.1);
            evidence &= probe(&s, &c, &pb)?.verdict == Verdict::QuasidenseEvidence;
            ni &= ni_check(&s, &random_dual(&mut g, n, 2.0), tol_opt, &budget)?.pass;
        }
    }
    rows.push(Row::new(
        "minty_min on monotone linear maps",
        "CONVcor",
        minty.0,
        1e-10,
    ));
    rows.push(Row::flag(
        "probe certifies monotone linear maps",
        "CONVcor",
        evidence,
    ));
    rows.push(Row::flag("monotone linear maps satisfy (NI)", "NIthm", ni));

    let anti_lin = linear(DenseMatrix::from_rows(&[vec![-1.0]])?)?;
    let ni_ok = ni_check(&anti_lin, &DualPoint::scalar(0.0, 1.0), tol_opt, &budget)?.pass;
    let qd_fail = matches!(
        probe(&anti_lin, &PairedPoint::scalar(1.0, 0.0), &pb)?.verdict,
        Verdict::NotQuasidense(_)
    );
    rows.push(Row::flag(
        "{(t,-t)} is of type (NI) but not quasidense",
        "NIFACT",
        ni_ok && qd_fail,
    ));

    let grid = phi_id(Lattice::cube(Axis::new(-4.0, 4.0, 0.125)?, 2)?)?;
    let (mut steps, mut gap, mut bound) =
        (MinSlack::default(), Worst::default(), MinSlack::default());
    for c in [(1.0, 0.0), (0.0, 1.0), (2.0, -1.0)] {
        let c = PairedPoint::scalar(c.0, c.1);
        for eps in [0.5, 0.25, 0.125] {
            let it = primal_iterate(&grid, &c, &EpsSchedule::geometric(eps)?, 40, cfg.tol_exact)?;
            for s in &it.steps {
                if let Some(b) = s.step_bound {
                    steps.see(b - s.step_norm);
                }
            }
            gap.see(it.gap);
            bound.see(it.bound - it.r_l);
        }
    }
    rows.push(Row::slack(
        "primal iteration steps <= sqrt(10) eps_n",
        "FCthm",
        steps.0,
        TOL_SUM,
    ));
    rows.push(Row::new(
        "primal iterate lies in coinc[f]",
        "FCthm",
        gap.0,
        cfg.tol_exact,
    ));
    rows.push(Row::slack(
        "r_L(a_eps - c) <= (17 + 8M) eps",
        "FCthm",
        bound.0,
        TOL_SUM,
    ));

    let small = Lattice::cube(Axis::new(-2.0, 2.0, 0.25)?, 2)?;
    let dual = dual_condition_check(&phi_id(small.clone())?, Some(&small), TOL_SUM)?;
    rows.push(Row::slack(
        "phi_Id* >= q_L~ on the dual grid",
        "FSTARthm",
        dual.min_gap,
        TOL_SUM,
    ));
    let bad = GridFunction::from_fn(small.clone(), |v: &[f64]| v[0] * v[0] + v[1] * v[1])?;
    let bad = dual_condition_check(&bad, Some(&small), TOL_SUM)?;
    rows.push(Row::flag(
        "x^2 + x*^2 (coinc = {0}) fails the dual condition",
        "FSTARthm",
        !bad.pass,
    ));

    let skew = OperatorGraph::<f64>::seq_rule(SeqRule::SkewQ);
    let c = PairedPoint::new(PairedSpace::c0(), FinTailSeq::unit(0), FinTailSeq::zeros(0))?;
    let cert = probe(&skew, &c, &pb)?;
    rows.push(Row::slack(
        "skew operator: descent keeps r_L >= 1/10",
        "SMAXthm",
        cert.inf_estimate - 0.1,
        TOL_SUM,
    ));
    let bs = OperatorGraph::<f64>::seq_rule(SeqRule::BsTele);
    let c = PairedPoint::new(PairedSpace::l1(), FinTailSeq::zeros(0), FinTailSeq::ones())?;
    let cert = probe(&bs, &c, &pb)?;
    rows.push(Row::slack(
        "telescoping operator: descent keeps r_L >= 1/4",
        "VWthm",
        cert.inf_estimate - 0.25,
        TOL_SUM,
    ));
    Ok(rows)
}

pub fn gallery_suite(cfg: &RunConfig) -> Rows {
    let tol = cfg.tol_exact;
    let mut g = rng_for(cfg, 6);
    let mut rows = Vec::new();

    let mut lem = Worst::default();
    for j in 0..50 {
        let image = gallery::skew_apply(&SkewDomainElement::<f64>::difference(j));
        let expected = FinTailSeq::unit(j).add(&FinTailSeq::unit(j + 1))?;
        lem.see(image.sub(&expected)?.norm(NormKind::LInf)?);
    }
    rows.push(Row::new(
        "S(e^j - e^(j+1)) = e^j + e^(j+1), j <= 50",
        "SMAXlem",
        lem.0,
        0.0,
    ));

    let samples: Vec<SkewDomainElement<f64>> = (0..1000)
        .map(|_| SkewDomainElement::random(&mut g, 64, 1.0))
        .collect();
    let report = gallery::tnotmax_witness(&samples)?;
    rows.push(Row::new("<x, Sx> = 0 on K, N = 64", "S4", report.skew, tol));
    rows.push(Row::new(
        "<Sx, w**> = 0 on K, N = 64",
        "SOlem",
        report.alternating,
        tol,
    ));
    rows.push(Row::new(
        "(0, w**) monotonically related to G(S)",
        "TNOTMAXthm",
        report.pairing,
        tol,
    ));
    let (mut skew_lb, mut chain) = (MinSlack::default(), MinSlack::default());
    let near: Vec<SkewDomainElement<f64>> = (0..1000)
        .map(|k| {
            let n = g.gen_range(2..=64);
            SkewDomainElement::random(&mut g, n, [0.5, 0.1, 0.02][k % 3])
        })
        .collect();
    for x in samples.iter().chain(&near) {
        let b = gallery::skew_bound(x)?;
        skew_lb.see(b.r_l - 0.1);
        chain.see(b.slack());
    }
    rows.push(Row::slack(
        "r_L((x,Sx) - (e1,0)) >= 1/10",
        "SMAXthm",
        skew_lb.0,
        TOL_SUM,
    ));
    rows.push(Row::slack(
        "r_L >= 1/2(x1-1)^2 + 2x1^2 - x1",
        "SMAXthm",
        chain.0,
        TOL_SUM,
    ));

    let n = 12;
    let pull = pullback_via_l(OperatorGraph::<f64>::seq_rule(SeqRule::Tail));
    let mat = gallery::tail_pullback_matrix::<f64>(n);
    let mut tail_ok = true;
    for _ in 0..100 {
        let x = quasidense::sampling::random_vec::<f64>(&mut g, n, 1.0);
        let b = PairedPoint::new(
            pull.space(),
            FinTailSeq::finite(x.clone()),
            FinTailSeq::finite(mat.mul_vec(&x)),
        )?;
        tail_ok &= pull.contains(&b, tol)?;
    }
    rows.push(Row::flag(
        "tail pullback matches the bidiagonal matrix",
        "TAILex",
        tail_ok,
    ));

    let (mut ulem, mut xylem, mut vw, mut vw_chain) = (
        Worst::default(),
        Worst::default(),
        MinSlack::default(),
        MinSlack::default(),
    );
    for _ in 0..10_000 {
        let scale = [1.0, 0.2, 0.05][g.gen_range(0..3)];
        let xs = gallery::random_finite::<f64>(&mut g, 16, scale);
        let ys = gallery::random_finite::<f64>(&mut g, 16, 1.0);
        let txs = gallery::bs_apply(&xs)?;
        ulem.see(xs.pair(&txs)? - xs.total()?.powi(2));
        let rhs = FinTailSeq::ones()
            .scale(2.0 * ys.total()?)
            .sub(&gallery::bs_apply(&ys)?)?;
        xylem.see(ys.pair(&txs)? - xs.pair(&rhs)?);
        let b = gallery::bs_bound(&xs)?;
        vw.see(b.r_l - 0.25);
        vw_chain.see(b.slack());
    }
    rows.push(Row::new("<x*, Tx*> = (sum x*)^2", "Ulem", ulem.0, tol));
    rows.push(Row::new(
        "<y*, Tx*> = <x*, 2<y*,e**>e** - Ty*>",
        "XYlem",
        xylem.0,
        tol,
    ));
    rows.push(Row::slack(
        "r_L((x*,Tx*) - (0,e**)) >= 1/4",
        "VWthm",
        vw.0,
        TOL_SUM,
    ));
    rows.push(Row::slack(
        "r_L >= 1/4 + 1/4(2 sum x* - 1)^2",
        "VWthm",
        vw_chain.0,
        TOL_SUM,
    ));

    let mut theta = Worst::default();
    let mut nondecreasing = true;
    for _ in 0..100 {
        let (ys, yss, mu) = gallery::random_theta_member::<f64>(&mut g, 6, 1.0);
        let mut prev = f64::NEG_INFINITY;
        for n in [1, 2, 8, cfg.truncation] {
            let th = gallery::bs_theta(&ys, &yss, n)?;
            theta.see(if th.mu.is_some() {
                th.theta - mu * mu
            } else {
                f64::INFINITY
            });
            nondecreasing &= th.theta >= prev - TOL_SUM;
            prev = th.theta;
        }
    }
    rows.push(Row::new(
        "theta_S = mu^2 on domain members",
        "NPHWthm",
        theta.0,
        TOL_SUM,
    ));
    rows.push(Row::flag(
        "truncated theta_S nondecreasing in N",
        "NPHWthm",
        nondecreasing,
    ));
    let mut kc = Worst::default();
    for mu in -3..=3 {
        let mu = mu as f64;
        kc.see(gallery::k_conjugate(mu) - mu * mu);
    }
    rows.push(Row::new("k*(2 mu e**) = mu^2", "LMlem", kc.0, tol));
    let off = gallery::k_conjugate_offaxis(&FinTailSeq::unit(0), &[1.0, 10.0, 100.0])?;
    let diverges =
        !off.in_domain() && off.values.windows(2).all(|w| w[1] > w[0]) && off.values[2] >= 100.0;
    rows.push(Row::flag("k*(e1) diverges off lin{e**}", "LMlem", diverges));
    let div = gallery::bs_theta_divergence(&[0.0, -1.0, -10.0, -100.0])?;
    let mut d = Worst::default();
    for (v, l) in div.iter().zip([0.0, -1.0, -10.0, -100.0]) {
        d.see(v + 2.0 * l);
    }
    rows.push(Row::new(
        "theta_S^@ lower bounds -2 lambda",
        "THATthm",
        d.0,
        TOL_SUM,
    ));
    Ok(rows)
}
