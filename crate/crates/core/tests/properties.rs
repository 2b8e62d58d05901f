use proptest::prelude::*;
use quasidense::gallery::{self, SkewDomainElement};
use quasidense::quasidensity::Verdict;
use quasidense::*;

fn coords(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-4.0f64..4.0, n)
}

fn norm() -> impl Strategy<Value = NormKind> {
    prop_oneof![Just(NormKind::L1), Just(NormKind::L2), Just(NormKind::LInf)]
}

/// Two points of `R^n x R^n` sharing a random norm.
fn pair_of_points() -> impl Strategy<Value = (PairedPoint<f64>, PairedPoint<f64>)> {
    (1usize..6, norm()).prop_flat_map(|(n, k)| {
        (coords(n), coords(n), coords(n), coords(n)).prop_map(move |(a, b, c, d)| {
            let space = PairedSpace::euclidean_with(n, k);
            let p = |x: Vec<f64>, y: Vec<f64>| {
                PairedPoint::new(space, FinTailSeq::finite(x), FinTailSeq::finite(y)).unwrap()
            };
            (p(a, b), p(c, d))
        })
    })
}

fn monotone_matrix() -> impl Strategy<Value = DenseMatrix<f64>> {
    (1usize..5).prop_flat_map(|n| {
        (coords(n * n), coords(n * n)).prop_map(move |(b, c)| {
            DenseMatrix::from_fn(n, n, |i, j| {
                let psd: f64 = (0..n).map(|k| b[i * n + k] * b[j * n + k]).sum();
                psd + c[i * n + j] - c[j * n + i]
            })
        })
    })
}

fn tail() -> impl Strategy<Value = Tail<f64>> {
    prop_oneof![
        Just(Tail::Zero),
        (-3.0f64..3.0).prop_map(Tail::Const),
        (-3.0f64..3.0).prop_map(Tail::Alt),
    ]
}

proptest! {
    #[test]
    fn r_l_is_a_nonnegative_gauge((b, c) in pair_of_points()) {
        let r = b.r_l().unwrap();
        prop_assert!(r >= -1e-12);
        prop_assert!(r <= b.norm_sq().unwrap() + 1e-12);
        let sum = b.add(&c).unwrap().r_l().unwrap();
        let bound = r + 2.0 * b.norm().unwrap() * c.norm().unwrap() + c.r_l().unwrap();
        prop_assert!(sum <= bound + 1e-9);
    }

    #[test]
    fn q_l_expansion_and_l_symmetry((b, c) in pair_of_points()) {
        let lc = apply_l(&c);
        let lhs = b.sub(&c).unwrap().q_l().unwrap();
        let rhs = b.q_l().unwrap() + c.q_l().unwrap() - pairing(&b, &lc).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-10);
        let sym = pairing(&b, &lc).unwrap() - pairing(&c, &apply_l(&b)).unwrap();
        prop_assert!(sym.abs() <= 1e-10);
        prop_assert!((lc.norm().unwrap() - c.norm().unwrap()).abs() <= 1e-10);
    }

    #[test]
    fn sequences_round_trip(prefix in prop::collection::vec(-5.0f64..5.0, 0..12), t in tail()) {
        let s = FinTailSeq::new(prefix, t);
        let text = s.to_string();
        let back: FinTailSeq<f64> = text.parse().unwrap();
        prop_assert_eq!(back.trimmed(), s.trimmed());
        let json = serde_json::to_string(&s).unwrap();
        let back: FinTailSeq<f64> = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(back.trimmed(), s.trimmed());
        let zero = s.sub(&s).unwrap();
        prop_assert!(zero.norm(NormKind::LInf).unwrap() == 0.0);
    }

    #[test]
    fn fenchel_young_and_envelope_below(values in prop::collection::vec(-3.0f64..3.0, 17)) {
        let lat = Lattice::new(vec![Axis::new(-2.0, 2.0, 0.25).unwrap()]).unwrap();
        let f = GridFunction::new(lat.clone(), values.clone()).unwrap();
        let fs = conjugate(&f, &lat).unwrap();
        for i in 0..f.len() {
            for j in 0..fs.len() {
                prop_assert!(f.value(i) + fs.value(j) >= f.node(i)[0] * fs.node(j)[0] - 1e-12);
            }
        }
        let env = biconjugate_envelope(&f).unwrap();
        for (e, v) in env.values().iter().zip(&values) {
            prop_assert!(*e <= v + 1e-12);
        }
        // h and its envelope share the conjugate on the dual lattice used
        let dual = quasidense::convexcalc::slope_lattice(&f).unwrap();
        let hs = conjugate(&f, &dual).unwrap();
        let es = conjugate(&env, &dual).unwrap();
        for (a, b) in hs.values().iter().zip(es.values()) {
            prop_assert!((a - b).abs() <= 1e-9);
        }
    }

    #[test]
    fn conjugation_reverses_order(
        lower in prop::collection::vec(-3.0f64..3.0, 17),
        gap in prop::collection::vec(0.0f64..2.0, 17),
    ) {
        let lat = Lattice::new(vec![Axis::new(-2.0, 2.0, 0.25).unwrap()]).unwrap();
        let upper: Vec<f64> = lower.iter().zip(&gap).map(|(a, b)| a + b).collect();
        let lo = conjugate(&GridFunction::new(lat.clone(), lower).unwrap(), &lat).unwrap();
        let up = conjugate(&GridFunction::new(lat.clone(), upper).unwrap(), &lat).unwrap();
        for (a, b) in lo.values().iter().zip(up.values()) {
            prop_assert!(a >= &(b - 1e-12));
        }
    }

    #[test]
    fn coincidence_sets_are_monotone(lambda in 0.0f64..2.0, shift in -1.0f64..1.0) {
        // 1/2 (x^2 + x*^2) + lambda (x - x* - shift)^2 >= q_L
        let lat = Lattice::cube(Axis::new(-2.0, 2.0, 0.25).unwrap(), 2).unwrap();
        let f = GridFunction::from_fn(lat, |v: &[f64]| {
            0.5 * (v[0] * v[0] + v[1] * v[1]) + lambda * (v[0] - v[1] - shift).powi(2)
        })
        .unwrap();
        let c = coincidence_set(&f, 1e-9).unwrap();
        prop_assert!(c.min_pairwise_q() >= -1e-9);
    }

    #[test]
    fn monotone_linear_maps(m in monotone_matrix(), probe_coords in coords(8)) {
        let n = m.rows();
        let s = OperatorGraph::linear(m.clone()).unwrap();
        let budget = Budget::default();
        prop_assert!(monotone_check(&s, 1e-9, &budget).unwrap().monotone);
        let c = PairedPoint::euclidean(&probe_coords[..n], &probe_coords[n..2 * n]).unwrap();
        // phi_S >= q_L everywhere, with equality on the graph
        let phi = fitz_phi(&s, &c, &budget).unwrap();
        prop_assert!(phi.value >= c.q_l().unwrap() - 1e-8);
        let x = &probe_coords[..n];
        let a = PairedPoint::euclidean(x, &m.mul_vec(x)).unwrap();
        let on = fitz_phi(&s, &a, &budget).unwrap();
        prop_assert!((on.value - a.q_l().unwrap()).abs() <= 1e-7 * (1.0 + on.value.abs()));
        let cert = probe(&s, &c, &ProbeBudget::default()).unwrap();
        prop_assert_eq!(cert.verdict, Verdict::QuasidenseEvidence);
        prop_assert!(cert.inf_estimate <= 1e-10);
    }

    #[test]
    fn gallery_identities(xs in coords(12), ys in coords(12)) {
        let x = FinTailSeq::finite(xs.clone());
        let y = FinTailSeq::finite(ys);
        let tx = gallery::bs_apply(&x).unwrap();
        let sum: f64 = xs.iter().sum();
        prop_assert!((x.pair(&tx).unwrap() - sum * sum).abs() <= 1e-9);
        let b = gallery::bs_bound(&x).unwrap();
        prop_assert!(b.slack() >= -1e-9 && b.r_l >= 0.25 - 1e-9);
        let ty = gallery::tail_op(&y).unwrap();
        prop_assert!(y.pair(&ty).unwrap() >= -1e-9);
        let mut v = xs;
        let mean = v.iter().sum::<f64>() / v.len() as f64;
        v.iter_mut().for_each(|e| *e -= mean);
        let head: f64 = v[..11].iter().sum();
        v[11] = -head;
        let k = SkewDomainElement::new(FinTailSeq::finite(v)).unwrap();
        let sk = gallery::skew_apply(&k);
        prop_assert!(sk.pair(k.x()).unwrap().abs() <= 1e-9);
        let bound = gallery::skew_bound(&k).unwrap();
        prop_assert!(bound.r_l >= 0.1 - 1e-9 && bound.slack() >= -1e-9);
    }

    #[test]
    fn operator_specs_round_trip(m in monotone_matrix()) {
        let s = OperatorGraph::linear(m).unwrap();
        let json = serde_json::to_string(&s.to_spec()).unwrap();
        let spec: OperatorSpec = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(spec.build::<f64>().unwrap(), s);
    }
}
