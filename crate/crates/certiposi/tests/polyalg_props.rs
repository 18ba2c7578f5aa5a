//! Property tests for exact polynomial arithmetic against a definition-level oracle.

use certiposi::polyalg::*;
use certiposi::rational::{q, Q};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use proptest::prelude::*;

/// B_{m,α} expanded directly from its generators: C(m;α)·a^{−m}·(ŝ − Σx)^{m−|α|}·Π(1 + x_i)^{α_i}.
fn basis_oracle(dom: &SimplexDomain, m: u32, alpha: &[u32]) -> MonomialPoly {
    let n = dom.n();
    let one = MonomialPoly::constant(n, q(1));
    let mut last = MonomialPoly::constant(n, dom.s_hat().clone());
    for i in 0..n {
        last = &last - &MonomialPoly::var(n, i);
    }
    let mut acc = one.clone();
    let rest = m - alpha.iter().sum::<u32>();
    for _ in 0..rest {
        acc = &acc * &last;
    }
    for (i, &k) in alpha.iter().enumerate() {
        let gen = &one + &MonomialPoly::var(n, i);
        for _ in 0..k {
            acc = &acc * &gen;
        }
    }
    let fact = |k: u32| (1..=k as u64).fold(BigInt::one(), |a, b| a * b);
    let mult = alpha.iter().fold(fact(m) / fact(rest), |a, &k| a / fact(k));
    let scale = Q::from_integer(mult) / num_traits::pow(dom.a(), m as usize);
    acc.scale(&scale)
}

fn expand_oracle(b: &BernsteinPoly) -> MonomialPoly {
    b.iter().fold(MonomialPoly::zero(b.n()), |acc, (a, c)| &acc + &basis_oracle(b.dom(), b.m(), a.entries()).scale(c))
}

fn small_q() -> impl Strategy<Value = Q> {
    (-20i64..=20, 1i64..=7).prop_map(|(a, b)| Q::new(a.into(), b.into()))
}

fn poly(n: usize, d: u32) -> impl Strategy<Value = MonomialPoly> {
    let exps = proptest::collection::vec(0u32..=d, n).prop_filter("degree", move |e| e.iter().sum::<u32>() <= d);
    proptest::collection::vec((exps, small_q()), 0..6)
        .prop_map(move |ts| MonomialPoly::from_terms(n, ts.into_iter().map(|(e, c)| (MultiIndex::new(e), c))).unwrap())
}

fn bern(n: usize, m: u32) -> impl Strategy<Value = BernsteinPoly> {
    let len = (0..=m).map(|k| num_integer::binomial(k as usize + n - 1, n - 1)).sum::<usize>();
    proptest::collection::vec(small_q(), len).prop_map(move |cs| {
        let dom = SimplexDomain::default_for(n);
        BernsteinPoly::from_coeffs(&dom, m, enumerate(n, m).into_iter().zip(cs)).unwrap()
    })
}

fn enumerate(n: usize, m: u32) -> Vec<MultiIndex> {
    let mut out = vec![];
    let mut cur = vec![0u32; n];
    fn rec(p: usize, rem: u32, cur: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
        if p == cur.len() {
            out.push(MultiIndex::new(cur.clone()));
            return;
        }
        for v in 0..=rem {
            cur[p] = v;
            rec(p + 1, rem - v, cur, out);
        }
    }
    rec(0, m, &mut cur, &mut out);
    out
}

/// Rational point of D̂ from barycentric weights.
fn point(dom: &SimplexDomain, w: &[u32]) -> Vec<Q> {
    let total: u32 = w.iter().sum::<u32>().max(1);
    let y: Vec<Q> = w[1..].iter().map(|&k| Q::new(k.into(), total.into())).collect();
    if w.iter().sum::<u32>() == 0 {
        return dom.theta(&vec![Q::zero(); dom.n()]);
    }
    dom.theta(&y)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn conversion_matches_oracle(n in 1usize..=3, d in 0u32..=3, extra in 0u32..=2, seed in any::<u64>()) {
        let p = poly_from_seed(n, d, seed);
        let m = p.degree() + extra;
        let dom = SimplexDomain::default_for(n);
        let b = mono_to_bernstein(&p, m, &dom).unwrap();
        prop_assert_eq!(expand_oracle(&b), p.clone());
        prop_assert_eq!(bernstein_to_mono(&b), p);
    }

    #[test]
    fn round_trip_is_exact(p in poly(2, 4), extra in 0u32..=3) {
        let dom = SimplexDomain::default_for(2);
        let b = mono_to_bernstein(&p, p.degree() + extra, &dom).unwrap();
        prop_assert_eq!(bernstein_to_mono(&b), p);
    }

    #[test]
    fn evaluation_matches_monomial(b in bern(2, 3), w in proptest::collection::vec(0u32..6, 3)) {
        let x = point(b.dom(), &w);
        prop_assert_eq!(bernstein_eval(&b, &x).unwrap(), bernstein_to_mono(&b).eval(&x).unwrap());
    }

    #[test]
    fn elevation_preserves_values_and_shrinks_norm(b in bern(2, 2), k in 1u32..4, w in proptest::collection::vec(0u32..6, 3)) {
        let e = elevate(&b, b.m() + k).unwrap();
        let x = point(b.dom(), &w);
        prop_assert_eq!(e.eval(&x).unwrap(), b.eval(&x).unwrap());
        prop_assert!(bnorm(&e) <= bnorm(&b));
    }

    #[test]
    fn product_is_exact_and_submultiplicative(a in bern(2, 2), b in bern(2, 3), w in proptest::collection::vec(0u32..6, 3)) {
        let c = multiply(&a, &b).unwrap();
        prop_assert_eq!(c.m(), 5);
        prop_assert_eq!(bernstein_to_mono(&c), &bernstein_to_mono(&a) * &bernstein_to_mono(&b));
        let x = point(a.dom(), &w);
        prop_assert_eq!(c.eval(&x).unwrap(), a.eval(&x).unwrap() * b.eval(&x).unwrap());
        prop_assert!(bnorm(&c) <= bnorm(&a) * bnorm(&b));
    }

    #[test]
    fn control_polygon_brackets(b in bern(3, 2), w in proptest::collection::vec(0u32..9, 4)) {
        let v = b.eval(&point(b.dom(), &w)).unwrap();
        prop_assert!(b.min_coeff() <= v && v <= b.max_coeff());
    }

    #[test]
    fn evaluation_is_linear(a in bern(1, 3), b in bern(1, 3), s in small_q(), w in proptest::collection::vec(0u32..9, 2)) {
        let dom = a.dom().clone();
        let c = linear_combine(&[(s.clone(), a.clone()), (q(1), b.clone())], 3, &dom).unwrap();
        let x = point(&dom, &w);
        prop_assert_eq!(c.eval(&x).unwrap(), s * a.eval(&x).unwrap() + b.eval(&x).unwrap());
    }
}

fn poly_from_seed(n: usize, d: u32, seed: u64) -> MonomialPoly {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut terms = vec![];
    for a in enumerate(n, d) {
        if rng.gen_bool(0.5) {
            terms.push((a, Q::new(rng.gen_range(-9i64..=9).into(), rng.gen_range(1i64..=5).into())));
        }
    }
    MonomialPoly::from_terms(n, terms).unwrap()
}
