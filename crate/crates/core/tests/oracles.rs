//! Worked examples checked against enumeration and independent arithmetic.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use tsppsd_core::bounds::{counts, eo_subsets, g_counts, lemma_bound, oracle_values, proposition_bound};
use tsppsd_core::cycles::{
    count_cycles_with_edge_set, cycle_masks, enumerate_cycles, Edge, EdgeMask, HamiltonianCycle,
};
use tsppsd_core::functionals::{combine, make_ones, make_subtour, make_two_matching, LinearFunctional};
use tsppsd_core::linalg::symmetric_eigenvalues;
use tsppsd_core::moment::moment_matrix_closed_form_k1;
use tsppsd_core::psd::{is_psd_exact, is_psd_float, membership_p1, Mode, PsdStatus, DEFAULT_FLOAT_TOL};
use tsppsd_core::rational::{int, ratio, to_f64};
use tsppsd_core::spectra::{
    closed_form_spectrum, residual_pair, sqrt_n_nonpositivity, verify_eigenpairs_exact, Weight, SPECTRUM_TOL,
};
use tsppsd_core::{Limits, Rational};

fn e(a: u32, b: u32) -> Edge {
    Edge::new(a, b).unwrap()
}

fn lim() -> Limits {
    Limits::default()
}

fn enumerated(n: usize, edges: &[Edge]) -> BigUint {
    let want = EdgeMask::from_edges(edges);
    BigUint::from(cycle_masks(n, &lim()).unwrap().filter(|x| x.contains_all(want)).count())
}

#[test]
fn containment_counts() {
    let cycles = enumerate_cycles(8, &lim()).unwrap();
    assert_eq!(cycles.len(), 2520);
    assert!(cycles.iter().all(|c| c.edges().len() == 8));

    for n in 4..=9 {
        let path: Vec<Edge> = (1..n as u32).map(|i| e(i, i + 1)).collect();
        assert_eq!(count_cycles_with_edge_set(n, &path), BigUint::one());
        assert_eq!(count_cycles_with_edge_set(n, &[]), enumerated(n, &[]));
    }
    for edges in [
        vec![e(1, 2), e(3, 4)],
        vec![e(1, 2)],
        vec![e(1, 2), e(1, 3), e(1, 4)],
        vec![e(1, 2), e(2, 3), e(1, 3)],
    ] {
        assert_eq!(count_cycles_with_edge_set(6, &edges), enumerated(6, &edges));
    }
    assert_eq!(count_cycles_with_edge_set(6, &[e(1, 2), e(3, 4)]), BigUint::from(12u32));
    assert_eq!(count_cycles_with_edge_set(6, &[e(1, 2)]), BigUint::from(24u32));
}

#[test]
fn subtour_and_two_matching_values() {
    // Every cycle through 4-1-2-5 and 6-3-7 sits on the 2-matching facet.
    let f = make_two_matching(7, &[1, 2, 3], &[e(1, 4), e(2, 5), e(3, 6)]).unwrap();
    for c in enumerate_cycles(7, &lim()).unwrap() {
        if [e(1, 4), e(1, 2), e(2, 5), e(3, 6), e(3, 7)]
            .iter()
            .all(|x| c.contains(*x))
        {
            assert!(f.evaluate(&c).is_zero());
        }
    }
    let raw = LinearFunctional::from_parts(9, Rational::zero(), [(e(1, 2), int(1))]).unwrap();
    assert_eq!(raw.average_on_x(), ratio(1, 4));
}

#[test]
fn not_psd_witness_matches_spectrum() {
    // a·h_U + (1-a)·1 with a = n = 8, m = 3.
    let (n, m) = (8, 3);
    let h = make_subtour(n, &[1, 2, 3]).unwrap();
    let f = combine(&int(n as i64), &h, &int(1 - n as i64), &make_ones(n).unwrap()).unwrap();
    let v = membership_p1(&f, Mode::Exact, &lim()).unwrap();
    assert_eq!(v.status, PsdStatus::NotPsd);
    let a = moment_matrix_closed_form_k1(&f, &lim()).unwrap();
    let w = v.witness.unwrap();
    assert!(a.entries.quad_form(&w).is_negative());
    let pair = residual_pair(n, m, &Weight::Rational(int(n as i64))).unwrap();
    let lowest = symmetric_eigenvalues(&a.entries.to_f64())[0];
    assert!(pair.lambda_minus.unwrap() < 0.0);
    assert!((lowest - pair.lambda_minus.unwrap()).abs() <= SPECTRUM_TOL);
}

#[test]
fn outside_q_direction_rejected() {
    // a = n + 1 along h_U for n = 9, m = 4.
    let (n, m) = (9, 4);
    let h = make_subtour(n, &[1, 2, 3, 4]).unwrap();
    let a = int(n as i64 + 1);
    let f = combine(&a, &h, &(int(1) - &a), &make_ones(n).unwrap()).unwrap();
    let v = membership_p1(&f, Mode::Exact, &lim()).unwrap();
    let pair = residual_pair(n, m, &Weight::Rational(a)).unwrap();
    assert_eq!(v.status, PsdStatus::NotPsd);
    assert!(pair.lambda_minus.unwrap() < 0.0);
}

#[test]
fn float_agrees_with_exact_on_perturbed_matrices() {
    let mut seed: u64 = 0x9e37_79b9_7f4a_7c15;
    let mut next = move || {
        seed ^= seed << 13;
        seed ^= seed >> 7;
        seed ^= seed << 17;
        seed
    };
    let mut checked = 0;
    let mut rejected = 0;
    while checked < 200 {
        let n = 5 + (next() % 4) as usize;
        let ones = make_ones(n).unwrap();
        let edges = tsppsd_core::cycles::all_edges(n);
        let bumps: Vec<(Edge, Rational)> = (0..3)
            .map(|_| {
                let sign = if next() % 2 == 0 { 1 } else { -1 };
                (edges[(next() % edges.len() as u64) as usize], int(sign))
            })
            .collect();
        let g = LinearFunctional::from_parts(n, Rational::zero(), bumps).unwrap();
        let f = combine(&int(1), &ones, &int(1), &g).unwrap();
        let avg = f.average_on_x();
        if avg.is_zero() {
            continue;
        }
        let m = moment_matrix_closed_form_k1(&f.scaled(&avg.recip()), &lim()).unwrap();
        let exact = is_psd_exact(&m.entries);
        let float = is_psd_float(&m.entries, DEFAULT_FLOAT_TOL);
        assert_eq!(exact.status, float.status, "n={n}");
        if !exact.is_psd() {
            rejected += 1;
        }
        checked += 1;
    }
    assert!(rejected > 0 && rejected < 200);
}

#[test]
fn eigenpairs_for_a_two_and_trace_accounting() {
    for n in 6..=10 {
        for m in 3..=n / 2 {
            let v = verify_eigenpairs_exact(n, m, &int(2), &lim()).unwrap();
            assert!(v.passed(), "n={n} m={m}");
            assert_eq!(v.trace, int(n as i64 + 1));
        }
    }
}

#[test]
fn zero_weight_residual_is_ones_spectrum() {
    for n in [6usize, 8, 11] {
        let ones = moment_matrix_closed_form_k1(&make_ones(n).unwrap(), &lim()).unwrap();
        let spectrum = symmetric_eigenvalues(&ones.entries.to_f64());
        for m in 3..=n / 2 {
            let pair = residual_pair(n, m, &Weight::Rational(Rational::zero())).unwrap();
            for lambda in [pair.lambda_plus.unwrap(), pair.lambda_minus.unwrap()] {
                assert!(
                    spectrum.iter().any(|x| (x - lambda).abs() <= SPECTRUM_TOL),
                    "n={n} m={m}"
                );
            }
            let big = ratio(3 * n as i64 - 1, n as i64 - 1);
            assert!((pair.lambda_plus.unwrap() - to_f64(&big)).abs() <= SPECTRUM_TOL);
        }
    }
}

#[test]
fn sqrt_n_examples_and_inside_q() {
    for n in [9usize, 16] {
        assert!(sqrt_n_nonpositivity(n, &lim()).unwrap().passed());
    }
    let s = closed_form_spectrum(9, 3, &Weight::Rational(int(1))).unwrap();
    let all = s.eigenvalues_f64().unwrap();
    assert!(all.iter().all(|x| *x >= -SPECTRUM_TOL));
}

#[test]
fn even_and_odd_counts() {
    let y = HamiltonianCycle::canonical(7).unwrap();
    let v = oracle_values(7, 2, &y, &lim()).unwrap();
    assert_eq!(v.off_cycle.len() + v.on_cycle.len(), 2);
    assert_eq!(v.two_valued(), Some(g_counts(7, 2).unwrap()));
    assert_eq!(proposition_bound(9, 2).unwrap(), ratio(-127, 35));
    for n in (5..=41).step_by(2) {
        for k in 1..=(n - 1) / 2 {
            let (g1, g2) = g_counts(n, k).unwrap();
            assert_eq!(
                lemma_bound(&g1.into(), &g2.into(), n).unwrap(),
                proposition_bound(n, k).unwrap()
            );
        }
    }
    assert_eq!(eo_subsets(&HamiltonianCycle::canonical(5).unwrap()).len(), 5);
}

#[test]
fn lemma_bound_is_homogeneous() {
    for n in 6..=12 {
        let (b, c) = counts(n, 1).unwrap();
        let (b, c): (BigInt, BigInt) = (b.into(), c.into());
        let base = lemma_bound(&b, &c, n).unwrap();
        for t in [2, 3, 7] {
            assert_eq!(lemma_bound(&(&b * t), &(&c * t), n).unwrap(), base);
        }
        assert_eq!(base, int(1 - n as i64));
    }
}
