use std::collections::BTreeSet;

use proptest::prelude::*;
use vbh::bihss::{build_tau, SemisimpleHydroPair};
use vbh::coeffs::RatFunc;
use vbh::cohomolab::*;
use vbh::forms::{dtilde_reduced, ReducedOneForm};
use vbh::jetring::basis::monomials;
use vbh::jetring::DiffPoly as P;
use vbh::Error;

// Set comprehensions written out as membership predicates over a grid.
fn in_i1(n: usize, i: usize, j: usize) -> bool {
    j <= 1 && j + 1 <= i && i <= j + n + 1
}

fn in_i2(n: usize, i: usize, j: usize) -> bool {
    (2..=n).contains(&j) && j <= i && i <= j + n + 1
}

fn in_i3(n: usize, i: usize, j: usize) -> bool {
    (n + 1..=n + 3).contains(&j) && j <= i && i <= j + n
}

fn grid(n: usize, pred: impl Fn(usize, usize) -> bool) -> BTreeSet<Bidegree> {
    let top = 3 * n + 10;
    (0..top)
        .flat_map(|p| (0..top).map(move |d| (p, d)))
        .filter(|&(p, d)| pred(p, d))
        .collect()
}

#[test]
fn index_sets_match_transcription() {
    for n in 1..=5 {
        let w = BidegreeWindow::new(n);
        assert_eq!(w.i1, grid(n, |p, d| in_i1(n, p, d)));
        assert_eq!(w.i2, grid(n, |p, d| in_i2(n, p, d)));
        assert_eq!(w.i3, grid(n, |p, d| in_i3(n, p, d)));
        for p in 0..3 * n + 8 {
            for d in 0..3 * n + 8 {
                let inside = |p, d| in_i1(n, p, d) || in_i2(n, p, d) || in_i3(n, p, d);
                let want = d >= 2 && !inside(p, d) && !inside(p + 1, d);
                assert_eq!(vbh_guaranteed_zero(n, p, d), want, "n={n} ({p},{d})");
                let c1 = d <= n && d + 1 <= p && p <= d + n + 1;
                let c2 = (2..=n + 3).contains(&d) && d <= p && p <= d + n;
                let case = omega_lambda_window(n, p, d);
                assert_eq!(case == WindowCase::Case1 || case == WindowCase::Both, c1);
                assert_eq!(case == WindowCase::Case2 || case == WindowCase::Both, c2);
            }
        }
    }
}

#[test]
fn theta_form_atlas_is_the_first_window() {
    for n in 1..=2 {
        let top = 2 * n + 4;
        let a = atlas(Space::CLambdaDeltaTheta, n, top, top).unwrap();
        let want = grid(n, |p, d| d <= n && d + 1 <= p && p <= d + n + 1);
        assert_eq!(a.occupied(), want, "n = {n}");
        assert_eq!(
            atlas(Space::CDeltaTheta, n, top, top).unwrap().counts,
            a.counts
        );
    }
}

fn window(ds: std::ops::RangeInclusive<usize>, lo: usize, hi: usize) -> BTreeSet<Bidegree> {
    ds.flat_map(|d| (d + lo..=d + hi).map(move |p| (p, d)))
        .collect()
}

#[test]
fn family_bidegrees() {
    for n in 1..=3 {
        let top = n + 7;
        let occ = |s: Space| atlas(s, n, top, top).unwrap().occupied();
        let off = occ(Space::OffDiagonalFamily(1));
        if n == 1 {
            assert!(off.is_empty());
        } else {
            assert_eq!(off, window(2..=2 + n, 1, n));
        }
        let second = window(2..=n + 3, 0, n);
        let diag: BTreeSet<_> = occ(Space::DiagonalFamily(1))
            .union(&occ(Space::DiagonalFamily3(1)))
            .copied()
            .collect();
        assert!(diag.is_subset(&second) && off.is_subset(&second));
        assert_eq!(occ(Space::DeltaFamily(1)), window(3..=n + 3, 0, n - 1));
    }
}

#[test]
fn zero_order_slice() {
    let a = atlas(Space::HSlice(1, 0), 1, 5, 0).unwrap();
    let c = atlas(Space::C(1), 1, 5, 0).unwrap();
    assert_eq!(a.occupied(), c.occupied());
    assert_eq!(
        atlas(Space::C(3), 2, 1, 1).unwrap_err(),
        Error::IndexOutOfRange {
            what: "component",
            value: 3
        }
    );
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    // Every monomial lies in exactly one summand of Ĉ ⊕ ⊕_i Ĉ_i^nt ⊕ M̂.
    #[test]
    fn decomposition_is_a_partition(n in 1usize..=3, p in 0usize..=3, d in 0usize..=4) {
        for m in monomials(n, p, d) {
            let hits = usize::from(in_c(&m))
                + (1..=n).filter(|&i| in_c_i_nontrivial(&m, i)).count()
                + usize::from(in_mixed(&m));
            prop_assert_eq!(hits, 1, "{}", m);
        }
    }
}

fn kdv() -> SemisimpleHydroPair {
    SemisimpleHydroPair::new(vec![RatFunc::one()]).unwrap()
}

#[test]
fn first_cohomology_probe_is_zero() {
    let s = kdv();
    let r = ansatz_solve(&s, &AnsatzProblem::kernel(1, 2, 3), AnsatzMode::Kernel2).unwrap();
    assert!(r.only_trivial(), "{r}");
    assert!(r.unknowns > 0);
    assert!(r.to_string().contains("within bounds (u-degree <= 3"));
}

#[test]
fn tau_image_is_not_a_coboundary() {
    let s = kdv();
    let tau = build_tau(&s, &[RatFunc::one()]).unwrap();
    let t = dtilde_reduced(s.d0(), &tau);
    let pr = AnsatzProblem::coboundary(t, 2, 3, 3).unwrap();
    let r = ansatz_solve(&s, &pr, AnsatzMode::Coboundary).unwrap();
    assert!(r.only_trivial(), "{r}");
}

#[test]
fn coboundaries_are_found() {
    let s = kdv();
    let zero = AnsatzProblem::coboundary(ReducedOneForm::zero(), 1, 2, 2).unwrap();
    assert!(!ansatz_solve(&s, &zero, AnsatzMode::Coboundary)
        .unwrap()
        .only_trivial());

    let eta = ReducedOneForm::from_gh(
        vec![(P::u(1, 1) * P::u(1, 1)).mul_scalar(&RatFunc::u(1))],
        vec![],
    );
    let t = dtilde_reduced(s.d0(), &dtilde_reduced(s.d1(), &eta));
    assert!(!t.is_zero());
    let r = ansatz_solve(
        &s,
        &AnsatzProblem::coboundary(t.clone(), 2, 4, 2).unwrap(),
        AnsatzMode::Coboundary,
    )
    .unwrap();
    let AnsatzOutcome::Coboundary(Some(found)) = &r.outcome else {
        panic!("{r}")
    };
    assert_eq!(dtilde_reduced(s.d0(), &dtilde_reduced(s.d1(), found)), t);
}

#[test]
fn cap_is_enforced() {
    let s = kdv();
    let pr = AnsatzProblem::kernel(1, 2, 3).with_cap(3);
    assert!(matches!(
        ansatz_solve(&s, &pr, AnsatzMode::Kernel2),
        Err(Error::SystemTooLarge(_))
    ));
}

// Where the vanishing statement applies, every bounded cocycle found is a
// bounded coboundary.
#[test]
fn guaranteed_zero_bidegrees_have_no_bounded_classes() {
    let s = kdv();
    let udeg = 2;
    let mut checked = 0;
    for d in 2..=4 {
        for p in 0..=2 {
            if !vbh_guaranteed_zero(1, p, d) {
                continue;
            }
            let r =
                ansatz_solve(&s, &AnsatzProblem::kernel(p, d, udeg), AnsatzMode::Kernel2).unwrap();
            let AnsatzOutcome::Kernel(basis) = r.outcome else {
                unreachable!()
            };
            for w in basis {
                let pr = AnsatzProblem::coboundary(w.clone(), p, d, udeg + 1).unwrap();
                let c = ansatz_solve(&s, &pr, AnsatzMode::Coboundary).unwrap();
                assert!(
                    !c.only_trivial(),
                    "({p},{d}): {w} is not a bounded coboundary"
                );
                checked += 1;
            }
        }
    }
    assert!(checked > 0);
}
