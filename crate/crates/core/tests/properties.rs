//! Randomized structural checks: exact ring laws for the symbolic layer and
//! unitarity of the numeric scattering data.

use proptest::prelude::*;
use ssf_core::coeff::Coefficient;
use ssf_core::diffop::DiffOp;
use ssf_core::displacement::DisplacementPoly;
use ssf_core::jet::{mi_total, multi_indices, JetMonomial, JetPoly, MultiIndex};
use ssf_core::potential::{Potential, PotentialSpec};
use ssf_core::scattering1d::{jost_solve, smatrix_1d};

fn arb_coeff() -> impl Strategy<Value = Coefficient> {
    (-6i64..=6, 1i64..=4, -1i32..=2)
        .prop_map(|(n, d, h)| Coefficient::with_pi(if n == 0 { 1 } else { n }, d, h))
}

fn arb_multi_index(dim: usize) -> impl Strategy<Value = MultiIndex> {
    prop::sample::select(multi_indices(dim, 2))
}

fn arb_monomial(dim: usize) -> impl Strategy<Value = JetMonomial> {
    prop::collection::vec(arb_multi_index(dim), 0..=2).prop_map(|ks| {
        let mut m = JetMonomial::one();
        for k in ks {
            m = m.mul(&JetMonomial::var(k));
        }
        m
    })
}

fn arb_jetpoly(dim: usize) -> impl Strategy<Value = JetPoly> {
    prop::collection::vec((arb_monomial(dim), arb_coeff()), 0..=3).prop_map(move |terms| {
        let mut p = JetPoly::zero(dim);
        for (m, c) in terms {
            p.add_term(m, &c);
        }
        p
    })
}

fn arb_diffop(dim: usize) -> impl Strategy<Value = DiffOp> {
    prop::collection::vec((arb_multi_index(dim), arb_jetpoly(dim)), 1..=2).prop_map(
        move |terms| {
            let mut op = DiffOp::zero(dim);
            for (alpha, p) in terms {
                op.add_term(alpha, p);
            }
            op
        },
    )
}

/// Displacement polynomial whose coefficients carry no jet variables.
fn arb_plain_displacement(dim: usize) -> impl Strategy<Value = DisplacementPoly> {
    prop::collection::vec(
        (prop::sample::select(multi_indices(dim, 3)), arb_coeff()),
        1..=3,
    )
    .prop_map(move |terms| {
        let mut f = DisplacementPoly::zero(dim, 4);
        for (beta, c) in terms {
            f.add_term(beta, JetPoly::constant(dim, c));
        }
        f
    })
}

fn permute_displacement(f: &DisplacementPoly, perm: &[usize]) -> DisplacementPoly {
    let mut out = DisplacementPoly::zero(f.dim(), f.y_bound());
    for (beta, p) in f.terms() {
        let mut nb = vec![0u32; beta.len()];
        for (i, &b) in beta.iter().enumerate() {
            nb[perm[i]] = b;
        }
        out.add_term(nb, p.permute(perm));
    }
    out
}

/// y-Laplacian computed from scratch, term by term, as an independent check.
fn direct_laplacian(f: &DisplacementPoly) -> DisplacementPoly {
    let mut out = DisplacementPoly::zero(f.dim(), f.y_bound());
    for (beta, p) in f.terms() {
        for i in 0..f.dim() {
            if beta[i] >= 2 {
                let mut nb = beta.clone();
                nb[i] -= 2;
                let factor = Coefficient::from_int(beta[i] as i64 * (beta[i] as i64 - 1));
                out.add_term(nb, p.scale(&factor));
            }
        }
    }
    out
}

/// Jet-free part: terms of each coefficient with an empty variable product.
fn jet_free_part(f: &DisplacementPoly) -> DisplacementPoly {
    let mut out = DisplacementPoly::zero(f.dim(), f.y_bound());
    for (beta, p) in f.terms() {
        let mut plain = JetPoly::zero(f.dim());
        for (m, c) in p.terms() {
            if m.factors().is_empty() {
                plain.add_term(m.clone(), &c);
            }
        }
        if !plain.is_zero() {
            out.add_term(beta.clone(), plain);
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn jet_ring_laws_dim1((a, b, c) in (arb_jetpoly(1), arb_jetpoly(1), arb_jetpoly(1))) {
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
    }

    #[test]
    fn jet_ring_laws_dim3((a, b, c) in (arb_jetpoly(3), arb_jetpoly(3), arb_jetpoly(3))) {
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert_eq!(a.add(&b), b.add(&a));
    }

    #[test]
    fn compose_is_associative_dim1(
        (a, b, c) in (arb_diffop(1), arb_diffop(1), arb_diffop(1))
    ) {
        prop_assert_eq!(a.compose(&b).compose(&c), a.compose(&b.compose(&c)));
    }

    #[test]
    fn compose_is_associative_dim2(
        (a, b, c) in (arb_diffop(2), arb_diffop(2), arb_diffop(2))
    ) {
        prop_assert_eq!(a.compose(&b).compose(&c), a.compose(&b.compose(&c)));
    }

    #[test]
    fn compose_distributes_over_addition(
        (a, b, c) in (arb_diffop(2), arb_diffop(2), arb_diffop(2))
    ) {
        prop_assert_eq!(
            a.compose(&b.add(&c)),
            a.compose(&b).add(&a.compose(&c))
        );
    }

    #[test]
    fn schrodinger_apply_is_permutation_equivariant_dim2(
        f in arb_plain_displacement(2),
        swap in any::<bool>(),
    ) {
        let perm = if swap { vec![1usize, 0] } else { vec![0usize, 1] };
        let lhs = permute_displacement(&f.schrodinger_apply(4), &perm);
        let rhs = permute_displacement(&f, &perm).schrodinger_apply(4);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn schrodinger_apply_is_permutation_equivariant_dim3(
        f in arb_plain_displacement(3),
        choice in 0usize..6,
    ) {
        let perms = [
            [0usize, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0],
        ];
        let perm = perms[choice].to_vec();
        let lhs = permute_displacement(&f.schrodinger_apply(4), &perm);
        let rhs = permute_displacement(&f, &perm).schrodinger_apply(4);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn jet_free_input_reduces_to_polynomial_laplacian(
        f in arb_plain_displacement(3)
    ) {
        // v-multiplication always attaches a jet variable, so the jet-free
        // part of (-Delta_y + v) f must be exactly -Delta_y f
        let applied = f.schrodinger_apply(4);
        prop_assert_eq!(jet_free_part(&applied), direct_laplacian(&f).neg());
    }

    #[test]
    fn permuting_coordinates_preserves_degree(
        p in arb_jetpoly(3),
        choice in 0usize..6,
    ) {
        let perms = [
            [0usize, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0],
        ];
        let q = p.permute(&perms[choice]);
        prop_assert_eq!(p.min_degree(), q.min_degree());
        prop_assert_eq!(p.max_jet_order(), q.max_jet_order());
        prop_assert_eq!(p.num_terms(), q.num_terms());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn scattering_data_is_unitary(
        depth in prop::sample::select(vec![-3.0f64, -1.5, -0.5, 0.8, 2.5]),
        width in prop::sample::select(vec![0.6f64, 1.0, 1.7]),
        k in prop::sample::select(vec![0.4f64, 0.9, 1.7, 3.1]),
    ) {
        let p = Potential::build(PotentialSpec::gaussian_well(1, depth, width)).unwrap();
        let j = jost_solve(&p, k).unwrap();
        let defect = (j.a.norm_sqr() - j.b.norm_sqr() - 1.0).abs();
        prop_assert!(defect <= 10.0 * j.estimated_error.max(1e-12), "defect {defect}");
        let s = smatrix_1d(&p, k).unwrap();
        prop_assert!((s.det.norm() - 1.0).abs() < 1e-8, "det modulus {}", s.det.norm());
    }
}

#[test]
fn multi_index_enumeration_is_complete_and_sorted() {
    let idx = multi_indices(3, 2);
    assert_eq!(idx.len(), 10); // C(3+2,3) multi-indices of total degree <= 2
    for w in idx.windows(2) {
        assert!(w[0] < w[1] || mi_total(&w[0]) <= mi_total(&w[1]));
    }
}
