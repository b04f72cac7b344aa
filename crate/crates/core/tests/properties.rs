use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use netlie_core::blockform::{jacobi_raw, jacobian, to_blockform, Orientation};
use netlie_core::exact::{q, rank_of, DerivSymbol, Monomial, Poly, QMatrix, Rational, SymMatrix};
use netlie_core::frames::{assign_coordinates, duality_check, xbasis_matrices, AssignMode};
use netlie_core::liealg::{LieElement, NetAlgebra};
use netlie_core::netspec::{parse_spec, random_spec, NetworkSpec, RandomSpecParams};
use netlie_core::sigma::{
    all_basis_elements, express_in_basis, nu, reconstruct, ColorLayout, SigmaMap,
};

fn small_poly() -> impl Strategy<Value = Poly> {
    prop::collection::vec(((1usize..=2, 1usize..=3), 0u32..=2, -3i64..=3), 0..4).prop_map(|terms| {
        let mut p = Poly::zero();
        for ((c, pos), e, k) in terms {
            let mut m = Monomial::one();
            for _ in 0..e {
                m = m.mul(&Monomial::var(DerivSymbol::new(c, pos)));
            }
            p.add_term(m, q(k));
        }
        p
    })
}

fn linform_matrix(n: usize) -> impl Strategy<Value = SymMatrix> {
    prop::collection::vec(prop::collection::vec((1usize..=3, -2i64..=2), 0..3), n * n).prop_map(
        move |cells| {
            SymMatrix::from_fn(n, n, |r, c| {
                cells[r * n + c]
                    .iter()
                    .fold(Poly::zero(), |acc, &(pos, k)| {
                        &acc + &Poly::f(1, pos).scale(&q(k))
                    })
            })
        },
    )
}

fn spec_from_seed(seed: u64, max_cells: usize) -> NetworkSpec {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_spec(
        &mut rng,
        RandomSpecParams {
            max_cells,
            max_degree: 4,
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_laws(a in small_poly(), b in small_poly(), c in small_poly()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) - &b, a.clone());
    }

    #[test]
    fn canonical_text_round_trips(a in small_poly()) {
        let back: Poly = a.to_string().parse().unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn exact_division_inverts_product(a in small_poly(), b in small_poly()) {
        prop_assume!(!b.is_zero());
        prop_assert_eq!((&a * &b).div_exact(&b), Some(a));
    }

    #[test]
    fn cofactor_matches_elimination(m in (1usize..=5).prop_flat_map(linform_matrix)) {
        prop_assert_eq!(m.determinant().unwrap(), m.determinant_bareiss().unwrap());
    }

    #[test]
    fn determinant_transpose_invariant(m in linform_matrix(4)) {
        prop_assert_eq!(m.determinant().unwrap(), m.transpose().determinant().unwrap());
    }

    #[test]
    fn determinant_similarity_invariant(m in linform_matrix(3), entries in prop::collection::vec(-2i64..=2, 9)) {
        let p = QMatrix::from_i64(3, 3, &entries);
        let Some(pinv) = p.inverse() else { return Ok(()); };
        let conj = &(&pinv * &m) * &p;
        prop_assert_eq!(conj.determinant().unwrap(), m.determinant().unwrap());
    }

    #[test]
    fn spec_render_round_trips(seed in any::<u64>()) {
        let s = spec_from_seed(seed, 8);
        prop_assert_eq!(parse_spec(&s.render()).unwrap(), s);
    }

    #[test]
    fn frames_are_dual_and_color_preserving(seed in any::<u64>()) {
        let s = spec_from_seed(seed, 8);
        for mode in [AssignMode::Minimize, AssignMode::Maximize] {
            let a = assign_coordinates(&s, mode);
            prop_assert_eq!(&a, &assign_coordinates(&s, mode));
            let f = xbasis_matrices(&s, &a);
            prop_assert!(duality_check(&f));
            prop_assert_eq!(f.p() * f.pinv(), QMatrix::identity(s.n()));
            prop_assert!(f.is_color_preserving());
        }
    }

    #[test]
    fn block_form_is_network_and_round_trips(seed in any::<u64>()) {
        let s = spec_from_seed(seed, 6);
        let f = xbasis_matrices(&s, &assign_coordinates(&s, AssignMode::Maximize));
        let block = to_blockform(&s, &f);
        prop_assert!(block.o_block_is_zero());

        let raw = jacobi_raw(&s);
        prop_assert_eq!(jacobian(&block), raw.determinant().unwrap());

        // undo block order, conjugate back, undo v-order, transpose
        let to_v = f.block_to_v();
        let mut inv = vec![0; to_v.len()];
        for (a, &g) in to_v.iter().enumerate() {
            inv[g] = a;
        }
        let x_v = block.matrix(Orientation::Basis).select(&inv, &inv);
        let j_v = &(f.p() * &x_v) * f.pinv();
        let v = f.v_order();
        let mut pos = vec![0; v.len()];
        for (a, &cell) in v.iter().enumerate() {
            pos[cell] = a;
        }
        let back = j_v.select(&pos, &pos).transpose();
        prop_assert_eq!(back.entries(), raw.entries());
    }

    #[test]
    fn basis_expression_reconstructs(counts in prop::collection::vec(1usize..=3, 1..=3), seed in any::<u64>()) {
        let layout = ColorLayout::new(counts);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = layout.num_colors();
        let (k, l) = (rng.gen_range(1..=c), rng.gen_range(1..=c));
        let images = (0..layout.count(l)).map(|_| rng.gen_range(0..layout.count(k))).collect();
        let s = SigmaMap::new(&layout, k, l, images).unwrap();
        prop_assert_eq!(reconstruct(&layout, &express_in_basis(&layout, &s)), nu(&layout, &s));
    }

    #[test]
    fn span_is_closed_under_products(counts in prop::collection::vec(1usize..=3, 1..=3), i in any::<prop::sample::Index>(), j in any::<prop::sample::Index>()) {
        let layout = ColorLayout::new(counts);
        let basis = all_basis_elements(&layout);
        let vecs: Vec<Vec<Rational>> = basis.iter().map(|(_, m)| m.entries().to_vec()).collect();
        let r = rank_of(&vecs);
        let prod = &basis[i.index(basis.len())].1 * &basis[j.index(basis.len())].1;
        let mut with = vecs;
        with.push(prod.entries().to_vec());
        prop_assert_eq!(rank_of(&with), r);
    }

    #[test]
    fn theta_preserves_random_brackets(c in 1usize..=3, b in 1usize..=3, xs in prop::collection::vec(-2i64..=2, 18), ys in prop::collection::vec(-2i64..=2, 18)) {
        let alg = NetAlgebra::new(c, b);
        let basis = alg.basis();
        let elem = |v: &[i64]| {
            let coeffs: Vec<Rational> = basis.iter().enumerate().map(|(i, _)| q(v[i % v.len()])).collect();
            LieElement::from_vector(&basis, &coeffs)
        };
        let (x, y) = (elem(&xs), elem(&ys));
        let dual = alg.dual();
        let lhs = alg.theta(&alg.bracket(&x, &y)).unwrap();
        let rhs = dual.bracket(&alg.theta(&x).unwrap(), &alg.theta(&y).unwrap());
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(dual.theta(&alg.theta(&x).unwrap()).unwrap(), x);
    }
}

#[test]
fn sampled_jacobi_up_to_eight_cells() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..1000 {
        let n = rng.gen_range(1..=8);
        let c = rng.gen_range(1..=n);
        let alg = NetAlgebra::new(c, n - c);
        let basis = alg.gl_basis();
        let pick = |rng: &mut ChaCha8Rng| LieElement::from(basis[rng.gen_range(0..basis.len())]);
        let (x, y, z) = (pick(&mut rng), pick(&mut rng), pick(&mut rng));
        let s = alg
            .bracket(&x, &alg.bracket(&y, &z))
            .add(&alg.bracket(&y, &alg.bracket(&z, &x)))
            .add(&alg.bracket(&z, &alg.bracket(&x, &y)));
        assert!(s.is_zero(), "{x}, {y}, {z}");
        assert_eq!(alg.bracket(&x, &y), alg.bracket(&y, &x).scale(&q(-1)));
    }
}

#[test]
fn bc_brackets_vanish() {
    for (c, b) in [(1, 1), (2, 3), (3, 2)] {
        let alg = NetAlgebra::new(c, b);
        for x in alg.basis() {
            for y in alg.basis() {
                use netlie_core::blockform::BlockKind::{B, C};
                if x.kind == B && y.kind == C {
                    assert!(alg.bracket_elems(x, y).is_zero());
                }
            }
        }
    }
}
