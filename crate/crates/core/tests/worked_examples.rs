//! Small explicit codes with known invariants.

mod common;

use std::sync::Arc;

use sumrank::codes::{Code, Provenance, ENUMERATION_CAP};
use sumrank::gf::{Automorphism, Fe, FieldTower, Subfield};
use sumrank::invariants::{
    block_embed_subring, center, centraliser, distinguish, left_idealiser, nuclear_parameters, right_idealiser,
    s_idealiser, s_patterns, Verdict,
};
use sumrank::quot::QuotientRing;
use sumrank::srmat::{block_embed, linearized_to_matrix, singleton_bound, DegeneracyWitness, FqBasis, MatSpace, Matrix};

use common::*;

fn mat(rows: &[&[u32]]) -> Matrix {
    Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| Fe(x)).collect()).collect()).unwrap()
}

fn matrix_code(t: &Arc<FieldTower>, shapes: Vec<(usize, usize)>, basis: Vec<Vec<Matrix>>) -> Code {
    let space = MatSpace::new(t.clone(), shapes).unwrap();
    Code::from_tuples(&space, &basis, Provenance::Custom).unwrap()
}

#[test]
fn desk_nuclear_parameters() {
    let cases = [
        (desk_lrs(), [1_953_125, 125, 125, 25, 5]),
        (desk_atlrs(), [1_953_125, 5, 5, 25, 5]),
        (desk_tz(), [625, 5, 5, 25, 5]),
    ];
    for (cfg, want) in cases {
        let np = nuclear_parameters(&build(&cfg), ENUMERATION_CAP).unwrap();
        assert_eq!(np.sizes(), want);
        assert!(np.center_agrees_on_right);
    }
}

/// `f = 1 + θ + θ² + θ³` and `g = 1 + θ²` over `F_16`, with `C` the direct
/// sum of `F_16·f` and `F_4·g`. Both block codes share a kernel, so the left
/// idealisers are large: `F_16·f` is every rank-one map with the kernel of the
/// trace, hence `L = Mat(4, F_2)`; for `g` a left multiplier acts as an `F_4`
/// scalar on `F_4` and freely on a complement, `|L| = 4·2^8`.
mod mixed_idealisers {
    use super::*;

    fn setup() -> (Arc<FieldTower>, Vec<Matrix>, Vec<Matrix>) {
        let t = tower(2, 1, 4);
        let basis = FqBasis::default_for(&t);
        let f = |a: Fe| linearized_to_matrix(&t, &[a, a, a, a], &basis);
        let g = |b: Fe| linearized_to_matrix(&t, &[b, Fe::ZERO, b, Fe::ZERO], &basis);
        let fs = t.fp_basis().into_iter().map(f).collect();
        let gs = t.subfield_basis(Subfield { degree: 2 }).into_iter().map(g).collect();
        (t, fs, gs)
    }

    #[test]
    fn single_block_idealisers() {
        let (t, fs, gs) = setup();
        let one = |b: &[Matrix]| matrix_code(&t, vec![(4, 4)], b.iter().map(|x| vec![x.clone()]).collect());
        let log = |s: sumrank::invariants::Subring| s.dim();
        let (cf, cg) = (one(&fs), one(&gs));
        assert_eq!(log(right_idealiser(&cf).unwrap()), 13);
        assert_eq!(log(left_idealiser(&cf).unwrap()), 16);
        assert_eq!(log(right_idealiser(&cg).unwrap()), 10);
        assert_eq!(log(left_idealiser(&cg).unwrap()), 10);
        assert!(!cf.is_nondegenerate().unwrap() && !cg.is_nondegenerate().unwrap());
    }

    #[test]
    fn s_idealisers_split_over_blocks() {
        let (t, fs, gs) = setup();
        let z = Matrix::zeros(4, 4);
        let mut basis: Vec<Vec<Matrix>> = fs.iter().map(|x| vec![x.clone(), z.clone()]).collect();
        basis.extend(gs.iter().map(|y| vec![z.clone(), y.clone()]));
        let code = matrix_code(&t, vec![(4, 4), (4, 4)], basis);
        let dims: Vec<(Vec<bool>, usize)> =
            s_patterns(2).into_iter().map(|s| (s.clone(), s_idealiser(&code, &s).unwrap().dim())).collect();
        let dim = |s: [bool; 2]| dims.iter().find(|(x, _)| x[..] == s).unwrap().1;
        // Products of the single-block idealisers: L(f) = 16, R(f) = 13, L(g) = R(g) = 10.
        assert_eq!(dim([true, true]), 26);
        assert_eq!(dim([false, false]), 23);
        assert_eq!(dim([true, false]), 26);
        assert_eq!(dim([false, true]), 23);
    }
}

fn example_c2() -> Code {
    let t = tower(2, 1, 4);
    let r = Arc::new(QuotientRing::new(t.clone(), vec![Fe::ONE], None).unwrap());
    let elems: Vec<_> =
        t.fp_basis().into_iter().map(|a| r.from_coeffs(vec![a, t.pow(a, 2), t.pow(a, 4), Fe::ZERO])).collect();
    Code::from_quot_elements(&r, &elems, Provenance::Custom)
}

#[test]
fn equivalent_code_with_lower_subspace_linearity() {
    let c2 = example_c2();
    assert_eq!(c2.subspace_linearity().unwrap(), 2);
    let lin = sumrank::invariants::linearity_degree(&c2).unwrap();
    assert_eq!((lin.size, lin.exact), (16, true));
    // Equivalent to F_16·id, so every nonzero codeword has full rank.
    assert_eq!(c2.weight_distribution(ENUMERATION_CAP).unwrap().counts, vec![1, 0, 0, 0, 15]);
}

#[test]
fn nondegenerate_without_full_rank_codeword() {
    let t = tower(3, 1, 2);
    let ms = [
        mat(&[&[2, 2, 2, 1, 2], &[2, 2, 1, 2, 2], &[2, 1, 0, 1, 1], &[1, 2, 1, 2, 0], &[2, 2, 1, 0, 0]]),
        mat(&[&[0, 0, 0, 0, 0], &[0, 0, 0, 0, 1], &[0, 0, 0, 1, 0], &[0, 0, 1, 1, 0], &[0, 1, 0, 0, 0]]),
        mat(&[&[0, 0, 0, 1, 1], &[0, 0, 0, 2, 0], &[0, 0, 0, 2, 2], &[1, 2, 2, 1, 0], &[1, 0, 2, 0, 0]]),
        mat(&[&[0, 2, 0, 2, 0], &[2, 1, 2, 0, 0], &[0, 2, 0, 0, 0], &[2, 0, 0, 1, 1], &[0, 0, 0, 1, 0]]),
        mat(&[&[2, 2, 1, 2, 0], &[2, 2, 1, 2, 1], &[1, 1, 0, 1, 2], &[2, 2, 1, 2, 2], &[0, 1, 2, 2, 0]]),
    ];
    let code = matrix_code(&t, vec![(5, 5)], ms.into_iter().map(|m| vec![m]).collect());
    assert_eq!(code.dim(), 5);
    let wd = code.weight_distribution(ENUMERATION_CAP).unwrap();
    assert_eq!(wd.counts, vec![1, 0, 0, 0, 242]);
    assert!(code.is_nondegenerate().unwrap());
    assert_eq!(code.first_of_weight(5, ENUMERATION_CAP).unwrap(), None);
}

#[test]
fn full_rank_rectangular_codeword_can_be_degenerate() {
    let t = tower(2, 1, 2);
    let code = matrix_code(&t, vec![(2, 3)], vec![vec![mat(&[&[1, 0, 0], &[0, 1, 0]])]]);
    assert!(code.first_of_weight(2, ENUMERATION_CAP).unwrap().is_some());
    assert_eq!(
        code.nondegeneracy().unwrap(),
        Err(DegeneracyWitness::Right { block: 0, vector: vec![vec![0], vec![0], vec![1]] })
    );
}

mod three_by_three_plus_one {
    use super::*;

    fn code(shapes: Vec<(usize, usize)>, a: Matrix, b: Matrix) -> Code {
        let one = mat(&[&[1]]);
        matrix_code(&tower(2, 1, 2), shapes, vec![vec![a, one.clone()], vec![b, one]])
    }

    fn c() -> Code {
        code(vec![(3, 3), (1, 1)], mat(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 0]]), mat(&[&[0, 0, 0], &[0, 1, 0], &[0, 0, 1]]))
    }

    fn c_prime() -> Code {
        code(vec![(3, 3), (1, 1)], mat(&[&[1, 0, 1], &[0, 1, 1], &[0, 0, 0]]), mat(&[&[0, 0, 0], &[0, 1, 1], &[1, 0, 1]]))
    }

    fn c_second() -> Code {
        code(vec![(3, 3), (1, 1)], mat(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 0]]), mat(&[&[0, 0, 0], &[0, 1, 0], &[1, 0, 0]]))
    }

    #[test]
    fn degeneracy() {
        assert!(c().is_nondegenerate().unwrap());
        assert!(!c_prime().is_nondegenerate().unwrap());
        assert!(!c_second().is_nondegenerate().unwrap());
    }

    #[test]
    fn equivalent_pair_agrees_on_every_invariant() {
        let (a, b) = (c_prime(), c_second());
        let wa = a.weight_distribution(ENUMERATION_CAP).unwrap();
        assert_eq!(wa, b.weight_distribution(ENUMERATION_CAP).unwrap());
        assert_eq!(distinguish(&a, &b, ENUMERATION_CAP).unwrap().verdict, Verdict::Undetermined);
        // Dropping the zero column embeds it in Mat((3,1),(2,1)) with the same weights.
        let small = code(vec![(3, 2), (1, 1)], mat(&[&[1, 0], &[0, 1], &[0, 0]]), mat(&[&[0, 0], &[0, 1], &[1, 0]]));
        assert_eq!(small.weight_distribution(ENUMERATION_CAP).unwrap().counts, wa.counts);
    }
}

#[test]
fn singleton_bound_values() {
    let shapes = [(3, 3), (3, 3)];
    assert_eq!(singleton_bound(&shapes, 1).unwrap(), 18);
    assert_eq!(singleton_bound(&shapes, 4).unwrap(), 9);
    assert_eq!(singleton_bound(&shapes, 6).unwrap(), 3);
}

fn desk_matrix(cfg: &sumrank::config::RunConfig) -> Code {
    let q = build(cfg);
    q.to_matrix_ambient(&FqBasis::default_for(q.tower())).unwrap()
}

#[test]
fn big_matrix_idealiser_is_block_diagonal() {
    for cfg in [desk_lrs(), desk_atlrs(), desk_tz()] {
        let code = desk_matrix(&cfg);
        assert!(code.is_nondegenerate().unwrap());
        let s = code.mat_space().unwrap();
        let (rows, cols): (usize, usize) = s.shapes().iter().fold((0, 0), |a, x| (a.0 + x.0, a.1 + x.1));
        let big_space = MatSpace::new(s.tower().clone(), vec![(rows, cols)]).unwrap();
        let images: Vec<_> = code.tuple_basis().unwrap().iter().map(|x| vec![block_embed(x)]).collect();
        let big = Code::from_tuples(&big_space, &images, Provenance::Custom).unwrap();
        let embedded_l = block_embed_subring(&left_idealiser(&code).unwrap()).unwrap();
        let embedded_r = block_embed_subring(&right_idealiser(&code).unwrap()).unwrap();
        assert_eq!(left_idealiser(&big).unwrap().space(), embedded_l.space());
        assert_eq!(right_idealiser(&big).unwrap().space(), embedded_r.space());
    }
}

#[test]
fn center_is_any_s_idealiser_meet_centraliser() {
    for cfg in [desk_lrs(), desk_atlrs(), desk_tz()] {
        let code = desk_matrix(&cfg).normalize_to_identity(ENUMERATION_CAP).unwrap();
        let cent = centraliser(&code).unwrap();
        let z = center(&code).unwrap();
        for s in s_patterns(2) {
            assert_eq!(s_idealiser(&code, &s).unwrap().intersect(&cent).space(), z.space(), "s = {s:?}");
        }
    }
}

#[test]
fn msrd_idealisers_are_small_fields() {
    for cfg in [desk_lrs(), desk_atlrs(), desk_tz()] {
        let code = desk_matrix(&cfg);
        let qm = code.tower().size() as u64;
        for s in s_patterns(2) {
            assert!(s_idealiser(&code, &s).unwrap().fingerprint().unwrap().is_field, "s = {s:?}");
        }
        assert!(left_idealiser(&code).unwrap().size().unwrap() <= qm);
        assert!(right_idealiser(&code).unwrap().size().unwrap() <= qm);
    }
}

#[test]
fn atlrs_codes_with_different_twists_are_inequivalent() {
    let t = tower(5, 1, 4);
    let r = ring(&t, &[1, 4]);
    let code = |h: i64| {
        let tau = t.theta_power(h);
        let eta = sumrank::codes::default_eta(&r, 3, tau).unwrap();
        Code::atlrs(&r, 3, eta, tau).unwrap()
    };
    let (a, b) = (code(1), code(2));
    assert_eq!(left_idealiser(&a).unwrap().size(), Some(5));
    assert_eq!(left_idealiser(&b).unwrap().size(), Some(25));
    let cert = distinguish(&a, &b, ENUMERATION_CAP).unwrap();
    assert_eq!(cert.verdict, Verdict::Inequivalent);
    assert!(cert.witness.unwrap().invariant.starts_with("left_idealiser"));
}

/// The ATLRS dual carries `−τ⁻¹(η)`; without the sign the identity fails in
/// odd characteristic.
#[test]
fn atlrs_dual_needs_the_sign() {
    let code = build(&desk_atlrs());
    let r = code.ring().unwrap().clone();
    let t = r.tower().clone();
    let Provenance::Atlrs { k, eta, tau } = *code.provenance() else { unreachable!() };
    let inv = t.inverse_automorphism(tau);
    let xk = r.monomial(Fe::ONE, k);
    let dual_with = |e: Fe| Code::atlrs_unchecked(&r, r.tm() - k, e, inv).scale_right(&xk).unwrap();
    let pulled = t.apply(inv, eta);
    assert_eq!(code.dual(), dual_with(t.neg(pulled)));
    assert_ne!(code.dual(), dual_with(pulled));
}

#[test]
fn tz_dual_needs_trace_zero() {
    let code = build(&desk_tz());
    let r = code.ring().unwrap().clone();
    let t = r.tower().clone();
    let half = Subfield { degree: t.degree() / 2 };
    let (k, xk) = (2, r.monomial(Fe::ONE, 2));
    let mut seen = (0, 0);
    for g in t.elements().filter(|&g| sumrank::codes::check_gamma(&r, g).is_ok()) {
        let c = Code::tz(&r, k, g).unwrap();
        let d = Code::tz_unchecked(&r, r.tm() - k, t.neg(g)).scale_right(&xk).unwrap();
        let trace_zero = t.trace(g, half).unwrap().is_zero();
        assert_eq!(c.dual() == d, trace_zero, "γ = {}", g.0);
        if trace_zero { seen.0 += 1 } else { seen.1 += 1 }
    }
    assert_eq!(seen, (4, 8));
}

#[test]
fn lrs_right_idealiser_for_large_k() {
    let t = tower(5, 1, 2);
    let r = ring(&t, &[1, 2, 3, 4]);
    let code = Code::lrs(&r, 5).unwrap();
    assert_eq!(right_idealiser(&code).unwrap().size(), Some(25));
    assert_eq!(left_idealiser(&code).unwrap().size(), Some(25));
}

#[test]
fn tau_identity_fixes_everything() {
    let t = tower(5, 1, 3);
    assert_eq!(t.subfield_size(t.fixed_field(Automorphism { h: 0 })), 125);
}
