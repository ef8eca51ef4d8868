//! Library results against brute-force oracles.

mod common;

use std::sync::Arc;

use sumrank::codes::{check_eta, default_eta, Code, Provenance, ENUMERATION_CAP};
use sumrank::gf::{Fe, FieldTower};
use sumrank::invariants::{center, centraliser, left_idealiser, right_idealiser, Subring};
use sumrank::linalg::FpSpace;
use sumrank::srmat::{trace_form, FqBasis, MatSpace};

use common::*;

/// Subrings small enough for quadratic enumeration, with labels.
fn small_subrings() -> Vec<(String, Subring)> {
    let mut out = Vec::new();
    for cfg in [desk_lrs(), desk_atlrs(), desk_tz()] {
        let code = build(&cfg);
        let name = code.provenance().family();
        let m = code.to_matrix_ambient(&FqBasis::default_for(code.tower())).unwrap();
        let n = m.normalize_to_identity(ENUMERATION_CAP).unwrap();
        out.push((format!("{name} left"), left_idealiser(&code).unwrap()));
        out.push((format!("{name} right"), right_idealiser(&code).unwrap()));
        out.push((format!("{name} centraliser"), centraliser(&n).unwrap()));
        out.push((format!("{name} center"), center(&n).unwrap()));
    }
    // Mat(2, F_2) and its diagonal F_2 × F_2, as idealisers of full codes.
    let t = tower(2, 1, 2);
    let full = MatSpace::square(t.clone(), 2, 1);
    let all = Code::from_space(
        sumrank::codes::Ambient::Matrix(full.clone()),
        FpSpace::full(2, 4),
        Provenance::Custom,
    );
    out.push(("Mat(2,F_2)".into(), left_idealiser(&all).unwrap()));
    let diag = Code::from_flat(sumrank::codes::Ambient::Matrix(full), vec![vec![1, 0, 0, 0], vec![0, 0, 0, 1]], Provenance::Custom)
        .unwrap();
    out.push(("diag(F_2)^2".into(), left_idealiser(&diag).unwrap()));
    // An F_16-line in a single block.
    let t4 = tower(2, 1, 4);
    let r = ring(&t4, &[1]);
    let lines = Code::lrs(&r, 1).unwrap();
    out.push(("F_16 line".into(), left_idealiser(&lines).unwrap()));
    out
}

#[test]
fn idempotent_count_matches_residue_fields() {
    for (name, sub) in small_subrings() {
        let fp = sub.fingerprint().unwrap();
        if !fp.commutative {
            continue;
        }
        let factors = fp.residue_fields.as_ref().unwrap().len();
        assert!(fp.decomposition_complete, "{name}");
        assert_eq!(idempotent_count(&sub), 1 << factors, "{name}: {:?}", fp.residue_fields);
    }
}

#[test]
fn literal_field_test_matches_fingerprint() {
    for (name, sub) in small_subrings() {
        let fp = sub.fingerprint().unwrap();
        assert_eq!(literal_is_field(&sub), fp.is_field, "{name}");
    }
}

#[test]
fn literal_max_subfield_matches_fingerprint() {
    for (name, sub) in small_subrings() {
        let fp = sub.fingerprint().unwrap();
        assert!(fp.max_subfield_exact, "{name}");
        assert_eq!(literal_max_subfield(&sub), fp.max_subfield, "{name}");
    }
}

#[test]
fn fixed_field_size_is_q_to_the_gcd() {
    for (p, e, m) in [(5, 1, 4), (2, 1, 6), (3, 2, 2), (2, 2, 3)] {
        let t = FieldTower::new(p, e, m, 1).unwrap();
        for h in 0..m {
            let want = (t.q() as u64).pow(sumrank::gf::gcd(h as u64, m as u64) as u32);
            assert_eq!(brute_fix_size(&t, h), want, "({p},{e},{m}) h={h}");
            assert_eq!(t.subfield_size(t.fixed_field(t.theta_power(h as i64))), want, "({p},{e},{m}) h={h}");
        }
    }
}

/// Validity of `η` by the signed norm computed as a power, against the
/// subgroup generated by `Λ` computed by closure.
#[test]
fn eta_validity_by_brute_norm() {
    let frames: [(Arc<FieldTower>, Vec<u32>); 3] =
        [(tower(5, 1, 3), vec![1, 4]), (tower(7, 1, 2), vec![1, 2, 4]), (tower(5, 1, 4), vec![1, 4])];
    for (t, lambdas) in frames {
        let r = ring(&t, &lambdas);
        let group: Vec<Fe> = {
            let mut g = vec![Fe::ONE];
            while let Some(n) = g.iter().flat_map(|&a| r.lambdas().iter().map(move |&l| (a, l))).map(|(a, l)| t.mul(a, l)).find(|x| !g.contains(x)) {
                g.push(n);
            }
            g
        };
        let q = t.q() as u64;
        let exp = ((q.pow(t.m())) - 1) / (q - 1);
        for k in 1..r.tm() {
            for h in 1..t.m() as i64 {
                let tau = t.theta_power(h);
                for eta in t.elements().skip(1) {
                    let mut v = t.pow(eta, exp);
                    if (k * r.m()) % 2 == 1 {
                        v = t.neg(v);
                    }
                    assert_eq!(check_eta(&r, k, eta, tau).is_ok(), !group.contains(&v), "k={k} h={h} η={}", eta.0);
                }
                let d = default_eta(&r, k, tau);
                assert_eq!(d.is_some(), t.elements().skip(1).any(|e| check_eta(&r, k, e, tau).is_ok()));
            }
        }
    }
}

#[test]
fn weight_distribution_agrees_across_ambients() {
    for cfg in [desk_lrs(), desk_atlrs(), desk_tz()] {
        let q = build(&cfg);
        let m = q.to_matrix_ambient(&FqBasis::default_for(q.tower())).unwrap();
        assert_eq!(
            q.weight_distribution(ENUMERATION_CAP).unwrap(),
            m.weight_distribution(ENUMERATION_CAP).unwrap(),
            "{}",
            q.provenance().family()
        );
    }
}

/// The dual from the Gram matrix is orthogonal to the code under the
/// literal trace form and has complementary dimension.
#[test]
fn dual_is_orthogonal_under_the_trace_form() {
    let q = build(&desk_tz());
    let code = q.to_matrix_ambient(&FqBasis::default_for(q.tower())).unwrap();
    let dual = code.dual();
    let s = code.mat_space().unwrap();
    assert_eq!(code.dim() + dual.dim(), s.flat_dim());
    for x in code.tuple_basis().unwrap() {
        for y in dual.tuple_basis().unwrap() {
            assert_eq!(trace_form(s.tower(), &x, &y), 0);
        }
    }
}

#[test]
fn skew_euclid_round_trip() {
    euclid_round_trip(500, 11).unwrap();
}

#[test]
fn gcrd_divides_and_satisfies_bezout() {
    gcrd_divisibility(500, 12).unwrap();
}

#[test]
fn lclm_degree_identity() {
    lclm_degree(500, 13).unwrap();
}

#[test]
fn quotient_weight_is_sum_of_block_ranks() {
    assert!(weight_vs_rank(2_000, 14).unwrap() >= 3);
}
