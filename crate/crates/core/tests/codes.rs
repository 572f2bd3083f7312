mod common;

use std::sync::Arc;

use common::*;
use dihedral_forge::dihedral::{decompose, right_translate_code, sample_unit, DihedralElem};
use dihedral_forge::ensemble::{
    base_code, derive_seed, run_ensemble, CodeKind, EnsembleConfig, CSV_HEADER,
};
use dihedral_forge::gf::{field_of_order, FieldSpec, Sym};
use dihedral_forge::lincode::{
    dual, duality_flags, hull_dim, is_maximal_self_orthogonal, is_self_orthogonal, min_weight,
    read_generator, scan_weights, write_generator, LinearCode, MinWeight, DEFAULT_BUDGET,
};
use dihedral_forge::Error;
use proptest::prelude::*;

fn code_strategy(
    max_len: usize,
    max_k: usize,
) -> impl Strategy<Value = (Arc<FieldSpec>, Vec<Vec<Sym>>, usize)> {
    (prop::sample::select(vec![2u64, 3, 4, 5]), 1..=max_len).prop_flat_map(move |(q, len)| {
        let f = field_of_order(q).unwrap();
        let rows =
            prop::collection::vec(prop::collection::vec(0..q as Sym, len), 1..=max_k.min(len));
        (Just(f), rows, Just(len))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn dual_and_hull_properties((f, rows, len) in code_strategy(10, 6)) {
        let c = LinearCode::from_rows(&f, len, &rows);
        let d = dual(&c);
        prop_assert_eq!(c.dim() + d.dim(), len);
        prop_assert_eq!(&dual(&d), &c);
        for i in 0..c.dim() {
            for j in 0..d.dim() {
                prop_assert_eq!(dot(&f, c.generator().row(i), d.generator().row(j)), 0);
            }
        }
        prop_assert_eq!(hull_dim(&c), hull_dim(&d));
        prop_assert_eq!(hull_dim(&c), hull_dim_oracle(&f, &c));
        prop_assert_eq!(rank(&f, &rows), c.dim());
    }

    #[test]
    fn min_weight_matches_brute_force((f, rows, len) in code_strategy(12, 5)) {
        let c = LinearCode::from_rows(&f, len, &rows);
        let oracle = brute_min_weight(&f, &rows, len);
        match min_weight(&c, DEFAULT_BUDGET) {
            Ok(m) => {
                prop_assert!(m.is_exact());
                prop_assert_eq!(Some(m.weight()), oracle);
                prop_assert!(c.contains(m.witness()));
                prop_assert_eq!(weight(m.witness()), m.weight());
            }
            Err(Error::ZeroDim) => prop_assert_eq!(oracle, None),
            Err(e) => prop_assert!(false, "{e}"),
        }
    }

    #[test]
    fn weight_distribution_matches_enumeration((f, rows, len) in code_strategy(9, 4)) {
        let c = LinearCode::from_rows(&f, len, &rows);
        let mut dist = vec![0u64; len + 1];
        for_each_codeword(&f, &c.generator().to_rows(), len, |w| dist[weight(w)] += 1);
        let scan = scan_weights(&c, DEFAULT_BUDGET).unwrap();
        prop_assert_eq!(scan.distribution, dist);
    }

    #[test]
    fn generator_text_round_trip((f, rows, len) in code_strategy(8, 4)) {
        let c = LinearCode::from_rows(&f, len, &rows);
        let text = write_generator(&c);
        prop_assert_eq!(read_generator(&text, None).unwrap(), c.clone());
        prop_assert_eq!(read_generator(&text, Some(&f)).unwrap(), c);
    }
}

/// The code's own generator has independent rows, so the Gram-rank formula applies.
fn hull_dim_oracle(f: &FieldSpec, c: &LinearCode) -> usize {
    if c.dim() == 0 {
        return 0;
    }
    common::hull_dim(f, &c.generator().to_rows())
}

/// Maximality by enumerating every vector of the ambient space.
fn maximal_by_enumeration(f: &FieldSpec, c: &LinearCode) -> bool {
    let len = c.length();
    let unit: Vec<Vec<Sym>> = (0..len)
        .map(|i| {
            let mut r = vec![0; len];
            r[i] = 1;
            r
        })
        .collect();
    let rows = c.generator().to_rows();
    let mut maximal = true;
    for_each_codeword(f, &unit, len, |x| {
        let orth = rows.iter().all(|r| dot(f, r, x) == 0);
        if orth && dot(f, x, x) == 0 && !c.contains(x) {
            maximal = false;
        }
    });
    maximal
}

#[test]
fn maximal_self_orthogonal_matches_enumeration() {
    for q in [2u64, 3, 4, 5] {
        let f = field_of_order(q).unwrap();
        for len in 1..=6usize {
            // The zero code and every self-orthogonal code spanned by one or two
            // vectors among a deterministic sample.
            let words: Vec<Vec<Sym>> = (0..(q as usize).pow(len as u32).min(60))
                .map(|i| {
                    let mut x = i * 7 + 3;
                    (0..len)
                        .map(|_| {
                            let d = (x % q as usize) as Sym;
                            x /= q as usize;
                            d
                        })
                        .collect()
                })
                .collect();
            let mut candidates = vec![LinearCode::zero(&f, len)];
            for a in &words {
                candidates.push(LinearCode::from_rows(&f, len, std::slice::from_ref(a)));
                for b in words.iter().take(8) {
                    candidates.push(LinearCode::from_rows(&f, len, &[a.clone(), b.clone()]));
                }
            }
            for c in candidates.iter().filter(|c| is_self_orthogonal(c)) {
                assert_eq!(
                    is_maximal_self_orthogonal(c).unwrap(),
                    maximal_by_enumeration(&f, c),
                    "q={q}, len={len}, {:?}",
                    c.generator().to_rows()
                );
            }
        }
    }
}

#[test]
fn unit_translates_keep_dimension() {
    for (q, n) in [(2u64, 9u64), (3, 7), (4, 5), (5, 9)] {
        let f = field_of_order(q).unwrap();
        let d = decompose(n, &f).unwrap();
        for kind in [CodeKind::C, CodeKind::HatC] {
            let base = base_code(&d, kind).unwrap();
            for s in 0..10 {
                let beta = sample_unit(&d, derive_seed(s, n));
                let t = right_translate_code(&base, &beta, &d).unwrap();
                assert_eq!(t.dim(), base.dim());
                // The translate is again a left ideal: closed under left multiplication by u and v.
                let nn = d.n;
                for g in [1usize, nn] {
                    let mut x = vec![0; 2 * nn];
                    x[g] = 1;
                    for r in t.generator().to_rows() {
                        assert!(t.contains(&group_mul(&f, nn, &x, &r)));
                    }
                }
            }
        }
    }
}

#[test]
fn ensemble_rows_agree_with_recomputation() {
    let cfg = EnsembleConfig {
        n: 7,
        p: 2,
        e: 1,
        kind: CodeKind::HatC,
        delta: 0.25,
        trials: 12,
        seed: 99,
        min_weight_budget: DEFAULT_BUDGET as u64,
    };
    let report = run_ensemble(&cfg).unwrap();
    let csv = report.to_csv();
    assert_eq!(csv.lines().next(), Some(CSV_HEADER));
    assert_eq!(csv.lines().count(), cfg.trials + 1);
    let f = field_of_order(2).unwrap();
    let d = decompose(7, &f).unwrap();
    let base = base_code(&d, CodeKind::HatC).unwrap();
    let threshold = (0.25f64 * 14.0 + 1e-9).floor() as usize;
    for t in &report.per_trial {
        assert_eq!(t.beta_seed, derive_seed(cfg.seed, t.index as u64));
        let beta = sample_unit(&d, t.beta_seed);
        let code = right_translate_code(&base, &beta, &d).unwrap();
        let rows = code.generator().to_rows();
        let mut dist = [0u64; 15];
        for_each_codeword(&f, &rows, 14, |w| dist[weight(w)] += 1);
        let w = (1..15).find(|&i| dist[i] > 0).unwrap();
        assert!(matches!(t.min_weight, MinWeight::Exact { weight, .. } if weight == w));
        assert_eq!(t.delta_hit, w <= threshold);
        assert_eq!(t.x_count, Some(dist[1..=threshold].iter().sum()));
        assert_eq!(t.flags, duality_flags(&code));
        assert!(t.flags.self_dual);
        let witness = DihedralElem::from_flat(t.min_weight.witness());
        assert!(code.contains(&witness.flatten()));
    }
    let hits = report.per_trial.iter().filter(|t| t.delta_hit).count();
    assert_eq!(
        report.empirical_pr_le_delta,
        hits as f64 / cfg.trials as f64
    );
}

#[test]
fn failed_regime_audit_aborts_ensemble() {
    let cfg = EnsembleConfig {
        n: 11,
        p: 3,
        e: 1,
        kind: CodeKind::C,
        delta: 0.1,
        trials: 3,
        seed: 1,
        min_weight_budget: DEFAULT_BUDGET as u64,
    };
    assert!(matches!(run_ensemble(&cfg), Err(Error::AuditFailure(_))));
}
