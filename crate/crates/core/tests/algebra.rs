mod common;

use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use common::*;
use dihedral_forge::cyclic::{cyclotomic_cosets, factor_xn_minus_1, primitive_idempotents};
use dihedral_forge::dihedral::{
    code_c, code_hat_c, decompose, enumerate_submodules, right_translate_code, sample_unit,
    BlockCase, DihedralAlgebra, DihedralElem,
};
use dihedral_forge::gf::{make_field, FieldSpec, Sym};
use dihedral_forge::lincode::{is_self_dual, LinearCode};
use dihedral_forge::poly::{Poly, PolyRing};
use proptest::prelude::*;

const FIELDS: [(u64, u32); 9] = [
    (2, 1),
    (3, 1),
    (5, 1),
    (2, 2),
    (2, 3),
    (3, 2),
    (2, 4),
    (5, 2),
    (7, 2),
];

/// Schoolbook product of digit vectors reduced by the monic modulus.
fn poly_mul_mod(p: u32, modulus: &[u32], a: &[u32], b: &[u32]) -> Vec<u32> {
    let e = modulus.len() - 1;
    let mut prod = vec![0u32; 2 * e];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    for d in (e..prod.len()).rev() {
        let c = prod[d];
        if c != 0 {
            for (k, &m) in modulus.iter().enumerate() {
                let idx = d - e + k;
                prod[idx] = (prod[idx] + p * p - c * m % p) % p;
            }
        }
    }
    prod.truncate(e);
    prod
}

#[test]
fn field_tables_match_schoolbook_arithmetic() {
    for (p, e) in FIELDS {
        let f = make_field(p, e).unwrap();
        let (p, q) = (p as u32, f.q());
        for a in 0..q {
            let da = f.digits(a);
            for b in 0..q {
                let db = f.digits(b);
                let sum: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                assert_eq!(f.add(a, b), f.from_digits(&sum), "q={q}: {a} + {b}");
                let prod = f.from_digits(&poly_mul_mod(p, f.modulus(), &da, &db));
                assert_eq!(f.mul(a, b), prod, "q={q}: {a} * {b}");
                assert!(
                    a == 0 || b == 0 || prod != 0,
                    "q={q}: zero divisors {a}, {b}"
                );
            }
            if a != 0 {
                assert_eq!(f.mul(a, f.inv(a)), 1);
                assert_eq!(f.elem(a).inv().unwrap().repr(), f.inv(a));
                assert_eq!(f.pow(a, q as u64), a);
            }
        }
    }
}

fn field_strategy() -> impl Strategy<Value = Arc<FieldSpec>> {
    (0..FIELDS.len()).prop_map(|i| make_field(FIELDS[i].0, FIELDS[i].1).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms(f in field_strategy(), a in any::<u32>(), b in any::<u32>(), c in any::<u32>()) {
        let q = f.q();
        let (a, b, c) = (a % q, b % q, c % q);
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        prop_assert_eq!(f.add(a, f.neg(a)), 0);
        prop_assert_eq!(f.sub(f.add(a, b), b), a);
        prop_assert_eq!(f.parse(&f.format(a)).unwrap(), a);
        if b != 0 {
            prop_assert_eq!(f.mul(f.div(a, b), b), a);
        }
    }

    #[test]
    fn dihedral_product_matches_group_law(
        f in field_strategy(),
        n in prop::sample::select(vec![3usize, 5, 7, 9]),
        seed in any::<u64>(),
    ) {
        let q = f.q() as u64;
        let mut s = seed;
        let mut next = || {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((s >> 33) % q) as Sym
        };
        let a: Vec<Sym> = (0..2 * n).map(|_| next()).collect();
        let b: Vec<Sym> = (0..2 * n).map(|_| next()).collect();
        let alg = DihedralAlgebra::new(n, f.clone());
        let (ea, eb) = (DihedralElem::from_flat(&a), DihedralElem::from_flat(&b));
        let ab = alg.mul(&ea, &eb);
        prop_assert_eq!(ab.flatten(), group_mul(&f, n, &a, &b));
        prop_assert_eq!(alg.bar(&ea).flatten(), group_bar(n, &a));
        // bar is an anti-automorphism
        prop_assert_eq!(alg.bar(&ab), alg.mul(&alg.bar(&eb), &alg.bar(&ea)));
        prop_assert_eq!(alg.inner(&ea, &eb), dot(&f, &a, &b));
        prop_assert_eq!(alg.sigma(&ab), alg.sigma(&alg.mul(&eb, &ea)));
        prop_assert_eq!(alg.inner(&ea, &eb), alg.sigma(&alg.mul(&ea, &alg.bar(&eb))));
    }
}

#[test]
fn dihedral_group_table_is_d14() {
    // Basis products over GF(2) must realise a group of order 14 with u^7 = v^2 = 1, v u v = u^-1.
    let f = make_field(2, 1).unwrap();
    let alg = DihedralAlgebra::new(7, f);
    let basis: Vec<DihedralElem> = (0..7)
        .map(|i| DihedralElem::u_pow(7, i))
        .chain((0..7).map(|i| DihedralElem::v_u_pow(7, i)))
        .collect();
    let index = |x: &DihedralElem| basis.iter().position(|b| b == x).unwrap();
    let table: Vec<Vec<usize>> = basis
        .iter()
        .map(|a| basis.iter().map(|b| index(&alg.mul(a, b))).collect())
        .collect();
    for row in &table {
        let distinct: HashSet<_> = row.iter().collect();
        assert_eq!(distinct.len(), 14);
    }
    for a in 0..14 {
        for b in 0..14 {
            for c in 0..14 {
                assert_eq!(table[table[a][b]][c], table[a][table[b][c]]);
            }
        }
    }
    let (u, v) = (1, 7);
    assert_eq!(table[table[v][u]][v], 6);
    assert_eq!(table[v][v], 0);
}

#[test]
fn cyclic_factors_multiply_to_xn_minus_1() {
    for (p, e) in [(2u64, 1u32), (3, 1), (2, 2), (5, 1)] {
        let f = make_field(p, e).unwrap();
        let ring = PolyRing::new(&f);
        for n in (3..=63u64)
            .step_by(2)
            .filter(|&n| gcd(n, f.q() as u64) == 1)
        {
            let factors = factor_xn_minus_1(n, &f).unwrap();
            let prod = factors.iter().fold(Poly::one(), |acc, g| ring.mul(&acc, g));
            assert_eq!(prod, ring.x_n_minus_1(n as usize), "q={}, n={n}", f.q());
            let mut degs: Vec<usize> = factors.iter().map(|g| g.degree().unwrap()).collect();
            let mut sizes: Vec<usize> = cyclotomic_cosets(n, f.q() as u64)
                .unwrap()
                .iter()
                .map(Vec::len)
                .collect();
            degs.sort();
            sizes.sort();
            assert_eq!(degs, sizes);
            assert!(factors
                .iter()
                .all(|g| ring.is_irreducible(g) && g.lead() == 1));
        }
    }
}

#[test]
fn cyclic_idempotents_are_orthogonal_and_complete() {
    for (p, e) in [(2u64, 1u32), (3, 1), (2, 2)] {
        let f = make_field(p, e).unwrap();
        for n in [5u64, 7, 11, 13, 15, 17, 21] {
            if gcd(n, f.q() as u64) != 1 {
                continue;
            }
            let dec = primitive_idempotents(n, &f).unwrap();
            let n = n as usize;
            let ids: Vec<Vec<Sym>> = dec
                .idempotents
                .iter()
                .map(|e| {
                    let mut x = e.coeffs.clone();
                    x.extend(vec![0; n]);
                    x
                })
                .collect();
            let mut total = vec![0; 2 * n];
            for (i, a) in ids.iter().enumerate() {
                for (t, &c) in total.iter_mut().zip(a) {
                    *t = f.add(*t, c);
                }
                for (j, b) in ids.iter().enumerate() {
                    let prod = group_mul(&f, n, a, b);
                    if i == j {
                        assert_eq!(&prod, a);
                    } else {
                        assert!(prod.iter().all(|&c| c == 0));
                    }
                }
                let j = dec.bar_pairing[i];
                assert_eq!(group_bar(n, a), ids[j]);
            }
            assert_eq!(total[0], 1);
            assert!(total[1..].iter().all(|&c| c == 0));
        }
    }
}

fn products_vanish(f: &FieldSpec, n: usize, xs: &[Vec<Sym>], ys: &[Vec<Sym>]) -> bool {
    xs.iter().all(|x| {
        ys.iter()
            .all(|y| group_mul(f, n, x, y).iter().all(|&c| c == 0))
    })
}

#[test]
fn simple_ideals_annihilate_their_bars_as_expected() {
    for (p, e) in [(2u64, 1u32), (2, 2), (3, 1), (5, 1)] {
        let f = make_field(p, e).unwrap();
        for n in [3u64, 5, 7, 9, 11, 13, 15] {
            if gcd(n, f.q() as u64) != 1 {
                continue;
            }
            let d = decompose(n, &f).unwrap();
            let nn = d.n;
            for b in &d.blocks {
                let c: Vec<Vec<Sym>> = b.basis_c.iter().map(DihedralElem::flatten).collect();
                let cbar: Vec<Vec<Sym>> = c.iter().map(|x| group_bar(nn, x)).collect();
                assert_eq!(c.len(), 2 * b.k);
                let vanishes = products_vanish(&f, nn, &c, &cbar);
                match b.case {
                    BlockCase::Split => assert!(vanishes, "q={}, n={n}, block {}", f.q(), b.index),
                    BlockCase::Stable => assert_eq!(
                        vanishes,
                        p == 2,
                        "q={}, n={n}, stable block {}",
                        f.q(),
                        b.index
                    ),
                }
            }
        }
    }
}

fn span_elements(f: &FieldSpec, rows: &[Vec<Sym>]) -> Vec<Vec<Sym>> {
    let len = rows[0].len();
    let mut out = Vec::new();
    for_each_codeword(f, rows, len, |w| out.push(w.to_vec()));
    out
}

#[test]
fn embedded_fields_are_fields_of_units() {
    for (q, n) in [(2u64, 7u64), (3, 5), (2, 9), (4, 3), (3, 7)] {
        let f = make_field_of(q);
        let d = decompose(n, &f).unwrap();
        let nn = d.n;
        for b in &d.blocks {
            let basis: Vec<Vec<Sym>> = b.basis_k.iter().map(DihedralElem::flatten).collect();
            let elems = span_elements(&f, &basis);
            assert_eq!(elems.len() as u64, q.pow(2 * b.k as u32));
            let one = b.central_idempotent.flatten();
            let set: HashSet<&Vec<Sym>> = elems.iter().collect();
            assert!(set.contains(&one));
            let mut units = 0;
            for x in &elems {
                if x.iter().all(|&c| c == 0) {
                    continue;
                }
                // Closed, commutative, and every nonzero element has an inverse in K_t.
                let mut has_inverse = false;
                for y in &elems {
                    let xy = group_mul(&f, nn, x, y);
                    assert!(set.contains(&xy));
                    assert_eq!(xy, group_mul(&f, nn, y, x));
                    has_inverse |= xy == one;
                }
                assert!(has_inverse, "q={q}, n={n}: non-invertible element of K_t");
                units += 1;
            }
            assert_eq!(units, q.pow(2 * b.k as u32) - 1);
        }
    }
}

fn make_field_of(q: u64) -> Arc<FieldSpec> {
    dihedral_forge::gf::field_of_order(q).unwrap()
}

#[test]
fn submodules_match_brute_force() {
    for (q, n) in [(2u64, 7u64), (2, 15), (3, 5), (2, 3)] {
        let f = make_field_of(q);
        let d = decompose(n, &f).unwrap();
        let nn = d.n;
        let c = code_c(&d).unwrap();
        let group: Vec<Vec<Sym>> = (0..2 * nn)
            .map(|g| {
                let mut x = vec![0; 2 * nn];
                x[g] = 1;
                x
            })
            .collect();
        // Cyclic submodules FG x, then all their sums.
        // Codes keyed by their echelon generator.
        let key = |c: &LinearCode| c.generator().to_rows();
        let mut cyclic: HashMap<Vec<Vec<Sym>>, LinearCode> = HashMap::new();
        for x in span_elements(&f, &c.generator().to_rows()) {
            let rows: Vec<Vec<Sym>> = group.iter().map(|g| group_mul(&f, nn, g, &x)).collect();
            let code = LinearCode::from_rows(&f, 2 * nn, &rows);
            cyclic.insert(key(&code), code);
        }
        let mut all = cyclic.clone();
        loop {
            let mut grown = all.clone();
            for a in all.values() {
                for b in cyclic.values() {
                    let s = a.sum(b).unwrap();
                    grown.insert(key(&s), s);
                }
            }
            if grown.len() == all.len() {
                break;
            }
            all = grown;
        }
        let mut brute: Vec<usize> = all.values().map(LinearCode::dim).collect();
        let mut ours: Vec<usize> = enumerate_submodules(&d)
            .unwrap()
            .iter()
            .map(|s| s.dim)
            .collect();
        brute.sort();
        ours.sort();
        assert_eq!(ours, brute, "q={q}, n={n}");
    }
}

#[test]
fn sampler_is_uniform_on_small_block() {
    let f = make_field(2, 1).unwrap();
    let d = decompose(3, &f).unwrap();
    let trials = 3000;
    let mut counts: HashMap<Vec<Sym>, usize> = HashMap::new();
    for s in 0..trials {
        *counts.entry(sample_unit(&d, s).flatten()).or_default() += 1;
    }
    assert_eq!(counts.len(), 3);
    let expect = trials as f64 / 3.0;
    let chi2: f64 = counts
        .values()
        .map(|&c| (c as f64 - expect).powi(2) / expect)
        .sum();
    // 99.9th percentile of chi-square with 2 degrees of freedom.
    assert!(chi2 < 13.82, "chi2 = {chi2}");

    let hat_c = code_hat_c(&d).unwrap();
    for beta in counts.keys() {
        let t = right_translate_code(&hat_c, &DihedralElem::from_flat(beta), &d).unwrap();
        assert!(is_self_dual(&t));
    }
}
