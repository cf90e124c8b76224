//! Acceptance suite. Each test exercises one acceptance criterion end to end
//! through the public API and prints one PASS line when it holds. All
//! comparisons are exact; there are no tolerances anywhere.

mod support;

use lwr_core::embedding::{build_tables, Relation, TableRow};
use lwr_core::extension::{build_extension, extract_factor_set, ExtensionData, FactorSet};
use lwr_core::fixtures;
use lwr_core::lie::{LieAlgebra, RightAction, SparseMatrix, Vector};
use lwr_core::pbw::{binomial, monomials_up_to, splittings, StdMonomial, Word};
use lwr_core::pbw::Envelope;
use lwr_core::scalar::FieldSpec;
use lwr_core::wreath::WreathProduct;

use rand::Rng;

const VERIFY_DEGREE: usize = 4;
const INJECTIVITY_TRIALS: usize = 100;

fn q() -> FieldSpec {
    FieldSpec::Rationals
}

/// Runs the full suite on one data set and asserts every certificate is an
/// exact pass, with all five relation families represented.
fn assert_theorem_holds(label: &str, data: &ExtensionData, degree: usize) {
    let started = std::time::Instant::now();
    let tables = build_tables(data, degree)
        .unwrap_or_else(|e| panic!("{label}: tables failed to build: {e}"));
    let invariants = tables.validate();
    assert!(invariants.is_valid(), "{label}: table invariants: {invariants}");
    let certs = tables.verify_all(INJECTIVITY_TRIALS, 0xC0FFEE);
    for relation in [Relation::R1, Relation::R2, Relation::R3, Relation::Hom, Relation::Inj] {
        assert!(
            certs.iter().any(|c| c.relation == relation),
            "{label}: no {relation} certificates emitted"
        );
    }
    for c in &certs {
        assert!(
            c.passed(),
            "{label}: {} at {:?} {:?} has residual {:?}",
            c.relation,
            c.instance,
            c.monomial,
            c.residual
        );
    }
    let elapsed = started.elapsed();
    assert!(
        elapsed.as_secs() < 60,
        "{label}: suite took {elapsed:?}, budget is 60 s per instance"
    );
}

#[test]
fn criterion_1_theorem_at_finite_degree() {
    for name in ["heisenberg", "nonabelian2", "direct-sum", "oscillator", "n4"] {
        let data = fixtures::fixture(name, q()).unwrap();
        assert_theorem_holds(name, &data, VERIFY_DEGREE);
    }
    let mut rng = fixtures::seeded_rng(2024);
    for trial in 0..20 {
        let (n, m_dim) = fixtures::random_section_extension(&mut rng, q());
        assert!(n.dim() <= 5, "random extension dimension bound");
        let data = extract_factor_set(&n, m_dim).unwrap();
        assert_theorem_holds(&format!("random[{trial}]"), &data, VERIFY_DEGREE);
    }
    println!("criterion 1 (theorem at finite degree, D=4): PASS");
}

#[test]
fn criterion_2_base_value_reproduction() {
    let half = q().half();
    for name in fixtures::GOOD_FIXTURES {
        let data = fixtures::fixture(name, q()).unwrap();
        let tables = build_tables(&data, 2).unwrap();
        for i in 0..data.l.dim() {
            for j in 0..data.l.dim() {
                let expected = data.g.at(i, j).scale(&half);
                let e_j = StdMonomial::from_sorted([j as u16]);
                assert_eq!(tables.fo(i, &e_j), expected, "{name}: fo({i}, e_{j})");
            }
        }
        for qi in 0..data.m.dim() {
            let zq = data.m.basis_vector(qi);
            for j in 0..data.l.dim() {
                for k in j..data.l.dim() {
                    let e = StdMonomial::from_sorted([j as u16, k as u16]);
                    let lead = data.action.apply_basis(&data.action.apply_basis(&zq, j), k);
                    let corr = data.m.bracket(&zq, &data.g.at(j, k)).scale(&half);
                    assert_eq!(
                        tables.fx(qi, &e),
                        lead.sub(&corr),
                        "{name}: fx({qi}, e_{j} e_{k})"
                    );
                }
            }
        }
    }
    println!("criterion 2 (base-value reproduction): PASS");
}

#[test]
fn criterion_3_hom_space_lie_axioms() {
    let started = std::time::Instant::now();
    let field = q();
    let m_pool = [
        fixtures::abelian(field, &["z1", "z2"]),
        fixtures::nonabelian2_algebra(field),
        fixtures::heisenberg3(field),
    ];
    let l_pool = [
        fixtures::abelian(field, &["e1", "e2"]),
        fixtures::nonabelian2_algebra_l(field),
        fixtures::sl2(field),
    ];
    let mut rng = fixtures::seeded_rng(3);
    for trial in 0..200 {
        let m = &m_pool[rng.gen_range(0..m_pool.len())];
        let l = &l_pool[rng.gen_range(0..l_pool.len())];
        let w = WreathProduct::new(m.clone(), l.clone());
        let degree = rng.gen_range(2..=4usize);
        let f = support::random_hom(&mut rng, l.dim(), m.dim(), degree, field);
        let g = support::random_hom(&mut rng, l.dim(), m.dim(), degree, field);
        let h = support::random_hom(&mut rng, l.dim(), m.dim(), degree, field);
        let u = fixtures::random_vector(&mut rng, l.dim(), field);
        let v = fixtures::random_vector(&mut rng, l.dim(), field);

        // Antisymmetry and Jacobi of the convolution bracket.
        assert_eq!(w.hom_bracket(&f, &g), w.hom_bracket(&g, &f).neg(), "trial {trial}");
        let mut jac = w.hom_bracket(&w.hom_bracket(&f, &g), &h);
        jac = jac.sum(&w.hom_bracket(&w.hom_bracket(&g, &h), &f));
        jac = jac.sum(&w.hom_bracket(&w.hom_bracket(&h, &f), &g));
        assert!(jac.is_zero(), "trial {trial}: Jacobi");

        // The action acts by derivations of the bracket.
        let lhs = w.hom_action(&w.hom_bracket(&f, &h), &u).unwrap();
        let rhs = w
            .hom_bracket(&w.hom_action(&f, &u).unwrap(), &h)
            .sum(&w.hom_bracket(&f, &w.hom_action(&h, &u).unwrap()));
        assert_eq!(lhs, rhs.truncated(degree - 1), "trial {trial}: derivation");

        // And it is a right Lie-algebra action.
        let uv = l.bracket(&u, &v);
        let lhs = w.hom_action(&f, &uv).unwrap().truncated(degree - 2);
        let rhs = w
            .hom_action(&w.hom_action(&f, &u).unwrap(), &v)
            .unwrap()
            .difference(&w.hom_action(&w.hom_action(&f, &v).unwrap(), &u).unwrap());
        assert_eq!(lhs, rhs, "trial {trial}: right action");
    }
    let elapsed = started.elapsed();
    assert!(elapsed.as_secs() < 30, "criterion 3 took {elapsed:?}, budget 30 s");
    println!("criterion 3 (hom-space Lie axioms, 200 trials): PASS");
}

#[test]
fn criterion_4_straightening_oracle_equivalence() {
    let pool = fixtures::straightening_pool(q());
    let mut rng = fixtures::seeded_rng(4);
    for trial in 0..500 {
        let alg = &pool[rng.gen_range(0..pool.len())];
        let env = Envelope::new(alg.clone());
        let word = support::random_word(&mut rng, alg.dim(), 6);
        let leftmost = env.normalize_word(&Word::new(word.iter().copied()));
        let oracle = support::random_strategy_normal_form(alg, &word, &mut rng);
        assert_eq!(leftmost, oracle, "trial {trial}: word {word:?}");
    }
    // left_mul agrees with normalize_word on concatenations.
    for trial in 0..100 {
        let alg = &pool[rng.gen_range(0..pool.len())];
        let env = Envelope::new(alg.clone());
        let u = fixtures::random_vector(&mut rng, alg.dim(), q());
        let e = StdMonomial::from_multiset(support::random_word(&mut rng, alg.dim(), 4));
        let got = env.left_mul(&u, &e);
        let mut expected = lwr_core::pbw::UElement::zero();
        for (i, c) in u.iter() {
            let mut word = vec![i as u16];
            word.extend_from_slice(e.factors());
            expected.add_scaled(&support::random_strategy_normal_form(alg, &word, &mut rng), c);
        }
        assert_eq!(got, expected, "trial {trial}: left_mul concatenation");
    }
    println!("criterion 4 (straightening oracle equivalence, 500 words): PASS");
}

#[test]
fn criterion_5_extension_round_trip() {
    // Fixture data: build, extract at the block boundary, build again.
    for name in fixtures::GOOD_FIXTURES {
        let data = fixtures::fixture(name, q()).unwrap();
        let ext = build_extension(&data).unwrap();
        let extracted = extract_factor_set(&ext.n, ext.m_dim).unwrap();
        let rebuilt = build_extension(&extracted).unwrap();
        assert_eq!(rebuilt.n, ext.n, "{name}: round trip");
    }
    // Standalone algebras with a known ideal block.
    for (alg, m_dim) in [
        (fixtures::heisenberg3(q()), 1),
        (fixtures::n4(q()), 3),
        (fixtures::oscillator4(q()), 3),
    ] {
        let data = extract_factor_set(&alg, m_dim).unwrap();
        assert_eq!(build_extension(&data).unwrap().n, alg);
    }
    // Random basis-changed variants.
    let mut rng = fixtures::seeded_rng(5);
    for trial in 0..20 {
        let (n, m_dim) = fixtures::random_section_extension(&mut rng, q());
        let data = extract_factor_set(&n, m_dim).unwrap();
        assert_eq!(build_extension(&data).unwrap().n, n, "random[{trial}]");
    }
    println!("criterion 5 (extension round trip): PASS");
}

/// Every structure-constant, action, or factor-set position of the fixture,
/// perturbed by +1 in one coordinate.
fn data_mutants(data: &ExtensionData) -> Vec<(String, ExtensionData)> {
    let field = data.m.field();
    let one = field.one();
    let mut out = Vec::new();

    let algebra_mutants = |alg: &LieAlgebra| -> Vec<(String, LieAlgebra)> {
        let mut muts = Vec::new();
        for i in 0..alg.dim() {
            for j in i + 1..alg.dim() {
                for k in 0..alg.dim() {
                    let mut entries: Vec<((usize, usize), Vector)> =
                        alg.structure_constants().map(|(key, v)| (key, v.clone())).collect();
                    match entries.iter_mut().find(|(key, _)| *key == (i, j)) {
                        Some((_, v)) => v.add_entry(k, &one),
                        None => {
                            entries.push(((i, j), Vector::unit(alg.dim(), k, one.clone())));
                        }
                    }
                    let mutated =
                        LieAlgebra::new(field, alg.basis_names().to_vec(), entries).unwrap();
                    muts.push((format!("sc[{i},{j}]+=e{k}"), mutated));
                }
            }
        }
        muts
    };

    for (label, m) in algebra_mutants(&data.m) {
        out.push((format!("M.{label}"), ExtensionData { m, ..data.clone() }));
    }
    for (label, l) in algebra_mutants(&data.l) {
        out.push((format!("L.{label}"), ExtensionData { l, ..data.clone() }));
    }
    for u in 0..data.l.dim() {
        for row in 0..data.m.dim() {
            for col in 0..data.m.dim() {
                let mut mats: Vec<SparseMatrix> = data.action.matrices().to_vec();
                let old = mats[u]
                    .entries()
                    .find(|(r, c, _)| *r == row && *c == col)
                    .map(|(_, _, v)| v.clone())
                    .unwrap_or_else(|| field.zero());
                mats[u].set(row, col, &old + &one);
                out.push((
                    format!("action[{u}][{row},{col}]+=1"),
                    ExtensionData { action: RightAction::new(mats), ..data.clone() },
                ));
            }
        }
    }
    for u in 0..data.l.dim() {
        for v in u + 1..data.l.dim() {
            for k in 0..data.m.dim() {
                let mut entries: Vec<((usize, usize), Vector)> =
                    data.g.entries().map(|(key, val)| (key, val.clone())).collect();
                match entries.iter_mut().find(|(key, _)| *key == (u, v)) {
                    Some((_, val)) => val.add_entry(k, &one),
                    None => {
                        entries.push(((u, v), Vector::unit(data.m.dim(), k, one.clone())));
                    }
                }
                let g = FactorSet::new(data.l.dim(), data.m.dim(), entries);
                out.push((format!("g[{u},{v}]+=z{k}"), ExtensionData { g, ..data.clone() }));
            }
        }
    }
    out
}

#[test]
fn criterion_6_mutation_sensitivity() {
    let degree = 3;
    for name in fixtures::GOOD_FIXTURES {
        let data = fixtures::fixture(name, q()).unwrap();

        // Data mutations: either some validator fires, or the mutant is a
        // genuinely valid extension, in which case the theorem must still
        // hold for it with a full all-pass certificate run.
        for (label, mutant) in data_mutants(&data) {
            let detected = !mutant.m.validate().is_valid()
                || !mutant.l.validate().is_valid()
                || !mutant.validate().is_valid();
            if !detected {
                let tables = build_tables(&mutant, degree).unwrap();
                assert!(tables.validate().is_valid(), "{name}/{label}: exempt mutant invariants");
                for c in tables.verify_all(20, 6) {
                    assert!(
                        c.passed(),
                        "{name}/{label}: exempt mutant must be a valid extension, \
                         but {} at {:?} failed",
                        c.relation,
                        c.instance
                    );
                }
            }
        }

        // Table mutations: every single perturbed value must be caught by
        // the table invariants or a certificate. No exemptions.
        let reference = build_tables(&data, degree).unwrap();
        let monomials = monomials_up_to(data.l.dim(), degree);
        let mut mutation_count = 0usize;
        for (row_kind, rows) in [(0usize, data.l.dim()), (1usize, data.m.dim())] {
            for row in 0..rows {
                for (midx, e) in monomials.iter().enumerate() {
                    let coord = (row + midx) % data.m.dim();
                    let delta = Vector::unit(data.m.dim(), coord, q().one());
                    let mut mutated = build_tables(&data, degree).unwrap();
                    let selector =
                        if row_kind == 0 { TableRow::Fo(row) } else { TableRow::Fx(row) };
                    mutated.add_delta(selector, e, &delta);
                    mutation_count += 1;

                    let invariants_fail = !mutated.validate().is_valid();
                    let cert_fail = mutated.verify_relations().iter().any(|c| !c.passed())
                        || mutated.verify_homomorphism().iter().any(|c| !c.passed());
                    assert!(
                        invariants_fail || cert_fail,
                        "{name}: undetected table mutation {selector:?} at {e:?} (+e{coord})"
                    );
                }
            }
        }
        assert_eq!(
            mutation_count,
            (data.l.dim() + data.m.dim()) * monomials.len(),
            "{name}: mutation set covers every table position"
        );
        // The unmutated reference still passes everything.
        assert!(reference.validate().is_valid());
        assert!(reference.verify_relations().iter().all(|c| c.passed()));
    }
    println!("criterion 6 (mutation sensitivity, 100% detection): PASS");
}

#[test]
fn criterion_7_prime_field_run() {
    let f5 = FieldSpec::prime(5).unwrap();
    for name in ["heisenberg", "nonabelian2"] {
        let data = fixtures::fixture(name, f5).unwrap();
        assert_theorem_holds(&format!("{name}/F5"), &data, VERIFY_DEGREE);
    }
    println!("criterion 7 (prime-field run over F_5, D=4): PASS");
}

#[test]
fn criterion_8_splitting_combinatorics() {
    for dim in 1..=4usize {
        for degree in 0..=5usize {
            let monomials = monomials_up_to(dim, degree);
            assert_eq!(
                monomials.len(),
                binomial(dim + degree, degree),
                "monomial count at dim={dim} D={degree}"
            );
            for e in &monomials {
                let expected: usize =
                    e.multiplicities().iter().map(|&(_, m)| m + 1).product();
                let pairs = splittings(e);
                assert_eq!(pairs.len(), expected, "splitting count at {e:?}");
                let distinct: std::collections::BTreeSet<_> = pairs.iter().collect();
                assert_eq!(distinct.len(), pairs.len(), "each pair exactly once at {e:?}");
            }
        }
    }
    println!("criterion 8 (splitting combinatorics): PASS");
}
