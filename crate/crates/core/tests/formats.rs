//! Round-trip tests for every text format: whatever a printer emits, the
//! matching parser must read back to an equal value.

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha12Rng;

use mdrkit::formula::{Formula, Substitution, parse_consecution, parse_formula};
use mdrkit::io::{
    format_algebra_block, format_hypermatrix_block, format_sequents_block, parse_structure_file,
};
use mdrkit::multiset::Multiset;
use mdrkit::proof::{
    Derivation, StepJust, TreeProof, builtin_system, format_certificate, format_tree,
    parse_certificate, parse_tree, search_derivation, Budget, SearchOutcome,
};
use mdrkit::semantics::{FiniteAlgebra, Hypermatrix, MultisetDownset, SequentModel, to_sequents};

fn rng(seed: u64) -> ChaCha12Rng {
    ChaCha12Rng::seed_from_u64(seed)
}

fn gen_formula(r: &mut ChaCha12Rng, depth: usize) -> Formula {
    let vars = ["p", "q", "r", "longer_name"];
    if depth == 0 || r.random_range(0..3) == 0 {
        if r.random_range(0..6) == 0 {
            return Formula::One;
        }
        return Formula::var(vars[r.random_range(0..vars.len())]);
    }
    let a = gen_formula(r, depth - 1);
    let b = gen_formula(r, depth - 1);
    match r.random_range(0..4) {
        0 => Formula::meet(a, b),
        1 => Formula::join(a, b),
        2 => Formula::fusion(a, b),
        _ => Formula::imp(a, b),
    }
}

#[test]
fn formula_printing_inverts_parsing() {
    let mut r = rng(1);
    for _ in 0..2_000 {
        let f = gen_formula(&mut r, 4);
        let printed = f.to_string();
        let back = parse_formula(&printed).unwrap_or_else(|e| panic!("{printed}: {e}"));
        assert_eq!(back, f, "{printed}");
    }
}

#[test]
fn consecution_printing_inverts_parsing() {
    let mut r = rng(2);
    for _ in 0..500 {
        let mut premises = Multiset::new();
        for _ in 0..r.random_range(0..=3) {
            premises.insert(gen_formula(&mut r, 3));
        }
        let mut conclusions = Multiset::new();
        for _ in 0..r.random_range(0..=3) {
            conclusions.insert(gen_formula(&mut r, 3));
        }
        let c = mdrkit::formula::Consecution { premises, conclusions };
        let printed = c.to_string();
        let back = parse_consecution(&printed).unwrap_or_else(|e| panic!("{printed}: {e}"));
        assert_eq!(back, c, "{printed}");
    }
}

#[test]
fn certificates_round_trip() {
    // A handcrafted two-step derivation with a non-trivial substitution.
    let a = parse_formula("p*q").unwrap();
    let sys = builtin_system("MV").unwrap();
    let claim = parse_consecution("[p*q, q->r] |> [p, r]").unwrap();
    let SearchOutcome::Found(d) = search_derivation(&sys, &claim, &Budget { max_depth: 2, max_nodes: 4_000 })
    else {
        panic!("the fixture claim should be derivable");
    };
    let printed = format_certificate(&d, &claim);
    let (d2, c2) = parse_certificate(&printed).unwrap_or_else(|e| panic!("{printed}{e}"));
    assert_eq!(d2, d);
    assert_eq!(c2, claim);

    // Identity substitutions and empty Ψ lines survive as well.
    let d = Derivation {
        steps: vec![Multiset::singleton(a.clone()), Multiset::new()],
        justs: vec![StepJust {
            rule: "Drop".to_string(),
            subst: Substitution::identity(),
            at: Multiset::singleton(a),
        }],
    };
    let claim = parse_consecution("[p*q] |> []").unwrap();
    let printed = format_certificate(&d, &claim);
    let (d2, c2) = parse_certificate(&printed).unwrap();
    assert_eq!((d2, c2), (d, claim));
}

#[test]
fn tree_proofs_round_trip() {
    let f = |s: &str| parse_formula(s).unwrap();
    let tree = TreeProof::node(
        f("q&r"),
        vec![
            TreeProof::node(f("q"), vec![TreeProof::hyp(f("p")), TreeProof::hyp(f("p->q"))]),
            TreeProof::axiom("Top", f("r")),
        ],
    );
    let printed = format_tree(&tree);
    let back = parse_tree(&printed).unwrap_or_else(|e| panic!("{printed}{e}"));
    assert_eq!(back, tree);

    // Comments and blank lines are transparent to the parser.
    let commented = format!("# header\n\n{printed}# trailer\n");
    assert_eq!(parse_tree(&commented).unwrap(), tree);
}

#[test]
fn algebra_blocks_round_trip() {
    let mut with_consts = FiniteAlgebra::luk_chain(3);
    with_consts.consts.insert("t".to_string(), 2);
    let partial = FiniteAlgebra {
        name: "Part".to_string(),
        elems: vec!["a".to_string(), "b".to_string()],
        meet: Some(vec![0, 0, 0, 1]),
        join: None,
        fuse: None,
        imp: None,
        one: None,
        consts: Default::default(),
    };
    for alg in [FiniteAlgebra::luk_chain(2), with_consts, partial] {
        let printed = format_algebra_block(&alg);
        let file = parse_structure_file(&printed).unwrap_or_else(|e| panic!("{printed}{e}"));
        assert_eq!(file.algebra(&alg.name).unwrap(), &alg, "{printed}");
    }
}

#[test]
fn hypermatrix_and_sequents_blocks_round_trip() {
    let mut r = rng(3);
    for i in 0..25 {
        let n = r.random_range(1..=3usize);
        let algebra = FiniteAlgebra {
            name: format!("A{i}"),
            elems: (0..n).map(|e| format!("e{e}")).collect(),
            meet: Some((0..n * n).map(|_| r.random_range(0..n)).collect()),
            join: None,
            fuse: None,
            imp: None,
            one: Some(r.random_range(0..n)),
            consts: Default::default(),
        };
        let gens = (0..r.random_range(0..=3))
            .map(|_| {
                let mut g = Multiset::new();
                for _ in 0..r.random_range(0..=3) {
                    g.insert(r.random_range(0..n));
                }
                g
            })
            .collect();
        let h = Hypermatrix { algebra, filter: MultisetDownset::new(gens) };

        let printed = format!(
            "{}\n{}",
            format_algebra_block(&h.algebra),
            format_hypermatrix_block("H", &h)
        );
        let file = parse_structure_file(&printed).unwrap_or_else(|e| panic!("{printed}{e}"));
        let (name, h2) = &file.hypermatrices[0];
        assert_eq!(name, "H");
        assert_eq!(h2.algebra, h.algebra);
        assert_eq!(
            h2.filter.members().unwrap(),
            h.filter.members().unwrap(),
            "{printed}"
        );

        let s: SequentModel = to_sequents(&h).unwrap();
        let printed = format!(
            "{}\n{}",
            format_algebra_block(&s.algebra),
            format_sequents_block("Q", &s)
        );
        let file = parse_structure_file(&printed).unwrap_or_else(|e| panic!("{printed}{e}"));
        assert_eq!(file.sequent_models[0].1, s, "{printed}");
    }
}

#[test]
fn system_files_load_and_reject() {
    let src = "# a toy system\naxiom K: [] |> [p -> (q -> p)]\nrule MP: [p, p->q] |> [q]\n";
    let sys = mdrkit::proof::load_system(src).unwrap();
    assert_eq!(sys.schemata.len(), 2);
    assert!(sys.schema("K").unwrap().is_axiom());
    assert!(!sys.schema("MP").unwrap().is_axiom());

    assert!(mdrkit::proof::load_system("axiom K: [] |> [p->\n").is_err());
    assert!(
        mdrkit::proof::load_system("axiom K: [] |> [p]\naxiom K: [] |> [q]\n").is_err(),
        "duplicate names are rejected"
    );
}
