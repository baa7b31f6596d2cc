use std::collections::BTreeSet;

use proptest::prelude::*;

use super::*;

fn set(label: &str, elems: &[&str]) -> FinSet {
    FinSet::new(label, elems.iter().copied()).unwrap()
}

fn sized(n: usize) -> FinSet {
    let names = ["a", "b", "c", "d", "e"];
    set(&format!("S{n}"), &names[..n])
}

fn pair_set(r: &Relation) -> BTreeSet<(String, String)> {
    r.pairs()
        .into_iter()
        .map(|(x, y)| (x.to_string(), y.to_string()))
        .collect()
}

// exists-composition computed on pair sets
fn compose_oracle(s: &Relation, r: &Relation) -> BTreeSet<(String, String)> {
    let mut out = BTreeSet::new();
    for (x, y) in pair_set(r) {
        for (y2, z) in pair_set(s) {
            if y == y2 {
                out.insert((x.clone(), z));
            }
        }
    }
    out
}

fn subset_of(p: &Point) -> BTreeSet<String> {
    p.pairs().into_iter().map(|(_, x)| x.to_string()).collect()
}

#[test]
fn compose_examples() {
    let x = set("X", &["a"]);
    let y = set("Y", &["y", "z"]);
    let q = set("Q", &["q"]);
    let r = Relation::new(x.clone(), y.clone(), [("a", "y")]).unwrap();
    let s = Relation::new(y.clone(), q.clone(), [("y", "q")]).unwrap();
    assert_eq!(compose(&s, &r).unwrap().pairs(), vec![("a", "q")]);
    assert_eq!(compose(&Relation::identity(&y), &r).unwrap(), r);

    let r2 = Relation::new(x.clone(), y.clone(), [("a", "y"), ("a", "z")]).unwrap();
    let s2 = Relation::new(y.clone(), q.clone(), [("z", "q")]).unwrap();
    assert_eq!(compose(&s2, &r2).unwrap().pairs(), vec![("a", "q")]);

    assert!(matches!(compose(&r, &s), Err(RelError::DomainMismatch(_))));
}

#[test]
fn dagger_category_laws_exhaustive() {
    for n in 0..=3 {
        let x = sized(n);
        assert_eq!(Relation::identity(&x).dagger(), Relation::identity(&x));
        for m in 0..=2 {
            let y = sized(m);
            for r in Relation::all(&x, &y) {
                assert_eq!(r.dagger().dagger(), r);
                for k in 0..=2 {
                    let z = sized(k);
                    for s in Relation::all(&y, &z) {
                        let sr = compose(&s, &r).unwrap();
                        assert_eq!(pair_set(&sr), compose_oracle(&s, &r));
                        assert_eq!(sr.dagger(), compose(&r.dagger(), &s.dagger()).unwrap());
                    }
                }
            }
        }
    }
}

#[test]
fn tensor_examples() {
    let ab = set("A", &["a", "b"]);
    let c = set("C", &["c"]);
    let t = tensor(&Relation::identity(&ab), &Relation::identity(&c));
    assert_eq!(t, Relation::identity(&ab.tensor(&c)));
    assert_eq!(ab.tensor(&c).elements(), &["(a,c)", "(b,c)"]);

    let y = set("Y", &["y"]);
    let q = set("Q", &["q"]);
    let r = Relation::new(ab.clone(), y.clone(), [("a", "y")]).unwrap();
    let s = Relation::new(c.clone(), q.clone(), [("c", "q")]).unwrap();
    assert_eq!(tensor(&r, &s).pairs(), vec![("(a,c)", "(y,q)")]);
}

#[test]
fn biproduct_examples() {
    let ab = set("A", &["a", "b"]);
    let c = set("C", &["c"]);
    let bp = biproduct(&[ab.clone(), c.clone()]);
    assert_eq!(bp.object.len(), 3);
    assert_eq!(bp.injections[0].pairs(), vec![("a", "0.a"), ("b", "0.b")]);
    assert_eq!(bp.injections[1].pairs(), vec![("c", "1.c")]);
    let p2i1 = compose(&bp.projections[1], &bp.injections[0]).unwrap();
    assert!(p2i1.is_zero());
    for (i, p) in bp.injections.iter().zip(&bp.projections) {
        assert_eq!(compose(p, i).unwrap(), Relation::identity(i.dom()));
    }
    let empty = biproduct(&[]);
    assert!(empty.object.is_empty());
    assert!(empty.injections.is_empty());
}

#[test]
fn structural_examples() {
    let a = set("A", &["a"]);
    let cd = set("C", &["c", "d"]);
    let b = structural(StructuralKind::Braiding, &[a.clone(), cd.clone()]).unwrap();
    assert_eq!(b.pairs(), vec![("(a,c)", "(c,a)"), ("(a,d)", "(d,a)")]);

    let d = structural(StructuralKind::Diagonal(2), std::slice::from_ref(&a)).unwrap();
    assert_eq!(d.pairs(), vec![("a", "0.a"), ("a", "1.a")]);

    assert!(matches!(
        structural(StructuralKind::Associator, std::slice::from_ref(&a)),
        Err(RelError::ArityMismatch {
            expected: 3,
            found: 1,
            ..
        })
    ));

    // every structural map except the zero is a dagger isomorphism
    let sets = [a.clone(), cd.clone(), set("E", &["e", "f", "g"])];
    let isos = [
        structural(StructuralKind::Associator, &sets).unwrap(),
        structural(StructuralKind::Braiding, &sets[..2]).unwrap(),
        structural(StructuralKind::LeftUnitor, &sets[1..2]).unwrap(),
        structural(StructuralKind::RightUnitor, &sets[2..]).unwrap(),
    ];
    for iso in &isos {
        assert_eq!(compose(&iso.dagger(), iso).unwrap(), Relation::identity(iso.dom()));
        assert_eq!(compose(iso, &iso.dagger()).unwrap(), Relation::identity(iso.cod()));
    }
}

#[test]
fn associator_pentagon_on_singletons() {
    let [w, x, y, z] = ["W", "X", "Y", "Z"].map(|l| set(l, &["p"]));
    let a = |p: &FinSet, q: &FinSet, r: &FinSet| {
        structural(StructuralKind::Associator, &[p.clone(), q.clone(), r.clone()]).unwrap()
    };
    let id = Relation::identity;
    // ((W⊗X)⊗Y)⊗Z → W⊗(X⊗(Y⊗Z)), two ways
    let top = compose(&a(&w, &x, &y.tensor(&z)), &a(&w.tensor(&x), &y, &z)).unwrap();
    let bottom = compose(
        &tensor(&id(&w), &a(&x, &y, &z)),
        &compose(&a(&w, &x.tensor(&y), &z), &tensor(&a(&w, &x, &y), &id(&z))).unwrap(),
    )
    .unwrap();
    assert_eq!(top, bottom);
}

#[test]
fn kernel_examples() {
    let x = set("X", &["a", "b", "c"]);
    let y = set("Y", &["y"]);
    let r = Relation::new(x.clone(), y.clone(), [("a", "y")]).unwrap();
    let k = kernel(&r);
    assert_eq!(k.m.dom().elements(), &["b", "c"]);
    assert_eq!(k.m.pairs(), vec![("b", "b"), ("c", "c")]);

    let z = kernel(&Relation::zero(&x, &y));
    assert_eq!(z.m.dom().elements(), x.elements());
    assert_eq!(z.m.matrix(), &crate::bitmat::BoolMat::identity(3));

    let total = Relation::new(x.clone(), y.clone(), [("a", "y"), ("b", "y"), ("c", "y")]).unwrap();
    assert!(kernel(&total).m.dom().is_empty());
}

#[test]
fn kernel_universal_property_exhaustive() {
    // brute force: for every g with r∘g = 0 there is exactly one h with m∘h = g
    for n in 0..=3 {
        let x = sized(n);
        for c in 0..=2 {
            let y = sized(c);
            for r in Relation::all(&x, &y) {
                let k = kernel(&r);
                let m = &k.m;
                assert!(compose(&r, m).unwrap().is_zero());
                assert_eq!(compose(&m.dagger(), m).unwrap(), Relation::identity(m.dom()));
                for j in 0..=3 {
                    let w = sized(j);
                    for g in Relation::all(&w, &x) {
                        let annihilated = compose(&r, &g).unwrap().is_zero();
                        let factorizations = Relation::all(&w, m.dom())
                            .filter(|h| compose(m, h).unwrap() == g)
                            .count();
                        assert_eq!(factorizations, usize::from(annihilated));
                    }
                }
            }
        }
    }
}

#[test]
fn complement_examples() {
    let x = set("X", &["a", "b", "c"]);
    let inc = inclusion(&x, &[true, false, false]);
    let comp = complement_of(&inc).unwrap();
    assert_eq!(comp.m.dom().elements(), &["b", "c"]);

    let full = complement_of(&Relation::identity(&x)).unwrap();
    assert!(full.m.dom().is_empty());

    let not_injective = Relation::new(x.clone(), set("Y", &["y"]), [("a", "y"), ("b", "y")]).unwrap();
    assert!(matches!(
        complement_of(&not_injective),
        Err(RelError::NotDaggerKernel(_))
    ));
}

#[test]
fn double_complement_is_on_the_nose() {
    for n in 0..=4 {
        let x = sized(n);
        for code in 0..1u32 << n {
            let mask: Vec<bool> = (0..n).map(|i| code >> i & 1 == 1).collect();
            let a = Relation::point(&x, &mask);
            let k = kernel(&a.dagger());
            let kk = complement(&complement(&k).unwrap()).unwrap();
            assert_eq!(kk.m, k.m);
        }
    }
}

#[test]
fn complementary_kernels_are_jointly_epic() {
    for n in 0..=3 {
        let x = sized(n);
        for code in 0..1u32 << n {
            let mask: Vec<bool> = (0..n).map(|i| code >> i & 1 == 1).collect();
            let m = inclusion(&x, &mask);
            let mp = complement_of(&m).unwrap().m;
            for c in 0..=2 {
                let y = sized(c);
                let all: Vec<Relation> = Relation::all(&x, &y).collect();
                for f in &all {
                    for g in &all {
                        let agree = compose(f, &m).unwrap() == compose(g, &m).unwrap()
                            && compose(f, &mp).unwrap() == compose(g, &mp).unwrap();
                        assert!(!agree || f == g);
                    }
                }
            }
        }
    }
}

#[test]
fn join_examples() {
    let x = set("X", &["a"]);
    let y = set("Y", &["y", "z"]);
    let r = Relation::new(x.clone(), y.clone(), [("a", "y")]).unwrap();
    let s = Relation::new(x.clone(), y.clone(), [("a", "z")]).unwrap();
    assert_eq!(
        join(&x, &y, &[r.clone(), s]).unwrap().pairs(),
        vec![("a", "y"), ("a", "z")]
    );
    assert_eq!(join(&x, &y, &[]).unwrap(), Relation::zero(&x, &y));
    assert!(join(&y, &x, &[r]).is_err());
}

#[test]
fn top_and_cokernels() {
    let ab = set("X", &["a", "b"]);
    assert_eq!(top(&ab).pairs(), vec![("*", "a"), ("*", "b")]);
    assert!(top(&sized(0)).is_zero());
    for n in 0..=3 {
        let x = sized(n);
        let points: Vec<Point> = Relation::all(&FinSet::unit(), &x).collect();
        assert_eq!(join(&FinSet::unit(), &x, &points).unwrap(), top(&x));
        for c in 0..=3 {
            let y = sized(c);
            for r in Relation::all(&x, &y) {
                let rt = compose(&r, &top(&x)).unwrap();
                assert_eq!(cokernel(&r), cokernel(&rt));
            }
        }
    }
}

#[test]
fn neg_examples() {
    let x = set("X", &["a", "b", "c"]);
    let a = Relation::point(&x, &[true, false, false]);
    // brute force: the largest b with a†∘b = 0
    let best = Relation::all(&FinSet::unit(), &x)
        .filter(|b| compose(&a.dagger(), b).unwrap().is_zero())
        .max_by_key(|b| b.matrix().count_ones())
        .unwrap();
    assert_eq!(neg(&a).unwrap(), best);
    assert_eq!(subset_of(&best), ["b", "c"].map(String::from).into());
    assert!(neg(&top(&x)).unwrap().is_zero());
    for n in 0..=4 {
        let x = sized(n);
        for p in Relation::all(&FinSet::unit(), &x) {
            assert_eq!(neg(&neg(&p).unwrap()).unwrap(), p);
        }
    }
    assert!(neg(&Relation::identity(&x)).is_err());
}

#[test]
fn meet_is_intersection() {
    let x = set("X", &["a", "b", "c"]);
    let a = Relation::point(&x, &[true, true, false]);
    let b = Relation::point(&x, &[false, true, true]);
    assert_eq!(subset_of(&meet(&a, &b).unwrap()), ["b".to_string()].into());
    for n in 0..=4 {
        let x = sized(n);
        let points: Vec<Point> = Relation::all(&FinSet::unit(), &x).collect();
        for a in &points {
            assert_eq!(&meet(a, &top(&x)).unwrap(), a);
            for b in &points {
                let want: BTreeSet<String> = subset_of(a).intersection(&subset_of(b)).cloned().collect();
                assert_eq!(subset_of(&meet(a, b).unwrap()), want);
            }
        }
    }
}

#[test]
fn meet_distributes_over_join_exhaustive() {
    let unit = FinSet::unit();
    for n in 0..=3 {
        let x = sized(n);
        let points: Vec<Point> = Relation::all(&unit, &x).collect();
        for a in &points {
            for b1 in &points {
                for b2 in &points {
                    let lhs = meet(a, &join(&unit, &x, &[b1.clone(), b2.clone()]).unwrap()).unwrap();
                    let rhs = join(&unit, &x, &[meet(a, b1).unwrap(), meet(a, b2).unwrap()]).unwrap();
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }
}

#[test]
fn atoms_are_minimal_nonzero_points() {
    let unit = FinSet::unit();
    for n in 0..=5 {
        let x = sized(n);
        let points: Vec<Point> = Relation::all(&unit, &x).collect();
        let oracle: Vec<Point> = points
            .iter()
            .filter(|p| !p.is_zero())
            .filter(|p| !points.iter().any(|q| !q.is_zero() && q.le(p) && q != *p))
            .cloned()
            .collect();
        let mut got = atoms(&x);
        let mut want = oracle;
        got.sort_by_key(|p| p.mask());
        want.sort_by_key(|p| p.mask());
        assert_eq!(got, want);
        assert_eq!(atoms(&x).len(), n);
    }
    let ab = set("X", &["a", "b"]);
    let subsets: Vec<_> = atoms(&ab).iter().map(subset_of).collect();
    assert_eq!(subsets, vec![["a".to_string()].into(), ["b".to_string()].into()]);
}

#[test]
fn dual_unit_and_snakes() {
    let ab = set("X", &["a", "b"]);
    assert_eq!(dual_unit(&ab).pairs(), vec![("*", "(a,a)"), ("*", "(b,b)")]);
    for n in 0..=4 {
        let x = sized(n);
        assert_eq!(snake_left(&x), Relation::identity(&x));
        assert_eq!(snake_right(&x), Relation::identity(&x));
    }
    assert!(dual_unit(&sized(0)).is_zero());
}

#[test]
fn trace_is_fixed_point_indicator() {
    let ab = set("X", &["a", "b"]);
    let swap = Relation::new(ab.clone(), ab.clone(), [("a", "b"), ("b", "a")]).unwrap();
    assert!(!trace(&swap).unwrap());
    assert!(trace(&Relation::identity(&ab)).unwrap());
    for n in 0..=3 {
        let x = sized(n);
        for r in Relation::all(&x, &x) {
            let fixed = x.elements().iter().any(|e| r.contains(e, e));
            assert_eq!(trace(&r).unwrap(), fixed);
        }
    }
    assert!(trace(&Relation::zero(&ab, &sized(1))).is_err());
}

#[test]
fn trace_is_cyclic() {
    for n in 0..=3 {
        let x = sized(n);
        for m in 0..=2 {
            let y = sized(m);
            let rs: Vec<_> = Relation::all(&x, &y).collect();
            let ss: Vec<_> = Relation::all(&y, &x).collect();
            for r in &rs {
                for s in &ss {
                    assert_eq!(
                        trace(&compose(s, r).unwrap()).unwrap(),
                        trace(&compose(r, s).unwrap()).unwrap()
                    );
                }
            }
        }
    }
}

#[test]
fn breve_round_trips() {
    let x = set("X", &["a"]);
    let y = set("Y", &["y"]);
    let r = Relation::new(x.clone(), y.clone(), [("a", "y")]).unwrap();
    assert_eq!(breve(&r).pairs(), vec![("*", "(a,y)")]);
    assert!(breve(&Relation::zero(&x, &y)).is_zero());
    for n in 0..=3 {
        for m in 0..=3 {
            let (x, y) = (sized(n), sized(m));
            for r in Relation::all(&x, &y) {
                let p = breve(&r);
                let want: BTreeSet<String> = r.pairs().iter().map(|(a, b)| format!("({a},{b})")).collect();
                assert_eq!(subset_of(&p), want);
                assert_eq!(un_breve(&p, &x, &y).unwrap(), r);
            }
        }
    }
}

fn arb_relation(n: usize, m: usize) -> impl Strategy<Value = Relation> {
    any::<u64>().prop_map(move |code| {
        let mask = if n * m == 64 { u64::MAX } else { (1u64 << (n * m)) - 1 };
        Relation::from_matrix(sized(n), sized(m), crate::bitmat::BoolMat::from_code(n, m, code & mask))
    })
}

proptest! {
    #[test]
    fn tensor_pair_count_multiplies(r in arb_relation(3, 2), s in arb_relation(2, 3)) {
        prop_assert_eq!(tensor(&r, &s).pairs().len(), r.pairs().len() * s.pairs().len());
    }

    #[test]
    fn composition_preserves_joins(r1 in arb_relation(3, 3), r2 in arb_relation(3, 3), s in arb_relation(3, 2)) {
        let x = sized(3);
        let joined = join(&x, &x, &[r1.clone(), r2.clone()]).unwrap();
        let lhs = compose(&s, &joined).unwrap();
        let rhs = join(&x, &sized(2), &[compose(&s, &r1).unwrap(), compose(&s, &r2).unwrap()]).unwrap();
        prop_assert_eq!(lhs, rhs);
        let dj = joined.dagger();
        prop_assert_eq!(dj, join(&x, &x, &[r1.dagger(), r2.dagger()]).unwrap());
    }

    #[test]
    fn breve_preserves_joins(r in arb_relation(2, 3), s in arb_relation(2, 3)) {
        let (x, y) = (sized(2), sized(3));
        let j = join(&x, &y, &[r.clone(), s.clone()]).unwrap();
        let xy = x.tensor(&y);
        prop_assert_eq!(breve(&j), join(&FinSet::unit(), &xy, &[breve(&r), breve(&s)]).unwrap());
    }
}

#[test]
fn scalars_are_zero_and_one() {
    let unit = FinSet::unit();
    let scalars: Vec<_> = Relation::all(&unit, &unit).collect();
    assert_eq!(scalars, vec![Relation::zero(&unit, &unit), Relation::identity(&unit)]);
    let one = Relation::identity(&unit);
    assert_eq!(join(&unit, &unit, &[one.clone(), one.clone()]).unwrap(), one);
}

#[test]
fn subset_identities_on_small_sets() {
    let unit = FinSet::unit();
    for n in 0..=4 {
        let x = sized(n);
        let id = Relation::identity(&x);
        // atoms decompose the identity
        let parts: Vec<_> = atoms(&x).iter().map(|a| compose(a, &a.dagger()).unwrap()).collect();
        assert_eq!(join(&x, &x, &parts).unwrap(), id);
        for a in Relation::all(&unit, &x) {
            let j = complement(&kernel(&a.dagger())).unwrap().m;
            let jp = complement_of(&j).unwrap().m;
            let proj = |k: &Relation| compose(k, &k.dagger()).unwrap();
            assert_eq!(join(&x, &x, &[proj(&j), proj(&jp)]).unwrap(), id);
            assert_eq!(compose(&j, &top(j.dom())).unwrap(), a);
            assert_eq!(compose(&jp, &top(jp.dom())).unwrap(), neg(&a).unwrap());
        }
    }
}

#[test]
fn file_round_trip_is_byte_identical() {
    let text = "set X a b c\nset Y y\nrel r X Y\n1\n0\n0\nset I *\n";
    let doc = parse_relations(text).unwrap();
    let canonical = write_relations(&doc);
    assert_eq!(canonical, "set X a b c\nset Y y\nset I *\nrel r X Y\n1\n0\n0\n");
    assert_eq!(write_relations(&parse_relations(&canonical).unwrap()), canonical);
}

#[test]
fn empty_codomain_has_no_rows() {
    let text = "set X a b\nset E\nrel z X E\nrel w E X\n";
    let doc = parse_relations(text).unwrap();
    assert_eq!(doc.relation("z").unwrap().dom().len(), 2);
    assert_eq!(write_relations(&doc), text);
}

#[test]
fn parse_errors_locate_the_problem() {
    let cases = [
        ("set X a b\nrel r X X\n10\n1\n", 4, 2),
        ("set X a b\nrel r X X\n10\n1x\n", 4, 2),
        ("set X a a\n", 1, 9),
        ("set X a\nrel r X Y\n", 2, 9),
        ("set X a\nrel r X X\n", 2, 1),
        ("sets X\n", 1, 1),
        ("set X a\nrel r X X\n011\n", 3, 2),
    ];
    for (text, line, column) in cases {
        match parse_relations(text) {
            Err(RelError::Parse { line: l, column: c, .. }) => {
                assert_eq!((l, c), (line, column), "{text:?}")
            }
            other => panic!("{text:?}: {other:?}"),
        }
    }
}
