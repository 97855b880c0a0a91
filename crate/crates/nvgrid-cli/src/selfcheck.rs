//! The `check` command: a compact self-consistency suite over seeded
//! random elements.  Prints one line per check and reports overall status.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use nvgrid::words::{emit_positive_verbose, RuleTable};
use nvgrid::{canon, gridify, interpret, normal_form, CoordTree, Element, Side, Word};

struct Reporter {
    ok: bool,
}

impl Reporter {
    fn check(&mut self, name: &str, good: bool) {
        println!("{} {name}", if good { "PASS" } else { "FAIL" });
        self.ok &= good;
    }
}

pub fn run(seed: u64) -> bool {
    let mut r = Reporter { ok: true };
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5EED);

    r.check(
        "rewrite rules verify against the interpreter",
        RuleTable::with_default_rules(8).is_ok(),
    );

    let golden = (|| -> nvgrid::Result<bool> {
        let e = CoordTree::caret(CoordTree::Leaf, CoordTree::Leaf);
        let d = CoordTree::caret(e, CoordTree::Leaf);
        let c = CoordTree::caret(CoordTree::Leaf, d);
        let tv = CoordTree::caret(c, CoordTree::Leaf);
        let pair = || CoordTree::caret(CoordTree::Leaf, CoordTree::Leaf);
        let th = CoordTree::caret(pair(), CoordTree::caret(pair(), pair()));
        let w = Word::from_letters(emit_positive_verbose(&[tv, th])?);
        Ok(w.to_string()
            == "C1 C2 C3 A0 B0^2 B2^2 B4 A6^2 B6^2 B8^2 B10 B12^2 B14^2 B16 B18^2 B20^2 B22 B24 B26")
    })()
    .unwrap_or(false);
    r.check("positive word of the reference grid", golden);

    let mut confluence = true;
    let mut soundness = true;
    for s in 0..20u64 {
        let f = Element::random(seed.wrapping_add(s), 2, 12);
        let base = canon(&f);
        confluence &= base == gridify(&f, Side::Source).reduce_with(&mut rng);
        confluence &= base == canon(&f.refine_random(&mut rng, 3));
        soundness &= base.induced_element().equals(&f);
    }
    r.check(
        "canonical form is order- and representative-invariant",
        confluence,
    );
    r.check("canonical form represents its element", soundness);

    let mut axioms = true;
    for dim in [1usize, 2, 3] {
        for s in 0..10u64 {
            let f = Element::random(seed.wrapping_add(s), dim, 5);
            let g = Element::random(seed.wrapping_add(s + 100), dim, 5);
            let h = Element::random(seed.wrapping_add(s + 200), dim, 5);
            let a = f.compose(&g).unwrap().compose(&h).unwrap();
            let b = f.compose(&g.compose(&h).unwrap()).unwrap();
            axioms &= canon(&a) == canon(&b);
            axioms &= f
                .compose(&f.invert())
                .unwrap()
                .equals(&Element::identity(dim));
        }
    }
    r.check("group axioms on random triples (dims 1-3)", axioms);

    let mut round_trip = true;
    for s in 0..20u64 {
        let f = Element::random(seed.wrapping_add(s + 300), 2, 8);
        round_trip &= match normal_form(&f).and_then(|w| interpret(&w)) {
            Ok(back) => back.equals(&f),
            Err(_) => false,
        };
    }
    r.check(
        "word emission round-trips through the interpreter",
        round_trip,
    );

    println!(
        "{}",
        if r.ok {
            "all checks passed"
        } else {
            "CHECKS FAILED"
        }
    );
    r.ok
}
