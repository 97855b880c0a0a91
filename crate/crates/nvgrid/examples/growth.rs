//! Probe: cell growth along composition chains, canonical-form sizes, and
//! the word round trip.  Canonicalization stays cheap at thousands of
//! cells; word interpretation scales with both letter count and spine
//! depth (the permutation part alone is quadratic in M), so round trips
//! are most comfortable below a couple hundred carets.
use nvgrid::*;

fn main() {
    let mut acc = Element::identity(2);
    for seed in 0..8u64 {
        acc = acc.compose(&Element::random(seed, 2, 14)).unwrap();
    }
    let t = std::time::Instant::now();
    let rgd = canon(&acc);
    println!(
        "chain of 8 budget-14 elements: {} cells, canon M {} leaves {:?} ({:?})",
        acc.len(),
        rgd.caret_count(),
        rgd.leaf_counts(),
        t.elapsed()
    );

    for seed in 0..3u64 {
        let f = Element::random(seed, 2, 16);
        let m = canon(&f).caret_count();
        let t = std::time::Instant::now();
        let w = normal_form(&f).unwrap();
        assert!(interpret(&w).unwrap().equals(&f));
        println!(
            "budget-16 element (seed {seed}): M {m}, word {} letters, round trip {:?}",
            w.len(),
            t.elapsed()
        );
    }
}
