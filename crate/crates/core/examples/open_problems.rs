//! Exhaustive evidence for two conjectures: `-1` always occurs as a
//! crosscorrelation value, and every three-valued class is a known one.

use mseqcorr::gf::FieldCtx;
use mseqcorr::search;

fn main() -> mseqcorr::Result<()> {
    let grid: Vec<(u32, u32)> = (3..=14)
        .map(|n| (2, n))
        .chain((2..=7).map(|n| (3, n)))
        .chain([(5, 2), (5, 3)])
        .collect();
    for (p, n) in grid {
        let ctx = FieldCtx::canonical(p, n)?;
        let classes = search::canonical_classes(&ctx, None)?;
        let minus_one = search::check_minus_one(&ctx, &classes);
        let three = search::three_valued_completeness(&ctx, &classes);
        println!(
            "p={p} n={n:>2} classes={:>4} minus-one={} three-valued={:?} unexplained={:?} missing={:?}",
            classes.len(),
            if minus_one.holds() { "holds" } else { "FAILS" },
            three.observed,
            three.unexplained,
            three.missing,
        );
    }
    Ok(())
}
