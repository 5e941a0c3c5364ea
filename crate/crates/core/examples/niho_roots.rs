//! Walsh values of Niho exponents from root counts on the unit circle.

use mseqcorr::gf::FieldCtx;
use mseqcorr::niho;

fn main() -> mseqcorr::Result<()> {
    for (p, m, s) in [(2u32, 4u32, 2i64), (2, 4, 3), (2, 5, 4), (3, 2, 2)] {
        let ctx = FieldCtx::canonical(p, 2 * m)?;
        let hist = niho::root_histogram(&ctx, s)?;
        let report = niho::check_identity(&ctx, s)?;
        println!(
            "p={p} m={m} s={s} d={}: N(a) histogram {hist:?}, identity {}",
            report.d,
            if report.holds() { "holds" } else { "fails" }
        );
    }
    Ok(())
}
