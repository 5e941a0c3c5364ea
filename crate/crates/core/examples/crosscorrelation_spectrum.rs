//! Crosscorrelation spectra by the fast transform and by direct summation.

use mseqcorr::gf::FieldCtx;
use mseqcorr::spectra::{self, Method};

fn main() -> mseqcorr::Result<()> {
    let ctx = FieldCtx::canonical(2, 7)?;
    for d in [3u64, 5, 7, 9] {
        let fast = spectra::spectrum_with(&ctx, d, Method::Fast)?;
        let naive = spectra::spectrum_with(&ctx, d, Method::Naive)?;
        assert!(fast.same_distribution(&naive));
        println!("n=7 d={d}: {fast}");
    }
    // odd characteristic: values live in Z[ω] but are real here
    let ctx = FieldCtx::canonical(5, 3)?;
    println!("p=5 n=3 d=13: {}", spectra::spectrum(&ctx, 13)?);
    let report = spectra::moment_identity_check(&ctx, 13, 7)?;
    println!("moment identities hold: {}", report.all_hold());
    Ok(())
}
