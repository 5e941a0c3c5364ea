//! Spectra from sums over the cosets of the N-th powers.

use mseqcorr::families;
use mseqcorr::gf::FieldCtx;
use mseqcorr::spectra;

fn main() -> mseqcorr::Result<()> {
    for (p, n, d, cosets) in [(2u32, 8u32, 13u64, 5u64), (5, 2, 13, 3), (2, 8, 13, 3)] {
        let ctx = FieldCtx::canonical(p, n)?;
        match families::coset_spectrum_method(&ctx, d, cosets) {
            Ok(t) => println!(
                "p={p} n={n} d={d} N={cosets}: {t} (direct agrees: {})",
                t.same_distribution(&spectra::spectrum(&ctx, d)?)
            ),
            Err(e) => println!("p={p} n={n} d={d} N={cosets}: {e}"),
        }
    }
    Ok(())
}
