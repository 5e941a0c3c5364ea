//! Weight distributions of two-nonzero cyclic codes from Walsh spectra.

use mseqcorr::codes;
use mseqcorr::gf::FieldCtx;

fn main() -> mseqcorr::Result<()> {
    for (p, n, d) in [(2u32, 5u32, 3u64), (2, 6, 5), (3, 3, 7)] {
        let ctx = FieldCtx::canonical(p, n)?;
        let fast = codes::weight_distribution_via_walsh(&ctx, d)?;
        let brute = codes::weight_distribution_brute(&ctx, d);
        println!("p={p} n={n} d={d}: {:?} (matches enumeration: {})", fast.0, fast == brute);
    }
    Ok(())
}
