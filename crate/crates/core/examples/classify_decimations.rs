//! Decimation classes of GF(2^8) and GF(3^5) grouped by number of values,
//! with spectra cached on disk between runs.

use mseqcorr::gf::FieldCtx;
use mseqcorr::search::{self, SpectrumCache};

fn main() -> mseqcorr::Result<()> {
    let cache = SpectrumCache::new(std::env::temp_dir().join("mseqcorr-example-cache"));
    for (p, n) in [(2, 8), (3, 5)] {
        let ctx = FieldCtx::canonical(p, n)?;
        let buckets = search::classify_by_value_count(search::canonical_classes(&ctx, Some(&cache))?);
        for (t, classes) in buckets {
            let reps: Vec<u64> = classes.iter().map(|c| c.representative).collect();
            println!("p={p} n={n} t={t}: {reps:?}");
        }
    }
    println!("cache in {}", cache.dir().display());
    Ok(())
}
