//! Every catalog family against exhaustive spectra on a small grid.

use mseqcorr::families;
use mseqcorr::gf::FieldCtx;

fn main() -> mseqcorr::Result<()> {
    let all: Vec<_> = families::catalog().iter().collect();
    for (p, n) in [(2, 5), (2, 6), (2, 8), (3, 3), (3, 4), (5, 2)] {
        let ctx = FieldCtx::canonical(p, n)?;
        for v in families::verify_all(&ctx, &all)? {
            let ps: Vec<String> = v.params.iter().map(|(k, x)| format!("{k}={x}")).collect();
            println!(
                "p={p} n={n} {:<20} {:<10} d={:<6} {}",
                v.family,
                ps.join(","),
                v.d,
                if v.pass { "pass" } else { "FAIL" }
            );
        }
    }
    let ps = families::params(&[("k", 3)]);
    let inst = families::find("kasami-welch")?.instance(2, 9, &ps)?;
    println!("kasami-welch n=9 k=3: d={} {:?}", inst.d, inst.prediction);
    Ok(())
}
