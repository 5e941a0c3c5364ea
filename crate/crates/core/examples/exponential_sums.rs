//! Kloosterman sums, the cubic sums and the mixed-sum identities.

use mseqcorr::expsums;
use mseqcorr::gf::{Elem, FieldCtx};

fn main() -> mseqcorr::Result<()> {
    let f = FieldCtx::canonical(2, 6)?;
    let ks: Vec<i64> = (0..8).map(|a| expsums::kloosterman(&f, Elem(a))).collect::<Result<_, _>>()?;
    println!("K(a), a < 8, over GF(64): {ks:?}");
    println!("{:?}", expsums::kloosterman_check(&f));
    println!("ternary m=3: {:?}", expsums::kloosterman_check(&FieldCtx::canonical(3, 3)?).holds());

    let f = FieldCtx::canonical(2, 7)?;
    println!("C(1,1) = {}, G(1,1) = {}", expsums::cubic_sum(&f, Elem::ONE, Elem::ONE)?, expsums::g_sum(&f, Elem::ONE, Elem::ONE)?);
    for m in [3, 5, 7] {
        println!("R(m={m}) = {}", expsums::r_sum(&FieldCtx::canonical(2, m)?)?);
    }
    for (n, k) in [(5, 2), (7, 3), (9, 2)] {
        println!("{:?}", expsums::op6_check(&FieldCtx::canonical(2, n)?, k)?);
    }
    Ok(())
}
