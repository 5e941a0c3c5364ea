//! An m-sequence by trace and by recursion, a decimation, and the Golomb checks.

use mseqcorr::gf::FieldCtx;
use mseqcorr::lfsr;

fn main() -> mseqcorr::Result<()> {
    let ctx = FieldCtx::canonical(2, 5)?;
    let s = lfsr::generate_trace(&ctx);
    println!("s   = {}", s.to_digits());
    let r = lfsr::generate_recursion(ctx.spec(), &[1, 0, 0, 0, 0])?;
    println!("rec = {} (shift {:?})", r.to_digits(), r.shift_relative_to(&s));
    let u = lfsr::decimate(&s, 3)?;
    println!("s_3t= {}", u.to_digits());
    println!("{:?}", lfsr::check_golomb(&s));

    let ternary = lfsr::generate_trace(&FieldCtx::canonical(3, 3)?);
    let report = lfsr::check_golomb(&ternary);
    println!("p=3 n=3 all hold: {}", report.all_hold());
    Ok(())
}
