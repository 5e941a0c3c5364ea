//! Arithmetic in GF(3^4): the default modulus, logs, traces and a subfield.

use mseqcorr::gf::FieldCtx;

fn main() -> mseqcorr::Result<()> {
    let f = FieldCtx::canonical(3, 4)?;
    println!("modulus c_0..c_3 = {:?}", f.spec().coeffs());
    let a = f.exp(10);
    let b = f.exp(47);
    let prod = f.mul(a, b);
    println!("α^10 · α^47 = α^{}", f.log(prod).unwrap());
    println!("Tr(α^10) = {}", f.trace(a));
    let inv = f.inv(a).unwrap();
    assert_eq!(f.mul(a, inv), mseqcorr::gf::Elem::ONE);
    // α^{(81-1)/(9-1)} generates GF(9)
    let g = f.exp(10);
    println!("α^10 in GF(9): {}", f.in_subfield(g, 2));
    println!("Tr_2(α) = {:?}", f.relative_trace(f.exp(1), 2)?);
    Ok(())
}
