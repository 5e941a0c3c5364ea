//! In-place Fourier transforms over the group (Z_p)^n.
//!
//! Point `x` is addressed by its packed base-p digits, so the stage for
//! digit `i` combines the `p` points that differ only in that digit. Small
//! blocks are processed whole by one worker; once a block is large enough
//! its `p` sub-blocks are cut into aligned slices and the slices are
//! distributed instead. Each worker owns its slices exclusively.

use rayon::prelude::*;

/// Words handed to one worker at a time.
const GRAIN: usize = 1 << 14;

/// Walsh-Hadamard transform of a length-2^n vector.
pub(crate) fn fwht(data: &mut [i32]) {
    let len = data.len();
    debug_assert!(len.is_power_of_two());
    let mut h = 1;
    while h < len {
        let block = 2 * h;
        if block > GRAIN {
            for chunk in data.chunks_mut(block) {
                let (lo, hi) = chunk.split_at_mut(h);
                lo.par_chunks_mut(GRAIN / 2)
                    .zip(hi.par_chunks_mut(GRAIN / 2))
                    .for_each(|(a, b)| butterfly(a, b));
            }
        } else {
            data.par_chunks_mut(GRAIN.min(len)).for_each(|c| {
                for blk in c.chunks_mut(block) {
                    let (lo, hi) = blk.split_at_mut(h);
                    butterfly(lo, hi);
                }
            });
        }
        h = block;
    }
}

fn butterfly(a: &mut [i32], b: &mut [i32]) {
    for (x, y) in a.iter_mut().zip(b.iter_mut()) {
        let (u, v) = (*x, *y);
        *x = u + v;
        *y = u - v;
    }
}

/// Transform of point values in `Z[ω]` given as residue counts.
///
/// `data` holds `p` counts per point: entry `x*p + j` is the multiplicity of
/// `ω^j` at point `x`. On return point `u` holds
/// `Σ_x value(x) · ω^{-u·x}` in the same form.
pub(crate) fn dft_counts(data: &mut [u32], p: usize) {
    let points = data.len() / p;
    // rot[u*p + x] = -u·x mod p
    let rot: Vec<usize> = (0..p * p).map(|k| (p - (k / p) * (k % p) % p) % p).collect();
    let width = p * p;
    let mut h = 1;
    while h < points {
        let sub = h * p; // words in one sub-block
        let block = sub * p;
        if block > GRAIN {
            let per_task = (GRAIN / width).max(1);
            for chunk in data.chunks_mut(block) {
                let tasks = h.div_ceil(per_task);
                let mut pieces: Vec<Vec<&mut [u32]>> =
                    (0..tasks).map(|_| Vec::with_capacity(p)).collect();
                for part in chunk.chunks_mut(sub) {
                    for (i, piece) in part.chunks_mut(per_task * p).enumerate() {
                        pieces[i].push(piece);
                    }
                }
                pieces.into_par_iter().for_each(|mut parts| {
                    let mut input = vec![0u32; width];
                    let mut out = vec![0u32; width];
                    let offsets = parts[0].len() / p;
                    for o in 0..offsets {
                        for (t, part) in parts.iter().enumerate() {
                            input[t * p..(t + 1) * p].copy_from_slice(&part[o * p..(o + 1) * p]);
                        }
                        combine(&input, &mut out, p, &rot);
                        for (t, part) in parts.iter_mut().enumerate() {
                            part[o * p..(o + 1) * p].copy_from_slice(&out[t * p..(t + 1) * p]);
                        }
                    }
                });
            }
        } else {
            let task = block * (GRAIN / block).max(1);
            data.par_chunks_mut(task.min(data.len())).for_each(|c| {
                let mut input = vec![0u32; width];
                let mut out = vec![0u32; width];
                for blk in c.chunks_mut(block) {
                    for o in 0..h {
                        for t in 0..p {
                            let at = t * sub + o * p;
                            input[t * p..(t + 1) * p].copy_from_slice(&blk[at..at + p]);
                        }
                        combine(&input, &mut out, p, &rot);
                        for t in 0..p {
                            let at = t * sub + o * p;
                            blk[at..at + p].copy_from_slice(&out[t * p..(t + 1) * p]);
                        }
                    }
                }
            });
        }
        h *= p;
    }
}

/// One p-point DFT on count vectors: `out[u] = Σ_x in[x] · ω^{rot[u][x]}`,
/// where multiplying by `ω^k` rotates the counts by `k`.
fn combine(input: &[u32], out: &mut [u32], p: usize, rot: &[usize]) {
    out.fill(0);
    for u in 0..p {
        let dst = &mut out[u * p..(u + 1) * p];
        for x in 0..p {
            let k = rot[u * p + x];
            let src = &input[x * p..(x + 1) * p];
            for (j, &c) in src.iter().enumerate() {
                let slot = if j + k >= p { j + k - p } else { j + k };
                dst[slot] += c;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive_wht(v: &[i32]) -> Vec<i32> {
        (0..v.len())
            .map(|u| {
                v.iter()
                    .enumerate()
                    .map(|(x, &a)| if (u & x).count_ones() % 2 == 0 { a } else { -a })
                    .sum()
            })
            .collect()
    }

    #[test]
    fn fwht_matches_definition_across_grain() {
        for n in [1u32, 3, 8, 15, 16] {
            let len = 1usize << n;
            let v: Vec<i32> = (0..len).map(|i| ((i * 7919) % 13) as i32 - 6).collect();
            let mut fast = v.clone();
            fwht(&mut fast);
            if n <= 8 {
                assert_eq!(fast, naive_wht(&v));
            }
            fwht(&mut fast);
            assert!(fast.iter().zip(&v).all(|(a, b)| *a == *b * len as i32));
        }
    }

    fn dot(u: usize, x: usize, p: usize) -> usize {
        let (mut u, mut x, mut acc) = (u, x, 0);
        while u > 0 || x > 0 {
            acc += (u % p) * (x % p);
            u /= p;
            x /= p;
        }
        acc % p
    }

    #[test]
    fn dft_counts_matches_definition() {
        for (p, n) in [(3usize, 2u32), (3, 5), (5, 3), (7, 2), (3, 9)] {
            let q = p.pow(n);
            let f: Vec<usize> = (0..q).map(|x| (x * x + 3 * x + 1) % p).collect();
            let mut data = vec![0u32; q * p];
            for x in 0..q {
                data[x * p + f[x]] = 1;
            }
            dft_counts(&mut data, p);
            let probes: Vec<usize> = if q <= 243 { (0..q).collect() } else { vec![0, 1, q / 3, q - 1] };
            for u in probes {
                let mut want = vec![0u32; p];
                for x in 0..q {
                    want[(f[x] + p - dot(u, x, p)) % p] += 1;
                }
                assert_eq!(&data[u * p..(u + 1) * p], &want[..], "p={p} n={n} u={u}");
            }
        }
    }
}
