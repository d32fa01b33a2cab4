use web_time::Instant;

use super::lattice::{cvp_embed, lll, norm_sq, p_ary_basis, LatticeError};
use super::{extreme_indices, AttackError, AttackReport, QueryMatrix, Strategy};
use crate::algebra::RingCtx;

/// Largest block the lattice attack reduces.
pub const MAX_BLOCK: usize = 12;

/// Two-phase block lattice attack on AMG queries over `F_p`.
///
/// Phase one splits the rows into blocks and LLL-reduces the p-ary lattice
/// of each block's columns. A block without `b` keeps a `±1` vector in that
/// lattice; the block holding `b` has `t` in its place, so its shortest
/// reduced vector is the longest of all blocks. Phase two solves, inside the
/// chosen block, the closest-vector problem for every `t·u_j` and picks the
/// position with the smallest residual.
///
/// The full `N`-row lattice works the same way in principle but is far too
/// large to reduce, which is why the attack works block by block.
pub fn amg_lattice_attack(a: &QueryMatrix, t: u64, block: usize) -> Result<AttackReport, AttackError> {
    let start = Instant::now();
    if !matches!(a.ctx(), RingCtx::PrimeField { .. }) {
        return Err(AttackError::NotPrimeField(a.ctx().clone()));
    }
    let n = a.len();
    let max = n.min(MAX_BLOCK);
    if block == 0 || block > max {
        return Err(AttackError::BlockSize { block, max });
    }
    let mut report = AttackReport::new(Strategy::Lattice);
    let ranges: Vec<(usize, usize)> = (0..n).step_by(block).map(|s| (s, (s + block).min(n))).collect();
    for &(lo, hi) in &ranges {
        let sub = a.matrix().select_rows(lo..hi);
        let reduced = lll(&p_ary_basis(&sub)?, 0.75)?;
        report.block_stats.push((reduced.min_norm_sq() as f64).sqrt());
    }
    let blocks = extreme_indices(&report.block_stats, true);
    if blocks.len() > 1 {
        report.notes.push(format!("phase 1 tie between blocks {blocks:?}"));
    }
    report.stats = vec![f64::NAN; n];
    let gamma_max = (t / 2).max(1) as i64;
    for &blk in &blocks {
        let (lo, hi) = ranges[blk - 1];
        let basis = p_ary_basis(&a.matrix().select_rows(lo..hi))?;
        for j in 0..hi - lo {
            let mut target = vec![0i64; hi - lo];
            target[j] = t as i64;
            let mut gamma = 1;
            let closest = loop {
                match cvp_embed(&basis, &target, gamma) {
                    Ok(c) => break Some(c),
                    Err(LatticeError::NoEmbedding) if gamma < gamma_max => gamma *= 2,
                    Err(LatticeError::NoEmbedding) => break None,
                    Err(e) => return Err(e.into()),
                }
            };
            if let Some(c) = closest {
                let residual: Vec<i64> = target.iter().zip(&c).map(|(x, y)| x - y).collect();
                report.stats[lo + j] = (norm_sq(&residual) as f64).sqrt();
            }
        }
    }
    report.candidates = extreme_indices(&report.stats, false);
    if report.candidates.len() == 1 {
        report.guess = Some(report.candidates[0]);
    } else if report.candidates.len() > 1 {
        report.notes.push(format!("phase 2 tie between rows {:?}", report.candidates));
    }
    report.notes.push(format!(
        "{} blocks of {block} rows, phase 1 selected {:?}",
        ranges.len(),
        blocks
    ));
    report.elapsed = start.elapsed();
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::framework::gen_query;
    use crate::schemes::{SchemeId, SchemeParams};
    use crate::seeded_rng;

    fn amg_query(seed: u64, b: usize) -> QueryMatrix {
        let s = SchemeParams::default_for(SchemeId::Amg).build().unwrap();
        let mut rng = seeded_rng(seed);
        let (q, _) = gen_query(&s, 8, b, &mut rng).unwrap();
        QueryMatrix::from_query(&q).unwrap()
    }

    #[test]
    fn recovers_planted_index() {
        let mut hits = 0;
        for seed in 0..20 {
            let b = 1 + seed as usize % 8;
            let r = amg_lattice_attack(&amg_query(seed, b), 256, 4).unwrap();
            assert_eq!(r.block_stats.len(), 2);
            if r.guess == Some(b) {
                hits += 1;
            }
        }
        assert!(hits >= 17, "{hits}/20");
    }

    #[test]
    fn single_block() {
        let a = amg_query(3, 6);
        let top = QueryMatrix::new(a.matrix().select_rows(4..8)).unwrap();
        let r = amg_lattice_attack(&top, 256, 4).unwrap();
        assert_eq!(r.block_stats.len(), 1);
        assert_eq!(r.guess, Some(2));
    }

    #[test]
    fn block_bounds() {
        let a = amg_query(1, 1);
        assert!(matches!(amg_lattice_attack(&a, 256, 0), Err(AttackError::BlockSize { .. })));
        assert!(matches!(amg_lattice_attack(&a, 256, 9), Err(AttackError::BlockSize { .. })));
    }
}
