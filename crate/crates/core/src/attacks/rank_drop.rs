use web_time::Instant;

use super::{extreme_indices, AttackError, AttackReport, QueryMatrix, Strategy};

/// Deletes each row in turn and measures the prime-field rank of what is
/// left; the row whose removal costs the most rank is the desired one.
///
/// With `N` below the number of prime-field columns the full-rank baseline
/// may not be reached and the report is marked degraded.
pub fn rank_drop_attack(a: &QueryMatrix) -> Result<AttackReport, AttackError> {
    let start = Instant::now();
    let ctx = a.ctx();
    if !ctx.is_field() {
        return Err(AttackError::NotAField(ctx.clone()));
    }
    let expanded = a.matrix().expand_to_base()?;
    let n = a.len();
    let mut report = AttackReport::new(Strategy::RankDrop);
    for i in 0..n {
        report.stats.push(expanded.without_row(i).rank()? as f64);
    }
    report.candidates = extreme_indices(&report.stats, false);
    if report.candidates.len() == 1 {
        report.guess = Some(report.candidates[0]);
    }
    let full = expanded.rank()?;
    report.notes.push(format!(
        "rank of full matrix {full}, {} base-field columns, minimum after deletion {}",
        expanded.cols(),
        report.stats.iter().copied().fold(f64::INFINITY, f64::min)
    ));
    if n < expanded.cols() {
        report.degraded = true;
        report.notes.push(format!("N = {n} is below the column count {}", expanded.cols()));
    }
    report.elapsed = start.elapsed();
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Element, Matrix, RingCtx};
    use crate::attacks::unit_vector_attack;
    use crate::framework::{gen_query, gen_query_traced, SecretKey};
    use crate::schemes::{SchemeId, SchemeParams};
    use crate::seeded_rng;

    #[test]
    fn identical_rows_give_no_guess() {
        let ctx = RingCtx::prime_field(7).unwrap();
        let row = vec![Element::scalar(1), Element::scalar(2)];
        let a = QueryMatrix::new(Matrix::from_rows(&ctx, vec![row; 4]).unwrap()).unwrap();
        let r = rank_drop_attack(&a).unwrap();
        assert_eq!(r.stats, vec![1.0; 4]);
        assert_eq!(r.candidates, vec![1, 2, 3, 4]);
        assert_eq!(r.guess, None);
        assert!(!r.degraded);
    }

    #[test]
    fn hhwz_rank_profile() {
        let s = SchemeParams::default_for(SchemeId::Hhwz).build().unwrap();
        let mut clean = 0;
        for seed in 0..20 {
            let mut rng = seeded_rng(seed);
            let b = 1 + seed as usize % 30;
            let (q, _) = gen_query(&s, 30, b, &mut rng).unwrap();
            let r = rank_drop_attack(&QueryMatrix::from_query(&q).unwrap()).unwrap();
            assert!(!r.degraded);
            assert!(r.candidates.contains(&b));
            // mn - s after deleting b; every other row tops out at mn - s + 1
            // because the marked column reaches a single vector of V.
            assert!(r.stats[b - 1] <= 22.0);
            assert!(r.stats.iter().all(|&v| v <= 23.0));
            if r.stats[b - 1] == 22.0 && r.guess == Some(b) {
                clean += 1;
            }
        }
        // Over F_2 another of the 29 rows is occasionally the only one
        // carrying some direction, which ties it with b.
        assert!(clean >= 12, "{clean}/20");
    }

    #[test]
    fn rank_additivity() {
        let s = SchemeParams::default_for(SchemeId::Hhwz).build().unwrap();
        let mut ok = 0;
        for seed in 0..20 {
            let mut rng = seeded_rng(100 + seed);
            let (q, secret, trace) = gen_query_traced(&s, 30, 5, &mut rng).unwrap();
            let SecretKey::Systematic { code, .. } = &secret.key else { panic!() };
            let ctx = q.ctx.clone();
            let a = Matrix::from_rows(&ctx, q.rows.clone()).unwrap();
            let e = Matrix::from_rows(&ctx, trace.errors.clone()).unwrap();
            let c_rows = q
                .rows
                .iter()
                .zip(&trace.errors)
                .map(|(r, e)| r.iter().zip(e).map(|(x, y)| ctx.sub(x, y)).collect())
                .collect();
            let c = Matrix::from_rows(&ctx, c_rows).unwrap();
            let rk = |m: &Matrix| m.expand_to_base().unwrap().rank().unwrap();
            assert!(rk(&c) <= code.dimension() * 4);
            if rk(&a) == rk(&c) + rk(&e) {
                ok += 1;
            }
        }
        assert!(ok >= 19, "{ok}/20");
    }

    #[test]
    fn basic_scheme_as_degree_one_extension() {
        let s = SchemeParams::default_for(SchemeId::Basic).build().unwrap();
        let mut rng = seeded_rng(3);
        let (q, _) = gen_query(&s, 50, 17, &mut rng).unwrap();
        let a = QueryMatrix::from_query(&q).unwrap();
        let r = rank_drop_attack(&a).unwrap();
        assert_eq!(r.guess, Some(17));
        assert_eq!(r.stats[16] + 1.0, r.stats[0]);
        assert!(unit_vector_attack(&a).unwrap().candidates.contains(&17));
    }
}
