use web_time::Instant;

use super::{AttackError, AttackReport, QueryMatrix, Strategy};

/// Checks every unit vector `u_i` for membership in the column span of `A`.
///
/// When the scheme's kernel set is `{0}` the desired row's error survives
/// elimination of the code part, so `u_b` is always a candidate; an index
/// only shows up spuriously with small probability, and at most `w` unit
/// vectors (the column count) can be in the span at all.
pub fn unit_vector_attack(a: &QueryMatrix) -> Result<AttackReport, AttackError> {
    let start = Instant::now();
    let ctx = a.ctx();
    if !ctx.is_field() {
        return Err(AttackError::NotAField(ctx.clone()));
    }
    let n = a.len();
    let mut report = AttackReport::new(Strategy::UnitVector);
    let mut target = vec![ctx.zero(); n];
    for i in 0..n {
        target[i] = ctx.one();
        let hit = a.matrix().solve_membership(&target)?.is_some();
        target[i] = ctx.zero();
        report.stats.push(if hit { 1.0 } else { 0.0 });
        if hit {
            report.candidates.push(i + 1);
        }
    }
    report.guess = report.candidates.first().copied();
    report.notes.push(format!(
        "{} of {n} unit vectors in the column span (at most {} possible)",
        report.candidates.len(),
        a.matrix().cols()
    ));
    report.elapsed = start.elapsed();
    Ok(report)
}
