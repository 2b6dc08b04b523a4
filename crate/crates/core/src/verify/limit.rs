use crate::fundsol::{e_minus_radial, f_minus_radial, KernelSpec};
use crate::geometry::{classify_radial, limit_form, norm, split_point, RegionTag, SourcePoint};
use crate::specfun::Branch;
use crate::error::Result;

/// Gaps `|E₋(·; b) - F₋(·)|` at one point along a sequence of `b`.
#[derive(Debug, Clone, PartialEq)]
pub struct LimitRow {
    pub point: Vec<f64>,
    pub gaps: Vec<f64>,
    pub strictly_decreasing: bool,
    /// Set when the point was skipped.
    pub note: Option<String>,
}

/// Evaluates the gaps at each point; points outside the open region
/// `9|x|² + 4y³ < 0`, or outside some conoid of the sequence, are skipped.
pub fn limit_check(n: usize, points: &[Vec<f64>], b_sequence: &[f64]) -> Result<Vec<LimitRow>> {
    let mut rows = Vec::with_capacity(points.len());
    for point in points {
        let (x, y) = split_point(point);
        let r = norm(x);
        let skip = |note: String| LimitRow { point: point.clone(), gaps: Vec::new(), strictly_decreasing: false, note: Some(note) };
        if x.len() != n {
            rows.push(skip(format!("expected {} coordinates", n + 1)));
            continue;
        }
        if !(limit_form(r, y) < 0.0) {
            rows.push(skip("not in the open limiting region".into()));
            continue;
        }
        let f = f_minus_radial(n, r, y)?;
        let mut gaps = Vec::with_capacity(b_sequence.len());
        let mut outside = None;
        for &b in b_sequence {
            let source = SourcePoint::new(b)?;
            if classify_radial(r, y, &source) != RegionTag::DMinusInterior {
                outside = Some(b);
                break;
            }
            let spec = KernelSpec::new(n, source, Branch::LowerCut)?;
            gaps.push((e_minus_radial(&spec, r, y)? - f).abs());
        }
        if let Some(b) = outside {
            rows.push(skip(format!("outside the conoid for b = {b}")));
            continue;
        }
        let strictly_decreasing = gaps.windows(2).all(|w| w[1] < w[0]);
        rows.push(LimitRow { point: point.clone(), gaps, strictly_decreasing, note: None });
    }
    Ok(rows)
}
