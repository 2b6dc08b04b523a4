//! The standard set of bump functions each kernel is checked against.

use crate::chi::BumpTestFunction;
use crate::error::{domain, Result};
use crate::specfun::Branch;

use super::{KernelKind, VerifyCase};

/// Position of a bump relative to the pole and the kernel's singular set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BumpRole {
    /// Centered at the pole.
    Pole,
    /// Contains the pole off center.
    Offset,
    /// Misses the pole but crosses the boundary of the kernel's support.
    Disjoint,
}

impl BumpRole {
    pub fn name(&self) -> &'static str {
        match self {
            BumpRole::Pole => "pole",
            BumpRole::Offset => "offset",
            BumpRole::Disjoint => "disjoint",
        }
    }
}

/// One weak-form check: a kernel, a part of its values and a bump.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixEntry {
    pub case: VerifyCase,
    pub role: BumpRole,
    pub phi: BumpTestFunction,
}

impl MatrixEntry {
    pub fn label(&self) -> String {
        format!("{} {}", self.case.label(), self.role.name())
    }
}

/// Source used for the kernels relative to `(0, b)`.
pub const MATRIX_SOURCE: f64 = -1.0;

fn bump(x: &[f64], y: f64, n: usize, radius: f64) -> Result<BumpTestFunction> {
    let mut c = vec![0.0; n + 1];
    for (ci, &xi) in c.iter_mut().zip(x) {
        *ci = xi;
    }
    c[n] = y;
    BumpTestFunction::new(&c, radius, 1.0)
}

/// Bumps for `kind` in dimension `n`.  Every bump of an `E₊` or `Ẽ` check
/// stays in `y < 0`; the `Ẽ` bumps cross the characteristics `v = 0`
/// away from the source.
pub fn standard_bumps(kind: KernelKind, n: usize) -> Result<Vec<(BumpRole, BumpTestFunction)>> {
    let b = MATRIX_SOURCE;
    let out = match kind {
        // off-axis bumps cost an order of magnitude more in three dimensions
        KernelKind::EMinus if n >= 3 => vec![
            (BumpRole::Pole, bump(&[], b, n, 0.5)?),
            (BumpRole::Offset, bump(&[], b - 0.15, n, 0.45)?),
            (BumpRole::Disjoint, bump(&[], -2.0, n, 0.9)?),
        ],
        KernelKind::EMinus => vec![
            (BumpRole::Pole, bump(&[], b, n, 0.5)?),
            (BumpRole::Offset, bump(&[0.3, 0.1], b - 0.2, n, 0.4)?),
            (BumpRole::Disjoint, bump(&[1.3], -2.2, n, 0.4)?),
        ],
        KernelKind::EPlus => vec![
            (BumpRole::Pole, bump(&[], b, n, 0.5)?),
            (BumpRole::Offset, bump(&[0.2], b - 0.1, n, 0.45)?),
            (BumpRole::Disjoint, bump(&[0.8], -0.5, n, 0.35)?),
        ],
        KernelKind::ETilde => vec![
            (BumpRole::Disjoint, bump(&[0.75], -0.3, n, 0.2)?),
            (BumpRole::Disjoint, bump(&[-0.8], -0.4, n, 0.25)?),
            (BumpRole::Disjoint, bump(&[1.2], -1.5, n, 0.4)?),
        ],
        KernelKind::FMinus => vec![
            (BumpRole::Pole, bump(&[], 0.0, n, 0.5)?),
            (BumpRole::Offset, bump(&[0.1, -0.1], -0.15, n, 0.3)?),
            (BumpRole::Disjoint, bump(&[0.3], -0.6, n, 0.25)?),
        ],
        KernelKind::FPlus => vec![
            (BumpRole::Pole, bump(&[], 0.0, n, 0.5)?),
            (BumpRole::Offset, bump(&[0.1, -0.1], 0.15, n, 0.3)?),
            (BumpRole::Disjoint, bump(&[0.5], -0.6, n, 0.2)?),
        ],
    };
    Ok(out)
}

/// The checks for `kind` in dimension `n`.  `E₊` is checked on both
/// branches, real part against the delta and imaginary part against zero.
pub fn standard_matrix(kind: KernelKind, n: usize) -> Result<Vec<MatrixEntry>> {
    let branches: &[Branch] = match kind {
        KernelKind::EPlus | KernelKind::ETilde => &[Branch::UpperCut, Branch::LowerCut],
        _ => &[Branch::LowerCut],
    };
    if n == 0 {
        return domain("n must be at least 1");
    }
    let mut out = Vec::new();
    for &branch in branches {
        let base = VerifyCase::new(kind, n, MATRIX_SOURCE, branch)?;
        let parts = if kind == KernelKind::EPlus { vec![base, base.imaginary()] } else { vec![base] };
        for case in parts {
            for (role, phi) in standard_bumps(kind, n)? {
                out.push(MatrixEntry { case, role, phi });
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chi::TestFunction;

    #[test]
    fn roles_match_geometry() {
        for (kind, n) in [(KernelKind::EMinus, 1), (KernelKind::EMinus, 3), (KernelKind::FMinus, 2), (KernelKind::FPlus, 1)] {
            for e in standard_matrix(kind, n).unwrap() {
                let contains = e.phi.support().contains(&e.case.pole());
                assert_eq!(contains, e.role != BumpRole::Disjoint, "{}", e.label());
                assert_eq!(e.phi.dim(), n + 1);
            }
        }
    }

    #[test]
    fn null_bumps_stay_below_the_parabolic_line() {
        for e in standard_matrix(KernelKind::ETilde, 1).unwrap() {
            let s = e.phi.support();
            assert!(s.hi[1] < 0.0 && !s.contains(&e.case.pole()));
        }
        for e in standard_matrix(KernelKind::EPlus, 1).unwrap() {
            assert!(e.phi.support().hi[1] < 0.0);
        }
        assert_eq!(standard_matrix(KernelKind::EPlus, 1).unwrap().len(), 12);
        assert!(standard_matrix(KernelKind::EPlus, 2).is_err());
    }
}
