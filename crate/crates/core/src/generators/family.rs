use super::{bernstein_vazirani, brickwork_1d, brickwork_2d, mera, mps_prep, qaoa_u3r, qcnn, ttn};
use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::gates::GateSource;

/// A structured circuit family with its parameters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Family {
    Brick1d { n: usize, k: usize, periodic: bool },
    Brick2d { nx: usize, ny: usize, k: usize, periodic: bool },
    Mps { n: usize, chi: usize },
    Ttn { depth: usize },
    Mera { depth: usize },
    Qcnn { depth: usize },
    Bv { secret: String },
    /// QAOA on a random 3-regular graph drawn from `seed`.
    Qaoa { n: usize, p: usize, seed: u64 },
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Brick1d { .. } => "brick1d",
            Family::Brick2d { .. } => "brick2d",
            Family::Mps { .. } => "mps",
            Family::Ttn { .. } => "ttn",
            Family::Mera { .. } => "mera",
            Family::Qcnn { .. } => "qcnn",
            Family::Bv { .. } => "bv",
            Family::Qaoa { .. } => "qaoa",
        }
    }

    pub fn generate(&self, source: GateSource) -> Result<Circuit> {
        match self {
            Family::Brick1d { n, k, periodic } => brickwork_1d(*n, *k, *periodic, source),
            Family::Brick2d { nx, ny, k, periodic } => brickwork_2d(*nx, *ny, *k, *periodic, source),
            Family::Mps { n, chi } => mps_prep(*n, *chi, source),
            Family::Ttn { depth } => ttn(*depth, source),
            Family::Mera { depth } => mera(*depth, source),
            Family::Qcnn { depth } => qcnn(*depth, source),
            Family::Bv { secret } => bernstein_vazirani(secret.len(), secret),
            Family::Qaoa { n, p, seed } => Ok(qaoa_u3r(*n, *p, *seed)?.1),
        }
    }

    /// Closed-form compiled width of the family. QAOA and open-boundary
    /// brickwork have none.
    pub fn predicted_width(&self) -> Result<usize> {
        if let Family::Brick1d { periodic: false, .. } | Family::Brick2d { periodic: false, .. } = self {
            return Err(Error::InvalidArgument(
                "brickwork closed form assumes periodic boundaries".into(),
            ));
        }
        Ok(match *self {
            Family::Brick1d { n, k, .. } => (4 * k).min(n),
            Family::Brick2d { nx, ny, k, .. } => {
                let (lo, hi) = (nx.min(ny), nx.max(ny));
                if 4 * k < lo {
                    (4 * k - 2) * lo + 8 * k
                } else if 4 * k > hi {
                    nx * ny
                } else {
                    4 * k * lo
                }
            }
            Family::Mps { chi, .. } => 1 + chi.next_power_of_two().trailing_zeros() as usize,
            Family::Ttn { depth } => depth + 1,
            Family::Mera { depth } | Family::Qcnn { depth } => 2 * depth - 1,
            Family::Bv { .. } => 2,
            Family::Qaoa { .. } => {
                return Err(Error::InvalidArgument("QAOA circuits have no closed-form width".into()))
            }
        })
    }
}
