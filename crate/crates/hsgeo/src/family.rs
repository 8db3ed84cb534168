//! The three operator-algebra families.

use serde::{Deserialize, Serialize};

/// Which Hilbert-Schmidt family the algebra belongs to.
///
/// - `GeneralHS`: all index pairs `(i,j)`, `i,j >= 1`, basis `xi_ij = l_i l_j e_ij`.
/// - `OrthogonalHS`: skew-symmetric operators, pairs `i < j`, basis
///   `xi_ij = l_i l_j (e_ij - e_ji) / sqrt(2)`.
/// - `TriangularHS`: strictly upper triangular operators, pairs `i < j`,
///   basis `xi_ij = l_i l_j e_ij`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    GeneralHS,
    OrthogonalHS,
    TriangularHS,
}

impl Family {
    /// Whether `(i,j)` names a basis vector of this family.
    pub fn admits(self, i: u32, j: u32) -> bool {
        if i == 0 || j == 0 {
            return false;
        }
        match self {
            Family::GeneralHS => true,
            Family::OrthogonalHS | Family::TriangularHS => i < j,
        }
    }

    /// Number of basis vectors with both indices `<= n`.
    pub fn dimension(self, n: u32) -> usize {
        let n = n as usize;
        match self {
            Family::GeneralHS => n * n,
            Family::OrthogonalHS | Family::TriangularHS => n * (n - 1) / 2,
        }
    }

    /// Short tag used by the CLI and in reports (`gl`, `so`, `tri`).
    pub fn tag(self) -> &'static str {
        match self {
            Family::GeneralHS => "gl",
            Family::OrthogonalHS => "so",
            Family::TriangularHS => "tri",
        }
    }

    pub fn from_tag(s: &str) -> Option<Family> {
        match s {
            "gl" | "general" => Some(Family::GeneralHS),
            "so" | "orthogonal" => Some(Family::OrthogonalHS),
            "tri" | "triangular" => Some(Family::TriangularHS),
            _ => None,
        }
    }
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.tag())
    }
}
