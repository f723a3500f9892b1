use latticetri_core::diagonal::{
    atomic_diagonal, diagonal_band_projection_check, schep_oracle, voigt_contraction_check,
    VoigtCheck,
};
use latticetri_core::exact::{char_poly, spectral_radius_estimate, SpectralRadiusEstimate};
use latticetri_core::idempotent::{
    decompose_idempotent, rank_one_irreducibility, triangularizable_idempotent_check,
    verify_idempotent, IdempotentDecomposition,
};
use latticetri_core::lattice::{reducibility_witnesses, Reducibility};
use latticetri_core::triangular::{criteria_equivalence, CriteriaReport};
use latticetri_core::{CharPoly, Matrix, Result};
use serde::Serialize;
use serde_json::Value;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Serialize)]
pub struct DiagonalReport {
    pub atomic_diagonal: Matrix,
    pub voigt: VoigtCheck,
    pub band_projection: bool,
    pub trace_preserved: bool,
}

#[derive(Serialize)]
pub struct SchepReport {
    pub diag: Matrix,
    pub schep: Matrix,
    pub equal: bool,
}

#[derive(Serialize)]
pub struct PartVerdict {
    pub members: Vec<usize>,
    pub irreducible: bool,
}

#[derive(Serialize)]
pub struct IdempotentReport {
    pub is_idempotent: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decomposition: Option<IdempotentDecomposition>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub part_verdicts: Vec<PartVerdict>,
    /// `Some(q == I)` for triangularizable idempotents, `null` when not applicable.
    pub triangularizable_q_is_identity: Option<bool>,
}

#[derive(Serialize)]
pub struct AnalysisReport {
    pub tool_version: &'static str,
    pub input: Matrix,
    pub provenance: Option<Value>,
    pub criteria: CriteriaReport,
    pub char_poly: CharPoly,
    pub diagonal_char_poly: CharPoly,
    pub reducibility: Reducibility,
    pub diagonal: DiagonalReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub schep: Option<SchepReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub idempotent: Option<IdempotentReport>,
    pub spectral_radius: SpectralRadiusEstimate,
}

pub fn schep_report(m: &Matrix) -> Result<SchepReport> {
    let schep = schep_oracle(m)?;
    let diag = atomic_diagonal(m);
    let equal = schep == diag;
    Ok(SchepReport { diag, schep, equal })
}

pub fn idempotent_report(m: &Matrix) -> Result<IdempotentReport> {
    if !verify_idempotent(m) {
        return Ok(IdempotentReport {
            is_idempotent: false,
            decomposition: None,
            part_verdicts: Vec::new(),
            triangularizable_q_is_identity: None,
        });
    }
    let decomposition = decompose_idempotent(m)?;
    let part_verdicts = decomposition
        .rank_one_parts
        .iter()
        .map(|p| {
            Ok(PartVerdict {
                members: p.ideal.to_vec(),
                irreducible: rank_one_irreducibility(&p.x, &p.phi)?,
            })
        })
        .collect::<Result<_>>()?;
    Ok(IdempotentReport {
        is_idempotent: true,
        decomposition: Some(decomposition),
        part_verdicts,
        triangularizable_q_is_identity: triangularizable_idempotent_check(m)?,
    })
}

pub fn analyze(
    m: Matrix,
    provenance: Option<Value>,
    oracle: bool,
    idempotent: bool,
) -> Result<AnalysisReport> {
    let criteria = criteria_equivalence(&m)?;
    let d = atomic_diagonal(&m);
    let diagonal = DiagonalReport {
        voigt: voigt_contraction_check(&m),
        band_projection: diagonal_band_projection_check(&m),
        trace_preserved: d.trace() == m.trace(),
        atomic_diagonal: d,
    };
    Ok(AnalysisReport {
        tool_version: TOOL_VERSION,
        provenance,
        char_poly: char_poly(&m),
        diagonal_char_poly: CharPoly::from_roots(&m.diagonal_entries()),
        reducibility: reducibility_witnesses(std::slice::from_ref(&m))?,
        diagonal,
        schep: if oracle {
            Some(schep_report(&m)?)
        } else {
            None
        },
        idempotent: if idempotent {
            Some(idempotent_report(&m)?)
        } else {
            None
        },
        spectral_radius: spectral_radius_estimate(&m),
        criteria,
        input: m,
    })
}
