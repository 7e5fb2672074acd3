//! Scenario files: JSON descriptions of an algebra, a state, an optional
//! subalgebra embedding and run options, consumed by the CLI and the C API.
//!
//! ```json
//! {
//!   "algebra": { "blocks": [4] },
//!   "state": { "psi_lambda": 0.3 },
//!   "embedding": "left_factor",
//!   "options": { "seed": 0, "tol": 1e-10, "samples": 100 }
//! }
//! ```
//!
//! A state is one of `{"weights": [matrix, …]}` (one matrix per block),
//! `{"vector": [[re,im], …]}` (optionally with `"dims": [nA, nB]` to mark a
//! bipartite split), or the shortcut `{"psi_lambda": λ}`. Matrices are lists
//! of rows of `[re, im]` pairs. An embedding is either the string
//! `"left_factor"` (the A-factor embedding α ↦ α⊗1, dims taken from the
//! bipartite state) or an explicit `{"source", "target", "images"}` object
//! with one image element per source matrix unit in (block, row, col)
//! row-major order; explicit embeddings are checked for the unital
//! *-homomorphism axioms at load time.

use std::path::Path;

use serde::Deserialize;

use crate::algebra::{AlgebraElement, BlockSpec, Embedding, embed_left_factor};
use crate::decomposition::{self, DensityOperator};
use crate::entropy;
use crate::error::{Error, Result};
use crate::gns::GnsData;
use crate::modular::{self, GaugeReport};
use crate::states::{BipartiteVector, Factor, State, partial_trace};
use crate::{C64, CMatrix, CVector};

/// Run options with their defaults.
#[derive(Debug, Clone, Copy)]
pub struct ScenarioOptions {
    /// Seed for decompositions and scans.
    pub seed: u64,
    /// Relative null-space cutoff for the GNS construction.
    pub tol: f64,
    /// Sample count for scans and random pairing checks.
    pub samples: usize,
}

impl Default for ScenarioOptions {
    fn default() -> Self {
        Self { seed: 0, tol: 1e-10, samples: 100 }
    }
}

/// A validated scenario: everything resolves and the state lives on the
/// declared algebra.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub algebra: BlockSpec,
    pub state: State,
    /// Present when the state was given as a bipartite vector (or ψ_λ).
    pub bipartite: Option<BipartiteVector>,
    pub embedding: Option<Embedding>,
    pub options: ScenarioOptions,
}

#[derive(Deserialize)]
struct ScenarioFile {
    algebra: AlgebraDto,
    state: StateDto,
    #[serde(default)]
    embedding: Option<EmbeddingDto>,
    #[serde(default)]
    options: Option<OptionsDto>,
}

#[derive(Deserialize)]
struct AlgebraDto {
    blocks: Vec<usize>,
}

#[derive(Deserialize)]
struct StateDto {
    #[serde(default)]
    psi_lambda: Option<f64>,
    #[serde(default)]
    vector: Option<Vec<[f64; 2]>>,
    #[serde(default)]
    dims: Option<[usize; 2]>,
    #[serde(default)]
    weights: Option<Vec<MatrixDto>>,
}

type MatrixDto = Vec<Vec<[f64; 2]>>;

#[derive(Deserialize)]
#[serde(untagged)]
enum EmbeddingDto {
    Shortcut(String),
    Explicit { source: AlgebraDto, target: AlgebraDto, images: Vec<Vec<MatrixDto>> },
}

#[derive(Deserialize)]
struct OptionsDto {
    #[serde(default)]
    seed: Option<u64>,
    #[serde(default)]
    tol: Option<f64>,
    #[serde(default)]
    samples: Option<usize>,
}

fn matrix_from_dto(dto: &MatrixDto) -> Result<CMatrix> {
    let rows = dto.len();
    if rows == 0 || dto.iter().any(|r| r.len() != dto[0].len()) {
        return Err(Error::Scenario("matrix rows are empty or ragged".into()));
    }
    let cols = dto[0].len();
    Ok(CMatrix::from_fn(rows, cols, |i, j| C64::new(dto[i][j][0], dto[i][j][1])))
}

fn element_from_dto(spec: &BlockSpec, dto: &[MatrixDto]) -> Result<AlgebraElement> {
    let blocks = dto.iter().map(matrix_from_dto).collect::<Result<Vec<_>>>()?;
    AlgebraElement::new(spec.clone(), blocks)
}

/// Parses and validates a scenario from its JSON text.
pub fn parse_scenario(json: &str) -> Result<Scenario> {
    let file: ScenarioFile = serde_json::from_str(json)?;
    let algebra = BlockSpec::new(file.algebra.blocks)?;

    let mut bipartite = None;
    let picks = [
        file.state.psi_lambda.is_some(),
        file.state.vector.is_some(),
        file.state.weights.is_some(),
    ];
    if picks.iter().filter(|p| **p).count() != 1 {
        return Err(Error::Scenario(
            "state must set exactly one of psi_lambda, vector, weights".into(),
        ));
    }
    let state = if let Some(lambda) = file.state.psi_lambda {
        let psi = BipartiteVector::psi_lambda(lambda)?;
        let state = State::vector_state(psi.amplitudes(), &algebra)?;
        bipartite = Some(psi);
        state
    } else if let Some(vector) = &file.state.vector {
        let v = CVector::from_iterator(vector.len(), vector.iter().map(|p| C64::new(p[0], p[1])));
        if let Some([na, nb]) = file.state.dims {
            bipartite = Some(BipartiteVector::new((na, nb), v.clone())?);
        }
        State::vector_state(&v, &algebra)?
    } else {
        let weights = file
            .state
            .weights
            .as_ref()
            .expect("picked above")
            .iter()
            .map(matrix_from_dto)
            .collect::<Result<Vec<_>>>()?;
        State::new(algebra.clone(), weights)?
    };

    let embedding = match file.embedding {
        None => None,
        Some(EmbeddingDto::Shortcut(name)) if name == "left_factor" => {
            let psi = bipartite.as_ref().ok_or_else(|| {
                Error::Scenario(
                    "embedding \"left_factor\" needs a bipartite vector state (psi_lambda, or vector with dims)".into(),
                )
            })?;
            let (na, nb) = psi.dims();
            let emb = embed_left_factor(&BlockSpec::new(vec![na])?, &BlockSpec::new(vec![nb])?)?;
            if emb.target() != &algebra {
                return Err(Error::Scenario(format!(
                    "left_factor target M_{} does not match the algebra",
                    na * nb
                )));
            }
            Some(emb)
        }
        Some(EmbeddingDto::Shortcut(name)) => {
            return Err(Error::Scenario(format!("unknown embedding shortcut {name:?}")));
        }
        Some(EmbeddingDto::Explicit { source, target, images }) => {
            let source = BlockSpec::new(source.blocks)?;
            let target = BlockSpec::new(target.blocks)?;
            if target != algebra {
                return Err(Error::Scenario(
                    "embedding target does not match the algebra".into(),
                ));
            }
            let images = images
                .iter()
                .map(|dto| element_from_dto(&target, dto))
                .collect::<Result<Vec<_>>>()?;
            let emb = Embedding::new(source, target, images)?;
            let violations = emb.check();
            if !violations.is_empty() {
                return Err(Error::InvalidEmbedding(
                    violations.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "),
                ));
            }
            Some(emb)
        }
    };

    let mut options = ScenarioOptions::default();
    if let Some(dto) = file.options {
        if let Some(seed) = dto.seed {
            options.seed = seed;
        }
        if let Some(tol) = dto.tol {
            options.tol = tol;
        }
        if let Some(samples) = dto.samples {
            options.samples = samples;
        }
    }

    Ok(Scenario { algebra, state, bipartite, embedding, options })
}

/// Reads and validates a scenario file.
pub fn load_scenario<P: AsRef<Path>>(path: P) -> Result<Scenario> {
    parse_scenario(&std::fs::read_to_string(path)?)
}

impl Scenario {
    /// The state the pipelines operate on: the restriction along the
    /// embedding when one is present, the declared state otherwise.
    pub fn effective_state(&self) -> Result<State> {
        match &self.embedding {
            Some(emb) => self.state.restrict(emb),
            None => Ok(self.state.clone()),
        }
    }

    /// GNS construction of the effective state at the scenario's cutoff.
    pub fn build_gns(&self) -> Result<GnsData> {
        GnsData::build(&self.effective_state()?, self.options.tol)
    }

    /// Density operator of the effective state extracted with the
    /// deterministic natural projector family, plus its spectrum and
    /// entropy in nats.
    pub fn entropy_pipeline(&self) -> Result<(GnsData, DensityOperator, Vec<f64>, f64)> {
        let gns = self.build_gns()?;
        let family = decomposition::natural_projectors(&gns)?;
        let rho = decomposition::density_from_projectors(&gns, &family)?;
        let spectrum = entropy::spectrum(&rho)?;
        let nats = entropy::entropy_of_spectrum(spectrum.eigenvalues());
        Ok((gns, rho, spectrum.eigenvalues().to_vec(), nats))
    }

    /// Max deviation between the restricted state and the partial trace on
    /// the embedding source, over all source matrix units.
    pub fn compare_deviation(&self) -> Result<f64> {
        let psi = self.bipartite.as_ref().ok_or_else(|| {
            Error::Scenario("compare needs a bipartite vector state".into())
        })?;
        let emb = self.embedding.as_ref().ok_or_else(|| {
            Error::Scenario("compare needs an embedding".into())
        })?;
        let (na, _) = psi.dims();
        if emb.source().blocks() != [na] {
            return Err(Error::Scenario(format!(
                "compare needs an embedding of the A factor M_{na}"
            )));
        }
        let restricted = self.state.restrict(emb)?;
        let rho_a = partial_trace(&psi.density(), psi.dims(), Factor::A)?;
        let mut worst: f64 = 0.0;
        for (_, i, j) in emb.source().units() {
            let alpha = AlgebraElement::matrix_unit(emb.source(), 0, i, j)?;
            let lhs = restricted.evaluate(&alpha)?;
            let rhs = (&rho_a * alpha.block(0)).trace();
            worst = worst.max((lhs - rhs).norm());
        }
        Ok(worst)
    }

    /// Gauge-entropy scan of the effective state (which must be faithful and
    /// single-block).
    pub fn scan_gauge(&self, samples: usize, seed: u64, refine: bool) -> Result<GaugeReport> {
        let gns = self.build_gns()?;
        let m = modular::tomita_modular(&gns)?;
        modular::entropy_scan(&gns, &m, samples, seed, refine)
    }
}
