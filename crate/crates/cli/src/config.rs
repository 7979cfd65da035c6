//! JSON scenario configs. Parsing and validation failures are
//! [`ConfigError`]s, which the binary maps to exit code 2.

use std::path::Path;

use ptower_core::arith::{NumberFieldData, SplitGroupData};
use ptower_core::groups::ClassicalFamily;
use ptower_core::linalg::is_prime;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Parse {
        path: String,
        source: serde_json::Error,
    },
    #[error("invalid config: {0}")]
    Invalid(String),
}

/// One scenario, discriminated by `kind`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ScenarioConfig {
    FiniteGroup {
        label: Option<String>,
        group: GroupSpec,
        action: ActionSpec,
        /// Coefficient prime for the fixed-point inequalities.
        ell: Option<u64>,
        #[serde(default)]
        expected: Expected,
    },
    Lattice {
        label: Option<String>,
        matrix: Vec<Vec<i64>>,
        /// Order of the action; the minimal order up to 24 when omitted.
        order: Option<u64>,
        /// Tower prime for `Γ_n = p^{n−1} Z^d`.
        p: Option<u64>,
        ell: Option<u64>,
        #[serde(default = "default_depth")]
        depth: u32,
        #[serde(default)]
        expected: Expected,
    },
    Exponent {
        #[serde(default)]
        rows: Vec<ExponentRow>,
    },
    LieAlgebra {
        label: Option<String>,
        algebra: AlgebraSpec,
        /// `Ad(g)` for an integer matrix `g`.
        adjoint: Option<Vec<Vec<i64>>>,
        #[serde(default = "default_max_order")]
        max_order: u32,
        #[serde(default)]
        expected: Expected,
    },
}

fn default_depth() -> u32 {
    3
}

fn default_max_order() -> u32 {
    12
}

/// Finite `p`-groups given by a construction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case", deny_unknown_fields)]
pub enum GroupSpec {
    /// `Z/m_1 × … × Z/m_r`, every `m_i` a power of the same prime.
    Abelian { moduli: Vec<u64> },
    /// Level-`level` kernel of `family_n(Z/p^k)`.
    CongruenceKernel {
        family: ClassicalFamily,
        n: usize,
        p: u64,
        k: u32,
        level: u32,
    },
    /// Subgroup of `GL_n(Z/p^k)` generated by the given matrices.
    MatrixGenerators {
        p: u64,
        k: u32,
        generators: Vec<Vec<Vec<i64>>>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ActionSpec {
    Trivial {
        order: u64,
    },
    /// `x ↦ −x` on an abelian group.
    Inversion,
    /// An integer matrix acting on the coordinates of an abelian group.
    Linear {
        matrix: Vec<Vec<i64>>,
        order: u64,
    },
    /// `g ↦ (gᵀ)⁻¹` on a matrix group.
    TransposeInverse,
    /// `g ↦ c g c⁻¹` on a matrix group.
    Conjugation {
        matrix: Vec<Vec<i64>>,
        order: u64,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct AlgebraSpec {
    pub family: AlgebraFamily,
    pub n: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AlgebraFamily {
    Sl,
    So,
    Sp,
    Su,
}

/// Values to compare against; absent fields are not checked.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expected {
    pub h1_classes: Option<u64>,
    pub series_orders: Option<Vec<usize>>,
    /// `[n₊, n₋]` of the Killing form.
    pub signature: Option<[usize; 2]>,
    pub q: Option<u32>,
    pub fixed_dim: Option<usize>,
    /// Whether `P_i(G^Θ) = P_i(G)^Θ` for all `i`.
    pub fixed_series_match: Option<bool>,
}

/// A named split group or explicit data.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase", deny_unknown_fields)]
pub enum GroupRef {
    Sl {
        n: u32,
    },
    /// `Sp_{2n}`.
    Sp {
        n: u32,
    },
    So {
        n: u32,
    },
    Custom {
        label: String,
        rank: u32,
        dim: u32,
        compact_dim: u32,
        has_ds: bool,
    },
}

impl GroupRef {
    pub fn resolve(&self) -> Result<SplitGroupData, ptower_core::arith::ArithError> {
        match self {
            GroupRef::Sl { n } => SplitGroupData::sl(*n),
            GroupRef::Sp { n } => SplitGroupData::sp(*n),
            GroupRef::So { n } => SplitGroupData::so(*n),
            GroupRef::Custom {
                label,
                rank,
                dim,
                compact_dim,
                has_ds,
            } => SplitGroupData::custom(label, *rank, *dim, *compact_dim, *has_ds),
        }
    }
}

/// One exponent computation. Rationals are strings such as `"1/2"`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ExponentRow {
    Theorem1 {
        dim_fixed: u32,
        lambda: u32,
        dim_g: u32,
        alpha: String,
        expected: Option<String>,
    },
    Basechange {
        group: GroupRef,
        field: NumberFieldData,
        extension_degree: u64,
        expected: Option<String>,
    },
    Sl2n {
        n: u32,
        m: u32,
        base: NumberFieldData,
        ext: NumberFieldData,
        expected: Option<String>,
    },
    Split {
        group: GroupRef,
        field: NumberFieldData,
        places: u32,
        ell: u64,
        expected: Option<String>,
    },
}

fn check_square(what: &str, m: &[Vec<i64>]) -> Result<(), ConfigError> {
    if m.is_empty() || m.iter().any(|r| r.len() != m.len()) {
        return Err(ConfigError::Invalid(format!(
            "{what} must be a non-empty square matrix"
        )));
    }
    Ok(())
}

fn check_prime(what: &str, p: u64) -> Result<(), ConfigError> {
    if !is_prime(p) {
        return Err(ConfigError::Invalid(format!("{what} = {p} is not prime")));
    }
    Ok(())
}

fn check_ell(p: Option<u64>, ell: Option<u64>) -> Result<(), ConfigError> {
    if let Some(l) = ell {
        check_prime("ell", l)?;
        if p == Some(l) {
            return Err(ConfigError::Invalid(format!(
                "ell must differ from p = {l}"
            )));
        }
    }
    Ok(())
}

impl GroupSpec {
    /// The prime of the group, when the construction names one.
    pub fn prime(&self) -> Option<u64> {
        match self {
            GroupSpec::Abelian { moduli } => moduli
                .first()
                .and_then(|&m| ptower_core::linalg::prime_of_prime_power(m)),
            GroupSpec::CongruenceKernel { p, .. } | GroupSpec::MatrixGenerators { p, .. } => {
                Some(*p)
            }
        }
    }

    fn validate(&self) -> Result<(), ConfigError> {
        match self {
            GroupSpec::Abelian { moduli } => {
                let p = self.prime();
                let same = moduli
                    .iter()
                    .all(|&m| m > 1 && ptower_core::linalg::prime_of_prime_power(m) == p);
                if moduli.is_empty() || p.is_none() || !same {
                    return Err(ConfigError::Invalid(
                        "abelian moduli must be powers of one prime".into(),
                    ));
                }
            }
            GroupSpec::CongruenceKernel { p, k, level, n, .. } => {
                check_prime("p", *p)?;
                if *level == 0 || *level > *k || *n == 0 {
                    return Err(ConfigError::Invalid(format!(
                        "need n ≥ 1 and 1 ≤ level ≤ k, got n = {n}, level = {level}, k = {k}"
                    )));
                }
            }
            GroupSpec::MatrixGenerators { p, generators, .. } => {
                check_prime("p", *p)?;
                let n = generators.first().map(Vec::len);
                for g in generators {
                    check_square("generator", g)?;
                    if Some(g.len()) != n {
                        return Err(ConfigError::Invalid(
                            "generators have different sizes".into(),
                        ));
                    }
                }
            }
        }
        Ok(())
    }
}

impl ActionSpec {
    fn validate(&self) -> Result<(), ConfigError> {
        match self {
            ActionSpec::Linear { matrix, order } | ActionSpec::Conjugation { matrix, order } => {
                check_square("action matrix", matrix)?;
                if *order == 0 {
                    return Err(ConfigError::Invalid("action order must be positive".into()));
                }
            }
            ActionSpec::Trivial { order } if *order == 0 => {
                return Err(ConfigError::Invalid("action order must be positive".into()));
            }
            _ => {}
        }
        Ok(())
    }
}

impl ScenarioConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        match self {
            ScenarioConfig::FiniteGroup {
                group, action, ell, ..
            } => {
                group.validate()?;
                action.validate()?;
                check_ell(group.prime(), *ell)
            }
            ScenarioConfig::Lattice {
                matrix,
                order,
                p,
                ell,
                depth,
                ..
            } => {
                check_square("lattice matrix", matrix)?;
                if *order == Some(0) {
                    return Err(ConfigError::Invalid("action order must be positive".into()));
                }
                if let Some(p) = p {
                    check_prime("p", *p)?;
                }
                if *depth == 0 {
                    return Err(ConfigError::Invalid("depth must be at least 1".into()));
                }
                check_ell(*p, *ell)
            }
            ScenarioConfig::Exponent { .. } => Ok(()),
            ScenarioConfig::LieAlgebra { adjoint, .. } => adjoint
                .as_deref()
                .map_or(Ok(()), |m| check_square("adjoint", m)),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            ScenarioConfig::FiniteGroup { .. } => "finite-group",
            ScenarioConfig::Lattice { .. } => "lattice",
            ScenarioConfig::Exponent { .. } => "exponent",
            ScenarioConfig::LieAlgebra { .. } => "lie-algebra",
        }
    }
}

/// Parses and validates a config from a JSON string.
pub fn parse(text: &str, origin: &str) -> Result<ScenarioConfig, ConfigError> {
    let cfg: ScenarioConfig = serde_json::from_str(text).map_err(|source| ConfigError::Parse {
        path: origin.into(),
        source,
    })?;
    cfg.validate()?;
    Ok(cfg)
}

pub fn load(path: &Path) -> Result<ScenarioConfig, ConfigError> {
    let origin = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: origin.clone(),
        source,
    })?;
    parse(&text, &origin)
}
