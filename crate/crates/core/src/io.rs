//! JSON file formats.
//!
//! Scalars are `[re, im]` pairs, qubits are pairs of scalars, and 2×2
//! matrices are nested row-major arrays of scalars. Site maps use the site
//! index as the object key.
//!
//! ```text
//! family   { "tail": qubit, "overrides": { "3": qubit } }
//! state    { "family": family, "terms": [ { "flips": [1, 4], "coeff": [re, im] } ] }
//! algebra  { "terms": [ { "coeff": [re, im], "factors": { "2": "X", "5": [[..],[..]] } } ] }
//! point    { "baseline": "ones", "flips": [2] }
//! conv     { "entries": [ { "point": point, "group": [1, 3], "value": [re, im] } ] }
//! group    { "entries": [ { "group": [1, 3], "value": [re, im] } ] }
//! section  { "family": family, "values": [ { "point": point, "state": { "terms": [..] } } ] }
//! ```

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::sync::Arc;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::bundle::Section;
use crate::convolution::{ConvFunction, GroupAlgebraElement};
use crate::flips::{FlipSet, SiteId};
use crate::groupoid::{GroupElement, GroupoidElement, Point};
use crate::site::{LocalOperator, PauliLetter, QubitVector};
use crate::strings::AlgebraElement;
use crate::theta::{SparseState, ThetaFamily};
use crate::{Complex, Error, Result};

pub type WireComplex = [f64; 2];
pub type WireQubit = [WireComplex; 2];
pub type WireMatrix = [[WireComplex; 2]; 2];

fn complex_from(w: WireComplex, what: &'static str) -> Result<Complex> {
    if !(w[0].is_finite() && w[1].is_finite()) {
        return Err(Error::NonFinite(what));
    }
    Ok(Complex::new(w[0], w[1]))
}

fn complex_to(z: Complex) -> WireComplex {
    [z.re, z.im]
}

fn qubit_from(w: WireQubit) -> Result<QubitVector> {
    Ok(QubitVector::new(complex_from(w[0], "qubit")?, complex_from(w[1], "qubit")?))
}

fn qubit_to(q: &QubitVector) -> WireQubit {
    [complex_to(q.c1), complex_to(q.c2)]
}

fn matrix_from(w: WireMatrix) -> Result<LocalOperator> {
    let mut out = LocalOperator::zero();
    for (dst, src) in out.0.iter_mut().flatten().zip(w.iter().flatten()) {
        *dst = complex_from(*src, "matrix")?;
    }
    Ok(out)
}

fn matrix_to(m: &LocalOperator) -> WireMatrix {
    m.0.map(|row| row.map(complex_to))
}

fn parse_site(key: &str) -> Result<SiteId> {
    key.parse::<u32>()
        .map(SiteId)
        .map_err(|_| Error::Invalid(format!("site key `{key}` is not a non-negative integer")))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyFile {
    pub tail: WireQubit,
    #[serde(default)]
    pub overrides: BTreeMap<String, WireQubit>,
}

impl FamilyFile {
    pub fn from_family(f: &ThetaFamily) -> Self {
        FamilyFile {
            tail: qubit_to(&f.tail()),
            overrides: f.overrides().map(|(s, q)| (s.to_string(), qubit_to(&q))).collect(),
        }
    }

    pub fn to_family(&self) -> Result<ThetaFamily> {
        let overrides = self
            .overrides
            .iter()
            .map(|(k, q)| Ok((parse_site(k)?, qubit_from(*q)?)))
            .collect::<Result<Vec<_>>>()?;
        ThetaFamily::new(qubit_from(self.tail)?, overrides)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateTerm {
    pub flips: FlipSet,
    pub coeff: WireComplex,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StateTerms {
    pub terms: Vec<StateTerm>,
}

impl StateTerms {
    pub fn from_state(u: &SparseState) -> Self {
        StateTerms {
            terms: u
                .terms()
                .map(|(f, c)| StateTerm {
                    flips: f.clone(),
                    coeff: complex_to(c),
                })
                .collect(),
        }
    }

    pub fn to_state(&self, family: &Arc<ThetaFamily>) -> Result<SparseState> {
        let terms = self
            .terms
            .iter()
            .map(|t| Ok((t.flips.clone(), complex_from(t.coeff, "state coefficient")?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(SparseState::from_terms(family.clone(), terms))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    pub family: FamilyFile,
    pub terms: Vec<StateTerm>,
}

impl StateFile {
    pub fn from_state(u: &SparseState) -> Self {
        StateFile {
            family: FamilyFile::from_family(u.family()),
            terms: StateTerms::from_state(u).terms,
        }
    }

    pub fn to_state(&self) -> Result<SparseState> {
        let family = Arc::new(self.family.to_family()?);
        StateTerms {
            terms: self.terms.clone(),
        }
        .to_state(&family)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum WireFactor {
    Letter(String),
    Matrix(WireMatrix),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraTerm {
    pub coeff: WireComplex,
    pub factors: BTreeMap<String, WireFactor>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraFile {
    pub terms: Vec<AlgebraTerm>,
}

impl AlgebraFile {
    /// Factors that are multiples of a Pauli matrix are written as letters,
    /// the multiple moving into the coefficient.
    pub fn from_element(a: &AlgebraElement) -> Self {
        let terms = a
            .terms()
            .map(|(string, mut coeff)| {
                let mut factors = BTreeMap::new();
                for (site, op) in string.factors() {
                    let factor = match pauli_multiple(op) {
                        Some((letter, mu)) => {
                            coeff *= mu;
                            WireFactor::Letter(letter.as_str().to_string())
                        }
                        None => WireFactor::Matrix(matrix_to(op)),
                    };
                    factors.insert(site.to_string(), factor);
                }
                AlgebraTerm {
                    coeff: complex_to(coeff),
                    factors,
                }
            })
            .collect();
        AlgebraFile { terms }
    }

    pub fn to_element(&self) -> Result<AlgebraElement> {
        let mut out = AlgebraElement::zero();
        for term in &self.terms {
            let factors = term
                .factors
                .iter()
                .map(|(k, f)| {
                    let op = match f {
                        WireFactor::Letter(l) => PauliLetter::parse(l)
                            .ok_or_else(|| Error::Invalid(format!("unknown Pauli letter `{l}`")))?
                            .matrix(),
                        WireFactor::Matrix(m) => matrix_from(*m)?,
                    };
                    Ok((parse_site(k)?, op))
                })
                .collect::<Result<Vec<_>>>()?;
            out = &out + &AlgebraElement::elementary(complex_from(term.coeff, "algebra coefficient")?, factors);
        }
        Ok(out)
    }
}

fn pauli_multiple(op: &LocalOperator) -> Option<(PauliLetter, Complex)> {
    [PauliLetter::X, PauliLetter::Y, PauliLetter::Z].into_iter().find_map(|l| {
        let p = l.matrix();
        // Pauli matrices are unitary and Hermitian: μ = tr(σ a) / 2
        let mu = p.mul2(op).trace() * 0.5;
        (p.scale(mu).max_abs_diff(op) < 1e-14).then_some((l, mu))
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointWire {
    pub baseline: String,
    #[serde(default)]
    pub flips: FlipSet,
}

impl From<&Point> for PointWire {
    fn from(p: &Point) -> Self {
        PointWire {
            baseline: p.baseline.to_string(),
            flips: p.flips.clone(),
        }
    }
}

impl From<&PointWire> for Point {
    fn from(w: &PointWire) -> Self {
        Point::new(&w.baseline, w.flips.clone())
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConvEntry {
    pub point: PointWire,
    pub group: FlipSet,
    pub value: WireComplex,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConvFile {
    pub entries: Vec<ConvEntry>,
}

impl ConvFile {
    pub fn from_function(f: &ConvFunction) -> Self {
        ConvFile {
            entries: f
                .entries()
                .map(|(e, v)| ConvEntry {
                    point: (&e.point).into(),
                    group: e.group.support().clone(),
                    value: complex_to(v),
                })
                .collect(),
        }
    }

    pub fn to_function(&self) -> Result<ConvFunction> {
        let entries = self
            .entries
            .iter()
            .map(|e| {
                Ok((
                    GroupoidElement::new((&e.point).into(), GroupElement(e.group.clone())),
                    complex_from(e.value, "convolution value")?,
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ConvFunction::from_entries(entries))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupEntry {
    pub group: FlipSet,
    pub value: WireComplex,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupAlgebraFile {
    pub entries: Vec<GroupEntry>,
}

impl GroupAlgebraFile {
    pub fn from_element(u: &GroupAlgebraElement) -> Self {
        GroupAlgebraFile {
            entries: u
                .entries()
                .map(|(g, v)| GroupEntry {
                    group: g.support().clone(),
                    value: complex_to(v),
                })
                .collect(),
        }
    }

    pub fn to_element(&self) -> Result<GroupAlgebraElement> {
        let entries = self
            .entries
            .iter()
            .map(|e| Ok((GroupElement(e.group.clone()), complex_from(e.value, "group algebra value")?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(GroupAlgebraElement::from_entries(entries))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SectionValue {
    pub point: PointWire,
    pub state: StateTerms,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SectionFile {
    pub family: FamilyFile,
    pub values: Vec<SectionValue>,
}

impl SectionFile {
    pub fn from_section(s: &Section) -> Self {
        SectionFile {
            family: FamilyFile::from_family(s.family()),
            values: s
                .values()
                .map(|(p, v)| SectionValue {
                    point: p.into(),
                    state: StateTerms::from_state(v),
                })
                .collect(),
        }
    }

    pub fn to_section(&self) -> Result<Section> {
        let family = Arc::new(self.family.to_family()?);
        let values = self
            .values
            .iter()
            .map(|v| Ok(((&v.point).into(), v.state.to_state(&family)?)))
            .collect::<Result<Vec<_>>>()?;
        Section::from_values(family, values)
    }
}

pub fn read_json<T: DeserializeOwned>(path: impl AsRef<Path>) -> Result<T> {
    let text = fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

pub fn write_json<T: Serialize>(path: impl AsRef<Path>, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    fs::write(path, text + "\n")?;
    Ok(())
}
