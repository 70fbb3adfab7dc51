use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bundles::{check_section, generic_splitting, Section, SplittingType};
use crate::error::{Error, Result};
use crate::exactmath::{BinaryForm, FieldMatrix, Fp, PrimeField};

use super::structure::check_global_generation;

/// An explicit coherent system `(E, V)` over F_q: a split bundle and a basis
/// of `V` given as sections.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SystemInstance {
    field: PrimeField,
    splitting: SplittingType,
    sections: Vec<Section>,
}

/// On-disk layout; coefficient lists are big-endian in `x`, `[]` is zero.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInstance {
    q: u32,
    splitting: Vec<i64>,
    sections: Vec<Vec<Vec<i64>>>,
}

impl SystemInstance {
    pub fn new(field: PrimeField, splitting: SplittingType, sections: Vec<Section>) -> Result<Self> {
        let sections: Vec<Section> = sections
            .into_iter()
            .map(|s| {
                s.into_iter()
                    .zip(splitting.degrees())
                    .map(|(f, &a)| if f.is_zero() { BinaryForm::zero(a) } else { f })
                    .collect::<Section>()
            })
            .collect();
        for (l, s) in sections.iter().enumerate() {
            if s.len() != splitting.rank() {
                return Err(Error::MalformedInstance(format!(
                    "section {l} has {} components, bundle rank is {}",
                    s.len(),
                    splitting.rank()
                )));
            }
            check_section(&splitting, s).map_err(|e| Error::MalformedInstance(format!("section {l}: {e}")))?;
        }
        let inst = SystemInstance { field, splitting, sections };
        if inst.k() > inst.splitting.sections() {
            return Err(Error::MalformedInstance(format!(
                "{} sections but h^0(E) = {}",
                inst.k(),
                inst.splitting.sections()
            )));
        }
        if inst.coordinates().rank(&field) != inst.k() {
            return Err(Error::MalformedInstance("sections are linearly dependent".into()));
        }
        Ok(inst)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: RawInstance = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let field = PrimeField::new(raw.q).map_err(|e| Error::MalformedInstance(e.to_string()))?;
        if raw.splitting.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::MalformedInstance("splitting degrees must be non-increasing".into()));
        }
        let splitting = SplittingType::new(raw.splitting);
        let mut sections = Vec::with_capacity(raw.sections.len());
        for (l, s) in raw.sections.iter().enumerate() {
            if s.len() != splitting.rank() {
                return Err(Error::MalformedInstance(format!(
                    "section {l} has {} components, bundle rank is {}",
                    s.len(),
                    splitting.rank()
                )));
            }
            let mut comps = Vec::with_capacity(s.len());
            for (i, (coeffs, &a)) in s.iter().zip(splitting.degrees()).enumerate() {
                if coeffs.is_empty() {
                    comps.push(BinaryForm::zero(a));
                } else if coeffs.len() as i64 != a + 1 {
                    return Err(Error::MalformedInstance(format!(
                        "section {l} component {i} has {} coefficients, O({a}) needs {}",
                        coeffs.len(),
                        (a + 1).max(0)
                    )));
                } else {
                    comps.push(BinaryForm::from_ints(&field, coeffs));
                }
            }
            sections.push(comps);
        }
        Self::new(field, splitting, sections)
    }

    pub fn to_json(&self) -> String {
        let raw = RawInstance {
            q: self.field.q(),
            splitting: self.splitting.degrees().to_vec(),
            sections: self
                .sections
                .iter()
                .map(|s| {
                    s.iter()
                        .map(|f| if f.is_zero() { Vec::new() } else { f.coeffs().iter().map(|c| c.0 as i64).collect() })
                        .collect()
                })
                .collect(),
        };
        serde_json::to_string(&raw).expect("instance serializes")
    }

    pub fn field(&self) -> &PrimeField {
        &self.field
    }

    pub fn q(&self) -> u32 {
        self.field.q()
    }

    pub fn splitting(&self) -> &SplittingType {
        &self.splitting
    }

    pub fn sections(&self) -> &[Section] {
        &self.sections
    }

    pub fn n(&self) -> usize {
        self.splitting.rank()
    }

    pub fn d(&self) -> i64 {
        self.splitting.degree()
    }

    pub fn k(&self) -> usize {
        self.sections.len()
    }

    /// `k x h^0(E)` matrix of section coordinates in the monomial basis.
    pub fn coordinates(&self) -> FieldMatrix {
        let rows: Vec<Vec<Fp>> = self.sections.iter().map(|s| section_coordinates(&self.splitting, s)).collect();
        FieldMatrix::from_fp_rows(&rows, self.splitting.sections())
    }

    /// The section `sum_j c_j s_j`.
    pub fn combine(&self, coeffs: &[Fp]) -> Section {
        let f = &self.field;
        (0..self.n())
            .map(|i| {
                let a = self.splitting.degrees()[i];
                let mut acc = BinaryForm::zero(a);
                for (c, s) in coeffs.iter().zip(&self.sections) {
                    if !c.is_zero() && !s[i].is_zero() {
                        acc = acc.add(&s[i].scale(*c, f), f);
                    }
                }
                acc
            })
            .collect()
    }
}

fn section_coordinates(e: &SplittingType, s: &Section) -> Vec<Fp> {
    let mut out = Vec::with_capacity(e.sections());
    for (f, &a) in s.iter().zip(e.degrees()) {
        if a < 0 {
            continue;
        }
        if f.is_zero() {
            out.extend(std::iter::repeat_n(Fp::ZERO, a as usize + 1));
        } else {
            out.extend_from_slice(f.coeffs());
        }
    }
    out
}

const MAX_DRAWS: usize = 10_000;

fn draw(e: &SplittingType, k: usize, field: &PrimeField, rng: &mut ChaCha8Rng) -> Result<SystemInstance> {
    for _ in 0..MAX_DRAWS {
        let sections: Vec<Section> =
            (0..k).map(|_| e.degrees().iter().map(|&a| BinaryForm::random(a, field, rng)).collect()).collect();
        match SystemInstance::new(*field, e.clone(), sections) {
            Ok(inst) => return Ok(inst),
            Err(Error::MalformedInstance(_)) => continue,
            Err(other) => return Err(other),
        }
    }
    Err(Error::Internal(format!("no independent sections after {MAX_DRAWS} draws")))
}

fn checked_type(n: usize, d: i64, k: usize) -> Result<SplittingType> {
    if n == 0 {
        return Err(Error::InvalidInput("rank must be positive".into()));
    }
    let e = generic_splitting(n, d);
    if k > e.sections() {
        return Err(Error::InvalidInput(format!("k = {k} exceeds h^0(E) = {} for E = O{e}", e.sections())));
    }
    Ok(e)
}

/// A random system with `E` of generic splitting type and `V` spanned by
/// `k` uniformly drawn sections (redrawn until independent).
pub fn sample_instance(n: usize, d: i64, k: usize, q: u32, seed: u64) -> Result<SystemInstance> {
    let field = PrimeField::new(q)?;
    let e = checked_type(n, d, k)?;
    draw(&e, k, &field, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// Like [`sample_instance`], redrawn until `V` generates `E`.
pub fn sample_generating_instance(n: usize, d: i64, k: usize, q: u32, seed: u64) -> Result<SystemInstance> {
    let field = PrimeField::new(q)?;
    let e = checked_type(n, d, k)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MAX_DRAWS {
        let inst = draw(&e, k, &field, &mut rng)?;
        if check_global_generation(&inst)? {
            return Ok(inst);
        }
    }
    Err(Error::InvalidInput(format!("no generating system found for n = {n}, d = {d}, k = {k} at q = {q}")))
}
