//! JSON file formats for elements, matrices, states, qudits and two-party
//! tables. Canonical text is `serde_json` pretty output with a trailing
//! newline; terms are written in canonical monomial order.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::entangle::{MultiState, Qudit, TableKind, TwoPartyTable};
use crate::error::{Error, Result};
use crate::grassmann::{Complex, GrassmannElement, Monomial, Parity};
use crate::superstate::{SpaceFormat, SuperKet};
use crate::supermatrix::{SuperFormat, SuperMatrix};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermFile {
    pub gens: Vec<usize>,
    pub re: f64,
    pub im: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ElementFile {
    pub n: usize,
    pub terms: Vec<TermFile>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixFile {
    pub p: usize,
    pub q: usize,
    pub parity: u8,
    pub n: usize,
    pub entries: Vec<Vec<ElementFile>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    pub r: usize,
    pub s: usize,
    pub parity: u8,
    pub n: usize,
    pub even: Vec<ElementFile>,
    pub odd: Vec<ElementFile>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexFile {
    pub re: f64,
    pub im: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuditFile {
    pub amps: Vec<ComplexFile>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableFile {
    pub kind: String,
    pub n: usize,
    pub slots: BTreeMap<String, ElementFile>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MultiStateFile {
    pub parties: Vec<SpaceFormat>,
    pub n: usize,
    pub parity: u8,
    /// Labels are comma-separated basis indices, e.g. `"0,2"`.
    pub amps: BTreeMap<String, ElementFile>,
}

fn parity_from_bit(bit: u8) -> Result<Parity> {
    match bit {
        0 => Ok(Parity::Even),
        1 => Ok(Parity::Odd),
        other => Err(Error::Parse(format!("parity must be 0 or 1, got {other}"))),
    }
}

pub fn element_to_file(e: &GrassmannElement) -> ElementFile {
    ElementFile {
        n: e.n(),
        terms: e
            .terms()
            .map(|(m, c)| TermFile {
                gens: m.generators(),
                re: c.re,
                im: c.im,
            })
            .collect(),
    }
}

pub fn element_from_file(f: &ElementFile) -> Result<GrassmannElement> {
    let mut seen = std::collections::BTreeSet::new();
    let mut terms = Vec::with_capacity(f.terms.len());
    for t in &f.terms {
        let m = Monomial::from_generators(&t.gens, f.n)?;
        if !seen.insert(m) {
            return Err(Error::Parse(format!("monomial {:?} listed twice", t.gens)));
        }
        terms.push((m, Complex::new(t.re, t.im)));
    }
    GrassmannElement::from_terms(f.n, terms)
}

fn nested_element(f: &ElementFile, n: usize, what: &str) -> Result<GrassmannElement> {
    if f.n != n {
        return Err(Error::FormatMismatch(format!("{what} declares N = {} inside a file over N = {n}", f.n)));
    }
    element_from_file(f)
}

pub fn matrix_to_file(m: &SuperMatrix) -> MatrixFile {
    MatrixFile {
        p: m.format().p,
        q: m.format().q,
        parity: m.parity().bit(),
        n: m.n(),
        entries: m.rows().iter().map(|r| r.iter().map(element_to_file).collect()).collect(),
    }
}

pub fn matrix_from_file(f: &MatrixFile) -> Result<SuperMatrix> {
    let format = SuperFormat::new(f.p, f.q)?;
    let rows = f
        .entries
        .iter()
        .enumerate()
        .map(|(i, r)| {
            r.iter()
                .enumerate()
                .map(|(j, e)| nested_element(e, f.n, &format!("entry ({i}, {j})")))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    SuperMatrix::new(format, parity_from_bit(f.parity)?, f.n, rows)
}

pub fn state_to_file(k: &SuperKet) -> StateFile {
    StateFile {
        r: k.format().r,
        s: k.format().s,
        parity: k.parity().bit(),
        n: k.n(),
        even: k.even_coords().iter().map(element_to_file).collect(),
        odd: k.odd_coords().iter().map(element_to_file).collect(),
    }
}

pub fn state_from_file(f: &StateFile) -> Result<SuperKet> {
    let format = SpaceFormat::new(f.r, f.s)?;
    let list = |v: &[ElementFile], what: &str| {
        v.iter()
            .enumerate()
            .map(|(k, e)| nested_element(e, f.n, &format!("{what} coordinate {k}")))
            .collect::<Result<Vec<_>>>()
    };
    SuperKet::new(format, parity_from_bit(f.parity)?, f.n, list(&f.even, "even")?, list(&f.odd, "odd")?)
}

pub fn qudit_to_file(amps: &[Complex]) -> QuditFile {
    QuditFile {
        amps: amps.iter().map(|c| ComplexFile { re: c.re, im: c.im }).collect(),
    }
}

pub fn qudit_from_file(f: &QuditFile, force: bool) -> Result<Qudit> {
    Qudit::new(f.amps.iter().map(|c| Complex::new(c.re, c.im)).collect(), force)
}

pub fn table_to_file(t: &TwoPartyTable) -> TableFile {
    let mut slots = BTreeMap::new();
    for (i, row) in t.slots().iter().enumerate() {
        for (j, y) in row.iter().enumerate() {
            slots.insert(format!("{i}{j}"), element_to_file(y));
        }
    }
    TableFile {
        kind: t.kind().id().to_string(),
        n: t.n(),
        slots,
    }
}

pub fn table_from_file(f: &TableFile) -> Result<TwoPartyTable> {
    let kind = TableKind::parse(&f.kind)?;
    let d = kind.dim();
    let mut slots = vec![vec![GrassmannElement::zero(f.n); d]; d];
    for (key, e) in &f.slots {
        let idx: Vec<usize> = key.chars().filter_map(|c| c.to_digit(10).map(|v| v as usize)).collect();
        if key.len() != 2 || idx.len() != 2 || idx[0] >= d || idx[1] >= d {
            return Err(Error::Parse(format!("slot key `{key}` is not valid for a {kind} table")));
        }
        slots[idx[0]][idx[1]] = nested_element(e, f.n, &format!("slot {key}"))?;
    }
    TwoPartyTable::new(kind, f.n, slots)
}

pub fn multistate_to_file(s: &MultiState) -> MultiStateFile {
    MultiStateFile {
        parties: s.parties().to_vec(),
        n: s.n(),
        parity: s.parity().bit(),
        amps: s
            .amplitudes()
            .filter(|(_, y)| !y.is_zero())
            .map(|(l, y)| {
                let key: Vec<String> = l.iter().map(|k| k.to_string()).collect();
                (key.join(","), element_to_file(y))
            })
            .collect(),
    }
}

pub fn multistate_from_file(f: &MultiStateFile, force: bool) -> Result<MultiState> {
    let mut amps = BTreeMap::new();
    for (key, e) in &f.amps {
        let label = key
            .split(',')
            .map(|k| k.trim().parse::<usize>().map_err(|_| Error::Parse(format!("bad basis label `{key}`"))))
            .collect::<Result<Vec<_>>>()?;
        amps.insert(label, nested_element(e, f.n, &format!("amplitude {key}"))?);
    }
    for p in &f.parties {
        SpaceFormat::new(p.r, p.s)?;
    }
    MultiState::new(f.parties.clone(), f.n, parity_from_bit(f.parity)?, amps, force)
}

/// Canonical text: pretty JSON plus a trailing newline.
pub fn to_canonical<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("plain data serializes");
    s.push('\n');
    s
}

pub fn parse<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

/// Result record of a measure or operation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasureReport {
    pub measure: String,
    pub value: serde_json::Value,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub parity: Option<String>,
    pub calibration: Option<String>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random;

    #[test]
    fn element_format_example() {
        let text = r#"{"n": 4, "terms": [{"gens": [1,3], "re": 0.5, "im": -1.0}, {"gens": [], "re": 2.0, "im": 0.0}]}"#;
        let e = element_from_file(&parse(text).unwrap()).unwrap();
        assert_eq!(e.term_count(), 2);
        let file = element_to_file(&e);
        // canonical order puts the unit monomial first
        assert!(file.terms[0].gens.is_empty());
        let canon = to_canonical(&file);
        let again = to_canonical(&element_to_file(&element_from_file(&parse(&canon).unwrap()).unwrap()));
        assert_eq!(canon, again);
    }

    #[test]
    fn rejects_bad_generators() {
        let dup = r#"{"n": 2, "terms": [{"gens": [2,1], "re": 1.0, "im": 0.0}]}"#;
        assert!(element_from_file(&parse(dup).unwrap()).is_err());
        let range = r#"{"n": 2, "terms": [{"gens": [3], "re": 1.0, "im": 0.0}]}"#;
        assert!(matches!(
            element_from_file(&parse(range).unwrap()),
            Err(Error::GeneratorOutOfRange { .. })
        ));
        assert!(matches!(parse::<ElementFile>("{"), Err(Error::Parse(_))));
    }

    #[test]
    fn random_round_trips_are_bit_exact() {
        let mut rng = random::seeded(9);
        let f = SuperFormat { p: 2, q: 1 };
        for parity in [Parity::Even, Parity::Odd] {
            let m = random::matrix(&mut rng, f, parity, 4);
            let text = to_canonical(&matrix_to_file(&m));
            let back = matrix_from_file(&parse(&text).unwrap()).unwrap();
            assert_eq!(back, m);
            assert_eq!(to_canonical(&matrix_to_file(&back)), text);
            let k = random::ket(&mut rng, SpaceFormat::SUPERQUBIT, parity, 4);
            let text = to_canonical(&state_to_file(&k));
            assert_eq!(state_from_file(&parse(&text).unwrap()).unwrap(), k);
        }
    }

    #[test]
    fn table_round_trip() {
        let t = TwoPartyTable::bell(2);
        let text = to_canonical(&table_to_file(&t));
        assert_eq!(table_from_file(&parse(&text).unwrap()).unwrap(), t);
    }
}
