//! The determinant-like functional `sdTr` on `(2|1)` matrices.
//!
//! The template `1/2 str((M E)^sT (M E))` with `E = E_osp` admits several sign
//! and ordering arrangements. [`calibrate`] evaluates each of them against two
//! oracles, the ordinary determinant on embedded `2x2` bodies and vanishing on
//! outer products `u v^T`, and pins the single surviving class.

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::error::{Error, Result};
use crate::grassmann::{Complex, GrassmannElement, Parity};
use crate::groups::{InvariantTensor, OSP_FORMAT};
use crate::random;
use crate::supermatrix::SuperMatrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Arrangement {
    /// `+1/2 str((M E)^sT (M E))`
    PlusMeSt,
    /// `-1/2 str((M E)^sT (M E))`
    MinusMeSt,
    /// `+1/2 str((E M^sT)(E M))`
    PlusEmstEm,
    /// `-1/2 str((E M^sT)(E M))`
    MinusEmstEm,
    /// `+1/2 str(E M^sT E M)`
    PlusChain,
    /// `-1/2 str(E M^sT E M)`
    MinusChain,
}

/// The arrangement shipped when no calibration file is present.
pub const DEFAULT_ARRANGEMENT: Arrangement = Arrangement::MinusEmstEm;

impl Arrangement {
    pub const ALL: [Arrangement; 6] = [
        Arrangement::PlusMeSt,
        Arrangement::MinusMeSt,
        Arrangement::PlusEmstEm,
        Arrangement::MinusEmstEm,
        Arrangement::PlusChain,
        Arrangement::MinusChain,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Arrangement::PlusMeSt => "plus-me-st-me",
            Arrangement::MinusMeSt => "minus-me-st-me",
            Arrangement::PlusEmstEm => "plus-emst-em",
            Arrangement::MinusEmstEm => "minus-emst-em",
            Arrangement::PlusChain => "plus-e-mst-e-m",
            Arrangement::MinusChain => "minus-e-mst-e-m",
        }
    }

    pub fn formula(self) -> &'static str {
        match self {
            Arrangement::PlusMeSt => "+1/2 str((M E)^sT (M E))",
            Arrangement::MinusMeSt => "-1/2 str((M E)^sT (M E))",
            Arrangement::PlusEmstEm => "+1/2 str((E M^sT)(E M))",
            Arrangement::MinusEmstEm => "-1/2 str((E M^sT)(E M))",
            Arrangement::PlusChain => "+1/2 str(E M^sT E M)",
            Arrangement::MinusChain => "-1/2 str(E M^sT E M)",
        }
    }

    fn sign(self) -> f64 {
        match self {
            Arrangement::PlusMeSt | Arrangement::PlusEmstEm | Arrangement::PlusChain => 0.5,
            _ => -0.5,
        }
    }
}

impl fmt::Display for Arrangement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Arrangement {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Arrangement::ALL
            .into_iter()
            .find(|a| a.id() == s.trim())
            .ok_or_else(|| Error::UnknownArrangement(s.trim().to_string()))
    }
}

pub fn sdtr(m: &SuperMatrix, arrangement: Arrangement) -> Result<GrassmannElement> {
    if m.format() != OSP_FORMAT || m.parity() != Parity::Even {
        return Err(Error::FormatMismatch(format!(
            "sdTr needs a degree-0 (2|1) matrix, got degree {} {}",
            m.parity().bit(),
            m.format()
        )));
    }
    m.ensure_valid()?;
    let e = InvariantTensor::osp(m.n()).matrix;
    let product = match arrangement {
        Arrangement::PlusMeSt | Arrangement::MinusMeSt => {
            let me = m.try_mul(&e)?;
            me.supertranspose()?.try_mul(&me)?
        }
        Arrangement::PlusEmstEm | Arrangement::MinusEmstEm => {
            let left = e.try_mul(&m.supertranspose()?)?;
            left.try_mul(&e.try_mul(m)?)?
        }
        Arrangement::PlusChain | Arrangement::MinusChain => e
            .try_mul(&m.supertranspose()?)?
            .try_mul(&e)?
            .try_mul(m)?,
    };
    Ok(product.supertrace()?.scale_real(arrangement.sign()))
}

/// Deviation of one candidate from both oracles.
#[derive(Clone, Debug, PartialEq)]
pub struct Evidence {
    pub arrangement: Arrangement,
    pub det_deviation: f64,
    pub outer_deviation: f64,
    pub survives: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Calibration {
    pub pinned: Arrangement,
    /// Survivors equivalent to the pin.
    pub class: Vec<Arrangement>,
    pub evidence: Vec<Evidence>,
    pub seed: u64,
    pub tol: f64,
}

pub const CALIBRATION_SAMPLES: usize = 100;

/// `(2|1)` matrix with a random complex `2x2` body in `A` and zeros elsewhere.
pub fn embedded_body<R: Rng + ?Sized>(rng: &mut R, n: usize) -> (SuperMatrix, [[Complex; 2]; 2]) {
    let a = [[random::complex(rng), random::complex(rng)], [random::complex(rng), random::complex(rng)]];
    let zero = Complex::new(0.0, 0.0);
    let m = SuperMatrix::from_complex(
        OSP_FORMAT,
        n,
        &[vec![a[0][0], a[0][1], zero], vec![a[1][0], a[1][1], zero], vec![zero, zero, zero]],
    )
    .expect("3x3");
    (m, a)
}

/// `u v^T` for two even superqubit coefficient columns `u = (x0, x1, ae)`,
/// `v = (y0, y1, beta)`.
pub fn outer_product<R: Rng + ?Sized>(rng: &mut R, n: usize) -> SuperMatrix {
    let column = |rng: &mut R| {
        vec![
            random::homogeneous(rng, n, Parity::Even),
            random::homogeneous(rng, n, Parity::Even),
            random::homogeneous(rng, n, Parity::Odd),
        ]
    };
    let u = column(rng);
    let v = column(rng);
    SuperMatrix::from_fn(OSP_FORMAT, Parity::Even, n, |i, j| &u[i] * &v[j])
}

/// Determinant of a `2x2` complex matrix by pivoted elimination, independent
/// of the cofactor formula.
fn det_by_elimination(a: &[[Complex; 2]; 2]) -> Complex {
    if a[0][0].norm() >= a[1][0].norm() {
        if a[0][0].norm() == 0.0 {
            return Complex::new(0.0, 0.0);
        }
        a[0][0] * (a[1][1] - a[1][0] / a[0][0] * a[0][1])
    } else {
        -a[1][0] * (a[0][1] - a[0][0] / a[1][0] * a[1][1])
    }
}

/// Runs both oracles over `CALIBRATION_SAMPLES` samples each.
pub fn calibrate(seed: u64, tol: f64, n: usize) -> Result<Calibration> {
    let mut rng = random::seeded(seed);
    let bodies: Vec<_> = (0..CALIBRATION_SAMPLES).map(|_| embedded_body(&mut rng, n)).collect();
    let outers: Vec<_> = (0..CALIBRATION_SAMPLES).map(|_| outer_product(&mut rng, n)).collect();
    // generic matrices separate candidates that merely agree on the oracles
    let generic: Vec<_> = (0..CALIBRATION_SAMPLES)
        .map(|_| random::matrix(&mut rng, OSP_FORMAT, Parity::Even, n))
        .collect();

    let mut evidence = Vec::new();
    for arrangement in Arrangement::ALL {
        let mut det_deviation: f64 = 0.0;
        for (m, a) in &bodies {
            let value = sdtr(m, arrangement)?;
            let target = GrassmannElement::scalar(n, det_by_elimination(a));
            det_deviation = det_deviation.max(value.max_coefficient_diff(&target));
        }
        let mut outer_deviation: f64 = 0.0;
        for m in &outers {
            outer_deviation = outer_deviation.max(sdtr(m, arrangement)?.norm_r());
        }
        evidence.push(Evidence {
            arrangement,
            det_deviation,
            outer_deviation,
            survives: det_deviation <= tol && outer_deviation <= tol,
        });
    }

    let survivors: Vec<Arrangement> = evidence.iter().filter(|e| e.survives).map(|e| e.arrangement).collect();
    let equivalent = |a: Arrangement, b: Arrangement| -> Result<bool> {
        for m in &generic {
            let scale = 1.0 + sdtr(m, a)?.norm_r();
            if sdtr(m, a)?.max_coefficient_diff(&sdtr(m, b)?) > 1e-12 * scale {
                return Ok(false);
            }
        }
        Ok(true)
    };
    let mut classes: Vec<Vec<Arrangement>> = Vec::new();
    for s in survivors {
        let mut placed = false;
        for class in classes.iter_mut() {
            if equivalent(class[0], s)? {
                class.push(s);
                placed = true;
                break;
            }
        }
        if !placed {
            classes.push(vec![s]);
        }
    }
    match classes.len() {
        1 => {
            let class = classes.pop().expect("one class");
            Ok(Calibration {
                pinned: class[0],
                class,
                evidence,
                seed,
                tol,
            })
        }
        k => Err(Error::Calibration(format!(
            "{} surviving arrangement classes (need exactly one)\n{}",
            k,
            evidence_table(&evidence)
        ))),
    }
}

pub fn evidence_table(evidence: &[Evidence]) -> String {
    let mut out = String::from("arrangement        det-dev     outer-dev   survives\n");
    for e in evidence {
        out.push_str(&format!(
            "{:<18} {:<11.3e} {:<11.3e} {}\n",
            e.arrangement.id(),
            e.det_deviation,
            e.outer_deviation,
            e.survives
        ));
    }
    out
}

impl Calibration {
    /// Plain-text configuration: `key = value` lines, `#` comments.
    pub fn to_config(&self) -> String {
        let mut out = String::new();
        out.push_str("# sdTr calibration\n");
        out.push_str(&format!("sdtr_arrangement = {}\n", self.pinned.id()));
        let class: Vec<&str> = self.class.iter().map(|a| a.id()).collect();
        out.push_str(&format!("sdtr_class = {}\n", class.join(",")));
        out.push_str(&format!("seed = {}\n", self.seed));
        out.push_str(&format!("tol = {:e}\n", self.tol));
        for line in evidence_table(&self.evidence).lines() {
            out.push_str("# ");
            out.push_str(line);
            out.push('\n');
        }
        out
    }
}

/// Reads the pinned arrangement from configuration text.
pub fn arrangement_from_config(text: &str) -> Result<Arrangement> {
    for line in text.lines() {
        let line = line.trim();
        if line.starts_with('#') {
            continue;
        }
        if let Some((key, value)) = line.split_once('=') {
            if key.trim() == "sdtr_arrangement" {
                return value.parse();
            }
        }
    }
    Err(Error::Parse("configuration has no sdtr_arrangement entry".into()))
}
