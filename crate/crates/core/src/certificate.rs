//! Exact-rational weight certificates.
//!
//! A weight vector `w` with `Γ(ρ) = 1` and `w_i = Γ(r_i)` for every rule
//! `e_i -> r_i` makes `Γ(z) = Σ z_ℓ w_ℓ` constant on equivalence classes, so
//! `Γ(m·ρ) = m` separates every pair of distinct multiples of `ρ`. The
//! weights come from one exact Gauss-Jordan elimination; no floating point
//! is involved anywhere here.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::constructions::companion_incidence;
use crate::graph::IncidenceMatrix;
use crate::monoid::{monoid_presentation, MonoidElement, RewriteSystem};

pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertificateError {
    #[error("element has {found} coefficients, certificate has {expected} weights")]
    LengthMismatch { expected: usize, found: usize },
    #[error("cannot parse `{0}` as a fraction")]
    BadFraction(String),
}

/// Renders a rational as `"2"`, `"-1"` or `"5/3"`.
pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn parse_rational(s: &str) -> Result<Rational, CertificateError> {
    let bad = || CertificateError::BadFraction(s.to_string());
    let s = s.trim();
    match s.split_once('/') {
        None => BigInt::from_str(s).map(Rational::from_integer).map_err(|_| bad()),
        Some((num, den)) => {
            let num = BigInt::from_str(num.trim()).map_err(|_| bad())?;
            let den = BigInt::from_str(den.trim()).map_err(|_| bad())?;
            if den.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(num, den))
        }
    }
}

pub(crate) fn serialize_rationals<S: Serializer>(qs: &[Rational], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(qs.iter().map(format_rational))
}

fn deserialize_rationals<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
    Vec::<String>::deserialize(d)?
        .iter()
        .map(|s| parse_rational(s).map_err(serde::de::Error::custom))
        .collect()
}

/// The linear system `B w = (1, 0, ..., 0)`.
///
/// Row 0 holds the coefficients of the unit element (all ones for a graph
/// monoid); row `k >= 1` is `r_i - e_i` for the `k`-th rule.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertificateSystem {
    pub generators: Vec<String>,
    pub unit: MonoidElement,
    pub matrix: Vec<Vec<Rational>>,
    pub target: Vec<Rational>,
}

impl CertificateSystem {
    /// Weight system for an arbitrary presentation normalised at `unit`.
    pub fn for_presentation(rs: &RewriteSystem, unit: &MonoidElement) -> Self {
        let int = |c: u64| Rational::from_integer(BigInt::from(c));
        let mut matrix = Vec::with_capacity(rs.rules().len() + 1);
        matrix.push(unit.coeffs().iter().map(|&c| int(c)).collect());
        for rule in rs.rules() {
            let mut row: Vec<Rational> = rule.replacement.coeffs().iter().map(|&c| int(c)).collect();
            row[rule.generator] -= Rational::one();
            matrix.push(row);
        }
        let mut target = vec![Rational::zero(); matrix.len()];
        target[0] = Rational::one();
        CertificateSystem {
            generators: rs.generators().to_vec(),
            unit: unit.clone(),
            matrix,
            target,
        }
    }

    pub fn rows(&self) -> usize {
        self.matrix.len()
    }

    pub fn columns(&self) -> usize {
        self.generators.len()
    }
}

/// The system for the graph monoid of `matrix`: ones row, then
/// `row_i(A) - e_i` for every regular `i`.
pub fn build_system(matrix: &IncidenceMatrix) -> CertificateSystem {
    let rs = monoid_presentation(matrix);
    CertificateSystem::for_presentation(&rs, &rs.rho())
}

/// Rule-invariant weights normalised at `unit`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightCertificate {
    pub generators: Vec<String>,
    #[serde(
        serialize_with = "serialize_rationals",
        deserialize_with = "deserialize_rationals"
    )]
    pub weights: Vec<Rational>,
    pub unit: MonoidElement,
}

impl WeightCertificate {
    /// Weights as fraction strings, in generator order.
    pub fn weight_strings(&self) -> Vec<String> {
        self.weights.iter().map(format_rational).collect()
    }
}

impl fmt::Display for WeightCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .generators
            .iter()
            .zip(&self.weights)
            .map(|(g, w)| format!("{g}={}", format_rational(w)))
            .collect();
        f.write_str(&parts.join(" "))
    }
}

/// Reduces `m` in place to reduced row echelon form and returns the pivot
/// columns. Pivot: leftmost column with a nonzero entry, topmost such row.
/// Only the first `cols` columns are used as pivot candidates.
fn rref(m: &mut [Vec<Rational>], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        if row == m.len() {
            break;
        }
        let Some(p) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let inv = m[row][col].recip();
        for x in m[row].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = m[row].clone();
        for (r, other) in m.iter_mut().enumerate() {
            if r == row || other[col].is_zero() {
                continue;
            }
            let factor = other[col].clone();
            for (x, p) in other.iter_mut().zip(&pivot_row) {
                *x -= &factor * p;
            }
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}

/// Rank over the rationals.
pub fn exact_rank(matrix: &[Vec<Rational>]) -> usize {
    let cols = matrix.first().map_or(0, Vec::len);
    let mut m = matrix.to_vec();
    rref(&mut m, cols).len()
}

/// Solves the system exactly; free variables are set to zero.
/// Returns `None` when the system is inconsistent.
pub fn solve_exact(sys: &CertificateSystem) -> Option<WeightCertificate> {
    let n = sys.columns();
    let mut aug: Vec<Vec<Rational>> = sys
        .matrix
        .iter()
        .zip(&sys.target)
        .map(|(row, b)| row.iter().cloned().chain(std::iter::once(b.clone())).collect())
        .collect();
    let pivots = rref(&mut aug, n);
    if aug[pivots.len()..].iter().any(|row| !row[n].is_zero()) {
        return None;
    }
    let mut weights = vec![Rational::zero(); n];
    for (row, &col) in pivots.iter().enumerate() {
        weights[col] = aug[row][n].clone();
    }
    Some(WeightCertificate {
        generators: sys.generators.clone(),
        weights,
        unit: sys.unit.clone(),
    })
}

/// `Γ(z) = Σ z_ℓ w_ℓ`.
pub fn gamma(cert: &WeightCertificate, elem: &MonoidElement) -> Result<Rational, CertificateError> {
    if elem.len() != cert.weights.len() {
        return Err(CertificateError::LengthMismatch {
            expected: cert.weights.len(),
            found: elem.len(),
        });
    }
    Ok(elem
        .coeffs()
        .iter()
        .zip(&cert.weights)
        .filter(|(&z, _)| z != 0)
        .map(|(&z, w)| w * Rational::from_integer(BigInt::from(z)))
        .sum())
}

/// True iff `Γ(unit) = 1` and `w_i = Γ(r_i)` for every rule of `rs`.
pub fn verify_certificate(cert: &WeightCertificate, rs: &RewriteSystem) -> bool {
    if cert.generators != rs.generators() || cert.weights.len() != rs.generator_count() {
        return false;
    }
    if gamma(cert, &cert.unit).ok() != Some(Rational::one()) {
        return false;
    }
    rs.rules().iter().all(|rule| {
        gamma(cert, &rule.replacement).is_ok_and(|g| g == cert.weights[rule.generator])
    })
}

/// Details of the rank argument on a companion system.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RankCheck {
    pub regular_count: usize,
    pub rank: usize,
    /// After subtracting column `i` from column `n + i` (for each regular `i`),
    /// the last `t + 1` columns form a unit lower-triangular block.
    pub column_block_independent: bool,
}

impl RankCheck {
    pub fn passed(&self) -> bool {
        self.rank == self.regular_count + 1 && self.column_block_independent
    }
}

pub fn companion_rank_report(matrix: &IncidenceMatrix) -> RankCheck {
    let n = matrix.size();
    let t = matrix.regular_count();
    let sys = build_system(&companion_incidence(matrix));
    let rank = exact_rank(&sys.matrix);

    let mut reduced = sys.matrix.clone();
    for row in reduced.iter_mut() {
        for i in 0..t {
            let sub = row[i].clone();
            row[n + i] -= sub;
        }
    }
    let block: Vec<Vec<Rational>> = reduced
        .iter()
        .map(|row| row[n - 1..n + t].to_vec())
        .collect();
    let unit_lower = block.iter().enumerate().all(|(r, row)| {
        row.iter().enumerate().all(|(c, x)| match c.cmp(&r) {
            std::cmp::Ordering::Equal => x.is_one(),
            std::cmp::Ordering::Greater => x.is_zero(),
            std::cmp::Ordering::Less => true,
        })
    });
    RankCheck {
        regular_count: t,
        rank,
        column_block_independent: unit_lower && exact_rank(&block) == t + 1,
    }
}

/// True iff the companion system of `matrix` has full row rank `t + 1`.
pub fn companion_rank_check(matrix: &IncidenceMatrix) -> bool {
    companion_rank_report(matrix).passed()
}
