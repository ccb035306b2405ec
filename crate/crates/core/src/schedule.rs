//! Linear parameter schedules `a_i(n) = α_i n + c_i`, `b_j(n) = β_j n + d_j + 1`.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::rational::ComplexRational;

/// Parameters of the family `p_n = _AF_B(a_1(n), …, a_A(n); b_1(n), …, b_B(n); z)`.
///
/// `alphas[0] = −1` and `cs[0] = 0` always, so that `a_1(n) = −n` and the
/// series terminates at degree `n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "ScheduleDoc", into = "ScheduleDoc")]
pub struct ParameterSchedule {
    alphas: Vec<ComplexRational>,
    cs: Vec<ComplexRational>,
    betas: Vec<ComplexRational>,
    ds: Vec<ComplexRational>,
}

/// On-disk layout; `A` and `B` are redundant with the list lengths and are
/// checked against them.
#[derive(Serialize, Deserialize)]
struct ScheduleDoc {
    #[serde(rename = "A")]
    a: usize,
    #[serde(rename = "B")]
    b: usize,
    alphas: Vec<ComplexRational>,
    cs: Vec<ComplexRational>,
    betas: Vec<ComplexRational>,
    ds: Vec<ComplexRational>,
}

impl TryFrom<ScheduleDoc> for ParameterSchedule {
    type Error = Error;

    fn try_from(doc: ScheduleDoc) -> Result<Self> {
        if doc.a != doc.alphas.len() || doc.b != doc.betas.len() {
            return Err(Error::InvalidSchedule(format!(
                "A = {}, B = {} disagree with {} alphas and {} betas",
                doc.a,
                doc.b,
                doc.alphas.len(),
                doc.betas.len()
            )));
        }
        ParameterSchedule::new(doc.alphas, doc.cs, doc.betas, doc.ds)
    }
}

impl From<ParameterSchedule> for ScheduleDoc {
    fn from(s: ParameterSchedule) -> Self {
        ScheduleDoc {
            a: s.alphas.len(),
            b: s.betas.len(),
            alphas: s.alphas,
            cs: s.cs,
            betas: s.betas,
            ds: s.ds,
        }
    }
}

impl ParameterSchedule {
    pub fn new(
        alphas: Vec<ComplexRational>,
        cs: Vec<ComplexRational>,
        betas: Vec<ComplexRational>,
        ds: Vec<ComplexRational>,
    ) -> Result<Self> {
        if alphas.is_empty() {
            return Err(Error::InvalidSchedule("A must be positive".into()));
        }
        if alphas.len() != betas.len() + 1 {
            return Err(Error::InvalidSchedule(format!(
                "need A = B + 1, got A = {}, B = {}",
                alphas.len(),
                betas.len()
            )));
        }
        if cs.len() != alphas.len() || ds.len() != betas.len() {
            return Err(Error::InvalidSchedule(
                "cs must have length A and ds length B".into(),
            ));
        }
        if alphas[0] != ComplexRational::from_int(-1) || !cs[0].is_zero() {
            return Err(Error::InvalidSchedule(
                "alphas[1] must be -1 and cs[1] must be 0 (a_1 = -n)".into(),
            ));
        }
        Ok(ParameterSchedule {
            alphas,
            cs,
            betas,
            ds,
        })
    }

    /// `_2F_1(−n, αn + 1; αn + 2; z)`, the lemniscate family.
    pub fn lemniscate_family(alpha: ComplexRational) -> Self {
        let one = ComplexRational::one();
        Self::new(
            vec![ComplexRational::from_int(-1), alpha.clone()],
            vec![ComplexRational::zero(), one.clone()],
            vec![alpha],
            vec![one],
        )
        .expect("well-formed family")
    }

    /// `_AF_B(−n, α_2 n, …, α_A n; α_2 n + 1, …, α_A n + 1; z)`: β_j = α_{j+1}.
    pub fn degenerate_family(tail: &[ComplexRational]) -> Self {
        let mut alphas = vec![ComplexRational::from_int(-1)];
        alphas.extend(tail.iter().cloned());
        Self::new(
            alphas,
            vec![ComplexRational::zero(); tail.len() + 1],
            tail.to_vec(),
            vec![ComplexRational::zero(); tail.len()],
        )
        .expect("well-formed family")
    }

    /// Number of numerator parameters.
    pub fn a(&self) -> usize {
        self.alphas.len()
    }

    /// Number of denominator parameters.
    pub fn b(&self) -> usize {
        self.betas.len()
    }

    pub fn alphas(&self) -> &[ComplexRational] {
        &self.alphas
    }

    pub fn cs(&self) -> &[ComplexRational] {
        &self.cs
    }

    pub fn betas(&self) -> &[ComplexRational] {
        &self.betas
    }

    pub fn ds(&self) -> &[ComplexRational] {
        &self.ds
    }

    pub fn numerator_params(&self, n: u32) -> Vec<ComplexRational> {
        let n = ComplexRational::from_int(n as i64);
        self.alphas
            .iter()
            .zip(&self.cs)
            .map(|(a, c)| &(a * &n) + c)
            .collect()
    }

    pub fn denominator_params(&self, n: u32) -> Vec<ComplexRational> {
        let n = ComplexRational::from_int(n as i64);
        let one = ComplexRational::one();
        self.betas
            .iter()
            .zip(&self.ds)
            .map(|(b, d)| &(&(b * &n) + d) + &one)
            .collect()
    }

    /// `β_j = α_{j+1}` for every `j`; the algebraic curve then has rational branches.
    pub fn is_degenerate(&self) -> bool {
        self.first_non_degenerate().is_none()
    }

    /// First 1-based `j` with `β_j ≠ α_{j+1}`.
    pub fn first_non_degenerate(&self) -> Option<usize> {
        self.betas
            .iter()
            .zip(&self.alphas[1..])
            .position(|(b, a)| b != a)
            .map(|j| j + 1)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("schedule serializes")
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    /// Short content hash of the canonical serialization.
    pub fn hash(&self) -> String {
        let digest = Sha256::digest(self.to_toml().as_bytes());
        hex::encode(&digest[..8])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cr(s: &str) -> ComplexRational {
        s.parse().unwrap()
    }

    #[test]
    fn instantiation() {
        let s = ParameterSchedule::lemniscate_family(cr("3"));
        assert_eq!(s.numerator_params(5), vec![cr("-5"), cr("16")]);
        assert_eq!(s.denominator_params(5), vec![cr("17")]);
        assert!(s.is_degenerate());
    }

    #[test]
    fn toml_round_trip() {
        let s = ParameterSchedule::degenerate_family(&[cr("i"), cr("1+2i")]);
        let text = s.to_toml();
        assert!(text.contains("A = 3"));
        assert_eq!(ParameterSchedule::from_toml(&text).unwrap(), s);
    }

    #[test]
    fn reads_hand_written_file() {
        let text = r#"
            A = 2
            B = 1
            alphas = ["-1", "1/2 - i"]
            cs = ["0", "1"]
            betas = ["1/2-i"]
            ds = ["1"]
        "#;
        let s = ParameterSchedule::from_toml(text).unwrap();
        assert_eq!(s, ParameterSchedule::lemniscate_family(cr("1/2-i")));
    }

    #[test]
    fn rejects_malformed() {
        let bad_first = ParameterSchedule::new(
            vec![cr("-2"), cr("1")],
            vec![cr("0"), cr("0")],
            vec![cr("1")],
            vec![cr("0")],
        );
        assert!(bad_first.is_err());
        let bad_shape =
            ParameterSchedule::new(vec![cr("-1"), cr("1")], vec![cr("0"), cr("0")], vec![], vec![]);
        assert!(bad_shape.is_err());
        let text =
            "A = 3\nB = 1\nalphas = [\"-1\", \"1\"]\ncs = [\"0\", \"0\"]\nbetas = [\"1\"]\nds = [\"0\"]\n";
        assert!(ParameterSchedule::from_toml(text).is_err());
    }

    #[test]
    fn non_degenerate_index() {
        let s = ParameterSchedule::new(
            vec![cr("-1"), cr("2")],
            vec![cr("0"), cr("0")],
            vec![cr("3")],
            vec![cr("0")],
        )
        .unwrap();
        assert_eq!(s.first_non_degenerate(), Some(1));
    }
}
