//! Sparse pure states on a truncated multi-mode bosonic Fock space.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::ser::{SerializeSeq, SerializeStruct};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::mode::{check_registry, ModeId};
use crate::operator::{Ladder, OperatorPolynomial};

/// Occupation numbers, one entry per registered mode.
pub type Occupation = Vec<u32>;

pub const DEFAULT_PRUNE_THRESHOLD: f64 = 1e-15;

/// Two normalized states count as equal at or above this fidelity.
pub const STATE_EQUALITY_FIDELITY: f64 = 1.0 - 1e-10;

/// Pure state stored as a sparse map from occupation vector to amplitude.
///
/// Every occupation entry is at most `truncation`. Weight pushed past the cap
/// by a creation operator is dropped and accumulated in `truncation_loss`.
/// Values are immutable: every operation returns a new state.
#[derive(Debug, Clone, PartialEq)]
pub struct FockState {
    modes: Vec<ModeId>,
    truncation: u32,
    amplitudes: BTreeMap<Occupation, Complex64>,
    truncation_loss: f64,
    prune_threshold: f64,
}

impl FockState {
    pub fn vacuum(modes: &[ModeId], truncation: u32) -> Result<Self> {
        let zeros = vec![0; modes.len()];
        Self::basis(modes, truncation, &zeros)
    }

    /// Single number state |occupation⟩ with unit amplitude.
    pub fn basis(modes: &[ModeId], truncation: u32, occupation: &[u32]) -> Result<Self> {
        Self::from_amplitudes(
            modes,
            truncation,
            [(occupation.to_vec(), Complex64::new(1.0, 0.0))],
        )
    }

    /// Builds a state from explicit amplitudes; repeated keys are summed.
    pub fn from_amplitudes<I>(modes: &[ModeId], truncation: u32, amplitudes: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Occupation, Complex64)>,
    {
        check_registry(modes)?;
        if truncation == 0 {
            return Err(Error::config("truncation N must be at least 1"));
        }
        let mut map = BTreeMap::new();
        for (occ, amp) in amplitudes {
            if occ.len() != modes.len() {
                return Err(Error::config(format!(
                    "occupation vector {occ:?} does not match {} registered modes",
                    modes.len()
                )));
            }
            if let Some(n) = occ.iter().find(|&&n| n > truncation) {
                return Err(Error::config(format!(
                    "occupation {n} exceeds truncation {truncation}"
                )));
            }
            *map.entry(occ).or_insert(Complex64::new(0.0, 0.0)) += amp;
        }
        map.retain(|_, a| *a != Complex64::new(0.0, 0.0));
        Ok(FockState {
            modes: modes.to_vec(),
            truncation,
            amplitudes: map,
            truncation_loss: 0.0,
            prune_threshold: DEFAULT_PRUNE_THRESHOLD,
        })
    }

    pub fn with_prune_threshold(mut self, threshold: f64) -> Self {
        self.prune_threshold = threshold.max(0.0);
        self
    }

    pub(crate) fn with_truncation_loss(mut self, loss: f64) -> Self {
        self.truncation_loss = loss;
        self
    }

    pub fn modes(&self) -> &[ModeId] {
        &self.modes
    }

    pub fn truncation(&self) -> u32 {
        self.truncation
    }

    pub fn truncation_loss(&self) -> f64 {
        self.truncation_loss
    }

    pub fn prune_threshold(&self) -> f64 {
        self.prune_threshold
    }

    pub fn amplitude(&self, occupation: &[u32]) -> Complex64 {
        self.amplitudes
            .get(occupation)
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    /// Non-zero amplitudes in lexicographic order of occupation.
    pub fn amplitudes(&self) -> impl Iterator<Item = (&Occupation, &Complex64)> {
        self.amplitudes.iter()
    }

    /// Number of stored (non-zero) amplitudes.
    pub fn support_len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn mode_index(&self, mode: &ModeId) -> Result<usize> {
        self.modes
            .iter()
            .position(|m| m == mode)
            .ok_or_else(|| Error::config(format!("mode {mode} is not registered in the state")))
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.values().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Rescales to unit norm. The truncation loss is rescaled with the state
    /// so that it stays commensurate with the retained weight.
    pub fn normalize(&self) -> Result<Self> {
        let n2 = self.norm_sqr();
        if !(n2 > 0.0 && n2.is_finite()) {
            return Err(Error::domain("cannot normalize a zero or non-finite state"));
        }
        let s = 1.0 / n2.sqrt();
        Ok(FockState {
            amplitudes: self
                .amplitudes
                .iter()
                .map(|(k, a)| (k.clone(), a * s))
                .collect(),
            truncation_loss: self.truncation_loss / n2,
            ..self.clone_empty()
        })
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let mut out = self.clone_empty();
        out.amplitudes = self
            .amplitudes
            .iter()
            .map(|(k, a)| (k.clone(), a * c))
            .filter(|(_, a)| *a != Complex64::new(0.0, 0.0))
            .collect();
        out.truncation_loss = self.truncation_loss * c.norm_sqr();
        out
    }

    /// Superposition `self + other` on an identical registry.
    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (k, a) in &other.amplitudes {
            *out.amplitudes
                .entry(k.clone())
                .or_insert(Complex64::new(0.0, 0.0)) += a;
        }
        out.amplitudes.retain(|_, a| *a != Complex64::new(0.0, 0.0));
        out.truncation_loss += other.truncation_loss;
        Ok(out)
    }

    pub fn apply_ladder(&self, mode: &ModeId, kind: Ladder) -> Result<Self> {
        let idx = self.mode_index(mode)?;
        let (amplitudes, lost) = ladder_map(&self.amplitudes, idx, kind, self.truncation);
        Ok(FockState {
            amplitudes,
            truncation_loss: self.truncation_loss + lost,
            ..self.clone_empty()
        })
    }

    /// Linear extension of [`apply_ladder`](Self::apply_ladder) over terms and factors.
    ///
    /// Weight dropped at the cap inside a monomial is charged to the
    /// truncation loss scaled by that monomial's |coefficient|².
    pub fn apply_polynomial(&self, op: &OperatorPolynomial) -> Result<Self> {
        let indices: Vec<Vec<usize>> = op
            .terms()
            .iter()
            .map(|t| t.factors.iter().map(|f| self.mode_index(&f.mode)).collect())
            .collect::<Result<_>>()?;

        let mut acc: BTreeMap<Occupation, Complex64> = BTreeMap::new();
        let mut lost = 0.0;
        for (term, idx) in op.terms().iter().zip(&indices) {
            let mut term_lost = 0.0;
            'entry: for (k, a) in &self.amplitudes {
                let mut occ = k.clone();
                // product of the integer ladder factors; one square root at the end
                let mut weight = 1.0f64;
                for (f, &i) in term.factors.iter().zip(idx).rev() {
                    match f.kind {
                        Ladder::Create => {
                            if occ[i] >= self.truncation {
                                term_lost += a.norm_sqr() * weight;
                                continue 'entry;
                            }
                            occ[i] += 1;
                            weight *= f64::from(occ[i]);
                        }
                        Ladder::Annihilate => {
                            if occ[i] == 0 {
                                continue 'entry;
                            }
                            weight *= f64::from(occ[i]);
                            occ[i] -= 1;
                        }
                    }
                }
                *acc.entry(occ).or_insert(Complex64::new(0.0, 0.0)) +=
                    term.coeff * a * weight.sqrt();
            }
            lost += term.coeff.norm_sqr() * term_lost;
        }
        let threshold = self.prune_threshold;
        acc.retain(|_, a| a.norm() >= threshold && *a != Complex64::new(0.0, 0.0));
        Ok(FockState {
            amplitudes: acc,
            truncation_loss: self.truncation_loss + lost,
            ..self.clone_empty()
        })
    }

    /// ⟨self|other⟩, conjugate-linear in `self`.
    pub fn inner_product(&self, other: &Self) -> Result<Complex64> {
        self.check_compatible(other)?;
        let (small, large, flip) = if self.amplitudes.len() <= other.amplitudes.len() {
            (&self.amplitudes, &other.amplitudes, false)
        } else {
            (&other.amplitudes, &self.amplitudes, true)
        };
        let mut s = Complex64::new(0.0, 0.0);
        for (k, a) in small {
            if let Some(b) = large.get(k) {
                s += if flip { b.conj() * a } else { a.conj() * b };
            }
        }
        Ok(s)
    }

    /// |⟨x|y⟩|² / (‖x‖² ‖y‖²).
    pub fn fidelity(&self, other: &Self) -> Result<f64> {
        let ip = self.inner_product(other)?;
        let d = self.norm_sqr() * other.norm_sqr();
        if d == 0.0 {
            return Err(Error::domain("fidelity with a zero state is undefined"));
        }
        Ok(ip.norm_sqr() / d)
    }

    /// Equality contract: fidelity at least [`STATE_EQUALITY_FIDELITY`].
    pub fn approx_eq(&self, other: &Self) -> bool {
        self.fidelity(other)
            .map(|f| f >= STATE_EQUALITY_FIDELITY)
            .unwrap_or(false)
    }

    /// Tensor product on the concatenated registry.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        if let Some(m) = self.modes.iter().find(|m| other.modes.contains(m)) {
            return Err(Error::config(format!(
                "tensor product of overlapping registries (mode {m})"
            )));
        }
        let mut modes = self.modes.clone();
        modes.extend_from_slice(&other.modes);
        let mut amplitudes = BTreeMap::new();
        for (ka, a) in &self.amplitudes {
            for (kb, b) in &other.amplitudes {
                let mut k = ka.clone();
                k.extend_from_slice(kb);
                amplitudes.insert(k, a * b);
            }
        }
        let (na, nb) = (self.norm_sqr(), other.norm_sqr());
        Ok(FockState {
            modes,
            truncation: self.truncation.max(other.truncation),
            amplitudes,
            truncation_loss: self.truncation_loss * nb
                + other.truncation_loss * na
                + self.truncation_loss * other.truncation_loss,
            prune_threshold: self.prune_threshold.min(other.prune_threshold),
        })
    }

    /// ⟨n_mode⟩ = Σ n |amplitude|² / Σ |amplitude|².
    pub fn number_expectation(&self, mode: &ModeId) -> Result<f64> {
        let idx = self.mode_index(mode)?;
        let n2 = self.norm_sqr();
        if n2 == 0.0 {
            return Err(Error::domain("number expectation of a zero state"));
        }
        let s: f64 = self
            .amplitudes
            .iter()
            .map(|(k, a)| f64::from(k[idx]) * a.norm_sqr())
            .sum();
        Ok(s / n2)
    }

    /// Lowers the cap to `n`, moving the weight above it into the truncation loss.
    pub fn restrict_truncation(&self, n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::config("truncation N must be at least 1"));
        }
        let mut lost = 0.0;
        let mut amplitudes = BTreeMap::new();
        for (k, a) in &self.amplitudes {
            if k.iter().all(|&x| x <= n) {
                amplitudes.insert(k.clone(), *a);
            } else {
                lost += a.norm_sqr();
            }
        }
        Ok(FockState {
            truncation: n.min(self.truncation),
            amplitudes,
            truncation_loss: self.truncation_loss + lost,
            ..self.clone_empty()
        })
    }

    /// Reorders the registry; `order` must be a permutation of the current modes.
    pub fn permute_modes(&self, order: &[ModeId]) -> Result<Self> {
        check_registry(order)?;
        if order.len() != self.modes.len() {
            return Err(Error::config(
                "permutation must list every registered mode once",
            ));
        }
        let src: Vec<usize> = order
            .iter()
            .map(|m| self.mode_index(m))
            .collect::<Result<_>>()?;
        let amplitudes = self
            .amplitudes
            .iter()
            .map(|(k, a)| (src.iter().map(|&i| k[i]).collect(), *a))
            .collect();
        Ok(FockState {
            modes: order.to_vec(),
            amplitudes,
            ..self.clone_empty()
        })
    }

    /// Keeps the amplitudes whose occupation satisfies `keep`.
    pub(crate) fn filter<F: Fn(&[u32]) -> bool>(&self, keep: F) -> Self {
        FockState {
            amplitudes: self
                .amplitudes
                .iter()
                .filter(|(k, _)| keep(k))
                .map(|(k, a)| (k.clone(), *a))
                .collect(),
            truncation_loss: 0.0,
            ..self.clone_empty()
        }
    }

    pub(crate) fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.modes != other.modes {
            return Err(Error::config("states live on different mode registries"));
        }
        if self.truncation != other.truncation {
            return Err(Error::config(format!(
                "states have different truncations ({} vs {})",
                self.truncation, other.truncation
            )));
        }
        Ok(())
    }

    fn clone_empty(&self) -> Self {
        FockState {
            modes: self.modes.clone(),
            truncation: self.truncation,
            amplitudes: BTreeMap::new(),
            truncation_loss: self.truncation_loss,
            prune_threshold: self.prune_threshold,
        }
    }
}

fn ladder_map(
    amps: &BTreeMap<Occupation, Complex64>,
    idx: usize,
    kind: Ladder,
    cap: u32,
) -> (BTreeMap<Occupation, Complex64>, f64) {
    let mut out = BTreeMap::new();
    let mut lost = 0.0;
    for (k, a) in amps {
        let n = k[idx];
        match kind {
            Ladder::Create => {
                if n >= cap {
                    lost += a.norm_sqr();
                    continue;
                }
                let mut k2 = k.clone();
                k2[idx] = n + 1;
                out.insert(k2, a * f64::from(n + 1).sqrt());
            }
            Ladder::Annihilate => {
                if n == 0 {
                    continue;
                }
                let mut k2 = k.clone();
                k2[idx] = n - 1;
                out.insert(k2, a * f64::from(n).sqrt());
            }
        }
    }
    (out, lost)
}

/// Amplitudes serialize as `[occupation, re, im]` triples in lexicographic order.
impl Serialize for FockState {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        struct Triples<'a>(&'a BTreeMap<Occupation, Complex64>);
        impl Serialize for Triples<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                let mut seq = s.serialize_seq(Some(self.0.len()))?;
                for (k, a) in self.0 {
                    seq.serialize_element(&(k, a.re, a.im))?;
                }
                seq.end()
            }
        }
        let mut st = serializer.serialize_struct("FockState", 4)?;
        st.serialize_field("modes", &self.modes)?;
        st.serialize_field("truncation", &self.truncation)?;
        st.serialize_field("truncation_loss", &self.truncation_loss)?;
        st.serialize_field("amplitudes", &Triples(&self.amplitudes))?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mode::Branch;
    use approx::assert_relative_eq;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn two_modes() -> Vec<ModeId> {
        vec![
            ModeId::minkowski(Branch::I, 0, 0.3).unwrap(),
            ModeId::minkowski(Branch::II, 0, 0.3).unwrap(),
        ]
    }

    fn one_mode() -> Vec<ModeId> {
        vec![ModeId::minkowski(Branch::I, 0, 0.3).unwrap()]
    }

    #[test]
    fn vacuum_is_single_unit_amplitude() {
        let v = FockState::vacuum(&two_modes(), 10).unwrap();
        assert_eq!(v.support_len(), 1);
        assert_eq!(v.amplitude(&[0, 0]), c(1.0));
        assert_eq!(v.norm(), 1.0);
        assert_eq!(v.truncation_loss(), 0.0);
        assert_eq!(v.number_expectation(&two_modes()[1]).unwrap(), 0.0);
    }

    #[test]
    fn vacuum_rejects_duplicates_and_zero_cap() {
        let m = two_modes();
        assert!(matches!(
            FockState::vacuum(&[m[0], m[0]], 3),
            Err(Error::Configuration(_))
        ));
        assert!(FockState::vacuum(&m, 0).is_err());
    }

    #[test]
    fn ladder_matrix_elements() {
        let m = one_mode();
        let s = FockState::basis(&m, 5, &[2]).unwrap();
        let up = s.apply_ladder(&m[0], Ladder::Create).unwrap();
        assert_relative_eq!(up.amplitude(&[3]).re, 3f64.sqrt(), epsilon = 1e-15);
        assert_eq!(up.support_len(), 1);

        let v = FockState::vacuum(&m, 5).unwrap();
        let z = v.apply_ladder(&m[0], Ladder::Annihilate).unwrap();
        assert_eq!(z.norm(), 0.0);
        assert_eq!(z.truncation_loss(), 0.0);
    }

    #[test]
    fn create_at_cap_moves_weight_to_loss() {
        let m = one_mode();
        let s = FockState::from_amplitudes(&m, 4, [(vec![4], c(0.6))]).unwrap();
        let z = s.apply_ladder(&m[0], Ladder::Create).unwrap();
        assert_eq!(z.norm(), 0.0);
        assert_relative_eq!(z.truncation_loss(), 0.36, epsilon = 1e-15);
    }

    #[test]
    fn unregistered_mode_is_error() {
        let s = FockState::vacuum(&one_mode(), 3).unwrap();
        let other = ModeId::rindler(Branch::I, 0, 0.3).unwrap();
        assert!(matches!(
            s.apply_ladder(&other, Ladder::Create),
            Err(Error::Configuration(_))
        ));
        assert!(s
            .apply_polynomial(&OperatorPolynomial::create(other))
            .is_err());
    }

    #[test]
    fn identity_and_number_operator() {
        let m = one_mode();
        let s = FockState::basis(&m, 8, &[3]).unwrap();
        assert_eq!(
            s.apply_polynomial(&OperatorPolynomial::identity()).unwrap(),
            s
        );
        let n = s
            .apply_polynomial(&OperatorPolynomial::number(m[0]))
            .unwrap();
        assert_relative_eq!(n.amplitude(&[3]).re, 3.0, epsilon = 1e-14);
    }

    #[test]
    fn bogoliubov_like_pair_on_vacuum() {
        // (b† + 0.5 b′)(b′† + 0.5 b)|0,0⟩ = |1,1⟩ + 0.5|0,0⟩
        let m = two_modes();
        let (b, bp) = (m[0], m[1]);
        let left = OperatorPolynomial::create(b) + OperatorPolynomial::annihilate(bp).scale(c(0.5));
        let right =
            OperatorPolynomial::create(bp) + OperatorPolynomial::annihilate(b).scale(c(0.5));
        let v = FockState::vacuum(&m, 5).unwrap();
        let out = v.apply_polynomial(&(left * right)).unwrap();
        assert_eq!(out.support_len(), 2);
        assert_relative_eq!(out.amplitude(&[1, 1]).re, 1.0, epsilon = 1e-15);
        assert_relative_eq!(out.amplitude(&[0, 0]).re, 0.5, epsilon = 1e-15);
    }

    #[test]
    fn inner_product_basics() {
        let m = two_modes();
        let v = FockState::vacuum(&m, 3).unwrap();
        assert_eq!(v.inner_product(&v).unwrap(), c(1.0));
        let a = FockState::basis(&m, 3, &[1, 0]).unwrap();
        let b = FockState::basis(&m, 3, &[0, 1]).unwrap();
        assert_eq!(a.inner_product(&b).unwrap(), c(0.0));
        let other = FockState::vacuum(&one_mode(), 3).unwrap();
        assert!(v.inner_product(&other).is_err());
        let other_cap = FockState::vacuum(&m, 4).unwrap();
        assert!(v.inner_product(&other_cap).is_err());
    }

    #[test]
    fn tensor_concatenates_and_multiplies() {
        let m = two_modes();
        let a =
            FockState::from_amplitudes(&m[..1], 3, [(vec![0], c(0.6)), (vec![2], c(0.8))]).unwrap();
        let b =
            FockState::from_amplitudes(&m[1..], 3, [(vec![1], Complex64::new(0.0, 1.0))]).unwrap();
        let t = a.tensor(&b).unwrap();
        assert_eq!(t.modes(), &m[..]);
        assert_relative_eq!(t.norm(), 1.0, epsilon = 1e-15);
        assert_eq!(t.amplitude(&[2, 1]), Complex64::new(0.0, 0.8));
        assert!(a.tensor(&a).is_err());

        let va = FockState::vacuum(&m[..1], 3).unwrap();
        let vb = FockState::vacuum(&m[1..], 3).unwrap();
        assert_eq!(va.tensor(&vb).unwrap(), FockState::vacuum(&m, 3).unwrap());
    }

    #[test]
    fn number_expectation_of_squeezed_series() {
        // normalized Σ ε^n |n,n⟩ has ⟨n⟩ = ε²/(1−ε²) per mode
        let m = two_modes();
        let eps: f64 = 0.5;
        let s = FockState::from_amplitudes(
            &m,
            80,
            (0..=80).map(|n| (vec![n, n], c(eps.powi(n as i32)))),
        )
        .unwrap()
        .normalize()
        .unwrap();
        assert_relative_eq!(
            s.number_expectation(&m[0]).unwrap(),
            1.0 / 3.0,
            epsilon = 1e-14
        );
        assert_relative_eq!(
            s.number_expectation(&m[1]).unwrap(),
            1.0 / 3.0,
            epsilon = 1e-14
        );
    }

    #[test]
    fn restrict_moves_weight_to_loss() {
        let m = one_mode();
        let s = FockState::from_amplitudes(&m, 5, [(vec![1], c(0.6)), (vec![5], c(0.8))]).unwrap();
        let r = s.restrict_truncation(3).unwrap();
        assert_eq!(r.truncation(), 3);
        assert_relative_eq!(r.norm_sqr() + r.truncation_loss(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn permute_modes_moves_entries() {
        let m = two_modes();
        let s = FockState::basis(&m, 3, &[2, 1]).unwrap();
        let p = s.permute_modes(&[m[1], m[0]]).unwrap();
        assert_eq!(p.amplitude(&[1, 2]), c(1.0));
        assert!(s.permute_modes(&[m[0]]).is_err());
    }
}
