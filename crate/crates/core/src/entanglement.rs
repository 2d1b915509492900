//! Entanglement diagnostics: reduced density matrices, partial transpose,
//! negativity, Schmidt entropy and two-qubit concurrence.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::measurement::DEFAULT_PROBABILITY_FLOOR;
use crate::mode::ModeId;
use crate::state::{FockState, Occupation};

/// Eigenvalues above −1e−10 are numerical noise, not negativity.
pub const NEGATIVE_EIGENVALUE_TOLERANCE: f64 = 1e-10;

/// Largest basis a dense matrix may be built on.
pub const DEFAULT_DENSE_CAP: usize = 4096;

const PURITY_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Side {
    A,
    B,
    /// Traced out before any diagnostic is computed.
    Traced,
}

/// Side assignment for every mode of a state, in registry order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Partition {
    sides: Vec<Side>,
}

impl Partition {
    pub fn new(sides: Vec<Side>) -> Self {
        Partition { sides }
    }

    /// `side_a` vs `side_b`, every other mode of `modes` traced out.
    pub fn split(modes: &[ModeId], side_a: &[ModeId], side_b: &[ModeId]) -> Result<Self> {
        if side_a.is_empty() || side_b.is_empty() {
            return Err(Error::config(
                "both sides of a bipartition need at least one mode",
            ));
        }
        let mut sides = vec![Side::Traced; modes.len()];
        for (list, side) in [(side_a, Side::A), (side_b, Side::B)] {
            for m in list {
                let i = modes
                    .iter()
                    .position(|x| x == m)
                    .ok_or_else(|| Error::config(format!("mode {m} is not registered")))?;
                if sides[i] != Side::Traced {
                    return Err(Error::config(format!("mode {m} assigned to both sides")));
                }
                sides[i] = side;
            }
        }
        Ok(Partition { sides })
    }

    pub fn sides(&self) -> &[Side] {
        &self.sides
    }

    fn check(&self, state: &FockState) -> Result<()> {
        if self.sides.len() != state.modes().len() {
            return Err(Error::config(format!(
                "partition lists {} modes, state has {}",
                self.sides.len(),
                state.modes().len()
            )));
        }
        if !self.sides.contains(&Side::A) || !self.sides.contains(&Side::B) {
            return Err(Error::config("partition must put modes on both sides"));
        }
        Ok(())
    }
}

/// Dense Hermitian matrix over the populated occupation vectors of the
/// non-traced modes.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    modes: Vec<ModeId>,
    sides: Vec<Side>,
    basis: Vec<Occupation>,
    matrix: DMatrix<Complex64>,
}

impl DensityMatrix {
    pub fn modes(&self) -> &[ModeId] {
        &self.modes
    }

    pub fn sides(&self) -> &[Side] {
        &self.sides
    }

    pub fn basis(&self) -> &[Occupation] {
        &self.basis
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn trace(&self) -> Complex64 {
        self.matrix.trace()
    }

    /// tr(ρ²).
    pub fn purity(&self) -> f64 {
        // tr(ρ²) = Σ |ρ_ij|² for Hermitian ρ
        self.matrix.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn hermiticity_error(&self) -> f64 {
        let n = self.dim();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self.matrix[(i, j)] - self.matrix[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// Ascending eigenvalues.
    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.matrix)
    }

    fn split(&self, occ: &[u32]) -> (Occupation, Occupation) {
        let mut a = Vec::new();
        let mut b = Vec::new();
        for (&n, side) in occ.iter().zip(&self.sides) {
            match side {
                Side::A => a.push(n),
                _ => b.push(n),
            }
        }
        (a, b)
    }

    fn join(&self, a: &[u32], b: &[u32]) -> Occupation {
        let (mut ia, mut ib) = (a.iter(), b.iter());
        self.sides
            .iter()
            .map(|s| match s {
                Side::A => *ia.next().unwrap(),
                _ => *ib.next().unwrap(),
            })
            .collect()
    }
}

pub fn density_matrix(state: &FockState, partition: &Partition) -> Result<DensityMatrix> {
    density_matrix_with_cap(state, partition, DEFAULT_DENSE_CAP)
}

/// ρ = |ψ⟩⟨ψ| / ⟨ψ|ψ⟩ reduced to the non-traced modes.
pub fn density_matrix_with_cap(
    state: &FockState,
    partition: &Partition,
    cap: usize,
) -> Result<DensityMatrix> {
    partition.check(state)?;
    let norm = state.norm_sqr();
    if norm <= 0.0 {
        return Err(Error::domain("density matrix of a zero state"));
    }
    let kept_idx: Vec<usize> = (0..state.modes().len())
        .filter(|&i| partition.sides[i] != Side::Traced)
        .collect();
    let traced_idx: Vec<usize> = (0..state.modes().len())
        .filter(|&i| partition.sides[i] == Side::Traced)
        .collect();

    // group amplitudes by the traced part
    let mut groups: BTreeMap<Occupation, Vec<(Occupation, Complex64)>> = BTreeMap::new();
    let mut basis_set = BTreeSet::new();
    for (occ, a) in state.amplitudes() {
        let kept: Occupation = kept_idx.iter().map(|&i| occ[i]).collect();
        let traced: Occupation = traced_idx.iter().map(|&i| occ[i]).collect();
        basis_set.insert(kept.clone());
        groups.entry(traced).or_default().push((kept, *a));
    }
    let basis: Vec<Occupation> = basis_set.into_iter().collect();
    if basis.len() > cap {
        return Err(Error::Resource(format!(
            "density matrix basis of {} exceeds the dense cap {cap}",
            basis.len()
        )));
    }
    let index: HashMap<&Occupation, usize> =
        basis.iter().enumerate().map(|(i, b)| (b, i)).collect();
    let mut matrix = DMatrix::zeros(basis.len(), basis.len());
    for entries in groups.values() {
        for (ki, ai) in entries {
            for (kj, aj) in entries {
                matrix[(index[ki], index[kj])] += ai * aj.conj() / norm;
            }
        }
    }
    Ok(DensityMatrix {
        modes: kept_idx.iter().map(|&i| state.modes()[i]).collect(),
        sides: kept_idx.iter().map(|&i| partition.sides[i]).collect(),
        basis,
        matrix,
    })
}

/// ρ^PT with ⟨i;j|ρ^PT|k;l⟩ = ⟨k;j|ρ|i;l⟩, side-A indices transposed.
pub fn partial_transpose(rho: &DensityMatrix) -> Result<DensityMatrix> {
    partial_transpose_side(rho, Side::A, DEFAULT_DENSE_CAP)
}

/// Partial transpose of either side. The result lives on the product of the
/// populated A and B sub-bases, which the transpose may need even when ρ
/// does not.
pub fn partial_transpose_side(
    rho: &DensityMatrix,
    side: Side,
    cap: usize,
) -> Result<DensityMatrix> {
    if side == Side::Traced {
        return Err(Error::config("can only transpose side A or side B"));
    }
    if !rho.sides.contains(&Side::A) || !rho.sides.contains(&Side::B) {
        return Err(Error::config("partial transpose needs modes on both sides"));
    }
    let parts: Vec<(Occupation, Occupation)> = rho.basis.iter().map(|o| rho.split(o)).collect();
    let a_set: BTreeSet<&Occupation> = parts.iter().map(|p| &p.0).collect();
    let b_set: BTreeSet<&Occupation> = parts.iter().map(|p| &p.1).collect();
    let dim = a_set.len() * b_set.len();
    if dim > cap {
        return Err(Error::Resource(format!(
            "partial-transpose basis of {dim} exceeds the dense cap {cap}"
        )));
    }
    let mut basis: Vec<Occupation> = a_set
        .iter()
        .flat_map(|a| b_set.iter().map(move |b| (a, b)))
        .map(|(a, b)| rho.join(a, b))
        .collect();
    basis.sort();
    let index: HashMap<Occupation, usize> = basis
        .iter()
        .enumerate()
        .map(|(i, b)| (b.clone(), i))
        .collect();

    let mut matrix = DMatrix::zeros(dim, dim);
    for (r, (ka, jb)) in parts.iter().enumerate() {
        for (c, (ia, lb)) in parts.iter().enumerate() {
            let v = rho.matrix[(r, c)];
            if v == Complex64::new(0.0, 0.0) {
                continue;
            }
            let (row, col) = match side {
                Side::A => (rho.join(ia, jb), rho.join(ka, lb)),
                _ => (rho.join(ka, lb), rho.join(ia, jb)),
            };
            matrix[(index[&row], index[&col])] = v;
        }
    }
    Ok(DensityMatrix {
        modes: rho.modes.clone(),
        sides: rho.sides.clone(),
        basis,
        matrix,
    })
}

/// Ascending eigenvalues of a Hermitian matrix. Decoupled blocks (connected
/// components of the sparsity graph) are diagonalized separately.
pub fn hermitian_eigenvalues(m: &DMatrix<Complex64>) -> Vec<f64> {
    let n = m.nrows();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if m[(i, j)] != Complex64::new(0.0, 0.0) || m[(j, i)] != Complex64::new(0.0, 0.0) {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri] = rj;
                }
            }
        }
    }
    let mut blocks: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..n {
        let r = find(&mut parent, i);
        blocks.entry(r).or_default().push(i);
    }
    let mut out = Vec::with_capacity(n);
    for idx in blocks.values() {
        if idx.len() == 1 {
            out.push(m[(idx[0], idx[0])].re);
            continue;
        }
        let sub = DMatrix::from_fn(idx.len(), idx.len(), |r, c| m[(idx[r], idx[c])]);
        out.extend(SymmetricEigen::new(sub).eigenvalues.iter().copied());
    }
    out.sort_by(|a, b| a.total_cmp(b));
    out
}

/// −Σ p log₂ p over strictly positive p.
pub fn entropy_bits(probabilities: &[f64]) -> f64 {
    probabilities
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.log2())
        .sum::<f64>()
        .max(0.0)
}

/// Squared Schmidt coefficients of a pure state across A|B, descending.
/// Every mode must be on side A or B.
pub fn schmidt_probabilities(state: &FockState, partition: &Partition) -> Result<Vec<f64>> {
    partition.check(state)?;
    if partition.sides.contains(&Side::Traced) {
        return Err(Error::config(
            "Schmidt decomposition needs a partition without traced modes",
        ));
    }
    let norm = state.norm_sqr();
    if norm <= 0.0 {
        return Err(Error::domain("Schmidt decomposition of a zero state"));
    }
    let split = |occ: &[u32]| {
        let mut a = Vec::new();
        let mut b = Vec::new();
        for (&n, s) in occ.iter().zip(&partition.sides) {
            if *s == Side::A {
                a.push(n)
            } else {
                b.push(n)
            }
        }
        (a, b)
    };
    let mut rows = BTreeMap::new();
    let mut cols = BTreeMap::new();
    let mut entries = Vec::new();
    for (occ, amp) in state.amplitudes() {
        let (a, b) = split(occ);
        let nr = rows.len();
        let r = *rows.entry(a).or_insert(nr);
        let nc = cols.len();
        let c = *cols.entry(b).or_insert(nc);
        entries.push((r, c, *amp));
    }
    let mut mat = DMatrix::<Complex64>::zeros(rows.len(), cols.len());
    for (r, c, a) in entries {
        mat[(r, c)] = a / norm.sqrt();
    }
    let sv = mat.svd(false, false).singular_values;
    let mut p: Vec<f64> = sv.iter().map(|s| s * s).collect();
    p.sort_by(|a, b| b.total_cmp(a));
    Ok(p)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntanglementReport {
    pub ppt_min_eigenvalue: f64,
    /// Σ |λ| over eigenvalues of ρ^PT below −[`NEGATIVE_EIGENVALUE_TOLERANCE`].
    pub negativity: f64,
    /// Entanglement entropy in bits; only for pure (reduced) states.
    pub entropy_bits: Option<f64>,
    pub concurrence: Option<f64>,
    pub purity: f64,
}

impl EntanglementReport {
    pub fn is_entangled(&self) -> bool {
        self.ppt_min_eigenvalue < -NEGATIVE_EIGENVALUE_TOLERANCE
    }
}

pub fn ppt_report(state: &FockState, partition: &Partition) -> Result<EntanglementReport> {
    ppt_report_with_cap(state, partition, DEFAULT_DENSE_CAP)
}

pub fn ppt_report_with_cap(
    state: &FockState,
    partition: &Partition,
    cap: usize,
) -> Result<EntanglementReport> {
    let rho = density_matrix_with_cap(state, partition, cap)?;
    let pt = partial_transpose_side(&rho, Side::A, cap)?;
    let spectrum = pt.eigenvalues();
    let min = spectrum.first().copied().unwrap_or(0.0);
    let negativity = spectrum
        .iter()
        .filter(|&&l| l < -NEGATIVE_EIGENVALUE_TOLERANCE)
        .map(|l| -l)
        .sum();
    let purity = rho.purity();
    let entropy = if !partition.sides.contains(&Side::Traced) {
        Some(entropy_bits(&schmidt_probabilities(state, partition)?))
    } else if (1.0 - purity).abs() <= PURITY_TOLERANCE {
        Some(entropy_bits(&reduced_a_spectrum(&rho)))
    } else {
        None
    };
    Ok(EntanglementReport {
        ppt_min_eigenvalue: min,
        negativity,
        entropy_bits: entropy,
        concurrence: None,
        purity,
    })
}

fn reduced_a_spectrum(rho: &DensityMatrix) -> Vec<f64> {
    let parts: Vec<(Occupation, Occupation)> = rho.basis.iter().map(|o| rho.split(o)).collect();
    let a_parts: BTreeSet<&Occupation> = parts.iter().map(|p| &p.0).collect();
    let a_index: HashMap<&Occupation, usize> =
        a_parts.iter().enumerate().map(|(i, a)| (*a, i)).collect();
    let mut red = DMatrix::<Complex64>::zeros(a_parts.len(), a_parts.len());
    for (r, (ar, br)) in parts.iter().enumerate() {
        for (c, (ac, bc)) in parts.iter().enumerate() {
            if br == bc {
                red[(a_index[ar], a_index[ac])] += rho.matrix[(r, c)];
            }
        }
    }
    hermitian_eigenvalues(&red)
}

/// 2|c1||c2| / (|c1|² + |c2|²) for the state c1|00⟩ + c2|11⟩.
pub fn concurrence_two_qubit(c1: Complex64, c2: Complex64) -> Result<f64> {
    let w = c1.norm_sqr() + c2.norm_sqr();
    if w < DEFAULT_PROBABILITY_FLOOR {
        return Err(Error::ZeroProbability {
            message: "both two-qubit amplitudes vanish; post-selection is impossible".into(),
            probability: w,
            underflow: w > 0.0,
        });
    }
    Ok((2.0 * c1.norm() * c2.norm() / w).min(1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mode::Branch;
    use approx::assert_relative_eq;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn modes(n: usize) -> Vec<ModeId> {
        (0..n)
            .map(|i| ModeId::minkowski(Branch::I, i as u16, 0.3).unwrap())
            .collect()
    }

    fn ab() -> Partition {
        Partition::new(vec![Side::A, Side::B])
    }

    #[test]
    fn pure_basis_state_is_rank_one() {
        let m = modes(2);
        let s = FockState::basis(&m, 3, &[1, 2]).unwrap();
        let rho = density_matrix(&s, &ab()).unwrap();
        assert_eq!(rho.dim(), 1);
        assert_relative_eq!(rho.trace().re, 1.0);
        assert_relative_eq!(rho.purity(), 1.0);
    }

    #[test]
    fn bell_state_min_eigenvalue() {
        let m = modes(2);
        let h = 0.5f64.sqrt();
        let s =
            FockState::from_amplitudes(&m, 1, [(vec![0, 0], c(h)), (vec![1, 1], c(h))]).unwrap();
        let rho = density_matrix(&s, &ab()).unwrap();
        assert_relative_eq!(rho.purity(), 1.0, epsilon = 1e-15);
        let pt = partial_transpose(&rho).unwrap();
        assert_eq!(pt.dim(), 4);
        let ev = pt.eigenvalues();
        assert_relative_eq!(ev[0], -0.5, epsilon = 1e-14);
        assert_relative_eq!(pt.trace().re, 1.0, epsilon = 1e-14);
        assert!(pt.hermiticity_error() < 1e-15);
        let rep = ppt_report(&s, &ab()).unwrap();
        assert_relative_eq!(rep.negativity, 0.5, epsilon = 1e-14);
        assert_relative_eq!(rep.entropy_bits.unwrap(), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn product_state_stays_positive() {
        let m = modes(2);
        let s = FockState::from_amplitudes(
            &m,
            2,
            [
                (vec![0, 0], c(0.6 * 0.8)),
                (vec![0, 1], c(0.6 * 0.6)),
                (vec![2, 0], c(0.8 * 0.8)),
                (vec![2, 1], c(0.8 * 0.6)),
            ],
        )
        .unwrap();
        let rep = ppt_report(&s, &ab()).unwrap();
        assert!(rep.ppt_min_eigenvalue >= -NEGATIVE_EIGENVALUE_TOLERANCE);
        assert_eq!(rep.negativity, 0.0);
        assert!(rep.entropy_bits.unwrap() < 1e-12);
    }

    #[test]
    fn vacuum_report() {
        let s = FockState::vacuum(&modes(2), 4).unwrap();
        let rep = ppt_report(&s, &ab()).unwrap();
        assert_eq!(rep.negativity, 0.0);
        assert_eq!(rep.entropy_bits, Some(0.0));
        assert!(!rep.is_entangled());
    }

    #[test]
    fn two_mode_squeezed_entropy_matches_series_weights() {
        let m = modes(2);
        let eps: f64 = 0.5;
        let n = 12;
        let s = FockState::from_amplitudes(
            &m,
            n,
            (0..=n).map(|k| (vec![k, k], c((-eps).powi(k as i32)))),
        )
        .unwrap()
        .normalize()
        .unwrap();
        let rep = ppt_report(&s, &ab()).unwrap();
        assert!(rep.negativity > 0.0);
        let z: f64 = (0..=n).map(|k| eps.powi(2 * k as i32)).sum();
        let p: Vec<f64> = (0..=n).map(|k| eps.powi(2 * k as i32) / z).collect();
        assert_relative_eq!(rep.entropy_bits.unwrap(), entropy_bits(&p), epsilon = 1e-12);
    }

    #[test]
    fn traced_modes_reduce() {
        // (Bell on 0,1) ⊗ |1⟩ on mode 2: reduced state on 0|1 is still pure Bell
        let m = modes(3);
        let h = 0.5f64.sqrt();
        let s = FockState::from_amplitudes(&m, 1, [(vec![0, 0, 1], c(h)), (vec![1, 1, 1], c(h))])
            .unwrap();
        let p = Partition::split(&m, &[m[0]], &[m[1]]).unwrap();
        let rep = ppt_report(&s, &p).unwrap();
        assert_relative_eq!(rep.ppt_min_eigenvalue, -0.5, epsilon = 1e-14);
        assert_relative_eq!(rep.entropy_bits.unwrap(), 1.0, epsilon = 1e-12);

        // GHZ traced to two modes is mixed and separable
        let g = FockState::from_amplitudes(&m, 1, [(vec![0, 0, 0], c(h)), (vec![1, 1, 1], c(h))])
            .unwrap();
        let rep = ppt_report(&g, &p).unwrap();
        assert!(rep.entropy_bits.is_none());
        assert_relative_eq!(rep.purity, 0.5, epsilon = 1e-14);
        assert!(!rep.is_entangled());
    }

    #[test]
    fn partition_errors() {
        let m = modes(2);
        assert!(Partition::split(&m, &[], &[m[1]]).is_err());
        assert!(Partition::split(&m, &[m[0]], &[m[0]]).is_err());
        let s = FockState::vacuum(&m, 2).unwrap();
        assert!(density_matrix(&s, &Partition::new(vec![Side::A, Side::A])).is_err());
        assert!(density_matrix(&s, &Partition::new(vec![Side::A])).is_err());
    }

    #[test]
    fn dense_cap_is_enforced() {
        let m = modes(2);
        let s = FockState::from_amplitudes(&m, 40, (0..=40).map(|k| (vec![k, k], c(1.0)))).unwrap();
        assert!(matches!(
            ppt_report_with_cap(&s, &ab(), 100),
            Err(Error::Resource(_))
        ));
    }

    #[test]
    fn concurrence_values() {
        assert_relative_eq!(concurrence_two_qubit(c(0.3), c(0.3)).unwrap(), 1.0);
        assert_eq!(concurrence_two_qubit(c(0.3), c(0.0)).unwrap(), 0.0);
        assert_relative_eq!(
            concurrence_two_qubit(c(0.30), c(0.14)).unwrap(),
            0.084 / 0.1096,
            epsilon = 1e-14
        );
        assert!(matches!(
            concurrence_two_qubit(c(0.0), c(0.0)),
            Err(Error::ZeroProbability { .. })
        ));
    }
}
