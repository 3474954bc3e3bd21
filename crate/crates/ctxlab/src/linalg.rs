//! Complex matrix primitives: kets, projectors, density matrices, and the
//! tolerance-based predicates (commutation, orthogonality, ordering) the rest
//! of the crate is built on.
//!
//! All comparisons use the Frobenius norm against `EPS_MAT`. Ranks are read
//! off rounded traces, never from eigenvalue counts.

use crate::{Error, Result};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

/// Shorthand for the scalar type used throughout.
pub type C64 = Complex64;
/// Shorthand for dynamically sized complex matrices.
pub type CMat = DMatrix<C64>;

/// Matrix comparison tolerance (Frobenius norm).
pub const EPS_MAT: f64 = 1e-9;

/// Granularity used for rounding matrix entries into canonical sort and
/// dedup keys.
pub const KEY_GRANULARITY: f64 = 1e-6;

/// A nonzero complex vector; the ray it spans defines an atomic event.
#[derive(Debug, Clone, PartialEq)]
pub struct Ket {
    v: DVector<C64>,
}

impl Ket {
    /// Wraps a coefficient vector. Rejects empty and (numerically) zero
    /// vectors.
    pub fn new(entries: Vec<C64>) -> Result<Ket> {
        if entries.is_empty() {
            return Err(Error::ZeroKet);
        }
        let v = DVector::from_vec(entries);
        if v.norm() < 1e-12 {
            return Err(Error::ZeroKet);
        }
        Ok(Ket { v })
    }

    /// Convenience constructor from real coefficients.
    pub fn from_reals(entries: &[f64]) -> Result<Ket> {
        Ket::new(entries.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn dim(&self) -> usize {
        self.v.len()
    }

    pub fn coefficients(&self) -> &DVector<C64> {
        &self.v
    }

    /// Unit vector along the same ray.
    pub fn normalized(&self) -> Ket {
        Ket {
            v: &self.v / C64::new(self.v.norm(), 0.0),
        }
    }

    /// Kronecker product of two kets.
    pub fn tensor(&self, other: &Ket) -> Ket {
        Ket {
            v: self.v.kronecker(&other.v),
        }
    }
}

/// An orthogonal projector, validated as Hermitian and idempotent. The rank
/// is the rounded trace.
#[derive(Debug, Clone)]
pub struct Projector {
    mat: CMat,
    rank: usize,
}

impl Projector {
    /// Validates a square matrix as a projector: Hermitian and idempotent
    /// within `EPS_MAT`, with integer trace.
    pub fn new(mat: CMat) -> Result<Projector> {
        if !mat.is_square() {
            return Err(Error::NotProjector(format!(
                "matrix is {}x{}, expected square",
                mat.nrows(),
                mat.ncols()
            )));
        }
        let herm = (&mat - mat.adjoint()).norm();
        if herm > EPS_MAT {
            return Err(Error::NotProjector(format!(
                "not Hermitian (deviation {herm:.3e})"
            )));
        }
        let idem = (&mat * &mat - &mat).norm();
        if idem > EPS_MAT {
            return Err(Error::NotProjector(format!(
                "not idempotent (deviation {idem:.3e})"
            )));
        }
        let tr = mat.trace();
        let rank = tr.re.round();
        if (tr.re - rank).abs() > 1e-6 || tr.im.abs() > 1e-6 || rank < 0.0 {
            return Err(Error::NotProjector(format!(
                "trace {tr} is not a nonnegative integer"
            )));
        }
        Ok(Projector {
            mat,
            rank: rank as usize,
        })
    }

    /// The identity projector on a `dim`-dimensional space.
    pub fn identity(dim: usize) -> Projector {
        Projector {
            mat: CMat::identity(dim, dim),
            rank: dim,
        }
    }

    /// The zero projector on a `dim`-dimensional space.
    pub fn zero(dim: usize) -> Projector {
        Projector {
            mat: CMat::zeros(dim, dim),
            rank: 0,
        }
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn matrix(&self) -> &CMat {
        &self.mat
    }

    /// `I - P`, built exactly from the stored matrix.
    pub fn complement(&self) -> Projector {
        Projector {
            mat: CMat::identity(self.dim(), self.dim()) - &self.mat,
            rank: self.dim() - self.rank,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.rank == 0
    }

    /// Equality up to `EPS_MAT` in Frobenius norm.
    pub fn approx_eq(&self, other: &Projector) -> bool {
        self.dim() == other.dim() && (&self.mat - &other.mat).norm() < EPS_MAT
    }

    /// Canonical ordering key: rank first, then entries rounded at
    /// `KEY_GRANULARITY`, row-major.
    pub fn sort_key(&self) -> (usize, Vec<(i64, i64)>) {
        (self.rank, matrix_key(&self.mat))
    }
}

/// Entries rounded to the key granularity, row-major. Used for dedup
/// bucketing and canonical sorting; ties are broken by actual comparison.
pub fn matrix_key(m: &CMat) -> Vec<(i64, i64)> {
    let mut key = Vec::with_capacity(m.nrows() * m.ncols());
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            let z = m[(i, j)];
            key.push((
                (z.re / KEY_GRANULARITY).round() as i64,
                (z.im / KEY_GRANULARITY).round() as i64,
            ));
        }
    }
    key
}

fn check_same_dim(p: &Projector, q: &Projector) -> Result<()> {
    if p.dim() != q.dim() {
        return Err(Error::DimensionMismatch(format!(
            "projectors act on dimensions {} and {}",
            p.dim(),
            q.dim()
        )));
    }
    Ok(())
}

/// Rank-1 projector onto the ray of `ket`.
pub fn projector_from_ket(ket: &Ket) -> Projector {
    let u = ket.normalized();
    let mat = u.coefficients() * u.coefficients().adjoint();
    // Hermitize to kill rounding asymmetry before storing.
    let mat = (&mat + mat.adjoint()) * C64::new(0.5, 0.0);
    Projector { mat, rank: 1 }
}

/// Whether `[P, Q] = 0` within `EPS_MAT`.
pub fn commutes(p: &Projector, q: &Projector) -> Result<bool> {
    check_same_dim(p, q)?;
    let comm = p.matrix() * q.matrix() - q.matrix() * p.matrix();
    Ok(comm.norm() < EPS_MAT)
}

/// Whether `PQ = 0` within `EPS_MAT` (exclusive events).
pub fn is_orthogonal(p: &Projector, q: &Projector) -> Result<bool> {
    check_same_dim(p, q)?;
    Ok((p.matrix() * q.matrix()).norm() < EPS_MAT)
}

/// Whether `P <= Q` in the projector order, i.e. `QP = P` within `EPS_MAT`.
pub fn leq(p: &Projector, q: &Projector) -> Result<bool> {
    check_same_dim(p, q)?;
    Ok((q.matrix() * p.matrix() - p.matrix()).norm() < EPS_MAT)
}

/// Meet (product) of two commuting projectors. The product is symmetrized as
/// `(PQ + QP) / 2` and revalidated; non-commuting inputs are rejected with
/// the commutator norm.
pub fn meet_commuting(p: &Projector, q: &Projector) -> Result<Projector> {
    check_same_dim(p, q)?;
    let comm = p.matrix() * q.matrix() - q.matrix() * p.matrix();
    let norm = comm.norm();
    if norm >= EPS_MAT {
        return Err(Error::NonCommuting { norm });
    }
    let m = (p.matrix() * q.matrix() + q.matrix() * p.matrix()) * C64::new(0.5, 0.0);
    let m = clean_matrix(&((&m + m.adjoint()) * C64::new(0.5, 0.0)));
    Projector::new(m)
}

/// Join of two commuting projectors, via De Morgan on `meet_commuting`.
pub fn join_commuting(p: &Projector, q: &Projector) -> Result<Projector> {
    Ok(meet_commuting(&p.complement(), &q.complement())?.complement())
}

/// Zeroes out entries below 1e-12 to stabilize dedup keys; leaves everything
/// else untouched.
fn clean_matrix(m: &CMat) -> CMat {
    m.map(|z| {
        C64::new(
            if z.re.abs() < 1e-12 { 0.0 } else { z.re },
            if z.im.abs() < 1e-12 { 0.0 } else { z.im },
        )
    })
}

/// Kronecker product.
pub fn tensor(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}

/// Kronecker product of projectors.
pub fn tensor_projectors(a: &Projector, b: &Projector) -> Projector {
    Projector {
        mat: a.matrix().kronecker(b.matrix()),
        rank: a.rank() * b.rank(),
    }
}

/// Single-qubit observable axes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PauliAxis {
    X,
    Y,
    Z,
}

/// The 2x2 matrix of a Pauli observable.
pub fn pauli_matrix(axis: PauliAxis) -> CMat {
    let z = C64::new(0.0, 0.0);
    let one = C64::new(1.0, 0.0);
    let i = C64::new(0.0, 1.0);
    match axis {
        PauliAxis::X => CMat::from_row_slice(2, 2, &[z, one, one, z]),
        PauliAxis::Y => CMat::from_row_slice(2, 2, &[z, -i, i, z]),
        PauliAxis::Z => CMat::from_row_slice(2, 2, &[one, z, z, -one]),
    }
}

/// Eigenprojector of a Pauli observable: `(I + sign * M) / 2`.
pub fn pauli(axis: PauliAxis, sign: i8) -> Result<Projector> {
    if sign != 1 && sign != -1 {
        return Err(Error::BadInput(format!(
            "Pauli outcome must be +1 or -1, got {sign}"
        )));
    }
    Ok(eigenprojector_involution(&pauli_matrix(axis), sign))
}

/// Eigenprojector `(I + sign * M) / 2` of an involution (`M^2 = I`) with
/// eigenvalues +1/-1. The caller guarantees `M` is an involution.
pub fn eigenprojector_involution(m: &CMat, sign: i8) -> Projector {
    let dim = m.nrows();
    let s = C64::new(f64::from(sign), 0.0);
    let mat = (CMat::identity(dim, dim) + m * s) * C64::new(0.5, 0.0);
    Projector::new(clean_matrix(&mat)).expect("involution eigenprojector must validate")
}

/// A density matrix: Hermitian, unit trace, positive semidefinite within
/// `EPS_MAT` (smallest eigenvalue allowed down to `-EPS_MAT`).
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    mat: CMat,
}

impl DensityMatrix {
    pub fn new(mat: CMat) -> Result<DensityMatrix> {
        if !mat.is_square() {
            return Err(Error::NotDensity(format!(
                "matrix is {}x{}, expected square",
                mat.nrows(),
                mat.ncols()
            )));
        }
        let herm = (&mat - mat.adjoint()).norm();
        if herm > EPS_MAT {
            return Err(Error::NotDensity(format!(
                "not Hermitian (deviation {herm:.3e})"
            )));
        }
        let tr = mat.trace();
        if (tr.re - 1.0).abs() > EPS_MAT || tr.im.abs() > EPS_MAT {
            return Err(Error::NotDensity(format!("trace {tr} is not 1")));
        }
        let hermitized = (&mat + mat.adjoint()) * C64::new(0.5, 0.0);
        let eigs = hermitized.symmetric_eigen().eigenvalues;
        let min = eigs.iter().cloned().fold(f64::INFINITY, f64::min);
        if min < -EPS_MAT {
            return Err(Error::NotDensity(format!(
                "not positive semidefinite (smallest eigenvalue {min:.3e})"
            )));
        }
        Ok(DensityMatrix { mat })
    }

    /// The maximally mixed state `I / dim`.
    pub fn maximally_mixed(dim: usize) -> DensityMatrix {
        DensityMatrix {
            mat: CMat::identity(dim, dim) * C64::new(1.0 / dim as f64, 0.0),
        }
    }

    /// The pure state `|k><k|` for a (not necessarily normalized) ket.
    pub fn pure(ket: &Ket) -> Result<DensityMatrix> {
        let p = projector_from_ket(ket);
        Ok(DensityMatrix {
            mat: p.matrix().clone(),
        })
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &CMat {
        &self.mat
    }
}

/// Born probability `Re tr(rho P)`, clamped to `[0, 1]`.
pub fn born_probability(rho: &DensityMatrix, p: &Projector) -> Result<f64> {
    if rho.dim() != p.dim() {
        return Err(Error::DimensionMismatch(format!(
            "density matrix dimension {} vs projector dimension {}",
            rho.dim(),
            p.dim()
        )));
    }
    let raw = (rho.matrix() * p.matrix()).trace().re;
    Ok(raw.clamp(0.0, 1.0))
}

/// Frobenius distance between raw matrices.
pub fn frobenius_distance(a: &CMat, b: &CMat) -> f64 {
    (a - b).norm()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn basis_projector(dim: usize, k: usize) -> Projector {
        let mut v = vec![c(0.0, 0.0); dim];
        v[k] = c(1.0, 0.0);
        projector_from_ket(&Ket::new(v).unwrap())
    }

    #[test]
    fn ket_rejects_zero_and_empty() {
        assert!(matches!(Ket::new(vec![]), Err(Error::ZeroKet)));
        assert!(matches!(
            Ket::new(vec![c(0.0, 0.0), c(0.0, 0.0)]),
            Err(Error::ZeroKet)
        ));
    }

    #[test]
    fn projector_from_unnormalized_ket() {
        let k = Ket::new(vec![c(1.0, 0.0), c(0.0, 1.0)]).unwrap();
        let p = projector_from_ket(&k);
        assert_eq!(p.rank(), 1);
        assert!((p.matrix()[(0, 0)] - c(0.5, 0.0)).norm() < 1e-12);
        assert!((p.matrix()[(0, 1)] - c(0.0, -0.5)).norm() < 1e-12);
        assert!((p.matrix()[(1, 0)] - c(0.0, 0.5)).norm() < 1e-12);
        assert!((p.matrix()[(1, 1)] - c(0.5, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn projector_validation_rejects_non_idempotent() {
        let m = CMat::from_row_slice(2, 2, &[c(0.5, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.5, 0.0)]);
        assert!(matches!(Projector::new(m), Err(Error::NotProjector(_))));
    }

    #[test]
    fn pauli_projectors_are_exact() {
        let zp = pauli(PauliAxis::Z, 1).unwrap();
        assert_eq!(zp.rank(), 1);
        assert!((zp.matrix()[(0, 0)] - c(1.0, 0.0)).norm() < 1e-15);
        assert!(zp.matrix()[(1, 1)].norm() < 1e-15);
        let ym = pauli(PauliAxis::Y, -1).unwrap();
        assert!((ym.matrix()[(0, 1)] - c(0.0, 0.5)).norm() < 1e-15);
        assert!(pauli(PauliAxis::X, 0).is_err());
    }

    #[test]
    fn predicates_on_basis_projectors() {
        let p0 = basis_projector(3, 0);
        let p1 = basis_projector(3, 1);
        assert!(commutes(&p0, &p1).unwrap());
        assert!(is_orthogonal(&p0, &p1).unwrap());
        assert!(!is_orthogonal(&p0, &p0).unwrap());
        assert!(leq(&p0, &p0).unwrap());
        assert!(!leq(&p0, &p1).unwrap());
        let q = join_commuting(&p0, &p1).unwrap();
        assert_eq!(q.rank(), 2);
        assert!(leq(&p0, &q).unwrap());
        assert!(leq(&p1, &q).unwrap());
    }

    #[test]
    fn noncommuting_meet_is_rejected_with_norm() {
        let zp = pauli(PauliAxis::Z, 1).unwrap();
        let xp = pauli(PauliAxis::X, 1).unwrap();
        match meet_commuting(&zp, &xp) {
            Err(Error::NonCommuting { norm }) => assert!(norm > 0.1),
            other => panic!("expected NonCommuting, got {other:?}"),
        }
    }

    #[test]
    fn meet_of_diagonal_projectors() {
        let d = |bits: [f64; 3]| {
            Projector::new(CMat::from_fn(3, 3, |i, j| {
                if i == j {
                    c(bits[i], 0.0)
                } else {
                    c(0.0, 0.0)
                }
            }))
            .unwrap()
        };
        let p = d([1.0, 1.0, 0.0]);
        let q = d([0.0, 1.0, 1.0]);
        let m = meet_commuting(&p, &q).unwrap();
        assert_eq!(m.rank(), 1);
        assert!(m.approx_eq(&d([0.0, 1.0, 0.0])));
    }

    #[test]
    fn complement_ranks_and_involution() {
        let p = basis_projector(4, 2);
        let pc = p.complement();
        assert_eq!(pc.rank(), 3);
        assert!(pc.complement().approx_eq(&p));
        assert!(is_orthogonal(&p, &pc).unwrap());
    }

    #[test]
    fn born_probabilities() {
        let plus = Ket::new(vec![c(1.0, 0.0), c(1.0, 0.0)]).unwrap();
        let rho = DensityMatrix::pure(&plus).unwrap();
        let zp = pauli(PauliAxis::Z, 1).unwrap();
        let xp = pauli(PauliAxis::X, 1).unwrap();
        assert!((born_probability(&rho, &zp).unwrap() - 0.5).abs() < 1e-12);
        assert!((born_probability(&rho, &xp).unwrap() - 1.0).abs() < 1e-12);
        let mixed = DensityMatrix::maximally_mixed(2);
        assert!((born_probability(&mixed, &zp).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn density_matrix_rejects_non_psd() {
        let m = CMat::from_row_slice(2, 2, &[c(1.5, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-0.5, 0.0)]);
        assert!(matches!(DensityMatrix::new(m), Err(Error::NotDensity(_))));
    }

    #[test]
    fn density_matrix_rejects_bad_trace() {
        let m = CMat::identity(2, 2);
        assert!(matches!(DensityMatrix::new(m), Err(Error::NotDensity(_))));
    }

    #[test]
    fn tensor_of_projectors() {
        let zp = pauli(PauliAxis::Z, 1).unwrap();
        let zm = pauli(PauliAxis::Z, -1).unwrap();
        let t = tensor_projectors(&zp, &zm);
        assert_eq!(t.dim(), 4);
        assert_eq!(t.rank(), 1);
        assert!((t.matrix()[(1, 1)] - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let p2 = pauli(PauliAxis::Z, 1).unwrap();
        let p3 = basis_projector(3, 0);
        assert!(matches!(
            commutes(&p2, &p3),
            Err(Error::DimensionMismatch(_))
        ));
    }
}
