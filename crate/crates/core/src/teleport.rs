//! Imperfect teleportation as a composition of s-maps.
//!
//! An affirmative test of `psi^{ab}` on `phi^a (x) phi^{bc}` leaves
//! `psi^{ab} (x) phi^c` with `phi^c = s^{cb}_phi s^{ba}_psi phi^a`. Chains of
//! tests fold the same rule, and entanglement swapping uses the anti-linear
//! tensor product of two s-maps. Every map here has a brute-force
//! counterpart that applies the projectors in the full tensor space and
//! factors the result.

use num_complex::Complex64;

use crate::antilinear::{compose, tensor_anti, AntilinearMap, Map};
use crate::epr::{smap, Direction};
use crate::error::{Error, Result};
use crate::tensor::{self, kron, kron_all, permutation_unitary, ComplexMatrix, MultiVector};
use crate::tol;

/// Linear teleportation map `H_a -> H_c`.
#[derive(Clone, Debug, PartialEq)]
pub struct TeleportOutcome {
    pub tmap: ComplexMatrix,
}

impl TeleportOutcome {
    /// Unnormalized output `t phi_a`.
    pub fn output(&self, phi_a: &[Complex64]) -> Result<Vec<Complex64>> {
        self.tmap.apply(phi_a)
    }

    /// `||t phi_a||^2` for a normalized input.
    pub fn success_prob(&self, phi_a: &[Complex64]) -> Result<f64> {
        Ok(tensor::norm(&self.output(phi_a)?).powi(2))
    }

    pub fn rank(&self) -> Result<usize> {
        Ok(tensor::svd(&self.tmap)?.rank(tol::CONSTRUCTION))
    }
}

fn check_link(left: &MultiVector, right: &MultiVector) -> Result<()> {
    if left.dims()[1] != right.dims()[0] {
        return Err(Error::DimensionMismatch(format!(
            "link {:?} does not chain into {:?}",
            left.dims(),
            right.dims()
        )));
    }
    Ok(())
}

/// `t = s^{cb}_phi ∘ s^{ba}_psi`.
pub fn tmap(psi_ab: &MultiVector, phi_bc: &MultiVector) -> Result<TeleportOutcome> {
    psi_ab.require_factors(2)?;
    phi_bc.require_factors(2)?;
    check_link(psi_ab, phi_bc)?;
    let t = smap(phi_bc, Direction::BA)?.compose_anti(&smap(psi_ab, Direction::BA)?)?;
    Ok(TeleportOutcome { tmap: t })
}

/// Result of a brute-force projection: squared norm of the projected vector,
/// the extracted output factor, and the factorization residual.
#[derive(Clone, Debug, PartialEq)]
pub struct ProjectionOutcome {
    pub probability: f64,
    pub output: Vec<Complex64>,
    pub residual: f64,
}

/// Teleport `phi_a` by projecting `phi_a (x) phi_bc` onto `psi_ab (x) H_c`.
pub fn teleport_oracle(
    phi_a: &[Complex64],
    psi_ab: &MultiVector,
    phi_bc: &MultiVector,
) -> Result<ProjectionOutcome> {
    chain_oracle(phi_a, &[psi_ab.clone(), phi_bc.clone()])
}

fn check_chain(links: &[MultiVector]) -> Result<()> {
    if links.is_empty() {
        return Err(Error::InvalidArgument("empty chain".into()));
    }
    for l in links {
        l.require_factors(2)?;
    }
    for w in links.windows(2) {
        check_link(&w[0], &w[1])?;
    }
    Ok(())
}

/// Fold of s-maps along a chain `[psi^{ab}, phi^{bc}, psi^{cd}, ...]`, each
/// contributing its first-to-second-factor map. Even length gives a linear
/// map, odd length an anti-linear one.
pub fn chain_map(links: &[MultiVector]) -> Result<Map> {
    check_chain(links)?;
    let mut acc = Map::Anti(smap(&links[0], Direction::BA)?);
    for link in &links[1..] {
        acc = compose(&Map::Anti(smap(link, Direction::BA)?), &acc)?;
    }
    Ok(acc)
}

/// Teleportation map of a distributed chain, e.g. `s^{ed} s^{dc} s^{cb} s^{ba}`
/// for the five-party case. Needs an even number of links.
pub fn chain_tmap(links: &[MultiVector]) -> Result<ComplexMatrix> {
    if links.len() % 2 != 0 {
        return Err(Error::InvalidArgument(format!(
            "a teleportation chain needs an even number of links, got {}",
            links.len()
        )));
    }
    Ok(chain_map(links)?
        .into_linear()
        .expect("even chains are linear"))
}

/// Brute-force chain: start from `phi_a (x) anc_1 (x) ... (x) anc_m`, apply
/// `|psi_1><psi_1| (x) ... (x) |psi_m><psi_m| (x) 1`, and contract the
/// measured vectors out of the result.
pub fn chain_oracle(phi_a: &[Complex64], links: &[MultiVector]) -> Result<ProjectionOutcome> {
    check_chain(links)?;
    if links.len() % 2 != 0 {
        return Err(Error::InvalidArgument("oracle needs measured/ancilla pairs".into()));
    }
    if phi_a.len() != links[0].dims()[0] {
        return Err(Error::DimensionMismatch(format!(
            "input of length {} for a chain starting at C^{}",
            phi_a.len(),
            links[0].dims()[0]
        )));
    }
    let n = tensor::norm(phi_a);
    if (n - 1.0).abs() >= tol::CONSTRUCTION {
        return Err(Error::NotNormalized(n));
    }
    let measured: Vec<&MultiVector> = links.iter().step_by(2).collect();
    let ancillas: Vec<&MultiVector> = links.iter().skip(1).step_by(2).collect();
    for m in &measured {
        m.require_normalized()?;
    }

    let mut initial = phi_a.to_vec();
    for anc in &ancillas {
        initial = tensor::kron_vec(&initial, anc.amplitudes());
    }
    let d_out = links.last().expect("non-empty").dims()[1];
    let projectors: Vec<ComplexMatrix> = measured.iter().map(|m| m.projector()).collect();
    let mut full = kron_all(&projectors)?;
    full = kron(&full, &ComplexMatrix::identity(d_out));
    let projected = full.apply(&initial)?;

    let big = MultiVector::tensor_all(measured.iter().copied())?;
    let big = big.amplitudes();
    let output: Vec<Complex64> = (0..d_out)
        .map(|c| {
            big.iter()
                .enumerate()
                .map(|(i, z)| z.conj() * projected[i * d_out + c])
                .sum()
        })
        .collect();
    let residual = tensor::max_abs_diff(&projected, &tensor::kron_vec(big, &output));
    if residual > tol::FACTORIZATION {
        return Err(Error::FactorizationResidual(residual));
    }
    Ok(ProjectionOutcome {
        probability: tensor::norm(&projected).powi(2),
        output,
        residual,
    })
}

/// Entangled `be` vector produced by an affirmative `psi^{cd}` test.
#[derive(Clone, Debug, PartialEq)]
pub struct Swap {
    /// Unnormalized `(s^{bc} (x) s^{ed}) psi^{cd}`.
    pub phi_be: MultiVector,
    pub probability: f64,
}

fn check_swap(phi_bc: &MultiVector, phi_de: &MultiVector, psi_cd: &MultiVector) -> Result<()> {
    for v in [phi_bc, phi_de, psi_cd] {
        v.require_factors(2)?;
        v.require_normalized()?;
    }
    check_link(phi_bc, psi_cd)?;
    check_link(psi_cd, phi_de)
}

pub fn entanglement_swap(
    phi_bc: &MultiVector,
    phi_de: &MultiVector,
    psi_cd: &MultiVector,
) -> Result<Swap> {
    check_swap(phi_bc, phi_de, psi_cd)?;
    let s_bc = smap(phi_bc, Direction::AB)?;
    let s_ed = smap(phi_de, Direction::BA)?;
    let amps = tensor_anti(&s_bc, &s_ed).apply(psi_cd.amplitudes())?;
    let phi_be = MultiVector::new(vec![phi_bc.dims()[0], phi_de.dims()[1]], amps)?;
    Ok(Swap {
        probability: phi_be.norm_sqr(),
        phi_be,
    })
}

/// Brute-force swap: `(1_b (x) |psi^{cd}><psi^{cd}| (x) 1_e)(phi^{bc} (x) phi^{de})`,
/// with `psi^{cd}` contracted out of the middle factors.
pub fn swap_oracle(
    phi_bc: &MultiVector,
    phi_de: &MultiVector,
    psi_cd: &MultiVector,
) -> Result<(Swap, f64)> {
    check_swap(phi_bc, phi_de, psi_cd)?;
    let (db, dc) = (phi_bc.dims()[0], phi_bc.dims()[1]);
    let (dd, de) = (phi_de.dims()[0], phi_de.dims()[1]);
    let proj = kron_all(&[
        ComplexMatrix::identity(db),
        psi_cd.projector(),
        ComplexMatrix::identity(de),
    ])?;
    let chi = proj.apply(&tensor::kron_vec(phi_bc.amplitudes(), phi_de.amplitudes()))?;
    let idx = |b: usize, cd: usize, e: usize| (b * dc * dd + cd) * de + e;
    let psi = psi_cd.amplitudes();
    let mut be = vec![Complex64::new(0.0, 0.0); db * de];
    for b in 0..db {
        for e in 0..de {
            be[b * de + e] = (0..dc * dd).map(|cd| psi[cd].conj() * chi[idx(b, cd, e)]).sum();
        }
    }
    let mut residual = 0.0f64;
    for b in 0..db {
        for cd in 0..dc * dd {
            for e in 0..de {
                residual = residual.max((chi[idx(b, cd, e)] - be[b * de + e] * psi[cd]).norm());
            }
        }
    }
    if residual > tol::FACTORIZATION {
        return Err(Error::FactorizationResidual(residual));
    }
    let probability = tensor::norm(&chi).powi(2);
    Ok((
        Swap {
            phi_be: MultiVector::new(vec![db, de], be)?,
            probability,
        },
        residual,
    ))
}

/// `V (psi_1 (x) ... (x) psi_m)` regrouped as a bipartite vector on
/// `(H_a^1 ... H_a^m) (x) (H_b^1 ... H_b^m)`, with `V` the factor-reordering
/// unitary.
pub fn rearrange(pairs: &[MultiVector]) -> Result<MultiVector> {
    let dims = pair_dims(pairs)?;
    let psi = MultiVector::tensor_all(pairs)?;
    let v = permutation_unitary(&dims)?;
    let da = dims.iter().map(|d| d.0).product();
    let db = dims.iter().map(|d| d.1).product();
    MultiVector::new(vec![da, db], v.apply(psi.amplitudes())?)
}

fn pair_dims(pairs: &[MultiVector]) -> Result<Vec<(usize, usize)>> {
    if pairs.is_empty() {
        return Err(Error::InvalidArgument("need at least one pair".into()));
    }
    pairs
        .iter()
        .map(|p| {
            p.require_factors(2)?;
            Ok((p.dims()[0], p.dims()[1]))
        })
        .collect()
}

/// `s^{AB}` of the rearranged vector, assembled from the individual maps as
/// `s^{ab}_1 (x) ... (x) s^{ab}_m`. On `H_B = (x) H_b^j` and `H_A = (x) H_a^j`
/// the reordering `V` is the identity, so no index shuffling is needed here.
pub fn rearranged_smap(pairs: &[MultiVector]) -> Result<AntilinearMap> {
    pair_dims(pairs)?;
    let mut acc = smap(&pairs[0], Direction::AB)?;
    for p in &pairs[1..] {
        acc = tensor_anti(&acc, &smap(p, Direction::AB)?);
    }
    Ok(acc)
}
