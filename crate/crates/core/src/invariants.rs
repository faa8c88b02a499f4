//! Σ_k- and GL_k-invariants of the cohit space (Q P_k)_d.
//!
//! The admissible basis is split into weight strata, each stratum into
//! components connected by the transpositions ρ_1..ρ_{k-1}, and the
//! Σ_k-invariants are found per component. Weight-wise GL_k-invariants add the
//! transvection ρ_k inside a stratum; the global invariants then correct for
//! ρ_k leaking into lower weights.

use std::cmp::Ordering;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf2::{right_kernel_echelon, BitMatrix, BitVec, Solver};
use crate::hit::HitBasis;
use crate::poly::{apply_rho, compare_weights, weight_vector, Monomial, Poly2};

/// Components at least this large use the target-size heuristic.
pub const HEURISTIC_THRESHOLD: usize = 30;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightStratum {
    pub omega: Vec<u32>,
    /// Admissible positions, ascending.
    pub members: Vec<usize>,
}

pub fn format_weight(w: &[u32]) -> String {
    format!("({})", w.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(","))
}

pub fn weight_strata(basis: &HitBasis) -> Vec<WeightStratum> {
    let mut strata: Vec<WeightStratum> = Vec::new();
    for j in 0..basis.dim() {
        let w = weight_vector(basis.admissible_monomial(j));
        match strata.iter_mut().find(|s| s.omega == w) {
            Some(s) => s.members.push(j),
            None => strata.push(WeightStratum { omega: w, members: vec![j] }),
        }
    }
    strata.sort_by(|a, b| compare_weights(&a.omega, &b.omega));
    strata
}

/// The part of `decompose(p)` on the given admissible positions, as a local vector.
fn local_part(basis: &HitBasis, p: &Poly2, members: &[usize]) -> Result<BitVec> {
    let g = basis.decompose(p)?;
    Ok(BitVec::from_ones(members.len(), members.iter().enumerate().filter(|(_, &a)| g.get(a)).map(|(i, _)| i)))
}

fn find(parent: &mut [usize], mut i: usize) -> usize {
    while parent[i] != i {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    i
}

/// Components under `m_i ~ m_l` when `decompose(ρ_j m_i)` involves `m_l`, `j < k`.
pub fn sigma_components(stratum: &WeightStratum, basis: &HitBasis) -> Result<Vec<Vec<usize>>> {
    let n = stratum.members.len();
    let mut parent: Vec<usize> = (0..n).collect();
    for (i, &a) in stratum.members.iter().enumerate() {
        let m = Poly2::single(basis.admissible_monomial(a).clone());
        for j in 1..basis.k {
            let local = local_part(basis, &apply_rho(&m, j, basis.k)?, &stratum.members)?;
            for l in local.ones() {
                let (ri, rl) = (find(&mut parent, i), find(&mut parent, l));
                parent[ri.max(rl)] = ri.min(rl);
            }
        }
    }
    let mut comps: Vec<Vec<usize>> = Vec::new();
    let mut root_slot: Vec<Option<usize>> = vec![None; n];
    for i in 0..n {
        let r = find(&mut parent, i);
        match root_slot[r] {
            Some(c) => comps[c].push(stratum.members[i]),
            None => {
                root_slot[r] = Some(comps.len());
                comps.push(vec![stratum.members[i]]);
            }
        }
    }
    Ok(comps)
}

#[derive(Clone, Debug)]
pub struct SigmaComponent {
    /// Admissible positions, ascending.
    pub members: Vec<usize>,
    /// `T_j + I` for `j = 1..k-1`; column `i` of `T_j` is the in-component part of `ρ_j(member_i)`.
    pub constraints: Vec<BitMatrix>,
    /// Echelon basis of the common kernel, in member order.
    pub kernel: Vec<BitVec>,
}

pub fn component_invariants(members: &[usize], basis: &HitBasis) -> Result<SigmaComponent> {
    let n = members.len();
    let mut constraints = Vec::with_capacity(basis.k.saturating_sub(1));
    for j in 1..basis.k {
        let cols: Vec<BitVec> = members
            .iter()
            .enumerate()
            .map(|(i, &a)| {
                let m = Poly2::single(basis.admissible_monomial(a).clone());
                let mut v = local_part(basis, &apply_rho(&m, j, basis.k)?, members)?;
                v.flip(i);
                Ok(v)
            })
            .collect::<Result<_>>()?;
        constraints.push(BitMatrix::from_columns(n, &cols));
    }
    let kernel = if constraints.is_empty() {
        (0..n).map(|i| BitVec::unit(n, i)).collect()
    } else {
        right_kernel_echelon(&BitMatrix::vstack(&constraints))
    };
    Ok(SigmaComponent { members: members.to_vec(), constraints, kernel })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Combination {
    /// Which kernel vectors are summed.
    pub coeffs: BitVec,
    pub complexity: usize,
    pub num_terms: usize,
    pub vector: BitVec,
}

fn coeff_lex(a: &BitVec, b: &BitVec) -> Ordering {
    (0..a.len()).map(|i| a.get(i)).cmp((0..b.len()).map(|i| b.get(i)))
}

/// Picks a kernel basis of small, simple combinations. Below the threshold:
/// greedy by (complexity, terms). Otherwise: the combinations closest to N/3,
/// 4N/9 and 2N/3 terms, completed greedily to a basis. Sorted by term count.
pub fn meaningful_combinations(kernel: &[BitVec], component_size: usize) -> Vec<Combination> {
    let dim = kernel.len();
    if dim == 0 {
        return Vec::new();
    }
    assert!(dim < 24, "kernel of dimension {dim} is too large to enumerate");
    let all: Vec<Combination> = (1u64..1 << dim)
        .map(|i| {
            let coeffs = BitVec::from_ones(dim, (0..dim).filter(|j| i >> j & 1 == 1));
            let mut vector = BitVec::zeros(kernel[0].len());
            for j in coeffs.ones() {
                vector.xor_assign(&kernel[j]);
            }
            Combination { complexity: coeffs.count_ones(), num_terms: vector.count_ones(), coeffs, vector }
        })
        .filter(|c| c.num_terms > 0)
        .collect();
    let by_simplicity = |a: &&Combination, b: &&Combination| (a.complexity, a.num_terms).cmp(&(b.complexity, b.num_terms));

    let mut chosen: Vec<Combination> = Vec::new();
    let mut span: Vec<Option<BitVec>> = vec![None; dim];
    let mut try_add = |c: &Combination, chosen: &mut Vec<Combination>| {
        if chosen.len() == dim {
            return;
        }
        let mut v = c.coeffs.clone();
        while let Some(p) = v.lowest_one() {
            match &span[p] {
                Some(r) => v.xor_assign(r),
                None => {
                    span[p] = Some(v);
                    chosen.push(c.clone());
                    return;
                }
            }
        }
    };

    if component_size < HEURISTIC_THRESHOLD {
        let mut order: Vec<&Combination> = all.iter().collect();
        order.sort_by(by_simplicity);
        for c in order {
            try_add(c, &mut chosen);
        }
    } else {
        let n = component_size;
        let mut targets = [n / 3, 4 * n / 9, 2 * n / 3];
        targets.sort();
        let mut used = vec![false; all.len()];
        let mut selected: Vec<&Combination> = Vec::new();
        for t in targets {
            let best = (0..all.len()).filter(|&i| !used[i]).min_by(|&a, &b| {
                let (ca, cb) = (&all[a], &all[b]);
                (ca.num_terms.abs_diff(t), ca.complexity, ca.num_terms)
                    .cmp(&(cb.num_terms.abs_diff(t), cb.complexity, cb.num_terms))
                    .then_with(|| coeff_lex(&ca.coeffs, &cb.coeffs))
            });
            if let Some(b) = best {
                used[b] = true;
                selected.push(&all[b]);
            }
        }
        selected.sort_by_key(|c| c.complexity);
        for c in selected {
            try_add(c, &mut chosen);
        }
        let mut rest: Vec<&Combination> = all.iter().filter(|c| !chosen.contains(c)).collect();
        rest.sort_by(by_simplicity);
        for c in rest {
            try_add(c, &mut chosen);
        }
    }
    chosen.sort_by_key(|c| c.num_terms);
    chosen
}

#[derive(Clone, Debug)]
pub struct ComponentResult {
    pub component: SigmaComponent,
    pub selections: Vec<Combination>,
    pub invariants: Vec<Poly2>,
}

#[derive(Clone, Debug)]
pub struct StratumResult {
    pub stratum: WeightStratum,
    pub components: Vec<ComponentResult>,
    /// Concatenated component invariants, in component order.
    pub sigma_invariants: Vec<Poly2>,
    pub glk: WeightwiseGlk,
}

#[derive(Clone, Debug, Default)]
pub struct WeightwiseGlk {
    pub kernel: Vec<BitVec>,
    pub invariants: Vec<Poly2>,
    /// Nonzero rows of the local (ρ_k + I) matrix, as index sets into the Σ-invariants.
    pub equations: Vec<Vec<usize>>,
}

/// Combinations of the stratum's Σ-invariants killed by (ρ_k + I) inside the stratum.
pub fn weightwise_glk(stratum: &WeightStratum, sigma_invariants: &[Poly2], basis: &HitBasis) -> Result<WeightwiseGlk> {
    if sigma_invariants.is_empty() {
        return Ok(WeightwiseGlk::default());
    }
    let cols: Vec<BitVec> = sigma_invariants
        .iter()
        .map(|s| local_part(basis, &apply_rho(s, basis.k, basis.k)?.add(s), &stratum.members))
        .collect::<Result<_>>()?;
    let a = BitMatrix::from_columns(stratum.members.len(), &cols);
    let kernel = right_kernel_echelon(&a);
    let invariants = kernel.iter().map(|v| combine(sigma_invariants, v)).filter(|p| !p.is_zero()).collect();
    let equations = a.rows().iter().filter(|r| !r.is_zero()).map(|r| r.ones().collect()).collect();
    Ok(WeightwiseGlk { kernel, invariants, equations })
}

fn combine(polys: &[Poly2], v: &BitVec) -> Poly2 {
    let mut out = Poly2::zero();
    for j in v.ones() {
        out.add_assign(&polys[j]);
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CaseTag {
    #[serde(rename = "CASE_1")]
    Case1,
    #[serde(rename = "CASE_2")]
    Case2,
    #[serde(rename = "CASE_3")]
    Case3,
}

impl std::fmt::Display for CaseTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            CaseTag::Case1 => "CASE_1",
            CaseTag::Case2 => "CASE_2",
            CaseTag::Case3 => "CASE_3",
        })
    }
}

/// Inputs are `(weight, count)` pairs for the local GL_k- and Σ_k-invariants.
pub fn detect_case(glk_by_weight: &[(Vec<u32>, usize)], sigma_by_weight: &[(Vec<u32>, usize)]) -> (CaseTag, Option<Vec<u32>>) {
    let max_w = |ws: Vec<&Vec<u32>>| ws.into_iter().max_by(|a, b| compare_weights(a, b)).cloned();
    let glk: Vec<&Vec<u32>> = glk_by_weight.iter().filter(|(_, n)| *n > 0).map(|(w, _)| w).collect();
    if glk.is_empty() {
        return (CaseTag::Case3, None);
    }
    let Some(min_sigma) =
        sigma_by_weight.iter().filter(|(_, n)| *n > 0).map(|(w, _)| w).min_by(|a, b| compare_weights(a, b))
    else {
        return (CaseTag::Case3, None);
    };
    let has_min = glk.iter().any(|w| compare_weights(w, min_sigma) == Ordering::Equal);
    let larger = glk.iter().any(|w| compare_weights(w, min_sigma) == Ordering::Greater);
    if has_min && !larger {
        (CaseTag::Case1, Some(min_sigma.clone()))
    } else {
        (CaseTag::Case2, max_w(glk))
    }
}

/// True iff `(ρ_j + I) p` is hit for every `j < k`.
pub fn verify_global_sigma(p: &Poly2, basis: &HitBasis) -> Result<bool> {
    for j in 1..basis.k {
        if !basis.decompose(&apply_rho(p, j, basis.k)?.add(p))?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Debug)]
pub struct Correction {
    pub h_prime: Poly2,
    /// Equations by variables.
    pub shape: (usize, usize),
}

/// Solves for `h' = Σ c_j b_j` with `(ρ_i + I)(h + h')` hit for `i < k`;
/// free variables are set to 0.
pub fn particular_correction(h: &Poly2, correction_basis: &[Monomial], basis: &HitBasis) -> Result<Correction> {
    let na = basis.dim();
    let rows = (basis.k - 1) * na;
    let stacked = |p: &Poly2| -> Result<BitVec> {
        let mut v = BitVec::zeros(rows);
        for i in 1..basis.k {
            let e = basis.decompose(&apply_rho(p, i, basis.k)?.add(p))?;
            for b in e.ones() {
                v.set((i - 1) * na + b, true);
            }
        }
        Ok(v)
    };
    let cols: Vec<BitVec> =
        correction_basis.iter().map(|m| stacked(&Poly2::single(m.clone()))).collect::<Result<_>>()?;
    let a = BitMatrix::from_columns(rows, &cols);
    let b = stacked(h)?;
    let c = Solver::new(&a)
        .solve(&b)
        .ok_or_else(|| Error::Inconsistent("system for the particular solution has no solution".into()))?;
    let h_prime = c.ones().map(|j| correction_basis[j].clone()).collect();
    Ok(Correction { h_prime, shape: (rows, correction_basis.len()) })
}

#[derive(Clone, Debug)]
pub struct GlkCertificate {
    pub case_tag: CaseTag,
    pub main_weight: Option<Vec<u32>>,
    pub h: Option<Poly2>,
    pub h_prime: Option<Poly2>,
    pub correction_shape: Option<(usize, usize)>,
    /// Lower-weight Σ-invariants accepted into the global basis, with their global labels (from 1).
    pub accepted: Vec<usize>,
    pub rejected: Vec<usize>,
    pub global_sigma_basis: Vec<Poly2>,
    pub constraint_equations: Vec<Vec<usize>>,
    pub kernel: Vec<BitVec>,
    pub invariant_basis: Vec<Poly2>,
    pub warnings: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct InvariantAnalysis {
    pub k: usize,
    pub d: u32,
    pub strata: Vec<StratumResult>,
    pub certificate: GlkCertificate,
}

impl InvariantAnalysis {
    pub fn sigma_invariants(&self) -> impl Iterator<Item = &Poly2> + '_ {
        self.strata.iter().flat_map(|s| s.sigma_invariants.iter())
    }
}

fn analyze_stratum(stratum: &WeightStratum, basis: &HitBasis) -> Result<StratumResult> {
    let comps = sigma_components(stratum, basis)?;
    let mut components = Vec::with_capacity(comps.len());
    let mut sigma_invariants = Vec::new();
    for members in comps {
        let component = component_invariants(&members, basis)?;
        let selections = meaningful_combinations(&component.kernel, members.len());
        let invariants: Vec<Poly2> = selections
            .iter()
            .map(|c| c.vector.ones().map(|i| basis.admissible_monomial(members[i]).clone()).collect())
            .collect();
        sigma_invariants.extend(invariants.iter().cloned());
        components.push(ComponentResult { component, selections, invariants });
    }
    let glk = weightwise_glk(stratum, &sigma_invariants, basis)?;
    Ok(StratumResult { stratum: stratum.clone(), components, sigma_invariants, glk })
}

/// The full pipeline: strata, components, Σ-invariants, weight-wise and global GL_k-invariants.
pub fn analyze(basis: &HitBasis) -> Result<InvariantAnalysis> {
    let strata: Vec<StratumResult> =
        weight_strata(basis).par_iter().map(|s| analyze_stratum(s, basis)).collect::<Result<_>>()?;
    let certificate = global_glk_invariants(&strata, basis)?;
    Ok(InvariantAnalysis { k: basis.k, d: basis.d, strata, certificate })
}

pub fn global_glk_invariants(strata: &[StratumResult], basis: &HitBasis) -> Result<GlkCertificate> {
    let k = basis.k;
    let glk_counts: Vec<(Vec<u32>, usize)> = strata.iter().map(|s| (s.stratum.omega.clone(), s.glk.invariants.len())).collect();
    let sigma_counts: Vec<(Vec<u32>, usize)> =
        strata.iter().map(|s| (s.stratum.omega.clone(), s.sigma_invariants.len())).collect();
    let (case_tag, main_weight) = detect_case(&glk_counts, &sigma_counts);
    let mut cert = GlkCertificate {
        case_tag,
        main_weight: main_weight.clone(),
        h: None,
        h_prime: None,
        correction_shape: None,
        accepted: Vec::new(),
        rejected: Vec::new(),
        global_sigma_basis: Vec::new(),
        constraint_equations: Vec::new(),
        kernel: Vec::new(),
        invariant_basis: Vec::new(),
        warnings: Vec::new(),
    };
    let Some(main) = main_weight else { return Ok(cert) };
    let cmp_main = |w: &[u32]| compare_weights(w, &main);
    let min_index = strata.iter().position(|s| !s.sigma_invariants.is_empty()).expect("some Σ-invariants");

    // Global labels S_inv_1, S_inv_2, ... in stratum order.
    let mut labelled: Vec<(usize, usize, &Poly2)> = Vec::new();
    let mut label = 0;
    for (si, s) in strata.iter().enumerate() {
        for p in &s.sigma_invariants {
            label += 1;
            labelled.push((label, si, p));
        }
    }
    let mut homogeneous: Vec<Poly2> = Vec::new();
    for &(label, si, p) in &labelled {
        let w = &strata[si].stratum.omega;
        let eligible = match case_tag {
            CaseTag::Case1 => true,
            _ => cmp_main(w) == Ordering::Less,
        };
        if !eligible {
            continue;
        }
        if si == min_index || verify_global_sigma(p, basis)? {
            cert.accepted.push(label);
            homogeneous.push(p.clone());
        } else {
            cert.rejected.push(label);
        }
    }

    let mut global = Vec::new();
    if case_tag == CaseTag::Case2 {
        let main_stratum = strata.iter().find(|s| cmp_main(&s.stratum.omega) == Ordering::Equal).expect("main stratum");
        let correction_basis: Vec<Monomial> = strata
            .iter()
            .filter(|s| cmp_main(&s.stratum.omega) == Ordering::Less && !s.sigma_invariants.is_empty())
            .flat_map(|s| s.stratum.members.iter().map(|&a| basis.admissible_monomial(a).clone()))
            .collect::<Vec<_>>();
        let mut correction_basis = correction_basis;
        correction_basis.sort_by_key(|m| basis.admissible_position(m));
        if main_stratum.glk.invariants.len() > 1 {
            cert.warnings.push(format!(
                "{} weight-wise invariants in the main weight; each is corrected separately",
                main_stratum.glk.invariants.len()
            ));
        }
        for (i, h) in main_stratum.glk.invariants.iter().enumerate() {
            let corr = particular_correction(h, &correction_basis, basis)?;
            let hh = h.add(&corr.h_prime);
            if !verify_global_sigma(&hh, basis)? {
                cert.warnings.push(format!("h + h' for seed {} is not a global Σ_{k}-invariant", i + 1));
            }
            if i == 0 {
                cert.h = Some(h.clone());
                cert.h_prime = Some(corr.h_prime.clone());
                cert.correction_shape = Some(corr.shape);
            }
            global.push(hh);
        }
    }
    global.extend(homogeneous);

    let cols: Vec<BitVec> =
        global.iter().map(|p| basis.decompose(&apply_rho(p, k, k)?.add(p))).collect::<Result<_>>()?;
    let a = BitMatrix::from_columns(basis.dim(), &cols);
    for r in a.rows() {
        let eq: Vec<usize> = r.ones().collect();
        if !eq.is_empty() && !cert.constraint_equations.contains(&eq) {
            cert.constraint_equations.push(eq);
        }
    }
    cert.kernel = right_kernel_echelon(&a);
    cert.invariant_basis = cert.kernel.iter().map(|v| combine(&global, v)).filter(|p| !p.is_zero()).collect();
    cert.global_sigma_basis = global;
    for g in &cert.invariant_basis {
        if !is_glk_invariant(g, basis)? {
            return Err(Error::Internal("final invariant fails the GL_k check".into()));
        }
    }
    Ok(cert)
}

/// True iff `(ρ_j + I) g` is hit for every `1 ≤ j ≤ k`.
pub fn is_glk_invariant(g: &Poly2, basis: &HitBasis) -> Result<bool> {
    for j in 1..=basis.k {
        if j == basis.k && basis.k < 2 {
            break;
        }
        if !basis.decompose(&apply_rho(g, j, basis.k)?.add(g))?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}
