//! Centers of nilpotent products, the non-central power identity, and
//! capability.

use std::collections::{HashSet, VecDeque};

use num_bigint::BigInt;
use serde::Serialize;
use thiserror::Error;

use crate::nilprod::{build_group, max_enum, GroupError, GroupSpec, PcElement, PcPresentation};

#[derive(Debug, Error)]
pub enum AnalysisError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("no center theorem covers {0}")]
    Unsupported(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
}

/// `Z(G) = <x_r^exponent, G_layer>`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CenterFormula {
    pub generator: usize,
    pub exponent: u64,
    pub layer: usize,
}

impl std::fmt::Display for CenterFormula {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "<x{}^{}, G_{}>", self.generator, self.exponent, self.layer)
    }
}

pub fn center_formula(spec: &GroupSpec) -> Result<CenterFormula, AnalysisError> {
    spec.validate()?;
    let r = spec.r();
    if r < 2 {
        return Err(AnalysisError::Unsupported(format!("{spec} (needs at least two factors)")));
    }
    let a = spec.alpha(r - 1) + u32::from(spec.is_top_class());
    Ok(CenterFormula { generator: r, exponent: spec.p_pow(a)?, layer: spec.k })
}

/// Generators of the subgroup named by `f`.
pub fn formula_generators(g: &PcPresentation, f: &CenterFormula) -> Result<Vec<PcElement>, GroupError> {
    let x = g.generator_element(f.generator)?;
    let mut gens = vec![g.power(&x, &BigInt::from(f.exponent))?];
    gens.extend(g.lcs_layer(f.layer)?);
    Ok(gens)
}

fn commutes_with_generators(g: &PcPresentation, v: &[u64]) -> bool {
    let c = g.collector();
    c.generator_images().iter().all(|x| c.mul(v, x) == c.mul(x, v))
}

pub fn is_central(g: &PcPresentation, a: &PcElement) -> Result<bool, GroupError> {
    Ok(commutes_with_generators(g, &g.to_internal(a)?))
}

/// Every element commuting with all generators, sorted.
pub fn center_bruteforce(g: &PcPresentation) -> Result<Vec<PcElement>, GroupError> {
    let mut out = Vec::new();
    g.walk(|beta, v| {
        if commutes_with_generators(g, v) {
            out.push(PcElement(beta.to_vec()));
        }
    })?;
    out.sort();
    Ok(out)
}

/// The subgroup generated by `gens`, sorted.
pub fn subgroup_closure(g: &PcPresentation, gens: &[PcElement]) -> Result<Vec<PcElement>, GroupError> {
    let c = g.collector();
    let cap = max_enum() as usize;
    let gens: Vec<Vec<u64>> = gens.iter().map(|a| g.to_internal(a)).collect::<Result<_, _>>()?;
    let id = c.identity_vec();
    let mut seen = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(a) = queue.pop_front() {
        for s in &gens {
            let b = c.mul(&a, s);
            if seen.insert(b.clone()) {
                if seen.len() > cap {
                    return Err(GroupError::CapExceeded { size: BigInt::from(seen.len()), cap: cap as u64 });
                }
                queue.push_back(b);
            }
        }
    }
    let mut out: Vec<PcElement> = seen.iter().map(|v| g.from_internal(v)).collect::<Result<_, _>>()?;
    out.sort();
    Ok(out)
}

#[derive(Debug, Clone, Serialize)]
pub struct CenterReport {
    pub spec: GroupSpec,
    pub order: String,
    pub formula: String,
    pub formula_generators: Vec<String>,
    pub formula_subgroup: Option<Vec<String>>,
    pub brute_force: Option<Vec<String>>,
    pub matches: Option<bool>,
}

/// The center by formula and, with `brute`, by enumeration.
pub fn center_report(g: &PcPresentation, brute: bool) -> Result<CenterReport, AnalysisError> {
    let f = center_formula(g.spec())?;
    let mut gens = formula_generators(g, &f)?;
    let mut seen = HashSet::new();
    gens.retain(|a| seen.insert(a.clone()));
    let show = |v: &[PcElement]| v.iter().map(|a| g.format_element(a)).collect::<Vec<_>>();
    let mut report = CenterReport {
        spec: g.spec().clone(),
        order: g.order().to_string(),
        formula: f.to_string(),
        formula_generators: show(&gens),
        formula_subgroup: None,
        brute_force: None,
        matches: None,
    };
    if brute {
        let z = center_bruteforce(g)?;
        let h = subgroup_closure(g, &gens)?;
        report.matches = Some(z == h);
        report.formula_subgroup = Some(show(&h));
        report.brute_force = Some(show(&z));
    }
    Ok(report)
}

#[derive(Debug, Clone, Serialize)]
pub struct NotcentralReport {
    pub p: u64,
    pub alpha: u32,
    pub beta: u32,
    pub order: String,
    pub lhs: String,
    pub rhs: String,
    pub equal: bool,
    pub nontrivial: bool,
}

/// Checks `[y^{p^alpha}, x] = [y^p, x]^{p^{alpha-1}} != e` in the product of
/// `<x>` of order `p^alpha` and `<y>` of order `p^beta`, of class `p + 1`.
pub fn check_notcentral_identity(p: u64, alpha: u32, beta: u32) -> Result<NotcentralReport, AnalysisError> {
    if alpha == 0 || alpha >= beta {
        return Err(AnalysisError::Precondition(format!("need 0 < alpha < beta, got {alpha}, {beta}")));
    }
    let spec = GroupSpec::new(p, p as usize + 1, vec![alpha, beta])?;
    let g = build_group(&spec)?;
    let pa = spec.p_pow(alpha)?;
    let pa1 = spec.p_pow(alpha - 1)?;
    let lhs = g.parse(&format!("[x2^{pa},x1]"))?;
    let rhs = g.parse(&format!("[x2^{p},x1]^{pa1}"))?;
    Ok(NotcentralReport {
        p,
        alpha,
        beta,
        order: g.order().to_string(),
        lhs: g.format_element(&lhs),
        rhs: g.format_element(&rhs),
        equal: lhs == rhs,
        nontrivial: !lhs.is_identity(),
    })
}

/// `r > 1` and `alpha_r <= alpha_{r-1} + floor((k-1)/(p-1))`.
pub fn capability_necessary(p: u64, k: usize, alphas: &[u32]) -> bool {
    let r = alphas.len();
    if r < 2 || p < 2 || k == 0 {
        return false;
    }
    let slack = (k as u64 - 1) / (p - 1);
    u64::from(alphas[r - 1]) <= u64::from(alphas[r - 2]) + slack
}

/// Capability of the `p`-nilpotent product: `r > 1` and `alpha_r <= alpha_{r-1} + 1`.
pub fn capability_decide(_p: u64, alphas: &[u32]) -> bool {
    let r = alphas.len();
    r > 1 && alphas[r - 1] <= alphas[r - 2] + 1
}

#[derive(Debug, Clone, Serialize)]
pub struct WitnessReport {
    pub p: u64,
    pub alphas: Vec<u32>,
    pub k_order: String,
    pub center_order: usize,
    pub layer_order: usize,
    pub top_power_trivial: bool,
    pub center_is_layer: bool,
    pub quotient_order: String,
    pub group_order: String,
    pub pairs_checked: usize,
    pub quotient_matches: bool,
    pub verified: bool,
}

/// Builds `K` of class `p + 1` and checks `K / Z(K) = K / K_{p+1}` against the
/// class-`p` product `G`.
pub fn capability_witness(p: u64, alphas: &[u32]) -> Result<WitnessReport, AnalysisError> {
    if !capability_decide(p, alphas) {
        return Err(AnalysisError::Precondition(format!("the product with orders {alphas:?} is not capable")));
    }
    let r = alphas.len();
    let k = build_group(&GroupSpec::new(p, p as usize + 1, alphas.to_vec())?)?;
    let g = build_group(&GroupSpec::new(p, p as usize, alphas.to_vec())?)?;
    let center = center_bruteforce(&k)?;
    let layer = subgroup_closure(&k, &k.lcs_layer(p as usize + 1)?)?;
    let xr = k.generator_element(r)?;
    let top = k.power(&xr, &BigInt::from(k.spec().p_pow(alphas[r - 2] + 1)?))?;

    let layer_set: HashSet<Vec<u64>> = layer.iter().map(|a| k.to_internal(a)).collect::<Result<_, _>>()?;
    let kc = k.collector();
    // the image in K of a normal form of G, by evaluating its word
    let lift = |a: &PcElement| -> Result<Vec<u64>, GroupError> {
        let mut acc = kc.identity_vec();
        for (s, &e) in a.0.iter().enumerate() {
            if e != 0 {
                let c = k.normal_form(&g.basis().entries[s].expr(p))?;
                acc = kc.mul(&acc, &kc.pow_u64(&k.to_internal(&c)?, e));
            }
        }
        Ok(acc)
    };
    let gens: Vec<PcElement> = (0..g.len()).map(|s| g.distinguished_element(s)).collect::<Result<_, _>>()?;
    let mut pairs = 0;
    let mut matches = true;
    for a in &gens {
        for b in &gens {
            pairs += 1;
            let ab = lift(&g.multiply(a, b)?)?;
            let prod = kc.mul(&lift(a)?, &lift(b)?);
            if !layer_set.contains(&kc.mul(&kc.inv(&ab), &prod)) {
                matches = false;
            }
        }
    }
    let quotient = k.order() / BigInt::from(layer.len());
    let center_is_layer = center == layer;
    let quotient_matches = matches && quotient == g.order();
    Ok(WitnessReport {
        p,
        alphas: alphas.to_vec(),
        k_order: k.order().to_string(),
        center_order: center.len(),
        layer_order: layer.len(),
        top_power_trivial: top.is_identity(),
        center_is_layer,
        quotient_order: quotient.to_string(),
        group_order: g.order().to_string(),
        pairs_checked: pairs,
        quotient_matches,
        verified: center_is_layer && quotient_matches && top.is_identity(),
    })
}
