//! Conradian and recurrence conditions checked on finite samples.

use std::cmp::Ordering;

use rayon::prelude::*;
use serde::Serialize;

use crate::dynamics::certificate::NonRecurrenceCertificate;
use crate::error::{Error, Result};
use crate::group::GroupElement;
use crate::order::{OrderOracle, OrderedChain};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ScaleVerdict {
    HoldsAtScale,
    FailsAtScale,
    CertifiedFailure,
}

/// One tested instance: γ together with a chain (for pair conditions the
/// chain is the single element λ).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Instance {
    pub gamma: GroupElement,
    pub chain: Vec<GroupElement>,
    /// Exponents n that satisfy the condition.
    pub witnesses: Vec<i64>,
    /// Exponents the oracle could not decide (partial cones).
    pub undetermined: Vec<i64>,
    /// Largest |n| tried.
    pub bound: i64,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScaleReport {
    pub verdict: ScaleVerdict,
    pub instances: Vec<Instance>,
    pub tested: usize,
    pub failing: usize,
    /// The instance budget cut the enumeration short.
    pub truncated: bool,
    pub certificate: Option<NonRecurrenceCertificate>,
    pub note: String,
}

impl ScaleReport {
    pub(crate) fn from_instances(instances: Vec<Instance>, truncated: bool, note: &str) -> Self {
        let failing = instances.iter().filter(|i| !i.holds).count();
        ScaleReport {
            verdict: if failing == 0 {
                ScaleVerdict::HoldsAtScale
            } else {
                ScaleVerdict::FailsAtScale
            },
            tested: instances.len(),
            failing,
            instances,
            truncated,
            certificate: None,
            note: note.to_string(),
        }
    }

    pub fn failures(&self) -> impl Iterator<Item = &Instance> {
        self.instances.iter().filter(|i| !i.holds)
    }

    /// Upgrades the verdict after the certificate replays. A tested instance
    /// matching the certificate must have no witnesses.
    pub fn certify(mut self, cert: NonRecurrenceCertificate) -> Result<Self> {
        cert.replay().map_err(Error::OracleDefect)?;
        if let Some(i) = self.instances.iter().find(|i| i.gamma == cert.gamma && i.chain == cert.chain) {
            if !i.witnesses.is_empty() {
                return Err(Error::OracleDefect(format!(
                    "certified instance has recurrence witnesses {:?}",
                    i.witnesses
                )));
            }
        }
        self.verdict = ScaleVerdict::CertifiedFailure;
        self.certificate = Some(cert);
        Ok(self)
    }
}

/// Maps the errors a partial oracle raises on unseen elements to `None`.
pub(crate) fn soft(r: Result<bool>) -> Result<Option<bool>> {
    match r {
        Ok(b) => Ok(Some(b)),
        Err(Error::OutsideBall(_) | Error::OracleUndefined(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

pub(crate) fn positive_elements(oracle: &OrderOracle, elements: &[GroupElement]) -> Result<Vec<GroupElement>> {
    let mut out = Vec::new();
    for g in elements {
        if soft(oracle.positive(g))? == Some(true) {
            out.push(g.clone());
        }
    }
    Ok(out)
}

const CONRADIAN_NOTE: &str = "a pair without a witness up to N is inconclusive for the unbounded condition";

/// For all positive γ, λ in the sample, looks for n ∈ [1, N] with λγⁿ ≻ γ.
pub fn conradian_at_scale(oracle: &OrderOracle, elements: &[GroupElement], n_max: u32) -> Result<ScaleReport> {
    if n_max == 0 {
        return Err(Error::InvalidParameter("N must be at least 1".into()));
    }
    let group = oracle.group();
    let pos = positive_elements(oracle, elements)?;
    let pairs: Vec<(&GroupElement, &GroupElement)> = pos.iter().flat_map(|g| pos.iter().map(move |l| (g, l))).collect();
    let instances = pairs
        .par_iter()
        .map(|&(gamma, lambda)| {
            let gi = group.inv(gamma);
            let mut power = group.identity();
            let mut undetermined = Vec::new();
            let mut witnesses = Vec::new();
            for n in 1..=n_max as i64 {
                power = group.mul(&power, gamma);
                // γ ≺ λγⁿ ⟺ γ⁻¹λγⁿ ≻ e
                let q = group.mul(&group.mul(&gi, lambda), &power);
                match soft(oracle.positive(&q))? {
                    Some(true) => {
                        witnesses.push(n);
                        break;
                    }
                    Some(false) => {}
                    None => undetermined.push(n),
                }
            }
            Ok(Instance {
                gamma: gamma.clone(),
                chain: vec![lambda.clone()],
                holds: !witnesses.is_empty(),
                witnesses,
                undetermined,
                bound: n_max as i64,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ScaleReport::from_instances(instances, false, CONRADIAN_NOTE))
}

/// Exponents n ∈ [1, N] with the chain still increasing after right
/// multiplication by γⁿ; `None` entries are undetermined.
/// Stops once `stop_after` witnesses are found.
fn witnesses_fast(
    oracle: &OrderOracle,
    gamma: &GroupElement,
    quotients: &[GroupElement],
    n_max: u32,
    stop_after: usize,
) -> Result<(Vec<i64>, Vec<i64>)> {
    let signs: Vec<Vec<Result<bool>>> = quotients
        .iter()
        .map(|q| oracle.power_conjugate_signs(gamma, q, n_max))
        .collect();
    let mut found = Vec::new();
    let mut undetermined = Vec::new();
    for n in 1..=n_max as i64 {
        // λᵢγⁿ ≺ λᵢ₊₁γⁿ ⟺ γ⁻ⁿ qᵢ γⁿ ≻ e
        let mut all = Some(true);
        for s in &signs {
            match soft(s[n as usize - 1].clone())? {
                Some(true) => {}
                Some(false) => {
                    all = Some(false);
                    break;
                }
                None => all = None,
            }
        }
        match all {
            Some(true) => {
                found.push(n);
                if found.len() >= stop_after {
                    break;
                }
            }
            Some(false) => {}
            None => undetermined.push(n),
        }
    }
    Ok((found, undetermined))
}

/// All n ∈ [1, N] such that λ₁γⁿ ≺ ⋯ ≺ λ_rγⁿ.
///
/// Each answer is cross-checked against the dual formulation: the chain
/// itself lies in the basic open set of the order translated by γ⁻ⁿ.
pub fn recurrence_witnesses(oracle: &OrderOracle, gamma: &GroupElement, chain: &OrderedChain, n_max: u32) -> Result<Vec<i64>> {
    let group = oracle.group();
    group.check(gamma)?;
    if !oracle.in_basic_open(chain)? {
        return Err(Error::InvalidChain("the chain is not increasing in this order".into()));
    }
    let mut out = Vec::new();
    let gi = group.inv(gamma);
    for n in 1..=n_max as i64 {
        let moved = chain.right_multiply(group, &group.pow(gamma, n));
        let direct = oracle.in_basic_open(&moved)?;
        let dual = oracle.translate(&group.pow(&gi, n))?.in_basic_open(chain)?;
        if direct != dual {
            return Err(Error::OracleDefect(format!(
                "translation duality fails at n = {n} for γ = {gamma}"
            )));
        }
        if direct {
            out.push(n);
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RecurrenceParams {
    pub n_max: u32,
    pub max_chain_len: usize,
    pub min_witnesses: usize,
    pub max_instances: usize,
}

impl Default for RecurrenceParams {
    fn default() -> Self {
        RecurrenceParams {
            n_max: 10,
            max_chain_len: 3,
            min_witnesses: 3,
            max_instances: 10_000,
        }
    }
}

const RECURRENCE_NOTE: &str = "recurrence needs infinitely many witnesses; holding at scale means at least min_witnesses exponents up to N, and failing at scale is inconclusive unless certified";

/// Chains: every subset of the sample of size 2..=max_len, sorted into
/// increasing order, enumerated by subset in sample order.
fn chains(oracle: &OrderOracle, elements: &[GroupElement], max_len: usize, budget: usize) -> Result<(Vec<Vec<GroupElement>>, bool)> {
    let n = elements.len();
    let mut out = Vec::new();
    let mut truncated = false;
    for len in 2..=max_len.min(n) {
        let mut idx: Vec<usize> = (0..len).collect();
        loop {
            if out.len() >= budget {
                truncated = true;
                return Ok((out, truncated));
            }
            let mut chain: Vec<GroupElement> = idx.iter().map(|&i| elements[i].clone()).collect();
            let mut err = None;
            chain.sort_by(|a, b| match oracle.compare(a, b) {
                Ok(o) => o,
                Err(e) => {
                    err.get_or_insert(e);
                    Ordering::Equal
                }
            });
            if err.map_or(Ok(Some(true)), |e| soft(Err(e)))?.is_some() {
                out.push(chain);
            }
            // next combination
            let mut k = len;
            while k > 0 && idx[k - 1] == n - len + k - 1 {
                k -= 1;
            }
            if k == 0 {
                break;
            }
            idx[k - 1] += 1;
            for j in k..len {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }
    Ok((out, truncated))
}

/// Recurrence for every cyclic subgroup, at scale: for every non-identity
/// γ in the sample and every increasing chain drawn from it, at least
/// `min_witnesses` exponents n ≤ N keep the chain increasing.
pub fn recurrent_at_scale(oracle: &OrderOracle, elements: &[GroupElement], params: &RecurrenceParams) -> Result<ScaleReport> {
    if params.n_max == 0 || params.max_chain_len < 2 || params.min_witnesses == 0 {
        return Err(Error::InvalidParameter(
            "need N ≥ 1, chain length ≥ 2 and at least one witness".into(),
        ));
    }
    let group = oracle.group();
    let mut sample: Vec<GroupElement> = Vec::new();
    for g in elements {
        group.check(g)?;
        if !sample.contains(g) {
            sample.push(g.clone());
        }
    }
    let gammas: Vec<&GroupElement> = sample.iter().filter(|g| !group.is_identity(g)).collect();
    let per_gamma = params.max_instances / gammas.len().max(1);
    let (chains, mut truncated) = chains(oracle, &sample, params.max_chain_len, per_gamma.max(1))?;
    let mut jobs = Vec::new();
    'outer: for &gamma in &gammas {
        for chain in &chains {
            if jobs.len() >= params.max_instances {
                truncated = true;
                break 'outer;
            }
            jobs.push((gamma, chain));
        }
    }
    let instances = jobs
        .par_iter()
        .map(|&(gamma, chain)| {
            let quotients = OrderedChain::new(chain.clone())?.quotients(group);
            let (witnesses, undetermined) = witnesses_fast(oracle, gamma, &quotients, params.n_max, usize::MAX)?;
            Ok(Instance {
                gamma: gamma.clone(),
                chain: chain.clone(),
                holds: witnesses.len() >= params.min_witnesses,
                witnesses,
                undetermined,
                bound: params.n_max as i64,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ScaleReport::from_instances(instances, truncated, RECURRENCE_NOTE))
}

#[derive(Clone, Debug, Serialize)]
pub struct ImplicationInstance {
    pub gamma: GroupElement,
    pub lambda: GroupElement,
    pub n: i64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ImplicationReport {
    /// Pairs with a recurrence witness whose Conradian conclusion was checked.
    pub verified: usize,
    /// Pairs without a recurrence witness up to N (outside the hypothesis).
    pub skipped: usize,
    pub undetermined: usize,
    /// Pairs where γⁿ ≺ λγⁿ and γⁿ ⪰ γ hold but λγⁿ ≻ γ fails.
    pub violations: Vec<ImplicationInstance>,
}

/// Recurrence of (e, λ) under γ gives n with γⁿ ≺ λγⁿ; since γⁿ ⪰ γ this
/// yields the Conradian inequality λγⁿ ≻ γ. Checks every such step.
pub fn recurrent_implies_conradian_check(oracle: &OrderOracle, elements: &[GroupElement], n_max: u32) -> Result<ImplicationReport> {
    let group = oracle.group();
    let pos = positive_elements(oracle, elements)?;
    enum Pair {
        Verified,
        Skipped,
        Undetermined,
        Violation(i64),
    }
    let classify = |gamma: &GroupElement, lambda: &GroupElement| -> Result<Pair> {
        let (found, _) = witnesses_fast(oracle, gamma, std::slice::from_ref(lambda), n_max, 1)?;
        let Some(&n) = found.first() else {
            return Ok(Pair::Skipped);
        };
        let gn = group.pow(gamma, n);
        let lgn = group.mul(lambda, &gn);
        let Some(above) = soft(oracle.compare(gamma, &gn).map(|o| o != Ordering::Greater))? else {
            return Ok(Pair::Undetermined);
        };
        Ok(match soft(oracle.compare(gamma, &lgn).map(|o| o == Ordering::Less))? {
            None => Pair::Undetermined,
            Some(true) => Pair::Verified,
            Some(false) if above => Pair::Violation(n),
            Some(false) => Pair::Skipped,
        })
    };
    let rows = pos
        .par_iter()
        .map(|gamma| pos.iter().map(|lambda| classify(gamma, lambda)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    let mut report = ImplicationReport {
        verified: 0,
        skipped: 0,
        undetermined: 0,
        violations: Vec::new(),
    };
    for (gamma, row) in pos.iter().zip(rows) {
        for (lambda, pair) in pos.iter().zip(row) {
            match pair {
                Pair::Verified => report.verified += 1,
                Pair::Skipped => report.skipped += 1,
                Pair::Undetermined => report.undetermined += 1,
                Pair::Violation(n) => report.violations.push(ImplicationInstance {
                    gamma: gamma.clone(),
                    lambda: lambda.clone(),
                    n,
                }),
            }
        }
    }
    Ok(report)
}
