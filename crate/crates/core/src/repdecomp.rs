//! SU(2) weight combinatorics. Spins and weights are stored doubled: spin ½ is 1,
//! weight −1 is −2.

use std::collections::BTreeMap;
use std::fmt;

use serde_json::{Map, Value};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RepError {
    #[error("weights do not form a representation: {0}")]
    NotARepresentation(String),
    #[error("not a non-negative half-integer: {0}")]
    BadHalfInteger(String),
}

/// Doubled weight → multiplicity.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct WeightMultiset(pub BTreeMap<i64, u64>);

/// Doubled spin → multiplicity.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SpinDecomposition(pub BTreeMap<u64, u64>);

/// "3/2", "1", "-1/2" from a doubled value.
pub fn half_str(doubled: i64) -> String {
    if doubled % 2 == 0 {
        (doubled / 2).to_string()
    } else {
        format!("{doubled}/2")
    }
}

/// Parse "3/2", "1.5" or "2" into a doubled non-negative integer.
pub fn parse_half(s: &str) -> Result<u64, RepError> {
    let bad = || RepError::BadHalfInteger(s.to_string());
    let t = s.trim();
    if let Some((n, d)) = t.split_once('/') {
        let n: u64 = n.trim().parse().map_err(|_| bad())?;
        return match d.trim() {
            "1" => Ok(2 * n),
            "2" => Ok(n),
            _ => Err(bad()),
        };
    }
    if let Ok(n) = t.parse::<u64>() {
        return Ok(2 * n);
    }
    let x: f64 = t.parse().map_err(|_| bad())?;
    let d = 2.0 * x;
    if x < 0.0 || (d - d.round()).abs() > 1e-12 {
        return Err(bad());
    }
    Ok(d.round() as u64)
}

impl WeightMultiset {
    pub fn total(&self) -> u64 {
        self.0.values().sum()
    }

    fn add(&mut self, w: i64, k: u64) {
        if k > 0 {
            *self.0.entry(w).or_insert(0) += k;
        }
    }

    pub fn tensor(&self, o: &WeightMultiset) -> WeightMultiset {
        let mut out = WeightMultiset::default();
        for (a, ka) in &self.0 {
            for (b, kb) in &o.0 {
                out.add(a + b, ka * kb);
            }
        }
        out
    }

    pub fn sum(&self, o: &WeightMultiset) -> WeightMultiset {
        let mut out = self.clone();
        for (w, k) in &o.0 {
            out.add(*w, *k);
        }
        out
    }

    pub fn to_json(&self) -> Value {
        Value::Object(self.0.iter().map(|(w, k)| (half_str(*w), Value::from(*k))).collect::<Map<_, _>>())
    }
}

impl SpinDecomposition {
    pub fn single(two_s: u64) -> Self {
        SpinDecomposition(BTreeMap::from([(two_s, 1)]))
    }

    pub fn mult(&self, two_s: u64) -> u64 {
        self.0.get(&two_s).copied().unwrap_or(0)
    }

    /// Σ (2s+1)·mult.
    pub fn dimension(&self) -> u64 {
        self.0.iter().map(|(s, k)| (s + 1) * k).sum()
    }

    pub fn weights(&self) -> WeightMultiset {
        let mut out = WeightMultiset::default();
        for (s, k) in &self.0 {
            for (w, _) in weights_of_sym(*s).0 {
                out.add(w, *k);
            }
        }
        out
    }

    pub fn to_json(&self) -> Value {
        Value::Object(self.0.iter().map(|(s, k)| (half_str(*s as i64), Value::from(*k))).collect::<Map<_, _>>())
    }

    /// Aligned two-column table.
    pub fn table(&self, heading: &str) -> String {
        let mut out = format!("{heading:>10}  mult\n");
        for (s, k) in self.0.iter().rev() {
            out.push_str(&format!("{:>10}  {k:>4}\n", half_str(*s as i64)));
        }
        out
    }
}

impl fmt::Display for SpinDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().rev().map(|(s, k)| format!("{}:{k}", half_str(*s as i64))).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// Weights of Sym^{2σ}: −σ, −σ+1, …, σ, each once.
pub fn weights_of_sym(two_sigma: u64) -> WeightMultiset {
    let t = two_sigma as i64;
    WeightMultiset((-t..=t).step_by(2).map(|w| (w, 1)).collect())
}

/// Weights of ∧•S*: {0, ±½, 0}, split into (even, odd) degree.
pub fn weights_of_exterior() -> (WeightMultiset, WeightMultiset) {
    (WeightMultiset(BTreeMap::from([(0, 2)])), weights_of_sym(1))
}

/// Highest-weight stripping.
pub fn weight_decompose(w: &WeightMultiset) -> Result<SpinDecomposition, RepError> {
    for (x, k) in &w.0 {
        if w.0.get(&-x) != Some(k) {
            return Err(RepError::NotARepresentation(format!("weight {} has no matching negative", half_str(*x))));
        }
    }
    let mut rest: BTreeMap<i64, i64> = w.0.iter().map(|(x, k)| (*x, *k as i64)).collect();
    let mut out = SpinDecomposition::default();
    loop {
        rest.retain(|_, k| *k != 0);
        let Some((&top, &k)) = rest.iter().next_back() else { break };
        if k < 0 {
            return Err(RepError::NotARepresentation(format!("negative multiplicity at weight {}", half_str(top))));
        }
        for (x, _) in weights_of_sym(top as u64).0 {
            let e = rest.entry(x).or_insert(0);
            *e -= k;
            if *e < 0 {
                return Err(RepError::NotARepresentation(format!("stripping spin {} leaves weight {} negative", half_str(top), half_str(x))));
            }
        }
        *out.0.entry(top as u64).or_insert(0) += k as u64;
    }
    Ok(out)
}

/// Sym^{2α} ⊗ Sym^{2β} = ⊕ Sym^{2s}, s = α+β, α+β−1, …, |α−β|.
pub fn tensor_sym_decompose(two_alpha: u64, two_beta: u64) -> SpinDecomposition {
    let (a, b) = (two_alpha.max(two_beta), two_alpha.min(two_beta));
    SpinDecomposition(((a - b)..=(a + b)).step_by(2).map(|s| (s, 1)).collect())
}

/// Little-group content of ∧•S₊* ⊗ Sym^{2σ}, split by parity of the exterior degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Multiplet {
    pub two_sigma: u64,
    pub even: SpinDecomposition,
    pub odd: SpinDecomposition,
}

impl Multiplet {
    pub fn total(&self) -> SpinDecomposition {
        let mut out = self.even.clone();
        for (s, k) in &self.odd.0 {
            *out.0.entry(*s).or_insert(0) += k;
        }
        out
    }

    pub fn to_json(&self) -> Value {
        serde_json::json!({
            "sigma": half_str(self.two_sigma as i64),
            "spins": self.total().to_json(),
            "bosonic": self.even.to_json(),
            "fermionic": self.odd.to_json(),
        })
    }
}

pub fn superspin_multiplet(two_sigma: u64) -> Multiplet {
    let sym = weights_of_sym(two_sigma);
    let (ev, od) = weights_of_exterior();
    // products of genuine representations always decompose
    Multiplet {
        two_sigma,
        even: weight_decompose(&ev.tensor(&sym)).expect("even part"),
        odd: weight_decompose(&od.tensor(&sym)).expect("odd part"),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub struct DofCount {
    pub bosonic: u64,
    pub fermionic: u64,
    /// 4σ+2
    pub expected: u64,
}

impl DofCount {
    pub fn balanced(&self) -> bool {
        self.bosonic == self.fermionic && self.bosonic == self.expected
    }
}

pub fn dof_check(two_sigma: u64) -> DofCount {
    let m = superspin_multiplet(two_sigma);
    DofCount { bosonic: m.even.dimension(), fermionic: m.odd.dimension(), expected: 2 * two_sigma + 2 }
}

/// Superspin content of ∧•S₊* ⊗ ∧•S₋* ⊗ Sym^{2σ}: multiplicities of ∧•S₋* ⊗ Sym^{2s} blocks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuperfieldContent {
    pub two_sigma: u64,
    pub superspins: SpinDecomposition,
    pub total_dim: u64,
    /// Content re-expanded against ∧•S₋* reproduces the full weight multiset.
    pub audit_ok: bool,
}

impl SuperfieldContent {
    pub fn to_json(&self) -> Value {
        serde_json::json!({
            "sigma": half_str(self.two_sigma as i64),
            "superspins": self.superspins.to_json(),
            "total_dim": self.total_dim,
            "audit_ok": self.audit_ok,
        })
    }
}

pub fn scalar_superfield_content(two_sigma: u64) -> SuperfieldContent {
    let (ev, od) = weights_of_exterior();
    let ext = ev.sum(&od);
    let sym = weights_of_sym(two_sigma);
    let full = ext.tensor(&ext).tensor(&sym);
    let superspins = weight_decompose(&ext.tensor(&sym)).expect("genuine representation");
    let rebuilt = superspins.weights().tensor(&ext);
    SuperfieldContent {
        two_sigma,
        total_dim: full.total(),
        audit_ok: rebuilt == full && full.total() == 4 * superspins.dimension(),
        superspins,
    }
}
