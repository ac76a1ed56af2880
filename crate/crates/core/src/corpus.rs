//! The frozen corpus of finite instances used by the property suite.

use crate::construct::{
    enumerate_delta_subgroups, even_sets_odp, powerset_odp, product_odp, SetFamily,
};
use crate::error::Result;
use crate::odp::Odp;

/// Products must stay strictly below this many elements.
pub const PRODUCT_LIMIT: usize = 512;

#[derive(Debug, Clone)]
pub struct CorpusInstance {
    pub name: String,
    pub odp: Odp,
    /// Set for instances generated from a set family.
    pub family: Option<SetFamily>,
}

impl CorpusInstance {
    pub fn size(&self) -> usize {
        self.odp.size()
    }
}

/// `powerset(1..=4)`, `even(4)`, `even(6)` and every Δ-subgroup family over
/// 1 to 4 points, in that order.
pub fn base_corpus() -> Result<Vec<CorpusInstance>> {
    let mut out = Vec::new();
    for n in 1..=4 {
        out.push(CorpusInstance {
            name: format!("powerset({})", n),
            odp: powerset_odp(n)?,
            family: Some(crate::construct::powerset_family(n)?),
        });
    }
    for two_k in [4, 6] {
        out.push(CorpusInstance {
            name: format!("even({})", two_k),
            odp: even_sets_odp(two_k)?,
            family: Some(crate::construct::even_sets_family(two_k)?),
        });
    }
    for n in 1..=4 {
        for (k, fam) in enumerate_delta_subgroups(n)?.into_iter().enumerate() {
            out.push(CorpusInstance {
                name: format!("subgroup(n={},#{})", n, k),
                odp: fam.to_odp()?,
                family: Some(fam),
            });
        }
    }
    Ok(out)
}

/// Base corpus followed by every product `base[i] × base[j]` (i ≤ j) with
/// fewer than [`PRODUCT_LIMIT`] elements.
pub fn frozen_corpus() -> Result<Vec<CorpusInstance>> {
    let base = base_corpus()?;
    let mut out = base.clone();
    for i in 0..base.len() {
        for j in i..base.len() {
            if base[i].size() * base[j].size() < PRODUCT_LIMIT {
                out.push(CorpusInstance {
                    name: format!("{}x{}", base[i].name, base[j].name),
                    odp: product_odp(&base[i].odp, &base[j].odp)?,
                    family: None,
                });
            }
        }
    }
    Ok(out)
}
