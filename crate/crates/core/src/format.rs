//! Line-oriented structure files.
//!
//! Explicit form:
//!
//! ```text
//! odp v1
//! elements 4
//! leq
//! 1111
//! 0101
//! 0011
//! 0001
//! perp 3 2 1 0
//! delta            (optional, followed by m rows of m indices)
//! labels a b c d   (optional)
//! ```
//!
//! Family form: `family v1`, `universe <n>`, then one subset per line as an
//! `n`-character bitstring (character `i` is element `i`). Order,
//! complement and Δ are inclusion, set complement and symmetric difference.
//!
//! Blank lines and `#` comments are ignored.

use std::fmt::Write as _;

use crate::construct::SetFamily;
use crate::error::{OdpError, Result};
use crate::odp::{DeltaTable, Odp};
use crate::poset::{check_size, FinOrthoPoset};

/// A parsed structure file.
#[derive(Debug, Clone)]
pub struct Structure {
    pub poset: FinOrthoPoset,
    pub delta: Option<DeltaTable>,
    /// Present for family-mode input.
    pub family: Option<SetFamily>,
}

impl Structure {
    pub fn into_odp(self) -> Result<Odp> {
        let delta = self
            .delta
            .ok_or_else(|| OdpError::structure("structure has no delta section"))?;
        Odp::new(self.poset, delta)
    }
}

struct Lines<'a> {
    inner: Vec<(usize, &'a str)>,
    pos: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        let inner = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty())
            .collect();
        Lines { inner, pos: 0 }
    }

    fn next(&mut self) -> Option<(usize, &'a str)> {
        let l = self.inner.get(self.pos).copied();
        self.pos += 1;
        l
    }

    fn require(&mut self, what: &str) -> Result<(usize, &'a str)> {
        let last = self.inner.last().map_or(1, |l| l.0);
        self.next()
            .ok_or_else(|| OdpError::parse(last, format!("unexpected end of input, expected {}", what)))
    }
}

fn keyword<'a>(line: (usize, &'a str), key: &str) -> Result<&'a str> {
    let (no, text) = line;
    let mut parts = text.splitn(2, char::is_whitespace);
    if parts.next() != Some(key) {
        return Err(OdpError::parse(no, format!("expected '{}'", key)));
    }
    Ok(parts.next().unwrap_or("").trim())
}

fn indices(no: usize, text: &str, m: usize) -> Result<Vec<usize>> {
    let v: Vec<usize> = text
        .split_whitespace()
        .map(|t| {
            t.parse()
                .map_err(|_| OdpError::parse(no, format!("bad index '{}'", t)))
        })
        .collect::<Result<_>>()?;
    if v.len() != m {
        return Err(OdpError::parse(no, format!("expected {} indices, found {}", m, v.len())));
    }
    Ok(v)
}

fn bits(no: usize, text: &str, m: usize) -> Result<Vec<bool>> {
    if text.chars().count() != m {
        return Err(OdpError::parse(
            no,
            format!("expected {} characters, found {}", m, text.chars().count()),
        ));
    }
    text.chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            _ => Err(OdpError::parse(no, format!("bad bit '{}'", c))),
        })
        .collect()
}

/// Parses either form. Element counts above `max_elements` are refused.
pub fn parse_structure(text: &str, max_elements: usize) -> Result<Structure> {
    let mut lines = Lines::new(text);
    let (no, header) = lines.require("header")?;
    match header.split_whitespace().collect::<Vec<_>>().as_slice() {
        ["odp", "v1"] => parse_explicit(&mut lines, max_elements),
        ["family", "v1"] => parse_family(&mut lines, max_elements),
        _ => Err(OdpError::parse(no, "expected 'odp v1' or 'family v1'")),
    }
}

fn parse_explicit(lines: &mut Lines<'_>, max_elements: usize) -> Result<Structure> {
    let line = lines.require("elements")?;
    let m: usize = keyword(line, "elements")?
        .parse()
        .map_err(|_| OdpError::parse(line.0, "bad element count"))?;
    if m == 0 {
        return Err(OdpError::parse(line.0, "element count must be positive"));
    }
    check_size(m, max_elements)?;

    let line = lines.require("leq")?;
    if !keyword(line, "leq")?.is_empty() {
        return Err(OdpError::parse(line.0, "leq rows go on the following lines"));
    }
    let mut leq = Vec::with_capacity(m);
    for _ in 0..m {
        let (no, row) = lines.require("leq row")?;
        leq.push(bits(no, row, m)?);
    }
    let line = lines.require("perp")?;
    let perp = indices(line.0, keyword(line, "perp")?, m)?;

    let mut delta = None;
    let mut labels = None;
    while let Some((no, text)) = lines.next() {
        let key = text.split_whitespace().next().unwrap_or("");
        match key {
            "delta" if delta.is_none() => {
                if !keyword((no, text), "delta")?.is_empty() {
                    return Err(OdpError::parse(no, "delta rows go on the following lines"));
                }
                let mut rows = Vec::with_capacity(m);
                for _ in 0..m {
                    let (no, row) = lines.require("delta row")?;
                    let r = indices(no, row, m)?;
                    if let Some(bad) = r.iter().find(|&&v| v >= m) {
                        return Err(OdpError::parse(no, format!("delta entry {} out of range", bad)));
                    }
                    rows.push(r);
                }
                delta = Some(DeltaTable::from_rows(&rows)?);
            }
            "labels" if labels.is_none() => {
                let toks: Vec<String> = keyword((no, text), "labels")?
                    .split_whitespace()
                    .map(str::to_string)
                    .collect();
                if toks.len() != m {
                    return Err(OdpError::parse(no, format!("expected {} labels, found {}", m, toks.len())));
                }
                labels = Some(toks);
            }
            _ => return Err(OdpError::parse(no, format!("unexpected line '{}'", text))),
        }
    }
    let mut poset = FinOrthoPoset::from_matrix(&leq, perp)?;
    if let Some(l) = labels {
        poset = poset.with_labels(l)?;
    }
    Ok(Structure {
        poset,
        delta,
        family: None,
    })
}

fn parse_family(lines: &mut Lines<'_>, max_elements: usize) -> Result<Structure> {
    let line = lines.require("universe")?;
    let n: usize = keyword(line, "universe")?
        .parse()
        .map_err(|_| OdpError::parse(line.0, "bad universe size"))?;
    let mut members = Vec::new();
    while let Some((no, text)) = lines.next() {
        let b = bits(no, text, n)?;
        let mask = b
            .iter()
            .enumerate()
            .fold(0u64, |acc, (i, &on)| if on { acc | 1 << i } else { acc });
        members.push(mask);
    }
    let family = SetFamily::new(n, members)?;
    check_size(family.len(), max_elements)?;
    let odp = family.to_odp()?;
    Ok(Structure {
        poset: odp.poset,
        delta: Some(odp.delta),
        family: Some(family),
    })
}

/// Explicit form, with the delta and label sections when available.
pub fn write_explicit(poset: &FinOrthoPoset, delta: Option<&DeltaTable>) -> String {
    let m = poset.size();
    let mut s = format!("odp v1\nelements {}\nleq\n", m);
    for x in 0..m {
        let row: String = (0..m).map(|y| if poset.leq(x, y) { '1' } else { '0' }).collect();
        s.push_str(&row);
        s.push('\n');
    }
    let perp: Vec<String> = poset.perp_map().iter().map(|p| p.to_string()).collect();
    let _ = writeln!(s, "perp {}", perp.join(" "));
    if let Some(d) = delta {
        s.push_str("delta\n");
        for x in 0..m {
            let row: Vec<String> = d.row(x).iter().map(|v| v.to_string()).collect();
            s.push_str(&row.join(" "));
            s.push('\n');
        }
    }
    if let Some(labels) = poset.labels() {
        let _ = writeln!(s, "labels {}", labels.join(" "));
    }
    s
}

pub fn write_family(family: &SetFamily) -> String {
    let n = family.universe();
    let mut s = format!("family v1\nuniverse {}\n", n);
    for &mask in family.members() {
        let row: String = (0..n).map(|i| if mask >> i & 1 == 1 { '1' } else { '0' }).collect();
        s.push_str(&row);
        s.push('\n');
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{even_sets_family, powerset_odp};

    #[test]
    fn explicit_round_trip() {
        let odp = powerset_odp(2).unwrap();
        let text = write_explicit(&odp.poset, Some(&odp.delta));
        let back = parse_structure(&text, 512).unwrap().into_odp().unwrap();
        assert_eq!(back, odp);
        assert_eq!(write_explicit(&back.poset, Some(&back.delta)), text);
    }

    #[test]
    fn family_round_trip() {
        let fam = even_sets_family(4).unwrap();
        let text = write_family(&fam);
        let parsed = parse_structure(&text, 512).unwrap();
        assert_eq!(parsed.family.as_ref(), Some(&fam));
        assert_eq!(parsed.poset.size(), 8);
    }

    #[test]
    fn comments_and_optional_sections() {
        let text = "# a chain\nodp v1\nelements 2\nleq\n11\n01  # upper row\nperp 1 0\n";
        let s = parse_structure(text, 512).unwrap();
        assert!(s.delta.is_none());
        assert_eq!(s.poset.size(), 2);
        assert!(s.into_odp().is_err());
    }

    #[test]
    fn errors_carry_line_numbers() {
        let text = "odp v1\nelements 2\nleq\n11\n0x\nperp 1 0\n";
        assert!(matches!(parse_structure(text, 512), Err(OdpError::Parse { line: 5, .. })));
        let text = "odp v1\nelements 2\nleq\n11\n01\nperp 0 0\n";
        assert!(matches!(parse_structure(text, 512), Err(OdpError::Structure(_))));
        let text = "odp v1\nelements 2\nleq\n11\n01\nperp 1 0\ndelta\n0 1\n1 2\n";
        assert!(matches!(parse_structure(text, 512), Err(OdpError::Parse { line: 9, .. })));
        assert!(parse_structure("odp v2\n", 512).is_err());
        assert!(matches!(
            parse_structure("odp v1\nelements 600\n", 512),
            Err(OdpError::TooLarge { size: 600, cap: 512 })
        ));
        let fam = "family v1\nuniverse 2\n00\n10\n11\n";
        assert!(matches!(parse_structure(fam, 512), Err(OdpError::Structure(_))));
    }
}
