//! Text format for BIGs:
//!
//! ```text
//! RULE motif-only      # optional
//! STAGES 2             # optional
//! FRAME
//! h1 h2 h3
//! MOTIFS
//! p1 1 a b             # id, y-value, optional member labels
//! EDGES
//! h1 p1
//! ```

use std::collections::{BTreeSet, HashMap};
use std::io::BufRead;

use super::{AncestorRule, Big, MotifEntry};
use crate::error::{BigsError, Result};
use crate::rational::{format_rational, parse_rational};

#[derive(Clone, Copy, PartialEq, Eq)]
enum Section {
    Header,
    Frame,
    Motifs,
    Edges,
}

pub fn load_big<R: BufRead>(source: R) -> Result<Big> {
    let mut text = String::new();
    for (lineno, line) in source.lines().enumerate() {
        let line = line.map_err(|e| BigsError::Parse {
            line: lineno + 1,
            message: e.to_string(),
        })?;
        text.push_str(&line);
        text.push('\n');
    }
    parse_big(&text)
}

pub fn parse_big(text: &str) -> Result<Big> {
    let mut section = Section::Header;
    let mut rule = AncestorRule::Explicit;
    let mut stages = None;
    let mut frame: Vec<String> = Vec::new();
    let mut frame_index: HashMap<String, usize> = HashMap::new();
    let mut motifs: Vec<MotifEntry> = Vec::new();
    let mut motif_index: HashMap<String, usize> = HashMap::new();
    let mut edges = Vec::new();
    let mut seen_edges = BTreeSet::new();

    for (lineno, raw) in text.lines().enumerate() {
        let line_no = lineno + 1;
        let err = |message: String| BigsError::Parse {
            line: line_no,
            message,
        };
        let tokens: Vec<&str> = raw.split('#').next().unwrap_or("").split_whitespace().collect();
        let Some(&head) = tokens.first() else { continue };
        match head {
            "FRAME" | "MOTIFS" | "EDGES" if tokens.len() == 1 => {
                section = match head {
                    "FRAME" => Section::Frame,
                    "MOTIFS" => Section::Motifs,
                    _ => Section::Edges,
                };
                continue;
            }
            _ => {}
        }
        match section {
            Section::Header => match tokens.as_slice() {
                ["RULE", r] => rule = r.parse().map_err(|e: BigsError| err(e.to_string()))?,
                ["STAGES", t] => {
                    stages = Some(t.parse().map_err(|_| err(format!("bad stage count `{t}`")))?)
                }
                _ => return Err(err(format!("unexpected `{head}` before the FRAME section"))),
            },
            Section::Frame => {
                for id in tokens {
                    if frame_index.insert(id.to_string(), frame.len()).is_some() {
                        return Err(err(format!("duplicate frame unit `{id}`")));
                    }
                    frame.push(id.to_string());
                }
            }
            Section::Motifs => {
                let [id, y, members @ ..] = tokens.as_slice() else {
                    return Err(err("expected `id y [members...]`".into()));
                };
                let y = parse_rational(y).ok_or_else(|| err(format!("bad y-value `{y}`")))?;
                if motif_index.insert(id.to_string(), motifs.len()).is_some() {
                    return Err(err(format!("duplicate motif `{id}`")));
                }
                motifs.push(MotifEntry {
                    id: id.to_string(),
                    y,
                    members: members.iter().map(|m| m.to_string()).collect(),
                });
            }
            Section::Edges => {
                let [unit, motif] = tokens.as_slice() else {
                    return Err(err("expected `frame-id motif-id`".into()));
                };
                let i = *frame_index
                    .get(*unit)
                    .ok_or_else(|| err(format!("unknown frame unit `{unit}`")))?;
                let k = *motif_index
                    .get(*motif)
                    .ok_or_else(|| err(format!("unknown motif `{motif}`")))?;
                if !seen_edges.insert((i, k)) {
                    return Err(err(format!("duplicate edge `{unit} {motif}`")));
                }
                edges.push((i, k));
            }
        }
    }
    Big::new(frame, motifs, &edges, rule, stages)
}

/// Writes `b` in the format read by `parse_big`. ACS network structure is
/// not part of the format.
pub fn write_big(b: &Big) -> String {
    let mut out = format!("RULE {}\n", b.rule());
    if let Some(t) = b.stages_required() {
        out.push_str(&format!("STAGES {t}\n"));
    }
    out.push_str("FRAME\n");
    for id in b.frame() {
        out.push_str(id);
        out.push('\n');
    }
    out.push_str("MOTIFS\n");
    for m in b.motifs() {
        out.push_str(&m.id);
        out.push(' ');
        out.push_str(&format_rational(&m.y));
        for member in &m.members {
            out.push(' ');
            out.push_str(member);
        }
        out.push('\n');
    }
    out.push_str("EDGES\n");
    for (i, k) in b.edges() {
        out.push_str(&format!("{} {}\n", b.frame()[i], b.motif_label(k)));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::design::{first_order_inclusion, Design};
    use crate::rational::{binomial, int};
    use num_rational::BigRational;
    use num_traits::One;

    const HOSPITALS: &str = "\
# patients linked to the hospitals that treated them
FRAME
h1 h2 h3
MOTIFS
alice 1
bob 2.5
EDGES
h1 alice
h2 alice
h3 bob
";

    #[test]
    fn hospitals_and_patients() {
        let b = parse_big(HOSPITALS).unwrap();
        assert_eq!(b.beta(0).len(), 2);
        assert_eq!(b.alpha(2), &[1]);
        assert_eq!(b.rule(), AncestorRule::Explicit);
        assert_eq!(parse_big(&write_big(&b)).unwrap(), b);
    }

    #[test]
    fn format_errors() {
        let orphan = HOSPITALS.replace("MOTIFS\n", "MOTIFS\ncarol 1\n");
        assert!(matches!(parse_big(&orphan), Err(BigsError::NoAncestors { .. })));
        let dup = format!("{HOSPITALS}h3 bob\n");
        assert!(matches!(parse_big(&dup), Err(BigsError::Parse { line: 11, .. })));
        let unknown = format!("{HOSPITALS}h9 bob\n");
        assert!(matches!(parse_big(&unknown), Err(BigsError::Parse { .. })));
        assert!(parse_big("h1\nFRAME\n").is_err());
        assert!(parse_big("FRAME\na\nMOTIFS\np x\nEDGES\na p\n").is_err());
    }

    #[test]
    fn strips_and_clusters() {
        // 20 strips; each cluster is reached from 4 strips.
        let mut text = String::from("RULE explicit\nFRAME\n");
        for s in 0..20 {
            text.push_str(&format!("s{s}\n"));
        }
        text.push_str("MOTIFS\n");
        for c in 0..5 {
            text.push_str(&format!("c{c} {}\n", c + 1));
        }
        text.push_str("EDGES\n");
        for c in 0..5 {
            for s in 0..4 {
                text.push_str(&format!("s{} c{c}\n", (c * 3 + s) % 20));
            }
        }
        let b = parse_big(&text).unwrap();
        assert_eq!(parse_big(&write_big(&b)).unwrap(), b);
        let d = Design::srswor(20, 3).unwrap();
        let expected = BigRational::one() - BigRational::new(binomial(16, 3), binomial(20, 3));
        for k in 0..5 {
            assert_eq!(first_order_inclusion(&d, &b, k).unwrap(), expected);
        }
        assert_eq!(b.total(), int(15));
    }
}
