use std::collections::BTreeMap;
use std::fmt::Write as _;

use super::{Quad, SignTables, Triangulation};
use crate::error::{Error, Result};
use crate::perm::Perm4;

fn parse_num<T: std::str::FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<T> {
    let tok = tok.ok_or_else(|| Error::malformed(line, format!("missing {what}")))?;
    tok.parse()
        .map_err(|_| Error::malformed(line, format!("invalid {what} `{tok}`")))
}

fn expect(tok: Option<&str>, word: &str, line: usize) -> Result<()> {
    match tok {
        Some(t) if t == word => Ok(()),
        Some(t) => Err(Error::malformed(line, format!("expected `{word}`, found `{t}`"))),
        None => Err(Error::malformed(line, format!("expected `{word}`"))),
    }
}

enum Section {
    Header,
    Tet(usize),
    Signs(u32),
    Cocycle,
}

/// Parses the plain-text triangulation format:
///
/// ```text
/// name: figure-8
/// tetrahedra: 2
/// tet 0
///   face 0 -> tet 1 perm 2 0 1 3
///   ...
/// signs 2
///   tet 0 point 0 0 1 1 +
/// cocycle
///   tet 0 face 2 -
/// ```
pub fn parse_triangulation(text: &str) -> Result<Triangulation> {
    let mut name = None;
    let mut count: Option<usize> = None;
    let mut faces: Vec<[Option<(usize, Perm4)>; 4]> = Vec::new();
    let mut signs = SignTables::new();
    let mut cocycles: Vec<super::CocycleSpec> = Vec::new();
    let mut section = Section::Header;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(rest) = content.strip_prefix("name:") {
            name = Some(rest.trim().to_string());
            continue;
        }
        if let Some(rest) = content.strip_prefix("tetrahedra:") {
            if count.is_some() {
                return Err(Error::malformed(line, "duplicate `tetrahedra`"));
            }
            let s: usize = parse_num(Some(rest.trim()), line, "tetrahedron count")?;
            if s == 0 {
                return Err(Error::malformed(line, "tetrahedron count must be positive"));
            }
            count = Some(s);
            faces = vec![[None; 4]; s];
            continue;
        }
        let s = count.ok_or_else(|| Error::malformed(line, "`tetrahedra:` must come first"))?;
        let mut toks = content.split_whitespace();
        let head = toks.next().unwrap_or_default();
        match head {
            "tet" if content.split_whitespace().count() == 2 => {
                let k: usize = parse_num(toks.next(), line, "tetrahedron index")?;
                if k >= s {
                    return Err(Error::malformed(line, format!("tetrahedron {k} out of range")));
                }
                section = Section::Tet(k);
            }
            "signs" => {
                let n: u32 = parse_num(toks.next(), line, "n")?;
                if n < 2 {
                    return Err(Error::malformed(line, "signs table needs n >= 2"));
                }
                if signs.contains_key(&n) {
                    return Err(Error::malformed(line, format!("duplicate signs {n} table")));
                }
                signs.insert(n, BTreeMap::new());
                section = Section::Signs(n);
            }
            "cocycle" => {
                if toks.next().is_some() {
                    return Err(Error::malformed(line, "trailing tokens"));
                }
                cocycles.push(Vec::new());
                section = Section::Cocycle;
            }
            "tet" if matches!(section, Section::Cocycle) => {
                let k: usize = parse_num(toks.next(), line, "tetrahedron index")?;
                if k >= s {
                    return Err(Error::malformed(line, format!("tetrahedron {k} out of range")));
                }
                expect(toks.next(), "face", line)?;
                let f: usize = parse_num(toks.next(), line, "face index")?;
                if f > 3 {
                    return Err(Error::malformed(line, format!("face {f} out of range")));
                }
                let sign = match toks.next() {
                    Some("+") => 1,
                    Some("-") => -1,
                    other => return Err(Error::malformed(line, format!("invalid sign {other:?}"))),
                };
                if toks.next().is_some() {
                    return Err(Error::malformed(line, "trailing tokens"));
                }
                cocycles.last_mut().expect("section opened").push((k, f, sign));
            }
            "face" => {
                let Section::Tet(k) = section else {
                    return Err(Error::malformed(line, "`face` outside a `tet` block"));
                };
                let f: usize = parse_num(toks.next(), line, "face index")?;
                if f > 3 {
                    return Err(Error::malformed(line, format!("face {f} out of range")));
                }
                expect(toks.next(), "->", line)?;
                expect(toks.next(), "tet", line)?;
                let k2: usize = parse_num(toks.next(), line, "target tetrahedron")?;
                if k2 >= s {
                    return Err(Error::malformed(line, format!("tetrahedron {k2} out of range")));
                }
                expect(toks.next(), "perm", line)?;
                let mut images = [0u8; 4];
                for slot in images.iter_mut() {
                    *slot = parse_num(toks.next(), line, "permutation entry")?;
                }
                if toks.next().is_some() {
                    return Err(Error::malformed(line, "trailing tokens"));
                }
                let perm = Perm4::new(images).map_err(|e| Error::malformed(line, e.to_string()))?;
                if faces[k][f].is_some() {
                    return Err(Error::malformed(line, format!("face {f} of tet {k} glued twice")));
                }
                faces[k][f] = Some((k2, perm));
            }
            "tet" => {
                let Section::Signs(n) = section else {
                    return Err(Error::malformed(line, "point sign outside a `signs` block"));
                };
                let k: usize = parse_num(toks.next(), line, "tetrahedron index")?;
                if k >= s {
                    return Err(Error::malformed(line, format!("tetrahedron {k} out of range")));
                }
                expect(toks.next(), "point", line)?;
                let mut t: Quad = [0; 4];
                for slot in t.iter_mut() {
                    *slot = parse_num(toks.next(), line, "point coordinate")?;
                }
                let sign = match toks.next() {
                    Some("+") | Some("+1") | Some("1") => 1,
                    Some("-") | Some("-1") => -1,
                    other => {
                        return Err(Error::malformed(line, format!("invalid sign {other:?}")))
                    }
                };
                if toks.next().is_some() {
                    return Err(Error::malformed(line, "trailing tokens"));
                }
                if t.iter().sum::<u32>() != n || t.contains(&n) {
                    return Err(Error::malformed(
                        line,
                        format!("{t:?} is not a non-vertex point of level {n}"),
                    ));
                }
                let table = signs.get_mut(&n).expect("section opened");
                if table.insert((k, t), sign).is_some() {
                    return Err(Error::malformed(line, "duplicate sign entry"));
                }
            }
            other => return Err(Error::malformed(line, format!("unknown keyword `{other}`"))),
        }
    }

    let s = count.ok_or_else(|| Error::malformed(0, "missing `tetrahedra:`"))?;
    let mut gluings = Vec::with_capacity(s);
    for (k, row) in faces.iter().enumerate() {
        let mut out = [(0, Perm4::IDENTITY); 4];
        for f in 0..4 {
            out[f] = row[f].ok_or(Error::UnpairedFace { tet: k, face: f })?;
        }
        gluings.push(out);
    }
    Triangulation::with_signs(name, gluings, signs)?.with_cocycles(cocycles)
}

impl Triangulation {
    /// Canonical text form; `parse_triangulation` inverts it exactly.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if let Some(name) = &self.name {
            let _ = writeln!(out, "name: {name}");
        }
        let _ = writeln!(out, "tetrahedra: {}", self.num_tetrahedra());
        for (k, row) in self.gluings.iter().enumerate() {
            let _ = writeln!(out, "tet {k}");
            for (f, (k2, p)) in row.iter().enumerate() {
                let _ = writeln!(out, "  face {f} -> tet {k2} perm {p}");
            }
        }
        for (n, table) in &self.signs {
            let _ = writeln!(out, "signs {n}");
            for (&(k, t), &sg) in table {
                let [a, b, c, d] = t;
                let ch = if sg > 0 { '+' } else { '-' };
                let _ = writeln!(out, "  tet {k} point {a} {b} {c} {d} {ch}");
            }
        }
        for spec in &self.cocycles {
            let _ = writeln!(out, "cocycle");
            for &(k, f, sg) in spec {
                let ch = if sg > 0 { '+' } else { '-' };
                let _ = writeln!(out, "  tet {k} face {f} {ch}");
            }
        }
        out
    }

    pub fn gluings_raw(&self) -> Vec<[(usize, Perm4); 4]> {
        self.gluings.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unpaired_face() {
        let text = "tetrahedra: 1\ntet 0\n  face 0 -> tet 0 perm 1 0 2 3\n";
        // face 0 -> face 1 of the same simplex, face 1 has no line
        assert_eq!(
            parse_triangulation(text).unwrap_err(),
            Error::UnpairedFace { tet: 0, face: 1 }
        );
    }

    #[test]
    fn non_involutive() {
        let text = "tetrahedra: 2\n\
            tet 0\n face 0 -> tet 1 perm 0 1 2 3\n face 1 -> tet 1 perm 0 1 2 3\n\
            face 2 -> tet 1 perm 0 1 2 3\n face 3 -> tet 1 perm 0 1 2 3\n\
            tet 1\n face 0 -> tet 0 perm 0 1 2 3\n face 1 -> tet 0 perm 0 1 2 3\n\
            face 2 -> tet 0 perm 0 1 2 3\n face 3 -> tet 0 perm 0 1 3 2\n";
        match parse_triangulation(text).unwrap_err() {
            Error::NonInvolutiveGluing { .. } => {}
            e => panic!("unexpected {e:?}"),
        }
    }

    #[test]
    fn malformed_lines() {
        assert!(matches!(
            parse_triangulation("tet 0\n").unwrap_err(),
            Error::MalformedInput { line: 1, .. }
        ));
        assert!(matches!(
            parse_triangulation("tetrahedra: 1\ntet 0\n face 0 -> tet 0 perm 1 1 2 3\n")
                .unwrap_err(),
            Error::MalformedInput { line: 3, .. }
        ));
    }

    #[test]
    fn round_trip_fixtures() {
        for t in crate::fixtures::all() {
            let text = t.to_text();
            let back = parse_triangulation(&text).unwrap();
            assert_eq!(back, t);
            assert_eq!(back.to_text(), text);
        }
    }
}
