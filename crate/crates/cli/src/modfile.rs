//! Text format for module presentations: one declaration per line, `#`
//! starts a comment.
//!
//! ```text
//! rank 1
//! generator g1 1
//! generator g2 2
//! sq 1 g1 = g2
//! sq 2 g2 = t^2*g2
//! relation t*g1            # optional quotient data
//! ```
//!
//! A submodule file instead names an ambient free presentation and its
//! generating elements:
//!
//! ```text
//! submodule-of ambient.mod
//! subgen t*g1 + g2
//! ```
//!
//! Unlisted `sq i g` entries are zero.  All degree mismatches are rejected
//! with the offending line number.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use umod_core::hv::parse_poly;
use umod_core::umod::{quotient_by, submodule, FreeElement, Presentation};

/// Parse or IO failure, carrying the file and line it came from.
#[derive(Debug)]
pub enum ModFileError {
    Io { path: PathBuf, message: String },
    Syntax { path: PathBuf, line: usize, message: String },
}

impl fmt::Display for ModFileError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModFileError::Io { path, message } => {
                write!(f, "{}: {message}", path.display())
            }
            ModFileError::Syntax { path, line, message } => {
                write!(f, "{}:{line}: {message}", path.display())
            }
        }
    }
}

impl std::error::Error for ModFileError {}

/// Load a presentation from disk, following at most `MAX_DEPTH` levels of
/// `submodule-of` references (resolved relative to the referencing file).
pub fn load_presentation(path: &Path) -> Result<Presentation, ModFileError> {
    load_with_depth(path, 0)
}

const MAX_DEPTH: usize = 8;

fn load_with_depth(path: &Path, depth: usize) -> Result<Presentation, ModFileError> {
    if depth > MAX_DEPTH {
        return Err(ModFileError::Io {
            path: path.to_path_buf(),
            message: format!("more than {MAX_DEPTH} levels of submodule-of references"),
        });
    }
    let text = fs::read_to_string(path).map_err(|e| ModFileError::Io {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    parse_presentation(&text, path, depth)
}

struct Line<'a> {
    number: usize,
    text: &'a str,
}

fn significant_lines(text: &str) -> Vec<Line<'_>> {
    text.lines()
        .enumerate()
        .filter_map(|(idx, raw)| {
            let stripped = match raw.find('#') {
                Some(pos) => &raw[..pos],
                None => raw,
            };
            let trimmed = stripped.trim();
            if trimmed.is_empty() {
                None
            } else {
                Some(Line { number: idx + 1, text: trimmed })
            }
        })
        .collect()
}

fn parse_presentation(
    text: &str,
    path: &Path,
    depth: usize,
) -> Result<Presentation, ModFileError> {
    let err = |line: usize, message: String| ModFileError::Syntax {
        path: path.to_path_buf(),
        line,
        message,
    };
    let lines = significant_lines(text);
    if lines.iter().any(|l| l.text.starts_with("submodule-of")) {
        return parse_submodule(&lines, text, path, depth);
    }

    let mut rank: Option<u32> = None;
    let mut gens: Vec<(String, u32)> = Vec::new();
    let mut sq_entries: Vec<(usize, usize, u32, String)> = Vec::new();
    let mut relations: Vec<(usize, String)> = Vec::new();

    for line in &lines {
        let mut words = line.text.split_whitespace();
        let keyword = words.next().unwrap();
        match keyword {
            "rank" => {
                if rank.is_some() {
                    return Err(err(line.number, "duplicate rank declaration".into()));
                }
                if !gens.is_empty() {
                    return Err(err(line.number, "rank must precede generators".into()));
                }
                let value: u32 = words
                    .next()
                    .and_then(|w| w.parse().ok())
                    .filter(|&r| r >= 1)
                    .ok_or_else(|| err(line.number, "rank takes one integer ≥ 1".into()))?;
                if words.next().is_some() {
                    return Err(err(line.number, "rank takes one integer ≥ 1".into()));
                }
                rank = Some(value);
            }
            "generator" => {
                if rank.is_none() {
                    return Err(err(line.number, "generator before rank declaration".into()));
                }
                let name = words
                    .next()
                    .ok_or_else(|| err(line.number, "generator takes a name and a degree".into()))?;
                if !valid_generator_name(name) {
                    return Err(err(
                        line.number,
                        format!("`{name}` is not a usable generator name"),
                    ));
                }
                if gens.iter().any(|(g, _)| g == name) {
                    return Err(err(line.number, format!("duplicate generator `{name}`")));
                }
                let degree: u32 = words
                    .next()
                    .and_then(|w| w.parse().ok())
                    .ok_or_else(|| err(line.number, "generator takes a name and a degree".into()))?;
                if words.next().is_some() {
                    return Err(err(line.number, "generator takes a name and a degree".into()));
                }
                gens.push((name.to_string(), degree));
            }
            "sq" => {
                let usage = "sq takes `sq <i> <generator> = <element>`";
                let i: u32 = words
                    .next()
                    .and_then(|w| w.parse().ok())
                    .ok_or_else(|| err(line.number, usage.into()))?;
                let gen_name =
                    words.next().ok_or_else(|| err(line.number, usage.into()))?;
                if words.next() != Some("=") {
                    return Err(err(line.number, usage.into()));
                }
                let k = gens
                    .iter()
                    .position(|(g, _)| g == gen_name)
                    .ok_or_else(|| err(line.number, format!("unknown generator `{gen_name}`")))?;
                if i == 0 {
                    return Err(err(line.number, "sq index must be ≥ 1 (sq 0 is the identity)".into()));
                }
                if i > gens[k].1 {
                    return Err(err(
                        line.number,
                        format!(
                            "sq {i} on `{gen_name}` (degree {}) violates instability",
                            gens[k].1
                        ),
                    ));
                }
                if sq_entries.iter().any(|&(_, k0, i0, _)| k0 == k && i0 == i) {
                    return Err(err(line.number, format!("duplicate entry sq {i} {gen_name}")));
                }
                let rhs = rest_of_line(line.text, 3);
                sq_entries.push((line.number, k, i, rhs));
            }
            "relation" => {
                if rank.is_none() {
                    return Err(err(line.number, "relation before rank declaration".into()));
                }
                relations.push((line.number, rest_of_line(line.text, 0)));
            }
            "subgen" => {
                return Err(err(
                    line.number,
                    "subgen requires a submodule-of declaration".into(),
                ));
            }
            other => {
                return Err(err(line.number, format!("unknown directive `{other}`")));
            }
        }
    }

    let rank = rank.ok_or_else(|| ModFileError::Syntax {
        path: path.to_path_buf(),
        line: 1,
        message: "missing rank declaration".into(),
    })?;
    let mut pres = Presentation::free(rank, gens.clone());
    for (line_no, k, i, rhs) in sq_entries {
        let elem = parse_element(rank, &gens, &rhs).map_err(|m| err(line_no, m))?;
        if elem.is_zero() {
            continue;
        }
        if !pres.element_is_homogeneous(&elem) {
            return Err(err(line_no, format!("`{rhs}` is not homogeneous")));
        }
        let expected = gens[k].1 + i;
        let actual = pres
            .element_degree(&elem)
            .expect("nonzero homogeneous element has a degree");
        if actual != expected {
            return Err(err(
                line_no,
                format!("degree mismatch: sq {i} {} must land in degree {expected}, element has degree {actual}", gens[k].0),
            ));
        }
        pres.set_sq(k, i, elem);
    }
    if relations.is_empty() {
        return Ok(pres);
    }
    let mut rels = Vec::new();
    for (line_no, rhs) in relations {
        let elem = parse_element(rank, &gens, &rhs).map_err(|m| err(line_no, m))?;
        if elem.is_zero() {
            return Err(err(line_no, "a relation must be a nonzero element".into()));
        }
        if !pres.element_is_homogeneous(&elem) {
            return Err(err(line_no, format!("`{rhs}` is not homogeneous")));
        }
        rels.push(elem);
    }
    Ok(quotient_by(&pres, rels))
}

fn parse_submodule(
    lines: &[Line<'_>],
    _text: &str,
    path: &Path,
    depth: usize,
) -> Result<Presentation, ModFileError> {
    let err = |line: usize, message: String| ModFileError::Syntax {
        path: path.to_path_buf(),
        line,
        message,
    };
    let mut ambient: Option<(usize, Presentation)> = None;
    let mut subgens: Vec<(usize, String)> = Vec::new();
    for line in lines {
        let mut words = line.text.split_whitespace();
        match words.next().unwrap() {
            "submodule-of" => {
                if ambient.is_some() {
                    return Err(err(line.number, "duplicate submodule-of declaration".into()));
                }
                let target = words
                    .next()
                    .ok_or_else(|| err(line.number, "submodule-of takes a file path".into()))?;
                let resolved = match path.parent() {
                    Some(dir) if !dir.as_os_str().is_empty() => dir.join(target),
                    _ => PathBuf::from(target),
                };
                let pres = load_with_depth(&resolved, depth + 1)?;
                if !pres.is_free_type() {
                    return Err(err(
                        line.number,
                        format!("ambient `{target}` must be a free presentation (no relations or subgens)"),
                    ));
                }
                ambient = Some((line.number, pres));
            }
            "subgen" => {
                subgens.push((line.number, rest_of_line(line.text, 0)));
            }
            other => {
                return Err(err(
                    line.number,
                    format!("a submodule file allows only submodule-of and subgen lines, not `{other}`"),
                ));
            }
        }
    }
    let (_, ambient) = ambient.expect("submodule-of line present by dispatch");
    if subgens.is_empty() {
        return Err(ModFileError::Syntax {
            path: path.to_path_buf(),
            line: 1,
            message: "a submodule file needs at least one subgen".into(),
        });
    }
    let gens: Vec<(String, u32)> = ambient.gens().to_vec();
    let mut elems = Vec::new();
    for (line_no, rhs) in subgens {
        let elem = parse_element(ambient.rank(), &gens, &rhs).map_err(|m| err(line_no, m))?;
        if elem.is_zero() {
            return Err(err(line_no, "a subgen must be a nonzero element".into()));
        }
        if !ambient.element_is_homogeneous(&elem) {
            return Err(err(line_no, format!("`{rhs}` is not homogeneous")));
        }
        elems.push(elem);
    }
    Ok(submodule(&ambient, elems))
}

/// The text after the first `skip_words + 1` whitespace-separated words —
/// used to keep `=`-separated right-hand sides verbatim for the element
/// parser (which is whitespace-tolerant itself).
fn rest_of_line(text: &str, skip_words: usize) -> String {
    let mut remaining = text;
    for _ in 0..=skip_words {
        remaining = remaining.trim_start();
        match remaining.find(char::is_whitespace) {
            Some(pos) => remaining = &remaining[pos..],
            None => return String::new(),
        }
    }
    remaining.trim().to_string()
}

fn valid_generator_name(name: &str) -> bool {
    if name == "0" || name == "1" || name == "=" {
        return false;
    }
    if name.contains(['+', '*', '^', '=']) {
        return false;
    }
    // names that would collide with monomial factors: t, t3, t12, ...
    if let Some(rest) = name.strip_prefix('t') {
        if rest.chars().all(|c| c.is_ascii_digit()) {
            return false;
        }
    }
    true
}

/// Parse an element of the free module on `gens`: a sum of `+`-separated
/// terms, each a `*`-separated product of monomial factors and exactly one
/// generator name.  `0` is the zero element.
pub fn parse_element(
    rank: u32,
    gens: &[(String, u32)],
    input: &str,
) -> Result<FreeElement, String> {
    let input = input.trim();
    if input.is_empty() {
        return Err("empty element".into());
    }
    let mut out = FreeElement::zero(rank, gens.len());
    if input == "0" {
        return Ok(out);
    }
    for term in input.split('+') {
        let term = term.trim();
        if term.is_empty() {
            return Err("empty summand between `+` signs".into());
        }
        let mut gen_index: Option<usize> = None;
        let mut monomial_factors: Vec<&str> = Vec::new();
        for factor in term.split('*') {
            let factor = factor.trim();
            if let Some(k) = gens.iter().position(|(g, _)| g == factor) {
                if gen_index.is_some() {
                    return Err(format!("`{term}` names two generators"));
                }
                gen_index = Some(k);
            } else {
                monomial_factors.push(factor);
            }
        }
        let k = gen_index.ok_or_else(|| format!("`{term}` names no generator"))?;
        let poly_text = if monomial_factors.is_empty() {
            String::from("1")
        } else {
            monomial_factors.join("*")
        };
        let p = parse_poly(rank, &poly_text).map_err(|e| format!("in `{term}`: {e}"))?;
        out = out.add(&FreeElement::generator(rank, gens.len(), k).mul_poly(&p));
    }
    Ok(out)
}
