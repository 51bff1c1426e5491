//! Text formats for endomorphisms.
//!
//! The letter format lists one rule per generator, separated by `;` or line
//! breaks: `a->abA; b->ba`. Lower-case letters are generators, upper-case
//! letters their inverses, and `1` (or nothing) is the identity. Whitespace is
//! ignored. The rank is the number of rules and the rule heads must be the
//! first `m` letters of the alphabet.
//!
//! The structured format is JSON, `{"rank": 2, "images": [[1, 2], [-2]]}`, with
//! one-based signed generator codes. It has no limit on the rank.

use nielsen_core::{Endomorphism, Letter, Word};
use serde_json::{json, Value};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("rank inconsistency at position {position}: {message}")]
    Rank { position: usize, message: String },
    #[error("image of `{head}` at position {position} is not reduced (use --auto-reduce)")]
    NotReduced { head: char, position: usize },
    #[error("structured input: {0}")]
    Structured(String),
}

/// A parsed map with any warnings produced along the way.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Parsed {
    pub map: Endomorphism,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ParseOptions {
    /// Reduce unreduced images with a warning instead of failing.
    pub auto_reduce: bool,
}

/// Parses either format; input starting with `{` is read as JSON.
pub fn parse_endomorphism(text: &str, opts: ParseOptions) -> Result<Parsed, ParseError> {
    if text.trim_start().starts_with('{') {
        parse_structured(text, opts)
    } else {
        parse_letters(text, opts)
    }
}

struct Rule {
    head: char,
    head_pos: usize,
    body: Vec<(usize, char)>,
}

fn split_rules(text: &str) -> Result<Vec<Rule>, ParseError> {
    let mut rules = Vec::new();
    let mut chunk: Vec<(usize, char)> = Vec::new();
    let mut flush = |chunk: &mut Vec<(usize, char)>, end: usize| -> Result<(), ParseError> {
        let toks = std::mem::take(chunk);
        if toks.is_empty() {
            return Ok(());
        }
        let (head_pos, head) = toks[0];
        if !head.is_ascii_lowercase() {
            return Err(ParseError::Syntax { position: head_pos, message: format!("expected a generator name, found `{head}`") });
        }
        let arrow = match toks.get(1..3) {
            Some([(_, '-'), (_, '>')]) => 3,
            _ if toks.get(1).is_some_and(|&(_, c)| c == '→') => 2,
            _ => {
                let position = toks.get(1).map_or(end, |t| t.0);
                return Err(ParseError::Syntax { position, message: format!("expected `->` after `{head}`") });
            }
        };
        rules.push(Rule { head, head_pos, body: toks[arrow..].to_vec() });
        Ok(())
    };
    for (pos, c) in text.char_indices() {
        match c {
            ';' | '\n' => flush(&mut chunk, pos)?,
            c if c.is_whitespace() => {}
            c => chunk.push((pos, c)),
        }
    }
    flush(&mut chunk, text.len())?;
    Ok(rules)
}

fn parse_letters(text: &str, opts: ParseOptions) -> Result<Parsed, ParseError> {
    let rules = split_rules(text)?;
    if rules.is_empty() {
        return Err(ParseError::Syntax { position: 0, message: "no rules".into() });
    }
    let rank = rules.len();
    if rank > 26 {
        return Err(ParseError::Rank { position: rules[26].head_pos, message: "the letter format has at most 26 generators".into() });
    }
    let mut images: Vec<Option<Word>> = vec![None; rank];
    let mut warnings = Vec::new();
    for rule in &rules {
        let g = (rule.head as u8 - b'a') as usize;
        if g >= rank {
            return Err(ParseError::Rank {
                position: rule.head_pos,
                message: format!("rule for `{}` but only {rank} rules are given", rule.head),
            });
        }
        if images[g].is_some() {
            return Err(ParseError::Syntax { position: rule.head_pos, message: format!("second rule for `{}`", rule.head) });
        }
        let raw = parse_body(&rule.body, rank)?;
        let reduced = Word::reduce(raw.iter().copied());
        if reduced.len() != raw.len() {
            if !opts.auto_reduce {
                return Err(ParseError::NotReduced { head: rule.head, position: rule.body.first().map_or(rule.head_pos, |t| t.0) });
            }
            warnings.push(format!("warning: image of {} reduced to {reduced}", rule.head));
        }
        images[g] = Some(reduced);
    }
    let images = images.into_iter().map(|w| w.expect("every head seen once")).collect();
    let map = Endomorphism::new(images).expect("letters checked against the rank");
    Ok(Parsed { map, warnings })
}

fn parse_body(body: &[(usize, char)], rank: usize) -> Result<Vec<Letter>, ParseError> {
    if let [(_, '1')] = body {
        return Ok(Vec::new());
    }
    body.iter()
        .map(|&(pos, c)| {
            let (g, inverse) = match c {
                'a'..='z' => ((c as u8 - b'a') as usize, false),
                'A'..='Z' => ((c as u8 - b'A') as usize, true),
                _ => return Err(ParseError::Syntax { position: pos, message: format!("unexpected `{c}`") }),
            };
            if g >= rank {
                return Err(ParseError::Rank { position: pos, message: format!("letter `{c}` is beyond rank {rank}") });
            }
            Ok(if inverse { Letter::neg(g) } else { Letter::pos(g) })
        })
        .collect()
}

fn parse_structured(text: &str, opts: ParseOptions) -> Result<Parsed, ParseError> {
    let v: Value = serde_json::from_str(text).map_err(|e| ParseError::Structured(e.to_string()))?;
    let bad = |m: &str| ParseError::Structured(m.to_string());
    let images = v.get("images").and_then(Value::as_array).ok_or_else(|| bad("missing `images` array"))?;
    let rank = match v.get("rank") {
        None => images.len(),
        Some(r) => r.as_u64().ok_or_else(|| bad("`rank` must be a non-negative integer"))? as usize,
    };
    if rank != images.len() || rank == 0 {
        return Err(ParseError::Structured(format!("rank {rank} but {} images", images.len())));
    }
    let mut words = Vec::with_capacity(rank);
    let mut warnings = Vec::new();
    for (g, img) in images.iter().enumerate() {
        let codes = img.as_array().ok_or_else(|| bad("each image must be an array of integers"))?;
        let raw = codes
            .iter()
            .map(|c| {
                let c = c.as_i64().filter(|&c| c != 0 && c.unsigned_abs() as usize <= rank);
                let c = c.ok_or_else(|| ParseError::Structured(format!("image {}: codes must be nonzero integers within ±{rank}", g + 1)))?;
                Ok(Letter::from_signed(c as i32).expect("nonzero"))
            })
            .collect::<Result<Vec<_>, ParseError>>()?;
        let reduced = Word::reduce(raw.iter().copied());
        if reduced.len() != raw.len() {
            if !opts.auto_reduce {
                return Err(ParseError::Structured(format!("image {} is not reduced (use --auto-reduce)", g + 1)));
            }
            warnings.push(format!("warning: image {} reduced to {:?}", g + 1, reduced.to_signed()));
        }
        words.push(reduced);
    }
    Ok(Parsed { map: Endomorphism::new(words).expect("codes checked against the rank"), warnings })
}

/// Letter format for rank at most 26, structured format otherwise.
pub fn format_endomorphism(phi: &Endomorphism) -> String {
    if phi.rank() <= 26 {
        format_letters(phi)
    } else {
        format_structured(phi).to_string()
    }
}

/// `a->abA; b->ba`.
///
/// # Panics
/// When the rank exceeds 26.
pub fn format_letters(phi: &Endomorphism) -> String {
    assert!(phi.rank() <= 26, "the letter format has at most 26 generators");
    phi.to_string()
}

pub fn format_structured(phi: &Endomorphism) -> Value {
    json!({ "rank": phi.rank(), "images": phi.images().iter().map(Word::to_signed).collect::<Vec<_>>() })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> Result<Endomorphism, ParseError> {
        parse_endomorphism(s, ParseOptions::default()).map(|p| p.map)
    }

    #[test]
    fn spaced_input_parses() {
        let phi = parse("a->abb aB; b->b aBab").unwrap();
        assert_eq!(phi, Endomorphism::from_signed(&[&[1, 2, 2, 1, -2], &[2, 1, -2, 1, 2]]).unwrap());
        let psi = parse("a->abc; b->cAba; c->ACab").unwrap();
        assert_eq!(psi.rank(), 3);
        assert_eq!(format_letters(&psi), "a->abc; b->cAba; c->ACab");
    }

    #[test]
    fn newlines_separate_rules() {
        assert_eq!(parse("a -> ab\nb -> 1\n").unwrap(), Endomorphism::from_signed(&[&[1, 2], &[]]).unwrap());
        assert_eq!(parse("b->a;a->b").unwrap(), Endomorphism::from_signed(&[&[2], &[1]]).unwrap());
    }

    #[test]
    fn unreduced_input() {
        assert!(matches!(parse("a->aA b; b->b"), Err(ParseError::NotReduced { head: 'a', position: 3 })));
        let p = parse_endomorphism("a->aA b; b->b", ParseOptions { auto_reduce: true }).unwrap();
        assert_eq!(p.map.image(0), &Word::from_signed(&[2]).unwrap());
        assert_eq!(p.warnings.len(), 1);
    }

    #[test]
    fn errors_carry_positions() {
        assert_eq!(parse("a->ac; b->b"), Err(ParseError::Rank { position: 4, message: "letter `c` is beyond rank 2".into() }));
        assert!(matches!(parse("a=>b"), Err(ParseError::Syntax { position: 1, .. })));
        assert!(matches!(parse("a->a; c->c"), Err(ParseError::Rank { position: 6, .. })));
        assert!(matches!(parse("a->a; a->a"), Err(ParseError::Syntax { .. })));
        assert!(matches!(parse("a->a%"), Err(ParseError::Syntax { position: 4, .. })));
        assert!(matches!(parse("  "), Err(ParseError::Syntax { .. })));
    }

    #[test]
    fn structured_input() {
        let phi = parse(r#"{"rank": 2, "images": [[1, 2], [-2]]}"#).unwrap();
        assert_eq!(phi, Endomorphism::from_signed(&[&[1, 2], &[-2]]).unwrap());
        assert!(parse(r#"{"rank": 2, "images": [[3], [1]]}"#).is_err());
        assert!(parse(r#"{"rank": 3, "images": [[1]]}"#).is_err());
        assert!(parse(r#"{"images": [[1, -1]]}"#).is_err());
        assert_eq!(format_structured(&phi), serde_json::json!({"rank": 2, "images": [[1, 2], [-2]]}));
    }

    #[test]
    fn large_rank_uses_structured_format() {
        let phi = Endomorphism::identity(30);
        let text = format_endomorphism(&phi);
        assert!(text.starts_with('{'));
        assert_eq!(parse(&text).unwrap(), phi);
    }
}
