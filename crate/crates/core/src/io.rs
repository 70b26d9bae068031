//! JSON files for forms and point schemes.
//!
//! ```json
//! { "surface": "p1xp1", "side": "S", "degree": [2, 2],
//!   "terms": [ { "exp": [2, 0, 2, 0], "num": "3", "den": "1" } ] }
//! { "surface": "f1", "points": [ { "cox": [ {"num": "1", "den": "1"}, ... ] } ] }
//! ```
//!
//! Complex entries use `{ "re": .., "im": .. }`. A file is either entirely
//! exact or entirely floating.

use num::BigInt;
use serde::{Deserialize, Serialize};

use crate::apolarity::PointScheme;
use crate::error::{Error, Result};
use crate::linalg::{Complex, Rational};
use crate::multigraded::{Degree, MultiForm, Side, Surface};

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Exact { num: String, den: String },
    Float { re: f64, im: f64 },
}

impl Entry {
    fn exact(&self) -> Option<std::result::Result<Rational, String>> {
        match self {
            Entry::Exact { num, den } => {
                let parse = |s: &str| s.trim().parse::<BigInt>().map_err(|_| format!("not an integer: {s:?}"));
                Some(parse(num).and_then(|n| {
                    let d = parse(den)?;
                    if d == BigInt::from(0) {
                        Err("zero denominator".into())
                    } else {
                        Ok(Rational::new(n, d))
                    }
                }))
            }
            Entry::Float { .. } => None,
        }
    }

    fn float(&self) -> Option<Complex> {
        match self {
            Entry::Float { re, im } => Some(Complex::new(*re, *im)),
            Entry::Exact { .. } => None,
        }
    }

    pub fn from_rational(r: &Rational) -> Self {
        Entry::Exact {
            num: r.numer().to_string(),
            den: r.denom().to_string(),
        }
    }

    pub fn from_complex(c: &Complex) -> Self {
        Entry::Float { re: c.re, im: c.im }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TermFile {
    pub exp: [u32; 4],
    #[serde(flatten)]
    pub coeff: Entry,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FormFile {
    pub surface: Surface,
    pub side: Side,
    pub degree: [i64; 2],
    pub terms: Vec<TermFile>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PointFile {
    pub cox: [Entry; 4],
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SchemeFile {
    pub surface: Surface,
    pub points: Vec<PointFile>,
}

#[derive(Clone, Debug)]
pub enum ParsedForm {
    Exact(MultiForm<Rational>),
    Float(MultiForm<Complex>),
}

impl ParsedForm {
    pub fn surface(&self) -> Surface {
        match self {
            ParsedForm::Exact(f) => f.surface(),
            ParsedForm::Float(f) => f.surface(),
        }
    }

    pub fn to_complex(&self) -> MultiForm<Complex> {
        match self {
            ParsedForm::Exact(f) => f.to_complex(),
            ParsedForm::Float(f) => f.clone(),
        }
    }
}

#[derive(Clone, Debug)]
pub enum ParsedScheme {
    Exact(PointScheme<Rational>),
    Float(PointScheme<Complex>),
}

impl ParsedScheme {
    pub fn surface(&self) -> Surface {
        match self {
            ParsedScheme::Exact(s) => s.surface(),
            ParsedScheme::Float(s) => s.surface(),
        }
    }

    pub fn to_complex(&self) -> PointScheme<Complex> {
        match self {
            ParsedScheme::Exact(s) => s.to_complex(),
            ParsedScheme::Float(s) => s.clone(),
        }
    }
}

/// Line and column (1-based) of a byte offset.
pub fn position(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}

/// Position of the `n`-th occurrence of a JSON key, falling back to the
/// start of the text.
fn key_position(text: &str, key: &str, n: usize) -> (usize, usize) {
    let needle = format!("\"{key}\"");
    let offset = text.match_indices(&needle).nth(n).map_or(0, |(i, _)| i);
    position(text, offset)
}

fn parse_error(at: (usize, usize), msg: impl Into<String>) -> Error {
    Error::Parse {
        line: at.0,
        column: at.1,
        msg: msg.into(),
    }
}

fn from_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| parse_error((e.line(), e.column()), e.to_string()))
}

pub fn parse_form(text: &str) -> Result<ParsedForm> {
    let file: FormFile = from_json(text)?;
    let degree = Degree(file.degree[0], file.degree[1]);
    let exact = file.terms.iter().all(|t| matches!(t.coeff, Entry::Exact { .. }));
    let float = file.terms.iter().all(|t| matches!(t.coeff, Entry::Float { .. }));
    if !exact && !float {
        return Err(parse_error(key_position(text, "terms", 0), "mixed exact and floating coefficients"));
    }
    for (i, t) in file.terms.iter().enumerate() {
        if file.surface.degree_of(&t.exp) != degree {
            return Err(parse_error(
                key_position(text, "exp", i),
                format!("exponent {:?} does not have degree {degree}", t.exp),
            ));
        }
    }
    if exact {
        let mut terms = Vec::new();
        for (i, t) in file.terms.iter().enumerate() {
            let c = t.coeff.exact().expect("exact entry").map_err(|m| parse_error(key_position(text, "num", i), m))?;
            terms.push((t.exp, c));
        }
        Ok(ParsedForm::Exact(MultiForm::from_terms(file.surface, file.side, degree, terms)?))
    } else {
        let terms: Vec<_> = file.terms.iter().map(|t| (t.exp, t.coeff.float().expect("float entry"))).collect();
        Ok(ParsedForm::Float(MultiForm::from_terms(file.surface, file.side, degree, terms)?))
    }
}

pub fn parse_scheme(text: &str) -> Result<ParsedScheme> {
    let file: SchemeFile = from_json(text)?;
    let entries: Vec<&Entry> = file.points.iter().flat_map(|p| p.cox.iter()).collect();
    let exact = entries.iter().all(|e| matches!(e, Entry::Exact { .. }));
    let float = entries.iter().all(|e| matches!(e, Entry::Float { .. }));
    if !exact && !float {
        return Err(parse_error(key_position(text, "points", 0), "mixed exact and floating coordinates"));
    }
    let at = |i: usize| key_position(text, "cox", i);
    if exact && !entries.is_empty() {
        let mut points = Vec::new();
        for (i, p) in file.points.iter().enumerate() {
            let mut q: [Rational; 4] = Default::default();
            for (k, e) in p.cox.iter().enumerate() {
                q[k] = e.exact().expect("exact entry").map_err(|m| parse_error(at(i), m))?;
            }
            points.push(q);
        }
        build_scheme(text, file.surface, points).map(ParsedScheme::Exact)
    } else {
        let points = file
            .points
            .iter()
            .map(|p| {
                let c: Vec<Complex> = p.cox.iter().map(|e| e.float().unwrap_or_default()).collect();
                [c[0], c[1], c[2], c[3]]
            })
            .collect();
        build_scheme(text, file.surface, points).map(ParsedScheme::Float)
    }
}

fn build_scheme<K: crate::linalg::Scalar>(text: &str, surface: Surface, points: Vec<[K; 4]>) -> Result<PointScheme<K>> {
    if let Some(i) = points.iter().position(|p| surface.in_irrelevant_locus(p)) {
        return Err(parse_error(key_position(text, "cox", i), format!("point {i} lies in the irrelevant locus")));
    }
    PointScheme::new(surface, points).map_err(|e| match e {
        Error::DuplicatePoint(_, j) => parse_error(key_position(text, "cox", j), e.to_string()),
        other => parse_error((1, 1), other.to_string()),
    })
}

/// Parses a form and a scheme, requiring the same surface.
pub fn parse_pair(form_text: &str, scheme_text: &str) -> Result<(ParsedForm, ParsedScheme)> {
    let f = parse_form(form_text)?;
    let g = parse_scheme(scheme_text)?;
    if f.surface() != g.surface() {
        return Err(parse_error(
            key_position(scheme_text, "surface", 0),
            format!("scheme is on {} but the form is on {}", g.surface(), f.surface()),
        ));
    }
    Ok((f, g))
}

pub fn form_file(f: &MultiForm<Rational>) -> FormFile {
    FormFile {
        surface: f.surface(),
        side: f.side(),
        degree: [f.degree().0, f.degree().1],
        terms: f
            .terms()
            .iter()
            .map(|(e, c)| TermFile {
                exp: *e,
                coeff: Entry::from_rational(c),
            })
            .collect(),
    }
}

pub fn complex_form_file(f: &MultiForm<Complex>) -> FormFile {
    FormFile {
        surface: f.surface(),
        side: f.side(),
        degree: [f.degree().0, f.degree().1],
        terms: f
            .terms()
            .iter()
            .map(|(e, c)| TermFile {
                exp: *e,
                coeff: Entry::from_complex(c),
            })
            .collect(),
    }
}

pub fn scheme_file(s: &PointScheme<Rational>) -> SchemeFile {
    SchemeFile {
        surface: s.surface(),
        points: s
            .points()
            .iter()
            .map(|p| PointFile {
                cox: p.clone().map(|c| Entry::from_rational(&c)),
            })
            .collect(),
    }
}

pub fn complex_scheme_file(s: &PointScheme<Complex>) -> SchemeFile {
    SchemeFile {
        surface: s.surface(),
        points: s
            .points()
            .iter()
            .map(|p| PointFile {
                cox: p.map(|c| Entry::from_complex(&c)),
            })
            .collect(),
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("files serialize")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rational;
    use crate::multigraded::random_form;

    #[test]
    fn form_roundtrip() {
        let f = random_form(Surface::F1, Side::S, Degree(3, 6), 1);
        match parse_form(&to_json(&form_file(&f))).unwrap() {
            ParsedForm::Exact(g) => assert_eq!(f, g),
            ParsedForm::Float(_) => panic!("exact file read as floating"),
        }
        let c = f.to_complex();
        match parse_form(&to_json(&complex_form_file(&c))).unwrap() {
            ParsedForm::Float(g) => assert_eq!(c, g),
            ParsedForm::Exact(_) => panic!("floating file read as exact"),
        }
    }

    #[test]
    fn scheme_roundtrip() {
        let s = PointScheme::new(
            Surface::P1xP1,
            vec![
                [rational(1, 1), rational(2, 3), rational(1, 1), rational(0, 1)],
                [rational(0, 1), rational(1, 1), rational(1, 1), rational(-5, 2)],
            ],
        )
        .unwrap();
        match parse_scheme(&to_json(&scheme_file(&s))).unwrap() {
            ParsedScheme::Exact(t) => assert_eq!(s, t),
            ParsedScheme::Float(_) => panic!(),
        }
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let text = "{\n  \"surface\": \"p1xp1\",\n  \"side\": \"S\",\n  \"degree\": [1, 1,\n}";
        match parse_form(text) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 5),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn wrong_degree_points_at_the_term() {
        let text = r#"{
  "surface": "p1xp1", "side": "S", "degree": [1, 1],
  "terms": [
    { "exp": [1, 0, 1, 0], "num": "1", "den": "1" },
    { "exp": [2, 0, 1, 0], "num": "1", "den": "1" }
  ]
}"#;
        match parse_form(text) {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (5, 7)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn mismatched_surfaces() {
        let f = to_json(&form_file(&random_form(Surface::F1, Side::S, Degree(1, 2), 2)));
        let s = r#"{ "surface": "p1xp1", "points": [ { "cox": [ {"re": 1.0, "im": 0.0}, {"re": 0.5, "im": 0.0}, {"re": 1.0, "im": 0.0}, {"re": 2.0, "im": 1.0} ] } ] }"#;
        assert!(matches!(parse_pair(&f, s), Err(Error::Parse { line: 1, column: 3, .. })));
    }
}
