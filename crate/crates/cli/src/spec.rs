//! Line-oriented spec files: bracketed section headers, `key value` header
//! lines and `inputs -> output : coefficient` entries.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Write as _};

use num_traits::Zero;

use cyclic_ainfty::ainfty::{convert_convention, AInftyAlgebra, AInftyMorphism, Direction};
use cyclic_ainfty::bimodule::{dual_basis, Bimodule, BimoduleMap, DualPlacement, ModWord};
use cyclic_ainfty::cyclic::Pairing;
use cyclic_ainfty::filtered::{
    Energy, FilteredAInftyAlgebra, FilteredAInftyMorphism, GappedMonoid, NovikovScalar,
};
use cyclic_ainfty::graded::{fmt_scalar, parse_scalar, GradedBasis, Scalar, SparseTensor, Word};

use crate::error::{CliError, ParseError};

const SECTIONS: &[&str] = &[
    "basis",
    "algebra",
    "pairing",
    "target_basis",
    "morphism",
    "module_basis",
    "bimodule",
    "bimodule_map",
    "module_pairing",
    "filtered",
];

/// Energy cap and declared generators of the gapping monoid.
#[derive(Clone, Debug, PartialEq)]
pub struct FilteredHeader {
    pub cap: Scalar,
    pub generators: Vec<Energy>,
}

/// Where a bimodule map lands: the dual of its source or a second copy of it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MapTarget {
    Dual(i64),
    Same,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct SpecDocument {
    pub basis: Option<GradedBasis>,
    pub algebra: Option<AInftyAlgebra>,
    /// Set when the algebra was written in the ns convention and converted.
    pub converted: bool,
    pub pairing: Option<Pairing>,
    pub target_basis: Option<GradedBasis>,
    pub morphism: Option<AInftyMorphism>,
    pub module_basis: Option<GradedBasis>,
    pub bimodule: Option<Bimodule>,
    pub bimodule_map: Option<(MapTarget, BimoduleMap)>,
    pub module_pairing: Option<Pairing>,
    pub filtered: Option<FilteredHeader>,
    pub filtered_algebra: Option<FilteredAInftyAlgebra>,
    pub filtered_morphism: Option<FilteredAInftyMorphism>,
}

#[derive(Clone, Debug)]
struct Line<'a> {
    number: usize,
    text: &'a str,
}

impl Line<'_> {
    fn err(&self, token: &str, msg: impl Into<String>) -> CliError {
        let col = if token.is_empty() {
            1
        } else {
            self.text.find(token).map(|c| c + 1).unwrap_or(1)
        };
        CliError::Parse(ParseError {
            line: self.number,
            column: col,
            message: msg.into(),
        })
    }
}

struct Section<'a> {
    header: Line<'a>,
    lines: Vec<Line<'a>>,
}

impl<'a> Section<'a> {
    /// `key value` lines for the given keys, in order of appearance.
    fn header_value(&self, key: &str) -> Option<(&Line<'a>, &'a str)> {
        self.lines.iter().find_map(|l| {
            let (k, v) = l.text.split_once(char::is_whitespace)?;
            (k == key).then(|| (l, v.trim()))
        })
    }

    fn entries(&self, keys: &[&str]) -> Vec<&Line<'a>> {
        self.lines
            .iter()
            .filter(|l| {
                let first = l.text.split_whitespace().next().unwrap_or("");
                !keys.contains(&first) || l.text.contains("->")
            })
            .collect()
    }

    fn int(&self, key: &str) -> Result<Option<i64>, CliError> {
        match self.header_value(key) {
            None => Ok(None),
            Some((l, v)) => v
                .parse()
                .map(Some)
                .map_err(|_| l.err(v, format!("`{key}` needs an integer"))),
        }
    }

    fn required_int(&self, key: &str) -> Result<i64, CliError> {
        self.int(key)?
            .ok_or_else(|| self.header.err("", format!("section needs a `{key}` line")))
    }
}

fn split_sections(text: &str) -> Result<BTreeMap<String, Section<'_>>, CliError> {
    let mut out: BTreeMap<String, Section<'_>> = BTreeMap::new();
    let mut current: Option<String> = None;
    for (i, raw) in text.lines().enumerate() {
        let content = raw.split('#').next().unwrap_or("");
        if content.trim().is_empty() {
            continue;
        }
        let line = Line {
            number: i + 1,
            text: content.trim_end(),
        };
        let t = content.trim();
        if let Some(name) = t.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
            if !SECTIONS.contains(&name) {
                return Err(line.err(name, format!("unknown section [{name}]")));
            }
            if out.contains_key(name) {
                return Err(line.err(name, format!("section [{name}] given twice")));
            }
            out.insert(
                name.to_string(),
                Section {
                    header: line,
                    lines: Vec::new(),
                },
            );
            current = Some(name.to_string());
        } else {
            let Some(name) = &current else {
                return Err(line.err(t, "entry before any section header"));
            };
            out.get_mut(name).expect("current section").lines.push(line);
        }
    }
    Ok(out)
}

fn parse_basis(s: &Section<'_>) -> Result<GradedBasis, CliError> {
    let mut elems = Vec::new();
    let mut seen = BTreeSet::new();
    for l in &s.lines {
        let toks: Vec<&str> = l.text.split_whitespace().collect();
        let [name, deg] = toks[..] else {
            return Err(l.err(l.text.trim(), "basis lines are `name degree`"));
        };
        let deg: i64 = deg
            .parse()
            .map_err(|_| l.err(deg, "degree must be an integer"))?;
        if !seen.insert(name) {
            return Err(l.err(name, format!("basis element `{name}` declared twice")));
        }
        elems.push((name.to_string(), deg));
    }
    GradedBasis::new(elems).map_err(|e| s.header.err("", e.to_string()))
}

fn lookup(l: &Line<'_>, basis: &GradedBasis, name: &str) -> Result<usize, CliError> {
    basis
        .lookup(name)
        .ok_or_else(|| l.err(name, format!("unknown basis name `{name}`")))
}

fn lookup_word(l: &Line<'_>, basis: &GradedBasis, text: &str) -> Result<Word, CliError> {
    text.split_whitespace()
        .map(|n| lookup(l, basis, n))
        .collect()
}

/// `inputs -> output : coefficient`
fn split_entry<'a>(l: &Line<'a>) -> Result<(&'a str, &'a str, &'a str), CliError> {
    let (lhs, rest) = l
        .text
        .split_once("->")
        .ok_or_else(|| l.err(l.text.trim(), "expected `inputs -> output : coefficient`"))?;
    let (out, coeff) = rest
        .split_once(':')
        .ok_or_else(|| l.err(rest.trim(), "missing `: coefficient`"))?;
    Ok((lhs.trim(), out.trim(), coeff.trim()))
}

fn scalar(l: &Line<'_>, text: &str) -> Result<Scalar, CliError> {
    parse_scalar(text).map_err(|_| l.err(text, format!("malformed rational `{text}`")))
}

fn located(l: &Line<'_>, e: cyclic_ainfty::Error) -> CliError {
    l.err("", e.to_string())
}

fn max_arity(s: &Section<'_>) -> Result<usize, CliError> {
    let n = s.required_int("max_arity")?;
    usize::try_from(n).map_err(|_| s.header.err("", "max_arity must be nonnegative"))
}

fn check_arity(l: &Line<'_>, k: usize, max: usize) -> Result<(), CliError> {
    if k > max {
        return Err(l.err("", format!("arity {k} exceeds max_arity {max}")));
    }
    Ok(())
}

fn parse_algebra(s: &Section<'_>, basis: &GradedBasis) -> Result<(AInftyAlgebra, bool), CliError> {
    let ns = match s.header_value("convention") {
        Some((_, "shifted")) => false,
        Some((_, "ns")) => true,
        Some((l, v)) => return Err(l.err(v, "convention must be `ns` or `shifted`")),
        None => {
            return Err(s
                .header
                .err("", "section needs a `convention ns|shifted` line"))
        }
    };
    let n = max_arity(s)?;
    let mut raw = AInftyAlgebra::new(basis.clone(), n);
    for l in s.entries(&["convention", "max_arity"]) {
        let (lhs, out, coeff) = split_entry(l)?;
        let w = lookup_word(l, basis, lhs)?;
        if w.is_empty() {
            return Err(l.err(l.text.trim(), "an unfiltered algebra has no m_0"));
        }
        check_arity(l, w.len(), n)?;
        let o = lookup(l, basis, out)?;
        raw.add_entry(&w, o, &scalar(l, coeff)?).map_err(|e| {
            l.err(
                out,
                format!("{e}; the rule is: m_k(x_1..x_k) has shifted degree 1 + Σ|x_i|'"),
            )
        })?;
    }
    if ns {
        Ok((convert_convention(&raw, Direction::NsToShifted), true))
    } else {
        Ok((raw, false))
    }
}

fn parse_pairing(s: &Section<'_>, basis: &GradedBasis) -> Result<Pairing, CliError> {
    let alpha = s.required_int("alpha")?;
    let mut p = Pairing::new(basis.clone(), alpha);
    for l in s.entries(&["alpha"]) {
        let (lhs, coeff) = l
            .text
            .split_once(':')
            .ok_or_else(|| l.err(l.text.trim(), "expected `x y : coefficient`"))?;
        let w = lookup_word(l, basis, lhs)?;
        let [i, j] = w[..] else {
            return Err(l.err(lhs.trim(), "pairing entries name two basis elements"));
        };
        let c = scalar(l, coeff.trim())?;
        let old = p.get(i, j);
        if !old.is_zero() && old != c {
            return Err(l.err(
                lhs.trim(),
                "entry contradicts the skew partner given earlier",
            ));
        }
        p.set(i, j, c).map_err(|e| located(l, e))?;
    }
    Ok(p)
}

fn parse_morphism(
    s: &Section<'_>,
    source: &GradedBasis,
    target: &GradedBasis,
) -> Result<AInftyMorphism, CliError> {
    let n = max_arity(s)?;
    let mut f = AInftyMorphism::new(source.clone(), target.clone(), n);
    for l in s.entries(&["max_arity"]) {
        let (lhs, out, coeff) = split_entry(l)?;
        let w = lookup_word(l, source, lhs)?;
        if w.is_empty() {
            return Err(l.err(l.text.trim(), "an unfiltered morphism has no f_0"));
        }
        check_arity(l, w.len(), n)?;
        let o = lookup(l, target, out)?;
        f.add_entry(&w, o, &scalar(l, coeff)?).map_err(|e| {
            l.err(
                out,
                format!("{e}; the rule is: f_k(x_1..x_k) has shifted degree Σ|x_i|'"),
            )
        })?;
    }
    Ok(f)
}

/// `a b | v | c`
fn parse_mod_word(
    l: &Line<'_>,
    algebra: &GradedBasis,
    module: &GradedBasis,
    text: &str,
) -> Result<ModWord, CliError> {
    let parts: Vec<&str> = text.split('|').collect();
    let [left, v, right] = parts[..] else {
        return Err(l.err(text, "module words are `left | v | right`"));
    };
    let left = lookup_word(l, algebra, left)?;
    let right = lookup_word(l, algebra, right)?;
    let v = lookup(l, module, v.trim())?;
    Ok(ModWord::new(&left, v, &right))
}

fn parse_bimodule(
    s: &Section<'_>,
    algebra: &AInftyAlgebra,
    module: &GradedBasis,
) -> Result<Bimodule, CliError> {
    let n = max_arity(s)?;
    let mut m = Bimodule::new(algebra.clone(), module.clone(), n);
    for l in s.entries(&["max_arity"]) {
        let (lhs, out, coeff) = split_entry(l)?;
        let w = parse_mod_word(l, algebra.basis(), module, lhs)?;
        let (k, r) = w.shape();
        check_arity(l, k + r, n)?;
        let o = lookup(l, module, out)?;
        m.add_entry(&w, o, &scalar(l, coeff)?)
            .map_err(|e| located(l, e))?;
    }
    Ok(m)
}

fn parse_bimodule_map(
    s: &Section<'_>,
    algebra: &GradedBasis,
    module: &GradedBasis,
) -> Result<(MapTarget, BimoduleMap), CliError> {
    let n = max_arity(s)?;
    let target = match (s.int("alpha")?, s.header_value("target")) {
        (Some(alpha), None) => MapTarget::Dual(alpha),
        (None, Some((_, "same"))) => MapTarget::Same,
        (None, Some((l, v))) => return Err(l.err(v, "`target` must be `same`")),
        _ => {
            return Err(s.header.err(
                "",
                "section needs exactly one of `alpha N` or `target same`",
            ))
        }
    };
    let tb = match target {
        MapTarget::Dual(alpha) => dual_basis(module, DualPlacement::new(alpha)),
        MapTarget::Same => module.clone(),
    };
    let mut f = BimoduleMap::new(algebra.clone(), module.clone(), tb.clone(), n);
    for l in s.entries(&["max_arity", "alpha", "target"]) {
        let (lhs, out, coeff) = split_entry(l)?;
        let w = parse_mod_word(l, algebra, module, lhs)?;
        let (k, r) = w.shape();
        check_arity(l, k + r, n)?;
        let o = lookup(l, &tb, out)?;
        f.add_entry(&w, o, &scalar(l, coeff)?)
            .map_err(|e| located(l, e))?;
    }
    Ok((target, f))
}

fn parse_energy(l: &Line<'_>, text: &str) -> Result<Energy, CliError> {
    let s = NovikovScalar::parse(&format!("1 {text}"), Scalar::from_integer(i64::MAX.into()))
        .map_err(|_| l.err(text, format!("malformed energy `{text}`")))?;
    let terms: Vec<_> = s.terms().collect();
    match terms[..] {
        [(e, _)] => Ok(e.clone()),
        _ => Err(l.err(text, format!("malformed energy `{text}`"))),
    }
}

fn parse_filtered_header(s: &Section<'_>) -> Result<FilteredHeader, CliError> {
    let (l, v) = s
        .header_value("cap")
        .ok_or_else(|| s.header.err("", "section needs a `cap` line"))?;
    let cap = scalar(l, v)?;
    let mut generators = Vec::new();
    if let Some((l, v)) = s.header_value("generators") {
        for g in v.split(',') {
            generators.push(parse_energy(l, g.trim())?);
        }
    }
    Ok(FilteredHeader { cap, generators })
}

fn novikov(l: &Line<'_>, text: &str, cap: &Scalar) -> Result<NovikovScalar, CliError> {
    NovikovScalar::parse(text, cap.clone()).map_err(|e| l.err(text, e.to_string()))
}

fn in_monoid(l: &Line<'_>, header: &FilteredHeader, e: &Energy) -> Result<(), CliError> {
    if header.generators.is_empty() || e.is_zero() {
        return Ok(());
    }
    let closure = GappedMonoid::new(header.generators.clone()).closure(&header.cap);
    match closure {
        Some(c) if c.contains(e) => Ok(()),
        _ => Err(l.err("", format!("energy {e} is not in the declared monoid"))),
    }
}

fn parse_filtered_algebra(
    s: &Section<'_>,
    basis: &GradedBasis,
    header: &FilteredHeader,
) -> Result<FilteredAInftyAlgebra, CliError> {
    if let Some((l, v)) = s.header_value("convention") {
        if v != "shifted" {
            return Err(l.err(v, "filtered algebras are written in the shifted convention"));
        }
    }
    let n = max_arity(s)?;
    let mut a = FilteredAInftyAlgebra::new(basis.clone(), n, header.cap.clone());
    for l in s.entries(&["convention", "max_arity"]) {
        let (lhs, out, coeff) = split_entry(l)?;
        let w = lookup_word(l, basis, lhs)?;
        check_arity(l, w.len(), n)?;
        let o = lookup(l, basis, out)?;
        for (e, c) in novikov(l, coeff, &header.cap)?.terms() {
            in_monoid(l, header, e)?;
            a.add_entry(e, &w, o, c).map_err(|err| {
                l.err(out, format!("{err}; the rule is: m_{{k,β}}(x_1..x_k) has shifted degree 1 + Σ|x_i|' - μ(β)"))
            })?;
        }
    }
    Ok(a)
}

fn parse_filtered_morphism(
    s: &Section<'_>,
    source: &GradedBasis,
    target: &GradedBasis,
    header: &FilteredHeader,
) -> Result<FilteredAInftyMorphism, CliError> {
    let n = max_arity(s)?;
    let mut h = FilteredAInftyMorphism::new(source.clone(), target.clone(), n, header.cap.clone());
    for l in s.entries(&["max_arity"]) {
        let (lhs, out, coeff) = split_entry(l)?;
        let w = lookup_word(l, source, lhs)?;
        check_arity(l, w.len(), n)?;
        let o = lookup(l, target, out)?;
        for (e, c) in novikov(l, coeff, &header.cap)?.terms() {
            in_monoid(l, header, e)?;
            h.add_entry(e, &w, o, c).map_err(|err| {
                l.err(
                    out,
                    format!(
                        "{err}; the rule is: h_{{k,β}}(x_1..x_k) has shifted degree Σ|x_i|' - μ(β)"
                    ),
                )
            })?;
        }
    }
    Ok(h)
}

fn need<'a, T>(v: &'a Option<T>, s: &Section<'_>, what: &str) -> Result<&'a T, CliError> {
    v.as_ref().ok_or_else(|| {
        s.header
            .err("", format!("this section needs a [{what}] section"))
    })
}

pub fn parse_spec(text: &str) -> Result<SpecDocument, CliError> {
    parse_spec_in(text, &SpecDocument::default())
}

/// Parses with bases and the filtered header taken from `ctx` where the text
/// declares none, so a morphism file may name only its entries.
pub fn parse_spec_in(text: &str, ctx: &SpecDocument) -> Result<SpecDocument, CliError> {
    let sections = split_sections(text)?;
    let mut doc = SpecDocument {
        basis: ctx.basis.clone(),
        target_basis: ctx.target_basis.clone(),
        module_basis: ctx.module_basis.clone(),
        filtered: ctx.filtered.clone(),
        ..SpecDocument::default()
    };
    if let Some(s) = sections.get("basis") {
        doc.basis = Some(parse_basis(s)?);
    }
    if let Some(s) = sections.get("target_basis") {
        doc.target_basis = Some(parse_basis(s)?);
    }
    if let Some(s) = sections.get("module_basis") {
        doc.module_basis = Some(parse_basis(s)?);
    }
    if let Some(s) = sections.get("filtered") {
        doc.filtered = Some(parse_filtered_header(s)?);
    }
    if let Some(s) = sections.get("algebra") {
        let basis = need(&doc.basis, s, "basis")?;
        match &doc.filtered {
            Some(h) => doc.filtered_algebra = Some(parse_filtered_algebra(s, basis, h)?),
            None => {
                let (a, converted) = parse_algebra(s, basis)?;
                doc.algebra = Some(a);
                doc.converted = converted;
            }
        }
    }
    if let Some(s) = sections.get("pairing") {
        doc.pairing = Some(parse_pairing(s, need(&doc.basis, s, "basis")?)?);
    }
    if let Some(s) = sections.get("morphism") {
        let source = need(&doc.basis, s, "basis")?;
        let target = doc.target_basis.as_ref().unwrap_or(source);
        match &doc.filtered {
            Some(h) => doc.filtered_morphism = Some(parse_filtered_morphism(s, source, target, h)?),
            None => doc.morphism = Some(parse_morphism(s, source, target)?),
        }
    }
    let module = doc.module_basis.clone().or_else(|| doc.basis.clone());
    if let Some(s) = sections.get("bimodule") {
        let a = need(&doc.algebra, s, "algebra")?;
        let m = need(&doc.module_basis, s, "module_basis")?;
        doc.bimodule = Some(parse_bimodule(s, a, m)?);
    }
    if let Some(s) = sections.get("bimodule_map") {
        let a = need(&doc.basis, s, "basis")?;
        let m = need(&module, s, "basis")?;
        doc.bimodule_map = Some(parse_bimodule_map(s, a, m)?);
    }
    if let Some(s) = sections.get("module_pairing") {
        doc.module_pairing = Some(parse_pairing(
            s,
            need(&doc.module_basis, s, "module_basis")?,
        )?);
    }
    Ok(doc)
}

fn emit_basis(out: &mut String, name: &str, b: &GradedBasis) {
    writeln!(out, "[{name}]").unwrap();
    for i in 0..b.dim() {
        writeln!(out, "{} {}", b.name(i), b.degree(i)).unwrap();
    }
    out.push('\n');
}

fn emit_tensor(
    out: &mut String,
    t: &SparseTensor,
    render: impl Fn(&Word) -> String,
    target: &GradedBasis,
) {
    for (w, v) in t.iter() {
        for (o, c) in v.iter() {
            writeln!(
                out,
                "{} -> {} : {}",
                render(w),
                target.name(o),
                fmt_scalar(c)
            )
            .unwrap();
        }
    }
}

fn emit_pairing(out: &mut String, name: &str, p: &Pairing) {
    writeln!(out, "[{name}]").unwrap();
    writeln!(out, "alpha {}", p.alpha()).unwrap();
    let b = p.basis();
    for ((i, j), c) in p.entries() {
        writeln!(out, "{} {} : {}", b.name(*i), b.name(*j), fmt_scalar(c)).unwrap();
    }
    out.push('\n');
}

fn mod_key_renderer<'a>(
    algebra: &'a GradedBasis,
    module: &'a GradedBasis,
    left: usize,
) -> impl Fn(&Word) -> String + 'a {
    move |key: &Word| {
        let l = algebra.render_word(&key[..left]);
        let r = algebra.render_word(&key[left + 1..]);
        format!("{l} | {} | {r}", module.name(key[left]))
            .split_whitespace()
            .collect::<Vec<_>>()
            .join(" ")
    }
}

fn emit_filtered(
    out: &mut String,
    comps: &BTreeMap<(usize, Energy), SparseTensor>,
    source: &GradedBasis,
    target: &GradedBasis,
    cap: &Scalar,
) {
    let mut grouped: BTreeMap<(usize, Word, usize), NovikovScalar> = BTreeMap::new();
    for ((k, e), t) in comps {
        for (w, v) in t.iter() {
            for (o, c) in v.iter() {
                grouped
                    .entry((*k, w.clone(), o))
                    .or_insert_with(|| NovikovScalar::zero(cap.clone()))
                    .add_term(e.clone(), c);
            }
        }
    }
    for ((_, w, o), s) in grouped {
        if !s.is_zero() {
            writeln!(
                out,
                "{} -> {} : {}",
                source.render_word(&w),
                target.name(o),
                s
            )
            .unwrap();
        }
    }
}

/// Writes a document that `parse_spec` reads back to the same value; algebras
/// are always written in the shifted convention.
pub fn emit_spec(doc: &SpecDocument) -> String {
    let mut out = String::new();
    if let Some(h) = &doc.filtered {
        writeln!(out, "[filtered]").unwrap();
        writeln!(out, "cap {}", fmt_scalar(&h.cap)).unwrap();
        if !h.generators.is_empty() {
            let g: Vec<String> = h.generators.iter().map(|e| e.to_string()).collect();
            writeln!(out, "generators {}", g.join(", ")).unwrap();
        }
        out.push('\n');
    }
    if let Some(b) = &doc.basis {
        emit_basis(&mut out, "basis", b);
    }
    if let Some(a) = &doc.algebra {
        writeln!(
            out,
            "[algebra]\nconvention shifted\nmax_arity {}",
            a.max_arity()
        )
        .unwrap();
        for t in a.ops().values() {
            emit_tensor(&mut out, t, |w| a.basis().render_word(w), a.basis());
        }
        out.push('\n');
    }
    if let (Some(a), Some(h)) = (&doc.filtered_algebra, &doc.filtered) {
        writeln!(
            out,
            "[algebra]\nconvention shifted\nmax_arity {}",
            a.max_arity()
        )
        .unwrap();
        emit_filtered(&mut out, a.ops(), a.basis(), a.basis(), &h.cap);
        out.push('\n');
    }
    if let Some(p) = &doc.pairing {
        emit_pairing(&mut out, "pairing", p);
    }
    if let Some(b) = &doc.target_basis {
        emit_basis(&mut out, "target_basis", b);
    }
    if let Some(f) = &doc.morphism {
        writeln!(out, "[morphism]\nmax_arity {}", f.max_arity()).unwrap();
        for t in f.comps().values() {
            emit_tensor(&mut out, t, |w| f.source().render_word(w), f.target());
        }
        out.push('\n');
    }
    if let (Some(f), Some(h)) = (&doc.filtered_morphism, &doc.filtered) {
        writeln!(out, "[morphism]\nmax_arity {}", f.max_arity()).unwrap();
        emit_filtered(&mut out, f.comps(), f.source(), f.target(), &h.cap);
        out.push('\n');
    }
    if let Some(b) = &doc.module_basis {
        emit_basis(&mut out, "module_basis", b);
    }
    if let Some(m) = &doc.bimodule {
        writeln!(out, "[bimodule]\nmax_arity {}", m.max_arity()).unwrap();
        for ((l, _), t) in m.acts() {
            emit_tensor(
                &mut out,
                t,
                mod_key_renderer(m.algebra().basis(), m.module(), *l),
                m.module(),
            );
        }
        out.push('\n');
    }
    if let Some((target, f)) = &doc.bimodule_map {
        writeln!(out, "[bimodule_map]\nmax_arity {}", f.max_arity()).unwrap();
        match target {
            MapTarget::Dual(alpha) => writeln!(out, "alpha {alpha}").unwrap(),
            MapTarget::Same => writeln!(out, "target same").unwrap(),
        }
        for ((l, _), t) in f.comps() {
            emit_tensor(
                &mut out,
                t,
                mod_key_renderer(f.algebra(), f.source(), *l),
                f.target(),
            );
        }
        out.push('\n');
    }
    if let Some(p) = &doc.module_pairing {
        emit_pairing(&mut out, "module_pairing", p);
    }
    out
}

impl fmt::Display for SpecDocument {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&emit_spec(self))
    }
}
