//! The `.ind` relation format and the `.dag` graph format.
//!
//! ```text
//! # relation over four variables
//! vars: a b c d
//! a,b ; c | d
//! stable: a ; b |
//! ```
//!
//! ```text
//! vars: a b c
//! a -> b
//! b -> c
//! ```
//!
//! `#` starts a comment. Blank lines and surrounding whitespace are ignored.
//! Both formats start with a `vars:` line; names are word characters.

use std::fmt::Write as _;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::graph::Dag;
use crate::relation::Relation;
use crate::triplet::Triplet;
use crate::universe::Universe;
use crate::varset::VarSet;

/// Content lines as (1-based line number, text without comment).
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let line = line.split('#').next().unwrap_or("").trim();
        (!line.is_empty()).then_some((i + 1, line))
    })
}

/// Parses the universe declaration and hands the remaining lines back.
fn parse_header<'a>(lines: &mut impl Iterator<Item = (usize, &'a str)>) -> Result<Arc<Universe>> {
    let Some((line, text)) = lines.next() else {
        return Err(Error::MissingVars.at_line(1));
    };
    let Some(rest) = text.strip_prefix("vars:") else {
        return Err(Error::MissingVars.at_line(line));
    };
    Universe::new(rest.split_whitespace())
        .map(Arc::new)
        .map_err(|e| e.at_line(line))
}

fn parse_side(universe: &Universe, text: &str) -> Result<VarSet> {
    let text = text.trim();
    if text.is_empty() {
        return Ok(VarSet::EMPTY);
    }
    let mut set = VarSet::EMPTY;
    for name in text.split(',') {
        let name = name.trim();
        if name.is_empty() {
            return Err(Error::Syntax(format!("empty name in `{text}`")));
        }
        let i = universe.index_of(name)?;
        if set.contains(i) {
            return Err(Error::OverlappingSides);
        }
        set = set.insert(i);
    }
    Ok(set)
}

/// Parses `X ; Y | Z` and reports whether it carried a `stable:` prefix.
fn parse_statement(universe: &Universe, text: &str) -> Result<(Triplet, bool)> {
    let (stable, body) = match text.strip_prefix("stable:") {
        Some(rest) => (true, rest),
        None => (false, text),
    };
    let (sides, z) = body
        .split_once('|')
        .ok_or_else(|| Error::Syntax("expected `X ; Y | Z`".into()))?;
    let (x, y) = sides
        .split_once(';')
        .ok_or_else(|| Error::Syntax("expected `;` between the two sides".into()))?;
    if z.contains('|') || y.contains(';') {
        return Err(Error::Syntax("expected `X ; Y | Z`".into()));
    }
    let t = Triplet::new(
        parse_side(universe, x)?,
        parse_side(universe, y)?,
        parse_side(universe, z)?,
    )?;
    Ok((t, stable))
}

pub fn parse_relation(text: &str) -> Result<Relation> {
    let mut lines = content_lines(text);
    let universe = parse_header(&mut lines)?;
    let mut relation = Relation::new(universe.clone());
    for (line, text) in lines {
        let (t, stable) = parse_statement(&universe, text).map_err(|e| e.at_line(line))?;
        if stable {
            relation.insert_stable(t)?;
        } else {
            relation.insert(t)?;
        }
    }
    Ok(relation)
}

pub fn parse_dag(text: &str) -> Result<Dag> {
    let mut lines = content_lines(text);
    let universe = parse_header(&mut lines)?;
    let n = universe.len();
    let mut children = vec![VarSet::EMPTY; n];
    let mut arcs = Vec::new();
    for (line, text) in lines {
        let arc = parse_arc(&universe, &children, text).map_err(|e| e.at_line(line))?;
        children[arc.0] = children[arc.0].insert(arc.1);
        arcs.push(arc);
    }
    Dag::new(universe, arcs)
}

fn parse_arc(universe: &Universe, children: &[VarSet], text: &str) -> Result<(usize, usize)> {
    let (tail, head) = text
        .split_once("->")
        .ok_or_else(|| Error::Syntax("expected `u -> v`".into()))?;
    let (tail, head) = (tail.trim(), head.trim());
    let tail = universe.index_of(tail)?;
    let head = universe.index_of(head)?;
    if tail == head {
        return Err(Error::SelfArc(universe.name(tail).to_string()));
    }
    if children[tail].contains(head) {
        return Err(Error::DuplicateArc(
            universe.name(tail).to_string(),
            universe.name(head).to_string(),
        ));
    }
    if let Some(path) = directed_path(children, head, tail) {
        let cycle = path.iter().map(|&v| universe.name(v).to_string()).collect();
        return Err(Error::Cycle(cycle));
    }
    Ok((tail, head))
}

/// A directed path `from` ... `to`, if one exists.
fn directed_path(children: &[VarSet], from: usize, to: usize) -> Option<Vec<usize>> {
    let mut previous = vec![None; children.len()];
    let mut seen = VarSet::singleton(from);
    let mut queue = std::collections::VecDeque::from([from]);
    while let Some(v) = queue.pop_front() {
        if v == to {
            let mut path = vec![v];
            let mut cur = v;
            while let Some(p) = previous[cur] {
                path.push(p);
                cur = p;
            }
            path.reverse();
            return Some(path);
        }
        for c in children[v] - seen {
            seen = seen.insert(c);
            previous[c] = Some(v);
            queue.push_back(c);
        }
    }
    None
}

fn header(universe: &Universe) -> String {
    format!("vars: {}\n", universe.names().join(" "))
}

/// One statement per line in canonical order, stable ones prefixed with `stable: `.
pub fn format_statements(relation: &Relation) -> String {
    let mut out = String::new();
    let universe = relation.universe();
    for t in relation.triplets() {
        if relation.is_stable(&t) == Some(true) {
            out.push_str("stable: ");
        }
        let _ = writeln!(out, "{}", t.display(universe));
    }
    out
}

pub fn serialize_relation(relation: &Relation) -> String {
    header(relation.universe()) + &format_statements(relation)
}

pub fn serialize_dag(g: &Dag) -> String {
    let u = g.universe();
    let mut out = header(u);
    for &(tail, head) in g.arcs() {
        let _ = writeln!(out, "{} -> {}", u.name(tail), u.name(head));
    }
    out
}
