//! Layered 0/1 program for adaptive probing, written in the textual LP file
//! format (`Maximize` / `Subject To` / `Binaries` / `End`), plus a small
//! reader for the same grammar.
//!
//! Black nodes are collapsed into a root `r`. With `x_u_j` meaning "u is
//! selected at layer j or earlier" and `y_u` meaning "u is observed":
//!
//! ```text
//! max   Σ y_u - |N(r)| - 1
//! s.t.  x_r_0 = 1;  x_u_0 = 0 (u != r)
//!       Σ_{u != r} x_u_k <= k
//!       y_u <= Σ_{v ∈ N(u)} x_v_k      (u != r),   y_r <= x_r_k
//!       x_u_j <= x_u_(j+1)             j = 0..k-1
//!       x_u_j <= x_u_(j-1) + Σ_{v ∈ N(u)} x_v_(j-1)   j = 1..k
//! ```

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::io::Write;

use crate::error::{Error, Result};
use crate::graph::NodeId;
use crate::view::IncompleteView;

const TERMS_PER_LINE: usize = 8;

/// Sizes of the exported program.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IlpDimensions {
    /// Nodes of the collapsed graph (root included).
    pub nodes: usize,
    pub x_vars: usize,
    pub y_vars: usize,
    pub constraints: usize,
}

pub fn ilp_dimensions(view: &IncompleteView, k: usize) -> IlpDimensions {
    let nodes = 1 + view.gray_count() + view.white_count();
    IlpDimensions { nodes, x_vars: nodes * (k + 1), y_vars: nodes, constraints: 2 * nodes + 1 + 2 * nodes * k }
}

struct Collapsed {
    names: Vec<String>,
    adjacency: Vec<Vec<usize>>,
}

fn collapse(view: &IncompleteView) -> Collapsed {
    let g = view.graph();
    let mut index = vec![usize::MAX; g.node_count()];
    let mut names = vec!["r".to_string()];
    for u in 0..g.node_count() {
        if !view.is_black(u) {
            index[u] = names.len();
            names.push(u.to_string());
        }
    }
    let mut adjacency = vec![Vec::new(); names.len()];
    for u in 0..g.node_count() {
        if view.is_black(u) {
            continue;
        }
        let iu = index[u];
        if view.is_gray(u) {
            adjacency[0].push(iu);
            adjacency[iu].push(0);
        }
        for &v in g.neighbors(u) {
            if !view.is_black(v) {
                adjacency[iu].push(index[v]);
            }
        }
    }
    Collapsed { names, adjacency }
}

/// Writes the program for budget `k` to `sink`.
pub fn export_ilp<W: Write>(view: &IncompleteView, k: usize, mut sink: W) -> Result<IlpDimensions> {
    let c = collapse(view);
    let n = c.names.len();
    let x = |u: usize, j: usize| format!("x_{}_{}", c.names[u], j);
    let y = |u: usize| format!("y_{}", c.names[u]);
    let root_degree = c.adjacency[0].len();

    let mut out = String::new();
    writeln!(out, "\\ adaptive probing: {} collapsed nodes, budget {k}", n).unwrap();
    out.push_str("Maximize\n");
    let objective: Vec<(f64, String)> = (0..n).map(|u| (1.0, y(u))).collect();
    write_expression(&mut out, " obj:", &objective, Some(-((root_degree + 1) as f64)));
    out.push_str("Subject To\n");

    let mut rows = 0usize;
    let mut row = |out: &mut String, name: String, terms: Vec<(f64, String)>, op: &str, rhs: f64| {
        write_expression(out, &format!(" {name}:"), &terms, None);
        // Replace the trailing newline with the relation.
        out.pop();
        writeln!(out, " {op} {}", fmt_num(rhs)).unwrap();
        rows += 1;
    };

    row(&mut out, "root_start".into(), vec![(1.0, x(0, 0))], "=", 1.0);
    for u in 1..n {
        row(&mut out, format!("start_{}", c.names[u]), vec![(1.0, x(u, 0))], "=", 0.0);
    }
    row(&mut out, "budget".into(), (1..n).map(|u| (1.0, x(u, k))).collect(), "<=", k as f64);
    for u in 0..n {
        let mut terms = vec![(1.0, y(u))];
        if u == 0 {
            terms.push((-1.0, x(0, k)));
        } else {
            terms.extend(c.adjacency[u].iter().map(|&v| (-1.0, x(v, k))));
        }
        row(&mut out, format!("observe_{}", c.names[u]), terms, "<=", 0.0);
    }
    for u in 0..n {
        for j in 0..k {
            row(&mut out, format!("keep_{}_{}", c.names[u], j), vec![(1.0, x(u, j)), (-1.0, x(u, j + 1))], "<=", 0.0);
        }
    }
    for u in 0..n {
        for j in 1..=k {
            let mut terms = vec![(1.0, x(u, j)), (-1.0, x(u, j - 1))];
            terms.extend(c.adjacency[u].iter().map(|&v| (-1.0, x(v, j - 1))));
            row(&mut out, format!("layer_{}_{}", c.names[u], j), terms, "<=", 0.0);
        }
    }

    out.push_str("Binaries\n");
    let mut vars: Vec<String> = Vec::with_capacity(n * (k + 2));
    for u in 0..n {
        vars.extend((0..=k).map(|j| x(u, j)));
    }
    vars.extend((0..n).map(y));
    for chunk in vars.chunks(TERMS_PER_LINE) {
        writeln!(out, " {}", chunk.join(" ")).unwrap();
    }
    out.push_str("End\n");

    sink.write_all(out.as_bytes())?;
    sink.flush()?;
    Ok(IlpDimensions { nodes: n, x_vars: n * (k + 1), y_vars: n, constraints: rows })
}

fn fmt_num(v: f64) -> String {
    if v.fract() == 0.0 && v.abs() < 1e15 {
        format!("{}", v as i64)
    } else {
        format!("{v}")
    }
}

fn write_expression(out: &mut String, label: &str, terms: &[(f64, String)], constant: Option<f64>) {
    out.push_str(label);
    let mut pieces: Vec<String> = terms
        .iter()
        .enumerate()
        .map(|(i, (coef, name))| {
            let sign = if *coef < 0.0 { "-" } else if i == 0 { "" } else { "+" };
            let mag = coef.abs();
            let body = if mag == 1.0 { name.clone() } else { format!("{} {name}", fmt_num(mag)) };
            if sign.is_empty() {
                body
            } else {
                format!("{sign} {body}")
            }
        })
        .collect();
    if let Some(c) = constant {
        let sign = if c < 0.0 { "-" } else { "+" };
        pieces.push(format!("{sign} {}", fmt_num(c.abs())));
    }
    if pieces.is_empty() {
        pieces.push("0".into());
    }
    for (i, chunk) in pieces.chunks(TERMS_PER_LINE).enumerate() {
        if i > 0 {
            out.push_str("   ");
        }
        out.push(' ');
        out.push_str(&chunk.join(" "));
        out.push('\n');
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpSense {
    Maximize,
    Minimize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RelOp {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpConstraint {
    pub name: String,
    pub terms: Vec<(f64, String)>,
    pub op: RelOp,
    pub rhs: f64,
}

/// A parsed LP file.
#[derive(Debug, Clone, PartialEq)]
pub struct LpProblem {
    pub sense: LpSense,
    pub objective: Vec<(f64, String)>,
    pub objective_constant: f64,
    pub constraints: Vec<LpConstraint>,
    pub binaries: Vec<String>,
}

impl LpProblem {
    /// Every variable mentioned anywhere, sorted.
    pub fn variables(&self) -> Vec<String> {
        let mut set: BTreeMap<&str, ()> = BTreeMap::new();
        for (_, v) in &self.objective {
            set.insert(v, ());
        }
        for c in &self.constraints {
            for (_, v) in &c.terms {
                set.insert(v, ());
            }
        }
        for v in &self.binaries {
            set.insert(v, ());
        }
        set.into_keys().map(str::to_string).collect()
    }

    /// Objective value of `assignment` (missing variables are 0), or `None`
    /// if a constraint is violated.
    pub fn evaluate(&self, assignment: &HashMap<String, f64>) -> Option<f64> {
        let value = |terms: &[(f64, String)]| -> f64 {
            terms.iter().map(|(c, v)| c * assignment.get(v).copied().unwrap_or(0.0)).sum()
        };
        for c in &self.constraints {
            let lhs = value(&c.terms);
            let ok = match c.op {
                RelOp::Le => lhs <= c.rhs + 1e-9,
                RelOp::Ge => lhs >= c.rhs - 1e-9,
                RelOp::Eq => (lhs - c.rhs).abs() <= 1e-9,
            };
            if !ok {
                return None;
            }
        }
        Some(value(&self.objective) + self.objective_constant)
    }
}

#[derive(PartialEq)]
enum Section {
    Start,
    Objective,
    Constraints,
    Binaries,
    Done,
}

/// Reads the subset of the LP grammar that [`export_ilp`] emits: one
/// objective, named linear constraints (possibly wrapped over several lines),
/// a `Binaries` section and `End`. `\` starts a comment.
pub fn parse_lp(text: &str) -> Result<LpProblem> {
    let mut sense = None;
    let mut section = Section::Start;
    let mut objective_text = String::new();
    let mut constraint_text: Vec<(usize, String)> = Vec::new();
    let mut binaries = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('\\').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let lower = line.to_ascii_lowercase();
        match lower.as_str() {
            "maximize" | "maximise" | "max" => {
                sense = Some(LpSense::Maximize);
                section = Section::Objective;
                continue;
            }
            "minimize" | "minimise" | "min" => {
                sense = Some(LpSense::Minimize);
                section = Section::Objective;
                continue;
            }
            "subject to" | "such that" | "st" | "s.t." => {
                section = Section::Constraints;
                continue;
            }
            "binaries" | "binary" | "bin" => {
                section = Section::Binaries;
                continue;
            }
            "end" => {
                section = Section::Done;
                continue;
            }
            _ => {}
        }
        match section {
            Section::Start => return Err(Error::parse(line_no, "expected objective sense")),
            Section::Objective => {
                objective_text.push(' ');
                objective_text.push_str(line);
            }
            Section::Constraints => {
                let starts_new = line.contains(':');
                match constraint_text.last_mut() {
                    Some((_, buf)) if !starts_new => {
                        buf.push(' ');
                        buf.push_str(line);
                    }
                    _ => constraint_text.push((line_no, line.to_string())),
                }
            }
            Section::Binaries => binaries.extend(line.split_whitespace().map(str::to_string)),
            Section::Done => return Err(Error::parse(line_no, "content after End")),
        }
    }
    let sense = sense.ok_or_else(|| Error::parse(1, "missing objective section"))?;
    if section != Section::Done {
        return Err(Error::parse(text.lines().count(), "missing End"));
    }

    let objective_body = objective_text.split_once(':').map_or(objective_text.as_str(), |(_, b)| b);
    let (objective, objective_constant) = parse_terms(objective_body, 0)?;

    let mut constraints = Vec::with_capacity(constraint_text.len());
    for (line_no, text) in constraint_text {
        let (name, body) = text.split_once(':').ok_or_else(|| Error::parse(line_no, "constraint without a name"))?;
        let (op, pos, width) = ["<=", ">=", "=<", "=>", "="]
            .iter()
            .find_map(|tok| body.find(tok).map(|p| (*tok, p, tok.len())))
            .ok_or_else(|| Error::parse(line_no, "constraint without a relation"))?;
        let op = match op {
            "<=" | "=<" => RelOp::Le,
            ">=" | "=>" => RelOp::Ge,
            _ => RelOp::Eq,
        };
        let (terms, constant) = parse_terms(&body[..pos], line_no)?;
        let rhs: f64 = body[pos + width..]
            .trim()
            .parse()
            .map_err(|_| Error::parse(line_no, "right-hand side is not a number"))?;
        constraints.push(LpConstraint { name: name.trim().to_string(), terms, op, rhs: rhs - constant });
    }

    Ok(LpProblem { sense, objective, objective_constant, constraints, binaries })
}

fn parse_terms(text: &str, line_no: usize) -> Result<(Vec<(f64, String)>, f64)> {
    let mut terms = Vec::new();
    let mut constant = 0.0;
    let mut sign = 1.0;
    let mut coef: Option<f64> = None;
    for token in text.split_whitespace() {
        match token {
            "+" => sign = 1.0,
            "-" => sign = -1.0,
            _ => {
                if let Ok(num) = token.parse::<f64>() {
                    if let Some(prev) = coef.replace(sign * num) {
                        // Two numbers in a row: the first was a constant.
                        constant += prev;
                    }
                    sign = 1.0;
                } else {
                    if !token.starts_with(|c: char| c.is_ascii_alphabetic() || c == '_') {
                        return Err(Error::parse(line_no, format!("bad token `{token}`")));
                    }
                    let c = coef.take().unwrap_or(sign);
                    terms.push((c, token.to_string()));
                    sign = 1.0;
                }
            }
        }
    }
    if let Some(c) = coef {
        constant += c;
    }
    Ok((terms, constant))
}

/// Canonical 0/1 assignment realizing a feasible probe set: each member is
/// switched on from its hop distance (within the set) onward.
pub fn assignment_for_set(view: &IncompleteView, set: &[NodeId], k: usize) -> HashMap<String, f64> {
    let g = view.graph();
    let mut layer: HashMap<NodeId, usize> = HashMap::new();
    let mut frontier: Vec<NodeId> = set.iter().copied().filter(|&u| view.is_gray(u)).collect();
    for &u in &frontier {
        layer.insert(u, 1);
    }
    while let Some(u) = frontier.pop() {
        let lu = layer[&u];
        for &v in g.neighbors(u) {
            if set.contains(&v) && layer.get(&v).is_none_or(|&l| l > lu + 1) {
                layer.insert(v, lu + 1);
                frontier.push(v);
            }
        }
    }
    let mut a = HashMap::new();
    for j in 0..=k {
        a.insert(format!("x_r_{j}"), 1.0);
    }
    for (&u, &l) in &layer {
        for j in l..=k {
            a.insert(format!("x_{u}_{j}"), 1.0);
        }
    }
    a.insert("y_r".into(), 1.0);
    for u in 0..g.node_count() {
        if view.is_black(u) {
            continue;
        }
        let observed = view.is_gray(u) || g.neighbors(u).iter().any(|v| layer.contains_key(v));
        if observed {
            a.insert(format!("y_{u}"), 1.0);
        }
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::planner::{exact_optimal, ExactConfig};
    use crate::sampler::gen_hardness;

    fn export(view: &IncompleteView, k: usize) -> (String, IlpDimensions) {
        let mut buf = Vec::new();
        let dims = export_ilp(view, k, &mut buf).unwrap();
        (String::from_utf8(buf).unwrap(), dims)
    }

    #[test]
    fn counts_match_layering() {
        let h = gen_hardness(3, 4, 1, 1).unwrap();
        for k in 0..4 {
            let (text, dims) = export(&h.view, k);
            assert_eq!(dims, ilp_dimensions(&h.view, k));
            assert_eq!(dims.nodes, 8);
            let lp = parse_lp(&text).unwrap();
            assert_eq!(lp.sense, LpSense::Maximize);
            assert_eq!(lp.constraints.len(), dims.constraints);
            let xs = lp.binaries.iter().filter(|v| v.starts_with("x_")).count();
            let ys = lp.binaries.iter().filter(|v| v.starts_with("y_")).count();
            assert_eq!((xs, ys), (8 * (k + 1), 8));
            assert_eq!(lp.variables().len(), xs + ys);
        }
    }

    #[test]
    fn optimal_set_is_ilp_feasible_with_same_objective() {
        let h = gen_hardness(3, 4, 1, 1).unwrap();
        let (text, _) = export(&h.view, 1);
        let lp = parse_lp(&text).unwrap();
        let exact = exact_optimal(&h.view, 1, &ExactConfig::default()).unwrap();
        let a = assignment_for_set(&h.view, &exact.opt_sets[0], 1);
        assert_eq!(lp.evaluate(&a), Some(4.0));
    }

    #[test]
    fn zero_budget_objective_is_zero() {
        let h = gen_hardness(3, 4, 1, 1).unwrap();
        let (text, _) = export(&h.view, 0);
        let lp = parse_lp(&text).unwrap();
        let budget = lp.constraints.iter().find(|c| c.name == "budget").unwrap();
        assert_eq!(budget.rhs, 0.0);
        assert!(budget.terms.iter().all(|(_, v)| v != "x_r_0"));
        let a = assignment_for_set(&h.view, &[], 0);
        assert_eq!(lp.evaluate(&a), Some(0.0));
    }

    #[test]
    fn parser_rejects_garbage() {
        assert!(parse_lp("Subject To\n c: x <= 1\nEnd\n").is_err());
        assert!(parse_lp("Maximize\n obj: x\nSubject To\n c: x 1\nEnd\n").is_err());
        assert!(parse_lp("Maximize\n obj: x\n").is_err());
        let lp = parse_lp("Maximize\n obj: 2 x + y - 3\nSubject To\n c1: x + y\n   <= 1\nBinaries\n x y\nEnd\n").unwrap();
        assert_eq!(lp.objective, vec![(2.0, "x".to_string()), (1.0, "y".to_string())]);
        assert_eq!(lp.objective_constant, -3.0);
        assert_eq!(lp.constraints[0].terms.len(), 2);
    }
}
