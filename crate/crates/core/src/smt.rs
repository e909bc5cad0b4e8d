//! SMT-LIB v2 encoding of a combination query and parsing of solver replies.
//!
//! Each coordinate function `f_i` is an uninterpreted Boolean function over
//! the inputs in its support set, in ascending index order. The universally
//! quantified constraints are expanded into ground instances.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::combtree::InputCombination;
use crate::error::{Error, Result};
use crate::gf2::TruthTable;

fn bool_lit(b: bool) -> &'static str {
    if b {
        "true"
    } else {
        "false"
    }
}

/// Application of `f{i}` to the projection of assignment `a` (over the
/// function's own arguments, bit `j` = argument `j`).
fn app(i: usize, arity: usize, a: u64) -> String {
    let mut s = format!("(f{}", i + 1);
    for j in 0..arity {
        s.push(' ');
        s.push_str(bool_lit((a >> j) & 1 == 1));
    }
    s.push(')');
    s
}

/// Projects the full assignment `x` onto the members of `set`.
fn project(x: u64, set: u64) -> u64 {
    let mut out = 0;
    let mut j = 0;
    let mut s = set;
    while s != 0 {
        let i = s.trailing_zeros();
        out |= ((x >> i) & 1) << j;
        j += 1;
        s &= s - 1;
    }
    out
}

/// Builds the query script for `comb` and distance `d`.
///
/// With `exact_support` every argument of every function must be essential,
/// which matches the built-in checker; without it a function may ignore
/// some of its arguments.
pub fn generate_script(comb: &InputCombination, d: usize, exact_support: bool) -> String {
    let k = comb.k();
    let sets = comb.sets();
    let arity: Vec<usize> = sets.iter().map(|s| s.count_ones() as usize).collect();
    let mut s = String::new();
    let _ = writeln!(s, "; combination {comb}, k = {k}, d = {d}");
    s.push_str("(set-option :produce-models true)\n(set-logic QF_UFLIA)\n");
    for (i, &n) in arity.iter().enumerate() {
        let _ = writeln!(s, "(declare-fun f{} ({}) Bool)", i + 1, vec!["Bool"; n].join(" "));
    }

    // Linearity only depends on the projections, so each function gets one
    // instance per unordered pair of its own argument vectors.
    for (i, &n) in arity.iter().enumerate() {
        for a in 0..1u64 << n {
            for b in a..1u64 << n {
                let _ = writeln!(
                    s,
                    "(assert (= (xor {} {}) {}))",
                    app(i, n, a),
                    app(i, n, b),
                    app(i, n, a ^ b)
                );
            }
        }
    }

    for x in 1..1u64 << k {
        let need = d as i64 - x.count_ones() as i64;
        if need <= 0 {
            continue;
        }
        let terms: Vec<String> = sets
            .iter()
            .enumerate()
            .map(|(i, &set)| format!("(ite {} 1 0)", app(i, arity[i], project(x, set))))
            .collect();
        let _ = writeln!(s, "(assert (>= (+ 0 {}) {need}))", terms.join(" "));
    }

    for x in 0..1u64 << k {
        for y in x + 1..1u64 << k {
            let diffs: Vec<String> = sets
                .iter()
                .enumerate()
                .map(|(i, &set)| {
                    format!(
                        "(distinct {} {})",
                        app(i, arity[i], project(x, set)),
                        app(i, arity[i], project(y, set))
                    )
                })
                .collect();
            let _ = writeln!(s, "(assert (or {}))", diffs.join(" "));
        }
    }

    if exact_support {
        for (i, &n) in arity.iter().enumerate() {
            for j in 0..n {
                let flips: Vec<String> = (0..1u64 << n)
                    .filter(|a| (a >> j) & 1 == 0)
                    .map(|a| format!("(distinct {} {})", app(i, n, a), app(i, n, a | 1 << j)))
                    .collect();
                let _ = writeln!(s, "(assert (or {}))", flips.join(" "));
            }
        }
    }
    s.push_str("(check-sat)\n(get-model)\n(exit)\n");
    s
}

/// S-expression as produced by SMT-LIB solvers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Sexp {
    Atom(String),
    List(Vec<Sexp>),
}

impl Sexp {
    fn atom(&self) -> Option<&str> {
        match self {
            Sexp::Atom(a) => Some(a),
            Sexp::List(_) => None,
        }
    }

    fn list(&self) -> Option<&[Sexp]> {
        match self {
            Sexp::List(l) => Some(l),
            Sexp::Atom(_) => None,
        }
    }
}

/// Parses a sequence of s-expressions. `|quoted|` symbols lose their bars;
/// string literals keep their quotes; `;` starts a line comment.
pub fn parse_sexps(text: &str) -> Result<Vec<Sexp>> {
    let mut stack: Vec<Vec<Sexp>> = vec![Vec::new()];
    let mut chars = text.char_indices().peekable();
    while let Some((pos, c)) = chars.next() {
        match c {
            '(' => {
                if stack.len() > 256 {
                    return Err(Error::Model("s-expression nested too deeply".into()));
                }
                stack.push(Vec::new());
            }
            ')' => {
                let done = stack.pop().filter(|_| !stack.is_empty()).ok_or_else(|| {
                    Error::Model(format!("unbalanced ')' at byte {pos}"))
                })?;
                stack.last_mut().expect("outer level").push(Sexp::List(done));
            }
            ';' => {
                for (_, c) in chars.by_ref() {
                    if c == '\n' {
                        break;
                    }
                }
            }
            '|' => {
                let mut sym = String::new();
                let mut closed = false;
                for (_, c) in chars.by_ref() {
                    if c == '|' {
                        closed = true;
                        break;
                    }
                    sym.push(c);
                }
                if !closed {
                    return Err(Error::Model("unterminated |symbol|".into()));
                }
                stack.last_mut().expect("level").push(Sexp::Atom(sym));
            }
            '"' => {
                let mut lit = String::from("\"");
                let mut closed = false;
                while let Some((_, c)) = chars.next() {
                    lit.push(c);
                    if c == '"' {
                        // "" is an escaped quote inside a string literal.
                        if chars.peek().map(|&(_, n)| n) == Some('"') {
                            chars.next();
                            lit.push('"');
                            continue;
                        }
                        closed = true;
                        break;
                    }
                }
                if !closed {
                    return Err(Error::Model("unterminated string literal".into()));
                }
                stack.last_mut().expect("level").push(Sexp::Atom(lit));
            }
            c if c.is_whitespace() => {}
            c => {
                let mut atom = String::from(c);
                while let Some(&(_, n)) = chars.peek() {
                    if n.is_whitespace() || matches!(n, '(' | ')' | ';' | '|' | '"') {
                        break;
                    }
                    atom.push(n);
                    chars.next();
                }
                stack.last_mut().expect("level").push(Sexp::Atom(atom));
            }
        }
    }
    if stack.len() != 1 {
        return Err(Error::Model("unbalanced '(' in solver output".into()));
    }
    Ok(stack.pop().unwrap_or_default())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SatStatus {
    Sat,
    Unsat,
    Unknown,
}

/// A `define-fun` for a Boolean function of Boolean arguments.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunctionDef {
    pub name: String,
    pub params: Vec<String>,
    pub body: Sexp,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolverResponse {
    pub status: SatStatus,
    pub definitions: Vec<FunctionDef>,
}

/// Parses the solver's standard output for a check-sat / get-model script.
pub fn parse_response(text: &str) -> Result<SolverResponse> {
    let sexps = parse_sexps(text)?;
    let mut status = None;
    let mut definitions = Vec::new();
    for s in &sexps {
        match s {
            Sexp::Atom(a) if status.is_none() => {
                status = Some(match a.as_str() {
                    "sat" => SatStatus::Sat,
                    "unsat" => SatStatus::Unsat,
                    "unknown" => SatStatus::Unknown,
                    other => return Err(Error::Model(format!("unexpected verdict {other:?}"))),
                });
            }
            Sexp::List(items) if items.first().and_then(Sexp::atom) == Some("error") => {
                // Asking for a model after unsat is reported as an error; it
                // carries no information beyond the verdict.
                if status != Some(SatStatus::Unsat) {
                    return Err(Error::Model(format!("solver error: {s:?}")));
                }
            }
            Sexp::List(_) => collect_definitions(s, &mut definitions)?,
            Sexp::Atom(_) => {}
        }
    }
    let status = status.ok_or_else(|| Error::Model("no check-sat verdict".into()))?;
    Ok(SolverResponse {
        status,
        definitions,
    })
}

fn collect_definitions(s: &Sexp, out: &mut Vec<FunctionDef>) -> Result<()> {
    let Some(items) = s.list() else {
        return Ok(());
    };
    if items.first().and_then(Sexp::atom) == Some("define-fun") {
        let [_, name, params, sort, body] = items else {
            return Err(Error::Model("define-fun needs name, parameters, sort and body".into()));
        };
        let name = name
            .atom()
            .ok_or_else(|| Error::Model("define-fun name is not a symbol".into()))?;
        let params = params
            .list()
            .ok_or_else(|| Error::Model(format!("parameters of {name} are not a list")))?
            .iter()
            .map(|p| match p.list() {
                Some([Sexp::Atom(v), Sexp::Atom(sort)]) if sort == "Bool" => Ok(v.clone()),
                _ => Err(Error::Model(format!("unsupported parameter in {name}: {p:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        if sort.atom() != Some("Bool") {
            return Err(Error::Model(format!("{name} does not return Bool")));
        }
        out.push(FunctionDef {
            name: name.to_string(),
            params,
            body: body.clone(),
        });
        return Ok(());
    }
    for item in items {
        collect_definitions(item, out)?;
    }
    Ok(())
}

/// Evaluates a Boolean term under variable bindings.
pub fn eval_bool(term: &Sexp, env: &HashMap<String, bool>) -> Result<bool> {
    eval(term, env, 0)
}

fn eval(term: &Sexp, env: &HashMap<String, bool>, depth: usize) -> Result<bool> {
    if depth > 512 {
        return Err(Error::Model("term nested too deeply".into()));
    }
    let args = |rest: &[Sexp]| -> Result<Vec<bool>> {
        rest.iter().map(|t| eval(t, env, depth + 1)).collect()
    };
    match term {
        Sexp::Atom(a) => match a.as_str() {
            "true" => Ok(true),
            "false" => Ok(false),
            v => env
                .get(v)
                .copied()
                .ok_or_else(|| Error::Model(format!("unbound symbol {v:?}"))),
        },
        Sexp::List(items) => {
            let (head, rest) = items
                .split_first()
                .ok_or_else(|| Error::Model("empty application".into()))?;
            let op = head
                .atom()
                .ok_or_else(|| Error::Model("operator is not a symbol".into()))?;
            match op {
                "not" => match args(rest)?.as_slice() {
                    [v] => Ok(!v),
                    _ => Err(Error::Model("not takes one argument".into())),
                },
                "and" => Ok(args(rest)?.into_iter().all(|v| v)),
                "or" => Ok(args(rest)?.into_iter().any(|v| v)),
                "xor" => Ok(args(rest)?.into_iter().fold(false, |a, v| a ^ v)),
                "=>" => {
                    let v = args(rest)?;
                    let (last, init) = v
                        .split_last()
                        .ok_or_else(|| Error::Model("=> needs arguments".into()))?;
                    Ok(!init.iter().all(|&x| x) || *last)
                }
                "=" => {
                    let v = args(rest)?;
                    Ok(v.windows(2).all(|w| w[0] == w[1]))
                }
                "distinct" => {
                    let v = args(rest)?;
                    Ok(v.iter().enumerate().all(|(i, a)| v[i + 1..].iter().all(|b| a != b)))
                }
                "ite" => match rest {
                    [c, t, e] => {
                        if eval(c, env, depth + 1)? {
                            eval(t, env, depth + 1)
                        } else {
                            eval(e, env, depth + 1)
                        }
                    }
                    _ => Err(Error::Model("ite takes three arguments".into())),
                },
                "let" => {
                    let [bindings, body] = rest else {
                        return Err(Error::Model("let takes bindings and a body".into()));
                    };
                    let mut inner = env.clone();
                    for b in bindings
                        .list()
                        .ok_or_else(|| Error::Model("let bindings are not a list".into()))?
                    {
                        match b.list() {
                            Some([Sexp::Atom(v), t]) => {
                                // Bindings are parallel: evaluate in the outer scope.
                                inner.insert(v.clone(), eval(t, env, depth + 1)?);
                            }
                            _ => return Err(Error::Model(format!("bad let binding {b:?}"))),
                        }
                    }
                    eval(body, &inner, depth + 1)
                }
                other => Err(Error::Model(format!("unsupported operator {other:?}"))),
            }
        }
    }
}

/// Truth tables over `[k]` for each `f_i` of `comb`, read from the model.
pub fn functions_from_model(
    comb: &InputCombination,
    definitions: &[FunctionDef],
) -> Result<Vec<TruthTable>> {
    let k = comb.k();
    comb.sets()
        .iter()
        .enumerate()
        .map(|(i, &set)| {
            let name = format!("f{}", i + 1);
            let def = definitions
                .iter()
                .find(|f| f.name == name)
                .ok_or_else(|| Error::Model(format!("model lacks {name}")))?;
            let n = set.count_ones() as usize;
            if def.params.len() != n {
                return Err(Error::Model(format!(
                    "{name} has {} parameters, expected {n}",
                    def.params.len()
                )));
            }
            let mut local = Vec::with_capacity(1 << n);
            for a in 0..1u64 << n {
                let env: HashMap<String, bool> = def
                    .params
                    .iter()
                    .enumerate()
                    .map(|(j, p)| (p.clone(), (a >> j) & 1 == 1))
                    .collect();
                local.push(eval_bool(&def.body, &env)?);
            }
            TruthTable::from_fn(k, |x| local[project(x, set) as usize])
        })
        .collect()
}
