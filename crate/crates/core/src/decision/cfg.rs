//! Context-free grammars: the triple construction from an [`Npda`],
//! emptiness, finiteness through Chomsky normal form, shortest words and
//! bounded enumeration.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::constructions::Npda;
use crate::model::{LetterClass, LetterId, StackId, Top};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sym {
    T(usize),
    N(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Production {
    pub lhs: usize,
    pub rhs: Vec<Sym>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cfg {
    pub terminals: Vec<String>,
    pub nonterminals: Vec<String>,
    pub start: usize,
    pub productions: Vec<Production>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CfgError {
    #[error("grammar size guard: more than {0} productions")]
    TooLarge(usize),
    #[error("grammar syntax: {0}")]
    Syntax(String),
}

/// Default bound on the number of productions generated from an NPDA.
pub const DEFAULT_PRODUCTION_CAP: usize = 4_000_000;

impl Cfg {
    /// Parses rules of the form `A -> x B | ε`. Nonterminals are the symbols
    /// that occur on a left-hand side; the first one is the start symbol.
    pub fn parse(src: &str) -> Result<Cfg, CfgError> {
        let mut rules = Vec::new();
        for line in src.lines().map(str::trim).filter(|l| !l.is_empty()) {
            let (lhs, rhs) = line
                .split_once("->")
                .ok_or_else(|| CfgError::Syntax(format!("missing `->` in `{line}`")))?;
            let lhs = lhs.trim();
            if lhs.is_empty() || lhs.contains(char::is_whitespace) {
                return Err(CfgError::Syntax(format!("bad left-hand side in `{line}`")));
            }
            for alt in rhs.split('|') {
                let toks: Vec<String> = alt
                    .split_whitespace()
                    .filter(|t| *t != "ε")
                    .map(str::to_string)
                    .collect();
                rules.push((lhs.to_string(), toks));
            }
        }
        let mut nonterminals: Vec<String> = Vec::new();
        for (l, _) in &rules {
            if !nonterminals.contains(l) {
                nonterminals.push(l.clone());
            }
        }
        if nonterminals.is_empty() {
            return Err(CfgError::Syntax("no rules".into()));
        }
        let mut terminals: Vec<String> = Vec::new();
        let mut productions = Vec::new();
        for (l, toks) in rules {
            let rhs = toks
                .into_iter()
                .map(|t| match nonterminals.iter().position(|n| *n == t) {
                    Some(i) => Sym::N(i),
                    None => Sym::T(match terminals.iter().position(|x| *x == t) {
                        Some(i) => i,
                        None => {
                            terminals.push(t);
                            terminals.len() - 1
                        }
                    }),
                })
                .collect();
            productions.push(Production {
                lhs: nonterminals.iter().position(|n| *n == l).unwrap(),
                rhs,
            });
        }
        Ok(Cfg {
            terminals,
            nonterminals,
            start: 0,
            productions,
        })
    }

    pub fn terminal_id(&self, name: &str) -> Option<usize> {
        self.terminals.iter().position(|t| t == name)
    }

    /// Nonterminals deriving at least one terminal word.
    pub fn generating(&self) -> Vec<bool> {
        let mut gen = vec![false; self.nonterminals.len()];
        let mut changed = true;
        while changed {
            changed = false;
            for p in &self.productions {
                if !gen[p.lhs]
                    && p.rhs.iter().all(|s| match s {
                        Sym::T(_) => true,
                        Sym::N(n) => gen[*n],
                    })
                {
                    gen[p.lhs] = true;
                    changed = true;
                }
            }
        }
        gen
    }

    /// Nonterminals deriving the empty word.
    pub fn nullable(&self) -> Vec<bool> {
        let mut null = vec![false; self.nonterminals.len()];
        let mut changed = true;
        while changed {
            changed = false;
            for p in &self.productions {
                if !null[p.lhs] && p.rhs.iter().all(|s| matches!(s, Sym::N(n) if null[*n])) {
                    null[p.lhs] = true;
                    changed = true;
                }
            }
        }
        null
    }

    /// Keeps only productions over nonterminals that are generating and
    /// reachable from the start symbol.
    pub fn trim(&self) -> Cfg {
        let gen = self.generating();
        let prods: Vec<&Production> = self
            .productions
            .iter()
            .filter(|p| gen[p.lhs] && p.rhs.iter().all(|s| !matches!(s, Sym::N(n) if !gen[*n])))
            .collect();
        let mut reach = vec![false; self.nonterminals.len()];
        reach[self.start] = true;
        let mut queue = VecDeque::from([self.start]);
        let mut by_lhs: HashMap<usize, Vec<&Production>> = HashMap::new();
        for p in &prods {
            by_lhs.entry(p.lhs).or_default().push(p);
        }
        while let Some(a) = queue.pop_front() {
            for p in by_lhs.get(&a).into_iter().flatten() {
                for s in &p.rhs {
                    if let Sym::N(n) = s {
                        if !reach[*n] {
                            reach[*n] = true;
                            queue.push_back(*n);
                        }
                    }
                }
            }
        }
        Cfg {
            terminals: self.terminals.clone(),
            nonterminals: self.nonterminals.clone(),
            start: self.start,
            productions: prods.into_iter().filter(|p| reach[p.lhs]).cloned().collect(),
        }
    }

    /// Shortest word per nonterminal, ties broken lexicographically on the
    /// terminal names.
    pub fn shortest_words(&self) -> Vec<Option<Vec<usize>>> {
        let mut best: Vec<Option<Vec<usize>>> = vec![None; self.nonterminals.len()];
        let key = |w: &Vec<usize>| -> (usize, Vec<&str>) {
            (w.len(), w.iter().map(|&t| self.terminals[t].as_str()).collect())
        };
        let mut changed = true;
        while changed {
            changed = false;
            for p in &self.productions {
                let mut cand = Vec::new();
                let mut ok = true;
                for s in &p.rhs {
                    match s {
                        Sym::T(t) => cand.push(*t),
                        Sym::N(n) => match &best[*n] {
                            Some(w) => cand.extend_from_slice(w),
                            None => {
                                ok = false;
                                break;
                            }
                        },
                    }
                }
                if !ok {
                    continue;
                }
                let better = match &best[p.lhs] {
                    None => true,
                    Some(old) => key(&cand) < key(old),
                };
                if better {
                    best[p.lhs] = Some(cand);
                    changed = true;
                }
            }
        }
        best
    }

    /// All words of length at most `n`, as sets of terminal indices.
    pub fn words_upto(&self, n: usize) -> BTreeSet<Vec<usize>> {
        let g = self.trim();
        let mut lang: Vec<HashSet<Vec<usize>>> = vec![HashSet::new(); g.nonterminals.len()];
        let mut changed = true;
        while changed {
            changed = false;
            for p in &g.productions {
                let mut partial: HashSet<Vec<usize>> = HashSet::from([Vec::new()]);
                for s in &p.rhs {
                    let mut next = HashSet::new();
                    for pre in &partial {
                        match s {
                            Sym::T(t) => {
                                if pre.len() < n {
                                    let mut w = pre.clone();
                                    w.push(*t);
                                    next.insert(w);
                                }
                            }
                            Sym::N(m) => {
                                for suf in &lang[*m] {
                                    if pre.len() + suf.len() <= n {
                                        let mut w = pre.clone();
                                        w.extend_from_slice(suf);
                                        next.insert(w);
                                    }
                                }
                            }
                        }
                    }
                    partial = next;
                    if partial.is_empty() {
                        break;
                    }
                }
                for w in partial {
                    if lang[p.lhs].insert(w) {
                        changed = true;
                    }
                }
            }
        }
        lang[g.start].iter().cloned().collect()
    }

    /// Membership by CYK over the Chomsky normal form.
    pub fn cyk(&self, word: &[usize]) -> bool {
        let cnf = to_cnf(self);
        let g = &cnf.grammar;
        if word.is_empty() {
            return g
                .productions
                .iter()
                .any(|p| p.lhs == g.start && p.rhs.is_empty());
        }
        let n = word.len();
        let nn = g.nonterminals.len();
        let mut table = vec![vec![vec![false; nn]; n + 1]; n];
        for (i, &a) in word.iter().enumerate() {
            for p in &g.productions {
                if p.rhs == [Sym::T(a)] {
                    table[i][1][p.lhs] = true;
                }
            }
        }
        for len in 2..=n {
            for i in 0..=n - len {
                for split in 1..len {
                    for p in &g.productions {
                        if let [Sym::N(b), Sym::N(c)] = p.rhs[..] {
                            if table[i][split][b] && table[i + split][len - split][c] {
                                table[i][len][p.lhs] = true;
                            }
                        }
                    }
                }
            }
        }
        table[0][n][g.start]
    }

    pub fn word_names(&self, w: &[usize]) -> Vec<String> {
        w.iter().map(|&t| self.terminals[t].clone()).collect()
    }
}

impl fmt::Display for Cfg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut order: Vec<usize> = (0..self.nonterminals.len()).collect();
        order.sort_by_key(|&n| n != self.start);
        for n in order {
            let alts: Vec<String> = self
                .productions
                .iter()
                .filter(|p| p.lhs == n)
                .map(|p| {
                    if p.rhs.is_empty() {
                        "ε".to_string()
                    } else {
                        p.rhs
                            .iter()
                            .map(|s| match s {
                                Sym::T(t) => self.terminals[*t].clone(),
                                Sym::N(m) => self.nonterminals[*m].clone(),
                            })
                            .collect::<Vec<_>>()
                            .join(" ")
                    }
                })
                .collect();
            if !alts.is_empty() {
                writeln!(f, "{} -> {}", self.nonterminals[n], alts.join(" | "))?;
            }
        }
        Ok(())
    }
}

/// A grammar in Chomsky normal form together with the original nonterminal
/// each of its nonterminals stems from (`None` for helpers).
#[derive(Debug, Clone)]
pub struct Cnf {
    pub grammar: Cfg,
    pub provenance: Vec<Option<usize>>,
}

/// Standard conversion: fresh start, terminal lifting, binarization,
/// ε-removal and unit-rule removal.
pub fn to_cnf(cfg: &Cfg) -> Cnf {
    let mut names = cfg.nonterminals.clone();
    let mut prov: Vec<Option<usize>> = (0..names.len()).map(Some).collect();
    fn fresh(names: &mut Vec<String>, prov: &mut Vec<Option<usize>>, base: String, from: Option<usize>) -> usize {
        names.push(base);
        prov.push(from);
        names.len() - 1
    }
    let start = fresh(&mut names, &mut prov, format!("{}₀", cfg.nonterminals[cfg.start]), Some(cfg.start));
    let mut prods: Vec<Production> = cfg.productions.clone();
    prods.push(Production {
        lhs: start,
        rhs: vec![Sym::N(cfg.start)],
    });

    let mut lifted: HashMap<usize, usize> = HashMap::new();
    let mut out = Vec::new();
    for p in prods {
        if p.rhs.len() < 2 {
            out.push(p);
            continue;
        }
        let rhs = p
            .rhs
            .iter()
            .map(|s| match s {
                Sym::T(t) => Sym::N(*lifted.entry(*t).or_insert_with(|| {
                    fresh(&mut names, &mut prov, format!("T[{}]", cfg.terminals[*t]), None)
                })),
                n => *n,
            })
            .collect();
        out.push(Production { lhs: p.lhs, rhs });
    }
    for (&t, &n) in &lifted {
        out.push(Production {
            lhs: n,
            rhs: vec![Sym::T(t)],
        });
    }

    let mut bin = Vec::new();
    for p in out {
        if p.rhs.len() <= 2 {
            bin.push(p);
            continue;
        }
        let mut lhs = p.lhs;
        let k = p.rhs.len();
        for (i, s) in p.rhs[..k - 2].iter().enumerate() {
            let base = format!("{}#{}", names[p.lhs], i + 1);
            let from = prov[p.lhs];
            let next = fresh(&mut names, &mut prov, base, from);
            bin.push(Production {
                lhs,
                rhs: vec![*s, Sym::N(next)],
            });
            lhs = next;
        }
        bin.push(Production {
            lhs,
            rhs: p.rhs[k - 2..].to_vec(),
        });
    }

    let tmp = Cfg {
        terminals: cfg.terminals.clone(),
        nonterminals: names.clone(),
        start,
        productions: bin.clone(),
    };
    let null = tmp.nullable();
    let mut set: BTreeSet<Production> = BTreeSet::new();
    for p in &bin {
        let opts: Vec<usize> = (0..p.rhs.len())
            .filter(|&i| matches!(p.rhs[i], Sym::N(n) if null[n]))
            .collect();
        for mask in 0..1u32 << opts.len() {
            let rhs: Vec<Sym> = p
                .rhs
                .iter()
                .enumerate()
                .filter(|(i, _)| match opts.iter().position(|o| o == i) {
                    Some(bit) => mask >> bit & 1 == 0,
                    None => true,
                })
                .map(|(_, s)| *s)
                .collect();
            if !rhs.is_empty() {
                set.insert(Production { lhs: p.lhs, rhs });
            }
        }
    }
    if null[start] {
        set.insert(Production { lhs: start, rhs: vec![] });
    }

    // Unit closure.
    let nn = names.len();
    let mut unit: Vec<BTreeSet<usize>> = (0..nn).map(|a| BTreeSet::from([a])).collect();
    let mut changed = true;
    while changed {
        changed = false;
        for p in &set {
            if let [Sym::N(b)] = p.rhs[..] {
                for a in 0..nn {
                    if unit[a].contains(&p.lhs) && !unit[a].contains(&b) {
                        unit[a].insert(b);
                        changed = true;
                    }
                }
            }
        }
    }
    let mut by_lhs: HashMap<usize, Vec<&Production>> = HashMap::new();
    for p in &set {
        if !matches!(p.rhs[..], [Sym::N(_)]) {
            by_lhs.entry(p.lhs).or_default().push(p);
        }
    }
    let mut fin: BTreeSet<Production> = BTreeSet::new();
    for a in 0..nn {
        for b in &unit[a] {
            for p in by_lhs.get(b).into_iter().flatten() {
                if p.rhs.is_empty() && a != start {
                    continue;
                }
                fin.insert(Production {
                    lhs: a,
                    rhs: p.rhs.clone(),
                });
            }
        }
    }
    let grammar = Cfg {
        terminals: cfg.terminals.clone(),
        nonterminals: names,
        start,
        productions: fin.into_iter().collect(),
    }
    .trim();
    Cnf {
        grammar,
        provenance: prov,
    }
}

/// A cycle among useful nonterminals of the Chomsky normal form, reported by
/// original nonterminal names; `None` iff the language is finite.
pub fn cfg_cycle(cfg: &Cfg) -> Option<Vec<String>> {
    let cnf = to_cnf(&cfg.trim());
    let g = &cnf.grammar;
    let n = g.nonterminals.len();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for p in &g.productions {
        for s in &p.rhs {
            if let Sym::N(b) = s {
                adj[p.lhs].push(*b);
            }
        }
    }
    // 0 = unvisited, 1 = on the DFS stack, 2 = done.
    let mut color = vec![0u8; n];
    let mut path: Vec<usize> = Vec::new();
    for root in 0..n {
        if color[root] != 0 {
            continue;
        }
        let mut stack: Vec<(usize, usize)> = vec![(root, 0)];
        color[root] = 1;
        path.push(root);
        while let Some(&mut (v, ref mut i)) = stack.last_mut() {
            if *i < adj[v].len() {
                let w = adj[v][*i];
                *i += 1;
                match color[w] {
                    0 => {
                        color[w] = 1;
                        path.push(w);
                        stack.push((w, 0));
                    }
                    1 => {
                        let from = path.iter().position(|&x| x == w).unwrap();
                        let mut names: Vec<String> = path[from..]
                            .iter()
                            .map(|&x| match cnf.provenance[x] {
                                Some(o) => cfg.nonterminals[o].clone(),
                                None => g.nonterminals[x].clone(),
                            })
                            .collect();
                        names.dedup();
                        return Some(names);
                    }
                    _ => {}
                }
            } else {
                color[v] = 2;
                path.pop();
                stack.pop();
            }
        }
    }
    None
}

pub fn cfg_empty(cfg: &Cfg) -> bool {
    !cfg.generating()[cfg.start]
}

pub fn cfg_finite(cfg: &Cfg) -> bool {
    cfg_cycle(cfg).is_none()
}

/// Triple construction. The bottom marker becomes a real symbol `Z₀`;
/// acceptance in a drain state at the end of the input is turned into
/// acceptance by empty stack through a clearing state.
pub fn npda_to_cfg(m: &Npda, cap: usize) -> Result<Cfg, CfgError> {
    let nq = m.state_count();
    // Extra states: clearing state `e` and final state `f`.
    let e = nq;
    let f = nq + 1;
    let ns = m.stack_count();
    let z0 = ns;
    let top_of = |x: usize| if x == z0 { Top::Bottom } else { Top::Symbol(StackId(x as u16)) };
    let sym_name = |x: usize| if x == z0 { "Z₀".to_string() } else { m.stack_name(StackId(x as u16)).to_string() };
    let state_name = |q: usize| match q {
        q if q == e => "⟨clear⟩".to_string(),
        q if q == f => "⟨final⟩".to_string(),
        q => m.state_name(q).to_string(),
    };

    // reach[p] = states reachable from p ignoring the stack.
    let mut succ: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); nq + 2];
    for (q, _, _, p, _) in m.letter_moves() {
        succ[q].insert(p);
    }
    for (q, _, p) in m.silent_moves() {
        succ[q].insert(p);
    }
    for q in (0..nq).filter(|&q| m.is_drain(q)) {
        succ[q].insert(e);
    }
    succ[e].insert(f);
    let reach: Vec<Vec<bool>> = (0..nq + 2)
        .map(|s| {
            let mut seen = vec![false; nq + 2];
            seen[s] = true;
            let mut todo = vec![s];
            while let Some(x) = todo.pop() {
                for &y in &succ[x] {
                    if !seen[y] {
                        seen[y] = true;
                        todo.push(y);
                    }
                }
            }
            seen
        })
        .collect();

    let mut ids: HashMap<(usize, usize, usize), usize> = HashMap::new();
    let mut names: Vec<String> = Vec::new();
    let mut queue: VecDeque<(usize, usize, usize)> = VecDeque::new();
    let mut intern = |t: (usize, usize, usize), names: &mut Vec<String>, queue: &mut VecDeque<(usize, usize, usize)>| -> usize {
        *ids.entry(t).or_insert_with(|| {
            names.push(format!("[{} {} {}]", state_name(t.0), sym_name(t.1), state_name(t.2)));
            queue.push_back(t);
            names.len() - 1
        })
    };
    let start = intern((m.initial(), z0, f), &mut names, &mut queue);
    let mut productions = Vec::new();
    let terminal = |a: LetterId| a.index();
    while let Some((p, x, q)) = queue.pop_front() {
        if productions.len() > cap {
            return Err(CfgError::TooLarge(cap));
        }
        let me = intern((p, x, q), &mut names, &mut queue);
        if p == e {
            if x != z0 && q == e {
                productions.push(Production { lhs: me, rhs: vec![] });
            }
            if x == z0 && q == f {
                productions.push(Production { lhs: me, rhs: vec![] });
            }
            continue;
        }
        if p == f {
            continue;
        }
        if m.is_drain(p) && reach[e][q] {
            let r = intern((e, x, q), &mut names, &mut queue);
            productions.push(Production { lhs: me, rhs: vec![Sym::N(r)] });
        }
        if let Some(ts) = m.silent.get(&(p, top_of(x))) {
            for &p2 in ts {
                if reach[p2][q] {
                    let r = intern((p2, x, q), &mut names, &mut queue);
                    productions.push(Production { lhs: me, rhs: vec![Sym::N(r)] });
                }
            }
        }
        for a in m.letters() {
            let Some(ts) = m.letter.get(&(p, a, top_of(x))) else { continue };
            for &(p2, push) in ts {
                match (push, m.letter_class(a)) {
                    (Some(y), _) => {
                        for r in 0..nq + 2 {
                            if reach[p2][r] && reach[r][q] {
                                let b = intern((p2, y.index(), r), &mut names, &mut queue);
                                let c = intern((r, x, q), &mut names, &mut queue);
                                productions.push(Production {
                                    lhs: me,
                                    rhs: vec![Sym::T(terminal(a)), Sym::N(b), Sym::N(c)],
                                });
                            }
                        }
                    }
                    (None, LetterClass::Pop) if x != z0 => {
                        if p2 == q {
                            productions.push(Production { lhs: me, rhs: vec![Sym::T(terminal(a))] });
                        }
                    }
                    _ => {
                        if reach[p2][q] {
                            let b = intern((p2, x, q), &mut names, &mut queue);
                            productions.push(Production {
                                lhs: me,
                                rhs: vec![Sym::T(terminal(a)), Sym::N(b)],
                            });
                        }
                    }
                }
            }
        }
    }
    Ok(Cfg {
        terminals: m.letters().map(|a| m.letter_name(a).to_string()).collect(),
        nonterminals: names,
        start,
        productions,
    })
}
