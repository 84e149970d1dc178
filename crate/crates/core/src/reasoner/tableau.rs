//! Tableau for ALCOQ. General inclusions are internalized; inclusions with
//! an atomic left side are unfolded lazily, and those with a nominal left
//! side become assertions.
//!
//! Concepts are hash-consed into a pool that is closed under negation, so a
//! node label is a set of small ids and clash detection is a lookup. Each
//! object name gets its own nominal node; distinct nominal nodes never merge.
//! Branching keeps a stack of branch points; every derived fact records the
//! branch points it depends on, and a clash backtracks to the latest one
//! involved.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::finite::bounded_model_search;
use super::{ReasonerError, SatResult, SatStats};
use crate::dl::{
    check_model, dl_fragment, interpret_concept, nnf, Axiom, Concept, ConceptName, DlFragment,
    Element, Interpretation, KnowledgeBase, Nnf, Role,
};
use crate::symbols::{NodeId, PropertyId};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TableauConfig {
    pub max_rule_applications: u64,
}

impl Default for TableauConfig {
    fn default() -> Self {
        TableauConfig {
            max_rule_applications: 2_000_000,
        }
    }
}

/// Decides whether `goal` has an instance in some model of `kb`.
pub fn tableau_sat(
    kb: &KnowledgeBase,
    goal: &Concept,
    config: TableauConfig,
) -> Result<SatResult, ReasonerError> {
    let fragment = dl_fragment(kb);
    if fragment != DlFragment::Alcoq {
        return Err(ReasonerError::fragment(fragment));
    }
    if goal
        .roles()
        .iter()
        .any(|(_, r)| r.has_inverse() || r.has_compose())
    {
        return Err(ReasonerError::fragment(DlFragment::SroiqExpressible));
    }
    let mut tab = Tableau::new(config);
    let state = tab.initial(kb, goal)?;
    let Some(done) = tab.search(state)? else {
        return Ok(SatResult {
            model: None,
            stats: tab.stats,
        });
    };
    let mut model = tab.extract(&done, kb)?;
    let verified = check_model(&model, kb)?.holds() && !interpret_concept(&model, goal)?.is_empty();
    if !verified {
        model = bounded_model_search(kb, goal, model.size().max(1))?.ok_or_else(|| {
            ReasonerError::Verification(
                "completion graph did not unravel into a finite model".into(),
            )
        })?;
    }
    Ok(SatResult {
        model: Some(model),
        stats: tab.stats,
    })
}

/// Completion graphs beyond this many nodes count as an exhausted budget.
const MAX_NODES: usize = 100_000;

type Cid = u32;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum C {
    Top,
    Bottom,
    Atom(ConceptName),
    NotAtom(ConceptName),
    Nom(NodeId),
    NotNom(NodeId),
    And(Vec<Cid>),
    Or(Vec<Cid>),
    AtLeast(u32, PropertyId, Cid),
    AtMost(u32, PropertyId, Cid),
}

#[derive(Default)]
struct Pool {
    items: Vec<C>,
    index: HashMap<C, Cid>,
    neg: Vec<Cid>,
}

const TOP: Cid = 0;
const BOTTOM: Cid = 1;

impl Pool {
    fn new() -> Pool {
        let mut pool = Pool::default();
        pool.raw(C::Top);
        pool.raw(C::Bottom);
        pool
    }

    fn raw(&mut self, c: C) -> Cid {
        if let Some(&id) = self.index.get(&c) {
            return id;
        }
        let id = self.items.len() as Cid;
        self.items.push(c.clone());
        self.index.insert(c, id);
        id
    }

    fn junction(&mut self, conj: bool, parts: Vec<Cid>) -> Cid {
        let (unit, zero) = if conj { (TOP, BOTTOM) } else { (BOTTOM, TOP) };
        let mut flat = BTreeSet::new();
        for p in parts {
            match &self.items[p as usize] {
                C::And(xs) if conj => flat.extend(xs.iter().copied()),
                C::Or(xs) if !conj => flat.extend(xs.iter().copied()),
                _ => {
                    flat.insert(p);
                }
            }
        }
        flat.remove(&unit);
        if flat.contains(&zero) {
            return zero;
        }
        match flat.len() {
            0 => unit,
            1 => *flat.iter().next().unwrap(),
            _ => {
                let xs = flat.into_iter().collect();
                self.raw(if conj { C::And(xs) } else { C::Or(xs) })
            }
        }
    }

    fn intern(&mut self, c: &Nnf) -> Result<Cid, ReasonerError> {
        Ok(match c {
            Nnf::Top => TOP,
            Nnf::Bottom => BOTTOM,
            Nnf::Atom(a) => self.raw(C::Atom(*a)),
            Nnf::NotAtom(a) => self.raw(C::NotAtom(*a)),
            Nnf::Nominal(os) => {
                let parts = os.iter().map(|o| self.raw(C::Nom(*o))).collect();
                self.junction(false, parts)
            }
            Nnf::NotNominal(os) => {
                let parts = os.iter().map(|o| self.raw(C::NotNom(*o))).collect();
                self.junction(true, parts)
            }
            Nnf::And(xs) | Nnf::Or(xs) => {
                let parts = xs
                    .iter()
                    .map(|x| self.intern(x))
                    .collect::<Result<_, _>>()?;
                self.junction(matches!(c, Nnf::And(_)), parts)
            }
            Nnf::AtLeast(n, r, filler) | Nnf::AtMost(n, r, filler) => {
                let Role::Atomic(p) = r else {
                    return Err(ReasonerError::fragment(DlFragment::SroiqExpressible));
                };
                let f = self.intern(filler)?;
                match c {
                    Nnf::AtLeast(0, ..) => TOP,
                    Nnf::AtLeast(..) if f == BOTTOM => BOTTOM,
                    Nnf::AtMost(..) if f == BOTTOM => TOP,
                    Nnf::AtLeast(..) => self.raw(C::AtLeast(*n, *p, f)),
                    _ => self.raw(C::AtMost(*n, *p, f)),
                }
            }
        })
    }

    /// Extends the negation table to every id, interning complements as
    /// needed. Terminates because complements of complements are the
    /// originals.
    fn close_under_negation(&mut self) {
        while self.neg.len() < self.items.len() {
            let n = self.negation_of(self.neg.len() as Cid);
            self.neg.push(n);
        }
    }

    fn negation_of(&mut self, x: Cid) -> Cid {
        if let Some(&n) = self.neg.get(x as usize) {
            return n;
        }
        match self.items[x as usize].clone() {
            C::Atom(a) => self.raw(C::NotAtom(a)),
            C::NotAtom(a) => self.raw(C::Atom(a)),
            C::Nom(o) => self.raw(C::NotNom(o)),
            C::NotNom(o) => self.raw(C::Nom(o)),
            C::Top => BOTTOM,
            C::Bottom => TOP,
            C::And(xs) => {
                let parts = xs.iter().map(|y| self.negation_of(*y)).collect();
                self.junction(false, parts)
            }
            C::Or(xs) => {
                let parts = xs.iter().map(|y| self.negation_of(*y)).collect();
                self.junction(true, parts)
            }
            C::AtLeast(n, p, f) => self.raw(C::AtMost(n - 1, p, f)),
            C::AtMost(n, p, f) => self.raw(C::AtLeast(n + 1, p, f)),
        }
    }

    fn neg(&self, x: Cid) -> Cid {
        self.neg[x as usize]
    }
}

/// Branch points a derivation rests on. A clash whose dependencies exclude a
/// branch point is independent of the choice made there, so the search
/// jumps back over it.
type Deps = BTreeSet<u32>;

fn union(a: &Deps, b: &Deps) -> Deps {
    a.union(b).copied().collect()
}

#[derive(Debug, Clone)]
struct Node {
    label: BTreeMap<Cid, Deps>,
    parent: Option<usize>,
    nominal: Option<NodeId>,
    alive: bool,
    out: BTreeMap<usize, BTreeMap<PropertyId, Deps>>,
}

#[derive(Debug, Clone)]
struct State {
    nodes: Vec<Node>,
    distinct: BTreeMap<(usize, usize), Deps>,
    nominal_node: BTreeMap<NodeId, usize>,
    root: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Block {
    No,
    Direct(usize),
    Indirect,
}

#[derive(Debug, Clone)]
enum Action {
    Add(usize, Cid, Deps),
    Merge {
        from: usize,
        into: usize,
        deps: Deps,
    },
}

impl Action {
    fn deps_mut(&mut self) -> &mut Deps {
        match self {
            Action::Add(_, _, d) | Action::Merge { deps: d, .. } => d,
        }
    }
}

enum Step {
    Clash(Deps),
    Done,
    Progress,
    Branch(Vec<Action>),
}

/// A branch point: the state before the choice and the alternatives left.
struct Frame {
    base: State,
    alternatives: Vec<Action>,
    next: usize,
    id: u32,
    failed: Deps,
}

struct Tableau {
    pool: Pool,
    universal: Vec<Cid>,
    /// Absorbed inclusions `A ⊑ C`: adding `A` to a label adds `C`.
    unfold: HashMap<Cid, Vec<Cid>>,
    config: TableauConfig,
    stats: SatStats,
}

impl State {
    /// Why `a` and `b` must stay apart, if they must.
    fn distinct(&self, a: usize, b: usize) -> Option<&Deps> {
        static NONE: Deps = BTreeSet::new();
        let both_nominal = self.nodes[a].nominal.is_some() && self.nodes[b].nominal.is_some();
        if both_nominal && a != b {
            return Some(&NONE);
        }
        self.distinct.get(&(a.min(b), a.max(b)))
    }

    fn successors(&self, x: usize, p: PropertyId) -> impl Iterator<Item = (usize, &Deps)> + '_ {
        self.nodes[x]
            .out
            .iter()
            .filter_map(move |(y, ps)| ps.get(&p).map(|d| (*y, d)))
    }

    fn blocking(&self) -> Vec<Block> {
        let mut status = vec![Block::No; self.nodes.len()];
        for x in 0..self.nodes.len() {
            let node = &self.nodes[x];
            if !node.alive || node.nominal.is_some() {
                continue;
            }
            let Some(p) = node.parent else { continue };
            if status[p] != Block::No {
                status[x] = Block::Indirect;
                continue;
            }
            let mut anc = Some(p);
            while let Some(a) = anc {
                let an = &self.nodes[a];
                if an.nominal.is_some() {
                    break;
                }
                if an.label.len() == node.label.len() && an.label.keys().eq(node.label.keys()) {
                    status[x] = Block::Direct(a);
                    break;
                }
                anc = an.parent;
            }
        }
        status
    }

    fn prune(&mut self, x: usize) {
        self.nodes[x].alive = false;
        let children: Vec<usize> = self.nodes[x].out.keys().copied().collect();
        self.nodes[x].out.clear();
        for c in children {
            if self.nodes[c].alive
                && self.nodes[c].nominal.is_none()
                && self.nodes[c].parent == Some(x)
            {
                self.prune(c);
            }
        }
    }

    fn link(&mut self, from: usize, to: usize, p: PropertyId, deps: Deps) {
        self.nodes[from]
            .out
            .entry(to)
            .or_default()
            .entry(p)
            .or_insert(deps);
    }

    fn merge(&mut self, from: usize, into: usize, why: &Deps) {
        let label = std::mem::take(&mut self.nodes[from].label);
        for (c, d) in label {
            self.nodes[into]
                .label
                .entry(c)
                .or_insert_with(|| union(&d, why));
        }
        for z in 0..self.nodes.len() {
            if let Some(ps) = self.nodes[z].out.remove(&from) {
                let source = if z == from { into } else { z };
                for (p, d) in ps {
                    self.link(source, into, p, union(&d, why));
                }
            }
        }
        let out = std::mem::take(&mut self.nodes[from].out);
        for (w, ps) in out {
            if self.nodes[w].nominal.is_some() || w == into {
                for (p, d) in ps {
                    self.link(into, w, p, union(&d, why));
                }
            } else if self.nodes[w].parent == Some(from) {
                self.prune(w);
            }
        }
        self.nodes[from].alive = false;
        let pairs: Vec<((usize, usize), Deps)> = self
            .distinct
            .iter()
            .filter(|((a, b), _)| *a == from || *b == from)
            .map(|(k, d)| (*k, d.clone()))
            .collect();
        for ((a, b), d) in pairs {
            self.distinct.remove(&(a, b));
            let other = if a == from { b } else { a };
            if other != into {
                self.distinct
                    .entry((other.min(into), other.max(into)))
                    .or_insert_with(|| union(&d, why));
            }
        }
        if self.root == from {
            self.root = into;
        }
        let dead: BTreeSet<usize> = (0..self.nodes.len())
            .filter(|&i| !self.nodes[i].alive)
            .collect();
        for node in &mut self.nodes {
            node.out.retain(|y, _| !dead.contains(y));
        }
    }
}

impl Tableau {
    fn new(config: TableauConfig) -> Tableau {
        Tableau {
            pool: Pool::new(),
            universal: Vec::new(),
            unfold: HashMap::new(),
            config,
            stats: SatStats::default(),
        }
    }

    fn fresh_node(
        &self,
        state: &mut State,
        parent: Option<usize>,
        nominal: Option<NodeId>,
        why: &Deps,
    ) -> usize {
        let mut label: BTreeMap<Cid, Deps> =
            self.universal.iter().map(|c| (*c, why.clone())).collect();
        label.insert(TOP, why.clone());
        state.nodes.push(Node {
            label,
            parent,
            nominal,
            alive: true,
            out: BTreeMap::new(),
        });
        state.nodes.len() - 1
    }

    fn initial(&mut self, kb: &KnowledgeBase, goal: &Concept) -> Result<State, ReasonerError> {
        let mut universal = BTreeSet::new();
        let mut assertions = Vec::new();
        let mut role_assertions = Vec::new();
        for ax in kb.axioms() {
            match ax {
                // `{o…} ⊑ C` only constrains the named elements.
                Axiom::Subsumption {
                    sub: Concept::Nominal(os),
                    sup,
                    ..
                } => {
                    let c = self.pool.intern(&nnf(sup))?;
                    assertions.extend(os.iter().map(|o| (*o, c)));
                }
                Axiom::Subsumption {
                    sub: Concept::Atomic(a),
                    sup,
                    ..
                } => {
                    let a = self.pool.raw(C::Atom(*a));
                    let c = self.pool.intern(&nnf(sup))?;
                    if c != TOP {
                        self.unfold.entry(a).or_default().push(c);
                    }
                }
                Axiom::Subsumption { sub, sup, .. } => {
                    let gci = Concept::or(Concept::not(sub.clone()), sup.clone());
                    let id = self.pool.intern(&nnf(&gci))?;
                    if id != TOP {
                        universal.insert(id);
                    }
                }
                Axiom::ConceptAssertion { object, concept } => {
                    assertions.push((*object, self.pool.intern(&nnf(concept))?));
                }
                Axiom::RoleAssertion {
                    subject,
                    object,
                    role,
                } => {
                    let Role::Atomic(p) = role else {
                        return Err(ReasonerError::fragment(DlFragment::SroiqExpressible));
                    };
                    role_assertions.push((*subject, *p, *object));
                }
            }
        }
        let goal_id = self.pool.intern(&nnf(goal))?;
        let objects: Vec<NodeId> = kb.signature().objects.iter().copied().collect();
        for o in &objects {
            self.pool.raw(C::Nom(*o));
        }
        self.pool.close_under_negation();
        self.universal = universal.into_iter().collect();

        let none = Deps::new();
        let mut state = State {
            nodes: Vec::new(),
            distinct: BTreeMap::new(),
            nominal_node: BTreeMap::new(),
            root: 0,
        };
        for o in objects {
            let n = self.fresh_node(&mut state, None, Some(o), &none);
            let nom = self.pool.raw(C::Nom(o));
            state.nodes[n].label.insert(nom, Deps::new());
            state.nominal_node.insert(o, n);
        }
        let root = self.fresh_node(&mut state, None, None, &none);
        state.nodes[root].label.insert(goal_id, Deps::new());
        state.root = root;
        for (o, c) in assertions {
            let n = state.nominal_node[&o];
            state.nodes[n].label.insert(c, Deps::new());
        }
        for (s, p, o) in role_assertions {
            let (a, b) = (state.nominal_node[&s], state.nominal_node[&o]);
            state.link(a, b, p, Deps::new());
        }
        Ok(state)
    }

    /// Depth-first search over branch points with backjumping.
    fn search(&mut self, initial: State) -> Result<Option<State>, ReasonerError> {
        let mut frames: Vec<Frame> = Vec::new();
        let mut state = initial;
        let mut ids = 0;
        loop {
            if self.stats.rule_applications > self.config.max_rule_applications
                || state.nodes.len() > MAX_NODES
            {
                return Err(ReasonerError::BudgetExhausted(self.stats.rule_applications));
            }
            match self.step(&mut state) {
                Step::Done => return Ok(Some(state)),
                Step::Progress => {}
                Step::Branch(alternatives) => {
                    self.stats.branches += 1;
                    ids += 1;
                    let mut frame = Frame {
                        base: state,
                        alternatives,
                        next: 0,
                        id: ids,
                        failed: Deps::new(),
                    };
                    state = self.take_alternative(&mut frame);
                    frames.push(frame);
                }
                Step::Clash(mut deps) => loop {
                    let Some(frame) = frames.last_mut() else {
                        return Ok(None);
                    };
                    if !deps.remove(&frame.id) {
                        frames.pop();
                        continue;
                    }
                    frame.failed.extend(deps);
                    if frame.next < frame.alternatives.len() {
                        state = self.take_alternative(frame);
                        break;
                    }
                    deps = std::mem::take(&mut frame.failed);
                    frames.pop();
                },
            }
        }
    }

    fn take_alternative(&mut self, frame: &mut Frame) -> State {
        let mut state = frame.base.clone();
        let mut action = frame.alternatives[frame.next].clone();
        frame.next += 1;
        action.deps_mut().insert(frame.id);
        self.apply(&mut state, action);
        state
    }

    fn apply(&mut self, state: &mut State, action: Action) {
        self.stats.rule_applications += 1;
        match action {
            Action::Add(x, c, d) => {
                state.nodes[x].label.entry(c).or_insert(d);
            }
            Action::Merge { from, into, deps } => state.merge(from, into, &deps),
        }
    }

    fn clash(&self, node: &Node) -> Option<Deps> {
        if let Some(d) = node.label.get(&BOTTOM) {
            return Some(d.clone());
        }
        node.label
            .iter()
            .find_map(|(&c, d)| node.label.get(&self.pool.neg(c)).map(|e| union(d, e)))
    }

    fn step(&mut self, state: &mut State) -> Step {
        let live: Vec<usize> = (0..state.nodes.len())
            .filter(|&i| state.nodes[i].alive)
            .collect();
        if let Some(d) = live.iter().find_map(|&x| self.clash(&state.nodes[x])) {
            return Step::Clash(d);
        }
        // nominal merge
        for &x in &live {
            let noms: Vec<(NodeId, Deps)> = state.nodes[x]
                .label
                .iter()
                .filter_map(|(&c, d)| match self.pool.items[c as usize] {
                    C::Nom(o) => Some((o, d.clone())),
                    _ => None,
                })
                .collect();
            for (o, d) in noms {
                let target = state.nominal_node[&o];
                if target == x {
                    continue;
                }
                if state.nodes[x].nominal.is_some() {
                    return Step::Clash(d);
                }
                if let Some(apart) = state.distinct(x, target) {
                    return Step::Clash(union(&d, apart));
                }
                self.apply(
                    state,
                    Action::Merge {
                        from: x,
                        into: target,
                        deps: d,
                    },
                );
                return Step::Progress;
            }
        }
        let block = state.blocking();
        let active: Vec<usize> = live
            .iter()
            .copied()
            .filter(|&x| block[x] != Block::Indirect)
            .collect();

        // conjunctions and absorbed inclusions
        let mut progressed = false;
        for &x in &active {
            let mut adds = Vec::new();
            for (&c, d) in &state.nodes[x].label {
                let implied: &[Cid] = match &self.pool.items[c as usize] {
                    C::And(xs) => xs,
                    _ => self.unfold.get(&c).map(Vec::as_slice).unwrap_or(&[]),
                };
                adds.extend(
                    implied
                        .iter()
                        .filter(|y| !state.nodes[x].label.contains_key(y))
                        .map(|y| (*y, d.clone())),
                );
            }
            for (c, d) in adds {
                if let std::collections::btree_map::Entry::Vacant(e) = state.nodes[x].label.entry(c)
                {
                    e.insert(d);
                    progressed = true;
                    self.stats.rule_applications += 1;
                }
            }
        }
        if progressed {
            return Step::Progress;
        }

        for &x in &active {
            let label = &state.nodes[x].label;
            for (&c, d) in label {
                let C::Or(xs) = &self.pool.items[c as usize] else {
                    continue;
                };
                if xs.iter().any(|y| label.contains_key(y)) {
                    continue;
                }
                let mut why = d.clone();
                let mut open = Vec::new();
                for &y in xs {
                    match label.get(&self.pool.neg(y)) {
                        Some(e) => why.extend(e.iter().copied()),
                        None => open.push(y),
                    }
                }
                return match open.len() {
                    0 => Step::Clash(why),
                    1 => {
                        self.apply(state, Action::Add(x, open[0], why));
                        Step::Progress
                    }
                    _ => Step::Branch(
                        open.into_iter()
                            .map(|y| Action::Add(x, y, why.clone()))
                            .collect(),
                    ),
                };
            }
        }

        for &x in &active {
            for (&c, d) in &state.nodes[x].label {
                let C::AtMost(_, p, f) = self.pool.items[c as usize] else {
                    continue;
                };
                if f == TOP {
                    continue;
                }
                let nf = self.pool.neg(f);
                for (y, e) in state.successors(x, p) {
                    let ly = &state.nodes[y].label;
                    if !ly.contains_key(&f) && !ly.contains_key(&nf) {
                        let why = union(d, e);
                        return Step::Branch(vec![
                            Action::Add(y, f, why.clone()),
                            Action::Add(y, nf, why),
                        ]);
                    }
                }
            }
        }

        for &x in &active {
            for (&c, d) in &state.nodes[x].label {
                let C::AtMost(n, p, f) = self.pool.items[c as usize] else {
                    continue;
                };
                let mut why = d.clone();
                let mut fillers = Vec::new();
                for (y, e) in state.successors(x, p) {
                    if let Some(fd) = state.nodes[y].label.get(&f) {
                        why.extend(e.iter().chain(fd).copied());
                        fillers.push(y);
                    }
                }
                if fillers.len() as u32 <= n {
                    continue;
                }
                let mut merges = Vec::new();
                for (i, &a) in fillers.iter().enumerate() {
                    for &b in &fillers[i + 1..] {
                        if let Some(apart) = state.distinct(a, b) {
                            why.extend(apart.iter().copied());
                            continue;
                        }
                        let (from, into) = match (state.nodes[a].nominal, state.nodes[b].nominal) {
                            (Some(_), _) => (b, a),
                            (_, Some(_)) => (a, b),
                            _ => (b, a),
                        };
                        merges.push((from, into));
                    }
                }
                let mut merges: Vec<Action> = merges
                    .into_iter()
                    .map(|(from, into)| Action::Merge {
                        from,
                        into,
                        deps: why.clone(),
                    })
                    .collect();
                return match merges.len() {
                    0 => Step::Clash(why),
                    1 => {
                        self.apply(state, merges.pop().unwrap());
                        Step::Progress
                    }
                    _ => Step::Branch(merges),
                };
            }
        }

        for &x in &active {
            if block[x] != Block::No {
                continue;
            }
            let label: Vec<(Cid, Deps)> = state.nodes[x]
                .label
                .iter()
                .map(|(c, d)| (*c, d.clone()))
                .collect();
            for (c, d) in label {
                let C::AtLeast(n, p, f) = self.pool.items[c as usize] else {
                    continue;
                };
                let fillers: Vec<usize> = state
                    .successors(x, p)
                    .filter(|(y, _)| state.nodes[*y].label.contains_key(&f))
                    .map(|(y, _)| y)
                    .collect();
                if has_distinct_clique(state, &fillers, n as usize) {
                    continue;
                }
                let mut fresh = Vec::new();
                for _ in 0..n {
                    let y = self.fresh_node(state, Some(x), None, &d);
                    state.nodes[y].label.insert(f, d.clone());
                    state.link(x, y, p, d.clone());
                    fresh.push(y);
                }
                for (i, &a) in fresh.iter().enumerate() {
                    for &b in &fresh[i + 1..] {
                        state.distinct.insert((a, b), d.clone());
                    }
                }
                self.stats.rule_applications += 1;
                return Step::Progress;
            }
        }
        Step::Done
    }

    /// Unravels a complete clash-free graph into a finite interpretation.
    /// Directly blocked nodes stay as elements and borrow their blocker's
    /// outgoing edges; nodes below them are dropped.
    fn extract(&self, state: &State, kb: &KnowledgeBase) -> Result<Interpretation, ReasonerError> {
        let block = state.blocking();
        let included: Vec<usize> = (0..state.nodes.len())
            .filter(|&x| state.nodes[x].alive && block[x] != Block::Indirect)
            .collect();
        let element: BTreeMap<usize, Element> = included
            .iter()
            .enumerate()
            .map(|(i, &x)| (x, Element(i as u32)))
            .collect();
        let sig = kb.signature();
        let mut concepts: BTreeMap<ConceptName, BTreeSet<Element>> =
            sig.concepts.iter().map(|c| (*c, BTreeSet::new())).collect();
        let mut roles: BTreeMap<PropertyId, BTreeSet<(Element, Element)>> = sig
            .properties
            .iter()
            .map(|p| (*p, BTreeSet::new()))
            .collect();
        for &x in &included {
            for &c in state.nodes[x].label.keys() {
                if let C::Atom(a) = self.pool.items[c as usize] {
                    concepts.entry(a).or_default().insert(element[&x]);
                }
            }
            let source = match block[x] {
                Block::Direct(b) => b,
                _ => x,
            };
            for (y, ps) in &state.nodes[source].out {
                let Some(&ey) = element.get(y) else { continue };
                for p in ps.keys() {
                    roles.entry(*p).or_default().insert((element[&x], ey));
                }
            }
        }
        let objects = state
            .nominal_node
            .iter()
            .map(|(o, n)| (*o, element[n]))
            .collect();
        Ok(Interpretation::new(
            included.len() as u32,
            objects,
            concepts,
            roles,
        )?)
    }
}

fn has_distinct_clique(state: &State, candidates: &[usize], n: usize) -> bool {
    fn extend(state: &State, chosen: &mut Vec<usize>, rest: &[usize], n: usize) -> bool {
        if chosen.len() >= n {
            return true;
        }
        for (i, &y) in rest.iter().enumerate() {
            if chosen.len() + rest.len() - i < n {
                return false;
            }
            if chosen.iter().all(|&z| state.distinct(y, z).is_some()) {
                chosen.push(y);
                if extend(state, chosen, &rest[i + 1..], n) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }
    candidates.len() >= n && extend(state, &mut Vec::new(), candidates, n)
}
