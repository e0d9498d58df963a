use std::collections::{BTreeSet, HashMap};
use std::fmt;

use crate::order::{Element, Poset};

use super::design::Dpi;
use super::function::FunctionBlock;
use super::DpiError;

/// What sits at a diagram node.
#[derive(Clone, Debug, PartialEq)]
pub enum Block {
    Catalog(Dpi),
    Function(FunctionBlock),
}

impl Block {
    pub fn fun_ports(&self) -> &[String] {
        match self {
            Block::Catalog(d) => d.fun_ports(),
            Block::Function(g) => g.fun_ports(),
        }
    }

    pub fn res_ports(&self) -> &[String] {
        match self {
            Block::Catalog(d) => d.res_ports(),
            Block::Function(g) => g.res_ports(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Node {
    pub name: String,
    pub block: Block,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PortRef {
    pub node: String,
    pub port: String,
}

impl PortRef {
    pub fn new(node: impl Into<String>, port: impl Into<String>) -> Self {
        Self {
            node: node.into(),
            port: port.into(),
        }
    }

    /// Parses `node.port`.
    pub fn parse(s: &str) -> Result<Self, DpiError> {
        let s = s.trim();
        match s.split_once('.') {
            Some((n, p)) if !n.is_empty() && !p.is_empty() => Ok(PortRef::new(n, p)),
            _ => Err(DpiError::Syntax(format!("expected `node.port`, found `{s}`"))),
        }
    }
}

impl fmt::Display for PortRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}", self.node, self.port)
    }
}

/// Co-design constraint: what `from` requires is provided by `to`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Edge {
    pub from: PortRef,
    pub to: PortRef,
}

impl Edge {
    /// Parses `a.res -> b.fun`.
    pub fn parse(s: &str) -> Result<Self, DpiError> {
        let (a, b) = s
            .split_once("->")
            .ok_or_else(|| DpiError::Syntax(format!("expected `a.port -> b.port`, found `{s}`")))?;
        Ok(Edge {
            from: PortRef::parse(a)?,
            to: PortRef::parse(b)?,
        })
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}", self.from, self.to)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Src {
    Exposed(usize),
    Edge(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Dst {
    Exposed(usize),
    Edge(usize),
}

#[derive(Clone, Debug)]
pub(crate) struct CatalogTable {
    pub labels: Vec<String>,
    pub prov: Vec<Vec<f64>>,
    pub req: Vec<Vec<f64>>,
}

#[derive(Clone, Debug)]
pub(crate) enum CKind {
    Catalog(CatalogTable),
    Function(FunctionBlock),
}

#[derive(Clone, Debug)]
pub(crate) struct CNode {
    pub kind: CKind,
    pub fun_src: Vec<Src>,
    pub res_dst: Vec<Dst>,
}

/// Catalog implementation chosen at every catalog node.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Witness {
    pub assignment: Vec<(String, String)>,
}

impl Witness {
    pub fn label_of(&self, node: &str) -> Option<&str> {
        self.assignment.iter().find(|(n, _)| n == node).map(|(_, l)| l.as_str())
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, (n, l)) in self.assignment.iter().enumerate() {
            if k > 0 {
                write!(f, " ")?;
            }
            write!(f, "{n}={l}")?;
        }
        Ok(())
    }
}

/// Incremental construction of a [`CoDesignDiagram`].
#[derive(Clone, Debug, Default)]
pub struct DiagramBuilder {
    nodes: Vec<Node>,
    edges: Vec<String>,
    exposed_fun: Vec<String>,
    exposed_res: Vec<String>,
    loops: Vec<String>,
}

impl DiagramBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn node(mut self, name: impl Into<String>, block: Block) -> Self {
        self.nodes.push(Node {
            name: name.into(),
            block,
        });
        self
    }

    pub fn catalog(self, name: impl Into<String>, dpi: Dpi) -> Self {
        self.node(name, Block::Catalog(dpi))
    }

    pub fn function(self, name: impl Into<String>, f: FunctionBlock) -> Self {
        self.node(name, Block::Function(f))
    }

    /// `a.res -> b.fun`.
    pub fn connect(mut self, edge: impl Into<String>) -> Self {
        self.edges.push(edge.into());
        self
    }

    /// Like [`connect`](Self::connect), and marks the edge as a feedback edge.
    pub fn feedback(mut self, edge: impl Into<String>) -> Self {
        let e = edge.into();
        self.edges.push(e.clone());
        self.loops.push(e);
        self
    }

    pub fn expose_fun(mut self, port: impl Into<String>) -> Self {
        self.exposed_fun.push(port.into());
        self
    }

    pub fn expose_res(mut self, port: impl Into<String>) -> Self {
        self.exposed_res.push(port.into());
        self
    }

    /// Drops a node with its edges and exposed ports; the ports it was
    /// wired to are left dangling.
    pub fn remove_node(mut self, name: &str) -> Self {
        self.nodes.retain(|n| n.name != name);
        let touches = |s: &String| {
            s.split("->")
                .any(|end| end.trim().split('.').next().map(str::trim) == Some(name))
        };
        self.edges.retain(|e| !touches(e));
        self.loops.retain(|e| !touches(e));
        self.exposed_fun.retain(|p| !touches(p));
        self.exposed_res.retain(|p| !touches(p));
        self
    }

    pub fn build(self) -> Result<CoDesignDiagram, DpiError> {
        let edges = self
            .edges
            .iter()
            .map(|s| Edge::parse(s))
            .collect::<Result<Vec<_>, _>>()?;
        let loops = self
            .loops
            .iter()
            .map(|s| Edge::parse(s))
            .collect::<Result<Vec<_>, _>>()?;
        let exposed_fun = self
            .exposed_fun
            .iter()
            .map(|s| PortRef::parse(s))
            .collect::<Result<Vec<_>, _>>()?;
        let exposed_res = self
            .exposed_res
            .iter()
            .map(|s| PortRef::parse(s))
            .collect::<Result<Vec<_>, _>>()?;
        CoDesignDiagram::new(self.nodes, edges, exposed_fun, exposed_res, loops)
    }
}

/// Nodes wired by co-design constraints, with exposed ports and feedback edges.
///
/// All wired ports carry extended nonnegative reals.
#[derive(Clone, Debug)]
pub struct CoDesignDiagram {
    nodes: Vec<Node>,
    edges: Vec<Edge>,
    exposed_fun: Vec<PortRef>,
    exposed_res: Vec<PortRef>,
    is_loop: Vec<bool>,
    pub(crate) compiled: Vec<CNode>,
    /// Evaluation order once feedback edges are cut.
    pub(crate) order: Vec<usize>,
    /// Order of function nodes when every catalog output is known.
    pub(crate) function_order: Vec<usize>,
    /// Source `(node, res port)` of every edge.
    pub(crate) edge_src: Vec<(usize, usize)>,
}

fn real_ports(p: &Poset, count: usize) -> bool {
    match p {
        Poset::Reals => count == 1,
        Poset::Product(ps) => ps.len() == count && ps.iter().all(|q| *q == Poset::Reals),
        _ => false,
    }
}

impl CoDesignDiagram {
    pub fn new(
        nodes: Vec<Node>,
        edges: Vec<Edge>,
        exposed_fun: Vec<PortRef>,
        exposed_res: Vec<PortRef>,
        loops: Vec<Edge>,
    ) -> Result<Self, DpiError> {
        let mut index: HashMap<&str, usize> = HashMap::new();
        for (k, n) in nodes.iter().enumerate() {
            if n.name.is_empty() || n.name.contains('.') || n.name.contains(char::is_whitespace) {
                return Err(DpiError::Syntax(format!("invalid node name `{}`", n.name)));
            }
            if index.insert(n.name.as_str(), k).is_some() {
                return Err(DpiError::DuplicateNode(n.name.clone()));
            }
            for side in [n.block.fun_ports(), n.block.res_ports()] {
                let set: BTreeSet<&String> = side.iter().collect();
                if set.len() != side.len() {
                    return Err(DpiError::PortMismatch(format!(
                        "node `{}` has duplicate port names",
                        n.name
                    )));
                }
            }
            if let Block::Catalog(d) = &n.block {
                if !real_ports(d.functionality_poset(), d.fun_ports().len())
                    || !real_ports(d.resource_poset(), d.res_ports().len())
                {
                    return Err(DpiError::NonRealPort(n.name.clone()));
                }
            }
        }
        let locate = |p: &PortRef, fun_side: bool, ctx: &str| -> Result<(usize, usize), DpiError> {
            let &k = index
                .get(p.node.as_str())
                .ok_or_else(|| DpiError::UnknownNode(p.node.clone(), ctx.to_string()))?;
            let ports = if fun_side {
                nodes[k].block.fun_ports()
            } else {
                nodes[k].block.res_ports()
            };
            let j = ports
                .iter()
                .position(|q| *q == p.port)
                .ok_or_else(|| DpiError::UnknownPort {
                    port: p.to_string(),
                    side: if fun_side { "functionality" } else { "resource" },
                    context: ctx.to_string(),
                })?;
            Ok((k, j))
        };

        let mut fun_src: Vec<Vec<Vec<Src>>> = nodes
            .iter()
            .map(|n| vec![Vec::new(); n.block.fun_ports().len()])
            .collect();
        let mut res_dst: Vec<Vec<Vec<Dst>>> = nodes
            .iter()
            .map(|n| vec![Vec::new(); n.block.res_ports().len()])
            .collect();
        let mut edge_src = Vec::new();
        let mut edge_dst = Vec::new();
        for (e, edge) in edges.iter().enumerate() {
            let ctx = format!("edge `{edge}`");
            let (a, i) = locate(&edge.from, false, &ctx)?;
            let (b, j) = locate(&edge.to, true, &ctx)?;
            res_dst[a][i].push(Dst::Edge(e));
            fun_src[b][j].push(Src::Edge(e));
            edge_src.push((a, i));
            edge_dst.push((b, j));
        }
        for (k, p) in exposed_fun.iter().enumerate() {
            let (a, i) = locate(p, true, "exposed functionalities")?;
            fun_src[a][i].push(Src::Exposed(k));
        }
        for (k, p) in exposed_res.iter().enumerate() {
            let (a, i) = locate(p, false, "exposed resources")?;
            res_dst[a][i].push(Dst::Exposed(k));
        }
        for (k, n) in nodes.iter().enumerate() {
            for (j, srcs) in fun_src[k].iter().enumerate() {
                let port = PortRef::new(&n.name, &n.block.fun_ports()[j]);
                match srcs.len() {
                    1 => {}
                    0 => return Err(DpiError::Dangling(port.to_string(), "functionality")),
                    _ => return Err(DpiError::MultiplyConnected(port.to_string(), "functionality")),
                }
            }
            for (j, dsts) in res_dst[k].iter().enumerate() {
                let port = PortRef::new(&n.name, &n.block.res_ports()[j]);
                match dsts.len() {
                    1 => {}
                    0 => return Err(DpiError::Dangling(port.to_string(), "resource")),
                    _ => return Err(DpiError::MultiplyConnected(port.to_string(), "resource")),
                }
            }
        }

        let mut is_loop = vec![false; edges.len()];
        for l in &loops {
            let e = edges
                .iter()
                .position(|x| x == l)
                .ok_or_else(|| DpiError::Syntax(format!("feedback edge `{l}` is not an edge of the diagram")))?;
            is_loop[e] = true;
        }
        let n = nodes.len();
        let dep = |cut: &[bool]| -> Vec<(usize, usize)> {
            (0..edges.len())
                .filter(|&e| !cut[e])
                .map(|e| (edge_src[e].0, edge_dst[e].0))
                .collect()
        };
        if loops.is_empty() {
            if topo_order(n, &dep(&is_loop)).is_none() {
                is_loop = minimum_feedback_set(n, &edge_src, &edge_dst)?;
            }
        } else if topo_order(n, &dep(&is_loop)).is_none() {
            let cyc = find_cycle(n, &dep(&is_loop)).unwrap_or_default();
            let names: Vec<&str> = cyc.iter().map(|&k| nodes[k].name.as_str()).collect();
            return Err(DpiError::NotAcyclic(names.join(" -> ")));
        }
        let order = topo_order(n, &dep(&is_loop)).expect("acyclic after cutting feedback edges");

        let is_fn = |k: usize| matches!(nodes[k].block, Block::Function(_));
        let fn_edges: Vec<(usize, usize)> = (0..edges.len())
            .map(|e| (edge_src[e].0, edge_dst[e].0))
            .filter(|&(a, b)| is_fn(a) && is_fn(b))
            .collect();
        let function_order: Vec<usize> = match topo_order(n, &fn_edges) {
            Some(o) => o.into_iter().filter(|&k| is_fn(k)).collect(),
            None => {
                let cyc = find_cycle(n, &fn_edges).unwrap_or_default();
                let names: Vec<&str> = cyc.iter().map(|&k| nodes[k].name.as_str()).collect();
                return Err(DpiError::FunctionCycle(names.join(" -> ")));
            }
        };

        let compiled = nodes
            .iter()
            .enumerate()
            .map(|(k, node)| {
                let kind = match &node.block {
                    Block::Catalog(d) => CKind::Catalog(table_of(d)),
                    Block::Function(g) => CKind::Function(g.clone()),
                };
                CNode {
                    kind,
                    fun_src: fun_src[k].iter().map(|v| v[0]).collect(),
                    res_dst: res_dst[k].iter().map(|v| v[0]).collect(),
                }
            })
            .collect();

        Ok(Self {
            nodes,
            edges,
            exposed_fun,
            exposed_res,
            is_loop,
            compiled,
            order,
            function_order,
            edge_src,
        })
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn exposed_fun(&self) -> &[PortRef] {
        &self.exposed_fun
    }

    pub fn exposed_res(&self) -> &[PortRef] {
        &self.exposed_res
    }

    /// Feedback edges cut by the solver.
    pub fn loop_edges(&self) -> Vec<&Edge> {
        self.edges
            .iter()
            .zip(&self.is_loop)
            .filter_map(|(e, &l)| l.then_some(e))
            .collect()
    }

    pub fn loop_count(&self) -> usize {
        self.is_loop.iter().filter(|&&l| l).count()
    }

    pub(crate) fn loop_indices(&self) -> Vec<usize> {
        (0..self.edges.len()).filter(|&e| self.is_loop[e]).collect()
    }

    pub fn is_loop_edge(&self, e: usize) -> bool {
        self.is_loop[e]
    }

    pub fn functionality_poset(&self) -> Poset {
        Poset::reals_product(self.exposed_fun.len())
    }

    pub fn resource_poset(&self) -> Poset {
        Poset::reals_product(self.exposed_res.len())
    }

    pub fn node(&self, name: &str) -> Option<&Node> {
        self.nodes.iter().find(|n| n.name == name)
    }

    pub(crate) fn catalog_nodes(&self) -> Vec<usize> {
        (0..self.nodes.len())
            .filter(|&k| matches!(self.compiled[k].kind, CKind::Catalog(_)))
            .collect()
    }

    /// Flattens and validates an exposed-functionality point.
    pub(crate) fn fun_values(&self, f: &Element) -> Result<Vec<f64>, DpiError> {
        self.functionality_poset().check(f)?;
        Ok(f.to_reals().unwrap_or_default())
    }

    /// Builds a witness from per-node implementation indices.
    pub(crate) fn witness_of(&self, choice: &[u32]) -> Witness {
        let assignment = self
            .catalog_nodes()
            .into_iter()
            .map(|k| {
                let label = match &self.compiled[k].kind {
                    CKind::Catalog(t) => t.labels[choice[k] as usize].clone(),
                    CKind::Function(_) => unreachable!(),
                };
                (self.nodes[k].name.clone(), label)
            })
            .collect();
        Witness { assignment }
    }

    /// Per-node implementation indices for a witness.
    pub(crate) fn choice_of(&self, w: &Witness) -> Result<Vec<u32>, DpiError> {
        let mut choice = vec![u32::MAX; self.nodes.len()];
        for k in self.catalog_nodes() {
            let name = &self.nodes[k].name;
            let label = w
                .label_of(name)
                .ok_or_else(|| DpiError::Syntax(format!("witness has no implementation for node `{name}`")))?;
            let CKind::Catalog(t) = &self.compiled[k].kind else {
                unreachable!()
            };
            let i = t
                .labels
                .iter()
                .position(|l| l == label)
                .ok_or_else(|| DpiError::Syntax(format!("node `{name}` has no implementation `{label}`")))?;
            choice[k] = i as u32;
        }
        Ok(choice)
    }

    /// Values of every resource port for a full assignment, in one pass.
    pub(crate) fn port_values(&self, f: &[f64], choice: &[u32]) -> Vec<Vec<f64>> {
        let mut out: Vec<Vec<f64>> = self
            .compiled
            .iter()
            .enumerate()
            .map(|(k, c)| match &c.kind {
                CKind::Catalog(t) => t.req[choice[k] as usize].clone(),
                CKind::Function(_) => Vec::new(),
            })
            .collect();
        for &k in &self.function_order {
            let CKind::Function(g) = &self.compiled[k].kind else {
                unreachable!()
            };
            let x: Vec<f64> = self.compiled[k]
                .fun_src
                .iter()
                .map(|s| match *s {
                    Src::Exposed(i) => f[i],
                    Src::Edge(e) => {
                        let (a, j) = self.edge_src[e];
                        out[a][j]
                    }
                })
                .collect();
            out[k] = g.eval(&x);
        }
        out
    }

    /// Re-evaluates a full assignment bottom-up.
    ///
    /// Returns the exposed resources, or the list of violated constraints.
    pub fn check_assignment(&self, f: &Element, w: &Witness) -> Result<Result<Vec<f64>, Vec<String>>, DpiError> {
        let fv = self.fun_values(f)?;
        let choice = self.choice_of(w)?;
        let vals = self.port_values(&fv, &choice);
        let mut bad = Vec::new();
        for (k, c) in self.compiled.iter().enumerate() {
            if let CKind::Catalog(t) = &c.kind {
                let prov = &t.prov[choice[k] as usize];
                for (j, s) in c.fun_src.iter().enumerate() {
                    let (need, what) = match *s {
                        Src::Exposed(i) => (fv[i], format!("exposed {}", self.exposed_fun[i])),
                        Src::Edge(e) => {
                            let (a, p) = self.edge_src[e];
                            (vals[a][p], format!("edge `{}`", self.edges[e]))
                        }
                    };
                    if !(need <= prov[j]) {
                        bad.push(format!(
                            "{what}: required {need} exceeds provided {} at {}.{}",
                            prov[j],
                            self.nodes[k].name,
                            t_port(&self.nodes[k], j)
                        ));
                    }
                }
            }
        }
        if !bad.is_empty() {
            return Ok(Err(bad));
        }
        Ok(Ok(self.exposed_values(&vals)))
    }

    pub(crate) fn exposed_values(&self, vals: &[Vec<f64>]) -> Vec<f64> {
        let mut r = vec![0.0; self.exposed_res.len()];
        for (k, c) in self.compiled.iter().enumerate() {
            for (j, d) in c.res_dst.iter().enumerate() {
                if let Dst::Exposed(i) = *d {
                    r[i] = vals[k][j];
                }
            }
        }
        r
    }

    /// Longest chain in the product of the loop-value candidate sets.
    ///
    /// Candidates of a feedback edge are bottom plus the values its source
    /// port can produce: the grid points (and `+inf`) of a gridded
    /// function, or the distinct column values of a catalog. `None` when
    /// some source is an ungridded function.
    pub fn loop_chain_length(&self) -> Option<usize> {
        let mut h = 1usize;
        for e in self.loop_indices() {
            let (a, j) = self.edge_src[e];
            let mut vals: Vec<f64> = match &self.compiled[a].kind {
                CKind::Function(g) => {
                    let grid = g.grid()?;
                    let mut v = grid.points().to_vec();
                    v.push(f64::INFINITY);
                    v
                }
                CKind::Catalog(t) => t.req.iter().map(|r| r[j]).collect(),
            };
            vals.push(0.0);
            vals.sort_by(f64::total_cmp);
            vals.dedup();
            h += vals.len() - 1;
        }
        Some(h)
    }
}

fn t_port(node: &Node, j: usize) -> &str {
    &node.block.fun_ports()[j]
}

fn table_of(d: &Dpi) -> CatalogTable {
    let mut rows: Vec<(String, Vec<f64>, Vec<f64>)> = d
        .implementations()
        .iter()
        .map(|i| {
            (
                i.label.clone(),
                i.prov.to_reals().unwrap_or_default(),
                i.req.to_reals().unwrap_or_default(),
            )
        })
        .collect();
    rows.sort_by(|a, b| a.0.cmp(&b.0));
    CatalogTable {
        labels: rows.iter().map(|r| r.0.clone()).collect(),
        prov: rows.iter().map(|r| r.1.clone()).collect(),
        req: rows.into_iter().map(|r| r.2).collect(),
    }
}

/// Kahn's algorithm, smallest index first.
pub(crate) fn topo_order(n: usize, edges: &[(usize, usize)]) -> Option<Vec<usize>> {
    let mut indeg = vec![0usize; n];
    let mut succ = vec![Vec::new(); n];
    for &(a, b) in edges {
        indeg[b] += 1;
        succ[a].push(b);
    }
    let mut ready: BTreeSet<usize> = (0..n).filter(|&k| indeg[k] == 0).collect();
    let mut out = Vec::with_capacity(n);
    while let Some(k) = ready.pop_first() {
        out.push(k);
        for &b in &succ[k] {
            indeg[b] -= 1;
            if indeg[b] == 0 {
                ready.insert(b);
            }
        }
    }
    (out.len() == n).then_some(out)
}

fn find_cycle(n: usize, edges: &[(usize, usize)]) -> Option<Vec<usize>> {
    let mut succ = vec![Vec::new(); n];
    for &(a, b) in edges {
        succ[a].push(b);
    }
    // 0 unvisited, 1 on stack, 2 done
    let mut state = vec![0u8; n];
    let mut stack: Vec<usize> = Vec::new();
    fn dfs(v: usize, succ: &[Vec<usize>], state: &mut [u8], stack: &mut Vec<usize>) -> Option<Vec<usize>> {
        state[v] = 1;
        stack.push(v);
        for &w in &succ[v] {
            if state[w] == 1 {
                let pos = stack.iter().position(|&x| x == w).unwrap();
                let mut cyc = stack[pos..].to_vec();
                cyc.push(w);
                return Some(cyc);
            }
            if state[w] == 0 {
                if let Some(c) = dfs(w, succ, state, stack) {
                    return Some(c);
                }
            }
        }
        stack.pop();
        state[v] = 2;
        None
    }
    for v in 0..n {
        if state[v] == 0 {
            if let Some(c) = dfs(v, &succ, &mut state, &mut stack) {
                return Some(c);
            }
        }
    }
    None
}

/// Smallest set of edges whose removal leaves the graph acyclic.
///
/// Exhaustive over subsets of increasing size; the first set in
/// lexicographic edge order wins.
fn minimum_feedback_set(
    n: usize,
    edge_src: &[(usize, usize)],
    edge_dst: &[(usize, usize)],
) -> Result<Vec<bool>, DpiError> {
    let m = edge_src.len();
    let all: Vec<(usize, usize)> = (0..m).map(|e| (edge_src[e].0, edge_dst[e].0)).collect();
    for size in 1..=m.min(6) {
        let mut pick: Vec<usize> = (0..size).collect();
        loop {
            let kept: Vec<(usize, usize)> = (0..m).filter(|e| !pick.contains(e)).map(|e| all[e]).collect();
            if topo_order(n, &kept).is_some() {
                let mut cut = vec![false; m];
                for &e in &pick {
                    cut[e] = true;
                }
                return Ok(cut);
            }
            if !next_combination(&mut pick, m) {
                break;
            }
        }
    }
    Err(DpiError::NotAcyclic(
        "no feedback edges designated and no small feedback set exists".into(),
    ))
}

fn next_combination(pick: &mut [usize], m: usize) -> bool {
    let k = pick.len();
    for i in (0..k).rev() {
        if pick[i] < m - k + i {
            pick[i] += 1;
            for j in (i + 1)..k {
                pick[j] = pick[j - 1] + 1;
            }
            return true;
        }
    }
    false
}
