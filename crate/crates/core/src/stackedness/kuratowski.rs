use std::collections::{HashSet, VecDeque};

use serde::Serialize;

use crate::complex::{Complex, VertexId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Pattern {
    K5,
    K33,
}

/// A subgraph homeomorphic to K5 or K3,3.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KuratowskiWitness {
    pub pattern: Pattern,
    pub branch: Vec<VertexId>,
    /// The two colour classes of the branch vertices, for K3,3.
    pub sides: Option<[Vec<VertexId>; 2]>,
    /// One path per subdivided edge, between branch vertices.
    pub paths: Vec<Vec<VertexId>>,
}

type Edge = (usize, usize);

pub fn is_planar(g: &Complex) -> bool {
    let graph = g.graph();
    planar(graph.len(), &graph.edges())
}

/// Find a Kuratowski subdivision in the 1-skeleton of `g`, if it is not
/// planar. Edges are discarded one at a time, in lexicographic order,
/// whenever the rest stays nonplanar; what remains is edge-minimal.
pub fn find_kuratowski_subdivision(g: &Complex) -> Option<KuratowskiWitness> {
    let graph = g.graph();
    let n = graph.len();
    let mut edges = graph.edges();
    if planar(n, &edges) {
        return None;
    }
    let mut i = 0;
    while i < edges.len() {
        let e = edges.remove(i);
        if planar(n, &edges) {
            edges.insert(i, e);
            i += 1;
        }
    }

    let mut adj = vec![Vec::new(); n];
    for &(a, b) in &edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    let branch: Vec<usize> = (0..n).filter(|&v| adj[v].len() >= 3).collect();
    let pattern = match (branch.len(), adj[branch[0]].len()) {
        (5, 4) => Pattern::K5,
        (6, 3) => Pattern::K33,
        (b, d) => {
            unreachable!("edge-minimal nonplanar graph with {b} branch vertices of degree {d}")
        }
    };
    let mut paths = Vec::new();
    for &b in &branch {
        for &first in &adj[b] {
            let mut path = vec![b, first];
            let (mut prev, mut cur) = (b, first);
            while adj[cur].len() == 2 {
                let next = if adj[cur][0] == prev { adj[cur][1] } else { adj[cur][0] };
                path.push(next);
                (prev, cur) = (cur, next);
            }
            if b < cur {
                paths.push(path);
            }
        }
    }
    paths.sort();
    let label = |v: &usize| graph.label(*v);
    let sides = (pattern == Pattern::K33).then(|| {
        let first = branch[0];
        let far: HashSet<usize> = paths
            .iter()
            .filter_map(|p| {
                let (a, b) = (p[0], p[p.len() - 1]);
                (a == first).then_some(b).or((b == first).then_some(a))
            })
            .collect();
        let (other, same): (Vec<usize>, Vec<usize>) = branch.iter().partition(|v| far.contains(v));
        [same.iter().map(label).collect(), other.iter().map(label).collect()]
    });
    Some(KuratowskiWitness {
        pattern,
        branch: branch.iter().map(label).collect(),
        sides,
        paths: paths.iter().map(|p| p.iter().map(label).collect()).collect(),
    })
}

/// Planarity of the graph on `0..n` with the given edges, block by block.
fn planar(n: usize, edges: &[Edge]) -> bool {
    blocks(n, edges).iter().all(|b| block_planar(b))
}

/// Biconnected components as edge lists (Hopcroft-Tarjan).
fn blocks(n: usize, edges: &[Edge]) -> Vec<Vec<Edge>> {
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    struct St<'a> {
        adj: &'a [Vec<usize>],
        disc: Vec<usize>,
        low: Vec<usize>,
        time: usize,
        stack: Vec<Edge>,
        out: Vec<Vec<Edge>>,
    }
    fn dfs(s: &mut St, u: usize, parent: usize) {
        s.time += 1;
        s.disc[u] = s.time;
        s.low[u] = s.time;
        for i in 0..s.adj[u].len() {
            let v = s.adj[u][i];
            if s.disc[v] == 0 {
                s.stack.push((u, v));
                dfs(s, v, u);
                s.low[u] = s.low[u].min(s.low[v]);
                if s.low[v] >= s.disc[u] {
                    let mut block = Vec::new();
                    while let Some(e) = s.stack.pop() {
                        block.push(e);
                        if e == (u, v) {
                            break;
                        }
                    }
                    s.out.push(block);
                }
            } else if v != parent && s.disc[v] < s.disc[u] {
                s.stack.push((u, v));
                s.low[u] = s.low[u].min(s.disc[v]);
            }
        }
    }
    let mut st = St { adj: &adj, disc: vec![0; n], low: vec![0; n], time: 0, stack: Vec::new(), out: Vec::new() };
    for u in 0..n {
        if st.disc[u] == 0 {
            dfs(&mut st, u, usize::MAX);
        }
    }
    st.out
}

/// Demoucron-Malgrange-Pertuiset embedding of a biconnected block.
fn block_planar(block: &[Edge]) -> bool {
    if block.len() < 9 {
        return true;
    }
    let mut verts: Vec<usize> = block.iter().flat_map(|&(a, b)| [a, b]).collect();
    verts.sort_unstable();
    verts.dedup();
    let n = verts.len();
    if block.len() > 3 * n - 6 {
        return false;
    }
    let local = |v: usize| verts.binary_search(&v).expect("block vertex");
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in block {
        let (a, b) = (local(a), local(b));
        adj[a].push(b);
        adj[b].push(a);
    }
    let key = |a: usize, b: usize| (a.min(b), a.max(b));

    // initial cycle through the edge 0 - adj[0][0]
    let (u, v) = (0, adj[0][0]);
    let mut prev = vec![usize::MAX; n];
    let mut queue = VecDeque::from([v]);
    prev[v] = v;
    while let Some(x) = queue.pop_front() {
        for &y in &adj[x] {
            if prev[y] == usize::MAX && !(x == v && y == u) {
                prev[y] = x;
                queue.push_back(y);
            }
        }
    }
    let mut cycle = vec![u];
    let mut x = u;
    while x != v {
        x = prev[x];
        cycle.push(x);
    }
    let mut on = vec![false; n];
    let mut done: HashSet<Edge> = HashSet::new();
    for i in 0..cycle.len() {
        on[cycle[i]] = true;
        done.insert(key(cycle[i], cycle[(i + 1) % cycle.len()]));
    }
    let mut faces = vec![cycle.clone(), cycle];

    while done.len() < block.len() {
        let mut fragments: Vec<(Vec<usize>, Vec<usize>)> = Vec::new(); // (attachments, path)
        for a in 0..n {
            for &b in &adj[a] {
                if a < b && on[a] && on[b] && !done.contains(&key(a, b)) {
                    fragments.push((vec![a, b], vec![a, b]));
                }
            }
        }
        let mut seen = vec![false; n];
        for s in 0..n {
            if on[s] || seen[s] {
                continue;
            }
            let mut comp = vec![s];
            seen[s] = true;
            let mut k = 0;
            while k < comp.len() {
                for &y in &adj[comp[k]] {
                    if !on[y] && !seen[y] {
                        seen[y] = true;
                        comp.push(y);
                    }
                }
                k += 1;
            }
            let mut att: Vec<usize> = comp.iter().flat_map(|&c| adj[c].iter().copied().filter(|&y| on[y])).collect();
            att.sort_unstable();
            att.dedup();
            let path = fragment_path(&adj, &on, &comp, &att);
            fragments.push((att, path));
        }

        let fits = |att: &[usize]| -> Vec<usize> {
            (0..faces.len()).filter(|&f| att.iter().all(|a| faces[f].contains(a))).collect()
        };
        let mut choice = None;
        for (att, path) in &fragments {
            let ok = fits(att);
            match ok.len() {
                0 => return false,
                1 => {
                    choice = Some((ok[0], path.clone()));
                    break;
                }
                _ => {
                    if choice.is_none() {
                        choice = Some((ok[0], path.clone()));
                    }
                }
            }
        }
        let (f, path) = choice.expect("an unembedded edge remains");
        let face = faces.swap_remove(f);
        let (a, b) = (path[0], path[path.len() - 1]);
        let i = face.iter().position(|&x| x == a).expect("attachment on face");
        let j = face.iter().position(|&x| x == b).expect("attachment on face");
        let inner = &path[1..path.len() - 1];
        let arc = |from: usize, to: usize| {
            let mut out = Vec::new();
            let mut k = from;
            loop {
                out.push(face[k]);
                if k == to {
                    break;
                }
                k = (k + 1) % face.len();
            }
            out
        };
        let mut f1 = arc(i, j);
        f1.extend(inner.iter().rev());
        let mut f2 = arc(j, i);
        f2.extend(inner.iter());
        faces.push(f1);
        faces.push(f2);
        for w in path.windows(2) {
            done.insert(key(w[0], w[1]));
        }
        for &x in &path {
            on[x] = true;
        }
    }
    true
}

/// A path through the fragment `comp` joining two distinct attachments.
fn fragment_path(adj: &[Vec<usize>], on: &[bool], comp: &[usize], att: &[usize]) -> Vec<usize> {
    let a = att[0];
    let start = *comp.iter().find(|&&c| adj[c].contains(&a)).expect("fragment touches its attachment");
    let mut prev = vec![usize::MAX; adj.len()];
    prev[start] = start;
    let mut queue = VecDeque::from([start]);
    while let Some(x) = queue.pop_front() {
        if let Some(&b) = adj[x].iter().find(|&&y| on[y] && y != a) {
            let mut inner = vec![x];
            let mut y = x;
            while y != start {
                y = prev[y];
                inner.push(y);
            }
            inner.reverse();
            let mut path = vec![a];
            path.extend(inner);
            path.push(b);
            return path;
        }
        for &y in &adj[x] {
            if !on[y] && prev[y] == usize::MAX {
                prev[y] = x;
                queue.push_back(y);
            }
        }
    }
    unreachable!("a fragment of a biconnected graph has two attachments")
}
