//! Interaction graphs: chains, d-dimensional cubic lattices, brick-wall
//! honeycomb and triangular patches, complete graphs, and sublattice
//! 2-coloring.
//!
//! Site indexing is row-major in every generator so that downstream output
//! (CSV rows, spectra) is reproducible bit for bit.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum LatticeError {
    #[error("lattice needs at least {need} sites along each direction, got {got}")]
    TooSmall { need: usize, got: usize },
    #[error("cubic dimension must be positive")]
    ZeroDimension,
    #[error("periodic cubic lattice needs an even side (bipartite wrap), got {side}")]
    OddPeriodicSide { side: usize },
    #[error("graph is not bipartite; odd cycle: {cycle:?}")]
    NotBipartite { cycle: Vec<usize> },
    #[error("invalid edge ({a}, {b}) for {n} sites")]
    BadEdge { a: usize, b: usize, n: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sublattice {
    A,
    B,
}

/// Which generator produced a graph.  The field-term convention in module
/// `models` depends on whether the lattice is a periodic cubic one, so the
/// provenance has to travel with the edge list.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LatticeKind {
    Chain {
        periodic: bool,
    },
    Cubic {
        d: usize,
        side: usize,
        periodic: bool,
    },
    Hexagonal {
        rows: usize,
        cols: usize,
    },
    Triangular {
        rows: usize,
        cols: usize,
    },
    Complete,
    Custom,
}

#[derive(Debug, Clone)]
pub struct InteractionGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
    coloring: Option<Vec<Sublattice>>,
    kind: LatticeKind,
}

impl InteractionGraph {
    /// Builds a graph from an explicit edge list, validating endpoints,
    /// rejecting self-loops and duplicate unordered pairs.
    pub fn custom(n: usize, edges: &[(usize, usize)]) -> Result<Self, LatticeError> {
        if n < 1 {
            return Err(LatticeError::TooSmall { need: 1, got: n });
        }
        let mut g = InteractionGraph {
            n,
            edges: Vec::with_capacity(edges.len()),
            coloring: None,
            kind: LatticeKind::Custom,
        };
        for &(a, b) in edges {
            g.push_edge(a, b)?;
        }
        Ok(g)
    }

    fn push_edge(&mut self, a: usize, b: usize) -> Result<(), LatticeError> {
        if a == b || a >= self.n || b >= self.n {
            return Err(LatticeError::BadEdge { a, b, n: self.n });
        }
        let e = (a.min(b), a.max(b));
        if self.edges.contains(&e) {
            return Err(LatticeError::BadEdge { a, b, n: self.n });
        }
        self.edges.push(e);
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn kind(&self) -> LatticeKind {
        self.kind
    }

    pub fn coloring(&self) -> Option<&[Sublattice]> {
        self.coloring.as_deref()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0usize; self.n];
        for &(a, b) in &self.edges {
            deg[a] += 1;
            deg[b] += 1;
        }
        deg
    }

    /// Neighbor lists, each sorted ascending.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        adj
    }

    /// Multiplier applied to the magnetic field term B*sum(sigma_z).
    ///
    /// On a periodic cubic lattice the field enters the Hamiltonian once per
    /// lattice direction, giving an effective field d*B; everywhere else the
    /// field term is taken verbatim (multiplicity 1).  See module `models`
    /// for why the bounds require this convention.
    pub fn field_multiplicity(&self) -> f64 {
        match self.kind {
            LatticeKind::Cubic {
                d, periodic: true, ..
            } => d as f64,
            _ => 1.0,
        }
    }

    /// Breadth-first proper 2-coloring, deterministic: components are visited
    /// in ascending order of their lowest site index, which gets color A.
    /// On success the coloring is stored on the graph and returned; on an odd
    /// cycle the cycle itself is returned as the witness.
    pub fn two_color(&mut self) -> Result<Vec<Sublattice>, LatticeError> {
        let adj = self.adjacency();
        let mut color: Vec<Option<Sublattice>> = vec![None; self.n];
        let mut parent: Vec<usize> = (0..self.n).collect();
        for root in 0..self.n {
            if color[root].is_some() {
                continue;
            }
            color[root] = Some(Sublattice::A);
            parent[root] = root;
            let mut queue = std::collections::VecDeque::from([root]);
            while let Some(u) = queue.pop_front() {
                let cu = color[u].unwrap();
                let flip = match cu {
                    Sublattice::A => Sublattice::B,
                    Sublattice::B => Sublattice::A,
                };
                for &v in &adj[u] {
                    match color[v] {
                        None => {
                            color[v] = Some(flip);
                            parent[v] = u;
                            queue.push_back(v);
                        }
                        Some(cv) if cv == cu => {
                            return Err(LatticeError::NotBipartite {
                                cycle: odd_cycle(&parent, u, v),
                            });
                        }
                        Some(_) => {}
                    }
                }
            }
        }
        let out: Vec<Sublattice> = color.into_iter().map(Option::unwrap).collect();
        self.coloring = Some(out.clone());
        Ok(out)
    }
}

/// Reconstructs the odd cycle closed by tree paths from u and v to their
/// lowest common ancestor plus the conflicting edge (u, v).
fn odd_cycle(parent: &[usize], u: usize, v: usize) -> Vec<usize> {
    let path_to_root = |mut x: usize| {
        let mut p = vec![x];
        while parent[x] != x {
            x = parent[x];
            p.push(x);
        }
        p
    };
    let pu = path_to_root(u);
    let pv = path_to_root(v);
    // strip the common tail (shared ancestors), keep the LCA once
    let mut iu = pu.len();
    let mut iv = pv.len();
    while iu > 0 && iv > 0 && pu[iu - 1] == pv[iv - 1] {
        iu -= 1;
        iv -= 1;
    }
    let mut cycle: Vec<usize> = pu[..=iu.min(pu.len() - 1)].to_vec();
    for &x in pv[..iv].iter().rev() {
        cycle.push(x);
    }
    cycle
}

/// Linear chain; `periodic` closes the ring.  The ring on two sites would
/// duplicate its single bond, so that case collapses to one edge.
pub fn chain(n: usize, periodic: bool) -> Result<InteractionGraph, LatticeError> {
    if n < 2 {
        return Err(LatticeError::TooSmall { need: 2, got: n });
    }
    let mut g = InteractionGraph {
        n,
        edges: Vec::with_capacity(n),
        coloring: None,
        kind: LatticeKind::Chain { periodic },
    };
    for k in 0..n - 1 {
        g.push_edge(k, k + 1).expect("chain edges are valid");
    }
    if periodic && n > 2 {
        g.push_edge(n - 1, 0).expect("wrap edge is valid");
    }
    Ok(g)
}

/// d-dimensional cubic lattice with `side` sites per direction, row-major
/// site order (the first coordinate varies slowest).  Periodic wrap requires
/// an even side so the graph stays bipartite; side 2 keeps its open edges
/// only (each wrap bond would duplicate an existing one, and duplicates are
/// collapsed), so the d*n periodic edge count holds for side >= 4.
pub fn cubic(d: usize, side: usize, periodic: bool) -> Result<InteractionGraph, LatticeError> {
    if d == 0 {
        return Err(LatticeError::ZeroDimension);
    }
    if side < 2 {
        return Err(LatticeError::TooSmall { need: 2, got: side });
    }
    if periodic && side % 2 == 1 {
        return Err(LatticeError::OddPeriodicSide { side });
    }
    let n = side.pow(d as u32);
    let mut g = InteractionGraph {
        n,
        edges: Vec::new(),
        coloring: None,
        kind: LatticeKind::Cubic { d, side, periodic },
    };
    let mut coord = vec![0usize; d];
    for site in 0..n {
        // decode row-major coordinates
        let mut rem = site;
        for a in (0..d).rev() {
            coord[a] = rem % side;
            rem /= side;
        }
        let stride = |a: usize| side.pow((d - 1 - a) as u32);
        for (a, &ca) in coord.iter().enumerate() {
            if ca + 1 < side {
                g.push_edge(site, site + stride(a))
                    .expect("grid edge is valid");
            } else if periodic && side > 2 {
                g.push_edge(site, site - (side - 1) * stride(a))
                    .expect("wrap edge is valid");
            }
        }
    }
    Ok(g)
}

/// Brick-wall honeycomb patch, open boundaries: `rows` rows of 2*`cols`
/// sites, full horizontal bonds, and vertical bonds on alternating columns
/// (present where row + column is even).  Always bipartite.
/// Edge count: rows*(2*cols - 1) horizontal + (rows - 1)*cols vertical.
pub fn hexagonal(rows: usize, cols: usize) -> Result<InteractionGraph, LatticeError> {
    if rows < 2 {
        return Err(LatticeError::TooSmall { need: 2, got: rows });
    }
    if cols < 2 {
        return Err(LatticeError::TooSmall { need: 2, got: cols });
    }
    let width = 2 * cols;
    let n = rows * width;
    let mut g = InteractionGraph {
        n,
        edges: Vec::new(),
        coloring: None,
        kind: LatticeKind::Hexagonal { rows, cols },
    };
    for r in 0..rows {
        for c in 0..width {
            let site = r * width + c;
            if c + 1 < width {
                g.push_edge(site, site + 1)
                    .expect("horizontal edge is valid");
            }
            if r + 1 < rows && (r + c) % 2 == 0 {
                g.push_edge(site, site + width)
                    .expect("vertical edge is valid");
            }
        }
    }
    Ok(g)
}

/// Triangular patch, open boundaries: square grid plus the down-right
/// diagonal in every unit cell, which tiles the plane with triangles.
/// Edge count: rows*(cols-1) + (rows-1)*cols + (rows-1)*(cols-1).
/// Contains 3-cycles, so it is not 2-colorable.
pub fn triangular(rows: usize, cols: usize) -> Result<InteractionGraph, LatticeError> {
    if rows < 2 {
        return Err(LatticeError::TooSmall { need: 2, got: rows });
    }
    if cols < 2 {
        return Err(LatticeError::TooSmall { need: 2, got: cols });
    }
    let n = rows * cols;
    let mut g = InteractionGraph {
        n,
        edges: Vec::new(),
        coloring: None,
        kind: LatticeKind::Triangular { rows, cols },
    };
    for r in 0..rows {
        for c in 0..cols {
            let site = r * cols + c;
            if c + 1 < cols {
                g.push_edge(site, site + 1).expect("row edge is valid");
            }
            if r + 1 < rows {
                g.push_edge(site, site + cols)
                    .expect("column edge is valid");
            }
            if r + 1 < rows && c + 1 < cols {
                g.push_edge(site, site + cols + 1)
                    .expect("diagonal edge is valid");
            }
        }
    }
    Ok(g)
}

/// Complete graph on n sites: all n(n-1)/2 pairs.
pub fn complete(n: usize) -> Result<InteractionGraph, LatticeError> {
    if n < 2 {
        return Err(LatticeError::TooSmall { need: 2, got: n });
    }
    let mut g = InteractionGraph {
        n,
        edges: Vec::with_capacity(n * (n - 1) / 2),
        coloring: None,
        kind: LatticeKind::Complete,
    };
    for i in 0..n {
        for j in (i + 1)..n {
            g.push_edge(i, j).expect("pair is valid");
        }
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_well_formed(g: &InteractionGraph) {
        for &(a, b) in g.edges() {
            assert!(a < b, "edges stored normalized");
            assert!(b < g.n(), "endpoint out of range");
        }
        // exhaustive duplicate scan
        for (i, e) in g.edges().iter().enumerate() {
            for f in &g.edges()[i + 1..] {
                assert_ne!(e, f, "duplicate edge");
            }
        }
        if let Some(coloring) = g.coloring() {
            for &(a, b) in g.edges() {
                assert_ne!(coloring[a], coloring[b], "improper coloring");
            }
        }
    }

    #[test]
    fn chain_periodic_four() {
        let g = chain(4, true).unwrap();
        assert_eq!(g.edges(), &[(0, 1), (1, 2), (2, 3), (0, 3)]);
        assert_well_formed(&g);
    }

    #[test]
    fn chain_open_three() {
        let g = chain(3, false).unwrap();
        assert_eq!(g.edges(), &[(0, 1), (1, 2)]);
    }

    #[test]
    fn chain_two_site_ring_collapses() {
        let g = chain(2, true).unwrap();
        assert_eq!(g.edges(), &[(0, 1)]);
    }

    #[test]
    fn chain_too_small() {
        assert!(matches!(
            chain(1, false),
            Err(LatticeError::TooSmall { .. })
        ));
    }

    #[test]
    fn cubic_2x2_open_plaquette() {
        let g = cubic(2, 2, false).unwrap();
        assert_eq!(g.n(), 4);
        assert_eq!(g.edge_count(), 4);
        assert_well_formed(&g);
    }

    #[test]
    fn cubic_dimension_one_matches_chain() {
        let g = cubic(1, 6, true).unwrap();
        let c = chain(6, true).unwrap();
        assert_eq!(g.edges(), c.edges());
    }

    #[test]
    fn cubic_2d_periodic_counts() {
        let g = cubic(2, 4, true).unwrap();
        assert_eq!(g.n(), 16);
        assert_eq!(g.edge_count(), 32); // d*n
        assert_well_formed(&g);
        for deg in g.degrees() {
            assert_eq!(deg, 4);
        }
    }

    #[test]
    fn cubic_open_edge_count_formula() {
        // d * side^(d-1) * (side-1)
        for (d, side) in [(1usize, 5usize), (2, 3), (3, 3), (2, 4)] {
            let g = cubic(d, side, false).unwrap();
            let want = d * side.pow((d - 1) as u32) * (side - 1);
            assert_eq!(g.edge_count(), want, "d={} side={}", d, side);
            assert_well_formed(&g);
        }
    }

    #[test]
    fn cubic_rejects_odd_periodic_side() {
        assert!(matches!(
            cubic(2, 3, true),
            Err(LatticeError::OddPeriodicSide { side: 3 })
        ));
    }

    #[test]
    fn cubic_side_two_periodic_collapses_to_open() {
        let open = cubic(3, 2, false).unwrap();
        let wrapped = cubic(3, 2, true).unwrap();
        assert_eq!(open.edges(), wrapped.edges());
    }

    #[test]
    fn hexagonal_counts_and_bipartiteness() {
        let mut g = hexagonal(2, 2).unwrap();
        assert_eq!(g.n(), 8);
        // 2 rows * 3 horizontal + 1 * 2 vertical
        assert_eq!(g.edge_count(), 8);
        g.two_color().unwrap();
        assert_well_formed(&g);
    }

    #[test]
    fn hexagonal_larger_patch_is_bipartite() {
        let mut g = hexagonal(3, 4).unwrap();
        assert_eq!(g.edge_count(), 3 * 7 + 2 * 4);
        g.two_color().unwrap();
        assert_well_formed(&g);
    }

    #[test]
    fn triangular_has_odd_cycle() {
        let mut g = triangular(2, 2).unwrap();
        assert_eq!(g.edge_count(), 2 + 2 + 1);
        let err = g.two_color().unwrap_err();
        match err {
            LatticeError::NotBipartite { cycle } => {
                assert!(cycle.len() % 2 == 1, "cycle length {} not odd", cycle.len());
                assert!(cycle.len() >= 3);
                // verify it is a real cycle in the graph
                let edges: std::collections::HashSet<(usize, usize)> =
                    g.edges().iter().copied().collect();
                for w in 0..cycle.len() {
                    let a = cycle[w];
                    let b = cycle[(w + 1) % cycle.len()];
                    assert!(
                        edges.contains(&(a.min(b), a.max(b))),
                        "({}, {}) is not an edge",
                        a,
                        b
                    );
                }
            }
            other => panic!("expected NotBipartite, got {:?}", other),
        }
    }

    #[test]
    fn triangular_edge_count_by_enumeration() {
        // independent count: scan all pairs and test adjacency predicates
        let (rows, cols) = (3usize, 4usize);
        let g = triangular(rows, cols).unwrap();
        let mut count = 0;
        for a in 0..rows * cols {
            for b in (a + 1)..rows * cols {
                let (ra, ca) = (a / cols, a % cols);
                let (rb, cb) = (b / cols, b % cols);
                let right = ra == rb && cb == ca + 1;
                let down = ca == cb && rb == ra + 1;
                let diag = rb == ra + 1 && cb == ca + 1;
                if right || down || diag {
                    count += 1;
                }
            }
        }
        assert_eq!(g.edge_count(), count);
    }

    #[test]
    fn complete_graph_counts() {
        assert_eq!(complete(3).unwrap().edge_count(), 3);
        assert_eq!(complete(2).unwrap().edge_count(), 1);
        assert_eq!(complete(6).unwrap().edge_count(), 15);
    }

    #[test]
    fn two_color_alternates_on_even_ring() {
        let mut g = chain(4, true).unwrap();
        let coloring = g.two_color().unwrap();
        assert_eq!(
            coloring,
            vec![Sublattice::A, Sublattice::B, Sublattice::A, Sublattice::B]
        );
    }

    #[test]
    fn two_color_rejects_odd_ring() {
        let mut g = chain(5, true).unwrap();
        match g.two_color().unwrap_err() {
            LatticeError::NotBipartite { cycle } => assert_eq!(cycle.len() % 2, 1),
            other => panic!("unexpected {:?}", other),
        }
    }

    #[test]
    fn odd_rings_by_parity() {
        for n in 3..9usize {
            let mut g = chain(n, true).unwrap();
            let res = g.two_color();
            if n % 2 == 0 {
                assert!(res.is_ok(), "even ring {} should 2-color", n);
            } else {
                assert!(res.is_err(), "odd ring {} should fail", n);
            }
        }
    }

    #[test]
    fn two_color_checkerboard_on_square_lattice() {
        let mut g = cubic(2, 4, true).unwrap();
        let coloring = g.two_color().unwrap();
        for (site, &got) in coloring.iter().enumerate() {
            let (r, c) = (site / 4, site % 4);
            let want = if (r + c) % 2 == 0 {
                Sublattice::A
            } else {
                Sublattice::B
            };
            assert_eq!(got, want, "site {}", site);
        }
    }

    #[test]
    fn field_multiplicity_follows_kind() {
        assert_eq!(chain(6, true).unwrap().field_multiplicity(), 1.0);
        assert_eq!(chain(6, false).unwrap().field_multiplicity(), 1.0);
        assert_eq!(cubic(2, 4, true).unwrap().field_multiplicity(), 2.0);
        assert_eq!(cubic(3, 4, true).unwrap().field_multiplicity(), 3.0);
        assert_eq!(cubic(2, 4, false).unwrap().field_multiplicity(), 1.0);
        assert_eq!(hexagonal(2, 2).unwrap().field_multiplicity(), 1.0);
    }

    #[test]
    fn custom_rejects_bad_edges() {
        assert!(InteractionGraph::custom(3, &[(0, 0)]).is_err());
        assert!(InteractionGraph::custom(3, &[(0, 3)]).is_err());
        assert!(InteractionGraph::custom(3, &[(0, 1), (1, 0)]).is_err());
        assert!(InteractionGraph::custom(3, &[(0, 1), (1, 2)]).is_ok());
    }

    #[test]
    fn generators_produce_well_formed_graphs() {
        for n in 2..8 {
            assert_well_formed(&chain(n, false).unwrap());
            assert_well_formed(&chain(n, true).unwrap());
            assert_well_formed(&complete(n).unwrap());
        }
        for side in [2, 4, 6] {
            for d in 1..4 {
                assert_well_formed(&cubic(d, side, true).unwrap());
                assert_well_formed(&cubic(d, side, false).unwrap());
            }
        }
        for r in 2..4 {
            for c in 2..4 {
                assert_well_formed(&hexagonal(r, c).unwrap());
                assert_well_formed(&triangular(r, c).unwrap());
            }
        }
    }
}
